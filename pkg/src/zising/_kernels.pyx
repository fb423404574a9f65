# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Landen evaluation of rescaled sn/cn/dn and Gray-code
enumeration of Ising configurations."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sin, cos, exp, log

cnp.import_array()


def landen_sncndn(t, chain):
    cdef cnp.ndarray[double, ndim=1] tt = np.ascontiguousarray(t, dtype=np.float64).ravel()
    cdef cnp.ndarray[double, ndim=1] kk = np.ascontiguousarray(chain, dtype=np.float64)
    cdef Py_ssize_t n = tt.shape[0], nk = kk.shape[0], i, level
    out_s = np.empty(n)
    out_c = np.empty(n)
    out_d = np.empty(n)
    cdef double[:] os = out_s
    cdef double[:] oc = out_c
    cdef double[:] od = out_d
    cdef double s, c, d, k, s2, den
    for i in range(n):
        s = sin(tt[i])
        c = cos(tt[i])
        d = 1.0
        for level in range(nk - 1, -1, -1):
            k = kk[level]
            s2 = k * s * s
            den = 1.0 + s2
            c = c * d / den
            d = (1.0 - s2) / den
            s = (1.0 + k) * s / den
        os[i] = s
        oc[i] = c
        od[i] = d
    shape = np.shape(t)
    return out_s.reshape(shape), out_c.reshape(shape), out_d.reshape(shape)


def ising_enumerate(coupling, boundary, bint gauge_fix=True):
    cdef cnp.ndarray[double, ndim=2] J = np.ascontiguousarray(coupling, dtype=np.float64)
    cdef cnp.ndarray[long, ndim=1] bnd = np.ascontiguousarray(boundary, dtype=np.int64)
    cdef Py_ssize_t nv = J.shape[0], nb = bnd.shape[0]
    cdef Py_ssize_t i, u, v, a, b, offset = 1 if gauge_fix else 0
    cdef Py_ssize_t free = nv - offset
    cdef unsigned long long total = 1ULL << free, g, gg
    cdef int bit
    cdef double shift = 0.0, energy = 0.0, z = 0.0, w
    cdef cnp.ndarray[double, ndim=1] h = np.zeros(nv)
    cdef cnp.ndarray[long, ndim=1] spin = np.ones(nv, dtype=np.int64)
    cdef cnp.ndarray[long, ndim=1] bpos = np.full(nv, -1, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] hist = np.zeros(1 << nb)
    cdef long pattern = 0
    for a in range(nb):
        bpos[bnd[a]] = a
    for u in range(nv):
        for v in range(nv):
            h[u] += J[u, v]
            if v > u:
                shift += abs(J[u, v])
                energy += J[u, v]
    w = exp(energy - shift)
    z += w
    hist[0] += w
    g = 1
    while g < total:
        gg = g
        bit = 0
        while (gg & 1ULL) == 0:
            gg >>= 1
            bit += 1
        v = bit + offset
        energy -= 2.0 * spin[v] * h[v]
        spin[v] = -spin[v]
        for u in range(nv):
            h[u] += 2.0 * J[u, v] * spin[v]
        if bpos[v] >= 0:
            pattern ^= (1 << bpos[v])
        w = exp(energy - shift)
        z += w
        hist[pattern] += w
        g += 1
    corr = np.zeros((nb, nb))
    cdef double[:, :] cv = corr
    cdef long p
    cdef double sa
    for p in range(1 << nb):
        if hist[p] == 0.0:
            continue
        for a in range(nb):
            for b in range(nb):
                sa = 1.0 if (((p >> a) & 1) == ((p >> b) & 1)) else -1.0
                cv[a, b] += sa * hist[p]
    return log(z) + shift, corr / z
