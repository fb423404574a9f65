"""Pure-numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def landen_sncndn(t, chain):
    """Rescaled sn, cn, dn at already-reduced arguments ``t``.

    ``chain`` holds the descending Landen moduli k_1 > k_2 > ... > k_N with
    k_N small enough that sin/cos are exact at double precision.  The base
    argument of the last level is ``t`` itself, which is what makes the
    functions rescaled (period 2*pi in ``t``).
    """
    t = np.asarray(t, dtype=float)
    sn = np.sin(t)
    cn = np.cos(t)
    dn = np.ones_like(t)
    for k in chain[::-1]:
        s2 = k * sn * sn
        den = 1.0 + s2
        sn, cn, dn = (1.0 + k) * sn / den, cn * dn / den, (1.0 - s2) / den
    return sn, cn, dn


def ising_enumerate(coupling, boundary, gauge_fix=True, block_bits=14):
    """Exact Ising sums over all spin configurations.

    Parameters
    ----------
    coupling : (V, V) symmetric array of couplings (zero = no edge).
    boundary : int array of vertex indices whose pair correlations are needed.

    Returns
    -------
    (log_sum, corr) where ``log_sum`` is the log of the Boltzmann weight
    summed over the enumerated configurations (half of them when
    ``gauge_fix``) and corr[a, b] = <s_boundary[a] s_boundary[b]>.
    """
    coupling = np.asarray(coupling, dtype=float)
    boundary = np.asarray(boundary, dtype=np.int64)
    nv = coupling.shape[0]
    iu, ju = np.nonzero(np.triu(coupling, 1))
    jv = coupling[iu, ju]
    shift = np.abs(jv).sum()
    free = nv - 1 if gauge_fix else nv
    total = 1 << free
    block = min(total, 1 << block_bits)
    z = 0.0
    acc = np.zeros((len(boundary), len(boundary)))
    bits = np.arange(free, dtype=np.int64)
    for start in range(0, total, block):
        idx = np.arange(start, start + block, dtype=np.int64)
        free_spins = 1 - 2 * ((idx[:, None] >> bits) & 1)
        if gauge_fix:
            spins = np.empty((block, nv), dtype=np.int64)
            spins[:, 0] = 1
            spins[:, 1:] = free_spins
        else:
            spins = free_spins
        energy = (spins[:, iu] * spins[:, ju]) @ jv
        w = np.exp(energy - shift)
        z += w.sum()
        sb = spins[:, boundary].astype(float)
        acc += (sb * w[:, None]).T @ sb
    return np.log(z) + shift, acc / z
