"""Spin-orbital CCSD for the classical reference energies stored in fixture
metadata.  Standard amplitude equations over antisymmetrized integrals;
fine for the handful of active orbitals the fixtures use."""

from __future__ import annotations

import numpy as np


class CcsdError(RuntimeError):
    pass


def _spin_orbital_integrals(h: np.ndarray, g: np.ndarray):
    """Interleaved spin orbitals; returns (h_so, <pq||rs>) with physicists'
    antisymmetrized two-electron integrals."""
    n = h.shape[0]
    m = 2 * n
    h_so = np.zeros((m, m))
    for p in range(m):
        for q in range(m):
            if p % 2 == q % 2:
                h_so[p, q] = h[p // 2, q // 2]
    # physicists' <pq|rs> = chemists' (pr|qs), with spin delta functions
    g_phys = np.zeros((m, m, m, m))
    for p in range(m):
        for q in range(m):
            for r in range(m):
                for s in range(m):
                    if p % 2 == r % 2 and q % 2 == s % 2:
                        g_phys[p, q, r, s] = g[p // 2, r // 2, q // 2, s // 2]
    return h_so, g_phys - g_phys.transpose(0, 1, 3, 2)


def ccsd_energy(
    h: np.ndarray,
    g: np.ndarray,
    n_electrons: int,
    e_const: float,
    max_cycles: int = 200,
    conv_tol: float = 1e-9,
) -> float:
    """Total CCSD energy for the active-space integrals (chemists' g)."""
    h_so, asym = _spin_orbital_integrals(h, g)
    m = h_so.shape[0]
    occ = list(range(n_electrons))
    virt = list(range(n_electrons, m))
    no, nv = len(occ), len(virt)
    if nv == 0:
        return e_const + sum(h_so[i, i] for i in occ) + 0.5 * sum(
            asym[i, j, i, j] for i in occ for j in occ
        )

    # fock_pq = h_pq + sum_i <pi||qi>
    fock = h_so + np.einsum("piqi->pq", asym[np.ix_(range(m), occ, range(m), occ)])
    e_hf = e_const + sum(h_so[i, i] for i in occ) + 0.5 * sum(
        asym[i, j, i, j] for i in occ for j in occ
    )

    o = np.s_[:no]
    v = np.s_[no:]
    order = occ + virt
    f = fock[np.ix_(order, order)]
    w = asym[np.ix_(order, order, order, order)]

    eps = np.diag(f)
    d1 = eps[o, None] - eps[None, v]
    d2 = (eps[o, None, None, None] + eps[None, o, None, None]
          - eps[None, None, v, None] - eps[None, None, None, v])
    if np.min(np.abs(d1)) < 1e-8 or np.min(np.abs(d2)) < 1e-8:
        raise CcsdError("vanishing denominators (degenerate reference)")

    t1 = f[o, v] / d1
    t2 = w[o, o, v, v] / d2

    def energy(t1, t2):
        return (np.einsum("ia,ia->", f[o, v], t1)
                + 0.25 * np.einsum("ijab,ijab->", w[o, o, v, v], t2)
                + 0.5 * np.einsum("ijab,ia,jb->", w[o, o, v, v], t1, t1))

    e_old = energy(t1, t2)
    for _ in range(max_cycles):
        tau = t2 + np.einsum("ia,jb->ijab", t1, t1) - np.einsum("ib,ja->ijab", t1, t1)
        tau_t = t2 + 0.5 * (np.einsum("ia,jb->ijab", t1, t1)
                            - np.einsum("ib,ja->ijab", t1, t1))
        # intermediates (Stanton et al. spin-orbital CCSD)
        fae = (f[v, v] - np.diag(np.diag(f[v, v]))
               - 0.5 * np.einsum("me,ma->ae", f[o, v], t1)
               + np.einsum("mafe,mf->ae", w[o, v, v, v], t1)
               - 0.5 * np.einsum("mnef,mnaf->ae", w[o, o, v, v], tau_t))
        fmi = (f[o, o] - np.diag(np.diag(f[o, o]))
               + 0.5 * np.einsum("me,ie->mi", f[o, v], t1)
               + np.einsum("mnie,ne->mi", w[o, o, o, v], t1)
               + 0.5 * np.einsum("mnef,inef->mi", w[o, o, v, v], tau_t))
        fme = f[o, v] + np.einsum("mnef,nf->me", w[o, o, v, v], t1)
        wmnij = (w[o, o, o, o]
                 + np.einsum("mnie,je->mnij", w[o, o, o, v], t1)
                 - np.einsum("mnje,ie->mnij", w[o, o, o, v], t1)
                 + 0.25 * np.einsum("mnef,ijef->mnij", w[o, o, v, v], tau))
        wabef = (w[v, v, v, v]
                 - np.einsum("amef,mb->abef", w[v, o, v, v], t1)
                 + np.einsum("bmef,ma->abef", w[v, o, v, v], t1)
                 + 0.25 * np.einsum("mnef,mnab->abef", w[o, o, v, v], tau))
        wmbej = (w[o, v, v, o]
                 + np.einsum("mbef,jf->mbej", w[o, v, v, v], t1)
                 - np.einsum("mnej,nb->mbej", w[o, o, v, o], t1)
                 - np.einsum("mnef,jnfb->mbej", w[o, o, v, v],
                             0.5 * t2 + np.einsum("jf,nb->jnfb", t1, t1)))

        rhs1 = (f[o, v]
                + np.einsum("ie,ae->ia", t1, fae)
                - np.einsum("ma,mi->ia", t1, fmi)
                + np.einsum("imae,me->ia", t2, fme)
                - np.einsum("nf,naif->ia", t1, w[o, v, o, v])
                - 0.5 * np.einsum("imef,maef->ia", t2, w[o, v, v, v])
                - 0.5 * np.einsum("mnae,nmei->ia", t2, w[o, o, v, o]))
        new_t1 = rhs1 / d1

        p_ab = lambda x: x - x.transpose(0, 1, 3, 2)
        p_ij = lambda x: x - x.transpose(1, 0, 2, 3)
        rhs2 = w[o, o, v, v].copy()
        rhs2 += p_ab(np.einsum("ijae,be->ijab", t2,
                               fae - 0.5 * np.einsum("mb,me->be", t1, fme)))
        rhs2 -= p_ij(np.einsum("imab,mj->ijab", t2,
                               fmi + 0.5 * np.einsum("je,me->mj", t1, fme)))
        rhs2 += 0.5 * np.einsum("mnab,mnij->ijab", tau, wmnij)
        rhs2 += 0.5 * np.einsum("ijef,abef->ijab", tau, wabef)
        rhs2 += p_ij(p_ab(
            np.einsum("imae,mbej->ijab", t2, wmbej)
            - np.einsum("ie,ma,mbej->ijab", t1, t1, w[o, v, v, o])
        ))
        rhs2 += p_ij(np.einsum("ie,abej->ijab", t1, w[v, v, v, o]))
        rhs2 -= p_ab(np.einsum("ma,mbij->ijab", t1, w[o, v, o, o]))
        new_t2 = rhs2 / d2

        t1, t2 = new_t1, new_t2
        e_new = energy(t1, t2)
        if abs(e_new - e_old) < conv_tol:
            return float(e_hf + e_new)
        e_old = e_new
    raise CcsdError(f"CCSD did not converge in {max_cycles} cycles")
