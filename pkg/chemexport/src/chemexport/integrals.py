"""McMurchie-Davidson one- and two-electron integrals over contracted
Cartesian Gaussians (s and p shells are all the minimal basis needs, but the
recursions are general)."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gamma, gammainc

from .basis import BasisFunction, Molecule


def _hermite_coefficients(l1: int, l2: int, a: float, b: float, ab: float) -> np.ndarray:
    """E_t^{ij} for one Cartesian direction; ab = A_x - B_x."""
    p = a + b
    mu = a * b / p
    e = np.zeros((l1 + 1, l2 + 1, l1 + l2 + 1))
    e[0, 0, 0] = math.exp(-mu * ab * ab)
    for i in range(l1 + 1):
        for j in range(l2 + 1):
            if i == 0 and j == 0:
                continue
            for t in range(i + j + 1):
                if j == 0:
                    # decrement i
                    val = 0.0
                    if t - 1 >= 0:
                        val += e[i - 1, j, t - 1] / (2 * p)
                    val += -(b / p) * ab * e[i - 1, j, t]
                    if t + 1 <= i + j - 1:
                        val += (t + 1) * e[i - 1, j, t + 1]
                    e[i, j, t] = val
                else:
                    val = 0.0
                    if t - 1 >= 0:
                        val += e[i, j - 1, t - 1] / (2 * p)
                    val += (a / p) * ab * e[i, j - 1, t]
                    if t + 1 <= i + j - 1:
                        val += (t + 1) * e[i, j - 1, t + 1]
                    e[i, j, t] = val
    return e


def _boys(n_max: int, x: float) -> np.ndarray:
    """F_0..F_n(x) by stable downward recursion."""
    out = np.empty(n_max + 1)
    if x < 1e-13:
        for n in range(n_max + 1):
            out[n] = 1.0 / (2 * n + 1)
        return out
    a = n_max + 0.5
    out[n_max] = 0.5 * gamma(a) * gammainc(a, x) * x**-a
    ex = math.exp(-x)
    for n in range(n_max - 1, -1, -1):
        out[n] = (2 * x * out[n + 1] + ex) / (2 * n + 1)
    return out


def _hermite_coulomb(t_max: int, u_max: int, v_max: int, p: float,
                     pc: np.ndarray) -> np.ndarray:
    """R_{tuv} tensor for the Coulomb kernel at composite exponent p."""
    n_max = t_max + u_max + v_max
    boys = _boys(n_max, p * float(pc @ pc))
    r = np.zeros((n_max + 1, t_max + 1, u_max + 1, v_max + 1))
    for n in range(n_max + 1):
        r[n, 0, 0, 0] = (-2.0 * p) ** n * boys[n]
    for total in range(1, n_max + 1):
        for t in range(min(total, t_max) + 1):
            for u in range(min(total - t, u_max) + 1):
                v = total - t - u
                if v < 0 or v > v_max:
                    continue
                for n in range(n_max - total + 1):
                    if t > 0:
                        val = pc[0] * r[n + 1, t - 1, u, v]
                        if t > 1:
                            val += (t - 1) * r[n + 1, t - 2, u, v]
                    elif u > 0:
                        val = pc[1] * r[n + 1, t, u - 1, v]
                        if u > 1:
                            val += (u - 1) * r[n + 1, t, u - 2, v]
                    else:
                        val = pc[2] * r[n + 1, t, u, v - 1]
                        if v > 1:
                            val += (v - 1) * r[n + 1, t, u, v - 2]
                    r[n, t, u, v] = val
    return r[0]


def _prim_overlap(a: float, la, ra, b: float, lb, rb) -> float:
    p = a + b
    s = (math.pi / p) ** 1.5
    for axis in range(3):
        e = _hermite_coefficients(la[axis], lb[axis], a, b, ra[axis] - rb[axis])
        s *= e[la[axis], lb[axis], 0]
    return s


def _prim_kinetic(a: float, la, ra, b: float, lb, rb) -> float:
    """-1/2 Laplacian via shifted-overlap relations applied per direction."""

    def s1d(axis: int, shift: int) -> float:
        l2 = lb[axis] + shift
        if l2 < 0:
            return 0.0
        e = _hermite_coefficients(la[axis], l2, a, b, ra[axis] - rb[axis])
        return e[la[axis], l2, 0]

    p = a + b
    pref = (math.pi / p) ** 1.5
    total = 0.0
    for axis in range(3):
        j = lb[axis]
        term = -2.0 * b * b * s1d(axis, 2) + b * (2 * j + 1) * s1d(axis, 0)
        if j >= 2:
            term += -0.5 * j * (j - 1) * s1d(axis, -2)
        for other in range(3):
            if other != axis:
                term *= s1d(other, 0)
        total += term
    return pref * total


def _prim_nuclear(a: float, la, ra, b: float, lb, rb, rc) -> float:
    p = a + b
    center = (a * np.asarray(ra) + b * np.asarray(rb)) / p
    es = [
        _hermite_coefficients(la[axis], lb[axis], a, b, ra[axis] - rb[axis])
        for axis in range(3)
    ]
    t_max, u_max, v_max = (la[axis] + lb[axis] for axis in range(3))
    r = _hermite_coulomb(t_max, u_max, v_max, p, center - np.asarray(rc))
    val = 0.0
    for t in range(t_max + 1):
        for u in range(u_max + 1):
            for v in range(v_max + 1):
                val += (es[0][la[0], lb[0], t] * es[1][la[1], lb[1], u]
                        * es[2][la[2], lb[2], v] * r[t, u, v])
    return 2.0 * math.pi / p * val


def overlap_contracted(f1: BasisFunction, f2: BasisFunction) -> float:
    return sum(
        c1 * c2 * _prim_overlap(a1, f1.angular, f1.center, a2, f2.angular, f2.center)
        for a1, c1 in zip(f1.exponents, f1.coefficients)
        for a2, c2 in zip(f2.exponents, f2.coefficients)
    )


def kinetic_contracted(f1: BasisFunction, f2: BasisFunction) -> float:
    return sum(
        c1 * c2 * _prim_kinetic(a1, f1.angular, f1.center, a2, f2.angular, f2.center)
        for a1, c1 in zip(f1.exponents, f1.coefficients)
        for a2, c2 in zip(f2.exponents, f2.coefficients)
    )


def nuclear_contracted(f1: BasisFunction, f2: BasisFunction, mol: Molecule) -> float:
    from .basis import ATOMIC_NUMBER

    total = 0.0
    for symbol, rc in zip(mol.symbols, mol.coords):
        z = ATOMIC_NUMBER[symbol]
        total -= z * sum(
            c1 * c2 * _prim_nuclear(a1, f1.angular, f1.center, a2, f2.angular,
                                    f2.center, rc)
            for a1, c1 in zip(f1.exponents, f1.coefficients)
            for a2, c2 in zip(f2.exponents, f2.coefficients)
        )
    return total


def _prim_eri(a, la, ra, b, lb, rb, c, lc, rc, d, ld, rd) -> float:
    p = a + b
    q = c + d
    alpha = p * q / (p + q)
    rp = (a * np.asarray(ra) + b * np.asarray(rb)) / p
    rq = (c * np.asarray(rc) + d * np.asarray(rd)) / q
    e_bra = [
        _hermite_coefficients(la[axis], lb[axis], a, b, ra[axis] - rb[axis])
        for axis in range(3)
    ]
    e_ket = [
        _hermite_coefficients(lc[axis], ld[axis], c, d, rc[axis] - rd[axis])
        for axis in range(3)
    ]
    tb = [la[axis] + lb[axis] for axis in range(3)]
    tk = [lc[axis] + ld[axis] for axis in range(3)]
    r = _hermite_coulomb(tb[0] + tk[0], tb[1] + tk[1], tb[2] + tk[2], alpha, rp - rq)
    val = 0.0
    for t in range(tb[0] + 1):
        for u in range(tb[1] + 1):
            for v in range(tb[2] + 1):
                eb = (e_bra[0][la[0], lb[0], t] * e_bra[1][la[1], lb[1], u]
                      * e_bra[2][la[2], lb[2], v])
                if eb == 0.0:
                    continue
                for tt in range(tk[0] + 1):
                    for uu in range(tk[1] + 1):
                        for vv in range(tk[2] + 1):
                            ek = (e_ket[0][lc[0], ld[0], tt]
                                  * e_ket[1][lc[1], ld[1], uu]
                                  * e_ket[2][lc[2], ld[2], vv])
                            if ek == 0.0:
                                continue
                            sign = -1.0 if (tt + uu + vv) % 2 else 1.0
                            val += eb * ek * sign * r[t + tt, u + uu, v + vv]
    return val * 2.0 * math.pi**2.5 / (p * q * math.sqrt(p + q))


def eri_contracted(f1, f2, f3, f4) -> float:
    """(f1 f2 | f3 f4) in chemists' notation."""
    val = 0.0
    for a1, c1 in zip(f1.exponents, f1.coefficients):
        for a2, c2 in zip(f2.exponents, f2.coefficients):
            for a3, c3 in zip(f3.exponents, f3.coefficients):
                for a4, c4 in zip(f4.exponents, f4.coefficients):
                    val += c1 * c2 * c3 * c4 * _prim_eri(
                        a1, f1.angular, f1.center, a2, f2.angular, f2.center,
                        a3, f3.angular, f3.center, a4, f4.angular, f4.center,
                    )
    return val


def dipole_contracted(f1: BasisFunction, f2: BasisFunction, axis: int) -> float:
    """<f1| x_axis |f2> for orbital localization."""
    total = 0.0
    for a1, c1 in zip(f1.exponents, f1.coefficients):
        for a2, c2 in zip(f2.exponents, f2.coefficients):
            p = a1 + a2
            center = (a1 * np.asarray(f1.center) + a2 * np.asarray(f2.center)) / p
            pref = (math.pi / p) ** 1.5
            parts = []
            for ax in range(3):
                e = _hermite_coefficients(f1.angular[ax], f2.angular[ax], a1, a2,
                                          f1.center[ax] - f2.center[ax])
                if ax == axis:
                    # x = (x - P_x) + P_x: E_1 picks up the Hermite moment
                    val = e[f1.angular[ax], f2.angular[ax], 1] if (
                        f1.angular[ax] + f2.angular[ax] >= 1
                    ) else 0.0
                    val += center[ax] * e[f1.angular[ax], f2.angular[ax], 0]
                else:
                    val = e[f1.angular[ax], f2.angular[ax], 0]
                parts.append(val)
            total += c1 * c2 * pref * parts[0] * parts[1] * parts[2]
    return total


# molecule-level assembly ----------------------------------------------------


def integral_tables(mol: Molecule):
    """(S, T, V, ERI) over the molecule's contracted basis."""
    funcs = mol.basis_functions()
    n = len(funcs)
    s = np.zeros((n, n))
    t = np.zeros((n, n))
    v = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            s[i, j] = s[j, i] = overlap_contracted(funcs[i], funcs[j])
            t[i, j] = t[j, i] = kinetic_contracted(funcs[i], funcs[j])
            v[i, j] = v[j, i] = nuclear_contracted(funcs[i], funcs[j], mol)
    eri = np.zeros((n, n, n, n))
    # 8-fold permutational symmetry of real orbitals
    for i in range(n):
        for j in range(i + 1):
            for k in range(i + 1):
                l_top = j if k == i else k
                for l in range(l_top + 1):
                    val = eri_contracted(funcs[i], funcs[j], funcs[k], funcs[l])
                    for a, b in ((i, j), (j, i)):
                        for c, d in ((k, l), (l, k)):
                            eri[a, b, c, d] = val
                            eri[c, d, a, b] = val
    return s, t, v, eri


def dipole_tables(mol: Molecule) -> np.ndarray:
    funcs = mol.basis_functions()
    n = len(funcs)
    out = np.zeros((3, n, n))
    for axis in range(3):
        for i in range(n):
            for j in range(i, n):
                out[axis, i, j] = out[axis, j, i] = dipole_contracted(
                    funcs[i], funcs[j], axis
                )
    return out
