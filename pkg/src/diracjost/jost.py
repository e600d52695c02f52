"""Jost solution of the discrete Dirac system as exact per-site polynomials.

With the spectral map ``lambda(z) = -iz - (iz)^{-1} = -i(z - 1/z)`` the free
system is solved by ``e_n(z) = (z, -i)^T z^{2n}``.  For an eventually free
profile the solution matching ``e_n`` at infinity is a polynomial at every
site.  We write

    F_n(z) = z^{2n} * sum_{s>=1} a[n,s] z^s        (first component)
    G_n(z) = z^{2n} * sum_{s>=0} b[n,s] z^s        (second component)

and match the coefficient of ``z^{2n+s}`` in the two difference equations,
which yields the backward recursion (absent indices are zero)

    b[n,s]     = B_n^{-1} ( i a[n,s+1] - i a[n,s-1] - A_n b[n+1,s-2] - P_n a[n,s] )
    a[n-1,s+2] = A_{n-1}^{-1} ( i b[n,s+1] - i b[n,s-1] - B_n a[n,s] - Q_n b[n,s] )

seeded with the free values at sites N0+1 (for a) and N0+2 (for b) and run
from n = N0+1 down to 1.  Every equation of the system is consumed exactly
once, so the result satisfies the system identically; `recurrence_residual`
checks this by direct substitution and is the oracle for the whole module.

Derivative convention used everywhere: ``dlambda/dz = -i(1 + z^{-2})``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import matkit
from .errors import DomainError, IndexOutOfDomain
from .profiles import CoefficientProfile, coefficient_at

Z_ABS_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class JostSeries:
    """Per-site polynomial coefficients of the Jost solution.

    ``a[n, s]`` is the coefficient of ``z^(2n+s)`` in ``F_n`` for
    n = 0..N0+1, ``b[n, s]`` the coefficient of ``z^(2n+s)`` in ``G_n`` for
    n = 1..N0+2 (row 0 of ``b`` is unused).  ``S = 4*N0 + 4`` uniformly;
    the zero-pattern invariant polices the waste.
    """

    m: int
    N0: int
    S: int
    a: np.ndarray
    b: np.ndarray


def _shift(block: np.ndarray, k: int) -> np.ndarray:
    """shifted[s] = block[s+k], zero fill outside the stored range."""
    out = np.zeros_like(block)
    size = block.shape[0]
    if k >= 0:
        if k < size:
            out[: size - k] = block[k:]
    elif -k < size:
        out[-k:] = block[: size + k]
    return out


def compute_jost(p: CoefficientProfile) -> JostSeries:
    """Run the backward power-matching recursion for the given profile."""
    m, n0 = p.m, p.N0
    size = 4 * n0 + 4
    eye = matkit.identity(m)
    a = np.zeros((n0 + 2, size + 1, m, m), dtype=np.complex128)
    b = np.zeros((n0 + 3, size + 1, m, m), dtype=np.complex128)
    a[n0 + 1, 1] = eye
    b[n0 + 2, 0] = -1j * eye

    for n in range(n0 + 1, 0, -1):
        an = coefficient_at(p, "A", n)
        bn = coefficient_at(p, "B", n)
        pn = coefficient_at(p, "P", n)
        qn = coefficient_at(p, "Q", n)
        inv_b = matkit.mat_inverse(bn)
        inv_a_prev = matkit.mat_inverse(coefficient_at(p, "A", n - 1))

        rhs = (
            1j * _shift(a[n], 1)
            - 1j * _shift(a[n], -1)
            - np.matmul(an, _shift(b[n + 1], -2))
            - np.matmul(pn, a[n])
        )
        b[n] = np.matmul(inv_b, rhs)

        rhs = (
            1j * _shift(b[n], -1)
            - 1j * _shift(b[n], -3)
            - np.matmul(bn, _shift(a[n], -2))
            - np.matmul(qn, _shift(b[n], -2))
        )
        a[n - 1] = np.matmul(inv_a_prev, rhs)

    a.setflags(write=False)
    b.setflags(write=False)
    return JostSeries(m=m, N0=n0, S=size, a=a, b=b)


def _check_z(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise DomainError("z = 0 is outside the domain (spectral map singular)")
    if abs(z) > 1.0 + Z_ABS_SLACK:
        raise DomainError(f"|z| = {abs(z):.6g} > 1 is outside the domain")
    return z


def _poly_eval_stack(coeffs: np.ndarray, z: complex) -> np.ndarray:
    """Horner evaluation of sum_s coeffs[s] z^s for a stack of matrices."""
    acc = np.array(coeffs[-1])
    for s in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * z + coeffs[s]
    return acc


def eval_F(j: JostSeries, n: int, z: complex) -> np.ndarray:
    z = _check_z(z)
    if n < 0:
        raise IndexOutOfDomain("F_n undefined for n < 0")
    if n <= j.N0 + 1:
        return z ** (2 * n) * _poly_eval_stack(j.a[n], z)
    return z ** (2 * n + 1) * matkit.identity(j.m)


def eval_G(j: JostSeries, n: int, z: complex) -> np.ndarray:
    z = _check_z(z)
    if n < 1:
        raise IndexOutOfDomain("G_n undefined for n < 1")
    if n <= j.N0 + 2:
        return z ** (2 * n) * _poly_eval_stack(j.b[n], z)
    return -1j * z ** (2 * n) * matkit.identity(j.m)


def eval_jost(j: JostSeries, n: int, z: complex):
    """Evaluate (F_n, G_n) at z.  G is None at the boundary site n = 0."""
    f = eval_F(j, n, z)
    g = eval_G(j, n, z) if n >= 1 else None
    return f, g


def jost_function(j: JostSeries) -> np.ndarray:
    """Power-indexed coefficients of F_0(z), shape (S+1, m, m)."""
    return np.array(j.a[0])


def recurrence_residual(
    j: JostSeries, p: CoefficientProfile, z: complex, n_max: int
) -> float:
    """Direct-substitution defect of the stored solution.

    Max over n = 1..n_max of the Frobenius norms of
    ``A_n G_{n+1} + B_n G_n + P_n F_n - lambda F_n`` and
    ``A_{n-1} F_{n-1} + B_n F_n + Q_n G_n - lambda G_n``.
    """
    z = _check_z(z)
    lam = -1j * (z - 1.0 / z)
    worst = 0.0
    f_prev = eval_F(j, 0, z)
    f_cur = eval_F(j, 1, z)
    g_cur = eval_G(j, 1, z)
    for n in range(1, n_max + 1):
        g_next = eval_G(j, n + 1, z)
        an = coefficient_at(p, "A", n)
        bn = coefficient_at(p, "B", n)
        pn = coefficient_at(p, "P", n)
        qn = coefficient_at(p, "Q", n)
        a_prev = coefficient_at(p, "A", n - 1)
        d1 = an @ g_next + bn @ g_cur + pn @ f_cur - lam * f_cur
        d2 = a_prev @ f_prev + bn @ f_cur + qn @ g_cur - lam * g_cur
        worst = max(worst, matkit.fro_norm(d1), matkit.fro_norm(d2))
        f_prev, f_cur, g_cur = f_cur, eval_F(j, n + 1, z), g_next
    return worst


def closed_form_T(p: CoefficientProfile, n: int):
    """Diagnostic closed forms (T11, T12, T22) of the leading coefficients.

    Product convention: ``T22_n = (-A_n B_n)^{-1} (-A_{n+1} B_{n+1})^{-1}
    ... (-A_{N0} B_{N0})^{-1}`` (factors beyond N0 are I, so T_n -> I), and
    ``T11_n = -B_n T22_n``, ``T12_n = 0``.  Cross-checks: T11 against
    ``a[n,1]`` and T22 against ``i b[n,0]``.
    """
    if n < 1:
        raise IndexOutOfDomain("T_n diagnostics defined for n >= 1")
    m = p.m
    t22 = matkit.identity(m)
    for q in range(p.N0, n - 1, -1):
        aq = coefficient_at(p, "A", q)
        bq = coefficient_at(p, "B", q)
        t22 = matkit.mat_inverse(-aq @ bq) @ t22
    t11 = -coefficient_at(p, "B", n) @ t22
    return t11, matkit.zero(m), t22


def asymptotics_check(j: JostSeries, z: complex) -> np.ndarray:
    """Deviation of each site from the free solution, in free units.

    ``d_n = || (F_n, G_n) diag(z^{2n+1}, z^{2n})^{-1} - (I; -iI) ||`` for
    n = 0..N0+2 (the G part is absent at n = 0).  Computed from the stored
    coefficients so the free tail gives exact zeros.
    """
    z = _check_z(z)
    eye = matkit.identity(j.m)
    out = np.zeros(j.N0 + 3, dtype=np.float64)
    for n in range(j.N0 + 3):
        dev2 = 0.0
        if n <= j.N0 + 1:
            ca = np.array(j.a[n])
            ca[1] = ca[1] - eye
            # F_n z^{-(2n+1)} - I = sum_{s>=1} ca[s] z^(s-1); ca[0] is
            # structurally zero.
            acc = _poly_eval_stack(ca[1:], z)
            dev2 += matkit.fro_norm(acc) ** 2
        if 1 <= n <= j.N0 + 2:
            cb = np.array(j.b[n])
            cb[0] = cb[0] + 1j * eye
            acc = _poly_eval_stack(cb, z)
            dev2 += matkit.fro_norm(acc) ** 2
        out[n] = np.sqrt(dev2)
    return out


def zero_pattern_excess(j: JostSeries) -> float:
    """Largest norm of any coefficient beyond the support-implied bounds.

    For n <= N0 the stored blocks must vanish for s > 4(N0-n)+3 (in a)
    and s > 4(N0-n)+2 (in b).
    """
    worst = 0.0
    for n in range(j.N0 + 1):
        for s in range(4 * (j.N0 - n) + 4, j.S + 1):
            worst = max(worst, matkit.fro_norm(j.a[n, s]))
        for s in range(4 * (j.N0 - n) + 3, j.S + 1):
            worst = max(worst, matkit.fro_norm(j.b[n, s]))
    return worst


def free_tail_exact(j: JostSeries) -> bool:
    """True iff sites n >= N0+1 hold the free values bitwise."""
    eye = matkit.identity(j.m)
    expect_a = np.zeros_like(j.a[0])
    expect_a[1] = eye
    expect_b = np.zeros_like(j.b[0])
    expect_b[0] = -1j * eye
    ok = True
    for n in range(j.N0 + 1, j.N0 + 2):
        ok = ok and np.array_equal(j.a[n], expect_a)
    for n in range(j.N0 + 1, j.N0 + 3):
        ok = ok and np.array_equal(j.b[n], expect_b)
    return ok


def series_to_json(j: JostSeries) -> str:
    """JSON export: {m, N0, S, a, b} with [re, im] complex entries.

    Both coefficient tables are indexed literally as ``[n][s]``; row 0 of
    ``b`` corresponds to the undefined site and holds zeros.
    """
    doc = {
        "m": j.m,
        "N0": j.N0,
        "S": j.S,
        "a": [[matkit.matrix_to_pairs(j.a[n, s]) for s in range(j.S + 1)]
              for n in range(j.N0 + 2)],
        "b": [[matkit.matrix_to_pairs(j.b[n, s]) for s in range(j.S + 1)]
              for n in range(j.N0 + 3)],
    }
    return json.dumps(doc, separators=(",", ":"))
