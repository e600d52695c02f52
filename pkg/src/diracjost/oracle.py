"""Independent verification path: Hermitian finite sections of the system
operator, diagonalized densely.

The operator splits into a free part plus a perturbation supported on
finitely many sites; its continuous spectrum is the band [-2, 2] and the
discrete spectrum sits outside it.  Truncating to sites 1..N with a
Dirichlet-type condition at the far end (y_{N+1}^{(2)} = 0, mirroring the
boundary condition at 0) keeps the section exactly Hermitian, so its
eigenvalues are an independent check on the determinant-based solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matkit
from .errors import IndexOutOfDomain, TruncationTooSmall
from .profiles import CoefficientProfile, coefficient_at

DEFAULT_SECTION_LENGTH = 400
DEFAULT_BAND_MARGIN = 0.05


@dataclass(frozen=True, eq=False)
class FiniteSection:
    """Hermitian section over sites 1..N, basis ordered
    (y_1^(1), y_1^(2), ..., y_N^(1), y_N^(2)), blocks of size m."""

    N: int
    m: int
    H: np.ndarray


def build_finite_section(p: CoefficientProfile, N: int) -> FiniteSection:
    """Assemble the 2mN x 2mN section matrix for the profile."""
    if N < p.N0 + 2:
        raise TruncationTooSmall(f"need N >= N0 + 2 = {p.N0 + 2}, got {N}")
    m = p.m
    dim = 2 * m * N

    def blk(n: int, comp: int) -> slice:
        start = 2 * m * (n - 1) + (comp - 1) * m
        return slice(start, start + m)

    h = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(1, N + 1):
        h[blk(n, 1), blk(n, 1)] = coefficient_at(p, "P", n)
        h[blk(n, 1), blk(n, 2)] = coefficient_at(p, "B", n)
        if n < N:
            h[blk(n, 1), blk(n + 1, 2)] = coefficient_at(p, "A", n)
        h[blk(n, 2), blk(n, 1)] = coefficient_at(p, "B", n)
        h[blk(n, 2), blk(n, 2)] = coefficient_at(p, "Q", n)
        if n > 1:
            h[blk(n, 2), blk(n - 1, 1)] = coefficient_at(p, "A", n - 1)
    h.setflags(write=False)
    return FiniteSection(N=N, m=m, H=h)


def oracle_eigs(fs: FiniteSection) -> np.ndarray:
    """All 2mN eigenvalues, ascending; deterministic for identical input."""
    return matkit.herm_eigvalues(fs.H)


@dataclass
class ComparisonReport:
    matches: list[tuple[float, float, float]]
    unmatched_jost: list[float]
    unmatched_oracle: list[float]


def _lam(x) -> float:
    return float(x.lam) if hasattr(x, "lam") else float(x)


def compare_spectra(
    jost, oracle_vals, band_margin: float = DEFAULT_BAND_MARGIN
) -> ComparisonReport:
    """Pair out-of-band oracle eigenvalues with the nearest determinant
    roots.

    The margin applies symmetrically: eigenvalues with |lambda| <= 2 +
    band_margin on either side are outside the comparison (finite sections
    pollute near the band edges).  Matches are greedy by smallest gap.
    """
    jost_out = sorted(
        lam for lam in (_lam(r) for r in jost) if abs(lam) > 2.0 + band_margin
    )
    oracle_out = sorted(
        float(v) for v in np.asarray(oracle_vals).ravel() if abs(v) > 2.0 + band_margin
    )
    pairs = sorted(
        (abs(lj - lo), i, k)
        for i, lj in enumerate(jost_out)
        for k, lo in enumerate(oracle_out)
    )
    used_j: set[int] = set()
    used_o: set[int] = set()
    matches: list[tuple[float, float, float]] = []
    for gap, i, k in pairs:
        if i in used_j or k in used_o:
            continue
        used_j.add(i)
        used_o.add(k)
        matches.append((jost_out[i], oracle_out[k], gap))
    matches.sort(key=lambda item: item[1])
    return ComparisonReport(
        matches=matches,
        unmatched_jost=[lj for i, lj in enumerate(jost_out) if i not in used_j],
        unmatched_oracle=[lo for k, lo in enumerate(oracle_out) if k not in used_o],
    )


def perturbation_tail_norm(p: CoefficientProfile, n: int) -> float:
    """Tail sum of perturbation norms from site n on; zero past N0.

    This is the compactness proxy: the perturbation is a norm limit of its
    finite sections, and the tail quantifies the remainder.
    """
    if n < 1:
        raise IndexOutOfDomain("tail norm defined for n >= 1")
    eye = matkit.identity(p.m)
    total = 0.0
    for k in range(max(n, 1), p.N0 + 1):
        total += (
            matkit.fro_norm(eye - p.A[k])
            + matkit.fro_norm(eye + p.B[k - 1])
            + matkit.fro_norm(p.P[k - 1])
            + matkit.fro_norm(p.Q[k - 1])
        )
    return total


def spectrum_csv(vals: np.ndarray, N: int) -> str:
    """One eigenvalue per row, tagged with the section length."""
    lines = ["N,lambda"]
    lines.extend(f"{N},{float(v)!r}" for v in vals)
    return "\n".join(lines) + "\n"


def band_csv(vals: np.ndarray, N: int) -> str:
    """One eigenvalue per row, tagged in/out of the band [-2, 2]."""
    lines = ["N,lambda,in_band"]
    for v in vals:
        v = float(v)
        lines.append(f"{N},{v!r},{int(-2.0 <= v <= 2.0)}")
    return "\n".join(lines) + "\n"
