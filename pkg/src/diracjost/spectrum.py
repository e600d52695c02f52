"""Discrete spectrum from the zeros of det F_0(z), with simplicity
certificates and the continuous-band report.

Eigenvalues live on the segment ``z = -i t`` with ``t = iz`` real in
(-1,0) u (0,1); there ``lambda = -t - 1/t`` is real with |lambda| > 2.
The derivative of the spectral map is ``-i(1 + z^{-2})``, which at
``z0 = -it`` evaluates to ``-i(1 - t^{-2})``; the summation identity

    (G_1'(z0))* A_0 F_0(z0) - (F_0'(z0))* A_0 G_1(z0)
        = -i(1 - t^{-2}) sum_{n>=1} [F_n* F_n + G_n* G_n](z0)

follows by telescoping the differentiated system against itself and is
checked numerically by `wronskian_identity_gap`.  Contracting it with a
null vector u of F_0(z0) gives the simplicity certificate

    <A_0 G_1(z0) u, F_0'(z0) u> = i(1 - t^{-2}) * (positive real) != 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import matkit
from .errors import (
    DegenerateRoot,
    DomainError,
    IllConditionedInterpolation,
    NullVectorNotFound,
)
from .jost import JostSeries, compute_jost, eval_F, eval_G, jost_function
from .oracle import build_finite_section, compare_spectra, oracle_eigs
from .profiles import CoefficientProfile, profile_digest

BAND = (-2.0, 2.0)

DEFAULT_GRID_POINTS = 20001
DEFAULT_NEWTON_TOL = 1e-12
DEFAULT_BOUNDARY_MARGIN = 1e-6

_IMAG_TOL = 1e-8
_DEDUPE_TOL = 1e-8
_TRIVIAL_ROOT_TOL = 1e-10
_NULLVEC_TOL = 1e-8
_MULTIPLICITY_RTOL = 1e-6
_INTERP_RTOL = 1e-9


def _check_t(t: float) -> float:
    t = float(t)
    if t == 0.0 or abs(t) >= 1.0:
        raise DomainError(f"t = {t!r} outside (-1,0) u (0,1)")
    return t


def lambda_of_t(t: float) -> float:
    """Spectral value of the parameter t = iz."""
    t = _check_t(t)
    return -t - 1.0 / t


def z_of_t(t: float) -> complex:
    return complex(0.0, -float(t))


@dataclass(frozen=True)
class SpectralParameter:
    """Validated point on the admissible segment."""

    t: float
    z: complex
    lam: float

    @classmethod
    def from_t(cls, t: float) -> "SpectralParameter":
        t = _check_t(t)
        return cls(t=t, z=z_of_t(t), lam=-t - 1.0 / t)


@dataclass
class EigenvalueRecord:
    t: float
    z: complex
    lam: float
    det_residual: float
    derivative_magnitude: float
    multiplicity: int
    certificate: complex
    certificate_gap: float
    oracle_lambda: float | None = None
    oracle_gap: float | None = None


@dataclass
class BoundarySuspect:
    """Root inside the excluded margin near t = 0 or |t| = 1."""

    t: float
    z: complex
    lam: float


@dataclass
class SearchResult:
    eigenvalues: list[EigenvalueRecord]
    boundary_suspects: list[BoundarySuspect]
    newton_failures: int


@dataclass
class SpectralReport:
    band: tuple[float, float]
    eigenvalues: list[EigenvalueRecord]
    boundary_suspects: list[BoundarySuspect]
    root_count_bound: int
    profile_digest: str


def det_polynomial(f0: np.ndarray) -> np.ndarray:
    """Power-indexed coefficients of d(z) = det F_0(z).

    F_0 carries no constant term, so d(z) = z^m * det M(z) with
    M(z) = F_0(z)/z; the m-fold trivial root at z = 0 is deflated exactly
    by interpolating det M and shifting, which keeps interpolation noise
    from splitting it into a cluster of spurious near-zero roots.

    Samples det M at D+1 scaled roots of unity (D = m * deg M) and
    inverts the DFT.  Sampling starts on |z| = 1/2 and the radius widens
    toward the unit circle if the held-out residual check fails: the high
    coefficients of long polynomials are recovered from small-radius
    samples with noise amplified by r^-j, which would poison evaluation
    near |z| = 1 where the root scan works.  Ten held-out points split
    between |z| = 0.45 and |z| = 0.95 guard exactly that use.
    """
    m = f0.shape[1]
    if np.any(f0[0] != 0):
        raise ValueError("F_0 must have no constant term")
    f0 = f0[1:]
    degree = 0
    for s in range(f0.shape[0] - 1, -1, -1):
        if np.any(f0[s] != 0):
            degree = s
            break
    coeff_count = m * degree + 1
    held_out = np.concatenate(
        [
            0.45 * np.exp(2j * np.pi * (np.arange(5) + 0.5) / 5),
            0.95 * np.exp(2j * np.pi * (np.arange(5) + 0.25) / 5),
        ]
    )
    direct = np.array(
        [matkit.mat_det(_eval_matrix_poly(f0, z)) for z in held_out],
        dtype=np.complex128,
    )
    worst = np.inf
    for radius in (0.5, 0.75, 1.0):
        nodes = radius * np.exp(2j * np.pi * np.arange(coeff_count) / coeff_count)
        vals = np.array(
            [matkit.mat_det(_eval_matrix_poly(f0, z)) for z in nodes],
            dtype=np.complex128,
        )
        # vals[k] = sum_j (c_j r^j) e^{+2 pi i jk/n}, so the forward DFT
        # (negative exponent) divided by n recovers c_j r^j.
        # overflowed determinants propagate as inf/nan and hit the raise
        with np.errstate(invalid="ignore", over="ignore"):
            coeffs = np.fft.fft(vals) / coeff_count / radius ** np.arange(coeff_count)
            scale = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
            worst = float(
                np.max(np.abs(npoly.polyval(held_out, coeffs) - direct))
            )
        # NaN (overflowed determinants) must fall through to the raise.
        if np.isfinite(worst) and worst <= _INTERP_RTOL * max(scale, 1e-300):
            return np.concatenate([np.zeros(m, dtype=np.complex128), coeffs])
    raise IllConditionedInterpolation(
        f"held-out residual {worst:.3e} exceeds {_INTERP_RTOL:.0e} * scale "
        "even on the unit circle"
    )


def _eval_matrix_poly(coeffs: np.ndarray, z: complex) -> np.ndarray:
    acc = np.array(coeffs[-1])
    for s in range(coeffs.shape[0] - 2, -1, -1):
        acc = acc * z + coeffs[s]
    return acc


def multiplicity(d: np.ndarray, t0: float) -> int:
    """Order of the zero of d at z0 = -i t0: smallest k with
    |d^(k)(z0)| > 1e-6 * coefficient scale."""
    d = np.asarray(d, dtype=np.complex128)
    scale = float(np.max(np.abs(d))) if d.size else 0.0
    if scale == 0.0:
        raise DegenerateRoot("zero polynomial")
    z0 = z_of_t(t0)
    deriv = d
    for k in range(1, d.size):
        deriv = npoly.polyder(deriv)
        if abs(complex(npoly.polyval(z0, deriv))) > _MULTIPLICITY_RTOL * scale:
            return k
    raise DegenerateRoot(f"all derivatives below threshold at t0 = {t0!r}")


def _newton_polish(g: np.ndarray, g_der: np.ndarray, t_start: float, scale: float):
    t = complex(t_start)
    for _ in range(120):
        val = complex(npoly.polyval(t, g))
        der = complex(npoly.polyval(t, g_der))
        if abs(der) <= 1e-14 * scale:
            return None
        step = val / der
        t -= step
        if abs(step) <= 1e-15 * max(1.0, abs(t)):
            return t
    return t


def find_eigenvalues(
    j: JostSeries,
    p: CoefficientProfile,
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    newton_tol: float = DEFAULT_NEWTON_TOL,
    boundary_margin: float = DEFAULT_BOUNDARY_MARGIN,
) -> SearchResult:
    """Scan |det F_0(-it)| over the admissible segment and polish roots.

    Local minima of the scan seed a Newton iteration on the interpolated
    determinant polynomial; accepted roots must be real to 1e-8, below the
    residual tolerance and inside the open domain.  Roots landing inside
    the boundary margin are reported separately, never as eigenvalues.
    """
    if grid_points < 3 or newton_tol <= 0 or boundary_margin <= 0:
        raise ValueError("options must be positive (grid_points >= 3)")
    d = det_polynomial(jost_function(j))
    g = d * (-1j) ** np.arange(d.size)
    g_der = npoly.polyder(g)
    scale = float(np.max(np.abs(g)))
    lo, hi = boundary_margin, 1.0 - boundary_margin

    candidates: list[float] = []
    for grid in (
        np.linspace(-hi, -lo, grid_points),
        np.linspace(lo, hi, grid_points),
    ):
        mag = np.abs(npoly.polyval(grid, g))
        interior = (mag[1:-1] <= mag[:-2]) & (mag[1:-1] <= mag[2:])
        candidates.extend(grid[1:-1][interior])
        if mag[0] <= mag[1]:
            candidates.append(float(grid[0]))
        if mag[-1] <= mag[-2]:
            candidates.append(float(grid[-1]))

    accepted: list[tuple[float, float]] = []
    suspects: list[tuple[float, float]] = []
    failures = 0
    for t_start in candidates:
        polished = _newton_polish(g, g_der, t_start, scale)
        if polished is None:
            failures += 1
            continue
        residual = abs(complex(npoly.polyval(polished, g)))
        if residual > newton_tol * scale:
            continue
        if abs(polished.imag) > _IMAG_TOL:
            continue
        tr = float(polished.real)
        if abs(tr) <= _TRIVIAL_ROOT_TOL or abs(tr) >= 1.0:
            continue
        if abs(tr) <= boundary_margin or abs(tr) >= 1.0 - boundary_margin:
            suspects.append((tr, residual))
        else:
            accepted.append((tr, residual))

    def dedupe(pairs: list[tuple[float, float]]) -> list[float]:
        out: list[tuple[float, float]] = []
        for t, res in sorted(pairs):
            if out and abs(t - out[-1][0]) < _DEDUPE_TOL:
                if res < out[-1][1]:
                    out[-1] = (t, res)
            else:
                out.append((t, res))
        return [t for t, _ in out]

    def refine(tr: float) -> float:
        # Final Newton steps on det F_0(-it) evaluated exactly from the
        # stored series (the interpolated coefficients carry noise that
        # caps the root accuracy); the derivative from the interpolated
        # polynomial is accurate enough for the step.
        t = complex(tr)
        for _ in range(4):
            val = matkit.mat_det(_eval_matrix_poly(j.a[0], -1j * t))
            der = complex(npoly.polyval(t, g_der))
            if abs(der) <= 1e-14 * scale:
                break
            step = val / der
            t -= step
            if abs(step) <= 1e-16 * max(1.0, abs(t)):
                break
        return float(t.real) if abs(t.imag) <= _IMAG_TOL else tr

    records = []
    for tr in map(refine, dedupe(accepted)):
        z0 = z_of_t(tr)
        f0_val = _eval_matrix_poly(j.a[0], z0)
        cert, cert_gap = simplicity_certificate(j, p, tr)
        records.append(
            EigenvalueRecord(
                t=tr,
                z=z0,
                lam=-tr - 1.0 / tr,
                det_residual=abs(matkit.mat_det(f0_val)),
                derivative_magnitude=abs(complex(npoly.polyval(tr, g_der))),
                multiplicity=multiplicity(d, tr),
                certificate=cert,
                certificate_gap=cert_gap,
            )
        )
    records.sort(key=lambda r: r.lam)
    suspect_records = [
        BoundarySuspect(t=t, z=z_of_t(t), lam=-t - 1.0 / t) for t in dedupe(suspects)
    ]
    return SearchResult(
        eigenvalues=records, boundary_suspects=suspect_records, newton_failures=failures
    )


def _mass_sum(j: JostSeries, t: float, tail_tol: float, u: np.ndarray | None):
    """sum_{n>=1} F_n*F_n + G_n*G_n at z0 = -it (matrix), or the scalar
    sum of squared norms against a unit vector u.

    Perturbed sites are evaluated explicitly; past the support the terms
    are free and the remaining geometric tail is added in closed form once
    it drops below tail_tol.
    """
    z0 = z_of_t(t)
    t2 = t * t
    t4 = t2 * t2
    eye = matkit.identity(j.m)
    total = np.zeros((j.m, j.m), dtype=np.complex128) if u is None else 0.0
    n = 1
    while True:
        if n <= j.N0 + 1:
            fn = eval_F(j, n, z0)
            gn = eval_G(j, n, z0)
            if u is None:
                total = total + fn.conj().T @ fn + gn.conj().T @ gn
            else:
                total += float(np.linalg.norm(fn @ u) ** 2 + np.linalg.norm(gn @ u) ** 2)
        else:
            remaining = (1.0 + t2) * t4**n / (1.0 - t4)
            if remaining < tail_tol:
                return total + (remaining * eye if u is None else remaining)
            term = (1.0 + t2) * t4**n
            total = total + (term * eye if u is None else term)
        n += 1


def wronskian_identity_gap(
    j: JostSeries, p: CoefficientProfile, t: float, tail_tol: float = 1e-14
) -> float:
    """Defect of the summation identity at z0 = -it, relative to the RHS.

    LHS uses exact polynomial differentiation of the stored F_0 and G_1;
    RHS accumulates the solution's mass with a closed-form free tail.
    """
    t = _check_t(t)
    z0 = z_of_t(t)
    f0 = j.a[0]
    g1_full = np.zeros((j.S + 3, j.m, j.m), dtype=np.complex128)
    g1_full[2:] = j.b[1]  # G_1(z) = z^2 * sum_s b[1,s] z^s
    f0_der = _matrix_poly_derivative(f0)
    g1_der = _matrix_poly_derivative(g1_full)
    a0 = p.A[0]
    lhs = (
        _eval_matrix_poly(g1_der, z0).conj().T @ a0 @ _eval_matrix_poly(f0, z0)
        - _eval_matrix_poly(f0_der, z0).conj().T @ a0 @ _eval_matrix_poly(g1_full, z0)
    )
    rhs = -1j * (1.0 - 1.0 / (t * t)) * _mass_sum(j, t, tail_tol, None)
    return matkit.fro_norm(lhs - rhs) / max(1.0, matkit.fro_norm(rhs))


def _matrix_poly_derivative(coeffs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(coeffs)
    for s in range(1, coeffs.shape[0]):
        out[s - 1] = s * coeffs[s]
    return out


def simplicity_certificate(
    j: JostSeries, p: CoefficientProfile, t0: float
) -> tuple[complex, float]:
    """Certificate <A_0 G_1(z0) u, F_0'(z0) u> for a root t0 and its
    relative gap against the factored form i(1 - t0^{-2}) * mass, where
    mass = sum_{n>=1} ||F_n u||^2 + ||G_n u||^2.

    u is the eigenvector of F_0(z0)* F_0(z0) with smallest eigenvalue and
    must satisfy ||F_0(z0) u|| <= 1e-8 * max(1, ||F_0(z0)||_F), else the
    point is not a root.

    Two numerical conventions, both recorded here because they matter:

    * the inner product is evaluated through the full boundary Wronskian
      form <A_0 G_1 u, F_0' u> - <A_0 F_0 u, G_1' u>.  The subtracted
      term vanishes identically at a root (F_0(z0) u = 0 defines u), but
      evaluating it cancels the null vector's last-ulp residual instead
      of injecting it, which matters when the eigenfunction mass is many
      orders below the coefficient scale;
    * the returned certificate is normalized to unit mass
      (mass = sum_{n>=1} ||F_n u||^2 + ||G_n u||^2), i.e. computed with u
      rescaled so the square-summable eigensolution has unit norm.  The
      raw product scales with an arbitrary overall solution size and can
      be legitimately tiny, while the normalized value stays pinned near
      i(1 - t0^{-2}), away from zero.  The relative gap is unchanged.

    The left (boundary) and right (interior-sum) sides remain independent
    computations; the gap checks the telescoped identity end to end.
    """
    t0 = _check_t(t0)
    z0 = z_of_t(t0)
    f0 = j.a[0]
    f0_val = _eval_matrix_poly(f0, z0)
    _, vecs = matkit.herm_eig(f0_val.conj().T @ f0_val)
    u = vecs[:, 0]
    null_residual = float(np.linalg.norm(f0_val @ u))
    if null_residual > _NULLVEC_TOL * max(1.0, matkit.fro_norm(f0_val)):
        raise NullVectorNotFound(
            f"||F_0(z0) u|| = {null_residual:.3e} at t0 = {t0!r}; not a root"
        )
    f0_der = _matrix_poly_derivative(f0)
    g1_full = np.zeros((j.S + 3, j.m, j.m), dtype=np.complex128)
    g1_full[2:] = j.b[1]
    g1_der = _matrix_poly_derivative(g1_full)
    a0 = p.A[0]
    raw = complex(
        np.vdot(_eval_matrix_poly(f0_der, z0) @ u, a0 @ _eval_matrix_poly(g1_full, z0) @ u)
        - np.vdot(_eval_matrix_poly(g1_der, z0) @ u, a0 @ (f0_val @ u))
    )
    mass = float(_mass_sum(j, t0, 1e-14, u))
    factored = 1j * (1.0 - 1.0 / (t0 * t0)) * mass
    gap = abs(raw - factored) / max(abs(factored), 1e-300)
    return raw / max(mass, 1e-300), gap


def spectral_report(
    p: CoefficientProfile,
    *,
    grid_points: int = DEFAULT_GRID_POINTS,
    newton_tol: float = DEFAULT_NEWTON_TOL,
    boundary_margin: float = DEFAULT_BOUNDARY_MARGIN,
    oracle_n: int | None = None,
    band_margin: float = 0.05,
) -> SpectralReport:
    """Full pipeline: series, root search, optional finite-section columns."""
    series = compute_jost(p)
    search = find_eigenvalues(
        series,
        p,
        grid_points=grid_points,
        newton_tol=newton_tol,
        boundary_margin=boundary_margin,
    )
    records = search.eigenvalues
    if oracle_n is not None:
        section = build_finite_section(p, oracle_n)
        vals = oracle_eigs(section)
        comparison = compare_spectra(records, vals, band_margin=band_margin)
        by_lam = {r.lam: r for r in records}
        for lam_j, lam_o, gap in comparison.matches:
            rec = by_lam.get(lam_j)
            if rec is not None:
                rec.oracle_lambda = lam_o
                rec.oracle_gap = gap
    return SpectralReport(
        band=BAND,
        eigenvalues=records,
        boundary_suspects=search.boundary_suspects,
        root_count_bound=p.m * (4 * p.N0 + 3),
        profile_digest=profile_digest(p),
    )


def report_to_json(report: SpectralReport) -> str:
    doc = {
        "band": [report.band[0], report.band[1]],
        "eigenvalues": [
            {
                "t": r.t,
                "z": matkit.complex_to_pair(r.z),
                "lambda": r.lam,
                "multiplicity": r.multiplicity,
                "det_residual": r.det_residual,
                "derivative_magnitude": r.derivative_magnitude,
                "certificate": matkit.complex_to_pair(r.certificate),
                "certificate_gap": r.certificate_gap,
                **(
                    {"oracle_lambda": r.oracle_lambda, "oracle_gap": r.oracle_gap}
                    if r.oracle_lambda is not None
                    else {}
                ),
            }
            for r in report.eigenvalues
        ],
        "boundary_suspects": [
            {"t": s.t, "z": matkit.complex_to_pair(s.z), "lambda": s.lam}
            for s in report.boundary_suspects
        ],
        "root_count_bound": report.root_count_bound,
        "profile_digest": report.profile_digest,
    }
    return json.dumps(doc, separators=(",", ":"))


CSV_HEADER = "t,z_re,z_im,lambda,multiplicity,det_residual"


def report_to_csv(report: SpectralReport) -> str:
    lines = [CSV_HEADER]
    for r in report.eigenvalues:
        lines.append(
            f"{r.t!r},{r.z.real!r},{r.z.imag!r},{r.lam!r},"
            f"{r.multiplicity},{r.det_residual!r}"
        )
    return "\n".join(lines) + "\n"
