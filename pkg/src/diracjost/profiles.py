"""Coefficient data of the discrete Dirac system, restricted to eventually
free profiles.

A profile holds the sequences ``A_n`` (n = 0..N0), ``B_n``, ``P_n``, ``Q_n``
(n = 1..N0).  Beyond the support cutoff ``N0`` the system is free:
``A_n = I``, ``B_n = -I``, ``P_n = Q_n = 0`` exactly, which makes every
downstream series a true polynomial.  Profiles with infinite support must be
trimmed by the caller; nothing here truncates silently.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import matkit
from .errors import DimensionMismatch, IndexOutOfDomain, MissingField, ParseError

HERMITIAN_TOL = 1e-12
SINGULAR_TOL = 1e-10

_COEFF_KINDS = ("A", "B", "P", "Q")


def _frozen(a: np.ndarray) -> np.ndarray:
    a = a.copy()
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CoefficientProfile:
    """Immutable coefficient data; free tail implied beyond ``N0``."""

    m: int
    N0: int
    A: tuple[np.ndarray, ...]
    B: tuple[np.ndarray, ...]
    P: tuple[np.ndarray, ...]
    Q: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.m < 1:
            raise DimensionMismatch("m must be >= 1")
        if self.N0 < 0:
            raise DimensionMismatch("N0 must be >= 0")
        counts = {"A": self.N0 + 1, "B": self.N0, "P": self.N0, "Q": self.N0}
        for kind in _COEFF_KINDS:
            seq = getattr(self, kind)
            if len(seq) != counts[kind]:
                raise DimensionMismatch(
                    f"{kind} must hold {counts[kind]} matrices, got {len(seq)}"
                )
            checked = tuple(_frozen(matkit.as_matrix(x, dim=self.m)) for x in seq)
            object.__setattr__(self, kind, checked)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientProfile):
            return NotImplemented
        if (self.m, self.N0) != (other.m, other.N0):
            return False
        return all(
            all(np.array_equal(x, y) for x, y in zip(getattr(self, k), getattr(other, k)))
            for k in _COEFF_KINDS
        )


class Violation(NamedTuple):
    kind: str
    index: int
    magnitude: float


@dataclass
class ValidationReport:
    ok: bool
    decay_sum: float
    violations: list[Violation]


_FREE_CACHE: dict[tuple[str, int], np.ndarray] = {}


def _free_value(kind: str, m: int) -> np.ndarray:
    key = (kind, m)
    if key not in _FREE_CACHE:
        if kind == "A":
            val = matkit.identity(m)
        elif kind == "B":
            val = -matkit.identity(m)
        else:
            val = matkit.zero(m)
        _FREE_CACHE[key] = _frozen(val)
    return _FREE_CACHE[key]


def free_profile(m: int) -> CoefficientProfile:
    """The unperturbed system: N0 = 0, A0 = I, empty B, P, Q."""
    if m < 1:
        raise DimensionMismatch("m must be >= 1")
    return CoefficientProfile(m=m, N0=0, A=(matkit.identity(m),), B=(), P=(), Q=())


def coefficient_at(p: CoefficientProfile, kind: str, n: int) -> np.ndarray:
    """Stored value for n <= N0, exact free value beyond."""
    if kind not in _COEFF_KINDS:
        raise ValueError(f"unknown coefficient kind {kind!r}")
    low = 0 if kind == "A" else 1
    if n < low:
        raise IndexOutOfDomain(f"{kind}_n undefined for n = {n}")
    if n <= p.N0:
        return getattr(p, kind)[n - low]
    return _free_value(kind, p.m)


def validate(p: CoefficientProfile) -> ValidationReport:
    """Check Hermitian-ness and invertibility; report the decay sum.

    Violations are data, not failures: the report always comes back.
    """
    violations: list[Violation] = []

    def check_hermitian(x: np.ndarray, kind: str, n: int) -> None:
        dev = matkit.fro_norm(x - x.conj().T)
        if dev > HERMITIAN_TOL * max(1.0, matkit.fro_norm(x)):
            violations.append(Violation(f"NotHermitian{kind}", n, dev))

    def check_invertible(x: np.ndarray, kind: str, n: int) -> None:
        smin = float(np.linalg.svd(x, compute_uv=False)[-1])
        if smin <= SINGULAR_TOL:
            violations.append(Violation(f"Singular{kind}", n, smin))

    for n in range(0, p.N0 + 1):
        check_hermitian(p.A[n], "A", n)
        check_invertible(p.A[n], "A", n)
    eye = matkit.identity(p.m)
    decay = 0.0
    for n in range(1, p.N0 + 1):
        b, q, pp = p.B[n - 1], p.Q[n - 1], p.P[n - 1]
        check_hermitian(b, "B", n)
        check_invertible(b, "B", n)
        check_hermitian(pp, "P", n)
        check_hermitian(q, "Q", n)
        decay += n * (
            matkit.fro_norm(eye - p.A[n])
            + matkit.fro_norm(eye + b)
            + matkit.fro_norm(pp)
            + matkit.fro_norm(q)
        )
    return ValidationReport(ok=not violations, decay_sum=decay, violations=violations)


_TOP_KEYS = frozenset({"m", "N0", "A", "B", "P", "Q"})


def _parse_matrix_list(obj, kind: str, count: int, m: int) -> list[np.ndarray]:
    if not isinstance(obj, list):
        raise ParseError(f"{kind} must be an array of matrices")
    if len(obj) != count:
        raise DimensionMismatch(f"{kind} must hold {count} matrices, got {len(obj)}")
    out = []
    for i, rows in enumerate(obj):
        try:
            out.append(matkit.matrix_from_pairs(rows, dim=m))
        except DimensionMismatch:
            raise
        except ValueError as exc:
            raise ParseError(f"{kind}[{i}]: {exc}") from exc
    return out


def load_profile(text: str | bytes) -> CoefficientProfile:
    """Parse the JSON profile document (strict: unknown keys rejected)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level value must be a JSON object")
    unknown = sorted(set(doc) - _TOP_KEYS)
    if unknown:
        raise ParseError(f"unknown keys: {unknown}")
    for key in ("m", "N0", "A", "B", "P", "Q"):
        if key not in doc:
            raise MissingField(f"missing required key {key!r}")
    m, n0 = doc["m"], doc["N0"]
    if isinstance(m, bool) or not isinstance(m, int) or m < 1:
        raise ParseError("m must be an integer >= 1")
    if isinstance(n0, bool) or not isinstance(n0, int) or n0 < 0:
        raise ParseError("N0 must be an integer >= 0")
    return CoefficientProfile(
        m=m,
        N0=n0,
        A=tuple(_parse_matrix_list(doc["A"], "A", n0 + 1, m)),
        B=tuple(_parse_matrix_list(doc["B"], "B", n0, m)),
        P=tuple(_parse_matrix_list(doc["P"], "P", n0, m)),
        Q=tuple(_parse_matrix_list(doc["Q"], "Q", n0, m)),
    )


def dump_profile(p: CoefficientProfile) -> str:
    """Canonical JSON serialization; round-trips bitwise."""
    doc = {
        "m": p.m,
        "N0": p.N0,
        "A": [matkit.matrix_to_pairs(x) for x in p.A],
        "B": [matkit.matrix_to_pairs(x) for x in p.B],
        "P": [matkit.matrix_to_pairs(x) for x in p.P],
        "Q": [matkit.matrix_to_pairs(x) for x in p.Q],
    }
    return json.dumps(doc, separators=(",", ":"))


def profile_digest(p: CoefficientProfile) -> str:
    """sha256 of the canonical serialization (first 16 hex digits)."""
    return hashlib.sha256(dump_profile(p).encode("utf-8")).hexdigest()[:16]
