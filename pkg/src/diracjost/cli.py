"""Command-line entry point.

Subcommands: ``validate`` (profile checks), ``eigs`` (spectral report),
``oracle`` (finite-section cross-check), ``verify`` (invariant suite),
``band`` (finite-section eigenvalue positions for histogramming).

Exit codes: 0 success, 1 domain-level failure (validation violations,
failed invariants, pipeline errors), 2 I/O or parse failure.  Identical
configuration and profile produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import oracle as oracle_mod
from . import spectrum as spectrum_mod
from .errors import DiracJostError, DimensionMismatch, MissingField, ParseError
from .profiles import load_profile, profile_digest, validate
from .verify import INVARIANT_NAMES, random_profile, run_suite


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)
    try:
        return load_profile(text)
    except (ParseError, MissingField, DimensionMismatch) as exc:
        print(f"error: cannot parse {path}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def _require_valid(profile) -> None:
    report = validate(profile)
    if not report.ok:
        for v in report.violations:
            print(
                f"error: validation violation {v.kind} at n={v.index} "
                f"(magnitude {v.magnitude!r})",
                file=sys.stderr,
            )
        raise SystemExit(1)


def cmd_validate(args) -> int:
    profile = _load(args.profile)
    report = validate(profile)
    doc = {
        "ok": report.ok,
        "decay_sum": report.decay_sum,
        "violations": [
            {"kind": v.kind, "index": v.index, "magnitude": v.magnitude}
            for v in report.violations
        ],
        "profile_digest": profile_digest(profile),
    }
    _emit(json.dumps(doc, separators=(",", ":")), args.out)
    return 0 if report.ok else 1


def cmd_eigs(args) -> int:
    profile = _load(args.profile)
    _require_valid(profile)
    try:
        report = spectrum_mod.spectral_report(
            profile,
            grid_points=args.grid,
            newton_tol=args.newton_tol,
            boundary_margin=args.margin,
        )
    except DiracJostError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.format == "csv":
        _emit(spectrum_mod.report_to_csv(report), args.out)
    else:
        _emit(spectrum_mod.report_to_json(report), args.out)
    return 0


def cmd_oracle(args) -> int:
    profile = _load(args.profile)
    _require_valid(profile)
    try:
        report = spectrum_mod.spectral_report(
            profile,
            grid_points=args.grid,
            newton_tol=args.newton_tol,
            boundary_margin=args.margin,
        )
        section = oracle_mod.build_finite_section(profile, args.n)
        vals = oracle_mod.oracle_eigs(section)
        comparison = oracle_mod.compare_spectra(report.eigenvalues, vals)
    except DiracJostError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.format == "csv":
        _emit(oracle_mod.spectrum_csv(vals, args.n), args.out)
        return 0
    doc = {
        "n_sites": args.n,
        "band_margin": oracle_mod.DEFAULT_BAND_MARGIN,
        "matches": [
            {"lambda_jost": lj, "lambda_oracle": lo, "gap": gap}
            for lj, lo, gap in comparison.matches
        ],
        "unmatched_jost": comparison.unmatched_jost,
        "unmatched_oracle": comparison.unmatched_oracle,
        "oracle_spectrum": [float(v) for v in vals],
        "profile_digest": profile_digest(profile),
    }
    _emit(json.dumps(doc, separators=(",", ":")), args.out)
    return 0


def cmd_band(args) -> int:
    profile = _load(args.profile)
    _require_valid(profile)
    try:
        section = oracle_mod.build_finite_section(profile, args.n)
        vals = oracle_mod.oracle_eigs(section)
    except DiracJostError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(oracle_mod.band_csv(vals, args.n), args.out)
    return 0


def cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.random is not None:
        if args.random < 1:
            print("error: --random must be >= 1", file=sys.stderr)
            return 1
        profiles = [random_profile(rng) for _ in range(args.random)]
        header = f"# verify: profiles={args.random} seed={args.seed} oracle_n={args.n}"
    else:
        if not args.profile:
            print("error: provide a profile file or --random K", file=sys.stderr)
            return 1
        profile = _load(args.profile)
        _require_valid(profile)
        profiles = [profile]
        header = f"# verify: profile={args.profile} seed={args.seed} oracle_n={args.n}"

    lines = [header]
    json_profiles = []
    total = passed = 0
    for idx, profile in enumerate(profiles, start=1):
        digest = profile_digest(profile)
        lines.append(
            f"profile {idx}/{len(profiles)}: m={profile.m} N0={profile.N0} "
            f"digest={digest}"
        )
        results = run_suite(
            profile,
            rng,
            oracle_n=args.n,
            grid_points=args.grid,
            newton_tol=args.newton_tol,
            boundary_margin=args.margin,
            inject_corruption=args.inject_corruption,
        )
        for res in results:
            total += 1
            passed += res.passed
            lines.append(f"  {'PASS' if res.passed else 'FAIL'} {res.name} {res.detail}")
        json_profiles.append(
            {
                "m": profile.m,
                "N0": profile.N0,
                "digest": digest,
                "checks": [
                    {"name": r.name, "passed": r.passed, "detail": r.detail}
                    for r in results
                ],
            }
        )
    summary = (
        f"summary: {passed}/{total} checks passed "
        f"({len(profiles)} profiles x {len(INVARIANT_NAMES)} invariants)"
    )
    lines.append(summary)
    if args.format == "json":
        doc = {
            "seed": args.seed,
            "oracle_n": args.n,
            "profiles": json_profiles,
            "passed": passed,
            "total": total,
        }
        _emit(json.dumps(doc, separators=(",", ":")), args.out)
    else:
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if passed == total else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracjost",
        description="Jost solutions and spectra of matrix-valued discrete "
        "Dirac systems with compactly supported perturbations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(cmd, profile_required=True):
        if profile_required:
            cmd.add_argument("profile", help="profile JSON file")
        cmd.add_argument("--out", default=None, help="write output to PATH")

    def add_numeric(cmd):
        cmd.add_argument("--grid", type=int, default=spectrum_mod.DEFAULT_GRID_POINTS,
                         help="grid points per sub-interval")
        cmd.add_argument("--newton-tol", type=float,
                         default=spectrum_mod.DEFAULT_NEWTON_TOL,
                         help="relative root acceptance tolerance")
        cmd.add_argument("--margin", type=float,
                         default=spectrum_mod.DEFAULT_BOUNDARY_MARGIN,
                         help="excluded boundary margin in t")

    c = sub.add_parser("validate", help="validate a profile file")
    add_common(c)
    c.set_defaults(func=cmd_validate)

    c = sub.add_parser("eigs", help="compute the spectral report")
    add_common(c)
    add_numeric(c)
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_eigs)

    c = sub.add_parser("oracle", help="finite-section cross-check")
    add_common(c)
    add_numeric(c)
    c.add_argument("--n", type=int, default=oracle_mod.DEFAULT_SECTION_LENGTH,
                   help="finite-section length")
    c.add_argument("--format", choices=("json", "csv"), default="json")
    c.set_defaults(func=cmd_oracle)

    c = sub.add_parser("verify", help="run the invariant suite")
    c.add_argument("profile", nargs="?", default=None, help="profile JSON file")
    c.add_argument("--out", default=None, help="write output to PATH")
    add_numeric(c)
    c.add_argument("--n", type=int, default=oracle_mod.DEFAULT_SECTION_LENGTH,
                   help="finite-section length for the oracle check")
    c.add_argument("--random", type=int, default=None, metavar="K",
                   help="run against K seeded random admissible profiles")
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.add_argument("--inject-corruption", action="store_true",
                   help=argparse.SUPPRESS)
    c.set_defaults(func=cmd_verify)

    c = sub.add_parser("band", help="finite-section eigenvalues as CSV")
    add_common(c)
    c.add_argument("--n", type=int, default=oracle_mod.DEFAULT_SECTION_LENGTH,
                   help="finite-section length")
    c.set_defaults(func=cmd_band)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
