import numpy as np
import pytest

from diracjost.errors import IndexOutOfDomain, TruncationTooSmall
from diracjost.jost import compute_jost
from diracjost.oracle import (
    band_csv,
    build_finite_section,
    compare_spectra,
    oracle_eigs,
    perturbation_tail_norm,
    spectrum_csv,
)
from diracjost.profiles import free_profile
from diracjost.spectrum import find_eigenvalues
from diracjost.verify import random_profile

from conftest import scalar_profile


def test_free_section_m1_n2_explicit():
    fs = build_finite_section(free_profile(1), 2)
    expect = np.array(
        [
            [0.0, -1.0, 0.0, 1.0],
            [-1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [1.0, 0.0, -1.0, 0.0],
        ],
        dtype=complex,
    )
    assert np.array_equal(fs.H, expect)


def test_section_hermitian_random():
    rng = np.random.default_rng(23)
    for _ in range(3):
        p = random_profile(rng)
        fs = build_finite_section(p, p.N0 + 5)
        assert np.linalg.norm(fs.H - fs.H.conj().T) <= 1e-12 * max(
            1.0, np.linalg.norm(fs.H)
        )


def test_perturbation_enters_single_entry():
    h_free = build_finite_section(free_profile(1), 50).H
    # embed the P1 = 3 profile over the same 50 sites
    h_pert = build_finite_section(scalar_profile(3.0), 50).H
    diff = h_pert - h_free
    assert diff[0, 0] == 3.0
    diff[0, 0] = 0.0
    assert np.count_nonzero(diff) == 0


def test_truncation_too_small():
    with pytest.raises(TruncationTooSmall):
        build_finite_section(scalar_profile(3.0), 2)


def test_free_band_confinement_n500():
    vals = oracle_eigs(build_finite_section(free_profile(1), 500))
    assert vals.size == 1000
    assert vals[0] >= -2.0 - 1e-12 and vals[-1] <= 2.0 + 1e-12
    assert vals[0] <= -1.99 and vals[-1] >= 1.99


def test_free_section_chiral_symmetry():
    vals = oracle_eigs(build_finite_section(free_profile(1), 60))
    assert np.allclose(vals, -vals[::-1], atol=1e-12)


def test_small_free_section_strictly_inside():
    vals = oracle_eigs(build_finite_section(free_profile(1), 10))
    assert vals.size == 20
    assert vals[0] > -2.0 and vals[-1] < 2.0


def test_benchmark_out_of_band_state():
    vals = oracle_eigs(build_finite_section(scalar_profile(3.0), 400))
    out = [v for v in vals if v > 2.05]
    assert len(out) == 1
    assert all(-2.01 <= v <= 2.01 for v in vals if v not in out)


def test_compare_free_empty():
    p = free_profile(1)
    series = compute_jost(p)
    recs = find_eigenvalues(series, p).eigenvalues
    vals = oracle_eigs(build_finite_section(p, 500))
    comp = compare_spectra(recs, vals)
    assert comp.matches == [] and comp.unmatched_oracle == []
    assert comp.unmatched_jost == []


def test_compare_benchmark_match():
    p = scalar_profile(3.0)
    series = compute_jost(p)
    recs = find_eigenvalues(series, p).eigenvalues
    vals = oracle_eigs(build_finite_section(p, 400))
    comp = compare_spectra(recs, vals)
    assert len(comp.matches) == 1
    _, _, gap = comp.matches[0]
    assert gap <= 1e-6
    assert not comp.unmatched_jost and not comp.unmatched_oracle


def test_convergence_study_monotone():
    # near-band-edge eigenvalue (t ~ -0.995) converges slowly enough that
    # halving errors stay above the noise floor through N = 800
    p = scalar_profile(0.505)
    series = compute_jost(p)
    lam = find_eigenvalues(series, p).eigenvalues[0].lam
    gaps = []
    for n_sites in (100, 200, 400, 800):
        vals = oracle_eigs(build_finite_section(p, n_sites))
        gaps.append(abs(float(vals[-1]) - lam))
    assert all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))


def test_tail_norm_examples():
    assert perturbation_tail_norm(free_profile(1), 1) == 0.0
    p = scalar_profile(3.0)
    assert perturbation_tail_norm(p, 1) == pytest.approx(3.0)
    assert perturbation_tail_norm(p, p.N0 + 1) == 0.0
    with pytest.raises(IndexOutOfDomain):
        perturbation_tail_norm(p, 0)


def test_csv_emitters():
    vals = np.array([-1.5, 0.0, 2.5])
    text = spectrum_csv(vals, 10)
    assert text.splitlines()[0] == "N,lambda"
    assert len(text.strip().splitlines()) == 4
    btext = band_csv(vals, 10)
    rows = btext.strip().splitlines()
    assert rows[0] == "N,lambda,in_band"
    assert rows[1].endswith(",1") and rows[3].endswith(",0")
