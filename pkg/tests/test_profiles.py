import json

import numpy as np
import pytest

from diracjost.errors import (
    DimensionMismatch,
    IndexOutOfDomain,
    MissingField,
    ParseError,
)
from diracjost.profiles import (
    CoefficientProfile,
    coefficient_at,
    dump_profile,
    free_profile,
    load_profile,
    profile_digest,
    validate,
)

from conftest import scalar_profile

SPEC_DOC = (
    '{"m":1,"N0":1,"A":[[[ [1,0] ]],[[ [1,0] ]]],'
    '"B":[[[ [-1,0] ]]],"P":[[[ [3,0] ]]],"Q":[[[ [0,0] ]]]}'
)


def test_free_profile_scalar():
    p = free_profile(1)
    assert p.N0 == 0 and p.m == 1
    rep = validate(p)
    assert rep.ok and rep.decay_sum == 0.0


def test_free_tail_values():
    p = free_profile(3)
    assert np.array_equal(coefficient_at(p, "B", 5), -np.eye(3))
    assert np.array_equal(coefficient_at(p, "A", 7), np.eye(3))
    assert np.array_equal(coefficient_at(p, "P", 2), np.zeros((3, 3)))


def test_coefficient_domain():
    p = free_profile(2)
    with pytest.raises(IndexOutOfDomain):
        coefficient_at(p, "Q", 0)
    with pytest.raises(IndexOutOfDomain):
        coefficient_at(p, "A", -1)


def test_free_values_bitwise_stable():
    p = free_profile(2)
    a1 = coefficient_at(p, "B", 3)
    a2 = coefficient_at(p, "B", 9)
    assert np.array_equal(a1, a2)
    assert not a1.flags.writeable


def test_load_spec_example():
    p = load_profile(SPEC_DOC)
    assert p.m == 1 and p.N0 == 1
    assert p.P[0][0, 0] == 3.0
    assert p.B[0][0, 0] == -1.0


def test_load_dimension_mismatch():
    doc = json.loads(SPEC_DOC)
    doc["m"] = 2
    with pytest.raises(DimensionMismatch):
        load_profile(json.dumps(doc))


def test_load_empty_document():
    with pytest.raises(ParseError):
        load_profile("")


def test_load_missing_field():
    doc = json.loads(SPEC_DOC)
    del doc["Q"]
    with pytest.raises(MissingField):
        load_profile(json.dumps(doc))


def test_load_unknown_key():
    doc = json.loads(SPEC_DOC)
    doc["extra"] = 1
    with pytest.raises(ParseError):
        load_profile(json.dumps(doc))


def test_load_wrong_matrix_count():
    doc = json.loads(SPEC_DOC)
    doc["B"] = []
    with pytest.raises(DimensionMismatch):
        load_profile(json.dumps(doc))


def test_load_bad_complex_entry():
    doc = json.loads(SPEC_DOC)
    doc["P"] = [[[[3]]]]
    with pytest.raises(ParseError):
        load_profile(json.dumps(doc))


def test_validate_singular_b():
    p = CoefficientProfile(
        m=1,
        N0=1,
        A=(np.eye(1), np.eye(1)),
        B=(np.zeros((1, 1)),),
        P=(np.zeros((1, 1)),),
        Q=(np.zeros((1, 1)),),
    )
    rep = validate(p)
    assert not rep.ok
    assert any(v.kind == "SingularB" and v.index == 1 for v in rep.violations)


def test_validate_nonhermitian_p():
    p = CoefficientProfile(
        m=2,
        N0=1,
        A=(np.eye(2), np.eye(2)),
        B=(-np.eye(2),),
        P=(np.array([[0.0, 1.0], [0.0, 0.0]]),),
        Q=(np.zeros((2, 2)),),
    )
    rep = validate(p)
    assert not rep.ok
    assert any(
        v.kind.startswith("NotHermitian") and v.index == 1 for v in rep.violations
    )


def test_decay_sum_single_site():
    rep = validate(scalar_profile(3.0))
    assert rep.ok
    assert rep.decay_sum == pytest.approx(3.0)


def test_roundtrip_bitwise():
    rng = np.random.default_rng(11)
    x = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    h = (x + x.conj().T) / 2
    p = CoefficientProfile(
        m=2,
        N0=2,
        A=(np.eye(2), np.eye(2) + 0.25 * h, np.eye(2)),
        B=(-np.eye(2), -np.eye(2) + 0.125 * h),
        P=(h, 0.3 * h),
        Q=(np.zeros((2, 2)), -0.7 * h),
    )
    again = load_profile(dump_profile(p))
    assert again == p
    assert profile_digest(again) == profile_digest(p)


def test_profiles_immutable():
    p = free_profile(2)
    with pytest.raises(ValueError):
        p.A[0][0, 0] = 5.0
