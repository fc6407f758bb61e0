import numpy as np
import pytest

from isgx.covrep import MatrixRep, regular_rep
from isgx.crossed import RepFamily
from isgx.equivalence import span_equality, theta_check
from isgx.errors import PreconditionError
from isgx.lift import build_sg

CASES = [
    # scenario, rep, span dim, blocks
    ("semilattice", "regular", 2, [1, 1]),
    ("z2-partial", "regular", 2, [1, 1]),
    ("z2-partial", "sign", 2, [1, 1]),
    ("ix2-tautological", "regular", 4, [2]),
    ("chain3-semilattice", "regular", 3, [1, 1, 1]),
    ("trivial-group", "regular", 2, [1, 1]),
]


@pytest.mark.parametrize("name, rep_name, dim, blocks", CASES)
def test_span_equality(load, name, rep_name, dim, blocks):
    sc = load(name)
    rep = sc.rep(rep_name)
    out = span_equality(sc.action, rep, build_sg(sc.action, rep))
    assert out.g_in_s and out.s_in_g
    assert out.dims == (dim, dim)
    assert out.span_equal


def test_ix2_spans_are_all_matrices(load):
    sc = load("ix2-tautological")
    rep = sc.rep("regular")
    out = span_equality(sc.action, rep, build_sg(sc.action, rep))
    assert out.dims == (4, 4)


@pytest.mark.parametrize("name, rep_name, dim, blocks", CASES)
def test_theta_is_isomorphism(load, name, rep_name, dim, blocks):
    sc = load(name)
    rep = sc.rep(rep_name)
    out = theta_check(sc.action, rep, build_sg(sc.action, rep), seed=sc.seed)
    assert out.theta_well_defined
    assert out.faithful_hypothesis
    assert out.theta_iso, out.checks.failures
    assert out.blocks_g == out.blocks_s == blocks
    assert out.checks.passed


def test_theta_iso_implies_span_and_blocks(load):
    for name, rep_name, *_ in CASES:
        sc = load(name)
        rep = sc.rep(rep_name)
        out = theta_check(sc.action, rep, build_sg(sc.action, rep))
        if out.theta_iso:
            assert out.span_equal
            assert sorted(out.blocks_g) == sorted(out.blocks_s)


def test_family_without_building_rep_is_rejected(load):
    sc = load("z2-partial")
    sign = sc.rep("sign")
    sg = build_sg(sc.action, sign)
    with pytest.raises(PreconditionError):
        theta_check(sc.action, sign, sg, family_g=RepFamily(sc.action, [sc.rep("regular")]))


def test_unfaithful_hypothesis_is_reported_not_raised(load):
    sc = load("z2-partial")
    rep = sc.rep("regular")
    out = theta_check(sc.action, rep, build_sg(sc.action, rep), family_g=RepFamily(sc.action, sc.reps))
    assert out.faithful_hypothesis is False
    assert out.checks.failed_checks() == {"faithful-hypothesis"}


def test_equal_reps_match_by_value(load):
    sc = load("ix2-tautological")
    rep = sc.rep("regular")
    copy = MatrixRep(rep.labeling, tuple(np.array(U) for U in rep.u), name="copy")
    out = theta_check(sc.action, copy, build_sg(sc.action, copy), family_g=RepFamily(sc.action, [rep]))
    assert out.theta_iso


def test_report_serializes(load):
    sc = load("ix2-tautological")
    rep = regular_rep(sc.action)
    d = theta_check(sc.action, rep, build_sg(sc.action, rep)).to_dict()
    assert d["theta_iso"] is True
    assert d["blocks_g"] == d["blocks_s"] == {2: 1}
    assert d["g_side_in_s_side"] and d["s_side_in_g_side"]
