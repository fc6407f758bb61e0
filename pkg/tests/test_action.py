import itertools

import numpy as np
import pytest
from hypothesis import given, settings

from isgx import scenario
from isgx.action import (
    PartialAction,
    _literal_domain_formula,
    apply,
    check_domain_formula,
    check_translate_lemma,
    composite,
    domain_formula,
    indicator,
    range_formula,
    restricted_subaction,
    structural_defects,
    validate_axioms,
    words,
)
from isgx.errors import DomainError
from isgx.semigroup import PartialBijection

from conftest import random_actions

VALID = scenario.BUNDLED


def chase(pa, word, x):
    """Follow ``x`` through the maps of ``word``, last letter first; None once it leaves a domain."""
    for s in reversed(word):
        if x is None:
            return None
        x = pa.maps[s].image[x]
    return x


def oracle_domain_range(pa, word):
    dom = frozenset(x for x in range(pa.n) if chase(pa, word, x) is not None)
    ran = frozenset(chase(pa, word, x) for x in dom)
    return dom, ran


def el(S, label):
    return S.index(label)


@pytest.mark.parametrize("name", VALID)
def test_bundled_actions_satisfy_axioms(load, name):
    pa = load(name).action
    report = validate_axioms(pa)
    assert report.passed, report.failures
    assert pa.maps[pa.semigroup.unit].is_identity()
    assert pa.ideals[pa.semigroup.unit] == pa.full


@pytest.mark.parametrize(
    "name, check, witness",
    [
        ("corrupt-axiom-iii", "axiom-iii", {"s": "s", "t": "s", "x": "x0"}),
        ("corrupt-ideal", "structure:range-is-ideal", None),
    ],
)
def test_mutated_actions_fail_with_witness(load, name, check, witness):
    report = validate_axioms(load(name).action)
    assert not report.passed
    failure = next(f for f in report.failures if f.check == check)
    if witness is not None:
        assert {k: failure.witness[k] for k in witness} == witness
    else:
        assert failure.witness


def test_axiom_ii_violation_is_caught():
    # a valid action with the ideal of the unit shrunk so D_e != X
    pa = scenario.load("semilattice").action
    S = pa.semigroup
    ideals = list(pa.ideals)
    ideals[S.unit] = frozenset({0})
    maps = list(pa.maps)
    maps[S.unit] = PartialBijection.identity(pa.ground, [0])
    report = validate_axioms(PartialAction(S, pa.ground, tuple(maps), tuple(ideals)))
    assert "structure:unit-ideal-full" in report.failed_checks()


def test_domain_formula_example_ix2(load):
    pa = load("ix2-tautological").action
    S = pa.semigroup
    word = [el(S, "swap"), el(S, "p0")]
    assert composite(pa, word).domain == {0}
    assert domain_formula(pa, word) == {0}
    assert range_formula(pa, word) == {1}
    assert check_domain_formula(pa, word).passed


@pytest.mark.parametrize("name", VALID)
def test_single_letter_domain_is_ideal_of_inverse(load, name):
    pa = load(name).action
    S = pa.semigroup
    for s in S:
        assert domain_formula(pa, [s]) == pa.ideals[S.inv[s]] == pa.maps[s].domain


@pytest.mark.parametrize("name", VALID)
def test_domain_formula_against_point_chasing_oracle(load, name):
    pa = load(name).action
    for word in words(pa.semigroup, 4):
        dom, ran = oracle_domain_range(pa, word)
        assert domain_formula(pa, word) == dom, word
        assert range_formula(pa, word) == ran, word
        assert check_domain_formula(pa, word).passed


def test_literal_variant_can_differ_and_is_noted(load):
    pa = load("ix2-tautological").action
    S = pa.semigroup
    differing = [w for w in words(S, 2, 2) if _literal_domain_formula(pa, w) != domain_formula(pa, w)]
    assert differing
    report = check_domain_formula(pa, differing[0])
    assert report.passed
    assert report.notes


def test_translate_lemma_example(load):
    pa = load("ix2-tautological").action
    S = pa.semigroup
    assert check_translate_lemma(pa, el(S, "swap"), [el(S, "p0")]).passed
    assert pa.ideal_product([el(S, "swap"), S.mult[el(S, "swap")][el(S, "p0")]]) == {1}


@pytest.mark.parametrize("name", VALID)
def test_translate_lemma_exhaustive(load, name):
    pa = load(name).action
    S = pa.semigroup
    for t in S:
        for s_list in words(S, 2, 0):
            assert check_translate_lemma(pa, t, list(s_list)).passed


def test_translate_lemma_with_unit_is_trivial(load):
    pa = load("ix2-tautological").action
    S = pa.semigroup
    for s_list in words(S, 2):
        r = check_translate_lemma(pa, S.unit, list(s_list))
        assert r.passed


@pytest.mark.parametrize(
    "name, g, a, expected",
    [
        ("ix2-tautological", "e", [1, 2j], [1, 2j]),
        ("ix2-tautological", "swap", [1, 2j], [2j, 1]),
        ("semilattice", "f", [3, 0], [3, 0]),
        ("ix2-tautological", "p0.swap", [0, 5], [5, 0]),
    ],
)
def test_apply_examples(load, name, g, a, expected):
    pa = load(name).action
    np.testing.assert_array_equal(apply(pa, pa.semigroup.index(g), a), np.array(expected, dtype=complex))


def test_apply_rejects_mass_off_domain(load):
    pa = load("semilattice").action
    with pytest.raises(DomainError) as exc:
        apply(pa, pa.semigroup.index("f"), [1, 0.5])
    assert list(exc.value.points) == ["x1"]


def test_apply_zeroes_tiny_residue(load):
    pa = load("semilattice").action
    out = apply(pa, pa.semigroup.index("f"), [1, 1e-12])
    np.testing.assert_array_equal(out, [1, 0])


@pytest.mark.parametrize("name", VALID)
def test_apply_is_a_star_isomorphism(load, name):
    pa = load(name).action
    S = pa.semigroup
    rng = np.random.default_rng(1)
    for g in S:
        src = indicator(pa.ideals[S.inv[g]], pa.n)
        a = src * (rng.integers(-3, 4, pa.n) + 1j * rng.integers(-3, 4, pa.n))
        b = src * (rng.integers(-3, 4, pa.n) + 1j * rng.integers(-3, 4, pa.n))
        np.testing.assert_allclose(apply(pa, S.inv[g], apply(pa, g, a)), a, atol=1e-12)
        np.testing.assert_allclose(apply(pa, g, a * b), apply(pa, g, a) * apply(pa, g, b), atol=1e-12)
        np.testing.assert_allclose(apply(pa, g, np.conj(a)), np.conj(apply(pa, g, a)), atol=1e-12)
        np.testing.assert_allclose(apply(pa, g, 2 * a + b), 2 * apply(pa, g, a) + apply(pa, g, b), atol=1e-12)
        out = apply(pa, g, a)
        assert set(np.nonzero(out)[0]) <= pa.ideals[g]


def test_restricted_subaction_reindexes(load):
    pa = load("ix2-tautological").action
    sub = restricted_subaction(pa, [1])
    assert sub.ground.points == ("x1",)
    S = sub.semigroup
    assert sub.maps[S.index("swap")].domain == frozenset()
    assert sub.maps[S.index("e")].is_identity()


@settings(max_examples=30, deadline=None)
@given(random_actions(max_points=3))
def test_random_restricted_actions_are_partial_actions(pa):
    assert not structural_defects(pa).failures
    report = validate_axioms(pa)
    assert report.passed, report.failures


@settings(max_examples=20, deadline=None)
@given(random_actions(max_points=2))
def test_random_actions_domain_calculus(pa):
    S = pa.semigroup
    for word in words(S, 3):
        dom, ran = oracle_domain_range(pa, word)
        assert domain_formula(pa, word) == dom
        assert range_formula(pa, word) == ran
    for t, s_list in itertools.product(S, words(S, 2, 0)):
        assert check_translate_lemma(pa, t, list(s_list)).passed
