import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isgx import scenario
from isgx.action import apply
from isgx.errors import DomainError
from isgx.lalgebra import (
    LAlgebra,
    LElement,
    convolve,
    convolve_direct,
    delta,
    l1_norm,
    regular_rank,
    star,
    verify_banach_star_laws,
)

from conftest import random_actions


@pytest.fixture(scope="module")
def algebras():
    return {name: LAlgebra(scenario.load(name).action) for name in scenario.BUNDLED}


def idx(alg, label):
    return alg.pa.semigroup.index(label)


def oracle_convolve(alg, x, y):
    """The defining formula on raw point maps, without ``apply`` or structure constants."""
    pa = alg.pa
    S = pa.semigroup
    acc = {}
    for h, xh in x.coeffs().items():
        m = pa.maps[h]
        for k, yk in y.coeffs().items():
            g = S.mult[h][k]
            term = acc.setdefault(g, np.zeros(pa.n, dtype=complex))
            for p, q in enumerate(m.image):
                if q is not None:
                    # beta_{h*}(x(h)) at p is x(h) at alpha_h(p); beta_h moves p back to q
                    term[q] += xh[q] * yk[p]
    return alg.from_coeffs(acc)


def close(x, y, tol=1e-12):
    return l1_norm(x - y) <= tol


def test_dimension_is_sum_of_ideal_sizes(algebras):
    for alg in algebras.values():
        assert alg.dim == sum(len(D) for D in alg.pa.ideals)
    assert algebras["ix2-tautological"].dim == 8
    assert algebras["semilattice"].dim == 3


@pytest.mark.parametrize("name", scenario.BUNDLED)
def test_regular_rank_equals_dimension(algebras, name):
    alg = algebras[name]
    assert regular_rank(alg) == alg.dim


def test_delta_examples(algebras):
    alg = algebras["semilattice"]
    assert l1_norm(delta(alg, [0, 0], idx(alg, "f"))) == 0
    d = delta(alg, [3, 5], idx(alg, "e"))
    np.testing.assert_array_equal(d.coeff(idx(alg, "e")), [3, 5])
    with pytest.raises(DomainError):
        delta(alg, [3, 5], idx(alg, "f"))


def test_convolve_semilattice_example(algebras):
    alg = algebras["semilattice"]
    f, e = idx(alg, "f"), idx(alg, "e")
    out = delta(alg, [2, 0], f) @ delta(alg, [3, 5], e)
    assert close(out, delta(alg, [6, 0], f))


def test_convolve_z2_example(algebras):
    alg = algebras["z2-partial"]
    s, e = idx(alg, "s"), idx(alg, "e")
    out = delta(alg, [7, 0], s) @ delta(alg, [2, 0], s)
    assert close(out, delta(alg, [14, 0], e))


def test_convolve_swap_twist(algebras):
    alg = algebras["ix2-tautological"]
    swap, p0 = idx(alg, "swap"), idx(alg, "p0")
    # beta_swap(beta_swap(a) * 1_{x0}) lands on x1
    out = delta(alg, [2, 3], swap) @ delta(alg, [1, 0], p0)
    g = alg.pa.semigroup.mult[swap][p0]
    assert close(out, delta(alg, [0, 3], g))


@pytest.mark.parametrize("name", scenario.BUNDLED)
def test_unit_is_two_sided(algebras, name):
    alg = algebras[name]
    rng = np.random.default_rng(3)
    one = alg.unit()
    for _ in range(20):
        x = alg.random(rng)
        assert close(one @ x, x) and close(x @ one, x)


@pytest.mark.parametrize("name", scenario.BUNDLED)
def test_structure_constants_match_independent_oracle(algebras, name):
    alg = algebras[name]
    for i in range(alg.dim):
        for j in range(alg.dim):
            b_i, b_j = alg.basis_element(i), alg.basis_element(j)
            expected = oracle_convolve(alg, b_i, b_j)
            assert close(convolve(b_i, b_j), expected)
            assert close(convolve_direct(b_i, b_j), expected)


@pytest.mark.parametrize("name", scenario.BUNDLED)
def test_convolve_matches_direct_on_random_elements(algebras, name):
    alg = algebras[name]
    rng = np.random.default_rng(7)
    for _ in range(25):
        x, y = alg.random(rng, 0.6), alg.random(rng, 0.6)
        assert close(x @ y, convolve_direct(x, y), 1e-10)
        assert close(x @ y, oracle_convolve(alg, x, y), 1e-10)


def test_star_examples(algebras):
    alg = algebras["ix2-tautological"]
    e, swap = idx(alg, "e"), idx(alg, "swap")
    a = np.array([1 + 2j, 3])
    assert close(star(delta(alg, a, e)), delta(alg, np.conj(a), e))
    assert close(star(delta(alg, [1, 2j], swap)), delta(alg, [-2j, 1], swap))


def test_star_moves_coefficient_to_inverse(algebras):
    alg = algebras["ix2-tautological"]
    S = alg.pa.semigroup
    g = idx(alg, "p0.swap")
    x = delta(alg, [4j, 0], g)
    out = star(x)
    assert set(out.coeffs()) == {S.inv[g]}
    np.testing.assert_array_equal(out.coeff(S.inv[g]), apply(alg.pa, S.inv[g], [-4j, 0]))


def test_l1_norm_example(algebras):
    alg = algebras["semilattice"]
    x = delta(alg, [3, 4j], idx(alg, "e")) + delta(alg, [5, 0], idx(alg, "f"))
    assert l1_norm(x) == pytest.approx(9.0)
    assert l1_norm(alg.zero()) == 0.0


@pytest.mark.parametrize("name", scenario.BUNDLED)
def test_banach_star_laws(algebras, name):
    report = verify_banach_star_laws(algebras[name], samples=200)
    assert report.passed, report.failures


def dropped_wrapper(x, y):
    """Convolution with the outer beta_h removed; the term is left where it lands."""
    alg = x.algebra
    pa, S = alg.pa, alg.pa.semigroup
    acc = {}
    for h, xh in x.coeffs().items():
        pulled = apply(pa, S.inv[h], xh)
        for k, yk in y.coeffs().items():
            g = S.mult[h][k]
            acc[g] = acc.get(g, 0) + pulled * yk
    v = np.zeros(alg.dim, dtype=complex)
    for g, a in acc.items():
        for p in pa.ideals[g]:
            v[alg.index[(g, p)]] += a[p]
    return LElement(alg, v)


def test_dropping_outer_twist_breaks_associativity(algebras):
    report = verify_banach_star_laws(algebras["ix2-tautological"], product=dropped_wrapper, samples=5)
    assert "associativity" in report.failed_checks()
    witness = next(f for f in report.failures if f.check == "associativity").witness
    assert len(witness["triple"]) == 3


@pytest.mark.parametrize("name", scenario.BUNDLED)
def test_support_invariant(algebras, name):
    alg = algebras[name]
    rng = np.random.default_rng(11)
    for _ in range(10):
        x, y = alg.random(rng), alg.random(rng)
        for z in (x @ y, star(x)):
            for g, a in z.coeffs().items():
                assert set(np.nonzero(np.abs(a) > 0)[0]) <= alg.pa.ideals[g]


@settings(max_examples=15, deadline=None)
@given(random_actions(max_points=2), st.integers(0, 2**16))
def test_laws_on_random_actions(pa, seed):
    alg = LAlgebra(pa)
    rng = np.random.default_rng(seed)
    x, y, z = alg.random(rng), alg.random(rng), alg.random(rng)
    assert close((x @ y) @ z, x @ (y @ z), 1e-9)
    assert close(star(x @ y), star(y) @ star(x), 1e-9)
    assert close(star(star(x)), x)
    assert l1_norm(x @ y) <= l1_norm(x) * l1_norm(y) * (1 + 1e-12)
    assert l1_norm(star(x)) == pytest.approx(l1_norm(x))
    assert close(x @ y, oracle_convolve(alg, x, y), 1e-9)
