import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import coprime_spectra as cs
from coprime_spectra.errors import BoundedInputError, ConsistencyError

import oracles

EDGE = cs.Forest(2, ((0, 1),))
PATH3 = cs.Forest(3, ((0, 1), (1, 2)))


def test_semicircle_moments_are_catalan():
    table = cs.semicircle_moments(5)
    assert [mv.value for mv in table.even_moments] == [1.0, 2.0, 5.0, 14.0, 42.0]
    assert table.odd_moments_zero
    with pytest.raises(BoundedInputError):
        cs.semicircle_moments(0)


def test_visible_second_moment(primes_1e6):
    table = cs.visible_moments(1, primes_1e6)
    assert abs(table.value(1) - 6 / math.pi**2) <= table.tail_bound(1) + 1e-12


def test_visible_fourth_moment_is_twice_path3(primes_1e6):
    table = cs.visible_moments(2, primes_1e6)
    path3 = cs.coprime_probability(PATH3, primes_1e6)
    assert table.value(2) == pytest.approx(2 * path3.value, abs=1e-14)


def test_visible_sixth_moment_census_weights(primes_1e6):
    table = cs.visible_moments(3, primes_1e6)
    star = cs.coprime_probability(cs.Forest(4, ((0, 1), (0, 2), (0, 3))), primes_1e6)
    path = cs.coprime_probability(cs.Forest(4, ((0, 1), (1, 2), (2, 3))), primes_1e6)
    assert table.value(3) == pytest.approx(2 * star.value + 3 * path.value, abs=1e-13)


def test_invisible_second_moment_is_complement(primes_1e6):
    visible = cs.visible_moments(1, primes_1e6)
    invisible = cs.invisible_moments(1, primes_1e6)
    assert abs(invisible.value(1) - (1.0 - visible.value(1))) <= 1e-10


def test_single_word_term(primes_1e6):
    term = cs.invisible_word_term(cs.CatalanWord.from_string("aa"), primes_1e6)
    edge = cs.coprime_probability(EDGE, primes_1e6)
    assert term.value == pytest.approx(1.0 - edge.value, abs=1e-15)


def test_nested_word_term_expansion(primes_1e6):
    # The two tree edges share a vertex, so the full subset is a 3-path.
    term = cs.invisible_word_term(cs.CatalanWord.from_string("abba"), primes_1e6)
    edge = cs.coprime_probability(EDGE, primes_1e6).value
    path3 = cs.coprime_probability(PATH3, primes_1e6).value
    assert term.value == pytest.approx(1.0 - 2.0 * edge + path3, abs=1e-14)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_collapsed_equals_positionwise(k, primes_1e4):
    cache = cs.ShapeCache()
    for word in cs.enumerate_catalan_words(k):
        collapsed = cs.invisible_word_term(word, primes_1e4, cache)
        direct = cs.invisible_word_term_by_positions(word, primes_1e4, cs.ShapeCache())
        assert abs(collapsed.value - direct.value) <= 1e-12


def test_word_terms_are_probabilities(primes_1e4):
    cache = cs.ShapeCache()
    for k in range(1, 6):
        for word in cs.enumerate_catalan_words(k):
            term = cs.invisible_word_term(word, primes_1e4, cache)
            assert -term.tail_bound - 1e-9 <= term.value <= 1.0 + term.tail_bound + 1e-9


def test_moment_bounds(primes_1e4):
    k_max = 5
    cache = cs.ShapeCache()
    visible = cs.visible_moments(k_max, primes_1e4, cache)
    invisible = cs.invisible_moments(k_max, primes_1e4, cache)
    for k in range(1, k_max + 1):
        ck = cs.catalan_number(k)
        assert 0 < visible.value(k) < ck
        assert 0 <= invisible.value(k) < ck


def test_cache_transparency(primes_1e4):
    k_max = 4
    cached = cs.invisible_moments(k_max, primes_1e4, cs.ShapeCache())
    uncached = cs.invisible_moments(k_max, primes_1e4, cs.ShapeCache(enabled=False))
    for k in range(1, k_max + 1):
        assert abs(cached.value(k) - uncached.value(k)) <= 1e-12


def test_cache_reuses_shapes(primes_1e4):
    cache = cs.ShapeCache()
    cs.invisible_moments(3, primes_1e4, cache)
    # edgeless, edge, 3-path, 2 disjoint edges, star, 4-path
    assert len(cache) == 6


def test_subgraph_for_positions_star(primes_1e4):
    word = cs.CatalanWord.from_string("aabbcc")
    sub = cs.subgraph_for_positions(word, {1, 3})
    assert sub.edges == ((0, 1), (0, 2))
    assert cs.canonical_code(sub) == cs.canonical_code(PATH3)


def test_subgraph_edge_cases():
    word = cs.CatalanWord.from_string("aa")
    assert cs.subgraph_for_positions(word, set()).edges == ()
    assert cs.subgraph_for_positions(word, {0}).edges == ((0, 1),)
    assert cs.subgraph_for_positions(word, {0, 1}).edges == ((0, 1),)
    full = cs.subgraph_for_positions(cs.CatalanWord.from_string("abba"), {0, 1, 2, 3})
    assert full.edges == cs.word_to_tree(cs.CatalanWord.from_string("abba")).edges
    with pytest.raises(ValueError):
        cs.subgraph_for_positions(word, {5})


def test_corrupted_cache_detected(primes_1e4):
    class Corrupted(cs.ShapeCache):
        def probability(self, forest, primes):
            result = super().probability(forest, primes)
            if result.value == 1.0:  # leave the empty-forest term alone
                return result
            return cs.EulerProduct(
                result.value + 2.5, result.tail_bound, result.prime_bound, result.polynomial
            )

    with pytest.raises(ConsistencyError):
        cs.invisible_word_term(cs.CatalanWord.from_string("aa"), primes_1e4, Corrupted())


# ---------------------------------------------------------------------------
# free cumulants
# ---------------------------------------------------------------------------


def test_semicircle_cumulants():
    assert cs.free_cumulants_from_moments([0, 1, 0, 2, 0]) == pytest.approx(
        [0, 1, 0, 0, 0], abs=1e-12
    )


def test_point_mass_cumulants():
    c = 1.7
    moments = [c**j for j in range(1, 7)]
    kappas = cs.free_cumulants_from_moments(moments)
    assert kappas[0] == pytest.approx(c, abs=1e-12)
    assert kappas[1:] == pytest.approx([0] * 5, abs=1e-9)


def test_zero_moments_zero_cumulants():
    assert cs.free_cumulants_from_moments([0.0] * 6) == [0.0] * 6


def test_order_cap():
    with pytest.raises(BoundedInputError):
        cs.free_cumulants_from_moments([0.0] * 9)


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=7))
@settings(max_examples=100, deadline=None)
def test_cumulant_round_trip(moments):
    back = cs.moments_from_free_cumulants(cs.free_cumulants_from_moments(moments))
    for a, b in zip(moments, back):
        assert abs(a - b) <= 1e-10


@given(st.lists(st.floats(-1.5, 1.5), min_size=1, max_size=6))
@settings(max_examples=60, deadline=None)
def test_forward_map_matches_noncrossing_enumeration(kappas):
    moments = cs.moments_from_free_cumulants(kappas)
    for order in range(1, len(kappas) + 1):
        assert moments[order - 1] == pytest.approx(
            oracles.nc_moment(kappas, order), abs=1e-9, rel=1e-9
        )
