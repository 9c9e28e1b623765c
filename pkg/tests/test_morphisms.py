import random

import pytest
from hypothesis import given, settings, strategies as st

from bdsym.core import (
    BijectionTable,
    Permutation,
    TruthTable,
    compose_bijections,
    compose_tables,
    invert_bijection,
    permutation_bijection,
)
from bdsym.errors import BadSyntax, DimensionMismatch, NotBijective, TooLarge
from bdsym.morphisms import (
    MorphismPair,
    anti_iso_defects,
    check_anti_iso,
    check_iso,
    completions,
    find_anti_isos,
    find_isos,
    invert_pair,
    parse_pair,
    serialize_pair,
    verify_theorem28,
    verify_theorem29,
)

import oracles
from conftest import bijections, coordinate_perms, random_table, tables

ID2 = BijectionTable.identity(2)
NOT2 = TruthTable.from_function(2, lambda m: (1 - m[0], 1 - m[1]))

# Golden counts from the pure-Python double loop over all 24 x 24 couples
# (tests/oracles.py), computed before the search was written.
GOLDEN = {
    ("exa11.fn", "exa11.fn", "iso"): 24,
    ("exa11.fn", "exa11.fn", "anti-iso"): 24,
    ("exa2.fn", "exa2.fn", "iso"): 2,
    ("exa2.fn", "exa2.fn", "anti-iso"): 0,
    ("exa2.fn", "exa16.fn", "iso"): 2,
    ("table4.fn", "table4.fn", "iso"): 16,
    ("exa6_phi.fn", "exa6_psi.fn", "iso"): 2,
    ("exa6_phi.fn", "exa6_phi.fn", "iso"): 2,
}


def conjugate(phi: TruthTable, sigma: Permutation) -> TruthTable:
    pi = permutation_bijection(sigma)
    return compose_tables(pi, compose_tables(phi, invert_bijection(pi)))


def keys(pairs):
    return {p.key() for p in pairs}


# --- checks -----------------------------------------------------------------


def test_exa6_is_conjugacy(fx):
    phi, psi, pair = fx.function("exa6_phi.fn"), fx.function("exa6_psi.fn"), fx.pair("exa6.pair")
    assert check_iso(phi, psi, pair.g, pair.gp)
    assert not check_iso(phi, psi, pair.g, ID2)


@given(tables(2))
def test_identity_couple_always_iso(phi):
    assert check_iso(phi, phi, ID2, ID2)


def test_anti_iso_examples(fx):
    assert check_anti_iso(NOT2, NOT2, ID2, ID2)
    phi, psi = fx.function("exa2.fn"), fx.function("exa16.fn")
    assert not check_anti_iso(phi, psi, ID2, ID2)
    assert anti_iso_defects(phi, psi, ID2, ID2)[0b11, 0b00]


def test_check_errors(fx):
    phi = fx.function("exa2.fn")
    with pytest.raises(NotBijective):
        check_iso(phi, phi, phi, ID2)
    with pytest.raises(DimensionMismatch):
        check_anti_iso(phi, phi, BijectionTable.identity(3), ID2)


@given(st.integers(1, 2).flatmap(lambda n: st.tuples(tables(n), tables(n), bijections(n), bijections(n))))
def test_checks_match_oracle(args):
    phi, psi, g, gp = args
    d = [oracles.to_dict(t) for t in args]
    assert check_iso(phi, psi, g, gp) == oracles.is_iso(*d, phi.n)
    assert check_anti_iso(phi, psi, g, gp) == oracles.is_anti_iso(*d, phi.n)


def test_check_iso_at_large_n():
    rng = random.Random(7)
    phi = random_table(rng, 10)
    ident = BijectionTable.identity(10)
    assert check_iso(phi, phi, ident, ident)


# --- search -----------------------------------------------------------------


@pytest.mark.parametrize("phi, psi, kind", sorted(GOLDEN))
def test_golden_counts(fx, phi, psi, kind):
    finder = find_isos if kind == "iso" else find_anti_isos
    assert len(finder(fx.function(phi), fx.function(psi))) == GOLDEN[(phi, psi, kind)]


def test_find_isos_contains_identity_and_exa6(fx):
    phi, psi = fx.function("exa6_phi.fn"), fx.function("exa6_psi.fn")
    assert (ID2.rows, ID2.rows) in keys(find_isos(phi, phi))
    assert fx.pair("exa6.pair").key() in keys(find_isos(phi, psi))


def test_table4_identity_completions(fx):
    phi = fx.function("table4.fn")
    found = {p.gp.rows for p in find_isos(phi, phi) if p.g == ID2}
    expected = {fx.bijection(f"table4_gp{k}.bij").rows for k in range(1, 5)}
    assert found == expected


def test_anti_examples(fx):
    assert (ID2.rows, ID2.rows) in keys(find_anti_isos(NOT2, NOT2))
    assert list(find_anti_isos(fx.function("exa2.fn"), fx.function("exa2.fn"))) == []


@pytest.mark.parametrize("seed", range(10))
def test_search_matches_brute_force_n2(seed):
    rng = random.Random(seed)
    phi = random_table(rng, 2)
    if seed % 2:
        sigma = Permutation(2, (2, 1))
        psi = conjugate(phi, sigma)
    else:
        psi = random_table(rng, 2)
    d_phi, d_psi = oracles.to_dict(phi), oracles.to_dict(psi)
    assert keys(find_isos(phi, psi)) == oracles.brute_pairs(d_phi, d_psi, 2)
    assert keys(find_anti_isos(phi, psi)) == oracles.brute_pairs(d_phi, d_psi, 2, anti=True)


def test_search_matches_brute_force_bijective_n2():
    # anti-isomorphisms need every superposition to be bijective
    for rows in [(1, 0, 3, 2), (3, 2, 1, 0), (0, 1, 2, 3), (2, 3, 0, 1)]:
        phi = TruthTable(2, rows)
        d = oracles.to_dict(phi)
        assert keys(find_anti_isos(phi, phi)) == oracles.brute_pairs(d, d, 2, anti=True)


def test_search_matches_brute_force_n1():
    funcs = [TruthTable(1, rows) for rows in [(0, 0), (0, 1), (1, 0), (1, 1)]]
    for phi in funcs:
        for psi in funcs:
            dp, dq = oracles.to_dict(phi), oracles.to_dict(psi)
            assert keys(find_isos(phi, psi)) == oracles.brute_pairs(dp, dq, 1)
            assert keys(find_anti_isos(phi, psi)) == oracles.brute_pairs(dp, dq, 1, anti=True)


def test_search_order_is_lexicographic_and_deterministic(fx):
    phi = fx.function("table4.fn")
    first = find_isos(phi, phi)
    assert [p.key() for p in first] == sorted(p.key() for p in first)
    assert [p.key() for p in find_isos(phi, phi)] == [p.key() for p in first]


def test_search_limit_and_count(fx):
    phi = fx.function("table4.fn")
    limited = find_isos(phi, phi, limit=5)
    assert len(limited) == 5 and limited.truncated
    assert [p.key() for p in limited] == [p.key() for p in find_isos(phi, phi)][:5]
    full = find_isos(phi, phi, limit=16)
    assert len(full) == 16 and not full.truncated
    counted = find_isos(phi, phi, count_only=True)
    assert counted.count == 16 and len(counted) == 0


def test_search_cap(monkeypatch):
    phi = TruthTable.identity(4)
    with pytest.raises(TooLarge):
        find_isos(phi, phi)
    monkeypatch.setenv("BDSYM_MAX_N", "1")
    with pytest.raises(TooLarge):
        find_anti_isos(NOT2, NOT2)


def test_completions_agree_with_search(fx):
    phi = fx.function("exa17.fn")
    aut = find_isos(phi, phi)
    for g in {p.g for p in aut[:: max(1, len(aut) // 10)]}:
        assert [p.gp.rows for p in completions(phi, phi, g)] == [p.gp.rows for p in aut if p.g == g]


def test_search_n3_fixture(fx):
    phi = fx.function("table3.fn")
    aut = find_isos(phi, phi)
    theta = fx.pair("theta01.pair")  # n = 2; only used for shape
    assert theta.n == 2
    assert all(check_iso(phi, phi, p.g, p.gp) for p in aut)


# --- conjugation and inversion ----------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 3])
def test_conjugation_generator_against_oracle(n):
    rng = random.Random(n)
    for _ in range(5):
        phi = random_table(rng, n)
        sigma = Permutation(n, tuple(rng.sample(range(1, n + 1), n)))
        psi = conjugate(phi, sigma)
        pi = permutation_bijection(sigma)
        d_pi = oracles.to_dict(pi)
        assert oracles.is_iso(oracles.to_dict(phi), oracles.to_dict(psi), d_pi, d_pi, n)
        assert check_iso(phi, psi, pi, pi)


def test_invert_pair_examples(fx):
    ident = MorphismPair(ID2, ID2)
    assert invert_pair(ident) == ident
    pair = fx.pair("exa6.pair")
    inv = invert_pair(pair)
    assert check_iso(fx.function("exa6_psi.fn"), fx.function("exa6_phi.fn"), inv.g, inv.gp)
    t56 = MorphismPair(fx.bijection("table5_g.bij"), fx.bijection("table6_gp.bij"))
    inv = invert_pair(t56)
    assert inv.g == fx.bijection("table5_h.bij")
    assert inv.gp == fx.bijection("table6_hp.bij") == t56.gp
    assert invert_pair(MorphismPair(ID2, ID2, "anti-iso")).kind == "anti-iso"


@settings(max_examples=40, deadline=None)
@given(tables(2), coordinate_perms(2))
def test_inversion_law_on_found_pairs(phi, sigma):
    psi = conjugate(phi, sigma)
    for p in find_isos(phi, psi):
        q = invert_pair(p)
        assert check_iso(psi, phi, q.g, q.gp)
    for p in find_anti_isos(phi, psi):
        q = invert_pair(p)
        assert check_anti_iso(psi, phi, q.g, q.gp)


# --- orbit-level characterisations ------------------------------------------


def test_theorem29_exa6(fx):
    pair = fx.pair("exa6.pair")
    report = verify_theorem29(fx.function("exa6_phi.fn"), fx.function("exa6_psi.fn"), pair.g, pair.gp)
    assert report.statements == {"a": True, "b": True, "c": True}
    assert report.passed and report.agree
    assert report.horizon == 4 and report.budget == 1000
    assert report.samples["b"] == 1000 and not report.exhaustive


def test_theorem29_corrupted_gp(fx):
    pair = fx.pair("exa6.pair")
    swap01 = BijectionTable(2, (1, 0, 2, 3))
    bad_gp = compose_bijections(swap01, pair.gp)
    report = verify_theorem29(fx.function("exa6_phi.fn"), fx.function("exa6_psi.fn"), pair.g, bad_gp)
    assert not report.statements["a"]
    assert not (report.statements["b"] and report.statements["c"])
    assert not report.passed
    assert "a" in report.counterexamples


def test_theorem29_identity(fx):
    phi = fx.function("exa17.fn")
    ident = BijectionTable.identity(3)
    report = verify_theorem29(phi, phi, ident, ident, horizon=3, budget=200)
    assert report.passed


def test_theorem29_exhaustive_small(fx):
    pair = fx.pair("exa6.pair")
    report = verify_theorem29(fx.function("exa6_phi.fn"), fx.function("exa6_psi.fn"), pair.g, pair.gp,
                              horizon=2, budget=10)
    assert report.exhaustive and report.samples["b"] == 4 ** 4
    assert report.passed


def test_theorem29_seed_is_reproducible(fx):
    pair = fx.pair("exa6.pair")
    args = (fx.function("exa6_phi.fn"), fx.function("exa6_psi.fn"), pair.g, pair.gp)
    assert verify_theorem29(*args, seed=5).to_json() == verify_theorem29(*args, seed=5).to_json()


def test_theorem28_not(fx):
    report = verify_theorem28(NOT2, NOT2, ID2, ID2)
    assert report.passed and report.statements == {"a": True, "b": True, "c": True}
    assert report.reading


def test_theorem28_exa2_exa16(fx):
    phi, psi = fx.function("exa2.fn"), fx.function("exa16.fn")
    report = verify_theorem28(phi, psi, ID2, ID2, horizon=2)
    assert not report.statements["a"]
    assert not report.passed
    empty = verify_theorem28(phi, psi, ID2, ID2, horizon=-1)
    assert empty.statements["b"]


@pytest.mark.parametrize("seed", range(4))
def test_found_pairs_pass_orbit_characterisations(seed):
    rng = random.Random(seed)
    phi = random_table(rng, 2)
    psi = conjugate(phi, Permutation(2, (2, 1)))
    for p in find_isos(phi, psi):
        assert verify_theorem29(phi, psi, p.g, p.gp, horizon=2).passed
    for rows in [(1, 0, 3, 2), (2, 3, 0, 1), (0, 1, 2, 3)]:
        bij = TruthTable(2, rows)
        for p in find_anti_isos(bij, bij)[:6]:
            assert verify_theorem28(bij, bij, p.g, p.gp, horizon=2).passed


def test_non_couple_fails_all_statements(fx):
    phi = fx.function("table4.fn")
    bad = BijectionTable(2, (0, 2, 1, 3))
    assert (bad.rows, ID2.rows) not in keys(find_isos(phi, phi))
    report = verify_theorem29(phi, phi, bad, ID2, horizon=2)
    assert report.statements == {"a": False, "b": False, "c": False}


# --- pair files -------------------------------------------------------------


def test_pair_file_round_trip(fx):
    pair = fx.pair("exa6.pair")
    assert parse_pair(serialize_pair(pair)) == pair
    assert pair.to_json() == {"g": [3, 1, 2, 0], "gp": [0, 2, 1, 3], "kind": "iso"}
    assert MorphismPair.from_json(pair.to_json()) == pair


@pytest.mark.parametrize("text", [
    "n=2\n00->00\n",
    "g:\nn=1\n0->0\n1->1\n",
    "g:\nn=1\n0->0\n1->1\ng:\nn=1\n0->0\n1->1\n",
])
def test_pair_file_errors(text):
    with pytest.raises(BadSyntax):
        parse_pair(text)


def test_pair_file_not_bijective():
    with pytest.raises(NotBijective):
        parse_pair("g:\nn=1\n0->0\n1->0\ng':\nn=1\n0->0\n1->1\n")
