import itertools
import random

import pytest

from carsync import (
    CnfFormula,
    Found,
    NotSynchronizing,
    StateSet,
    Synchronizing,
    apply_word,
    assignment_to_word,
    brute_force_sat,
    decompose,
    evaluate,
    full_sync_word,
    is_one_cluster,
    parse_dimacs,
    reduce,
    shortest_sync_word,
    verify_word,
    window_check,
    word_to_assignment,
)
from carsync.reduction import CnfError

from .instances import PHI_EX_DIMACS, phi_ex, random_3cnf, unsat_8
from .oracles import naive_apply

A, B = 0, 1


def test_parse_phi_ex():
    phi = parse_dimacs("c example\n" + PHI_EX_DIMACS)
    assert phi == phi_ex()
    assert phi.variable_count == 4 and phi.clause_count == 3


def test_parse_sorts_and_allows_split_lines():
    phi = parse_dimacs("p cnf 5 2\n4 -1\n 2 0 5 3 -2 0\n")
    assert phi.clauses == ((-1, 2, 4), (-2, 3, 5))


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("p cnf 3 1\n1 -1 2 0\n", "complementary"),
        ("p cnf 3 1\n1 2 0\n", "exactly 3"),
        ("p cnf 3 1\n1 2 3 -2 0\n", "exactly 3"),
        ("p cnf 3 1\n1 1 2 0\n", "repeats"),
        ("p cnf 3\n1 2 3 0\n", "malformed"),
        ("p dnf 3 1\n1 2 3 0\n", "malformed"),
        ("1 2 3 0\n", "before problem line"),
        ("c only a comment\n", "missing problem line"),
        ("p cnf 3 2\n1 2 3 0\n", "declares 2"),
        ("p cnf 3 1\n1 2 4 0\n", "out of range"),
        ("p cnf 3 1\n1 2 3\n", "not terminated"),
        ("p cnf 3 1\n1 x 3 0\n", "bad literal"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(CnfError, match=fragment):
        parse_dimacs(text)


def test_reduce_phi_ex_structure():
    out = reduce(phi_ex())
    assert out.pfa.state_count == 36 == 2 * 3 * (4 + 2)
    assert out.pfa.alphabet == ("a", "b")
    names = out.state_names()
    assert [names[q] for q in out.s_init] == ["nc1^x1", "nc2^x1", "nc3^x1"]
    assert [names[q] for q in out.s_end] == ["c1^end", "c2^end", "c3^end"]
    q = out.state
    # clause 1 = x1 ∨ x3 ∨ x4
    assert out.pfa.delta(q("nc1^x1"), A) == q("c1^x2")
    assert out.pfa.delta(q("nc1^x1"), B) == q("nc1^x2")
    assert out.pfa.delta(q("nc1^x4"), A) == q("c1^end")
    # clause 2 = x1 ∨ x2 ∨ ¬x3
    assert out.pfa.delta(q("nc2^x3"), B) == q("c2^x4")
    assert out.pfa.delta(q("nc2^x3"), A) == q("nc2^x4")
    assert out.pfa.delta(q("p3"), A) == q("p1")
    assert out.pfa.delta(q("p2"), B) == q("nc2^x1")
    assert out.pfa.delta(q("c2^end"), B) == q("p1")


def test_undefined_exactly_where_expected():
    out = reduce(phi_ex())
    names = out.state_names()
    for q, name in enumerate(names):
        assert out.pfa.delta(q, A) is not None
        blocked = name.startswith("r") or name.startswith("nc") and name.endswith("end")
        assert (out.pfa.delta(q, B) is None) == blocked


def test_assignment_word_translation():
    phi = phi_ex()
    assert assignment_to_word(phi, (1, 0, 0, 1)) == (A, B, B, A)
    assert assignment_to_word(phi, (True,) * 4) == (A,) * 4
    assert word_to_assignment((A, B, B, A)) == (True, False, False, True)
    assert word_to_assignment((A,) * 5) == (True,) * 5
    for e in itertools.product((False, True), repeat=4):
        assert word_to_assignment(assignment_to_word(phi, e)) == e
    with pytest.raises(ValueError):
        assignment_to_word(phi, (True,) * 3)
    with pytest.raises(ValueError):
        word_to_assignment((A, 2))


def test_satisfying_window_maps_init_to_end():
    out = reduce(phi_ex())
    assert evaluate(phi_ex(), (1, 0, 0, 1))
    assert apply_word(out.pfa, out.s_init, (A, B, B, A)) == out.s_end


def test_full_sync_word():
    phi = phi_ex()
    out = reduce(phi)
    w = full_sync_word(phi, (1, 0, 0, 1))
    assert out.pfa.word_names(w) == list("aaaaaaababbab")
    assert len(w) == 13
    assert verify_word(out.pfa, w) == Synchronizing(out.state("p1"))
    with pytest.raises(ValueError):
        full_sync_word(phi, (0, 0, 0, 0))  # falsifies x1 ∨ x3 ∨ x4


def test_full_sync_word_length_n3():
    phi = CnfFormula(3, ((1, 2, 3),))
    assert len(full_sync_word(phi, (True, True, True))) == 11


def test_brute_force_sat():
    e = brute_force_sat(phi_ex())
    expected = next(
        x for x in itertools.product((False, True), repeat=4) if evaluate(phi_ex(), x)
    )
    assert e == expected == (False, False, False, True)
    assert brute_force_sat(unsat_8()) is None


def test_window_check():
    phi = phi_ex()
    out = reduce(phi)
    w = window_check(out)
    assert w is not None and w <= (A, B, B, A)
    windows = [
        v for v in itertools.product((A, B), repeat=4)
        if naive_apply(out.pfa, out.s_init, v) == set(out.s_end)
    ]
    assert w == windows[0]
    assert all(evaluate(phi, word_to_assignment(v)) for v in windows)
    assert window_check(reduce(unsat_8())) is None
    single = CnfFormula(3, ((1, 2, 3),))
    assert evaluate(single, word_to_assignment(window_check(reduce(single))))


def test_window_check_matches_unpruned_enumeration():
    rng = random.Random(8)
    for _ in range(60):
        out = reduce(random_3cnf(rng, rng.randint(3, 6), rng.randint(1, 9)))
        n = out.variable_count
        windows = [
            v for v in itertools.product((A, B), repeat=n)
            if naive_apply(out.pfa, out.s_init, v) == set(out.s_end)
        ]
        assert window_check(out) == (windows[0] if windows else None)


def test_enumeration_guard():
    big = CnfFormula(25, ((1, 2, 3),))
    with pytest.raises(ValueError):
        brute_force_sat(big)


def test_laws_on_random_formulas():
    rng = random.Random(12)
    for _ in range(40):
        phi = random_3cnf(rng, rng.randint(3, 7), rng.randint(1, 6))
        out = reduce(phi)
        n, m = phi.variable_count, phi.clause_count
        assert out.pfa.state_count == 2 * m * (n + 2)
        assert is_one_cluster(out.pfa, A)
        d = decompose(out.pfa, A)
        assert set(d.clusters[0].cycle) == {out.state(f"p{i}") for i in range(1, m + 1)}
        full = StateSet.full(out.pfa.state_count)
        for n1 in range(n + 2):
            assert apply_word(out.pfa, full, (A,) * n1 + (B,)) is None
        # one step past the claimed bound the b is already defined
        assert d.graph_level == n + 2
        assert apply_word(out.pfa, full, (A,) * (n + 2) + (B,)) == out.s_init


@pytest.mark.parametrize("n", range(3, 11))
def test_length_n_words_end_in_end_states(n):
    rng = random.Random(n)
    phi = random_3cnf(rng, n, 3)
    out = reduce(phi)
    pfa = out.pfa
    for i in range(1, 4):
        start = out.state(f"nc{i}^x1")
        ends = {out.state(f"c{i}^end"), out.state(f"nc{i}^end")}
        for v in itertools.product((A, B), repeat=n):
            q = start
            for x in v:
                q = pfa.delta(q, x)
            assert q in ends


def test_equivalence_small():
    rng = random.Random(99)
    formulas = [random_3cnf(rng, rng.randint(3, 5), rng.randint(1, 9)) for _ in range(40)]
    formulas.append(unsat_8())
    for phi in formulas:
        out = reduce(phi)
        sat = brute_force_sat(phi)
        win = window_check(out)
        res = shortest_sync_word(out.pfa)
        assert (sat is not None) == (win is not None) == isinstance(res, Found)
        if not isinstance(res, Found):
            assert isinstance(res, NotSynchronizing)
        if win is not None:
            assert evaluate(phi, word_to_assignment(win))
            e = word_to_assignment(win)
            assert verify_word(out.pfa, full_sync_word(phi, e)) == Synchronizing(out.state("p1"))
