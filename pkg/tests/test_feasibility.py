import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.solvers.simplex import lpmax

from ewe.core import dual
from ewe.cutgraph import cut_graph, cuts, is_cyclic
from ewe.feasibility import (BoundExhausted, Cover, InequalitySystem, MonoidTerm, certificate_lp,
                             coherence_system, coherence_witness, core_is_valid, cover_strictness,
                             enumerate_covers, enumerate_tight_covers, find_certificate,
                             find_incoherent_core, is_coherent, is_witness, simplex_max,
                             solve_positive)
from helpers import XXY_ZWZ, XYZ_WYV, XX_YY, TRIVIAL, instances

T = MonoidTerm.of


def test_monoid_term_basics():
    a = T("XXY")
    assert a.counts() == {"X": 2, "Y": 1}
    assert T("XY").included_in(a) and not a.included_in(T("XY"))
    assert (a + T("Z")) == T("XXYZ")
    assert a.scale(3) == T("XXXXXXYYY")
    assert str(a) == "2X + Y"
    assert str(T("")) == "0"
    assert a.evaluate({"X": 2, "Y": 5}) == 9


def test_empty_system_has_a_solution():
    sol = solve_positive(InequalitySystem(), {"X"})
    assert sol == {"X": 1}


def test_antisymmetric_pair_is_infeasible():
    sys_ = InequalitySystem(strict=((T("X"), T("Y")), (T("Y"), T("X"))))
    assert solve_positive(sys_) is None


def test_universe_must_cover_system():
    with pytest.raises(ValueError):
        solve_positive(InequalitySystem(strict=((T("X"), T("Y")),)), {"X"})


def test_solution_needs_scaling():
    # 2X < Y and 3Y < 7X: rational solutions only with X large enough
    sys_ = InequalitySystem(strict=((T("XX"), T("Y")), (T("YYY"), T("XXXXXXX"))))
    sol = solve_positive(sys_)
    assert sol is not None and sys_.satisfied_by(sol)


def _sympy_optimum(A, b, c):
    xs = sympy.symbols(f"x0:{len(c)}")
    cons = [sum(a * x for a, x in zip(row, xs)) <= rhs for row, rhs in zip(A, b)]
    cons += [x >= 0 for x in xs]
    best, _ = lpmax(sum(ci * x for ci, x in zip(c, xs)), cons)
    return Fraction(int(best.p), int(best.q))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_simplex_matches_sympy(data):
    n = data.draw(st.integers(1, 3))
    m = data.draw(st.integers(1, 4))
    A = [[data.draw(st.integers(-3, 4)) for _ in range(n)] for _ in range(m)]
    A.append([1] * n)  # keeps the problem bounded
    b = [data.draw(st.integers(0, 6)) for _ in range(m)] + [10]
    c = [data.draw(st.integers(-2, 3)) for _ in range(n)]
    best, x = simplex_max(A, b, c)
    assert best == _sympy_optimum(A, b, c)
    assert all(v >= 0 for v in x)
    assert all(sum(a * v for a, v in zip(row, x)) <= rhs for row, rhs in zip(A, b))


def test_simplex_rejects_negative_rhs():
    with pytest.raises(ValueError):
        simplex_max([[1]], [-1], [1])


terms = st.lists(st.sampled_from("XYZ"), max_size=3).map(lambda v: T(v))
rows = st.tuples(terms, terms)


@settings(max_examples=150, deadline=None)
@given(st.lists(rows, max_size=3), st.lists(rows, max_size=3))
def test_exactly_one_alternative_holds(weak, strict):
    """Either a positive solution exists or a multiset certificate does, never both."""
    sys_ = InequalitySystem(tuple(weak), tuple(strict))
    sol = solve_positive(sys_)
    cert = certificate_lp(sys_.rows())
    assert (sol is None) == (cert is not None)
    if sol is not None:
        assert sys_.satisfied_by(sol)


@settings(max_examples=60, deadline=None)
@given(st.lists(rows, max_size=3), st.lists(rows, min_size=1, max_size=3))
def test_small_solutions_agree_with_brute_force(weak, strict):
    sys_ = InequalitySystem(tuple(weak), tuple(strict))
    names = sorted(sys_.variables)
    brute = any(sys_.satisfied_by(dict(zip(names, vals)))
                for vals in itertools.product(range(1, 7), repeat=len(names)))
    if brute:
        assert solve_positive(sys_) is not None
    if solve_positive(sys_) is None:
        assert not brute


def test_xxy_zwz_coherent_with_listed_witness():
    assert is_witness(XXY_ZWZ, {"X": 3, "Y": 1, "Z": 2, "W": 3})
    w = coherence_witness(XXY_ZWZ)
    assert w is not None and is_witness(XXY_ZWZ, w)


def test_xyz_wyv_incoherent():
    assert coherence_witness(XYZ_WYV) is None
    assert solve_positive(coherence_system(XYZ_WYV), XYZ_WYV.variables) is None


def test_trivial_coherent():
    assert coherence_witness(TRIVIAL) == {}


def test_witness_rejects_wrong_assignment():
    assert not is_witness(XXY_ZWZ, {"X": 1, "Y": 1, "Z": 1, "W": 1})
    assert not is_witness(XXY_ZWZ, {"X": 3, "Y": 1, "Z": 2})


def test_xxy_zwz_tight_strict_cover():
    c = Cover(1, 1, 1, 2, 1, 2, True)
    assert cover_strictness(XXY_ZWZ, 1, 1, 1, 2, 1, 2) is True
    assert c in enumerate_tight_covers(XXY_ZWZ)
    # the two shrunk versions are not covers
    assert cover_strictness(XXY_ZWZ, 1, 1, 1, 2, 2, 2) is None
    assert cover_strictness(XXY_ZWZ, 1, 1, 1, 2, 1, 1) is None


def test_xx_yy_tight_nonstrict_cover():
    assert Cover(1, 1, 1, 2, 1, 1, False) in enumerate_tight_covers(XX_YY)


def test_trivial_has_no_covers():
    assert enumerate_tight_covers(TRIVIAL) == []


def test_xyz_wyv_core():
    covers, ys = find_incoherent_core(XYZ_WYV, 3)
    assert core_is_valid(XYZ_WYV, covers, ys)
    assert max(ys) <= 3
    # the certificate compares the two Y instances
    assert all(c.a_term(XYZ_WYV) == T("Y") or c.b_term(XYZ_WYV) == T("Y") for c in covers)


def test_coherent_inputs_have_no_core():
    assert find_incoherent_core(XXY_ZWZ) is None
    assert find_incoherent_core(TRIVIAL) is None


def test_certificate_search_bound():
    # X < Y and 2Y <= X needs ... 1*(X<Y) + 1*(2Y<=X): rhs Y+X vs lhs X+2Y, fine with y=1
    rows_ = [(T("X"), T("Y"), True), (T("YY"), T("X"), False)]
    assert find_certificate(rows_, 1) == [1, 1]
    # 3X < 2Y and Y <= X needs y=(1,2)... rhs 2Y+2X vs lhs 3X+2Y: y1=1, y2=2
    rows_ = [(T("XXX"), T("YY"), True), (T("Y"), T("X"), False)]
    assert find_certificate(rows_, 2) is not None
    with pytest.raises(BoundExhausted):
        find_certificate(rows_, 1)


def test_coherence_invariant_under_dual():
    for e, ok in instances(5, 3):
        assert ok == is_coherent(dual(e))


def test_every_witness_satisfies_the_full_biconditional():
    for e, ok in instances(5, 3):
        if ok:
            assert is_witness(e, coherence_witness(e))


def test_incoherent_instances_have_bounded_cores():
    for e, ok in instances(5, 3):
        if not ok:
            covers, ys = find_incoherent_core(e, 3)
            assert core_is_valid(e, covers, ys)


def test_acyclic_implies_coherent():
    for e, ok in instances(5, 3):
        if not is_cyclic(cut_graph(e)):
            assert ok


def test_cover_cut_relations():
    for e, _ in instances(5, 3):
        for c in enumerate_covers(e):
            for a in c.a:
                for b in e.boundaries:
                    if cuts(e, a, b):
                        assert b in c.b
        for c in enumerate_tight_covers(e):
            for b in c.b:
                assert any(cuts(e, b, a) for a in c.a)
