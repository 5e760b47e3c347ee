import pytest

from ewe.core import Boundary as B
from ewe.core import dual, is_staggered, make_ewe
from ewe.feasibility import is_coherent
from ewe.oracle import oracle_successors
from ewe.transform import (EmptySide, IncoherentInput, NielsenCase, NotAdjacent, TrivialEquation,
                           WrongCase, adjacent_partners, boundary_maps, coherent_successor,
                           nielsen_case, raw_successors, successors, swap, transported_order,
                           word_nielsen)
from helpers import XXY_ZWZ, XYZ_WYV, XX_YY, TRIVIAL, XY_ZX, ewe, instances


def test_cases():
    assert nielsen_case(XXY_ZWZ) is NielsenCase.II
    assert nielsen_case(XX_YY) is NielsenCase.I
    assert nielsen_case(dual(XXY_ZWZ)) is NielsenCase.III
    assert str(NielsenCase.II) == "CaseII"
    with pytest.raises(TrivialEquation):
        nielsen_case(TRIVIAL)


@pytest.mark.parametrize("case,want", [
    (NielsenCase.I, (("Y",), ("X",))),
    (NielsenCase.II, (("X", "Y"), ("Z", "X"))),
    (NielsenCase.III, (("Y",), ("Z", "X"))),
])
def test_word_nielsen_xy_zx(case, want):
    assert word_nielsen("XY", "ZX", case) == want


def test_word_nielsen_longer():
    assert word_nielsen("XXY", "ZWZ", NielsenCase.II) == (tuple("XZXY"), tuple("WZ"))


def test_word_nielsen_errors():
    with pytest.raises(EmptySide):
        word_nielsen("", "X", NielsenCase.I)
    with pytest.raises(WrongCase):
        word_nielsen("XY", "XZ", NielsenCase.II)


def test_xxy_zwz_maps():
    m = boundary_maps(XXY_ZWZ)
    assert m.b_minus == {B(1, 1), B(1, 2), B(1, 3), B(2, 2), B(2, 3)}
    assert m.bp_minus == {B(1, 1), B(1, 3), B(1, 4), B(2, 1), B(2, 2)}
    assert m.bp_plus == {B(1, 2)}
    assert m.mu[B(1, 2)] == 3 and m.nu[B(1, 3)] == 2
    for b in m.b_minus:
        assert m.nu_b(m.mu_b(b)) == b


def test_maps_need_case_two():
    with pytest.raises(WrongCase):
        boundary_maps(XX_YY)
    with pytest.raises(WrongCase):
        boundary_maps(dual(XXY_ZWZ))


def test_transported_order_xxy_zwz():
    m = boundary_maps(XXY_ZWZ)
    # (2,1)' <- (2,2), (1,1)' <- (1,1), (2,2)'~(1,4)' <- top, (1,3)' <- (1,2)
    assert transported_order(XXY_ZWZ, m) == [[B(1, 1)], [B(2, 1)], [B(1, 3)], [B(1, 4), B(2, 2)]]


def test_xxy_zwz_three_successors():
    out = successors(XXY_ZWZ)
    assert len(out) == 3 and all(ok for _, ok in out)
    assert {(s.u1, s.u2) for s, _ in out} == {(tuple("XZXY"), tuple("WZ"))}
    rel = set()
    for s, _ in out:
        a, b = B(1, 2), B(2, 1)
        rel.add("<" if s.lt(a, b) else ">" if s.lt(b, a) else "=")
        # everything else matches the transported order
        assert s.lt(B(1, 1), B(2, 1)) and s.lt(B(2, 1), B(1, 3)) and s.lt(B(1, 3), B(1, 4))
    assert rel == {"<", "=", ">"}


def test_case_one_shifts_order():
    src = ewe("XXY=ZWZ", "(1,1)~(2,1) < (1,2) < (2,2) < (1,3)~(2,3)")
    (s, ok), = successors(src)
    assert ok
    assert s == ewe("XY=WX", "(1,1) < (2,1) < (1,2)~(2,2)")


def test_xx_yy_case_one():
    (s, ok), = successors(XX_YY)
    assert ok and s == make_ewe("X", "X", [[(1, 1), (2, 1)]])


def test_successors_reject_incoherent():
    with pytest.raises(IncoherentInput):
        successors(XYZ_WYV)
    with pytest.raises(TrivialEquation):
        successors(TRIVIAL)


def test_coherent_successor_examples():
    s = coherent_successor(XXY_ZWZ, {"X": 3, "Y": 1, "Z": 2, "W": 3})
    assert (s.u1, s.u2) == (tuple("XZXY"), tuple("WZ"))
    assert s.equiv(B(1, 2), B(2, 1)) and is_coherent(s)
    assert coherent_successor(XX_YY) == make_ewe("X", "X", [[(1, 1), (2, 1)]])
    xy = make_ewe("X", "Y", [[(1, 1), (2, 1)]])
    assert coherent_successor(xy) == make_ewe("", "", [])


def test_coherent_successor_case_three():
    s = coherent_successor(dual(XXY_ZWZ))
    assert is_coherent(s) and s in raw_successors(dual(XXY_ZWZ))


def test_coherent_successor_errors():
    with pytest.raises(IncoherentInput):
        coherent_successor(XYZ_WYV)
    with pytest.raises(IncoherentInput):
        coherent_successor(XXY_ZWZ, {"X": 1, "Y": 1, "Z": 1, "W": 1})


def _split_successors():
    below = [s for s, _ in successors(XXY_ZWZ) if s.lt(B(1, 2), B(2, 1))][0]
    above = [s for s, _ in successors(XXY_ZWZ) if s.lt(B(2, 1), B(1, 2))][0]
    return below, above


def test_swap_split_successors():
    below, above = _split_successors()
    assert swap(below, B(1, 2)) == above
    assert swap(swap(below, B(1, 2)), B(1, 2)) == below


def test_swap_errors():
    below, _ = _split_successors()
    with pytest.raises(NotAdjacent):
        swap(below, B(1, 3), other=B(1, 4))
    # (1,4)~(2,2) share a class
    with pytest.raises(NotAdjacent):
        swap(below, B(1, 4))
    with pytest.raises(NotAdjacent):
        swap(below, B(1, 1), other=B(2, 2))


def test_adjacent_partners_are_opposite_side():
    for e, _ in instances(5, 2):
        for b in e.boundaries:
            for c in adjacent_partners(e, b):
                assert c.side != b.side
                assert swap(swap(e, b, c), b, c) == e


def test_case_two_maps_invariants():
    for e, ok in instances(6, 3):
        if not ok or nielsen_case(e) is not NielsenCase.II:
            continue
        m = boundary_maps(e)
        new = {B(1, j) for j in range(1, len(m.u1) + 1)} | {B(2, j) for j in range(1, len(m.u2) + 1)}
        assert m.bp_minus | m.bp_plus == new and not (m.bp_minus & m.bp_plus)
        for b in m.bp_plus:
            assert B(b.side, b.index + 1) not in m.bp_plus
        for b in m.b_minus:
            assert m.nu_b(m.mu_b(b)) == b


def test_successors_match_filter_oracle():
    for e, ok in instances(6, 3):
        if not ok:
            continue
        got = set(raw_successors(e))
        assert len(got) == len(raw_successors(e))
        assert got == set(oracle_successors(e)), str(e)


def test_coherent_successor_always_coherent():
    for e, ok in instances(6, 3):
        if ok:
            s = coherent_successor(e)
            assert is_coherent(s) and s in raw_successors(e)


def test_case_three_is_dual_of_case_two():
    for e, ok in instances(5, 3):
        if ok and nielsen_case(e) is NielsenCase.III:
            assert raw_successors(e) == [dual(s) for s in raw_successors(dual(e))]


def test_xy_zx_staggered():
    assert is_staggered(XY_ZX)
