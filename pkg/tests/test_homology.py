from fractions import Fraction as Q

from boxpers.fieldlin import FieldSpec
from boxpers.homology import CellComplex, PairHomology, Persistence


def _circle(field):
    return CellComplex(field, 3, [[(0,), (1,), (2,)], [(0, 1), (1, 2), (0, 2)]])


def test_circle_homology(field):
    cx = _circle(field)
    assert PairHomology(cx, 0).dim == 1
    assert PairHomology(cx, 1).dim == 1


def test_relative_to_a_point_kills_h0(field):
    cx = _circle(field)
    L = [{0}, set()]
    assert PairHomology(cx, 0, L=L).dim == 0
    assert PairHomology(cx, 1, L=L).dim == 1


def test_sublevel_bars_of_a_height_function():
    f = FieldSpec.gf(2)
    cx = _circle(f)
    h = [Q(0), Q(1), Q(2)]
    vals = [h, [max(h[a], h[b]) for a, b in cx.cells[1]]]
    P = Persistence(cx, vals)
    assert [(b.birth, b.death) for b in P.essential(0)] == [(Q(0), None)]
    # zero-length pairs are dropped
    assert P.finite(0) == []
    assert [(b.birth, b.death) for b in P.essential(1)] == [(Q(2), None)]
