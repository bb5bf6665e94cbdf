import random
from fractions import Fraction

from boxpers.fieldlin import FieldSpec, LinMap
from boxpers.novikov import laurent_rank


def _eval_rank(F, rows, ncols):
    best = 0
    for t0 in (Fraction(3, 7), Fraction(-5, 11), Fraction(13, 2), Fraction(17, 19)):
        M = [[sum((c * t0**e for e, c in row.get(j, {}).items()), Fraction(0)) for j in range(ncols)] for row in rows]
        best = max(best, LinMap.from_rows(F, M).rank())
    return best


def test_laurent_rank_matches_generic_evaluation():
    F = FieldSpec.rationals()
    rng = random.Random(3)
    for _ in range(40):
        n, m = rng.randint(1, 9), rng.randint(1, 9)
        rows = [{} for _ in range(n)]
        for j in range(m):
            for i in rng.sample(range(n), min(n, rng.randint(1, 3))):
                rows[i][j] = {rng.randint(-2, 2): F.elem(rng.choice([1, -1, 2]))}
        assert laurent_rank(F, rows) == _eval_rank(F, rows, m)


def test_circle_boundary_has_full_rank():
    # boundary of the single-edge circle on its cover: t - 1
    F = FieldSpec.gf(2)
    rows = [{0: {1: F.elem(1), 0: F.elem(1)}}]
    assert laurent_rank(F, rows) == 1


def test_zero_matrix_rank_zero():
    assert laurent_rank(FieldSpec.gf(3), [{}, {}]) == 0
