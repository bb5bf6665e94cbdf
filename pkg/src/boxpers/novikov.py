"""Rank over the rational function field kappa(t) for Laurent-monomial matrices.

Used for the free rank of the homology of the cover as a module over the
Laurent polynomial ring.  Elimination is fraction free: rows are combined
as ``p * row - c * pivot_row`` so entries stay Laurent polynomials.
"""

from __future__ import annotations

from .fieldlin import FieldSpec

# a Laurent polynomial is a dict {exponent: nonzero coefficient}


def _lmul(field: FieldSpec, f: dict, g: dict) -> dict:
    out: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = e1 + e2
            v = field.add(out.get(e, field.zero), field.mul(c1, c2))
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _lsub(field: FieldSpec, f: dict, g: dict) -> dict:
    out = dict(f)
    for e, c in g.items():
        v = field.add(out.get(e, field.zero), field.neg(c))
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _normalize_row(field: FieldSpec, row: dict) -> dict:
    """Multiply a row by a unit t^k * c so its lowest exponent is 0 and one entry is monic."""
    if not row:
        return row
    lo = min(min(f) for f in row.values())
    first = row[min(row)]
    inv = field.inv(first[max(first)])
    return {j: {e - lo: field.mul(c, inv) for e, c in f.items()} for j, f in row.items()}


def laurent_rank(field: FieldSpec, rows: list[dict]) -> int:
    """Rank over kappa(t) of a matrix given as rows ``{col: laurent poly}``."""
    rows = [_normalize_row(field, {j: f for j, f in r.items() if f}) for r in rows]
    rows = [r for r in rows if r]
    rank = 0
    while rows:
        best = None
        for i, r in enumerate(rows):
            for j, f in r.items():
                key = (len(f), max(f) - min(f), len(r))
                if best is None or key < best[0]:
                    best = (key, i, j)
        _, pi, pj = best
        prow = rows.pop(pi)
        p = prow[pj]
        rank += 1
        nxt = []
        for r in rows:
            c = r.get(pj)
            if c is None:
                nxt.append(r)
                continue
            out = {}
            for j in set(r) | set(prow):
                if j == pj:
                    continue
                a = _lmul(field, p, r[j]) if j in r else {}
                b = _lmul(field, c, prow[j]) if j in prow else {}
                v = _lsub(field, a, b)
                if v:
                    out[j] = v
            if out:
                nxt.append(_normalize_row(field, out))
        rows = nxt
    return rank
