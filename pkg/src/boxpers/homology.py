"""Simplicial chain complexes, relative homology with coordinates, persistence.

Chains are field vectors keyed by the index of a cell within its dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .fieldlin import AmbientSpace, Echelon, FieldSpec, LinMap, Quotient, Subspace, image, kernel


class CellComplex:
    """Finite simplicial complex; a cell is a sorted tuple of vertex ids."""

    def __init__(self, field: FieldSpec, nverts: int, cells: Sequence[Sequence[tuple]]):
        self.field = field
        self.nverts = nverts
        self.cells = [list(c) for c in cells]
        while self.cells and not self.cells[-1]:
            self.cells.pop()
        self.index = [{c: i for i, c in enumerate(cs)} for cs in self.cells]
        self._bd: dict[int, list] = {}

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    def count(self, d: int) -> int:
        return len(self.cells[d]) if 0 <= d < len(self.cells) else 0

    def boundary(self, d: int) -> list:
        """Boundary columns of the d-cells, in (d-1)-cell indices."""
        if d in self._bd:
            return self._bd[d]
        ops = self.field.ops
        if d <= 0 or d > self.top:
            cols = [ops.zero() for _ in range(self.count(d))]
        else:
            idx = self.index[d - 1]
            f = self.field
            cols = []
            for c in self.cells[d]:
                entries = {}
                for i in range(len(c)):
                    face = c[:i] + c[i + 1 :]
                    entries[idx[face]] = f.one if i % 2 == 0 else f.neg(f.one)
                cols.append(ops.from_dict(entries))
        self._bd[d] = cols
        return cols

    def full_subcomplex(self, keep_vertex) -> list[set]:
        """Per-dimension index sets of cells all of whose vertices pass ``keep_vertex``."""
        ok = [keep_vertex(v) for v in range(self.nverts)]
        return [{i for i, c in enumerate(cs) if all(ok[v] for v in c)} for cs in self.cells]

    def all_cells(self) -> list[set]:
        return [set(range(len(cs))) for cs in self.cells]


def _union(a: list[set] | None, b: list[set] | None) -> list[set] | None:
    if a is None:
        return b
    if b is None:
        return a
    return [x | y for x, y in zip(a, b)]


class PairHomology:
    """H_r(K, L) for subcomplexes L of K of a cell complex, with coordinates."""

    def __init__(self, cx: CellComplex, r: int, K: list[set] | None = None, L: list[set] | None = None, label: str = "H"):
        self.cx = cx
        self.r = r
        self.field = cx.field
        ops = self.field.ops

        def rel(d):
            if d < 0 or d > cx.top:
                return []
            return [i for i in range(cx.count(d)) if (K is None or i in K[d]) and (L is None or i not in L[d])]

        self.cells_r = rel(r)
        cells_lo = rel(r - 1)
        cells_hi = rel(r + 1)
        self.loc = {g: k for k, g in enumerate(self.cells_r)}
        loc_lo = {g: k for k, g in enumerate(cells_lo)}
        self.C = AmbientSpace.new(len(self.cells_r), f"C{r}")
        C_lo = AmbientSpace.new(len(cells_lo), f"C{r - 1}")
        C_hi = AmbientSpace.new(len(cells_hi), f"C{r + 1}")
        bd_r = cx.boundary(r) if 0 <= r <= cx.top else []
        bd_hi = cx.boundary(r + 1) if r + 1 <= cx.top else []
        d_r = LinMap(self.field, self.C, C_lo, [ops.remap(bd_r[g], loc_lo) for g in self.cells_r])
        d_hi = LinMap(self.field, C_hi, self.C, [ops.remap(bd_hi[g], self.loc) for g in cells_hi])
        self.Z = kernel(d_r)
        self.B = image(d_hi)
        self.q = Quotient(self.Z, self.B, label)

    @property
    def space(self) -> AmbientSpace:
        return self.q.space

    @property
    def dim(self) -> int:
        return self.q.dim

    def local(self, chain):
        return self.field.ops.remap(chain, self.loc)

    def coords(self, chain):
        """Class of a global r-chain that is a relative cycle of (K, L)."""
        return self.q.project(self.local(chain))

    def reps(self) -> list:
        """Global cycle representatives of the basis classes."""
        back = dict(enumerate(self.cells_r))
        return [self.field.ops.remap(v, back) for v in self.q.lifts]

    def map_from(self, other: "PairHomology") -> LinMap:
        """Map induced by inclusion of pairs, from ``other`` into this one."""
        return LinMap(self.field, other.space, self.space, [self.coords(z) for z in other.reps()])


@dataclass
class Bar:
    dim: int
    birth: Fraction
    death: Fraction | None
    cell: int
    killer: int | None
    rep: object

    def alive(self, x) -> bool:
        return self.birth <= x and (self.death is None or x < self.death)


class Persistence:
    """Boundary-matrix reduction of a filtered relative complex.

    ``values[d][i]`` is the filtration value of cell i in dimension d; cells
    of ``L`` are quotiented out.  ``negate`` orders by decreasing value and
    reports negated values, so the usual alive test applies to ``-x``.
    """

    def __init__(self, cx: CellComplex, values: Sequence[Sequence[Fraction]], L: list[set] | None = None, maxdim: int | None = None, negate: bool = False):
        self.cx = cx
        field = cx.field
        ops = field.ops
        maxdim = cx.top if maxdim is None else min(maxdim, cx.top)
        self.maxdim = maxdim
        sgn = -1 if negate else 1
        orders = []
        for d in range(min(maxdim + 1, cx.top) + 1):
            keep = [i for i in range(cx.count(d)) if L is None or i not in L[d]]
            keep.sort(key=lambda i: (sgn * values[d][i], cx.cells[d][i] if not negate else tuple(-v for v in cx.cells[d][i])))
            orders.append(keep)
        self.orders = orders
        pos = [{g: k for k, g in enumerate(o)} for o in orders]
        self.bars: list[list[Bar]] = [[] for _ in range(maxdim + 1)]
        zero_cols: list[dict] = []
        killed: list[dict] = []
        for d in range(len(orders)):
            ech = Echelon(field, "max")
            zc: dict = {}
            kd: dict = {}
            bd = cx.boundary(d)
            rowpos = pos[d - 1] if d > 0 else {}
            for j, g in enumerate(orders[d]):
                col = ops.remap(bd[g], rowpos) if d > 0 else ops.zero()
                piv, tag = ech.insert(col, ops.unit(j))
                if piv is None:
                    zc[j] = tag
                else:
                    kd[piv] = (j, ech.vecs[piv])
            zero_cols.append(zc)
            killed.append(kd)
        for d in range(maxdim + 1):
            if d >= len(orders):
                break
            back = dict(enumerate(orders[d]))
            kills = killed[d + 1] if d + 1 < len(killed) else {}
            hi_order = orders[d + 1] if d + 1 < len(orders) else []
            for j, tag in zero_cols[d].items():
                g = orders[d][j]
                birth = sgn * values[d][g]
                if j in kills:
                    k, vec = kills[j]
                    gk = hi_order[k]
                    death = sgn * values[d + 1][gk]
                    rep = ops.remap(vec, back)
                    self.bars[d].append(Bar(d, birth, death, g, gk, rep))
                else:
                    self.bars[d].append(Bar(d, birth, None, g, None, ops.remap(tag, back)))

    def essential(self, d: int) -> list[Bar]:
        return [b for b in self.bars[d] if b.death is None] if d <= self.maxdim else []

    def finite(self, d: int) -> list[Bar]:
        return [b for b in self.bars[d] if b.death is not None and b.death != b.birth] if d <= self.maxdim else []


def chain_support(field: FieldSpec, chain) -> Iterable[int]:
    return field.ops.indices(chain)
