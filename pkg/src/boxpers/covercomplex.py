"""Simplicial complexes with a rational 1-cocycle, and windows of the cyclic cover.

The cover of X determined by the cocycle has one sheet per element of the
period group p*Z.  A window is the full subcomplex of the cover on sheets
kMin..kMax, i.e. on lifted vertices with height in [kMin*p, (kMax+1)*p).
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable

from .errors import (
    EmptyComplex,
    NotACocycle,
    NotStabilized,
    OutOfSafeRange,
    PeriodRankTooHigh,
    SchemaError,
    WindowTooSmall,
)
from .fieldlin import FieldSpec, GF2, LinMap, Subspace, intersect
from .homology import CellComplex, PairHomology, Persistence, _union


def parse_rational(x) -> Fraction:
    """Exact rational from an int or a "num/den" string; floats are rejected."""
    if isinstance(x, bool):
        raise SchemaError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {x!r}") from exc
    raise SchemaError(f"expected an exact rational, got {type(x).__name__} {x!r}")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- input types


@dataclass
class SimplicialComplexSpec:
    vertices: list
    simplices: list[list[tuple[int, ...]]]
    closed_manifold: bool = False

    @property
    def n(self) -> int:
        return len(self.simplices) - 1

    @cached_property
    def vindex(self) -> dict:
        return {v: i for i, v in enumerate(self.vertices)}

    def count(self, d: int) -> int:
        return len(self.simplices[d]) if 0 <= d < len(self.simplices) else 0

    @classmethod
    def build(cls, vertices: Iterable, top_simplices: Iterable[Iterable], closed_manifold: bool = False) -> "SimplicialComplexSpec":
        """Complex generated by the given simplices (all faces added)."""
        vertices = list(vertices)
        vi = {v: i for i, v in enumerate(vertices)}
        cells: dict[int, set] = {0: {(i,) for i in range(len(vertices))}}
        for s in top_simplices:
            t = tuple(sorted(vi[v] for v in s))
            k = len(t)
            for mask in range(1, 1 << k):
                face = tuple(t[i] for i in range(k) if mask >> i & 1)
                cells.setdefault(len(face) - 1, set()).add(face)
        top = max(cells) if cells else -1
        simp = [sorted(cells.get(d, ())) for d in range(top + 1)]
        return cls(vertices, simp, closed_manifold)


@dataclass
class OneFormCocycle:
    """Edge values omega(tail, head); omega(head, tail) = -omega(tail, head)."""

    values: dict[tuple[int, int], Fraction]

    def __call__(self, u: int, v: int) -> Fraction:
        if (u, v) in self.values:
            return self.values[(u, v)]
        return -self.values[(v, u)]

    def negated(self) -> "OneFormCocycle":
        return OneFormCocycle({e: -x for e, x in self.values.items()})

    def plus_exact(self, g: dict[int, Fraction]) -> "OneFormCocycle":
        """omega + dg for a vertex function g."""
        return OneFormCocycle({(u, v): x + g.get(v, 0) - g.get(u, 0) for (u, v), x in self.values.items()})


@dataclass
class InputDocument:
    field: FieldSpec
    spec: SimplicialComplexSpec
    form: OneFormCocycle

    def to_json(self) -> dict:
        return document_json(self.field, self.spec, self.form)


def document_json(field: FieldSpec, spec: SimplicialComplexSpec, form: OneFormCocycle) -> dict:
    doc: dict[str, Any] = {"field": "Q" if field.kind == "q" else "Fp"}
    if field.kind == "fp":
        doc["p"] = field.p
    doc["complex"] = {
        "vertices": list(spec.vertices),
        "simplices": {str(d): [[spec.vertices[i] for i in s] for s in spec.simplices[d]] for d in range(1, spec.n + 1)},
    }
    doc["form"] = [
        {"edge": [spec.vertices[u], spec.vertices[v]], "value": format_rational(x)} for (u, v), x in sorted(form.values.items())
    ]
    doc["flags"] = {"closedManifold": bool(spec.closed_manifold)}
    return doc


def parse_document(doc: dict, field_override: FieldSpec | None = None) -> InputDocument:
    """Validate the JSON input document and build the complex and the form."""
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    if field_override is not None:
        fs = field_override
    else:
        kind = doc.get("field", "Fp")
        if kind == "Q":
            fs = FieldSpec.rationals()
        elif kind == "Fp":
            p = doc.get("p", 2)
            if not isinstance(p, int):
                raise SchemaError("p must be an integer")
            try:
                fs = FieldSpec.gf(p)
            except Exception as exc:
                raise SchemaError(str(exc)) from exc
        else:
            raise SchemaError(f"unknown field {kind!r}")
    cx = doc.get("complex")
    if not isinstance(cx, dict):
        raise SchemaError("missing complex")
    verts = cx.get("vertices", [])
    if not isinstance(verts, list):
        raise SchemaError("vertices must be a list")
    if not verts:
        raise EmptyComplex("complex has no vertices")
    if len(set(map(_hashable, verts))) != len(verts):
        raise SchemaError("duplicate vertex names")
    verts = [_hashable(v) for v in verts]
    vi = {v: i for i, v in enumerate(verts)}
    raw = cx.get("simplices", {})
    if isinstance(raw, list):
        raw = {str(len(s) - 1): [] for s in raw} | _group_by_dim(raw)
    if not isinstance(raw, dict):
        raise SchemaError("simplices must be keyed by dimension")
    simp: dict[int, set] = {0: {(i,) for i in range(len(verts))}}
    for dkey, lst in raw.items():
        try:
            d = int(dkey)
        except ValueError as exc:
            raise SchemaError(f"bad dimension key {dkey!r}") from exc
        for s in lst:
            try:
                t = tuple(sorted(vi[_hashable(v)] for v in s))
            except KeyError as exc:
                raise SchemaError(f"unknown vertex in simplex {s!r}") from exc
            if len(t) != d + 1 or len(set(t)) != d + 1:
                raise SchemaError(f"simplex {s!r} does not have dimension {d}")
            simp.setdefault(d, set()).add(t)
    top = max(d for d, s in simp.items() if s)
    simplices = [sorted(simp.get(d, ())) for d in range(top + 1)]
    for d in range(1, top + 1):
        have = set(simplices[d - 1])
        for s in simplices[d]:
            for i in range(len(s)):
                if s[:i] + s[i + 1 :] not in have:
                    raise SchemaError(f"face of {[verts[v] for v in s]} missing")
    flags = doc.get("flags", {}) or {}
    spec = SimplicialComplexSpec(verts, simplices, bool(flags.get("closedManifold", False)))
    values: dict[tuple[int, int], Fraction] = {}
    for item in doc.get("form", []):
        try:
            u, v = item["edge"]
            val = parse_rational(item["value"])
            key = (vi[_hashable(u)], vi[_hashable(v)])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad form entry {item!r}") from exc
        if key[0] > key[1]:
            key, val = (key[1], key[0]), -val
        if key in values and values[key] != val:
            raise SchemaError(f"conflicting values for edge {item['edge']!r}")
        values[key] = val
    edges = set(simplices[1]) if top >= 1 else set()
    for e in edges:
        if e not in values:
            raise SchemaError(f"no form value on edge {[verts[v] for v in e]}")
    for e in values:
        if e not in edges:
            raise SchemaError(f"form value on a non-edge {[verts[v] for v in e]}")
    return InputDocument(fs, spec, OneFormCocycle(values))


def _hashable(v):
    return tuple(v) if isinstance(v, list) else v


def _group_by_dim(lst) -> dict:
    out: dict[str, list] = {}
    for s in lst:
        out.setdefault(str(len(s) - 1), []).append(s)
    return out


def load_document(path, field_override: FieldSpec | None = None) -> InputDocument:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    return parse_document(doc, field_override)


# ---------------------------------------------------------------- validation


def _rational_gcd(a: Fraction, b: Fraction) -> Fraction:
    a, b = abs(Fraction(a)), abs(Fraction(b))
    if a == 0:
        return b
    if b == 0:
        return a
    den = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    return Fraction(math.gcd(int(a * den), int(b * den)), den)


@dataclass
class CriticalSet:
    values: list[Fraction]
    gap: Fraction
    period: Fraction


@dataclass
class CoverModel:
    """Validated complex and form: period, normalised heights and sheet shifts."""

    spec: SimplicialComplexSpec
    form: OneFormCocycle
    field: FieldSpec
    period: Fraction
    heights: list[Fraction]
    potential: list[Fraction]
    critical: CriticalSet
    maxspan: Fraction
    roots: list[int] = dc_field(default_factory=list)

    @property
    def trivial(self) -> bool:
        return self.period == 0

    def shifts(self, s: tuple[int, ...]) -> tuple[int, ...]:
        """Sheet offsets of the lift of base simplex s with its first vertex on sheet 0."""
        v0 = s[0]
        if self.trivial:
            return (0,) * len(s)
        out = []
        for v in s:
            k = (self.heights[v0] + (self.form(v0, v) if v != v0 else 0) - self.heights[v]) / self.period
            out.append(int(k))
        return tuple(out)

    @cached_property
    def margin(self) -> int:
        if self.trivial:
            return 0
        return max(1, math.ceil(self.maxspan / self.period))

    @property
    def min_sheets(self) -> int:
        return 2 * self.margin + 1

    def window(self, kmin: int, kmax: int) -> "CoverWindow":
        return build_window(self, kmin, kmax)

    def window_for(self, sheets: int) -> "CoverWindow":
        """Window with ``sheets`` sheets whose core contains sheet 0."""
        if self.trivial:
            return build_window(self, 0, 0)
        m = self.margin
        core = sheets - 2 * m
        if core < 1:
            raise WindowTooSmall(f"{sheets} sheets leave no core with margin {m}")
        lo = -((core - 1) // 2)
        return build_window(self, lo - m, lo + core - 1 + m)

    def critical_in(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        """Critical values of the lift in [lo, hi)."""
        if self.trivial:
            return [c for c in self.critical.values if lo <= c < hi]
        p = self.period
        out = []
        k = math.floor(lo / p) - 1
        while k * p < hi:
            for c in self.critical.values:
                x = c + k * p
                if lo <= x < hi:
                    out.append(x)
            k += 1
        return sorted(out)

    def negated(self) -> "CoverModel":
        return validate(self.spec, self.form.negated(), self.field)


def validate(spec: SimplicialComplexSpec, form: OneFormCocycle, field: FieldSpec = GF2) -> CoverModel:
    """Check the cocycle condition, find the period group and the critical set."""
    nv = len(spec.vertices)
    if nv == 0:
        raise EmptyComplex("complex has no vertices")
    for e, x in form.values.items():
        if not isinstance(x, Fraction) and not isinstance(x, int):
            raise SchemaError(f"edge value {x!r} is not an exact rational")
    if spec.n >= 2:
        for a, b, c in spec.simplices[2]:
            if form(a, b) + form(b, c) != form(a, c):
                raise NotACocycle(f"coboundary nonzero on triangle {[spec.vertices[v] for v in (a, b, c)]}")
    adj: dict[int, list[int]] = {v: [] for v in range(nv)}
    if spec.n >= 1:
        for u, v in spec.simplices[1]:
            adj[u].append(v)
            adj[v].append(u)
    pot: list[Fraction | None] = [None] * nv
    roots = []
    for r in range(nv):
        if pot[r] is not None:
            continue
        roots.append(r)
        pot[r] = Fraction(0)
        dq = deque([r])
        while dq:
            u = dq.popleft()
            for v in adj[u]:
                if pot[v] is None:
                    pot[v] = pot[u] + form(u, v)
                    dq.append(v)
    period = Fraction(0)
    periods = set()
    if spec.n >= 1:
        for u, v in spec.simplices[1]:
            c = pot[u] + form(u, v) - pot[v]
            if c:
                periods.add(c)
                period = _rational_gcd(period, c)
    # with exact rational periods the generated group is always cyclic
    if any((c / period).denominator != 1 for c in periods):
        raise PeriodRankTooHigh("periods do not generate a cyclic group")
    if period:
        heights = [x - math.floor(x / period) * period for x in pot]
    else:
        heights = list(pot)
    crit = sorted(set(heights))
    if period:
        diffs = [b - a for a, b in zip(crit, crit[1:])] + [crit[0] + period - crit[-1]]
    else:
        diffs = [b - a for a, b in zip(crit, crit[1:])]
    gap = min(diffs) if diffs else Fraction(1)
    model = CoverModel(spec, form, field, period, heights, list(pot), CriticalSet(crit, gap, period), Fraction(0), roots)
    span = Fraction(0)
    for d in range(1, spec.n + 1):
        for s in spec.simplices[d]:
            sh = model.shifts(s)
            hs = [heights[v] + k * period for v, k in zip(s, sh)]
            span = max(span, max(hs) - min(hs))
    model.maxspan = span
    return model


# ---------------------------------------------------------------- windows


class CoverWindow:
    """Full subcomplex of the cover on sheets kmin..kmax, with heights and collars."""

    def __init__(self, model: CoverModel, kmin: int, kmax: int, heights: list[Fraction] | None = None, cx: CellComplex | None = None, cells_tag=None):
        self.model = model
        self.kmin = kmin
        self.kmax = kmax
        self.sheets = kmax - kmin + 1
        nb = len(model.spec.vertices)
        S = self.sheets
        p = model.period
        if cx is None:
            cells: list[list[tuple]] = [[] for _ in range(model.spec.n + 1)]
            tags: list[list[tuple]] = [[] for _ in range(model.spec.n + 1)]
            for d in range(model.spec.n + 1):
                for s in model.spec.simplices[d]:
                    sh = model.shifts(s)
                    for k in range(kmin, kmax + 1):
                        ks = [k + x for x in sh]
                        if all(kmin <= x <= kmax for x in ks):
                            key = tuple(v * S + (x - kmin) for v, x in zip(s, ks))
                            cells[d].append(key)
                            tags[d].append((s, k))
            order = [sorted(range(len(cs)), key=lambda i, cs=cs: cs[i]) for cs in cells]
            cells = [[cs[i] for i in o] for cs, o in zip(cells, order)]
            tags = [[ts[i] for i in o] for ts, o in zip(tags, order)]
            cx = CellComplex(model.field, nb * S, cells)
            cells_tag = tags
        self.cx = cx
        self.tags = cells_tag
        if heights is None:
            heights = [model.heights[v] + (kmin + j) * p for v in range(nb) for j in range(S)]
        self.heights = heights
        self._cache: dict = {}

    # cover vertex id -> (base vertex, sheet)
    def vertex(self, i: int) -> tuple[int, int]:
        return divmod(i, self.sheets)[0], self.kmin + i % self.sheets

    @property
    def field(self) -> FieldSpec:
        return self.model.field

    @property
    def lo(self) -> Fraction:
        return self.kmin * self.model.period

    @property
    def hi(self) -> Fraction:
        return (self.kmax + 1) * self.model.period

    @cached_property
    def sub_values(self) -> list[list[Fraction]]:
        h = self.heights
        return [[max(h[v] for v in c) for c in cs] for cs in self.cx.cells]

    @cached_property
    def super_values(self) -> list[list[Fraction]]:
        h = self.heights
        return [[min(h[v] for v in c) for c in cs] for cs in self.cx.cells]

    @cached_property
    def bottom(self) -> list[set] | None:
        if self.model.trivial:
            return None
        cut = (self.kmin + self.model.margin) * self.model.period
        return self.cx.full_subcomplex(lambda v: self._base_h(v) < cut)

    @cached_property
    def top(self) -> list[set] | None:
        if self.model.trivial:
            return None
        cut = (self.kmax + 1 - self.model.margin) * self.model.period
        return self.cx.full_subcomplex(lambda v: self._base_h(v) >= cut)

    def _base_h(self, v: int) -> Fraction:
        b, k = self.vertex(v)
        return self.model.heights[b] + k * self.model.period

    @property
    def safe_lo(self) -> Fraction:
        if self.model.trivial:
            return Fraction(-(10**18))
        return (self.kmin + self.model.margin) * self.model.period

    @property
    def safe_hi(self) -> Fraction:
        if self.model.trivial:
            return Fraction(10**18)
        return (self.kmax + 1 - self.model.margin) * self.model.period

    @property
    def core_sheets(self) -> range:
        m = self.model.margin
        return range(self.kmin + m, self.kmax - m + 1)

    def is_safe(self, x: Fraction) -> bool:
        return self.safe_lo <= x < self.safe_hi

    def require_safe(self, *xs) -> None:
        for x in xs:
            if not self.is_safe(x):
                raise OutOfSafeRange(f"level {x} outside the safe range [{self.safe_lo}, {self.safe_hi})")

    def critical_values(self) -> list[Fraction]:
        """Critical values of the safe range of this window."""
        if self.model.trivial:
            return list(self.model.critical.values)
        return self.model.critical_in(self.safe_lo, self.safe_hi)

    def with_heights(self, heights: list[Fraction]) -> "CoverWindow":
        """Same cells, different lift (for comparing nearby forms)."""
        w = CoverWindow(self.model, self.kmin, self.kmax, heights, self.cx, self.tags)
        w._cache = {k: v for k, v in self._cache.items() if k[0] == "ambient"}
        return w

    def shift_map(self, k: int):
        """Vertex map of the deck translation by k sheets (None where it leaves the window)."""
        S = self.sheets
        out = {}
        for v in range(self.cx.nverts):
            b, j = divmod(v, S)
            if 0 <= j + k < S:
                out[v] = b * S + j + k
        return out

    def translate_chain(self, d: int, chain, k: int):
        """Deck translation of a d-chain by k sheets; None if it leaves the window."""
        vm = self.shift_map(k)
        ops = self.field.ops
        idx = self.cx.index[d]
        out = {}
        for i, c in ops.items(chain):
            cell = self.cx.cells[d][i]
            try:
                img = tuple(vm[v] for v in cell)
            except KeyError:
                return None
            j = idx.get(img)
            if j is None:
                return None
            out[j] = c
        return ops.from_dict(out)

    # ------------------------------------------------------------ subcomplexes

    def sublevel_complex(self, a: Fraction, strict: bool = False) -> list[set]:
        h = self.heights
        if strict:
            return self.cx.full_subcomplex(lambda v: h[v] < a)
        return self.cx.full_subcomplex(lambda v: h[v] <= a)

    def superlevel_complex(self, b: Fraction, strict: bool = False) -> list[set]:
        h = self.heights
        if strict:
            return self.cx.full_subcomplex(lambda v: h[v] > b)
        return self.cx.full_subcomplex(lambda v: h[v] >= b)

    # ------------------------------------------------------------ homology

    def rel_bottom(self, variant: str) -> list[set] | None:
        return self.bottom if variant == "bm" else None

    def rel_top(self, variant: str) -> list[set] | None:
        return self.top if variant == "bm" else None

    def ambient(self, r: int, variant: str) -> PairHomology:
        """H_r(W) (standard) or H_r(W, bottom + top collars) (Borel-Moore)."""
        key = ("ambient", r, variant)
        if key not in self._cache:
            L = _union(self.rel_bottom(variant), self.rel_top(variant))
            self._cache[key] = PairHomology(self.cx, r, None, L, f"H{r}")
        return self._cache[key]

    def sublevel_persistence(self, variant: str) -> Persistence:
        key = ("subpers", variant)
        if key not in self._cache:
            self._cache[key] = Persistence(self.cx, self.sub_values, self.rel_bottom(variant))
        return self._cache[key]

    def superlevel_persistence(self, variant: str) -> Persistence:
        key = ("superpers", variant)
        if key not in self._cache:
            self._cache[key] = Persistence(self.cx, self.super_values, self.rel_top(variant), negate=True)
        return self._cache[key]

    def level_homology(self, r: int, x: Fraction, variant: str, strict: bool = False) -> PairHomology:
        """H_r of the sublevel at x (rel the bottom collar for Borel-Moore), computed directly."""
        key = ("level", r, x, variant, strict)
        if key not in self._cache:
            K = self.sublevel_complex(x, strict)
            L = self.rel_bottom(variant)
            if L is not None:
                L = [a & b for a, b in zip(L, K)]
            self._cache[key] = PairHomology(self.cx, r, K, L, f"H{r}(<={x})")
        return self._cache[key]

    def pair_homology(self, r: int, a: Fraction, variant: str = "standard") -> PairHomology:
        """H_r(X_a, X_<a); Borel-Moore version relative to the bottom collar as well."""
        self.require_safe(a)
        key = ("pair", r, a, variant)
        if key not in self._cache:
            K = self.sublevel_complex(a)
            L = self.sublevel_complex(a, strict=True)
            if variant == "bm":
                L = _union(L, [x & y for x, y in zip(self.bottom or [set()] * len(K), K)]) if self.bottom else L
            self._cache[key] = PairHomology(self.cx, r, K, L, f"H{r}({a},<{a})")
        return self._cache[key]


def build_window(model: CoverModel, kmin: int, kmax: int) -> CoverWindow:
    if kmin > kmax:
        raise WindowTooSmall("kmin > kmax")
    if model.trivial:
        return CoverWindow(model, 0, 0)
    if kmax - kmin + 1 < 2:
        raise WindowTooSmall("a nontrivial period needs at least two sheets")
    return CoverWindow(model, kmin, kmax)


# ---------------------------------------------------------------- images and comparisons


def essential_images(w: CoverWindow, r: int, variant: str, side: str) -> list[tuple[Fraction, object]]:
    """(level, ambient coordinates) of essential sublevel or superlevel classes.

    ``I_a`` is spanned by the sublevel entries with level <= a, ``I^b`` by the
    superlevel entries with level >= b.
    """
    key = ("ess", r, variant, side)
    if key in w._cache:
        return w._cache[key]
    amb = w.ambient(r, variant)
    if side == "sub":
        pers = w.sublevel_persistence(variant)
        out = [(b.birth, amb.coords(b.rep)) for b in pers.essential(r)] if r <= pers.maxdim else []
    else:
        pers = w.superlevel_persistence(variant)
        out = [(-b.birth, amb.coords(b.rep)) for b in pers.essential(r)] if r <= pers.maxdim else []
    out.sort(key=lambda t: t[0], reverse=(side == "super"))
    w._cache[key] = out
    return out


def stabilized_image(w: CoverWindow, r: int, a: Fraction, variant: str = "standard", side: str = "sub") -> Subspace:
    """img(H_r(sublevel a) -> ambient) or, with side='super', the superlevel image at a."""
    amb = w.ambient(r, variant)
    gens = essential_images(w, r, variant, side)
    if side == "sub":
        vecs = [v for lvl, v in gens if lvl <= a]
    else:
        vecs = [v for lvl, v in gens if lvl >= a]
    return Subspace.span(amb.space, w.field, vecs)


def stabilized_image_family(model: CoverModel, r: int, a: Fraction, variant: str = "standard", max_sheets: int = 16) -> tuple[CoverWindow, Subspace]:
    """Grow windows by doubling until the image dimension at a (in sheet 0) is stable."""
    S = max(model.min_sheets, 3) if not model.trivial else 1
    prev = None
    while True:
        w = model.window_for(S)
        sub = stabilized_image(w, r, a, variant)
        near = Subspace.span(
            sub.ambient, w.field, [v for lvl, v in essential_images(w, r, variant, "sub") if a - model.period < lvl <= a]
        ) if not model.trivial else sub
        sig = (near.dim,)
        if model.trivial or (prev is not None and prev == sig):
            return w, sub
        prev = sig
        if 2 * S > max_sheets:
            raise NotStabilized(f"image at {a} not stable within {max_sheets} sheets")
        S *= 2


def theta_compare(w: CoverWindow, r: int, a: Fraction) -> dict:
    """Map from standard to Borel-Moore pair homology at level a, induced by chain inclusion."""
    std = w.pair_homology(r, a, "standard")
    bm = w.pair_homology(r, a, "bm")
    m = bm.map_from(std)
    return {
        "ok": m.is_iso(),
        "r": r,
        "a": a,
        "dim_standard": std.dim,
        "dim_bm": bm.dim,
        "rank": m.rank(),
    }
