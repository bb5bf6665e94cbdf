"""Exact linear algebra over a prime field or the rationals.

Vectors are stored natively per field: Python ``int`` bitsets for GF(2) and
``{index: value}`` dictionaries otherwise.  Every subspace keeps its basis in
reduced echelon form whose pivot is the lowest-index nonzero coordinate, so
equal subspaces have identical bases.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import AmbientMismatch, NotASubspace, NotComposable, NotInvariant, ValidationError

_ids = itertools.count(1)
_duals: dict[int, "AmbientSpace"] = {}
_coord_spaces: dict[tuple, "AmbientSpace"] = {}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n**0.5) + 1):
        if n % d == 0:
            return False
    return True


# ---------------------------------------------------------------- fields


class _BitOps:
    """GF(2) vectors as int bitsets."""

    def __init__(self, field: "FieldSpec"):
        self.field = field

    def zero(self) -> int:
        return 0

    def unit(self, i: int) -> int:
        return 1 << i

    def from_dict(self, d: dict) -> int:
        v = 0
        for i, c in d.items():
            if int(c) % 2:
                v ^= 1 << i
        return v

    def indices(self, v: int) -> Iterator[int]:
        while v:
            low = v & -v
            yield low.bit_length() - 1
            v ^= low

    def items(self, v: int) -> Iterator[tuple[int, int]]:
        for i in self.indices(v):
            yield i, 1

    def to_dict(self, v: int) -> dict:
        return {i: 1 for i in self.indices(v)}

    def get(self, v: int, i: int) -> int:
        return (v >> i) & 1

    def is_zero(self, v: int) -> bool:
        return v == 0

    def lead(self, v: int) -> int:
        return (v & -v).bit_length() - 1

    def top(self, v: int) -> int:
        return v.bit_length() - 1

    def axpy(self, v: int, c, w: int) -> int:
        return v ^ w if c & 1 else v

    def add(self, v: int, w: int) -> int:
        return v ^ w

    def scale(self, v: int, c) -> int:
        return v if c & 1 else 0

    def nnz(self, v: int) -> int:
        return bin(v).count("1")

    def key(self, v: int):
        return v

    def remap(self, v: int, mapping: dict) -> int:
        out = 0
        for i in self.indices(v):
            j = mapping.get(i)
            if j is not None:
                out ^= 1 << j
        return out


class _DictOps:
    """Sparse dictionary vectors over GF(p), p odd, or over Q."""

    def __init__(self, field: "FieldSpec"):
        self.field = field
        self.p = field.p

    def zero(self) -> dict:
        return {}

    def unit(self, i: int) -> dict:
        return {i: self.field.one}

    def from_dict(self, d: dict) -> dict:
        out = {}
        for i, c in d.items():
            c = self.field.elem(c)
            if c:
                out[i] = c
        return out

    def indices(self, v: dict) -> Iterator[int]:
        return iter(sorted(v))

    def items(self, v: dict):
        return ((i, v[i]) for i in sorted(v))

    def to_dict(self, v: dict) -> dict:
        return dict(v)

    def get(self, v: dict, i: int):
        return v.get(i, 0)

    def is_zero(self, v: dict) -> bool:
        return not v

    def lead(self, v: dict) -> int:
        return min(v) if v else -1

    def top(self, v: dict) -> int:
        return max(v) if v else -1

    def axpy(self, v: dict, c, w: dict) -> dict:
        if not c or not w:
            return dict(v)
        out = dict(v)
        p = self.p
        for i, x in w.items():
            y = out.get(i, 0) + c * x
            if p:
                y %= p
            if y:
                out[i] = y
            else:
                out.pop(i, None)
        return out

    def add(self, v: dict, w: dict) -> dict:
        return self.axpy(v, 1, w)

    def scale(self, v: dict, c) -> dict:
        if not c:
            return {}
        p = self.p
        if p:
            return {i: (x * c) % p for i, x in v.items()}
        return {i: x * c for i, x in v.items()}

    def nnz(self, v: dict) -> int:
        return len(v)

    def key(self, v: dict):
        return tuple(sorted(v.items()))

    def remap(self, v: dict, mapping: dict) -> dict:
        out = {}
        for i, x in v.items():
            j = mapping.get(i)
            if j is not None:
                out[j] = x
        return out


@dataclass(frozen=True)
class FieldSpec:
    """A prime field GF(p) (kind ``fp``) or the rationals (kind ``q``)."""

    kind: str = "fp"
    p: int = 2

    def __post_init__(self):
        if self.kind == "fp":
            if not _is_prime(int(self.p)):
                raise ValidationError(f"field characteristic {self.p} is not prime")
        elif self.kind == "q":
            object.__setattr__(self, "p", 0)
        else:
            raise ValidationError(f"unknown field kind {self.kind!r}")
        ops = _BitOps(self) if self.kind == "fp" and self.p == 2 else _DictOps(self)
        object.__setattr__(self, "_ops", ops)

    @classmethod
    def gf(cls, p: int = 2) -> "FieldSpec":
        return cls("fp", p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls("q", 0)

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        t = str(text).strip().lower()
        if t in ("q", "qq", "rationals"):
            return cls.rationals()
        if t.startswith("fp:") or t.startswith("gf:"):
            return cls.gf(int(t[3:]))
        if t in ("fp", "gf2", "z2"):
            return cls.gf(2)
        raise ValidationError(f"cannot parse field spec {text!r}")

    def __str__(self) -> str:
        return "q" if self.kind == "q" else f"fp:{self.p}"

    @property
    def ops(self):
        return self._ops

    @property
    def is_gf2(self) -> bool:
        return self.kind == "fp" and self.p == 2

    @property
    def one(self):
        return Fraction(1) if self.kind == "q" else 1

    @property
    def zero(self):
        return Fraction(0) if self.kind == "q" else 0

    def elem(self, x):
        if self.kind == "q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == "q":
            return 1 / Fraction(a)
        return pow(int(a), -1, self.p)

    def neg(self, a):
        return -a if self.kind == "q" else (-a) % self.p

    def mul(self, a, b):
        return a * b if self.kind == "q" else (a * b) % self.p

    def add(self, a, b):
        return a + b if self.kind == "q" else (a + b) % self.p

    def random_elem(self, rng):
        if self.kind == "q":
            return Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        return rng.randrange(self.p)


GF2 = FieldSpec.gf(2)


# ---------------------------------------------------------------- spaces


@dataclass(frozen=True)
class AmbientSpace:
    """A tagged coordinate space of fixed dimension."""

    id: int
    dim: int
    label: str = ""

    @classmethod
    def new(cls, dim: int, label: str = "") -> "AmbientSpace":
        if dim < 0:
            raise ValidationError("negative dimension")
        return cls(next(_ids), int(dim), label)

    def dual(self) -> "AmbientSpace":
        d = _duals.get(self.id)
        if d is None:
            d = AmbientSpace.new(self.dim, self.label + "*")
            _duals[self.id] = d
            _duals[d.id] = self
        return d

    def __repr__(self) -> str:
        tag = f" {self.label}" if self.label else ""
        return f"<space#{self.id}{tag} dim={self.dim}>"


# ---------------------------------------------------------------- echelon tables


class Echelon:
    """Incremental echelon table with optional tag tracking.

    ``mode='min'`` pivots on the lowest index, ``mode='max'`` on the highest
    (the convention of boundary-matrix reduction).  Each stored vector is
    normalised to 1 at its pivot; ``reduce`` clears every pivot position.
    """

    def __init__(self, field: FieldSpec, mode: str = "min"):
        self.field = field
        self.ops = field.ops
        self.mode = mode
        self.vecs: dict[int, object] = {}
        self.tags: dict[int, object] = {}
        self.mask = 0

    def __len__(self) -> int:
        return len(self.vecs)

    def pivot_of(self, v) -> int:
        return self.ops.lead(v) if self.mode == "min" else self.ops.top(v)

    def reduce(self, v, tag=None):
        if self.field.is_gf2:
            return self._reduce_bits(v, tag)
        return self._reduce_dict(v, tag)

    def _reduce_bits(self, v: int, tag):
        vecs, tags, mask = self.vecs, self.tags, self.mask
        m = v & mask
        if self.mode == "min":
            while m:
                i = (m & -m).bit_length() - 1
                v ^= vecs[i]
                if tag is not None:
                    tag ^= tags[i]
                m = v & mask
        else:
            while m:
                i = m.bit_length() - 1
                v ^= vecs[i]
                if tag is not None:
                    tag ^= tags[i]
                m = v & mask
        return v, tag

    def _reduce_dict(self, v: dict, tag):
        vecs, tags = self.vecs, self.tags
        if not vecs:
            return dict(v), tag
        p = self.field.p
        sign = 1 if self.mode == "min" else -1
        v = dict(v)
        heap = [sign * i for i in v if i in vecs]
        heapq.heapify(heap)
        ops = self.ops
        while heap:
            i = sign * heapq.heappop(heap)
            c = v.get(i)
            if not c:
                continue
            for k, x in vecs[i].items():
                y = v.get(k, 0) - c * x
                if p:
                    y %= p
                if y:
                    if k not in v and k in vecs:
                        heapq.heappush(heap, sign * k)
                    v[k] = y
                else:
                    v.pop(k, None)
            if tag is not None:
                tag = ops.axpy(tag, -c if not p else (p - c) % p, tags[i])
        return v, tag

    def express(self, v):
        """Return ``(rem, combo)`` with ``v = rem + sum c_i vec_i`` and combo = sum c_i tag_i."""
        rem, tag = self.reduce(v, self.ops.zero())
        if not self.field.is_gf2:
            tag = self.ops.scale(tag, self.field.neg(self.field.one))
        return rem, tag

    def insert(self, v, tag=None):
        """Reduce ``v`` and store the remainder.

        Returns ``(pivot, tag)``; pivot is ``None`` when ``v`` was dependent,
        in which case the returned tag records the dependency.
        """
        v, tag = self.reduce(v, tag)
        if self.ops.is_zero(v):
            return None, tag
        piv = self.pivot_of(v)
        c = self.ops.get(v, piv)
        if c != 1:
            ci = self.field.inv(c)
            v = self.ops.scale(v, ci)
            if tag is not None:
                tag = self.ops.scale(tag, ci)
        self.store(piv, v, tag)
        return piv, tag

    def store(self, piv: int, v, tag=None) -> None:
        self.vecs[piv] = v
        self.tags[piv] = tag
        if self.field.is_gf2:
            self.mask |= 1 << piv


def rref(field: FieldSpec, vectors: Iterable) -> list:
    """Canonical reduced echelon basis of the span, sorted by pivot."""
    ech = Echelon(field, "min")
    for v in vectors:
        ech.insert(v)
    pivots = sorted(ech.vecs)
    done = Echelon(field, "min")
    for piv in reversed(pivots):
        v, _ = done.reduce(ech.vecs[piv])
        done.store(piv, v)
    return [done.vecs[p] for p in pivots]


# ---------------------------------------------------------------- linear maps


class LinMap:
    """A matrix with declared domain and codomain, stored by columns."""

    __slots__ = ("field", "domain", "codomain", "cols")

    def __init__(self, field: FieldSpec, domain: AmbientSpace, codomain: AmbientSpace, cols: Sequence):
        cols = tuple(cols)
        if len(cols) != domain.dim:
            raise ValidationError(f"{len(cols)} columns for a domain of dim {domain.dim}")
        ops = field.ops
        for c in cols:
            if not ops.is_zero(c) and ops.top(c) >= codomain.dim:
                raise ValidationError("column entry outside the codomain")
        self.field = field
        self.domain = domain
        self.codomain = codomain
        self.cols = cols

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence], domain=None, codomain=None) -> "LinMap":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else (domain.dim if domain is not None else 0)
        domain = domain or AmbientSpace.new(ncols)
        codomain = codomain or AmbientSpace.new(nrows)
        if nrows != codomain.dim or ncols != domain.dim:
            raise ValidationError("matrix shape does not match the declared spaces")
        ops = field.ops
        cols = [ops.from_dict({i: rows[i][j] for i in range(nrows) if rows[i][j]}) for j in range(ncols)]
        return cls(field, domain, codomain, cols)

    @classmethod
    def identity(cls, field: FieldSpec, space: AmbientSpace) -> "LinMap":
        return cls(field, space, space, [field.ops.unit(i) for i in range(space.dim)])

    @classmethod
    def zero(cls, field: FieldSpec, domain: AmbientSpace, codomain: AmbientSpace) -> "LinMap":
        return cls(field, domain, codomain, [field.ops.zero()] * domain.dim)

    def __call__(self, x):
        ops = self.field.ops
        if self.field.is_gf2:
            out = 0
            cols = self.cols
            while x:
                low = x & -x
                out ^= cols[low.bit_length() - 1]
                x ^= low
            return out
        out = {}
        for j, c in x.items():
            out = ops.axpy(out, c, self.cols[j])
        return out

    def compose(self, other: "LinMap") -> "LinMap":
        """self after other."""
        if other.codomain != self.domain:
            raise NotComposable(f"{other.codomain} is not {self.domain}")
        return LinMap(self.field, other.domain, self.codomain, [self(c) for c in other.cols])

    __matmul__ = compose

    def __add__(self, other: "LinMap") -> "LinMap":
        self._same_shape(other)
        ops = self.field.ops
        return LinMap(self.field, self.domain, self.codomain, [ops.add(a, b) for a, b in zip(self.cols, other.cols)])

    def __sub__(self, other: "LinMap") -> "LinMap":
        return self + other.scaled(self.field.neg(self.field.one))

    def scaled(self, c) -> "LinMap":
        ops = self.field.ops
        return LinMap(self.field, self.domain, self.codomain, [ops.scale(col, c) for col in self.cols])

    def _same_shape(self, other: "LinMap") -> None:
        if other.domain != self.domain or other.codomain != self.codomain:
            raise AmbientMismatch("maps have different domains or codomains")

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        ops = self.field.ops
        return (
            self.domain == other.domain
            and self.codomain == other.codomain
            and all(ops.key(a) == ops.key(b) for a, b in zip(self.cols, other.cols))
        )

    __hash__ = None

    def rows(self) -> list[list]:
        ops = self.field.ops
        out = [[self.field.zero] * self.domain.dim for _ in range(self.codomain.dim)]
        for j, c in enumerate(self.cols):
            for i, x in ops.items(c):
                out[i][j] = x
        return out

    def transpose(self) -> "LinMap":
        ops = self.field.ops
        acc: list[dict] = [dict() for _ in range(self.codomain.dim)]
        for j, c in enumerate(self.cols):
            for i, x in ops.items(c):
                acc[i][j] = x
        cols = [ops.from_dict(d) for d in acc]
        return LinMap(self.field, self.codomain.dual(), self.domain.dual(), cols)

    def rank(self) -> int:
        ech = Echelon(self.field, "min")
        for c in self.cols:
            ech.insert(c)
        return len(ech)

    def is_zero(self) -> bool:
        return all(self.field.ops.is_zero(c) for c in self.cols)

    def is_injective(self) -> bool:
        return self.rank() == self.domain.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.codomain.dim

    def is_iso(self) -> bool:
        return self.domain.dim == self.codomain.dim and self.is_injective()

    def __repr__(self) -> str:
        return f"LinMap({self.domain!r} -> {self.codomain!r})"


# ---------------------------------------------------------------- subspaces


class Subspace:
    """A subspace of an ambient space with canonical reduced echelon basis."""

    __slots__ = ("ambient", "field", "basis", "pivots", "_table", "_keys")

    def __init__(self, ambient: AmbientSpace, field: FieldSpec, basis: Sequence, _canonical: bool = False):
        if not _canonical:
            basis = rref(field, basis)
        ops = field.ops
        self.ambient = ambient
        self.field = field
        self.basis = tuple(basis)
        self.pivots = tuple(ops.lead(b) for b in self.basis)
        self._table = None
        self._keys = None

    @classmethod
    def span(cls, ambient: AmbientSpace, field: FieldSpec, vectors: Iterable) -> "Subspace":
        return cls(ambient, field, list(vectors))

    @classmethod
    def zero(cls, ambient: AmbientSpace, field: FieldSpec) -> "Subspace":
        return cls(ambient, field, (), _canonical=True)

    @classmethod
    def full(cls, ambient: AmbientSpace, field: FieldSpec) -> "Subspace":
        ops = field.ops
        return cls(ambient, field, [ops.unit(i) for i in range(ambient.dim)], _canonical=True)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def table(self) -> Echelon:
        if self._table is None:
            t = Echelon(self.field, "min")
            for piv, b in zip(self.pivots, self.basis):
                t.store(piv, b)
            self._table = t
        return self._table

    def contains(self, v) -> bool:
        r, _ = self.table().reduce(v)
        return self.field.ops.is_zero(r)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coords(self, v):
        """Coordinates of ``v`` in the echelon basis."""
        if not self.contains(v):
            raise NotASubspace("vector is not in the subspace")
        ops = self.field.ops
        return ops.from_dict({k: ops.get(v, piv) for k, piv in enumerate(self.pivots)})

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def keys(self) -> tuple:
        if self._keys is None:
            ops = self.field.ops
            self._keys = tuple(ops.key(b) for b in self.basis)
        return self._keys

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient == other.ambient and self.field == other.field and self.keys() == other.keys()

    def __hash__(self) -> int:
        return hash((self.ambient.id, self.keys()))

    @property
    def space(self) -> AmbientSpace:
        """Coordinate space of this subspace (shared by equal subspaces)."""
        key = (self.ambient.id, str(self.field), self.keys())
        sp = _coord_spaces.get(key)
        if sp is None:
            sp = AmbientSpace.new(self.dim, f"sub({self.ambient.label})")
            _coord_spaces[key] = sp
        return sp

    def inclusion(self) -> LinMap:
        return LinMap(self.field, self.space, self.ambient, self.basis)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in {self.ambient!r})"


def _check_ambient(u: Subspace, v: Subspace) -> None:
    if u.ambient != v.ambient or u.field != v.field:
        raise AmbientMismatch(f"{u.ambient!r} vs {v.ambient!r}")


def kernel(m: LinMap) -> Subspace:
    ops = m.field.ops
    ech = Echelon(m.field, "min")
    rel = []
    for j, c in enumerate(m.cols):
        piv, tag = ech.insert(c, ops.unit(j))
        if piv is None:
            rel.append(tag)
    return Subspace(m.domain, m.field, rel)


def image(m: LinMap) -> Subspace:
    return Subspace(m.codomain, m.field, m.cols)


def sum_(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    return Subspace(u.ambient, u.field, list(u.basis) + list(v.basis))


def intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_ambient(u, v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.ambient, u.field)
    ops = u.field.ops
    ech = Echelon(u.field, "min")
    for b in v.basis:
        ech.insert(b, ops.zero())
    out = []
    for i, b in enumerate(u.basis):
        piv, tag = ech.insert(b, ops.unit(i))
        if piv is None:
            acc = ops.zero()
            for k, c in ops.items(tag):
                acc = ops.axpy(acc, c, u.basis[k])
            out.append(acc)
    return Subspace(u.ambient, u.field, out)


def preimage(m: LinMap, target: Subspace) -> Subspace:
    """{x : m x in target}."""
    if target.ambient != m.codomain:
        raise AmbientMismatch("target subspace does not live in the codomain")
    ops = m.field.ops
    ech = Echelon(m.field, "min")
    for b in target.basis:
        ech.insert(b, ops.zero())
    rel = []
    for j, c in enumerate(m.cols):
        piv, tag = ech.insert(c, ops.unit(j))
        if piv is None:
            rel.append(tag)
    return Subspace(m.domain, m.field, rel)


def image_of(m: LinMap, sub: Subspace) -> Subspace:
    if sub.ambient != m.domain:
        raise AmbientMismatch("subspace does not live in the domain")
    return Subspace(m.codomain, m.field, [m(b) for b in sub.basis])


class Quotient:
    """The quotient num/den of two nested subspaces of one ambient space."""

    __slots__ = ("num", "den", "space", "lifts", "_table", "_projection")

    def __init__(self, num: Subspace, den: Subspace, label: str = ""):
        _check_ambient(num, den)
        if not den.issubspace(num):
            raise NotASubspace("denominator is not contained in the numerator")
        field = num.field
        ops = field.ops
        table = Echelon(field, "min")
        for piv, b in zip(den.pivots, den.basis):
            table.store(piv, b, ops.zero())
        lifts = []
        for b in num.basis:
            piv, _ = table.insert(b, ops.unit(len(lifts)))
            if piv is not None:
                lifts.append(b)
        self.num = num
        self.den = den
        self.lifts = tuple(lifts)
        self.space = AmbientSpace.new(len(lifts), label or "quot")
        self._table = table
        self._projection = None

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @property
    def ambient(self) -> AmbientSpace:
        return self.num.ambient

    def project(self, v):
        """Class of an ambient vector lying in the numerator."""
        rem, tag = self._table.express(v)
        if not self.field.ops.is_zero(rem):
            raise NotASubspace("vector is not in the numerator")
        return tag

    def contains_class(self, v) -> bool:
        rem, _ = self._table.reduce(v)
        return self.field.ops.is_zero(rem)

    def lift(self, q):
        ops = self.field.ops
        acc = ops.zero()
        for k, c in ops.items(q):
            acc = ops.axpy(acc, c, self.lifts[k])
        return acc

    @property
    def projection(self) -> LinMap:
        """Projection from numerator coordinates onto the quotient."""
        if self._projection is None:
            self._projection = LinMap(self.field, self.num.space, self.space, [self.project(b) for b in self.num.basis])
        return self._projection

    def ambient_projection(self, sub: Subspace | None = None) -> LinMap:
        """Projection restricted to ``sub`` (defaults to the numerator), in ``sub`` coordinates."""
        sub = sub or self.num
        return LinMap(self.field, sub.space, self.space, [self.project(b) for b in sub.basis])

    def __iter__(self):
        yield self.space
        yield self.projection

    def __repr__(self) -> str:
        return f"Quotient(dim={self.dim}: {self.num.dim}/{self.den.dim})"


def quotient(v: Subspace, u: Subspace, label: str = "") -> Quotient:
    return Quotient(v, u, label)


def induced_map(m: LinMap | None, src, tgt, mode: str = "restrict") -> LinMap:
    """Map induced by ``m`` (identity when ``None``) on subspaces or quotients.

    ``restrict``: src, tgt are Subspaces with m(src) inside tgt.
    ``descend``: src, tgt are Quotients with m(num) in num and m(den) in den.
    """
    field = src.field
    if m is None:
        if src.ambient != tgt.ambient:
            raise AmbientMismatch("identity between different ambient spaces")
        apply = lambda x: x
    else:
        if m.domain != src.ambient or m.codomain != tgt.ambient:
            raise AmbientMismatch("map does not match the given subspaces")
        apply = m
    if mode == "restrict":
        cols = []
        for b in src.basis:
            y = apply(b)
            if not tgt.contains(y):
                raise NotInvariant("image leaves the target subspace")
            cols.append(tgt.coords(y))
        return LinMap(field, src.space, tgt.space, cols)
    if mode in ("descend", "descend-to-quotients"):
        for b in src.den.basis:
            if not tgt.den.contains(apply(b)):
                raise NotInvariant("denominator is not mapped into the target denominator")
        cols = []
        for lift in src.lifts:
            y = apply(lift)
            if not tgt.contains_class(y):
                raise NotInvariant("numerator is not mapped into the target numerator")
            cols.append(tgt.project(y))
        return LinMap(field, src.space, tgt.space, cols)
    raise ValidationError(f"unknown mode {mode!r}")


def direct_sum(field: FieldSpec, spaces: Sequence[AmbientSpace], label: str = "") -> tuple[AmbientSpace, list[LinMap], list[LinMap]]:
    """Direct sum with its injections and projections."""
    total_dim = 0
    for s in spaces:
        total_dim += s.dim
    total = AmbientSpace.new(total_dim, label or "sum")
    ops = field.ops
    inj, proj = [], []
    off = 0
    for s in spaces:
        inj.append(LinMap(field, s, total, [ops.unit(off + i) for i in range(s.dim)]))
        pc = [ops.zero()] * total.dim
        for i in range(s.dim):
            pc[off + i] = ops.unit(i)
        proj.append(LinMap(field, total, s, pc))
        off += s.dim
    return total, inj, proj


def hstack(maps: Sequence[LinMap], domain: AmbientSpace) -> LinMap:
    """[m1 | m2 | ...] as a map from ``domain`` (the direct sum of the domains)."""
    cols = [c for m in maps for c in m.cols]
    return LinMap(maps[0].field, domain, maps[0].codomain, cols)


def vstack(maps: Sequence[LinMap], codomain: AmbientSpace) -> LinMap:
    """Stacked map into ``codomain`` (the direct sum of the codomains)."""
    field = maps[0].field
    ops = field.ops
    dom = maps[0].domain
    cols = []
    for j in range(dom.dim):
        acc = {}
        off = 0
        for m in maps:
            for i, x in ops.items(m.cols[j]):
                acc[off + i] = x
            off += m.codomain.dim
        cols.append(ops.from_dict(acc))
    return LinMap(field, dom, codomain, cols)


def cokernel(m: LinMap, label: str = "") -> Quotient:
    return Quotient(Subspace.full(m.codomain, m.field), image(m), label or "coker")


def random_map(field: FieldSpec, domain: AmbientSpace, codomain: AmbientSpace, rng, density: float = 0.5, rank: int | None = None) -> LinMap:
    """Random matrix; with ``rank`` given, a product of two random factors."""
    ops = field.ops
    if rank is not None:
        mid = AmbientSpace.new(rank)
        a = random_map(field, domain, mid, rng, density)
        b = random_map(field, mid, codomain, rng, density)
        return b @ a
    cols = []
    for _ in range(domain.dim):
        d = {}
        for i in range(codomain.dim):
            if rng.random() < density:
                c = field.random_elem(rng)
                if c:
                    d[i] = c
        cols.append(ops.from_dict(d))
    return LinMap(field, domain, codomain, cols)


# public aliases matching the operation names
sum = sum_  # noqa: A001
