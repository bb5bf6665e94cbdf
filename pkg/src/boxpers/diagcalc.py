"""Diagram calculus on finite-dimensional spaces.

Pushouts and pullbacks, kernels and cokernels of commutative squares, the
two subquotients attached to a composable triple, their factorization
sequences, finite-slab tower limits and limits of sub-surjection chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .errors import (
    AmbientMismatch,
    CodomainMismatch,
    ColumnsNotExact,
    DomainMismatch,
    LadderNotCommuting,
    NonCommuting,
    NotAFactorization,
    NotComposable,
    NotStabilized,
    NotSurjective,
    ValidationError,
)
from .fieldlin import (
    AmbientSpace,
    LinMap,
    Quotient,
    Subspace,
    cokernel,
    direct_sum,
    image,
    image_of,
    induced_map,
    kernel,
    preimage,
    sum_,
)

# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class SquareDiagram:
    """A --alpha1--> B1 --beta1--> C and A --alpha2--> B2 --beta2--> C."""

    alpha1: LinMap
    alpha2: LinMap
    beta1: LinMap
    beta2: LinMap

    def __post_init__(self):
        if self.alpha1.domain != self.alpha2.domain:
            raise DomainMismatch("alpha1 and alpha2 have different domains")
        if self.beta1.codomain != self.beta2.codomain:
            raise CodomainMismatch("beta1 and beta2 have different codomains")
        if self.beta1.domain != self.alpha1.codomain or self.beta2.domain != self.alpha2.codomain:
            raise NotComposable("square edges do not chain")

    @property
    def field(self):
        return self.alpha1.field

    def commutes(self) -> bool:
        return (self.beta1 @ self.alpha1) == (self.beta2 @ self.alpha2)

    def dual(self) -> "SquareDiagram":
        return SquareDiagram(
            self.beta1.transpose(), self.beta2.transpose(), self.alpha1.transpose(), self.alpha2.transpose()
        )


@dataclass(frozen=True)
class TripleComposite:
    """A --alpha--> B --beta--> C --gamma--> D."""

    alpha: LinMap
    beta: LinMap
    gamma: LinMap

    def __post_init__(self):
        if self.alpha.codomain != self.beta.domain or self.beta.codomain != self.gamma.domain:
            raise NotComposable("triple does not chain")

    @property
    def field(self):
        return self.alpha.field

    def dual(self) -> "TripleComposite":
        """(gamma*, beta*, alpha*)."""
        return TripleComposite(self.gamma.transpose(), self.beta.transpose(), self.alpha.transpose())


@dataclass
class Tower:
    """Finite slab of a tower; ``maps[k]`` goes from ``spaces[k]`` to ``spaces[k+1]``."""

    index: list[int]
    spaces: list[AmbientSpace]
    maps: list[LinMap]

    def __post_init__(self):
        if not self.spaces:
            raise ValidationError("empty tower")
        if len(self.index) != len(self.spaces) or len(self.maps) != len(self.spaces) - 1:
            raise ValidationError("tower index, spaces and maps are inconsistent")
        if any(b <= a for a, b in zip(self.index, self.index[1:])):
            raise ValidationError("tower index must be strictly ascending")
        for k, m in enumerate(self.maps):
            if m.domain != self.spaces[k] or m.codomain != self.spaces[k + 1]:
                raise NotComposable(f"tower map {k} does not match its spaces")

    @classmethod
    def from_maps(cls, maps: Sequence[LinMap], start: int = 0) -> "Tower":
        if not maps:
            raise ValidationError("use from_space for a one-term tower")
        spaces = [maps[0].domain] + [m.codomain for m in maps]
        return cls(list(range(start, start + len(spaces))), spaces, list(maps))

    def composite(self, j: int, k: int) -> LinMap:
        """Map from position j to position k (j <= k)."""
        field = self.maps[0].field if self.maps else None
        m = LinMap.identity(field, self.spaces[j])
        for t in range(j, k):
            m = self.maps[t] @ m
        return m


@dataclass(frozen=True)
class SubSurjection:
    """A surjection ``pi: A -> P`` together with a subspace ``sub`` of P."""

    pi: LinMap
    sub: Subspace

    def __post_init__(self):
        if self.sub.ambient != self.pi.codomain:
            raise AmbientMismatch("designated subspace does not live in the target of pi")
        if not self.pi.is_surjective():
            raise NotSurjective("pi is not surjective")


class PushoutResult(NamedTuple):
    space: AmbientSpace
    i2: LinMap
    i1: LinMap
    diag: LinMap


class PullbackResult(NamedTuple):
    space: AmbientSpace
    p1: LinMap
    p2: LinMap
    diag: LinMap


# ---------------------------------------------------------------- pushout / pullback


def pushout(alpha1: LinMap, alpha2: LinMap) -> PushoutResult:
    """B2 + B1 modulo {alpha2(a) - alpha1(a)}."""
    if alpha1.domain != alpha2.domain:
        raise DomainMismatch("pushout legs have different domains")
    field = alpha1.field
    S, (j2, j1), _ = direct_sum(field, [alpha2.codomain, alpha1.codomain], "B2+B1")
    rel = j2 @ alpha2 - j1 @ alpha1
    q = cokernel(rel, "pushout")
    proj = LinMap(field, S, q.space, [q.project(field.ops.unit(i)) for i in range(S.dim)])
    i2 = proj @ j2
    i1 = proj @ j1
    return PushoutResult(q.space, i2, i1, i1 @ alpha1)


def pullback(beta1: LinMap, beta2: LinMap) -> PullbackResult:
    """{(b1, b2) : beta1 b1 = beta2 b2} inside B1 + B2."""
    if beta1.codomain != beta2.codomain:
        raise CodomainMismatch("pullback legs have different codomains")
    field = beta1.field
    S, _, (q1, q2) = direct_sum(field, [beta1.domain, beta2.domain], "B1+B2")
    diff = beta1 @ q1 - beta2 @ q2
    K = kernel(diff)
    inc = K.inclusion()
    p1 = q1 @ inc
    p2 = q2 @ inc
    return PullbackResult(K.space, p1, p2, beta1 @ p1)


def _pullback_sub(beta1: LinMap, beta2: LinMap):
    field = beta1.field
    S, _, (q1, q2) = direct_sum(field, [beta1.domain, beta2.domain], "B1+B2")
    K = kernel(beta1 @ q1 - beta2 @ q2)
    return S, K


# ---------------------------------------------------------------- kernels of squares


def _require_commuting(d: SquareDiagram) -> None:
    if not d.commutes():
        raise NonCommuting("square does not commute")


def diagram_ker(d: SquareDiagram) -> Subspace:
    """Kernel of the induced map from A into the pullback of beta1, beta2."""
    _require_commuting(d)
    field = d.field
    S, K = _pullback_sub(d.beta1, d.beta2)
    ops = field.ops
    n1 = d.beta1.domain.dim
    cols = []
    for j in range(d.alpha1.domain.dim):
        e = ops.unit(j)
        v = ops.from_dict({**ops.to_dict(d.alpha1(e)), **{n1 + i: x for i, x in ops.to_dict(d.alpha2(e)).items()}})
        cols.append(K.coords(v))
    to_pb = LinMap(field, d.alpha1.domain, K.space, cols)
    return kernel(to_pb)


def diagram_coker(d: SquareDiagram) -> Quotient:
    """Cokernel of the induced map from the pushout of alpha1, alpha2 into C."""
    _require_commuting(d)
    field = d.field
    # image of the pushout in C is im beta1 + im beta2
    S, _, (q2, q1) = direct_sum(field, [d.beta2.domain, d.beta1.domain])
    q = cokernel(d.beta2 @ q2 + d.beta1 @ q1, "coker(D)")
    return q


def dual_map(m: LinMap) -> LinMap:
    return m.transpose()


def _pairing_invertible(field, rows: list, cols: list) -> bool:
    ops = field.ops
    n = len(rows)
    if n != len(cols):
        return False
    if n == 0:
        return True
    mat = []
    for r in rows:
        rd = ops.to_dict(r)
        row = []
        for c in cols:
            acc = field.zero
            for i, x in ops.to_dict(c).items():
                y = rd.get(i)
                if y:
                    acc = field.add(acc, field.mul(x, y))
            row.append(acc)
        mat.append(row)
    return LinMap.from_rows(field, mat).rank() == n


def check_dual_exchange(d: SquareDiagram) -> dict:
    """dim coker D = dim ker D* and dim ker D = dim coker D*, with the pairings."""
    dd = d.dual()
    coker_d = diagram_coker(d)
    ker_dd = diagram_ker(dd)
    ker_d = diagram_ker(d)
    coker_dd = diagram_coker(dd)
    pair1 = _pairing_invertible(d.field, list(ker_dd.basis), list(coker_d.lifts))
    pair2 = _pairing_invertible(d.field, list(coker_dd.lifts), list(ker_d.basis))
    ok = coker_d.dim == ker_dd.dim and ker_d.dim == coker_dd.dim and pair1 and pair2
    return {
        "ok": ok,
        "dim_coker": coker_d.dim,
        "dim_ker_dual": ker_dd.dim,
        "dim_ker": ker_d.dim,
        "dim_coker_dual": coker_dd.dim,
        "pairing_coker": pair1,
        "pairing_ker": pair2,
    }


# ---------------------------------------------------------------- triple subquotients


def omega_hat(t: TripleComposite) -> Quotient:
    """ker(gamma beta) / (alpha(ker gamma beta alpha) + ker beta), a quotient of a subspace of B."""
    gb = t.gamma @ t.beta
    num = kernel(gb)
    den = sum_(image_of(t.alpha, kernel(gb @ t.alpha)), kernel(t.beta))
    return Quotient(num, den, "omega_hat")


def _cokers(t: TripleComposite):
    ba = t.beta @ t.alpha
    gb = t.gamma @ t.beta
    gba = t.gamma @ ba
    return cokernel(ba), cokernel(t.beta), cokernel(gba), cokernel(gb)


def omega_under_full(t: TripleComposite) -> tuple[Quotient, Subspace]:
    """coker(beta alpha) and its subspace omega_under."""
    c_ba, c_b, c_gba, c_gb = _cokers(t)
    field = t.field
    C = t.beta.codomain
    D = t.gamma.codomain
    idC = LinMap.identity(field, C)
    idD = LinMap.identity(field, D)
    j1 = induced_map(idC, c_ba, c_b, "descend")
    i1 = induced_map(t.gamma, c_ba, c_gba, "descend")
    i2 = induced_map(t.gamma, c_b, c_gb, "descend")
    j2 = induced_map(idD, c_gba, c_gb, "descend")
    sq = SquareDiagram(j1, i1, i2, j2)
    return c_ba, diagram_ker(sq)


def omega_under(t: TripleComposite) -> Subspace:
    return omega_under_full(t)[1]


def omega_hat_map(src, tgt, m: LinMap | None) -> LinMap:
    """Map between omega_hat quotients induced by a map of middle spaces.

    ``src`` and ``tgt`` are triples or already computed quotients.
    """
    if isinstance(src, TripleComposite):
        src = omega_hat(src)
    if isinstance(tgt, TripleComposite):
        tgt = omega_hat(tgt)
    return induced_map(m, src, tgt, "descend")


def omega_under_map(src, tgt, m: LinMap | None) -> LinMap:
    """Map between omega_under subspaces induced by a map of third spaces.

    ``src`` and ``tgt`` are triples or pairs from ``omega_under_full``.
    """
    c1, w1 = omega_under_full(src) if isinstance(src, TripleComposite) else src
    c2, w2 = omega_under_full(tgt) if isinstance(tgt, TripleComposite) else tgt
    if m is None:
        m = LinMap.identity(c1.field, c1.ambient)
    L = induced_map(m, c1, c2, "descend")
    return induced_map(L, w1, w2, "restrict")


# ---------------------------------------------------------------- ladders


@dataclass(frozen=True)
class ExactColumn:
    """0 -> N --theta--> X' --vert--> X --lam--> M -> 0."""

    theta: LinMap
    vert: LinMap
    lam: LinMap

    def is_exact(self) -> bool:
        if self.theta.codomain != self.vert.domain or self.vert.codomain != self.lam.domain:
            return False
        return (
            self.theta.is_injective()
            and image(self.theta) == kernel(self.vert)
            and image(self.vert) == kernel(self.lam)
            and self.lam.is_surjective()
        )


def check_exact_row_equivalence(t: TripleComposite, tp: TripleComposite, columns: Sequence[ExactColumn]) -> dict:
    """Rows t' -> t joined by exact columns induce isomorphisms of both subquotients."""
    if len(columns) != 4:
        raise ValidationError("four columns are required")
    a, b, c, d = (col.vert for col in columns)
    rows_ok = (
        b @ tp.alpha == t.alpha @ a
        and c @ tp.beta == t.beta @ b
        and d @ tp.gamma == t.gamma @ c
    )
    # N and M rows are identities
    th = [col.theta for col in columns]
    la = [col.lam for col in columns]
    rows_ok = rows_ok and all(
        th[k].domain == th[0].domain and la[k].codomain == la[0].codomain for k in range(4)
    )
    if rows_ok:
        rows_ok = (
            tp.alpha @ th[0] == th[1]
            and tp.beta @ th[1] == th[2]
            and tp.gamma @ th[2] == th[3]
            and la[1] @ t.alpha == la[0]
            and la[2] @ t.beta == la[1]
            and la[3] @ t.gamma == la[2]
        )
    if not rows_ok:
        raise LadderNotCommuting("ladder squares do not commute")
    if not all(col.is_exact() for col in columns):
        raise ColumnsNotExact("a column is not exact")
    hat = omega_hat_map(tp, t, b)
    under = omega_under_map(tp, t, c)
    return {
        "ok": hat.is_iso() and under.is_iso(),
        "hat_dims": [hat.domain.dim, hat.codomain.dim],
        "under_dims": [under.domain.dim, under.codomain.dim],
        "hat_iso": hat.is_iso(),
        "under_iso": under.is_iso(),
    }


# ---------------------------------------------------------------- factorizations


def _short_exact(first: LinMap, second: LinMap) -> dict:
    inj = first.is_injective()
    surj = second.is_surjective()
    comp = (second @ first).is_zero()
    add = first.domain.dim + second.codomain.dim == first.codomain.dim
    return {
        "ok": inj and surj and comp and add,
        "dims": [first.domain.dim, first.codomain.dim, second.codomain.dim],
        "injective": inj,
        "surjective": surj,
        "composite_zero": comp,
        "additive": add,
    }


def factorization_triples(t: TripleComposite, where: str, f1: LinMap, f2: LinMap):
    """The three triples (left, middle, right) and the maps inducing the sequence arrows."""
    target = {"alpha": t.alpha, "beta": t.beta, "gamma": t.gamma}.get(where)
    if target is None:
        raise ValidationError(f"unknown factor position {where!r}")
    try:
        composite = f2 @ f1
    except NotComposable as exc:
        raise NotAFactorization(str(exc)) from exc
    if composite != target:
        raise NotAFactorization(f"f2 f1 does not equal {where}")
    if where == "alpha":
        left = TripleComposite(f1, t.beta @ f2, t.gamma)
        right = TripleComposite(f2, t.beta, t.gamma)
        hat_maps = (f2, None)
        under_maps = (None, None)
    elif where == "beta":
        left = TripleComposite(t.alpha, f1, f2)
        mid = TripleComposite(t.alpha, f1, t.gamma @ f2)
        right = t
        return left, mid, right, (None, None), (None, f2)
    else:
        left = TripleComposite(t.alpha, t.beta, f1)
        right = TripleComposite(t.alpha, f1 @ t.beta, f2)
        hat_maps = (None, None)
        under_maps = (None, f1)
    return left, t, right, hat_maps, under_maps


def factorization_sequences(t: TripleComposite, where: str, f1: LinMap, f2: LinMap) -> dict:
    """Check both short exact sequences attached to a factorization of one arrow."""
    left, mid, right, hat_maps, under_maps = factorization_triples(t, where, f1, f2)
    hats = [omega_hat(x) for x in (left, mid, right)]
    unders = [omega_under_full(x) for x in (left, mid, right)]
    h1 = omega_hat_map(hats[0], hats[1], hat_maps[0])
    h2 = omega_hat_map(hats[1], hats[2], hat_maps[1])
    u1 = omega_under_map(unders[0], unders[1], under_maps[0])
    u2 = omega_under_map(unders[1], unders[2], under_maps[1])
    hat = _short_exact(h1, h2)
    under = _short_exact(u1, u2)
    return {"ok": hat["ok"] and under["ok"], "where": where, "hat": hat, "under": under}


# ---------------------------------------------------------------- towers


def _stable_tail(tw: Tower, k: int) -> bool:
    return tw.maps[k].is_iso()


def tower_colim(tw: Tower) -> tuple[AmbientSpace, list[LinMap]]:
    """Colimit of a slab whose trailing map is an isomorphism, as coker of the I map."""
    if len(tw.spaces) == 1:
        return tw.spaces[0], []
    field = _tower_field(tw)
    if not _stable_tail(tw, len(tw.maps) - 1):
        raise NotStabilized("trailing map of the slab is not an isomorphism")
    n = len(tw.spaces)
    S, inj, proj = direct_sum(field, tw.spaces, "prod")
    src, sinj, _ = direct_sum(field, tw.spaces[:-1], "prod<")
    cols = []
    for k in range(n - 1):
        part = inj[k] - inj[k + 1] @ tw.maps[k]
        cols.extend(part.cols)
    I = LinMap(field, src, S, cols)
    q = cokernel(I, "colim")
    to_colim = []
    for k in range(n):
        to_colim.append(LinMap(field, tw.spaces[k], q.space, [q.project(c) for c in inj[k].cols]))
    return q.space, to_colim


def _p_map(tw: Tower) -> LinMap:
    """P: prod A_k -> prod_{k<n} A_k, (x_k) -> (x_k - i(x_{k-1}))-style, limit at the low end.

    The slab is read as an inverse system whose limit is taken toward the
    lowest index, structure maps A_k -> A_{k+1} as stored.
    """
    field = _tower_field(tw)
    n = len(tw.spaces)
    S, inj, proj = direct_sum(field, tw.spaces, "prod")
    T, tinj, _ = direct_sum(field, tw.spaces[1:], "prod>")
    cols = [field.ops.zero()] * S.dim
    P = LinMap(field, S, T, cols)
    for k in range(n - 1):
        P = P + tinj[k] @ (proj[k + 1] - tw.maps[k] @ proj[k])
    return P


def tower_lim(tw: Tower) -> tuple[AmbientSpace, list[LinMap]]:
    """Inverse limit toward the low end; the leading map must be an isomorphism."""
    if len(tw.spaces) == 1:
        return tw.spaces[0], []
    field = _tower_field(tw)
    if not tw.maps[0].is_iso():
        raise NotStabilized("leading map of the slab is not an isomorphism")
    P = _p_map(tw)
    K = kernel(P)
    _, _, proj = direct_sum(field, tw.spaces)
    inc = K.inclusion()
    return K.space, [LinMap(field, K.space, pr.codomain, (pr @ LinMap(field, K.space, pr.domain, inc.cols)).cols) for pr in proj]


def mittag_leffler(tw: Tower) -> bool:
    """Images in each term from ever lower terms stabilize within the slab."""
    n = len(tw.spaces)
    for k in range(1, n):
        dims = [tw.composite(j, k).rank() for j in range(k - 1, -1, -1)]
        if len(dims) >= 2 and dims[-1] != dims[-2]:
            return False
    return True


def tower_lim_derived(tw: Tower) -> AmbientSpace:
    """lim' on the slab; reported as zero once the Mittag-Leffler condition holds."""
    if all(m.is_surjective() for m in tw.maps) or mittag_leffler(tw):
        return AmbientSpace.new(0, "lim'")
    if len(tw.spaces) == 1:
        return AmbientSpace.new(0, "lim'")
    q = cokernel(_p_map(tw), "lim'")
    return q.space


def _tower_field(tw: Tower):
    if not tw.maps:
        raise ValidationError("a one-term tower carries no field; use at least one map")
    return tw.maps[0].field


# ---------------------------------------------------------------- sub-surjections


@dataclass
class SubSurjectionLimit:
    space: AmbientSpace
    refined: list[Subspace]
    tower: Tower
    to_limit: list[LinMap] = field(default_factory=list)

    def __iter__(self):
        yield self.space
        yield self.tower.maps


def subsurjection_limit(chain: Sequence[SubSurjection]) -> SubSurjectionLimit:
    """Maximal surjection refinement of a chain, then the colimit of the refined tower.

    ``chain[i].pi`` has domain A_i; the next domain is the coordinate space of
    ``chain[i].sub``.  Refinement runs right to left with one preimage step
    per index.
    """
    if not chain:
        raise ValidationError("empty chain")
    field = chain[0].pi.field
    for i in range(len(chain) - 1):
        if chain[i + 1].pi.domain != chain[i].sub.space:
            raise NotComposable(f"step {i + 1} does not start at the subspace chosen at step {i}")
    n = len(chain)
    # refined[i] is a subspace of A_i; refined[n] is all of A_{n}
    last_space = chain[-1].sub.space
    refined: list[Subspace] = [None] * (n + 1)  # type: ignore[list-item]
    refined[n] = Subspace.full(last_space, field)
    for i in range(n - 1, -1, -1):
        s = chain[i]
        inc = s.sub.inclusion()
        target = image_of(inc, refined[i + 1])
        refined[i] = preimage(s.pi, target)
    maps = []
    for i in range(n):
        s = chain[i]
        inc = s.sub.inclusion()
        # pi restricted to refined[i], landing in refined[i+1] via the subspace coordinates
        cols = []
        for b in refined[i].basis:
            y = s.pi(b)
            coords = s.sub.coords(y)
            cols.append(refined[i + 1].coords(coords))
        m = LinMap(field, refined[i].space, refined[i + 1].space, cols)
        if not m.is_surjective():
            raise NotSurjective("refined map is not surjective")
        maps.append(m)
    tw = Tower(list(range(n + 1)), [r.space for r in refined], maps)
    space, to_lim = tower_colim(tw)
    return SubSurjectionLimit(space, refined, tw, to_lim)
