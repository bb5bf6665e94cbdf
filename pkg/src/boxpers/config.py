"""Box modules over a cover window and the configurations they define.

For one degree r and one variant (standard or Borel-Moore) a window gives:

* ``I_a`` and ``I^b``: images of sublevel and superlevel homology in the
  ambient homology; ``F(a,b) = I_a & I^b`` and ``G(a,b) = H / (I_a + I^b)``;
* the sublevel bars, from which ``T(a,b) = ker(H(X_a) -> H(X_b))`` is read
  off in the bar basis, where every inclusion-induced map is diagonal.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property

from .covercomplex import CoverModel, CoverWindow, essential_images, format_rational
from .diagcalc import TripleComposite, omega_hat
from .errors import CardinalityMismatch, InternalMismatch, NotStabilized, SplitFailed, ValidationError
from .fieldlin import AmbientSpace, Echelon, LinMap, Quotient, Subspace, induced_map, intersect, sum_
from .novikov import laurent_rank

VARIANTS = ("standard", "bm")


@dataclass(frozen=True)
class Box:
    """(a1, a] x [b, b1) with a1 < a and b < b1."""

    a1: Fraction
    a: Fraction
    b: Fraction
    b1: Fraction

    def __post_init__(self):
        if not (self.a1 < self.a and self.b < self.b1):
            raise ValidationError(f"degenerate box {self}")


@dataclass(frozen=True)
class BoxAboveDiagonal:
    """(a1, a] x (b1, b] with a1 < a <= b1 < b."""

    a1: Fraction
    a: Fraction
    b1: Fraction
    b: Fraction

    def __post_init__(self):
        if not (self.a1 < self.a <= self.b1 < self.b):
            raise ValidationError(f"box {self} is not above the diagonal")


@dataclass
class BoxModule:
    kind: str
    quotient: Quotient

    @property
    def dim(self) -> int:
        return self.quotient.dim

    @property
    def space(self) -> AmbientSpace:
        return self.quotient.space


class BoxModules:
    """Subspaces and box modules for one window, degree and variant."""

    def __init__(self, w: CoverWindow, r: int, variant: str = "standard"):
        if variant not in VARIANTS:
            raise ValidationError(f"unknown variant {variant!r}")
        self.w = w
        self.r = r
        self.variant = variant
        self.field = w.field
        self.amb = w.ambient(r, variant)
        self.H = self.amb.space
        self.sub_gens = essential_images(w, r, variant, "sub")
        self.sup_gens = essential_images(w, r, variant, "super")
        pers = w.sublevel_persistence(variant)
        self.bars = list(pers.bars[r]) if r <= pers.maxdim else []
        self.U = AmbientSpace.new(len(self.bars), f"bars{r}")
        self._I: dict = {}
        self._J: dict = {}

    @property
    def eps(self) -> Fraction:
        return self.w.model.critical.gap / 3

    # ------------------------------------------------------------ F and G

    def I(self, a: Fraction) -> Subspace:
        key = sum(1 for lvl, _ in self.sub_gens if lvl <= a)
        if key not in self._I:
            self._I[key] = Subspace.span(self.H, self.field, [v for _, v in self.sub_gens[:key]])
        return self._I[key]

    def J(self, b: Fraction) -> Subspace:
        """The superlevel image I^b."""
        key = sum(1 for lvl, _ in self.sup_gens if lvl >= b)
        if key not in self._J:
            self._J[key] = Subspace.span(self.H, self.field, [v for _, v in self.sup_gens[:key]])
        return self._J[key]

    def F_space(self, a, b) -> Subspace:
        return intersect(self.I(a), self.J(b))

    def G_space(self, a, b) -> Quotient:
        return Quotient(Subspace.full(self.H, self.field), sum_(self.I(a), self.J(b)), "G")

    def F_box(self, B: Box) -> BoxModule:
        num = self.F_space(B.a, B.b)
        den = sum_(self.F_space(B.a1, B.b), self.F_space(B.a, B.b1))
        return BoxModule("F", Quotient(num, den, "F(B)"))

    def G_box(self, B: Box) -> BoxModule:
        """ker(G(a1,b1) -> G(a,b1) x_{G(a,b)} G(a1,b)) as a subquotient of H."""
        num = intersect(sum_(self.I(B.a), self.J(B.b1)), sum_(self.I(B.a1), self.J(B.b)))
        den = sum_(self.I(B.a1), self.J(B.b1))
        return BoxModule("G", Quotient(num, den, "G(B)"))

    def theta_box(self, B: Box) -> dict:
        f = self.F_box(B)
        g = self.G_box(B)
        m = induced_map(None, f.quotient, g.quotient, "descend")
        return {"ok": m.is_iso(), "dim_F": f.dim, "dim_G": g.dim, "rank": m.rank()}

    def delta_hat(self, a, b, eps: Fraction | None = None) -> Quotient:
        e = self.eps if eps is None else eps
        num = self.F_space(a, b)
        den = sum_(self.F_space(a - e, b), self.F_space(a, b + e))
        return Quotient(num, den, "delta")

    # ------------------------------------------------------------ T (bar basis)

    def _bars_where(self, pred) -> Subspace:
        ops = self.field.ops
        return Subspace(self.U, self.field, [ops.unit(i) for i, bar in enumerate(self.bars) if pred(bar)], _canonical=True)

    def T_space(self, a, b) -> Subspace:
        """Classes of H(X_a) dying by level b."""
        return self._bars_where(lambda s: s.birth <= a and s.death is not None and a < s.death <= b)

    def iT_space(self, a1, a, b) -> Subspace:
        """Image of T(a1, b) in T(a, b)."""
        return self._bars_where(lambda s: s.birth <= a1 and s.death is not None and a < s.death <= b)

    def C_space(self, a, b) -> Quotient:
        """coker(H(X_a) -> H(X_b))."""
        alive = self._bars_where(lambda s: s.alive(b))
        old = self._bars_where(lambda s: s.alive(b) and s.birth <= a)
        return Quotient(alive, old, "C")

    def T_box(self, B: BoxAboveDiagonal, cross_check: bool = True) -> BoxModule:
        num = self.T_space(B.a, B.b)
        den = sum_(self.iT_space(B.a1, B.a, B.b), self.T_space(B.a, B.b1))
        q = Quotient(num, den, "T(B)")
        if cross_check:
            other = self.T_box_omega(B)
            if other != q.dim:
                raise InternalMismatch(f"T box {B}: quotient dim {q.dim}, triple dim {other}", {"box": str(B)})
        return BoxModule("T", q)

    def level_map(self, x, y) -> LinMap:
        """H_r(X_x) -> H_r(X_y) from direct per-level homology."""
        hx = self.w.level_homology(self.r, x, self.variant)
        hy = self.w.level_homology(self.r, y, self.variant)
        return hy.map_from(hx)

    def T_box_omega(self, B: BoxAboveDiagonal) -> int:
        t = TripleComposite(self.level_map(B.a1, B.a), self.level_map(B.a, B.b1), self.level_map(B.b1, B.b))
        return omega_hat(t).dim

    def project_T(self, x) -> LinMap:
        """Bar-basis map H(X_a) -> H(X_x) restricted to U: kills bars dead by x."""
        ops = self.field.ops
        cols = [ops.unit(i) if (bar.death is None or bar.death > x) else ops.zero() for i, bar in enumerate(self.bars)]
        return LinMap(self.field, self.U, self.U, cols)

    def gamma_hat(self, a, b, eps: Fraction | None = None) -> Quotient:
        e = self.eps if eps is None else eps
        num = self.T_space(a, b)
        den = sum_(self.iT_space(a - e, a, b), self.T_space(a, b - e))
        return Quotient(num, den, "gamma")

    def gamma_count(self, a, b) -> int:
        return sum(1 for s in self.bars if s.birth == a and s.death == b)

    def lambda_hat(self, a) -> int:
        """Image of the deepest T(a_deep, a) in T(<a, a)."""
        deep = self.w.safe_lo if not self.w.model.trivial else min(self.w.heights) - 1
        return sum(1 for s in self.bars if s.death == a and s.birth <= deep and s.birth < a)

    # ------------------------------------------------------------ grids

    def F_dims(self, As: list, Bs: list) -> dict:
        """dim F(a, b) on a grid, via dim I_a + dim I^b - dim(I_a + I^b)."""
        out = {}
        ops = self.field.ops
        Bs_desc = sorted(Bs, reverse=True)
        for a in As:
            Ia = [v for lvl, v in self.sub_gens if lvl <= a]
            ech = Echelon(self.field, "min")
            rank = 0
            for v in Ia:
                if ech.insert(v)[0] is not None:
                    rank += 1
            dim_a = rank
            k = 0
            sup = self.sup_gens
            for b in Bs_desc:
                while k < len(sup) and sup[k][0] >= b:
                    if ech.insert(sup[k][1])[0] is not None:
                        rank += 1
                    k += 1
                out[(a, b)] = dim_a + self.J(b).dim - rank
        return out


# ---------------------------------------------------------------- configurations


@dataclass
class Configuration2D:
    r: int
    kind: str
    variant: str
    period: Fraction
    points: list[tuple[Fraction, Fraction, int]]

    def multiset(self) -> Counter:
        return Counter({(a, b): m for a, b, m in self.points})


@dataclass
class Configuration1D:
    r: int
    kind: str
    variant: str
    points: list[tuple[Fraction, int]]

    @property
    def total(self) -> int:
        return sum(m for _, m in self.points)

    def multiset(self) -> Counter:
        return Counter(dict(self.points))


def project_1d(c2: Configuration2D) -> Configuration1D:
    acc: Counter = Counter()
    for a, b, m in c2.points:
        acc[b - a] += m
    return Configuration1D(c2.r, c2.kind, c2.variant, sorted(acc.items()))


@dataclass
class DegreeResult:
    r: int
    variant: str
    delta: Configuration2D
    gamma: Configuration2D
    lam: list[tuple[Fraction, int]]
    checks: dict = dc_field(default_factory=dict)

    def signature(self) -> tuple:
        return (tuple(self.delta.points), tuple(self.gamma.points), tuple(self.lam))

    def to_json(self, kind: str = "delta") -> dict:
        c2 = self.delta if kind == "delta" else self.gamma
        c1 = project_1d(c2)
        return {
            "r": self.r,
            "kind": kind,
            "variant": self.variant,
            "period": format_rational(c2.period),
            "points2d": [[format_rational(a), format_rational(b), m] for a, b, m in c2.points],
            "points1d": [[format_rational(t), m] for t, m in c1.points],
            "total": c1.total,
            "lambda": [[format_rational(a), d] for a, d in self.lam],
        }


class Analysis:
    """All degrees of one variant on one window."""

    def __init__(self, model: CoverModel, w: CoverWindow, variant: str = "standard"):
        self.model = model
        self.w = w
        self.variant = variant
        self._mods: dict[int, BoxModules] = {}

    @property
    def degrees(self) -> range:
        return range(self.model.spec.n + 1)

    def mods(self, r: int) -> BoxModules:
        if r not in self._mods:
            self._mods[r] = BoxModules(self.w, r, self.variant)
        return self._mods[r]

    @cached_property
    def a_levels(self) -> list[Fraction]:
        """Orbit representatives: critical values in [0, p), or all of them when p = 0."""
        return list(self.model.critical.values)

    @cached_property
    def b_levels(self) -> list[Fraction]:
        if self.model.trivial:
            return list(self.model.critical.values)
        cs = self.w.core_sheets
        p = self.model.period
        return self.model.critical_in(cs.start * p, cs.stop * p)

    def _prev(self, x: Fraction) -> Fraction:
        return x - self.model.critical.gap / 3

    def _next(self, x: Fraction) -> Fraction:
        return x + self.model.critical.gap / 3

    def scan(self, r: int, check_jumps: bool = True) -> DegreeResult:
        """Support scan in degree r: delta via the F grid, gamma and lambda from bars."""
        M = self.mods(r)
        As = self.a_levels
        Bs = self.b_levels
        gridA = sorted(set(As) | {self._prev(a) for a in As})
        gridB = sorted(set(Bs) | {self._next(b) for b in Bs})
        dims = M.F_dims(gridA, gridB)
        pts = []
        for a in As:
            for b in Bs:
                d = dims[(a, b)] - dims[(self._prev(a), b)] - dims[(a, self._next(b))] + dims[(self._prev(a), self._next(b))]
                if d < 0:
                    raise InternalMismatch(f"negative jump at ({a}, {b})")
                if d:
                    pts.append((a, b, d))
        gpts = []
        for a in As:
            for b in Bs:
                if b > a:
                    g = M.gamma_count(a, b)
                    if g:
                        gpts.append((a, b, g))
        lam = [(a, M.lambda_hat(a)) for a in As]
        lam = [(a, d) for a, d in lam if d]
        res = DegreeResult(
            r,
            self.variant,
            Configuration2D(r, "delta", self.variant, self.model.period, pts),
            Configuration2D(r, "gamma", self.variant, self.model.period, gpts),
            lam,
        )
        if check_jumps:
            res.checks["jumps"] = self._check_jumps(M, res)
        return res

    def _check_jumps(self, M: BoxModules, res: DegreeResult) -> dict:
        """Direct quotient dims at support points, and the gap/6 re-check."""
        bad = []
        for a, b, d in res.delta.points:
            q = M.delta_hat(a, b)
            q6 = M.delta_hat(a, b, self.model.critical.gap / 6)
            if q.dim != d or q6.dim != d:
                bad.append((str(a), str(b), d, q.dim, q6.dim))
        for a, b, d in res.gamma.points:
            q = M.gamma_hat(a, b)
            q6 = M.gamma_hat(a, b, self.model.critical.gap / 6)
            if q.dim != d or q6.dim != d:
                bad.append((str(a), str(b), d, q.dim, q6.dim))
        if bad:
            raise InternalMismatch("jump identity failed", {"points": bad})
        return {"ok": True, "checked": len(res.delta.points) + len(res.gamma.points)}

    def scan_all(self) -> dict[int, DegreeResult]:
        return {r: self.scan(r) for r in self.degrees}

    # ------------------------------------------------------------ dimension formula

    def dimension_formula_check(self, r: int, a: Fraction, results: dict[int, DegreeResult] | None = None) -> dict:
        """dim H_r(X_a, X_<a) against delta, gamma and lambda contributions at a."""
        results = results or {}
        res_r = results.get(r) or self.scan(r, check_jumps=False)
        lhs = self.w.pair_homology(r, a, self.variant).dim
        # stored points are orbit representatives with first coordinate in [0, p)
        a0 = a if self.model.trivial else a - math.floor(a / self.model.period) * self.model.period
        d_sum = sum(m for x, b, m in res_r.delta.points if x == a0)
        g_up = sum(m for x, b, m in res_r.gamma.points if x == a0)
        if r >= 1:
            Mlo = self.mods(r - 1)
            deep = self.w.safe_lo if not self.model.trivial else min(self.w.heights) - 1
            g_down = sum(1 for s in Mlo.bars if s.death == a and deep < s.birth < a)
            lam = Mlo.lambda_hat(a)
        else:
            g_down = lam = 0
        # T(<a, a) = lambda + T((-inf, a) x a) by dimension count
        if r >= 0:
            M = self.mods(r)
            t_lt = M.T_space(self._prev(a), a).dim
            t_rest = sum(1 for s in M.bars if s.death == a and s.birth < a)
            decomp = t_lt == t_rest
        rhs = d_sum + g_up + g_down + lam
        return {
            "ok": lhs == rhs and decomp,
            "r": r,
            "a": a,
            "lhs": lhs,
            "delta": d_sum,
            "gamma_up": g_up,
            "gamma_down": g_down,
            "lambda": lam,
            "rhs": rhs,
            "decomposition": decomp,
        }

    # ------------------------------------------------------------ profiles and splittings

    def class_profile(self, r: int, cycle) -> dict:
        """alpha = first sublevel containing the class, beta = last superlevel containing it."""
        M = self.mods(r)
        x = M.amb.coords(cycle)
        ops = self.field.ops
        levels = self.w.critical_values()
        if ops.is_zero(x):
            return {"alpha": None, "beta": None, "t": None, "torsion": True}
        alpha = None
        for c in levels:
            if M.I(c).contains(x):
                alpha = c
                break
        beta = None
        for c in reversed(levels):
            if M.J(c).contains(x):
                beta = c
                break
        lo_in = alpha is not None and alpha == levels[0]
        hi_in = beta is not None and beta == levels[-1]
        a_out = None if (alpha is None or lo_in) else alpha
        b_out = None if (beta is None or hi_in) else beta
        torsion = a_out is None or b_out is None
        return {"alpha": a_out, "beta": b_out, "t": None if torsion else b_out - a_out, "torsion": torsion}

    @property
    def field(self):
        return self.model.field

    def build_splittings(self, r: int, kind: str, result: DegreeResult) -> dict:
        """Right inverses of the projections onto delta-hat (or gamma-hat) per orbit representative."""
        M = self.mods(r)
        fam = {}
        pts = result.delta.points if kind == "delta" else result.gamma.points
        for a, b, _ in pts:
            q = M.delta_hat(a, b) if kind == "delta" else M.gamma_hat(a, b)
            sec = LinMap(self.field, q.space, q.num.space, [q.num.coords(v) for v in q.lifts])
            fam[(a, b)] = (q, sec)
        return fam

    def verify_splittings(self, r: int, kind: str, fam: dict) -> dict:
        M = self.mods(r)
        ops = self.field.ops
        ok = True
        translated = 0
        for (a, b), (q, sec) in fam.items():
            proj = q.projection
            if not (proj @ sec) == LinMap.identity(self.field, q.space):
                raise SplitFailed(f"projection after section is not the identity at ({a}, {b})")
            if kind != "delta" or self.model.trivial:
                continue
            # deck translate the section and test it at the translated point
            p = self.model.period
            for k in (-1, 1):
                a2, b2 = a + k * p, b + k * p
                if not (self.w.is_safe(a2) and self.w.is_safe(b2)):
                    continue
                q2 = M.delta_hat(a2, b2)
                vecs = []
                for v in q.lifts:
                    z = self._lift_cycle(M, v)
                    z2 = self.w.translate_chain(r, z, k) if z is not None else None
                    if z2 is None:
                        vecs = None
                        break
                    vecs.append(M.amb.coords(z2))
                if vecs is None:
                    continue
                img = LinMap(self.field, q.space, q2.space, [q2.project(v) for v in vecs])
                ok = ok and img.is_iso()
                translated += 1
        # the union of all generators is independent in the ambient
        gens = [v for (q, _) in fam.values() for v in q.lifts]
        indep = Subspace.span(M.H, self.field, gens).dim == len(gens)
        return {"ok": ok and indep, "points": len(fam), "translated": translated, "independent": indep}

    def _lift_cycle(self, M: BoxModules, v):
        """A chain representing an ambient class."""
        ops = self.field.ops
        reps = M.amb.reps()
        acc = ops.zero()
        for i, c in ops.items(v):
            acc = ops.axpy(acc, c, reps[i])
        return acc


def audit_analysis(run: "StableRun", variant: str) -> Analysis:
    """Analysis on a window widened by two margins, for level-by-level audits."""
    model = run.analysis.model
    if model.trivial:
        return run.analysis
    return Analysis(model, model.window_for(run.sheets + 2 * model.margin), variant)


def audit_levels(an: Analysis) -> list[Fraction]:
    """Critical values at least one margin inside the safe range.

    Homology relative to a collar only agrees with locally finite homology
    once the level is a full margin away from it.
    """
    if an.model.trivial:
        return list(an.model.critical.values)
    d = an.model.margin * an.model.period
    return [c for c in an.w.critical_values() if an.w.safe_lo + d <= c < an.w.safe_hi - d]


# ---------------------------------------------------------------- stabilization


@dataclass
class StableRun:
    sheets: int
    analysis: Analysis
    results: dict[int, DegreeResult]
    history: list[tuple[int, tuple]]


def run_window(model: CoverModel, sheets: int, variant: str, check_jumps: bool = True) -> tuple[Analysis, dict[int, DegreeResult]]:
    w = model.window_for(sheets)
    an = Analysis(model, w, variant)
    res = {r: an.scan(r, check_jumps) for r in an.degrees}
    return an, res


def stabilize(model: CoverModel, variant: str = "standard", max_sheets: int = 16, start: int | None = None, check_jumps: bool = True) -> StableRun:
    """Double the window until the configurations at S and 2S agree.

    Agreement alone can be fooled when every window so far is shorter than some
    class, so S is also required to carry as many delta points per degree as the
    Novikov-Betti number predicts.
    """
    if model.trivial:
        an, res = run_window(model, 1, variant, check_jumps)
        return StableRun(1, an, res, [(1, _sig(res))])
    nov = novikov_betti(model)
    S = max(start or model.min_sheets, model.min_sheets)
    history = []
    an, res = run_window(model, S, variant, check_jumps)
    history.append((S, _sig(res)))
    while True:
        if 2 * S > max_sheets:
            raise NotStabilized(f"configurations not stable within {max_sheets} sheets", {"history": [h[0] for h in history]})
        an2, res2 = run_window(model, 2 * S, variant, check_jumps)
        history.append((2 * S, _sig(res2)))
        if _sig(res2) == _sig(res) and _complete(res, nov):
            return StableRun(S, an, res, history)
        S, an, res = 2 * S, an2, res2


def _complete(res: dict[int, "DegreeResult"], nov: list[int]) -> bool:
    return all(project_1d(res[r].delta).total == nov[r] for r in res)


def _sig(res: dict[int, DegreeResult]) -> tuple:
    return tuple(res[r].signature() for r in sorted(res))


# ---------------------------------------------------------------- Novikov rank


def novikov_betti(model: CoverModel) -> list[int]:
    """Free rank of H_r of the cover over the group ring of the period group."""
    spec = model.spec
    f = model.field
    ranks = [0] * (spec.n + 2)
    for d in range(1, spec.n + 1):
        idx = {s: i for i, s in enumerate(spec.simplices[d - 1])}
        rows: list[dict] = [{} for _ in spec.simplices[d - 1]]
        for j, s in enumerate(spec.simplices[d]):
            sh = model.shifts(s)
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                # the face lift starts at its first vertex; dropping vertex 0 moves it by sh[1]
                e = sh[1] if i == 0 else 0
                c = f.one if i % 2 == 0 else f.neg(f.one)
                rows[idx[face]][j] = {e: c}
        ranks[d] = laurent_rank(f, rows)
    return [spec.count(r) - ranks[r] - ranks[r + 1] for r in range(spec.n + 1)]


def configuration_1d(result: DegreeResult, kind: str = "delta", novikov: list[int] | None = None) -> Configuration1D:
    c1 = project_1d(result.delta if kind == "delta" else result.gamma)
    if kind == "delta" and novikov is not None and result.variant == "standard":
        if c1.total != novikov[result.r]:
            raise CardinalityMismatch(
                f"degree {result.r}: total {c1.total} but Novikov rank {novikov[result.r]}",
                {"r": result.r, "total": c1.total, "novikov": novikov[result.r]},
            )
    return c1
