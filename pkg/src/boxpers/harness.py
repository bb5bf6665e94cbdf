"""End-to-end verification suites built on the configuration engine."""

from __future__ import annotations

import random
from collections import Counter, defaultdict, deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .config import (
    VARIANTS,
    Analysis,
    Box,
    BoxAboveDiagonal,
    BoxModules,
    StableRun,
    audit_analysis,
    audit_levels,
    configuration_1d,
    novikov_betti,
    project_1d,
    stabilize,
)
from .covercomplex import CoverModel, InputDocument, OneFormCocycle, SimplicialComplexSpec, format_rational, validate
from .diagcalc import SubSurjection, subsurjection_limit
from .errors import (
    ClassMismatch,
    EpsilonTooLarge,
    Mismatch,
    NotAManifold,
    NotStabilized,
    OracleMismatch,
    ValidationError,
)
from .fieldlin import Echelon, LinMap, image, induced_map

# ---------------------------------------------------------------- helpers


def fmt(x) -> str | None:
    return None if x is None else format_rational(x)


def model_of(doc: InputDocument) -> CoverModel:
    return validate(doc.spec, doc.form, doc.field)


def counter_json(c: Counter) -> list:
    return [[fmt(t), m] for t, m in sorted(c.items()) if m]


# ---------------------------------------------------------------- manifold gate


def manifold_gate(spec: SimplicialComplexSpec) -> None:
    """Each codimension-one face lies in exactly two top simplices; vertex links connected."""
    n = spec.n
    if n < 1:
        raise NotAManifold("dimension 0 is not handled as a closed manifold")
    if not spec.closed_manifold:
        raise NotAManifold("input is not flagged as a closed manifold")
    cofaces: Counter = Counter()
    for s in spec.simplices[n]:
        for i in range(len(s)):
            cofaces[s[:i] + s[i + 1 :]] += 1
    for f in spec.simplices[n - 1]:
        if cofaces[f] != 2:
            raise NotAManifold(f"face {f} lies in {cofaces[f]} top simplices", {"face": list(f)})
    if n > 3:
        return
    for v in range(len(spec.vertices)):
        link = [tuple(x for x in s if x != v) for s in spec.simplices[n] if v in s]
        if not link:
            raise NotAManifold(f"vertex {v} has an empty link")
        adj = defaultdict(set)
        for s in link:
            for x in s:
                adj[x] |= set(s)
        start = link[0][0]
        seen = {start}
        todo = deque([start])
        while todo:
            x = todo.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        if seen != set(adj):
            raise NotAManifold(f"link of vertex {v} is disconnected", {"vertex": v})


# ---------------------------------------------------------------- duality


@dataclass
class DualityReport:
    n: int
    ok: bool
    degrees: list[dict] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"check": "duality", "ok": self.ok, "n": self.n, "degrees": self.degrees}


def check_duality(doc: InputDocument, max_sheets: int = 16) -> DualityReport:
    """Borel-Moore configurations of omega against standard ones of omega and -omega."""
    manifold_gate(doc.spec)
    model = model_of(doc)
    neg = model.negated()
    bm = stabilize(model, "bm", max_sheets).results
    std = stabilize(model, "standard", max_sheets).results
    std_neg = stabilize(neg, "standard", max_sheets).results
    n = doc.spec.n
    out = []
    ok = True
    for r in range(n + 1):
        lhs_d = project_1d(bm[r].delta).multiset()
        rhs_d = Counter({-t: m for t, m in project_1d(std[n - r].delta).multiset().items()})
        lhs_g = project_1d(bm[r].gamma).multiset()
        rhs_g = project_1d(std_neg[n - r - 1].gamma).multiset() if n - r - 1 >= 0 else Counter()
        row = {
            "r": r,
            "bm_delta": counter_json(lhs_d),
            "std_delta_dual": counter_json(rhs_d),
            "delta_match": lhs_d == rhs_d,
            "bm_gamma": counter_json(lhs_g),
            "std_gamma_neg_dual": counter_json(rhs_g),
            "gamma_match": lhs_g == rhs_g,
        }
        ok = ok and row["delta_match"] and row["gamma_match"]
        out.append(row)
    return DualityReport(n, ok, out)


# ---------------------------------------------------------------- sub-surjection route


def _regular_eps(an: Analysis, a: Fraction, b: Fraction, start: Fraction, count: int) -> list[Fraction]:
    """A halving sequence of offsets with a +- e and b +- e never critical."""
    crit = set(an.w.critical_values()) if not an.model.trivial else set(an.model.critical.values)
    e = start
    out = []
    while len(out) < count:
        pts = (a - e, a + e, b - e, b + e)
        if any(x in crit for x in pts):
            e = e * Fraction(13, 14)
            continue
        out.append(e)
        e = e / 2
    return out


def _iso_coords(inj: LinMap):
    """Coordinates in the source of vectors lying in the image of an injective map."""
    f = inj.field
    ops = f.ops
    ech = Echelon(f, "min")
    for j, c in enumerate(inj.cols):
        ech.insert(c, ops.unit(j))

    def solve(v):
        rem, tag = ech.express(v)
        if not ops.is_zero(rem):
            raise Mismatch("vector outside the corner image")
        return tag

    return solve


def bm_via_subsurjections(an: Analysis, r: int, a: Fraction, b: Fraction, kind: str = "delta", steps: int = 3) -> dict:
    """Limit of the tower of shrinking boxes around (a, b) against the direct quotient."""
    M = an.mods(r)
    gap = an.model.critical.gap
    start = gap * Fraction(16, 7)
    if kind == "gamma":
        if not a < b:
            raise ValidationError("gamma needs a < b")
        start = min(start, (b - a) * Fraction(3, 7))
    n_big = 1
    e = start
    while e >= gap:
        e /= 2
        n_big += 1
    eps = _regular_eps(an, a, b, start, n_big + steps + 1)
    if not an.model.trivial:
        an.w.require_safe(a - eps[0], a + eps[0], b - eps[0], b + eps[0])
    if kind == "delta":
        big = [M.F_box(Box(a - x, a + x, b - x, b + x)).quotient for x in eps]
        corner = [M.F_box(Box(a - eps[i + 1], a + eps[i], b - eps[i], b + eps[i + 1])).quotient for i in range(len(eps) - 1)]
        push = [None] * len(corner)
        direct = M.delta_hat(a, b).dim
    else:
        big = [M.T_box(BoxAboveDiagonal(a - x, a + x, b - x, b + x), cross_check=False).quotient for x in eps]
        corner = [M.T_box(BoxAboveDiagonal(a - eps[i + 1], a + eps[i], b - eps[i + 1], b + eps[i]), cross_check=False).quotient for i in range(len(eps) - 1)]
        push = [M.project_T(a + eps[i]) for i in range(len(corner))]
        direct = M.gamma_hat(a, b).dim
    chain = []
    back = None  # basis of the last designated subspace, in coordinates of the next big box
    for i in range(len(corner)):
        pi = induced_map(None, big[i], corner[i], "descend")
        if back is not None:
            pi = LinMap(pi.field, chain[-1].sub.space, pi.codomain, [pi(x) for x in back])
        inj = induced_map(push[i], big[i + 1], corner[i], "descend")
        if not inj.is_injective():
            raise Mismatch(f"corner map at step {i} is not injective")
        sub = image(inj)
        chain.append(SubSurjection(pi, sub))
        solve = _iso_coords(inj)
        back = [solve(v) for v in sub.basis]
    limit_dim = subsurjection_limit(chain).space.dim
    ok = limit_dim == direct
    rep = {"ok": ok, "r": r, "a": fmt(a), "b": fmt(b), "kind": kind, "variant": an.variant, "limit_dim": limit_dim, "direct_dim": direct, "steps": len(chain)}
    if not ok:
        raise Mismatch(f"tower limit {limit_dim} differs from direct {direct} at ({a}, {b})", rep)
    return rep


def subsurjection_audit(doc: InputDocument, max_sheets: int = 16) -> dict:
    """Route comparison at every Borel-Moore support point."""
    model = model_of(doc)
    run = stabilize(model, "bm", max_sheets)
    an = _wide_analysis(model, run, "bm")
    rows = []
    for r, res in run.results.items():
        for a, b, _ in res.delta.points:
            rows.append(bm_via_subsurjections(an, r, a, b, "delta"))
        for a, b, _ in res.gamma.points:
            rows.append(bm_via_subsurjections(an, r, a, b, "gamma"))
    return {"check": "subsurjection", "ok": all(x["ok"] for x in rows), "points": rows}


def _wide_analysis(model: CoverModel, run: StableRun, variant: str) -> Analysis:
    """Analysis on a window with two extra core sheets so offsets around sheet 0 stay safe."""
    if model.trivial:
        return run.analysis
    w = model.window_for(run.sheets + 2)
    return Analysis(model, w, variant)


# ---------------------------------------------------------------- stability


@dataclass
class StabilityReport:
    ok: bool
    sigma: Fraction
    eps: Fraction
    sup_norm: Fraction
    degrees: list[dict]
    inclusions: dict

    def to_json(self) -> dict:
        return {
            "check": "stability",
            "ok": self.ok,
            "sigma": fmt(self.sigma),
            "eps": fmt(self.eps),
            "sup_norm": fmt(self.sup_norm),
            "degrees": self.degrees,
            "inclusions": self.inclusions,
        }


def exact_difference(spec: SimplicialComplexSpec, f1: OneFormCocycle, f2: OneFormCocycle) -> list[Fraction]:
    """Potential g with f2 - f1 = dg, centred per component; ClassMismatch if none exists."""
    nv = len(spec.vertices)
    adj = defaultdict(list)
    for u, v in spec.simplices[1] if spec.n >= 1 else []:
        d = f2(u, v) - f1(u, v)
        adj[u].append((v, d))
        adj[v].append((u, -d))
    g: list = [None] * nv
    for root in range(nv):
        if g[root] is not None:
            continue
        g[root] = Fraction(0)
        comp = [root]
        todo = deque([root])
        while todo:
            u = todo.popleft()
            for v, d in adj[u]:
                if g[v] is None:
                    g[v] = g[u] + d
                    comp.append(v)
                    todo.append(v)
                elif g[v] != g[u] + d:
                    raise ClassMismatch("the two forms are not cohomologous", {"edge": [u, v]})
        mid = (max(g[v] for v in comp) + min(g[v] for v in comp)) / 2
        for v in comp:
            g[v] -= mid
    return g


def support_gap(results: dict) -> Fraction | None:
    """Smallest distance between distinct delta support points, over all degrees."""
    best = None
    for res in results.values():
        ts = sorted(project_1d(res.delta).multiset())
        for x, y in zip(ts, ts[1:]):
            if best is None or y - x < best:
                best = y - x
    return best


def check_stability(doc: InputDocument, doc2: InputDocument, eps: Fraction | None = None, max_sheets: int = 16, samples: int = 10, rng: random.Random | None = None) -> StabilityReport:
    """Nearby cohomologous forms: delta masses within eps of each point are preserved."""
    m1 = model_of(doc)
    m2 = model_of(doc2)
    if doc.spec.vertices != doc2.spec.vertices or doc.spec.simplices != doc2.spec.simplices:
        raise ClassMismatch("the two documents describe different complexes")
    if m1.period != m2.period:
        raise ClassMismatch(f"periods differ: {m1.period} vs {m2.period}")
    g = exact_difference(doc.spec, doc.form, doc2.form)
    sup = max((abs(x) for x in g), default=Fraction(0))
    run1 = stabilize(m1, "standard", max_sheets)
    sigma = support_gap(run1.results)
    sigma_eff = sigma if sigma is not None else max(Fraction(1), m1.period)
    if eps is None:
        eps = sigma_eff / 3
    if not eps < sigma_eff or not 3 * sup < eps:
        raise EpsilonTooLarge(f"need 3*|g| < eps < sigma; got |g|={sup}, eps={eps}, sigma={sigma_eff}")
    run2 = stabilize(m2, "standard", max(max_sheets, run1.sheets))
    ok = True
    rows = []
    for r in run1.results:
        c1 = project_1d(run1.results[r].delta).multiset()
        c2 = project_1d(run2.results[r].delta).multiset() if r in run2.results else Counter()
        sums = []
        covered = set()
        for t, m in sorted(c1.items()):
            near = {s: k for s, k in c2.items() if t - eps < s < t + eps}
            covered |= set(near)
            total = sum(near.values())
            sums.append({"t": fmt(t), "mult": m, "perturbed_sum": total, "ok": total == m})
        leak = {s: k for s, k in c2.items() if s not in covered}
        good = all(x["ok"] for x in sums) and not leak
        ok = ok and good
        rows.append({"r": r, "ok": good, "points": sums, "leakage": counter_json(Counter(leak))})
    incl = sandwich_check(m1, run1, g, eps, samples, rng or random.Random(0))
    ok = ok and incl["ok"]
    return StabilityReport(ok, sigma_eff, eps, sup, rows, incl)


def sandwich_check(model: CoverModel, run: StableRun, g: list[Fraction], eps: Fraction, samples: int, rng: random.Random) -> dict:
    """I^{f1}_{a-eps} <= I^{f2}_a <= I^{f1}_{a+eps} and the superlevel analogue, in one ambient."""
    an = audit_analysis(run, "standard")
    w1 = an.w
    S = w1.sheets
    h2 = [h + g[v // S] for v, h in enumerate(w1.heights)]
    for r in range(model.spec.n + 1):
        w1.ambient(r, "standard")  # shared with the perturbed window
    w2 = w1.with_heights(h2)
    if model.trivial:
        lo, hi = min(w1.heights) - 1, max(w1.heights) + 1
    else:
        d = model.margin * model.period
        lo, hi = w1.safe_lo + d + eps, w1.safe_hi - d - eps
    levels = {c for c in w1.critical_values() if lo <= c < hi}
    while len(levels) < samples:
        levels.add(lo + (hi - lo) * Fraction(rng.randrange(997), 997))
    levels = sorted(levels)
    bad = []
    for r in range(model.spec.n + 1):
        A = BoxModules(w1, r, "standard")
        B = BoxModules(w2, r, "standard")
        for a in levels:
            sub_ok = A.I(a - eps) <= B.I(a) and B.I(a) <= A.I(a + eps)
            sup_ok = A.J(a + eps) <= B.J(a) and B.J(a) <= A.J(a - eps)
            if not (sub_ok and sup_ok):
                bad.append({"r": r, "a": fmt(a), "sub": sub_ok, "super": sup_ok})
    return {"ok": not bad, "levels": len(levels), "failures": bad}


def random_perturbation(doc: InputDocument, bound: Fraction, rng: random.Random) -> InputDocument:
    """Add d g for a random vertex function with |g| < bound (after centring)."""
    nv = len(doc.spec.vertices)
    den = 97
    g = {v: bound * Fraction(rng.randrange(-den + 1, den), den) / 2 for v in range(nv)}
    return InputDocument(doc.field, doc.spec, doc.form.plus_exact(g))


# ---------------------------------------------------------------- persistence oracle


def _oracle_pairs(spec: SimplicialComplexSpec, heights: list[Fraction], field) -> tuple[Counter, Counter]:
    """Textbook column reduction of the cone over the superlevel filtration.

    Filtration: cone point, then cells of X by (max height, dim), then cones
    c*s by decreasing min height of s.  Returns (global pairs, finite bars),
    each keyed by (r, a, b).
    """
    cells = []  # (key, dim, simplex, is_cone)
    cells.append(((0, Fraction(0), 0), 0, ("c",), True))
    flat = [(d, s) for d in range(spec.n + 1) for s in spec.simplices[d]]
    for d, s in flat:
        cells.append(((1, max(heights[v] for v in s), d), d, s, False))
    for d, s in flat:
        cells.append(((2, -min(heights[v] for v in s), d + 1), d + 1, s, True))
    order = sorted(range(len(cells)), key=lambda i: (cells[i][0], i))
    pos = {}
    for k, i in enumerate(order):
        _, d, s, cone = cells[i]
        pos[(s, cone)] = k
    one = field.one
    cols: list[dict] = []
    meta = []
    for k, i in enumerate(order):
        _, d, s, cone = cells[i]
        col: dict = {}
        if s == ("c",):
            pass
        elif not cone:
            if d > 0:
                for j in range(len(s)):
                    f = s[:j] + s[j + 1 :]
                    col[pos[(f, False)]] = one if j % 2 == 0 else field.neg(one)
        else:
            # boundary of c*s is s - c*(boundary of s); for a vertex s it is s - c
            col[pos[(s, False)]] = one
            if d == 1:
                col[pos[(("c",), True)]] = field.neg(one)
            else:
                for j in range(len(s)):
                    f = s[:j] + s[j + 1 :]
                    c = one if j % 2 == 0 else field.neg(one)
                    col[pos[(f, True)]] = field.neg(c)
        cols.append(col)
        meta.append((d, s, cone))
    low_owner: dict[int, int] = {}
    pairs = []
    for k in range(len(cols)):
        col = cols[k]
        while col:
            low = max(col)
            if low not in low_owner:
                break
            other = cols[low_owner[low]]
            c = field.mul(col[low], field.inv(other[low]))
            for row, val in other.items():
                nv = field.add(col.get(row, field.zero), field.neg(field.mul(c, val)))
                if nv:
                    col[row] = nv
                else:
                    col.pop(row, None)
        if col:
            low_owner[max(col)] = k
            pairs.append((max(col), k))
    glob: Counter = Counter()
    fin: Counter = Counter()
    for i, j in pairs:
        di, si, ci = meta[i]
        dj, sj, cj = meta[j]
        if ci:
            continue
        a = max(heights[v] for v in si)
        if cj:
            b = min(heights[v] for v in sj)
            glob[(di, a, b)] += 1
        else:
            b = max(heights[v] for v in sj)
            if b > a:
                fin[(di, a, b)] += 1
    return glob, fin


def persistence_oracle(doc: InputDocument, variant: str = "standard") -> dict:
    """Compare delta and gamma with an independent extended-persistence reduction (trivial period only)."""
    model = model_of(doc)
    if not model.trivial:
        raise ValidationError("the persistence oracle needs a trivial period")
    glob, fin = _oracle_pairs(doc.spec, model.heights, doc.field)
    run = stabilize(model, variant)
    mine_d: Counter = Counter()
    mine_g: Counter = Counter()
    for r, res in run.results.items():
        for a, b, m in res.delta.points:
            mine_d[(r, a, b)] += m
        for a, b, m in res.gamma.points:
            mine_g[(r, a, b)] += m
    ok = mine_d == glob and mine_g == fin
    rep = {
        "check": "oracle",
        "ok": ok,
        "variant": variant,
        "delta": [[r, fmt(a), fmt(b), m] for (r, a, b), m in sorted(mine_d.items())],
        "oracle_delta": [[r, fmt(a), fmt(b), m] for (r, a, b), m in sorted(glob.items())],
        "gamma": [[r, fmt(a), fmt(b), m] for (r, a, b), m in sorted(mine_g.items())],
        "oracle_gamma": [[r, fmt(a), fmt(b), m] for (r, a, b), m in sorted(fin.items())],
    }
    if not ok:
        raise OracleMismatch("configurations differ from the persistence oracle", rep)
    return rep


# ---------------------------------------------------------------- window audit


def window_audit(doc: InputDocument, max_sheets: int = 16, variants=VARIANTS) -> dict:
    """Smallest S with identical configurations on S and 2S sheets, per variant."""
    model = model_of(doc)
    out = {}
    for v in variants:
        run = stabilize(model, v, max_sheets)
        out[v] = {"stable_sheets": run.sheets, "history": [h[0] for h in run.history]}
    return {"check": "window", "ok": True, "period": fmt(model.period), "variants": out}


# ---------------------------------------------------------------- theta, dimension, box laws


def theta_audit(doc: InputDocument, max_sheets: int = 16) -> dict:
    from .covercomplex import theta_compare

    model = model_of(doc)
    run = stabilize(model, "standard", max_sheets)
    w = run.analysis.w
    rows = []
    for r in range(model.spec.n + 1):
        for a in w.critical_values():
            if w.is_safe(a):
                c = theta_compare(w, r, a)
                c["a"] = fmt(a)
                rows.append(c)
    return {"check": "theta", "ok": all(x["ok"] for x in rows), "levels": rows}


def dimension_audit(doc: InputDocument, max_sheets: int = 16) -> dict:
    model = model_of(doc)
    rows = []
    for v in VARIANTS:
        run = stabilize(model, v, max_sheets)
        an = audit_analysis(run, v)
        for r in an.degrees:
            for a in audit_levels(an):
                c = an.dimension_formula_check(r, a, run.results)
                c["a"] = fmt(a)
                c["variant"] = v
                rows.append(c)
    return {"check": "dimension", "ok": all(x["ok"] for x in rows), "levels": rows}


def novikov_audit(doc: InputDocument, max_sheets: int = 16) -> dict:
    model = model_of(doc)
    nov = novikov_betti(model)
    run = stabilize(model, "standard", max_sheets)
    rows = []
    for r, res in run.results.items():
        c1 = configuration_1d(res, "delta", nov)
        rows.append({"r": r, "total": c1.total, "novikov": nov[r]})
    return {"check": "novikov", "ok": True, "degrees": rows}


def _mid_levels(levels: list[Fraction], lo: Fraction, hi: Fraction) -> list[Fraction]:
    pts = [x for x in levels if lo <= x < hi]
    mids = [(x + y) / 2 for x, y in zip(pts, pts[1:])]
    if pts:
        mids = [pts[0] - Fraction(1, 7)] + mids + [pts[-1] + Fraction(1, 7)]
    return mids


def box_law_audit(an: Analysis, rng: random.Random, boxes_per_degree: int = 6) -> dict:
    """Theta isomorphisms, split additivity, corner maps and the two T-box routes on random grid boxes."""
    crit = an.w.critical_values()
    if an.model.trivial:
        lo, hi = crit[0] - 1, crit[-1] + 1
    else:
        lo, hi = an.w.safe_lo, an.w.safe_hi
    reg = _mid_levels(crit, lo, hi)
    reg = [x for x in reg if an.model.trivial or an.w.is_safe(x)]
    grid = sorted(set(reg) | {c for c in crit if lo <= c < hi})
    counts = Counter()
    fails = []
    if len(reg) < 3:
        return {"ok": True, "counts": dict(counts), "failures": fails}
    for r in an.degrees:
        M = an.mods(r)
        for _ in range(boxes_per_degree):
            a1, a3 = sorted(rng.sample(reg, 2))
            b, b1 = sorted(rng.sample(reg, 2))
            inner_a = [x for x in grid if a1 < x < a3]
            inner_b = [x for x in grid if b < x < b1]
            B = Box(a1, a3, b, b1)
            th = M.theta_box(B)
            counts["theta"] += 1
            if not th["ok"]:
                fails.append({"law": "theta", "r": r, "box": str(B), **th})
            dF = M.F_box(B).dim
            if inner_a:
                am = rng.choice(inner_a)
                d1 = M.F_box(Box(a1, am, b, b1)).dim
                d2 = M.F_box(Box(am, a3, b, b1)).dim
                counts["F-split"] += 1
                if d1 + d2 != dF:
                    fails.append({"law": "F-split-a", "r": r, "box": str(B), "dims": [dF, d1, d2]})
            if inner_b:
                bm = rng.choice(inner_b)
                d1 = M.F_box(Box(a1, a3, b, bm)).dim
                d2 = M.F_box(Box(a1, a3, bm, b1)).dim
                counts["F-split"] += 1
                if d1 + d2 != dF:
                    fails.append({"law": "F-split-b", "r": r, "box": str(B), "dims": [dF, d1, d2]})
            if inner_a and inner_b:
                am = rng.choice(inner_a)
                bm = rng.choice(inner_b)
                FB = M.F_box(B).quotient
                ul = M.F_box(Box(a1, am, bm, b1)).quotient
                lr = M.F_box(Box(am, a3, b, bm)).quotient
                inj = induced_map(None, ul, FB, "descend").is_injective()
                sur = induced_map(None, FB, lr, "descend").is_surjective()
                counts["F-corner"] += 1
                if not (inj and sur):
                    fails.append({"law": "F-corner", "r": r, "box": str(B), "injective": inj, "surjective": sur})
            # boxes above the diagonal
            p, q = sorted(rng.sample(reg, 2))
            above = [x for x in reg if x >= q]
            if len(above) < 2:
                continue
            c1, c2 = sorted(rng.sample(above, 2))
            T = BoxAboveDiagonal(p, q, c1, c2)
            try:
                dT = M.T_box(T).dim
            except Exception as exc:  # InternalMismatch carries the box
                fails.append({"law": "T-routes", "r": r, "box": str(T), "error": str(exc)})
                continue
            counts["T-routes"] += 1
            ia = [x for x in grid if p < x < q]
            ib = [x for x in grid if c1 < x < c2]
            if ia:
                am = rng.choice(ia)
                d1 = M.T_box(BoxAboveDiagonal(p, am, c1, c2), False).dim
                d2 = M.T_box(BoxAboveDiagonal(am, q, c1, c2), False).dim
                counts["T-split"] += 1
                if d1 + d2 != dT:
                    fails.append({"law": "T-split-a", "r": r, "box": str(T), "dims": [dT, d1, d2]})
            if ib:
                bm = rng.choice(ib)
                d1 = M.T_box(BoxAboveDiagonal(p, q, c1, bm), False).dim
                d2 = M.T_box(BoxAboveDiagonal(p, q, bm, c2), False).dim
                counts["T-split"] += 1
                if d1 + d2 != dT:
                    fails.append({"law": "T-split-b", "r": r, "box": str(T), "dims": [dT, d1, d2]})
            if ia and ib:
                am = rng.choice(ia)
                bm = rng.choice(ib)
                TB = M.T_box(T, False).quotient
                dl = M.T_box(BoxAboveDiagonal(p, am, c1, bm), False).quotient
                ur = M.T_box(BoxAboveDiagonal(am, q, bm, c2), False).quotient
                inj = induced_map(M.project_T(q), dl, TB, "descend").is_injective()
                sur = induced_map(None, TB, ur, "descend").is_surjective()
                counts["T-corner"] += 1
                if not (inj and sur):
                    fails.append({"law": "T-corner", "r": r, "box": str(T), "injective": inj, "surjective": sur})
    return {"ok": not fails, "counts": dict(counts), "failures": fails}
