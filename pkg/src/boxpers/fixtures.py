"""Built-in example complexes and random generators."""

from __future__ import annotations

import random
from fractions import Fraction as Q
from itertools import combinations

from .covercomplex import InputDocument, OneFormCocycle, SimplicialComplexSpec
from .fieldlin import FieldSpec, GF2


def _exact_form(spec: SimplicialComplexSpec, h: dict) -> OneFormCocycle:
    vals = {}
    for u, v in spec.simplices[1] if spec.n >= 1 else []:
        vals[(u, v)] = Q(h[spec.vertices[v]]) - Q(h[spec.vertices[u]])
    return OneFormCocycle(vals)


def _form_from(spec: SimplicialComplexSpec, edge_values: dict) -> OneFormCocycle:
    vi = spec.vindex
    vals = {}
    for (a, b), x in edge_values.items():
        u, v = vi[a], vi[b]
        if u < v:
            vals[(u, v)] = Q(x)
        else:
            vals[(v, u)] = -Q(x)
    return OneFormCocycle(vals)


def fix_c(field: FieldSpec = GF2) -> InputDocument:
    """Triangle circle with edge values 1/3: the cover is a line."""
    spec = SimplicialComplexSpec.build(["c0", "c1", "c2"], [("c0", "c1"), ("c1", "c2"), ("c0", "c2")])
    form = _form_from(spec, {("c0", "c1"): Q(1, 3), ("c1", "c2"): Q(1, 3), ("c2", "c0"): Q(1, 3)})
    return InputDocument(field, spec, form)


def fix_w(field: FieldSpec = GF2) -> InputDocument:
    """Main circle of period 1 wedged at w with a side circle spanning heights [0, 1/4]."""
    spec = SimplicialComplexSpec.build(
        ["w", "m1", "m2", "s1", "s2"],
        [("w", "m1"), ("m1", "m2"), ("w", "m2"), ("w", "s1"), ("s1", "s2"), ("w", "s2")],
    )
    form = _form_from(
        spec,
        {
            ("w", "m1"): Q(1, 3),
            ("m1", "m2"): Q(1, 3),
            ("m2", "w"): Q(1, 3),
            ("w", "s1"): Q(1, 4),
            ("s1", "s2"): Q(-1, 4),
            ("s2", "w"): Q(0),
        },
    )
    return InputDocument(field, spec, form)


def fix_w_perturbed(field: FieldSpec = GF2, delta: Q = Q(1, 100)) -> InputDocument:
    """FIX-W with the side-loop top moved from 1/4 to 1/4 + delta."""
    doc = fix_w(field)
    vi = doc.spec.vindex
    g = {vi["s1"]: Q(delta)}
    return InputDocument(field, doc.spec, doc.form.plus_exact(g))


def fix_g(field: FieldSpec = GF2) -> InputDocument:
    """Disc: boundary circle closes at height 1, the cone vertex at 2 fills it."""
    spec = SimplicialComplexSpec.build(
        ["b0", "b1", "b2", "c"], [("c", "b0", "b1"), ("c", "b1", "b2"), ("c", "b0", "b2")]
    )
    h = {"b0": 0, "b1": Q(1, 2), "b2": 1, "c": 2}
    return InputDocument(field, spec, _exact_form(spec, h))


def fix_t(field: FieldSpec = GF2) -> InputDocument:
    """Path with heights 0, 1, 2."""
    spec = SimplicialComplexSpec.build(["p0", "p1", "p2"], [("p0", "p1"), ("p1", "p2")])
    return InputDocument(field, spec, _exact_form(spec, {"p0": 0, "p1": 1, "p2": 2}))


def torus7_spec() -> SimplicialComplexSpec:
    tris = []
    for i in range(7):
        tris.append((i, (i + 1) % 7, (i + 3) % 7))
        tris.append((i, (i + 2) % 7, (i + 3) % 7))
    return SimplicialComplexSpec.build(list(range(7)), tris, closed_manifold=True)


def fix_t2(field: FieldSpec = GF2) -> InputDocument:
    """7-vertex torus with a degree-one circle form (values 1/7, 2/7, 3/7 on steps 1, 2, 3)."""
    spec = torus7_spec()
    vals = {}
    for u, v in spec.simplices[1]:
        step = (v - u) % 7
        x = Q(step, 7) if step <= 3 else -Q(7 - step, 7)
        vals[(u, v)] = x
    return InputDocument(field, spec, OneFormCocycle(vals))


def fix_s2(field: FieldSpec = GF2) -> InputDocument:
    """Octahedron with an exact form; the north pole is a second local minimum."""
    eq = ["e0", "e1", "e2", "e3"]
    tris = []
    for pole in ("N", "S"):
        for i in range(4):
            tris.append((pole, eq[i], eq[(i + 1) % 4]))
    spec = SimplicialComplexSpec.build(["S", "N"] + eq, tris, closed_manifold=True)
    h = {"S": 0, "N": Q(1, 2), "e0": 1, "e1": 3, "e2": 2, "e3": 4}
    return InputDocument(field, spec, _exact_form(spec, h))


def fix_rp2(field: FieldSpec = GF2) -> InputDocument:
    """Six-vertex projective plane with an exact form."""
    tris = [
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 6, 2),
        (2, 3, 5), (3, 4, 6), (4, 5, 2), (5, 6, 3), (6, 2, 4),
    ]
    spec = SimplicialComplexSpec.build([1, 2, 3, 4, 5, 6], tris, closed_manifold=True)
    h = {1: 0, 2: 3, 3: 1, 4: 4, 5: 2, 6: 5}
    return InputDocument(field, spec, _exact_form(spec, h))


FIXTURES = {
    "FIX-C": fix_c,
    "FIX-W": fix_w,
    "FIX-G": fix_g,
    "FIX-T": fix_t,
    "FIX-T2": fix_t2,
    "FIX-S2": fix_s2,
    "FIX-RP2": fix_rp2,
}

MANIFOLD_FIXTURES = ("FIX-S2", "FIX-T2", "FIX-RP2")


# ---------------------------------------------------------------- random inputs


def _random_height(rng: random.Random, used: set, den: int = 24) -> Q:
    while True:
        x = Q(rng.randrange(den), den)
        if x not in used:
            used.add(x)
            return x


def random_exact(rng: random.Random, field: FieldSpec = GF2, nverts: int | None = None, max_simplices: int = 200) -> InputDocument:
    """Random clique-style complex with an exact form (trivial period)."""
    n = nverts or rng.randint(3, 9)
    used: set = set()
    h = {v: _random_height(rng, used, 4 * n) * 4 for v in range(n)}
    edges = [e for e in combinations(range(n), 2) if rng.random() < 0.5]
    eset = set(edges)
    tris = [t for t in combinations(range(n), 3) if all(e in eset for e in combinations(t, 2)) and rng.random() < 0.6]
    tset = set(tris)
    tets = [t for t in combinations(range(n), 4) if all(f in tset for f in combinations(t, 3)) and rng.random() < 0.5]
    spec = SimplicialComplexSpec.build(range(n), [(v,) for v in range(n)] + edges + tris + tets)
    _trim(spec, max_simplices)
    return InputDocument(field, spec, _exact_form(spec, h))


def random_periodic(rng: random.Random, field: FieldSpec = GF2, nverts: int | None = None, max_simplices: int = 200) -> InputDocument:
    """Random complex whose form has period group Z.

    Edges carry integer offsets k_uv (value = h(v) + k_uv - h(u)); triangles
    are kept only where the offsets form a cocycle.
    """
    for _ in range(100):
        n = nverts or rng.randint(3, 8)
        used: set = set()
        h = {v: _random_height(rng, used, 4 * n) for v in range(n)}
        k: dict = {}
        for u, v in combinations(range(n), 2):
            if rng.random() < 0.6:
                k[(u, v)] = rng.choice([-1, 0, 0, 1])
        tris = []
        for a, b, c in combinations(range(n), 3):
            if (a, b) in k and (b, c) in k and (a, c) in k and k[(a, b)] + k[(b, c)] == k[(a, c)] and rng.random() < 0.6:
                tris.append((a, b, c))
        spec = SimplicialComplexSpec.build(range(n), [(v,) for v in range(n)] + list(k) + tris)
        vals = {(u, v): h[v] + k[(u, v)] - h[u] for (u, v) in k}
        form = OneFormCocycle(vals)
        doc = InputDocument(field, spec, form)
        from .covercomplex import validate

        if spec.count(0) + spec.count(1) + spec.count(2) <= max_simplices and validate(spec, form, field).period == 1:
            return doc
    raise RuntimeError("could not generate a periodic complex")


def _trim(spec: SimplicialComplexSpec, max_simplices: int) -> None:
    total = sum(len(s) for s in spec.simplices)
    d = spec.n
    while total > max_simplices and d >= 1:
        extra = total - max_simplices
        drop = min(extra, len(spec.simplices[d]))
        # only top-dimensional cells can be removed without breaking closure
        spec.simplices[d] = spec.simplices[d][: len(spec.simplices[d]) - drop]
        total -= drop
        if not spec.simplices[d]:
            spec.simplices.pop()
            d -= 1
        else:
            break
