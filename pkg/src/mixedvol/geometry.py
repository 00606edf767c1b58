"""Exact rational polytope primitives.

All coordinates are Fractions and every predicate is decided exactly; there
is no floating point anywhere in this module.  Polytopes are immutable value
objects carrying a pruned V-representation; the H-representation and the
intrinsic dimension are computed lazily and cached.

The exact operations (H-representation, volume) are only meant for desk-scale
ambient dimensions and refuse to run above a configurable limit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial, gcd

from . import linalg, linprog
from .errors import DimensionLimitError, GeometryError

#: Hull/H-rep cost explodes with dimension; above this we refuse rather than
#: silently approximate.  Overridable per call.
DEFAULT_EXACT_LIMIT = 6


def point(coords):
    """Coerce a coordinate sequence to an exact rational point."""
    return tuple(Fraction(c) for c in coords)


def affine_rank(points):
    """Dimension of the affine hull of a nonempty point set."""
    if not points:
        raise GeometryError("empty point set")
    pts = [point(p) for p in points]
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise GeometryError("points of mixed ambient dimension")
    return linalg.affine_rank(pts)


@dataclass(frozen=True)
class Facet:
    """Halfspace <normal, x> <= offset with a primitive integer normal.

    With equality=True the facet denotes the hyperplane <normal, x> = offset
    (used for the affine hull of lower-dimensional polytopes).
    """

    normal: tuple
    offset: Fraction
    equality: bool = False

    def value(self, x):
        return sum(a * c for a, c in zip(self.normal, x))

    def holds(self, x):
        v = self.value(x)
        return v == self.offset if self.equality else v <= self.offset

    def active(self, x):
        return self.value(x) == self.offset


@dataclass(frozen=True)
class HRep:
    facets: tuple
    equalities: tuple

    def contains(self, x):
        return all(e.holds(x) for e in self.equalities) and all(
            f.holds(x) for f in self.facets
        )


@dataclass(frozen=True)
class FaceDescriptor:
    """A face as sorted vertex indices into the parent polytope."""

    vertex_indices: tuple
    dim: int


@dataclass(frozen=True)
class Polytope:
    """Pruned, lexicographically sorted V-representation.

    Construct through convex_hull / minkowski_sum; the raw constructor trusts
    the caller that `vertices` is already a pruned vertex set.
    """

    vertices: tuple
    name: str = ""

    def __post_init__(self):
        if not self.vertices:
            raise GeometryError("polytope needs at least one vertex")
        verts = tuple(point(v) for v in self.vertices)
        n = len(verts[0])
        if any(len(v) != n for v in verts):
            raise GeometryError("vertices of mixed ambient dimension")
        object.__setattr__(self, "vertices", verts)

    @property
    def ambient_dim(self):
        return len(self.vertices[0])

    @cached_property
    def dim(self):
        return linalg.affine_rank(self.vertices)

    @cached_property
    def hrep(self):
        return _compute_hrep(self)

    @cached_property
    def _facet_tables(self):
        """Integerized facet tests plus per-facet vertex incidence sets."""
        facets = []
        for f in self.hrep.facets:
            incident = frozenset(
                i for i, v in enumerate(self.vertices) if f.active(v)
            )
            facets.append((f.normal, f.offset.numerator, f.offset.denominator, incident))
        equalities = [
            (e.normal, e.offset.numerator, e.offset.denominator)
            for e in self.hrep.equalities
        ]
        return facets, equalities

    @cached_property
    def _face_memo(self):
        return {}

    def __hash__(self):
        return hash(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, Polytope):
            return NotImplemented
        return self.vertices == other.vertices

    def __repr__(self):
        label = self.name or "polytope"
        return f"<{label}: {len(self.vertices)} vertices in R^{self.ambient_dim}>"


# ---------------------------------------------------------------------------
# convex hull (vertex pruning)

def _scale_points(pts):
    den = 1
    for p in pts:
        for c in p:
            den = den // gcd(den, c.denominator) * c.denominator
    return [tuple(int(c * den) for c in p) for p in pts], den


def _membership(ip, others):
    """Exact test ip in conv(others) for integer points.

    Returns (True, None) or (False, separating_direction).
    """
    n = len(ip)
    a_rows = [[s[coord] for s in others] for coord in range(n)]
    a_rows.append([1] * len(others))
    b = list(ip) + [1]
    res = linprog.solve_standard(a_rows, b, [0] * len(others))
    if res.status == linprog.INFEASIBLE:
        return False, tuple(res.farkas[:n])
    return True, None


def _prune_to_vertices(pts):
    """Indices of hull vertices of a deduped, lex-sorted point list."""
    if len(pts) <= 1:
        return list(range(len(pts)))
    ipts, _ = _scale_points(pts)
    confirmed = {0, len(pts) - 1}  # lex extremes are always vertices
    order = []
    for idx in range(len(pts)):
        if idx in confirmed:
            continue
        while True:
            sel = sorted(confirmed)
            inside, direction = _membership(ipts[idx], [ipts[i] for i in sel])
            if inside:
                break
            # fresh vertex: the lex-greatest maximizer of the separating form
            best = None
            best_val = None
            for j, q in enumerate(ipts):
                val = sum(a * c for a, c in zip(direction, q))
                if best is None or val > best_val or (val == best_val and q > ipts[best]):
                    best, best_val = j, val
            confirmed.add(best)
            if best == idx:
                break
    return sorted(confirmed)


def convex_hull(points, name=""):
    """Pruned V-representation of conv(points), canonically ordered."""
    if not points:
        raise GeometryError("empty point set")
    pts = sorted({point(p) for p in points})
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise GeometryError("points of mixed ambient dimension")
    keep = _prune_to_vertices(pts)
    return Polytope(tuple(pts[i] for i in keep), name=name)


def minkowski_sum(polys, scalars=None, name=None):
    """Weighted Minkowski sum as the hull of all vertex-tuple sums."""
    if not polys:
        raise GeometryError("empty polytope list")
    if scalars is None:
        scalars = [Fraction(1)] * len(polys)
    scalars = [Fraction(s) for s in scalars]
    if len(scalars) != len(polys):
        raise GeometryError("one scalar per polytope required")
    if any(s <= 0 for s in scalars):
        raise GeometryError("scalars must be positive")
    n = polys[0].ambient_dim
    if any(p.ambient_dim != n for p in polys):
        raise GeometryError("polytopes of mixed ambient dimension")
    candidates = set()
    for combo in itertools.product(*(p.vertices for p in polys)):
        total = tuple(
            sum(s * v[coord] for s, v in zip(scalars, combo))
            for coord in range(n)
        )
        candidates.add(total)
    if name is None:
        name = "+".join(p.name or "P" for p in polys)
    return convex_hull(candidates, name=name)


# ---------------------------------------------------------------------------
# H-representation

def _direction_basis(verts):
    """Greedy affinely-independent difference basis (rows)."""
    v0 = verts[0]
    basis = []
    rank = 0
    for v in verts[1:]:
        cand = basis + [linalg.vec_sub(v, v0)]
        if linalg.matrix_rank(cand) > rank:
            basis = cand
            rank += 1
    return basis


def _canonical_equality(normal, base_point):
    """Primitive equality normal with positive leading entry, plus offset."""
    prim = linalg.primitive_vector(normal)
    first = next(x for x in prim if x != 0)
    if first < 0:
        prim = tuple(-x for x in prim)
    return prim, linalg.vec_dot(prim, base_point)


def _compute_hrep(P, limit=None):
    n = P.ambient_dim
    limit = DEFAULT_EXACT_LIMIT if limit is None else limit
    if n > limit:
        raise DimensionLimitError(
            f"exact H-rep unsupported above limit (ambient {n} > {limit})"
        )
    verts = P.vertices
    d = P.dim
    v0 = verts[0]

    equalities = []
    if d < n:
        diff_rows = [linalg.vec_sub(v, v0) for v in verts[1:]]
        for a in linalg.nullspace(diff_rows or [tuple([Fraction(0)] * n)], n):
            prim, off = _canonical_equality(a, v0)
            equalities.append(Facet(prim, off, equality=True))
    if d == 0:
        return HRep((), tuple(sorted(equalities, key=lambda f: (f.normal, f.offset))))

    dir_basis = _direction_basis(verts)  # d rows of length n
    # local coordinates: v - v0 = sum_j u_j * dir_basis[j]
    col_rows = [[dir_basis[j][i] for j in range(d)] for i in range(n)]
    local = []
    for v in verts:
        u = linalg.solve_consistent(col_rows, linalg.vec_sub(v, v0))
        if u is None:
            raise GeometryError("vertex outside its own affine hull (internal bug)")
        local.append(u)

    gram = [[linalg.vec_dot(a, b) for b in dir_basis] for a in dir_basis]

    seen = set()
    facets = []
    for subset in itertools.combinations(range(len(verts)), d):
        base = local[subset[0]]
        diffs = [linalg.vec_sub(local[i], base) for i in subset[1:]]
        if d > 1 and linalg.matrix_rank(diffs) != d - 1:
            continue
        null = linalg.nullspace(diffs or [tuple([Fraction(0)] * d)], d)
        if len(null) != 1:
            continue
        a = null[0]
        ref = linalg.vec_dot(a, base)
        lo = hi = False
        for u in local:
            val = linalg.vec_dot(a, u)
            if val > ref:
                hi = True
            elif val < ref:
                lo = True
            if lo and hi:
                break
        if lo and hi:
            continue
        if hi:  # flip so the polytope lies on the <= side
            a = tuple(-x for x in a)
        # lift the local normal into the ambient direction span
        w = linalg.solve_square(gram, a)
        ambient = tuple(
            sum(w[j] * dir_basis[j][i] for j in range(d)) for i in range(n)
        )
        prim = linalg.primitive_vector(ambient)
        off = max(linalg.vec_dot(prim, v) for v in verts)
        if linalg.vec_dot(prim, verts[subset[0]]) != off:
            raise GeometryError("facet orientation lost in ambient lift (internal bug)")
        key = (prim, off)
        if key not in seen:
            seen.add(key)
            facets.append(Facet(prim, off))
    facets.sort(key=lambda f: (f.normal, f.offset))
    return HRep(tuple(facets), tuple(sorted(equalities, key=lambda f: (f.normal, f.offset))))


def h_representation(P, limit=None):
    """Irredundant facet list (plus affine-hull equalities when lower-dim)."""
    if limit is not None:
        return _compute_hrep(P, limit)
    return P.hrep


# ---------------------------------------------------------------------------
# volume

def _triangulate(P):
    """Recursive facet-cone triangulation from the lex-least vertex."""
    verts = P.vertices
    d = P.dim
    if len(verts) == d + 1:
        return [verts]
    v0 = verts[0]
    simplices = []
    for facet in P.hrep.facets:
        if facet.active(v0):
            continue
        fverts = tuple(v for v in verts if facet.active(v))
        sub = Polytope(fverts)
        for s in _triangulate(sub):
            simplices.append(s + (v0,))
    return simplices


def volume(P, limit=None):
    """Exact n-dimensional Lebesgue volume (0 for lower-dimensional bodies)."""
    n = P.ambient_dim
    lim = DEFAULT_EXACT_LIMIT if limit is None else limit
    if n > lim:
        raise DimensionLimitError(
            f"exact volume unsupported above limit (ambient {n} > {lim})"
        )
    if P.dim < n:
        return Fraction(0)
    total = Fraction(0)
    for simplex in _triangulate(P):
        rows = [linalg.vec_sub(v, simplex[-1]) for v in simplex[:-1]]
        total += abs(linalg.det(rows))
    return total / factorial(n)


# ---------------------------------------------------------------------------
# faces and membership

def contains(P, y):
    """Exact membership test."""
    y = point(y)
    if len(y) != P.ambient_dim:
        raise GeometryError("dimension mismatch")
    if P.ambient_dim <= DEFAULT_EXACT_LIMIT:
        return P.hrep.contains(y)
    pts = list(P.vertices) + [y]
    ipts, _ = _scale_points(pts)
    inside, _ = _membership(ipts[-1], ipts[:-1])
    return inside


def minimal_face(P, y):
    """The unique face with y in its relative interior, via active facets.

    Face lookup is integerized and memoized per active-facet set, since the
    estimator calls this once per sample.
    """
    y = point(y)
    n = P.ambient_dim
    if len(y) != n:
        raise GeometryError("dimension mismatch")
    den = 1
    for c in y:
        den = den // gcd(den, c.denominator) * c.denominator
    num = [int(c * den) for c in y]

    facets, equalities = P._facet_tables
    for normal, onum, oden in equalities:
        if sum(a * c for a, c in zip(normal, num)) * oden != onum * den:
            raise GeometryError("point outside polytope")
    active = []
    for idx, (normal, onum, oden, _) in enumerate(facets):
        val = sum(a * c for a, c in zip(normal, num)) * oden
        rhs = onum * den
        if val > rhs:
            raise GeometryError("point outside polytope")
        if val == rhs:
            active.append(idx)
    key = tuple(active)
    memo = P._face_memo
    face = memo.get(key)
    if face is None:
        if active:
            common = frozenset.intersection(*(facets[i][3] for i in active))
            indices = tuple(sorted(common))
        else:
            indices = tuple(range(len(P.vertices)))
        dim = linalg.affine_rank([P.vertices[i] for i in indices])
        face = FaceDescriptor(indices, dim)
        memo[key] = face
    return face


def face_polytope(P, face: FaceDescriptor, name=""):
    """Materialize a face descriptor as its own polytope."""
    return Polytope(tuple(P.vertices[i] for i in face.vertex_indices), name=name)
