"""Exact mixed-subdivision oracle for Minkowski sums.

Generic shift vectors x^1..x^k (summing to zero) select, for every tuple of
faces (F_1, ..., F_k) with complementary directions and dimensions summing to
n, whether the shifted normal-cone relative interiors intersect; the selected
sums F_1 + ... + F_k tile the whole Minkowski sum.  Cells are found by a
depth-first search over face tuples with cone-intersection pruning at every
prefix, so the number of margin LPs stays close to the number of actual
cells.

Per-signature volume totals are exact rationals and constitute the oracle
against which the sampling estimator is validated: the cells with dimension
signature alpha carry total volume lam^alpha * c_alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import geometry, linalg, linprog
from .errors import NonGenericShiftError, SubdivisionError
from .geometry import FaceDescriptor, Polytope
from .sampling import ShiftVectors

DEFAULT_MAX_TUPLES = 10**6


@dataclass(frozen=True)
class _Face:
    descriptor: FaceDescriptor
    polytope: Polytope       # the face itself, as a polytope
    dirs: tuple              # integer difference vectors spanning the face
    outside: tuple           # parent vertices not on the face


def all_faces(P: Polytope):
    """Every nonempty face of P (including P itself), canonically ordered."""
    verts = P.vertices
    incident = [info[3] for info in P._facet_tables[0]]
    full = frozenset(range(len(verts)))
    seen = {full}
    queue = [full]
    while queue:
        s = queue.pop()
        for inc in incident:
            s2 = s & inc
            if s2 and s2 not in seen:
                seen.add(s2)
                queue.append(s2)
    faces = []
    for s in sorted(seen, key=lambda s: (len(s), sorted(s))):
        idx = tuple(sorted(s))
        pts = [verts[i] for i in idx]
        dim = linalg.affine_rank(pts)
        fp = Polytope(tuple(pts), name=f"{P.name}-face{idx}" if P.name else "")
        dirs = tuple(linalg.vec_sub(p, pts[0]) for p in pts[1:])
        outside = tuple(verts[i] for i in range(len(verts)) if i not in s)
        faces.append(_Face(FaceDescriptor(idx, dim), fp, dirs, outside))
    return faces


@dataclass(frozen=True)
class SubdivisionCell:
    face_tuple: tuple        # FaceDescriptor per polytope
    cell_polytope: Polytope  # sum_i lam_i F_i
    signature: tuple         # (dim F_1, ..., dim F_k)
    volume: Fraction
    bracket: Fraction        # lattice-normalized parallelepiped factor


def _cone_margin(prefix_faces, shifts):
    """Margin of {v : v + x^i in relint N(F_i, P_i) for chosen i}.

    relint membership is encoded vertex-wise: v + x^i is constant on the
    face's vertices and strictly larger there than on every other vertex.
    Normal cones are scale-invariant, so the unscaled polytopes are used.
    """
    rows = []
    n = len(shifts.x[0])
    for face, x in prefix_faces:
        fverts = face.polytope.vertices
        u0 = fverts[0]
        for u in fverts[1:]:
            d = linalg.vec_sub(u, u0)
            b = -linalg.vec_dot(x, d)
            rows.append((d, b, False))
            rows.append((tuple(-c for c in d), -b, False))
        for w in face.outside:
            d = linalg.vec_sub(w, u0)  # require <v + x, u0 - w> > 0
            rows.append((d, linalg.vec_dot(x, tuple(-c for c in d)), True))
    return linprog.strict_feasibility_margin(rows, n)


def enumerate_cells(instance, lam, shifts: ShiftVectors,
                    max_tuples=DEFAULT_MAX_TUPLES):
    """All subdivision cells of sum_i lam_i P_i under the given shifts."""
    polys = instance.polytopes
    n = instance.n
    k = instance.k
    lam = [Fraction(x) for x in lam]

    if k == 1:
        P = polys[0]
        full = FaceDescriptor(tuple(range(len(P.vertices))), P.dim)
        cell = geometry.minkowski_sum([P], lam, name="cell")
        vol = geometry.volume(cell)
        dirs = tuple(linalg.vec_sub(v, P.vertices[0]) for v in P.vertices[1:])
        bracket = _bracket([dirs], n) if P.dim == n else Fraction(0)
        return [SubdivisionCell((full,), cell, (P.dim,), vol, bracket)]

    per_poly = [all_faces(P) for P in polys]
    max_dims = [P.dim for P in polys]
    suffix_max = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        suffix_max[i] = suffix_max[i + 1] + max_dims[i]

    cells = []
    visited = 0

    def emit(chosen):
        face_polys = [f.polytope for f in chosen]
        cell = geometry.minkowski_sum(face_polys, lam, name="cell")
        vol = geometry.volume(cell)
        bracket = _bracket([f.dirs for f in chosen], n)
        cells.append(
            SubdivisionCell(
                tuple(f.descriptor for f in chosen),
                cell,
                tuple(f.descriptor.dim for f in chosen),
                vol,
                bracket,
            )
        )

    def extend(i, chosen, dim_sum, dir_rows):
        nonlocal visited
        for face in per_poly[i]:
            nd = dim_sum + face.descriptor.dim
            if nd > n or nd + suffix_max[i + 1] < n:
                continue
            visited += 1
            if visited > max_tuples:
                raise SubdivisionError(
                    f"cell enumeration exceeded {max_tuples} tuples"
                )
            new_rows = dir_rows + list(face.dirs)
            if linalg.matrix_rank(new_rows) != nd:
                continue  # directions must stay complementary
            tentative = chosen + [face]
            if i > 0:
                margin = _cone_margin(
                    [(f, shifts.x[j]) for j, f in enumerate(tentative)], shifts
                )
                if i == k - 1 and margin.margin == 0:
                    raise NonGenericShiftError(
                        "shift vectors not generic; resample"
                    )
                if not margin.strictly_feasible:
                    continue
            if i == k - 1:
                emit(tentative)
            else:
                extend(i + 1, tentative, nd, new_rows)

    extend(0, [], 0, [])
    cells.sort(key=lambda c: tuple(f.vertex_indices for f in c.face_tuple))
    return cells


def _bracket(dir_sets, n):
    """Lattice-normalized parallelepiped factor |det[B_1 | ... | B_k]|.

    B_i is an echelon basis of the integer lattice generated by face i's
    direction vectors; together they stack to an n x n matrix.  This is the
    rational-arithmetic counterpart of the unit-cube parallelepiped volume:
    cell volume = bracket * prod_i (volume of lam_i F_i in B_i-coordinates).
    """
    rows = []
    for dirs in dir_sets:
        int_dirs = [tuple(int(c) for c in d) for d in dirs]
        rows.extend(linalg.hnf_basis(int_dirs))
    if len(rows) != n:
        raise SubdivisionError("bracket of a non-complementary face tuple")
    return abs(linalg.det(rows))


def lattice_volume(face_poly: Polytope):
    """Volume of a face in coordinates of its direction-lattice basis.

    Full-dimensional faces in their own lattice coordinates; used by the
    bracket consistency identity.
    """
    verts = face_poly.vertices
    if len(verts) == 1:
        return Fraction(1)
    v0 = verts[0]
    dirs = [tuple(int(c) for c in linalg.vec_sub(v, v0)) for v in verts[1:]]
    basis = linalg.hnf_basis(dirs)
    d = len(basis)
    cols = [[basis[j][i] for j in range(d)] for i in range(len(v0))]
    local = []
    for v in verts:
        u = linalg.solve_consistent(cols, linalg.vec_sub(v, v0))
        if u is None:
            raise SubdivisionError("face vertex outside its direction lattice")
        local.append(tuple(u))
    return geometry.volume(geometry.convex_hull(local))


@dataclass(frozen=True)
class VerificationRecord:
    volume_identity_ok: bool
    sum_volume: Fraction
    cells_volume: Fraction
    audited: int
    interior_overlaps: int
    uncovered: int

    @property
    def ok(self):
        return self.volume_identity_ok and self.interior_overlaps == 0 and self.uncovered == 0


def verify_subdivision(cells, instance, lam, audit_points=1000, rng=None):
    """Disjoint-cover checks: exact volume identity plus a random point audit."""
    from .sampling import RngStream, UniformSampler

    lam = [Fraction(x) for x in lam]
    total = geometry.minkowski_sum(instance.polytopes, lam)
    sum_volume = geometry.volume(total)
    cells_volume = sum(c.volume for c in cells) if cells else Fraction(0)

    rng = rng or RngStream(0, 0)
    sampler = UniformSampler(instance.polytopes, lam, rng, d2=16)
    overlaps = 0
    uncovered = 0
    audited = 0
    tables = [c.cell_polytope._facet_tables[0] for c in cells]
    for _ in range(audit_points):
        z = sampler.draw()
        audited += 1
        interior = 0
        closed = 0
        for facets in tables:
            inside_strict = True
            inside_closed = True
            for normal, onum, oden, _ in facets:
                val = sum(a * c for a, c in zip(normal, z)) * oden
                rhs = onum
                if val > rhs:
                    inside_closed = False
                    inside_strict = False
                    break
                if val == rhs:
                    inside_strict = False
            if inside_closed:
                closed += 1
                if inside_strict:
                    interior += 1
        if interior > 1:
            overlaps += 1
        if closed == 0:
            uncovered += 1
    return VerificationRecord(
        volume_identity_ok=(sum_volume == cells_volume),
        sum_volume=sum_volume,
        cells_volume=cells_volume,
        audited=audited,
        interior_overlaps=overlaps,
        uncovered=uncovered,
    )


def alpha_cell_sum(cells, alpha):
    """Total volume of the cells with dimension signature alpha."""
    alpha = tuple(int(a) for a in alpha)
    return sum(
        (c.volume for c in cells if c.signature == alpha), Fraction(0)
    )


# ---------------------------------------------------------------------------
# SVG export (n = 2 only)

_PURE_COLORS = ["#4878cf", "#d65f5f", "#6acc65", "#c4ad66", "#77bedb"]
_MIXED_COLOR = "#b0b0b0"


def export_svg(cells, path, size=640):
    """Planar picture of a 2D subdivision: pure cells in per-polytope hues,
    mixed cells grey, each labeled with its exact area."""
    if not cells or cells[0].cell_polytope.ambient_dim != 2:
        raise SubdivisionError("SVG export requires ambient dimension 2")
    xs = [float(v[0]) for c in cells for v in c.cell_polytope.vertices]
    ys = [float(v[1]) for c in cells for v in c.cell_polytope.vertices]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    pad = 0.06 * max(x1 - x0, y1 - y0, 1.0)
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    w = x1 - x0
    h = y1 - y0
    scale = size / max(w, h)

    def sx(x):
        return (x - x0) * scale

    def sy(y):
        return (y1 - y) * scale  # flip so +y points up

    def cell_color(sig):
        n = sum(sig)
        for i, s in enumerate(sig):
            if s == n:
                return _PURE_COLORS[i % len(_PURE_COLORS)]
        return _MIXED_COLOR

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * scale:.1f}" '
        f'height="{h * scale + 20 * (len(cells[0].signature) + 1):.1f}" '
        f'viewBox="0 0 {w * scale:.1f} {h * scale + 20 * (len(cells[0].signature) + 1):.1f}">'
    ]
    for cell in cells:
        verts = cell.cell_polytope.vertices
        cx = sum(float(v[0]) for v in verts) / len(verts)
        cy = sum(float(v[1]) for v in verts) / len(verts)
        ordered = sorted(
            verts, key=lambda v: math.atan2(float(v[1]) - cy, float(v[0]) - cx)
        )
        pts = " ".join(f"{sx(float(v[0])):.2f},{sy(float(v[1])):.2f}" for v in ordered)
        color = cell_color(cell.signature)
        parts.append(
            f'<polygon points="{pts}" fill="{color}" stroke="#333" stroke-width="1"/>'
        )
        label = str(cell.volume)
        parts.append(
            f'<text x="{sx(cx):.2f}" y="{sy(cy):.2f}" font-size="12" '
            f'text-anchor="middle" fill="#111">{label}</text>'
        )
    # legend
    k = len(cells[0].signature)
    n = sum(cells[0].signature)
    ly = h * scale + 14
    for i in range(k):
        sig = tuple(n if j == i else 0 for j in range(k))
        parts.append(
            f'<rect x="4" y="{ly - 10:.1f}" width="12" height="12" fill="{_PURE_COLORS[i % len(_PURE_COLORS)]}"/>'
            f'<text x="20" y="{ly:.1f}" font-size="12">pure cells of polytope {i + 1}</text>'
        )
        ly += 18
    parts.append(
        f'<rect x="4" y="{ly - 10:.1f}" width="12" height="12" fill="{_MIXED_COLOR}"/>'
        f'<text x="20" y="{ly:.1f}" font-size="12">mixed cells</text>'
    )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts))
