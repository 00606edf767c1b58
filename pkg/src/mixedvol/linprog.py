"""Exact rational linear programming.

The core is a two-phase primal simplex on an all-integer tableau.  Instead of
Fraction entries, the tableau T is kept integral together with a positive
scalar denominator q (the previous pivot); the true rational tableau is T/q.
Every pivot keeps T integral because tableau entries are quotients of basis
minors.  Pivoting uses Bland's rule for both the entering and leaving choice,
so the solver terminates on degenerate problems and is fully deterministic.

Big-M is avoided; infeasibility is certified by a Farkas vector extracted
from the phase-1 objective row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

from .errors import LPError
from .linalg import matrix_rank, scale_to_integers

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_MAX_PIVOTS = 2_000_000


def _exact_div(a, q):
    quot, rem = divmod(a, q)
    if rem:
        raise LPError("fraction-free pivot lost integrality (internal bug)")
    return quot


@dataclass
class _CoreResult:
    status: str
    x: list | None = None
    basis: tuple = ()
    zero_rc_cols: frozenset = frozenset()
    farkas: list | None = None
    ray: list | None = None
    artificial_basic: bool = False


def solve_standard(a_rows, b, c, maxit=_MAX_PIVOTS):
    """maximize c.x  s.t.  A x = b, x >= 0, with integer data.

    Returns a _CoreResult.  `x` is a list of Fractions; `farkas` (infeasible
    case) is a per-row rational vector y with y.A <= 0 and y.b > 0; `ray`
    (unbounded case) is a recession direction with c.ray > 0.
    """
    m = len(a_rows)
    nv = len(c)
    if any(len(r) != nv for r in a_rows) or len(b) != m:
        raise LPError("inconsistent LP dimensions")
    if m == 0:
        if any(cj > 0 for cj in c):
            j = next(i for i, cj in enumerate(c) if cj > 0)
            ray = [Fraction(0)] * nv
            ray[j] = Fraction(1)
            return _CoreResult(UNBOUNDED, ray=ray)
        return _CoreResult(OPTIMAL, x=[Fraction(0)] * nv, basis=())

    # rows flipped so rhs >= 0; remember flips for the Farkas certificate
    flip = [1] * m
    rows = []
    rhs = []
    for i in range(m):
        if b[i] < 0:
            flip[i] = -1
            rows.append([-a for a in a_rows[i]])
            rhs.append(-b[i])
        else:
            rows.append(list(a_rows[i]))
            rhs.append(b[i])

    width = nv + m + 1  # structural | artificial | rhs
    tab = []
    for i in range(m):
        row = rows[i] + [0] * m + [rhs[i]]
        row[nv + i] = 1
        tab.append(row)
    # phase-2 objective row: z_j - c_j with artificial costs 0
    obj2 = [-cj for cj in c] + [0] * m + [0]
    # phase-1 objective: maximize -(sum of artificials)
    obj1 = [-sum(tab[i][j] for i in range(m)) for j in range(nv)] + [0] * m
    obj1.append(-sum(rhs))
    tab.append(obj2)  # row m
    tab.append(obj1)  # row m + 1

    basis = [nv + i for i in range(m)]
    q = 1
    pivots = 0

    def pivot(r, jc):
        nonlocal q, pivots
        p = tab[r][jc]
        prow = tab[r]
        for i in range(len(tab)):
            if i == r:
                continue
            row = tab[i]
            t = row[jc]
            if t:
                tab[i] = [_exact_div(x * p - t * y, q) for x, y in zip(row, prow)]
            else:
                tab[i] = [_exact_div(x * p, q) for x in row]
        q = p
        basis[r] = jc
        if q < 0:  # renormalize so that the sign convention T/q keeps q > 0
            q = -q
            for i in range(len(tab)):
                tab[i] = [-x for x in tab[i]]
        pivots += 1
        if pivots > maxit:
            raise LPError("pivot limit exceeded")

    def ratio_row(jc):
        best = None
        best_num = best_den = None
        for i in range(m):
            a = tab[i][jc]
            if a > 0:
                bi = tab[i][width - 1]
                if best is None:
                    best, best_num, best_den = i, bi, a
                else:
                    lhs = bi * best_den
                    rhs_ = best_num * a
                    if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[best]):
                        best, best_num, best_den = i, bi, a
        return best

    def run_phase(objrow, allowed):
        while True:
            row = tab[objrow]
            enter = None
            for j in range(nv + m):
                if row[j] < 0 and allowed(j):
                    enter = j
                    break
            if enter is None:
                return None
            leave = ratio_row(enter)
            if leave is None:
                return enter  # unbounded in this direction
            pivot(leave, enter)

    # ---- phase 1
    unb = run_phase(m + 1, lambda j: j < nv)
    if unb is not None:
        raise LPError("phase-1 objective unbounded (internal bug)")
    if tab[m + 1][width - 1] < 0:
        # Farkas: y_i = 1 - (phase-1 reduced cost on artificial i)/q, then undo flips
        y = []
        for i in range(m):
            yi = 1 - Fraction(tab[m + 1][nv + i], q)
            y.append(yi * flip[i])
        return _CoreResult(INFEASIBLE, farkas=y)

    # drive basic artificials out of the basis (degenerate pivots)
    for i in range(m):
        if basis[i] >= nv:
            jc = next((j for j in range(nv) if tab[i][j] != 0), None)
            if jc is not None:
                pivot(i, jc)
        # all-zero structural row: redundant constraint, stays inert

    # ---- phase 2 (artificial columns stay blocked)
    unb = run_phase(m, lambda j: j < nv)
    if unb is not None:
        ray = [Fraction(0)] * nv
        ray[unb] = Fraction(1)
        for i in range(m):
            if basis[i] < nv and tab[i][unb]:
                ray[basis[i]] = -Fraction(tab[i][unb], q)
        return _CoreResult(UNBOUNDED, ray=ray)

    x = [Fraction(0)] * nv
    art_basic = False
    for i in range(m):
        if basis[i] < nv:
            x[basis[i]] = Fraction(tab[i][width - 1], q)
        else:
            art_basic = True
    basic_set = set(basis)
    zero_rc = frozenset(
        j for j in range(nv) if j not in basic_set and tab[m][j] == 0
    )
    return _CoreResult(
        OPTIMAL,
        x=x,
        basis=tuple(basis),
        zero_rc_cols=zero_rc,
        artificial_basic=art_basic,
    )


@dataclass(frozen=True)
class LinearProgram:
    """maximize objective.x subject to a_eq x = b_eq, a_ub x <= b_ub.

    Variables are nonnegative unless marked in `free`.  All data rational.
    """

    objective: tuple
    a_eq: tuple = ()
    b_eq: tuple = ()
    a_ub: tuple = ()
    b_ub: tuple = ()
    free: tuple = ()

    def __post_init__(self):
        nv = len(self.objective)
        for r in list(self.a_eq) + list(self.a_ub):
            if len(r) != nv:
                raise LPError("constraint row length does not match objective")
        if len(self.a_eq) != len(self.b_eq) or len(self.a_ub) != len(self.b_ub):
            raise LPError("constraint matrix / rhs length mismatch")
        if self.free and len(self.free) != nv:
            raise LPError("free mask length mismatch")


@dataclass(frozen=True)
class LPSolution:
    status: str
    point: tuple | None
    objective_value: Fraction | None
    is_vertex: bool
    basis: tuple
    alternative_optimum: bool
    farkas_certificate: tuple | None = None
    ray: tuple | None = None


def solve_to_vertex(lp: LinearProgram) -> LPSolution:
    """Solve to an optimal basic solution, deterministically (Bland pivoting).

    For all-nonnegative-variable programs the returned point is a vertex of
    the feasible region; with free variables the point is optimal but split
    variables may hide vertex structure, and is_vertex reports an exact
    active-rank check instead.
    """
    nv = len(lp.objective)
    freemask = list(lp.free) if lp.free else [False] * nv

    # standard-form columns: var splits first, then slacks
    cols = []  # (orig var, sign)
    for j in range(nv):
        cols.append((j, 1))
        if freemask[j]:
            cols.append((j, -1))
    nslack = len(lp.a_ub)

    def standard_row(row):
        out = [row[j] * s for j, s in cols]
        return out

    a_rows = []
    b = []
    for r, bv in zip(lp.a_eq, lp.b_eq):
        a_rows.append(standard_row(r) + [0] * nslack)
        b.append(Fraction(bv))
    for idx, (r, bv) in enumerate(zip(lp.a_ub, lp.b_ub)):
        srow = standard_row(r) + [0] * nslack
        srow[len(cols) + idx] = 1
        a_rows.append(srow)
        b.append(Fraction(bv))
    c = standard_row(lp.objective) + [0] * nslack

    int_rows, int_b = [], []
    row_scale = []
    for row, bv in zip(a_rows, b):
        ints, mult = scale_to_integers(list(row) + [bv])
        int_rows.append(ints[:-1])
        int_b.append(ints[-1])
        row_scale.append(mult)
    int_c, _ = scale_to_integers(c)

    res = solve_standard(int_rows, int_b, int_c)

    if res.status == INFEASIBLE:
        farkas = tuple(y * s for y, s in zip(res.farkas, row_scale))
        return LPSolution(INFEASIBLE, None, None, False, (), False, farkas_certificate=farkas)
    if res.status == UNBOUNDED:
        ray = [Fraction(0)] * nv
        for (j, s), val in zip(cols, res.ray[: len(cols)]):
            ray[j] += s * val
        return LPSolution(UNBOUNDED, None, None, False, (), False, ray=tuple(ray))

    point = [Fraction(0)] * nv
    for (j, s), val in zip(cols, res.x[: len(cols)]):
        point[j] += s * val
    value = sum(cj * xj for cj, xj in zip(lp.objective, point))

    has_free = any(freemask)
    if not has_free and not res.artificial_basic:
        is_vertex = True
    else:
        is_vertex = _active_rank(lp, point, freemask) == nv

    basic = set(res.basis)
    alt = False
    for j in res.zero_rc_cols:
        if j >= len(cols):
            alt = True  # nonbasic slack with zero reduced cost
            break
        var, s = cols[j]
        if freemask[var]:
            twin = next(
                i for i, (v2, s2) in enumerate(cols) if v2 == var and s2 == -s
            )
            if twin in basic:
                continue  # mirror column of a basic split half: not a new optimum
        alt = True
        break

    return LPSolution(OPTIMAL, tuple(point), value, is_vertex, res.basis, alt)


def _active_rank(lp, point, freemask):
    rows = [list(r) for r in lp.a_eq]
    for r, bv in zip(lp.a_ub, lp.b_ub):
        if sum(a * x for a, x in zip(r, point)) == bv:
            rows.append(list(r))
    nv = len(point)
    for j in range(nv):
        if not freemask[j] and point[j] == 0:
            e = [Fraction(0)] * nv
            e[j] = Fraction(1)
            rows.append(e)
    return matrix_rank(rows)


@dataclass(frozen=True)
class MarginResult:
    margin: object  # Fraction, or float +inf / -inf sentinel
    witness: tuple | None
    ray: tuple | None = None

    @property
    def strictly_feasible(self):
        if isinstance(self.margin, float):
            return self.margin == inf
        return self.margin > 0


def strict_feasibility_margin(rows, nvars) -> MarginResult:
    """Maximal slack of a mixed weak/strict inequality system.

    `rows` is a list of (coeffs, rhs, strict) encoding a.x <= b (weak) or
    a.x < b (strict).  Variables are free.  The returned margin s* is the
    maximum s with a.x + s <= b on every strict row; s* > 0 iff the strict
    system is solvable.  An unbounded margin is reported as +inf together
    with a witness from the capped subproblem; an infeasible weak system as
    -inf.
    """
    def build(capped):
        a_ub = []
        b_ub = []
        for coeffs, rhs, strict in rows:
            row = list(coeffs) + [1 if strict else 0]
            a_ub.append(tuple(row))
            b_ub.append(rhs)
        if capped:
            a_ub.append(tuple([0] * nvars + [1]))
            b_ub.append(Fraction(1))
        obj = tuple([0] * nvars + [1])
        free = tuple([True] * (nvars + 1))
        return LinearProgram(objective=obj, a_ub=tuple(a_ub), b_ub=tuple(b_ub), free=free)

    sol = solve_to_vertex(build(capped=True))
    if sol.status == INFEASIBLE:
        return MarginResult(-inf, None)
    if sol.status != OPTIMAL:
        raise LPError("capped margin LP must be bounded (internal bug)")
    margin = sol.objective_value
    witness = sol.point[:nvars]
    if margin < 1:
        return MarginResult(margin, witness)
    full = solve_to_vertex(build(capped=False))
    if full.status == UNBOUNDED:
        return MarginResult(inf, witness, ray=full.ray[:nvars])
    return MarginResult(full.objective_value, full.point[:nvars])


def chord_extent(polys, scalars, z, d):
    """Exact extent of {t : z + t d in sum_i scalars_i * polys_i}.

    Solved as two LPs over vertex weights, so no H-representation of the sum
    is needed.  Raises LPError when z itself is outside the sum.
    """
    if all(x == 0 for x in d):
        raise LPError("direction must be nonzero")
    vertex_lists = [p.vertices for p in polys]
    n = len(z)
    ncols = sum(len(v) for v in vertex_lists) + 1  # weights + t
    t_col = ncols - 1

    a_eq = []
    b_eq = []
    for coord in range(n):
        row = []
        for lam, verts in zip(scalars, vertex_lists):
            row.extend(lam * v[coord] for v in verts)
        row.append(-Fraction(d[coord]))
        a_eq.append(tuple(row))
        b_eq.append(Fraction(z[coord]))
    offset = 0
    for verts in vertex_lists:
        row = [Fraction(0)] * ncols
        for j in range(len(verts)):
            row[offset + j] = Fraction(1)
        a_eq.append(tuple(row))
        b_eq.append(Fraction(1))
        offset += len(verts)

    free = tuple([False] * (ncols - 1) + [True])

    def extreme(sign):
        obj = [Fraction(0)] * ncols
        obj[t_col] = Fraction(sign)
        sol = solve_to_vertex(
            LinearProgram(tuple(obj), tuple(a_eq), tuple(b_eq), free=free)
        )
        if sol.status == INFEASIBLE:
            raise LPError("chord base point outside the Minkowski sum")
        if sol.status == UNBOUNDED:
            raise LPError("unbounded chord in a bounded sum (internal bug)")
        return sol.point[t_col]

    t_max = extreme(+1)
    t_min = extreme(-1)
    return t_min, t_max
