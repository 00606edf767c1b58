"""Randomized mixed-volume estimation.

Pipeline per run: pick an integer scaling vector lam near the capacity
minimizer, sample nearly-uniform grid points z of sum_i lam_i P_i, decompose
each z into per-polytope parts via an optimal vertex of the weight polytope,
read off the minimal face dimension of each part, and tally the samples whose
dimension signature equals alpha.  The tally fraction times the exact volume
at lam, divided by lam^alpha, estimates the coefficient c_alpha of the volume
polynomial; the capacity bound keeps the hit probability above 1/(A e), which
drives the Chernoff sample count.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

from . import capacity as capmod
from . import geometry, linalg, linprog, minkpoly, sampling
from .errors import DecompositionError, InstanceValidationError, MixedVolError

_E = math.e


@dataclass(frozen=True)
class Instance:
    """A problem instance: k lattice polytopes in R^n plus bookkeeping bounds.

    L bounds vertex coordinates by 2^L in absolute value; m0 bounds the
    per-polytope vertex count.  alpha is optional here and validated when an
    estimate is requested.
    """

    n: int
    k: int
    polytopes: tuple
    alpha: tuple | None = None
    L: int = 1
    m0: int = 4

    def __post_init__(self):
        if self.k != len(self.polytopes) or self.k < 1:
            raise InstanceValidationError("k must match the number of polytopes")
        bound = 2**self.L
        for P in self.polytopes:
            if P.ambient_dim != self.n:
                raise InstanceValidationError("polytope ambient dimension != n")
            if len(P.vertices) > self.m0:
                raise InstanceValidationError("polytope exceeds the vertex bound m0")
            for v in P.vertices:
                for c in v:
                    if c.denominator != 1:
                        raise InstanceValidationError("vertices must be lattice points")
                    if abs(c) > bound:
                        raise InstanceValidationError(
                            f"coordinate {c} exceeds 2^L = {bound}"
                        )
        if self.alpha is not None:
            object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))
            validate_alpha(self.alpha, self.n, self.k)

    @classmethod
    def from_polytopes(cls, polys, alpha=None):
        polys = tuple(polys)
        n = polys[0].ambient_dim
        L = 0
        m0 = 1
        for P in polys:
            m0 = max(m0, len(P.vertices))
            for v in P.vertices:
                for c in v:
                    while abs(c) > 2**L:
                        L += 1
        return cls(n=n, k=len(polys), polytopes=polys, alpha=alpha, L=L, m0=m0)

    def sum_dimension(self):
        rows = []
        for P in self.polytopes:
            v0 = P.vertices[0]
            rows.extend(linalg.vec_sub(v, v0) for v in P.vertices[1:])
        return linalg.matrix_rank(rows) if rows else 0


def validate_alpha(alpha, n, k):
    if len(alpha) != k:
        raise InstanceValidationError("alpha length must equal k")
    if any(a < 0 for a in alpha):
        raise InstanceValidationError("alpha entries must be nonnegative")
    if sum(alpha) != n:
        raise InstanceValidationError("alpha must sum to n")


@dataclass(frozen=True)
class EstimatorConfig:
    mode: str = "exact"          # "exact" or "sampled" volume at lam
    d2: int = sampling.DEFAULT_D2
    scale_bits: int = capmod.DEFAULT_SCALE_BITS
    exact_limit: int = geometry.DEFAULT_EXACT_LIMIT
    workers: int = 1
    max_rejections: int = 10**6
    fixed_lambda: tuple | None = None  # bypass the capacity scaling (testing)

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise InstanceValidationError("mode must be 'exact' or 'sampled'")
        if self.workers < 1:
            raise InstanceValidationError("workers must be positive")


def required_samples(A, eps, delta):
    """Chernoff sample count N = ceil(3 A e eps^-2 ln(4/delta)).

    Multiplicative Chernoff for a Bernoulli with mean p >= 1/(A e), with the
    failure budget split evenly between the sampling loop and the volume
    estimate.  The leading 3e makes the big-Omega concrete.
    """
    A = float(A)
    eps = float(eps)
    delta = float(delta)
    if not 0 < eps <= 1:
        raise InstanceValidationError("need 0 < eps <= 1")
    if not 0 < delta < 1:
        raise InstanceValidationError("need 0 < delta < 1")
    if A < 1:
        raise InstanceValidationError("need A >= 1")
    return math.ceil(3.0 * A * _E * eps**-2 * math.log(4.0 / delta))


@dataclass(frozen=True)
class Decomposition:
    """One LP-vertex decomposition z = sum_i z_i with z_i in lam_i P_i."""

    weights: dict                 # (i, j) -> Fraction, per-polytope sums are 1
    parts: tuple                  # z_i points
    faces: tuple                  # FaceDescriptor of the minimal face of z_i / lam_i
    support_dims: tuple           # |support of w_i| - 1
    face_dims: tuple              # affine dimension of the minimal face
    non_unique: bool              # another optimal LP basis exists


def decompose(z, instance: Instance, lam, shifts: sampling.ShiftVectors) -> Decomposition:
    """Optimal-vertex decomposition of z over the weight polytope.

    Maximizes sum_i <x_i, z_i> over nonnegative weights with per-polytope
    normalization and the coupling sum_i z_i = z; infeasibility means z lies
    outside the scaled Minkowski sum.
    """
    n = instance.n
    k = instance.k
    polys = instance.polytopes
    lam = [int(x) for x in lam]
    z = geometry.point(z)

    sizes = [len(P.vertices) for P in polys]
    ncols = sum(sizes)

    # integer rows: coupling rows are scaled by the dyadic denominator of z
    a_rows = []
    b = []
    for coord in range(n):
        zc = z[coord]
        den = zc.denominator
        row = []
        for lam_i, P in zip(lam, polys):
            row.extend(int(lam_i * v[coord] * den) for v in P.vertices)
        a_rows.append(row)
        b.append(zc.numerator)
    col = 0
    for size in sizes:
        row = [0] * ncols
        for j in range(size):
            row[col + j] = 1
        a_rows.append(row)
        b.append(1)
        col += size

    # objective <x_i, lam_i v_ij>, scaled to integers by the shift grid
    shift_scale = 1 << shifts.d2
    c = []
    for x_i, lam_i, P in zip(shifts.x, lam, polys):
        xi = [int(cc * shift_scale) for cc in x_i]
        for v in P.vertices:
            c.append(lam_i * sum(a * int(vc) for a, vc in zip(xi, v)))

    res = linprog.solve_standard(a_rows, b, c)
    if res.status == linprog.INFEASIBLE:
        raise DecompositionError("z not in Minkowski sum")
    if res.status != linprog.OPTIMAL:
        raise MixedVolError("decomposition LP unbounded (internal bug)")

    weights = {}
    parts = []
    faces = []
    support_dims = []
    face_dims = []
    col = 0
    for i, (lam_i, P) in enumerate(zip(lam, polys)):
        w_i = res.x[col : col + sizes[i]]
        support = 0
        part = [Fraction(0)] * n
        for j, w in enumerate(w_i):
            if w:
                weights[(i, j)] = w
                support += 1
                for coord in range(n):
                    part[coord] += w * lam_i * P.vertices[j][coord]
        parts.append(tuple(part))
        face = geometry.minimal_face(P, tuple(pc / lam_i for pc in part))
        faces.append(face)
        support_dims.append(support - 1)
        face_dims.append(face.dim)
        col += sizes[i]

    return Decomposition(
        weights=weights,
        parts=tuple(parts),
        faces=tuple(faces),
        support_dims=tuple(support_dims),
        face_dims=tuple(face_dims),
        non_unique=bool(res.zero_rc_cols),
    )


def face_dimension_test(dec: Decomposition, alpha) -> bool:
    """True iff the minimal-face dimension signature equals alpha."""
    return tuple(dec.face_dims) == tuple(int(a) for a in alpha)


@dataclass
class SampleCounters:
    support_mismatch: int = 0
    non_unique: int = 0
    rounding_outside: int = 0
    dim_violations: int = 0


@dataclass(frozen=True)
class EstimateReport:
    estimate_coefficient: Fraction
    estimate_derivative_form: Fraction
    estimate_standard: Fraction
    N: int
    T: int
    p_hat: Fraction
    lam: tuple
    v_at_lambda: Fraction
    v_exact: bool
    capacity: capmod.CapacityResult | None
    bounds: capmod.BoundsReport | None
    alpha: tuple
    seed: int
    d2: int
    scale_bits: int
    workers: int
    w1_bound: float
    lambda_rounding_bound: Fraction
    counters: SampleCounters
    timings: dict
    warnings: tuple
    c_exact: Fraction | None = None
    p_lower_bound: Fraction | None = None


def _zero_report(instance, alpha, seed, config, warnings, timings):
    conv = minkpoly.convert_normalization(0, alpha, instance.n)
    return EstimateReport(
        estimate_coefficient=Fraction(0),
        estimate_derivative_form=conv.derivative_form,
        estimate_standard=conv.standard_mixed_volume,
        N=0,
        T=0,
        p_hat=Fraction(0),
        lam=tuple([1] * instance.k),
        v_at_lambda=Fraction(0),
        v_exact=True,
        capacity=None,
        bounds=None,
        alpha=tuple(alpha),
        seed=seed,
        d2=config.d2,
        scale_bits=config.scale_bits,
        workers=config.workers,
        w1_bound=0.0,
        lambda_rounding_bound=Fraction(0),
        counters=SampleCounters(),
        timings=timings,
        warnings=tuple(warnings),
        c_exact=Fraction(0),
    )


def estimate_volume_by_rejection(polys, lam, eps, delta, rng, d2):
    """(1 +- eps, delta)-estimate of Vol(sum lam_i P_i) by rejection counting.

    Inverse-binomial stopping: sample until the acceptance count reaches a
    Chernoff-driven target, then estimate p by target/trials.
    """
    sampler = sampling.UniformSampler(polys, lam, rng, d2=d2)
    target = math.ceil(3.0 * (1 + float(eps)) * math.log(4.0 / float(delta)) / float(eps) ** 2)
    while sampler.accepted < target:
        sampler.draw()
    p = Fraction(sampler.accepted, sampler.trials)
    return p * sampler.box_volume


def estimate_mixed_volume(
    instance: Instance, eps, delta, seed, config: EstimatorConfig | None = None
) -> EstimateReport:
    """Run the full sampling estimator for the coefficient c_alpha."""
    config = config or EstimatorConfig()
    alpha = instance.alpha
    if alpha is None:
        raise InstanceValidationError("instance carries no alpha and none was given")
    validate_alpha(alpha, instance.n, instance.k)
    eps = Fraction(eps)
    delta = Fraction(delta)
    timings = {}
    warnings = []
    t0 = time.perf_counter()

    if instance.sum_dimension() < instance.n:
        warnings.append("Minkowski sum is lower-dimensional; mixed volume is 0")
        timings["total"] = time.perf_counter() - t0
        return _zero_report(instance, alpha, seed, config, warnings, timings)

    polys = instance.polytopes
    t = time.perf_counter()
    poly = minkpoly.interpolate_coefficients(polys, limit=config.exact_limit)
    timings["interpolation"] = time.perf_counter() - t
    c_exact = minkpoly.coefficient(poly, alpha)
    if c_exact == 0:
        warnings.append("coefficient c_alpha is exactly 0 for this instance")
        timings["total"] = time.perf_counter() - t0
        return _zero_report(instance, alpha, seed, config, warnings, timings)

    t = time.perf_counter()
    cap = capmod.capacity_minimize(
        poly,
        alpha,
        tol=eps / 4,
        coord_bits=instance.L,
        max_vertices=instance.m0,
    )
    if config.fixed_lambda is not None:
        lam = tuple(int(x) for x in config.fixed_lambda)
        warnings.append("capacity scaling bypassed by fixed_lambda")
    else:
        lam = capmod.integer_lambda(cap, config.scale_bits)
    bounds = capmod.bound_report(poly, alpha, cap)
    timings["capacity"] = time.perf_counter() - t

    d = minkpoly.degrees_d(poly, alpha, dims=[P.dim for P in polys])
    A = capmod.constant_A(d, alpha)
    N = required_samples(A, eps, delta)

    t = time.perf_counter()
    if config.mode == "exact":
        v_lam = poly.evaluate(lam)
        v_exact = True
    else:
        v_lam = estimate_volume_by_rejection(
            polys, lam, eps, delta / 2, sampling.RngStream(seed, 2**20), config.d2
        )
        v_exact = False
        warnings.append("volume at lam estimated by rejection (sampled mode)")
    timings["volume_at_lambda"] = time.perf_counter() - t

    shifts = sampling.sample_shifts(
        instance.k, instance.n, config.d2, sampling.RngStream(seed, 0)
    )

    lam_alpha = Fraction(1)
    for l, a in zip(lam, alpha):
        lam_alpha *= Fraction(l) ** a
    rounding_bound = Fraction(instance.n * instance.k, 2 ** (config.scale_bits - 1))
    # rigorous rational stand-in for 1/(A e^{eps_cap + rounding}) via e^x <= 1+2x
    p_lower = 1 / (A * (1 + 2 * (eps / 4 + rounding_bound)))

    counters = SampleCounters()
    T = 0
    t = time.perf_counter()
    base = N // config.workers
    extra = N % config.workers
    w1 = math.sqrt(instance.n) * 2.0 ** (-config.d2)
    for w in range(config.workers):
        quota = base + (1 if w < extra else 0)
        if quota == 0:
            continue
        sampler = sampling.UniformSampler(
            polys, lam, sampling.RngStream(seed, w + 1), d2=config.d2,
            max_rejections=config.max_rejections,
        )
        for _ in range(quota):
            z = sampler.draw()
            try:
                dec = decompose(z, instance, lam, shifts)
            except DecompositionError:
                counters.rounding_outside += 1
                continue
            total = tuple(
                sum(part[coord] for part in dec.parts)
                for coord in range(instance.n)
            )
            if total != z:
                raise MixedVolError("decomposition parts do not sum to z (bug)")
            if dec.non_unique:
                counters.non_unique += 1
            elif sum(dec.face_dims) > instance.n:
                counters.dim_violations += 1
            if dec.support_dims != dec.face_dims:
                counters.support_mismatch += 1
            if face_dimension_test(dec, alpha):
                T += 1
    timings["sampling_loop"] = time.perf_counter() - t

    p_hat = Fraction(T, N)
    estimate = p_hat * v_lam / lam_alpha
    conv = minkpoly.convert_normalization(estimate, alpha, instance.n)
    timings["total"] = time.perf_counter() - t0

    return EstimateReport(
        estimate_coefficient=estimate,
        estimate_derivative_form=conv.derivative_form,
        estimate_standard=conv.standard_mixed_volume,
        N=N,
        T=T,
        p_hat=p_hat,
        lam=lam,
        v_at_lambda=v_lam,
        v_exact=v_exact,
        capacity=cap,
        bounds=bounds,
        alpha=tuple(alpha),
        seed=seed,
        d2=config.d2,
        scale_bits=config.scale_bits,
        workers=config.workers,
        w1_bound=w1,
        lambda_rounding_bound=rounding_bound,
        counters=counters,
        timings=timings,
        warnings=tuple(warnings),
        c_exact=c_exact,
        p_lower_bound=p_lower,
    )
