"""Random generation: uniform points in Minkowski sums and generic shifts.

Randomness is funneled through RngStream, a thin wrapper over the stdlib
Mersenne Twister seeded from (seed, stream_id); identical pairs reproduce
identical draws on every platform.  Points are drawn by exact rejection
against the bounding box on a dyadic grid 2^-(D2+16), accepted via integer
arithmetic on the sum's facet system, then rounded to the coarser 2^-D2
grid.  The rounding coupling gives a Wasserstein-1 distance to the exact
uniform law of at most sqrt(n) * 2^-D2.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import geometry, linprog
from .errors import SamplingError

DEFAULT_D2 = 32
_FINE_BITS = 16  # extra grid resolution below 2^-D2 before rounding

#: Generator contract: stdlib Mersenne Twister, seeded with
#: (seed & 2^64-1) << 32 | (stream_id & 2^32-1).  Draw order is part of the
#: reproducibility contract of this build (not portable across languages).
RNG_ALGORITHM = "mt19937/randrange"


@dataclass
class RngStream:
    seed: int
    stream_id: int = 0

    def __post_init__(self):
        key = ((self.seed & 0xFFFFFFFFFFFFFFFF) << 32) | (self.stream_id & 0xFFFFFFFF)
        self._rng = random.Random(key)

    def randrange(self, *args):
        return self._rng.randrange(*args)

    def randint(self, a, b):
        return self._rng.randint(a, b)

    def gauss(self):
        return self._rng.gauss(0.0, 1.0)

    def spawn(self, stream_id):
        return RngStream(self.seed, stream_id)


def grid_round(y, d2):
    """Componentwise nearest multiple of 2^-d2, ties toward -infinity."""
    if d2 < 1:
        raise ValueError("d2 must be at least 1")
    scale = 1 << d2
    out = []
    for c in y:
        c = Fraction(c)
        out.append(Fraction(math.ceil(c * scale - Fraction(1, 2)), scale))
    return tuple(out)


@dataclass(frozen=True)
class ShiftVectors:
    """Generic objective shifts x^1..x^k with sum zero, on the 2^-d2 grid.

    The first k-1 shifts are drawn i.i.d. uniform on the grid points of
    [-1/(k-1), 1/(k-1)]^n so that the balancing last shift also stays inside
    [-1, 1]^n.
    """

    x: tuple
    d2: int

    @property
    def k(self):
        return len(self.x)


def sample_shifts(k, n, d2, rng: RngStream) -> ShiftVectors:
    if k < 1:
        raise ValueError("need at least one polytope")
    if k == 1:
        return ShiftVectors((tuple(Fraction(0) for _ in range(n)),), d2)
    scale = 1 << d2
    bound = scale // (k - 1)
    shifts = []
    for _ in range(k - 1):
        shifts.append(
            tuple(Fraction(rng.randrange(-bound, bound + 1), scale) for _ in range(n))
        )
    last = tuple(-sum(s[j] for s in shifts) for j in range(n))
    shifts.append(last)
    return ShiftVectors(tuple(shifts), d2)


class UniformSampler:
    """Rejection sampler for the uniform law on sum_i lam_i P_i.

    Precomputes the sum polytope's facet system once and accepts candidates
    with pure integer arithmetic, so per-draw cost is a handful of big-int
    dot products.  Draws land on the 2^-(d2+16) grid and are returned rounded
    to 2^-d2.
    """

    def __init__(self, polys, lam, rng: RngStream, d2=DEFAULT_D2,
                 max_rejections=10**6):
        lam = [Fraction(x) for x in lam]
        if any(x <= 0 for x in lam):
            raise SamplingError("scaling vector must be positive")
        self.d2 = d2
        self.rng = rng
        self.max_rejections = max_rejections
        self.trials = 0
        self.accepted = 0
        n = polys[0].ambient_dim
        self.n = n

        total = geometry.minkowski_sum(polys, lam)
        if total.dim < n:
            raise SamplingError("Minkowski sum is lower-dimensional")
        self._sum_polytope = total

        fine = d2 + _FINE_BITS
        self._fine = fine
        scale = 1 << fine
        lo = []
        span = []
        for coord in range(n):
            values = [v[coord] for v in total.vertices]
            lo_c = min(values) * scale
            hi_c = max(values) * scale
            if lo_c.denominator != 1 or hi_c.denominator != 1:
                # vertices are rational; push to the enclosing fine-grid box
                lo_c = Fraction(math.floor(lo_c))
                hi_c = Fraction(math.ceil(hi_c))
            lo.append(int(lo_c))
            span.append(int(hi_c) - int(lo_c) + 1)
        self._lo = lo
        self._span = span
        self.box_volume = Fraction(1)
        for s in span:
            self.box_volume *= Fraction(s - 1, scale)

        # integer facet tests: <a, num> <= b * 2^fine for x = num / 2^fine
        self._facets = []
        for f in total.hrep.facets:
            b_scaled = f.offset * scale
            num, den = b_scaled.numerator, b_scaled.denominator
            normal = tuple(a * den for a in f.normal)
            self._facets.append((normal, num))

    @property
    def acceptance_rate(self):
        return self.accepted / self.trials if self.trials else 0.0

    def draw(self):
        """One uniform point on the sum, rounded to the 2^-d2 grid."""
        rejections = 0
        while True:
            self.trials += 1
            num = [l + self.rng.randrange(s) for l, s in zip(self._lo, self._span)]
            ok = True
            for normal, off in self._facets:
                if sum(a * c for a, c in zip(normal, num)) > off:
                    ok = False
                    break
            if ok:
                self.accepted += 1
                fine_point = tuple(Fraction(c, 1 << self._fine) for c in num)
                return grid_round(fine_point, self.d2)
            rejections += 1
            if rejections >= self.max_rejections:
                raise SamplingError(
                    "acceptance rate below 1e-6; consider hit_and_run for this instance"
                )

    @property
    def w1_bound(self):
        """Rigorous W1 distance bound to the exact uniform law."""
        return math.sqrt(self.n) * 2.0 ** (-self.d2)


def sample_uniform(polys, lam, rng: RngStream, d2=DEFAULT_D2):
    """One-shot draw; use UniformSampler directly for batches."""
    return UniformSampler(polys, lam, rng, d2=d2).draw()


def hit_and_run(polys, lam, z0, steps, rng: RngStream):
    """Hit-and-run walk over the sum via exact chord extents.

    Not certified uniform; intended as the fallback path when rejection is
    hopeless.  Directions are spherically symmetric float draws rationalized
    to the 2^-16 grid; chord endpoints and the step point are exact.
    """
    z = geometry.point(z0)
    lam = [Fraction(x) for x in lam]
    for _ in range(steps):
        d = _random_direction(len(z), rng)
        t_min, t_max = linprog.chord_extent(polys, lam, z, d)
        if t_min == t_max:
            raise SamplingError("degenerate chord encountered during walk")
        u = Fraction(rng.randrange(2**32 - 1) + 1, 2**32)
        t = t_min + (t_max - t_min) * u
        z = tuple(c + t * dc for c, dc in zip(z, d))
    return z


def _random_direction(n, rng: RngStream):
    while True:
        d = tuple(
            Fraction(round(rng.gauss() * 2**16), 2**16) for _ in range(n)
        )
        if any(d):
            return d
