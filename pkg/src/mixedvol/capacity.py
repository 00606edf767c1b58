"""Capacity optimization and the coefficient-bound constants.

The weighted capacity of the volume polynomial,

    Cap_a(V) = inf_{x > 0} V(x) / x^a,

is computed by minimizing the convex function g(y) = log V(e^y) - <a, y>.
Homogeneity pins y_k = 0; the remaining coordinates are optimized by damped
projected gradient descent with backtracking.  The reported capacity value is
an *exact rational* evaluation V(lam)/lam^a at a rationalized minimizer, so
it is a true upper bound on Cap_a by construction, with a convexity
certificate bounding the gap:

    g(y) - min g <= |grad g(y)| * diam(search box),

using the fact that the minimizer stays inside an explicit box whose radius
is driven by the instance bit size (the objective is n-Lipschitz in y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BoundViolationError, CapacityError
from .minkpoly import MinkowskiPolynomial, coefficient, degrees_d

#: strict rational upper bound on Euler's number, for exact-side inequalities
E_UPPER = Fraction(2718281828459046, 10**15)

DEFAULT_SCALE_BITS = 20
_MAX_ITERATIONS = 200_000
_RATIONALIZE_BITS = 48


@dataclass(frozen=True)
class CapacityResult:
    y_star: tuple            # float minimizer in log domain, y_k = 0
    lambda_real: tuple       # positive rationals approximating e^{y*}
    cap_value: Fraction      # exact V(lambda_real)/lambda_real^alpha  (>= Cap)
    certified_gap: Fraction  # log(cap_value) - log(Cap) <= certified_gap
    iterations: int
    hit_search_box: bool


def _search_box_radius(n, coord_bits, max_vertices):
    # generous explicit version of the O(n^2 (log n + <K>)) minimizer bound
    return 64.0 * n * n * (math.log2(max(n, 2)) + n * coord_bits + math.log2(max(max_vertices, 2)) + 1)


def capacity_minimize(
    poly: MinkowskiPolynomial,
    alpha,
    tol,
    *,
    coord_bits=1,
    max_vertices=4,
    max_iterations=_MAX_ITERATIONS,
) -> CapacityResult:
    """Minimize V(e^y)/e^{<a,y>} to additive log-accuracy tol, certified."""
    alpha = tuple(int(a) for a in alpha)
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if poly.is_zero:
        raise CapacityError("capacity of the zero polynomial is undefined")

    k = poly.k
    n = poly.n
    terms = [(mu, math.log(c)) for mu, c in poly.coeffs.items()]
    radius = _search_box_radius(n, coord_bits, max_vertices)
    nfree = k - 1
    diam = 2.0 * radius * math.sqrt(max(nfree, 1))

    def g_and_grad(y):
        # y has k entries, last pinned to 0
        exps = [lc + sum(m * yy for m, yy in zip(mu, y)) for mu, lc in terms]
        top = max(exps)
        weights = [math.exp(e - top) for e in exps]
        total = sum(weights)
        gval = top + math.log(total) - sum(a * yy for a, yy in zip(alpha, y))
        grad = []
        for i in range(nfree):
            ei = sum(w * mu[i] for w, (mu, _) in zip(weights, terms)) / total
            grad.append(ei - alpha[i])
        return gval, grad

    y = [0.0] * k
    gval, grad = g_and_grad(y)
    step = 1.0
    iters = 0
    hit_box = False
    while iters < max_iterations:
        gnorm = math.sqrt(sum(gg * gg for gg in grad))
        if nfree == 0 or gnorm * diam <= float(tol) * 0.5:
            break
        moved = False
        while step > 1e-18:
            cand = list(y)
            for i in range(nfree):
                cand[i] = min(max(y[i] - step * grad[i], -radius), radius)
            cval, cgrad = g_and_grad(cand)
            if cval <= gval - 1e-4 * step * gnorm * gnorm:
                y, gval, grad = cand, cval, cgrad
                step *= 2.0
                moved = True
                break
            step *= 0.5
        iters += 1
        if not moved:
            break
    hit_box = any(abs(yy) >= radius * (1 - 1e-12) for yy in y[:nfree])

    gnorm = math.sqrt(sum(gg * gg for gg in grad)) if nfree else 0.0
    if nfree and gnorm * diam > float(tol):
        raise CapacityError(
            f"no certified minimizer within {iters} iterations "
            f"(gradient certificate {gnorm * diam:.3e} > tol)",
            best=tuple(y),
        )

    lam_real = tuple(
        Fraction(math.exp(yy)).limit_denominator(2**_RATIONALIZE_BITS) for yy in y
    )
    if any(l <= 0 for l in lam_real):
        raise CapacityError("rationalized minimizer left the positive orthant")
    cap_value = poly.evaluate(lam_real)
    for l, a in zip(lam_real, alpha):
        cap_value /= l**a
    # certificate: optimization gap + n-Lipschitz slack of the rationalization
    rat_err = math.sqrt(sum((math.log(float(l)) - yy) ** 2 for l, yy in zip(lam_real, y)))
    gap_float = gnorm * diam + n * rat_err
    certified_gap = Fraction(gap_float * (1 + 1e-9) + 1e-15).limit_denominator(10**18)
    return CapacityResult(
        y_star=tuple(y),
        lambda_real=lam_real,
        cap_value=cap_value,
        certified_gap=certified_gap,
        iterations=iters,
        hit_search_box=hit_box,
    )


def integer_lambda(result: CapacityResult, scale_bits=DEFAULT_SCALE_BITS):
    """Positive integer scaling vector preserving the capacity ratio.

    lam_i = round(2^scale_bits * lambda_i / min_j lambda_j); by homogeneity
    the common factor is free, and the rounding perturbs the log-ratio by at
    most n*k*2^{1-scale_bits}.
    """
    if scale_bits < 1:
        raise ValueError("scale_bits must be at least 1")
    lam = result.lambda_real
    lo = min(lam)
    out = []
    for l in lam:
        scaled = Fraction(2**scale_bits) * l / lo
        out.append(int(scaled + Fraction(1, 2)))  # round half up
    return tuple(out)


def _peak_ratio(a):
    # (a+1)^(a+1) / a^a with the 0^0 = 1 convention
    if a == 0:
        return Fraction(1)
    return Fraction((a + 1) ** (a + 1), a**a)


def constant_A(d, alpha):
    """Refined bound constant from the degree data."""
    d = tuple(int(x) for x in d)
    alpha = tuple(int(a) for a in alpha)
    A = Fraction(1)
    for i in range(1, len(alpha)):
        if d[i] < alpha[i]:
            raise ValueError(f"degree datum d[{i}]={d[i]} below alpha[{i}]={alpha[i]}")
        A *= min(_peak_ratio(alpha[i]), _peak_ratio(d[i] - alpha[i]))
    return A


def constant_Atilde(alpha):
    alpha = tuple(int(a) for a in alpha)
    A = Fraction(1)
    for a in alpha[1:]:
        A *= _peak_ratio(a)
    return A


def a_upper_bound(n, k):
    """(e(n+k-1)/(k-1))^(k-1), evaluated with a rational e upper bound."""
    if k <= 1:
        return Fraction(1)
    return (E_UPPER * (n + k - 1) / (k - 1)) ** (k - 1)


def cap_pair(d, a, tol=1e-9):
    """Capacity of the full-support pair polynomial sum_{j<=d} x^j y^{d-j} at weight (d-a, a).

    Reduces to a one-dimensional convex minimization of
    h(u) = log(sum_j e^{j u}) - (d-a) u over u = log(x/y).
    """
    d = int(d)
    a = int(a)
    if not 0 <= a <= d:
        raise ValueError("need 0 <= a <= d")
    if d == 0:
        return Fraction(1)
    if a == 0 or a == d:
        return Fraction(1)  # boundary infimum, approached but equal to 1

    def h(u):
        exps = [j * u for j in range(d + 1)]
        top = max(exps)
        return top + math.log(sum(math.exp(e - top) for e in exps)) - (d - a) * u

    lo, hi = -60.0, 60.0
    while hi - lo > tol / 10:
        m1 = lo + (hi - lo) / 3
        m2 = hi - (hi - lo) / 3
        if h(m1) <= h(m2):
            hi = m2
        else:
            lo = m1
    val = math.exp(h((lo + hi) / 2))
    return Fraction(val).limit_denominator(10**15)


@dataclass(frozen=True)
class BoundsReport:
    A: Fraction
    A_tilde: Fraction
    a_upper: Fraction
    blp_low: Fraction            # cap / A
    pair_capacity_low: Fraction  # cap / prod cap_pair(d_i, a_i): tighter than blp_low
    cap_upper: Fraction
    gurvits_low: Fraction | None
    gurvits_high: Fraction | None
    d: tuple
    checks: dict


def bound_report(V: MinkowskiPolynomial, alpha, cap: CapacityResult) -> BoundsReport:
    """Assemble every bound constant and verify the theorem inequalities.

    The capacity solver only certifies Cap within exp(certified_gap), so
    lower bounds carry that slack; a violation beyond it is an implementation
    bug, not a numerical event, and raises.
    """
    alpha = tuple(int(a) for a in alpha)
    n, k = V.n, V.k
    c = coefficient(V, alpha)
    d = degrees_d(V, alpha)
    A = constant_A(d, alpha)
    A_tilde = constant_Atilde(alpha)
    a_up = a_upper_bound(n, k)
    gap = cap.certified_gap
    # exact rational slack factor: e^gap <= 1 + 2*gap for gap <= 1/2
    slack = 1 + 2 * gap if gap <= Fraction(1, 2) else Fraction(math.exp(float(gap)) * 1.001).limit_denominator(10**15)

    blp_low = cap.cap_value / A
    pair_prod = Fraction(1)
    for i in range(1, k):
        pair_prod *= cap_pair(d[i], alpha[i])
    pair_low = cap.cap_value / pair_prod

    checks = {}
    checks["constants_ordered"] = A <= A_tilde <= a_up
    checks["coefficient_below_capacity"] = c <= cap.cap_value
    checks["blp_lower_bound"] = blp_low <= c * slack
    checks["pair_lower_bound"] = pair_low <= c * slack * (1 + Fraction(1, 10**9))

    gurvits_low = gurvits_high = None
    if k == n and all(a == 1 for a in alpha):
        fact = 1
        for a in alpha:
            fact *= math.factorial(a)
        deriv = c * fact
        gurvits_low = Fraction(math.factorial(n), n**n) * cap.cap_value
        gurvits_high = cap.cap_value
        checks["gurvits_sandwich"] = gurvits_low <= deriv * slack and deriv <= gurvits_high

    if not all(checks.values()):
        failed = [name for name, ok in checks.items() if not ok]
        raise BoundViolationError(
            f"theorem bounds violated ({', '.join(failed)}); this indicates a bug"
        )
    return BoundsReport(
        A=A,
        A_tilde=A_tilde,
        a_upper=a_up,
        blp_low=blp_low,
        pair_capacity_low=pair_low,
        cap_upper=cap.cap_value,
        gurvits_low=gurvits_low,
        gurvits_high=gurvits_high,
        d=d,
        checks=checks,
    )
