"""The volume polynomial of a tuple of polytopes.

Vol(l_1 P_1 + ... + l_k P_k) is a homogeneous degree-n polynomial in the
scaling vector l with nonnegative coefficients.  Its exact coefficient map is
recovered by evaluating the volume on a small integer grid and solving the
resulting linear system in rational arithmetic; everything downstream
(capacity, bounds, the subdivision identity) is checked against these exact
coefficients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import geometry, linalg
from .errors import GeometryError


def exponents(n, k):
    """All exponent vectors of length k summing to n, lexicographic."""
    if k == 1:
        return [(n,)]
    out = []
    for head in range(n, -1, -1):
        for tail in exponents(n - head, k - 1):
            out.append((head,) + tail)
    return sorted(out)


def multinomial(n, alpha):
    r = factorial(n)
    for a in alpha:
        r //= factorial(a)
    return r


@dataclass(frozen=True)
class MinkowskiPolynomial:
    """Homogeneous degree-n coefficient map {exponent: coefficient >= 0}."""

    n: int
    k: int
    coeffs: dict

    def __post_init__(self):
        clean = {}
        for mu, c in self.coeffs.items():
            mu = tuple(int(e) for e in mu)
            c = Fraction(c)
            if len(mu) != self.k or sum(mu) != self.n:
                raise ValueError(f"exponent {mu} is not degree {self.n} in {self.k} vars")
            if c < 0:
                raise ValueError("volume polynomial coefficients must be nonnegative")
            if c:
                clean[mu] = c
        object.__setattr__(self, "coeffs", clean)

    def evaluate(self, lam):
        lam = [Fraction(x) for x in lam]
        total = Fraction(0)
        for mu, c in self.coeffs.items():
            term = c
            for x, e in zip(lam, mu):
                term *= x**e
            total += term
        return total

    @property
    def is_zero(self):
        return not self.coeffs


def evaluate_volume(polys, lam, limit=None):
    """Exact Vol(sum_i lam_i P_i) for positive rational lam."""
    lam = [Fraction(x) for x in lam]
    if any(x <= 0 for x in lam):
        raise GeometryError("scaling vector must be positive")
    return geometry.volume(geometry.minkowski_sum(polys, lam), limit=limit)


def interpolate_coefficients(polys, limit=None) -> MinkowskiPolynomial:
    """Exact coefficient recovery from volumes on the grid lam = mu + 1.

    The grid is exponent-indexed, which keeps the interpolation matrix
    invertible and the rational growth modest.
    """
    k = len(polys)
    n = polys[0].ambient_dim
    mus = exponents(n, k)
    grid = [tuple(e + 1 for e in mu) for mu in mus]
    rows = []
    rhs = []
    for lam in grid:
        row = []
        for mu in mus:
            term = Fraction(1)
            for x, e in zip(lam, mu):
                term *= Fraction(x) ** e
            row.append(term)
        rows.append(row)
        rhs.append(evaluate_volume(polys, lam, limit=limit))
    try:
        sol = linalg.solve_square(rows, rhs)
    except ValueError as exc:  # distinct-grid design keeps this unreachable
        raise RuntimeError("singular interpolation system") from exc
    coeffs = {mu: c for mu, c in zip(mus, sol)}
    return MinkowskiPolynomial(n=n, k=k, coeffs=coeffs)


def coefficient(V: MinkowskiPolynomial, alpha):
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != V.k or sum(alpha) != V.n:
        raise ValueError(f"exponent {alpha} must have length {V.k} and sum {V.n}")
    return V.coeffs.get(alpha, Fraction(0))


@dataclass(frozen=True)
class NormalizationRecord:
    """The three mixed-volume normalizations in circulation, side by side.

    coefficient          c_a, the raw coefficient of l^a in the polynomial
    derivative_form      a! * c_a  (the iterated-derivative convention)
    standard_mixed_volume c_a / multinomial(n, a)  (the symmetric-function
                          convention, where V(P,...,P) = Vol(P))
    """

    coefficient: Fraction
    derivative_form: Fraction
    standard_mixed_volume: Fraction


def convert_normalization(c_alpha, alpha, n) -> NormalizationRecord:
    alpha = tuple(int(a) for a in alpha)
    if sum(alpha) != n:
        raise ValueError("alpha must sum to the total degree")
    c = Fraction(c_alpha)
    fact = 1
    for a in alpha:
        fact *= factorial(a)
    return NormalizationRecord(
        coefficient=c,
        derivative_form=c * fact,
        standard_mixed_volume=c / multinomial(n, alpha),
    )


def degrees_d(V: MinkowskiPolynomial, alpha, dims=None):
    """Per-variable degree data (d_1, ..., d_k) used by the coefficient bounds.

    d_i (i < k) is the x_i-degree after differentiating away the alpha-tail
    in variables i+1..k and then setting those variables to zero; d_k is the
    plain x_k-degree.  On the coefficient map this reads off as the largest
    mu_i over monomials whose tail matches alpha's tail exactly.

    When `dims` (intrinsic polytope dimensions) is supplied, the property
    d_i <= dim(P_i) is asserted.
    """
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != V.k or sum(alpha) != V.n:
        raise ValueError("alpha must be a degree partition of n")
    if V.is_zero:
        raise ValueError("degree data of the zero polynomial is undefined")
    d = []
    for i in range(V.k - 1):
        cand = [
            mu[i]
            for mu in V.coeffs
            if all(mu[j] == alpha[j] for j in range(i + 1, V.k))
        ]
        d.append(max(cand) if cand else alpha[i])
    d.append(max(mu[V.k - 1] for mu in V.coeffs))
    d = tuple(d)
    if dims is not None:
        for di, pdim in zip(d, dims):
            if di > pdim:
                raise AssertionError(
                    f"degree datum {di} exceeds polytope dimension {pdim}"
                )
    return d
