"""Exact rational scalars: factorial-type products, generalized binomials,
strict p/q parsing, and the moment functional of the scalar weight factor.

Everything here returns Fraction; no floating point enters at any stage.
"""

from __future__ import annotations

import math
import re
import threading
from fractions import Fraction

__all__ = [
    "poch",
    "falling",
    "gen_binom",
    "parse_rational",
    "format_rational",
    "MomentFunctional",
]

RationalLike = Fraction | int


def poch(z: RationalLike, r: int) -> Fraction:
    """Rising factorial z(z+1)...(z+r-1); the empty product is 1."""
    if r < 0:
        raise ValueError("r must be a non-negative integer")
    out = Fraction(1)
    for i in range(r):
        out *= z + i
    return out


def falling(n: RationalLike, i: int) -> Fraction:
    """Falling factorial n(n-1)...(n-i+1); the empty product is 1."""
    if i < 0:
        raise ValueError("i must be a non-negative integer")
    out = Fraction(1)
    for m in range(i):
        out *= n - m
    return out


def gen_binom(z: RationalLike, r: int) -> Fraction:
    """Binomial coefficient with arbitrary rational upper argument.

    Equals poch(z - r + 1, r) / r!, so it vanishes exactly when z is an
    integer with 0 <= z < r.
    """
    if r < 0:
        raise ValueError("r must be a non-negative integer")
    return poch(Fraction(z) - r + 1, r) / math.factorial(r)


_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse 'p' or 'p/q' exactly; decimals and scientific notation are rejected."""
    s = text.strip()
    if not _RATIONAL_RE.match(s):
        raise ValueError(f"not an exact rational of the form p/q: {text!r}")
    if "/" in s:
        num, den = s.split("/")
        if int(den) == 0:
            raise ValueError(f"zero denominator: {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def format_rational(q: RationalLike) -> str:
    """Render a rational as 'p' or 'p/q' in lowest terms with positive denominator."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class MomentFunctional:
    """Moments of (1-u)^alpha u^beta on (0, 1), relative to the zeroth moment.

    ratio(m) is the m-th weighted moment divided by the zeroth one, which is
    the exact rational poch(beta+1, m) / poch(alpha+beta+2, m).  Working in
    these units keeps every Gram computation inside rational arithmetic.
    Instances memoize ratios and are safe to share across threads.
    """

    def __init__(self, alpha: RationalLike, beta: RationalLike):
        alpha = Fraction(alpha)
        beta = Fraction(beta)
        if alpha <= -1:
            raise ValueError("alpha must be > -1")
        if beta <= -1:
            raise ValueError("beta must be > -1")
        self.alpha = alpha
        self.beta = beta
        self._cache = [Fraction(1)]
        self._lock = threading.Lock()

    def ratio(self, m: int) -> Fraction:
        """Exact m-th moment in units of the zeroth moment."""
        if m < 0:
            raise ValueError("m must be a non-negative integer")
        with self._lock:
            while len(self._cache) <= m:
                n = len(self._cache)
                # ratio(n) = ratio(n-1) * (beta + n) / (alpha + beta + 1 + n)
                self._cache.append(
                    self._cache[-1] * (self.beta + n) / (self.alpha + self.beta + 1 + n)
                )
            return self._cache[m]

    def integrate(self, coeffs) -> Fraction:
        """Apply the functional to a scalar polynomial given by ascending coefficients."""
        total = Fraction(0)
        for m, c in enumerate(coeffs):
            if c:
                total += Fraction(c) * self.ratio(m)
        return total
