"""Exact arithmetic in the Gaussian rationals Q(i).

Every coordinate used by the library lives here: numbers of the form
re + im*i with re, im exact rationals.  Q(i) is closed under complex
conjugation, which is the only field automorphism the rest of the
package ever applies.  All operations normalize, so equality is
structural and values are hashable.

The rational components are `fractions.Fraction`: always gcd-reduced,
denominator positive, zero stored as 0/1.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction
from math import isqrt

from .errors import InternalError, InvalidInputError

Rational = Fraction


class ParseError(InvalidInputError):
    """Malformed Q(i) literal; carries the offset of the offending character."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NotANormError(InvalidInputError):
    """The rational is not a sum of two rational squares."""


class GaussianRational:
    """An element of Q(i), held as exact real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, float) or isinstance(im, float):
            raise InvalidInputError(
                "floats are not exact; pass ints, Fractions or strings"
            )
        self.re = Fraction(re)
        self.im = Fraction(im)

    @property
    def is_real(self):
        return self.im == 0

    def conj(self) -> "GaussianRational":
        """Complex conjugate: negates the imaginary part."""
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """x * conj(x) = re^2 + im^2, a nonnegative rational; zero iff x = 0."""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(i)")
        return GaussianRational(self.re / n, -self.im / n)

    @staticmethod
    def _coerced(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other)
        return None

    def __add__(self, other):
        other = GaussianRational._coerced(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational._coerced(other)
        if other is None:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = GaussianRational._coerced(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = GaussianRational._coerced(other)
        if other is None:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational._coerced(other)
        if other is None:
            return NotImplemented
        if not other:
            raise ZeroDivisionError("division by zero in Q(i)")
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = GaussianRational._coerced(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = GaussianRational(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = GaussianRational._coerced(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_gq(self)


def gq(value) -> GaussianRational:
    """Coerce an int, Fraction, string literal or GaussianRational to Q(i)."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, str):
        return parse_gq(value)
    return GaussianRational(value)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


# --- string grammar ----------------------------------------------------------
#
#   gaussian  ::=  rational ( ("+"|"-") rational "i" )?
#   rational  ::=  int ( "/" posint )?
#
# The coefficient of i is mandatory ("2+1i", never "2+i"), so formatted
# values round-trip unambiguously.

_RATIONAL_RE = _re.compile(r"(-?\d+)(?:/(\d+))?")


def _scan_rational(text, pos):
    m = _RATIONAL_RE.match(text, pos)
    if m is None:
        raise ParseError("expected a rational number", pos)
    if m.group(2) is not None and int(m.group(2)) == 0:
        raise ParseError("denominator must be positive", m.start(2))
    value = Fraction(int(m.group(1)), int(m.group(2)) if m.group(2) else 1)
    return value, m.end()


def parse_gq(text: str) -> GaussianRational:
    """Parse a Q(i) literal such as "2+1i", "-3/4" or "0-5/7i"."""
    re_part, pos = _scan_rational(text, 0)
    if pos == len(text):
        return GaussianRational(re_part)
    sign = text[pos]
    if sign not in "+-":
        raise ParseError("expected '+', '-' or end of input", pos)
    im_part, pos = _scan_rational(text, pos + 1)
    if pos == len(text) or text[pos] != "i":
        raise ParseError("expected 'i'", pos)
    pos += 1
    if pos != len(text):
        raise ParseError("trailing characters", pos)
    return GaussianRational(re_part, -im_part if sign == "-" else im_part)


def format_gq(x: GaussianRational) -> str:
    """Format so that parse_gq(format_gq(x)) == x."""
    if x.im == 0:
        return str(x.re)
    sign = "-" if x.im < 0 else "+"
    return f"{x.re}{sign}{abs(x.im)}i"


# --- sum of two squares ------------------------------------------------------


_SMALL_PRIME_BOUND = 10_000

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n):
    """Deterministic Miller-Rabin for every input this package produces."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_rho(n):
    """A nontrivial factor of composite odd n; Brent's cycle variant."""
    from math import gcd

    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise InternalError(f"rho failed to factor {n}")


def _factorize(n):
    """Factorization of a positive integer as an ascending (prime, exponent) list.

    Trial division up to a small bound, then Miller-Rabin plus Brent's
    rho for whatever remains.
    """
    factors = {}
    d = 2
    while d <= _SMALL_PRIME_BOUND and d * d <= n:
        while n % d == 0:
            n //= d
            factors[d] = factors.get(d, 0) + 1
        d += 1 if d == 2 else 2
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        g = _brent_rho(m)
        stack.append(g)
        stack.append(m // g)
    return sorted(factors.items())


def _sqrt_minus_one(p):
    """A square root of -1 mod p, for prime p = 1 mod 4."""
    for b in range(2, p):
        if pow(b, (p - 1) // 2, p) == p - 1:
            return pow(b, (p - 1) // 4, p)
    raise InternalError(f"no quadratic non-residue found mod {p}")


def _cornacchia(p):
    """(x, y) with x^2 + y^2 = p and x >= y >= 1, for prime p = 1 mod 4."""
    r = _sqrt_minus_one(p)
    r = min(r, p - r)
    a, b = p, r
    while b * b > p:
        a, b = b, a % b
    y = isqrt(p - b * b)
    if b * b + y * y != p:
        raise InternalError(f"Cornacchia failed for {p}")
    return (max(b, y), min(b, y))


def _gaussian_integer_with_norm(n):
    """A Gaussian integer of norm exactly n, or NotANormError."""
    z = GaussianRational(1)
    for p, e in _factorize(n):
        if p == 2:
            z = z * GaussianRational(1, 1) ** e
        elif p % 4 == 1:
            x, y = _cornacchia(p)
            z = z * GaussianRational(x, y) ** e
        else:
            if e % 2:
                raise NotANormError(
                    f"{p} = 3 (mod 4) divides to odd order {e}: not a sum of two squares"
                )
            z = z * GaussianRational(p ** (e // 2))
    return z


def two_squares(mu) -> GaussianRational:
    """Some t in Q(i) with norm(t) == mu, for positive rational mu.

    Found by Gaussian-integer factorization of numerator and denominator:
    Cornacchia on primes = 1 mod 4, pairing of primes = 3 mod 4.  Raises
    NotANormError when a prime = 3 mod 4 appears to odd order.
    """
    mu = Fraction(mu)
    if mu <= 0:
        raise NotANormError(f"{mu} is not positive")
    num = _gaussian_integer_with_norm(mu.numerator)
    den = _gaussian_integer_with_norm(mu.denominator)
    return num / den
