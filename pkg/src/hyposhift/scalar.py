"""Exact/float scalars and rational polynomials on [0, 1].

Exact values are :class:`fractions.Fraction` (ints are accepted and promoted);
float mode uses plain Python floats. Polynomials carry rational coefficients
and support the Sturm-sequence machinery used to certify nonnegativity.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, float]

#: Global tolerance for float-mode sign decisions.
FLOAT_TOL = 1e-10

#: Largest denominator used when a decimal literal is snapped to a rational.
DECIMAL_DENOMINATOR_LIMIT = 10**6


class ExactnessError(TypeError):
    """Raised when an operation that needs exact arithmetic receives floats."""


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def exact(x) -> Fraction:
    """Promote ``x`` to a Fraction, refusing floats."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Rational):
        return Fraction(x)
    raise ExactnessError(f"exact arithmetic required, got {type(x).__name__} {x!r}")


def as_mode(x, mode: str) -> Scalar:
    if mode == "exact":
        return exact(x) if is_exact(x) else Fraction(x)
    if mode == "float":
        return float(x)
    raise ValueError(f"unknown mode {mode!r}")


def parse_scalar(text: str, mode: str = "exact") -> Scalar:
    """Parse ``"p/q"``, an integer or a decimal literal.

    In exact mode a decimal literal is snapped to the nearest rational with
    denominator at most ``DECIMAL_DENOMINATOR_LIMIT``.
    """
    s = str(text).strip()
    if not s:
        raise ValueError("empty scalar literal")
    if mode == "float":
        if "/" in s:
            return float(Fraction(s))
        return float(s)
    try:
        if "/" in s:
            num, den = s.split("/")
            value = Fraction(int(num), int(den))
        else:
            value = Fraction(s)
    except (ValueError, ZeroDivisionError) as err:
        raise ValueError(f"cannot parse scalar literal {text!r}") from err
    if "/" not in s and any(c in s for c in ".eE"):
        value = value.limit_denominator(DECIMAL_DENOMINATOR_LIMIT)
    return value


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


class Poly:
    """Univariate polynomial with ascending coefficients in the variable t."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [c if isinstance(c, (Fraction, float)) else Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, d: int, c=1) -> "Poly":
        return cls([0] * d + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, t):
        acc = Fraction(0) if is_exact(t) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly([{', '.join(format_scalar(c) for c in self.coeffs)}])"

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        return Poly(x * c for x in self.coeffs)

    def shift_up(self, h: int) -> "Poly":
        """Multiply by t**h."""
        if self.is_zero():
            return self
        return Poly((0,) * h + self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [exact(c) for c in self.coeffs]
        dq = other.degree
        lead = exact(other.lead())
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            if c:
                quot[i - dq] = c
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq])

    def monic(self) -> "Poly":
        return self.scale(1 / exact(self.lead())) if self.coeffs else self


def poly_gcd(p: Poly, q: Poly) -> Poly:
    while not q.is_zero():
        p, q = q, p.divmod(q)[1]
    return p.monic()


def poly_integral_01(p: Poly, k: int = 0) -> Scalar:
    """Integral of ``t**k * p(t)`` over [0, 1], termwise."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    exact_mode = all(is_exact(c) for c in p.coeffs)
    total = Fraction(0) if exact_mode else 0.0
    for d, c in enumerate(p.coeffs):
        total += c / (k + d + 1) if not exact_mode else Fraction(c) / (k + d + 1)
    return total


# -- Sturm machinery ---------------------------------------------------------

def sturm_sequence(p: Poly) -> list[Poly]:
    if p.is_zero():
        raise ValueError("Sturm sequence of the zero polynomial")
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-seq[-2].divmod(seq[-1])[1])
    seq.pop()
    return seq


def sign_variations(seq: Sequence[Poly], t: Fraction) -> int:
    signs = [v > 0 for v in (q(t) for q in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: Sequence[Poly], lo: Fraction, hi: Fraction) -> int:
    """Distinct real roots in (lo, hi] of the Sturm sequence's head polynomial."""
    return sign_variations(seq, lo) - sign_variations(seq, hi)


def squarefree_part(p: Poly) -> Poly:
    g = poly_gcd(p, p.derivative())
    return p.divmod(g)[0].monic() if g.degree > 0 else p.monic()


def isolate_roots(p: Poly, lo=Fraction(0), hi=Fraction(1)) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals ``(a, b]`` for the distinct roots of ``p`` in (lo, hi].

    Each interval holds exactly one root; split points are never roots, so
    only ``hi`` itself can be a root lying on an interval endpoint.
    """
    if p.degree < 1:
        return []
    q = squarefree_part(p)
    seq = sturm_sequence(q)
    lo, hi = exact(lo), exact(hi)
    out = []
    stack = [(lo, hi, count_roots(seq, lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = (a + b) / 2
        while q(m) == 0:
            m = (m + b) / 2
        left = count_roots(seq, a, m)
        stack.append((m, b, n - left))
        stack.append((a, m, left))
    out.sort()
    return out


def squarefree_decomposition(p: Poly) -> tuple[Fraction, list[Poly]]:
    """Yun's algorithm: ``p == c * prod(f_i ** i)`` with monic squarefree ``f_i``."""
    c = exact(p.lead())
    f = p.monic()
    if f.degree < 1:
        return c, []
    df = f.derivative()
    g = poly_gcd(f, df)
    b = f.divmod(g)[0]
    d = df.divmod(g)[0] - b.derivative()
    out = []
    while b.degree > 0:
        a = poly_gcd(b, d)
        out.append(a)
        b = b.divmod(a)[0]
        d = d.divmod(a)[0] - b.derivative()
    return c, out


def _odd_part(p: Poly) -> Poly:
    c, factors = squarefree_decomposition(p)
    odd = Poly([c])
    for i, f in enumerate(factors, start=1):
        if i % 2 == 1:
            odd = odd * f
    return odd


def negative_witness_01(p: Poly) -> Fraction | None:
    """A rational point of [0, 1] where ``p`` is negative, or None if ``p >= 0``.

    Writing ``p = c * prod(f_i ** i)``, the factors of even multiplicity are
    squares, so ``p >= 0`` on [0, 1] iff the signed odd part ``c * prod_odd f_i``
    is. That part is squarefree, hence it changes sign at every root in the
    open interval, and the test reduces to a Sturm root count plus one sign.
    """
    if any(not is_exact(c) for c in p.coeffs):
        raise ExactnessError("sign certification needs exact coefficients")
    if p.is_zero():
        return None
    zero, one, half = Fraction(0), Fraction(1), Fraction(1, 2)
    for t in (zero, one):
        if p(t) < 0:
            return t
    odd = _odd_part(p)
    if odd.degree < 1:
        return None if odd.lead() > 0 else half
    seq = sturm_sequence(odd)
    interior = count_roots(seq, zero, one) - (1 if odd(one) == 0 else 0)
    if interior == 0:
        return None if odd(half) > 0 else half
    return _witness_near_roots(p, odd, seq)


def _witness_near_roots(p: Poly, odd: Poly, seq) -> Fraction:
    # a simple interior root of the odd part flips the sign; probe both sides
    for a, b in isolate_roots(odd, Fraction(0), Fraction(1)):
        if odd(b) == 0:
            if b == 1:
                continue
            step = min(b - a, 1 - b) / 2
            while count_roots(seq, b - step, b + step) > 1:
                step /= 2
            probes = (b - step, b + step)
        else:
            for _ in range(64):
                m = (a + b) / 2
                if odd(m) == 0:
                    a, b = (a + m) / 2, (m + b) / 2
                    break
                if count_roots(seq, a, m):
                    b = m
                else:
                    a = m
            probes = (a, b)
        for t in probes:
            if p(t) < 0:
                return t
    raise ArithmeticError("sign change detected but no negative probe found")


def poly_nonneg_01(p: Poly) -> bool:
    """True iff ``p(t) >= 0`` for every t in [0, 1]. Exact coefficients only."""
    return negative_witness_01(p) is None
