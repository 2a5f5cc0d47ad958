"""Berger measures: finite atoms plus a polynomial density on [0, 1], and products.

Covers the moment computations, restriction to ``M_h``, the extremal and
marginal constructions, order comparison and the subnormal backward-extension
test for 2-variable shifts with a subnormal upper part.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .moments import gamma_1d
from .scalar import Poly, exact, format_scalar, negative_witness_01, parse_scalar, poly_integral_01
from .shifts import WeightSeq1D


class NonIntegrableError(ValueError):
    """1/t is not integrable against the given measure."""


@dataclass(frozen=True)
class Measure1D:
    """``sum(mass * delta_loc) + density(t) dt`` on [0, 1]; atoms at equal locations merge."""

    atoms: tuple[tuple[Fraction, Fraction], ...] = ()
    density: Poly = Poly()

    def __init__(self, atoms: Iterable | Mapping = (), density: Poly | Iterable = (), *,
                 signed: bool = False):
        merged: dict[Fraction, Fraction] = {}
        for loc, mass in (atoms.items() if isinstance(atoms, Mapping) else atoms):
            loc, mass = exact(loc), exact(mass)
            merged[loc] = merged.get(loc, Fraction(0)) + mass
        clean = tuple(sorted((loc, m) for loc, m in merged.items() if m != 0))
        dens = density if isinstance(density, Poly) else Poly(density)
        object.__setattr__(self, "atoms", clean)
        object.__setattr__(self, "density", dens)
        if not signed:
            self.validate()

    def validate(self) -> None:
        for loc, m in self.atoms:
            if not 0 <= loc <= 1:
                raise ValueError(f"atom at {loc} lies outside [0, 1]")
            if m < 0:
                raise ValueError(f"negative mass {m} at {loc}")
        bad = negative_witness_01(self.density)
        if bad is not None:
            raise ValueError(f"density is negative at t={bad}")

    def atom_mass(self, loc) -> Fraction:
        loc = exact(loc)
        for l, m in self.atoms:
            if l == loc:
                return m
        return Fraction(0)

    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0)) + poly_integral_01(self.density, 0)

    def moment(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("moment order must be nonnegative")
        return (sum((m * loc**k for loc, m in self.atoms), Fraction(0))
                + poly_integral_01(self.density, k))

    def scale(self, c) -> "Measure1D":
        c = exact(c)
        return Measure1D([(l, m * c) for l, m in self.atoms], self.density.scale(c),
                         signed=c < 0)

    def __add__(self, other: "Measure1D") -> "Measure1D":
        return Measure1D(self.atoms + other.atoms, self.density + other.density, signed=True)

    def __sub__(self, other: "Measure1D") -> "Measure1D":
        return self + other.scale(-1) if other.atoms or not other.density.is_zero() else self

    def __mul__(self, other: "Measure1D") -> "Measure2D":
        return Measure2D([(self, other)])

    def is_probability(self) -> bool:
        return self.total_mass() == 1


@dataclass(frozen=True)
class Measure2D:
    """Finite sum of product measures ``s_measure × t_measure``."""

    terms: tuple[tuple[Measure1D, Measure1D], ...]

    def __init__(self, terms: Iterable[tuple[Measure1D, Measure1D]]):
        object.__setattr__(self, "terms", tuple(terms))

    def moment(self, k) -> Fraction:
        k1, k2 = k
        return sum((s.moment(k1) * t.moment(k2) for s, t in self.terms), Fraction(0))

    def total_mass(self) -> Fraction:
        return self.moment((0, 0))

    def scale(self, c) -> "Measure2D":
        return Measure2D((s.scale(c), t) for s, t in self.terms)

    def __add__(self, other: "Measure2D") -> "Measure2D":
        return Measure2D(self.terms + other.terms)


def measure_moment(mu: Measure1D | Measure2D, k) -> Fraction:
    return mu.moment(k)


def lebesgue() -> Measure1D:
    return Measure1D(density=Poly([1]))


def point(loc=1) -> Measure1D:
    return Measure1D([(loc, 1)])


def _unit(name: str, v, *, allow_zero: bool = True) -> Fraction:
    v = exact(v)
    if not ((v >= 0 if allow_zero else v > 0) and v <= 1):
        raise ValueError(f"{name}={format_scalar(v)} outside the allowed range")
    return v


def builtin_measure(name: str, **params) -> Measure1D | Measure2D:
    """``mu_x``, ``S_a_measure``, ``mu_M``, ``lebesgue`` or ``point``."""
    if name == "mu_x":
        y2 = _unit("y2", params["y2"], allow_zero=False)
        return Measure1D([(0, 1 - y2), (1, y2 / 2)], Poly([y2 / 2]))
    if name == "S_a_measure":
        a2 = _unit("a2", params["a2"])
        return Measure1D([(0, 1 - a2), (1, a2)])
    if name == "mu_M":
        return builtin_measure("S_a_measure", a2=params["a2"]) * point(1)
    if name == "lebesgue":
        return lebesgue()
    if name == "point":
        return point(params.get("loc", 1))
    raise ValueError(f"unknown measure {name!r}")


def verify_berger(w: WeightSeq1D, mu: Measure1D, k_max: int) -> bool:
    """True iff the shift moments match the measure moments for 0 <= k <= k_max."""
    return first_moment_mismatch(w, mu, k_max) is None


def first_moment_mismatch(w: WeightSeq1D, mu: Measure1D, k_max: int) -> int | None:
    g = Fraction(1)
    for k in range(k_max + 1):
        if k:
            g *= w.sq(k - 1)
        if g != mu.moment(k):
            return k
    return None


def restrict_measure(xi: Measure1D, h: int, gamma_h=None) -> Measure1D:
    """Berger measure of the restriction to ``M_h``: ``t^h dxi(t) / gamma_h``."""
    if h < 1:
        raise ValueError("h must be >= 1")
    g = xi.moment(h) if gamma_h is None else exact(gamma_h)
    if g == 0:
        raise ZeroDivisionError("gamma_h is zero")
    return Measure1D([(l, m * l**h / g) for l, m in xi.atoms], xi.density.shift_up(h).scale(1 / g))


def _inv_t_integral(tau: Measure1D) -> Fraction:
    total = Fraction(0)
    for loc, m in tau.atoms:
        if loc == 0:
            raise NonIntegrableError(f"atom of mass {m} at t=0")
        total += m / loc
    if not tau.density.is_zero():
        if tau.density(Fraction(0)) != 0:
            raise NonIntegrableError("t-density does not vanish at t=0")
        total += poly_integral_01(Poly(tau.density.coeffs[1:]), 0)
    return total


def one_over_t_norm(mu: Measure2D) -> Fraction:
    """``∬ (1/t) dmu(s, t)``; raises NonIntegrableError naming the offending term."""
    total = Fraction(0)
    for i, (s, t) in enumerate(mu.terms):
        ms = s.total_mass()
        if ms == 0:
            continue
        try:
            total += ms * _inv_t_integral(t)
        except NonIntegrableError as err:
            raise NonIntegrableError(f"term {i}: {err}") from None
    return total


def extremal_measure(mu: Measure2D) -> Measure2D:
    """Drop the slice t = 0 and reweight by ``1 / (t * ||1/t||)``."""
    norm = one_over_t_norm(mu)
    out = []
    for s, t in mu.terms:
        atoms = [(l, m / (l * norm)) for l, m in t.atoms if l != 0]
        dens = Poly(t.density.coeffs[1:]).scale(1 / norm) if not t.density.is_zero() else Poly()
        out.append((s, Measure1D(atoms, dens)))
    return Measure2D(out)


def marginal_x(mu: Measure2D) -> Measure1D:
    acc = Measure1D()
    for s, t in mu.terms:
        acc = acc + s.scale(t.total_mass())
    return Measure1D(acc.atoms, acc.density)


def leq_witness(mu1: Measure1D, mu2: Measure1D) -> tuple[str, Fraction] | None:
    """Where ``mu1 <= mu2`` fails: ``("atom", location)`` or ``("density", t)``."""
    for loc, m in mu1.atoms:
        if m > mu2.atom_mass(loc):
            return ("atom", loc)
    t = negative_witness_01(mu2.density - mu1.density)
    return None if t is None else ("density", t)


def measure_leq(mu1: Measure1D, mu2: Measure1D) -> bool:
    """Order on the atoms-plus-polynomial-density class, compared part by part."""
    return leq_witness(mu1, mu2) is None


@dataclass
class BackwardExtension:
    subnormal: bool
    failed_condition: str | None = None
    constructed_mu: Measure2D | None = None
    norm: Fraction | None = None
    witness: object = None


def backward_extension_check(mu_M: Measure2D, nu: Measure1D, beta00_sq) -> BackwardExtension:
    """Subnormality of the backward extension from the upper part's measure ``mu_M``,
    the bottom row's measure ``nu`` and the weight ``beta00_sq``.

    Conditions: (i) 1/t integrable, (ii) ``beta00_sq <= 1/||1/t||``,
    (iii) ``beta00_sq ||1/t|| (mu_M)_ext^X <= nu``. On success the Berger
    measure of the whole shift is assembled and checked to have mass 1.
    """
    b = exact(beta00_sq)
    try:
        norm = one_over_t_norm(mu_M)
    except NonIntegrableError as err:
        return BackwardExtension(False, "i", witness=str(err))
    if b * norm > 1:
        return BackwardExtension(False, "ii", norm=norm, witness=b * norm)
    ext = extremal_measure(mu_M)
    lhs = marginal_x(ext).scale(b * norm)
    bad = leq_witness(lhs, nu)
    if bad is not None:
        return BackwardExtension(False, "iii", norm=norm, witness=bad)
    rest = nu - lhs
    mu = ext.scale(b * norm) + Measure2D([(Measure1D(rest.atoms, rest.density), point(0))])
    if mu.total_mass() != nu.total_mass():
        raise ArithmeticError("constructed measure does not carry the mass of nu")
    return BackwardExtension(True, None, mu, norm)


def equality_clause(mu_M: Measure2D, nu: Measure1D, beta00_sq) -> dict:
    """Both comparisons behind the equality case ``beta00_sq ||1/t|| = 1``.

    Reports whether the product equals 1, whether the marginal of the
    extremal measure equals ``nu`` as a measure, and whether their first 20
    moments agree.
    """
    norm = one_over_t_norm(mu_M)
    marg = marginal_x(extremal_measure(mu_M))
    return {
        "product": exact(beta00_sq) * norm,
        "is_equality_case": exact(beta00_sq) * norm == 1,
        "measures_equal": marg.atoms == nu.atoms and marg.density == nu.density,
        "moments_equal": all(marg.moment(k) == nu.moment(k) for k in range(20)),
    }


# -- text format -------------------------------------------------------------

def _dump1(m: Measure1D, prefix: str = "") -> list[str]:
    lines = [f"{prefix}atom {format_scalar(l)} {format_scalar(w)}" for l, w in m.atoms]
    if not m.density.is_zero():
        lines.append(f"{prefix}density " + " ".join(format_scalar(c) for c in m.density.coeffs))
    return lines


def dump_measure(mu: Measure1D | Measure2D) -> str:
    """``measure1d`` with atom/density lines, or ``measure2d`` with ``term`` blocks."""
    if isinstance(mu, Measure1D):
        return "\n".join(["measure1d"] + _dump1(mu)) + "\n"
    lines = ["measure2d"]
    for s, t in mu.terms:
        lines += ["term"] + _dump1(s, "s ") + _dump1(t, "t ")
    return "\n".join(lines) + "\n"


def load_measure(text: str) -> Measure1D | Measure2D:
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or lines[0][0] not in ("measure1d", "measure2d"):
        raise ValueError("missing measure1d/measure2d header")

    def build(parts):
        atoms, dens = [], []
        for p in parts:
            if p[0] == "atom":
                atoms.append((parse_scalar(p[1]), parse_scalar(p[2])))
            elif p[0] == "density":
                dens = [parse_scalar(c) for c in p[1:]]
            else:
                raise ValueError(f"bad measure line {' '.join(p)!r}")
        return Measure1D(atoms, Poly(dens))

    if lines[0][0] == "measure1d":
        return build(lines[1:])
    terms, cur = [], None
    for p in lines[1:]:
        if p[0] == "term":
            cur = {"s": [], "t": []}
            terms.append(cur)
        elif p[0] in ("s", "t") and cur is not None:
            cur[p[0]].append(p[1:])
        else:
            raise ValueError(f"bad measure line {' '.join(p)!r}")
    return Measure2D((build(c["s"]), build(c["t"])) for c in terms)


def figure2_extension(a2, y2) -> BackwardExtension:
    """Backward-extension verdict for the two-parameter family."""
    return backward_extension_check(builtin_measure("mu_M", a2=a2),
                                    builtin_measure("mu_x", y2=y2), y2)
