"""One- and two-variable weighted shifts, stored through squared weights.

Only squared weights are kept so that every quantity stays rational; the
square roots of the weights are never formed.
"""

from __future__ import annotations

import math
import re
import threading
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .scalar import Scalar, exact, format_scalar, is_exact, parse_scalar

Key = tuple[int, int]


class HypothesisWarning(UserWarning):
    """Parameters lie outside the range in which the family's claims hold."""


@dataclass(frozen=True)
class WeightSeq1D:
    """Squared weights of a unilateral shift: an explicit prefix, then a tail rule."""

    name: str
    params: Mapping[str, Scalar]
    prefix: tuple
    tail: Callable[[int], Scalar]
    bound: Scalar

    def sq(self, n: int) -> Scalar:
        if n < 0:
            raise IndexError(f"weight index {n} is negative")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.tail(n)

    def descriptor(self) -> str:
        if not self.params:
            return self.name
        args = ",".join(f"{k}={format_scalar(v)}" for k, v in self.params.items())
        return f"{self.name}({args})"


def _check_unit(name: str, value, *, allow_zero: bool = False) -> Scalar:
    if not isinstance(value, (int, float, Fraction)):
        raise TypeError(f"{name} must be a number, got {value!r}")
    v = exact(value) if is_exact(value) else float(value)
    low_ok = v >= 0 if allow_zero else v > 0
    if not (low_ok and v <= 1):
        raise ValueError(f"{name}={format_scalar(v)} outside (0, 1]")
    return v


def x_sequence_sq(y2) -> WeightSeq1D:
    """Squared weights (3/4)y², then (n+1)(n+3)/(n+2)² for n >= 1."""
    y2 = _check_unit("y2", y2)
    one = Fraction(1) if is_exact(y2) else 1.0

    def tail(n: int) -> Scalar:
        return one * (n + 1) * (n + 3) / (n + 2) ** 2

    return WeightSeq1D("x_seq", {"y2": y2}, (y2 * 3 / 4,), tail, one)


def builtin_1d_shift(name: str, **params) -> WeightSeq1D:
    if name == "S_a":
        a2 = _check_unit("a2", params.get("a2"))
        one = Fraction(1) if is_exact(a2) else 1.0
        return WeightSeq1D("S_a", {"a2": a2}, (a2,), lambda n: one, one)
    if name == "U_plus":
        return WeightSeq1D("U_plus", {}, (), lambda n: Fraction(1), Fraction(1))
    if name == "x_seq":
        return x_sequence_sq(params.get("y2"))
    raise ValueError(f"unknown 1-variable shift {name!r}")


_DESCRIPTOR_RE = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$")


def parse_1d_shift(text: str) -> WeightSeq1D:
    """Parse ``"S_a(a2=1/2)"``, ``"U_plus"`` or ``"x_seq(y2=1/3)"``."""
    m = _DESCRIPTOR_RE.match(text)
    if not m:
        raise ValueError(f"bad shift descriptor {text!r}")
    params = {}
    if m.group(2):
        for item in m.group(2).split(","):
            k, _, v = item.partition("=")
            params[k.strip()] = parse_scalar(v)
    return builtin_1d_shift(m.group(1), **params)


class WeightField2D:
    """Squared weights ``alpha_sq(k)`` (east steps) and ``beta_sq(k)`` (north steps).

    ``overrides`` replaces individual entries and is how perturbed or tabulated
    fields are expressed. Moments are memoized per instance.
    """

    def __init__(self, family: str, params: Mapping, alpha: Callable[[int, int], Scalar],
                 beta: Callable[[int, int], Scalar], bound: Scalar, *,
                 overrides: Mapping | None = None, outside_hypothesis: bool = False):
        self.family = family
        self.params = dict(params)
        self._alpha = alpha
        self._beta = beta
        self.bound = bound
        self.overrides = {"alpha": {}, "beta": {}}
        for which, table in (overrides or {}).items():
            self.overrides[which].update(table)
        self.outside_hypothesis = outside_hypothesis
        self._gamma: dict[Key, Scalar] = {}
        self._lock = threading.Lock()

    def alpha_sq(self, k1: int, k2: int) -> Scalar:
        if k1 < 0 or k2 < 0:
            raise IndexError(f"lattice point {(k1, k2)} outside Z+^2")
        v = self.overrides["alpha"].get((k1, k2))
        return self._alpha(k1, k2) if v is None else v

    def beta_sq(self, k1: int, k2: int) -> Scalar:
        if k1 < 0 or k2 < 0:
            raise IndexError(f"lattice point {(k1, k2)} outside Z+^2")
        v = self.overrides["beta"].get((k1, k2))
        return self._beta(k1, k2) if v is None else v

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in self.params.values() if not isinstance(v, str))

    def with_overrides(self, alpha: Mapping | None = None, beta: Mapping | None = None) -> "WeightField2D":
        merged = {"alpha": dict(self.overrides["alpha"]), "beta": dict(self.overrides["beta"])}
        merged["alpha"].update(alpha or {})
        merged["beta"].update(beta or {})
        return WeightField2D(self.family, self.params, self._alpha, self._beta, self.bound,
                             overrides=merged, outside_hypothesis=self.outside_hypothesis)

    def weight(self, which: str, k1: int, k2: int, display: bool = False):
        """Squared weight, or its square root when ``display`` is set (for reports)."""
        v = self.alpha_sq(k1, k2) if which == "alpha" else self.beta_sq(k1, k2)
        return math.sqrt(v) if display else v

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={_param_str(v)}" for k, v in self.params.items())
        return f"WeightField2D({self.family}: {args})"


def _param_str(v) -> str:
    return v if isinstance(v, str) else format_scalar(v)


def family_figure2(a2, y2) -> WeightField2D:
    """The two-parameter family separating k- from (k+1)-hyponormality.

    Row 0 carries the x-sequence, every higher row is ``(a, 1, 1, ...)``, the
    column k1 = 0 is ``(y, 1, 1, ...)`` and the first-row north weights
    ``a y / (x_0 ... x_{n-1})`` are forced by commutativity.
    """
    y2 = _check_unit("y2", y2)
    a2 = _check_unit("a2", a2)
    outside = a2 > Fraction(1, 2)
    if outside:
        warnings.warn(f"a2={format_scalar(a2)} > 1/2 is outside the validated range a2 <= 1/2",
                      HypothesisWarning, stacklevel=2)
    xs = x_sequence_sq(y2)
    one = Fraction(1) if is_exact(a2) and is_exact(y2) else 1.0
    # running products x_0^2 ... x_{n-1}^2 for the first-row north weights
    partial: list[Scalar] = [one]

    def prod_upto(n: int) -> Scalar:
        while len(partial) <= n:
            partial.append(partial[-1] * xs.sq(len(partial) - 1))
        return partial[n]

    def alpha(k1: int, k2: int) -> Scalar:
        if k2 == 0:
            return xs.sq(k1)
        return a2 if k1 == 0 else one

    def beta(k1: int, k2: int) -> Scalar:
        if k1 == 0:
            return y2 if k2 == 0 else one
        if k2 == 0:
            return a2 * y2 / prod_upto(k1)
        return one

    bound = max(one, a2 * y2 / xs.sq(0))
    return WeightField2D("figure2", {"a2": a2, "y2": y2}, alpha, beta, bound,
                         outside_hypothesis=outside)


def tensor_field(wa: WeightSeq1D, wb: WeightSeq1D) -> WeightField2D:
    """``alpha(k1, k2) = wa(k1)``, ``beta(k1, k2) = wb(k2)``."""
    return WeightField2D("tensor", {"a": wa.descriptor(), "b": wb.descriptor()},
                         lambda k1, k2: wa.sq(k1), lambda k1, k2: wb.sq(k2),
                         max(wa.bound, wb.bound))


def check_commutativity(f: WeightField2D, bound: int) -> bool:
    """Squared commuting condition ``beta(k+e1) alpha(k) == alpha(k+e2) beta(k)``."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    return first_noncommuting(f, bound) is None


def first_noncommuting(f: WeightField2D, bound: int) -> Key | None:
    for k1 in range(bound + 1):
        for k2 in range(bound + 1):
            lhs = f.beta_sq(k1 + 1, k2) * f.alpha_sq(k1, k2)
            rhs = f.alpha_sq(k1, k2 + 1) * f.beta_sq(k1, k2)
            if lhs != rhs:
                return (k1, k2)
    return None


# -- text format -------------------------------------------------------------

def dump_field(f: WeightField2D) -> str:
    """Header lines ``family``/params, then one line per overridden squared weight."""
    lines = [f"family {f.family}"]
    lines += [f"param {k} {_param_str(v)}" for k, v in f.params.items()]
    for which in ("alpha", "beta"):
        for (k1, k2), v in sorted(f.overrides[which].items()):
            lines.append(f"{which} {k1} {k2} {format_scalar(v)}")
    return "\n".join(lines) + "\n"


def load_field(text: str) -> WeightField2D:
    family = None
    params: dict[str, str] = {}
    overrides: dict[str, dict] = {"alpha": {}, "beta": {}}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "family":
            family = rest[0]
        elif head == "param":
            params[rest[0]] = rest[1]
        elif head in ("alpha", "beta"):
            overrides[head][(int(rest[0]), int(rest[1]))] = parse_scalar(rest[2])
        else:
            raise ValueError(f"unrecognised line {raw!r}")
    if family == "figure2":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", HypothesisWarning)
            base = family_figure2(parse_scalar(params["a2"]), parse_scalar(params["y2"]))
    elif family == "tensor":
        base = tensor_field(parse_1d_shift(params["a"]), parse_1d_shift(params["b"]))
    else:
        raise ValueError(f"unknown family {family!r}")
    return base.with_overrides(overrides["alpha"], overrides["beta"])
