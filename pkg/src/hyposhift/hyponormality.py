"""k-hyponormality verdicts, closed-form thresholds and threshold search."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .moments import iter_box, moment_matrix
from .positivity import (BORDERLINE, NOT_PSD, PSD, PsdVerdict, dedupe_symmetric, det_exact,
                         jacobi_scaled, psd_exact_cached, psd_float)
from .scalar import FLOAT_TOL, Scalar, exact, format_scalar
from .shifts import HypothesisWarning, Key, WeightField2D, family_figure2

DEFAULT_U_BOUND = 10
DEFAULT_K_MAX = 6
DEFAULT_BISECT_TOL = 1e-9
HALF = Fraction(1, 2)


class BorderlineError(RuntimeError):
    """A float verdict was inconclusive and no exact data exists to settle it."""


class BracketError(ValueError):
    """The bisection endpoints do not straddle a verdict change."""


@dataclass(frozen=True)
class HypoVerdict:
    """k-hyponormality verified for every u in the box [0, checked_u_bound]²."""

    k: int
    holds: bool
    checked_u_bound: int
    witness_u: Key | None = None
    mode: str = "exact"
    escalations: int = 0
    detail: PsdVerdict | None = None


def _u_psd(f: WeightField2D, u: Key, k: int, mode: str, tol: float) -> tuple[PsdVerdict, bool]:
    """PSD verdict of ``M_u(k)`` and whether an exact escalation was needed."""
    rows, _ = dedupe_symmetric(moment_matrix(f, u, k).entries)
    if mode == "exact":
        return psd_exact_cached(rows), False
    if mode != "float":
        raise ValueError(f"unknown mode {mode!r}")
    scaled = jacobi_scaled(rows)
    if scaled is not None:
        v = psd_float(scaled, tol)
        if v.status != BORDERLINE:
            return v, False
    if not f.exact:
        raise BorderlineError(f"float test inconclusive at u={u} and the field has no exact data")
    return psd_exact_cached(rows), True


def is_k_hyponormal(f: WeightField2D, k: int, u_bound: int = DEFAULT_U_BOUND,
                    mode: str = "exact", tol: float = FLOAT_TOL) -> HypoVerdict:
    """Check ``M_u(k) >= 0`` for all u with u1, u2 <= u_bound, in lattice order.

    A positive answer only covers the checked box; the remaining lattice is
    not decidable from finitely many moments.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if u_bound < 0:
        raise ValueError("u_bound must be >= 0")
    escalations = 0
    for u in iter_box(u_bound):
        v, escalated = _u_psd(f, u, k, mode, tol)
        escalations += escalated
        if not v.is_psd:
            return HypoVerdict(k, False, u_bound, u, mode, escalations, v)
    return HypoVerdict(k, True, u_bound, None, mode, escalations)


# -- the reduced matrices of the family --------------------------------------

def hk_matrix(a2, y2, k: int) -> list[list[Fraction]]:
    """The (k+3)×(k+3) matrix H_k(y), rows and columns 1, x, y, xy, x², ..., x^k.

    Built from the displayed entries: pure x-power pairs (i, j) give
    (i+j+2)/(2(i+j+1)) except the corner 1/y²; y against 1 or y gives 1;
    every other entry is a².
    """
    if k < 2:
        raise ValueError("H_k(y) is defined for k >= 2")
    a2, y2 = exact(a2), exact(y2)
    if y2 <= 0:
        raise ValueError("y2 must be positive")
    n = k + 3
    xexp = [0, 1, None, None] + list(range(2, k + 1))
    out = [[a2] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if xexp[i] is not None and xexp[j] is not None:
                s = xexp[i] + xexp[j]
                out[i][j] = Fraction(s + 2, 2 * (s + 1))
    out[0][0] = 1 / y2
    out[0][2] = out[2][0] = out[2][2] = Fraction(1)
    return out


def ak_matrix(a2, k: int) -> list[list[Fraction]]:
    """The (k+2)×(k+2) matrix A_k, built from its own display (rows x, y, xy, x², ..., x^k)."""
    if k < 2:
        raise ValueError("A_k is defined for k >= 2")
    a2 = exact(a2)
    n = k + 2
    out = [[a2] * n for _ in range(n)]
    # positions: 0 -> x, 1 -> y, 2 -> xy, 3.. -> x^2..x^k
    xexp = [1, None, None] + list(range(2, k + 1))
    for i in range(n):
        for j in range(n):
            if xexp[i] is not None and xexp[j] is not None:
                s = xexp[i] + xexp[j]
                out[i][j] = Fraction(s + 2, 2 * (s + 1))
    out[1][1] = Fraction(1)
    return out


# -- closed forms ------------------------------------------------------------

def _c(k: int) -> Fraction:
    return Fraction((k + 1) ** 2, 2 * k * (k + 2))


def _a_k(k: int) -> Fraction:
    fact = math.factorial
    sf = math.prod(fact(i) for i in range(1, k))
    num = sf**2 * math.prod(fact(i) for i in range(2, k + 2))
    den = 2 ** (k - 1) * math.prod(fact(i) for i in range(k + 2, 2 * k + 2))
    return Fraction(num, den) * k * (k + 2)


CLOSED_FORM_KINDS = ("D_k", "D_k_half", "hypo1", "subnormal", "a_k", "detA_k", "detH_k1")


def closed_form(kind: str, a2=HALF, k: int = 2) -> Fraction:
    """Closed-form thresholds (as y² values) and determinant formulas of the family.

    ``D_k``        k-hyponormality bound on y², k >= 2
    ``D_k_half``   simplified ``1 / (1 + k(k+2)/(2(k+1)²))``, only at a² = 1/2
    ``hypo1``      joint hyponormality bound ``(32 − 48a⁴)/(59 − 72a²)``
    ``subnormal``  ``1/(2 − a²)``
    ``a_k``, ``detA_k``, ``detH_k1``  the determinant identities of A_k and H_k(1)
    """
    a2 = exact(a2)
    if kind in ("D_k", "D_k_half", "a_k", "detA_k", "detH_k1") and k < 2:
        raise ValueError(f"{kind} needs k >= 2 (use 'hypo1' for k = 1)")
    if kind == "D_k":
        num = _c(k) - a2
        den = a2 * a2 - Fraction(5, 2) * a2 + _c(k) + Fraction(2 * k * k + 4 * k + 3, 4 * (k + 1) ** 2)
        return num / den
    if kind == "D_k_half":
        if a2 != HALF:
            raise ValueError("D_k_half is only valid at a2 = 1/2")
        return 1 / (1 + Fraction(k * (k + 2), 2 * (k + 1) ** 2))
    if kind == "hypo1":
        return (32 - 48 * a2 * a2) / (59 - 72 * a2)
    if kind == "subnormal":
        return 1 / (2 - a2)
    if kind == "a_k":
        return _a_k(k)
    if kind == "detA_k":
        return _a_k(k) * a2 * (1 - a2) * (_c(k) - a2)
    if kind == "detH_k1":
        return _a_k(k) * a2 * (a2 - 1) * ((1 - a2) * (HALF - a2) + Fraction(1, 4 * (k + 1) ** 2))
    raise ValueError(f"unknown closed-form kind {kind!r}")


def expected_threshold(a2, k: int) -> Fraction:
    """y² bound below which (inclusive) the family is k-hyponormal."""
    return closed_form("hypo1", a2) if k == 1 else closed_form("D_k", a2, k)


def det_identities_check(a2, y2, k: int, ak: Sequence[Sequence] | None = None) -> bool:
    """Exact check of det A_k, det H_k(1) and ``det H_k(y) = (1/y² − 1) det A_k + det H_k(1)``.

    ``ak`` replaces the A_k matrix (used for fault injection in tests).
    """
    a2, y2 = exact(a2), exact(y2)
    det_a = det_exact(ak if ak is not None else ak_matrix(a2, k))
    det_h1 = det_exact(hk_matrix(a2, 1, k))
    det_hy = det_exact(hk_matrix(a2, y2, k))
    return (det_hy == (1 / y2 - 1) * det_a + det_h1
            and det_a == closed_form("detA_k", a2, k)
            and det_h1 == closed_form("detH_k1", a2, k))


# -- threshold search --------------------------------------------------------

def figure2_factory(a2, y2) -> WeightField2D:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", HypothesisWarning)
        return family_figure2(a2, y2)


@dataclass
class ThresholdReport:
    a2: Fraction
    k: int
    closed_form_y2: Fraction | None
    bisected_y2: float
    lo: Fraction
    hi: Fraction
    exact_confirmed: bool
    abs_gap: float | None
    evaluations: int = 0
    escalations: int = 0


def bisect_threshold(f_factory: Callable[[Fraction, Fraction], WeightField2D] = figure2_factory,
                     a2=HALF, k: int = 2, tol: float = DEFAULT_BISECT_TOL,
                     u_bound: int = DEFAULT_U_BOUND, mode: str = "float",
                     lo=Fraction(1, 2**20), hi=Fraction(1)) -> ThresholdReport:
    """Locate the y² at which ``is_k_hyponormal`` flips from holding to failing.

    Bisection runs on dyadic y² values in ``mode``; the final bracket is then
    confirmed exactly on both sides. If a confirmation disagrees, the search is
    redone in exact mode.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a2 = exact(a2)
    lo, hi = exact(lo), exact(hi)
    stats = {"evals": 0, "esc": 0}

    def holds(y2, m):
        v = is_k_hyponormal(f_factory(a2, y2), k, u_bound, m)
        stats["evals"] += 1
        stats["esc"] += v.escalations
        return v.holds

    if not holds(lo, "exact") or holds(hi, "exact"):
        raise BracketError(f"verdict does not change between y2={format_scalar(lo)} and "
                           f"y2={format_scalar(hi)} (k={k}, a2={format_scalar(a2)})")

    def run(l, h, m):
        while h - l > tol:
            mid = (l + h) / 2
            if holds(mid, m):
                l = mid
            else:
                h = mid
        return l, h

    b_lo, b_hi = run(lo, hi, mode)
    confirmed = True
    if mode != "exact" and (not holds(b_lo, "exact") or holds(b_hi, "exact")):
        confirmed = False
        b_lo, b_hi = run(lo, hi, "exact")
    closed = None
    if a2 <= HALF:
        closed = expected_threshold(a2, k)
    mid = float((b_lo + b_hi) / 2)
    gap = abs(mid - float(closed)) if closed is not None else None
    return ThresholdReport(a2, k, closed, mid, b_lo, b_hi, confirmed or mode == "exact", gap,
                           stats["evals"], stats["esc"])


# -- point classification and sweeps -----------------------------------------

@dataclass
class KRow:
    k: int
    holds: bool
    witness_u: Key | None
    expected: bool | None
    threshold: Fraction | None

    @property
    def agree(self) -> bool | None:
        return None if self.expected is None else self.holds == self.expected


@dataclass
class PointReport:
    a2: Fraction
    y2: Fraction
    u_bound: int
    rows: list[KRow] = field(default_factory=list)
    outside_hypothesis: bool = False
    subnormal_bound: Fraction | None = None

    @property
    def disagreements(self) -> list[int]:
        return [r.k for r in self.rows if r.agree is False]

    @property
    def label(self) -> str:
        if self.outside_hypothesis:
            return "outside validated range (a2 > 1/2): no closed-form expectation"
        if self.y2 <= self.subnormal_bound:
            return "subnormal (≤ subnormal bound)"
        passed = [r.k for r in self.rows if r.expected]
        if not passed:
            return "not hyponormal"
        top = max(passed)
        if top == 1:
            return "hyponormal, not 2-hyponormal, not subnormal"
        return f"{top}-hyponormal, not {top + 1}-hyponormal, not subnormal" \
            if top < self.rows[-1].k else f"{top}-hyponormal (checked k <= {top}), not subnormal"


def classify_point(a2, y2, k_max: int = DEFAULT_K_MAX, u_bound: int = DEFAULT_U_BOUND,
                   mode: str = "exact", k_list: Iterable[int] | None = None,
                   tol: float = FLOAT_TOL) -> PointReport:
    """Empirical verdict per k beside the closed-form expectation for the family."""
    a2, y2 = exact(a2), exact(y2)
    f = figure2_factory(a2, y2)
    inside = a2 <= HALF
    report = PointReport(a2, y2, u_bound, outside_hypothesis=not inside,
                         subnormal_bound=closed_form("subnormal", a2) if inside else None)
    for k in (k_list if k_list is not None else range(1, k_max + 1)):
        v = is_k_hyponormal(f, k, u_bound, mode, tol)
        thr = expected_threshold(a2, k) if inside else None
        report.rows.append(KRow(k, v.holds, v.witness_u, None if thr is None else y2 <= thr, thr))
    return report


SWEEP_COLUMNS = ("a2", "y2", "k", "verdict", "witness_u", "expected", "agree")


def report_rows(rep: PointReport) -> list[dict]:
    """Flatten a point report into rows keyed by ``SWEEP_COLUMNS``."""
    out = []
    for r in rep.rows:
        out.append({
            "a2": format_scalar(rep.a2), "y2": format_scalar(rep.y2), "k": r.k,
            "verdict": "pass" if r.holds else "fail",
            "witness_u": "" if r.witness_u is None else f"{r.witness_u[0]};{r.witness_u[1]}",
            "expected": "" if r.expected is None else ("pass" if r.expected else "fail"),
            "agree": "" if r.agree is None else ("yes" if r.agree else "no"),
        })
    return out


def _sweep_point(args) -> list[dict]:
    a2, y2, ks, u_bound, mode, tol = args
    return report_rows(classify_point(a2, y2, u_bound=u_bound, mode=mode, k_list=ks, tol=tol))


def sweep(a2_grid: Sequence, y2_grid: Sequence, k_list: Sequence[int],
          u_bound: int = DEFAULT_U_BOUND, mode: str = "exact", threads: int = 1,
          tol: float = FLOAT_TOL) -> list[dict]:
    """One row per (a2, y2, k), ordered lexicographically whatever ``threads`` is."""
    if not a2_grid or not y2_grid or not k_list:
        raise ValueError("grids and k list must be nonempty")
    ks = sorted(set(k_list))
    jobs = [(exact(a), exact(y), ks, u_bound, mode, tol)
            for a in sorted(set(map(exact, a2_grid))) for y in sorted(set(map(exact, y2_grid)))]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_sweep_point, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
    else:
        chunks = [_sweep_point(j) for j in jobs]
    return [row for chunk in chunks for row in chunk]
