"""Deterministic property suites run by ``hyposhift selftest``.

Each check returns a :class:`CheckResult`; randomness comes from a seeded
``random.Random`` so reruns are reproducible.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import berger, hyponormality as hy
from .moments import (gamma_2d, gamma_via_path, hypo_form_matrix, iter_box, moment_matrix,
                      random_monotone_path)
from .positivity import BORDERLINE, dedupe_symmetric, det_exact, psd_exact, psd_float
from .scalar import Poly, poly_nonneg_01
from .shifts import builtin_1d_shift, check_commutativity, tensor_field, x_sequence_sq

HALF = Fraction(1, 2)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0


def _rand_frac(rng: random.Random, lo=0, hi=1, den=97) -> Fraction:
    return Fraction(rng.randint(int(lo * den) + 1, int(hi * den)), den)


def check_poly_sampling(rng) -> str | None:
    grid = np.linspace(0.0, 1.0, 10_001)
    for _ in range(60):
        deg = rng.randint(0, 6)
        p = Poly(Fraction(rng.randint(-20, 20), rng.randint(1, 9)) for _ in range(deg + 1))
        if poly_nonneg_01(p):
            vals = np.polynomial.polynomial.polyval(grid, [float(c) for c in p.coeffs] or [0.0])
            if vals.min() < -1e-9:
                return f"{p} certified nonnegative but sampled {vals.min():.3g}"
    return None


def check_commuting_and_paths(rng) -> str | None:
    fields = [hy.figure2_factory(_rand_frac(rng, 0, HALF), _rand_frac(rng)) for _ in range(3)]
    fields.append(tensor_field(builtin_1d_shift("S_a", a2=Fraction(1, 3)), x_sequence_sq(HALF)))
    for f in fields:
        if not check_commutativity(f, 20):
            return f"{f} fails commutativity"
        for _ in range(100):
            target = (rng.randint(0, 10), rng.randint(0, 10))
            if gamma_via_path(f, random_monotone_path(target, rng)) != gamma_2d(f, target):
                return f"path dependence at {target} for {f}"
    return None


def check_d_equiv_e(rng) -> str | None:
    for _ in range(12):
        f = hy.figure2_factory(_rand_frac(rng, 0, HALF), _rand_frac(rng))
        for k in (1, 2):
            u = (rng.randint(0, 3), rng.randint(0, 3))
            a = psd_exact(moment_matrix(f, u, k)).is_psd
            b = psd_exact(hypo_form_matrix(f, u, k)).is_psd
            if a != b:
                return f"moment matrix and hypo form disagree at {f}, u={u}, k={k}"
    return None


def check_exact_vs_float(rng) -> str | None:
    for _ in range(40):
        n = rng.randint(1, 12)
        rank = rng.randint(1, n)
        vecs = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(rank)]
        shift = Fraction(rng.choice([0, 0, -1, 1]), rng.randint(2, 50))
        M = [[sum(v[i] * v[j] for v in vecs) + (shift if i == j else 0) for j in range(n)]
             for i in range(n)]
        ex = psd_exact(M)
        fl = psd_float(M, 1e-8)
        if fl.status != BORDERLINE and fl.is_psd != ex.is_psd:
            return f"float/exact disagree on a {n}x{n} matrix"
        if ex.is_psd and det_exact(M) < 0:
            return "negative determinant for a PSD matrix"
    return None


def check_nesting(rng) -> str | None:
    for _ in range(6):
        a2, y2 = _rand_frac(rng, 0, HALF), _rand_frac(rng, Fraction(1, 2), 1)
        rep = hy.classify_point(a2, y2, k_max=4, u_bound=3)
        hold = [r.holds for r in rep.rows]
        if any(hold[i + 1] and not hold[i] for i in range(len(hold) - 1)):
            return f"nesting broken at a2={a2}, y2={y2}: {hold}"
    return None


def check_thresholds(rng) -> str | None:
    for a2 in (Fraction(1, 10), Fraction(1, 4), HALF):
        vals = [hy.closed_form("D_k", a2, k) for k in range(2, 51)]
        if any(b >= a for a, b in zip(vals, vals[1:])):
            return f"D(k) not strictly decreasing at a2={a2}"
    if abs(float(hy.closed_form("D_k", HALF, 50)) - 2 / 3) >= 1e-4:
        return "D(50)^2 not within 1e-4 of 1/(2-a^2)"
    for k in range(2, 51):
        if hy.closed_form("D_k", HALF, k) != hy.closed_form("D_k_half", HALF, k):
            return f"simplified D(k) form differs at k={k}"
    return None


def check_det_identities(rng) -> str | None:
    for _ in range(6):
        a2, y2, k = _rand_frac(rng, 0, HALF), _rand_frac(rng), rng.randint(2, 6)
        if not hy.det_identities_check(a2, y2, k):
            return f"determinant identity fails at a2={a2}, y2={y2}, k={k}"
    return None


def check_hk_equivalence(rng) -> str | None:
    for _ in range(10):
        a2, y2, k = _rand_frac(rng, 0, HALF), _rand_frac(rng), rng.randint(2, 4)
        f = hy.figure2_factory(a2, y2)
        if psd_exact(moment_matrix(f, (0, 0), k)).is_psd != psd_exact(hy.hk_matrix(a2, y2, k)).is_psd:
            return f"M_(0,0)(k) vs H_k(y) disagree at a2={a2}, y2={y2}, k={k}"
    return None


def check_u_dominance(rng) -> str | None:
    for _ in range(6):
        a2, y2, k = _rand_frac(rng, 0, HALF), _rand_frac(rng), rng.randint(1, 3)
        f = hy.figure2_factory(a2, y2)
        if psd_exact(moment_matrix(f, (0, 0), k)).is_psd:
            for u in iter_box(6):
                rows, _ = dedupe_symmetric(moment_matrix(f, u, k).entries)
                if not psd_exact(rows).is_psd:
                    return f"M_u(k) fails at u={u} though M_(0,0)(k) holds ({a2}, {y2}, k={k})"
    return None


def check_berger(rng) -> str | None:
    for y2 in (Fraction(1), HALF, Fraction(1, 3)):
        if not berger.verify_berger(x_sequence_sq(y2), berger.builtin_measure("mu_x", y2=y2), 100):
            return f"mu_x moments differ at y2={y2}"
    xi = berger.builtin_measure("mu_x", y2=Fraction(2, 3))
    for h in (1, 2, 5):
        r = berger.restrict_measure(xi, h)
        gh = xi.moment(h)
        if any(r.moment(k) != xi.moment(h + k) / gh for k in range(15)) or r.total_mass() != 1:
            return f"restriction inconsistent at h={h}"
    return None


def check_backward_extension(rng) -> str | None:
    for i in range(1, 11):
        for j in range(1, 11):
            a2, y2 = Fraction(i, 20), Fraction(j, 10)
            res = berger.figure2_extension(a2, y2)
            if res.subnormal != (y2 <= hy.closed_form("subnormal", a2)):
                return f"backward extension verdict wrong at a2={a2}, y2={y2}"
            if res.subnormal:
                f = hy.figure2_factory(a2, y2)
                if any(res.constructed_mu.moment(k) != gamma_2d(f, k) for k in iter_box(6)):
                    return f"constructed measure misses a moment at a2={a2}, y2={y2}"
    return None


SUITES: dict[str, Callable[[random.Random], str | None]] = {
    "poly_nonneg_vs_sampling": check_poly_sampling,
    "commutativity_and_path_independence": check_commuting_and_paths,
    "hypo_form_vs_moment_matrix": check_d_equiv_e,
    "psd_exact_vs_float": check_exact_vs_float,
    "verdict_nesting": check_nesting,
    "threshold_monotone_and_limit": check_thresholds,
    "determinant_identities": check_det_identities,
    "moment_matrix_vs_Hk": check_hk_equivalence,
    "u_dominance": check_u_dominance,
    "berger_and_restriction": check_berger,
    "backward_extension": check_backward_extension,
}


def run_all(seed: int = 20240601, only: list[str] | None = None) -> list[CheckResult]:
    out = []
    for name, fn in SUITES.items():
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        try:
            problem = fn(random.Random(seed))
        except Exception as err:  # noqa: BLE001 - a crash is a failed check
            problem = f"raised {type(err).__name__}: {err}"
        out.append(CheckResult(name, problem is None, problem or "", time.perf_counter() - t0))
    return out
