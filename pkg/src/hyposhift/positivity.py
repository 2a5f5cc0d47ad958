"""Positive-semidefiniteness tests (exact and float) and exact determinants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Sequence

import numpy as np

from . import kernels
from .scalar import FLOAT_TOL, ExactnessError, Scalar, exact, is_exact

PSD = "PSD"
NOT_PSD = "NotPSD"
BORDERLINE = "Borderline"


@dataclass(frozen=True)
class PsdVerdict:
    status: str
    pivot_index: int | None = None
    pivot_value: Scalar | None = None
    partner: int | None = None
    min_eigenvalue: float | None = None
    mode: str = "exact"

    @property
    def is_psd(self) -> bool:
        return self.status == PSD

    def __bool__(self) -> bool:
        return self.is_psd


def _rows(M) -> list[list]:
    return [list(r) for r in getattr(M, "entries", M)]


def _check_square(rows) -> int:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    return n


def _check_symmetric(rows) -> None:
    n = _check_square(rows)
    for i in range(n):
        for j in range(i):
            if rows[i][j] != rows[j][i]:
                raise ValueError(f"matrix is not symmetric at ({i}, {j})")


def integer_scaled(rows) -> tuple[list[list[int]], int]:
    """``(D * rows, D)`` with D the least common denominator of all entries."""
    fr = [[exact(x) for x in r] for r in rows]
    d = 1
    for r in fr:
        for x in r:
            d = lcm(d, x.denominator)
    return [[x.numerator * (d // x.denominator) for x in r] for r in fr], d


def psd_exact(M) -> PsdVerdict:
    """Exact PSD decision by fraction-free LDLᵀ; no tolerance anywhere.

    On failure the verdict carries the offending pivot index and the exact
    pivot value of the ordinary (rational) LDLᵀ of ``M``.
    """
    rows = _rows(M)
    if any(not is_exact(x) for r in rows for x in r):
        raise ExactnessError("psd_exact needs exact (rational) entries")
    _check_symmetric(rows)
    ints, d = integer_scaled(rows)
    status, idx, num, den, partner = kernels.ldl_psd(ints)
    if status == 0:
        return PsdVerdict(PSD)
    return PsdVerdict(NOT_PSD, idx, Fraction(num, den * d), None if partner < 0 else partner)


@lru_cache(maxsize=65536)
def _psd_exact_cached(key: tuple) -> PsdVerdict:
    n = math.isqrt(len(key))
    return psd_exact([list(key[i * n:(i + 1) * n]) for i in range(n)])


def psd_exact_cached(rows) -> PsdVerdict:
    """``psd_exact`` memoized on the matrix content."""
    return _psd_exact_cached(tuple(x for r in rows for x in r))


def psd_float(M, tol: float = FLOAT_TOL) -> PsdVerdict:
    """Classify by the smallest eigenvalue: PSD, NotPSD, or Borderline within ``tol``."""
    a = np.array(_rows(M), dtype=float)
    if a.size == 0:
        return PsdVerdict(PSD, mode="float")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix is not square")
    lam = float(np.linalg.eigvalsh(a)[0])
    if lam >= tol:
        status = PSD
    elif lam <= -tol:
        status = NOT_PSD
    else:
        status = BORDERLINE
    return PsdVerdict(status, min_eigenvalue=lam, mode="float")


def det_exact(M) -> Fraction:
    rows = _rows(M)
    if any(not is_exact(x) for r in rows for x in r):
        raise ExactnessError("det_exact needs exact (rational) entries")
    n = _check_square(rows)
    ints, d = integer_scaled(rows)
    return Fraction(kernels.bareiss_det(ints), d**n)


def dedupe_symmetric(rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Drop repeated and all-zero rows (with their columns) of a symmetric matrix.

    If rows i and j coincide then ``M = Eᵀ R E`` for the reduced matrix R and a
    0/1 selection E, and R is a principal submatrix of M, so the two are PSD
    together. Zero rows and columns never affect PSD-ness. Returns the reduced
    matrix and the kept original indices.
    """
    seen: set = set()
    keep: list[int] = []
    for i, r in enumerate(rows):
        key = tuple(r)
        if key in seen or not any(r):
            continue
        seen.add(key)
        keep.append(i)
    return [[rows[i][j] for j in keep] for i in keep], keep


def jacobi_scaled(rows: Sequence[Sequence[float]]) -> list[list[float]] | None:
    """``D^{-1/2} M D^{-1/2}`` with D the diagonal, or None if a diagonal is not positive.

    A congruence, so PSD-ness is unchanged while the float conditioning improves.
    """
    diag = [float(rows[i][i]) for i in range(len(rows))]
    if any(d <= 0 for d in diag):
        return None
    s = [1 / math.sqrt(d) for d in diag]
    return [[float(x) * s[i] * s[j] for j, x in enumerate(r)] for i, r in enumerate(rows)]
