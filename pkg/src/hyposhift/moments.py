"""Moments of weighted shifts and the lexicographic moment matrices built from them."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .scalar import Scalar, format_scalar, parse_scalar
from .shifts import Key, WeightField2D, WeightSeq1D


def gamma_1d(w: WeightSeq1D, k: int) -> Scalar:
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    g: Scalar = Fraction(1)
    for n in range(k):
        g = g * w.sq(n)
    return g


def gamma_2d(f: WeightField2D, k: Key) -> Scalar:
    """Moment of order ``k``: east along row 0, then north along column k1."""
    k1, k2 = k
    if k1 < 0 or k2 < 0:
        raise ValueError(f"moment order {k} outside Z+^2")
    cache = f._gamma
    hit = cache.get((k1, k2))
    if hit is not None:
        return hit
    # walk back to the nearest cached point on the canonical path
    j = k2
    while j > 0 and (k1, j) not in cache:
        j -= 1
    if j == 0 and (k1, 0) not in cache:
        i = k1
        while i > 0 and (i, 0) not in cache:
            i -= 1
        g = cache.get((i, 0), Fraction(1))
        for n in range(i, k1):
            g = g * f.alpha_sq(n, 0)
            cache.setdefault((n + 1, 0), g)
        cache.setdefault((0, 0), Fraction(1))
    g = cache[(k1, j)]
    for n in range(j, k2):
        g = g * f.beta_sq(k1, n)
        # idempotent insert; concurrent writers store the same value
        cache.setdefault((k1, n + 1), g)
    return g


def gamma_via_path(f: WeightField2D, path: Sequence[Key]) -> Scalar:
    """Product of squared weights along a monotone lattice path from the origin."""
    g: Scalar = Fraction(1)
    if not path:
        return g
    if tuple(path[0]) != (0, 0):
        raise ValueError("path must start at (0, 0)")
    for (a1, a2), (b1, b2) in zip(path, path[1:]):
        step = (b1 - a1, b2 - a2)
        if step == (1, 0):
            g = g * f.alpha_sq(a1, a2)
        elif step == (0, 1):
            g = g * f.beta_sq(a1, a2)
        else:
            raise ValueError(f"illegal step {(a1, a2)} -> {(b1, b2)}; only +e1 or +e2 allowed")
    return g


def lex_index(i: int, j: int, n: int) -> int:
    """Position of the monomial ``y^j x^i`` in the order 1, x, y, x², yx, y², ..."""
    if i < 0 or j < 0 or i + j > n:
        raise ValueError(f"({i}, {j}) is not a monomial of degree <= {n}")
    d = i + j
    return d * (d + 1) // 2 + j


def lex_monomials(n: int) -> list[Key]:
    return [(d - j, j) for d in range(n + 1) for j in range(d + 1)]


@dataclass
class MomentMatrix:
    """Symmetric matrix indexed by the monomials ``labels`` (exponent pairs)."""

    entries: list[list[Scalar]]
    labels: list[Key]
    u: Key = (0, 0)
    degree: int = 0
    index_map: dict[Key, int] = field(init=False)

    def __post_init__(self):
        self.index_map = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r][c]

    def entry(self, row: Key, col: Key) -> Scalar:
        return self.entries[self.index_map[row]][self.index_map[col]]

    def is_symmetric(self) -> bool:
        n = self.dim
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))


def moment_matrix(f: WeightField2D, u: Key, k: int) -> MomentMatrix:
    """``M_u(k)``: entry at row (m, n), column (p, q) is ``gamma(u + (m, n) + (p, q))``."""
    if k < 0:
        raise ValueError("degree must be nonnegative")
    labels = lex_monomials(k)
    u1, u2 = u
    row_cache: dict[Key, Scalar] = {}

    def g(a: int, b: int) -> Scalar:
        v = row_cache.get((a, b))
        if v is None:
            v = row_cache[(a, b)] = gamma_2d(f, (u1 + a, u2 + b))
        return v

    entries = [[g(m + p, n + q) for (p, q) in labels] for (m, n) in labels]
    return MomentMatrix(entries, labels, tuple(u), k)


def hypo_form_matrix(f: WeightField2D, u: Key, k: int) -> MomentMatrix:
    """Entries ``γ_u γ_{u+(m,n)+(p,q)} − γ_{u+(m,n)} γ_{u+(p,q)}`` over monomials of degree 1..k."""
    if k < 1:
        raise ValueError("degree must be >= 1")
    labels = lex_monomials(k)[1:]
    u1, u2 = u
    gu = gamma_2d(f, (u1, u2))

    def g(a, b):
        return gamma_2d(f, (u1 + a, u2 + b))

    entries = [[gu * g(m + p, n + q) - g(m, n) * g(p, q) for (p, q) in labels]
               for (m, n) in labels]
    return MomentMatrix(entries, labels, tuple(u), k)


# -- text format -------------------------------------------------------------

def matrix_to_text(M, comment: str | None = None) -> str:
    """``dim N`` header, then N rows of space-separated entries, row-major."""
    rows = M.entries if isinstance(M, MomentMatrix) else M
    out = []
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    if isinstance(M, MomentMatrix):
        out.append(f"# u={M.u[0]},{M.u[1]} degree={M.degree}")
        out.append("# labels " + " ".join(f"{i},{j}" for i, j in M.labels))
    out.append(f"dim {len(rows)}")
    out += [" ".join(format_scalar(x) for x in row) for row in rows]
    return "\n".join(out) + "\n"


def matrix_from_text(text: str, mode: str = "exact") -> list[list[Scalar]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("dim"):
        raise ValueError("missing 'dim N' header")
    n = int(lines[0].split()[1])
    rows = [[parse_scalar(tok, mode) for tok in ln.split()] for ln in lines[1:]]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected a {n}x{n} matrix")
    return rows


def random_monotone_path(target: Key, rng) -> list[Key]:
    k1, k2 = target
    steps = [(1, 0)] * k1 + [(0, 1)] * k2
    rng.shuffle(steps)
    path = [(0, 0)]
    for s1, s2 in steps:
        a, b = path[-1]
        path.append((a + s1, b + s2))
    return path


def iter_box(bound: int) -> Iterable[Key]:
    return ((i, j) for i in range(bound + 1) for j in range(bound + 1))
