"""Pure-Python fraction-free elimination kernels (fallback for ``_kernels``).

Both kernels take a square matrix of Python ints as a list of lists and never
mutate it. They use Bareiss' exact-division update, so every intermediate
value is a minor of the input and stays an integer.
"""


def ldl_psd(rows):
    """Symmetric fraction-free LDLᵀ positivity test.

    Returns ``(status, index, num, den, partner)``. ``status`` is 0 for PSD and
    1 for not PSD; for a failure ``num/den`` is the offending pivot of the
    unscaled elimination at ``index`` (``den > 0``) and ``partner`` is the
    column with a nonzero entry when the pivot is zero (else -1).

    A zero pivot is accepted only if its whole residual row vanishes; the
    index is then dropped, which is a symmetric permutation to the end.
    """
    n = len(rows)
    a = [list(r) for r in rows]
    alive = list(range(n))
    prev = 1
    while alive:
        i = alive.pop(0)
        ai = a[i]
        p = ai[i]
        if p < 0:
            return 1, i, p, prev, -1
        if p == 0:
            for j in alive:
                if ai[j] != 0:
                    return 1, i, 0, 1, j
            continue
        for jj, j in enumerate(alive):
            aj = a[j]
            aij = ai[j]
            for l in alive[jj:]:
                v = (p * aj[l] - aij * ai[l]) // prev
                aj[l] = v
                a[l][j] = v
        prev = p
    return 0, -1, 0, 1, -1


def bareiss_det(rows):
    """Determinant of an integer matrix with row pivoting on zero pivots."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        ak = a[k]
        p = ak[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (p * ai[j] - aik * ak[j]) // prev
        prev = p
    return sign * a[n - 1][n - 1]
