"""Pure-Python elimination kernels.

Same signatures as the compiled ``_kernels`` module; selected by
:mod:`quadnil.kernels` when the extension is unavailable.
"""


def _pivot(M, k, n, m):
    for i in range(k, n):
        row = M[i]
        for j in range(k, m):
            if row[j]:
                return i, j
    return None


def bareiss_rank(rows):
    """Exact rank of an integer matrix by fraction-free elimination with full pivoting."""
    M = [list(r) for r in rows]
    n = len(M)
    m = len(M[0]) if n else 0
    prev = 1
    rank = 0
    for k in range(min(n, m)):
        piv = _pivot(M, k, n, m)
        if piv is None:
            break
        i, j = piv
        if i != k:
            M[i], M[k] = M[k], M[i]
        if j != k:
            for row in M:
                row[j], row[k] = row[k], row[j]
        pk = M[k][k]
        rk = M[k]
        for i in range(k + 1, n):
            Mi = M[i]
            a = Mi[k]
            if a:
                for j in range(k + 1, m):
                    Mi[j] = (pk * Mi[j] - a * rk[j]) // prev
            else:
                for j in range(k + 1, m):
                    Mi[j] = (pk * Mi[j]) // prev
            Mi[k] = 0
        prev = pk
        rank += 1
    return rank


def bareiss_det(rows):
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    M = [list(r) for r in rows]
    n = len(M)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n):
        piv = _pivot(M, k, n, n)
        if piv is None:
            return 0
        i, j = piv
        if i != k:
            M[i], M[k] = M[k], M[i]
            sign = -sign
        if j != k:
            for row in M:
                row[j], row[k] = row[k], row[j]
            sign = -sign
        pk = M[k][k]
        rk = M[k]
        for i in range(k + 1, n):
            Mi = M[i]
            a = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (pk * Mi[j] - a * rk[j]) // prev
            Mi[k] = 0
        prev = pk
    return sign * M[n - 1][n - 1]


def rank_mod_p(rows, p):
    """Rank over GF(p) of an integer matrix; ``p`` prime below 2**31."""
    M = [[x % p for x in r] for r in rows]
    n = len(M)
    m = len(M[0]) if n else 0
    rank = 0
    for c in range(m):
        piv = -1
        for i in range(rank, n):
            if M[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        rr = M[rank]
        inv = pow(rr[c], p - 2, p)
        for j in range(c, m):
            rr[j] = rr[j] * inv % p
        for i in range(rank + 1, n):
            Mi = M[i]
            f = Mi[c]
            if f:
                for j in range(c, m):
                    Mi[j] = (Mi[j] - f * rr[j]) % p
        rank += 1
        if rank == n:
            break
    return rank
