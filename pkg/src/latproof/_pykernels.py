"""Pure-Python implementations of the finite-lattice kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Inputs are numpy arrays: ``leq`` is an ``n x n`` uint8 order matrix, ``meet``
and ``join`` are ``n x n`` int32 tables.
"""

import numpy as np

BACKEND = "python"


def tables_from_leq(leq):
    """Compute meet/join tables.

    Returns ``(meet, join, status, i, j)`` where ``status`` is 0 on success,
    1 if ``(i, j)`` has no greatest lower bound and 2 if it has no least upper
    bound.
    """
    L = leq.tolist()
    n = len(L)
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            lower = [k for k in range(n) if L[k][i] and L[k][j]]
            best = -1
            for k in lower:
                if all(L[m][k] for m in lower):
                    best = k
                    break
            if best < 0:
                return _empty(n) + (1, i, j)
            upper = [k for k in range(n) if L[i][k] and L[j][k]]
            least = -1
            for k in upper:
                if all(L[k][m] for m in upper):
                    least = k
                    break
            if least < 0:
                return _empty(n) + (2, i, j)
            meet[i][j] = meet[j][i] = best
            join[i][j] = join[j][i] = least
    return (np.array(meet, dtype=np.int32), np.array(join, dtype=np.int32), 0, -1, -1)


def _empty(n):
    z = np.zeros((n, n), dtype=np.int32)
    return (z, z.copy())


def modular_failure(leq, meet, join):
    """First ``(a, b, c)`` with ``c <= a`` and ``a/\\(b\\/c) != (a/\\b)\\/c``."""
    L, M, J = leq.tolist(), meet.tolist(), join.tolist()
    n = len(L)
    for a in range(n):
        for c in range(n):
            if not L[c][a]:
                continue
            for b in range(n):
                if M[a][J[b][c]] != J[M[a][b]][c]:
                    return (a, b, c)
    return None


def distributive_failure(meet, join):
    M, J = meet.tolist(), join.tolist()
    n = len(M)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if M[a][J[b][c]] != J[M[a][b]][M[a][c]]:
                    return (a, b, c)
    return None


def uvp_failure(meet, join):
    """First triple ``(d, e, f)`` for which ``u /\\ v != p``."""
    M, J = meet.tolist(), join.tolist()
    n = len(M)
    for d in range(n):
        for e in range(n):
            for f in range(n):
                p = J[J[M[d][e]][M[e][f]]][M[f][d]]
                q = M[M[J[d][e]][J[e][f]]][J[f][d]]
                u = J[M[d][q]][p]
                v = J[M[e][q]][p]
                if M[u][v] != p:
                    return (d, e, f)
    return None


def sublattice_closed(meet, join, idx):
    M, J = meet.tolist(), join.tolist()
    members = set(int(i) for i in idx)
    for i in members:
        for j in members:
            if M[i][j] not in members or J[i][j] not in members:
                return False
    return True


def lemma_failures(leq, meet, join):
    """Failure counts for the basic lattice lemmas, over all tuples.

    Index 0: the three Connecting Lemma conditions disagree for a pair.
    1: ``a/\\(b\\/c) >= (a/\\b)\\/(a/\\c)`` fails.
    2: ``c <= a`` but ``a/\\(b\\/c) >= (a/\\b)\\/c`` fails.
    3: ``c <= a``, the modular sides differ, yet are not strictly ordered.
    4: the distributive sides differ, yet are not strictly ordered.
    """
    L, M, J = leq.tolist(), meet.tolist(), join.tolist()
    n = len(L)
    out = [0, 0, 0, 0, 0]
    for a in range(n):
        for b in range(n):
            le = bool(L[a][b])
            if le != (J[a][b] == b) or le != (M[a][b] == a):
                out[0] += 1
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = M[a][J[b][c]]
                dist = J[M[a][b]][M[a][c]]
                if not L[dist][lhs]:
                    out[1] += 1
                if lhs != dist and not L[dist][lhs]:
                    out[4] += 1
                if L[c][a]:
                    mod = J[M[a][b]][c]
                    if not L[mod][lhs]:
                        out[2] += 1
                    if lhs != mod and not L[mod][lhs]:
                        out[3] += 1
    return out
