"""Dense exact linear algebra over F_p (numpy-backed).

Matrices are int64/float64 arrays with entries in [0, p).  The blocked
row-echelon pass uses float64 BLAS matmuls; with p < 2^15 and panel width
128 every intermediate stays below 2^53, so the arithmetic is exact.
"""

from __future__ import annotations

import numpy as np

PANEL = 128


def _as_float(A) -> np.ndarray:
    M = np.asarray(A, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    return M


def rank_modp(A, p: int) -> int:
    """Rank over F_p via blocked panel LU; trailing updates are matmuls."""
    M = np.mod(_as_float(A), p)
    m, n = M.shape
    if m == 0 or n == 0:
        return 0
    r = 0
    c = 0
    while r < m and c < n:
        width = min(PANEL, n - c)
        panel = M[r:, c : c + width]
        nb = panel.shape[0]
        L = np.zeros((nb, min(width, nb)), dtype=np.float64)
        k = 0
        for j in range(width):
            col = panel[k:, j]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            t = nz[0] + k
            if t != k:
                M[[r + k, r + t], :] = M[[r + t, r + k], :]
                L[[k, t], :] = L[[t, k], :]
            inv = pow(int(panel[k, j]), -1, p)
            mult = np.mod(panel[k + 1 :, j] * inv, p)
            L[k + 1 :, k] = mult
            nzb = np.nonzero(mult)[0]
            if nzb.size:
                panel[k + 1 :, :][nzb] = np.mod(
                    panel[k + 1 :, :][nzb] - np.outer(mult[nzb], panel[k, :]), p
                )
            k += 1
            if k == nb or k == L.shape[1]:
                break
        if k and c + width < n:
            rest = M[r : r + nb, c + width :]
            for i in range(1, k):  # replay panel ops on pivot-row tails, in order
                if np.any(L[i, :i]):
                    rest[i] = np.mod(rest[i] - L[i : i + 1, :i] @ rest[:i], p)
            if k < nb:
                rest[k:] = np.mod(rest[k:] - L[k:, :k] @ rest[:k], p)
        r += k
        c += width
    return r


def rref_modp(A, p: int):
    """Reduced row-echelon form; returns (R, pivot column list)."""
    M = np.mod(np.asarray(A, dtype=np.int64), p)
    m, n = M.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        col = M[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        k = nz[0] + r
        if k != r:
            M[[r, k], :] = M[[k, r], :]
        inv = pow(int(M[r, c]), -1, p)
        M[r, :] = M[r, :] * inv % p
        other = np.nonzero(M[:, c])[0]
        other = other[other != r]
        if other.size:
            M[other, :] = (M[other, :] - np.outer(M[other, c], M[r, :])) % p
        pivots.append(c)
        r += 1
    return M, pivots


def nullspace_modp(A, p: int) -> np.ndarray:
    """Rows span {v : A v = 0}; reduced echelon basis, deterministic."""
    M = np.asarray(A, dtype=np.int64)
    m, n = M.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_modp(M, p)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for idx, j in enumerate(free):
        basis[idx, j] = 1
        for i, c in enumerate(pivots):
            basis[idx, c] = (-R[i, j]) % p
    return basis


def solve_modp(A, b, p: int):
    """One solution of A x = b over F_p, or None."""
    M = np.asarray(A, dtype=np.int64)
    m, n = M.shape
    rhs = np.asarray(b, dtype=np.int64).reshape(m, 1)
    R, pivots = rref_modp(np.hstack([M, rhs]), p)
    for i in range(len(pivots)):
        if pivots[i] == n:
            return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(pivots):
        if c < n:
            x[c] = R[i, n]
    return x


def matmul_modp(A, B, p: int) -> np.ndarray:
    """Exact product mod p; splits the inner dimension to stay below 2^53."""
    A = np.mod(_as_float(A), p)
    B = np.mod(_as_float(B), p)
    inner = A.shape[1]
    step = max(1, (1 << 52) // (p * p))
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.float64)
    for s in range(0, inner, step):
        out = np.mod(out + A[:, s : s + step] @ B[s : s + step, :], p)
    return out.astype(np.int64)
