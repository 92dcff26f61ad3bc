"""Exact linear algebra over GF(p) and over the rationals.

GF(p) matrices are numpy int64 arrays reduced mod p (p < 2**31, so products
fit in int64).  Rational results are certified exactly: ranks over QQ come
with a nonzero-minor witness mod p (lower bound) plus an exactly verified
kernel basis (upper bound), with rational reconstruction from a single
large prime and CRT escalation if needed.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .fields import GF, is_prime

# primes just below 2**30, used for rank certificates and rational lifting
_CERT_PRIMES = (1073741789, 1073741783, 1073741741, 1073741723, 1073741719)


def rref_mod(a: np.ndarray, p: int):
    """Row echelon form mod p (in place on a copy).  Returns (rref, pivots)."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = a[r] * inv % p
        col = a[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            a[mask] = (a[mask] - np.outer(col[mask], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank_mod(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    _, piv = rref_mod(a, p)
    return len(piv)


def kernel_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of the right kernel of a mod p."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    r, piv = rref_mod(a, p)
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-int(r[i, fc])) % p
    return basis


def solve_mod(a: np.ndarray, b: np.ndarray, p: int):
    """One solution x of a @ x = b mod p, or None."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    r, piv = rref_mod(aug, p)
    n = a.shape[1]
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = r[i, n]
    return x


def _rat_reconstruct(u: int, p: int):
    """Rational number n/d with |n|, d <= sqrt(p/2) congruent to u mod p."""
    u %= p
    bound = int((p / 2) ** 0.5)
    r0, r1 = p, u
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if abs(s1) > bound or s1 == 0:
        return None
    if r1 * s1 < 0:
        return Fraction(-r1, -s1)
    return Fraction(r1, s1)


def _crt(vals, mods):
    x, m = 0, 1
    for v, p in zip(vals, mods):
        t = (v - x) * pow(m, -1, p) % p
        x += m * t
        m *= p
    return x % m, m


def _rat_reconstruct_general(u: int, m: int):
    bound = int((m / 2) ** 0.5)
    r0, r1 = m, u % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if r1 * s1 < 0:
        return Fraction(-r1, -s1)
    return Fraction(r1, s1)


def fraction_matrix_to_int(a) -> tuple[np.ndarray, list]:
    """Clear denominators row-wise; returns int rows as a Python list matrix."""
    out = []
    for row in a:
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def rank_qq(rows) -> int:
    """Exact rank over QQ of a matrix given as list of lists of int/Fraction.

    Strategy: rank mod a large prime is a certified lower bound; the upper
    bound is certified by an exactly verified kernel basis (lifted by
    rational reconstruction, checked by exact matrix multiplication).  CRT
    over more primes only when the first lift fails.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    if not m or not m[0]:
        return 0
    int_rows = fraction_matrix_to_int(m)
    a = np.array(int_rows, dtype=object)
    n_cols = len(int_rows[0])
    residues = []
    used = []
    for p in _CERT_PRIMES:
        ap = np.array([[x % p for x in row] for row in int_rows], dtype=np.int64)
        r = rank_mod(ap, p)
        ker = kernel_mod(ap, p)
        residues.append(ker)
        used.append(p)
        # lift kernel via CRT over the primes used so far
        if len(used) > 1 and any(k.shape != residues[0].shape for k in residues):
            continue  # unstable rank between primes; try more
        mod = 1
        lifted = None
        if len(used) == 1:
            mod = p
            lifted = _lift_kernel(ker, p)
        else:
            crt_ker, mod = _crt_kernels(residues, used)
            if crt_ker is not None:
                lifted = _lift_kernel(crt_ker, mod)
        if lifted is None:
            continue
        if _verify_kernel(int_rows, lifted):
            return n_cols - len(lifted)
    raise ArithmeticError("rational rank certification failed (escalate primes)")


def _crt_kernels(kernels, primes):
    shape = kernels[0].shape
    out = np.zeros(shape, dtype=object)
    for i in range(shape[0]):
        for j in range(shape[1]):
            v, m = _crt([int(k[i, j]) for k in kernels], primes)
            out[i, j] = v
    _, m = _crt([0] * len(primes), primes)
    return out, m


def _lift_kernel(ker, mod):
    lifted = []
    for row in np.asarray(ker):
        lrow = []
        for u in row:
            f = _rat_reconstruct_general(int(u), mod)
            if f is None:
                return None
            lrow.append(f)
        lifted.append(lrow)
    return lifted


def _verify_kernel(int_rows, lifted) -> bool:
    for v in lifted:
        for row in int_rows:
            s = sum(Fraction(a) * b for a, b in zip(row, v))
            if s != 0:
                return False
    # verified: each lifted vector is in the kernel, and they are independent
    # iff their reduction mod a cert prime has full rank
    p = _CERT_PRIMES[0]
    den = np.array(
        [[int(x.numerator * pow(x.denominator, -1, p)) % p for x in v] for v in lifted],
        dtype=np.int64,
    )
    return rank_mod(den, p) == len(lifted)


def kernel_qq(rows):
    """Exact kernel basis over QQ (list of Fraction vectors), via rref over
    Fraction.  Fine at corpus sizes where exactness over QQ is demanded."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return []
    cols = len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def batch_nonsingular_mod(stack: np.ndarray, p: int) -> np.ndarray:
    """Boolean array: which of the stacked square matrices are invertible
    mod p.  Cross-multiplication elimination (no inverses), vectorized."""
    a = np.array(stack, dtype=np.int64) % p
    K, n, _ = a.shape
    ok = np.ones(K, dtype=bool)
    idx = np.arange(K)
    for k in range(n):
        sub = a[:, k:, k] != 0
        has = sub.any(axis=1)
        ok &= has
        piv = np.where(has, np.argmax(sub, axis=1), 0) + k
        rowk = a[idx, k, :].copy()
        rowp = a[idx, piv, :].copy()
        swap = (piv != k) & has
        a[idx[swap], k, :] = rowp[swap]
        a[idx[swap], piv[swap], :] = rowk[swap]
        if k + 1 < n:
            pivval = a[:, k, k][:, None, None]
            below = a[:, k + 1 :, k][:, :, None]
            a[:, k + 1 :, :] = (a[:, k + 1 :, :] * pivval - below * a[:, k, :][:, None, :]) % p
    return ok


def gf_matrix_rank(rows, field: GF) -> int:
    a = np.array(rows, dtype=np.int64)
    if a.size == 0:
        return 0
    return rank_mod(a, field.p)


def gf_matrix_kernel(rows, field: GF):
    a = np.array(rows, dtype=np.int64)
    return [list(map(int, v)) for v in kernel_mod(a, field.p)]
