"""Exact linear algebra over Q for overdetermined consistent systems.

Solutions are found modulo word-sized primes, lifted by CRT and rational
reconstruction, and then certified by exact substitution into every
equation; nothing is returned that has not been checked over Q."""

from __future__ import annotations

from math import isqrt

from .exact import Q

try:
    from gmpy2 import next_prime as _next_prime
except ImportError:  # pragma: no cover
    def _next_prime(p):
        p = int(p) + 1
        while not _is_prime(p):
            p += 1
        return p

    def _is_prime(p):
        if p < 2:
            return False
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            if p % a == 0:
                return p == a
        d, s = p - 1, 0
        while d % 2 == 0:
            d //= 2
            s += 1
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            x = pow(a, d, p)
            if x in (1, p - 1):
                continue
            for _ in range(s - 1):
                x = x * x % p
                if x == p - 1:
                    break
            else:
                return False
        return True

__all__ = ["solve_exact", "rank_exact", "nullspace_exact", "in_span"]

_START = (1 << 61) - 1


def _primes():
    p = _START
    while True:
        yield p
        p = int(_next_prime(p))


def _to_int_rows(rows, rhs):
    """Scale each equation to integer coefficients."""
    out = []
    for r, b in zip(rows, rhs):
        den = 1
        for v in list(r) + [b]:
            v = Q(v)
            d = int(v.denominator)
            den = den * d // _gcd(den, d)
        out.append([int(Q(v) * den) for v in list(r) + [b]])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _rref_mod(A, m, p):
    """Row reduce an integer augmented matrix modulo p; returns pivot columns
    among the first m and the reduced rows."""
    A = [[v % p for v in row] for row in A]
    piv = []
    r = 0
    for c in range(m):
        k = next((i for i in range(r, len(A)) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [v * inv % p for v in A[r]]
        Ar = A[r]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(vi - f * vr) % p for vi, vr in zip(A[i], Ar)]
        piv.append(c)
        r += 1
        if r == len(A):
            break
    return piv, A


def _ratrec(u, mod):
    """a/b = u (mod mod) with |a|, |b| <= sqrt(mod / 2)."""
    bound = isqrt(mod // 2)
    r0, r1 = mod, u % mod
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Q(r1, s1) if s1 > 0 else Q(-r1, -s1)


def _check(rows, rhs, sol):
    for r, b in zip(rows, rhs):
        acc = Q(0)
        for v, s in zip(r, sol):
            if v and s:
                acc += v * s
        if acc != b:
            return False
    return True


def solve_exact(rows, rhs, max_primes=40):
    """Solve rows . x = rhs exactly.  Returns (solution, rank, consistent).

    When the system has full column rank the unique solution is certified
    over Q; for rank-deficient systems ``solution`` is one particular
    solution with free variables set to zero (certified as well)."""
    rows = [list(r) for r in rows]
    rhs = list(rhs)
    m = len(rows[0]) if rows else 0
    if not rows:
        return [], 0, True
    A = _to_int_rows(rows, rhs)
    residues = None
    mod = 1
    piv_ref = None
    for k, p in enumerate(_primes()):
        if k >= max_primes:
            break
        piv, R = _rref_mod(A, m + 1, p)
        if m in piv:
            # inconsistent modulo p; confirm with a second prime before deciding
            piv2, _ = _rref_mod(A, m + 1, int(_next_prime(p)))
            if m in piv2:
                return [Q(0)] * m, len(piv2) - 1, False
            continue
        if piv_ref is None or len(piv) > len(piv_ref):
            piv_ref, residues, mod = piv, None, 1
        elif piv != piv_ref:
            continue
        vals = [0] * m
        for i, c in enumerate(piv):
            vals[c] = R[i][m]
        if residues is None:
            residues = vals
            mod = p
        else:
            inv = pow(mod % p, p - 2, p)
            residues = [r + mod * (((v - r) * inv) % p) for r, v in zip(residues, vals)]
            mod *= p
        sol = []
        for v in residues:
            x = _ratrec(v, mod)
            if x is None:
                break
            sol.append(x)
        else:
            if _check(rows, rhs, sol):
                return sol, len(piv_ref), True
    raise ArithmeticError("modular solver did not converge")


def rank_exact(rows):
    """Rank over Q (computed modulo two large primes, maximum taken)."""
    if not rows:
        return 0
    A = _to_int_rows(rows, [0] * len(rows))
    m = len(rows[0])
    best = 0
    gen = _primes()
    for _ in range(2):
        piv, _ = _rref_mod(A, m, next(gen))
        best = max(best, len(piv))
    return best


def nullspace_exact(rows, ncols=None):
    """Basis of {x : rows . x = 0} over Q, certified exactly."""
    m = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    if not rows:
        return [[Q(1) if i == j else Q(0) for i in range(m)] for j in range(m)]
    # exact fraction-free elimination is fine at the sizes used here
    A = [[Q(v) for v in r] for r in rows]
    piv = []
    r = 0
    for c in range(m):
        k = next((i for i in range(r, len(A)) if A[i][c]), None)
        if k is None:
            continue
        A[r], A[k] = A[k], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [vi - f * vr for vi, vr in zip(A[i], A[r])]
        piv.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(m) if c not in piv]
    basis = []
    for fcol in free:
        v = [Q(0)] * m
        v[fcol] = Q(1)
        for i, c in enumerate(piv):
            v[c] = -A[i][fcol]
        basis.append(v)
    return basis


def in_span(vectors, target):
    """Whether ``target`` is a Q-linear combination of ``vectors``."""
    if not any(target):
        return True
    if not vectors:
        return False
    cols = list(zip(*vectors))  # rows of the transposed system
    rows = [list(c) for c in cols]
    _, _, ok = solve_exact(rows, list(target))
    return ok
