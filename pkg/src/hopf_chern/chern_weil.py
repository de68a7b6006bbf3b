"""Simplicial connection and curvature for tuples of diffeomorphisms, Chern
polynomials, and the fiber-integrated cocycle components C_J^{(p)}."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .exact import LocalizedPoly
from .forms import BiForm, d, fiber_integrate, t0, wedge
from .jets import frame_matrix, gamma_form, inverse_matrix, _frame_inverse

__all__ = ["SimplicialConnection", "SimplicialCurvature", "simplicial_connection",
           "simplicial_curvature", "chern_polynomial", "chern_form", "chern_cocycle",
           "antisym_trace", "matwedge", "InconsistentCurvature", "TruncationError",
           "perm_sign", "pulled_connection"]


class InconsistentCurvature(AssertionError):
    pass


class TruncationError(ValueError):
    pass


def perm_sign(perm):
    perm = list(perm)
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _zero_matrix(n):
    return [[BiForm.zero() for _ in range(n)] for _ in range(n)]


def matwedge(A, B):
    n = len(A)
    out = _zero_matrix(n)
    for i in range(n):
        for j in range(n):
            s = BiForm.zero()
            for k in range(n):
                if A[i][k].terms and B[k][j].terms:
                    s = s + wedge(A[i][k], B[k][j])
            out[i][j] = s
    return out


def matadd(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matsub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def matscale(A, f):
    return [[a * f for a in row] for row in A]


def matd(A):
    return [[d(a) for a in row] for row in A]


def _scalar_matrix(M):
    return [[BiForm.scalar(e) for e in row] for row in M]


def pulled_connection(phi, mode="base"):
    """phi^*(omega_flat): Gamma(phi) in base mode, y^{-1} dy + y^{-1} Gamma y
    in frame mode."""
    G = gamma_form(phi)
    if mode == "base":
        return G
    n = phi.n
    Y = _scalar_matrix(frame_matrix(n))
    Yi = _scalar_matrix(_frame_inverse(n))
    dY = [[BiForm.dy(i + 1, j + 1) for j in range(n)] for i in range(n)]
    return matadd(matwedge(Yi, dY), matwedge(matwedge(Yi, G), Y))


@dataclass(frozen=True)
class SimplicialConnection:
    p: int
    tuple: tuple
    mode: str
    omega: list
    pulled: list  # phi_r^*(omega_flat), r = 0..p


@dataclass(frozen=True)
class SimplicialCurvature:
    p: int
    connection: SimplicialConnection
    R: list


def simplicial_connection(tup, mode="base") -> SimplicialConnection:
    """omega_hat = sum_r t_r phi_r^*(omega_flat), t_0 = 1 - sum_{r>=1} t_r."""
    tup = tuple(tup)
    p = len(tup) - 1
    n = tup[0].n
    if any(phi.n != n for phi in tup):
        raise ValueError("all diffeomorphisms must share the dimension n")
    pulled = [pulled_connection(phi, mode) for phi in tup]
    omega = matscale(pulled[0], t0(p))
    for r in range(1, p + 1):
        omega = matadd(omega, matscale(pulled[r], LocalizedPoly.var(f"t{r}")))
    return SimplicialConnection(p, tup, mode, omega, pulled)


def _tvar(r, p):
    return t0(p) if r == 0 else LocalizedPoly.var(f"t{r}")


def _dt(r, p):
    if r == 0:
        out = BiForm.zero()
        for s in range(1, p + 1):
            out = out - BiForm.dt(s)
        return out
    return BiForm.dt(r)


def closed_form_curvature(conn: SimplicialConnection):
    """sum dt_r ^ A_r - sum t_r A_r ^ A_r + sum t_r t_s A_r ^ A_s, A_r = phi_r^* omega."""
    p = conn.p
    A = conn.pulled
    n = len(A[0])
    R = _zero_matrix(n)
    for r in range(p + 1):
        dtr = _dt(r, p)
        R = matadd(R, [[wedge(dtr, a) for a in row] for row in A[r]])
        R = matsub(R, matscale(matwedge(A[r], A[r]), _tvar(r, p)))
    for r in range(p + 1):
        for s in range(p + 1):
            R = matadd(R, matscale(matwedge(A[r], A[s]), _tvar(r, p) * _tvar(s, p)))
    return R


def simplicial_curvature(conn: SimplicialConnection, check=True) -> SimplicialCurvature:
    R = closed_form_curvature(conn)
    if check:
        w = conn.omega
        ref = matadd(matd(w), matwedge(w, w))
        for i in range(len(R)):
            for j in range(len(R)):
                if not (R[i][j] - ref[i][j]).simplify().is_zero():
                    raise InconsistentCurvature(f"closed form differs from d w + w^w at ({i},{j})")
    return SimplicialCurvature(conn.p, conn, R)


def _is_even(form: BiForm):
    return all(len(g) % 2 == 0 for g in form.terms)


def chern_polynomial(q: int, A) -> BiForm:
    """c_q(A) = sum_{i1<..<iq} sum_{mu in S_q} sgn(mu) A^{i1}_{mu(i1)} ... A^{iq}_{mu(iq)}.

    Entries may be BiForms (must be of even degree, hence commuting) or
    scalars."""
    n = len(A)
    A = [[a if isinstance(a, BiForm) else BiForm.scalar(a) for a in row] for row in A]
    for row in A:
        for a in row:
            if not _is_even(a):
                raise ValueError("chern_polynomial needs even-degree (commuting) entries")
    total = BiForm.zero()
    for idx in itertools.combinations(range(n), q):
        for perm in itertools.permutations(range(q)):
            term = BiForm.scalar(perm_sign(perm))
            for a in range(q):
                e = A[idx[a]][idx[perm[a]]]
                if not e.terms:
                    term = BiForm.zero()
                    break
                term = wedge(term, e)
            if term.terms:
                total = total + term
    return total


def _check_J(J, n):
    J = tuple(J)
    if any(j < 1 for j in J) or list(J) != sorted(J):
        raise ValueError("J must be a nondecreasing tuple of positive integers")
    if sum(J) > n:
        raise TruncationError(f"|J| = {sum(J)} > n = {n}: killed by the truncation ideal")
    return J


def chern_form(J, curv: SimplicialCurvature) -> BiForm:
    """c_J(R) = c_{j1}(R) ^ ... ^ c_{jk}(R)."""
    out = BiForm.scalar(1)
    cache = {}
    for j in J:
        if j not in cache:
            cache[j] = chern_polynomial(j, curv.R)
        out = wedge(out, cache[j])
    return out


def chern_cocycle(J, p, tup, mode="base", check=True) -> BiForm:
    """C_J^{(p)}(phi_0..phi_p) = (-1)^p oint_{Delta^p} c_J(R_hat)."""
    tup = tuple(tup)
    if len(tup) != p + 1:
        raise ValueError("tuple length must be p + 1")
    n = tup[0].n
    J = _check_J(J, n)
    if p > sum(J):
        # c_J has dt-degree at most |J|
        return BiForm.zero()
    curv = simplicial_curvature(simplicial_connection(tup, mode), check=check)
    c = chern_form(J, curv)
    out = fiber_integrate(p, c)
    return -out if p % 2 else out


def antisym_trace(q, tup) -> BiForm:
    """sum_{sigma in S_{q+1}} sgn(sigma) Tr(Gamma(phi_sigma(1)) ^ ... ^ Gamma(phi_sigma(q)))."""
    tup = tuple(tup)
    if len(tup) != q + 1:
        raise ValueError("need q + 1 diffeomorphisms")
    Gs = [gamma_form(phi) for phi in tup]
    n = len(Gs[0])
    total = BiForm.zero()
    for sigma in itertools.permutations(range(q + 1)):
        M = Gs[sigma[1]]
        for k in range(2, q + 1):
            M = matwedge(M, Gs[sigma[k]])
        tr = BiForm.zero()
        for i in range(n):
            tr = tr + M[i][i]
        s = perm_sign(sigma)
        total = total + (tr if s > 0 else -tr)
    return total
