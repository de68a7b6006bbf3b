"""Hopf cyclic structure of (H_n, delta, 1): cofaces, codegeneracies, the
cyclic operator, b and B, for H_n^{(x) q} and for the relative complex
over the quotient coalgebra Q_n = H_n / H_n U+(gl_n).

Tensors are ``TensorElement`` objects; in the relative complex each leg is
a Y-free normal-form word (a Q_n class)."""

from __future__ import annotations

import itertools
import random

from .exact import Q
from .hopf import (E_WORD, HopfElement, TensorElement, _coproduct_word, _mul_basis,
                   _delta_word, counit, gen_weight, get_dimension, h_words,
                   iterated_coproduct, is_Q_word, s_delta, set_dimension, word_weight)
from .linalg import in_span, nullspace_exact

__all__ = ["reduce_to_Q", "reduce_tensor", "coface", "codegeneracy", "tau", "b_op",
           "B_op", "twisted_action", "gl_invariance_check", "parity_check", "shape_of",
           "shape_basis", "invariant_basis", "in_twisted_image", "congruent",
           "random_tensor", "random_lift", "scalar_tensor", "Complex", "ABSOLUTE",
           "RELATIVE", "tensor_weight", "tau_power"]

ABSOLUTE = "absolute"
RELATIVE = "relative"


def scalar_tensor(c=1):
    return TensorElement({(): Q(c)}, 0)


def reduce_to_Q(h: HopfElement) -> HopfElement:
    """Class in Q_n: normal forms keep Y's rightmost, so drop words with Y."""
    return HopfElement({w: c for w, c in h.terms.items() if is_Q_word(w)})


def reduce_tensor(t: TensorElement) -> TensorElement:
    return TensorElement({k: c for k, c in t.terms.items() if all(is_Q_word(w) for w in k)},
                         t.q)


def _finish(t, mode):
    return reduce_tensor(t) if mode == RELATIVE else t


def coface(j, t: TensorElement, mode=ABSOLUTE) -> TensorElement:
    """delta_j : C^q -> C^{q+1}; delta_0 = 1 (x) .., delta_{q+1} = .. (x) 1,
    otherwise the coproduct of leg j."""
    q = t.q
    if not 0 <= j <= q + 1:
        raise ValueError(f"coface index {j} out of range for q = {q}")
    out = {}
    for k, c in t.terms.items():
        if j == 0:
            items = {(E_WORD,) + k: Q(1)}
        elif j == q + 1:
            items = {k + (E_WORD,): Q(1)}
        else:
            dl = _coproduct_word(k[j - 1])
            items = {k[:j - 1] + kk + k[j:]: cc for kk, cc in dl.terms.items()}
        for kk, cc in items.items():
            s = out.get(kk, 0) + c * cc
            if s:
                out[kk] = s
            else:
                out.pop(kk, None)
    return _finish(TensorElement(out, q + 1), mode)


def codegeneracy(i, t: TensorElement, mode=ABSOLUTE) -> TensorElement:
    """sigma_i : C^q -> C^{q-1}, counit on leg i+1."""
    q = t.q
    if not 0 <= i <= q - 1:
        raise ValueError(f"codegeneracy index {i} out of range for q = {q}")
    out = {}
    for k, c in t.terms.items():
        if k[i] == E_WORD:
            kk = k[:i] + k[i + 1:]
            out[kk] = out.get(kk, 0) + c
    return TensorElement(out, q - 1)


def tau(t: TensorElement, mode=ABSOLUTE) -> TensorElement:
    """tau_q(h1 (x) .. (x) hq) = S_delta(h1) . (h2 (x) .. (x) hq (x) 1)."""
    q = t.q
    if q == 0:
        return t
    out = TensorElement({}, q)
    for k, c in t.terms.items():
        sd = s_delta(HopfElement.word(k[0]))
        if sd.is_zero():
            continue
        dl = iterated_coproduct(sd, q)
        rest = TensorElement({k[1:] + (E_WORD,): c}, q)
        out = out + dl * rest
    return _finish(out, mode)


def tau_power(t, k, mode=ABSOLUTE):
    for _ in range(k):
        t = tau(t, mode)
    return t


def b_op(t: TensorElement, mode=ABSOLUTE) -> TensorElement:
    q = t.q
    out = TensorElement({}, q + 1)
    for j in range(q + 2):
        f = coface(j, t, mode)
        out = out + (f if j % 2 == 0 else -f)
    return out


def B_op(t: TensorElement, mode=ABSOLUTE) -> TensorElement:
    """B = (sum_{k=0}^{q-1} (-1)^{(q-1)k} tau_{q-1}^k) sigma_{q-1} tau_q on C^q."""
    q = t.q
    if q == 0:
        return TensorElement({}, 0)
    b0 = codegeneracy(q - 1, tau(t, mode), mode)
    out = TensorElement({}, q - 1)
    cur = b0
    for k in range(q):
        out = out + (cur if ((q - 1) * k) % 2 == 0 else -cur)
        cur = tau(cur, mode)
    return out


# ------------------------------------------------------------ gl_n action

def _y_gens(n):
    return [("Y", a, b) for a in range(1, n + 1) for b in range(1, n + 1)]


def _left_mul_leg(Yg, w, mode):
    prod = _mul_basis(((), (Yg,)), w)
    if mode == RELATIVE:
        prod = {ww: c for ww, c in prod.items() if is_Q_word(ww)}
    return prod


def twisted_action(Yg, t: TensorElement, mode=RELATIVE) -> TensorElement:
    """(Y - delta(Y)) acting diagonally: Y is primitive, so it acts on each
    leg by left multiplication (then reduction to Q_n)."""
    dv = Q(1) if Yg[1] == Yg[2] else Q(0)
    out = {}
    for k, c in t.terms.items():
        for pos in range(len(k)):
            for w, cc in _left_mul_leg(Yg, k[pos], mode).items():
                kk = k[:pos] + (w,) + k[pos + 1:]
                s = out.get(kk, 0) + c * cc
                if s:
                    out[kk] = s
                else:
                    out.pop(kk, None)
        if dv:
            s = out.get(k, 0) - c * dv
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return TensorElement(out, t.q)


def gl_invariance_check(t: TensorElement, n=None, parity=True):
    """Twisted gl_n-invariance of a relative tensor: (Y(a,b) - delta_ab) t = 0
    for all a, b, plus the sign condition for the reflection diag(-1, 1, ..)
    (each term must change sign, the det twist)."""
    n = n or get_dimension()
    set_dimension(n)
    if t.q == 0:
        # (Y - delta(Y)) acts on scalars by -delta(Y); Y(1,1) gives -1
        return t.is_zero()
    for Yg in _y_gens(n):
        r = twisted_action(Yg, t, RELATIVE)
        if not r.is_zero():
            return False
    if parity and t.q > 0 and not parity_check(t):
        return False
    return True


def _count_index_one(w):
    F, U = w
    cnt = 0
    for g in list(F) + list(U):
        if g[0] == "X":
            cnt += g[1] == 1
        elif g[0] == "Y":
            cnt += (g[1] == 1) + (g[2] == 1)
        else:
            cnt += (g[1] == 1) + sum(1 for ell in g[2] if ell == 1)
    return cnt


def parity_check(t: TensorElement):
    """Conjugation by diag(-1, 1, .., 1) must act by det = -1."""
    return all(sum(_count_index_one(w) for w in k) % 2 == 1 for k in t.terms)


# ------------------------------------------------------------ shapes, invariants

def shape_of_word(w):
    F, U = w
    return (tuple(sorted(len(g[2]) for g in F)), sum(1 for g in U if g[0] == "X"),
            sum(1 for g in U if g[0] == "Y"))


def shape_of(key):
    return tuple(shape_of_word(w) for w in key)


def _words_of_shape(n, sh):
    lens, nx, ny = sh
    wt = sum(L - 1 for L in lens) + nx
    out = []
    for w in h_words(n, wt, len(lens) + nx + ny, allow_y=ny > 0):
        if shape_of_word(w) == sh:
            out.append(w)
    return out


def shape_basis(n, shape):
    legs = [_words_of_shape(n, sh) for sh in shape]
    return [tuple(k) for k in itertools.product(*legs)]


def _vector(t, index):
    v = [Q(0)] * len(index)
    for k, c in t.terms.items():
        v[index[k]] = c
    return v


def _action_matrix(n, basis, mode=RELATIVE):
    index = {k: i for i, k in enumerate(basis)}
    cols = []
    for Yg in _y_gens(n):
        for k in basis:
            img = twisted_action(Yg, TensorElement({k: Q(1)}, len(k)), mode)
            extra = [kk for kk in img.terms if kk not in index]
            if extra:
                raise AssertionError("twisted action left the shape subspace")
            cols.append(_vector(img, index))
    return index, cols


def invariant_basis(n, shape):
    """Basis of twisted gl_n-invariants in the span of the given leg shapes."""
    set_dimension(n)
    basis = shape_basis(n, shape)
    index, cols = _action_matrix(n, basis)
    # rows: one equation per (Y, output coordinate)
    m = len(_y_gens(n))
    N = len(basis)
    rows = []
    for y in range(m):
        block = cols[y * N:(y + 1) * N]
        for r in range(N):
            row = [block[c][r] for c in range(N)]
            if any(row):
                rows.append(row)
    null = nullspace_exact(rows, N)
    return [TensorElement({basis[i]: v for i, v in enumerate(vec) if v}, len(shape))
            for vec in null]


def _leg_torus(w, n):
    from .crossed import torus_weight
    return torus_weight(w, n)


def _grade(key, n):
    tw = [0] * n
    for w in key:
        for i, v in enumerate(_leg_torus(w, n)):
            tw[i] += v
    return tuple(word_weight(w) for w in key), tuple(tw)


def _y_torus(Yg, n):
    v = [0] * n
    v[Yg[1] - 1] += 1
    v[Yg[2] - 1] -= 1
    return tuple(v)


def in_twisted_image(t: TensorElement, n=None):
    """Is t in the span of (Y - delta(Y)) Q^{(x) q}?

    The action preserves the weight of every leg and shifts the torus weight
    by that of Y, so the question is decided grade by grade over the finite
    spaces of Q-words of the given leg weights."""
    n = n or get_dimension()
    set_dimension(n)
    if t.q == 0:
        # (Y(1,1) - delta(Y(1,1))) . c = -c: every scalar is in the image
        return True
    by_grade = {}
    for k, c in t.terms.items():
        by_grade.setdefault(_grade(k, n), {})[k] = c
    for (wts, tw), terms in by_grade.items():
        legs = [h_words(n, w, w, allow_y=False) for w in wts]
        cols = []
        for Yg in _y_gens(n):
            want = tuple(a - b for a, b in zip(tw, _y_torus(Yg, n)))
            for k in itertools.product(*legs):
                if _grade(k, n)[1] != want:
                    continue
                img = twisted_action(Yg, TensorElement({k: Q(1)}, len(k)), RELATIVE)
                if not img.is_zero():
                    cols.append(img.terms)
        index = {}
        for col in cols:
            for kk in col:
                index.setdefault(kk, len(index))
        if any(kk not in index for kk in terms):
            return False
        vecs = [[col.get(kk, Q(0)) for kk in index] for col in cols]
        target = [terms.get(kk, Q(0)) for kk in index]
        if not in_span(vecs, target):
            return False
    return True


def congruent(t1: TensorElement, t2: TensorElement, n=None):
    """Equality in C_delta (x)_{U(gl_n)} Q_n^{(x) q}."""
    return in_twisted_image(t1 - t2, n)


# ------------------------------------------------------------ random data

def random_tensor(rng, n, q, max_weight=2, max_len=2, terms=3, relative=False,
                  normalized=False):
    """Random tensor; ``normalized`` keeps legs in ker(counit), the subcomplex
    on which B = (sum +-tau^k) sigma tau is the Connes operator."""
    words = []
    for wt in range(max_weight + 1):
        words += [w for w in h_words(n, wt, max_len, allow_y=not relative)]
    if normalized:
        words = [w for w in words if w != E_WORD]
    out = {}
    for _ in range(terms):
        k = tuple(rng.choice(words) for _ in range(q))
        out[k] = out.get(k, 0) + Q(rng.randint(-3, 3) or 1, rng.randint(1, 3))
    return TensorElement(out, q)


def random_lift(rng, n, t: TensorElement, extra=2):
    """Replace the first leg of each term by a lift: w + sum c h Y."""
    out = TensorElement({}, t.q)
    ys = _y_gens(n)
    low = [w for wt in range(2) for w in h_words(n, wt, 1, allow_y=False)]
    for k, c in t.terms.items():
        lift = HopfElement.word(k[0])
        for _ in range(extra):
            h = HopfElement.word(rng.choice(low)) * HopfElement.gen(rng.choice(ys))
            lift = lift + h * Q(rng.randint(1, 3))
        for w, cc in lift.terms.items():
            out = out + TensorElement({(w,) + k[1:]: c * cc}, t.q)
    return out


def tensor_weight(t):
    return {sum(word_weight(w) for w in k) for k in t.terms}


class Complex:
    """Convenience bundle: operators for a fixed mode."""

    def __init__(self, n, mode=ABSOLUTE):
        set_dimension(n)
        self.n = n
        self.mode = mode

    def b(self, t):
        return b_op(t, self.mode)

    def B(self, t):
        return B_op(t, self.mode)

    def tau(self, t):
        return tau(t, self.mode)

    def equal(self, t1, t2):
        if self.mode == ABSOLUTE:
            return (t1 - t2).is_zero()
        return congruent(t1, t2, self.n)
