"""Minimal free resolutions and Ext dimensions over local monomial algebras.

Resolutions are built syzygy by syzygy.  Each syzygy module is carried with
its own action matrices (in null-space coordinates), so the kernels stay as
small as the syzygies themselves rather than the free modules around them.

A differential ``d_i: A^{b_i} -> A^{b_{i-1}}`` is stored as an array
``D[g, j, m]``: the coefficient of basis monomial ``m`` in component ``j`` of
the image of generator ``g``.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse

from . import linalg
from .algebra import MonomialAlgebra, all_roots_of_unity, is_symmetric
from .errors import InvariantViolation, ResourceLimit
from .module import GradedModule


@dataclass(frozen=True)
class Budget:
    """Hard limits; exceeding one raises ``ResourceLimit``."""

    max_rank: int = 4000          # generators of a single free module
    max_window: int = 64
    max_algebra_dim: int = 1024
    max_bar_block: int = 8_000_000  # entries of one dense bar-complex block
    max_bar_rows: int = 400_000     # dimension of one bar cochain space


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class ExtTable:
    dims: tuple
    window: int

    def __getitem__(self, i):
        return self.dims[i]

    def __len__(self):
        return len(self.dims)

    def vanishes(self, lo: int, hi: int | None = None) -> bool:
        """Whether ``Ext^i = 0`` for ``lo <= i <= hi`` (default: end of window)."""
        hi = self.window if hi is None else hi
        return all(d == 0 for d in self.dims[lo : hi + 1])

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "window": self.window}


def _basis_images(A: MonomialAlgebra, actions: Sequence[np.ndarray], vectors: np.ndarray) -> np.ndarray:
    """``out[b] = x^{e_b} . vectors`` for every basis monomial.

    Peels off the first generator: ``x^e = x_i x^{e - e_i}`` holds with
    coefficient 1 when ``i`` is the smallest index with ``e_i > 0``.
    """
    p = A.p
    out = np.zeros((A.dim,) + vectors.shape, dtype=np.int64)
    out[0] = vectors % p
    for b, e in enumerate(A.basis[1:], start=1):
        i = min(k for k, x in enumerate(e) if x)
        rest = list(e)
        rest[i] -= 1
        out[b] = linalg.matmul(actions[i], out[A.index(rest)], p)
    return out


@dataclass
class Resolution:
    """Minimal free resolution ``... -> A^{b_1} -> A^{b_0} -> M``, computed lazily."""

    module: GradedModule
    betti: list = field(default_factory=list)
    differentials: list = field(default_factory=list)  # differentials[i-1] is d_i
    budget: Budget = DEFAULT_BUDGET
    # current syzygy Omega^k M: its action matrices and its inclusion into A^{b_{k-1}}
    _syz_actions: list | None = None
    _syz_basis: np.ndarray | None = None

    @property
    def length(self) -> int:
        """Largest ``i`` with ``b_i`` known."""
        return len(self.betti) - 1

    def extend(self, top: int) -> "Resolution":
        """Compute betti numbers through ``b_top`` (and ``d_1 .. d_top``)."""
        M = self.module
        A, p = M.parent, M.parent.p
        if self._syz_actions is None and not self.betti:
            self._syz_actions = list(M.actions)
        while self.length < top:
            X = self._syz_actions
            d = X[0].shape[0] if X else 0
            if d == 0:
                b = 0
                if self.length >= 0:
                    self.differentials.append(np.zeros((0, self.betti[-1], A.dim), dtype=np.int64))
                self.betti.append(0)
                continue
            # minimal generators: standard vectors complementing J X
            JX = np.hstack(X)
            start = JX.shape[1]
            gens = [c - start for c in linalg.independent_columns(np.hstack([JX, np.eye(d, dtype=np.int64)]), p, start)]
            b = len(gens)
            if b > self.budget.max_rank:
                raise ResourceLimit(f"free module rank {b} exceeds budget {self.budget.max_rank}")
            if self.length >= 0:
                K = self._syz_basis  # A^{b_prev} coordinates of the syzygy basis
                D = K[:, gens].reshape(self.betti[-1], A.dim, b).transpose(2, 0, 1)
                if np.any(D[:, :, 0]):
                    raise InvariantViolation("differential has a unit entry; resolution is not minimal")
                self.differentials.append(np.ascontiguousarray(D))
            self.betti.append(b)
            # projective cover A^b -> X, column j*n + m is  m . gen_j
            R = _basis_images(A, X, np.eye(d, dtype=np.int64)[:, gens])
            cover = R.transpose(1, 2, 0).reshape(d, b * A.dim)
            Rr, pivots = linalg.rref(cover, p)
            if len(pivots) != d:
                raise InvariantViolation("projective cover is not surjective; resolution is not exact")
            pivset = set(pivots)
            free = [j for j in range(b * A.dim) if j not in pivset]
            K = np.zeros((b * A.dim, len(free)), dtype=np.int64)
            if free:
                K[free, np.arange(len(free))] = 1
                K[pivots, :] = (-Rr[:d][:, free]) % p
            # induced action on the kernel: (L_i K) restricted to the free rows
            Kt = K.reshape(b, A.dim, len(free))
            new_actions = []
            for L in A.generator_matrices:
                LK = linalg.matmul(L, Kt, p).reshape(b * A.dim, len(free))
                new_actions.append(np.ascontiguousarray(LK[free, :]))
            self._syz_actions = new_actions if free else []
            self._syz_basis = K
        return self


_RESOLUTIONS: "weakref.WeakKeyDictionary[GradedModule, Resolution]" = weakref.WeakKeyDictionary()


def minimal_resolution(M: GradedModule, W: int, budget: Budget = DEFAULT_BUDGET) -> Resolution:
    """Minimal resolution of ``M`` with betti numbers ``b_0 .. b_W``.

    Results are cached per module object and extended on demand.
    """
    if W > budget.max_window:
        raise ResourceLimit(f"window {W} exceeds budget {budget.max_window}")
    if M.parent.dim > budget.max_algebra_dim:
        raise ResourceLimit(f"algebra dimension {M.parent.dim} exceeds budget {budget.max_algebra_dim}")
    res = _RESOLUTIONS.get(M)
    if res is None or res.budget != budget:
        res = Resolution(M, budget=budget)
        _RESOLUTIONS[M] = res
    return res.extend(W)


def _cochain_matrix(D: np.ndarray, RN: np.ndarray, p: int) -> np.ndarray:
    """Matrix of ``Hom(d, N): N^{b_prev} -> N^{b}`` for a differential ``D``."""
    b, bprev, n = D.shape
    dN = RN.shape[1]
    if b == 0 or bprev == 0 or dN == 0:
        return np.zeros((b * dN, bprev * dN), dtype=np.int64)
    blocks = linalg.matmul(D.reshape(b * bprev, n), RN.reshape(n, dN * dN), p)
    return blocks.reshape(b, bprev, dN, dN).transpose(0, 2, 1, 3).reshape(b * dN, bprev * dN)


def ext_dims(M: GradedModule, N: GradedModule, W: int, budget: Budget = DEFAULT_BUDGET) -> ExtTable:
    """``dim Ext^i(M, N)`` for ``0 <= i <= W`` from the minimal resolution of ``M``."""
    if M.parent is not N.parent:
        raise ValueError("modules over different algebras")
    p = M.parent.p
    res = minimal_resolution(M, W + 1, budget)
    RN = N.basis_actions
    ranks = [linalg.rank(_cochain_matrix(res.differentials[i], RN, p), p) for i in range(W + 1)]
    dims = []
    for i in range(W + 1):
        dims.append(N.dim * res.betti[i] - ranks[i] - (ranks[i - 1] if i else 0))
    return ExtTable(tuple(dims), W)


def betti_numbers(M: GradedModule, W: int, budget: Budget = DEFAULT_BUDGET) -> list[int]:
    return list(minimal_resolution(M, W, budget).betti[: W + 1])


# -- bar complex oracle -------------------------------------------------------


def _bar_labels(A: MonomialAlgebra, M: GradedModule, N: GradedModule, k: int) -> np.ndarray:
    """Degree shift of each basis map of ``Hom_k(J^{(x)k} (x) M, N)``.

    Basis element ``r * D_k + t`` sends tensor ``t`` to basis vector ``r``
    of ``N``; its shift is ``deg r - sum deg a_i - deg m``.
    """
    Jdeg = A.degrees[1:]
    src = M.degrees
    for _ in range(k):
        src = (Jdeg[:, None, :] + src[None, :, :]).reshape(-1, A.ngens)
    return (N.degrees[:, None, :] - src[None, :, :]).reshape(-1, A.ngens)


def _bar_coboundary(A: MonomialAlgebra, M: GradedModule, N: GradedModule, k: int) -> sparse.csr_matrix:
    """Sparse matrix of the normalized bar coboundary on ``Hom_k(J^{(x)k} (x) M, N)``.

    (df)(a_1..a_{k+1}, m) = a_1 f(a_2..a_{k+1}, m)
                           + sum_i (-1)^i f(.., a_i a_{i+1}, .., m)
                           + (-1)^{k+1} f(a_1..a_k, a_{k+1} m)
    Here ``J`` (the radical, spanned by non-unit monomials) stands in for
    ``A / k``; it is closed under multiplication.
    """
    p = A.p
    nJ, dM, dN = A.dim - 1, M.dim, N.dim
    Dk = nJ**k * dM
    Dk1 = nJ * Dk
    rows, cols, vals = [], [], []
    RN, RM = N.basis_actions, M.basis_actions
    # a_1 f(rest): rows r*Dk1 + a*Dk + w, cols s*Dk + w
    w = np.arange(Dk)
    for a in range(nJ):
        r, s = np.nonzero(RN[a + 1])
        if r.size == 0:
            continue
        rows.append((r[:, None] * Dk1 + a * Dk + w[None, :]).ravel())
        cols.append((s[:, None] * Dk + w[None, :]).ravel())
        vals.append(np.repeat(RN[a + 1][r, s], Dk))
    # products a_i a_{i+1} inside the tensor
    mc = A.mul_coef[1:, 1:]
    mi = A.mul_index[1:, 1:] - 1  # J index of the product (or < 0)
    rN = np.arange(dN)
    for i in range(1, k + 1):
        # digits: (prefix of i-1 factors, a_i, a_{i+1}, suffix of k-i factors and m)
        pre, suf = nJ ** (i - 1), nJ ** (k - i) * dM
        P, X, Y, S = np.meshgrid(np.arange(pre), np.arange(nJ), np.arange(nJ), np.arange(suf), indexing="ij")
        prod_idx = mi[X, Y]
        ok = prod_idx >= 0
        u = ((P * nJ + X) * nJ + Y) * suf + S
        t = (P * nJ + prod_idx) * suf + S
        c = mc[X, Y] * (1 if i % 2 == 0 else p - 1) % p
        u, t, c = u[ok], t[ok], c[ok]
        rows.append((rN[:, None] * Dk1 + u[None, :]).ravel())
        cols.append((rN[:, None] * Dk + t[None, :]).ravel())
        vals.append(np.tile(c, dN))
    # a_{k+1} m in the last slot
    sign = 1 if (k + 1) % 2 == 0 else p - 1
    prefixes = np.arange(nJ**k)
    for a in range(nJ):
        mp, m = np.nonzero(RM[a + 1])
        if mp.size == 0:
            continue
        u = (prefixes[:, None] * nJ + a) * dM + m[None, :]
        t = prefixes[:, None] * dM + mp[None, :]
        c = np.tile(RM[a + 1][mp, m] * sign % p, (prefixes.size, 1))
        rows.append((rN[:, None, None] * Dk1 + u[None]).ravel())
        cols.append((rN[:, None, None] * Dk + t[None]).ravel())
        vals.append(np.tile(c.ravel(), dN))
    shape = (dN * Dk1, dN * Dk)
    if not rows:
        return sparse.csr_matrix(shape, dtype=np.int64)
    mat = sparse.coo_matrix(
        (np.concatenate(vals).astype(np.int64), (np.concatenate(rows), np.concatenate(cols))), shape=shape
    ).tocsr()
    mat.data %= p
    mat.eliminate_zeros()
    return mat


def _label_ids(labels: np.ndarray) -> np.ndarray:
    if labels.shape[1] == 0:
        return np.zeros(labels.shape[0], dtype=np.int64)
    return np.unique(labels, axis=0, return_inverse=True)[1].reshape(-1)


def _sparse_rank(mat: sparse.csr_matrix, p: int, row_labels, col_labels, budget: Budget) -> int:
    if mat.nnz == 0:
        return 0
    if row_labels is None:
        if mat.shape[0] * mat.shape[1] > budget.max_bar_block:
            raise ResourceLimit(f"bar block {mat.shape} exceeds budget")
        return linalg.rank(mat.toarray(), p)
    # block decomposition by degree shift
    both = np.vstack([row_labels, col_labels])
    ids = _label_ids(both)
    rid, cid = ids[: len(row_labels)], ids[len(row_labels):]
    coo = mat.tocoo()
    if np.any(rid[coo.row] != cid[coo.col]):
        raise InvariantViolation("bar coboundary does not preserve the degree shift")
    total = 0
    order_r = np.argsort(rid, kind="stable")
    order_c = np.argsort(cid, kind="stable")
    for s in np.unique(rid[coo.row]):
        rsel = order_r[rid[order_r] == s]
        csel = order_c[cid[order_c] == s]
        if rsel.size * csel.size > budget.max_bar_block:
            raise ResourceLimit(f"bar block {rsel.size}x{csel.size} exceeds budget")
        block = mat[rsel][:, csel].toarray()
        total += linalg.rank(block, p)
    return total


def bar_ext_oracle(M: GradedModule, N: GradedModule, W: int, budget: Budget = DEFAULT_BUDGET) -> ExtTable:
    """``dim Ext^i(M, N)`` for ``0 <= i <= W`` from the normalized bar resolution.

    Independent of ``minimal_resolution``.  When both modules are graded the
    cochain spaces split by degree shift and only the blocks are eliminated.
    """
    A = M.parent
    if N.parent is not A:
        raise ValueError("modules over different algebras")
    nJ = A.dim - 1
    top = N.dim * nJ ** (W + 1) * M.dim
    if top > budget.max_bar_rows:
        raise ResourceLimit(f"bar cochain dimension {top} exceeds budget {budget.max_bar_rows}")
    graded = M.is_graded and N.is_graded
    p = A.p
    ranks = []
    for k in range(W + 1):
        mat = _bar_coboundary(A, M, N, k)
        if graded:
            rl, cl = _bar_labels(A, M, N, k + 1), _bar_labels(A, M, N, k)
        else:
            rl = cl = None
        ranks.append(_sparse_rank(mat, p, rl, cl, budget))
    dims = []
    for k in range(W + 1):
        dim_k = N.dim * nJ**k * M.dim
        dims.append(dim_k - ranks[k] - (ranks[k - 1] if k else 0))
    return ExtTable(tuple(dims), W)


# -- derived checks -----------------------------------------------------------


def hochschild_dims(A: MonomialAlgebra, W: int, budget: Budget = DEFAULT_BUDGET) -> ExtTable:
    """``dim HH^n(A) = dim Ext^n_{A^e}(A, A)`` for ``0 <= n <= W``."""
    from .twist import enveloping_algebra

    if A.dim**2 > budget.max_algebra_dim:
        raise ResourceLimit(f"enveloping algebra dimension {A.dim ** 2} exceeds budget {budget.max_algebra_dim}")
    _, Amod = enveloping_algebra(A)
    return ext_dims(Amod, Amod, W, budget)


def convolve(x: Sequence[int], y: Sequence[int], W: int) -> list[int]:
    return [sum(x[i] * y[n - i] for i in range(n + 1)) for n in range(W + 1)]


@dataclass(frozen=True)
class KunnethResult:
    product: ExtTable
    left: ExtTable
    right: ExtTable

    @property
    def expected(self) -> list[int]:
        return convolve(self.left.dims, self.right.dims, self.product.window)

    @property
    def holds(self) -> bool:
        return list(self.product.dims) == self.expected

    def __bool__(self):
        return self.holds


def kunneth_compare(M1, M2, N1, N2, t, W: int, budget: Budget = DEFAULT_BUDGET) -> KunnethResult:
    from .twist import TwistedAlgebra, twisted_tensor_module

    if M1.parent is not M2.parent or N1.parent is not N2.parent:
        raise ValueError("M1, M2 (and N1, N2) must share a parent algebra")
    T = TwistedAlgebra(M1.parent, N1.parent, t)
    X = twisted_tensor_module(M1, N1, t, T)
    Y = twisted_tensor_module(M2, N2, t, T)
    return KunnethResult(ext_dims(X, Y, W, budget), ext_dims(M1, M2, W, budget), ext_dims(N1, N2, W, budget))


def kunneth_check(M1, M2, N1, N2, t, W: int, budget: Budget = DEFAULT_BUDGET) -> bool:
    """Ext over the twisted product against the convolution of the factors' Ext."""
    return kunneth_compare(M1, M2, N1, N2, t, W, budget).holds


SYMMETRIC_VANISHING = "symmetric-vanishing"
SYMMETRIC_NONVANISHING = "symmetric-nonvanishing"
VIOLATION = "VIOLATION"


@dataclass(frozen=True)
class SymmetryVerdict:
    verdict: str
    forward: ExtTable   # Ext(M, N)
    backward: ExtTable  # Ext(N, M)
    hypotheses: dict
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "forward": self.forward.to_json(),
            "backward": self.backward.to_json(),
            "hypotheses": dict(self.hypotheses),
            "reason": self.reason,
        }


def symmetry_hypotheses(M: GradedModule, N: GradedModule) -> dict:
    A = M.parent
    graded = M.is_graded and N.is_graded
    sym = is_symmetric(A)
    roots = all_roots_of_unity(A)
    return {
        "graded": graded,
        "symmetric": sym,
        "roots_of_unity": roots,
        "within_hypotheses": roots and (sym or graded),
    }


def ext_symmetry_check(M: GradedModule, N: GradedModule, W: int = 10, budget: Budget = DEFAULT_BUDGET) -> SymmetryVerdict:
    """Finite-window comparison of the vanishing of ``Ext^i(M,N)`` and ``Ext^i(N,M)``.

    A pair is a violation when exactly one direction vanishes on ``[1, W]``,
    or when a direction vanishes on the tail ``[W // 2, W]`` without vanishing
    on all of ``[1, W]``.
    """
    fwd = ext_dims(M, N, W, budget)
    bwd = ext_dims(N, M, W, budget)
    hyp = symmetry_hypotheses(M, N)
    vf, vb = fwd.vanishes(1), bwd.vanishes(1)
    tail = max(1, W // 2)
    for name, tab, v in (("Ext(M,N)", fwd, vf), ("Ext(N,M)", bwd, vb)):
        if tab.vanishes(tail) and not v:
            return SymmetryVerdict(VIOLATION, fwd, bwd, hyp, f"{name} vanishes on [{tail},{W}] but not on [1,{W}]")
    if vf != vb:
        which = "Ext(M,N)" if vf else "Ext(N,M)"
        return SymmetryVerdict(VIOLATION, fwd, bwd, hyp, f"only {which} vanishes on [1,{W}]")
    return SymmetryVerdict(SYMMETRIC_VANISHING if vf else SYMMETRIC_NONVANISHING, fwd, bwd, hyp)
