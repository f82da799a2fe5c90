"""Bicharacter twists and twisted tensor products of graded algebras and modules.

A twist ``t: Z^{c1} x Z^{c2} -> F_p^*`` is stored as the matrix of values
``t(e_i | e_j)`` on unit vectors and extended bilinearly.  The twisted
product multiplies by

    (l1 (x) g1)(l2 (x) g2) = t(l2 | g1) l1 l2 (x) g1 g2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import MonomialAlgebra, QciAlgebra, opposite
from .errors import BadSplit, TwistMismatch
from .field import PrimeField, Scalar
from .module import GradedModule


@dataclass(frozen=True, eq=False)
class TwistMap:
    field: PrimeField
    values: np.ndarray  # c1 x c2 matrix of t(e_i | e_j)

    def __post_init__(self):
        vals = self.field.array(self.values).reshape(np.shape(self.values))
        if np.any(vals == 0):
            raise TwistMismatch("twist values must be nonzero")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def c1(self) -> int:
        return self.values.shape[0]

    @property
    def c2(self) -> int:
        return self.values.shape[1]

    def table(self, D: np.ndarray, E: np.ndarray) -> np.ndarray:
        """``out[u, v] = t(D[u] | E[v])`` for stacks of degree vectors."""
        p = self.field.p
        D = np.asarray(D, dtype=np.int64).reshape(-1, self.c1)
        E = np.asarray(E, dtype=np.int64).reshape(-1, self.c2)
        out = np.ones((D.shape[0], E.shape[0]), dtype=np.int64)
        for k in range(self.c1):
            for l in range(self.c2):
                base = int(self.values[k, l])
                if base == 1:
                    continue
                expo = np.outer(D[:, k], E[:, l]) % (p - 1)
                uniq, inv = np.unique(expo, return_inverse=True)
                powers = np.array([pow(base, int(x), p) for x in uniq], dtype=np.int64)
                out = out * powers[inv.reshape(expo.shape)] % p
        return out

    def __call__(self, d: Sequence[int], e: Sequence[int]) -> Scalar:
        return self.field(int(self.table([d], [e])[0, 0]))

    def is_trivial(self) -> bool:
        return bool(np.all(self.values == 1))

    def to_json(self) -> list:
        return self.values.tolist()


def trivial_twist(field: PrimeField, c1: int, c2: int) -> TwistMap:
    return TwistMap(field, np.ones((c1, c2), dtype=np.int64))


def _check_split(A: MonomialAlgebra, I) -> tuple[list[int], list[int]]:
    I = sorted(set(int(i) for i in I))
    if not I or len(I) >= A.ngens or I[0] < 0 or I[-1] >= A.ngens:
        raise BadSplit(f"split must be a proper nonempty subset of the {A.ngens} generators")
    J = [j for j in range(A.ngens) if j not in I]
    return I, J


def split_factors(A: MonomialAlgebra, I) -> tuple[QciAlgebra, QciAlgebra]:
    """The sub-QCIs generated by the generators in ``I`` (0-based) and by the rest."""
    I, J = _check_split(A, I)
    q = A.commutation
    L = QciAlgebra(A.field, q[np.ix_(I, I)], [A.a[i] for i in I])
    R = QciAlgebra(A.field, q[np.ix_(J, J)], [A.a[j] for j in J])
    return L, R


def standard_twist(A: MonomialAlgebra, I) -> TwistMap:
    """Twist with ``t(e_i | e_j) = q_ji`` for ``i`` in ``I`` and ``j`` outside.

    Only cross pairs enter, which is what makes ``t`` bilinear.
    """
    I, J = _check_split(A, I)
    q = A.commutation
    t = TwistMap(A.field, q[np.ix_(J, I)].T.copy())
    _check_bilinear(t)
    return t


def _check_bilinear(t: TwistMap, samples: int = 8):
    from .errors import InvariantViolation

    rng = np.random.default_rng(0)
    p = t.field.p
    for _ in range(samples):
        d, d2 = rng.integers(-3, 4, size=(2, t.c1))
        e, e2 = rng.integers(-3, 4, size=(2, t.c2))
        if int(t.table([d + d2], [e])[0, 0]) != int(t.table([d], [e])[0, 0]) * int(t.table([d2], [e])[0, 0]) % p:
            raise InvariantViolation("twist is not additive in its first argument")
        if int(t.table([d], [e + e2])[0, 0]) != int(t.table([d], [e])[0, 0]) * int(t.table([d], [e2])[0, 0]) % p:
            raise InvariantViolation("twist is not additive in its second argument")


class TwistedAlgebra(MonomialAlgebra):
    """``left (x)^t right`` with basis ``l (x) r`` at index ``l * dim(right) + r``.

    Generators are those of ``left`` followed by those of ``right``; the
    grading group is ``Z^{c1} + Z^{c2}``.
    """

    def __init__(self, left: MonomialAlgebra, right: MonomialAlgebra, twist: TwistMap):
        if left.field != right.field or twist.field != left.field:
            raise TwistMismatch("factors and twist must share one field")
        if (twist.c1, twist.c2) != (left.ngens, right.ngens):
            raise TwistMismatch(
                f"twist is defined on Z^{twist.c1} x Z^{twist.c2}, factors are graded by "
                f"Z^{left.ngens} and Z^{right.ngens}"
            )
        self.left, self.right, self.twist = left, right, twist
        p = left.p
        nL, nR = left.dim, right.dim
        # tLR[l2, r1] = t(deg l2 | deg r1)
        tLR = twist.table(left.degrees, right.degrees)
        cL, iL = left.mul_coef, left.mul_index
        cR, iR = right.mul_coef, right.mul_index
        coef = (cL[:, None, :, None] * cR[None, :, None, :]) % p
        coef = (coef * tLR.T[None, :, :, None]) % p
        ok = (iL[:, None, :, None] >= 0) & (iR[None, :, None, :] >= 0)
        index = np.where(ok, iL[:, None, :, None] * nR + iR[None, :, None, :], -1)
        n = nL * nR
        # axes are (l1, r1, l2, r2) -> (b1 = l1*nR + r1, b2 = l2*nR + r2)
        super().__init__(left.field, left.a + right.a, coef.reshape(n, n), index.reshape(n, n))

    def __repr__(self):
        return f"TwistedAlgebra({self.left!r}, {self.right!r}, t={self.twist.values.tolist()})"


def twisted_product_algebra(L: MonomialAlgebra, R: MonomialAlgebra, t: TwistMap) -> TwistedAlgebra:
    return TwistedAlgebra(L, R, t)


def qci_decomposition_check(A: MonomialAlgebra, I) -> bool:
    """Whether ``A`` is the twisted product of its two sub-QCIs for the split ``I``.

    The comparison map sends ``l (x) r`` to the product ``l r`` computed in
    ``A``; for ``I = {0..c1-1}`` this is exactly ``x^e -> x^{e|I} (x) x^{e|rest}``.
    It must be a bijection on basis monomials up to nonzero scalars and must
    transport every structure constant.
    """
    I, J = _check_split(A, I)
    L, R = split_factors(A, I)
    T = TwistedAlgebra(L, R, standard_twist(A, I))
    p = A.p
    n = A.dim
    phi_coef = np.zeros(T.dim, dtype=np.int64)
    phi_idx = np.zeros(T.dim, dtype=np.int64)
    for b, e in enumerate(T.basis):
        el = [0] * A.ngens
        er = [0] * A.ngens
        for k, i in enumerate(I):
            el[i] = e[k]
        for k, j in enumerate(J):
            er[j] = e[len(I) + k]
        u, v = A.index(el), A.index(er)
        phi_coef[b] = A.mul_coef[u, v]
        phi_idx[b] = A.mul_index[u, v]
    if np.any(phi_idx < 0) or np.any(phi_coef == 0) or len(set(phi_idx.tolist())) != n:
        return False
    # phi(b1 b2) against phi(b1) phi(b2) on all pairs
    ti, tc = T.mul_index, T.mul_coef
    ai = A.mul_index[np.ix_(phi_idx, phi_idx)]
    ac = A.mul_coef[np.ix_(phi_idx, phi_idx)]
    rhs_coef = (phi_coef[:, None] * phi_coef[None, :] % p) * ac % p
    tz = ti < 0
    if not np.array_equal(tz, ai < 0):
        return False
    safe = np.where(tz, 0, ti)
    lhs_idx = np.where(tz, -1, phi_idx[safe])
    lhs_coef = np.where(tz, 0, tc * phi_coef[safe] % p)
    return bool(np.array_equal(lhs_idx, np.where(tz, -1, ai)) and np.array_equal(lhs_coef, np.where(tz, 0, rhs_coef)))


def twisted_tensor_module(M: GradedModule, N: GradedModule, t: TwistMap,
                          algebra: TwistedAlgebra | None = None) -> GradedModule:
    """``M (x)^t N`` with ``(l (x) g)(m (x) n) = t(m | g) l m (x) g n``.

    ``M`` must be graded (its degrees feed the twist).  The result is graded
    when ``N`` is.  Basis vector ``m * dim N + n`` is ``m (x) n``.
    """
    if algebra is None:
        algebra = TwistedAlgebra(M.parent, N.parent, t)
    elif algebra.left is not M.parent or algebra.right is not N.parent or algebra.twist is not t:
        raise TwistMismatch("given algebra is not the twisted product of the modules' parents")
    if not M.is_graded:
        raise TwistMismatch("the left factor module must be graded")
    p = algebra.p
    eyeN = np.eye(N.dim, dtype=np.int64)
    actions = [np.kron(m, eyeN) for m in M.actions]
    unit = np.eye(N.parent.ngens, dtype=np.int64)
    tM = t.table(M.degrees, unit)  # tM[m, j] = t(deg m | e_j)
    for j, m in enumerate(N.actions):
        actions.append(np.kron(np.diag(tM[:, j]), m) % p)
    degrees = None
    if N.is_graded:
        degrees = np.hstack([np.repeat(M.degrees, N.dim, axis=0), np.tile(N.degrees, (M.dim, 1))])
    return GradedModule(algebra, actions, degrees)


def enveloping_algebra(A: MonomialAlgebra) -> tuple[TwistedAlgebra, GradedModule]:
    """``A^e = A (x) A^op`` (trivial twist) with ``A`` as the left module
    ``(u (x) v) . m = u m v``.  The bimodule carries no ``Z^{2c}`` grading."""
    Aop = opposite(A)
    Ae = TwistedAlgebra(A, Aop, trivial_twist(A.field, A.ngens, A.ngens))
    actions = list(A.generator_matrices) + [A.right_matrix(g) for g in A.gen_indices]
    return Ae, GradedModule(Ae, actions)
