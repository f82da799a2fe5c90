"""Quantum complete intersections and their Frobenius structure.

A quantum complete intersection over ``F_p`` is

    k<X_1, ..., X_c> / (X_i^{a_i}, X_i X_j - q_ij X_j X_i).

Its basis is the set of ascending monomials ``x_1^{e_1} ... x_c^{e_c}`` with
``0 <= e_i < a_i``, enumerated lexicographically.  Structure constants are
tabulated once at construction: the product of two basis monomials is always
a scalar multiple of a single basis monomial (or zero), so two ``dim x dim``
arrays hold the whole multiplication.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .errors import (
    BadCommutationMatrix,
    BadExponent,
    BadParams,
    InvariantViolation,
    MixedParents,
    ResourceLimit,
)
from .field import PrimeField, Scalar, make_field

Monomial = tuple  # exponent vector (e_1, ..., e_c)

# tables cost O(dim^2) memory; larger algebras are refused up front
MAX_TABLE_DIM = 1024


def _strides(a: Sequence[int]) -> np.ndarray:
    out = np.ones(len(a), dtype=np.int64)
    for i in range(len(a) - 2, -1, -1):
        out[i] = out[i + 1] * a[i + 1]
    return out


class MonomialAlgebra:
    """Local graded algebra with a monomial basis and scalar structure constants.

    Subclasses supply the two tables ``mul_coef`` and ``mul_index``: the
    product of basis elements ``i`` and ``j`` is ``mul_coef[i, j]`` times basis
    element ``mul_index[i, j]`` (index ``-1`` means the product vanishes).

    The basis is indexed by exponent vectors over the generators, lex ordered,
    and each basis element must equal the ordered product of generator powers
    ``g_1^{e_1} ... g_c^{e_c}`` with coefficient exactly 1.  That property lets
    modules evaluate any basis element as a product of generator matrices.
    """

    def __init__(self, field: PrimeField, a: Sequence[int], mul_coef: np.ndarray, mul_index: np.ndarray):
        self.field = field
        self.a = tuple(int(x) for x in a)
        self.basis: list[Monomial] = list(itertools.product(*(range(x) for x in self.a)))
        self._index = {e: i for i, e in enumerate(self.basis)}
        self.degrees = np.array(self.basis, dtype=np.int64).reshape(len(self.basis), len(self.a))
        self.mul_coef = np.asarray(mul_coef, dtype=np.int64)
        self.mul_index = np.asarray(mul_index, dtype=np.int64)
        self.mul_coef.setflags(write=False)
        self.mul_index.setflags(write=False)
        self._check_generator_words()

    # -- basic shape -------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ngens(self) -> int:
        return len(self.a)

    @property
    def p(self) -> int:
        return self.field.p

    def index(self, e: Monomial) -> int:
        return self._index[tuple(e)]

    def gen_index(self, i: int) -> int:
        """Basis index of the ``i``-th generator (0-based)."""
        e = [0] * self.ngens
        e[i] = 1
        return self._index[tuple(e)]

    @cached_property
    def gen_indices(self) -> list[int]:
        return [self.gen_index(i) for i in range(self.ngens)]

    def _check_generator_words(self):
        for b, e in enumerate(self.basis):
            coef, idx = 1, 0
            for i, k in enumerate(e):
                g = self.gen_indices[i]
                for _ in range(k):
                    coef = coef * int(self.mul_coef[idx, g]) % self.p
                    idx = int(self.mul_index[idx, g])
                    if idx < 0:
                        raise InvariantViolation(f"generator word for {e} vanishes")
            if idx != b or coef != 1:
                raise InvariantViolation(f"basis element {e} is not its ascending generator word")

    # -- structure ---------------------------------------------------------

    @cached_property
    def commutation(self) -> np.ndarray:
        """Matrix ``q`` with ``g_i g_j = q[i, j] g_j g_i`` for the generators."""
        c, p = self.ngens, self.p
        q = np.ones((c, c), dtype=np.int64)
        for i in range(c):
            for j in range(i + 1, c):
                gi, gj = self.gen_indices[i], self.gen_indices[j]
                # g_i g_j is the basis element itself; g_j g_i = s * g_i g_j
                s = int(self.mul_coef[gj, gi])
                q[j, i] = s
                q[i, j] = pow(s, p - 2, p)
        q.setflags(write=False)
        return q

    def left_matrix(self, b: int) -> np.ndarray:
        """Matrix of ``v -> basis[b] * v`` (columns indexed by the input basis)."""
        n = self.dim
        M = np.zeros((n, n), dtype=np.int64)
        idx = self.mul_index[b]
        ok = idx >= 0
        M[idx[ok], np.flatnonzero(ok)] = self.mul_coef[b][ok]
        return M

    def right_matrix(self, b: int) -> np.ndarray:
        """Matrix of ``v -> v * basis[b]``."""
        n = self.dim
        M = np.zeros((n, n), dtype=np.int64)
        idx = self.mul_index[:, b]
        ok = idx >= 0
        M[idx[ok], np.flatnonzero(ok)] = self.mul_coef[:, b][ok]
        return M

    @cached_property
    def generator_matrices(self) -> list[np.ndarray]:
        return [self.left_matrix(g) for g in self.gen_indices]

    @cached_property
    def total_degree(self) -> np.ndarray:
        return self.degrees.sum(axis=1)

    # -- elements ----------------------------------------------------------

    def element(self, coefficients: Mapping[Monomial, object] | None = None) -> "AlgebraElement":
        return AlgebraElement(self, coefficients or {})

    def monomial(self, e: Monomial, coef=1) -> "AlgebraElement":
        return AlgebraElement(self, {tuple(e): coef})

    def one(self) -> "AlgebraElement":
        return self.monomial((0,) * self.ngens)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def gen(self, i: int) -> "AlgebraElement":
        """The generator ``x_{i+1}`` (0-based index)."""
        return AlgebraElement(self, {self.basis[self.gen_index(i)]: 1})

    def gens(self) -> list["AlgebraElement"]:
        return [self.gen(i) for i in range(self.ngens)]

    def from_vector(self, v) -> "AlgebraElement":
        v = np.asarray(v, dtype=np.int64) % self.p
        return AlgebraElement(self, {self.basis[i]: int(v[i]) for i in np.flatnonzero(v)})

    def basis_elements(self) -> list["AlgebraElement"]:
        return [AlgebraElement(self, {e: 1}) for e in self.basis]

    def multiply(self, u: "AlgebraElement", v: "AlgebraElement") -> "AlgebraElement":
        if u.parent is not self or v.parent is not self:
            raise MixedParents("elements belong to different algebras")
        p = self.p
        out: dict[int, int] = {}
        for e, x in u._terms.items():
            i = self._index[e]
            for f, y in v._terms.items():
                j = self._index[f]
                k = int(self.mul_index[i, j])
                if k < 0:
                    continue
                out[k] = (out.get(k, 0) + x * y * int(self.mul_coef[i, j])) % p
        return AlgebraElement(self, {self.basis[k]: c for k, c in out.items() if c})

    def same_structure(self, other: "MonomialAlgebra") -> bool:
        """Equal fields, exponents and structure constants."""
        return (
            self.field == other.field
            and self.a == other.a
            and np.array_equal(self.mul_index, other.mul_index)
            and np.array_equal(np.where(self.mul_index >= 0, self.mul_coef, 0),
                               np.where(other.mul_index >= 0, other.mul_coef, 0))
        )

    def to_qci(self) -> "QciAlgebra":
        """The quantum complete intersection with the same generator relations."""
        return QciAlgebra(self.field, self.commutation, self.a)


class QciAlgebra(MonomialAlgebra):
    """The quantum complete intersection ``A_q^a`` over a prime field."""

    def __init__(self, field: PrimeField, q, a: Sequence[int]):
        a = [int(x) for x in a]
        if len(a) < 1:
            raise BadExponent("need at least one generator")
        if any(x < 2 for x in a):
            raise BadExponent(f"exponents must be >= 2, got {a}")
        c, p = len(a), field.p
        q = field.array(q)
        if q.shape != (c, c):
            raise BadCommutationMatrix(f"commutation matrix must be {c}x{c}, got shape {q.shape}")
        if np.any(np.diag(q) != 1):
            raise BadCommutationMatrix("diagonal entries q_ii must be 1")
        if np.any((q * q.T) % p != 1):
            raise BadCommutationMatrix("q_ij * q_ji must be 1 for all i, j")
        if math.prod(a) > MAX_TABLE_DIM:
            raise ResourceLimit(f"dim {math.prod(a)} exceeds the dense table limit {MAX_TABLE_DIM}")
        self.q = q
        self.q.setflags(write=False)
        coef, index = _qci_tables(q, a, p)
        super().__init__(field, a, coef, index)

    @property
    def c(self) -> int:
        return len(self.a)

    def __repr__(self):
        return f"QciAlgebra(p={self.p}, a={list(self.a)}, q={self.q.tolist()})"

    @cached_property
    def commutation(self) -> np.ndarray:
        return self.q

    def to_qci(self) -> "QciAlgebra":
        return self

    def to_json(self) -> dict:
        return {"p": self.p, "c": self.c, "a": list(self.a), "q": self.q.tolist()}

    @classmethod
    def from_json(cls, data: Mapping) -> "QciAlgebra":
        a = list(data["a"])
        if "c" in data and int(data["c"]) != len(a):
            raise BadExponent(f"c={data['c']} but {len(a)} exponents given")
        return cls(make_field(int(data["p"])), data["q"], a)


def _qci_tables(q: np.ndarray, a: Sequence[int], p: int) -> tuple[np.ndarray, np.ndarray]:
    # x^e x^f = prod_{i>j} q_ij^{e_i f_j} x^{e+f}: each x_j^{f_j} moves left
    # past every x_i^{e_i} with i > j.
    c = len(a)
    E = np.array(list(itertools.product(*(range(x) for x in a))), dtype=np.int64).reshape(-1, c)
    n = E.shape[0]
    coef = np.ones((n, n), dtype=np.int64)
    for i in range(c):
        for j in range(i):
            qij = int(q[i, j])
            if qij == 1:
                continue
            top = (a[i] - 1) * (a[j] - 1)
            powers = np.array([pow(qij, k, p) for k in range(top + 1)], dtype=np.int64)
            coef = (coef * powers[np.outer(E[:, i], E[:, j])]) % p
    S = E[:, None, :] + E[None, :, :]
    valid = np.all(S < np.array(a), axis=2)
    index = np.where(valid, S @ _strides(a), -1)
    return coef, index


class AlgebraElement:
    """Immutable linear combination of basis monomials."""

    __slots__ = ("parent", "_terms")

    def __init__(self, parent: MonomialAlgebra, coefficients: Mapping[Monomial, object]):
        p = parent.p
        terms = {}
        for e, x in coefficients.items():
            e = tuple(int(k) for k in e)
            if e not in parent._index:
                raise KeyError(f"{e} is not a basis monomial of {parent!r}")
            v = (int(x) if not isinstance(x, Scalar) else parent.field(x).value) % p
            if v:
                terms[e] = (terms.get(e, 0) + v) % p
        object.__setattr__(self, "parent", parent)
        object.__setattr__(self, "_terms", {e: v for e, v in terms.items() if v})

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @property
    def coefficients(self) -> dict[Monomial, Scalar]:
        f = self.parent.field
        return {e: f(v) for e, v in self._terms.items()}

    def coefficient(self, e: Monomial) -> Scalar:
        return self.parent.field(self._terms.get(tuple(e), 0))

    def to_vector(self) -> np.ndarray:
        v = np.zeros(self.parent.dim, dtype=np.int64)
        for e, x in self._terms.items():
            v[self.parent._index[e]] = x
        return v

    def is_zero(self) -> bool:
        return not self._terms

    def is_homogeneous(self) -> bool:
        return len({e for e in self._terms}) <= 1

    def degree(self) -> tuple:
        """Degree of a nonzero homogeneous element."""
        if not self._terms or not self.is_homogeneous():
            raise ValueError("degree needs a nonzero homogeneous element")
        return next(iter(self._terms))

    def _check(self, other):
        if isinstance(other, AlgebraElement):
            if other.parent is not self.parent:
                raise MixedParents("elements belong to different algebras")
            return other
        return None

    def __add__(self, other):
        if self._check(other) is None:
            return NotImplemented
        out = dict(self._terms)
        for e, v in other._terms.items():
            out[e] = out.get(e, 0) + v
        return AlgebraElement(self.parent, out)

    def __neg__(self):
        return AlgebraElement(self.parent, {e: -v for e, v in self._terms.items()})

    def __sub__(self, other):
        if self._check(other) is None:
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.parent.multiply(self, other)
        if isinstance(other, (int, np.integer, Scalar)):
            k = int(self.parent.field(other).value if isinstance(other, Scalar) else other)
            return AlgebraElement(self.parent, {e: v * k for e, v in self._terms.items()})
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, np.integer, Scalar)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        out = self.parent.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.parent is other.parent and self._terms == other._terms
        if isinstance(other, (int, np.integer)) and int(other) == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash((id(self.parent), frozenset(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms):
            mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k) or "1"
            parts.append(f"{self._terms[e]}*{mono}")
        return " + ".join(parts)


# -- Frobenius structure ------------------------------------------------------


@dataclass(frozen=True)
class FrobeniusForm:
    """Linear functional reading off the coefficient of the socle monomial
    ``x_1^{a_1-1} ... x_c^{a_c-1}``."""

    parent: MonomialAlgebra

    @property
    def socle_monomial(self) -> Monomial:
        return tuple(x - 1 for x in self.parent.a)

    @property
    def socle_index(self) -> int:
        return self.parent.dim - 1

    def __call__(self, y: AlgebraElement) -> Scalar:
        return y.coefficient(self.socle_monomial)

    def gram_matrix(self) -> np.ndarray:
        """``G[u, v] = phi(basis[u] * basis[v])``."""
        A = self.parent
        return np.where(A.mul_index == self.socle_index, A.mul_coef, 0)

    def is_nondegenerate(self) -> bool:
        A = self.parent
        return linalg.rank(self.gram_matrix(), A.p) == A.dim


def frobenius_form(A: MonomialAlgebra) -> FrobeniusForm:
    form = FrobeniusForm(A)
    if not form.is_nondegenerate():
        raise InvariantViolation("Frobenius pairing is degenerate")
    return form


@dataclass(frozen=True)
class NakayamaMap:
    """Diagonal automorphism ``x_w -> gamma_w x_w``."""

    parent: MonomialAlgebra
    gamma: tuple  # of Scalar

    @cached_property
    def scaling(self) -> np.ndarray:
        """Factor by which each basis monomial is multiplied."""
        A, p = self.parent, self.parent.p
        out = np.ones(A.dim, dtype=np.int64)
        for w, g in enumerate(self.gamma):
            pw = np.array([pow(g.value, k, p) for k in range(A.a[w])], dtype=np.int64)
            out = out * pw[A.degrees[:, w]] % p
        return out

    def __call__(self, y: AlgebraElement) -> AlgebraElement:
        A = self.parent
        s = self.scaling
        return AlgebraElement(A, {e: v * int(s[A._index[e]]) for e, v in y._terms.items()})

    def is_identity(self) -> bool:
        return all(g == 1 for g in self.gamma)

    def satisfies_identity(self, form: FrobeniusForm) -> bool:
        """Check ``phi(l x) = phi(nu(x) l)`` for every pair of basis monomials."""
        G = form.gram_matrix()  # G[l, x] = phi(l x)
        # phi(nu(x) l) = scaling[x] * G[x, l]
        rhs = (self.scaling[:, None] * G) % self.parent.p
        return bool(np.array_equal(G, rhs.T))

    def is_multiplicative(self) -> bool:
        """``nu(u v) = nu(u) nu(v)`` on all pairs of basis monomials."""
        A, s = self.parent, self.scaling
        ok = A.mul_index >= 0
        lhs = s[np.where(ok, A.mul_index, 0)]
        rhs = (s[:, None] * s[None, :]) % A.p
        return bool(np.all(~ok | (lhs == rhs)))


def nakayama(A: MonomialAlgebra) -> NakayamaMap:
    """Nakayama automorphism for the socle-coefficient form:
    ``gamma_w = prod_i q_iw^{a_i - 1}``."""
    q, p = A.commutation, A.p
    gamma = []
    for w in range(A.ngens):
        g = 1
        for i in range(A.ngens):
            g = g * pow(int(q[i, w]), A.a[i] - 1, p) % p
        gamma.append(A.field(g))
    nu = NakayamaMap(A, tuple(gamma))
    if not nu.satisfies_identity(FrobeniusForm(A)):
        raise InvariantViolation("closed-form Nakayama map fails phi(l x) = phi(nu(x) l)")
    return nu


def is_symmetric(A: MonomialAlgebra) -> bool:
    return nakayama(A).is_identity()


# -- constructions ------------------------------------------------------------


def opposite(A: MonomialAlgebra) -> QciAlgebra:
    """``A^op``: same exponents, transposed commutation matrix."""
    return QciAlgebra(A.field, A.commutation.T.copy(), A.a)


def embed_structure_matches(big: MonomialAlgebra, small: MonomialAlgebra, positions: Sequence[int]) -> bool:
    """Whether generators ``positions`` (ascending) of ``big`` reproduce
    the structure constants of ``small`` under ``x^e -> x^{e placed at positions}``."""
    positions = list(positions)
    if sorted(positions) != positions or len(positions) != small.ngens:
        raise ValueError("positions must be ascending, one per generator of small")
    if [big.a[k] for k in positions] != list(small.a):
        return False
    emb = np.zeros(small.dim, dtype=np.int64)
    for i, e in enumerate(small.basis):
        full = [0] * big.ngens
        for k, x in zip(positions, e):
            full[k] = x
        emb[i] = big.index(full)
    bi = big.mul_index[np.ix_(emb, emb)]
    bc = big.mul_coef[np.ix_(emb, emb)]
    si, sc = small.mul_index, small.mul_coef
    mapped = np.where(si >= 0, emb[np.where(si >= 0, si, 0)], -1)
    if not np.array_equal(bi, mapped):
        return False
    return bool(np.all((si < 0) | (bc == sc)))


def symmetric_double(A: MonomialAlgebra) -> QciAlgebra:
    """Symmetric QCI on ``2c`` generators containing ``A`` on its first ``c``.

    Commutation matrix ``[[q, q^T], [q^T, q]]``, exponents ``a`` twice.
    """
    q, c = A.commutation, A.ngens
    block = np.block([[q, q.T], [q.T, q]])
    D = QciAlgebra(A.field, block, A.a + A.a)

    cases = np.ones((2 * c, 2 * c), dtype=np.int64)
    for u in range(2 * c):
        for v in range(2 * c):
            if u < c and v < c:
                cases[u, v] = q[u, v]
            elif u >= c and v < c:
                cases[u, v] = q[v, u - c]
            elif u < c and v >= c:
                cases[u, v] = q[v - c, u]
            else:
                cases[u, v] = q[u - c, v - c]
    if not np.array_equal(cases, D.q):
        raise InvariantViolation("block matrix disagrees with the commutator case table")
    if not is_symmetric(D):
        raise InvariantViolation("symmetric double is not symmetric")
    if not embed_structure_matches(D, A, range(c)):
        raise InvariantViolation("first c generators do not reproduce the original algebra")
    return D


# -- canned families ----------------------------------------------------------


def truncated_polynomial(a: Sequence[int], p: int) -> QciAlgebra:
    """Commutative ``k[x_1..x_c]/(x_i^{a_i})``."""
    c = len(a)
    return QciAlgebra(make_field(p), np.ones((c, c), dtype=np.int64), a)


def exterior_algebra(c: int, p: int) -> QciAlgebra:
    """Exterior algebra on ``c`` generators: ``a_i = 2``, ``q_ij = -1``."""
    if c < 1:
        raise BadParams("c must be >= 1")
    q = np.full((c, c), p - 1, dtype=np.int64)
    np.fill_diagonal(q, 1)
    return QciAlgebra(make_field(p), q % p, [2] * c)


def root_of_unity_algebra(c: int, a: int, q: int, p: int) -> QciAlgebra:
    """``X_i^a = 0`` and ``X_i X_j = q X_j X_i`` for ``i < j``, with ``q^{a-1} = 1``."""
    if c < 2 or a < 2:
        raise BadParams("c and a must both be at least 2")
    F = make_field(p)
    q = q % p
    if q == 0 or pow(q, a - 1, p) != 1:
        raise BadParams(f"need q^(a-1) = 1 in F_{p}, got q={q}")
    qi = F.inv(q)
    m = np.ones((c, c), dtype=np.int64)
    m[np.triu_indices(c, 1)] = q
    m[np.tril_indices(c, -1)] = qi
    return QciAlgebra(F, m, [a] * c)


def random_qci(field: PrimeField, rng: np.random.Generator, max_dim: int = 64, max_c: int = 4,
               max_a: int = 4) -> QciAlgebra:
    """Random QCI with ``dim <= max_dim``; commutators uniform over ``F_p^*``."""
    while True:
        c = int(rng.integers(1, max_c + 1))
        a = [int(x) for x in rng.integers(2, max_a + 1, size=c)]
        if int(np.prod(a)) <= max_dim:
            break
    p = field.p
    q = np.ones((c, c), dtype=np.int64)
    for i in range(c):
        for j in range(i + 1, c):
            v = int(rng.integers(1, p))
            q[i, j] = v
            q[j, i] = field.inv(v)
    return QciAlgebra(field, q, a)


def commutator_orders(A: MonomialAlgebra) -> list[list[int]]:
    q = A.commutation
    return [[A.field.order(int(x)) for x in row] for row in q]


def all_roots_of_unity(A: MonomialAlgebra) -> bool:
    # every nonzero element of a finite field has finite order
    return all(int(x) % A.p != 0 for x in np.ravel(A.commutation))


def algebra_from_json(data: Mapping) -> QciAlgebra:
    return QciAlgebra.from_json(data)

