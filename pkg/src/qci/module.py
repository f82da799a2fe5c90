"""Finite-dimensional modules given by generator-action matrices.

Convention: ``actions[i][r, s]`` is the coefficient of basis vector ``r`` in
``x_i . v_s`` (columns are inputs).  A module over a ``MonomialAlgebra`` is
validated on construction: the action must extend to an algebra
homomorphism, and when degrees are supplied every generator must raise the
degree of each basis vector by its unit vector.
"""

from __future__ import annotations

from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import linalg
from .algebra import AlgebraElement, MonomialAlgebra, opposite
from .errors import InhomogeneousRelation, InvariantViolation, ModuleRelationError


class GradedModule:
    """Left module over ``parent``; ``degrees is None`` marks it ungraded."""

    def __init__(self, parent: MonomialAlgebra, actions: Sequence, degrees=None):
        self.parent = parent
        p = parent.p
        acts = [np.asarray(m, dtype=np.int64) % p for m in actions]
        if len(acts) != parent.ngens:
            raise ModuleRelationError(f"need {parent.ngens} action matrices, got {len(acts)}")
        d = acts[0].shape[0] if acts else 0
        for m in acts:
            if m.shape != (d, d):
                raise ModuleRelationError("action matrices must be square and of equal size")
            m.setflags(write=False)
        self.actions = acts
        self.dim = d
        if degrees is not None:
            degrees = np.asarray(degrees, dtype=np.int64).reshape(d, parent.ngens)
            degrees.setflags(write=False)
        self.degrees = degrees
        self._check_relations()
        if degrees is not None:
            self._check_grading()

    def __repr__(self):
        kind = "graded" if self.is_graded else "ungraded"
        return f"GradedModule(dim={self.dim}, {kind}, over {self.parent!r})"

    @property
    def is_graded(self) -> bool:
        return self.degrees is not None

    @cached_property
    def basis_actions(self) -> np.ndarray:
        """``R[b]`` = matrix by which basis monomial ``b`` acts."""
        A, p = self.parent, self.parent.p
        R = np.zeros((A.dim, self.dim, self.dim), dtype=np.int64)
        R[0] = np.eye(self.dim, dtype=np.int64)
        for b, e in enumerate(A.basis[1:], start=1):
            i = max(k for k, x in enumerate(e) if x)
            prev = list(e)
            prev[i] -= 1
            R[b] = linalg.matmul(R[A.index(prev)], self.actions[i], p)
        R.setflags(write=False)
        return R

    def _check_relations(self):
        A, p = self.parent, self.parent.p
        R = self.basis_actions
        for i, g in enumerate(A.gen_indices):
            lhs = linalg.matmul(self.actions[i], R, p)
            idx = A.mul_index[g]
            ok = idx >= 0
            rhs = np.zeros_like(lhs)
            rhs[ok] = (A.mul_coef[g][ok][:, None, None] * R[idx[ok]]) % p
            if not np.array_equal(lhs, rhs):
                raise ModuleRelationError(f"action of generator {i + 1} violates the algebra relations")

    def _check_grading(self):
        for i, m in enumerate(self.actions):
            r, s = np.nonzero(m)
            shift = self.degrees[r] - self.degrees[s]
            unit = np.zeros(self.parent.ngens, dtype=np.int64)
            unit[i] = 1
            if r.size and np.any(shift != unit):
                raise ModuleRelationError(f"generator {i + 1} does not act with degree e_{i + 1}")

    def act(self, a: AlgebraElement, v) -> np.ndarray:
        return linalg.matmul(self.action_matrix(a), np.asarray(v, dtype=np.int64), self.parent.p)

    def action_matrix(self, a: AlgebraElement) -> np.ndarray:
        if a.parent is not self.parent:
            raise ValueError("element from a different algebra")
        coeffs = a.to_vector()
        return np.tensordot(coeffs, self.basis_actions, axes=1) % self.parent.p

    def same_as(self, other: "GradedModule") -> bool:
        """Equal action matrices and degrees (matrix-level equality)."""
        if self.dim != other.dim or self.is_graded != other.is_graded:
            return False
        if not all(np.array_equal(x, y) for x, y in zip(self.actions, other.actions)):
            return False
        return not self.is_graded or np.array_equal(self.degrees, other.degrees)

    def to_json(self) -> dict:
        out = {"dim": self.dim, "actions": [m.tolist() for m in self.actions]}
        if self.is_graded:
            out["degrees"] = self.degrees.tolist()
        return out

    @classmethod
    def from_json(cls, parent: MonomialAlgebra, data: Mapping) -> "GradedModule":
        d = int(data["dim"])
        actions = [np.array(m, dtype=np.int64).reshape(d, d) for m in data["actions"]]
        return cls(parent, actions, data.get("degrees"))


class ModuleMap:
    """A homomorphism of modules, stored as a ``target.dim x source.dim`` matrix."""

    def __init__(self, source: GradedModule, target: GradedModule, matrix):
        if source.parent is not target.parent:
            raise ValueError("modules over different algebras")
        p = source.parent.p
        self.source, self.target = source, target
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(target.dim, source.dim) % p
        for rs, rt in zip(source.actions, target.actions):
            if not np.array_equal(linalg.matmul(self.matrix, rs, p), linalg.matmul(rt, self.matrix, p)):
                raise InvariantViolation("matrix does not intertwine the actions")


# -- standard modules ---------------------------------------------------------


def trivial_module(A: MonomialAlgebra) -> GradedModule:
    """The simple module ``k`` in degree 0."""
    return GradedModule(A, [np.zeros((1, 1), dtype=np.int64)] * A.ngens, np.zeros((1, A.ngens)))


def free_module(A: MonomialAlgebra, generators: Sequence = ((),)) -> GradedModule:
    """Free module with one generator per entry of ``generators`` (degrees).

    Basis vector ``j * dim A + m`` is monomial ``m`` times generator ``j``.
    """
    gens = [tuple(g) if len(tuple(g)) else (0,) * A.ngens for g in generators]
    k = len(gens)
    eye = np.eye(k, dtype=np.int64)
    actions = [np.kron(eye, L) for L in A.generator_matrices]
    degrees = np.vstack([A.degrees + np.array(g, dtype=np.int64) for g in gens]) if k else np.zeros((0, A.ngens))
    return GradedModule(A, actions, degrees)


def regular_module(A: MonomialAlgebra) -> GradedModule:
    return free_module(A, [(0,) * A.ngens])


def direct_sum(*modules: GradedModule) -> GradedModule:
    A = modules[0].parent
    dims = [M.dim for M in modules]
    total = sum(dims)
    actions = []
    for i in range(A.ngens):
        m = np.zeros((total, total), dtype=np.int64)
        off = 0
        for M in modules:
            m[off : off + M.dim, off : off + M.dim] = M.actions[i]
            off += M.dim
        actions.append(m)
    graded = all(M.is_graded for M in modules)
    degrees = np.vstack([M.degrees for M in modules]) if graded else None
    return GradedModule(A, actions, degrees)


def _free_vector(A: MonomialAlgebra, column) -> np.ndarray:
    """Coordinates in ``A^g`` of a column of algebra elements (or a raw vector)."""
    if isinstance(column, np.ndarray) and column.dtype != object:
        return column.astype(np.int64) % A.p
    parts = []
    for x in column:
        if isinstance(x, AlgebraElement):
            parts.append(x.to_vector())
        else:
            parts.append(A.one().to_vector() * int(x) % A.p)
    return np.concatenate(parts)


def submodule_span(F: GradedModule, vectors: np.ndarray) -> np.ndarray:
    """Columns spanning the submodule of ``F`` generated by the columns of ``vectors``."""
    A = F.parent
    vectors = np.asarray(vectors, dtype=np.int64).reshape(F.dim, -1)
    if vectors.shape[1] == 0:
        return vectors
    cols = [linalg.matmul(R, vectors, A.p) for R in F.basis_actions]
    return linalg.column_basis(np.hstack(cols), A.p)


def quotient_module(F: GradedModule, S: np.ndarray) -> tuple[GradedModule, np.ndarray]:
    """``F / S`` for a submodule spanned by the columns of ``S``.

    The quotient's basis is the set of standard basis vectors of ``F`` picked
    greedily to complement ``S``.  Returns the module and the projection
    matrix from ``F`` onto the quotient coordinates.
    """
    p = F.parent.p
    S = linalg.column_basis(np.asarray(S, dtype=np.int64).reshape(F.dim, -1), p)
    s = S.shape[1]
    chosen = [c - s for c in linalg.independent_columns(np.hstack([S, np.eye(F.dim, dtype=np.int64)]), p, start=s)]
    E = np.eye(F.dim, dtype=np.int64)[:, chosen]
    inv = linalg.inverse(np.hstack([S, E]), p)
    P = inv[s:, :]
    actions = [linalg.matmul(P, m[:, chosen], p) for m in F.actions]
    degrees = F.degrees[chosen] if F.is_graded else None
    return GradedModule(F.parent, actions, degrees), P


def module_from_presentation(A: MonomialAlgebra, generators: Sequence, relations: Sequence,
                             graded: bool = True) -> GradedModule:
    """Cokernel of ``A^r -> A^g`` sending basis vectors to ``relations``.

    Each relation is a column of ``g`` algebra elements (or a coordinate
    vector of length ``g * dim A``).  With ``graded=True`` every relation must
    be homogeneous and the result carries degrees.
    """
    F = free_module(A, generators)
    if not relations:
        return F if graded else GradedModule(A, F.actions)
    R = np.column_stack([_free_vector(A, r) for r in relations])
    if graded:
        for j in range(R.shape[1]):
            degs = {tuple(d) for d in F.degrees[np.flatnonzero(R[:, j])]}
            if len(degs) > 1:
                raise InhomogeneousRelation(f"relation {j} mixes degrees {sorted(degs)}")
    else:
        F = GradedModule(A, F.actions)
    Q, _ = quotient_module(F, submodule_span(F, R))
    return Q


def cyclic_quotient(A: MonomialAlgebra, elements: Sequence[AlgebraElement], graded: bool = True) -> GradedModule:
    """``A / (left ideal generated by elements)``."""
    return module_from_presentation(A, [(0,) * A.ngens], [[x] for x in elements], graded=graded)


def dualize(M: GradedModule) -> GradedModule:
    """``Hom_k(M, k)`` as a left module over the opposite algebra."""
    Aop = opposite(M.parent)
    degrees = -M.degrees if M.is_graded else None
    return GradedModule(Aop, [m.T.copy() for m in M.actions], degrees)


def random_graded_module(A: MonomialAlgebra, seed: int, max_generators: int = 2, max_relations: int = 3,
                         graded: bool = True, degree_spread: int = 2, min_relations: int = 0) -> GradedModule:
    """Sample ``F / S`` with ``F`` free on random degrees and ``S`` generated by
    random relations inside the radical of ``F``.

    Graded sampling draws each relation from a single degree component, so
    the result is graded by construction.  Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    p = A.p
    g = int(rng.integers(1, max_generators + 1))
    gdeg = [tuple(int(x) for x in rng.integers(0, degree_spread + 1, size=A.ngens)) for _ in range(g)]
    F = free_module(A, gdeg)
    nrel = int(rng.integers(min(min_relations, max_relations), max_relations + 1))
    # radical of F: every basis vector except the generators themselves
    radical = np.array([j * A.dim + m for j in range(g) for m in range(1, A.dim)], dtype=np.int64)
    rels = []
    for _ in range(nrel):
        if radical.size == 0:
            break
        v = np.zeros(F.dim, dtype=np.int64)
        lead = int(rng.choice(radical))
        if graded:
            same = radical[np.all(F.degrees[radical] == F.degrees[lead], axis=1)]
            v[same] = rng.integers(0, p, size=same.size)
        else:
            k = int(rng.integers(1, min(4, radical.size) + 1))
            v[rng.choice(radical, size=k, replace=False)] = rng.integers(1, p, size=k)
        v[lead] = int(rng.integers(1, p))
        rels.append(v)
    if not graded:
        F = GradedModule(A, F.actions)
    if not rels:
        return F
    Q, _ = quotient_module(F, submodule_span(F, np.column_stack(rels)))
    return Q


def hom_space(M: GradedModule, N: GradedModule) -> np.ndarray:
    """Basis of ``Hom_A(M, N)``; column ``k`` is a row-major ``N.dim x M.dim`` matrix."""
    p = M.parent.p
    eqs = [
        (np.kron(np.eye(N.dim, dtype=np.int64), rm.T) - np.kron(rn, np.eye(M.dim, dtype=np.int64))) % p
        for rm, rn in zip(M.actions, N.actions)
    ]
    if not eqs:
        return np.eye(N.dim * M.dim, dtype=np.int64)
    return linalg.nullspace(np.vstack(eqs), p)


def hom_dimension(M: GradedModule, N: GradedModule) -> int:
    return hom_space(M, N).shape[1]
