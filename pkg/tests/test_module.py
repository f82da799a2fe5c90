import numpy as np
import pytest
from hypothesis import given, strategies as st

from qci import linalg
from qci.algebra import QciAlgebra, exterior_algebra, opposite, random_qci, truncated_polynomial
from qci.errors import InhomogeneousRelation, InvariantViolation, ModuleRelationError
from qci.field import make_field
from qci.module import (
    GradedModule,
    ModuleMap,
    cyclic_quotient,
    direct_sum,
    dualize,
    free_module,
    hom_dimension,
    module_from_presentation,
    random_graded_module,
    regular_module,
    trivial_module,
)

import oracles

F5, F7 = make_field(5), make_field(7)
E2 = exterior_algebra(2, 5)


def test_trivial_module():
    for A in (E2, truncated_polynomial([3], 7), QciAlgebra(F7, [[1, 3], [5, 1]], [2, 3])):
        k = trivial_module(A)
        assert k.dim == 1 and all(not m.any() for m in k.actions)
        assert k.degrees.tolist() == [[0] * A.ngens]


def test_free_modules():
    A = QciAlgebra(F7, [[1, 3], [5, 1]], [2, 3])
    F1 = free_module(A, [(0, 0)])
    assert F1.same_as(regular_module(A)) and F1.dim == A.dim
    F2 = free_module(A, [(0, 0), (1, 2)])
    assert F2.dim == 2 * A.dim
    assert F2.degrees[A.dim].tolist() == [1, 2]
    R = regular_module(E2)
    for i, m in enumerate(R.actions):
        for r, s in zip(*np.nonzero(m)):
            assert (R.degrees[r] - R.degrees[s]).tolist() == [int(k == i) for k in range(2)]


def test_module_relations_are_enforced():
    A = truncated_polynomial([2], 5)
    with pytest.raises(ModuleRelationError):
        GradedModule(A, [np.eye(2)])
    with pytest.raises(ModuleRelationError):
        # x_1 and x_2 of the exterior algebra must anticommute
        e21, e32 = np.zeros((3, 3), int), np.zeros((3, 3), int)
        e21[1, 0], e32[2, 1] = 1, 1
        GradedModule(E2, [e21, e32])
    with pytest.raises(ModuleRelationError):
        GradedModule(A, [np.array([[0, 0], [1, 0]])], degrees=[[0], [2]])
    with pytest.raises(ModuleRelationError):
        GradedModule(E2, [np.zeros((2, 2))])


def test_presentation_examples():
    A = truncated_polynomial([3], 7)
    x = A.gen(0)
    assert cyclic_quotient(A, [x]).dim == 1
    assert cyclic_quotient(A, [x * x]).dim == 2
    M = cyclic_quotient(E2, [E2.gen(0)])
    assert M.dim == 2
    assert M.actions[1].any() and not M.actions[0].any()


def test_inhomogeneous_relation():
    A = truncated_polynomial([3], 7)
    with pytest.raises(InhomogeneousRelation):
        cyclic_quotient(A, [A.gen(0) + A.gen(0) ** 2])
    assert cyclic_quotient(A, [A.gen(0) + A.gen(0) ** 2], graded=False).dim == 1


@given(st.sampled_from([3, 5]), st.integers(0, 2**32 - 1))
def test_quotient_dimension_is_corank(p, seed):
    """dim F/S = dim F - dim_k S where S is the k-span of A * relations."""
    rng = np.random.default_rng(seed)
    A = random_qci(make_field(p), rng, max_dim=8, max_c=2)
    g = int(rng.integers(1, 3))
    rels = [rng.integers(0, p, size=g * A.dim) for _ in range(int(rng.integers(1, 3)))]
    M = module_from_presentation(A, [(0,) * A.ngens] * g, rels, graded=False)
    F = free_module(A, [(0,) * A.ngens] * g)
    span = np.hstack([linalg.matmul(Rb, np.column_stack(rels), p) for Rb in F.basis_actions])
    assert M.dim == F.dim - linalg.rank(span, p)


def test_dualize():
    assert dualize(trivial_module(E2)).same_as(trivial_module(opposite(E2)))
    A = QciAlgebra(F7, [[1, 3], [5, 1]], [2, 3])
    D = dualize(regular_module(A))  # constructor checks the relations of A^op
    assert D.parent.same_structure(opposite(A))
    for seed in range(20):
        M = random_graded_module(A, seed)
        DD = dualize(dualize(M))
        assert all(np.array_equal(x, y) for x, y in zip(DD.actions, M.actions))
        assert np.array_equal(DD.degrees, M.degrees)


def test_random_module_determinism_and_free_case():
    A = QciAlgebra(F7, [[1, 3], [5, 1]], [2, 3])
    assert random_graded_module(A, 5).same_as(random_graded_module(A, 5))
    M = random_graded_module(A, 9, max_generators=1, max_relations=0)
    assert M.dim == A.dim


def test_random_modules_over_exterior_pass_invariants():
    for seed in range(100):
        M = random_graded_module(E2, seed, min_relations=1)
        assert M.is_graded
        GradedModule(E2, M.actions, M.degrees)
        N = random_graded_module(E2, seed, graded=False, min_relations=1)
        assert not N.is_graded
        GradedModule(E2, N.actions)


def test_hom_dimension_against_enumeration():
    """Count module maps ``k^{dN x dM}`` by brute force for tiny modules."""
    A = truncated_polynomial([2], 3)
    M = regular_module(A)
    N = cyclic_quotient(A, [A.gen(0)])
    for X, Y in ((M, M), (M, N), (N, M), (N, N)):
        count = 0
        for entries in oracles.all_vectors(3, X.dim * Y.dim):
            f = np.array(entries).reshape(Y.dim, X.dim)
            if all(not ((f @ rx - ry @ f) % 3).any() for rx, ry in zip(X.actions, Y.actions)):
                count += 1
        assert 3 ** hom_dimension(X, Y) == count


def test_module_map_checks_intertwining():
    A = truncated_polynomial([2], 5)
    R = regular_module(A)
    ModuleMap(R, R, np.array([[1, 0], [2, 1]]))  # right multiplication by 1 + 2x
    with pytest.raises(InvariantViolation):
        ModuleMap(R, R, np.array([[0, 1], [0, 0]]))


def test_direct_sum_and_json():
    A = QciAlgebra(F7, [[1, 3], [5, 1]], [2, 3])
    M = direct_sum(trivial_module(A), random_graded_module(A, 2))
    again = GradedModule.from_json(A, M.to_json())
    assert again.same_as(M)
    U = random_graded_module(A, 4, graded=False)
    assert "degrees" not in U.to_json()
    assert GradedModule.from_json(A, U.to_json()).same_as(U)
