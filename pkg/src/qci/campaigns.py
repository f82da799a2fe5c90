"""Verification campaigns and their machine-readable reports.

A campaign is a list of independent cases; each case is a pure function of
``(spec, index)``, so reruns with the same spec are byte-identical and cases
can be farmed out to worker processes without changing the report.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import algebra as alg
from .algebra import QciAlgebra, is_symmetric, nakayama, symmetric_double
from .errors import QciError, ResourceLimit, SpecParse
from .field import make_field
from .homology import (
    VIOLATION,
    Budget,
    bar_ext_oracle,
    ext_symmetry_check,
    hochschild_dims,
    kunneth_compare,
)
from .module import cyclic_quotient, random_graded_module, regular_module, trivial_module
from .twist import TwistMap, qci_decomposition_check, split_factors, standard_twist

CAMPAIGNS = ("nakayama", "double", "decompose", "kunneth", "ext-symmetry", "hochschild")


@dataclass(frozen=True)
class ExperimentSpec:
    campaign: str
    algebra: Optional[dict] = None  # JSON algebra; None selects the built-in corpus
    window: int = 10
    corpus: int = 50
    seed: int = 0
    budget_dim: int = 64
    primes: tuple = (5, 13)

    def __post_init__(self):
        if self.campaign not in CAMPAIGNS:
            raise SpecParse(f"unknown campaign {self.campaign!r}; choose from {', '.join(CAMPAIGNS)}")
        if self.window < 1:
            raise SpecParse("window must be >= 1")
        if self.corpus < 1:
            raise SpecParse("corpus size must be >= 1")
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentSpec":
        known = {"campaign", "algebra", "window", "corpus", "seed", "budget_dim", "primes"}
        extra = set(data) - known
        if extra:
            raise SpecParse(f"unknown spec keys: {sorted(extra)}")
        if "campaign" not in data:
            raise SpecParse("spec needs a 'campaign'")
        try:
            return cls(**data)
        except TypeError as exc:
            raise SpecParse(str(exc)) from exc

    def to_json(self) -> dict:
        out = asdict(self)
        out["primes"] = list(self.primes)
        return out


@dataclass
class Report:
    spec: ExperimentSpec
    cases: list = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(1 for c in self.cases if c["status"] == "violation")

    @property
    def verdict(self) -> str:
        return "PASS" if self.violations == 0 else "FAIL"

    def summary(self) -> dict:
        counts = Counter(c["status"] for c in self.cases)
        primes = sorted({c["provenance"]["p"] for c in self.cases if "provenance" in c})
        return {
            "campaign": self.spec.campaign,
            "cases": len(self.cases),
            "status_counts": dict(sorted(counts.items())),
            "violations": self.violations,
            "primes": primes,
            "verdict": self.verdict,
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps({"spec": self.spec.to_json()}, sort_keys=True)]
        lines += [json.dumps(c, sort_keys=True) for c in self.cases]
        lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        rows = [f"campaign {self.spec.campaign}  seed {self.spec.seed}  window {self.spec.window}"]
        for c in self.cases:
            rows.append(f"  case {c['case']:>4}  {c['status']:<15} {c.get('note', '')}")
        s = self.summary()
        rows.append(f"verdict {s['verdict']}: {s['violations']} violation(s) in {s['cases']} case(s)")
        return "\n".join(rows) + "\n"


def provenance(A) -> dict:
    return {
        "p": A.p,
        "q_orders": alg.commutator_orders(A),
        "roots_of_unity": alg.all_roots_of_unity(A),
        "symmetric": is_symmetric(A),
    }


def _rng(spec: ExperimentSpec, index: int, salt: int = 0) -> np.random.Generator:
    return np.random.default_rng([spec.seed, index, salt])


def _given_algebra(spec: ExperimentSpec) -> Optional[QciAlgebra]:
    return QciAlgebra.from_json(spec.algebra) if spec.algebra is not None else None


def _corpus_algebra(spec: ExperimentSpec, index: int, max_dim: Optional[int] = None, min_c: int = 1) -> QciAlgebra:
    given = _given_algebra(spec)
    if given is not None:
        return given
    rng = _rng(spec, index, 1)
    field_ = make_field(spec.primes[index % len(spec.primes)])
    max_dim = spec.budget_dim if max_dim is None else max_dim
    while True:
        A = alg.random_qci(field_, rng, max_dim=max_dim, max_c=6)
        if A.c >= min_c:
            return A


# -- algebraic campaigns --------------------------------------------------------


def _case_nakayama(spec, i):
    A = _corpus_algebra(spec, i)
    nu = nakayama(A)
    form = alg.frobenius_form(A)
    checks = {
        "identity": nu.satisfies_identity(form),
        "multiplicative": nu.is_multiplicative(),
        "gram_nondegenerate": form.is_nondegenerate(),
    }
    return A, {"algebra": A.to_json(), "gamma": [g.value for g in nu.gamma], "checks": checks}, all(checks.values())


def _commutator_values(q: np.ndarray) -> Counter:
    return Counter(int(x) for x in np.ravel(q))


def double_commutator_check(A: QciAlgebra, D: QciAlgebra) -> dict:
    """Compare commutators of ``A`` and its double.

    Each of the four ``c x c`` blocks of the double's matrix carries exactly
    the multiset of ``A``'s matrix, so the diagonal blocks and the
    off-diagonal blocks each hold it twice; as sets the commutators agree.
    """
    c = A.c
    base = _commutator_values(A.q)
    diag = _commutator_values(D.q[:c, :c]) + _commutator_values(D.q[c:, c:])
    off = _commutator_values(D.q[:c, c:]) + _commutator_values(D.q[c:, :c])
    doubled = Counter({k: 2 * v for k, v in base.items()})
    return {
        "value_sets_equal": set(_commutator_values(D.q)) == set(base),
        "diagonal_blocks_doubled": diag == doubled,
        "offdiagonal_blocks_doubled": off == doubled,
    }


def _case_double(spec, i):
    A = _corpus_algebra(spec, i, max_dim=min(spec.budget_dim, 8))
    D = symmetric_double(A)
    checks = {
        "symmetric": is_symmetric(D),
        "subalgebra": alg.embed_structure_matches(D, A, range(A.c)),
        **double_commutator_check(A, D),
    }
    return A, {"algebra": A.to_json(), "double": D.to_json(), "checks": checks}, all(checks.values())


def proper_splits(c: int) -> list[list[int]]:
    return [[i for i in range(c) if mask >> i & 1] for mask in range(1, 2**c - 1)]


def _case_decompose(spec, i):
    A = _corpus_algebra(spec, i, min_c=2)
    if A.c < 2:
        return A, {"algebra": A.to_json(), "note": "c = 1 has no proper split"}, None
    results = {",".join(str(k + 1) for k in I): qci_decomposition_check(A, I) for I in proper_splits(A.c)}
    ok = all(results.values())
    return A, {"algebra": A.to_json(), "splits": results, "note": f"{len(results)} splits"}, ok


def center_dimension(A) -> int:
    from . import linalg

    eqs = [(A.left_matrix(g) - A.right_matrix(g)) % A.p for g in A.gen_indices]
    return linalg.nullspace(np.vstack(eqs), A.p).shape[1]


def _case_hochschild(spec, i):
    A = _corpus_algebra(spec, i, max_dim=min(spec.budget_dim, 8))
    # the enveloping algebra has dimension dim(A)^2
    hh = hochschild_dims(A, spec.window, Budget(max_algebra_dim=spec.budget_dim**2))
    checks = {"hh0_is_center": hh.dims[0] == center_dimension(A)}
    record = {"algebra": A.to_json(), "hochschild": hh.to_json(), "checks": checks}
    if A.dim <= 3:
        from .twist import enveloping_algebra

        _, Amod = enveloping_algebra(A)
        w = min(spec.window, 2)
        bar = bar_ext_oracle(Amod, Amod, w)
        checks["bar_oracle_agrees"] = list(bar.dims) == list(hh.dims[: w + 1])
    return A, record, all(checks.values())


# -- homological campaigns ------------------------------------------------------

KUNNETH_FACTORS = (((2,), None), ((3,), None), ((4,), None), ((2, 2), "q"))


def _small_factor(rng, field_) -> QciAlgebra:
    a, kind = KUNNETH_FACTORS[int(rng.integers(len(KUNNETH_FACTORS)))]
    c = len(a)
    q = np.ones((c, c), dtype=np.int64)
    if kind == "q":
        v = int(rng.integers(1, field_.p))
        q[0, 1], q[1, 0] = v, field_.inv(v)
    return QciAlgebra(field_, q, a)


def _case_kunneth(spec, i):
    rng = _rng(spec, i, 2)
    given = _given_algebra(spec)
    if given is not None and given.c >= 2:
        splits = proper_splits(given.c)
        I = splits[i % len(splits)]
        L, R = split_factors(given, I)
        t = standard_twist(given, I)
        A = given
    else:
        field_ = make_field(spec.primes[i % len(spec.primes)])
        L, R = _small_factor(rng, field_), _small_factor(rng, field_)
        t = TwistMap(field_, rng.integers(1, field_.p, size=(L.c, R.c)))
        A = L
    seeds = [int(s) for s in rng.integers(0, 2**31, size=4)]
    M1, M2 = (random_graded_module(L, s, max_generators=2, max_relations=2) for s in seeds[:2])
    N1, N2 = (random_graded_module(R, s, max_generators=2, max_relations=2) for s in seeds[2:])
    W = min(spec.window, 4) if spec.algebra is None else spec.window
    res = kunneth_compare(M1, M2, N1, N2, t, W, Budget(max_algebra_dim=spec.budget_dim))
    record = {
        "left": L.to_json(),
        "right": R.to_json(),
        "twist": t.to_json(),
        "modules": {"M1": M1.to_json(), "M2": M2.to_json(), "N1": N1.to_json(), "N2": N2.to_json()},
        "product_ext": res.product.to_json(),
        "left_ext": res.left.to_json(),
        "right_ext": res.right.to_json(),
        "expected": res.expected,
    }
    return A, record, res.holds


def symmetric_corpus() -> list[QciAlgebra]:
    """Symmetric QCIs with root-of-unity commutators."""
    return [
        alg.exterior_algebra(3, 5),
        alg.root_of_unity_algebra(2, 3, 4, 5),
        alg.root_of_unity_algebra(2, 4, 2, 7),
        alg.root_of_unity_algebra(3, 2, 1, 7),
        alg.truncated_polynomial([2, 3], 5),
    ]


def nonsymmetric_corpus() -> list[QciAlgebra]:
    F5, F7 = make_field(5), make_field(7)
    return [
        alg.exterior_algebra(2, 5),
        QciAlgebra(F5, [[1, 2], [3, 1]], [2, 3]),
        QciAlgebra(F7, [[1, 3], [5, 1]], [3, 3]),
        QciAlgebra(F7, [[1, 2, 3], [4, 1, 5], [5, 3, 1]], [2, 2, 2]),
    ]


def structured_modules(A) -> list:
    """Trivial, regular and monomial cyclic modules ``A / (x_i^k)``, ``A / (x_i, x_j)``."""
    mods = [trivial_module(A), regular_module(A)]
    for i in range(A.ngens):
        for k in range(1, A.a[i]):
            mods.append(cyclic_quotient(A, [A.gen(i) ** k]))
    for i in range(A.ngens):
        for j in range(i + 1, A.ngens):
            mods.append(cyclic_quotient(A, [A.gen(i), A.gen(j)]))
    return mods


class ModulePool:
    """Structured plus random modules over one algebra, built once per run so
    resolutions are shared between the cases that reuse a module."""

    def __init__(self, A, seed: int, n_random: int, graded: bool, ungraded: bool):
        self.algebra = A
        self.modules = structured_modules(A) if graded else []
        rng = np.random.default_rng([seed, 7])
        for k in range(n_random):
            graded_k = graded and (not ungraded or k % 2 == 0)
            s = int(rng.integers(0, 2**31))
            self.modules.append(random_graded_module(A, s, graded=graded_k, min_relations=1))


_POOLS: dict = {}


def _pool(key, factory):
    if key not in _POOLS:
        if len(_POOLS) > 32:
            _POOLS.clear()
        _POOLS[key] = factory()
    return _POOLS[key]


def ext_symmetry_algebras(spec: ExperimentSpec) -> list[QciAlgebra]:
    given = _given_algebra(spec)
    if given is not None:
        return [given]
    return symmetric_corpus() + nonsymmetric_corpus()


def _case_ext_symmetry(spec, i):
    algebras = ext_symmetry_algebras(spec)
    k = i % len(algebras)
    A = algebras[k]
    sym = is_symmetric(A)
    key = (json.dumps(A.to_json(), sort_keys=True), spec.seed, spec.corpus)
    per_alg = max(4, min(24, spec.corpus // len(algebras) + 2))
    pool = _pool(key, lambda: ModulePool(A, spec.seed * 1000 + k, per_alg, graded=True, ungraded=sym))
    rng = _rng(spec, i, 3)
    mods = pool.modules
    a, b = (int(x) for x in rng.integers(0, len(mods), size=2))
    M, N = mods[a], mods[b]
    v = ext_symmetry_check(M, N, spec.window, Budget(max_algebra_dim=spec.budget_dim))
    record = {
        "algebra": A.to_json(),
        "M": M.to_json(),
        "N": N.to_json(),
        **v.to_json(),
        "note": v.verdict + ("" if v.hypotheses["within_hypotheses"] else " (outside theorem hypotheses)"),
    }
    bad = v.verdict == VIOLATION and v.hypotheses["within_hypotheses"]
    return A, record, not bad


CASE_RUNNERS: dict[str, Callable] = {
    "nakayama": _case_nakayama,
    "double": _case_double,
    "decompose": _case_decompose,
    "kunneth": _case_kunneth,
    "ext-symmetry": _case_ext_symmetry,
    "hochschild": _case_hochschild,
}


def run_case(spec: ExperimentSpec, index: int) -> dict:
    runner = CASE_RUNNERS[spec.campaign]
    try:
        A, record, ok = runner(spec, index)
    except ResourceLimit as exc:
        return {"case": index, "status": "resource-limit", "note": str(exc)}
    except QciError as exc:
        return {"case": index, "status": "violation", "note": f"{type(exc).__name__}: {exc}"}
    status = "skipped" if ok is None else ("pass" if ok else "violation")
    out = {"case": index, "status": status, "provenance": provenance(A), **record}
    out.setdefault("note", "")
    return out


def run_campaign(spec: ExperimentSpec, jobs: int = 1) -> Report:
    """Run every case; ``jobs > 1`` uses worker processes, order is by case index."""
    indices = range(spec.corpus)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            cases = list(ex.map(run_case, [spec] * spec.corpus, indices))
    else:
        cases = [run_case(spec, i) for i in indices]
    return Report(spec, sorted(cases, key=lambda c: c["case"]))
