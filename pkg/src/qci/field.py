"""Prime fields F_p and their elements.

Every coefficient in the package lives in some ``PrimeField``.  Bulk data
(structure constants, action matrices) is stored as ``numpy.int64`` arrays of
residues; ``Scalar`` is the value type used at API boundaries.
"""

from __future__ import annotations

from functools import cached_property, total_ordering

import numpy as np

from .errors import Inconsistent, NotPrime, ZeroElement
from . import linalg

# Residue products must fit in int64 during elimination.
MAX_MODULUS = 3_037_000_493


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class PrimeField:
    """The field of residues modulo a prime ``p``."""

    def __init__(self, p: int):
        p = int(p)
        if not _is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if p > MAX_MODULUS:
            raise NotPrime(f"modulus {p} too large for int64 elimination")
        self.p = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __str__(self):
        return f"F_{self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field != self:
                raise ValueError(f"{value!r} does not belong to {self}")
            return value
        return Scalar(int(value) % self.p, self)

    def __iter__(self):
        return (Scalar(v, self) for v in range(self.p))

    def __len__(self):
        return self.p

    @property
    def zero(self) -> "Scalar":
        return Scalar(0, self)

    @property
    def one(self) -> "Scalar":
        return Scalar(1, self)

    def inv(self, value: int) -> int:
        value = int(value) % self.p
        if value == 0:
            raise ZeroElement("0 has no inverse")
        return pow(value, self.p - 2, self.p)

    @cached_property
    def _group_order_factors(self) -> list[int]:
        return _prime_factors(self.p - 1)

    def order(self, value: int) -> int:
        """Multiplicative order of a nonzero residue."""
        value = int(value) % self.p
        if value == 0:
            raise ZeroElement("0 has no multiplicative order")
        n = self.p - 1
        for f in self._group_order_factors:
            while n % f == 0 and pow(value, n // f, self.p) == 1:
                n //= f
        return n

    def root_of_unity(self, n: int) -> "Scalar":
        """An element of exact multiplicative order ``n``.

        Raises ``ValueError`` unless ``n`` divides ``p - 1``.
        """
        if n < 1 or (self.p - 1) % n:
            raise ValueError(f"F_{self.p} has no element of order {n}")
        for g in range(1, self.p):
            if self.order(g) == self.p - 1:
                return Scalar(pow(g, (self.p - 1) // n, self.p), self)
        raise AssertionError("unreachable: F_p^* is cyclic")

    def array(self, values) -> np.ndarray:
        """Coerce nested ints/Scalars into an int64 residue array."""
        if isinstance(values, np.ndarray):
            return np.mod(values, self.p).astype(np.int64)
        stripped = _strip_scalars(values, self)
        return np.array(stripped, dtype=object).__mod__(self.p).astype(np.int64)


def _strip_scalars(values, field: PrimeField):
    if isinstance(values, Scalar):
        if values.field != field:
            raise ValueError(f"{values!r} does not belong to {field}")
        return values.value
    if isinstance(values, np.ndarray):
        return values
    if isinstance(values, (list, tuple)):
        return [_strip_scalars(v, field) for v in values]
    return int(values)


@total_ordering
class Scalar:
    """An immutable element of a ``PrimeField``."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        object.__setattr__(self, "value", int(value) % field.p)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise ValueError(f"cannot combine elements of {self.field} and {other.field}")
            return other.value
        if isinstance(other, (int, np.integer)):
            return int(other) % self.field.p
        return NotImplemented

    def _new(self, value: int) -> "Scalar":
        return Scalar(value, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._new(-self.value)

    def inverse(self) -> "Scalar":
        return self._new(self.field.inv(self.value))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(self.value * self.field.inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._new(o * self.field.inv(self.value))

    def __pow__(self, n: int):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        return self._new(pow(self.value, n, self.field.p))

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, np.integer)):
            return self.value == int(other) % self.field.p
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, Scalar):
            return self.value < other.value
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Scalar({self.value}, F_{self.field.p})"

    def __str__(self):
        return str(self.value)

    def is_zero(self) -> bool:
        return self.value == 0


def make_field(p: int) -> PrimeField:
    """Return ``F_p``; raises ``NotPrime`` for composite ``p``."""
    return PrimeField(p)


def multiplicative_order(x: Scalar) -> int:
    """Least ``n >= 1`` with ``x**n == 1``."""
    return x.field.order(x.value)


def solve_linear(A, mode: str = "rank", b=None, *, field: PrimeField | None = None):
    """Exact Gaussian elimination over a prime field.

    ``A`` is a matrix of ``Scalar`` (or plain ints together with ``field``).

    Returns:
        mode ``"rank"``: the rank as an int.
        mode ``"kernel"``: a list of basis vectors (tuples of ``Scalar``) of
        the null space ``{v : A v = 0}``.
        mode ``"solve"``: one solution of ``A x = b`` as a tuple of ``Scalar``;
        raises ``Inconsistent`` if none exists.
    """
    field = field or _find_field(A) or (b is not None and _find_field(b)) or None
    if field is None:
        raise ValueError("field must be given when A holds plain integers")
    rows = list(A)
    ncols = len(rows[0]) if rows else 0
    mat = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, row in enumerate(rows):
        mat[i] = [int(v) % field.p for v in row]
    p = field.p
    if mode == "rank":
        return linalg.rank(mat, p)
    if mode == "kernel":
        K = linalg.nullspace(mat, p)
        return [tuple(field(v) for v in K[:, j]) for j in range(K.shape[1])]
    if mode == "solve":
        if b is None:
            raise ValueError("mode='solve' needs a right-hand side")
        rhs = np.array([int(v) % p for v in b], dtype=np.int64)
        x = linalg.solve(mat, rhs, p)
        if x is None:
            raise Inconsistent("A x = b has no solution")
        return tuple(field(v) for v in x)
    raise ValueError(f"unknown mode {mode!r}")


def _find_field(values):
    if isinstance(values, Scalar):
        return values.field
    if isinstance(values, (list, tuple)):
        for v in values:
            f = _find_field(v)
            if f is not None:
                return f
    return None
