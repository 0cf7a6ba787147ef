"""Arithmetic and enumeration for prime fields F_p.

The public value type is :class:`FieldElement` (value + modulus, so mixed-field
bugs surface immediately).  Hot loops elsewhere in the package work with plain
ints modulo p and tuples of ints for vectors; the helpers at the bottom
(`vec_*`, `mat_*`, `rank_mod_p`) are that fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import DivisionByZero, FieldMismatch, NotAUnit, NotPrime


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def require_prime(p: int) -> int:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return p


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise DivisionByZero(f"inverse of 0 in F_{p}")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class FieldElement:
    """An element of F_p.  Operations require equal moduli."""

    value: int
    modulus: int

    def __post_init__(self):
        require_prime(self.modulus)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: "FieldElement") -> None:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.modulus != self.modulus:
            raise FieldMismatch(f"F_{self.modulus} vs F_{other.modulus}")

    def __add__(self, other):
        self._check(other)
        return FieldElement((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other):
        self._check(other)
        return FieldElement((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other):
        self._check(other)
        return FieldElement((self.value * other.value) % self.modulus, self.modulus)

    def __neg__(self):
        return FieldElement(-self.value % self.modulus, self.modulus)

    def inverse(self) -> "FieldElement":
        return FieldElement(inv_mod(self.value, self.modulus), self.modulus)

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def field_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def field_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def field_neg(a: FieldElement) -> FieldElement:
    return -a


def field_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def enumerate_units(p: int) -> list[FieldElement]:
    """The p-1 nonzero elements of F_p in ascending order."""
    require_prime(p)
    return [FieldElement(v, p) for v in range(1, p)]


def unit_values(p: int) -> tuple[int, ...]:
    require_prime(p)
    return tuple(range(1, p))


# ---------------------------------------------------------------------------
# fast int/tuple layer


def all_vectors(n: int, p: int):
    """All p^n vectors of F_p^n in lexicographic order, as int tuples."""
    return product(range(p), repeat=n)


def unit_vector(i: int, n: int) -> tuple[int, ...]:
    """Standard basis vector e_i (1-based slot)."""
    if not 1 <= i <= n:
        raise ValueError(f"slot {i} out of range 1..{n}")
    return tuple(1 if j == i - 1 else 0 for j in range(n))


def vec_scale(c: int, v: tuple[int, ...], p: int) -> tuple[int, ...]:
    return tuple((c * x) % p for x in v)


def vec_sub(v: tuple[int, ...], w: tuple[int, ...], p: int) -> tuple[int, ...]:
    return tuple((x - y) % p for x, y in zip(v, w))


def rank_mod_p(columns, n: int, p: int) -> int:
    """Rank of the n-row matrix with the given columns, by elimination mod p."""
    rows = [list(r) for r in zip(*columns)] if columns else []
    if not rows:
        return 0
    m = len(rows[0])
    rank = 0
    col = 0
    while rank < len(rows) and col < m:
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col] % p:
                piv = r
                break
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = inv_mod(rows[rank][col], p)
        rows[rank] = [(inv * x) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                c = rows[r][col]
                rows[r] = [(x - c * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def is_independent(columns, n: int, p: int) -> bool:
    return rank_mod_p(columns, n, p) == len(columns)
