"""
Grassmann algebra E_n on bit-packed blades.

A blade is an ``int`` mask: bit i set means the generator e_{i+1} is present, and the blade is the
product of its generators in increasing order. Multiplying two blades reorders the concatenated
generator sequence; the sign is the parity of the number of pairs (i in a, j in b) with i > j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union
import logging

import numpy as np

from .algebra import Element, GradedAlgebra, Structure
from .constructions import r_envelope
from .errors import GroupMismatch, SizeMismatch, TooLarge
from .groups import Z2
from .linalg import ONE, ZERO, format_scalar

logger = logging.getLogger(__name__)

Blade = int

MAX_GENERATORS = 64
MAX_MATERIALIZED = 12

_MASK64 = (1 << 64) - 1


def blade_grade(mask: Blade) -> int:
    return mask.bit_count()


def blade_parity(mask: Blade) -> int:
    return blade_grade(mask) & 1


def blade_from_indices(indices: Iterable[int]) -> Blade:
    """Blade of the generators e_i for 1-based ``indices``."""
    mask = 0
    for i in indices:
        if not 1 <= i <= MAX_GENERATORS:
            raise SizeMismatch(f"generator index {i} outside 1..{MAX_GENERATORS}")
        mask |= 1 << (i - 1)
    return mask


def blade_indices(mask: Blade) -> List[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def blade_label(mask: Blade) -> str:
    if not mask:
        return "1"
    return "".join(f"e{i}" for i in blade_indices(mask))


def _higher_parity(a: Blade) -> int:
    """Bit j of the result is the parity of the bits of ``a`` strictly above j."""
    p = a >> 1
    p ^= p >> 1
    p ^= p >> 2
    p ^= p >> 4
    p ^= p >> 8
    p ^= p >> 16
    p ^= p >> 32
    return p


def reordering_sign(a: Blade, b: Blade) -> int:
    return -1 if (_higher_parity(a) & b).bit_count() & 1 else 1


def blade_product(a: Blade, b: Blade) -> Optional[Tuple[int, Blade]]:
    """(sign, a ∪ b) for disjoint blades, None when a generator repeats."""
    if a & b:
        return None
    return reordering_sign(a, b), a | b


def naive_blade_product(a: Blade, b: Blade) -> Optional[Tuple[int, Blade]]:
    """Reference implementation: bubble-sort the concatenated generator sequence and count swaps."""
    sequence = blade_indices(a) + blade_indices(b)
    if len(set(sequence)) < len(sequence):
        return None
    swaps = 0
    for x in range(len(sequence)):
        for y in range(x + 1, len(sequence)):
            if sequence[x] > sequence[y]:
                swaps += 1
    return (-1 if swaps % 2 else 1), a | b


# ---------------------------------------------------------------------------------------------------------------
# vectorised kernel

_SHIFTS = tuple(np.uint64(s) for s in (1, 2, 4, 8, 16, 32))


def _parity64(x: "np.ndarray") -> "np.ndarray":
    for s in reversed(_SHIFTS):
        x = x ^ (x >> s)
    return x & np.uint64(1)


def blade_products_batch(a: "np.ndarray", b: "np.ndarray") -> Tuple["np.ndarray", "np.ndarray"]:
    """
    Elementwise blade products of two uint64 arrays.

    Returns ``(signs, masks)`` with signs in {-1, 0, 1} (0 where the blades overlap) and masks the unions.
    """
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if a.shape != b.shape:
        raise SizeMismatch(f"batch shapes differ: {a.shape} vs {b.shape}")
    p = a >> np.uint64(1)
    for s in _SHIFTS:
        p = p ^ (p >> s)
    odd = _parity64(p & b).astype(np.int8)
    signs = (1 - 2 * odd).astype(np.int8)
    signs[(a & b) != 0] = 0
    return signs, a | b


def random_blades(rng: "np.random.Generator", n: int, count: int) -> "np.ndarray":
    if not 1 <= n <= MAX_GENERATORS:
        raise SizeMismatch(f"n must be in 1..{MAX_GENERATORS}, got {n}")
    high = np.uint64(_MASK64 if n == 64 else (1 << n) - 1)
    return rng.integers(0, high, size=count, dtype=np.uint64, endpoint=True)


# ---------------------------------------------------------------------------------------------------------------
# multivectors


@dataclass(frozen=True)
class GrassmannElement:
    n: int
    terms: Dict[Blade, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_GENERATORS:
            raise SizeMismatch(f"n must be in 0..{MAX_GENERATORS}, got {self.n}")
        limit = 1 << self.n
        cleaned = {}
        for mask, x in sorted(self.terms.items()):
            if mask >= limit or mask < 0:
                raise SizeMismatch(f"blade {blade_label(mask)} does not fit in E_{self.n}")
            if x:
                cleaned[mask] = Fraction(x)
        object.__setattr__(self, "terms", cleaned)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    @classmethod
    def one(cls, n: int) -> "GrassmannElement":
        return cls(n, {0: ONE})

    @classmethod
    def generator(cls, n: int, i: int) -> "GrassmannElement":
        return cls(n, {blade_from_indices([i]): ONE})

    @classmethod
    def blade(cls, n: int, indices: Iterable[int], coeff: Union[int, Fraction] = 1) -> "GrassmannElement":
        return cls(n, {blade_from_indices(indices): Fraction(coeff)})

    def _check(self, other: "GrassmannElement") -> None:
        if self.n != other.n:
            raise SizeMismatch(f"E_{self.n} and E_{other.n} elements cannot be combined")

    def __add__(self, other: "GrassmannElement") -> "GrassmannElement":
        self._check(other)
        out = dict(self.terms)
        for mask, x in other.terms.items():
            out[mask] = out.get(mask, ZERO) + x
        return GrassmannElement(self.n, out)

    def __neg__(self) -> "GrassmannElement":
        return GrassmannElement(self.n, {m: -x for m, x in self.terms.items()})

    def __sub__(self, other: "GrassmannElement") -> "GrassmannElement":
        return self + (-other)

    def __mul__(self, other: Union["GrassmannElement", int, Fraction]) -> "GrassmannElement":
        if isinstance(other, GrassmannElement):
            return grassmann_multiply(self, other)
        return GrassmannElement(self.n, {m: x * other for m, x in self.terms.items()})

    def __rmul__(self, other: Union[int, Fraction]) -> "GrassmannElement":
        return GrassmannElement(self.n, {m: x * other for m, x in self.terms.items()})

    def __bool__(self) -> bool:
        return bool(self.terms)

    def parities(self) -> List[int]:
        return sorted({blade_parity(m) for m in self.terms})

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{format_scalar(x)} {blade_label(m)}" for m, x in self.terms.items())


def grassmann_multiply(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    x._check(y)
    out: Dict[Blade, Fraction] = {}
    for a, ca in x.terms.items():
        pa = _higher_parity(a)
        for b, cb in y.terms.items():
            if a & b:
                continue
            c = ca * cb
            if (pa & b).bit_count() & 1:
                c = -c
            mask = a | b
            out[mask] = out.get(mask, ZERO) + c
    return GrassmannElement(x.n, out)


# ---------------------------------------------------------------------------------------------------------------
# structure-constant views


def materialize(n: int) -> GradedAlgebra:
    """E_n as a Z2-graded structure-constant algebra; basis index = blade mask."""
    if n < 0:
        raise SizeMismatch(f"n must be >= 0, got {n}")
    if n > MAX_MATERIALIZED:
        raise TooLarge("n", n, MAX_MATERIALIZED)
    size = 1 << n
    structure: Structure = {}
    for a in range(size):
        pa = _higher_parity(a)
        for b in range(size):
            if a & b:
                continue
            structure[(a, b)] = {a | b: -ONE if (pa & b).bit_count() & 1 else ONE}
    return GradedAlgebra(
        group=Z2,
        basis_labels=tuple(blade_label(m) for m in range(size)),
        grades=tuple((blade_parity(m),) for m in range(size)),
        structure=structure,
        unit={0: ONE},
        name=f"E{n}",
    )


def to_materialized(x: GrassmannElement) -> Element:
    """The element of ``materialize(x.n)`` with the same coordinates."""
    return materialize(x.n).element(dict(x.terms))


@dataclass(frozen=True)
class EnvelopeSpec:
    c: GradedAlgebra
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SizeMismatch(f"envelope truncation N must be >= 1, got {self.n}")
        if not self.c.group.is_z2():
            raise GroupMismatch(f"the envelope needs a Z2-graded algebra, got {self.c.group}")


def envelope(spec: EnvelopeSpec) -> GradedAlgebra:
    """(E_N)_0 ⊗ C_0 ⊕ (E_N)_1 ⊗ C_1, basis ordered by (blade mask, C index)."""
    if spec.n > MAX_MATERIALIZED:
        raise TooLarge("N", spec.n, MAX_MATERIALIZED)
    return r_envelope(materialize(spec.n), spec.c, name=f"E{spec.n}({spec.c.name})")


def truncation_bound(d: int, c: Optional[GradedAlgebra] = None) -> int:
    """
    Generators of E_N needed to test identities of degree ``d`` on an envelope: N = d.

    A multilinear identity is tested on basis tuples, and d pairwise distinct single-generator
    blades never multiply to zero, so E_d already separates every degree-d evaluation. ``c`` does not
    change the bound. The degree must be at least 1; a smaller one is a caller error and raises
    :class:`SizeMismatch`.
    """
    if d < 1:
        raise SizeMismatch(f"identity degree must be >= 1, got {d}")
    return d
