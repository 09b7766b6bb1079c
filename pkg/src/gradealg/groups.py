from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Sequence, Tuple

from .errors import BadParams, GroupMismatch

GroupElement = Tuple[int, ...]


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups Z_{n1} x ... x Z_{nk}; elements are residue tuples."""

    factor_orders: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.factor_orders:
            raise BadParams("a group needs at least one cyclic factor")
        if any(n < 1 for n in self.factor_orders):
            raise BadParams(f"cyclic factor orders must be >= 1, got {self.factor_orders}")

    @classmethod
    def cyclic(cls, n: int) -> "FiniteAbelianGroup":
        return cls((n,))

    @classmethod
    def parse(cls, text: str) -> "FiniteAbelianGroup":
        """Parse ``Z2`` or ``Z2xZ3``."""
        orders: List[int] = []
        for part in text.strip().split("x"):
            part = part.strip()
            if not part.startswith("Z") or not part[1:].isdigit():
                raise BadParams(f"bad group factor {part!r} in {text!r}")
            orders.append(int(part[1:]))
        return cls(tuple(orders))

    def __str__(self) -> str:
        return "x".join(f"Z{n}" for n in self.factor_orders)

    @property
    def order(self) -> int:
        total = 1
        for n in self.factor_orders:
            total *= n
        return total

    @property
    def identity(self) -> GroupElement:
        return tuple(0 for _ in self.factor_orders)

    def element(self, components: Iterable[int]) -> GroupElement:
        comps = tuple(components)
        if len(comps) != len(self.factor_orders):
            raise GroupMismatch(f"{comps} has {len(comps)} components, {self} has {len(self.factor_orders)}")
        return tuple(c % n for c, n in zip(comps, self.factor_orders))

    def add(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return tuple((a + b) % n for a, b, n in zip(g, h, self.factor_orders))

    def neg(self, g: GroupElement) -> GroupElement:
        return tuple((-a) % n for a, n in zip(g, self.factor_orders))

    def sum(self, elements: Sequence[GroupElement]) -> GroupElement:
        total = self.identity
        for g in elements:
            total = self.add(total, g)
        return total

    def elements(self) -> List[GroupElement]:
        """All elements, lexicographic on the cyclic components."""
        return [tuple(c) for c in product(*(range(n) for n in self.factor_orders))]

    def index(self, g: GroupElement) -> int:
        position = 0
        for c, n in zip(g, self.factor_orders):
            position = position * n + c
        return position

    def is_z2(self) -> bool:
        return self.factor_orders == (2,)


Z2 = FiniteAbelianGroup((2,))
EVEN: GroupElement = (0,)
ODD: GroupElement = (1,)


def format_element(g: GroupElement) -> str:
    return ",".join(str(c) for c in g)


def parse_element(text: str) -> GroupElement:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise BadParams(f"bad group element {text!r}") from None
