"""Finite binary relations over hashable atoms.

Values are plain Python objects: identifier strings, ints (ports and
IPv4 addresses) and tuples of values.  A :class:`Relation` is an
immutable set of ordered pairs whose iteration order is always sorted,
so anything rendered from it is reproducible.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Any, Hashable, Iterable, Iterator

Value = Hashable
Pair = tuple[Any, Any]


def sort_key(value: Any) -> tuple:
    """Total ordering key over ints, strings and nested tuples of them."""
    if isinstance(value, bool):
        return (0, int(value))
    if isinstance(value, int):
        return (0, value)
    if isinstance(value, str):
        return (1, value)
    if isinstance(value, tuple):
        return (2, tuple(sort_key(v) for v in value))
    return (3, repr(value))


def sorted_values(values: Iterable[Any]) -> list:
    return sorted(values, key=sort_key)


class Relation:
    """Immutable finite relation ``R ⊆ A × B``.

    Equality, hashing and ``in`` follow set semantics on the pairs.
    """

    __slots__ = ("_pairs", "_index")

    def __init__(self, pairs: Iterable[Pair] = ()):
        self._pairs = frozenset((a, b) for a, b in pairs)
        self._index: dict | None = None

    @classmethod
    def identity(cls, values: Iterable[Any]) -> Relation:
        return cls((v, v) for v in values)

    @property
    def pairs(self) -> frozenset:
        return self._pairs

    def _forward(self) -> dict:
        # Lazily built left-to-right index; safe because pairs never change.
        if self._index is None:
            index = defaultdict(set)
            for a, b in self._pairs:
                index[a].add(b)
            self._index = dict(index)
        return self._index

    def __iter__(self) -> Iterator[Pair]:
        return iter(sorted(self._pairs, key=sort_key))

    def __len__(self) -> int:
        return len(self._pairs)

    def __contains__(self, pair: object) -> bool:
        return pair in self._pairs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Relation):
            return NotImplemented
        return self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __bool__(self) -> bool:
        return bool(self._pairs)

    def __repr__(self) -> str:
        return f"Relation({list(self)!r})"

    def __or__(self, other: Relation) -> Relation:
        return Relation(self._pairs | other._pairs)

    def dom(self) -> frozenset:
        return frozenset(a for a, _ in self._pairs)

    def ran(self) -> frozenset:
        return frozenset(b for _, b in self._pairs)

    def image(self, values: Iterable[Any]) -> frozenset:
        """``R[A]``: every right value related to some member of ``values``."""
        index = self._forward()
        out: set = set()
        for a in values:
            out.update(index.get(a, ()))
        return frozenset(out)

    def compose(self, other: Relation) -> Relation:
        """Forward composition ``self ; other`` (``self`` is applied first)."""
        index = other._forward()
        return Relation((a, c) for a, b in self._pairs for c in index.get(b, ()))

    def parallel(self, other: Relation) -> Relation:
        """``self ∥ other``: pairs ``((a, b), (c, d))`` with (a,c) ∈ self, (b,d) ∈ other."""
        return Relation(
            ((a, b), (c, d)) for a, c in self._pairs for b, d in other._pairs
        )

    def range_restrict(self, values: Iterable[Any]) -> Relation:
        keep = frozenset(values)
        return Relation((a, b) for a, b in self._pairs if b in keep)

    def domain_restrict(self, values: Iterable[Any]) -> Relation:
        keep = frozenset(values)
        return Relation((a, b) for a, b in self._pairs if a in keep)

    def inverse(self) -> Relation:
        return Relation((b, a) for a, b in self._pairs)

    def projections(self) -> tuple[frozenset, frozenset]:
        return self.dom(), self.ran()

    def is_function(self) -> bool:
        return all(len(targets) == 1 for targets in self._forward().values())


def image(r: Relation, values: Iterable[Any]) -> frozenset:
    return r.image(values)


def compose(r1: Relation, r2: Relation) -> Relation:
    return r1.compose(r2)


def parallel(r1: Relation, r2: Relation) -> Relation:
    return r1.parallel(r2)


def range_restrict(r: Relation, values: Iterable[Any]) -> Relation:
    return r.range_restrict(values)


def inverse(r: Relation) -> Relation:
    return r.inverse()


def projections(r: Relation) -> tuple[frozenset, frozenset]:
    return r.projections()


def is_function(r: Relation) -> bool:
    return r.is_function()


def identity(values: Iterable[Any]) -> Relation:
    return Relation.identity(values)
