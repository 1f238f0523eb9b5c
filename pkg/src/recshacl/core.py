"""Truth values, graphs and (partial) shape interpretations.

Node sets are stored as Python ints used as bitsets over the graph's
ordered domain: bit ``i`` is set iff node ``i`` is a member.
"""

from __future__ import annotations

import enum
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence


class VocabularyMismatch(ValueError):
    """Two interpretations over different shape names or domains were compared."""


class TruthValue(enum.IntEnum):
    """Kleene truth value; the integer order is the truth order f < u < t."""

    F = 0
    U = 1
    T = 2

    def __invert__(self) -> "TruthValue":
        return TruthValue(2 - self.value)

    def leq_t(self, other: "TruthValue") -> bool:
        return self <= other

    def leq_p(self, other: "TruthValue") -> bool:
        """Information order: u is below both t and f."""
        return self is TruthValue.U or self is other

    @classmethod
    def of(cls, b: bool) -> "TruthValue":
        return cls.T if b else cls.F

    def __str__(self) -> str:
        return self.name.lower()


def truth_leq_t(a: TruthValue, b: TruthValue) -> bool:
    return a <= b


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


class BinaryRelation:
    """A binary relation over ``range(size)`` stored as successor bitsets."""

    __slots__ = ("rows", "_hash")

    def __init__(self, rows: Sequence[int]):
        self.rows = tuple(rows)
        self._hash = hash(self.rows)

    @classmethod
    def from_pairs(cls, size: int, pairs: Iterable[tuple[int, int]]) -> "BinaryRelation":
        rows = [0] * size
        for a, b in pairs:
            if not (0 <= a < size and 0 <= b < size):
                raise ValueError(f"pair ({a}, {b}) outside domain of size {size}")
            rows[a] |= 1 << b
        return cls(rows)

    @classmethod
    def empty(cls, size: int) -> "BinaryRelation":
        return cls([0] * size)

    @classmethod
    def identity(cls, size: int) -> "BinaryRelation":
        return cls([1 << i for i in range(size)])

    @property
    def size(self) -> int:
        return len(self.rows)

    def image(self, a: int) -> frozenset[int]:
        """R(a) = {b | (a, b) in R}."""
        return frozenset(bits(self.rows[a]))

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((a, b) for a, row in enumerate(self.rows) for b in bits(row))

    def __contains__(self, pair: tuple[int, int]) -> bool:
        a, b = pair
        return bool(self.rows[a] >> b & 1)

    def __len__(self) -> int:
        return sum(row.bit_count() for row in self.rows)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BinaryRelation):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"BinaryRelation({sorted(self.pairs())})"


class Graph:
    """A finite graph-interpretation: ordered domain, constants and property relations.

    Every node name is also a constant denoting itself.
    """

    def __init__(self, nodes: Sequence[str], props: Mapping[str, BinaryRelation] | None = None):
        self.nodes: tuple[str, ...] = tuple(nodes)
        self.index: dict[str, int] = {}
        for i, name in enumerate(self.nodes):
            if name in self.index:
                raise ValueError(f"duplicate node {name!r}")
            self.index[name] = i
        self.props: dict[str, BinaryRelation] = dict(props or {})
        for name, rel in self.props.items():
            if rel.size != len(self.nodes):
                raise ValueError(f"relation {name!r} is not over the graph domain")

    @classmethod
    def from_triples(cls, triples: Iterable[tuple[str, str, str]],
                     nodes: Iterable[str] = ()) -> "Graph":
        order: dict[str, None] = dict.fromkeys(nodes)
        edges: dict[str, list[tuple[str, str]]] = {}
        for s, p, o in triples:
            order.setdefault(s)
            order.setdefault(o)
            edges.setdefault(p, []).append((s, o))
        names = list(order)
        idx = {n: i for i, n in enumerate(names)}
        props = {p: BinaryRelation.from_pairs(len(names), ((idx[s], idx[o]) for s, o in es))
                 for p, es in edges.items()}
        return cls(names, props)

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def full(self) -> int:
        return (1 << len(self.nodes)) - 1

    @property
    def constants(self) -> dict[str, int]:
        return self.index

    def relation(self, prop: str) -> BinaryRelation:
        """The interpretation of ``prop``; names absent from the graph denote the empty relation."""
        rel = self.props.get(prop)
        return rel if rel is not None else BinaryRelation.empty(self.size)

    def node(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise KeyError(f"unknown node {name!r}") from None

    def names(self, mask: int) -> list[str]:
        return [self.nodes[i] for i in bits(mask)]

    def mask(self, names: Iterable[str]) -> int:
        return mask_of(self.node(n) for n in names)

    def triples(self) -> Iterator[tuple[str, str, str]]:
        for p, rel in self.props.items():
            for a, row in enumerate(rel.rows):
                for b in bits(row):
                    yield self.nodes[a], p, self.nodes[b]

    @cached_property
    def _key(self) -> tuple:
        return self.nodes, tuple(self.props.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.nodes == other.nodes and self.props == other.props

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"Graph(nodes={len(self.nodes)}, props={sorted(self.props)})"


class ShapeAssignment:
    """Two-valued interpretation of the shape names: one node set per shape."""

    __slots__ = ("vocabulary", "masks", "size", "_hash")

    def __init__(self, vocabulary: Sequence[str], masks: Sequence[int], size: int):
        self.vocabulary = tuple(vocabulary)
        self.masks = tuple(masks)
        self.size = size
        if len(self.masks) != len(self.vocabulary):
            raise ValueError("one node set per shape name required")
        if len(set(self.vocabulary)) != len(self.vocabulary):
            raise ValueError("shape names must be distinct")
        full = (1 << size) - 1
        if any(m & ~full or m < 0 for m in self.masks):
            raise ValueError("assigned nodes must belong to the domain")
        self._hash = hash((self.vocabulary, self.masks, size))

    @classmethod
    def bottom(cls, vocabulary: Sequence[str], size: int) -> "ShapeAssignment":
        return cls(vocabulary, [0] * len(vocabulary), size)

    @classmethod
    def top(cls, vocabulary: Sequence[str], size: int) -> "ShapeAssignment":
        return cls(vocabulary, [(1 << size) - 1] * len(vocabulary), size)

    @classmethod
    def from_sets(cls, vocabulary: Sequence[str], sets: Mapping[str, Iterable[int]],
                  size: int) -> "ShapeAssignment":
        return cls(vocabulary, [mask_of(sets.get(s, ())) for s in vocabulary], size)

    @classmethod
    def from_names(cls, graph: Graph, vocabulary: Sequence[str],
                   sets: Mapping[str, Iterable[str]]) -> "ShapeAssignment":
        unknown = set(sets) - set(vocabulary)
        if unknown:
            raise KeyError(f"not in vocabulary: {sorted(unknown)}")
        return cls(vocabulary, [graph.mask(sets.get(s, ())) for s in vocabulary], graph.size)

    def mask(self, shape: str) -> int:
        try:
            return self.masks[self.vocabulary.index(shape)]
        except ValueError:
            raise KeyError(f"unknown shape name {shape!r}") from None

    def nodes(self, shape: str) -> frozenset[int]:
        return frozenset(bits(self.mask(shape)))

    def __getitem__(self, shape: str) -> frozenset[int]:
        return self.nodes(shape)

    def restrict(self, vocabulary: Sequence[str]) -> "ShapeAssignment":
        return ShapeAssignment(vocabulary, [self.mask(s) for s in vocabulary], self.size)

    def to_names(self, graph: Graph) -> dict[str, list[str]]:
        return {s: graph.names(m) for s, m in zip(self.vocabulary, self.masks)}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ShapeAssignment):
            return NotImplemented
        return (self.vocabulary, self.masks, self.size) == (other.vocabulary, other.masks, other.size)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{s}={sorted(bits(m))}" for s, m in zip(self.vocabulary, self.masks))
        return f"ShapeAssignment({body})"


def _check_same(a: ShapeAssignment, b: ShapeAssignment) -> None:
    if a.vocabulary != b.vocabulary or a.size != b.size:
        raise VocabularyMismatch(
            f"cannot compare assignments over {a.vocabulary}/{a.size} and {b.vocabulary}/{b.size}")


def assignment_leq_t(a: ShapeAssignment, b: ShapeAssignment) -> bool:
    """Pointwise subset inclusion."""
    _check_same(a, b)
    return all(x & ~y == 0 for x, y in zip(a.masks, b.masks))


class PartialInterpretation:
    """A consistent pair (lower, upper): lower is certainly true, upper possibly true."""

    __slots__ = ("lower", "upper", "_hash")

    def __init__(self, lower: ShapeAssignment, upper: ShapeAssignment):
        _check_same(lower, upper)
        if not assignment_leq_t(lower, upper):
            raise ValueError("inconsistent pair: lower must be contained in upper")
        self.lower = lower
        self.upper = upper
        self._hash = hash((lower, upper))

    @classmethod
    def least_precise(cls, vocabulary: Sequence[str], size: int) -> "PartialInterpretation":
        return cls(ShapeAssignment.bottom(vocabulary, size), ShapeAssignment.top(vocabulary, size))

    @classmethod
    def from_masks(cls, vocabulary: Sequence[str], lower: Sequence[int], upper: Sequence[int],
                   size: int) -> "PartialInterpretation":
        return cls(ShapeAssignment(vocabulary, lower, size), ShapeAssignment(vocabulary, upper, size))

    @property
    def vocabulary(self) -> tuple[str, ...]:
        return self.lower.vocabulary

    @property
    def size(self) -> int:
        return self.lower.size

    def value(self, shape: str, node: int) -> TruthValue:
        if self.lower.mask(shape) >> node & 1:
            return TruthValue.T
        if not self.upper.mask(shape) >> node & 1:
            return TruthValue.F
        return TruthValue.U

    def unknown(self, shape: str) -> frozenset[int]:
        return frozenset(bits(self.upper.mask(shape) & ~self.lower.mask(shape)))

    def restrict(self, vocabulary: Sequence[str]) -> "PartialInterpretation":
        return PartialInterpretation(self.lower.restrict(vocabulary), self.upper.restrict(vocabulary))

    def to_names(self, graph: Graph) -> dict[str, dict[str, str]]:
        return {s: {graph.nodes[a]: str(self.value(s, a)) for a in range(self.size)}
                for s in self.vocabulary}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialInterpretation):
            return NotImplemented
        return self.lower == other.lower and self.upper == other.upper

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PartialInterpretation(lower={self.lower!r}, upper={self.upper!r})"


def precision_leq(a: PartialInterpretation, b: PartialInterpretation) -> bool:
    """(x, y) <=p (u, v) iff x <=t u and v <=t y."""
    return assignment_leq_t(a.lower, b.lower) and assignment_leq_t(b.upper, a.upper)


def exactify(a: ShapeAssignment) -> PartialInterpretation:
    return PartialInterpretation(a, a)


def is_exact(p: PartialInterpretation) -> bool:
    return p.lower == p.upper
