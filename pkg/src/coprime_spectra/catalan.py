"""Catalan words and the trees obtained by collapsing their circuits.

A Catalan word of half-length ``k`` is a word of length ``2k`` in which
every letter occurs exactly twice, successive removal of adjacent double
letters empties the word, and first occurrences appear in increasing
letter order.  Equivalently, the two occurrences of each letter form a
non-crossing pair matching, so the words of half-length ``k`` are counted
by the Catalan number ``C_k``.

Collapsing the cycle ``0 - 1 - ... - (2k-1) - 0`` under the vertex
identifications a word forces (step ``i`` and its partner step traverse
the same edge in opposite directions) yields a tree on ``k + 1`` vertices;
grouping words by the unlabeled shape of that tree gives the census used
by the exact moment formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import BoundedInputError
from .graphs import Edge, LabeledTree, TreeShape, canonical_shape

#: Default cap on the half-length k.  C_10 = 16796 words, and the
#: inclusion-exclusion downstream costs 2^k per word.
MAX_HALF_LENGTH = 10


def catalan_number(k: int) -> int:
    """k-th Catalan number, binom(2k, k) / (k + 1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return math.comb(2 * k, k) // (k + 1)


@dataclass(frozen=True)
class CatalanWord:
    """A Catalan word stored as a tuple of letter ids (0 for 'a', 1 for 'b', ...)."""

    letters: tuple[int, ...]

    def __post_init__(self) -> None:
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        if not letters or len(letters) % 2:
            raise ValueError("word length must be a positive even number")
        first_seen: list[int] = []
        counts: dict[int, int] = {}
        for x in letters:
            if x not in counts:
                if x != len(first_seen):
                    raise ValueError("first occurrences must appear in increasing letter order")
                first_seen.append(x)
            counts[x] = counts.get(x, 0) + 1
        if any(c != 2 for c in counts.values()):
            raise ValueError("every letter must occur exactly twice")
        # Greedy stack reduction removes adjacent double letters; it empties
        # the word exactly when the pair matching is non-crossing.
        stack: list[int] = []
        for x in letters:
            if stack and stack[-1] == x:
                stack.pop()
            else:
                stack.append(x)
        if stack:
            raise ValueError("word does not reduce to the empty word")

    @property
    def k(self) -> int:
        return len(self.letters) // 2

    def __str__(self) -> str:
        if max(self.letters) >= 26:
            raise ValueError("letter string form supports at most 26 letters")
        return "".join(chr(ord("a") + x) for x in self.letters)

    @classmethod
    def from_string(cls, text: str) -> "CatalanWord":
        return cls(tuple(ord(c) - ord("a") for c in text))

    def pair_positions(self) -> dict[int, tuple[int, int]]:
        """Map letter id to its two positions in the word."""
        pos: dict[int, list[int]] = {}
        for i, x in enumerate(self.letters):
            pos.setdefault(x, []).append(i)
        return {x: (p[0], p[1]) for x, p in pos.items()}


def _check_half_length(k: int, max_half_length: int) -> None:
    if k < 1 or k > max_half_length:
        raise BoundedInputError(
            f"half-length k={k} outside the supported range 1..{max_half_length}"
        )


def enumerate_catalan_words(k: int, *, max_half_length: int = MAX_HALF_LENGTH) -> list[CatalanWord]:
    """All Catalan words of length ``2k``, in lexicographic letter order.

    At each step the generator prefers closing the innermost open letter
    over opening a new one; since a new letter always sorts after every
    letter already open, this emits words in increasing lexicographic
    order.
    """
    _check_half_length(k, max_half_length)

    def gen(prefix: list[int], stack: list[int], opened: int) -> Iterator[CatalanWord]:
        if len(prefix) == 2 * k:
            yield CatalanWord(tuple(prefix))
            return
        if stack:
            top = stack.pop()
            prefix.append(top)
            yield from gen(prefix, stack, opened)
            prefix.pop()
            stack.append(top)
        if opened < k:
            stack.append(opened)
            prefix.append(opened)
            yield from gen(prefix, stack, opened + 1)
            prefix.pop()
            stack.pop()

    return list(gen([], [], 0))


def word_to_tree(word: CatalanWord) -> LabeledTree:
    """Collapse the word's circuit into its tree.

    Circuit step ``i`` joins circuit vertices ``i`` and ``i + 1 (mod 2k)``.
    Matched steps ``i < j`` traverse one edge in opposite directions, which
    identifies vertex ``i`` with ``j + 1`` and vertex ``i + 1`` with ``j``.
    Tree vertices are numbered by first appearance along the circuit, so
    circuit vertex 0 always maps to tree vertex 0.
    """
    m = 2 * word.k
    parent = list(range(m))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for i, j in word.pair_positions().values():
        union(i, (j + 1) % m)
        union((i + 1) % m, j)

    label: dict[int, int] = {}
    vertex_of = []
    for c in range(m):
        r = find(c)
        if r not in label:
            label[r] = len(label)
        vertex_of.append(label[r])

    edges: list[Edge] = []
    edge_index: dict[Edge, int] = {}
    position_to_edge = []
    for i in range(m):
        u, v = vertex_of[i], vertex_of[(i + 1) % m]
        e = (u, v) if u <= v else (v, u)
        if e not in edge_index:
            edge_index[e] = len(edges)
            edges.append(e)
        position_to_edge.append(edge_index[e])

    return LabeledTree(word.k + 1, tuple(edges), tuple(position_to_edge))


def shape_census(k: int, *, max_half_length: int = MAX_HALF_LENGTH) -> dict[TreeShape, int]:
    """Count Catalan words of length ``2k`` by the unlabeled shape of their tree.

    The values sum to ``C_k``; the number of keys is the number of
    unlabeled trees on ``k + 1`` vertices.
    """
    census: dict[TreeShape, int] = {}
    for word in enumerate_catalan_words(k, max_half_length=max_half_length):
        shape = canonical_shape(word_to_tree(word))
        census[shape] = census.get(shape, 0) + 1
    return census
