"""Forests, circuit-labeled trees, and canonical unlabeled-tree codes.

Unlabeled shapes are encoded with a center-rooted AHU code: a leaf is
``()``, an internal vertex concatenates the sorted codes of its children
inside one pair of parentheses.  Rooting at the tree center (for bicentral
trees, the lexicographically smaller of the two rootings) makes the code a
complete isomorphism invariant.  Forest codes concatenate the sorted codes
of the non-singleton components; isolated vertices are dropped, which is
harmless for every quantity computed downstream and maximizes cache reuse.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import NotAForestError

Edge = tuple[int, int]


def _normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Forest:
    """An acyclic simple graph on vertices ``0 .. vertex_count - 1``."""

    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        edges = tuple(_normalize_edge(u, v) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        parent = list(range(self.vertex_count))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of vertex range")
            if u == v:
                raise NotAForestError(f"self-loop at vertex {u}")
            ru, rv = find(u), find(v)
            if ru == rv:
                raise NotAForestError(f"edge ({u}, {v}) closes a cycle")
            parent[ru] = rv

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by minimum vertex."""
        adj = self.adjacency()
        seen = [False] * self.vertex_count
        comps: list[list[int]] = []
        for start in range(self.vertex_count):
            if seen[start]:
                continue
            stack, comp = [start], []
            seen[start] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for w in adj[v]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def to_json(self) -> str:
        return json.dumps(
            {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}
        )

    @classmethod
    def from_json(cls, text: str) -> "Forest":
        data = json.loads(text)
        return cls(int(data["vertices"]), tuple((int(u), int(v)) for u, v in data["edges"]))


@dataclass(frozen=True)
class LabeledTree:
    """A tree on ``k + 1`` vertices together with the circuit-position map.

    ``position_to_edge[i]`` is the index into ``edges`` of the tree edge
    traversed at circuit step ``i``; every edge is the image of exactly two
    positions.
    """

    vertex_count: int
    edges: tuple[Edge, ...]
    position_to_edge: tuple[int, ...]

    def __post_init__(self) -> None:
        forest = Forest(self.vertex_count, self.edges)  # validates acyclicity
        if len(self.edges) != self.vertex_count - 1:
            raise ValueError("a tree needs exactly vertex_count - 1 edges")
        if not forest.is_connected():
            raise ValueError("tree must be connected")
        if len(self.position_to_edge) != 2 * len(self.edges):
            raise ValueError("position map must cover all 2k circuit positions")
        hits = [0] * len(self.edges)
        for e in self.position_to_edge:
            if not 0 <= e < len(self.edges):
                raise ValueError("position map references an unknown edge")
            hits[e] += 1
        if any(h != 2 for h in hits):
            raise ValueError("each tree edge must be traversed by exactly two positions")

    def as_forest(self) -> Forest:
        return Forest(self.vertex_count, self.edges)


@dataclass(frozen=True, order=True)
class TreeShape:
    """Canonical form of an unlabeled tree (or forest): code plus vertex count."""

    code: str
    vertex_count: int

    def to_forest(self) -> Forest:
        return forest_from_code(self.code)


def _component_centers(adj: list[list[int]], component: list[int]) -> list[int]:
    """Center vertex (or two centers) of one tree component, by leaf stripping."""
    if len(component) == 1:
        return list(component)
    degree = {v: len(adj[v]) for v in component}
    layer = [v for v in component if degree[v] == 1]
    remaining = len(component)
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            degree[v] = 0
            for w in adj[v]:
                if degree[w] > 1:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = nxt
    return sorted(layer)


def _rooted_code(adj: list[list[int]], root: int, parent: int) -> str:
    children = [u for u in adj[root] if u != parent]
    if not children:
        return "()"
    return "(" + "".join(sorted(_rooted_code(adj, c, root) for c in children)) + ")"


def canonical_code(forest: Forest) -> str:
    """Canonical string code of a forest, invariant under vertex relabeling.

    Isolated vertices are dropped.  Two forests get equal codes iff they are
    isomorphic after removing isolated vertices.
    """
    adj = forest.adjacency()
    codes = []
    for comp in forest.components():
        if len(comp) == 1:
            continue
        centers = _component_centers(adj, comp)
        codes.append(min(_rooted_code(adj, c, -1) for c in centers))
    return "".join(sorted(codes))


def canonical_shape(tree: LabeledTree) -> TreeShape:
    """Canonical unlabeled shape of a circuit tree."""
    return TreeShape(canonical_code(tree.as_forest()), tree.vertex_count)


def forest_shape(forest: Forest) -> TreeShape:
    """Canonical shape of a forest with isolated vertices dropped."""
    code = canonical_code(forest)
    return TreeShape(code, code.count("("))


def forest_from_code(code: str) -> Forest:
    """Rebuild a representative forest from a canonical code (preorder labels)."""
    edges: list[Edge] = []
    stack: list[int] = []
    next_id = 0
    for ch in code:
        if ch == "(":
            vid = next_id
            next_id += 1
            if stack:
                edges.append((stack[-1], vid))
            stack.append(vid)
        elif ch == ")":
            if not stack:
                raise ValueError("unbalanced code")
            stack.pop()
        else:
            raise ValueError(f"unexpected character {ch!r} in code")
    if stack:
        raise ValueError("unbalanced code")
    return Forest(next_id, tuple(edges))
