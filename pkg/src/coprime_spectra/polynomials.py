"""Exact integer polynomials attached to forests.

Two polynomials drive the exact computations.  The independence polynomial
of a graph counts its independent vertex sets by size,

    I(z) = sum_m i_m z^m.

From it, the per-prime coprimality factor of a graph on ``v`` vertices is

    Q(z) = sum_m i_m (1 - z)^(v - m) z^m = (1 - z)^v I(z / (1 - z)),

whose value at ``z = 1/p`` is the probability that independent uniform
residues mod ``p`` at the vertices avoid a common factor ``p`` across
every edge.  For forests both polynomials are computed exactly by tree
dynamic programming; all arithmetic is over Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotAForestError
from .graphs import Forest


def _trim(coeffs: tuple[int, ...]) -> tuple[int, ...]:
    n = len(coeffs)
    while n > 1 and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


@dataclass(frozen=True)
class IntPolynomial:
    """Univariate polynomial with exact integer coefficients, constant term first."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coeffs:
            raise ValueError("coefficient sequence must be nonempty")
        object.__setattr__(self, "coeffs", _trim(tuple(int(c) for c in self.coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPolynomial(tuple(out))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        a, b = self.coeffs, other.coeffs
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return IntPolynomial(tuple(out))

    def __pow__(self, n: int) -> "IntPolynomial":
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = ONE
        for _ in range(n):
            result = result * self
        return result

    def __call__(self, x):
        """Horner evaluation; works for ints, Fractions, floats and numpy arrays."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json_list(self) -> list[int]:
        return list(self.coeffs)


ONE = IntPolynomial((1,))
Z = IntPolynomial((0, 1))
ONE_MINUS_Z = IntPolynomial((1, -1))


def independence_polynomial(forest: Forest) -> IntPolynomial:
    """Independent-set counts of a forest, as an exact polynomial.

    Each tree component is rooted at its lowest-indexed vertex and solved
    with the usual two-state recursion (root included / root excluded);
    component polynomials multiply.  The coefficient of ``z^m`` is the
    number of independent sets of size ``m`` and the degree equals the
    independence number.
    """
    if not isinstance(forest, Forest):
        # Forest construction itself rejects cyclic edge sets.
        raise NotAForestError("expected a Forest value")
    adj = forest.adjacency()
    result = ONE
    for comp in forest.components():
        root = comp[0]
        include, exclude = _component_dp(adj, root)
        result = result * (include + exclude)
    return result


def _component_dp(adj: list[list[int]], root: int) -> tuple[IntPolynomial, IntPolynomial]:
    # Iterative post-order; returns (root-in, root-out) polynomials.
    include: dict[int, IntPolynomial] = {}
    exclude: dict[int, IntPolynomial] = {}
    stack: list[tuple[int, int, bool]] = [(root, -1, False)]
    while stack:
        v, par, done = stack.pop()
        if not done:
            stack.append((v, par, True))
            for w in adj[v]:
                if w != par:
                    stack.append((w, v, False))
        else:
            inc, exc = Z, ONE
            for w in adj[v]:
                if w != par:
                    inc = inc * exclude[w]
                    exc = exc * (include[w] + exclude[w])
            include[v], exclude[v] = inc, exc
    return include[root], exclude[root]


def coprimality_polynomial(forest: Forest) -> IntPolynomial:
    """Per-prime factor ``Q`` of a forest, expanded exactly.

    Adding isolated vertices leaves the result unchanged, and the
    polynomial of a disjoint union is the product of the component
    polynomials.  For every forest, Q(0) = 1 and the linear coefficient
    vanishes.
    """
    ind = independence_polynomial(forest)
    v = forest.vertex_count
    acc = IntPolynomial((0,))
    z_pow = ONE
    for m, im in enumerate(ind.coeffs):
        if im:
            term = IntPolynomial((im,)) * (ONE_MINUS_Z ** (v - m)) * z_pow
            acc = acc + term
        z_pow = z_pow * Z
    return acc


def complete_graph_coprimality(k: int) -> IntPolynomial:
    """Closed form of ``Q`` for the complete graph on ``k`` vertices.

    Equals ``(1 - z)^(k-1) (1 + (k-1) z)``; the only independent sets of a
    complete graph are the empty set and the singletons.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    return (ONE_MINUS_Z ** (k - 1)) * IntPolynomial((1, k - 1))
