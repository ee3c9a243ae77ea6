"""Euler products over primes with rigorous truncation tails, plus exact
finite-range coprimality counts used as oracles.

The limiting probability that independent uniform integers at the vertices
of a forest are coprime along every edge is the product of the forest's
per-prime factor over all primes,

    value = prod_p Q(1/p).

Truncating at a prime bound ``P`` leaves a tail controlled elementarily:
with ``M = 2 * sum_{j >= 2} |q_j|`` and the linear coefficient zero,
``|Q(1/p) - 1| <= (M/2) p^(-2)``, hence ``|log Q(1/p)| <= M p^(-2)``
whenever ``(M/2) p^(-2) <= 1/2``, and ``sum_{p > P} p^(-2) < 1/(P-1)``.
All primes up to ``P`` are multiplied exactly, so the reported interval
``[value * exp(-tail), value * exp(tail)]`` contains the true product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundedInputError, NonpositiveFactorError
from .graphs import Forest
from .polynomials import IntPolynomial, coprimality_polynomial

MAX_PRIME_BOUND = 10**8
MAX_TOTIENT_N = 10**8
#: Largest n for the sieve-backed star / four-path counting routes.
MAX_COUNT_N = 10**6
#: Cap on n**vertices for the literal nested-loop counting route.
NESTED_LOOP_OP_CAP = 4 * 10**6


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``bound``, ascending, with cached reciprocals."""

    bound: int
    primes: np.ndarray
    reciprocals: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)


def sieve_primes(bound: int) -> PrimeTable:
    """Sieve of Eratosthenes up to ``bound`` (inclusive)."""
    if not 2 <= bound <= MAX_PRIME_BOUND:
        raise BoundedInputError(f"prime bound must lie in 2..{MAX_PRIME_BOUND}")
    mask = np.ones(bound + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(bound) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    primes = np.nonzero(mask)[0].astype(np.int64)
    return PrimeTable(bound, primes, 1.0 / primes.astype(np.float64))


def totient_sieve(n: int) -> np.ndarray:
    """Euler's totient for 0..n as an int64 array."""
    if not 1 <= n <= MAX_TOTIENT_N:
        raise BoundedInputError(f"totient range must lie in 1..{MAX_TOTIENT_N}")
    phi = np.arange(n + 1, dtype=np.int64)
    for p in range(2, n + 1):
        if phi[p] == p:  # p is prime
            phi[p::p] -= phi[p::p] // p
    return phi


def totient_sum(n: int) -> int:
    """Exact ``sum_{j <= n} phi(j)``, asymptotically ``3 n^2 / pi^2``."""
    return int(totient_sieve(n)[1:].sum())


def mobius_sieve(n: int) -> np.ndarray:
    """Mobius function for 0..n as an int8 array."""
    if not 1 <= n <= MAX_TOTIENT_N:
        raise BoundedInputError(f"mobius range must lie in 1..{MAX_TOTIENT_N}")
    mu = np.ones(n + 1, dtype=np.int8)
    prime = np.ones(n + 1, dtype=bool)
    prime[:2] = False
    for p in range(2, n + 1):
        if prime[p]:
            if p <= n // p:
                prime[p * p :: p] = False
            mu[p::p] *= -1
            mu[p * p :: p * p] = 0
    return mu


@dataclass(frozen=True)
class EulerProduct:
    """Truncated product over primes with a rigorous tail bound.

    The untruncated value lies in ``[value * exp(-tail_bound),
    value * exp(tail_bound)]``.
    """

    value: float
    tail_bound: float
    prime_bound: int
    polynomial: IntPolynomial


def euler_product(poly: IntPolynomial, primes: PrimeTable) -> EulerProduct:
    """Evaluate ``prod_{p <= bound} poly(1/p)`` with a tail bound.

    Requires ``poly(0) = 1`` and a vanishing linear coefficient, which
    holds for the coprimality polynomial of every forest (and of complete
    graphs).  Factors are accumulated in log space.
    """
    c = poly.coeffs
    if c[0] != 1:
        raise ValueError("polynomial must have constant term 1")
    if len(c) > 1 and c[1] != 0:
        raise ValueError("polynomial must have zero linear coefficient")
    m_bound = 2 * sum(abs(cj) for cj in c[2:])
    if m_bound > (primes.bound + 1) ** 2:
        # |log Q(1/p)| <= M p^(-2) needs (M/2) p^(-2) <= 1/2 beyond the bound.
        raise BoundedInputError("prime bound too small for a valid tail bound")
    factors = poly(primes.reciprocals)
    if np.min(factors) <= 0.0:
        p_bad = int(primes.primes[int(np.argmin(factors))])
        raise NonpositiveFactorError(
            f"factor at prime {p_bad} is nonpositive; polynomial is not a forest factor"
        )
    value = float(np.exp(np.sum(np.log(factors))))
    tail = 2.0 * m_bound / (primes.bound - 1) if m_bound else 0.0
    return EulerProduct(value, tail, primes.bound, poly)


def coprime_probability(forest: Forest, primes: PrimeTable) -> EulerProduct:
    """Limiting probability of coprimality along every edge of a forest."""
    return euler_product(coprimality_polynomial(forest), primes)


# ---------------------------------------------------------------------------
# Exact finite-range counts
# ---------------------------------------------------------------------------


def coprime_counts_to_each(n: int) -> np.ndarray:
    """``D[c] = #{x in 1..n : gcd(x, c) = 1}`` for c in 0..n (D[0] unused).

    Divisor-sum sieve over the Mobius function: D[c] = sum_{d | c} mu(d) * floor(n/d).
    """
    mu = mobius_sieve(n)
    counts = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        m = int(mu[d])
        if m:
            counts[d::d] += m * (n // d)
    return counts


def _star_count(leaves: int, n: int) -> int:
    # Tuples (center, leaf_1..leaf_m) with every leaf coprime to the center.
    counts = coprime_counts_to_each(n)
    return sum(int(v) ** leaves for v in counts[1:])


def _path4_count(n: int) -> int:
    # Chain x - y - z - w: sum over the middle edge by Mobius inversion,
    #   count = sum_d mu(d) * S_d^2,  S_d = sum_{d | y} D[y].
    counts = coprime_counts_to_each(n)
    mu = mobius_sieve(n)
    total = 0
    for d in range(1, n + 1):
        m = int(mu[d])
        if m:
            s = int(counts[d::d].sum())
            total += m * s * s
    return total


def _nested_loop_count(vertex_count: int, edges: list[tuple[int, int]], n: int) -> int:
    # Literal enumeration with early pruning; only for tiny n ** vertex_count.
    by_vertex: list[list[tuple[int, int]]] = [[] for _ in range(vertex_count)]
    for u, v in edges:
        lo, hi = min(u, v), max(u, v)
        by_vertex[hi].append((lo, hi))
    values = [0] * vertex_count

    def rec(level: int) -> int:
        if level == vertex_count:
            return 1
        subtotal = 0
        for x in range(1, n + 1):
            values[level] = x
            if all(math.gcd(values[u], x) == 1 for u, _ in by_vertex[level]):
                subtotal += rec(level + 1)
        return subtotal

    return rec(0)


def _component_count(vertices: list[int], edges: list[tuple[int, int]], n: int) -> int:
    v = len(vertices)
    if not edges:
        return n**v
    if len(edges) == 1:
        if n > MAX_TOTIENT_N:
            raise BoundedInputError(f"single-edge count supports n <= {MAX_TOTIENT_N}")
        return 2 * totient_sum(n) - 1
    degrees = {x: 0 for x in vertices}
    for u, w in edges:
        degrees[u] += 1
        degrees[w] += 1
    is_star = max(degrees.values()) == len(edges)
    if is_star and n <= MAX_COUNT_N:
        return _star_count(len(edges), n)
    if v == 4 and len(edges) == 3 and not is_star and n <= MAX_COUNT_N:
        return _path4_count(n)
    if n**v <= NESTED_LOOP_OP_CAP:
        index = {x: i for i, x in enumerate(vertices)}
        return _nested_loop_count(v, [(index[u], index[w]) for u, w in edges], n)
    raise BoundedInputError(
        f"no exact counting route for a component with {v} vertices at n={n}; "
        f"supported: edges, stars and 4-paths up to n={MAX_COUNT_N}, "
        f"anything tiny enough for nested loops"
    )


def coprime_tuple_count(forest: Forest, n: int) -> int:
    """Exact number of tuples in ``(1..n)^V`` coprime along every forest edge.

    Constraints never couple distinct components, so the count multiplies
    across components.  Single edges use the totient shortcut
    ``2 * sum phi - 1``; stars (the 3-path included) and the 4-path use
    Mobius-inversion identities; anything else falls back to literal
    nested loops and is limited to tiny ``n ** |V|``.
    """
    if n < 1:
        raise BoundedInputError("n must be positive")
    edge_lookup: dict[int, list[tuple[int, int]]] = {}
    total = 1
    comps = forest.components()
    comp_of = {}
    for ci, comp in enumerate(comps):
        for x in comp:
            comp_of[x] = ci
        edge_lookup[ci] = []
    for u, v in forest.edges:
        edge_lookup[comp_of[u]].append((u, v))
    for ci, comp in enumerate(comps):
        total *= _component_count(comp, edge_lookup[ci], n)
    return total
