"""Exact limit moments of the three ensembles and free-cumulant conversion.

All odd limit moments vanish.  The even moments are

* standard ensemble: the Catalan numbers;
* visible ensemble: ``sum_T n(T) * A_T`` over the unlabeled trees on
  ``k + 1`` vertices, where ``n(T)`` is the census count and ``A_T`` the
  edge-coprimality constant of ``T``;
* invisible ensemble: a per-word inclusion-exclusion.  For a word ``w``
  with tree ``G``, every circuit position carries one "its endpoints are
  coprime" event, and the complementary count expands over position
  subsets.  Since each tree edge is hit by exactly two positions and the
  signed sum over the nonempty subsets of a 2-element set is -1, the sum
  collapses from ``2^(2k)`` position subsets to ``2^k`` edge subsets:

      term(w) = sum_{E' subset of edges(G)} (-1)^|E'| A(forest with E').

  The literal position-subset sum is kept as an independent oracle and the
  two routes are compared in the verification suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .catalan import CatalanWord, catalan_number, enumerate_catalan_words, word_to_tree
from .errors import BoundedInputError, ConsistencyError
from .euler import EulerProduct, PrimeTable, euler_product
from .graphs import Forest, canonical_code, forest_from_code
from .polynomials import coprimality_polynomial

#: Free-cumulant conversion is capped here; the recursion is exact but the
#: non-crossing partition count grows as the Catalan numbers.
MAX_CUMULANT_ORDER = 8

_CONSISTENCY_SLACK = 1e-9


@dataclass(frozen=True)
class MomentValue:
    """One even moment: order ``2k``, value, and rigorous truncation tail."""

    k: int
    value: float
    tail_bound: float


@dataclass(frozen=True)
class MomentTable:
    """Even limit moments of one ensemble; odd moments are identically zero."""

    ensemble: str
    even_moments: tuple[MomentValue, ...]
    odd_moments_zero: bool = True

    def value(self, k: int) -> float:
        return self.even_moments[k - 1].value

    def tail_bound(self, k: int) -> float:
        return self.even_moments[k - 1].tail_bound


class ShapeCache:
    """Memoizes Euler products by the canonical code of the (de-isolated) forest.

    Get-or-compute is atomic enough under the GIL; recomputing a value is
    harmless because the computation is deterministic.  ``enabled=False``
    turns memoization off, which is used to validate cache transparency.
    """

    def __init__(self, enabled: bool = True) -> None:
        self.enabled = enabled
        self._store: dict[str, EulerProduct] = {}

    def probability(self, forest: Forest, primes: PrimeTable) -> EulerProduct:
        code = canonical_code(forest)
        if self.enabled:
            hit = self._store.get(code)
            if hit is not None and hit.prime_bound == primes.bound:
                return hit
        result = euler_product(coprimality_polynomial(forest_from_code(code)), primes)
        if self.enabled:
            self._store[code] = result
        return result

    def __len__(self) -> int:
        return len(self._store)


def semicircle_moments(k_max: int) -> MomentTable:
    """Even moments of the semicircle law: the Catalan numbers, exactly."""
    if k_max < 1:
        raise BoundedInputError("k_max must be at least 1")
    values = tuple(MomentValue(k, float(catalan_number(k)), 0.0) for k in range(1, k_max + 1))
    return MomentTable("wigner", values)


def visible_moments(
    k_max: int, primes: PrimeTable, cache: ShapeCache | None = None
) -> MomentTable:
    """Even limit moments of the visible ensemble.

    ``m_2k = sum_T n(T) * A_T`` over the tree-shape census; products are
    cached by shape.  Tail bounds aggregate first order per term,
    ``sum n(T) * value_T * (exp(tail_T) - 1)``.
    """
    from .catalan import shape_census

    if k_max < 1:
        raise BoundedInputError("k_max must be at least 1")
    cache = cache if cache is not None else ShapeCache()
    rows = []
    for k in range(1, k_max + 1):
        value = 0.0
        tail = 0.0
        for shape, count in sorted(shape_census(k).items()):
            prob = cache.probability(shape.to_forest(), primes)
            value += count * prob.value
            tail += count * prob.value * math.expm1(prob.tail_bound)
        rows.append(MomentValue(k, value, tail))
    return MomentTable("visible", tuple(rows))


def subgraph_for_positions(word: CatalanWord, positions: set[int] | frozenset[int]) -> Forest:
    """Sub-forest of the word's tree carrying the selected circuit positions.

    Keeps the full vertex set; the edge set is the image of ``positions``
    under the position-to-edge map.  The full position set returns the
    whole tree; the empty set returns the edgeless forest.
    """
    tree = word_to_tree(word)
    for i in positions:
        if not 0 <= i < 2 * word.k:
            raise ValueError(f"position {i} outside 0..{2 * word.k - 1}")
    edge_ids = sorted({tree.position_to_edge[i] for i in positions})
    return Forest(tree.vertex_count, tuple(tree.edges[e] for e in edge_ids))


def invisible_word_term(
    word: CatalanWord, primes: PrimeTable, cache: ShapeCache | None = None
) -> MomentValue:
    """Limiting contribution of one Catalan word to the invisible moments.

    Collapsed edge-subset inclusion-exclusion, ``2^k`` terms.  The result
    is a limit of probabilities and must land in [0, 1] up to the
    aggregated tail; anything else signals an internal error.
    """
    cache = cache if cache is not None else ShapeCache()
    tree = word_to_tree(word)
    edges = tree.edges
    value = 0.0
    tail = 0.0
    for mask in range(1 << len(edges)):
        subset = tuple(e for i, e in enumerate(edges) if mask >> i & 1)
        prob = cache.probability(Forest(tree.vertex_count, subset), primes)
        sign = -1.0 if bin(mask).count("1") % 2 else 1.0
        value += sign * prob.value
        tail += prob.value * math.expm1(prob.tail_bound)
    if not -tail - _CONSISTENCY_SLACK <= value <= 1.0 + tail + _CONSISTENCY_SLACK:
        raise ConsistencyError(
            f"word term {value!r} for {word} falls outside [0, 1] beyond tolerance"
        )
    return MomentValue(word.k, value, tail)


def invisible_word_term_by_positions(
    word: CatalanWord, primes: PrimeTable, cache: ShapeCache | None = None
) -> MomentValue:
    """Literal position-subset inclusion-exclusion over all ``2^(2k)`` subsets.

    Exponentially slower than the collapsed route; kept as the independent
    oracle for it.
    """
    cache = cache if cache is not None else ShapeCache()
    m = 2 * word.k
    value = 0.0
    tail = 0.0
    for mask in range(1 << m):
        positions = {i for i in range(m) if mask >> i & 1}
        prob = cache.probability(subgraph_for_positions(word, positions), primes)
        sign = -1.0 if len(positions) % 2 else 1.0
        value += sign * prob.value
        tail += prob.value * math.expm1(prob.tail_bound)
    return MomentValue(word.k, value, tail)


def invisible_moments(
    k_max: int, primes: PrimeTable, cache: ShapeCache | None = None
) -> MomentTable:
    """Even limit moments of the invisible ensemble, summed over Catalan words."""
    if k_max < 1:
        raise BoundedInputError("k_max must be at least 1")
    cache = cache if cache is not None else ShapeCache()
    rows = []
    for k in range(1, k_max + 1):
        value = 0.0
        tail = 0.0
        for word in enumerate_catalan_words(k):
            term = invisible_word_term(word, primes, cache)
            value += term.value
            tail += term.tail_bound
        rows.append(MomentValue(k, value, tail))
    return MomentTable("invisible", tuple(rows))


# ---------------------------------------------------------------------------
# Free cumulants
# ---------------------------------------------------------------------------


def _gap_sum(moments_with_zero: list[float], parts: int, total: int) -> float:
    """Sum over compositions ``i_1 + ... + i_parts = total`` of ``prod m_{i_j}``."""
    ways = [0.0] * (total + 1)
    ways[0] = 1.0
    for _ in range(parts):
        nxt = [0.0] * (total + 1)
        for t in range(total + 1):
            wt = ways[t]
            if wt:
                for i in range(total - t + 1):
                    nxt[t + i] += wt * moments_with_zero[i]
        ways = nxt
    return ways[total]


def moments_from_free_cumulants(kappas: list[float] | tuple[float, ...]) -> list[float]:
    """Moments ``m_1..m_n`` of the cumulant sequence ``kappas``.

    Uses the non-crossing recursion on the block containing the first
    element: ``m_n = sum_s kappa_s * sum over gap compositions of
    products of lower moments``.
    """
    n = len(kappas)
    if n > MAX_CUMULANT_ORDER:
        raise BoundedInputError(f"cumulant conversion supports order <= {MAX_CUMULANT_ORDER}")
    mz = [1.0]
    for order in range(1, n + 1):
        m_n = 0.0
        for s in range(1, order + 1):
            m_n += kappas[s - 1] * _gap_sum(mz, s, order - s)
        mz.append(m_n)
    return mz[1:]


def free_cumulants_from_moments(moments: list[float] | tuple[float, ...]) -> list[float]:
    """Free cumulants ``kappa_1..kappa_n`` of the moment sequence.

    Inverts the non-crossing moment-cumulant relation
    ``m_n = sum_{pi in NC(n)} prod_{B in pi} kappa_|B|`` exactly, via the
    same first-block recursion used in the forward direction.
    """
    n = len(moments)
    if n > MAX_CUMULANT_ORDER:
        raise BoundedInputError(f"cumulant conversion supports order <= {MAX_CUMULANT_ORDER}")
    mz = [1.0] + [float(m) for m in moments]
    kappas: list[float] = []
    for order in range(1, n + 1):
        rest = 0.0
        for s in range(1, order):
            rest += kappas[s - 1] * _gap_sum(mz, s, order - s)
        kappas.append(mz[order] - rest)
    return kappas
