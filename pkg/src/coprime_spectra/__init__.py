"""Exact limiting spectral moments of coprimality-masked Wigner matrices.

The visible ensemble zeroes every entry whose 1-based indices share a
common factor; the invisible ensemble keeps exactly those entries.  Limit
moments of both are computed exactly through Catalan-word combinatorics,
independence polynomials of trees, and Euler products over primes, and are
cross-checked by finite-range coprimality counts and a Monte Carlo
simulator.
"""

__version__ = "0.1.0"

from .catalan import (
    CatalanWord,
    catalan_number,
    enumerate_catalan_words,
    shape_census,
    word_to_tree,
)
from .errors import (
    BoundedInputError,
    ConsistencyError,
    NonpositiveFactorError,
    NotAForestError,
)
from .euler import (
    EulerProduct,
    PrimeTable,
    coprime_probability,
    coprime_tuple_count,
    euler_product,
    sieve_primes,
    totient_sum,
)
from .graphs import Forest, LabeledTree, TreeShape, canonical_code, canonical_shape
from .moments import (
    MomentTable,
    MomentValue,
    ShapeCache,
    free_cumulants_from_moments,
    invisible_moments,
    invisible_word_term,
    invisible_word_term_by_positions,
    moments_from_free_cumulants,
    semicircle_moments,
    subgraph_for_positions,
    visible_moments,
)
from .polynomials import (
    IntPolynomial,
    complete_graph_coprimality,
    coprimality_polynomial,
    independence_polynomial,
)
from .simulate import (
    EnsembleSpec,
    SpectralSummary,
    SpectrumSample,
    eigenvalues,
    entry_uniforms,
    generate_matrix,
    mask_density,
    mask_matrix,
    rescale_factor,
    sample_spectra,
    summarize,
)

__all__ = [
    "BoundedInputError",
    "CatalanWord",
    "ConsistencyError",
    "EnsembleSpec",
    "EulerProduct",
    "Forest",
    "IntPolynomial",
    "LabeledTree",
    "MomentTable",
    "MomentValue",
    "NonpositiveFactorError",
    "NotAForestError",
    "PrimeTable",
    "ShapeCache",
    "SpectralSummary",
    "SpectrumSample",
    "TreeShape",
    "canonical_code",
    "canonical_shape",
    "catalan_number",
    "complete_graph_coprimality",
    "coprimality_polynomial",
    "coprime_probability",
    "coprime_tuple_count",
    "eigenvalues",
    "entry_uniforms",
    "enumerate_catalan_words",
    "euler_product",
    "free_cumulants_from_moments",
    "generate_matrix",
    "independence_polynomial",
    "invisible_moments",
    "invisible_word_term",
    "invisible_word_term_by_positions",
    "mask_density",
    "mask_matrix",
    "moments_from_free_cumulants",
    "rescale_factor",
    "sample_spectra",
    "semicircle_moments",
    "shape_census",
    "sieve_primes",
    "subgraph_for_positions",
    "summarize",
    "totient_sum",
    "visible_moments",
    "word_to_tree",
]
