import math

import pytest

import coprime_spectra as cs

#: Frozen seed for the Monte Carlo acceptance runs; the simulator is fully
#: deterministic, so every assertion below is reproducible bit for bit.
ACCEPTANCE_SEED = 2
ACCEPTANCE_N = 1000
ACCEPTANCE_REPLICAS = 100


@pytest.fixture(scope="session")
def primes_1e6():
    return cs.sieve_primes(10**6)


@pytest.fixture(scope="session")
def primes_1e4():
    return cs.sieve_primes(10**4)


@pytest.fixture(scope="session")
def mc_spectra():
    """Eigenvalue samples shared by the Monte Carlo acceptance criteria.

    100 replicas of each mask at n=1000 with Gaussian entries; criteria
    that ask for 50 replicas use the first 50.
    """
    out = {}
    for mask in ("none", "visible", "invisible"):
        spec = cs.EnsembleSpec(
            n=ACCEPTANCE_N,
            mask=mask,
            entry_law="gaussian",
            seed=ACCEPTANCE_SEED,
            replicas=ACCEPTANCE_REPLICAS,
        )
        out[mask] = cs.sample_spectra(spec, workers=4)
    return out


def monte_carlo_se(values) -> float:
    """Standard error of the mean across replicas."""
    import numpy as np

    values = np.asarray(values, dtype=float)
    return float(values.std(ddof=1) / math.sqrt(len(values)))
