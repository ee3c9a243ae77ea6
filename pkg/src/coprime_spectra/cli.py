"""Command line interface.

Subcommands:

* ``moments``      exact limit moments of all three ensembles
* ``simulate``     Monte Carlo spectra with plot-ready CSV exports
* ``verify``       cross-checks the exact pipeline against its oracles
* ``coprime-prob`` edge-coprimality constant of a forest or complete graph
* ``census``       Catalan words grouped by tree shape

Every output file embeds the run configuration and a SHA-256 of the run
inputs as leading ``#`` comment lines (CSV) or top-level fields (JSON).
Numeric CSV fields are written with ``repr`` and reproduce byte-identically
for identical configurations.  Exit codes: 0 success, 2 configuration
error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .catalan import MAX_HALF_LENGTH, catalan_number, enumerate_catalan_words, shape_census
from .errors import BoundedInputError, NotAForestError
from .euler import (
    EulerProduct,
    coprime_probability,
    coprime_tuple_count,
    euler_product,
    sieve_primes,
    totient_sum,
)
from .graphs import Forest
from .moments import (
    ShapeCache,
    invisible_moments,
    invisible_word_term,
    invisible_word_term_by_positions,
    semicircle_moments,
    visible_moments,
)
from .polynomials import complete_graph_coprimality
from .simulate import EnsembleSpec, sample_spectra, summarize

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_VERIFY = 3

PRIME_BOUND_ENV = "COPRIME_SPECTRA_PRIME_BOUND"
DEFAULT_PRIME_BOUND = 10**6
DEFAULT_CENTERS = {"none": 2.0, "visible": 1.705, "invisible": 1.515}


@dataclass(frozen=True)
class RunConfig:
    """Validated command configuration, serialized verbatim into outputs."""

    command: str
    params: dict

    def to_json(self) -> str:
        return json.dumps(
            {"command": self.command, "params": self.params}, sort_keys=True
        )

    def sha256(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()


def _default_prime_bound() -> int:
    raw = os.environ.get(PRIME_BOUND_ENV)
    if raw is None:
        return DEFAULT_PRIME_BOUND
    try:
        return int(raw)
    except ValueError as exc:
        raise BoundedInputError(f"{PRIME_BOUND_ENV} must be an integer, got {raw!r}") from exc


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _write_table(path: Path | None, config: RunConfig, input_hash: str,
                 columns: list[str], rows: list[list], fmt: str) -> None:
    if fmt == "json":
        payload = {
            "config": json.loads(config.to_json()),
            "input_sha256": input_hash,
            "columns": columns,
            "rows": rows,
        }
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# config: {config.to_json()}\n")
        buf.write(f"# input_sha256: {input_hash}\n")
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_fmt(x) for x in row) + "\n")
        text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)


def _write_manifest(path: Path, config: RunConfig, input_hash: str,
                    execution: dict | None = None) -> None:
    manifest = {
        "config": json.loads(config.to_json()),
        "input_sha256": input_hash,
        "versions": {
            "coprime_spectra": __version__,
            "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
    }
    if execution:
        manifest["execution"] = execution
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# moments
# ---------------------------------------------------------------------------


def cmd_moments(args: argparse.Namespace) -> int:
    if args.kmax < 1 or args.kmax > MAX_HALF_LENGTH:
        raise BoundedInputError(f"--kmax must lie in 1..{MAX_HALF_LENGTH}")
    config = RunConfig("moments", {"kmax": args.kmax, "prime_bound": args.prime_bound,
                                   "format": args.format})
    primes = sieve_primes(args.prime_bound)
    cache = ShapeCache()
    tables = [
        semicircle_moments(args.kmax),
        visible_moments(args.kmax, primes, cache),
        invisible_moments(args.kmax, primes, cache),
    ]
    visible, invisible = tables[1], tables[2]
    comparison = {
        k: invisible.value(k) <= visible.value(k) for k in range(1, args.kmax + 1)
    }
    rows = []
    for table in tables:
        for mv in table.even_moments:
            rows.append([table.ensemble, mv.k, mv.value, mv.tail_bound,
                         str(comparison[mv.k]).lower()])
    _write_table(args.out, config, config.sha256(),
                 ["ensemble", "k", "moment", "tail_bound", "invisible_le_visible"],
                 rows, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# census
# ---------------------------------------------------------------------------


def cmd_census(args: argparse.Namespace) -> int:
    if args.kmax < 1 or args.kmax > MAX_HALF_LENGTH:
        raise BoundedInputError(f"--kmax must lie in 1..{MAX_HALF_LENGTH}")
    config = RunConfig("census", {"kmax": args.kmax, "format": args.format})
    rows = []
    for k in range(1, args.kmax + 1):
        for shape, count in sorted(shape_census(k).items()):
            rows.append([k, shape.code, shape.vertex_count, count])
    _write_table(args.out, config, config.sha256(),
                 ["k", "shape", "vertices", "words"], rows, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# coprime-prob
# ---------------------------------------------------------------------------


def cmd_coprime_prob(args: argparse.Namespace) -> int:
    primes = sieve_primes(args.prime_bound)
    if args.complete is not None:
        if args.complete < 1:
            raise BoundedInputError("--complete needs a positive vertex count")
        result = euler_product(complete_graph_coprimality(args.complete), primes)
        input_hash = hashlib.sha256(f"K{args.complete}".encode()).hexdigest()
        params = {"complete": args.complete, "prime_bound": args.prime_bound}
    else:
        text = Path(args.graph).read_text()
        input_hash = hashlib.sha256(text.encode()).hexdigest()
        try:
            forest = Forest.from_json(text)
        except NotAForestError as exc:
            raise BoundedInputError(
                f"unsupported graph: {exc}; only forests (or complete graphs via "
                f"--complete) are supported"
            ) from exc
        result = coprime_probability(forest, primes)
        params = {"graph": str(args.graph), "prime_bound": args.prime_bound}
    config = RunConfig("coprime-prob", params)
    payload = {
        "config": json.loads(config.to_json()),
        "input_sha256": input_hash,
        "value": result.value,
        "tail_bound": result.tail_bound,
        "prime_bound": result.prime_bound,
    }
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    spec = EnsembleSpec(n=args.n, mask=args.mask, entry_law=args.law,
                        seed=args.seed, replicas=args.replicas)
    center = args.center if args.center is not None else DEFAULT_CENTERS[args.mask]
    # Only result-determining parameters enter the embedded config; worker
    # count and output location are execution details kept to the manifest.
    params = {
        "n": spec.n, "mask": spec.mask, "law": spec.entry_law, "seed": spec.seed,
        "replicas": spec.replicas, "bins": args.bins, "rescale": args.rescale,
        "center": center, "hist_range": list(args.hist_range),
        "dump_eigenvalues": args.dump_eigenvalues,
    }
    config = RunConfig("simulate", params)
    input_hash = config.sha256()

    samples = sample_spectra(spec, workers=args.workers)
    summary = summarize(
        samples, bins=args.bins, hist_range=tuple(args.hist_range),
        rescale=args.rescale, center=center,
    )

    out = Path(args.out_dir)
    moment_cols = [f"m{h}" for h in range(1, summary.moments.shape[1] + 1)]
    rows = []
    for i, r in enumerate(summary.replica_indices):
        rows.append([int(r), float(summary.lambda_max[i]),
                     float(summary.max_fluctuations[i])]
                    + [float(x) for x in summary.moments[i]])
    _write_table(out / "replicas.csv", config, input_hash,
                 ["replica", "lambda_max", "max_fluct"] + moment_cols, rows, "csv")

    hist_rows = []
    for b in range(len(summary.hist_counts)):
        hist_rows.append([float(summary.hist_edges[b]), float(summary.hist_edges[b + 1]),
                          int(summary.hist_counts[b]), float(summary.hist_density[b])])
    _write_table(out / "histogram.csv", config, input_hash,
                 ["bin_left", "bin_right", "count", "density"], hist_rows, "csv")

    if args.dump_eigenvalues:
        eig_rows = []
        for i, r in enumerate(summary.replica_indices):
            for j, lam in enumerate(samples[i].eigenvalues):
                eig_rows.append([int(r), j, float(lam)])
        _write_table(out / "eigenvalues.csv", config, input_hash,
                     ["replica", "index", "value"], eig_rows, "csv")

    _write_manifest(out / "manifest.json", config, input_hash,
                    execution={"workers": args.workers, "out_dir": str(out)})
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


class _CorruptedCache(ShapeCache):
    """Test hook: perturbs every cached product to prove the checks bite."""

    def probability(self, forest, primes):
        result = super().probability(forest, primes)
        return EulerProduct(result.value * 1.01, result.tail_bound,
                            result.prime_bound, result.polynomial)


def _verification_checks(prime_bound: int, corrupt_cache: bool):
    primes = sieve_primes(prime_bound)
    cache = _CorruptedCache() if corrupt_cache else ShapeCache()

    checks: list[tuple[str, float, float]] = []  # name, |delta|, tolerance

    word_counts = [len(enumerate_catalan_words(k)) for k in range(1, 7)]
    expected = [catalan_number(k) for k in range(1, 7)]
    checks.append(("word counts k=1..6 vs binomial formula",
                   float(max(abs(a - b) for a, b in zip(word_counts, expected))), 0.0))

    shape_counts = [len(shape_census(k)) for k in range(1, 7)]
    checks.append(("tree shape counts k=1..6 vs 1,1,2,3,6,11",
                   float(max(abs(a - b) for a, b in zip(shape_counts, [1, 1, 2, 3, 6, 11]))),
                   0.0))

    census3 = sorted(shape_census(3).values())
    checks.append(("length-6 census multiplicities vs {2, 3}",
                   float(census3 != [2, 3]), 0.0))

    checks.append(("totient sum at 10 vs direct value 32",
                   float(abs(totient_sum(10) - 32)), 0.0))
    direct_200 = sum(sum(1 for i in range(1, j + 1) if math.gcd(i, j) == 1)
                     for j in range(1, 201))
    checks.append(("totient sum at 200 vs gcd enumeration",
                   float(abs(totient_sum(200) - direct_200)), 0.0))

    edge = Forest(2, ((0, 1),))
    edge_prob = cache.probability(edge, primes)
    checks.append(("single-edge product vs 6 / pi^2",
                   abs(edge_prob.value - 6.0 / math.pi**2),
                   edge_prob.tail_bound + 1e-12))

    n_edge = 10**5
    count = coprime_tuple_count(edge, n_edge)
    checks.append(("single-edge count at n=1e5 vs product",
                   abs(count / n_edge**2 - edge_prob.value),
                   5.0 * (math.log(n_edge) / n_edge + edge_prob.tail_bound)))

    path3 = Forest(3, ((0, 1), (1, 2)))
    path3_prob = cache.probability(path3, primes)
    n_path = 10**4
    count3 = coprime_tuple_count(path3, n_path)
    checks.append(("3-path count at n=1e4 vs product",
                   abs(count3 / n_path**3 - path3_prob.value),
                   5.0 * (math.log(n_path) ** 2 / n_path + path3_prob.tail_bound)))

    worst = 0.0
    for k in range(1, 4):
        for word in enumerate_catalan_words(k):
            collapsed = invisible_word_term(word, primes, cache)
            direct = invisible_word_term_by_positions(word, primes, ShapeCache())
            worst = max(worst, abs(collapsed.value - direct.value))
    checks.append(("collapsed vs positionwise inclusion-exclusion, k<=3", worst, 1e-12))

    m2_visible = visible_moments(1, primes, cache).value(1)
    m2_invisible = invisible_moments(1, primes, cache).value(1)
    checks.append(("second moments sum to 1",
                   abs(m2_visible + m2_invisible - 1.0), 1e-10))

    return checks


def cmd_verify(args: argparse.Namespace) -> int:
    checks = _verification_checks(args.prime_bound, args.corrupt_cache)
    failures = 0
    for name, delta, tol in checks:
        ok = delta <= tol
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {name}  delta={delta:.3e} tol={tol:.3e}")
    if failures:
        print(f"{failures} of {len(checks)} checks failed")
        return EXIT_VERIFY
    print(f"all {len(checks)} checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coprime-spectra",
        description="Exact and Monte Carlo spectral statistics of "
                    "coprimality-masked Wigner matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_prime_bound(p: argparse.ArgumentParser) -> None:
        p.add_argument("--prime-bound", type=int, default=None,
                       help=f"prime cutoff for Euler products "
                            f"(default {DEFAULT_PRIME_BOUND}, env {PRIME_BOUND_ENV})")

    p = sub.add_parser("moments", help="exact limit moments of all three ensembles")
    p.add_argument("--kmax", type=int, required=True, help="largest half-order k")
    add_prime_bound(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("census", help="Catalan words grouped by tree shape")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("coprime-prob",
                       help="edge-coprimality constant of a forest or complete graph")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--graph", type=Path,
                       help='JSON file {"vertices": m, "edges": [[u, v], ...]}')
    group.add_argument("--complete", type=int, metavar="K",
                       help="use the complete graph on K vertices")
    add_prime_bound(p)
    p.set_defaults(func=cmd_coprime_prob)

    p = sub.add_parser("simulate", help="Monte Carlo spectra with CSV exports")
    p.add_argument("--n", type=int, required=True, help="matrix dimension")
    p.add_argument("--mask", choices=("none", "visible", "invisible"), default="none")
    p.add_argument("--law", choices=("gaussian", "rademacher", "uniform"),
                   default="gaussian")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicas", type=int, default=1)
    p.add_argument("--bins", type=int, default=81)
    p.add_argument("--hist-range", type=float, nargs=2, default=(-2.2, 2.2),
                   metavar=("LO", "HI"))
    p.add_argument("--rescale", action="store_true",
                   help="rescale eigenvalues to unit limiting second moment")
    p.add_argument("--center", type=float, default=None,
                   help="center for n^(2/3) largest-eigenvalue fluctuations "
                        "(default 2 / 1.705 / 1.515 by mask)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--dump-eigenvalues", action="store_true")
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="run the oracle cross-check suite")
    add_prime_bound(p)
    p.add_argument("--corrupt-cache", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "prime_bound") and args.prime_bound is None:
        try:
            args.prime_bound = _default_prime_bound()
        except BoundedInputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        return args.func(args)
    except (BoundedInputError, NotAForestError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
