"""Command-line front end: build states, run estimators, and emit
machine-readable run records.

Exit codes: 0 on success, 2 on usage/parse errors, 3 on numeric failures.
Output goes to stdout as a single JSON object (default) or CSV; identical
flags (including --seed) reproduce every field except runtime_ms.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from .errors import (
    BadParameter,
    BaseMismatch,
    DimensionMismatch,
    EigenDecompositionFailure,
    InvalidFrame,
    MarginalZeroAnomaly,
    NonFiniteSample,
    ProjmiError,
    QuadratureNotConverged,
    ReconstructionOutOfTolerance,
    UnknownFamily,
    ValidationError,
    ZeroVector,
)
from .infomeasures import (
    classical_like_mi_gaussian,
    classical_like_mi_projective,
    differential_entropy_mu,
    entropy_decomposition_mi,
    maxent_mi_closed_form,
    mi_report,
    pure_state_entropy_gaussian,
)
from .io import load_mixture, load_state
from .montecarlo import MCEstimate, SamplerConfig
from .states import (
    BipartiteDims,
    DensityMatrix,
    make_state,
    parse_state_spec,
    vn_mutual_information,
    von_neumann_entropy,
)
from .structure import assemble

_RECORD_FIELDS = (
    "command",
    "state_spec",
    "method",
    "estimate",
    "std_error",
    "n_samples",
    "seed",
    "runtime_ms",
    "version",
)

_SWEEP_FIELDS = (
    "family",
    "d",
    "method",
    "estimate",
    "std_error",
    "n_samples",
    "seed",
    "runtime_ms",
)

_NUMERIC_ERRORS = (
    NonFiniteSample,
    EigenDecompositionFailure,
    ReconstructionOutOfTolerance,
    MarginalZeroAnomaly,
    QuadratureNotConverged,
)

_USAGE_ERRORS = (
    UnknownFamily,
    BadParameter,
    DimensionMismatch,
    ValidationError,
    ZeroVector,
    InvalidFrame,
    BaseMismatch,
)


def _parse_samples(text: str) -> int:
    try:
        value = float(text)
    except ValueError as exc:
        raise BadParameter(f"--samples must be a number, got {text!r}") from exc
    n = int(value)
    if n != value or n < 2:
        raise BadParameter(f"--samples must be an integer >= 2, got {text!r}")
    return n


def _parse_dims(text: str) -> BipartiteDims:
    parts = text.replace("x", ",").split(",")
    if len(parts) != 2:
        raise BadParameter(f"--dims expects NA,NB, got {text!r}")
    try:
        a, b = (int(p) for p in parts)
    except ValueError as exc:
        raise BadParameter(f"--dims expects integers, got {text!r}") from exc
    return BipartiteDims(a, b)


def resolve_state(spec: str, seed: int, tol: float):
    """Build (DensityMatrix, BipartiteDims | None) from a --state spec.

    Beyond the make_state families this accepts ``file:path.json`` and
    ``mixture:path.json``.
    """
    text = spec.strip()
    if text.startswith("file:"):
        return load_state(text[len("file:"):], tol=tol)
    if text.startswith("mixture:"):
        mixture = load_mixture(text[len("mixture:"):], tol=tol)
        return assemble(mixture), mixture.dims
    sigma = make_state(text, seed)
    return sigma, _spec_dims(text)


def _spec_dims(spec: str):
    family, params = parse_state_spec(spec)
    if family == "maxent" and isinstance(params.get("d"), int):
        return BipartiteDims(params["d"], params["d"])
    if family == "separable_mixture":
        if isinstance(params.get("na"), int) and isinstance(params.get("nb"), int):
            return BipartiteDims(params["na"], params["nb"])
    if family == "product":
        if isinstance(params.get("a.n"), int) and isinstance(params.get("b.n"), int):
            return BipartiteDims(params["a.n"], params["b.n"])
    return None


def _require_dims(args, inferred) -> BipartiteDims:
    if args.dims is not None:
        return _parse_dims(args.dims)
    if inferred is None:
        raise BadParameter(
            "cannot infer subsystem dimensions from the state spec; pass --dims NA,NB"
        )
    return inferred


def _pure_vector(sigma: DensityMatrix) -> np.ndarray:
    vals, vecs = np.linalg.eigh(sigma.matrix)
    if abs(vals[-1] - 1.0) > 1e-9:
        raise BadParameter(
            f"method gaussian-overlap needs a pure state; top eigenvalue is {vals[-1]!r}"
        )
    return vecs[:, -1]


def _record(command: str, args, method: str, estimate, runtime_ms: int) -> dict:
    if isinstance(estimate, MCEstimate):
        value, se, n = estimate.mean, estimate.std_error, estimate.n_samples
    else:
        value, se, n = float(estimate), 0.0, 0
    return {
        "command": command,
        "state_spec": args.state,
        "method": method,
        "estimate": value,
        "std_error": se,
        "n_samples": n,
        "seed": args.seed,
        "runtime_ms": runtime_ms,
        "version": __version__,
    }


def _emit_record(record: dict, out: str):
    if out == "json":
        print(json.dumps(record))
    else:
        print(",".join(record.keys()))
        print(",".join(_csv_cell(record[k]) for k in record))


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _estimate_dict(est: MCEstimate) -> dict:
    return {
        "estimate": est.mean,
        "std_error": est.std_error,
        "n_samples": est.n_samples,
        "seed": est.seed,
        "method": est.method,
    }


def cmd_entropy(args) -> int:
    start = time.perf_counter()
    sigma, _ = resolve_state(args.state, args.seed, args.tol)
    cfg = SamplerConfig(args.seed, args.samples, args.batch)
    if args.method == "von-neumann":
        result = von_neumann_entropy(sigma)
    elif args.method == "canonical-mu":
        result = differential_entropy_mu(sigma, cfg)
    elif args.method == "gaussian-overlap":
        result = pure_state_entropy_gaussian(_pure_vector(sigma), cfg)
    else:  # pragma: no cover - argparse choices guard this
        raise BadParameter(f"unknown entropy method {args.method!r}")
    runtime_ms = int((time.perf_counter() - start) * 1000)
    _emit_record(_record("entropy", args, args.method, result, runtime_ms), args.out)
    return 0


def cmd_mi(args) -> int:
    start = time.perf_counter()
    sigma, inferred = resolve_state(args.state, args.seed, args.tol)
    dims = _require_dims(args, inferred)
    if sigma.dim != dims.joint:
        raise DimensionMismatch(
            f"state dimension {sigma.dim} != dim_a*dim_b = {dims.joint}"
        )
    cfg = SamplerConfig(args.seed, args.samples, args.batch)
    if args.method == "all":
        report = mi_report(sigma, dims, cfg)
        runtime_ms = int((time.perf_counter() - start) * 1000)
        payload = {
            "command": "mi",
            "state_spec": args.state,
            "method": "all",
            "dims": [dims.dim_a, dims.dim_b],
            "projective": _estimate_dict(report.projective),
            "gaussian": _estimate_dict(report.gaussian),
            "von_neumann": report.von_neumann,
            "ratio_gaussian_over_projective": report.ratio_gaussian_over_projective,
            "n_samples": args.samples,
            "seed": args.seed,
            "runtime_ms": runtime_ms,
            "version": __version__,
        }
        if args.out == "json":
            print(json.dumps(payload))
        else:
            print(",".join(_RECORD_FIELDS))
            for name, est in (
                ("projective", report.projective),
                ("gaussian", report.gaussian),
            ):
                row = _record("mi", args, name, est, runtime_ms)
                print(",".join(_csv_cell(row[k]) for k in _RECORD_FIELDS))
            row = _record("mi", args, "von-neumann", report.von_neumann, runtime_ms)
            print(",".join(_csv_cell(row[k]) for k in _RECORD_FIELDS))
        return 0
    if args.method == "von-neumann":
        result = vn_mutual_information(sigma, dims)
    elif args.method == "projective":
        result = classical_like_mi_projective(sigma, dims, cfg)
    elif args.method == "gaussian-overlap":
        result = classical_like_mi_gaussian(sigma, dims, cfg)
    elif args.method == "decomposition":
        result = entropy_decomposition_mi(sigma, dims, cfg)
    else:  # pragma: no cover - argparse choices guard this
        raise BadParameter(f"unknown mi method {args.method!r}")
    runtime_ms = int((time.perf_counter() - start) * 1000)
    _emit_record(_record("mi", args, args.method, result, runtime_ms), args.out)
    return 0


def _parse_d_range(text: str) -> list[int]:
    raw = text.strip()
    if ":" in raw:
        lo, _, hi = raw.partition(":")
        try:
            start, stop = int(lo), int(hi)
        except ValueError as exc:
            raise BadParameter(f"--d-range expects LO:HI or a comma list, got {text!r}") from exc
        values = list(range(start, stop + 1))
    else:
        try:
            values = [int(p) for p in raw.split(",") if p.strip()]
        except ValueError as exc:
            raise BadParameter(f"--d-range expects LO:HI or a comma list, got {text!r}") from exc
    if not values or any(d < 3 for d in values):
        raise BadParameter(f"every d in --d-range must be >= 3, got {text!r}")
    return values


def _sweep_state(family: str, d: int, seed: int) -> DensityMatrix:
    if family == "maxent":
        return make_state(f"maxent:d={d}", seed)
    if family == "product":
        return make_state(f"product:a.n={d},b.n={d}", seed)
    raise BadParameter(f"sweep family must be 'maxent' or 'product', got {family!r}")


def cmd_sweep(args) -> int:
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    allowed = {"von-neumann", "projective", "gaussian-overlap", "decomposition", "closed-form"}
    unknown = [m for m in methods if m not in allowed]
    if unknown:
        raise BadParameter(f"unknown sweep method(s) {unknown}; choose from {sorted(allowed)}")
    if not methods:
        raise BadParameter("sweep needs at least one method")
    if "closed-form" in methods and args.family != "maxent":
        raise BadParameter("method closed-form only applies to the maxent family")

    rows = []
    for d in _parse_d_range(args.d_range):
        dims = BipartiteDims(d, d)
        sigma = _sweep_state(args.family, d, args.seed)
        for method in methods:
            start = time.perf_counter()
            cfg = SamplerConfig(args.seed, args.samples, args.batch)
            if method == "von-neumann":
                est, se, n = vn_mutual_information(sigma, dims), 0.0, 0
            elif method == "closed-form":
                est, se, n = maxent_mi_closed_form(d), 0.0, 0
            else:
                runner = {
                    "projective": classical_like_mi_projective,
                    "gaussian-overlap": classical_like_mi_gaussian,
                    "decomposition": entropy_decomposition_mi,
                }[method]
                mc = runner(sigma, dims, cfg)
                est, se, n = mc.mean, mc.std_error, mc.n_samples
            runtime_ms = int((time.perf_counter() - start) * 1000)
            rows.append(
                {
                    "family": args.family,
                    "d": d,
                    "method": method,
                    "estimate": est,
                    "std_error": se,
                    "n_samples": n,
                    "seed": args.seed,
                    "runtime_ms": runtime_ms,
                }
            )

    if args.out == "json":
        print(json.dumps(rows))
    else:
        print(",".join(_SWEEP_FIELDS))
        for row in rows:
            print(",".join(_csv_cell(row[k]) for k in _SWEEP_FIELDS))
    return 0


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--samples", default="1e5", help="sample count, e.g. 100000 or 1e6")
    parser.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    parser.add_argument("--batch", type=int, default=4096, help="samples per batch")
    parser.add_argument("--out", choices=("json", "csv"), default=None)
    parser.add_argument("--tol", type=float, default=1e-10,
                        help="validation tolerance for states loaded from files")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="projmi",
        description="Projective-space entropies and mutual information of quantum states.",
    )
    sub = parser.add_subparsers(dest="subcommand")

    p_entropy = sub.add_parser("entropy", help="differential or spectral entropy of a state")
    p_entropy.add_argument("--state", required=True, help="state spec, e.g. maxent:d=3")
    p_entropy.add_argument(
        "--method",
        required=True,
        choices=("canonical-mu", "gaussian-overlap", "von-neumann"),
    )
    p_entropy.add_argument("--dims", default=None, help="ignored; present for flag symmetry")
    _add_common(p_entropy)
    p_entropy.set_defaults(handler=cmd_entropy, default_out="json")

    p_mi = sub.add_parser("mi", help="mutual-information estimators for a bipartite state")
    p_mi.add_argument("--state", required=True)
    p_mi.add_argument(
        "--method",
        required=True,
        choices=("projective", "gaussian-overlap", "von-neumann", "decomposition", "all"),
    )
    p_mi.add_argument("--dims", default=None, help="subsystem dims NA,NB when not inferable")
    _add_common(p_mi)
    p_mi.set_defaults(handler=cmd_mi, default_out="json")

    p_sweep = sub.add_parser("sweep", help="estimate across a range of dimensions, CSV out")
    p_sweep.add_argument("--family", required=True, choices=("maxent", "product"))
    p_sweep.add_argument("--d-range", required=True, help="inclusive range LO:HI or comma list")
    p_sweep.add_argument(
        "--method",
        required=True,
        help="comma list from: von-neumann, projective, gaussian-overlap, decomposition, closed-form",
    )
    _add_common(p_sweep)
    p_sweep.set_defaults(handler=cmd_sweep, default_out="csv")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_help(file=sys.stderr)
        return 2
    try:
        args.samples = _parse_samples(args.samples)
        if args.out is None:
            args.out = args.default_out
        return args.handler(args)
    except _NUMERIC_ERRORS as exc:
        print(f"projmi: numeric failure: {exc}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as exc:
        print(f"projmi: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"projmi: {exc}", file=sys.stderr)
        return 2
    except ProjmiError as exc:  # pragma: no cover - catch-all for new subtypes
        print(f"projmi: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
