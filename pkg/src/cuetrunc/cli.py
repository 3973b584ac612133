"""Command-line surface.

Thin adapters over the library: every numeric result comes from a library
call, the CLI only parses flags, dispatches and serializes.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 I/O
failure.  CSV output formats floats with 17 significant digits; JSON uses
Python's shortest-roundtrip float repr.  Both reparse to identical
binary64 values and are byte-stable across runs and worker counts.
"""

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from . import diagnostics, exact, sampling
from .errors import AmbiguousRegimeError, ConvergenceError, DomainError
from .laws import law_cdf
from .normalization import (EnsembleSpec, RegimeLabel, classify_regime,
                            constants_for, regime_candidates)

_REGIMES = {
    "auto": None,
    "thm1": RegimeLabel.THM1_COMBINED,
    "thm2": RegimeLabel.THM2_SUBLOG,
    "thm3": RegimeLabel.THM3_FIXED_K,
    "thm4": RegimeLabel.THM4_INTERMEDIATE,
}

_METHODS = {
    "beta": sampling.sample_beta_max,
    "gamma-ratio": sampling.sample_gamma_ratio,
    "matrix": sampling.oracle_radius,
}


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def emit_csv(records) -> str:
    if not records:
        raise DomainError("refusing to emit an empty record set")
    fields = list(records[0].keys())
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for rec in records:
        writer.writerow([_fmt(rec[f]) for f in fields])
    return buf.getvalue()


def parse_csv(text: str):
    """Inverse of emit_csv for numeric records (used by tests and scripts)."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    out = []
    for row in body:
        rec = {}
        for key, cell in zip(header, row):
            try:
                rec[key] = int(cell)
            except ValueError:
                try:
                    rec[key] = float(cell)
                except ValueError:
                    rec[key] = cell
        out.append(rec)
    return out


def emit_json(payload) -> str:
    if payload is None or payload == [] or payload == {}:
        raise DomainError("refusing to emit an empty record set")
    return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _write_output(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _to_int(value, flag: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise DomainError(f"{flag} must be an integer, got {value!r}")


def _spec_from(args) -> EnsembleSpec:
    n = _to_int(args.n, "--n")
    if args.k is not None and args.p is not None:
        raise DomainError("give --k or --p, not both")
    if args.k is not None:
        return EnsembleSpec.from_depth(n, _to_int(args.k, "--k"))
    if args.p is not None:
        return EnsembleSpec(n=n, p=args.p)
    raise DomainError("one of --k or --p is required")


def _spec_list(args) -> list[EnsembleSpec]:
    ns = [int(s) for s in str(args.n).split(",")]
    if args.k is None:
        raise DomainError("--k is required (single value or comma list)")
    ks = [int(s) for s in str(args.k).split(",")]
    if len(ks) == 1:
        ks = ks * len(ns)
    if len(ks) != len(ns):
        raise DomainError(f"--k lists {len(ks)} values for {len(ns)} values of --n")
    return [EnsembleSpec.from_depth(n, k) for n, k in zip(ns, ks)]


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"--grid expects lo:hi:step, got {text!r}")
    lo, hi, step = (float(p) for p in parts)
    return diagnostics.make_grid(lo, hi, step)


def _resolve_regime(spec: EnsembleSpec, name: str):
    forced = _REGIMES[name]
    if forced is not None:
        return forced
    label = classify_regime(spec)
    if label is RegimeLabel.AMBIGUOUS:
        raise AmbiguousRegimeError(regime_candidates(spec))
    return label


def _norm_record(spec: EnsembleSpec, norm) -> dict:
    rec = {
        "n": spec.n,
        "k": spec.k,
        "p": spec.p,
        "regime": norm.regime.value,
        "law": norm.law.name,
        "A": norm.A,
        "B": norm.B,
    }
    if norm.root is not None:
        rec["lambda"] = norm.root.lam
        rec["residual"] = norm.root.residual
        rec["iterations"] = norm.root.iterations
    if norm.gamma_quantile is not None:
        rec["gamma_quantile"] = norm.gamma_quantile
    return rec


def _cmd_constants(args):
    spec = _spec_from(args)
    norm = constants_for(spec, _resolve_regime(spec, args.regime))
    rec = _norm_record(spec, norm)
    return [rec], rec


def _cmd_cdf(args):
    spec = _spec_from(args)
    if (args.r is None) == (args.x is None):
        raise DomainError("cdf needs exactly one of --r or --x")
    if args.r is not None:
        rec = {"n": spec.n, "k": spec.k, "r": args.r,
               "cdf": exact.radius_cdf(spec, args.r)}
    else:
        norm = constants_for(spec, _resolve_regime(spec, args.regime))
        value, clamped = exact.standardized_cdf(spec, norm, args.x, return_clamped=True)
        rec = {"n": spec.n, "k": spec.k, "x": args.x, "regime": norm.regime.value,
               "A": norm.A, "B": norm.B, "cdf": value, "clamped": clamped}
    return [rec], rec


def _cmd_quantile(args):
    spec = _spec_from(args)
    if args.q is None:
        raise DomainError("quantile needs --q")
    norm = None
    if args.regime != "auto":
        norm = constants_for(spec, _resolve_regime(spec, args.regime))
    r = exact.radius_quantile(spec, args.q, norm)
    rec = {"n": spec.n, "k": spec.k, "q": args.q, "r": r,
           "cdf": exact.radius_cdf(spec, r)}
    return [rec], rec


def _batch_payload(batch) -> dict:
    return {
        "n": batch.spec.n,
        "k": batch.spec.k,
        "p": batch.spec.p,
        "method": batch.method,
        "seed": batch.seed,
        "count": batch.requested,
        "excluded": batch.excluded,
        "values": [float(v) for v in batch.values],
    }


def _cmd_sample(args):
    spec = _spec_from(args)
    batch = _METHODS[args.method](spec, args.count or 1000, args.seed)
    if batch.excluded:
        print(f"excluded {batch.excluded} of {batch.requested} draws "
              "(power iteration did not converge)", file=sys.stderr)
    records = [{"index": i, "value": float(v)} for i, v in enumerate(batch.values)]
    return records, _batch_payload(batch)


def _cmd_oracle(args):
    args.method = "matrix"
    return _cmd_sample(args)


def _cmd_gof(args):
    spec = _spec_from(args)
    batch = _METHODS[args.method](spec, args.count or 1000, args.seed)
    rec = {
        "n": spec.n,
        "k": spec.k,
        "method": args.method,
        "seed": args.seed,
        "count": batch.requested,
        "excluded": batch.excluded,
        "ks_exact": diagnostics.ks_statistic(
            batch.values, lambda r: exact.radius_cdf(spec, r)),
    }
    if args.regime != "auto" or classify_regime(spec) is not RegimeLabel.AMBIGUOUS:
        norm = constants_for(spec, _resolve_regime(spec, args.regime))
        standardized = (batch.values - norm.A) / norm.B
        rec["regime"] = norm.regime.value
        rec["law"] = norm.law.name
        rec["ks_law"] = diagnostics.ks_statistic(
            standardized, lambda x: law_cdf(norm.law, x))
    return [rec], rec


def _cmd_converge(args):
    specs = _spec_list(args)
    regime = _REGIMES[args.regime]
    if regime is None:
        regime = _resolve_regime(specs[0], "auto")
    grid = _parse_grid(args.grid) if args.grid else None
    reports = diagnostics.convergence_table(
        specs, regime, grid=grid, samples=args.count or 0, seed=args.seed,
        method=args.method)
    records = []
    for spec, rep in zip(specs, reports):
        records.append({
            "n": spec.n,
            "k": spec.k,
            "regime": regime.value,
            "law": rep.law.name,
            "sup_grid_distance": rep.sup_grid_distance,
            "ks_statistic": rep.ks_statistic,
            "sample_count": rep.sample_count,
        })
    return records, records


def _cmd_lemma(args):
    which = args.which
    seed = args.seed
    if args.x is None:
        args.x = 0.0
    if which == 5:
        specs = _spec_list(args)
        checks = diagnostics.check_root_gap_growth(specs)
    elif which == 6:
        checks = [diagnostics.check_shifted_gap_uniform(_spec_from(args), args.x)]
    elif which == 7:
        checks = [diagnostics.check_leading_term_rate(_spec_from(args), args.x)]
    elif which == 8:
        checks = [diagnostics.check_tail_sum_limit(_spec_from(args), args.x)]
    elif which == 10:
        checks = [diagnostics.check_single_draw_escape(
            _spec_from(args), args.x, args.count or 10_000, seed)]
    elif which == 11:
        spec = _spec_from(args)
        m = diagnostics.tail_cut(spec)
        checks = [diagnostics.check_gamma_ratio_concentration(
            spec.n, m, args.count or 100, seed)]
    elif which == 12:
        spec = _spec_from(args)
        rep = diagnostics.check_min_ratio_law(spec, args.count or 10_000, seed)
        rec = {"which": 12, "n": spec.n, "k": spec.k,
               "ks_statistic": rep.ks_statistic,
               "sup_grid_distance": rep.sup_grid_distance,
               "sample_count": rep.sample_count, "law": rep.law.name}
        return [rec], rec
    else:
        raise DomainError(f"--which must be one of 5,6,7,8,10,11,12, got {which}")
    records = []
    for c in checks:
        rec = {"which": c.check_id, "observed": c.observed, "target": c.target,
               "tolerance": c.tolerance, "passed": c.passed}
        rec.update({k: v for k, v in sorted(c.inputs.items())})
        records.append(rec)
    return records, (records if len(records) > 1 else records[0])


_COMMANDS = {
    "constants": _cmd_constants,
    "cdf": _cmd_cdf,
    "quantile": _cmd_quantile,
    "sample": _cmd_sample,
    "oracle": _cmd_oracle,
    "gof": _cmd_gof,
    "converge": _cmd_converge,
    "lemma": _cmd_lemma,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuetrunc",
        description="Spectral radius of truncated Haar-unitary matrices: "
                    "constants, exact CDF/quantiles, samplers, diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--n", required=True,
                       help="matrix dimension (comma list for converge / lemma 5)")
        p.add_argument("--k", default=None, help="truncation depth n - p")
        p.add_argument("--p", type=int, default=None, help="truncated block size")
        p.add_argument("--regime", choices=sorted(_REGIMES), default="auto")
        p.add_argument("--r", type=float, default=None, help="radius in [0,1]")
        p.add_argument("--x", type=float, default=None, help="standardized coordinate")
        p.add_argument("--q", type=float, default=None, help="quantile level in (0,1)")
        p.add_argument("--count", type=int, default=None,
                       help="draw/trial count (command-specific default)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--method", choices=sorted(_METHODS), default="beta")
        p.add_argument("--grid", default=None, help="x grid as lo:hi:step")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", default=None, help="output path (atomic write)")
        p.add_argument("--which", type=int, default=None,
                       help="lemma check id: 5, 6, 7, 8, 10, 11 or 12")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "lemma" and args.which is None:
        print("error: lemma requires --which", file=sys.stderr)
        return 2
    try:
        records, payload = _COMMANDS[args.command](args)
        text = emit_csv(records) if args.format == "csv" else emit_json(payload)
        _write_output(text, args.out)
    except (DomainError, AmbiguousRegimeError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ConvergenceError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"i/o failure: {err}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
