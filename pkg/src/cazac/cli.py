"""
Generate, check, classify and optimize CAZAC sequences.

Usage: ``cazac <command> [options]``. Exit codes: 0 success, 1 usage error, 2 validation error, 3 non-convergence.
"""

import argparse
import csv
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
import io as _io
import json
import logging
from pathlib import Path
import sys

import numpy as np

from . import __version__, families
from .anneal import AnnealConfig, anneal_optimize, best_of
from .io import (
    SequenceFileError, atomic_write, dumps_json, format_csv, read_sequence, round_sig,
    sequence_to_dict, sequence_values,
)
from .ipuc import IpucConfig, ipuc_batch, ipuc_run
from .metrics import discrepancy, lobe_ratio
from .newton import NewtonError, multistart, newton_solve
from .seqcore import PhaseSequence, canonicalize
from .transforms import TransformChain, classify8

log = logging.getLogger("cazac")

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_NONCONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class ValidationError(Exception):
    pass


class NonConvergence(Exception):
    pass


@dataclass
class RunManifest:
    """Provenance attached to every output; only ``started``/``finished`` vary between reruns."""

    command: str
    config: dict
    version: str = __version__
    rng_seed: int = None
    started: str = field(default_factory=lambda: _now())
    finished: str = None

    def finish(self):
        self.finished = _now()
        return asdict(self)


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# output helpers

def _emit_text(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def _emit_json(obj, args, manifest):
    obj = dict(obj)
    obj["manifest"] = manifest.finish()
    _emit_text(dumps_json(_clean(obj), args.json_compact), args.out)


def _emit_csv(header, rows, out, manifest, compact=False):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _emit_text(buf.getvalue(), out)
    if out not in (None, "-"):
        atomic_write(f"{out}.manifest.json", dumps_json(manifest.finish(), compact))


def _emit_sequence(seq, args, manifest, extra=None):
    """A sequence as JSON, or as CSV plus a manifest sidecar for ``--out *.csv``."""
    if args.out and args.out.endswith(".csv"):
        atomic_write(args.out, format_csv(seq, args.repr))
        atomic_write(f"{args.out}.manifest.json",
                     dumps_json(_clean(manifest.finish()), args.json_compact))
        return
    obj = sequence_to_dict(seq, args.repr)
    obj.update(extra or {})
    _emit_json(obj, args, manifest)


def _clean(obj):
    """Make numpy scalars JSON-serializable and round floats to 12 digits."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return round_sig(v) if np.isfinite(v) else None
    return obj


def _config(args, skip=("func", "out", "json_compact", "verbose")):
    return {k: v for k, v in vars(args).items() if k not in skip}


def _read(path):
    try:
        return read_sequence(path)
    except SequenceFileError as e:
        raise ValidationError(str(e)) from None
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}") from None


def _n_range(text):
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"--n-range must look like 2:50, got {text!r}") from None
    if lo < 2 or hi < lo:
        raise UsageError("--n-range needs 2 <= lo <= hi")
    return range(lo, hi + 1)


def _floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


def _metrics_dict(x):
    rep = discrepancy(x)
    lobe = lobe_ratio(x)
    return {
        "d_ca": rep.d_ca, "d_zac": rep.d_zac, "d": rep.d,
        "rho_db": lobe.rho_db, "upper_bound_db": lobe.upper_bound_db,
        "argmax_tau": lobe.argmax_tau,
    }


# ---------------------------------------------------------------------------
# commands

def cmd_generate(args):
    cfg = IpucConfig(n=args.n, epsilon=args.epsilon, max_iters=args.max_iters,
                     max_restarts=args.restarts, restart_window=args.window,
                     rng_seed=args.seed)
    manifest = RunManifest("generate", _config(args), rng_seed=args.seed)
    if args.count > 1 and args.out and args.out.endswith(".csv"):
        raise UsageError("CSV output holds one sequence; use JSON with --count > 1")
    results = [ipuc_run(cfg)] if args.count == 1 else ipuc_batch(args.n, args.count, cfg)
    if args.trajectory_out:
        rows = [(i, int(t), repr(float(d))) for i, r in enumerate(results)
                for t, d in r.trajectory]
        _emit_csv(("run_id", "iteration", "discrepancy"), rows, args.trajectory_out,
                  manifest, args.json_compact)

    def run_obj(r):
        o = sequence_to_dict(r.sequence, args.repr)
        o.update(converged=r.converged, d=r.report.d, d_ca=r.report.d_ca,
                 d_zac=r.report.d_zac, iterations=r.iterations, restarts=r.restarts,
                 # D of the stored phases, i.e. after projection onto the unit circle
                 d_stored=discrepancy(PhaseSequence.from_s(o["values"], o["n"]).to_complex()
                                      if args.repr == "s" else
                                      np.exp(1j * np.asarray(o["values"]))).d)
        return o

    if args.count == 1 and args.out and args.out.endswith(".csv"):
        _emit_sequence(results[0].sequence, args, manifest)
    elif args.count == 1:
        _emit_json(run_obj(results[0]), args, manifest)
    else:
        obj = {"n": args.n, "runs": [run_obj(r) for r in results],
               "converged": sum(r.converged for r in results)}
        _emit_json(obj, args, manifest)
    failed = sum(not r.converged for r in results)
    if failed:
        raise NonConvergence(f"{failed} of {len(results)} runs did not reach D <= {args.epsilon}")


def cmd_family(args):
    w = _floats(args.w) if args.w else None
    try:
        x = families.family_sequence(args.name, n=args.n, u=args.u, q=args.q, m=args.m,
                                     w=w, variant=args.variant, theta=args.theta,
                                     setid=args.setid, index=args.index)
    except ValueError as e:
        raise ValidationError(str(e)) from None
    manifest = RunManifest("family", _config(args))
    _emit_sequence(x, args, manifest)


def cmd_verify(args):
    seq = _read(args.input)
    x = seq.to_complex()
    obj = _metrics_dict(x)
    obj["n"] = seq.n
    _emit_json(obj, args, RunManifest("verify", _config(args)))
    if args.tol is not None and obj["d"] >= args.tol:
        raise ValidationError(f"not CAZAC within {args.tol} (D={obj['d']:.3g})")


def _classify_one(seq, tol):
    try:
        return classify8(seq.to_complex(), tol=tol)
    except ValueError as e:
        raise ValidationError(str(e)) from None


def cmd_classify(args):
    manifest = RunManifest("classify", _config(args))
    if args.batch:
        files = sorted(p for p in Path(args.batch).iterdir()
                       if p.suffix in (".json", ".csv") and p.is_file()
                       and not p.name.endswith(".manifest.json"))
        rows = []
        for p in files:
            seq = _read(p)
            try:
                lab = classify8(seq.to_complex(), tol=args.tol)
                cls = lab.cls
            except ValueError:
                cls = "Invalid"
            th = canonicalize(seq.to_complex(), tol=1.0).thetas
            rows.append((p.name, *(repr(round_sig(th[k])) for k in (1, 5, 2, 3)), cls))
        _emit_csv(("file", "theta1", "theta5", "theta2", "theta3", "class"), rows,
                  args.out, manifest, args.json_compact)
        return
    if not args.input:
        raise UsageError("classify needs --in FILE or --batch DIR")
    lab = _classify_one(_read(args.input), args.tol)
    obj = lab.as_dict()
    obj["witnesses"] = [c.label for c in lab.witnesses]
    _emit_json(obj, args, manifest)


def _anneal_config(args, n):
    kw = {"n": n, "rng_seed": args.seed}
    if args.cooling is not None:
        kw["cooling"] = args.cooling
    if args.steps is not None:
        kw["steps_per_temp"] = args.steps
    if args.min_temp_ratio is not None:
        kw["min_temp_ratio"] = args.min_temp_ratio
    try:
        return AnnealConfig(**kw)
    except ValueError as e:
        raise UsageError(str(e)) from None


def _anneal_best(args, n):
    from dataclasses import replace
    base = _anneal_config(args, n)
    configs = [replace(base, rng_seed=args.seed + i) for i in range(args.chains)]
    if len(configs) == 1:
        return anneal_optimize(configs[0])
    return best_of(configs)[0]


def cmd_optimize_radar(args):
    manifest = RunManifest("optimize-radar", _config(args), rng_seed=args.seed)
    if args.n_range:
        rows = []
        for n in _n_range(args.n_range):
            res = _anneal_best(args, n)
            rows.append((n, repr(round_sig(res.lobe.rho_db)),
                         repr(round_sig(res.lobe.upper_bound_db))))
            log.info("n=%d rho_db=%.3f", n, res.lobe.rho_db)
        _emit_csv(("n", "rho_db", "upper_bound_db"), rows, args.out, manifest,
                  args.json_compact)
        return
    if args.n is None:
        raise UsageError("optimize-radar needs --n or --n-range")
    res = _anneal_best(args, args.n)
    if args.history_out:
        rows = [(int(s), repr(round_sig(r))) for s, r in res.history]
        _emit_csv(("step", "rho_db"), rows, args.history_out, manifest, args.json_compact)
    obj = _metrics_dict(res.best)
    obj["accepted_moves"] = res.accepted_moves
    _emit_sequence(res.best, args, manifest, obj)
    if obj["d"] > AnnealConfig(n=max(args.n, 2)).repair_epsilon:
        raise NonConvergence(f"best sequence has D={obj['d']:.3g}")


def cmd_transform(args):
    seq = _read(args.input)
    try:
        chain = TransformChain.parse(args.chain)
        y = chain(seq.to_complex())
    except ValueError as e:
        raise ValidationError(str(e)) from None
    manifest = RunManifest("transform", _config(args))
    _emit_sequence(y, args, manifest)


def cmd_solve_c0c(args):
    manifest = RunManifest("solve-c0c", _config(args))
    if args.multistart:
        roots = multistart(grid=args.multistart)
        out = []
        for t in roots:
            try:
                lab = classify8(np.exp(1j * 2 * np.pi * families.c0c_s_vectors(t)[0] / 8))
                cls = lab.cls
            except ValueError:
                cls = "Invalid"
            out.append({"a": t.a, "b": t.b, "c": t.c, "class": cls})
        _emit_json({"roots": out, "count": len(out)}, args, manifest)
        return
    init = _floats(args.init)
    if len(init) != 3:
        raise UsageError("--init needs three comma-separated numbers")
    try:
        t, its = newton_solve(init, tol=args.tol, max_iters=args.max_iters)
    except NewtonError as e:
        raise NonConvergence(str(e)) from None
    from .newton import fourth_form_residual
    r = float(np.max(np.abs(fourth_form_residual(t.a, t.b, t.c))))
    try:
        s_vectors = families.c0c_s_vectors(t)
        families.c0c_sequences(t)
    except ValueError as e:
        raise NonConvergence(str(e)) from None
    obj = {"a": t.a, "b": t.b, "c": t.c, "residual_inf": r, "iterations": its,
           "sequences": [[round_sig(v) for v in s] for s in s_vectors]}
    _emit_json(obj, args, manifest)


def _fig1(args, manifest):
    cfg = IpucConfig(n=args.n or 50, epsilon=args.epsilon, max_iters=args.max_iters,
                     max_restarts=0, rng_seed=args.seed)
    runs = ipuc_batch(cfg.n, args.runs or 20, cfg)
    rows = [(i, int(t), repr(float(d))) for i, r in enumerate(runs) for t, d in r.trajectory]
    _emit_csv(("run_id", "iteration", "discrepancy"), rows, args.out, manifest,
              args.json_compact)
    log.info("fig1: %d of %d runs converged", sum(r.converged for r in runs), len(runs))


def _fig2(args, manifest):
    args.n_range = args.n_range or "2:16"
    args.chains = 1
    args.cooling = args.steps = None
    rows = []
    for n in _n_range(args.n_range):
        res = _anneal_best(args, n)
        rows.append((n, repr(round_sig(res.lobe.rho_db)), repr(round_sig(res.lobe.upper_bound_db))))
        log.info("fig2: n=%d rho_db=%.3f", n, res.lobe.rho_db)
    _emit_csv(("n", "rho_db", "upper_bound_db"), rows, args.out, manifest, args.json_compact)


def _fig3(args, manifest):
    cfg = IpucConfig(n=8, epsilon=args.epsilon, rng_seed=args.seed)
    runs = ipuc_batch(8, args.count, cfg)
    rows = []
    for i, r in enumerate(runs):
        th = canonicalize(r.sequence / np.abs(r.sequence)).thetas
        if not r.converged:
            cls, flag = "", "unconverged"
        else:
            cls = classify8(r.sequence).cls
            flag = "unknown" if cls == "Unknown" else ""
        rows.append((i, *(repr(round_sig(th[k])) for k in (1, 5, 2, 3)), cls, flag))
    _emit_csv(("run_id", "theta1", "theta5", "theta2", "theta3", "class", "flag"), rows,
              args.out, manifest, args.json_compact)


def cmd_figures(args):
    manifest = RunManifest(f"figures {args.kind}", _config(args), rng_seed=args.seed)
    {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3}[args.kind](args, manifest)


# ---------------------------------------------------------------------------
# parser

def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--json-compact", action="store_true",
                        help="single-line JSON output")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = _Parser(prog="cazac", description=__doc__.strip().splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"cazac {__version__}")
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help):
        sp = sub.add_parser(name, help=help, parents=[common])
        sp.set_defaults(func=func)
        return sp

    def out_opts(sp, repr=True):
        sp.add_argument("--out", help="output file (default: stdout)")
        if repr:
            sp.add_argument("--repr", choices=("s", "theta"), default="s")

    g = add("generate", cmd_generate, "generate near-CAZAC sequences with IPUC")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--epsilon", type=float, default=1e-3)
    g.add_argument("--max-iters", type=int, default=100_000)
    g.add_argument("--restarts", type=int, default=50)
    g.add_argument("--window", type=int, default=200,
                   help="stall window for restarts (0 disables)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--trajectory-out")
    out_opts(g)

    f = add("family", cmd_family, "emit a member of an analytic family")
    f.add_argument("--name", required=True, choices=families.FAMILY_NAMES)
    f.add_argument("--n", type=int)
    f.add_argument("--u", type=int, default=1)
    f.add_argument("--q", type=int, default=0)
    f.add_argument("--m", type=int)
    f.add_argument("--w", help="comma-separated Popovic weights in [0, 1]")
    f.add_argument("--variant", choices=("A", "B"), default="A")
    f.add_argument("--theta", type=float, default=0.0)
    f.add_argument("--setid", type=int)
    f.add_argument("--index", type=int, default=0)
    out_opts(f)

    v = add("verify", cmd_verify, "discrepancy and lobe ratio of a sequence")
    v.add_argument("--in", dest="input", default="-", help="sequence file (default: stdin)")
    v.add_argument("--tol", type=float, help="exit 2 unless D < TOL")
    out_opts(v, repr=False)

    c = add("classify", cmd_classify, "identify the class of a length-8 sequence")
    c.add_argument("--in", dest="input")
    c.add_argument("--batch", help="directory of sequence files; emits CSV")
    c.add_argument("--tol", type=float, default=2e-2)
    out_opts(c, repr=False)

    o = add("optimize-radar", cmd_optimize_radar, "anneal for a low aperiodic side lobe")
    o.add_argument("--n", type=int)
    o.add_argument("--n-range")
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--chains", type=int, default=1,
                   help="independent chains with seeds seed, seed+1, ...; best is kept")
    o.add_argument("--cooling", type=float)
    o.add_argument("--steps", type=int, help="proposals per temperature")
    o.add_argument("--min-temp-ratio", type=float)
    o.add_argument("--history-out")
    out_opts(o)

    t = add("transform", cmd_transform, "apply a transform chain such as C0.M2.D5.T0")
    t.add_argument("--in", dest="input", default="-")
    t.add_argument("--chain", required=True)
    out_opts(t)

    s = add("solve-c0c", cmd_solve_c0c, "Newton solve for the (a, b, c) triple")
    s.add_argument("--init", default="0.1,0.3,0.1")
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--max-iters", type=int, default=50)
    s.add_argument("--multistart", type=int, metavar="GRID",
                   help="run from a GRID^3 lattice in [0, 8)^3 and list all roots")
    out_opts(s, repr=False)

    fg = add("figures", cmd_figures, "export figure data as CSV")
    fg.add_argument("kind", choices=("fig1", "fig2", "fig3"))
    fg.add_argument("--seed", type=int, default=0)
    fg.add_argument("--n", type=int, help="fig1 length (default 50)")
    fg.add_argument("--runs", type=int, help="fig1 run count (default 20)")
    fg.add_argument("--epsilon", type=float, default=1e-3)
    fg.add_argument("--max-iters", type=int, default=10_000)
    fg.add_argument("--n-range", help="fig2 lengths (default 2:16)")
    fg.add_argument("--min-temp-ratio", type=float)
    fg.add_argument("--count", type=int, default=1000, help="fig3 run count")
    out_opts(fg, repr=False)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ValueError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except NonConvergence as e:
        print(f"no convergence: {e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
