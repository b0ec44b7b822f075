"""Command-line interface.

Subcommands
-----------
expand     print the regime, terms and value of the small-coupling expansion
reference  finite-difference eigenvalue with its grid error
bounds     trial-state moments and Kato-Temple interval
sweep      CSV table over a grid of couplings
verify     run named verification suites

Exit status is 0 on success, 1 for invalid input and 2 for a numerical
failure (including a failed verification check).
"""

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import checks
from .errors import ParameterError, SpikedError
from .expansions import excited_expansion, ground_expansion
from .model import DEFAULT_REGIME_TOL, OscillatorParams, classify_regime, derive_params
from .reference import SolverConfig, solve_reference, trial_bounds

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2

CSV_COLUMNS = ("lambda", "E_expansion", "E_reference", "E_lower", "E_upper", "residual_sq", "regime")
OUTPUT_GROUPS = ("expansion", "reference", "bounds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass(frozen=True)
class SweepSpec:
    A: float
    alpha: float
    lambda_grid: tuple
    state: int = 0
    outputs: tuple = OUTPUT_GROUPS
    tol: float = 1e-10
    regime_tol: float = DEFAULT_REGIME_TOL
    margin: float = 0.5

    def __post_init__(self):
        OscillatorParams(self.A, self.alpha, 0.0)
        g = self.lambda_grid
        if not g:
            raise ParameterError("lambda grid is empty")
        if any(not 0 < v < 1 for v in g):
            raise ParameterError("lambda grid values must lie in (0, 1)")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise ParameterError("lambda grid must be strictly increasing")
        bad = set(self.outputs) - set(OUTPUT_GROUPS)
        if bad:
            raise ParameterError(f"unknown outputs {sorted(bad)}; choose from {OUTPUT_GROUPS}")


def parse_grid(text):
    """'start:stop:count[:log|lin]' -> tuple of couplings."""
    parts = str(text).split(":")
    if len(parts) not in (3, 4):
        raise ParameterError(f"grid must look like start:stop:count[:log], got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"bad grid {text!r}: {exc}") from None
    kind = parts[3] if len(parts) == 4 else "lin"
    if kind not in ("log", "lin"):
        raise ParameterError(f"grid spacing must be 'log' or 'lin', got {kind!r}")
    if count < 1:
        raise ParameterError("grid count must be >= 1")
    if count == 1:
        return (start,)
    if kind == "log":
        if not (start > 0 and stop > 0):
            raise ParameterError("log grid needs positive endpoints")
        a, b = math.log10(start), math.log10(stop)
        return tuple(10 ** (a + (b - a) * j / (count - 1)) for j in range(count))
    return tuple(start + (stop - start) * j / (count - 1) for j in range(count))


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return "%.12g" % v


def _common(p, need_lambda=True):
    p.add_argument("--A", type=float, dest="A")
    p.add_argument("--alpha", type=float)
    if need_lambda:
        p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--state", type=int)
    p.add_argument("--config")
    p.add_argument("--regime-tol", type=float, dest="regime_tol")


def build_parser():
    parser = _Parser(prog="spikedosc", description="Spiked oscillator expansions and reference solver")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("expand", help="evaluate the small-coupling expansion")
    _common(p)

    p = sub.add_parser("reference", help="finite-difference eigenvalue")
    _common(p)
    p.add_argument("--tol", type=float, help="allowed disagreement of the last two grid levels")
    p.add_argument("--levels", type=int)
    p.add_argument("--n-points", type=int, dest="n_points")

    p = sub.add_parser("bounds", help="Kato-Temple interval from the trial state")
    _common(p)
    p.add_argument("--tol", type=float, help="relative quadrature tolerance")
    p.add_argument("--margin", type=float, help="gap below the next unperturbed level")

    p = sub.add_parser("sweep", help="CSV over a grid of couplings")
    _common(p, need_lambda=False)
    p.add_argument("--grid")
    p.add_argument("--tol", type=float, help="relative quadrature tolerance")
    p.add_argument("--margin", type=float)
    p.add_argument("--outputs", help="comma list from expansion,reference,bounds")
    p.add_argument("--jobs", type=int)
    p.add_argument("--out")

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", action="append", dest="suites",
                   help=f"one of {', '.join(checks.SUITES)} or 'all' (repeatable)")
    p.add_argument("--config")
    return parser


_DEFAULTS = {
    "state": 0,
    "regime_tol": DEFAULT_REGIME_TOL,
    "margin": 0.5,
    "jobs": 1,
    "outputs": ",".join(OUTPUT_GROUPS),
}

# config keys may use the flag spelling
_CONFIG_ALIASES = {"lambda": "lam", "regime-tol": "regime_tol", "n-points": "n_points", "suite": "suites"}


def load_config(path, command):
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ParameterError(f"cannot read config {path!r}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ParameterError(f"invalid TOML in {path!r}: {exc}") from None
    merged = {k: v for k, v in data.items() if not isinstance(v, dict)}
    section = data.get(command)
    if isinstance(section, dict):
        merged.update(section)
    out = {}
    for k, v in merged.items():
        out[_CONFIG_ALIASES.get(k, k.replace("-", "_"))] = v
    if "suites" in out and isinstance(out["suites"], str):
        out["suites"] = [out["suites"]]
    return out


def resolve_options(args):
    """Merge defaults < config file < explicit flags."""
    opts = dict(_DEFAULTS)
    flags = {k: v for k, v in vars(args).items() if v is not None}
    if flags.get("config"):
        opts.update(load_config(flags["config"], args.command))
    opts.update(flags)
    return opts


def _params(opts, lam_required=True):
    for key in ("A", "alpha") + (("lam",) if lam_required else ()):
        if key not in opts:
            flag = "--lambda" if key == "lam" else f"--{key}"
            raise ParameterError(f"missing required option {flag}")
    try:
        return OscillatorParams(float(opts["A"]), float(opts["alpha"]), float(opts.get("lam", 0.0)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ParameterError):
            raise
        raise ParameterError(str(exc)) from None


def _state(opts):
    i = opts["state"]
    if not isinstance(i, int) or i < 0:
        raise ParameterError(f"--state must be a nonnegative integer, got {i!r}")
    return i


def _expansion(p, i, regime_tol):
    return ground_expansion(p, regime_tol) if i == 0 else excited_expansion(p, i, regime_tol)


def cmd_expand(opts, out):
    p = _params(opts)
    i = _state(opts)
    e = _expansion(p, i, opts["regime_tol"])
    print(f"regime: {e.regime}", file=out)
    print(f"terms:  {e} + {e.error_order()}", file=out)
    if p.lam > 0:
        print(f"value:  {e.evaluate(p.lam):.8f}", file=out)
    return EXIT_OK


def cmd_reference(opts, out):
    p = _params(opts)
    i = _state(opts)
    kwargs = {}
    if "tol" in opts:
        kwargs["tol"] = float(opts["tol"])
    if "levels" in opts:
        kwargs["refinement_levels"] = int(opts["levels"])
    if "n_points" in opts:
        kwargs["n_points"] = int(opts["n_points"])
    est = solve_reference(p, i, SolverConfig(**kwargs))
    cfg = est.config_used
    print(f"E_{i} = {est.value:.12f} ± {est.error_estimate:.1e}", file=out)
    print(f"grid: x in [{cfg.x_min:.3e}, {cfg.x_max:g}], {cfg.n_points} points, "
          f"{cfg.refinement_levels} levels", file=out)
    return EXIT_OK


def cmd_bounds(opts, out):
    p = _params(opts)
    i = _state(opts)
    if not p.lam > 0:
        raise ParameterError("bounds need --lambda > 0")
    b = trial_bounds(p, i, float(opts.get("tol", 1e-10)), float(opts["margin"]))
    m = b.moments
    print(f"norm_sq     = {m.norm_sq:.12g}", file=out)
    print(f"eta         = {m.eta:.12g}", file=out)
    print(f"residual_sq = {m.residual_sq:.6e}", file=out)
    print(f"variance    = {m.variance:.6e}", file=out)
    if b.interval.valid:
        print(f"interval    = [{b.interval.lower:.12g}, {b.interval.upper:.12g}]", file=out)
        return EXIT_OK
    print("interval    = invalid (gap conditions failed)", file=out)
    return EXIT_NUMERIC


def sweep_row(spec, lam):
    p = OscillatorParams(spec.A, spec.alpha, lam)
    row = dict.fromkeys(CSV_COLUMNS)
    row["lambda"] = lam
    row["regime"] = str(classify_regime(derive_params(p), spec.regime_tol))
    if "expansion" in spec.outputs:
        row["E_expansion"] = _expansion(p, spec.state, spec.regime_tol).evaluate(lam)
    if "reference" in spec.outputs:
        row["E_reference"] = solve_reference(p, spec.state).value
    if "bounds" in spec.outputs:
        b = trial_bounds(p, spec.state, spec.tol, spec.margin)
        row["residual_sq"] = b.moments.residual_sq
        if b.interval.valid:
            row["E_lower"], row["E_upper"] = b.interval.lower, b.interval.upper
    return row


def _sweep_row_star(args):
    return sweep_row(*args)


def run_sweep(spec, jobs=1):
    """Rows in grid order, computed in `jobs` worker processes."""
    tasks = [(spec, lam) for lam in spec.lambda_grid]
    if jobs <= 1 or len(tasks) == 1:
        return [sweep_row(*t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_row_star, tasks))


def write_csv(rows, fh):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in CSV_COLUMNS])


def cmd_sweep(opts, out):
    if "grid" not in opts:
        raise ParameterError("missing required option --grid")
    outputs = opts["outputs"]
    if isinstance(outputs, str):
        outputs = [s.strip() for s in outputs.split(",") if s.strip()]
    jobs = int(opts["jobs"])
    if jobs < 1:
        raise ParameterError("--jobs must be >= 1")
    _params(opts, lam_required=False)
    spec = SweepSpec(
        A=float(opts["A"]),
        alpha=float(opts["alpha"]),
        lambda_grid=parse_grid(opts["grid"]),
        state=_state(opts),
        outputs=tuple(outputs),
        tol=float(opts.get("tol", 1e-10)),
        regime_tol=float(opts["regime_tol"]),
        margin=float(opts["margin"]),
    )
    rows = run_sweep(spec, jobs)
    buf = io.StringIO()
    write_csv(rows, buf)
    if opts.get("out"):
        with open(opts["out"], "w", newline="", encoding="utf-8") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_verify(opts, out):
    names = opts.get("suites") or ["all"]
    if "all" in names:
        names = list(checks.SUITES)
    unknown = [n for n in names if n not in checks.SUITES]
    if unknown:
        raise ParameterError(f"unknown suite(s) {unknown}; choose from {list(checks.SUITES)}")
    failed = 0
    for name in names:
        print(f"== {name}", file=out)
        for c in checks.SUITES[name]():
            print(f"  {c.status}  {c.name}: {c.detail}", file=out)
            failed += c.passed is False
    print(f"{'all checks passed' if not failed else f'{failed} check(s) failed'}", file=out)
    return EXIT_OK if not failed else EXIT_NUMERIC


COMMANDS = {
    "expand": cmd_expand,
    "reference": cmd_reference,
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def run(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if args.command is None:
        print(parser.format_usage().rstrip(), file=err)
        return EXIT_INPUT
    try:
        opts = resolve_options(args)
        return COMMANDS[args.command](opts, out)
    except ParameterError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    except (SpikedError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=err)
        return EXIT_NUMERIC


def main():
    sys.exit(run())
