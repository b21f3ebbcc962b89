"""Command-line front end.

Every subcommand produces a fixed set of artifacts.  Without ``--output-dir``
the primary artifact goes to stdout; with it, all artifacts are written under
that directory with the names in ``ARTIFACTS``.  Failures print a JSON error
envelope on stderr and exit with 2 (bad input) or 3 (numerical failure).
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .characterize import Anchor, ReconstructedCdf, check_conditions, matching_anchor
from .distributions import family_dict, parse_family, quantile_grid
from .errors import ConditionError, DomainError, ValidationError
from .estimate import GridSpec, KdeModel, grai_grid
from .fit import MODELS, FitConfig, fit_pipeline
from .gof import chi_square, ks_test
from .grai import SymbolicCurve, ai_alpha, grai_alpha, read_curve
from .orders import implication_report, rai_order_check
from .sample import Sample, parse_column

SCHEMA_VERSION = 1
SEED_ENV = "RAINTENSITY_SEED"

ARTIFACTS = {
    "dist-eval": ("dist_eval.json",),
    "grai-curve": ("grai_curve.tsv",),
    "reconstruct": ("reconstruct.tsv", "conditions.json"),
    "estimate": ("estimate.tsv",),
    "fit": ("fit.json",),
    "gof": ("gof.json", "gof_classes.tsv"),  # the class table only for chi2
    "order": ("order.json",),
    "simulate": ("sample.csv",),
}

ESTIMATION = ("estimate", "fit")


# --- input -----------------------------------------------------------------

def ingest_csv(path) -> Sample:
    """Read a one-column file of positive values (``-`` reads stdin)."""
    if str(path) == "-":
        return parse_column(sys.stdin.read().splitlines(), source="<stdin>")
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    return parse_column(lines, source=os.path.basename(str(path)))


def _read_counts(path):
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc.strerror}") from None
    counts = []
    for lineno, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            c = float(text)
        except ValueError:
            if not counts:
                continue  # header
            raise ValidationError(f"{path}, line {lineno}: not a count: {text!r}") from None
        if c < 0 or c != int(c):
            raise ValidationError(f"{path}, line {lineno}: counts must be nonnegative integers")
        counts.append(int(c))
    if not counts:
        raise ValidationError(f"{path}: no counts found")
    return counts


# --- configuration ---------------------------------------------------------

@dataclass
class RunConfig:
    """Everything one CLI invocation needs.

    ``options`` carries subcommand-specific settings (test name, model, ...).
    """

    subcommand: str
    input: str = None
    family: str = None
    alpha: float = None
    bandwidth: float = None
    grid: dict = field(default_factory=dict)
    output_dir: str = None
    seed: int = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.subcommand not in ARTIFACTS:
            raise ValidationError(f"unknown subcommand {self.subcommand!r}")
        if self.bandwidth is not None:
            if self.subcommand not in ESTIMATION:
                raise ValidationError("--bandwidth only applies to estimate and fit")
            if not (math.isfinite(self.bandwidth) and self.bandwidth > 0):
                raise ValidationError("bandwidth must be a positive number")
        if self.seed is not None and self.subcommand != "simulate":
            raise ValidationError("--seed only applies to simulate")
        if self.alpha is not None and not math.isfinite(self.alpha):
            raise ValidationError("alpha must be finite")
        pts = self.grid.get("points")
        if pts is not None and pts < 2:
            raise ValidationError("grid needs at least 2 points")
        p_lo, p_hi = self.grid.get("p_lo"), self.grid.get("p_hi")
        if p_lo is not None and p_hi is not None and not 0 < p_lo < p_hi < 1:
            raise ValidationError("need 0 < p_lo < p_hi < 1")


# --- output ----------------------------------------------------------------

def _clean(obj):
    """Make ``obj`` JSON-safe; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else str(f)
    return obj


def dumps(report: dict) -> str:
    body = {"schema_version": SCHEMA_VERSION, **report}
    return json.dumps(_clean(body), indent=2) + "\n"


def _tsv(columns, names, header=()):
    lines = [f"# {h}" for h in header]
    lines.append("\t".join(names))
    for row in zip(*columns):
        lines.append("\t".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def _emit(config, artifacts, out):
    """``artifacts`` maps artifact name -> text; the first is primary."""
    if config.output_dir is None:
        out.write(next(iter(artifacts.values())))
        return
    os.makedirs(config.output_dir, exist_ok=True)
    for name, text in artifacts.items():
        with open(os.path.join(config.output_dir, name), "w") as fh:
            fh.write(text)


def _grid_for(dists, config, default_points=200, p_lo=0.001, p_hi=0.999):
    g = config.grid
    return quantile_grid(dists, g.get("points") or default_points,
                         g.get("p_lo") or p_lo, g.get("p_hi") or p_hi)


def _need(value, flag):
    if value is None:
        raise ValidationError(f"{flag} is required")
    return value


# --- subcommands -------------------------------------------------------------

def _dist_eval(config):
    d = parse_family(config.family)
    xs = config.options.get("x")
    x = np.asarray(xs, dtype=float) if xs else _grid_for(d, config, 11)
    report = {
        "command": "dist-eval",
        "family": family_dict(d),
        "support": list(d.support),
        "x": x,
        "pdf": np.asarray(d.pdf(x)),
        "cdf": np.asarray(d.cdf(x)),
        "sf": np.asarray(d.sf(x)),
        "hazard": np.asarray(d.hazard(x)),
        "reversed_hazard": np.asarray(d.rhazard(x)),
    }
    return {"dist_eval.json": dumps(report)}


def _grai_curve(config):
    d = parse_family(config.family)
    alpha = _need(config.alpha, "--alpha")
    x = _grid_for(d, config)
    if config.options.get("forward"):
        vals, label = np.asarray(ai_alpha(d, alpha, x)), "ai"
    else:
        vals, label = np.asarray(grai_alpha(d, alpha, x, method=config.options.get("method", "auto"))), "grai"
    header = (f"{label} alpha={alpha!r} family={config.family}",)
    return {"grai_curve.tsv": _tsv((x, vals), ("x", "L"), header)}


def _reconstruct(config):
    alpha = config.alpha
    if config.family:
        d = parse_family(config.family)
        alpha = _need(alpha, "--alpha")
        curve = SymbolicCurve(d, alpha)
        x = _grid_for(d, config)
    else:
        curve = read_curve(_need(config.input, "a curve file or --family"))
        alpha = curve.alpha if alpha is None else alpha
        if alpha is None:
            raise ValidationError("--alpha is required when the curve file does not record one")
        x = curve.grid
    opts = config.options
    a = opts.get("anchor_a") or math.sqrt(x[0] * x[-1])
    if opts.get("match_family"):
        if not config.family:
            raise ValidationError("--match-family needs --family")
        anchor = matching_anchor(d, alpha, a) if alpha <= 0 else None
    else:
        anchor = Anchor(a, opts.get("anchor_k") or 1.0) if alpha <= 0 else None
    cond = check_conditions(curve, alpha, a=a)
    if "fail" in (cond.c1, cond.c2, cond.c3):
        raise ConditionError(f"characterization conditions fail: c1={cond.c1} c2={cond.c2} c3={cond.c3}")
    F = ReconstructedCdf(curve, alpha, anchor)(x)
    header = [f"reconstructed cdf alpha={alpha!r}",
              f"conditions c1={cond.c1} c2={cond.c2} c3={cond.c3}"]
    if anchor is not None:
        header.append(f"anchor a={anchor.a!r} k={anchor.k!r}")
    cond_report = {"command": "reconstruct", "conditions": cond.to_dict(),
                   "anchor": None if anchor is None else {"a": anchor.a, "k": anchor.k}}
    return {"reconstruct.tsv": _tsv((x, F), ("x", "F"), header), "conditions.json": dumps(cond_report)}


def _grid_spec(config, **defaults):
    g = config.grid
    return GridSpec(p_lo=g.get("p_lo") or defaults.get("p_lo", 0.05),
                    p_hi=g.get("p_hi") or defaults.get("p_hi", 0.95),
                    points=g.get("points") or 100,
                    mode=g.get("mode") or "uniform")


def _estimate(config):
    s = ingest_csv(_need(config.input, "an input file"))
    alpha = _need(config.alpha, "--alpha")
    kde = KdeModel.fit(s, config.bandwidth)
    curve = grai_grid(kde, alpha, _grid_spec(config))
    header = (f"empirical grai alpha={alpha!r} n={s.n} bandwidth={kde.bandwidth!r}",)
    return {"estimate.tsv": _tsv((curve.grid, curve.values), ("x", "L"), header)}


def _fit(config):
    s = ingest_csv(_need(config.input, "an input file"))
    alpha = _need(config.alpha, "--alpha")
    model = config.options.get("model") or "constant"
    rep = fit_pipeline(s, alpha, model, FitConfig(config.bandwidth, _grid_spec(config)))
    return {"fit.json": dumps({"command": "fit", "n": s.n, **rep.to_dict()})}


def _gof(config):
    d = parse_family(_need(config.family, "a family specification"))
    opts = config.options
    test = opts.get("test", "chi2")
    counts = opts.get("counts")
    if test == "chi2":
        data = _read_counts(counts) if counts else ingest_csv(_need(config.input, "--data or --counts"))
        rep = chi_square(data, d, k=opts.get("classes", 20), width=opts.get("width", 0.21),
                         n_params=opts.get("nparams", 0), n=opts.get("n"),
                         min_expected=opts.get("min_expected", 5.0),
                         tail_expected=opts.get("tail_expected", False))
    elif test == "ks":
        if counts:
            raise ValidationError("the KS test needs raw data (--data), not class counts")
        rep = ks_test(ingest_csv(_need(config.input, "--data")), d)
    else:
        raise ValidationError(f"unknown test {test!r}")
    out = {"gof.json": dumps({"command": "gof", "family": family_dict(d), **rep.to_dict()})}
    if test == "chi2":
        out["gof_classes.tsv"] = rep.class_table_tsv()
    return out


def _order(config):
    fx, fy = config.options["families"]
    dX, dY = parse_family(fx), parse_family(fy)
    alpha = _need(config.alpha, "--alpha")
    n = config.grid.get("points") or 512
    if config.options.get("implication"):
        rep = implication_report(dX, dY, alpha, n=n)
        body = {"command": "order", "kind": "implication", **rep.to_dict()}
    else:
        rep = rai_order_check(dX, dY, alpha, n=n)
        body = {"command": "order", "kind": "rai", **rep.to_dict()}
    body["X"], body["Y"] = family_dict(dX), family_dict(dY)
    return {"order.json": dumps(body)}


def _simulate(config):
    d = parse_family(_need(config.family, "a family specification"))
    n = config.options.get("n")
    if n is None or n < 1:
        raise ValidationError("--n must be a positive integer")
    seed = config.seed
    if seed is None:
        raw = os.environ.get(SEED_ENV)
        if raw is None:
            raise ValidationError(f"--seed is required (or set {SEED_ENV})")
        try:
            seed = int(raw)
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
    x = d.sample(n, seed).values
    lines = [f"# {config.family} n={n} seed={seed}", "value"] + [f"{v:.17g}" for v in x]
    return {"sample.csv": "\n".join(lines) + "\n"}


_DISPATCH = {
    "dist-eval": _dist_eval,
    "grai-curve": _grai_curve,
    "reconstruct": _reconstruct,
    "estimate": _estimate,
    "fit": _fit,
    "gof": _gof,
    "order": _order,
    "simulate": _simulate,
}


def run(config: RunConfig, out=None) -> int:
    """Execute ``config`` and write its artifacts; return the exit status.

    Errors propagate as :class:`RaintensityError`; :func:`main` turns them
    into exit codes and the JSON envelope.
    """
    artifacts = _DISPATCH[config.subcommand](config)
    _emit(config, artifacts, sys.stdout if out is None else out)
    return 0


# --- argument parsing --------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="raintensity", description="Generalized reversed aging intensity toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--output-dir", help="write artifacts into this directory instead of stdout")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def band(q, lo, hi, points):
        q.add_argument("--points", type=int, default=points, help=f"grid size (default {points})")
        q.add_argument("--p-lo", type=float, default=lo, help=f"lower quantile of the band (default {lo})")
        q.add_argument("--p-hi", type=float, default=hi, help=f"upper quantile of the band (default {hi})")

    q = sub.add_parser("dist-eval", parents=[common], help="evaluate pdf, cdf, hazards of a family")
    q.add_argument("family")
    q.add_argument("--x", type=float, nargs="+", help="evaluation points (default: quantile grid)")
    band(q, 0.001, 0.999, 11)

    q = sub.add_parser("grai-curve", parents=[common], help="tabulate the alpha-GRAI of a family")
    q.add_argument("family")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--method", choices=("auto", "generic", "closed"), default="auto")
    q.add_argument("--forward", action="store_true", help="tabulate the forward alpha-AI instead")
    band(q, 0.001, 0.999, 200)

    q = sub.add_parser("reconstruct", parents=[common], help="rebuild a cdf from a GRAI curve")
    q.add_argument("curve", nargs="?", help="TSV curve as written by grai-curve or estimate")
    q.add_argument("--family", help="use the exact GRAI of this family instead of a file")
    q.add_argument("--alpha", type=float)
    q.add_argument("--anchor-a", type=float, help="anchor abscissa (alpha <= 0)")
    q.add_argument("--anchor-k", type=float, help="anchor constant k > 0 (alpha <= 0, default 1)")
    q.add_argument("--match-family", action="store_true", help="choose k so the result is --family itself")
    band(q, 0.001, 0.999, 200)

    for name, hlp in (("estimate", "empirical GRAI curve from data"),
                      ("fit", "least-squares + maximum-likelihood fit")):
        q = sub.add_parser(name, parents=[common], help=hlp)
        q.add_argument("input", help="one-column data file ('-' for stdin)")
        q.add_argument("--alpha", type=float, required=True)
        q.add_argument("--bandwidth", type=float, help="KDE bandwidth (default: normal reference rule)")
        q.add_argument("--grid-mode", choices=("uniform", "sample"), default="uniform")
        band(q, 0.05, 0.95, 100)
        q.add_argument("--band", help="quantile band as 'p_lo,p_hi' (overrides --p-lo/--p-hi)")
        if name == "fit":
            q.add_argument("--model", choices=MODELS, default="constant")

    q = sub.add_parser("gof", parents=[common], help="chi-square or Kolmogorov-Smirnov test")
    q.add_argument("family")
    q.add_argument("--test", choices=("chi2", "ks"), default="chi2")
    q.add_argument("--data", help="one-column data file ('-' for stdin)")
    q.add_argument("--counts", help="file of observed class counts, one per line")
    q.add_argument("--n", type=int, help="sample size when --counts omit observations beyond the last class")
    q.add_argument("--classes", type=int, default=20)
    q.add_argument("--width", type=float, default=0.21)
    q.add_argument("--nparams", type=int, default=0, help="number of estimated parameters")
    q.add_argument("--min-expected", type=float, default=5.0)
    q.add_argument("--tail-expected", action="store_true",
                   help="add the expected mass beyond the last class to it")

    q = sub.add_parser("order", parents=[common], help="alpha-RAI order between two families")
    q.add_argument("family_x")
    q.add_argument("family_y")
    q.add_argument("--alpha", type=float, required=True)
    q.add_argument("--grid", type=int, default=512, help="number of grid points")
    q.add_argument("--implication", action="store_true",
                   help="treat --alpha as beta and spot-check the implied orders")

    q = sub.add_parser("simulate", parents=[common], help="draw a seeded sample from a family")
    q.add_argument("family")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--seed", type=int, help=f"random seed (default: ${SEED_ENV})")
    return p


def config_from_args(ns) -> RunConfig:
    cmd = ns.subcommand
    grid = {}
    for key in ("points", "p_lo", "p_hi"):
        if hasattr(ns, key):
            grid[key] = getattr(ns, key)
    if hasattr(ns, "grid_mode"):
        grid["mode"] = ns.grid_mode
    if getattr(ns, "band", None):
        try:
            grid["p_lo"], grid["p_hi"] = (float(v) for v in ns.band.split(","))
        except ValueError:
            raise ValidationError(f"--band expects 'p_lo,p_hi', got {ns.band!r}") from None
    if cmd == "order":
        grid["points"] = ns.grid
    opts = {}
    family = getattr(ns, "family", None)
    inp = None
    if cmd == "dist-eval":
        opts["x"] = ns.x
    elif cmd == "grai-curve":
        opts.update(method=ns.method, forward=ns.forward)
    elif cmd == "reconstruct":
        inp = ns.curve
        opts.update(anchor_a=ns.anchor_a, anchor_k=ns.anchor_k, match_family=ns.match_family)
        if inp and family:
            raise ValidationError("give either a curve file or --family, not both")
    elif cmd in ESTIMATION:
        inp = ns.input
        if cmd == "fit":
            opts["model"] = ns.model
    elif cmd == "gof":
        inp = ns.data
        if ns.data and ns.counts:
            raise ValidationError("give either --data or --counts, not both")
        if ns.n is not None and not ns.counts:
            raise ValidationError("--n only applies together with --counts")
        opts.update(test=ns.test, counts=ns.counts, n=ns.n, classes=ns.classes, width=ns.width,
                    nparams=ns.nparams, min_expected=ns.min_expected, tail_expected=ns.tail_expected)
    elif cmd == "order":
        opts.update(families=(ns.family_x, ns.family_y), implication=ns.implication)
    elif cmd == "simulate":
        opts["n"] = ns.n
    return RunConfig(subcommand=cmd, input=inp, family=family, alpha=getattr(ns, "alpha", None),
                     bandwidth=getattr(ns, "bandwidth", None), grid=grid, output_dir=ns.output_dir,
                     seed=getattr(ns, "seed", None), options=opts)


def _envelope(exc, status):
    code = getattr(exc, "code", "validation_error" if status == 2 else "numerical_failure")
    return json.dumps({"schema_version": SCHEMA_VERSION, "status": "error", "exit_status": status,
                       "error": {"code": code, "type": type(exc).__name__, "message": str(exc)}})


def main(argv=None, out=None, err=None) -> int:
    err = sys.stderr if err is None else err
    try:
        ns = build_parser().parse_args(argv)
        return run(config_from_args(ns), out)
    except ValueError as exc:
        err.write(_envelope(exc, 2) + "\n")
        return 2
    except (DomainError, ArithmeticError) as exc:
        err.write(_envelope(exc, 3) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
