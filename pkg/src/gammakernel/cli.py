"""Command-line front end.

Subcommands
-----------
estimate   density or derivative estimate of a data file on a grid (CSV)
bandwidth  rule-of-thumb bandwidth report for a data file
study      Monte-Carlo error table from a key=value config (CSV)
sample     i.i.d., Metropolis-Hastings or AR(1) draws, one per line
curve      true vs estimated derivative, or AR(1) estimate vs histogram (CSV)
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Optional, Sequence

import numpy as np

from .bandwidth import ALPHA_FLOOR, BandwidthLaw, moment_fit, rule_of_thumb
from .distributions import PAPER_DISTRIBUTIONS, parse_distribution
from .errors import DivergedFunctionalError, GammaKernelError, UsageError
from .estimator import EvalGrid, Sample, Which, default_grid, estimate_on_grid, read_sample
from .simulation import (
    DEFAULT_PROPOSAL_STEP,
    DEFAULT_SEED,
    DEFAULT_THIN,
    AR1Config,
    DataMode,
    MHConfig,
    StudyConfig,
    ar1_chain,
    ar1_overlay,
    curve_table,
    mh_chain,
    replication_study,
    summaries_to_csv,
)

STUDY_KEYS = {
    "distributions", "sizes", "replications", "mode", "seed", "proposal_step",
    "burn_in", "thin", "bandwidth_law", "grid_points", "workers",
}


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _law(args) -> BandwidthLaw:
    return BandwidthLaw.PDF if getattr(args, "pdf_law", False) else BandwidthLaw.DERIVATIVE


def _grid(sample, args) -> EvalGrid:
    g = default_grid(sample, args.grid_points)
    lo = g.lower_cut if args.lower is None else args.lower
    hi = g.upper_cut if args.upper is None else args.upper
    return EvalGrid.linspace(lo, hi, args.grid_points)


def cmd_estimate(args) -> int:
    s = read_sample(args.input)
    b = args.bandwidth if args.bandwidth is not None else rule_of_thumb(s, _law(args)).value
    if not b > 0:
        raise UsageError("--bandwidth must be positive")
    which = Which.DENSITY if args.density else Which.DERIVATIVE
    table = estimate_on_grid(s, b, _grid(s, args), which)
    print(f"bandwidth={b!r}", file=sys.stderr)
    _write(_csv(["x", "estimate"], table), args.output)
    return 0


def cmd_bandwidth(args) -> int:
    s = read_sample(args.input)
    alpha, beta = moment_fit(s)
    lines = [f"n = {s.n}", f"alpha_hat = {alpha:.10g}", f"beta_hat = {beta:.10g}"]
    if alpha < ALPHA_FLOOR:
        lines.append(f"note: alpha_hat below {ALPHA_FLOOR:g}; reference shape clamped to {ALPHA_FLOOR:g}")
    try:
        bw = rule_of_thumb(s)
    except DivergedFunctionalError as exc:
        raise DivergedFunctionalError(f"{exc} (reference shape after clamping: {max(alpha, ALPHA_FLOOR):g})") from exc
    fun = bw.functionals
    lines += [
        f"I1 = {fun.I1:.10g}",
        f"I2 = {fun.I2:.10g}",
        f"T = {fun.T:.10g}",
        f"b0 = {bw.value:.10g}",
    ]
    if args.pdf_law:
        lines.append(f"b_pdf_law = {rule_of_thumb(s, BandwidthLaw.PDF).value:.10g}")
    _write("\n".join(lines) + "\n", args.output)
    return 0


def _split_list(value: str) -> list[str]:
    # distributions use commas internally, so they are separated by ';' or whitespace
    return [p for chunk in value.replace(";", " ").split() for p in [chunk.strip()] if p]


def parse_study_config(text: str) -> list[StudyConfig]:
    """Parse ``key = value`` lines into one :class:`StudyConfig` per mode."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower()
        if not sep:
            raise UsageError(f"config line {lineno}: expected key=value")
        if key not in STUDY_KEYS:
            raise UsageError(f"unknown config key {key!r} (line {lineno})")
        raw[key] = value.strip()

    def get(key, conv, default):
        if key not in raw:
            return default
        try:
            return conv(raw[key])
        except (ValueError, UsageError) as exc:
            raise UsageError(f"invalid value for config key {key!r}: {raw[key]!r}") from exc

    dists = get("distributions", lambda v: [parse_distribution(d) for d in _split_list(v)], list(PAPER_DISTRIBUTIONS))
    sizes = get("sizes", lambda v: [int(x) for x in v.replace(";", ",").split(",") if x.strip()], [100, 500, 1000, 2000])
    modes = get("mode", lambda v: [DataMode(m.strip().lower()) for m in v.split(",") if m.strip()], [DataMode.IID])
    common = dict(
        distributions=dists,
        sizes=sizes,
        replications=get("replications", int, 100),
        seed=get("seed", int, DEFAULT_SEED),
        proposal_step=get("proposal_step", float, DEFAULT_PROPOSAL_STEP),
        burn_in=get("burn_in", int, 1000),
        thin=get("thin", int, DEFAULT_THIN),
        bandwidth_law=get("bandwidth_law", lambda v: BandwidthLaw(v.strip().lower()), BandwidthLaw.DERIVATIVE),
        grid_points=get("grid_points", int, 512),
        workers=get("workers", int, 1),
    )
    return [StudyConfig(data_mode=m, **common) for m in modes]


def cmd_study(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc.strerror or exc}") from exc
    configs = parse_study_config(text)
    rows = []
    for cfg in configs:
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.workers is not None:
            overrides["workers"] = args.workers
        if overrides:
            cfg = StudyConfig(**{**cfg.__dict__, **overrides})
        rows.extend(replication_study(cfg))
    _write(summaries_to_csv(rows), args.output)
    return 0


def _kv(tokens: Sequence[str], allowed: set[str], what: str) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or key not in allowed:
            raise UsageError(f"invalid {what} parameter {tok!r}; expected one of {sorted(allowed)} as key=value")
        out[key] = value
    return out


def _mh_config(tokens, seed) -> MHConfig:
    kv = _kv(tokens, {"target", "step", "burn_in", "thin"}, "--mh")
    if "target" not in kv:
        raise UsageError("--mh needs target=DIST")
    try:
        return MHConfig(parse_distribution(kv["target"]), float(kv.get("step", DEFAULT_PROPOSAL_STEP)),
                        int(kv.get("burn_in", 1000)), seed, (), int(kv.get("thin", DEFAULT_THIN)))
    except ValueError as exc:
        raise UsageError(f"invalid --mh parameters: {exc}") from exc


def _ar1_config(tokens, seed) -> AR1Config:
    kv = _kv(tokens, {"rho", "noise", "burn_in"}, "--ar1")
    if "rho" not in kv or "noise" not in kv:
        raise UsageError("--ar1 needs rho=R and noise=DIST")
    try:
        return AR1Config(float(kv["rho"]), parse_distribution(kv["noise"]), int(kv.get("burn_in", 1000)), seed)
    except ValueError as exc:
        raise UsageError(f"invalid --ar1 parameters: {exc}") from exc


def cmd_sample(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    if args.dist:
        values = parse_distribution(args.dist).sample(args.n, args.seed)
    elif args.mh:
        values = mh_chain(_mh_config(args.mh, args.seed), args.n).values
    else:
        values = ar1_chain(_ar1_config(args.ar1, args.seed), args.n).values
    _write("".join(f"{v!r}\n" for v in values.tolist()), args.output)
    return 0


def cmd_curve(args) -> int:
    if args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.ar1:
        table, b = ar1_overlay(_ar1_config(args.ar1, args.seed), args.n, args.bandwidth,
                               args.histogram_n, args.bins)
        header = ["x", "estimate", "histogram"]
    else:
        dist = parse_distribution(args.dist)
        if args.mh:
            s = mh_chain(MHConfig(dist, seed=args.seed), args.n)
        else:
            s = Sample(dist.sample(args.n, args.seed))
        b = args.bandwidth if args.bandwidth is not None else rule_of_thumb(s, _law(args)).value
        table = curve_table(dist, s, b, default_grid(s, args.grid_points))
        header = ["x", "true", "estimate"]
    print(f"bandwidth={b!r}", file=sys.stderr)
    _write(_csv(header, table), args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gammakernel", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("estimate", help="estimate the density or its derivative from a data file")
    e.add_argument("input")
    bw = e.add_mutually_exclusive_group()
    bw.add_argument("--bandwidth", type=float)
    bw.add_argument("--rule-of-thumb", action="store_true", help="gamma-reference rule of thumb (default)")
    kind = e.add_mutually_exclusive_group()
    kind.add_argument("--derivative", action="store_true", help="estimate f' (default)")
    kind.add_argument("--density", action="store_true", help="estimate f")
    e.add_argument("--pdf-law", action="store_true", help="use the n^(-2/5) density-estimation bandwidth law")
    e.add_argument("--grid-points", type=int, default=512)
    e.add_argument("--lower", type=float)
    e.add_argument("--upper", type=float)
    e.add_argument("-o", "--output", default="-")
    e.set_defaults(func=cmd_estimate)

    b = sub.add_parser("bandwidth", help="report the rule-of-thumb bandwidth for a data file")
    b.add_argument("input")
    b.add_argument("--pdf-law", action="store_true", help="also report the n^(-2/5) comparison bandwidth")
    b.add_argument("-o", "--output", default="-")
    b.set_defaults(func=cmd_bandwidth)

    st = sub.add_parser("study", help="run a replication study from a key=value config")
    st.add_argument("config")
    st.add_argument("--seed", type=int)
    st.add_argument("--workers", type=int)
    st.add_argument("-o", "--output", default="-")
    st.set_defaults(func=cmd_study)

    sa = sub.add_parser("sample", help="generate observations, one per line")
    src = sa.add_mutually_exclusive_group(required=True)
    src.add_argument("--dist", help="i.i.d. draws, e.g. gamma:2.43,1")
    src.add_argument("--mh", nargs="+", metavar="KEY=VALUE", help="target=DIST [step= burn_in= thin=]")
    src.add_argument("--ar1", nargs="+", metavar="KEY=VALUE", help="rho=R noise=DIST [burn_in=]")
    sa.add_argument("--n", type=int, required=True)
    sa.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sa.add_argument("-o", "--output", default="-")
    sa.set_defaults(func=cmd_sample)

    cu = sub.add_parser("curve", help="dump plot-ready curves")
    csrc = cu.add_mutually_exclusive_group(required=True)
    csrc.add_argument("--dist")
    csrc.add_argument("--ar1", nargs="+", metavar="KEY=VALUE")
    cu.add_argument("--mh", action="store_true", help="draw the sample by Metropolis-Hastings")
    cu.add_argument("--n", type=int, default=2000)
    cu.add_argument("--seed", type=int, default=DEFAULT_SEED)
    cu.add_argument("--bandwidth", type=float)
    cu.add_argument("--pdf-law", action="store_true")
    cu.add_argument("--grid-points", type=int, default=512)
    cu.add_argument("--histogram-n", type=int, default=200_000)
    cu.add_argument("--bins", type=int, default=100)
    cu.add_argument("-o", "--output", default="-")
    cu.set_defaults(func=cmd_curve)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GammaKernelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
