"""Command-line front end. Angles are degrees at this boundary."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import export
from .billiard import Billiard, invariant_report, orbit, shape_class
from .centers import catalog, center_batch, normalize_id
from .errors import BilliardError
from .kinematics import ballet, motion_profile
from .loci import EXPORT_N, sample_locus, self_intersections
from .thresholds import NAMES, discover_threshold, threshold


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _aspect(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(v) or v <= 1:
        raise argparse.ArgumentTypeError(f"aspect ratio a/b must exceed 1, got {text}")
    return v


def _count(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v
    return parse


def _center_id(text: str):
    cid = normalize_id(text)
    if cid not in catalog():
        raise argparse.ArgumentTypeError(f"unknown center {text!r}")
    return cid


def _sort_key(cid):
    return (0, cid, "") if isinstance(cid, int) else (1, 0, cid)


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _g(v: float) -> str:
    return f"{v:.12g}"


def _f(v: float) -> str:
    s = f"{v:.9f}"
    return s[1:] if s.startswith("-") and float(s) == 0 else s


# --- commands -----------------------------------------------------------


def cmd_orbit(args) -> int:
    B = Billiard.from_aspect(args.ab)
    o = orbit(B, math.radians(args.t_deg))
    print(f"a/b\t{_g(args.ab)}")
    print(f"t_deg\t{_g(args.t_deg)}")
    for k, (x, y) in enumerate(o.vertices, 1):
        print(f"P{k}\t{_f(x)}\t{_f(y)}")
    for k, s in enumerate(o.sides, 1):
        print(f"s{k}\t{_f(s)}")
    sc = shape_class(o)
    print(f"shape\t{sc.kind}" + (f"\tvertex P{sc.vertex + 1}" if sc.vertex is not None else ""))
    print("center\tx\ty\tname")
    T = o.vertices[None]
    for cid in sorted(catalog(), key=_sort_key):
        e = catalog()[cid]
        pts, st = center_batch(T, cid)
        if st[0] == 0:
            x, y = pts[0]
            print(f"{e.label}\t{_f(x)}\t{_f(y)}\t{e.name}")
        else:
            print(f"{e.label}\t{'inf' if st[0] == 1 else 'undefined'}\t\t{e.name}")
    return 0


def cmd_invariants(args) -> int:
    r = invariant_report(Billiard.from_aspect(args.ab), args.n)
    print("quantity\tvalue\tspread")
    print(f"perimeter\t{r.perimeter:.12f}\t{r.perimeter_spread:.3e}")
    print(f"r/R\t{r.r_over_R:.12f}\t{r.r_over_R_spread:.3e}")
    print(f"cos_sum\t{r.cosine_sum:.12f}\t{r.cosine_sum_spread:.3e}")
    print(f"X9_drift\t0\t{r.x9_max:.3e}")
    return 0


def cmd_locus(args) -> int:
    B = Billiard.from_aspect(args.ab)
    L = sample_locus(B, args.center, args.n)
    if L.warning:
        print(f"warning: {100 * L.gap_fraction:.1f}% of samples undefined", file=sys.stderr)
    if args.format == "csv":
        _emit(export.locus_csv(L), args.out)
        return 0
    marks = None
    if args.mark_crossings:
        dense = L if args.n >= 1024 else sample_locus(B, args.center, 2048)
        marks = [c for c in self_intersections(dense) if c.transversal]
        print(f"crossings\t{len(marks)}", file=sys.stderr)
    _emit(export.locus_svg(L, marks, title=f"{L.center} locus, a/b = {args.ab:g}"), args.out)
    return 0


def cmd_thresholds(args) -> int:
    names = args.names or list(NAMES)
    failed = []
    cols = ["name", "numeric", "closed_form", "abs_diff", "degree", "printed"]
    if args.discover:
        cols.append("discovered")
    print("\t".join(cols))
    for name in names:
        try:
            s = threshold(name)
            row = [
                s.name,
                f"{s.root:.10f}",
                "-" if s.closed_form is None else f"{s.closed_form:.10f}",
                "-" if s.closed_form is None else f"{s.closed_form_diff:.1e}",
                "-" if s.degree is None else str(s.degree),
                f"{s.reference:.3f}",
            ]
            if args.discover:
                row.append(f"{discover_threshold(s.name):.7f}")
            print("\t".join(row))
        except BilliardError as exc:
            failed.append(f"{name}: {exc}")
    for f in failed:
        print(f"error: {f}", file=sys.stderr)
    return 1 if failed else 0


def cmd_motion(args) -> int:
    B = Billiard.from_aspect(args.ab)
    out = Path(args.out_dir) if args.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    failed = []
    print("center\twinding\treversals\treversal_t_deg")
    for cid in args.center:
        try:
            P = motion_profile(B, cid, args.n)
        except BilliardError as exc:
            failed.append(f"{catalog()[cid].label}: {exc}")
            continue
        label = catalog()[P.center].label
        revs = ",".join(f"{math.degrees(t):.4f}" for t in P.reversals) or "-"
        print(f"{label}\t{P.winding}\t{len(P.reversals)}\t{revs}")
        if out:
            (out / f"profile_{label}.csv").write_text(export.profile_csv(P))
    for f in failed:
        print(f"error: {f}", file=sys.stderr)
    return 1 if failed else 0


def cmd_ballet(args) -> int:
    B = Billiard.from_aspect(args.ab)
    ida, idb = args.pair
    b = ballet(B, ida, idb, args.n)
    out = Path(args.out_dir) if args.out_dir else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
        (out / "ballet.csv").write_text(export.ballet_csv(b))
        if args.frames:
            export.write_frames(B, out / "frames", args.frames, ida, idb)
    elif args.frames:
        raise UsageError("--frames needs --out-dir")
    print(f"min_gap_deg\t{b.min_gap:.9f}")
    print(f"crossing_found\t{str(b.crossing_found).lower()}")
    print(f"minima\t{len(b.minima)}")
    print(f"maxima\t{len(b.maxima)}")
    print("kind\tt_deg\tgap_deg")
    for t, g in b.minima:
        print(f"min\t{t:.4f}\t{g:.9f}")
    for t, g in b.maxima:
        print(f"max\t{t:.4f}\t{g:.9f}")
    return 0


# --- parser -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ebilliard", description=__doc__)
    p.add_argument("--config", help="key=value file; explicit flags take precedence")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--ab", type=_aspect, required=False, help="aspect ratio a/b (> 1)")
        sp.set_defaults(func=fn)
        return sp

    sp = add("orbit", cmd_orbit, "vertices, sides, shape and catalog centers at one t")
    sp.add_argument("--t-deg", type=float, default=0.0)

    sp = add("invariants", cmd_invariants, "spreads of the family invariants")
    sp.add_argument("--n", type=_count(3), default=1000)

    sp = add("locus", cmd_locus, "sample a center's locus as CSV or SVG")
    sp.add_argument("--center", type=_center_id, required=False)
    sp.add_argument("--n", type=_count(8), default=EXPORT_N)
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.add_argument("--out", help="output file (default stdout)")
    sp.add_argument("--mark-crossings", action="store_true")

    sp = add("thresholds", cmd_thresholds, "aspect-ratio thresholds")
    sp.add_argument("names", nargs="*", help=f"any of: {', '.join(NAMES)}")
    sp.add_argument("--discover", action="store_true", help="also rediscover each from behaviour")

    sp = add("motion", cmd_motion, "boundary-parameter profiles of railed centers")
    sp.add_argument("--center", type=_center_id, nargs="+", default=[88, 100, 162])
    sp.add_argument("--n", type=_count(16), default=2048)
    sp.add_argument("--out-dir")

    sp = add("ballet", cmd_ballet, "joint motion of two billiard-railed centers")
    sp.add_argument("--pair", type=_center_id, nargs=2, default=[88, 162])
    sp.add_argument("--n", type=_count(16), default=2048)
    sp.add_argument("--frames", type=_count(0), default=0)
    sp.add_argument("--out-dir")
    return p


def read_config(path: str) -> dict[str, str]:
    cfg = {}
    for k, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{k}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        cfg[key.replace("-", "_")] = val
    return cfg


def _apply_config(parser, argv, args):
    """Re-parse with config values injected ahead of argv, so flags win."""
    cfg = read_config(args.config)
    sp = parser._subparsers._group_actions[0].choices[args.command]
    known = {a.dest: a for a in sp._actions}
    injected = []
    for key, val in cfg.items():
        act = known.get(key)
        if act is None or not act.option_strings:
            raise UsageError(f"config key {key!r} does not apply to {args.command}")
        if act.nargs == 0:
            if val.lower() in ("1", "true", "yes", "on"):
                injected.append(act.option_strings[0])
        else:
            injected += [act.option_strings[0], *val.split()]
    i = argv.index(args.command)
    return parser.parse_args(argv[: i + 1] + injected + argv[i + 1 :])


REQUIRED = {"orbit": ("ab",), "invariants": ("ab",), "locus": ("ab", "center"), "motion": ("ab",), "ballet": ("ab",)}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            args = _apply_config(parser, argv, args)
        missing = [k for k in REQUIRED.get(args.command, ()) if getattr(args, k, None) is None]
        if missing:
            raise UsageError(f"{args.command}: missing --{', --'.join(m.replace('_', '-') for m in missing)}")
        return args.func(args)
    except (UsageError, BilliardError, ValueError, KeyError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {msg}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
