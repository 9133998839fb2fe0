"""Command line: curve, optimize, simulate, check-codes.

Exit codes: 0 ok / all criteria pass, 1 usage, 2 validation (or a failed
criterion), 3 insufficient Monte Carlo data, 4 I/O.
"""

from __future__ import annotations

import argparse
import io
import math
import sys
from pathlib import Path

from . import codes, dmt, oracle
from .errors import (ConsistencyError, InsufficientDataError, InvalidParameterError, OutOfRegimeError,
                     ValidationError)
from .model import PowerSplit, RatePair, SplitVector
from .optimize import GridSpec, optimize_etw, optimize_hk, optimize_ts

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_DATA, EXIT_IO = 0, 1, 2, 3, 4

DEFAULTS = {
    "step": 0.05,
    "grid_step": 1 / 48,
    "trials": 10**6,
    "seed": 1,
    "snr_db": "20,30,40,50",
    "epsilon": 0.0,
    "user": 1,
}
CURVE_HEADER = ["r", "d_jd", "d_hk", "d_overall", "d_etw", "d_tian", "d_ots", "d_mac"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def fmt(v: float) -> str:
    """Six significant digits; 'inf' for +inf; float dust below 1e-12 rounds to 0."""
    if math.isinf(v):
        return "inf"
    v = round(float(v), 12) + 0.0
    return f"{v:.6g}"


def read_config(path) -> dict:
    """key=value lines; '#' starts a comment; keys use '-' or '_' interchangeably."""
    out = {}
    for k, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{k}: expected key=value")
        key, val = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = val
    return out


def _settings(args) -> dict:
    cfg = {}
    if args.config:
        try:
            cfg = read_config(args.config)
        except OSError as e:
            raise UsageError(f"cannot read config: {e}") from None
    merged = dict(DEFAULTS)
    merged.update(cfg)
    merged.update({k: v for k, v in vars(args).items() if v is not None})
    return merged


def _num(st, key, cast=float, required=True):
    v = st.get(key)
    if v is None:
        if required:
            raise UsageError(f"--{key.replace('_', '-')} is required")
        return None
    try:
        return cast(v)
    except (TypeError, ValueError):
        raise UsageError(f"--{key.replace('_', '-')}: cannot parse {v!r}") from None


def _rates(st) -> RatePair:
    try:
        return RatePair(_num(st, "r1"), _num(st, "r2"))
    except InvalidParameterError as e:
        raise UsageError(str(e)) from None


def _grid(st, key) -> GridSpec:
    try:
        return GridSpec(_num(st, key))
    except InvalidParameterError as e:
        raise UsageError(str(e)) from None


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# --- commands ------------------------------------------------------------

def curve_rows(alpha: float, step: float, grid: GridSpec, with_leveq: bool = False):
    n = int(math.floor(1 / step + 1e-9))
    rs = [k * step for k in range(n + 1)]
    if rs[-1] < 1 - 1e-9:
        rs.append(1.0)
    rows = []
    for r in rs:
        rp = RatePair(r, r)
        jd = dmt.d_jd(rp, alpha).overall
        hk = optimize_hk(rp, alpha, grid).value
        row = [r, jd, hk, dmt.d_overall_achievable(hk, jd), optimize_etw(rp, alpha, grid)[0],
               dmt.d_tian(rp, alpha).overall, optimize_ts(rp, grid)[0], dmt.d_mac(rp, alpha).overall]
        if with_leveq:
            row.append(dmt.d_very_strong_outer(rp))
        rows.append(row)
    return rows


def cmd_curve(st) -> int:
    alpha = _num(st, "alpha")
    step = _num(st, "step")
    if not 0 < step <= 0.1 or alpha < 0:
        raise UsageError("need 0 < step <= 0.1 and alpha >= 0")
    leveq = bool(st.get("with_leveq")) and alpha >= 2
    header = CURVE_HEADER + (["d_leveq"] if leveq else [])
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in curve_rows(alpha, step, _grid(st, "grid_step"), leveq):
        buf.write(",".join(fmt(v) for v in row) + "\n")
    _emit(buf.getvalue(), st.get("out"))
    return EXIT_OK


def optimize_report(r: RatePair, alpha: float, grid: GridSpec) -> list:
    hk = optimize_hk(r, alpha, grid)
    jd = dmt.d_jd(r, alpha)
    etw, s2 = optimize_etw(r, alpha, grid)
    overall = dmt.d_overall_achievable(hk.value, jd.overall)
    gap = etw - overall
    gap = 0.0 if abs(gap) < 1e-9 else gap
    terms = dmt.d_hk_terms(r, hk.s_star, hk.p_star, alpha)
    et = dmt.d_etw_terms(r, s2, alpha)
    lines = [
        f"alpha={fmt(alpha)} r=({fmt(r.r1)},{fmt(r.r2)}) grid_step={fmt(grid.step)}",
        f"hk value={fmt(hk.value)} s*=({fmt(hk.s_star.s1)},{fmt(hk.s_star.s2)}) "
        f"p*=({fmt(hk.p_star.p1)},{fmt(hk.p_star.p2)}) active={terms.active_label}",
        "hk terms " + " ".join(f"{k}={fmt(v)}" for k, v in terms.terms),
        "jd value=" + fmt(jd.overall) + " terms " + " ".join(f"{k}={fmt(v)}" for k, v in jd.terms),
        f"achievable max(hk, jd)={fmt(overall)} via {'jd' if jd.overall >= hk.value else 'hk'}",
        f"etw outer bound={fmt(etw)} s2*={fmt(s2)} terms d11={fmt(et.d11)} d12={fmt(et.d12)} "
        f"d13={fmt(et.d13)} d14={fmt(et.d14)}",
        f"gap={fmt(gap)}",
    ]
    return lines + [f"note: {n}" for n in terms.notes]


def cmd_optimize(st) -> int:
    alpha = _num(st, "alpha")
    if alpha < 0:
        raise UsageError("alpha must be >= 0")
    r = _rates(st)
    _emit("\n".join(optimize_report(r, alpha, _grid(st, "grid_step"))) + "\n", st.get("out"))
    return EXIT_OK


def _event(st) -> oracle.EventSpec:
    kind = st.get("event")
    if kind not in oracle.KINDS:
        raise UsageError(f"--event must be one of {', '.join(oracle.KINDS)}")
    user = _num(st, "user", int)
    r1 = _num(st, "r1", required=False)
    r2 = _num(st, "r2", required=False)
    if r1 is None and r2 is None:
        raise UsageError("give --r1 and/or --r2")
    r1 = r2 if r1 is None else r1
    r2 = r1 if r2 is None else r2
    s = p = None
    if kind in oracle.HK_KINDS:
        s = SplitVector(_num(st, "s1"), _num(st, "s2"))
        p = PowerSplit(_num(st, "p1"), _num(st, "p2"))
    elif kind in oracle.ETW_KINDS:
        s = SplitVector(0.0, _num(st, "s2"))
    theta = _num(st, "theta", required=kind == "ts")
    try:
        return oracle.EventSpec(kind, user, RatePair(r1, r2), _num(st, "alpha", required=False) or 0.0,
                                s, p, theta)
    except (InvalidParameterError, ValidationError) as e:
        raise UsageError(str(e)) from None


def cmd_simulate(st) -> int:
    ev = _event(st)
    try:
        dbs = [float(x) for x in str(st["snr_db"]).split(",") if x.strip()]
    except ValueError:
        raise UsageError("--snr-db must be a comma list of numbers") from None
    trials = _num(st, "trials", int)
    seed = _num(st, "seed", int)
    if trials < 1 or seed < 0:
        raise UsageError("need trials >= 1 and seed >= 0")
    try:
        cf = fmt(oracle.closed_form(ev))
    except OutOfRegimeError:
        cf = "nan"
    buf = io.StringIO()
    buf.write("snr_db,prob,stderr,hits\n")
    try:
        est = oracle.mc_exponent_fit(ev, dbs, trials, seed)
        pts = est.points
    except InsufficientDataError:
        pts = [(db, *oracle.mc_outage(ev, 10 ** (db / 10), trials, seed)) for db in dbs]
        for db, prob, se, hits in pts:
            buf.write(f"{fmt(db)},{fmt(prob)},{fmt(se)},{hits}\n")
        _emit(buf.getvalue(), st.get("out"))
        raise
    for db, prob, n, hits in pts:
        buf.write(f"{fmt(db)},{fmt(prob)},{fmt(math.sqrt(prob * (1 - prob) / n))},{hits}\n")
    _emit(buf.getvalue(), st.get("out"))
    print(f"slope={fmt(est.slope)} stderr={fmt(est.stderr)} closed_form={cf}")
    return EXIT_OK


def _load_books(st):
    paths = [x for x in str(st.get("codebooks") or "").split(",") if x]
    scheme = st.get("scheme")
    if scheme not in codes.SCHEMES:
        raise UsageError(f"--scheme must be one of {', '.join(codes.SCHEMES)}")
    want = 4 if scheme == "hk" else 2
    if len(paths) != want:
        raise UsageError(f"{scheme} needs {want} codebook files"
                         + (" (u1,w1,u2,w2)" if scheme == "hk" else " (x1,x2)"))
    try:
        books = [codes.read_codebook(p) for p in paths]
    except codes.CodebookFormatError as e:
        raise UsageError(str(e)) from None
    return scheme, books


def cmd_check_codes(st) -> int:
    scheme, books = _load_books(st)
    alpha = _num(st, "alpha", required=scheme not in ("jd_very_strong", "strip")) or 0.0
    eps = _num(st, "epsilon")
    notes = []
    if scheme == "hk":
        (u1, pu1), (w1, _), (u2, pu2), (w2, _) = books
        if pu1 is None or pu2 is None:
            raise UsageError("private codebook headers must carry p=<real>")
        s = SplitVector(_num(st, "s1", required=False), _num(st, "s2", required=False))
        s = SplitVector(u1.multiplexing_rate if s.s1 is None else s.s1,
                        u2.multiplexing_rate if s.s2 is None else s.s2)
        r1 = _num(st, "r1", required=False)
        r2 = _num(st, "r2", required=False)
        r = RatePair(s.s1 + w1.multiplexing_rate if r1 is None else r1,
                     s.s2 + w2.multiplexing_rate if r2 is None else r2)
        p = PowerSplit(pu1, pu2)
        books = (codes.SuperpositionCodebook(u1, w1, pu1), codes.SuperpositionCodebook(u2, w2, pu2))
        targets = codes.design_targets("hk", r, s, p, alpha, eps)
        note = codes.operating_point_note(r, s, p, alpha)
        if note:
            notes.append(note)
    else:
        (b1, _), (b2, _) = books
        r1 = _num(st, "r1", required=False)
        r2 = _num(st, "r2", required=False)
        r = RatePair(b1.multiplexing_rate if r1 is None else r1, b2.multiplexing_rate if r2 is None else r2)
        books = (b1, b2)
        targets = codes.design_targets(scheme, r, alpha=alpha, epsilon=eps)
    rep = codes.check_criteria(scheme, books, targets)
    rep.notes.extend(notes)
    _emit("\n".join(rep.lines()) + "\n", st.get("out"))
    return EXIT_OK if rep.passed else EXIT_VALIDATION


# --- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--alpha", type=float)
    common.add_argument("--r1", type=float)
    common.add_argument("--r2", type=float)

    ap = _Parser(prog="icdmt", description="DMT of the two-user fading interference channel")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("curve", parents=[common], help="symmetric-rate DMT curves as CSV")
    c.add_argument("--step", type=float, help="r grid step (default 0.05)")
    c.add_argument("--grid-step", type=float, help="optimizer grid step (default 1/48)")
    c.add_argument("--with-leveq", action="store_true", default=None,
                   help="add the very-strong outer bound column when alpha >= 2")

    o = sub.add_parser("optimize", parents=[common], help="HK optimum, ETW outer bound and gap")
    o.add_argument("--grid-step", "--step", dest="grid_step", type=float, help="optimizer grid step (default 1/48)")

    s = sub.add_parser("simulate", parents=[common], help="Monte Carlo outage and exponent fit")
    s.add_argument("--event", help="event kind, e.g. p2p, jd2, strip_cross, tian, hk1")
    s.add_argument("--user", type=int)
    for k in ("s1", "s2", "p1", "p2", "theta"):
        s.add_argument(f"--{k}", type=float)
    s.add_argument("--snr-db", help="comma list (default 20,30,40,50)")
    s.add_argument("--trials", type=int)
    s.add_argument("--seed", type=int)

    k = sub.add_parser("check-codes", parents=[common], help="check codebooks against the design criteria")
    k.add_argument("--scheme", help="jd, jd_very_strong, hk, mac or strip")
    k.add_argument("--codebooks", help="comma list of files (hk: u1,w1,u2,w2)")
    for name in ("s1", "s2"):
        k.add_argument(f"--{name}", type=float)
    k.add_argument("--epsilon", type=float)
    return ap


COMMANDS = {"curve": cmd_curve, "optimize": cmd_optimize, "simulate": cmd_simulate, "check-codes": cmd_check_codes}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        st = _settings(args)
        return COMMANDS[args.command](st)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientDataError as e:
        print(f"insufficient data: {e}", file=sys.stderr)
        return EXIT_DATA
    except (ValidationError, InvalidParameterError, OutOfRegimeError, ConsistencyError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
