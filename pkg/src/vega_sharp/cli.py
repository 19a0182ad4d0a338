"""Command-line front end: ``vega-sharp <command> [options]``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__, bounds, published, specfun
from .enclosure import Enclosure, truncate
from .errors import DomainError, RangeError, ToleranceNotMet
from .norms import (
    DEFAULT_R,
    DEFAULT_TOL,
    INF,
    LambdaResult,
    ProblemSpec,
    format_q,
    lambda4_closed,
    lambda_inf_zero,
    lambda_many,
    parse_q,
)
from .quadrature import maximize
from .verify import INCONCLUSIVE, REFUTED, VERIFIED, sharp_constant, verify_hierarchy

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_INCONCLUSIVE = 2
EXIT_DOMAIN = 3
EXIT_CONVERGENCE = 4
EXIT_USAGE = 64

COMMANDS = ("lambda", "ubound", "beta", "q0", "verify", "constant", "repro")
SECTIONS = ("thm3", "thm4-d4", "thm4-d5", "landau-table")
CSV_COLUMNS = ("d", "q", "k", "power_lo", "power_hi", "lambda_lo", "lambda_hi", "tail_hi", "cutoff_R")
Q0_TOL = 0.01
LANDAU_ORDERS = (0, 0.25, 0.5, 1, 2, 5, 10, 20, 50, 100)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class RunConfig:
    command: str
    d: list
    q: object
    k: list
    cutoff_R: float
    tol: float | None
    output: str
    out_path: str | None
    jobs: int
    closed_form: bool = False
    section: str | None = None


def parse_range(text: str, name: str, minimum: int) -> list:
    """``"5"`` -> [5]; ``"1..28"`` -> [1, ..., 28]."""
    try:
        if ".." in text:
            a, b = (int(t) for t in text.split("..", 1))
        else:
            a = b = int(text)
    except ValueError:
        raise UsageError(f"--{name} expects INT or A..B, got {text!r}") from None
    if a > b:
        raise UsageError(f"--{name} range {text!r} is empty")
    if a < minimum:
        raise DomainError(f"--{name} must be at least {minimum}, got {text!r}")
    return list(range(a, b + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vega-sharp", description="Bessel integral hierarchies and sharp constants.")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("section", nargs="?", choices=SECTIONS, help="section for repro")
    parser.add_argument("--d", default=None, help="dimension, INT or A..B")
    parser.add_argument("--q", default=None, help="exponent: rational such as 10/3, or inf")
    parser.add_argument("--k", default="0", help="degree, INT or A..B")
    parser.add_argument("--cutoff", type=float, default=DEFAULT_R, help="split point R")
    parser.add_argument("--tol", type=float, default=None,
                        help=f"quadrature tolerance (default {DEFAULT_TOL:g}); grid step for q0")
    parser.add_argument("--format", dest="output", choices=("table", "json", "csv"), default="table")
    parser.add_argument("--out", dest="out_path", default=None)
    parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    parser.add_argument("--closed-form", action="store_true",
                        help="lambda: use the exact formula where one exists")
    return parser


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    needs_d = ns.command not in ("repro",)
    if needs_d and ns.d is None:
        raise UsageError(f"{ns.command} needs --d")
    if ns.command in ("lambda", "ubound", "verify", "constant") and ns.q is None:
        raise UsageError(f"{ns.command} needs --q")
    if ns.command == "repro" and ns.section is None:
        raise UsageError(f"repro needs a section: {', '.join(SECTIONS)}")
    if ns.command != "repro" and ns.section is not None:
        raise UsageError(f"unexpected argument {ns.section!r}")
    if ns.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if not ns.cutoff > 0 or (ns.tol is not None and not ns.tol > 0):
        raise UsageError("--cutoff and --tol must be positive")
    q = None
    if ns.q is not None:
        if ns.q.strip().lower() != "inf":
            try:
                Fraction(ns.q)
            except (ValueError, ZeroDivisionError):
                raise UsageError(f"--q expects a rational or inf, got {ns.q!r}") from None
        q = parse_q(ns.q)
    return RunConfig(
        command=ns.command,
        d=parse_range(ns.d, "d", 2) if ns.d is not None else [],
        q=q,
        k=parse_range(ns.k, "k", 0),
        cutoff_R=ns.cutoff,
        tol=ns.tol,
        output=ns.output,
        out_path=ns.out_path,
        jobs=ns.jobs,
        closed_form=ns.closed_form,
        section=ns.section,
    )


# ---------------------------------------------------------------------------
# commands; each returns (results, verdict)


def _lambda_row(res: LambdaResult) -> dict:
    spec = res.spec
    row = {
        "d": spec.d, "q": format_q(spec.q), "k": spec.k,
        "power": res.power, "lambda": res.lam, "head": res.head,
        "tail_hi": res.tail_hi, "cutoff_R": res.cutoff_R,
    }
    if spec.finite:
        row["head_3dp"] = truncate(res.head.lo)
    if res.notes:
        row["notes"] = list(res.notes)
    return row


def _closed_form_row(d, q, k) -> dict:
    if k != 0 or not (q == 4 or q == INF):
        raise DomainError("closed form is available only for k = 0 with q = 4 or q = inf")
    if q == 4:
        power = lambda4_closed(d)
        lam = power ** 0.25
    else:
        power = lam = lambda_inf_zero(d)
    return {"d": d, "q": format_q(q), "k": 0, "power": Enclosure.from_mid_rad(power, 0.0),
            "lambda": Enclosure.from_mid_rad(lam, 0.0), "source": "closed form"}


def cmd_lambda(cfg: RunConfig):
    rows = []
    for d in cfg.d:
        if cfg.closed_form:
            rows.extend(_closed_form_row(d, cfg.q, k) for k in cfg.k)
            continue
        specs = [ProblemSpec(d, cfg.q, k) for k in cfg.k]
        tol = cfg.tol or DEFAULT_TOL
        rows.extend(_lambda_row(r) for r in lambda_many(specs, cfg.cutoff_R, tol, cfg.jobs))
    return rows, None


def cmd_ubound(cfg: RunConfig):
    rows = []
    for d in cfg.d:
        for k in cfg.k:
            rows.append({"d": d, "q": format_q(cfg.q), "k": k,
                         "u_bound": bounds.u_bound(d, cfg.q, k),
                         "u_bound_power": bounds.u_bound_power(d, cfg.q, k)})
    return rows, None


def cmd_beta(cfg: RunConfig):
    return [{"d": d, "beta": bounds.beta_gap(d)} for d in cfg.d], None


def _q0_row(d, tol):
    rep = bounds.q0_upper(d, tol)
    window = rep.grid_q >= rep.q0_upper
    return {"d": d, "q0_upper": rep.q0_upper, "samples": rep.samples,
            "window_min_residual": float(rep.grid_residual[window].min()),
            "method_note": rep.method_note}


def cmd_q0(cfg: RunConfig):
    return [_q0_row(d, cfg.tol or Q0_TOL) for d in cfg.d], None


def _only_d(cfg):
    if len(cfg.d) != 1:
        raise DomainError(f"{cfg.command} takes a single dimension")
    return cfg.d[0]


def cmd_verify(cfg: RunConfig):
    d = _only_d(cfg)
    rep = verify_hierarchy(d, cfg.q, cfg.cutoff_R, cfg.tol or DEFAULT_TOL, cfg.jobs)
    summary = {
        "kind": "summary", "d": d, "q": format_q(rep.q), "cutoff_K": rep.cutoff_K,
        "cutoff_K_strict": rep.cutoff_K_strict, "lambda0_power_lo": rep.lambda0_power_lo,
        "threshold_rounded": rep.threshold_rounded, "threshold_strict": rep.threshold_strict,
        "bound_after_K": rep.bound_after_K, "method": rep.method, "cutoff_R": rep.cutoff_R,
        "offending_k": rep.offending, "notes": rep.notes,
    }
    rows = [summary] + [dict(_lambda_row(r), kind="k") for r in [rep.lambda0] + rep.results]
    return rows, rep.verdict


def cmd_constant(cfg: RunConfig):
    d = _only_d(cfg)
    res = sharp_constant(d, cfg.q, cfg.cutoff_R, cfg.tol or DEFAULT_TOL, cfg.jobs)
    row = {"d": d, "q": format_q(res.q), "constant": res.constant, "argmax_k": res.argmax_k,
           "certified": res.certified, "lambda": res.lam, "notes": res.notes}
    return [row], VERIFIED if res.certified else INCONCLUSIVE


def _repro_thm3(cfg):
    rows = []
    for d, value in published.Q0_TABLE.items():
        ours = bounds.q0_upper(d, cfg.tol or Q0_TOL).q0_upper
        resid = bounds.threshold_residual(d, value)
        rows.append({"item": f"q0({d})", "published": value, "computed": ours,
                     "residual_at_published": resid,
                     "match": bool(ours <= value + 0.02 and resid >= 0)})
    return rows


def _head_matches(head: Enclosure, value: float) -> bool:
    return head.hi >= value and head.lo < value + 0.001


def _repro_hierarchy(cfg):
    d, q, head0, tail, K, heads = published.HIERARCHY_CASES[cfg.section]
    tol = cfg.tol or DEFAULT_TOL
    rep = verify_hierarchy(d, q, DEFAULT_R, tol, cfg.jobs)
    by_k = {r.spec.k: r for r in rep.results}
    missing = [ProblemSpec(d, q, k) for k in range(1, len(heads) + 1) if k not in by_k]
    for r in lambda_many(missing, DEFAULT_R, tol, cfg.jobs):
        by_k[r.spec.k] = r
    rows = [
        {"item": "head(0)", "published": head0, "computed": truncate(rep.lambda0.head.lo),
         "enclosure": rep.lambda0.head, "match": _head_matches(rep.lambda0.head, head0)},
        {"item": "tail", "published": tail, "computed": rep.lambda0.tail_hi,
         "match": rep.lambda0.tail_hi == tail},
        {"item": "cutoff K", "published": K, "computed": rep.cutoff_K,
         "match": rep.cutoff_K == K},
        {"item": "verdict", "published": VERIFIED, "computed": rep.verdict,
         "match": rep.verdict == VERIFIED},
    ]
    for k, value in enumerate(heads, 1):
        head = by_k[k].head
        rows.append({"item": f"head({k})", "published": value, "computed": truncate(head.lo),
                     "enclosure": head, "match": _head_matches(head, value)})
    return rows


def landau_sup(nu: float):
    """(argmax, Enclosure) for sup_r r^{1/3} |J_nu(r)|."""
    def f(r):
        m, rho = specfun.bessel_j_array(nu, r)
        w = np.cbrt(r)
        return np.abs(m) * w, rho * w
    return maximize(f, 0.0, 2 * nu + 30)


def _repro_landau(cfg):
    rows = []
    for nu in LANDAU_ORDERS:
        arg, value = landau_sup(nu)
        rows.append({"item": f"nu={nu:g}", "published": published.LANDAU_DIGITS,
                     "computed": value.hi, "argmax": arg,
                     "match": bool(value.hi <= specfun.LANDAU_L)})
    return rows


def cmd_repro(cfg: RunConfig):
    if cfg.section == "thm3":
        rows = _repro_thm3(cfg)
    elif cfg.section == "landau-table":
        rows = _repro_landau(cfg)
    else:
        rows = _repro_hierarchy(cfg)
    return rows, "MATCH" if all(r["match"] for r in rows) else "MISMATCH"


DISPATCH = {
    "lambda": cmd_lambda, "ubound": cmd_ubound, "beta": cmd_beta, "q0": cmd_q0,
    "verify": cmd_verify, "constant": cmd_constant, "repro": cmd_repro,
}


# ---------------------------------------------------------------------------
# output


def _digits15(x: float, direction: int = 0) -> float:
    """``x`` at 15 significant digits; ``direction`` -1/+1 rounds outward."""
    near = float(f"{x:.15g}")
    if direction == 0 or not math.isfinite(x) or (near - x) * direction >= 0:
        return near
    # step one unit in the 15th digit past x; idempotent on already-rounded values
    mant, exp = f"{x:.14e}".split("e")
    step = 10.0 ** (int(exp) - 14)
    return float(f"{float(mant) * 10 ** int(exp) + direction * step:.15g}")


def canonical(value):
    """JSON-ready copy with floats at 15 significant digits."""
    if isinstance(value, Enclosure):
        return {"lo": _digits15(value.lo, -1), "hi": _digits15(value.hi, +1)}
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return _digits15(value)
    return value


def dump_json(report: dict) -> str:
    return json.dumps(canonical(report), sort_keys=True, indent=2) + "\n"


def _cell(value) -> str:
    if isinstance(value, Enclosure):
        return str(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list):
        return "; ".join(_cell(v) for v in value)
    return str(value)


def render_table(rows) -> str:
    if not rows:
        return ""
    out = []
    groups = {}
    for row in rows:
        groups.setdefault(tuple(row), []).append(row)
    for keys, group in groups.items():
        cells = [[_cell(r[k]) for k in keys] for r in group]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        out.append("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip())
        out.append("  ".join("-" * w for w in widths))
        out.extend("  ".join(c.ljust(w) for c, w in zip(cr, widths)).rstrip() for cr in cells)
        out.append("")
    return "\n".join(out)


def _csv_row(row: dict) -> dict:
    power, lam = row["power"], row["lambda"]
    return {"d": row["d"], "q": row["q"], "k": row["k"],
            "power_lo": f"{power.lo:.15g}", "power_hi": f"{power.hi:.15g}",
            "lambda_lo": f"{lam.lo:.15g}", "lambda_hi": f"{lam.hi:.15g}",
            "tail_hi": f"{row.get('tail_hi', 0.0):.15g}", "cutoff_R": f"{row.get('cutoff_R', 0.0):.15g}"}


def render_csv(rows) -> str:
    buf = io.StringIO()
    lambda_rows = [r for r in rows if "power" in r and "k" in r]
    if lambda_rows:
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(_csv_row(r) for r in lambda_rows)
        return buf.getvalue()
    keys = []
    for r in rows:
        keys.extend(k for k in r if k not in keys)
    writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    writer.writeheader()
    writer.writerows({k: _cell(v) for k, v in r.items()} for r in rows)
    return buf.getvalue()


def _params(cfg: RunConfig) -> dict:
    params = {"cutoff_R": cfg.cutoff_R}
    if cfg.d:
        params["d"] = cfg.d if len(cfg.d) > 1 else cfg.d[0]
    if cfg.q is not None:
        params["q"] = format_q(cfg.q)
    if cfg.command in ("lambda", "ubound"):
        params["k"] = cfg.k if len(cfg.k) > 1 else cfg.k[0]
    if cfg.tol is not None:
        params["tol"] = cfg.tol
    if cfg.section:
        params["section"] = cfg.section
    if cfg.closed_form:
        params["closed_form"] = True
    return params


def render(cfg: RunConfig, rows, verdict) -> str:
    if cfg.output == "json":
        report = {"command": cfg.command, "params": _params(cfg), "results": rows,
                  "version": __version__}
        if verdict is not None:
            report["verdict"] = verdict
        return dump_json(report)
    if cfg.output == "csv":
        return render_csv(rows)
    text = render_table(rows)
    if verdict is not None:
        text += f"verdict: {verdict}\n"
    return text


def _exit_code(verdict) -> int:
    if verdict == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    if verdict in (REFUTED, "MISMATCH"):
        return EXIT_REFUTED
    return EXIT_OK


def run(argv=None, stdout=None) -> int:
    """Execute one command; returns the process exit code."""
    stdout = stdout or sys.stdout
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"vega-sharp: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        rows, verdict = DISPATCH[cfg.command](cfg)
    except (DomainError, RangeError) as exc:
        print(f"vega-sharp: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ToleranceNotMet as exc:
        print(f"vega-sharp: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    text = render(cfg, rows, verdict)
    if cfg.out_path:
        with open(cfg.out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return _exit_code(verdict)


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
