"""Command-line front end: ``hayman <command> [equation flags] [--json]``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from .algebra import Poly, RatFunc, format_poly
from .catalog import ENTRIES, run_catalog
from .classifier import Classification, Coefficients, NoBranch, classify, normalize_hayman
from .growth import GrowthReport, growth_report, infinite_order_scenarios
from .parser import ParseError, format_ratfunc, parse_ratfunc
from .series import (
    DEFAULT_N,
    DEFAULT_TOL,
    TruncationError,
    closed_form_instance,
    compare,
    order_estimate,
    residual_check,
    taylor_solve,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

EXIT_OK, EXIT_INPUT, EXIT_NO_BRANCH, EXIT_NUMERIC, EXIT_BOUND = 0, 1, 2, 3, 4

NORMAL_KEYS = ("a", "b", "alpha", "beta", "gamma")
GENERAL_KEYS = ("tau1", "tau2", "kappa0", "kappa1", "kappa2", "kappa3")
OPTION_KEYS = ("tol", "N", "radii", "c1", "c2", "k1", "z0", "w0", "w1", "radius")
CONSTANTS = {"e": math.e, "pi": math.pi}


class InputError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input


def parse_number(text) -> complex | Fraction:
    """Rational literal, complex literal (``1+2j`` or ``1+2i``), ``e`` or ``pi``."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return complex(text)
    s = str(text).strip().replace(" ", "")
    if s in CONSTANTS:
        return complex(CONSTANTS[s])
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(s.replace("i", "j"))
    except ValueError:
        raise InputError(f"not a number: {text!r}") from None


def _load_file(path: str) -> tuple[dict, dict]:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e}") from None
    except tomllib.TOMLDecodeError as e:
        raise InputError(f"{path}: {e}") from None
    coeffs = {k: str(v) for k, v in data.get("coefficients", {}).items()}
    unknown = set(coeffs) - set(NORMAL_KEYS) - set(GENERAL_KEYS)
    if unknown:
        raise InputError(f"unknown coefficient keys: {sorted(unknown)}")
    opts = dict(data.get("options", {}))
    unknown = set(opts) - set(OPTION_KEYS)
    if unknown:
        raise InputError(f"unknown option keys: {sorted(unknown)}")
    return coeffs, opts


def gather(args: argparse.Namespace) -> tuple[Coefficients, dict, dict]:
    """Coefficients, echo of the textual input, and options (flags override the file)."""
    coeffs: dict = {}
    opts: dict = {}
    if getattr(args, "file", None):
        coeffs, opts = _load_file(args.file)
    for k in NORMAL_KEYS + GENERAL_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            coeffs[k] = v
    for k in OPTION_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            opts[k] = v

    normal = [k for k in NORMAL_KEYS if k in coeffs]
    general = [k for k in GENERAL_KEYS if k in coeffs]
    if normal and general:
        raise InputError("give either a, b, alpha, beta, gamma or tau1, tau2, kappa0..kappa3, not both")
    try:
        if general:
            vals = [parse_ratfunc(coeffs.get(k, "0")) for k in GENERAL_KEYS]
            c = normalize_hayman(*vals)
            echo = {k: format_ratfunc(v) for k, v in zip(GENERAL_KEYS, vals)}
            echo["form"] = "general"
        else:
            c = Coefficients(*(parse_ratfunc(coeffs.get(k, "0")) for k in NORMAL_KEYS))
            echo = {"form": "normal"}
        echo.update({k: format_ratfunc(v) for k, v in zip(NORMAL_KEYS, c.as_tuple())})
    except ParseError as e:
        raise InputError(str(e)) from None
    return c, echo, opts


# ---------------------------------------------------------------------------
# serialization


def to_jsonable(x: Any) -> Any:
    if isinstance(x, RatFunc):
        return format_ratfunc(x)
    if isinstance(x, Poly):
        return format_poly(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return {"re": x.real, "im": x.imag}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def classification_json(cl: Classification) -> dict:
    d = cl.derived
    return {
        "primary": cl.primary.label,
        "labels": list(cl.labels),
        "branches": [
            {
                "label": br.label,
                "identities": list(br.identities),
                "flags": list(br.flags),
                "consistency": [
                    {
                        "status": r.status.value,
                        "C2": format_ratfunc(r.C2),
                        "C1": format_ratfunc(r.C1),
                        "C0": format_ratfunc(r.C0),
                        "candidates": [format_ratfunc(w) for w in r.candidates],
                    }
                    for r in br.consistency
                ],
                "data": to_jsonable(br.data()),
            }
            for br in cl.branches
        ],
        "derived": {
            "A": None if d.A is None else format_ratfunc(d.A),
            "B": format_ratfunc(d.B),
            "intermediates": to_jsonable(d.intermediates),
            "flags": list(d.flags),
        },
    }


def growth_json(g: GrowthReport) -> dict:
    return {
        "kind": g.kind.value,
        "value": None if g.value is None else str(g.value),
        "exact": g.exact,
        "provenance": g.provenance,
        "diagnostic": g.diagnostic,
        "flags": list(g.flags),
    }


def new_report(command: str, echo: Optional[dict]) -> dict:
    return {
        "command": command,
        "input": echo,
        "classification": None,
        "growth": None,
        "scenarios": None,
        "verification": None,
        "series": None,
        "estimate": None,
        "catalog": None,
        "warnings": [],
        "exit_code": EXIT_OK,
    }


def _warnings(cl: Classification, g: Optional[GrowthReport] = None) -> list[str]:
    out = list(cl.warnings) + list(cl.derived.flags)
    for br in cl.branches:
        out.extend(f"{br.label}: {f}" for f in br.flags)
    if g is not None:
        out.extend(g.flags)
        if g.diagnostic:
            out.append(f"growth: {g.diagnostic}")
    return list(dict.fromkeys(out))


# ---------------------------------------------------------------------------
# text rendering


def render_text(rep: dict) -> str:
    lines: list[str] = []
    inp = rep.get("input")
    if inp:
        lines.append("equation: w''w - w'^2 + a w'w + b w^2 = alpha w + beta w' + gamma")
        for k in NORMAL_KEYS:
            lines.append(f"  {k:5} = {inp[k]}")
    cl = rep.get("classification")
    if cl:
        lines.append(f"primary branch: {cl['primary']}")
        if len(cl["labels"]) > 1:
            lines.append(f"also matching: {', '.join(cl['labels'][1:])}")
        der = cl["derived"]
        lines.append(f"A = {der['A']}")
        lines.append(f"B = {der['B']}")
        for br in cl["branches"]:
            lines.append(f"[{br['label']}]")
            for k, v in br["data"].items():
                lines.append(f"  {k}: {v}")
            for r in br["consistency"]:
                cand = f" candidates {r['candidates']}" if r["candidates"] else ""
                lines.append(f"  consistency: {r['status']}{cand}")
    g = rep.get("growth")
    if g:
        val = f" {g['value']}" if g["value"] is not None else ""
        lines.append(f"growth: {g['kind']}{val} ({g['provenance']})")
    sc = rep.get("scenarios")
    if sc:
        lines.append(f"infinite-order scenarios: 1={sc['scenario1']} 2={sc['scenario2']}")
    ver = rep.get("verification")
    if ver:
        for v in ver["forms"]:
            status = "ok" if v["passed"] else "FAILED"
            lines.append(f"residual {v['branch']}: {v['residual']:.3e} {status}")
    ser = rep.get("series")
    if ser:
        cs = ", ".join(f"{complex(c['re'], c['im']):.6g}" for c in ser["coefficients"][:8])
        lines.append(f"series at z0 = {ser['z0']} (N = {ser['N']}): {cs}, ...")
        if ser.get("compare") is not None:
            lines.append(f"series vs closed form: {ser['compare']:.3e}")
    est = rep.get("estimate")
    if est:
        lines.append(f"order estimate: {est['order']:.4f} (nu = {est['nus']} at r = {est['radii']})")
        if est["hyper_slope"] is not None:
            lines.append(f"log log nu slope: {est['hyper_slope']:.4f}")
    cat = rep.get("catalog")
    if cat:
        for e in cat:
            lines.append(f"{'PASS' if e['passed'] else 'FAIL'} {e['name']} ({e['seconds']:.2f}s)")
            for ch in e["checks"]:
                lines.append(f"    {'ok ' if ch['passed'] else 'BAD'} {ch['name']}: {ch['detail']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# commands


def _exit_for(cl: Classification) -> int:
    if isinstance(cl.primary, NoBranch):
        return EXIT_NO_BRANCH
    if cl.incomplete:
        return EXIT_BOUND
    return EXIT_OK


def _classify(rep: dict, c: Coefficients) -> Classification:
    cl = classify(c)
    rep["classification"] = classification_json(cl)
    rep["warnings"] = _warnings(cl)
    rep["exit_code"] = _exit_for(cl)
    return cl


def _growth(rep: dict, c: Coefficients, cl: Classification) -> None:
    g = growth_report(cl, c)
    sc = infinite_order_scenarios(c)
    rep["growth"] = growth_json(g)
    rep["scenarios"] = {
        "scenario1": sc.scenario1,
        "scenario2": sc.scenario2,
        "conditions": to_jsonable(sc.conditions),
    }
    rep["warnings"] = _warnings(cl, g)


def _constants(opts: dict) -> dict:
    out = {}
    for k in ("c1", "c2", "k1"):
        if k in opts:
            v = parse_number(opts[k])
            out[k] = complex(v) if not isinstance(v, Fraction) else v
    return out


def _radii(opts: dict) -> list[float]:
    r = opts.get("radii", "2,4,8,16")
    vals = r if isinstance(r, list) else str(r).split(",")
    try:
        return [float(x) for x in vals]
    except ValueError:
        raise InputError(f"bad radii: {r!r}") from None


def cmd_verify(rep: dict, c: Coefficients, opts: dict) -> None:
    cl = _classify(rep, c)
    tol = float(opts.get("tol", DEFAULT_TOL))
    forms = []
    for br in cl.branches:
        try:
            f = closed_form_instance(br, c, **_constants(opts))
        except (ZeroDivisionError, ValueError) as e:
            rep["warnings"].append(f"{br.label}: cannot instantiate closed form: {e}")
            continue
        if f is None:
            continue
        res = residual_check(c, f)
        forms.append({"branch": br.label, "residual": res, "passed": res < tol,
                      "constants": to_jsonable(f.constants)})
    if not forms:
        rep["warnings"].append("no branch has an instantiable closed form")
    rep["verification"] = {"tolerance": tol, "forms": forms}
    if rep["exit_code"] == EXIT_OK and any(not f["passed"] for f in forms):
        rep["exit_code"] = EXIT_NUMERIC


def _initial_data(c: Coefficients, cl: Classification, opts: dict):
    z0 = parse_number(opts.get("z0", 0))
    if "w0" in opts and "w1" in opts:
        return z0, parse_number(opts["w0"]), parse_number(opts["w1"]), None
    form = closed_form_instance(cl.primary, c, **_constants(opts))
    if form is None:
        raise InputError("give --w0 and --w1: the primary branch has no closed form to seed from")
    w0, w1, _ = form.evaluate(z0, digits=50)
    return z0, w0, w1, form


def _series(c: Coefficients, cl: Classification, opts: dict):
    z0, w0, w1, form = _initial_data(c, cl, opts)
    N = int(opts.get("N", DEFAULT_N))
    try:
        s = taylor_solve(c, z0, w0, w1, N)
    except ValueError as e:
        raise InputError(str(e)) from None
    return s, form


def cmd_series(rep: dict, c: Coefficients, opts: dict) -> None:
    cl = _classify(rep, c)
    s, form = _series(c, cl, opts)
    out = {
        "z0": str(opts.get("z0", 0)),
        "N": s.order,
        "coefficients": [to_jsonable(complex(x)) for x in s.coefficients],
        "compare": None,
    }
    if form is not None:
        radius = float(opts.get("radius", 1.0))
        out["compare"] = compare(s, form, radius)
        tol = float(opts.get("tol", 1e-8))
        if out["compare"] >= tol and rep["exit_code"] == EXIT_OK:
            rep["exit_code"] = EXIT_NUMERIC
    rep["series"] = out


def cmd_estimate(rep: dict, c: Coefficients, opts: dict) -> None:
    cl = _classify(rep, c)
    s, _ = _series(c, cl, opts)
    try:
        est = order_estimate(s, _radii(opts))
    except TruncationError as e:
        rep["warnings"].append(str(e))
        if rep["exit_code"] == EXIT_OK:
            rep["exit_code"] = EXIT_BOUND
        return
    except ValueError as e:
        raise InputError(str(e)) from None
    rep["estimate"] = {
        "order": est.order,
        "hyper_slope": est.hyper_slope,
        "radii": list(est.radii),
        "nus": list(est.nus),
        "log_nu_over_r": list(est.log_nu_over_r),
    }


def cmd_catalog(rep: dict, args: argparse.Namespace) -> None:
    results = run_catalog(args.entry or None, workers=args.workers)
    rep["catalog"] = [
        {
            "name": r.name,
            "passed": r.passed,
            "seconds": r.seconds,
            "checks": [{"name": ch.name, "passed": ch.passed, "detail": ch.detail} for ch in r.checks],
        }
        for r in results
    ]
    if not all(r.passed for r in results):
        rep["exit_code"] = EXIT_NUMERIC


# ---------------------------------------------------------------------------
# entry point


def _add_equation_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("equation (normal form)")
    for k in NORMAL_KEYS:
        g.add_argument(f"--{k}", metavar="EXPR")
    h = p.add_argument_group("equation (general form, normalized on input)")
    for k in GENERAL_KEYS:
        h.add_argument(f"--{k}", metavar="EXPR")
    p.add_argument("--file", metavar="TOML", help="[coefficients] and [options] tables; flags override")
    p.add_argument("--json", action="store_true", help="emit a single JSON document")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hayman",
        description="Classify w''w - w'^2 + a w'w + b w^2 = alpha w + beta w' + gamma and check the results.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("classify", "matching branches and derived data"),
        ("growth", "classification plus order / hyper-order"),
        ("verify", "residuals of the closed forms"),
        ("series", "Taylor integration at an ordinary point"),
        ("estimate-order", "central-index order estimate"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_equation_args(p)
        if name == "verify":
            p.add_argument("--tol")
        if name in ("verify", "series", "estimate-order"):
            for k in ("c1", "c2", "k1"):
                p.add_argument(f"--{k}", help="closed-form constant")
        if name in ("series", "estimate-order"):
            p.add_argument("--z0")
            p.add_argument("--w0")
            p.add_argument("--w1")
            p.add_argument("--N", type=int)
        if name == "series":
            p.add_argument("--radius", help="comparison radius")
            p.add_argument("--tol")
        if name == "estimate-order":
            p.add_argument("--radii", help="comma-separated, at least three")
    p = sub.add_parser("catalog", help="run the built-in examples")
    p.add_argument("--entry", action="append", choices=[e.name for e in ENTRIES])
    p.add_argument("--workers", type=int)
    p.add_argument("--json", action="store_true")
    return ap


_VALUE_FLAGS = {f"--{k}" for k in NORMAL_KEYS + GENERAL_KEYS + OPTION_KEYS}


def _attach_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--gamma -z^2`` as ``--gamma=-z^2`` so argparse does not read
    an expression with a leading minus as an option."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None) -> tuple[dict, int]:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_attach_values(argv))
    rep = new_report(args.command, None)
    try:
        if args.command == "catalog":
            cmd_catalog(rep, args)
        else:
            c, echo, opts = gather(args)
            rep["input"] = echo
            if args.command == "classify":
                _classify(rep, c)
            elif args.command == "growth":
                cl = _classify(rep, c)
                _growth(rep, c, cl)
            elif args.command == "verify":
                cmd_verify(rep, c, opts)
            elif args.command == "series":
                cmd_series(rep, c, opts)
            elif args.command == "estimate-order":
                cmd_estimate(rep, c, opts)
    except InputError as e:
        rep["warnings"].append(f"error: {e}")
        rep["exit_code"] = EXIT_INPUT
    return rep, rep["exit_code"]


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args_json = "--json" in (sys.argv[1:] if argv is None else argv)
        rep, code = run(argv)
    except SystemExit as e:  # argparse usage errors
        return EXIT_INPUT if e.code not in (0, None) else 0
    for w in rep["warnings"]:
        print(f"warning: {w}" if not w.startswith("error:") else w, file=sys.stderr)
    if args_json:
        print(json.dumps(rep, indent=2, sort_keys=False))
    else:
        text = render_text(rep)
        if text:
            print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
