"""Command-line front end.

Input files are JSON documents describing an inclusion (see
docs/schema.md).  Every command prints a single report to stdout, JSON
by default, with all matrix entries rendered as strings: rationals as
"p/q", floats with 17 significant digits.  Exit codes: 0 success, 1
domain error, 2 parse error or bad usage.
"""

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import core, distortion, loopbasis, markov, morita, tower
from .errors import MFDError, ParseError
from .numbers import (DEFAULT_TOLERANCE, format_scalar, is_exact, parse_scalar,
                      to_float)

COMMANDS = ("perron", "extend", "markov-trace", "homogeneity", "tower",
            "downward", "morita-rescale", "realizable", "loopbasis-verify",
            "report-all")


# ---------------------------------------------------------------------------
# Input parsing.

@dataclass
class SpecFile:
    path: str
    digest: str
    mode: str
    tolerance: float
    incl: object
    delta: object  # DistortionMatrix or None
    trace_A: object
    trace_B: object
    m0: object
    Lambda: object


def _parse_entry(raw, mode, field):
    """A matrix entry: number, "p/q" / decimal string, or [p, q] pair."""
    if raw is None:
        return None
    if isinstance(raw, list):
        if len(raw) != 2 or not all(isinstance(x, int) for x in raw):
            raise ParseError(f"{field}: a rational pair must be two integers", field=field)
        try:
            value = Fraction(raw[0], raw[1])
        except ZeroDivisionError:
            raise ParseError(f"{field}: zero denominator", field=field)
        return to_float(value) if mode == "float" else value
    try:
        return parse_scalar(raw, mode)
    except ValueError as exc:
        raise ParseError(f"{field}: {exc}", field=field)


def _parse_matrix(raw, mode, field, allow_null=False):
    if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
        raise ParseError(f"{field}: expected a non-empty nested array", field=field)
    out = []
    for i, row in enumerate(raw):
        out_row = []
        for j, x in enumerate(row):
            v = _parse_entry(x, mode, f"{field}[{i}][{j}]")
            if v is None and not allow_null:
                raise ParseError(f"{field}[{i}][{j}]: null not allowed here",
                                 field=f"{field}[{i}][{j}]")
            out_row.append(v)
        out.append(out_row)
    return out


def _parse_vector(raw, mode, field):
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{field}: expected a non-empty array", field=field)
    return [_parse_entry(x, mode, f"{field}[{k}]") for k, x in enumerate(raw)]


def load_spec(path, mode_override=None, tol_override=None):
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    digest = hashlib.sha256(blob).hexdigest()
    try:
        doc = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"{path}: {exc}")
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top-level value must be an object")

    mode = mode_override or doc.get("number_mode", "rational")
    if mode not in ("rational", "float"):
        raise ParseError(f"number_mode must be 'rational' or 'float', got {mode!r}",
                         field="number_mode")
    if tol_override is not None:
        tolerance = tol_override
    elif "tolerance" in doc:
        try:
            tolerance = float(parse_scalar(doc["tolerance"], "float"))
        except ValueError as exc:
            raise ParseError(f"tolerance: {exc}", field="tolerance")
    else:
        tolerance = DEFAULT_TOLERANCE

    if "D" not in doc:
        raise ParseError("missing dimension matrix D", field="D")
    D = _parse_matrix(doc["D"], mode, "D")
    Delta = _parse_matrix(doc["Delta"], mode, "Delta") if doc.get("Delta") is not None else None
    incl = core.validate_inclusion(D, Delta)
    if "a" in doc and doc["a"] != incl.a:
        raise ParseError(f"a = {doc['a']} does not match D with {incl.a} rows", field="a")
    if "b" in doc and doc["b"] != incl.b:
        raise ParseError(f"b = {doc['b']} does not match D with {incl.b} columns", field="b")

    delta = None
    if doc.get("delta") is not None:
        rows = _parse_matrix(doc["delta"], mode, "delta", allow_null=True)
        delta = distortion.as_distortion(rows, incl.graph)

    trace_A = _parse_vector(doc["trace_A"], mode, "trace_A") if doc.get("trace_A") is not None else None
    trace_B = _parse_vector(doc["trace_B"], mode, "trace_B") if doc.get("trace_B") is not None else None
    if trace_A is not None and len(trace_A) != incl.a:
        raise ParseError("trace_A length differs from a", field="trace_A")
    if trace_B is not None and len(trace_B) != incl.b:
        raise ParseError("trace_B length differs from b", field="trace_B")

    m0 = None
    Lambda = None
    if doc.get("m0") is not None or doc.get("Lambda") is not None:
        if doc.get("m0") is None or doc.get("Lambda") is None:
            raise ParseError("m0 and Lambda must be given together", field="m0")
        m0 = [int(x) for x in _parse_vector(doc["m0"], "rational", "m0")]
        Lambda = _parse_matrix(doc["Lambda"], "rational", "Lambda")

    return SpecFile(path=path, digest=digest, mode=mode, tolerance=tolerance,
                    incl=incl, delta=delta, trace_A=trace_A, trace_B=trace_B,
                    m0=m0, Lambda=Lambda)


def resolve_delta(spec, perron=None, require_explicit=False):
    """Distortion used by a command: explicit delta, else from trace_A,
    else the standard one."""
    if spec.delta is not None:
        return distortion.extend_to_complete(spec.delta, spec.incl.graph)
    if require_explicit:
        raise ParseError("this command needs a delta matrix in the input file",
                         field="delta")
    if perron is None:
        perron = core.perron_data(spec.incl)
    if spec.trace_A is not None:
        return markov.distortion_from_trace(spec.trace_A, spec.incl, perron)
    sigma = core.standard_distortion(perron)
    rows = [[sigma[i][j] for j in range(spec.incl.b)] for i in range(spec.incl.a)]
    return distortion.extend_to_complete(distortion.as_distortion(rows, spec.incl.graph),
                                         spec.incl.graph)


# ---------------------------------------------------------------------------
# Serialization.

def ser(x):
    if x is None or isinstance(x, (bool, str)):
        return x
    if isinstance(x, (int, float, Fraction)):
        return format_scalar(x)
    if isinstance(x, dict):
        return {str(k): ser(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [ser(v) for v in x]
    return str(x)


def dm_rows(dm):
    return [[dm.get(i, j) for j in range(dm.b)] for i in range(dm.a)]


def _table_lines(value, indent=""):
    lines = []
    if isinstance(value, dict):
        for k in value:
            v = value[k]
            if isinstance(v, (dict, list)):
                lines.append(f"{indent}{k}:")
                lines.extend(_table_lines(v, indent + "  "))
            else:
                lines.append(f"{indent}{k} = {v}")
    elif isinstance(value, list):
        if value and all(isinstance(r, list) for r in value):
            cells = [["." if x is None else str(x) for x in row] for row in value]
            widths = [max(len(cells[i][j]) for i in range(len(cells)))
                      for j in range(len(cells[0]))]
            for row in cells:
                lines.append(indent + "  ".join(c.rjust(w) for c, w in zip(row, widths)))
        else:
            for i, v in enumerate(value):
                if isinstance(v, (dict, list)):
                    lines.append(f"{indent}[{i}]:")
                    lines.extend(_table_lines(v, indent + "  "))
                else:
                    lines.append(f"{indent}[{i}] = {v}")
    else:
        lines.append(f"{indent}{value}")
    return lines


def emit(report, fmt):
    if fmt == "table":
        print("\n".join(_table_lines(report)))
    else:
        print(json.dumps(report, sort_keys=True, indent=2))


# ---------------------------------------------------------------------------
# Command implementations.  Each returns (result, diagnostics).

def cmd_perron(spec, args):
    perron = core.perron_data(spec.incl, max_iter=args.max_iter)
    sigma = core.standard_distortion(perron)
    result = {
        "d": perron.d,
        "d_squared": perron.d_squared,
        "alpha": list(perron.alpha),
        "beta": list(perron.beta),
        "sigma": [list(r) for r in sigma],
        "dual_functor": [list(r) for r in core.dual_functor_hom(perron)],
    }
    return result, {}


def cmd_extend(spec, args):
    if spec.delta is None:
        raise ParseError("extend needs a delta matrix in the input file", field="delta")
    total = distortion.extend_to_complete(spec.delta, spec.incl.graph, tol=spec.tolerance)
    ghom = distortion.extend_to_groupoid(total, tol=spec.tolerance)
    result = {
        "delta_complete": [list(r) for r in total.total],
        "eta": list(total.eta),
        "xi": list(total.xi),
        "groupoid_values": [list(r) for r in ghom.values],
    }
    return result, {"objects": ghom.n}


def cmd_markov_trace(spec, args):
    delta = resolve_delta(spec)
    tm = markov.trace_matrices(spec.incl, delta)
    tp = markov.markov_trace(spec.incl, delta, tol=spec.tolerance)
    result = {
        "T": [list(r) for r in tm.T],
        "T_tilde": [list(r) for r in tm.T_tilde],
        "d_squared": tp.d_squared,
        "trace_A": list(tp.tr_A),
        "trace_B": list(tp.tr_B),
    }
    return result, {}


def cmd_homogeneity(spec, args):
    delta = resolve_delta(spec)
    report = tower.homogeneity_report(spec.incl, delta, tol=spec.tolerance)
    result = dict(report.flags)
    result["row_sums"] = list(report.row_sums)
    result["homogeneous"] = report.homogeneous
    return result, {"all_flags_agree": report.all_flags_agree}


def cmd_tower(spec, args):
    perron = core.perron_data(spec.incl)
    delta = resolve_delta(spec, perron)
    sigma = core.standard_distortion(perron)
    diagnostics = {}
    levels = []
    if args.steps is not None:
        current = delta
        levels.append({"level": 0, "matrix": dm_rows(current)})
        for n in range(1, args.steps + 1):
            current = tower.phi_step(current, spec.incl)
            levels.append({"level": n, "matrix": dm_rows(current)})
        residual = tower.relative_residual(current, sigma)
        diagnostics["steps"] = args.steps
    else:
        trace = tower.iterate_to_fixed_point(delta, spec.incl, tol=args.tol or 1e-9,
                                             max_iter=args.max_iter, perron=perron)
        for lv in trace.levels:
            if lv.orientation == "even":
                levels.append({"level": lv.level // 2, "matrix": dm_rows(lv.matrix)})
        residual = trace.residual
        diagnostics["iterations"] = trace.iterations
        diagnostics["converged"] = trace.converged
    result = {
        "levels": levels,
        "sigma": [list(r) for r in sigma],
        "residual_to_standard": residual,
    }
    return result, diagnostics


def cmd_downward(spec, args):
    delta = resolve_delta(spec)
    mode = "markov_tunnel" if args.markov_tunnel else "strict"
    res = tower.downward_feasibility(spec.incl, delta, mode=mode, tol=spec.tolerance)
    result = {"status": res.status, "mode": mode}
    if res.pi is not None:
        result["pi"] = list(res.pi)
    if res.certificate is not None:
        result["certificate"] = res.certificate
    if res.status == "Feasible":
        gamma = tower.downward_distortion(delta, res.pi)
        result["gamma"] = dm_rows(gamma)
    return result, {}


def cmd_morita_rescale(spec, args):
    perron = core.perron_data(spec.incl)
    delta = resolve_delta(spec, perron)
    if args.rho:
        parts = [p.strip() for p in args.rho.split(",") if p.strip()]
        try:
            rho = [parse_scalar(p, spec.mode) for p in parts]
        except ValueError as exc:
            raise ParseError(f"--rho: {exc}")
        if len(rho) != spec.incl.a:
            raise ParseError(f"--rho needs {spec.incl.a} entries, got {len(rho)}")
        rescaled = morita.morita_distortion(delta, spec.incl, rho)
        result = {"rho": rho, "delta_rescaled": dm_rows(rescaled)}
    else:
        weights = morita.rescale_to_standard(delta, spec.incl, perron, tol=spec.tolerance)
        rescaled = morita.morita_distortion(delta, spec.incl, weights)
        sigma = core.standard_distortion(perron)
        dev = max(abs(to_float(rescaled.get(i, j)) - sigma[i][j]) / sigma[i][j]
                  for (i, j) in spec.incl.graph.edges)
        result = {"rho": list(weights.rho), "delta_rescaled": dm_rows(rescaled),
                  "residual_to_standard": dev}
    return result, {}


def cmd_realizable(spec, args):
    delta = resolve_delta(spec)
    res = morita.realizability_check(delta, spec.incl, tol=spec.tolerance)
    result = {"realizable": res.realizable, "eta": list(res.eta), "xi": list(res.xi)}
    if res.violation is not None:
        result["violation"] = res.violation
    return result, {}


def cmd_loopbasis_verify(spec, args):
    if spec.m0 is None:
        raise ParseError("loopbasis-verify needs m0 and Lambda in the input file",
                         field="m0")
    pair = loopbasis.build_loop_algebra(spec.m0, spec.Lambda)
    basis = loopbasis.pimsner_popa_basis(pair)
    report = loopbasis.verify_pp_identity(pair, basis)
    transfer = loopbasis.transfer_matrix(pair)
    dens = loopbasis.density_sequence(pair, min(6, max(1, args.steps or 6)), basis)
    result = {
        "d_squared": pair.d_squared,
        "lambda0": list(pair.lambda0),
        "lambda1": list(pair.lambda1),
        "loop_counts": {"N0": len(pair.n0_loops), "N1": len(pair.n1_loops)},
        "watatani_deviation": report["watatani_deviation"],
        "pp_deviation": report["pp_deviation"],
        "ok": bool(report["watatani_ok"] and report["pp_ok"]),
        "transfer_matrix": [list(r) for r in transfer],
        "densities": [list(h) for h in dens.levels],
        "h_inf": list(dens.h_inf),
    }
    diagnostics = {"basis_size": report["basis_size"],
                   "recursion_deviation": format_scalar(dens.recursion_deviation)}
    return result, diagnostics


def cmd_report_all(spec, args):
    incl = spec.incl
    perron = core.perron_data(incl)
    sigma = core.standard_distortion(perron)
    delta = resolve_delta(spec, perron)
    sections = {}
    sections["validate"] = {
        "a": incl.a, "b": incl.b,
        "edges": len(incl.graph.edges),
        "connected": True,
    }
    sections["perron"], _ = cmd_perron(spec, args)
    if spec.delta is not None:
        sections["extend"], _ = cmd_extend(spec, args)
    sections["markov_trace"] = None
    try:
        sections["markov_trace"], _ = cmd_markov_trace(spec, args)
        tp = markov.markov_trace(incl, delta, tol=spec.tolerance)
        ext = markov.check_extremal_inclusion(incl, delta, tp, perron, tol=spec.tolerance)
        sections["extremality"] = {"E1": ext.e1, "E2": ext.e2, "E3": ext.e3,
                                   "extremal": ext.extremal}
    except MFDError as exc:
        sections["markov_trace"] = {"error": type(exc).__name__, "message": str(exc)}
        sections["extremality"] = None
    sections["homogeneity"], _ = cmd_homogeneity(spec, args)
    downward = {}
    for mode in ("strict", "markov_tunnel"):
        res = tower.downward_feasibility(incl, delta, mode=mode, tol=spec.tolerance)
        entry = {"status": res.status}
        if res.pi is not None:
            entry["pi"] = list(res.pi)
        if res.certificate is not None:
            entry["certificate"] = res.certificate
        downward[mode] = entry
    sections["downward"] = downward
    sections["realizability"], _ = cmd_realizable(spec, args)

    phi_sigma = tower.phi_step(distortion.as_distortion(
        [[sigma[i][j] for j in range(incl.b)] for i in range(incl.a)], incl.graph), incl)
    sections["standard_fixed_point_residual"] = tower.relative_residual(phi_sigma, sigma)

    preview = []
    current = delta
    for n in range(1, 4):
        current = tower.phi_step(current, incl)
        preview.append({"level": n, "matrix": dm_rows(current)})
    sections["tower_preview"] = preview

    if spec.m0 is not None:
        fdm = markov.finite_dim_markov(spec.Lambda, spec.m0)
        sections["finite_dimensional"] = {
            "m0": list(spec.m0),
            "m1": list(fdm.m_B),
            "lambda0": list(fdm.lambda_A),
            "lambda1": list(fdm.lambda_B),
            "d_squared": fdm.d_squared,
            "super_extremal": markov.check_super_extremal_findim(spec.m0, spec.Lambda),
        }
    return sections, {"delta_source": ("explicit" if spec.delta is not None else
                                       "trace_A" if spec.trace_A is not None else "standard")}


DISPATCH = {
    "perron": cmd_perron,
    "extend": cmd_extend,
    "markov-trace": cmd_markov_trace,
    "homogeneity": cmd_homogeneity,
    "tower": cmd_tower,
    "downward": cmd_downward,
    "morita-rescale": cmd_morita_rescale,
    "realizable": cmd_realizable,
    "loopbasis-verify": cmd_loopbasis_verify,
    "report-all": cmd_report_all,
}


# ---------------------------------------------------------------------------
# Argument parsing and entry point.

def _add_common(p, input_required=True):
    p.add_argument("--input", required=input_required, help="JSON spec file")
    p.add_argument("--mode", choices=("rational", "float"), default=None,
                   help="number mode override")
    p.add_argument("--tol", type=float, default=None, help="tolerance override")
    p.add_argument("--max-iter", type=int, default=10 ** 4, dest="max_iter")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--steps", type=int, default=None, help="tower levels to compute")
    p.add_argument("--rho", default=None, help="comma-separated Morita weights")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--strict", action="store_true", default=False)
    g.add_argument("--markov-tunnel", action="store_true", default=False,
                   dest="markov_tunnel")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mfd",
        description="Distortion calculus for finite-index multifactor inclusions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        _add_common(sub.add_parser(name))
    batch = sub.add_parser("batch", help="run a command over a directory of spec files")
    _add_common(batch, input_required=True)
    batch.add_argument("--command", required=True, choices=COMMANDS,
                       dest="sub_command")
    return parser


def _env_tolerance():
    raw = os.environ.get("MFD_TOLERANCE")
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"MFD_TOLERANCE is not a number: {raw!r}")


def run_single(command, args):
    tol = args.tol if args.tol is not None else _env_tolerance()
    spec = load_spec(args.input, mode_override=args.mode, tol_override=tol)
    result, diagnostics = DISPATCH[command](spec, args)
    flags = {k: v for k, v in vars(args).items()
             if k not in ("command",) and v is not None and v is not False}
    return {
        "command": command,
        "input_digest": spec.digest,
        "mode": spec.mode,
        "flags": ser(flags),
        "result": ser(result),
        "diagnostics": ser(diagnostics),
    }


def _error_payload(exc):
    payload = {}
    for k, v in vars(exc).items():
        try:
            payload[k] = ser(v)
        except Exception:
            payload[k] = str(v)
    return {"error": type(exc).__name__, "message": str(exc), "payload": payload}


def run_batch(args):
    directory = args.input
    if not os.path.isdir(directory):
        raise ParseError(f"not a directory: {directory}")
    names = sorted(n for n in os.listdir(directory) if n.endswith(".json"))
    reports = {}
    counts = {"total": 0, "ok": 0, "domain_error": 0, "parse_error": 0}
    for name in names:
        counts["total"] += 1
        sub_args = argparse.Namespace(**vars(args))
        sub_args.input = os.path.join(directory, name)
        try:
            reports[name] = run_single(args.sub_command, sub_args)
            counts["ok"] += 1
        except ParseError as exc:
            reports[name] = _error_payload(exc)
            counts["parse_error"] += 1
        except MFDError as exc:
            reports[name] = _error_payload(exc)
            counts["domain_error"] += 1
    return {"command": "batch", "sub_command": args.sub_command,
            "summary": ser(counts), "reports": reports}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "batch":
            report = run_batch(args)
        else:
            report = run_single(args.command, args)
    except ParseError as exc:
        print(json.dumps(_error_payload(exc), sort_keys=True), file=sys.stderr)
        return 2
    except MFDError as exc:
        print(json.dumps(_error_payload(exc), sort_keys=True), file=sys.stderr)
        return 1
    emit(report, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
