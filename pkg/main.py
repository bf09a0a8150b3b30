# main.py
import argparse, json, sys, time
from collections import Counter
from fractions import Fraction
from pathlib import Path

from dotenv import load_dotenv
from jsonschema import validate, ValidationError
from pydantic import ValidationError as ModelError
from rich.console import Console
from rich.table import Table

from codec import (
    SCHEMA_VERSION, CodecError, decode_trace, encode_interval, encode_matrix,
    encode_params, encode_trace, encode_value, parse_params, parse_rational,
)
from exact_arith import ExactArithError, charpoly, to_decimal
from fs_ops import append_log, read_log, write_document
from iis_core import (
    SystemShapeError, build_special_symmetric, coverage_gaps, genericity_relation, orbit,
)
from paths import HEIGHT_ENV, WORKERS_ENV, env_int, log_file, output_dir, resolve_output
from rauzy_engine import InductionError, group_generalized, reduced_sequence, run_induction
from render import render_ascii, render_svg
from sampling import map_ordered, seeded_samples
from schemas import DEFAULT_HEIGHT, CaseModel, CommandConfig, SymmetrizationReport, VerifySummary
from symmetry_cases import (
    DegenerateCase, HoleExpected, GENERALIZED_BOUND, case_counts, case_matrices, classify_case,
    critical_chain, normalize_params, symmetrize, verify_symmetrization,
)
from taxonomy import build_schema, trace_schema
from thin_type import (
    case_route, matrix_M, thin_eigen_params, thin_lambda, thin_scan,
    verify_matrix_product, verify_self_similarity,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3


class UsageError(ValueError):
    pass


class UI:
    """Tagged status lines and tables on stderr; stdout is reserved for the document."""

    def __init__(self, quiet: bool = False):
        self.console = Console(stderr=True, quiet=quiet, highlight=False)

    def say(self, tag: str, msg: str, style: str | None = None) -> None:
        self.console.print(f"[{tag}] {msg}", markup=False, style=style)

    def table(self, title: str, rows: list[tuple[str, str]]) -> None:
        t = Table(title=title)
        t.add_column("field")
        t.add_column("value")
        for k, v in rows:
            t.add_row(k, v)
        self.console.print(t)


# -----------------------------
# Helpers
# -----------------------------
def _params(cfg: CommandConfig):
    if not cfg.params:
        raise UsageError("this command needs -p/--params")
    return parse_params(cfg.params)


def _case_json(label) -> dict:
    return CaseModel(index=label.index, branch=label.branch).model_dump()


def _matrix_record(m) -> dict:
    return {"provenance": m.provenance, "entries": encode_matrix(m.entries), "determinant": m.determinant}


def symmetrization_record(chk) -> SymmetrizationReport:
    return SymmetrizationReport(
        params=encode_params(chk.params),
        case=_case_json(chk.label) if chk.label else None,
        counts=chk.counts.as_dict(),
        matrix=encode_matrix(chk.matrix.entries) if chk.matrix else None,
        predicted=chk.predicted,
        engine=chk.engine,
        engine_params=encode_params(chk.engine_params) if chk.engine_params else None,
        agree=chk.agree,
        generalized_iterations=chk.generalized_iterations,
        ordinary_iterations=chk.ordinary_iterations,
        route=chk.route,
        findings=list(chk.findings),
    )


def _thin_report_json(r, digits: int) -> dict:
    return {
        "depth": r.depth,
        "support_lengths": [encode_value(v) for v in r.support_lengths],
        "support_approx": [to_decimal(v, digits) for v in r.support_lengths],
        "hole_found": r.hole_found,
        "self_similar_period": r.self_similar_period,
        "scale_factor": None if r.scale_factor is None else encode_value(r.scale_factor),
        "stop_reason": r.stop_reason,
        "verdict": r.verdict,
        "ordinary_iterations": r.ordinary_iterations,
        "rounds": list(r.rounds),
        "period_rounds": r.period_rounds,
    }


def _doc(command: str, **fields) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **fields}


# -----------------------------
# Commands: each returns (document, exit code, log counters)
# -----------------------------
def cmd_classify(cfg: CommandConfig, ui: UI):
    p = _params(cfg)
    relation = genericity_relation(p)
    if relation:
        ui.say("warn", f"parameters satisfy the integer relation {relation}; case analysis assumes none", "yellow")
    q = normalize_params(p)
    label, hole = classify_case(q)
    counts = case_counts(label, q)
    try:
        cands = case_matrices(label, q)
    except HoleExpected as e:
        ui.say("warn", str(e), "yellow")
        cands = []
    doc = _doc(
        "classify",
        params=encode_params(q),
        case=_case_json(label),
        hole=hole,
        gaps=[encode_interval(g) for g in coverage_gaps(build_special_symmetric(q))],
        chain=critical_chain(q),
        counts=counts.as_dict(),
        genericity_relation=list(relation) if relation else None,
        candidates=[_matrix_record(m) for m in cands],
    )
    ui.table("classify", [
        ("case", str(label)), ("hole", str(hole)),
        ("counts", ", ".join(f"{k}={v}" for k, v in counts.as_dict().items()) or "-"),
        ("candidates", str(len(cands))),
    ])
    return doc, EXIT_OK, {"case": str(label), "hole": hole}


def cmd_induce(cfg: CommandConfig, ui: UI):
    p = _params(cfg)
    trace = run_induction(build_special_symmetric(p), cfg.side, cfg.max_steps, cfg.stop)
    groups = group_generalized(trace)
    doc = _doc(
        "induce",
        params=encode_params(p),
        trace=encode_trace(trace),
        route=reduced_sequence(trace),
        generalized=[
            {"reduced_pair": g.reduced_pair, "start": g.step_span.start, "stop": g.step_span.stop, "ordinary": g.ordinary}
            for g in groups
        ],
    )
    ui.say("ok", f"{trace.ordinary_iterations} ordinary iterations, outcome {trace.outcome}")
    code = EXIT_DEGENERATE if trace.outcome == "degenerate" else EXIT_OK
    return doc, code, {"outcome": trace.outcome, "ordinary": trace.ordinary_iterations}


def cmd_symmetrize(cfg: CommandConfig, ui: UI):
    p = _params(cfg)
    out = symmetrize(build_special_symmetric(p), cfg.max_steps)
    doc = _doc(
        "symmetrize",
        params=encode_params(p),
        result=out.result,
        params_after=encode_params(out.params) if out.params else None,
        generalized_iterations=out.generalized_iterations_used,
        ordinary_iterations=out.trace.ordinary_iterations,
        route=reduced_sequence(out.trace),
        matrix=_matrix_record(out.matrix_used) if out.matrix_used else None,
    )
    if not out.within_bound:
        ui.say("warn", f"{out.generalized_iterations_used} generalized iterations exceed {GENERALIZED_BOUND}", "yellow")
    ui.say("ok", f"{out.result} after {out.generalized_iterations_used} generalized iterations")
    code = EXIT_DEGENERATE if out.result == "degenerate" else EXIT_OK
    return doc, code, {"result": out.result, "generalized": out.generalized_iterations_used}


def cmd_thin_check(cfg: CommandConfig, ui: UI):
    alpha = thin_lambda()
    p = thin_eigen_params()
    sim = verify_self_similarity(p)
    product = verify_matrix_product()
    legs = case_route(p, rounds=3)
    scan = thin_scan(p, max_generalized=4 * cfg.periods)
    route_ok = (
        [leg.label.index for leg in legs] == [4, 2, 4]
        and legs[0].counts.k == 2
        and legs[1].ordinary == 2
    )
    passed = bool(sim) and bool(product) and route_ok and (cfg.periods == 0 or scan.verdict == "thin")
    doc = _doc(
        "thin-check",
        **{"lambda": {
            "minimal_poly": list(alpha.minimal_poly.coeffs),
            "interval": [str(alpha.lo), str(alpha.hi)],
            "approx": to_decimal(alpha.midpoint(), cfg.digits),
        }},
        charpoly=list(charpoly(matrix_M().entries).coeffs),
        eigenvector=encode_params(p),
        eigenvector_approx=[to_decimal(v, cfg.digits) for v in p.astuple()],
        self_similar=sim.holds,
        detail=sim.detail,
        matrix_product={"holds": product.holds, "product": encode_matrix(product.product), "factors": list(product.factors)},
        case_route=[
            {"case": _case_json(leg.label), "counts": leg.counts.as_dict(), "ordinary": leg.ordinary, "generalized": leg.generalized}
            for leg in legs
        ],
        scan=_thin_report_json(scan, cfg.digits),
        passed=passed,
    )
    ui.table("thin example", [
        ("lambda", to_decimal(alpha.midpoint(), cfg.digits)),
        ("self-similar", str(sim.holds)),
        ("matrix product", str(product.holds)),
        ("case route", " -> ".join(str(leg.label) for leg in legs)),
        ("scan", scan.verdict),
    ])
    ui.say("ok" if passed else "mismatch", "thin example verified" if passed else "thin example check failed",
           None if passed else "red")
    return doc, EXIT_OK if passed else EXIT_MISMATCH, {"passed": passed}


def cmd_orbit(cfg: CommandConfig, ui: UI):
    p = _params(cfg)
    if cfg.point is None:
        raise UsageError("orbit needs -x/--point")
    x = parse_rational(cfg.point)
    res = orbit(build_special_symmetric(p), x, cfg.max_size, with_edges=cfg.edges)
    fields = dict(
        params=encode_params(p),
        point=encode_value(x),
        status=res.status,
        size=len(res.points),
        points=[encode_value(v) for v in sorted(res.points)],
    )
    if cfg.edges:
        fields["edges"] = [[encode_value(y), encode_value(z), label] for y, z, label in res.edges]
    ui.say("ok", f"orbit of {x}: {len(res.points)} points, {res.status}")
    return _doc("orbit", **fields), EXIT_OK, {"status": res.status, "size": len(res.points)}


def cmd_render(cfg: CommandConfig, ui: UI):
    if cfg.trace is not None:
        try:
            obj = json.loads(Path(cfg.trace).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise CodecError(f"cannot read trace {cfg.trace}: {e}") from e
        if isinstance(obj, dict) and "trace" in obj:
            obj = obj["trace"]
        try:
            validate(instance=obj, schema=trace_schema())
        except ValidationError as e:
            raise CodecError(f"malformed trace: {e.message}") from e
        trace = decode_trace(obj)
    else:
        trace = run_induction(build_special_symmetric(_params(cfg)), cfg.side, cfg.max_steps, cfg.stop)
    text = render_ascii(trace) if cfg.format == "ascii" else render_svg(trace)
    ui.say("ok", f"rendered {trace.ordinary_iterations + 1} rows")
    return text, EXIT_OK, {"rows": trace.ordinary_iterations + 1, "format": cfg.format}


def cmd_verify(cfg: CommandConfig, ui: UI):
    samples = seeded_samples(cfg.seed, cfg.samples, cfg.height)
    if not samples and not cfg.thin:
        ui.say("warn", "no samples requested; vacuous pass", "yellow")
    checks = map_ordered(verify_symmetrization, samples, cfg.workers)
    summary = VerifySummary(samples=len(samples), seed=cfg.seed, height=cfg.height)
    cases: Counter = Counter()
    findings: Counter = Counter()
    for chk in checks:
        summary.agreements += int(chk.agree)
        summary.symmetric += int(chk.engine == "symmetric")
        summary.holes += int(chk.engine == "hole")
        summary.degenerate += int(chk.engine == "degenerate")
        if chk.engine == "symmetric":
            summary.max_generalized = max(summary.max_generalized, chk.generalized_iterations)
        if chk.label is not None:
            cases[str(chk.label)] += 1
        findings.update(chk.findings)
        if not chk.agree:
            summary.mismatches.append(symmetrization_record(chk))
    summary.case_counts = dict(sorted(cases.items()))
    summary.findings = [f"{text} (x{n})" for text, n in sorted(findings.items())]
    bound_ok = summary.max_generalized <= GENERALIZED_BOUND
    if cfg.thin:
        summary.thin = bool(verify_self_similarity(thin_eigen_params())) and bool(verify_matrix_product())
    summary.passed = not summary.mismatches and bound_ok and summary.thin is not False
    ui.table(f"verify seed={cfg.seed}", [
        ("samples", str(summary.samples)),
        ("agreements", str(summary.agreements)),
        ("symmetric / hole / degenerate", f"{summary.symmetric} / {summary.holes} / {summary.degenerate}"),
        ("max generalized", str(summary.max_generalized)),
        ("thin", "-" if summary.thin is None else str(summary.thin)),
    ])
    for m in summary.mismatches[:5]:
        ui.say("mismatch", f"params={m.params} predicted={m.predicted} engine={m.engine}", "red")
    doc = _doc("verify", **summary.model_dump(mode="json"))
    code = EXIT_OK if summary.passed else EXIT_MISMATCH
    return doc, code, {
        "samples": summary.samples, "agreements": summary.agreements,
        "holes": summary.holes, "max_generalized": summary.max_generalized,
    }


def cmd_scan(cfg: CommandConfig, ui: UI):
    p = _params(cfg)
    report = thin_scan(p, cfg.max_generalized, Fraction(cfg.epsilon))
    ui.say("ok", f"scan depth {report.depth}, verdict {report.verdict} ({report.stop_reason})")
    doc = _doc("scan", params=encode_params(p), report=_thin_report_json(report, cfg.digits))
    return doc, EXIT_OK, {"depth": report.depth, "verdict": report.verdict}


def cmd_log(cfg: CommandConfig, ui: UI):
    records = read_log(cfg.log_file, cfg.command_filter)
    if cfg.last is not None:
        records = records[-cfg.last:]
    failed = sum(1 for r in records if r.get("result") != "ok")
    ui.say("ok" if not failed else "warn", f"{len(records)} run(s) in {cfg.log_file}, {failed} not ok")
    doc = _doc("log", log_file=str(cfg.log_file), filter=cfg.command_filter, records=records)
    return doc, EXIT_OK, {"records": len(records)}


COMMANDS = {
    "classify": cmd_classify,
    "induce": cmd_induce,
    "symmetrize": cmd_symmetrize,
    "thin-check": cmd_thin_check,
    "orbit": cmd_orbit,
    "render": cmd_render,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "log": cmd_log,
}


# -----------------------------
# CLI
# -----------------------------
def parse_args(argv=None):
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=Path, default=None, help="Write the document to this file (relative to the output dir)")
    common.add_argument("--output-dir", type=Path, default=None, help="Overrides IISYM_OUTPUT_DIR")
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--no-log", action="store_true")

    ap = argparse.ArgumentParser(
        description="Exact Rauzy induction for symmetric order-3 interval identification systems."
    )
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def with_params(sp, required=True):
        sp.add_argument("-p", "--params", required=required, help="'a,b,c,u' exact rationals or 'thin'")
        return sp

    with_params(sub.add_parser("classify", parents=[common], help="Case label, counts, candidates"))

    sp = with_params(sub.add_parser("induce", parents=[common], help="One-side Rauzy induction trace"))
    sp.add_argument("--side", choices=["left", "right"], default="right")
    sp.add_argument("--max-steps", type=int, default=10_000)
    sp.add_argument("--stop", choices=["symmetric", "hole_only"], default="symmetric")

    sp = with_params(sub.add_parser("symmetrize", parents=[common], help="Induce until symmetric again"))
    sp.add_argument("--max-steps", type=int, default=10_000)

    sp = sub.add_parser("thin-check", parents=[common], help="Verify the thin-type example")
    sp.add_argument("--periods", type=int, default=3)
    sp.add_argument("--digits", type=int, default=6)

    sp = with_params(sub.add_parser("orbit", parents=[common], help="Orbit of a point"))
    sp.add_argument("-x", "--point", required=True)
    sp.add_argument("--max-size", type=int, default=10_000)
    sp.add_argument("--edges", action="store_true")

    sp = with_params(sub.add_parser("render", parents=[common], help="SVG/ASCII diagram of a trace"), required=False)
    sp.add_argument("--trace", type=Path, default=None, help="Trace JSON (or an induce document)")
    sp.add_argument("--format", choices=["svg", "ascii"], default="svg")
    sp.add_argument("--side", choices=["left", "right"], default="right")
    sp.add_argument("--max-steps", type=int, default=10_000)
    sp.add_argument("--stop", choices=["symmetric", "hole_only"], default="symmetric")

    sp = sub.add_parser("verify", parents=[common], help="Engine versus matrix route on seeded samples")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--height", type=int, default=None)
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--thin", action="store_true")

    sp = with_params(sub.add_parser("scan", parents=[common], help="Heuristic thin-type scan"))
    sp.add_argument("--max-generalized", type=int, default=12)
    sp.add_argument("--epsilon", type=str, default="0")
    sp.add_argument("--digits", type=int, default=6)

    sp = sub.add_parser("log", parents=[common], help="Past runs from the run log")
    sp.add_argument("--command", dest="command_filter", choices=sorted(c for c in COMMANDS if c != "log"))
    sp.add_argument("--last", type=int, default=None)

    return ap.parse_args(argv)


def build_config(args) -> CommandConfig:
    fields = {k: v for k, v in vars(args).items() if v is not None}
    if args.subcommand == "render" and not args.params and args.trace is None:
        raise UsageError("render needs -p/--params or --trace")
    if args.subcommand == "verify":
        fields.setdefault("height", env_int(HEIGHT_ENV, DEFAULT_HEIGHT))
        fields.setdefault("workers", env_int(WORKERS_ENV, 1))
    fields["output_dir"] = output_dir(args.output_dir)
    fields["log_file"] = log_file(fields["output_dir"])
    return CommandConfig(**fields)


def emit(cfg: CommandConfig, doc) -> None:
    if isinstance(doc, dict):
        validate(instance=doc, schema=build_schema(cfg.subcommand))
        text = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    else:
        text = doc
    if cfg.output is not None:
        write_document(resolve_output(cfg.output, cfg.output_dir), text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    load_dotenv()
    args = parse_args(argv)
    ui = UI(quiet=args.quiet)
    t0 = time.perf_counter()
    counters: dict = {}
    try:
        cfg = build_config(args)
        doc, code, counters = COMMANDS[cfg.subcommand](cfg, ui)
        emit(cfg, doc)
        result = {EXIT_OK: "ok", EXIT_MISMATCH: "mismatch", EXIT_DEGENERATE: "degenerate"}[code]
    except (UsageError, CodecError, SystemShapeError, ModelError, ExactArithError, ValueError) as e:
        ui.say("ERROR", str(e), "red")
        code, result = EXIT_USAGE, "error"
    except (DegenerateCase, InductionError) as e:
        ui.say("ERROR", f"degenerate input: {e}", "red")
        code, result = EXIT_DEGENERATE, "degenerate"
    except ValidationError as e:
        ui.say("ERROR", f"document failed its schema: {e.message}", "red")
        code, result = EXIT_MISMATCH, "error"

    if not args.no_log:
        out_dir = output_dir(args.output_dir)
        append_log(log_file(out_dir), {
            "command": args.subcommand,
            "result": result,
            "exit_code": code,
            "latency_ms": round((time.perf_counter() - t0) * 1000, 2),
            **counters,
        })
    return code


if __name__ == "__main__":
    sys.exit(main())
