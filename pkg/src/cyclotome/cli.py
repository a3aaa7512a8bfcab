"""Command-line front door.

``cyclotome <command> [--zoo NAME | --input FILE] [--field Q|Fp:P] [--window N]
[--pk-columns T] [--format json|csv|text] [--seed S] [--max-basis M] [--out PATH]``

Every command builds a :class:`JobSpec`, :func:`run` turns it into a report
dictionary, and :func:`main` renders it and picks the exit code:
0 success, 1 validation/parse/verification failure, 2 resource-cap refusal.
Reports are rendered with sorted keys and carry no timings unless
``--timings`` is given, so a fixed job always produces the same bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable

from . import __version__, suites
from .chain import HomologyTable
from .charclasses import PerfectComplexPresentation, chern_character, euler_class, hh0_comparison
from .hochschild import (DEFAULT_MAX_BASIS, ResourceCapExceeded, count_chains, cyclic_bicomplex,
                         hochschild_complex)
from .linalg import QQ, Field
from .mixed import category_builder, default_columns, hc, hc_minus, hc_per, mixed_of_category, sbi
from .presentations import (AlgebraPresentation, CategoryPresentation, PresentationError, validate, zoo)

COMMANDS = ("validate", "hh", "hc", "hcminus", "hcper", "sbi", "bicomplex", "euler", "chern",
            "morita", "tilting", "ce-verify", "ml-verify", "suite")

# acceptance suites by name; "--name 4" also selects criterion 4
SUITES: dict[str, Callable[..., dict]] = {
    "signs": suites.sign_suite,
    "cyclic": suites.cyclic_suite,
    "mixed": suites.mixed_suite,
    "two-model": suites.two_model_suite,
    "ground-field": suites.ground_field_suite,
    "tilting": suites.tilting_acceptance,
    "morita": suites.morita_suite,
    "sbi": suites.sbi_suite,
    "charclasses": suites.charclass_acceptance,
    "appendix": suites.appendix_acceptance,
}
SUITES.update({str(n): fn for n, (_, fn, _) in suites.CRITERIA.items()})


class CliError(Exception):
    """A failure reported to the user with an exit code."""

    def __init__(self, message, code: int = 1):
        super().__init__(message)
        self.message = message
        self.code = code


@dataclass
class JobSpec:
    command: str
    zoo: str | None = None
    input: str | None = None
    field: str | None = None
    window: int = 4
    pk_columns: int | None = None
    format: str = "json"
    seed: int = 0
    max_basis: int = DEFAULT_MAX_BASIS
    out: str | None = None
    params: dict = dc_field(default_factory=dict)
    ranks: str | None = None
    route: str = "algebra"
    count: int | None = None
    suite: str | None = None
    timings: bool = False

    def violations(self) -> list[str]:
        bad = []
        if self.command not in COMMANDS:
            bad.append(f"unknown command {self.command!r}")
        if self.window < 0:
            bad.append("window must be >= 0")
        if self.pk_columns is not None and self.pk_columns < 1:
            bad.append("pk-columns must be >= 1")
        if self.max_basis < 1:
            bad.append("max-basis must be >= 1")
        if self.count is not None and self.count < 1:
            bad.append("count must be >= 1")
        if self.format not in ("json", "csv", "text"):
            bad.append(f"unknown format {self.format!r}")
        if self.zoo and self.input:
            bad.append("give either --zoo or --input, not both")
        if self.route not in ("algebra", "vertex"):
            bad.append(f"unknown route {self.route!r}")
        if self.field is not None:
            try:
                Field.parse(self.field)
            except ValueError as e:
                bad.append(str(e))
        return bad

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d.pop("timings")
        return d


# ----------------------------------------------------------------------
# inputs


def _field(job: JobSpec) -> Field | None:
    return Field.parse(job.field) if job.field is not None else None


def load_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e.strerror}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise CliError(f"{path}: parse error at line {e.lineno} column {e.colno}: {e.msg}")


def is_perfect_document(doc) -> bool:
    return isinstance(doc, dict) and "algebra" in doc and "components" in doc


def load_subject(job: JobSpec):
    """The category/algebra or perfect complex named by the job."""
    fld = _field(job)
    if job.zoo:
        name, params = job.zoo, dict(job.params)
        try:
            return zoo(name, fld or QQ, **params)
        except PresentationError as e:
            raise CliError(_violation_text(e))
    if not job.input:
        raise CliError("an input is required: --zoo NAME or --input FILE")
    doc = load_document(job.input)
    try:
        if is_perfect_document(doc):
            if fld is not None:
                doc = dict(doc, algebra=dict(doc["algebra"], field=fld.to_json()))
            return PerfectComplexPresentation.from_json(doc)
        c = CategoryPresentation.from_json(doc)
    except PresentationError as e:
        raise CliError(_violation_text(e))
    except (KeyError, TypeError, ValueError) as e:
        raise CliError(f"{job.input}: malformed presentation: {e!r}")
    return c.with_field(fld) if fld is not None else c


def _violation_text(e: PresentationError):
    arg = e.args[0] if e.args else str(e)
    return list(arg) if isinstance(arg, (list, tuple)) else str(arg)


def _category(job: JobSpec) -> CategoryPresentation:
    c = load_subject(job)
    if isinstance(c, PerfectComplexPresentation):
        raise CliError(f"{job.command} needs a category or algebra, not a perfect complex")
    bad = validate(c)
    if bad:
        raise CliError(bad)
    return c


def _algebra(job: JobSpec) -> AlgebraPresentation:
    c = _category(job)
    if not isinstance(c, AlgebraPresentation):
        raise CliError(f"{job.command} needs a one-object algebra")
    return c


def _parse_ranks(spec: str) -> dict[int, int]:
    try:
        pairs = [part.split(":") for part in spec.split(",") if part.strip()]
        return {int(d): int(r) for d, r in pairs}
    except ValueError:
        raise CliError(f"ranks must look like 0:2,1:1, got {spec!r}")


def _perfect(job: JobSpec) -> PerfectComplexPresentation:
    """A perfect complex from --input, or the free complex with zero
    differential of the given --ranks over a zoo algebra."""
    s = load_subject(job)
    if isinstance(s, PerfectComplexPresentation):
        return s
    if not isinstance(s, AlgebraPresentation):
        raise CliError(f"{job.command} needs a perfect complex or a one-object algebra")
    ranks = _parse_ranks(job.ranks or "0:1")
    return PerfectComplexPresentation(s, ranks, name=f"free{sorted(ranks.items())}").check()


# ----------------------------------------------------------------------
# commands


def _table(t: HomologyTable) -> dict:
    return t.to_json()


def _chain_stats(c: CategoryPresentation, top: int) -> dict:
    return {"chain_dims_by_level": count_chains(c, top)}


def cmd_validate(job: JobSpec) -> tuple[str, dict, dict]:
    try:
        s = load_subject(job)
    except CliError as e:
        if isinstance(e.message, list):
            return "invalid", {"violations": e.message}, {}
        raise
    if isinstance(s, PerfectComplexPresentation):
        bad = validate(s.base) + s.violations()
        kind = "perfect complex"
    else:
        bad = validate(s)
        kind = "algebra" if isinstance(s, AlgebraPresentation) else "category"
    return ("ok" if not bad else "invalid"), {"kind": kind, "violations": bad}, {}


def cmd_hh(job):
    c = _category(job)
    cx, _ = hochschild_complex(c, job.window, max_basis=job.max_basis)
    return "ok", {"HH": _table(cx.homology_table(f"HH {c.name}".strip()))}, _chain_stats(c, job.window + 1)


def cmd_hc(job):
    c = _category(job)
    m = mixed_of_category(c, job.window, job.max_basis)
    T = job.pk_columns or default_columns(job.window)
    return "ok", {"HC": _table(hc(m, job.window, T)), "columns": T}, _chain_stats(c, job.window + 1)


def cmd_hcminus(job):
    c = _category(job)
    T = job.pk_columns or default_columns(job.window)
    t = hc_minus(category_builder(c, job.max_basis), job.window, T, lo=-job.window)
    return "ok", {"HC_minus": _table(t), "columns": T}, {}


def cmd_hcper(job):
    c = _category(job)
    T = job.pk_columns or default_columns(job.window)
    t = hc_per(category_builder(c, job.max_basis), job.window, T)
    return "ok", {"HC_per": _table(t), "columns": T}, {}


def cmd_sbi(job):
    c = _category(job)
    m = mixed_of_category(c, job.window + 2, job.max_basis)
    s = sbi(m, job.window, job.pk_columns and job.pk_columns + 1)
    nodes = [{"group": nd.group, "degree": nd.degree, "exact": nd.exact, "trusted": nd.trusted}
             for nd in s.nodes]
    res = {"HH": s.hh, "HC": s.hc, "nodes": nodes, "exact_on_trusted": s.exact()}
    return ("pass" if s.exact() else "fail"), res, _chain_stats(c, job.window + 3)


def cmd_bicomplex(job):
    c = _category(job)
    bc = cyclic_bicomplex(c, job.window, columns=job.pk_columns, max_basis=job.max_basis)
    t = bc.total_sum().homology_table(f"Tot CC {c.name}".strip())
    return "ok", {"HC": _table(t)}, _chain_stats(c, job.window + 1)


def cmd_euler(job):
    if job.input or job.ranks:
        p = _perfect(job)
        rec = {"perfect": p.name, "euler_characteristic": p.euler_characteristic(),
               "euler_class": list(euler_class(p)), "hh0_comparison": hh0_comparison(p)}
        return ("pass" if rec["hh0_comparison"]["holds"] else "fail"), rec, {}
    a = _algebra(job)
    rec = suites.euler_suite(job.count or 10, job.seed, a.field, algebras=[a])
    return _verdict(rec), rec, {}


def cmd_chern(job):
    p = _perfect(job)
    ch = chern_character(p, job.pk_columns)
    recs = [{"degree": r.degree, "stable": r.stable, "coordinates": list(r.coordinates),
             "generator_multiple": r.generator_multiple} for r in ch.records]
    res = {"perfect": ch.perfect, "euler_characteristic": ch.euler_characteristic, "records": recs,
           "trace_check": ch.trace_check}
    return ("pass" if not ch.trace_check else "fail"), res, {}


def cmd_morita(job):
    a = _algebra(job)
    rec = suites.morita_suite(job.window, a.field, job.max_basis, algebras=[a])
    if any(c.get("resource_cap") for c in rec["checks"]):
        raise ResourceCapExceeded(rec["checks"][0]["resource_cap"])
    return _verdict(rec), rec, {}


def cmd_tilting(job):
    a = _algebra(job)
    try:
        rec = suites.tilting_suite(a, job.window, job.route)
    except PresentationError as e:
        raise CliError(_violation_text(e))
    return _verdict(rec), rec, {}


def cmd_ce_verify(job):
    a = _algebra(job)
    rec = suites.ce_suite(job.count or 4, job.seed, int(job.params.get("row_bound", 6)), a.field,
                          algebras=[a])
    return _verdict(rec), rec, {}


def cmd_ml_verify(job):
    rec = suites.ml_suite(job.count or 50, job.seed, _field(job) or QQ)
    return _verdict(rec), rec, {}


def cmd_suite(job):
    if job.suite not in SUITES:
        raise CliError(f"--name must be a criterion number 1-10 or one of "
                       f"{', '.join(sorted(k for k in SUITES if not k.isdigit()))}")
    fn = SUITES[job.suite]
    kw = {"field": _field(job) or QQ}
    if "seed" in fn.__code__.co_varnames[:fn.__code__.co_argcount]:
        kw["seed"] = job.seed
    rec = fn(**kw)
    return _verdict(rec), rec, {}


def _verdict(rec: dict) -> str:
    return "pass" if rec["pass"] else "fail"


DISPATCH = {
    "validate": cmd_validate, "hh": cmd_hh, "hc": cmd_hc, "hcminus": cmd_hcminus, "hcper": cmd_hcper,
    "sbi": cmd_sbi, "bicomplex": cmd_bicomplex, "euler": cmd_euler, "chern": cmd_chern,
    "morita": cmd_morita, "tilting": cmd_tilting, "ce-verify": cmd_ce_verify,
    "ml-verify": cmd_ml_verify, "suite": cmd_suite,
}

EXIT = {"ok": 0, "pass": 0, "invalid": 1, "fail": 1, "error": 1, "resource_cap": 2}


def run(job: JobSpec) -> dict:
    """Execute a job and return its report (never raises for user errors)."""
    report = {"schema": 1, "tool": {"name": "cyclotome", "version": __version__}, "job": job.echo()}
    t0 = time.perf_counter()
    stats: dict = {}
    bad = job.violations()
    if bad:
        report.update(status="error", errors=bad, results={})
    else:
        try:
            status, results, stats = DISPATCH[job.command](job)
            report.update(status=status, results=results)
        except ResourceCapExceeded as e:
            report.update(status="resource_cap", errors=[str(e)], results={})
        except CliError as e:
            errs = e.message if isinstance(e.message, list) else [e.message]
            report.update(status="error", errors=errs, results={})
        except PresentationError as e:
            errs = _violation_text(e)
            report.update(status="error", errors=errs if isinstance(errs, list) else [errs], results={})
    if job.timings:
        stats = dict(stats, wall_clock_seconds=round(time.perf_counter() - t0, 3))
    report["statistics"] = stats
    return suites.plain_json(report)


def exit_code(report: dict) -> int:
    return EXIT.get(report["status"], 1)


# ----------------------------------------------------------------------
# rendering


def _tables(results: dict) -> list[tuple[str, dict]]:
    return [(k, v) for k, v in sorted(results.items()) if isinstance(v, dict) and "entries" in v]


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    results = report.get("results", {})
    tables = _tables(results)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if tables:
            multi = len(tables) > 1
            w.writerow((["invariant"] if multi else []) + ["degree", "dimension", "trusted"])
            for name, t in tables:
                for e in t["entries"]:
                    # an unstable stabilized entry is not trustworthy either
                    ok = e["trusted"] and e.get("stable", True)
                    w.writerow(([name] if multi else []) + [e["degree"], e["dimension"], str(ok).lower()])
        else:
            w.writerow(["check", "pass"])
            for i, c in enumerate(results.get("checks", [])):
                w.writerow([i, str(c.get("pass")).lower()])
            w.writerow(["status", report["status"]])
        return buf.getvalue()
    lines = [f"cyclotome {report['tool']['version']}: {report['job']['command']} -> {report['status']}"]
    for err in report.get("errors", []):
        lines.append(f"  error: {err}")
    for name, t in tables:
        lines.append(f"{name} over {t['field']}:")
        for e in t["entries"]:
            flag = "" if e["trusted"] else "  (untrusted)"
            if "stable" in e:
                flag += "  stable" if e["stable"] else "  unstable"
            lines.append(f"  {e['degree']:>4}  {e['dimension']}{flag}")
    for key in ("violations", "checks", "nodes", "records"):
        if key in results:
            items = results[key]
            if key == "violations":
                lines.append(f"violations: {len(items)}")
                lines += [f"  {x}" for x in items]
                continue
            ok = sum(1 for x in items if x.get("pass", x.get("exact", True)))
            lines.append(f"{key}: {len(items)} ({ok} passing)")
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cyclotome",
                                 description="Exact Hochschild, cyclic and mixed-complex computations.")
    ap.add_argument("command", choices=COMMANDS)
    src = ap.add_mutually_exclusive_group()
    src.add_argument("--zoo", help="built-in algebra (k, k2, k3, dual_numbers, truncated_poly, T2, T3, "
                                   "kronecker, P1, P2, ...)")
    src.add_argument("--input", help="presentation JSON file (category, algebra or perfect complex)")
    ap.add_argument("--config", help="JSON file of option defaults; command-line flags override it")
    ap.add_argument("--field", help="Q or Fp:PRIME (default: the field of the input, Q for zoo algebras)")
    ap.add_argument("--window", type=int, help="top degree (default 4)")
    ap.add_argument("--pk-columns", type=int, dest="pk_columns", help="columns T of the P_k truncation")
    ap.add_argument("--format", choices=("json", "csv", "text"))
    ap.add_argument("--seed", type=int)
    ap.add_argument("--max-basis", type=int, dest="max_basis", help="resource cap on chain basis size")
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--param", action="append", default=[], metavar="KEY=VALUE",
                    help="zoo parameter such as n=3 (repeatable)")
    ap.add_argument("--ranks", help="free ranks by degree for euler/chern, e.g. 0:2,1:1")
    ap.add_argument("--route", choices=("algebra", "vertex"), help="tilting comparison route")
    ap.add_argument("--count", type=int, help="number of random instances for suites")
    ap.add_argument("--name", dest="suite", help="acceptance suite for the suite command: a criterion "
                                                 "number 1-10 or a name such as mixed")
    ap.add_argument("--timings", action="store_true", default=None,
                    help="include wall-clock time (makes the report non-deterministic)")
    return ap


def job_from_args(argv=None) -> JobSpec:
    ns = build_parser().parse_args(argv)
    opts: dict = {}
    if ns.config:
        cfg = load_document(ns.config)
        if not isinstance(cfg, dict):
            raise CliError(f"{ns.config}: config must be a JSON object")
        opts.update({k.replace("-", "_"): v for k, v in cfg.items()})
    params = dict(opts.pop("params", {}) or {})
    for p in ns.param:
        if "=" not in p:
            raise CliError(f"--param expects KEY=VALUE, got {p!r}")
        k, v = p.split("=", 1)
        params[k] = v
    for k, v in vars(ns).items():
        if k in ("config", "param") or v is None:
            continue
        opts[k] = v
    known = set(JobSpec.__dataclass_fields__)
    unknown = sorted(set(opts) - known)
    if unknown:
        raise CliError(f"unknown options: {', '.join(unknown)}")
    return JobSpec(params=params, **opts)


def main(argv=None) -> int:
    try:
        job = job_from_args(argv)
    except CliError as e:
        print(f"cyclotome: {e.message}", file=sys.stderr)
        return 1
    report = run(job)
    text = render(report, job.format)
    if job.out:
        with open(job.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
