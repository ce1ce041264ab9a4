"""Batch command-line interface: validate, assess, sensitivity, what-if, export, serve.

Exit codes distinguish validation failures (1), input errors (2), and I/O
failures (3).  Tables print numbers at four decimal places; files keep full
precision.  Output is deterministic for identical inputs.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .assessment import AssessmentReport, compute_report
from .documents import (
    CHART_VIEWS,
    atomic_write_text,
    dumps,
    export_chart_data,
    load_assessment,
    load_default_taxonomy,
    load_report,
    load_taxonomy,
    parse_assessment,
    parse_taxonomy,
    read_json,
    report_to_doc,
    save_report,
)
from .errors import DocumentError, EngineError, UnknownIdError
from .sensitivity import SensitivityConfig, WhatIfScenario, apply_what_if, sensitivity_analysis
from .taxonomy import TaxonomyBundle

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INPUT = 2
EXIT_IO = 3


def _load_taxonomy(path: str | None) -> TaxonomyBundle:
    if path is None:
        return load_default_taxonomy()
    return load_taxonomy(path)


def _fmt(value: float) -> str:
    return f"{value:.4f}"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines)


def _domain_table(taxonomy: TaxonomyBundle, report: AssessmentReport) -> str:
    rows = []
    for d in report.domain_reports:
        name = taxonomy.domain_by_id[d.risk_domain].name.value if d.risk_domain in taxonomy.domain_by_id else d.risk_domain
        rows.append([name, _fmt(d.inherent_normalized), _fmt(d.residual_normalized)])
    return _table(["risk domain", "inherent", "residual"], rows)


def _print_issues(exc: DocumentError) -> None:
    print(f"error: {exc}", file=sys.stderr)
    for issue in exc.issues:
        print(f"  - {issue}", file=sys.stderr)


def _cmd_validate(args: argparse.Namespace) -> int:
    doc = read_json(args.file)
    kind = args.kind
    if kind == "auto":
        if isinstance(doc, dict) and "organization" in doc:
            kind = "assessment"
        else:
            kind = "taxonomy"
    if kind == "taxonomy":
        parse_taxonomy(doc)
    else:
        taxonomy = _load_taxonomy(args.taxonomy)
        parse_assessment(doc, taxonomy)
    print("OK")
    return EXIT_OK


def _cmd_assess(args: argparse.Namespace) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    bundle = load_assessment(args.bundle, taxonomy)
    report = compute_report(taxonomy, bundle)
    if args.out:
        save_report(report, args.out)
    if args.format == "json":
        print(dumps(report_to_doc(report)), end="")
    else:
        print(_domain_table(taxonomy, report))
    return EXIT_OK


def _cmd_sensitivity(args: argparse.Namespace) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    bundle = load_assessment(args.bundle, taxonomy)
    config = SensitivityConfig(
        delta=bundle.sensitivity.delta if args.delta is None else args.delta,
        top_n=bundle.sensitivity.top_n if args.top is None else args.top,
    )
    result = sensitivity_analysis(taxonomy, bundle, config)
    if args.domain is not None:
        if args.domain not in result.per_domain:
            raise UnknownIdError(f"unknown risk domain id {args.domain!r}")
        scores = result.per_domain[args.domain][: config.top_n]
        if args.format == "json":
            doc = {
                "risk_domain": args.domain,
                "delta": config.delta,
                "top_n": config.top_n,
                "scores": [
                    {"control": s.control, "delta_residual_normalized": s.delta_residual_normalized} for s in scores
                ],
            }
            print(dumps(doc), end="")
        else:
            rows = [[str(i + 1), s.control, _fmt(s.delta_residual_normalized)] for i, s in enumerate(scores)]
            print(_table(["rank", "control", "delta residual"], rows))
        return EXIT_OK
    overall = result.overall[: config.top_n]
    if args.format == "json":
        doc = {
            "delta": config.delta,
            "top_n": config.top_n,
            "overall": [
                {"control": s.control, "delta_residual_normalized": s.delta_residual_normalized} for s in overall
            ],
        }
        print(dumps(doc), end="")
    else:
        rows = [[str(i + 1), s.control, _fmt(s.delta_residual_normalized)] for i, s in enumerate(overall)]
        print(_table(["rank", "control", "delta residual"], rows))
    return EXIT_OK


def _parse_uplift(spec: str) -> tuple[str, float]:
    if "=" not in spec:
        raise ValueError(f"uplift {spec!r} must look like control-id=+0.3")
    control_id, _, raw = spec.partition("=")
    try:
        value = float(raw)
    except ValueError:
        raise ValueError(f"uplift {spec!r} has a non-numeric increment {raw!r}") from None
    return control_id, value


def _cmd_whatif(args: argparse.Namespace) -> int:
    taxonomy = _load_taxonomy(args.taxonomy)
    bundle = load_assessment(args.bundle, taxonomy)
    uplifts: dict[str, float] = {}
    for spec in args.uplift or []:
        control_id, value = _parse_uplift(spec)
        uplifts[control_id] = uplifts.get(control_id, 0.0) + value
    scenario = WhatIfScenario(uplifts=uplifts, label=args.label)
    baseline = compute_report(taxonomy, bundle, include_sensitivity=False)
    reports = apply_what_if(taxonomy, bundle, scenario)
    doc = {
        "schema_version": "1.0",
        "assessment_id": bundle.id,
        "scenario": {"label": scenario.label, "uplifts": {k: uplifts[k] for k in sorted(uplifts)}},
        "domain_reports": [
            {
                "risk_domain": d.risk_domain,
                "inherent_raw": d.inherent_raw,
                "inherent_normalized": d.inherent_normalized,
                "residual_raw": d.residual_raw,
                "residual_normalized": d.residual_normalized,
            }
            for d in reports
        ],
    }
    if args.out:
        atomic_write_text(args.out, dumps(doc))
    if args.format == "json":
        print(dumps(doc), end="")
    else:
        base_by_domain = {d.risk_domain: d for d in baseline.domain_reports}
        rows = []
        for d in reports:
            name = taxonomy.domain_by_id[d.risk_domain].name.value if d.risk_domain in taxonomy.domain_by_id else d.risk_domain
            rows.append(
                [
                    name,
                    _fmt(d.inherent_normalized),
                    _fmt(base_by_domain[d.risk_domain].residual_normalized),
                    _fmt(d.residual_normalized),
                ]
            )
        print(_table(["risk domain", "inherent", "residual", "what-if residual"], rows))
    return EXIT_OK


def _cmd_export(args: argparse.Namespace) -> int:
    report = load_report(args.report)
    text = export_chart_data(report, args.view)
    if args.out:
        atomic_write_text(args.out, text)
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    port = args.port if args.port is not None else int(os.environ.get("IOTRAQ_PORT", "8000"))
    data_dir = args.data_dir if args.data_dir is not None else os.environ.get("IOTRAQ_DATA_DIR")
    taxonomy = _load_taxonomy(args.taxonomy)
    app = create_app(taxonomy=taxonomy, data_dir=data_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iotraq", description="Quantitative IoT risk and maturity assessment")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a taxonomy or assessment file")
    p.add_argument("file", type=Path)
    p.add_argument("--kind", choices=("auto", "taxonomy", "assessment"), default="auto")
    p.add_argument("--taxonomy", help="taxonomy file to validate assessments against (default: shipped dataset)")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("assess", help="compute the full report for an assessment bundle")
    p.add_argument("bundle", type=Path)
    p.add_argument("--taxonomy")
    p.add_argument("--out", type=Path, help="write the report JSON here")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_assess)

    p = sub.add_parser("sensitivity", help="rank controls by residual-risk reduction")
    p.add_argument("bundle", type=Path)
    p.add_argument("--taxonomy")
    p.add_argument("--delta", type=float, default=None, help="implementation uplift per control (default from bundle)")
    p.add_argument("--top", type=int, default=None, help="how many controls to list (default from bundle)")
    p.add_argument("--domain", help="rank within one risk domain instead of overall")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_sensitivity)

    p = sub.add_parser("whatif", help="evaluate a multi-control uplift scenario")
    p.add_argument("bundle", type=Path)
    p.add_argument("--taxonomy")
    p.add_argument("--uplift", action="append", metavar="CONTROL=+0.3", help="repeatable control uplift")
    p.add_argument("--label", default="")
    p.add_argument("--out", type=Path, help="write the scenario domain reports here")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=_cmd_whatif)

    p = sub.add_parser("export", help="export chart data from a report")
    p.add_argument("report", type=Path)
    p.add_argument("--view", choices=CHART_VIEWS, required=True)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("serve", help="run the HTTP JSON service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None, help="defaults to IOTRAQ_PORT or 8000")
    p.add_argument("--data-dir", default=None, help="defaults to IOTRAQ_DATA_DIR (no persistence when unset)")
    p.add_argument("--taxonomy")
    p.add_argument("--ui-dir", default=None, help="serve a built web UI from this directory under /ui")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        _print_issues(exc)
        return EXIT_VALIDATION
    except (UnknownIdError, EngineError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
