"""HTTP JSON service exposing the assessment pipeline to the UI and other clients.

One consultant session per assessment: PATCH edits mark the session dirty,
an explicit compute endpoint refreshes the report and clears the flag, and a
stale report request is answered with 409 so clients cannot miss staleness.
Per-assessment mutation is serialized; engine calls are pure.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from starlette.exceptions import HTTPException as StarletteHTTPException

from .assessment import AssessmentBundle, AssessmentReport, compute_report, validate_assessment
from .documents import (
    _Reader,
    assessment_to_doc,
    load_default_taxonomy,
    load_threat_actor_presets,
    parse_assessment,
    parse_threat_actor,
    report_to_doc,
    taxonomy_to_doc,
)
from .errors import DocumentError, DocumentValidationError, EngineError, UnknownIdError, ValidationIssue
from .maturity import ControlScores
from .risk import ImpactWeights, PrevalencyScores
from .sensitivity import SensitivityConfig, WhatIfScenario, apply_what_if, sensitivity_analysis
from .store import AssessmentStore
from .taxonomy import TaxonomyBundle


@dataclass
class Session:
    """Server-side state for one assessment: current bundle, last report, dirty flag."""

    bundle: AssessmentBundle
    report: AssessmentReport | None
    dirty: bool
    lock: threading.Lock


def _error(status: int, code: str, message: str, details: list[dict[str, str]] | None = None) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message, "details": details or []})


def create_app(
    taxonomy: TaxonomyBundle | None = None,
    data_dir: str | None = None,
    store: AssessmentStore | None = None,
    ui_dir: str | None = None,
) -> FastAPI:
    if taxonomy is None:
        taxonomy = load_default_taxonomy()
    if store is None and data_dir is not None:
        store = AssessmentStore(data_dir)

    app = FastAPI(title="iotraq", docs_url=None, redoc_url=None)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    sessions: dict[str, Session] = {}
    sessions_guard = threading.Lock()

    def get_session(assessment_id: str) -> Session | None:
        with sessions_guard:
            session = sessions.get(assessment_id)
        if session is not None:
            return session
        if store is not None and store.has_assessment(assessment_id):
            bundle = store.load_assessment(assessment_id, taxonomy)
            session = Session(bundle=bundle, report=None, dirty=True, lock=threading.Lock())
            with sessions_guard:
                return sessions.setdefault(assessment_id, session)
        return None

    def put_session(bundle: AssessmentBundle) -> Session:
        session = Session(bundle=bundle, report=None, dirty=True, lock=threading.Lock())
        with sessions_guard:
            sessions[bundle.id] = session
        if store is not None:
            store.save_assessment(bundle)
        return session

    @app.exception_handler(DocumentError)
    def handle_document_error(request: Request, exc: DocumentError):
        return _error(422, exc.code, str(exc), exc.details())

    @app.exception_handler(UnknownIdError)
    def handle_unknown_id(request: Request, exc: UnknownIdError):
        return _error(422, "reference_error", str(exc))

    @app.exception_handler(EngineError)
    def handle_engine_error(request: Request, exc: EngineError):
        return _error(422, "computation_error", str(exc))

    @app.exception_handler(RequestValidationError)
    def handle_request_validation(request: Request, exc: RequestValidationError):
        details = [{"path": ".".join(str(p) for p in err.get("loc", ())), "message": str(err.get("msg", ""))} for err in exc.errors()]
        return _error(422, "invalid_request", "request body or parameters are invalid", details)

    @app.exception_handler(StarletteHTTPException)
    def handle_http_exception(request: Request, exc: StarletteHTTPException):
        code = {404: "not_found", 405: "method_not_allowed", 409: "conflict"}.get(exc.status_code, "http_error")
        return _error(exc.status_code, code, str(exc.detail))

    @app.get("/health")
    def health():
        return {"status": "ok", "taxonomy_version": taxonomy.version}

    @app.get("/taxonomy")
    def get_taxonomy():
        return taxonomy_to_doc(taxonomy)

    @app.get("/threat-actor-presets")
    def get_threat_actor_presets():
        actors = load_threat_actor_presets()
        return {
            "threat_actors": [
                {
                    "id": a.id,
                    "label": a.label,
                    "asset_likelihoods": {k: a.asset_likelihoods[k] for k in sorted(a.asset_likelihoods)},
                    "action_likelihoods": {k: a.action_likelihoods[k] for k in sorted(a.action_likelihoods)},
                }
                for a in actors
            ]
        }

    @app.get("/assessments")
    def list_assessments():
        with sessions_guard:
            known = set(sessions)
        if store is not None:
            known.update(store.list_assessments())
        return {"assessments": sorted(known)}

    @app.post("/assessments", status_code=201)
    def create_assessment(payload: dict):
        bundle = parse_assessment(payload, taxonomy)
        put_session(bundle)
        return JSONResponse(status_code=201, content={"id": bundle.id})

    @app.get("/assessments/{assessment_id}")
    def get_assessment(assessment_id: str):
        session = get_session(assessment_id)
        if session is None:
            return _error(404, "not_found", f"no assessment {assessment_id!r}")
        return assessment_to_doc(session.bundle)

    def _apply_patch(assessment_id: str, build) -> JSONResponse | dict:
        session = get_session(assessment_id)
        if session is None:
            return _error(404, "not_found", f"no assessment {assessment_id!r}")
        with session.lock:
            candidate = build(session.bundle)
            issues = validate_assessment(candidate, taxonomy)
            if issues:
                raise DocumentValidationError("patch would make the assessment invalid", issues)
            session.bundle = candidate
            session.dirty = True
            if store is not None:
                store.save_assessment(candidate)
        return {"id": assessment_id, "dirty": True}

    @app.patch("/assessments/{assessment_id}/control-scores")
    def patch_control_scores(assessment_id: str, payload: dict):
        r = _Reader()
        r.check_keys(payload, "", (), optional=("implementation", "effectiveness"))
        implementation = r.number_map_at(payload, "implementation", "")
        effectiveness = r.number_map_at(payload, "effectiveness", "")
        if r.issues:
            raise DocumentValidationError("invalid control-scores patch", r.issues)

        def build(bundle: AssessmentBundle) -> AssessmentBundle:
            scores = bundle.control_scores
            return replace(
                bundle,
                control_scores=ControlScores(
                    implementation={**scores.implementation, **implementation},
                    effectiveness={**scores.effectiveness, **effectiveness},
                ),
            )

        return _apply_patch(assessment_id, build)

    @app.patch("/assessments/{assessment_id}/prevalency")
    def patch_prevalency(assessment_id: str, payload: dict):
        r = _Reader()
        r.check_keys(payload, "", ("scores",))
        scores = r.number_map_at(payload, "scores", "")
        if r.issues:
            raise DocumentValidationError("invalid prevalency patch", r.issues)

        def build(bundle: AssessmentBundle) -> AssessmentBundle:
            return replace(bundle, prevalency=PrevalencyScores(scores={**bundle.prevalency.scores, **scores}))

        return _apply_patch(assessment_id, build)

    @app.patch("/assessments/{assessment_id}/impacts")
    def patch_impacts(assessment_id: str, payload: dict):
        r = _Reader()
        r.check_keys(payload, "", (), optional=("weights", "max_weight"))
        weights = r.number_map_at(payload, "weights", "")
        max_weight = r.number_at(payload, "max_weight", "") if "max_weight" in payload else None
        if r.issues:
            raise DocumentValidationError("invalid impacts patch", r.issues)

        def build(bundle: AssessmentBundle) -> AssessmentBundle:
            return replace(
                bundle,
                impacts=ImpactWeights(
                    weights={**bundle.impacts.weights, **weights},
                    max_weight=bundle.impacts.max_weight if max_weight is None else max_weight,
                ),
            )

        return _apply_patch(assessment_id, build)

    @app.patch("/assessments/{assessment_id}/threat-actors")
    def patch_threat_actors(assessment_id: str, payload: dict):
        r = _Reader()
        r.check_keys(payload, "", ("actors",))
        actors = []
        for i, entry in enumerate(r.list_at(payload, "actors", "")):
            actor = parse_threat_actor(entry, f"actors[{i}]", r)
            if actor is not None:
                actors.append(actor)
        if r.issues:
            raise DocumentValidationError("invalid threat-actors patch", r.issues)

        def build(bundle: AssessmentBundle) -> AssessmentBundle:
            return replace(bundle, threat_actors=tuple(actors))

        return _apply_patch(assessment_id, build)

    @app.post("/assessments/{assessment_id}/compute")
    def compute(assessment_id: str):
        session = get_session(assessment_id)
        if session is None:
            return _error(404, "not_found", f"no assessment {assessment_id!r}")
        with session.lock:
            if not session.dirty and session.report is not None:
                return report_to_doc(session.report)
            report = compute_report(taxonomy, session.bundle)
            session.report = report
            session.dirty = False
            if store is not None:
                store.save_report(report)
            return report_to_doc(report)

    @app.get("/assessments/{assessment_id}/report")
    def get_report(assessment_id: str):
        session = get_session(assessment_id)
        if session is None:
            return _error(404, "not_found", f"no assessment {assessment_id!r}")
        with session.lock:
            if session.dirty or session.report is None:
                return _error(409, "stale_report", "assessment changed since the last compute; POST compute first")
            return report_to_doc(session.report)

    @app.get("/assessments/{assessment_id}/sensitivity")
    def get_sensitivity(assessment_id: str, delta: float | None = None, top: int | None = None):
        session = get_session(assessment_id)
        if session is None:
            return _error(404, "not_found", f"no assessment {assessment_id!r}")
        base = session.bundle.sensitivity
        try:
            config = SensitivityConfig(
                delta=base.delta if delta is None else delta,
                top_n=base.top_n if top is None else top,
            )
        except ValueError as exc:
            raise DocumentValidationError("invalid sensitivity parameters", [ValidationIssue("query", str(exc))])
        result = sensitivity_analysis(taxonomy, session.bundle, config)
        return {
            "delta": config.delta,
            "top_n": config.top_n,
            "per_domain": {
                domain_id: [
                    {"control": s.control, "delta_residual_normalized": s.delta_residual_normalized}
                    for s in scores[: config.top_n]
                ]
                for domain_id, scores in result.per_domain.items()
            },
            "overall": [
                {"control": s.control, "delta_residual_normalized": s.delta_residual_normalized}
                for s in result.overall[: config.top_n]
            ],
        }

    @app.post("/assessments/{assessment_id}/what-if")
    def what_if(assessment_id: str, payload: dict):
        session = get_session(assessment_id)
        if session is None:
            return _error(404, "not_found", f"no assessment {assessment_id!r}")
        r = _Reader()
        r.check_keys(payload, "", ("uplifts",), optional=("label",))
        uplifts = r.number_map_at(payload, "uplifts", "")
        label = payload.get("label", "")
        if not isinstance(label, str):
            r.add("label", f"expected a string, got {label!r}")
        if r.issues:
            raise DocumentValidationError("invalid what-if scenario", r.issues)
        scenario = WhatIfScenario(uplifts=uplifts, label=label)
        reports = apply_what_if(taxonomy, session.bundle, scenario)
        return {
            "label": scenario.label,
            "uplifts": {k: uplifts[k] for k in sorted(uplifts)},
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

    return app
