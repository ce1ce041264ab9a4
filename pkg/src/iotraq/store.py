"""File-backed persistence for assessments and reports, keyed by assessment id.

A plain directory store: one JSON document per assessment under
``assessments/`` and one per report under ``reports/``.  Writes go through a
temp file plus atomic rename, are serialized per id, and follow last-writer-wins
semantics; reads never see a torn file.
"""

from __future__ import annotations

import threading
from pathlib import Path

from .assessment import AssessmentBundle, AssessmentReport
from .documents import (
    assessment_to_doc,
    atomic_write_text,
    dumps,
    parse_assessment,
    parse_report,
    read_json,
    report_to_doc,
)
from .taxonomy import TaxonomyBundle


class AssessmentStore:
    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.assessments_dir = self.root / "assessments"
        self.reports_dir = self.root / "reports"
        self.assessments_dir.mkdir(parents=True, exist_ok=True)
        self.reports_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, assessment_id: str) -> threading.Lock:
        with self._locks_guard:
            if assessment_id not in self._locks:
                self._locks[assessment_id] = threading.Lock()
            return self._locks[assessment_id]

    def assessment_path(self, assessment_id: str) -> Path:
        return self.assessments_dir / f"{assessment_id}.json"

    def report_path(self, assessment_id: str) -> Path:
        return self.reports_dir / f"{assessment_id}.json"

    def save_assessment(self, bundle: AssessmentBundle) -> Path:
        path = self.assessment_path(bundle.id)
        with self._lock_for(bundle.id):
            atomic_write_text(path, dumps(assessment_to_doc(bundle)))
        return path

    def load_assessment(self, assessment_id: str, taxonomy: TaxonomyBundle) -> AssessmentBundle:
        return parse_assessment(read_json(self.assessment_path(assessment_id)), taxonomy)

    def has_assessment(self, assessment_id: str) -> bool:
        return self.assessment_path(assessment_id).exists()

    def save_report(self, report: AssessmentReport) -> Path:
        path = self.report_path(report.assessment_id)
        with self._lock_for(report.assessment_id):
            atomic_write_text(path, dumps(report_to_doc(report)))
        return path

    def load_report(self, assessment_id: str) -> AssessmentReport:
        return parse_report(read_json(self.report_path(assessment_id)))

    def has_report(self, assessment_id: str) -> bool:
        return self.report_path(assessment_id).exists()

    def list_assessments(self) -> list[str]:
        return sorted(p.stem for p in self.assessments_dir.glob("*.json"))
