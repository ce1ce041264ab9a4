import json
import threading
from datetime import datetime, timezone

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iotraq.assessment import compute_report
from iotraq.documents import (
    assessment_to_doc,
    dumps,
    export_chart_data,
    load_assessment,
    load_report,
    parse_assessment,
    parse_report,
    parse_taxonomy,
    report_to_doc,
    save_report,
    taxonomy_to_doc,
)
from iotraq.errors import DocumentError, DocumentValidationError, ParseError, SchemaVersionError
from iotraq.store import AssessmentStore

GENERATED_AT = datetime(2026, 8, 9, 12, 0, 0, tzinfo=timezone.utc)


class TestTaxonomyDocuments:
    def test_round_trip(self, taxonomy):
        doc = taxonomy_to_doc(taxonomy)
        again = parse_taxonomy(json.loads(json.dumps(doc)))
        assert again == taxonomy

    def test_unknown_top_level_key_rejected(self, taxonomy):
        doc = taxonomy_to_doc(taxonomy)
        doc["surprise"] = 1
        with pytest.raises(DocumentValidationError) as err:
            parse_taxonomy(doc)
        assert any(issue.path == "surprise" for issue in err.value.issues)

    def test_missing_schema_version_rejected(self, taxonomy):
        doc = taxonomy_to_doc(taxonomy)
        del doc["schema_version"]
        with pytest.raises(DocumentValidationError):
            parse_taxonomy(doc)

    def test_unknown_major_version_is_a_distinct_error(self, taxonomy):
        doc = taxonomy_to_doc(taxonomy)
        doc["schema_version"] = "2.0"
        with pytest.raises(SchemaVersionError):
            parse_taxonomy(doc)

    def test_graph_violations_become_document_issues(self, taxonomy):
        doc = taxonomy_to_doc(taxonomy)
        doc["vulnerabilities"][0]["risk_domain"] = None
        with pytest.raises(DocumentValidationError) as err:
            parse_taxonomy(doc)
        assert any("unassigned risk domain" in issue.message for issue in err.value.issues)


class TestAssessmentDocuments:
    def test_round_trip(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        again = parse_assessment(json.loads(json.dumps(doc)), taxonomy)
        assert again == example_assessment

    def test_out_of_range_probability_is_located(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        doc["threat_actors"][0]["asset_likelihoods"]["asset.prior.public-information"] = 1.3
        with pytest.raises(DocumentValidationError) as err:
            parse_assessment(doc, taxonomy)
        assert any(
            issue.path.startswith("threat_actors[0]") and "out of range" in issue.message
            for issue in err.value.issues
        )

    def test_dangling_prevalency_reference(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        doc["prevalency"]["scores"]["vuln.ghost"] = 0.5
        with pytest.raises(DocumentValidationError) as err:
            parse_assessment(doc, taxonomy)
        assert any("unknown vulnerability id" in issue.message for issue in err.value.issues)

    def test_error_list_is_exhaustive(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        doc["prevalency"]["scores"]["vuln.ghost"] = 0.5
        doc["impacts"]["weights"]["prop.safety"] = 99  # above max_weight
        doc["organization"]["roles"] = []
        with pytest.raises(DocumentValidationError) as err:
            parse_assessment(doc, taxonomy)
        assert len(err.value.issues) == 3

    def test_missing_impact_weight_reported(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        del doc["impacts"]["weights"]["prop.safety"]
        with pytest.raises(DocumentValidationError) as err:
            parse_assessment(doc, taxonomy)
        assert any("fully elicited" in issue.message for issue in err.value.issues)

    def test_taxonomy_ref_mismatch_reported(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        doc["taxonomy_ref"] = "someone-elses-catalog"
        with pytest.raises(DocumentValidationError) as err:
            parse_assessment(doc, taxonomy)
        assert any(issue.path == "taxonomy_ref" for issue in err.value.issues)

    def test_unknown_top_level_key_rejected(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        doc["mystery_section"] = {}
        with pytest.raises(DocumentValidationError) as err:
            parse_assessment(doc, taxonomy)
        assert any(issue.path == "mystery_section" for issue in err.value.issues)

    def test_scale_and_sensitivity_defaults(self, taxonomy, example_assessment):
        doc = assessment_to_doc(example_assessment)
        del doc["scale"]
        del doc["sensitivity"]
        bundle = parse_assessment(doc, taxonomy)
        assert bundle.scale.r_min == 0.0 and bundle.scale.r_max == 100.0
        assert bundle.sensitivity.delta == 0.10 and bundle.sensitivity.top_n == 10


class TestIngestTotality:
    json_values = st.recursive(
        st.none() | st.booleans() | st.floats(allow_nan=False) | st.integers() | st.text(max_size=12),
        lambda children: st.lists(children, max_size=4) | st.dictionaries(st.text(max_size=12), children, max_size=4),
        max_leaves=20,
    )

    @given(document=json_values)
    @settings(max_examples=150, deadline=None)
    def test_any_document_yields_bundle_or_structured_errors(self, taxonomy, document):
        try:
            parse_assessment(document, taxonomy)
        except DocumentError as exc:
            assert isinstance(exc.code, str)
            assert all(hasattr(issue, "path") and hasattr(issue, "message") for issue in exc.issues)

    @given(junk=st.binary(max_size=64))
    @settings(max_examples=80, deadline=None)
    def test_any_byte_stream_yields_load_or_parse_error(self, taxonomy, tmp_path_factory, junk):
        path = tmp_path_factory.mktemp("totality") / "doc.json"
        path.write_bytes(junk)
        try:
            load_assessment(path, taxonomy)
        except DocumentError:
            pass
        except UnicodeDecodeError:
            pytest.fail("undecodable bytes must surface as a parse error")


class TestReportDocuments:
    def test_round_trip(self, taxonomy, example_assessment, tmp_path):
        report = compute_report(taxonomy, example_assessment, generated_at=GENERATED_AT)
        path = tmp_path / "report.json"
        save_report(report, path)
        again = load_report(path)
        assert again == report

    def test_serialization_is_deterministic(self, taxonomy, example_assessment):
        a = compute_report(taxonomy, example_assessment, generated_at=GENERATED_AT)
        b = compute_report(taxonomy, example_assessment, generated_at=GENERATED_AT)
        assert dumps(report_to_doc(a)) == dumps(report_to_doc(b))

    def test_wrong_domain_count_rejected(self, taxonomy, example_assessment):
        report = compute_report(taxonomy, example_assessment, generated_at=GENERATED_AT)
        doc = report_to_doc(report)
        doc["domain_reports"] = doc["domain_reports"][:5]
        with pytest.raises(DocumentValidationError) as err:
            parse_report(doc)
        assert any("exactly one entry per risk domain" in issue.message for issue in err.value.issues)

    def test_truncated_file_is_a_parse_error(self, taxonomy, example_assessment, tmp_path):
        report = compute_report(taxonomy, example_assessment, generated_at=GENERATED_AT)
        path = tmp_path / "report.json"
        save_report(report, path)
        path.write_text(path.read_text()[: 100])
        with pytest.raises(ParseError):
            load_report(path)


class TestStore:
    def test_save_and_load_assessment(self, taxonomy, example_assessment, tmp_path):
        store = AssessmentStore(tmp_path)
        store.save_assessment(example_assessment)
        assert store.list_assessments() == [example_assessment.id]
        assert store.load_assessment(example_assessment.id, taxonomy) == example_assessment

    def test_truncated_file_leaves_store_readable(self, taxonomy, example_assessment, tmp_path):
        store = AssessmentStore(tmp_path)
        store.save_assessment(example_assessment)
        path = store.assessment_path(example_assessment.id)
        good_bytes = path.read_bytes()
        path.write_bytes(good_bytes[:50])
        with pytest.raises(ParseError):
            store.load_assessment(example_assessment.id, taxonomy)
        # recovering by rewriting works; the directory is intact
        store.save_assessment(example_assessment)
        assert store.load_assessment(example_assessment.id, taxonomy) == example_assessment

    def test_concurrent_saves_commit_without_torn_files(self, taxonomy, example_assessment, tmp_path):
        import dataclasses

        store = AssessmentStore(tmp_path)
        variants = [
            dataclasses.replace(example_assessment, organization=dataclasses.replace(example_assessment.organization, name=f"Org {i}"))
            for i in range(8)
        ]
        threads = [threading.Thread(target=store.save_assessment, args=(v,)) for v in variants]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        final = store.load_assessment(example_assessment.id, taxonomy)
        assert final.organization.name in {v.organization.name for v in variants}

    def test_report_round_trip(self, taxonomy, example_assessment, tmp_path):
        store = AssessmentStore(tmp_path)
        report = compute_report(taxonomy, example_assessment, generated_at=GENERATED_AT)
        store.save_report(report)
        assert store.load_report(example_assessment.id) == report


class TestChartExports:
    @pytest.fixture()
    def report(self, taxonomy, example_assessment):
        return compute_report(taxonomy, example_assessment, generated_at=GENERATED_AT)

    def test_domain_bars_has_nine_rows(self, report):
        lines = export_chart_data(report, "domain_bars").strip().splitlines()
        assert lines[0] == "risk_domain,inherent_normalized,residual_normalized"
        assert len(lines) == 1 + 9

    def test_risk_matrix_rows_match_nonzero_prevalency(self, report, example_assessment):
        lines = export_chart_data(report, "risk_matrix").strip().splitlines()
        nonzero = sum(1 for v in example_assessment.prevalency.scores.values() if v > 0)
        assert len(lines) == 1 + nonzero

    def test_sensitivity_top_n_is_capped(self, report):
        lines = export_chart_data(report, "sensitivity_top_n").strip().splitlines()
        assert lines[0] == "rank,control,delta_residual_normalized"
        assert len(lines) <= 1 + report.sensitivity.config.top_n

    def test_unknown_view_is_an_input_error(self, report):
        with pytest.raises(ValueError, match="unknown view"):
            export_chart_data(report, "pie_chart")

    def test_export_preserves_full_precision(self, report):
        lines = export_chart_data(report, "domain_bars").strip().splitlines()
        value = lines[1].split(",")[1]
        assert float(value) == report.domain_reports[0].inherent_normalized
