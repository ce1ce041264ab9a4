"""Exception types and validation issue records shared by the engine and I/O layers."""

from __future__ import annotations

from dataclasses import dataclass


class EngineError(Exception):
    """Base class for assessment engine failures."""


class ProbabilityRangeError(EngineError, ValueError):
    """A probability input fell outside the closed interval [0, 1]."""


class UnknownIdError(EngineError, LookupError):
    """A referenced element id does not exist in the active taxonomy or catalog."""


class IncompleteAssessmentError(EngineError, ValueError):
    """An assessment is missing inputs required by the requested computation."""


class DegenerateAssessmentError(EngineError, ArithmeticError):
    """Normalization is impossible because nothing in the assessment is at risk."""


class NoExploitPathWarning(UserWarning):
    """A vulnerability has no mapped exploiting actions, so its likelihood is zero."""


@dataclass(frozen=True)
class ValidationIssue:
    """One problem found while validating a document, located by a dotted path."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class DocumentError(EngineError):
    """A document failed to parse or validate.

    ``issues`` holds the exhaustive list of problems found, not only the first.
    """

    code = "invalid_document"

    def __init__(self, message: str, issues: list[ValidationIssue] | tuple[ValidationIssue, ...] = ()):
        super().__init__(message)
        self.issues = list(issues)

    def details(self) -> list[dict[str, str]]:
        return [{"path": issue.path, "message": issue.message} for issue in self.issues]


class ParseError(DocumentError):
    """The byte stream is not a well-formed document."""

    code = "parse_error"


class SchemaVersionError(DocumentError):
    """The document declares a schema version this build does not understand."""

    code = "unsupported_schema_version"


class DocumentValidationError(DocumentError):
    """The document parsed but violates the schema's value or reference rules."""

    code = "validation_error"
