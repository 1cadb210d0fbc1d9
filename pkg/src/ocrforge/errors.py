"""Exception types shared across ocrforge modules."""


class OcrForgeError(Exception):
    """Base class for all ocrforge errors."""


class EmptyReference(OcrForgeError):
    """Normalized ground truth has nothing left to score against.

    Samples raising this must be excluded and reported, never silently
    scored.
    """


class EmptyRunError(OcrForgeError):
    """No scorable samples remain in an evaluation run."""


class NoPresentationForm(OcrForgeError):
    """Codepoint has no entry in the presentation-forms table."""


class TextTooLong(OcrForgeError):
    """Selected text cannot fit the layout even at minimum font size."""


class FontRenderError(OcrForgeError):
    """A glyph required at render time is missing from the font."""


class OutputExistsError(OcrForgeError):
    """Output directory already holds a dataset and --overwrite was not given."""


class MissingTranscript(OcrForgeError):
    """An image has no paired transcript."""


class UnreadableImage(OcrForgeError):
    """An image file could not be decoded."""


class DuplicateSampleId(OcrForgeError):
    """Two manifests being merged share a sample_id."""


class SchemaVersionError(OcrForgeError):
    """Manifest was written by a newer schema than this tool understands."""


class AuthError(OcrForgeError):
    """Labeling endpoint rejected the credential; not retryable."""


class RateLimited(OcrForgeError):
    """Labeling endpoint asked us to back off; retryable."""


class ExtractionError(OcrForgeError):
    """Labeler response contained no parseable transcription."""


class UnknownSampleId(OcrForgeError):
    """A label references a sample_id absent from the manifest."""


class IllegalTransition(OcrForgeError):
    """Requested annotation-task state change is not allowed."""


class NotClaimedByYou(OcrForgeError):
    """Task is claimed by a different reviewer."""


class EmptyCorrection(OcrForgeError):
    """correct('') is not a valid submission; use reject instead."""


class IncompleteProject(OcrForgeError):
    """Export requested while tasks are still pending or in review."""


class EmptyBenchError(OcrForgeError):
    """Export would produce a benchmark with zero samples."""


class AdapterUnavailable(OcrForgeError):
    """Model adapter cannot be reached at all; the run is aborted."""


class MismatchedBenchmark(OcrForgeError):
    """Reports being compared come from different benchmark versions."""


class LayoutError(OcrForgeError):
    """External benchmark directory does not match a supported layout."""


class ConfigError(OcrForgeError):
    """Run configuration is invalid (unknown keys, bad values)."""
