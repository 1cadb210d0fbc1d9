"""Human review of pseudo-labeled samples: event-sourced task store and
the HTTP service the browser UI talks to."""

from .store import AnnotationTask, ReviewStore
from .service import create_app

__all__ = ["AnnotationTask", "ReviewStore", "create_app"]
