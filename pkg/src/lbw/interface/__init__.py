from .cache import ALGORITHM_VERSION, Cache, cache_key, cached_filter_lattice
from .corpus import corpus_documents, corpus_files, load_corpus
from .dsl import SpecDocument, SpecError, Span, TaskDecl, parse_spec, render_spec
from .report import SCHEMA, Report, render_report
from .tasks import effective_bounds, run_task, run_tasks

__all__ = [
    "parse_spec", "render_spec", "SpecDocument", "SpecError", "Span", "TaskDecl",
    "Report", "render_report", "SCHEMA",
    "Cache", "cache_key", "cached_filter_lattice", "ALGORITHM_VERSION",
    "run_task", "run_tasks", "effective_bounds",
    "load_corpus", "corpus_files", "corpus_documents",
]
