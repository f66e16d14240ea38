"""Service modules for the Meta-Termination MCP."""
from .engine import Budget, EngineError, TerminationKind, TerminationStatus, derive, termination_status
from .encodings import EncodingError, clause_encode, clause_encode_extended, ground_encode, ground_decode
from .classifier import ClassificationReport, InterpreterClass, classify_interpreter
from .catalog import CatalogError, InterpreterSpec, compose_meta_program, get_interpreter, make_meta_query
from .orderings import OrderingError, check_obligations, ordering_from_dict
from .ordering_search import Found, NoneWithinBound, search_ordering
from .semantics import SemanticsError, o_semantics_approx, tpi_power
from .harness import HarnessError, PreservationVerdict, preservation_report
from .corpus import CorpusError, corpus_frame, run_corpus


__all__ = [
    'Budget',
    'EngineError',
    'TerminationKind',
    'TerminationStatus',
    'derive',
    'termination_status',
    'EncodingError',
    'clause_encode',
    'clause_encode_extended',
    'ground_encode',
    'ground_decode',
    'ClassificationReport',
    'InterpreterClass',
    'classify_interpreter',
    'CatalogError',
    'InterpreterSpec',
    'compose_meta_program',
    'get_interpreter',
    'make_meta_query',
    'OrderingError',
    'check_obligations',
    'ordering_from_dict',
    'Found',
    'NoneWithinBound',
    'search_ordering',
    'SemanticsError',
    'o_semantics_approx',
    'tpi_power',
    'HarnessError',
    'PreservationVerdict',
    'preservation_report',
    'CorpusError',
    'corpus_frame',
    'run_corpus'
]
