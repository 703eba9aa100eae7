"""Automatic amortized resource analysis with binomial, Stirling and mixed potential bases."""

from .analysis import Analysis, analyze, generate
from .frontend import FrontendError, elaborate, load_file
from .harness import BoundCheckReport, HarnessConfig, check_bound, enumerate_inputs, run_harness
from .potential import Annotation, BasisConfig
from .report import AnalysisReport, FunctionReport, report
from .semantics import evaluate, parse_value, watermark

__all__ = [
    "Analysis",
    "AnalysisReport",
    "Annotation",
    "BasisConfig",
    "BoundCheckReport",
    "FrontendError",
    "FunctionReport",
    "HarnessConfig",
    "analyze",
    "check_bound",
    "elaborate",
    "enumerate_inputs",
    "evaluate",
    "generate",
    "load_file",
    "parse_value",
    "report",
    "run_harness",
    "watermark",
]
