"""Semi-streaming weighted and submodular matroid intersection in exact arithmetic."""

from .errors import BudgetError, InstanceError, InvariantError, MStreamError, ParamError
from .instance import Element, Instance, load_instance, make_instance, parse_instance, resolve_order
from .kernel import OrderedMatroid, extract_solution, find_kernel, verify_kernel
from .local_ratio import SelectionState, process_element, run_local_ratio
from .matroids import GraphicMatroid, PartitionMatroid, UniformMatroid, greedy_max_independent
from .objectives import CoverageObjective, CutObjective, LinearObjective
from .oracles import OracleBudget, brute_force_intersection_opt, conjecture_probe
from .report import emit_report
from .streaming import StreamParams, run_streaming, run_streaming_k
from .submodular import SubmodularParams, run_submodular

__version__ = "0.1.0"

__all__ = [
    "BudgetError", "InstanceError", "InvariantError", "MStreamError", "ParamError",
    "Element", "Instance", "load_instance", "make_instance", "parse_instance", "resolve_order",
    "OrderedMatroid", "extract_solution", "find_kernel", "verify_kernel",
    "SelectionState", "process_element", "run_local_ratio",
    "GraphicMatroid", "PartitionMatroid", "UniformMatroid", "greedy_max_independent",
    "CoverageObjective", "CutObjective", "LinearObjective",
    "OracleBudget", "brute_force_intersection_opt", "conjecture_probe",
    "emit_report", "StreamParams", "run_streaming", "run_streaming_k",
    "SubmodularParams", "run_submodular",
]
