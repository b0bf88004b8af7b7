"""Scale-free strength classification and adversarial link-rewiring attacks."""

__version__ = "0.1.0"

from ._accel import USE_NUMBA, backend
from .attacks import (
    STRATEGIES,
    AttackOutcome,
    DilrConfig,
    RewiringStep,
    apply_step,
    attack_until_exit,
    dalr_step,
    dilr_step,
    rlr_step,
)
from .classifier import (
    Category,
    Classification,
    ClassifierConfig,
    SequenceVerdict,
    category_from_verdicts,
    classify,
    classify_graph,
    extract_degree_sequences,
)
from .generators import BaConfig, generate_ba, generate_configuration_model
from .graph import (
    Graph,
    avg_clustering,
    avg_shortest_path,
    degree_sequence,
    diagonal_distance,
    read_edgelist,
    write_edgelist,
)
from .metrics import ConcealmentReport, aggregate, concealment, effectiveness
from .powerlaw import GofResult, LrResult, TailFit, fit_tail, gof_pvalue, likelihood_ratio

__all__ = [
    "USE_NUMBA", "backend", "STRATEGIES", "AttackOutcome", "DilrConfig", "RewiringStep", "apply_step",
    "attack_until_exit", "dalr_step", "dilr_step", "rlr_step", "Category", "Classification",
    "ClassifierConfig", "SequenceVerdict", "category_from_verdicts", "classify", "classify_graph",
    "extract_degree_sequences", "BaConfig", "generate_ba", "generate_configuration_model", "Graph",
    "avg_clustering", "avg_shortest_path", "degree_sequence", "diagonal_distance", "read_edgelist",
    "write_edgelist", "ConcealmentReport", "aggregate", "concealment", "effectiveness", "GofResult",
    "LrResult", "TailFit", "fit_tail", "gof_pvalue", "likelihood_ratio",
]
