"""Nested rollout policy adaptation for the CVRPTW benchmark set.

The package splits into small layers: `solomon` reads and writes instance
files and derives geometry, `routing` is the reference construction state
machine and solution checker, `policy` and `bias` define what gets sampled
and how, `engine` holds the compiled kernels, `search` runs the nested
adaptation, and `bench` sweeps instance sets and tabulates results.
"""

from .bias import BiasWeights, beta_distance, beta_lateness, beta_total, beta_waiting
from .bench import (
    SOLOMON_ORDER,
    ClassSummary,
    ExperimentSpec,
    ResultRow,
    class_summary,
    emit_trace,
    instance_class,
    load_reference_table,
    run_experiment,
    solution_json,
)
from .policy import (
    MoveDistribution,
    Policy,
    SplitMix64,
    code_move,
    decode_move,
    init_distance,
    init_uniform,
    move_distribution,
    sample_move,
)
from .routing import (
    Move,
    RouteState,
    ScoreBreakdown,
    SolutionError,
    initial_state,
    is_terminal,
    legal_moves,
    lexicographic_key,
    play,
    score,
    tours_from_moves,
    validate_solution,
)
from .search import (
    ALGORITHMS,
    PlayoutRecord,
    SearchConfig,
    SearchResult,
    adapt_naive,
    adapt_optimized,
    gnrpa,
    playout,
    run,
)
from .solomon import (
    Geometry,
    Instance,
    Node,
    ParseError,
    build_geometry,
    list_bundled_instances,
    load_instance,
    parse_instance,
    serialize_instance,
)

__version__ = "0.1.0"
