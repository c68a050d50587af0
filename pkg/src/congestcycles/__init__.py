"""Round-synchronous simulation of threshold-based even-cycle detection,
with adversarial instance generators and exhaustive verification oracles."""

from .adversarial import (
    GkInstance,
    WeightedGraph,
    contract_to_weighted,
    generate_c4free_bipartite,
    generate_g6,
    generate_gk,
    load_instance,
    save_labels,
    verify_unique_cycle,
)
from .analysis import (
    BadSetReport,
    CongestionSetup,
    PathPackingResult,
    compute_bad_sets,
    congestion_experiment,
    good_neighbor_fraction,
    max_disjoint_wellcolored_paths,
    wellcolored_path_rate,
)
from .coloring import (
    ColorAssignment,
    DetectionEvent,
    ThresholdTable,
    assign_colors,
    color_bfs,
    cycle_is_well_colored,
    well_colored_path_exists,
)
from .detectors import (
    ForcedColoring,
    RunConfig,
    Verdict,
    decide_c2k_freeness,
    decide_c10_c12_freeness,
    decide_c12_c14_freeness,
    decide_family_freeness,
    incremental_thresholds,
)
from .engine import (
    PhaseTrace,
    Protocol,
    run_phase,
    rounds_upper_bound,
    SERIALIZED,
    UNIT_STEP,
)
from .graphs import (
    Graph,
    NodeClass,
    classify_nodes,
    enumerate_cycles,
    load_graph,
    node_in_cycle_of_length,
    plant_cycle,
    random_graph,
    save_graph,
)

__version__ = "0.1.0"
