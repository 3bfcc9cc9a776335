"""Slotted ALOHA throughput simulator for distributed MIMO uplinks."""

from .channel import ChannelRealization, assemble_channel, sample_small_scale
from .clustering import (
    ClusterAssignment,
    apply_mask,
    full_clusters,
    nearest_ap_clusters,
    served_users,
    single_ap_clusters,
)
from .detection import (
    CELL_FREE_FULL,
    CELLULAR_MIMO,
    NETWORK_MODES,
    SMALL_CELL,
    USER_CENTRIC,
    ReceiverConfig,
    cellular_sinr,
    mmse_combiner,
    mmse_sinr,
    sinr_from_combiner,
    slot_sinrs,
    smallcell_sinr,
    symbol_estimate,
)
from .harness import (
    SimulationConfig,
    ThroughputResult,
    draw_trial,
    emit_csv,
    plot_results,
    run_point,
    simulate_trials,
    sweep_l,
    sweep_n,
    sweep_pi,
    trial_throughputs,
)
from .metrics import (
    SlotOutcome,
    capture_outcomes,
    estimate_capture_probability,
    slot_outcome,
    sum_throughput,
)
from .topology import (
    Area,
    Layout,
    db_to_linear,
    large_scale_matrix,
    path_loss_db,
    place_uniform,
    wrap_distance,
)
from .traffic import SlotActivity, sample_activity

__version__ = "0.1.0"
