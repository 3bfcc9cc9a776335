"""Experiment orchestration: configuration, Monte Carlo loops, sweeps, output.

Every trial simulates one ALOHA slot. Randomness is organized so results
are a pure function of (configuration, seed): trial t draws from its own
substream derived from (seed, t), and the frozen-layout stream is
separate, so re-runs, subsets of trials, and any scheduling of trials
across workers reproduce identical numbers.

Per trial the draws happen in a fixed order: user positions, activation
uniforms, small-scale fades, AP positions. All architectures at a sweep
point therefore see the same users, the same active set and the same
fading scalars, which makes cross-architecture comparisons paired rather
than independent. The single cellular site reuses the first AP draw, so a
one-AP distributed layout and the cellular layout coincide exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .channel import assemble_channel, sample_small_scale
from .clustering import full_clusters, nearest_ap_clusters, single_ap_clusters
from .detection import (
    ASSOC_BEST_INSTANTANEOUS,
    ASSOC_STRONGEST,
    CELL_FREE_FULL,
    CELLULAR_MIMO,
    NETWORK_MODES,
    SMALL_CELL,
    USER_CENTRIC,
    ReceiverConfig,
    slot_sinrs,
)
from .metrics import sum_throughput
from .topology import Area, Layout, large_scale_matrix, place_uniform
from .traffic import SlotActivity, sample_activity

CSV_HEADER = "network,sweep_axis,axis_value,L,N,K,pi,trials,seed,mean_throughput_bps,stderr_bps"

# substream namespaces under the user seed
_LAYOUT_STREAM = 0
_TRIAL_STREAM = 1


@dataclass(frozen=True)
class SimulationConfig:
    """All knobs of one experiment; defaults reproduce the reference setup."""

    users: int = 200
    num_aps: int = 16
    antennas_per_ap: int = 4
    total_antennas: int | None = None  # informative; must equal num_aps * antennas_per_ap
    cluster_size: int = 4
    side_length: float = 1000.0
    wrap: bool = True
    bandwidth_hz: float = 1e6
    noise_dbm: float = -109.0
    tau_d: int = 10
    tau_c: int = 20
    capture_threshold_db: float = 3.0
    tx_power_dbm: float = -1.0
    activation_probability: float = 0.1
    trials: int = 2000
    seed: int = 1
    networks: tuple = NETWORK_MODES
    fixed_layout: bool = False
    throughput_prefactor: float = 2.0
    min_distance: float = 10.0
    smallcell_association: str = ASSOC_STRONGEST

    def __post_init__(self):
        object.__setattr__(self, "networks", tuple(self.networks))
        if self.users < 1 or self.num_aps < 1 or self.antennas_per_ap < 1:
            raise ValueError("users, num_aps and antennas_per_ap must all be >= 1")
        if self.total_antennas is not None and self.total_antennas != self.num_aps * self.antennas_per_ap:
            raise ValueError(
                f"total_antennas={self.total_antennas} inconsistent with "
                f"num_aps*antennas_per_ap={self.num_aps * self.antennas_per_ap}"
            )
        if self.cluster_size < 1:
            raise ValueError(f"cluster_size must be >= 1, got {self.cluster_size}")
        if not 0.0 <= self.activation_probability <= 1.0:
            raise ValueError(f"activation_probability must be in [0, 1], got {self.activation_probability}")
        if not 0 < self.tau_d <= self.tau_c:
            raise ValueError(f"need 0 < tau_d <= tau_c, got {self.tau_d}, {self.tau_c}")
        if self.bandwidth_hz <= 0 or self.throughput_prefactor <= 0:
            raise ValueError("bandwidth_hz and throughput_prefactor must be positive")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.min_distance < 0:
            raise ValueError(f"min_distance must be >= 0, got {self.min_distance}")
        if not self.networks:
            raise ValueError("at least one network must be selected")
        for nw in self.networks:
            if nw not in NETWORK_MODES:
                raise ValueError(f"unknown network {nw!r}, expected one of {NETWORK_MODES}")
        if len(set(self.networks)) != len(self.networks):
            raise ValueError("duplicate networks in selection")
        if self.smallcell_association not in (ASSOC_STRONGEST, ASSOC_BEST_INSTANTANEOUS):
            raise ValueError(f"unknown association rule {self.smallcell_association!r}")
        Area(self.side_length, self.wrap)

    @property
    def area(self) -> Area:
        return Area(self.side_length, self.wrap)

    @property
    def total_antenna_count(self) -> int:
        return self.num_aps * self.antennas_per_ap

    @property
    def effective_cluster_size(self) -> int:
        return min(self.cluster_size, self.num_aps)

    @property
    def tau_p(self) -> int:
        # pilot share of the coherence block; informative only, the data
        # fraction tau_d / tau_c is what enters the throughput
        return self.tau_c - self.tau_d

    @property
    def noise_power_w(self) -> float:
        return 10.0 ** ((self.noise_dbm - 30.0) / 10.0)

    @property
    def tx_power_w(self) -> float:
        return 10.0 ** ((self.tx_power_dbm - 30.0) / 10.0)

    @property
    def capture_threshold_linear(self) -> float:
        return 10.0 ** (self.capture_threshold_db / 10.0)

    def receiver_config(self, network: str) -> ReceiverConfig:
        return ReceiverConfig(
            mode=network,
            noise_power=self.noise_power_w,
            tx_powers=np.full(self.users, self.tx_power_w),
            capture_threshold=self.capture_threshold_linear,
            smallcell_association=self.smallcell_association,
        )


@dataclass(frozen=True)
class ThroughputResult:
    """Aggregated sum-throughput of one (network, sweep point) pair."""

    network: str
    sweep_axis: str
    axis_value: float
    num_aps: int
    antennas_per_ap: int
    users: int
    activation_probability: float
    trials: int
    seed: int
    mean_throughput_bps: float
    stderr_bps: float


@dataclass(frozen=True, eq=False)
class TrialDraw:
    """Raw random draws of one trial, before any architecture is applied."""

    layout: Layout
    activity: SlotActivity
    small_scale: np.ndarray  # (K, L, N)


def frozen_layout(cfg: SimulationConfig) -> Layout:
    """The single layout used for every trial when fixed_layout is set."""
    rng = np.random.default_rng([cfg.seed, _LAYOUT_STREAM])
    users = place_uniform(cfg.users, cfg.area, rng)
    aps = place_uniform(cfg.num_aps, cfg.area, rng)
    return Layout(aps, users, cfg.antennas_per_ap, cfg.area)


def draw_trial(cfg: SimulationConfig, trial_index: int, layout: Layout | None = None) -> TrialDraw:
    """Draw one trial from its own substream of (seed, trial_index).

    The draw order (users, activation, fades, APs) is part of the
    reproducibility contract; quantities that do not depend on the AP
    count come first so sweep points over the AP grid stay coupled.
    """
    rng = np.random.default_rng([cfg.seed, _TRIAL_STREAM, trial_index])
    if cfg.fixed_layout:
        if layout is None:
            layout = frozen_layout(cfg)
        activity = sample_activity(cfg.users, cfg.activation_probability, rng)
        h = sample_small_scale(cfg.users, cfg.num_aps, cfg.antennas_per_ap, rng)
        return TrialDraw(layout=layout, activity=activity, small_scale=h)
    users = place_uniform(cfg.users, cfg.area, rng)
    activity = sample_activity(cfg.users, cfg.activation_probability, rng)
    h = sample_small_scale(cfg.users, cfg.num_aps, cfg.antennas_per_ap, rng)
    aps = place_uniform(cfg.num_aps, cfg.area, rng)
    return TrialDraw(
        layout=Layout(aps, users, cfg.antennas_per_ap, cfg.area),
        activity=activity,
        small_scale=h,
    )


def simulate_trials(cfg, networks=None, start: int = 0, count: int | None = None):
    """Per-trial sum-throughput samples for each requested network.

    Returns {network: float array of length count}. All networks share
    each trial's draws, so their samples are paired.
    """
    networks = cfg.networks if networks is None else tuple(networks)
    for nw in networks:
        if nw not in NETWORK_MODES:
            raise ValueError(f"unknown network {nw!r}")
    if count is None:
        count = cfg.trials
    if start < 0 or count < 0:
        raise ValueError("start and count must be non-negative")

    K, L, N = cfg.users, cfg.num_aps, cfg.antennas_per_ap
    alpha = cfg.capture_threshold_linear
    rcfgs = {nw: cfg.receiver_config(nw) for nw in networks}
    out = {nw: np.zeros(count) for nw in networks}

    # layout-independent assignments are built once
    assignments = {}
    if CELL_FREE_FULL in networks:
        assignments[CELL_FREE_FULL] = full_clusters(L, K, N)
    if CELLULAR_MIMO in networks:
        assignments[CELLULAR_MIMO] = full_clusters(1, K, L * N)

    layout = beta = None
    if cfg.fixed_layout:
        layout = frozen_layout(cfg)
        beta = large_scale_matrix(layout, cfg.min_distance)
        _refresh_assignments(assignments, cfg, networks, layout, beta)

    for j in range(count):
        draw = draw_trial(cfg, start + j, layout=layout)
        activity = draw.activity
        if activity.k_a == 0:
            continue
        if not cfg.fixed_layout:
            beta = large_scale_matrix(draw.layout, cfg.min_distance)
            _refresh_assignments(assignments, cfg, networks, draw.layout, beta)
        channels = assemble_channel(beta, draw.small_scale)
        channels_cell = None
        if CELLULAR_MIMO in networks:
            channels_cell = assemble_channel(beta[:, :1], draw.small_scale.reshape(K, 1, L * N))
        for nw in networks:
            ch = channels_cell if nw == CELLULAR_MIMO else channels
            sinrs = slot_sinrs(ch, activity, assignments[nw], rcfgs[nw])
            out[nw][j] = sum_throughput(
                sinrs, alpha, cfg.tau_d, cfg.tau_c, cfg.bandwidth_hz, cfg.throughput_prefactor
            )
    return out


def _refresh_assignments(assignments, cfg, networks, layout, beta):
    if USER_CENTRIC in networks:
        assignments[USER_CENTRIC] = nearest_ap_clusters(layout, cfg.effective_cluster_size)
    if SMALL_CELL in networks:
        assignments[SMALL_CELL] = single_ap_clusters(beta, cfg.antennas_per_ap)


def trial_throughputs(cfg, network: str, start: int = 0, count: int | None = None) -> np.ndarray:
    """Per-trial sum-throughput samples of a single network."""
    return simulate_trials(cfg, (network,), start=start, count=count)[network]


def _make_result(cfg, network, sweep_axis, axis_value, values) -> ThroughputResult:
    if values.size > 1:
        stderr = float(np.std(values, ddof=1) / np.sqrt(values.size))
    else:
        warnings.warn("single trial: standard error reported as 0", RuntimeWarning, stacklevel=2)
        stderr = 0.0
    return ThroughputResult(
        network=network,
        sweep_axis=sweep_axis,
        axis_value=axis_value,
        num_aps=cfg.num_aps,
        antennas_per_ap=cfg.antennas_per_ap,
        users=cfg.users,
        activation_probability=cfg.activation_probability,
        trials=values.size,
        seed=cfg.seed,
        mean_throughput_bps=float(np.mean(values)),
        stderr_bps=stderr,
    )


def run_point(cfg: SimulationConfig, network: str | None = None) -> ThroughputResult:
    """Simulate one parameter point for one network."""
    if network is None:
        if len(cfg.networks) != 1:
            raise ValueError("config selects several networks; pass the one to run")
        network = cfg.networks[0]
    values = trial_throughputs(cfg, network)
    return _make_result(cfg, network, "pi", cfg.activation_probability, values)


def sweep_pi(cfg: SimulationConfig, grid) -> list:
    """Sum-throughput of every configured network across activation probabilities."""
    grid = [float(v) for v in grid]
    results = []
    for pi in grid:
        pcfg = replace(cfg, activation_probability=pi)
        sims = simulate_trials(pcfg)
        results.extend(
            _make_result(pcfg, nw, "pi", pi, sims[nw]) for nw in pcfg.networks
        )
    return results


def sweep_n(cfg: SimulationConfig, grid) -> list:
    """Sweep the per-AP antenna count; the cellular site grows to L*N antennas."""
    results = []
    for n in grid:
        n = int(n)
        pcfg = replace(cfg, antennas_per_ap=n, total_antennas=None)
        sims = simulate_trials(pcfg)
        results.extend(
            _make_result(pcfg, nw, "n", n, sims[nw]) for nw in pcfg.networks
        )
    return results


def sweep_l(cfg: SimulationConfig, grid) -> list:
    """Sweep the AP count at a fixed total antenna budget.

    Each point uses N = M / L antennas per AP; the cellular reference
    always keeps all M antennas at its single site. The user-centric
    cluster size is clamped to L where necessary.
    """
    m = cfg.total_antenna_count
    grid = [int(v) for v in grid]
    for l in grid:
        if l < 1 or m % l != 0:
            raise ValueError(f"AP count {l} does not divide the antenna budget {m}")
    results = []
    for l in grid:
        pcfg = replace(cfg, num_aps=l, antennas_per_ap=m // l, total_antennas=None)
        sims = simulate_trials(pcfg)
        results.extend(
            _make_result(pcfg, nw, "l", l, sims[nw]) for nw in pcfg.networks
        )
    return results


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_csv(results) -> str:
    """Render results as CSV text with a trailing newline."""
    results = list(results)
    if not results:
        raise ValueError("no results to write")
    lines = [CSV_HEADER]
    for r in results:
        lines.append(
            ",".join(
                (
                    r.network,
                    r.sweep_axis,
                    _fmt(r.axis_value),
                    str(r.num_aps),
                    str(r.antennas_per_ap),
                    str(r.users),
                    _fmt(r.activation_probability),
                    str(r.trials),
                    str(r.seed),
                    _fmt(r.mean_throughput_bps),
                    _fmt(r.stderr_bps),
                )
            )
        )
    return "\n".join(lines) + "\n"


def emit_csv(results, destination) -> None:
    """Write results as CSV; refuses to create a file for an empty list."""
    text = format_csv(results)
    Path(destination).write_text(text)


def plot_results(results, destination) -> None:
    """Line chart of mean throughput vs sweep value, one series per network."""
    from matplotlib.figure import Figure

    results = list(results)
    if not results:
        raise ValueError("no results to plot")
    axis = results[0].sweep_axis
    by_network = {}
    for r in results:
        by_network.setdefault(r.network, []).append(r)
    fig = Figure(figsize=(7.0, 4.5))
    ax = fig.subplots()
    for nw, rs in by_network.items():
        ax.errorbar(
            [r.axis_value for r in rs],
            [r.mean_throughput_bps for r in rs],
            yerr=[r.stderr_bps for r in rs],
            marker="o",
            capsize=3,
            label=nw,
        )
    labels = {"pi": "activation probability", "n": "antennas per AP", "l": "number of APs"}
    ax.set_xlabel(labels.get(axis, axis))
    ax.set_ylabel("mean sum-throughput [bit/s]")
    ax.grid(True, linestyle=":")
    ax.legend()
    fig.savefig(destination)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "on", "1"):
        return True
    if lowered in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"cannot parse boolean from {text!r}")


_FIELD_PARSERS = {
    "users": int,
    "num_aps": int,
    "antennas_per_ap": int,
    "total_antennas": lambda s: None if s.strip().lower() in ("", "none") else int(s),
    "cluster_size": int,
    "side_length": float,
    "wrap": _parse_bool,
    "bandwidth_hz": float,
    "noise_dbm": float,
    "tau_d": int,
    "tau_c": int,
    "capture_threshold_db": float,
    "tx_power_dbm": float,
    "activation_probability": float,
    "trials": int,
    "seed": int,
    "networks": lambda s: tuple(part.strip() for part in s.split(",") if part.strip()),
    "fixed_layout": _parse_bool,
    "throughput_prefactor": float,
    "min_distance": float,
    "smallcell_association": lambda s: s.strip(),
}


def load_config_file(path) -> dict:
    """Parse a flat `key = value` config file into typed overrides.

    Blank lines and `#` comments are ignored; keys mirror the
    SimulationConfig fields.
    """
    overrides = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELD_PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown parameter {key!r}")
        overrides[key] = _FIELD_PARSERS[key](value)
    return overrides


def config_from_overrides(overrides, base: SimulationConfig | None = None) -> SimulationConfig:
    """Apply typed overrides on top of a base configuration."""
    base = SimulationConfig() if base is None else base
    return replace(base, **overrides)
