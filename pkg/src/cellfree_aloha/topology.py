"""Spatial layout of APs and users: placement, toroidal distances, path loss.

The service region is a square that by default wraps around at the edges,
so distances are measured on a torus and border effects disappear. Path
loss follows a log-distance law with a configurable minimum distance that
keeps the model bounded when nodes are (nearly) co-located.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Central unit coordinates; it aggregates AP signals but has no effect on
# any computed quantity, recorded here for completeness.
CPU_POSITION = (0.0, 0.0)

PATH_LOSS_REF_DB = -30.5
PATH_LOSS_EXPONENT_DB = 36.7
DEFAULT_MIN_DISTANCE = 1.0


@dataclass(frozen=True)
class Area:
    """Square deployment region, optionally wrapping at the edges."""

    side_length: float = 1000.0
    wrap: bool = True

    def __post_init__(self):
        if self.side_length <= 0:
            raise ValueError(f"side_length must be positive, got {self.side_length}")


@dataclass(frozen=True, eq=False)
class Layout:
    """AP and user coordinates plus the antenna count per AP.

    ap_positions: (L, 2) array in metres, user_positions: (K, 2) array in
    metres, all inside the area square.
    """

    ap_positions: np.ndarray
    user_positions: np.ndarray
    antennas_per_ap: int
    area: Area

    def __post_init__(self):
        object.__setattr__(self, "ap_positions", np.asarray(self.ap_positions, dtype=float))
        object.__setattr__(self, "user_positions", np.asarray(self.user_positions, dtype=float))
        for name, pts in (("ap_positions", self.ap_positions), ("user_positions", self.user_positions)):
            if pts.ndim != 2 or pts.shape[1] != 2:
                raise ValueError(f"{name} must have shape (n, 2), got {pts.shape}")
            if pts.shape[0] < 1:
                raise ValueError(f"{name} must contain at least one point")
            if np.any(pts < 0) or np.any(pts >= self.area.side_length):
                raise ValueError(f"{name} has coordinates outside [0, {self.area.side_length})")
        if self.antennas_per_ap < 1:
            raise ValueError(f"antennas_per_ap must be >= 1, got {self.antennas_per_ap}")

    @property
    def num_aps(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def num_users(self) -> int:
        return self.user_positions.shape[0]

    @property
    def total_antennas(self) -> int:
        return self.num_aps * self.antennas_per_ap


def place_uniform(count: int, area: Area, rng: np.random.Generator) -> np.ndarray:
    """Draw `count` i.i.d. uniform points on the area square, shape (count, 2)."""
    if count < 0:
        raise ValueError(f"count must be >= 0, got {count}")
    return rng.uniform(0.0, area.side_length, size=(count, 2))


def wrap_distance(p, q, area: Area):
    """Distance between points p and q, toroidal when the area wraps.

    Accepts broadcastable arrays with trailing axis of length 2, so
    `wrap_distance(users[:, None, :], aps[None, :, :], area)` yields the
    full distance matrix in one call.
    """
    delta = np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    if area.wrap:
        delta = np.minimum(delta, area.side_length - delta)
    return np.sqrt(np.sum(delta**2, axis=-1))


def path_loss_db(d, min_distance: float = DEFAULT_MIN_DISTANCE):
    """Log-distance path loss in dB at distance d (metres).

    Distances below `min_distance` are clamped to it before evaluation;
    pass min_distance=0 to disable clamping, in which case d must be > 0.
    """
    d = np.maximum(np.asarray(d, dtype=float), min_distance)
    if np.any(d <= 0):
        raise ValueError("distance must be positive after clamping")
    return PATH_LOSS_REF_DB - PATH_LOSS_EXPONENT_DB * np.log10(d)


def db_to_linear(x):
    """Convert a dB power quantity to linear scale."""
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def large_scale_matrix(layout: Layout, min_distance: float = DEFAULT_MIN_DISTANCE) -> np.ndarray:
    """Linear-scale large-scale coefficients, shape (K, L).

    Entry (k, l) is the path-loss gain between user k and AP l at their
    wrap-around distance.
    """
    d = wrap_distance(
        layout.user_positions[:, None, :], layout.ap_positions[None, :, :], layout.area
    )
    return db_to_linear(path_loss_db(d, min_distance=min_distance))
