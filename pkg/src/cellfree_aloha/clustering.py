"""User-centric AP subsets and the antenna masks they induce.

Each user k is served by an ordered subset of APs. The subset defines a
block-diagonal 0/1 antenna mask; masking is implemented as block selection
so the mask matrices are never materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .topology import Layout, wrap_distance

MODE_FULL = "full"
MODE_USER_CENTRIC = "user-centric"
MODE_SINGLE_AP = "single-AP"


@dataclass(frozen=True, eq=False)
class ClusterAssignment:
    """Per-user AP subsets, strongest (nearest) AP first.

    subsets[k] is an integer array of AP indices; antenna block l of an
    AP in the subset passes through the mask, every other block is zeroed.
    """

    subsets: tuple
    num_aps: int
    antennas_per_ap: int
    mode: str

    def __post_init__(self):
        subsets = tuple(np.asarray(s, dtype=int) for s in self.subsets)
        object.__setattr__(self, "subsets", subsets)
        lengths = np.array([s.size for s in subsets], dtype=int)
        if lengths.sum() == 0:
            return
        flat = np.concatenate(subsets)
        if flat.min() < 0 or flat.max() >= self.num_aps:
            raise ValueError(f"AP indices outside [0, {self.num_aps})")
        # duplicate APs within one user's subset show up as equal (user, AP) keys
        keys = np.repeat(np.arange(len(subsets)), lengths) * self.num_aps + flat
        keys.sort()
        if np.any(np.diff(keys) == 0):
            raise ValueError("duplicate AP indices in a user subset")

    @property
    def num_users(self) -> int:
        return len(self.subsets)

    def antenna_indices(self, k: int) -> np.ndarray:
        """Indices into the stacked length-L*N vector kept by user k's mask."""
        n = self.antennas_per_ap
        aps = self.subsets[k]
        return (aps[:, None] * n + np.arange(n)[None, :]).reshape(-1)


def full_clusters(num_aps: int, num_users: int, antennas_per_ap: int = 1) -> ClusterAssignment:
    """Every user served by every AP; the induced mask is the identity."""
    if num_aps < 1:
        raise ValueError(f"num_aps must be >= 1, got {num_aps}")
    everyone = np.arange(num_aps)
    return ClusterAssignment(
        subsets=tuple(everyone for _ in range(num_users)),
        num_aps=num_aps,
        antennas_per_ap=antennas_per_ap,
        mode=MODE_FULL,
    )


def nearest_ap_clusters(layout: Layout, cluster_size: int) -> ClusterAssignment:
    """Assign each user its `cluster_size` nearest APs (wrap-around distance).

    Distance ties are broken by lower AP index; subsets are ordered nearest
    first.
    """
    L = layout.num_aps
    if not 1 <= cluster_size <= L:
        raise ValueError(f"cluster_size must be in [1, {L}], got {cluster_size}")
    d = wrap_distance(
        layout.user_positions[:, None, :], layout.ap_positions[None, :, :], layout.area
    )
    # stable sort keeps the lower AP index first on exact ties
    order = np.argsort(d, axis=1, kind="stable")[:, :cluster_size]
    return ClusterAssignment(
        subsets=tuple(order[k] for k in range(layout.num_users)),
        num_aps=L,
        antennas_per_ap=layout.antennas_per_ap,
        mode=MODE_USER_CENTRIC,
    )


def single_ap_clusters(beta: np.ndarray, antennas_per_ap: int) -> ClusterAssignment:
    """Associate each user with the AP of largest large-scale gain.

    Ties go to the lower AP index. Used for the small-cell architecture,
    where each user is decoded by exactly one AP.
    """
    beta = np.asarray(beta, dtype=float)
    serving = np.argmax(beta, axis=1).reshape(-1, 1)
    return ClusterAssignment(
        subsets=tuple(serving),
        num_aps=beta.shape[1],
        antennas_per_ap=antennas_per_ap,
        mode=MODE_SINGLE_AP,
    )


def apply_mask(assignment: ClusterAssignment, k: int, x: np.ndarray) -> np.ndarray:
    """Zero every antenna entry of x outside user k's AP subset."""
    x = np.asarray(x)
    m = assignment.num_aps * assignment.antennas_per_ap
    if x.shape != (m,):
        raise ValueError(f"expected vector of length {m}, got shape {x.shape}")
    out = np.zeros_like(x)
    idx = assignment.antenna_indices(k)
    out[idx] = x[idx]
    return out


def served_users(assignment: ClusterAssignment, l: int) -> np.ndarray:
    """Users whose subset contains AP l, as a sorted index array."""
    if not 0 <= l < assignment.num_aps:
        raise ValueError(f"AP index {l} out of range [0, {assignment.num_aps})")
    return np.array(
        [k for k, s in enumerate(assignment.subsets) if l in s], dtype=int
    )
