"""Slotted ALOHA traffic: who transmits in a given slot.

Each user independently holds a fresh packet with the activation
probability, so the number of simultaneous transmitters is binomial.
There is no backlog state; every slot is drawn fresh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class SlotActivity:
    """The set of users transmitting in one slot."""

    active: np.ndarray
    num_users: int

    def __post_init__(self):
        active = np.asarray(self.active, dtype=int)
        object.__setattr__(self, "active", active)
        if active.size and (active.min() < 0 or active.max() >= self.num_users):
            raise ValueError("active user indices out of range")
        if np.any(np.diff(active) <= 0):
            raise ValueError("active indices must be strictly increasing")

    @property
    def k_a(self) -> int:
        return self.active.size

    def position(self, k: int) -> int:
        """Index of user k within the active set; raises if k is inactive."""
        pos = np.searchsorted(self.active, k)
        if pos >= self.active.size or self.active[pos] != k:
            raise ValueError(f"user {k} is not active in this slot")
        return int(pos)


def sample_activity(K: int, pi: float, rng: np.random.Generator) -> SlotActivity:
    """Draw one slot's active set: each of K users transmits w.p. pi.

    Implemented by thresholding one uniform draw per user, so runs sharing
    a random stream are monotonically coupled across activation
    probabilities.
    """
    if not 0.0 <= pi <= 1.0:
        raise ValueError(f"activation probability must be in [0, 1], got {pi}")
    u = rng.random(K)
    return SlotActivity(active=np.flatnonzero(u < pi), num_users=K)
