"""Per-slot fading: i.i.d. complex Gaussian small-scale draws scaled by path loss."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One block-fading realization for every user/AP pair.

    g: (K, L, N) complex array; g[k, l] is the channel from user k to the
    N antennas of AP l. beta: the (K, L) linear large-scale matrix the
    realization was built from.
    """

    g: np.ndarray
    beta: np.ndarray

    @property
    def num_users(self) -> int:
        return self.g.shape[0]

    @property
    def num_aps(self) -> int:
        return self.g.shape[1]

    @property
    def antennas_per_ap(self) -> int:
        return self.g.shape[2]

    @property
    def total_antennas(self) -> int:
        return self.g.shape[1] * self.g.shape[2]

    def collective(self) -> np.ndarray:
        """(K, L*N) view with each user's per-AP blocks stacked in AP order."""
        return self.g.reshape(self.num_users, -1)

    def stacked(self, k: int) -> np.ndarray:
        """Length-L*N channel vector of user k."""
        return self.g[k].reshape(-1)


def sample_small_scale(K: int, L: int, N: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-variance circularly-symmetric complex Gaussian fades, shape (K, L, N).

    Real and imaginary parts are independent with variance 1/2 each.
    """
    if min(K, L, N) < 1:
        raise ValueError(f"dimensions must be positive, got K={K}, L={L}, N={N}")
    re = rng.standard_normal((K, L, N))
    im = rng.standard_normal((K, L, N))
    return (re + 1j * im) / np.sqrt(2.0)


def assemble_channel(beta: np.ndarray, h: np.ndarray) -> ChannelRealization:
    """Scale small-scale fades by the square root of the large-scale gains."""
    beta = np.asarray(beta, dtype=float)
    h = np.asarray(h, dtype=complex)
    if h.ndim != 3 or beta.shape != h.shape[:2]:
        raise ValueError(f"shape mismatch: beta {beta.shape} vs h {h.shape}")
    if np.any(beta <= 0):
        raise ValueError("large-scale coefficients must be positive")
    if not np.all(np.isfinite(beta)) or not np.all(np.isfinite(h)):
        raise ValueError("non-finite channel inputs")
    g = np.sqrt(beta)[:, :, None] * h
    return ChannelRealization(g=g, beta=beta)
