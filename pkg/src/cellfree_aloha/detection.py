"""Instantaneous uplink SINR for the four receiver architectures.

All architectures observe the same stacked length-L*N channel vectors of
the active users; they differ only in which antenna entries a user's
combiner may use:

- cell-free-full: every antenna in the system (identity mask),
- user-centric: the antenna blocks of the user's AP subset,
- cellular-mimo: every antenna (they are co-located at one site),
- small-cell: the N antennas of the user's single serving AP.

The MMSE combiner maximizes SINR over the allowed subspace, and because
the masks are coordinate projections all solves are done in the reduced
subspace. The interference-plus-noise matrix is Hermitian positive
definite (the noise power is strictly positive), so systems are solved by
Cholesky factorization, never by explicit inversion.

Two equivalent routes to the MMSE SINR are provided on purpose:
`mmse_sinr` evaluates the quadratic form against the interference-only
matrix directly, while `slot_sinrs` factors the matrix that includes the
user's own signal once per slot and removes the self term with a rank-one
update. Tests pin the two routes to each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .channel import ChannelRealization
from .clustering import ClusterAssignment, apply_mask
from .traffic import SlotActivity

CELL_FREE_FULL = "cell-free-full"
USER_CENTRIC = "user-centric"
CELLULAR_MIMO = "cellular-mimo"
SMALL_CELL = "small-cell"
NETWORK_MODES = (CELL_FREE_FULL, USER_CENTRIC, CELLULAR_MIMO, SMALL_CELL)

ASSOC_STRONGEST = "strongest-beta"
ASSOC_BEST_INSTANTANEOUS = "best-instantaneous"


@dataclass(frozen=True, eq=False)
class ReceiverConfig:
    """Receiver-side parameters shared by all SINR computations.

    noise_power is in watts, tx_powers is a length-K array of per-user
    transmit powers in watts, capture_threshold is a linear SINR ratio.
    """

    mode: str
    noise_power: float
    tx_powers: np.ndarray
    capture_threshold: float
    smallcell_association: str = ASSOC_STRONGEST

    def __post_init__(self):
        object.__setattr__(self, "tx_powers", np.asarray(self.tx_powers, dtype=float))
        if self.mode not in NETWORK_MODES:
            raise ValueError(f"unknown mode {self.mode!r}, expected one of {NETWORK_MODES}")
        if not self.noise_power > 0:
            raise ValueError(f"noise_power must be positive, got {self.noise_power}")
        if np.any(self.tx_powers < 0):
            raise ValueError("tx_powers must be non-negative")
        if not self.capture_threshold > 0:
            raise ValueError(f"capture_threshold must be positive, got {self.capture_threshold}")
        if self.smallcell_association not in (ASSOC_STRONGEST, ASSOC_BEST_INSTANTANEOUS):
            raise ValueError(f"unknown association rule {self.smallcell_association!r}")


@dataclass(frozen=True)
class SymbolEstimate:
    """Combiner output split into its desired, interference and noise parts."""

    desired: complex
    interference: complex
    noise: complex

    @property
    def total(self) -> complex:
        return self.desired + self.interference + self.noise


def _direct_sinr(rows: np.ndarray, p: np.ndarray, pos: int, noise_power: float) -> float:
    """MMSE SINR from the interference-only Gram matrix.

    rows: (K_a, m) active-user channels restricted to one subspace.
    Evaluates p_k g_k^H A^{-1} g_k with A the interference-plus-noise
    matrix of the other active users.
    """
    g_k = rows[pos]
    others = np.ones(rows.shape[0], dtype=bool)
    others[pos] = False
    cols = rows[others].T
    a = (cols * p[others]) @ cols.conj().T
    a[np.diag_indices_from(a)] += noise_power
    x = cho_solve(cho_factor(a), g_k)
    return float(p[pos] * np.real(np.vdot(g_k, x)))


def _sinr_from_included_quadform(q):
    """Map q = p_k g_k^H B^{-1} g_k, with B including user k, to the SINR.

    Removing the rank-one self term from B gives SINR = q / (1 - q);
    q < 1 holds exactly, the floor only guards the division when a huge
    SINR rounds q to 1.
    """
    return q / np.maximum(1.0 - q, np.finfo(float).tiny)


def mmse_sinr(
    channels: ChannelRealization,
    activity: SlotActivity,
    assignment: ClusterAssignment,
    cfg: ReceiverConfig,
    k: int,
) -> float:
    """SINR of active user k under MMSE combining on its masked antennas."""
    pos = activity.position(k)
    idx = assignment.antenna_indices(k)
    if idx.size == 0:
        return 0.0
    rows = channels.collective()[activity.active][:, idx]
    return _direct_sinr(rows, cfg.tx_powers[activity.active], pos, cfg.noise_power)


def mmse_combiner(
    channels: ChannelRealization,
    activity: SlotActivity,
    assignment: ClusterAssignment,
    cfg: ReceiverConfig,
    k: int,
) -> np.ndarray:
    """MMSE combining vector of active user k, length L*N.

    Entries outside the user's mask are zero. The defining system here
    includes the user's own signal in the Gram matrix; the resulting
    SINR is identical to `mmse_sinr`.
    """
    pos = activity.position(k)
    v = np.zeros(channels.total_antennas, dtype=complex)
    idx = assignment.antenna_indices(k)
    if idx.size == 0:
        return v
    p = cfg.tx_powers[activity.active]
    cols = channels.collective()[activity.active][:, idx].T
    b = (cols * p) @ cols.conj().T
    b[np.diag_indices_from(b)] += cfg.noise_power
    v[idx] = p[pos] * cho_solve(cho_factor(b), cols[:, pos])
    return v


def sinr_from_combiner(
    v: np.ndarray,
    channels: ChannelRealization,
    activity: SlotActivity,
    assignment: ClusterAssignment,
    cfg: ReceiverConfig,
    k: int,
) -> float:
    """SINR obtained when active user k is detected with combiner v.

    Evaluates the signal-over-interference-plus-noise power ratio
    literally; with the MMSE combiner it reproduces `mmse_sinr` and for
    any other combiner it can only be lower.
    """
    pos = activity.position(k)
    w = apply_mask(assignment, k, np.asarray(v, dtype=complex))
    if not np.any(w):
        raise ValueError("combiner is zero after masking")
    amps = channels.collective()[activity.active] @ w.conj()
    p = cfg.tx_powers[activity.active]
    powers = p * np.abs(amps) ** 2
    signal = powers[pos]
    interference = powers.sum() - signal
    return float(signal / (interference + cfg.noise_power * np.real(np.vdot(w, w))))


def cellular_sinr(
    channels: ChannelRealization,
    activity: SlotActivity,
    cfg: ReceiverConfig,
    k: int,
) -> float:
    """SINR of active user k when all antennas are pooled at one site.

    Same computation as the unmasked cell-free case; the architectures
    differ only through the layout that produced `channels`.
    """
    pos = activity.position(k)
    rows = channels.collective()[activity.active]
    return _direct_sinr(rows, cfg.tx_powers[activity.active], pos, cfg.noise_power)


def smallcell_sinr(
    channels: ChannelRealization,
    activity: SlotActivity,
    assignment: ClusterAssignment,
    cfg: ReceiverConfig,
    k: int,
) -> float:
    """SINR of active user k when decoded by a single AP on its own.

    With one antenna per AP this is the scalar power ratio at the serving
    AP; with several antennas the AP applies local MMSE combining over its
    own N antennas. The serving AP is the first entry of the user's
    subset, or the instantaneous best AP under that association rule.
    """
    pos = activity.position(k)
    p = cfg.tx_powers[activity.active]
    g_act = channels.g[activity.active]
    if cfg.smallcell_association == ASSOC_BEST_INSTANTANEOUS:
        candidates = range(channels.num_aps)
    else:
        if assignment.subsets[k].size == 0:
            return 0.0
        candidates = (int(assignment.subsets[k][0]),)
    return max(
        _direct_sinr(g_act[:, l, :], p, pos, cfg.noise_power) for l in candidates
    )


def symbol_estimate(
    channels: ChannelRealization,
    activity: SlotActivity,
    assignment: ClusterAssignment,
    cfg: ReceiverConfig,
    k: int,
    symbols: np.ndarray,
    noise: np.ndarray,
    combiner: np.ndarray | None = None,
) -> SymbolEstimate:
    """Detect one symbol of user k and split the output into its parts.

    symbols: per-active-user transmitted symbols, noise: the length-L*N
    receiver noise vector. Intended for validating the SINR expressions
    against symbol-level averages; the harness never calls it.
    """
    pos = activity.position(k)
    symbols = np.asarray(symbols, dtype=complex)
    noise = np.asarray(noise, dtype=complex)
    if symbols.shape != (activity.k_a,):
        raise ValueError(f"expected {activity.k_a} symbols, got shape {symbols.shape}")
    if noise.shape != (channels.total_antennas,):
        raise ValueError(f"expected noise of length {channels.total_antennas}, got shape {noise.shape}")
    if not (np.all(np.isfinite(symbols)) and np.all(np.isfinite(noise))):
        raise ValueError("non-finite symbol or noise input")
    if combiner is None:
        combiner = mmse_combiner(channels, activity, assignment, cfg, k)
    w = apply_mask(assignment, k, np.asarray(combiner, dtype=complex))
    amps = channels.collective()[activity.active] @ w.conj()
    contributions = amps * symbols
    desired = contributions[pos]
    return SymbolEstimate(
        desired=complex(desired),
        interference=complex(contributions.sum() - desired),
        noise=complex(np.vdot(w, noise)),
    )


def slot_sinrs(
    channels: ChannelRealization,
    activity: SlotActivity,
    assignment: ClusterAssignment,
    cfg: ReceiverConfig,
) -> np.ndarray:
    """SINR of every active user in one slot, ordered like activity.active.

    Batched equivalent of the per-user operations: one Cholesky per slot
    for the unmasked architectures, one small factorization per user
    otherwise. Inputs are trusted to be finite (enforced when the channel
    realization is assembled).
    """
    active = activity.active
    if active.size == 0:
        return np.zeros(0)
    p = cfg.tx_powers[active]
    noise = cfg.noise_power

    if cfg.mode in (CELL_FREE_FULL, CELLULAR_MIMO):
        cols = channels.collective()[active].T
        b = (cols * p) @ cols.conj().T
        b[np.diag_indices_from(b)] += noise
        x = cho_solve(cho_factor(b, check_finite=False), cols, check_finite=False)
        q = p * np.real(np.sum(cols.conj() * x, axis=0))
        return _sinr_from_included_quadform(q)

    if cfg.mode == USER_CENTRIC:
        rows = channels.collective()[active]
        gram = (rows.T * p) @ rows.conj()
        out = np.empty(active.size)
        for pos, k in enumerate(active):
            idx = assignment.antenna_indices(k)
            if idx.size == 0:
                out[pos] = 0.0
                continue
            b = gram[np.ix_(idx, idx)]
            b[np.diag_indices_from(b)] += noise
            g_k = rows[pos, idx]
            x = cho_solve(cho_factor(b, check_finite=False), g_k, check_finite=False)
            out[pos] = _sinr_from_included_quadform(p[pos] * np.real(np.vdot(g_k, x)))
        return out

    if cfg.mode == SMALL_CELL:
        g_act = channels.g[active]
        blocks = np.einsum("i,ila,ilb->lab", p, g_act, g_act.conj())
        n = channels.antennas_per_ap
        blocks[:, np.arange(n), np.arange(n)] += noise
        if cfg.smallcell_association == ASSOC_BEST_INSTANTANEOUS:
            x = np.linalg.solve(blocks, g_act.transpose(1, 2, 0))
            q = p * np.real(np.einsum("ila,lai->il", g_act.conj(), x)).max(axis=1)
        else:
            serving = np.array([int(assignment.subsets[k][0]) for k in active])
            g_serv = g_act[np.arange(active.size), serving]
            x = np.linalg.solve(blocks[serving], g_serv[:, :, None])[:, :, 0]
            q = p * np.real(np.sum(g_serv.conj() * x, axis=1))
        return _sinr_from_included_quadform(q)

    raise ValueError(f"unknown mode {cfg.mode!r}")
