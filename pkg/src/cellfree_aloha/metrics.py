"""Capture outcomes and sum-throughput of one ALOHA slot.

A packet survives a collision when its SINR strictly exceeds the capture
threshold; captured packets contribute their instantaneous rate over the
data fraction of the coherence block, everything else contributes zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .traffic import SlotActivity


@dataclass(frozen=True, eq=False)
class SlotOutcome:
    """Per-user capture flags and rates for one slot."""

    active: np.ndarray
    captured: np.ndarray
    rates: np.ndarray
    sum_throughput: float


def capture_outcomes(sinrs, alpha: float) -> np.ndarray:
    """Boolean capture flag per active user; strict threshold comparison."""
    if not alpha > 0:
        raise ValueError(f"capture threshold must be positive, got {alpha}")
    return np.asarray(sinrs, dtype=float) > alpha


def _rates(sinrs, alpha, tau_d, tau_c, bandwidth_hz, prefactor):
    if not 0 < tau_d <= tau_c:
        raise ValueError(f"need 0 < tau_d <= tau_c, got tau_d={tau_d}, tau_c={tau_c}")
    if not bandwidth_hz > 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    s = np.asarray(sinrs, dtype=float)
    kept = np.where(capture_outcomes(s, alpha), s, 0.0)
    return (tau_d / tau_c) * prefactor * bandwidth_hz * np.log2(1.0 + kept)


def sum_throughput(
    sinrs,
    alpha: float,
    tau_d: float,
    tau_c: float,
    bandwidth_hz: float,
    prefactor: float = 2.0,
) -> float:
    """Total decoded rate of one slot in bits/s.

    Only users whose SINR exceeds alpha count. The default rate prefactor
    of two bandwidths is kept as configured system-wide; pass prefactor=1
    for the single-bandwidth convention (orderings between architectures
    are unaffected either way).
    """
    return float(_rates(sinrs, alpha, tau_d, tau_c, bandwidth_hz, prefactor).sum())


def slot_outcome(
    sinrs,
    activity: SlotActivity,
    alpha: float,
    tau_d: float,
    tau_c: float,
    bandwidth_hz: float,
    prefactor: float = 2.0,
) -> SlotOutcome:
    """Bundle capture flags, per-user rates and their sum for one slot."""
    s = np.asarray(sinrs, dtype=float)
    if s.shape != (activity.k_a,):
        raise ValueError(f"expected {activity.k_a} SINR values, got shape {s.shape}")
    rates = _rates(s, alpha, tau_d, tau_c, bandwidth_hz, prefactor)
    return SlotOutcome(
        active=activity.active,
        captured=capture_outcomes(s, alpha),
        rates=rates,
        sum_throughput=float(rates.sum()),
    )


def estimate_capture_probability(outcomes, user: int | None = None) -> tuple[float, float]:
    """Monte Carlo capture probability from a stream of slot outcomes.

    With `user` given, the estimate conditions on the slots where that
    user transmitted; otherwise all transmission attempts are pooled.
    Returns (estimate, standard error).
    """
    samples = []
    for outcome in outcomes:
        if user is None:
            samples.extend(outcome.captured.tolist())
        else:
            hit = np.flatnonzero(outcome.active == user)
            if hit.size:
                samples.append(bool(outcome.captured[hit[0]]))
    if not samples:
        raise ValueError("no transmission attempts in the outcome stream")
    t = len(samples)
    p_hat = float(np.mean(samples))
    return p_hat, float(np.sqrt(p_hat * (1.0 - p_hat) / t))
