"""Shared builders for randomized slot instances used across tests."""

import numpy as np

from cellfree_aloha.channel import assemble_channel, sample_small_scale
from cellfree_aloha.clustering import ClusterAssignment, full_clusters
from cellfree_aloha.detection import ReceiverConfig
from cellfree_aloha.traffic import SlotActivity


def random_instance(rng, mode="user-centric", max_active=20, equal_power=False):
    """One random slot: channels, activity, mask assignment, receiver config.

    Dimensions stay small (L*N <= 64, K_a <= max_active) and every scale is
    O(1), where the solve paths are far from conditioning limits.
    """
    while True:
        num_aps = int(rng.integers(1, 9))
        antennas = int(rng.integers(1, 9))
        if num_aps * antennas <= 64:
            break
    k_a = int(rng.integers(1, max_active + 1))
    num_users = k_a + int(rng.integers(0, 4))
    active = np.sort(rng.choice(num_users, size=k_a, replace=False))
    beta = 10.0 ** rng.uniform(-1.0, 1.0, size=(num_users, num_aps))
    channels = assemble_channel(beta, sample_small_scale(num_users, num_aps, antennas, rng))
    activity = SlotActivity(active=active, num_users=num_users)
    if mode == "full":
        assignment = full_clusters(num_aps, num_users, antennas_per_ap=antennas)
        cfg_mode = "cell-free-full"
    else:
        subsets = []
        for _ in range(num_users):
            size = int(rng.integers(1, num_aps + 1))
            subsets.append(rng.permutation(num_aps)[:size])
        assignment = ClusterAssignment(
            subsets=tuple(subsets), num_aps=num_aps, antennas_per_ap=antennas, mode="user-centric"
        )
        cfg_mode = "user-centric"
    powers = np.ones(num_users) if equal_power else rng.uniform(0.1, 2.0, size=num_users)
    cfg = ReceiverConfig(
        mode=cfg_mode,
        noise_power=float(rng.uniform(0.5, 2.0)),
        tx_powers=powers,
        capture_threshold=2.0,
    )
    return channels, activity, assignment, cfg


def single_antenna_sinr(channels, activity, cfg, k, antenna):
    """Scalar oracle: the combining SINR when only one antenna entry is used."""
    pos = activity.position(k)
    rows = channels.collective()[activity.active]
    p = cfg.tx_powers[activity.active]
    powers = p * np.abs(rows[:, antenna]) ** 2
    signal = powers[pos]
    return signal / (powers.sum() - signal + cfg.noise_power)
