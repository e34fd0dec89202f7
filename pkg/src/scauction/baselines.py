"""Reference allocators the auction is measured against, plus the overhead
of a conventional full-feedback scheme."""

from __future__ import annotations

import numpy as np

from .channel import CapacityGrid

FULL_FEEDBACK_BITS_PER_SC = 10


def random_allocation(num_gs: int, num_sc: int, seed: int) -> np.ndarray:
    """Assign every subcarrier to a uniformly random station. Returns the
    per-subcarrier winner vector."""
    if num_gs < 1 or num_sc < 1:
        raise ValueError("num_gs and num_sc must be positive")
    rng = np.random.default_rng(seed)
    return rng.integers(0, num_gs, size=num_sc)


def capacity_limit_allocation(grid: CapacityGrid) -> np.ndarray:
    """Give each subcarrier to the station with the best capacity on it.

    This is the throughput ceiling of any per-subcarrier assignment; it
    requires the satellite to know the full capacity grid, which the
    auction deliberately avoids. Ties go to the lower station index.
    """
    return np.argmax(grid.capacities, axis=0)


def allocation_capacities(winner: np.ndarray, grid: CapacityGrid) -> np.ndarray:
    """Per-station capacity totals of an assignment. Entries of -1 mean
    unassigned and contribute nothing."""
    winner = np.asarray(winner)
    if winner.shape != (grid.num_sc,):
        raise ValueError("winner vector must have one entry per subcarrier")
    totals = np.zeros(grid.num_gs)
    assigned = np.flatnonzero(winner >= 0)
    np.add.at(totals, winner[assigned], grid.capacities[winner[assigned], assigned])
    return totals


def full_feedback_overhead(num_sc: int, bits_per_sc: int = FULL_FEEDBACK_BITS_PER_SC) -> int:
    """Uplink bits for one station reporting channel quality on every
    subcarrier, the conventional alternative to bidding."""
    if num_sc < 0:
        raise ValueError("num_sc must be non-negative")
    if bits_per_sc < 1:
        raise ValueError("bits_per_sc must be positive")
    return num_sc * bits_per_sc
