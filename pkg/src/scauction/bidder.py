"""Ground-station side of the auction: capacity estimation, bid sizing,
contiguous grouping, and ratio assignment.

A station never learns its account balance. It announces how it would split
whatever funds it has across the subcarriers it wants, as a ratio per
contiguous group, and the auctioneer turns those ratios into prices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class BidGroup:
    """Maximal run of consecutive selected subcarriers."""

    start_sc: int
    length: int
    member_capacities: np.ndarray

    @property
    def subcarriers(self) -> range:
        return range(self.start_sc, self.start_sc + self.length)


@dataclass
class BidMessage:
    """One uplink bid: a contiguous block, the fund ratio committed to it,
    and the worst per-subcarrier SNR inside the block in dB."""

    start_sc: int
    length: int
    ratio: float
    min_snr_db: float

    @property
    def subcarriers(self) -> range:
        return range(self.start_sc, self.start_sc + self.length)


def estimate_capacities(capacity_row: np.ndarray, availability: np.ndarray) -> np.ndarray:
    """Capacity estimate used for bidding: sold subcarriers count as zero."""
    capacity_row = np.asarray(capacity_row, dtype=float)
    availability = np.asarray(availability, dtype=bool)
    if capacity_row.shape != availability.shape:
        raise ValueError("capacity row and availability mask must align")
    return np.where(availability, capacity_row, 0.0)


def select_bid_count(sorted_capacities: np.ndarray, max_bid_count: int | None = None) -> int:
    """How many of the best subcarriers are worth bidding on.

    With capacities sorted descending, let A be the mean of all entries
    except the largest. The count is the largest j maximizing
    sum(C_1..C_j) - j * A, which keeps exactly the subcarriers at or above
    A. The result is clamped to the number of strictly positive entries,
    and to ``max_bid_count`` when given.
    """
    caps = np.asarray(sorted_capacities, dtype=float)
    if caps.ndim != 1:
        raise ValueError("capacities must be a 1-D vector")
    if np.any(np.diff(caps) > 0):
        raise ValueError("capacities must be sorted descending")
    positives = int(np.count_nonzero(caps > 0))
    size = caps.size
    if size < 2:
        count = min(1, positives)
    else:
        baseline = (caps.sum() - caps[0]) / (size - 1)
        objective = np.cumsum(caps) - np.arange(1, size + 1) * baseline
        # largest argmax: scan the reversed objective
        count = size - int(np.argmax(objective[::-1]))
        count = min(count, positives)
    if max_bid_count is not None:
        count = min(count, max_bid_count)
    return count


def form_groups(selected: np.ndarray, capacity_row: np.ndarray) -> list[BidGroup]:
    """Split selected subcarrier indices into maximal consecutive runs."""
    idx = np.unique(np.asarray(selected, dtype=int))
    if idx.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([0], breaks + 1))
    ends = np.concatenate((breaks, [idx.size - 1]))
    groups = []
    for a, b in zip(starts, ends):
        run = idx[a : b + 1]
        groups.append(
            BidGroup(
                start_sc=int(run[0]),
                length=int(run.size),
                member_capacities=np.asarray(capacity_row, dtype=float)[run],
            )
        )
    return groups


def assign_ratios(groups: list[BidGroup]) -> np.ndarray:
    """Fund split across groups, proportional to each group's total capacity."""
    if not groups:
        return np.zeros(0)
    totals = np.array([g.member_capacities.sum() for g in groups], dtype=float)
    grand_total = totals.sum()
    if grand_total <= 0:
        return np.zeros(0)
    return totals / grand_total


def build_bids(
    capacity_row: np.ndarray,
    snr_row: np.ndarray,
    availability: np.ndarray,
    max_bid_count: int | None = None,
) -> list[BidMessage]:
    """Full bidding pipeline for one station and one round.

    Returns an empty list when no available subcarrier has positive capacity.
    Every message covers only available subcarriers, message lengths sum to
    the selected count, and ratios sum to one.
    """
    caps = estimate_capacities(capacity_row, availability)
    snr_row = np.asarray(snr_row, dtype=float)
    if snr_row.shape != caps.shape:
        raise ValueError("snr row must align with the capacity row")
    # stable sort keeps ascending subcarrier index among equal capacities
    order = np.argsort(-caps, kind="stable")
    count = select_bid_count(caps[order], max_bid_count)
    if count == 0:
        return []
    selected = order[:count]
    groups = form_groups(selected, caps)
    ratios = assign_ratios(groups)
    if ratios.size == 0:
        return []
    messages = []
    for group, ratio in zip(groups, ratios):
        member_snr = snr_row[group.start_sc : group.start_sc + group.length]
        messages.append(
            BidMessage(
                start_sc=group.start_sc,
                length=group.length,
                ratio=float(ratio),
                min_snr_db=10.0 * float(np.log10(member_snr.min())),
            )
        )
    return messages
