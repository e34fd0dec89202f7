"""Post-auction steps on the satellite: give away unsold subcarriers near
recorded bids, track deal prices over a sliding window of auctions, flag
subcarriers whose price history points at external interference, and shift
transmit power away from the flagged band.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .auctioneer import AllocationMap, BidRecord

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FreeAssignment:
    """An unsold subcarrier handed out for free after the rounds end."""

    sc: int
    gs: int
    min_snr_db: float


def assign_unsold(
    allocation: AllocationMap,
    records: list[BidRecord],
    adjacency_radius: int = 1,
) -> list[FreeAssignment]:
    """Hand unsold subcarriers to nearby bidders for free.

    A station is a candidate for an unsold subcarrier when any of its
    recorded bid blocks, widened by ``adjacency_radius``, covers it; having
    won is not required. Among candidates the one whose covering bid
    reported the highest minimum SNR takes it (lower station index on
    ties), since it can make the most of the band. Subcarriers nobody bid
    near stay unsold. Free assignments carry a zero deal price and do not
    count as sales.
    """
    if adjacency_radius < 0:
        raise ValueError("adjacency_radius must be non-negative")
    num_sc = allocation.num_sc
    assignments: list[FreeAssignment] = []
    for sc in allocation.unsold_indices():
        best_gs = -1
        best_snr = -np.inf
        for record in records:
            m = record.message
            lo = m.start_sc - adjacency_radius
            hi = m.start_sc + m.length - 1 + adjacency_radius
            if lo <= sc <= hi and m.min_snr_db > best_snr:
                best_snr = m.min_snr_db
                best_gs = record.gs
        if best_gs >= 0:
            assignments.append(FreeAssignment(sc=int(sc), gs=best_gs, min_snr_db=best_snr))
    if not assignments and num_sc and allocation.unsold_indices().size:
        log.debug("no unsold subcarrier had a recorded bid within the adjacency radius")
    return assignments


class DealPriceHistory:
    """Sliding window of per-subcarrier deal prices over recent auctions.

    Each auction contributes one price per subcarrier: the deal price where
    it sold, zero where it did not. The window average therefore sinks for
    subcarriers that rarely sell, which is exactly the signature the
    detector looks for.
    """

    def __init__(self, num_sc: int, window: int):
        if num_sc < 1:
            raise ValueError("num_sc must be positive")
        if window < 1:
            raise ValueError("window must be positive")
        self.num_sc = num_sc
        self.window = window
        self._prices = np.zeros((window, num_sc))
        self._sold = np.zeros((window, num_sc), dtype=bool)
        self._next = 0
        self.auctions_observed = 0

    def observe(self, deal_prices: np.ndarray, sold_mask: np.ndarray) -> None:
        deal_prices = np.asarray(deal_prices, dtype=float)
        sold_mask = np.asarray(sold_mask, dtype=bool)
        if deal_prices.shape != (self.num_sc,) or sold_mask.shape != (self.num_sc,):
            raise ValueError("observation shape does not match num_sc")
        slot = self._next % self.window
        self._prices[slot] = np.where(sold_mask, deal_prices, 0.0)
        self._sold[slot] = sold_mask
        self._next += 1
        self.auctions_observed = min(self.auctions_observed + 1, self.window)

    @property
    def full(self) -> bool:
        return self.auctions_observed >= self.window

    def average_prices(self) -> np.ndarray:
        """Mean deal price per subcarrier over the window, unsold counting
        as zero. Requires a full window."""
        if not self.full:
            raise ValueError(
                f"history holds {self.auctions_observed} auctions, needs {self.window}"
            )
        return self._prices.sum(axis=0) / self.window

    def sold_fraction(self) -> np.ndarray:
        if not self.full:
            raise ValueError(
                f"history holds {self.auctions_observed} auctions, needs {self.window}"
            )
        return self._sold.sum(axis=0) / self.window


def detect_from_averages(
    average_prices: np.ndarray, threshold_fraction: float = 0.5
) -> np.ndarray:
    """Flag subcarriers whose windowed average price falls below a fraction
    of the median average. Returns flagged indices, ascending."""
    average_prices = np.asarray(average_prices, dtype=float)
    if not 0 < threshold_fraction < 1:
        raise ValueError("threshold_fraction must be in (0, 1)")
    if not np.any(average_prices > 0):
        log.warning("every windowed average price is zero; nothing to compare against")
        return np.zeros(0, dtype=int)
    median = np.median(average_prices)
    return np.flatnonzero(average_prices < threshold_fraction * median)


def detect_interference(
    history: DealPriceHistory, threshold_fraction: float = 0.5
) -> np.ndarray:
    """Price-based detector: subcarriers persistently cheaper than the rest
    of the band are suspected of carrying external interference."""
    return detect_from_averages(history.average_prices(), threshold_fraction)


def detect_interference_by_sales(history: DealPriceHistory) -> np.ndarray:
    """Comparison detector that ignores prices: flag subcarriers that never
    sold across the window. Cruder than the price detector; a subcarrier
    that sells once in a hundred auctions at a token price escapes it."""
    return np.flatnonzero(history.sold_fraction() == 0)


def reload_power(tx_power_per_sc: np.ndarray, flagged: np.ndarray) -> np.ndarray:
    """Move transmit power off flagged subcarriers, spreading it evenly over
    the rest. Total power is conserved. Flagging everything leaves the
    vector unchanged (there is nowhere to put the power)."""
    power = np.asarray(tx_power_per_sc, dtype=float).copy()
    if power.ndim != 1:
        raise ValueError("tx_power_per_sc must be one-dimensional")
    if np.any(power < 0):
        raise ValueError("tx_power_per_sc must be non-negative")
    flagged = np.asarray(flagged, dtype=int)
    if flagged.size == 0:
        return power
    if flagged.size and (flagged.min() < 0 or flagged.max() >= power.size):
        raise ValueError("flagged indices out of range")
    if np.unique(flagged).size != flagged.size:
        raise ValueError("flagged indices must be unique")
    if flagged.size == power.size:
        log.warning("all subcarriers flagged; keeping the power vector as is")
        return power
    moved = power[flagged].sum()
    power[flagged] = 0.0
    keep = np.ones(power.size, dtype=bool)
    keep[flagged] = False
    power[keep] += moved / keep.sum()
    return power
