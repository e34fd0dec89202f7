"""Satellite side of the auction: accounts, pricing, winner determination,
and the multi-round loop.

The satellite holds the fund accounts. Each round it snapshots balances,
prices every incoming bid from them, sells each contested subcarrier to the
highest eligible offer, charges the winners, and repeats with the leftover
subcarriers until demands are met, bids stop, or the round limit is hit.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .bidder import BidMessage, build_bids
from .channel import CapacityGrid
from .codec import MESSAGE_BITS, wire_roundtrip

log = logging.getLogger(__name__)


@dataclass
class Ledger:
    """Fund accounts for all ground stations."""

    balances: np.ndarray
    budgets: np.ndarray
    rollover: bool = False

    def __post_init__(self) -> None:
        self.balances = np.asarray(self.balances, dtype=float)
        self.budgets = np.asarray(self.budgets, dtype=float)
        if self.balances.shape != self.budgets.shape:
            raise ValueError("balances and budgets must have the same shape")
        if np.any(self.balances < 0) or np.any(self.budgets < 0):
            raise ValueError("balances and budgets must be non-negative")

    @classmethod
    def fresh(cls, budgets: np.ndarray, rollover: bool = False) -> "Ledger":
        budgets = np.asarray(budgets, dtype=float)
        return cls(balances=np.zeros_like(budgets), budgets=budgets, rollover=rollover)

    def copy(self) -> "Ledger":
        return Ledger(self.balances.copy(), self.budgets.copy(), self.rollover)


def fund_accounts(ledger: Ledger) -> Ledger:
    """Start-of-auction funding. With rollover, unspent funds persist and the
    budget is added on top; otherwise accounts reset to the budget."""
    if ledger.rollover:
        balances = ledger.balances + ledger.budgets
    else:
        balances = ledger.budgets.copy()
    return Ledger(balances=balances, budgets=ledger.budgets.copy(), rollover=ledger.rollover)


@dataclass
class AllocationMap:
    """Who owns each subcarrier, at what price, and since which round.

    Unsold entries carry winner -1, price 0, round 0.
    """

    winner: np.ndarray
    deal_price: np.ndarray
    winning_round: np.ndarray

    @classmethod
    def empty(cls, num_sc: int) -> "AllocationMap":
        return cls(
            winner=np.full(num_sc, -1, dtype=int),
            deal_price=np.zeros(num_sc),
            winning_round=np.zeros(num_sc, dtype=int),
        )

    @property
    def num_sc(self) -> int:
        return self.winner.size

    @property
    def sold_mask(self) -> np.ndarray:
        return self.winner >= 0

    def unsold_indices(self) -> np.ndarray:
        return np.flatnonzero(self.winner < 0)


@dataclass
class BidRecord:
    """A bid message as the satellite stored it, tagged by sender and round."""

    gs: int
    round: int
    message: BidMessage


@dataclass
class AuctionPolicy:
    """Operating knobs for one auction."""

    pricing: str = "first"
    max_rounds: int = 4
    max_sc_per_gs: int | None = None
    max_bid_count: int | None = None
    demands: np.ndarray | None = None
    use_wire_format: bool = True

    def __post_init__(self) -> None:
        if self.pricing not in ("first", "second"):
            raise ValueError("pricing must be 'first' or 'second'")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be at least 1")


@dataclass
class PriceTable:
    """Per-(station, subcarrier) offered prices for one round. A zero price
    with has_bid set is a real bid from an empty account; it can never win."""

    prices: np.ndarray
    has_bid: np.ndarray
    discarded: int = 0


def price_bids(
    messages_by_gs: list[list[BidMessage]],
    ledger: Ledger,
    num_sc: int,
) -> PriceTable:
    """Turn bid ratios into per-subcarrier prices.

    A message committing ratio b to a block of length l offers b / l times
    the sender's current balance on every covered subcarrier. Messages
    reaching outside the subcarrier range are dropped and counted.
    """
    num_gs = len(messages_by_gs)
    prices = np.zeros((num_gs, num_sc))
    has_bid = np.zeros((num_gs, num_sc), dtype=bool)
    discarded = 0
    for gs, messages in enumerate(messages_by_gs):
        balance = ledger.balances[gs]
        for message in messages:
            start = message.start_sc
            stop = start + message.length
            if start < 0 or stop > num_sc:
                log.warning(
                    "discarding bid from GS %d covering [%d, %d) outside %d subcarriers",
                    gs, start, stop, num_sc,
                )
                discarded += 1
                continue
            per_sc = message.ratio / message.length * balance
            block = slice(start, stop)
            # overlapping messages from one sender keep the best offer
            prices[gs, block] = np.maximum(prices[gs, block], per_sc)
            has_bid[gs, block] = True
    return PriceTable(prices=prices, has_bid=has_bid, discarded=discarded)


def _win_counts(allocation: AllocationMap, num_gs: int) -> np.ndarray:
    sold = allocation.winner[allocation.winner >= 0]
    return np.bincount(sold, minlength=num_gs)


def allocate_round(
    table: PriceTable,
    allocation: AllocationMap,
    ledger: Ledger,
    policy: AuctionPolicy,
    round_no: int,
) -> tuple[AllocationMap, Ledger, np.ndarray]:
    """Sell this round's contested subcarriers and charge the winners.

    Subcarriers are processed in descending order of their best offer (ties
    toward the lower index, so the cap binds deterministically). A station
    is eligible on a subcarrier when it bid a positive price there and has
    not yet reached the per-auction subcarrier cap. Ties between equal
    offers go to the lower station index.

    First-price charges the winning offer; second-price charges the best
    offer among the other eligible bidders, falling back to the winner's
    own offer when there is none. Charges never exceed the remaining
    balance, so accounts stay non-negative even after ratio quantization
    pushes a sender's committed total slightly past one.
    """
    num_gs, num_sc = table.prices.shape
    cap = policy.max_sc_per_gs if policy.max_sc_per_gs is not None else num_sc
    wins = _win_counts(allocation, num_gs)
    charges = np.zeros(num_gs)

    offered = np.where(table.has_bid, table.prices, -np.inf)
    best_offer = offered.max(axis=0) if num_gs else np.full(num_sc, -np.inf)
    candidates = (best_offer > 0) & (allocation.winner < 0)
    sc_candidates = np.flatnonzero(candidates)
    order = sc_candidates[np.lexsort((sc_candidates, -best_offer[sc_candidates]))]

    for sc in order:
        col = table.prices[:, sc]
        eligible = table.has_bid[:, sc] & (col > 0) & (wins < cap)
        if not eligible.any():
            continue
        masked = np.where(eligible, col, -np.inf)
        winner = int(np.argmax(masked))
        if policy.pricing == "second":
            rivals = masked.copy()
            rivals[winner] = -np.inf
            best_rival = rivals.max()
            charge = best_rival if np.isfinite(best_rival) else col[winner]
        else:
            charge = col[winner]
        charge = min(float(charge), float(ledger.balances[winner]))
        allocation.winner[sc] = winner
        allocation.deal_price[sc] = charge
        allocation.winning_round[sc] = round_no
        ledger.balances[winner] -= charge
        charges[winner] += charge
        wins[winner] += 1
    return allocation, ledger, charges


def check_demands(won_capacity: np.ndarray, demands: np.ndarray) -> np.ndarray:
    """True per station once its accumulated won capacity covers its demand."""
    return np.asarray(won_capacity) >= np.asarray(demands)


@dataclass
class AuctionOutcome:
    allocation: AllocationMap
    per_gs_won_capacity: np.ndarray
    bid_records: list[BidRecord]
    overhead_bits: np.ndarray
    rounds_executed: int
    funded_balances: np.ndarray = field(default=None)  # type: ignore[assignment]
    final_balances: np.ndarray = field(default=None)   # type: ignore[assignment]
    charges: np.ndarray = field(default=None)          # type: ignore[assignment]
    discarded_messages: int = 0


def run_auction(grid: CapacityGrid, ledger: Ledger, policy: AuctionPolicy) -> AuctionOutcome:
    """One complete auction over a fixed capacity grid.

    Rounds run until every station is satisfied, a round draws no bids, or
    ``policy.max_rounds`` is reached. Satisfied stations stop bidding; sold
    subcarriers leave the market. Bids cross the wire format on their way
    in, so prices are computed from the quantized ratios the satellite
    actually receives.
    """
    num_gs, num_sc = grid.num_gs, grid.num_sc
    ledger = fund_accounts(ledger)
    funded = ledger.balances.copy()

    demands = policy.demands
    if demands is None:
        demands = np.full(num_gs, np.inf)
    demands = np.asarray(demands, dtype=float)
    if demands.shape != (num_gs,):
        raise ValueError("demands must have one entry per ground station")

    allocation = AllocationMap.empty(num_sc)
    availability = np.ones(num_sc, dtype=bool)
    won_capacity = np.zeros(num_gs)
    satisfied = check_demands(won_capacity, demands)
    records: list[BidRecord] = []
    message_counts = np.zeros(num_gs, dtype=int)
    charges_total = np.zeros(num_gs)
    discarded_total = 0
    rounds_executed = 0

    for round_no in range(1, policy.max_rounds + 1):
        if satisfied.all() or not availability.any():
            break
        messages_by_gs: list[list[BidMessage]] = []
        for gs in range(num_gs):
            if satisfied[gs]:
                messages_by_gs.append([])
                continue
            messages = build_bids(
                grid.capacities[gs], grid.snr[gs], availability, policy.max_bid_count
            )
            if policy.use_wire_format:
                messages = [wire_roundtrip(m) for m in messages]
            messages_by_gs.append(messages)
        total_messages = sum(len(m) for m in messages_by_gs)
        if total_messages == 0:
            break
        rounds_executed = round_no
        for gs, messages in enumerate(messages_by_gs):
            message_counts[gs] += len(messages)
            records.extend(BidRecord(gs=gs, round=round_no, message=m) for m in messages)

        table = price_bids(messages_by_gs, ledger, num_sc)
        discarded_total += table.discarded
        allocation, ledger, charges = allocate_round(
            table, allocation, ledger, policy, round_no
        )
        charges_total += charges

        sold_now = np.flatnonzero(allocation.winning_round == round_no)
        if sold_now.size:
            winners = allocation.winner[sold_now]
            np.add.at(won_capacity, winners, grid.capacities[winners, sold_now])
            availability[sold_now] = False
        satisfied = check_demands(won_capacity, demands)
        if sold_now.size == 0:
            # stalemate: the same bids would just repeat next round
            break

    return AuctionOutcome(
        allocation=allocation,
        per_gs_won_capacity=won_capacity,
        bid_records=records,
        overhead_bits=message_counts * MESSAGE_BITS,
        rounds_executed=rounds_executed,
        funded_balances=funded,
        final_balances=ledger.balances.copy(),
        charges=charges_total,
        discarded_messages=discarded_total,
    )
