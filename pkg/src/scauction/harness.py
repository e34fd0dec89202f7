"""Experiment driver: repeated auctions over fresh channel draws, baseline
comparisons, the transmit-power sweep, and deterministic CSV/JSON exports
that downstream tooling consumes."""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, replace

import numpy as np

from .aftermarket import (
    DealPriceHistory,
    assign_unsold,
    detect_interference,
    detect_interference_by_sales,
)
from .auctioneer import AuctionPolicy, Ledger, run_auction
from .baselines import (
    allocation_capacities,
    capacity_limit_allocation,
    full_feedback_overhead,
    random_allocation,
)
from .channel import capacity_grid, generate_channel, interference_vector
from .config import ScenarioConfig

# keeps the random-baseline RNG streams disjoint from the channel streams
_RANDOM_BASELINE_SEED_OFFSET = 10**9


@dataclass
class TrialMetrics:
    """Everything recorded about one auction epoch."""

    trial: int
    auction_bps: np.ndarray
    random_bps: np.ndarray
    limit_bps: np.ndarray
    overhead_bits: np.ndarray
    rounds_executed: int
    winner: np.ndarray
    deal_price: np.ndarray
    winning_round: np.ndarray


@dataclass
class RunResult:
    config: ScenarioConfig
    trials: list[TrialMetrics]
    history: DealPriceHistory
    flagged_by_price: np.ndarray | None = None
    flagged_by_sales: np.ndarray | None = None

    def interfered_indices(self) -> np.ndarray:
        mask = interference_vector(self.config) > 0
        return np.flatnonzero(mask)

    def summary(self) -> dict:
        cfg = self.config
        out: dict = {
            "trials": len(self.trials),
            "num_gs": cfg.num_gs,
            "num_sc": cfg.num_sc,
            "pricing_policy": cfg.pricing_policy,
        }
        if not self.trials:
            return out
        auction = np.array([t.auction_bps.sum() for t in self.trials])
        rand = np.array([t.random_bps.sum() for t in self.trials])
        limit = np.array([t.limit_bps.sum() for t in self.trials])
        more_even = sum(
            1
            for t in self.trials
            if np.std(t.auction_bps) < np.std(t.limit_bps)
        )
        out.update(
            {
                "auction_total_bps_mean": float(auction.mean()),
                "random_total_bps_mean": float(rand.mean()),
                "limit_total_bps_mean": float(limit.mean()),
                "capacity_ratio_vs_random": float(auction.mean() / rand.mean()),
                "capacity_fraction_of_limit": float(auction.mean() / limit.mean()),
                "fairness_auction_more_even_trials": int(more_even),
                "mean_overhead_bits_per_station": float(
                    np.mean([t.overhead_bits.mean() for t in self.trials])
                ),
                "full_feedback_bits_per_station": full_feedback_overhead(cfg.num_sc),
                "mean_rounds_executed": float(
                    np.mean([t.rounds_executed for t in self.trials])
                ),
            }
        )
        if self.flagged_by_price is not None:
            band = self.interfered_indices()
            flagged = self.flagged_by_price
            band_set = set(band.tolist())
            hits = sum(1 for s in flagged.tolist() if s in band_set)
            clean = cfg.num_sc - band.size
            out["detection"] = {
                "window": self.history.window,
                "threshold_fraction": cfg.detector_threshold_fraction,
                "flagged_by_price": [int(s) for s in flagged],
                "flagged_by_sales": [int(s) for s in self.flagged_by_sales]
                if self.flagged_by_sales is not None
                else [],
                "true_interfered": [int(s) for s in band],
                "true_positive_rate": float(hits / band.size) if band.size else None,
                "false_positive_rate": float((flagged.size - hits) / clean)
                if clean
                else None,
            }
        return out


def run_trial(
    config: ScenarioConfig, trial: int, ledger: Ledger
) -> tuple[TrialMetrics, Ledger]:
    """One auction epoch: fresh channel, full auction, aftermarket, and both
    baselines on the same grid. Returns the metrics and the ledger to carry
    into the next epoch (relevant only with rollover)."""
    seed = config.base_seed + trial
    realization = generate_channel(config, seed)
    grid = capacity_grid(realization, config.tx_power_linear, config.sc_bandwidth_hz)

    policy = AuctionPolicy(
        pricing=config.pricing_policy,
        max_rounds=config.max_rounds,
        max_sc_per_gs=config.max_sc_per_gs,
        max_bid_count=config.max_bid_count,
        demands=config.demand_vector(),
    )
    outcome = run_auction(grid, ledger, policy)

    winner = outcome.allocation.winner.copy()
    for fa in assign_unsold(outcome.allocation, outcome.bid_records, config.adjacency_radius):
        winner[fa.sc] = fa.gs

    metrics = TrialMetrics(
        trial=trial,
        auction_bps=allocation_capacities(winner, grid),
        random_bps=allocation_capacities(
            random_allocation(
                config.num_gs,
                config.num_sc,
                seed + _RANDOM_BASELINE_SEED_OFFSET,
            ),
            grid,
        ),
        limit_bps=allocation_capacities(capacity_limit_allocation(grid), grid),
        overhead_bits=outcome.overhead_bits,
        rounds_executed=outcome.rounds_executed,
        winner=winner,
        deal_price=outcome.allocation.deal_price.copy(),
        winning_round=outcome.allocation.winning_round.copy(),
    )
    next_ledger = Ledger(
        balances=outcome.final_balances,
        budgets=config.budget_vector(),
        rollover=config.rollover,
    )
    return metrics, next_ledger


def run_trials(config: ScenarioConfig) -> RunResult:
    """Run the configured number of auction epochs and, once the price
    history window fills, both interference detectors."""
    history = DealPriceHistory(config.num_sc, config.detector_window)
    ledger = Ledger.fresh(config.budget_vector(), rollover=config.rollover)
    trials: list[TrialMetrics] = []
    for t in range(config.trials):
        metrics, ledger = run_trial(config, t, ledger)
        history.observe(metrics.deal_price, metrics.winning_round > 0)
        trials.append(metrics)
    result = RunResult(config=config, trials=trials, history=history)
    if history.full:
        result.flagged_by_price = detect_interference(
            history, config.detector_threshold_fraction
        )
        result.flagged_by_sales = detect_interference_by_sales(history)
    return result


@dataclass
class SweepPoint:
    tx_power_db: float
    auction_total_bps: float
    random_total_bps: float
    limit_total_bps: float
    power_offset_db: float = float("nan")


@dataclass
class SweepResult:
    config: ScenarioConfig
    points: list[SweepPoint]
    gap_db: float

    def as_rows(self) -> list[SweepPoint]:
        return self.points


def power_sweep(config: ScenarioConfig) -> SweepResult:
    """Mean total capacity of auction and baselines across the transmit
    power grid, plus the horizontal gap between the auction and random
    curves.

    The gap at one power level is how many extra dB the random allocator
    needs to match the auction's capacity there, read off the random curve
    by interpolation. Levels where the auction sits above the top of the
    random curve (or below its bottom) contribute nothing; the headline
    number is the mean over the levels that interpolate, NaN if none do.
    """
    points: list[SweepPoint] = []
    for power_db in config.tx_power_db_grid:
        cfg = replace(config, tx_power_db=float(power_db))
        result = run_trials(cfg)
        auction = float(np.mean([t.auction_bps.sum() for t in result.trials]))
        rand = float(np.mean([t.random_bps.sum() for t in result.trials]))
        limit = float(np.mean([t.limit_bps.sum() for t in result.trials]))
        points.append(
            SweepPoint(
                tx_power_db=float(power_db),
                auction_total_bps=auction,
                random_total_bps=rand,
                limit_total_bps=limit,
            )
        )

    powers = np.array([p.tx_power_db for p in points])
    rand_curve = np.array([p.random_total_bps for p in points])
    offsets = []
    for p in points:
        y = p.auction_total_bps
        if rand_curve.min() <= y <= rand_curve.max():
            matched_power = float(np.interp(y, rand_curve, powers))
            p.power_offset_db = matched_power - p.tx_power_db
            offsets.append(p.power_offset_db)
    gap = float(np.mean(offsets)) if offsets else float("nan")
    return SweepResult(config=config, points=points, gap_db=gap)


def _fmt(value) -> str:
    if isinstance(value, float):
        if np.isnan(value):
            return ""
        return f"{value:.12g}"
    return str(value)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


CAPACITY_HEADER = ["trial", "gs", "auction_bps", "random_bps", "limit_bps"]
FAIRNESS_HEADER = [
    "trial",
    "auction_std_bps",
    "random_std_bps",
    "limit_std_bps",
    "auction_more_even_than_limit",
]
OVERHEAD_HEADER = ["trial", "gs", "auction_bits", "full_feedback_bits"]
DEAL_PRICE_HEADER = ["sc", "mean_deal_price", "sold_fraction", "interference_power"]
ALLOCATION_HEADER = ["trial", "sc", "winner", "deal_price", "winning_round"]
SWEEP_HEADER = [
    "tx_power_db",
    "auction_total_bps",
    "random_total_bps",
    "limit_total_bps",
    "power_offset_db",
]


def export(out_dir: str, run: RunResult | None = None, sweep: SweepResult | None = None) -> None:
    """Write the full export set into out_dir.

    Always writes all six CSVs plus run.json; files whose source is absent
    come out as headers only, so consumers can rely on the schema being
    present. Output is byte-identical across repeat runs of the same
    configuration.
    """
    os.makedirs(out_dir, exist_ok=True)

    capacity_rows = []
    fairness_rows = []
    overhead_rows = []
    deal_rows = []
    allocation_rows = []
    if run is not None and run.trials:
        cfg = run.config
        full_bits = full_feedback_overhead(cfg.num_sc)
        for t in run.trials:
            for gs in range(cfg.num_gs):
                capacity_rows.append(
                    (t.trial, gs, float(t.auction_bps[gs]), float(t.random_bps[gs]),
                     float(t.limit_bps[gs]))
                )
                overhead_rows.append(
                    (t.trial, gs, int(t.overhead_bits[gs]), full_bits)
                )
            fairness_rows.append(
                (
                    t.trial,
                    float(np.std(t.auction_bps)),
                    float(np.std(t.random_bps)),
                    float(np.std(t.limit_bps)),
                    int(np.std(t.auction_bps) < np.std(t.limit_bps)),
                )
            )
            for sc in range(cfg.num_sc):
                allocation_rows.append(
                    (
                        t.trial,
                        sc,
                        int(t.winner[sc]),
                        float(t.deal_price[sc]),
                        int(t.winning_round[sc]),
                    )
                )
        if run.history.full:
            averages = run.history.average_prices()
            sold = run.history.sold_fraction()
        else:
            price_sum = np.zeros(cfg.num_sc)
            sold_sum = np.zeros(cfg.num_sc)
            for t in run.trials:
                price_sum += np.where(t.winning_round > 0, t.deal_price, 0.0)
                sold_sum += (t.winning_round > 0).astype(float)
            averages = price_sum / len(run.trials)
            sold = sold_sum / len(run.trials)
        interference = interference_vector(cfg)
        for sc in range(cfg.num_sc):
            deal_rows.append(
                (sc, float(averages[sc]), float(sold[sc]), float(interference[sc]))
            )

    sweep_rows = []
    if sweep is not None:
        for p in sweep.points:
            sweep_rows.append(
                (
                    p.tx_power_db,
                    p.auction_total_bps,
                    p.random_total_bps,
                    p.limit_total_bps,
                    p.power_offset_db,
                )
            )

    _write_csv(os.path.join(out_dir, "capacity_per_gs.csv"), CAPACITY_HEADER, capacity_rows)
    _write_csv(os.path.join(out_dir, "fairness.csv"), FAIRNESS_HEADER, fairness_rows)
    _write_csv(os.path.join(out_dir, "overhead.csv"), OVERHEAD_HEADER, overhead_rows)
    _write_csv(os.path.join(out_dir, "deal_price.csv"), DEAL_PRICE_HEADER, deal_rows)
    _write_csv(os.path.join(out_dir, "allocation_map.csv"), ALLOCATION_HEADER, allocation_rows)
    _write_csv(os.path.join(out_dir, "power_sweep.csv"), SWEEP_HEADER, sweep_rows)

    payload: dict = {}
    if run is not None:
        payload["config"] = run.config.to_dict()
        payload["summary"] = run.summary()
    elif sweep is not None:
        payload["config"] = sweep.config.to_dict()
        payload["summary"] = {}
    else:
        payload["config"] = None
        payload["summary"] = {}
    if sweep is not None:
        payload["summary"]["power_gap_db"] = (
            None if np.isnan(sweep.gap_db) else float(sweep.gap_db)
        )
        payload["summary"]["power_grid_db"] = [p.tx_power_db for p in sweep.points]
    with open(os.path.join(out_dir, "run.json"), "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
