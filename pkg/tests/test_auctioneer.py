import numpy as np
import pytest

from scauction import (
    AllocationMap,
    AuctionPolicy,
    BidMessage,
    CapacityGrid,
    Ledger,
    allocate_round,
    check_demands,
    fund_accounts,
    price_bids,
    run_auction,
)


def make_grid(capacities, snr=None, sc_bandwidth_hz=1.0):
    capacities = np.asarray(capacities, dtype=float)
    if snr is None:
        snr = capacities + 0.5
    return CapacityGrid(
        snr=np.asarray(snr, dtype=float),
        capacities=capacities,
        sc_bandwidth_hz=sc_bandwidth_hz,
    )


def table_from(price_rows, bid_rows=None):
    prices = np.asarray(price_rows, dtype=float)
    if bid_rows is None:
        has_bid = prices > 0
    else:
        has_bid = np.asarray(bid_rows, dtype=bool)
    from scauction import PriceTable

    return PriceTable(prices=prices, has_bid=has_bid)


# -- fund_accounts ------------------------------------------------------------

def test_fund_reset():
    ledger = Ledger(balances=np.array([37.0]), budgets=np.array([100.0]), rollover=False)
    assert fund_accounts(ledger).balances.tolist() == [100.0]


def test_fund_rollover():
    ledger = Ledger(balances=np.array([37.0]), budgets=np.array([100.0]), rollover=True)
    assert fund_accounts(ledger).balances.tolist() == [137.0]


def test_ledger_validation():
    with pytest.raises(ValueError):
        Ledger(balances=np.array([-1.0]), budgets=np.array([1.0]))
    with pytest.raises(ValueError):
        Ledger(balances=np.array([1.0, 2.0]), budgets=np.array([1.0]))


# -- price_bids ---------------------------------------------------------------

def test_price_formula():
    ledger = Ledger.fresh(np.array([100.0]))
    ledger.balances[:] = 100.0
    table = price_bids([[BidMessage(0, 2, 0.8, 5.0)]], ledger, 4)
    assert table.prices[0, 0] == pytest.approx(40.0)
    assert table.prices[0, 1] == pytest.approx(40.0)
    assert table.prices[0, 2] == 0.0
    assert table.has_bid[0, :2].all() and not table.has_bid[0, 2:].any()


def test_price_spread_evenly():
    ledger = Ledger(balances=np.array([100.0]), budgets=np.array([100.0]))
    table = price_bids([[BidMessage(0, 4, 1.0, 5.0)]], ledger, 4)
    assert np.allclose(table.prices[0], 25.0)


def test_price_zero_balance():
    ledger = Ledger(balances=np.array([0.0]), budgets=np.array([100.0]))
    table = price_bids([[BidMessage(0, 2, 1.0, 5.0)]], ledger, 4)
    assert np.all(table.prices == 0)
    assert table.has_bid[0, 0]


def test_price_discards_out_of_range():
    ledger = Ledger(balances=np.array([100.0]), budgets=np.array([100.0]))
    table = price_bids([[BidMessage(3, 4, 1.0, 5.0)]], ledger, 4)
    assert table.discarded == 1
    assert not table.has_bid.any()


# -- allocate_round -----------------------------------------------------------

def two_bid_setup(pricing):
    table = table_from([[0.0, 40.0], [0.0, 30.0]])
    allocation = AllocationMap.empty(2)
    ledger = Ledger(balances=np.array([50.0, 50.0]), budgets=np.array([50.0, 50.0]))
    policy = AuctionPolicy(pricing=pricing, demands=None)
    return allocate_round(table, allocation, ledger, policy, round_no=1)


def test_first_price_charges_winner_bid():
    allocation, ledger, charges = two_bid_setup("first")
    assert allocation.winner[1] == 0
    assert allocation.deal_price[1] == pytest.approx(40.0)
    assert ledger.balances[0] == pytest.approx(10.0)
    assert charges.tolist() == [40.0, 0.0]


def test_second_price_charges_rival_bid():
    allocation, ledger, charges = two_bid_setup("second")
    assert allocation.winner[1] == 0
    assert allocation.deal_price[1] == pytest.approx(30.0)
    assert ledger.balances[0] == pytest.approx(20.0)


def test_second_price_single_bid_falls_back():
    table = table_from([[40.0]])
    allocation = AllocationMap.empty(1)
    ledger = Ledger(balances=np.array([100.0]), budgets=np.array([100.0]))
    policy = AuctionPolicy(pricing="second", demands=None)
    allocation, ledger, _ = allocate_round(table, allocation, ledger, policy, 1)
    assert allocation.deal_price[0] == pytest.approx(40.0)


def test_zero_price_bid_cannot_win():
    # bankrupt station bids alongside a funded one and alone on another SC
    table = table_from(
        [[0.0, 0.0], [5.0, 0.0]],
        bid_rows=[[True, True], [True, False]],
    )
    allocation = AllocationMap.empty(2)
    ledger = Ledger(balances=np.array([0.0, 10.0]), budgets=np.array([100.0, 100.0]))
    policy = AuctionPolicy(demands=None)
    allocation, _, _ = allocate_round(table, allocation, ledger, policy, 1)
    assert allocation.winner[0] == 1
    assert allocation.winner[1] == -1


def test_price_tie_goes_to_lower_station():
    table = table_from([[30.0], [30.0]])
    allocation = AllocationMap.empty(1)
    ledger = Ledger(balances=np.array([40.0, 40.0]), budgets=np.array([40.0, 40.0]))
    allocation, _, _ = allocate_round(
        table, allocation, ledger, AuctionPolicy(demands=None), 1
    )
    assert allocation.winner[0] == 0


def test_cap_binds_on_cheapest_wins():
    # one station, two bids at different prices, cap 1: the pricier SC sells
    table = table_from([[10.0, 25.0]])
    allocation = AllocationMap.empty(2)
    ledger = Ledger(balances=np.array([100.0]), budgets=np.array([100.0]))
    policy = AuctionPolicy(demands=None, max_sc_per_gs=1)
    allocation, _, _ = allocate_round(table, allocation, ledger, policy, 1)
    assert allocation.winner[1] == 0
    assert allocation.winner[0] == -1


def test_cap_passes_sc_to_next_bidder():
    # GS0 outbids everywhere but may keep only one SC; GS1 takes the other
    table = table_from([[50.0, 45.0], [20.0, 22.0]])
    allocation = AllocationMap.empty(2)
    ledger = Ledger(balances=np.array([100.0, 100.0]), budgets=np.array([100.0, 100.0]))
    policy = AuctionPolicy(demands=None, max_sc_per_gs=1)
    allocation, _, _ = allocate_round(table, allocation, ledger, policy, 1)
    assert allocation.winner[0] == 0
    assert allocation.winner[1] == 1
    assert allocation.deal_price[1] == pytest.approx(22.0)


def test_cap_counts_across_rounds():
    ledger = Ledger(balances=np.array([100.0]), budgets=np.array([100.0]))
    policy = AuctionPolicy(demands=None, max_sc_per_gs=1)
    allocation = AllocationMap.empty(2)
    allocation, ledger, _ = allocate_round(table_from([[10.0, 0.0]]), allocation, ledger, policy, 1)
    assert allocation.winner[0] == 0
    # second round: the station is already at its cap, nothing can sell
    allocation, ledger, _ = allocate_round(table_from([[0.0, 10.0]]), allocation, ledger, policy, 2)
    assert allocation.winner[1] == -1


def test_equal_prices_processed_low_sc_first():
    # cap 1 exposes the subcarrier processing order on a price tie
    table = table_from([[15.0, 15.0]])
    allocation = AllocationMap.empty(2)
    ledger = Ledger(balances=np.array([100.0]), budgets=np.array([100.0]))
    policy = AuctionPolicy(demands=None, max_sc_per_gs=1)
    allocation, _, _ = allocate_round(table, allocation, ledger, policy, 1)
    assert allocation.winner[0] == 0
    assert allocation.winner[1] == -1


def test_sold_sc_never_reassigned():
    allocation = AllocationMap.empty(1)
    allocation.winner[0] = 1
    allocation.deal_price[0] = 5.0
    allocation.winning_round[0] = 1
    table = table_from([[99.0], [0.0]])
    ledger = Ledger(balances=np.array([100.0, 100.0]), budgets=np.array([100.0, 100.0]))
    allocation, _, charges = allocate_round(
        table, allocation, ledger, AuctionPolicy(demands=None), 2
    )
    assert allocation.winner[0] == 1
    assert allocation.winning_round[0] == 1
    assert charges.sum() == 0


# -- check_demands ------------------------------------------------------------

def test_demand_checks():
    assert not check_demands(np.array([1e12]), np.array([np.inf]))[0]
    assert check_demands(np.array([12e6]), np.array([10e6]))[0]
    assert check_demands(np.array([0.0]), np.array([0.0]))[0]


# -- run_auction golden traces --------------------------------------------------

def unconstrained_policy(**kw):
    return AuctionPolicy(demands=None, max_sc_per_gs=None, **kw)


def test_single_station_flat_channel_takes_everything():
    grid = make_grid(np.full((1, 8), 3.0))
    ledger = Ledger.fresh(np.array([100.0]))
    outcome = run_auction(grid, ledger, unconstrained_policy(max_rounds=1))
    assert np.all(outcome.allocation.winner == 0)
    assert np.allclose(outcome.allocation.deal_price, 100.0 / 8)
    assert np.all(outcome.allocation.winning_round == 1)
    assert outcome.per_gs_won_capacity[0] == pytest.approx(24.0)
    assert outcome.final_balances[0] == pytest.approx(0.0)
    assert outcome.overhead_bits.tolist() == [40]
    assert outcome.rounds_executed == 1


def test_mirrored_two_station_trace():
    # hand trace: both stations keep their top three subcarriers, prices all
    # 100/3, ties on SCs 1 and 2 go to station 0; station 1 keeps SC 3
    grid = make_grid([[4.0, 3.0, 2.0, 1.0], [1.0, 2.0, 3.0, 4.0]])
    ledger = Ledger.fresh(np.array([100.0, 100.0]))
    outcome = run_auction(grid, ledger, unconstrained_policy())
    assert outcome.allocation.winner.tolist() == [0, 0, 0, 1]
    assert np.allclose(outcome.allocation.deal_price, 100.0 / 3)
    assert outcome.per_gs_won_capacity.tolist() == [9.0, 4.0]
    # the winner-takes-contested-ties outcome stays below the per-SC optimum
    limit_total = grid.capacities.max(axis=0).sum()
    assert outcome.per_gs_won_capacity.sum() == pytest.approx(13.0)
    assert outcome.per_gs_won_capacity.sum() <= limit_total
    assert outcome.rounds_executed == 1


def test_zero_budgets_sell_nothing():
    grid = make_grid([[4.0, 3.0], [3.0, 4.0]])
    ledger = Ledger.fresh(np.zeros(2))
    outcome = run_auction(grid, ledger, unconstrained_policy())
    assert np.all(outcome.allocation.winner == -1)
    assert np.all(outcome.allocation.deal_price == 0)
    # bids went out once, then the stalemate ends the auction
    assert outcome.rounds_executed == 1
    assert outcome.overhead_bits.sum() == 80


def test_zero_demand_never_bids():
    grid = make_grid(np.full((1, 4), 2.0))
    ledger = Ledger.fresh(np.array([100.0]))
    policy = AuctionPolicy(demands=np.array([0.0]), max_sc_per_gs=None)
    outcome = run_auction(grid, ledger, policy)
    assert outcome.rounds_executed == 0
    assert outcome.overhead_bits.sum() == 0
    assert np.all(outcome.allocation.winner == -1)


def test_demand_stops_bidding_once_met():
    # flat channel, demand covered by round 1, so round 2 never happens
    grid = make_grid(np.full((1, 4), 5.0))
    ledger = Ledger.fresh(np.array([100.0]))
    policy = AuctionPolicy(demands=np.array([10.0]), max_sc_per_gs=None)
    outcome = run_auction(grid, ledger, policy)
    assert outcome.rounds_executed == 1
    assert outcome.per_gs_won_capacity[0] >= 10.0


def test_multi_round_progress():
    # faded single station: later rounds pick up the leftover subcarriers
    rng = np.random.default_rng(11)
    caps = rng.uniform(0.5, 8.0, size=(1, 32))
    grid = make_grid(caps)
    ledger = Ledger.fresh(np.array([100.0]))
    outcome = run_auction(grid, ledger, unconstrained_policy(max_rounds=4))
    assert outcome.rounds_executed >= 2
    for round_no in range(1, outcome.rounds_executed):
        assert np.any(outcome.allocation.winning_round == round_no)


def test_run_auction_respects_cap():
    grid = make_grid(np.full((2, 6), 2.0))
    ledger = Ledger.fresh(np.array([100.0, 100.0]))
    policy = AuctionPolicy(demands=None, max_sc_per_gs=2)
    outcome = run_auction(grid, ledger, policy)
    wins = np.bincount(
        outcome.allocation.winner[outcome.allocation.winner >= 0], minlength=2
    )
    assert np.all(wins <= 2)


def test_policy_validation():
    with pytest.raises(ValueError):
        AuctionPolicy(pricing="third")
    with pytest.raises(ValueError):
        AuctionPolicy(max_rounds=0)


def test_demand_length_checked():
    grid = make_grid(np.full((2, 4), 1.0))
    ledger = Ledger.fresh(np.array([10.0, 10.0]))
    with pytest.raises(ValueError):
        run_auction(grid, ledger, AuctionPolicy(demands=np.array([1.0])))


# -- randomized protocol properties --------------------------------------------

def random_disjoint_messages(rng, num_sc, max_groups=3):
    """Random bid set for one station: disjoint blocks, ratios summing to 1."""
    count = int(rng.integers(0, max_groups + 1))
    if count == 0 or num_sc == 0:
        return []
    starts = np.sort(rng.choice(num_sc, size=min(count, num_sc), replace=False))
    messages = []
    weights = rng.uniform(0.1, 1.0, size=starts.size)
    weights /= weights.sum()
    for i, start in enumerate(starts):
        limit = starts[i + 1] if i + 1 < starts.size else num_sc
        length = int(rng.integers(1, max(2, limit - start + 1)))
        length = min(length, limit - start)
        if length == 0:
            continue
        messages.append(
            BidMessage(int(start), length, float(weights[i]), float(rng.uniform(-5, 40)))
        )
    return messages


def test_pricing_policy_dominance_and_optimality():
    rng = np.random.default_rng(7)
    for _ in range(300):
        num_gs = int(rng.integers(1, 5))
        num_sc = int(rng.integers(1, 13))
        messages = [random_disjoint_messages(rng, num_sc) for _ in range(num_gs)]
        balances = rng.uniform(0.0, 100.0, size=num_gs)
        balances[rng.random(num_gs) < 0.2] = 0.0
        budgets = np.full(num_gs, 100.0)
        table = price_bids(messages, Ledger(balances.copy(), budgets), num_sc)

        first_alloc, first_ledger, first_charges = allocate_round(
            table,
            AllocationMap.empty(num_sc),
            Ledger(balances.copy(), budgets),
            AuctionPolicy(pricing="first", demands=None),
            1,
        )
        second_alloc, second_ledger, second_charges = allocate_round(
            table,
            AllocationMap.empty(num_sc),
            Ledger(balances.copy(), budgets),
            AuctionPolicy(pricing="second", demands=None),
            1,
        )

        assert np.array_equal(first_alloc.winner, second_alloc.winner)
        assert np.all(second_alloc.deal_price <= first_alloc.deal_price + 1e-9)

        offered = np.where(table.has_bid, table.prices, -np.inf)
        for sc in range(num_sc):
            winner = first_alloc.winner[sc]
            if winner < 0:
                continue
            col_max = offered[:, sc].max()
            assert table.prices[winner, sc] == pytest.approx(col_max)
            assert winner == int(np.argmax(np.where(offered[:, sc] == col_max, 1, 0)))
            if np.count_nonzero(table.has_bid[:, sc] & (table.prices[:, sc] > 0)) == 1:
                assert second_alloc.deal_price[sc] == pytest.approx(
                    first_alloc.deal_price[sc]
                )

        for ledger_after, charges in (
            (first_ledger, first_charges),
            (second_ledger, second_charges),
        ):
            assert np.all(ledger_after.balances >= -1e-12)
            assert np.allclose(balances - charges, ledger_after.balances)


def test_full_auction_invariants():
    rng = np.random.default_rng(21)
    for _ in range(120):
        num_gs = int(rng.integers(1, 5))
        num_sc = int(rng.integers(1, 13))
        caps = rng.integers(0, 10, size=(num_gs, num_sc)).astype(float)
        grid = make_grid(caps)
        budgets = rng.uniform(0.0, 120.0, size=num_gs)
        max_rounds = int(rng.integers(1, 5))
        cap = None if rng.random() < 0.5 else int(rng.integers(1, num_sc + 1))
        demands = None if rng.random() < 0.5 else rng.uniform(0, caps.sum(), num_gs)
        policy = AuctionPolicy(
            pricing="first" if rng.random() < 0.5 else "second",
            max_rounds=max_rounds,
            max_sc_per_gs=cap,
            demands=demands,
        )
        outcome = run_auction(grid, Ledger.fresh(budgets), policy)
        alloc = outcome.allocation

        # accounting: funded = budgets, final = funded - charges, never negative
        assert np.allclose(outcome.funded_balances, budgets)
        assert np.allclose(
            outcome.final_balances, outcome.funded_balances - outcome.charges
        )
        assert np.all(outcome.final_balances >= -1e-12)
        assert np.all(outcome.charges <= outcome.funded_balances + 1e-9)

        # allocation sentinels agree
        sold = alloc.winner >= 0
        assert np.array_equal(sold, alloc.winning_round >= 1)
        assert np.all(alloc.deal_price[~sold] == 0)
        assert np.all(alloc.deal_price >= 0)

        # won capacity recomputes from the map
        recomputed = np.zeros(num_gs)
        for sc in np.flatnonzero(sold):
            recomputed[alloc.winner[sc]] += caps[alloc.winner[sc], sc]
        assert np.allclose(recomputed, outcome.per_gs_won_capacity)

        # cap respected
        if cap is not None:
            wins = np.bincount(alloc.winner[sold], minlength=num_gs)
            assert np.all(wins <= cap)

        # never beats assigning every SC to its best station
        assert outcome.per_gs_won_capacity.sum() <= caps.max(axis=0).sum() + 1e-9

        # termination and per-round progress
        assert outcome.rounds_executed <= max_rounds
        for round_no in range(1, outcome.rounds_executed):
            assert np.any(alloc.winning_round == round_no)

        # overhead is message count times the fixed message size
        per_gs = np.zeros(num_gs, dtype=int)
        for record in outcome.bid_records:
            per_gs[record.gs] += 1
        assert np.array_equal(outcome.overhead_bits, per_gs * 40)
