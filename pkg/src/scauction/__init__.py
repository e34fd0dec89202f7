"""Auction-based downlink subcarrier allocation for satellite links.

Ground stations bid fractions of a funded account on blocks of subcarriers
they measure as strong; the satellite sells each subcarrier to the best
offer over a handful of rounds, gives leftovers away next to recorded bids,
and watches windowed deal prices to spot externally interfered bands.
"""

from .aftermarket import (
    DealPriceHistory,
    FreeAssignment,
    assign_unsold,
    detect_from_averages,
    detect_interference,
    detect_interference_by_sales,
    reload_power,
)
from .auctioneer import (
    AllocationMap,
    AuctionOutcome,
    AuctionPolicy,
    BidRecord,
    Ledger,
    PriceTable,
    allocate_round,
    check_demands,
    fund_accounts,
    price_bids,
    run_auction,
)
from .baselines import (
    allocation_capacities,
    capacity_limit_allocation,
    full_feedback_overhead,
    random_allocation,
)
from .bidder import (
    BidGroup,
    BidMessage,
    assign_ratios,
    build_bids,
    estimate_capacities,
    form_groups,
    select_bid_count,
)
from .channel import (
    CapacityGrid,
    ChannelRealization,
    capacity_grid,
    generate_channel,
    interference_vector,
)
from .codec import (
    MESSAGE_BITS,
    decode_bid,
    encode_bid,
    overhead_bits,
    wire_roundtrip,
)
from .config import (
    ConfigError,
    InterferenceProfile,
    ScenarioConfig,
    default_config,
    sdr_analogue_config,
)
from .harness import (
    RunResult,
    SweepPoint,
    SweepResult,
    TrialMetrics,
    export,
    power_sweep,
    run_trial,
    run_trials,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationMap",
    "AuctionOutcome",
    "AuctionPolicy",
    "BidGroup",
    "BidMessage",
    "BidRecord",
    "CapacityGrid",
    "ChannelRealization",
    "ConfigError",
    "DealPriceHistory",
    "FreeAssignment",
    "InterferenceProfile",
    "Ledger",
    "MESSAGE_BITS",
    "PriceTable",
    "RunResult",
    "ScenarioConfig",
    "SweepPoint",
    "SweepResult",
    "TrialMetrics",
    "allocate_round",
    "allocation_capacities",
    "assign_ratios",
    "assign_unsold",
    "build_bids",
    "capacity_grid",
    "capacity_limit_allocation",
    "check_demands",
    "decode_bid",
    "default_config",
    "detect_from_averages",
    "detect_interference",
    "detect_interference_by_sales",
    "encode_bid",
    "estimate_capacities",
    "export",
    "form_groups",
    "full_feedback_overhead",
    "fund_accounts",
    "generate_channel",
    "interference_vector",
    "overhead_bits",
    "power_sweep",
    "price_bids",
    "random_allocation",
    "reload_power",
    "run_auction",
    "run_trial",
    "run_trials",
    "sdr_analogue_config",
    "select_bid_count",
    "wire_roundtrip",
]
