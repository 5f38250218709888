"""Coded caching with correlated files: interference-alignment delivery,
converse bounds, and an exact GF(2) decoding oracle."""

from .model import (
    LeaderPermutation,
    ModelError,
    ProblemInstance,
    SubBlock,
    blocks_of_file,
    choose_leaders,
    count_demands_with_s_distinct,
    demand_distinct_count,
    enumerate_blocks,
    instance_at_t,
    new_instance,
)
from .placement import man_placement
from .scheme import build_delivery
from .bounds import (
    average_coefficient,
    baseline_round_division_load,
    converse_envelope_average,
    converse_envelope_type,
    envelope_eval,
    load_coefficient,
)
from .verify import decode_check, measured_load, sweep_verify, verify_demand

__version__ = "0.1.0"
