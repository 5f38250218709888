from fractions import Fraction
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from corrcache.bounds import load_coefficient
from corrcache.gf2 import Gf2Matrix, gf2_rank
from corrcache.model import ModelError, instance_at_t, new_instance
from corrcache.placement import man_placement, subblock_universe
from corrcache.scheme import Transmission, build_delivery
from corrcache.verify import (
    decode_check,
    measured_load,
    sweep_instance,
    sweep_verify,
    theorem2_case,
    user_knowledge_matrix,
    verify_demand,
)

EX = new_instance(3, 5, Fraction(3, 5), 2)
D = (1, 2, 3, 1, 2)


def brute_span(rows):
    span = set()
    for n in range(len(rows) + 1):
        for subset in combinations(rows, n):
            v = 0
            for r in subset:
                v ^= r
            span.add(v)
    return span


@given(st.integers(1, 10).flatmap(lambda w: st.tuples(st.just(w), st.lists(st.integers(0, 2**w - 1), max_size=12))))
def test_oracle_matches_subset_enumeration(case):
    width, rows = case
    m = Gf2Matrix(range(width))
    for r in rows:
        m.add_row(r)
    span = brute_span(rows)
    for c in range(width):
        assert m.knows(c) == ((1 << c) in span)
    assert 2 ** m.rank == len(span) == 2 ** gf2_rank(rows)


@pytest.mark.parametrize("d", list(product(range(1, 4), repeat=3)))
def test_oracle_matches_enumeration_on_scheme(d):
    inst = instance_at_t(3, 3, 2, 1)
    cache = man_placement(inst)
    tx = build_delivery(inst, d)
    report = decode_check(inst, d, cache, tx)
    for k in range(1, 4):
        m = user_knowledge_matrix(k, cache, tx)
        rows = [m.vector([sb]) for sb in cache.per_user[k]] + [m.vector(t) for t in tx.term_sets()]
        assert len(rows) <= 12
        span = brute_span(rows)
        expected = {sb for sb in report.per_user[k].desired if m.vector([sb]) in span}
        assert report.per_user[k].recovered == expected


def test_vector_rejects_unknown_symbol():
    with pytest.raises(ValueError):
        Gf2Matrix(["a", "b"]).vector(["c"])


def test_worked_example_decodes():
    cache = man_placement(EX)
    tx = build_delivery(EX, D)
    report = decode_check(EX, D, cache, tx)
    assert report.all_decodable
    for k in range(1, 6):
        out = report.per_user[k]
        assert len(out.desired) == EX.file_size_units == 20
        assert out.recovered | out.missing == out.desired
    m = user_knowledge_matrix(1, cache, tx)
    assert m.rank == 12 + 15


def test_dropping_any_row_breaks_decoding():
    cache = man_placement(EX)
    tx = build_delivery(EX, D)
    for i in range(len(tx)):
        cut = Transmission(EX, tx.demand, tx.leaders, tx.combinations[:i] + tx.combinations[i + 1:])
        report = decode_check(EX, D, cache, cut)
        assert not report.all_decodable
        assert any(report.missing_lists().values())


def test_adding_rows_never_shrinks_recovery():
    inst = instance_at_t(3, 4, 2, 1)
    d = (1, 2, 3, 1)
    cache = man_placement(inst)
    tx = build_delivery(inst, d)
    prev = None
    for i in range(len(tx) + 1):
        part = Transmission(inst, tx.demand, tx.leaders, tx.combinations[:i])
        rec = {k: o.recovered for k, o in decode_check(inst, d, cache, part).per_user.items()}
        if prev:
            assert all(prev[k] <= rec[k] for k in rec)
        prev = rec


def test_full_cache_needs_nothing():
    inst = instance_at_t(3, 4, 2, 4)
    cache = man_placement(inst)
    tx = build_delivery(inst, (1, 2, 3, 3))
    assert len(tx) == 0
    assert decode_check(inst, (1, 2, 3, 3), cache, tx).all_decodable
    m = user_knowledge_matrix(2, cache, tx)
    assert m.rank == len(subblock_universe(inst))
    assert verify_demand(inst, (1, 2, 3, 3)).decodable


def test_zero_cache_direct_delivery():
    inst = instance_at_t(4, 3, 2, 0)
    res = verify_demand(inst, (1, 2, 1))
    assert res.decodable and res.matches_coefficient


def test_measured_load():
    assert measured_load(EX, build_delivery(EX, D)) == Fraction(3, 4)
    assert measured_load(EX, ()) == 0


def test_verify_demand_examples():
    res = verify_demand(EX, D)
    assert (res.decodable, res.load, res.matches_coefficient) == (True, Fraction(3, 4), True)
    # three-file, three-user, t = 1: five rows of 1/6 file each, 5/3 in block units
    res = verify_demand(instance_at_t(3, 3, 2, 1), (1, 2, 3))
    assert (res.decodable, res.load, res.matches_coefficient) == (True, Fraction(5, 6), True)
    assert res.load * 2 == Fraction(5, 3)
    res = verify_demand(instance_at_t(4, 3, 3, 3), (4, 1, 2))
    assert (res.decodable, res.load, res.matches_coefficient) == (True, 0, True)


def test_verify_rejects_bad_demand():
    with pytest.raises(ModelError):
        verify_demand(EX, (1, 2, 4, 1, 2))
    with pytest.raises(ModelError):
        verify_demand(EX, (1, 2))


def test_theorem2_cases():
    assert theorem2_case(5, 5, 3, 3, (1, 2, 3, 4, 5)) == (1,)
    assert theorem2_case(5, 5, 3, 3, (1, 2, 3, 4, 4)) == ()
    assert theorem2_case(3, 5, 2, 2, D) == (2, 3)
    assert theorem2_case(6, 6, 3, 3, (1, 1, 2, 2, 3, 3)) == ()


def test_sweep_small_grid():
    report = sweep_verify(range(1, 4), range(1, 4), demand_filter="all")
    assert report.records and not report.failures
    assert all(rec.passed for rec in report.records)
    for (N, K, r, t), worst in report.worst_case().items():
        assert worst == load_coefficient(N, K, r, t, min(N, K))
    csv = report.to_csv().splitlines()
    assert csv[0].startswith("N,K,r,t,demand")
    assert len(csv) == len(report.records) + 1


def test_sweep_filters():
    distinct = sweep_instance(3, 3, 2, 1, "distinct")
    assert len(distinct) == 6
    assert all(len(set(rec.demand)) == 3 for rec in distinct)
    t2 = sweep_instance(5, 5, 3, 3, "theorem2")
    assert {rec.demand for rec in t2} == {d for d in product(range(1, 6), repeat=5) if len(set(d)) == 5}


def test_sweep_outside_cases_is_reported_not_required():
    recs = sweep_instance(5, 5, 3, 3, "all")
    assert any(not rec.must_pass for rec in recs)
