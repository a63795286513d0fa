import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arthurtype import amseg
from arthurtype.amseg import (
    ExtMultiSegment,
    ExtSegment,
    choose_shifts,
    enumerate_packet,
    equivalent,
    eval_ddr,
    eval_extended,
    is_ddr,
    psi_of,
    shift,
    validate,
    validate_blocks,
)
from arthurtype.repdata import (
    AParameter,
    CuspSymbol,
    GroupType,
    HalfInt,
    Segment,
    Triple,
    validate_datum,
)
from arthurtype.results import NeedsOracle, Vanishes

from conftest import ONE, U, block_lists, random_ddr

H = HalfInt.parse


def blk(A, B, l, eta, rho=ONE):
    return ExtSegment(rho, H(A), H(B), l, eta)


def E_of(blocks, group=GroupType.SP):
    return ExtMultiSegment.of(blocks, group)


# ---------------------------------------------------------------------------
# validation and the sign condition


def test_sign_condition_single_block():
    assert validate(E_of([blk(4, 0, 0, 1)])) == []
    problems = validate(E_of([blk(4, 0, 0, -1)]))
    assert any("sign" in p for p in problems)


def test_order_violation_detected():
    # same-rho blocks with both ends larger must come later
    bad = [blk(3, 2, 0, 1), blk(1, 0, 0, 1)]
    problems = validate_blocks(bad, GroupType.SP)
    assert any("order" in p for p in problems)
    good = [blk(1, 0, 0, 1), blk(3, 2, 0, 1)]
    assert not any("order" in p for p in validate_blocks(good, GroupType.SP))


def test_l_bound_checked():
    problems = validate(E_of([blk(4, 0, 3, 1)]))
    assert any("l exceeds" in p for p in problems)


def test_negative_a_plus_b_rejected():
    problems = validate_blocks([blk(1, -2, 0, 1)], GroupType.SP)
    assert any("A+B" in p for p in problems)


@settings(max_examples=500, deadline=None)
@given(block_lists())
def test_validator_agrees_with_brute_force(data):
    blocks, group = data
    problems = validate_blocks(blocks, group)
    # independent re-evaluation of the definitions
    brute_ok = True
    for b in blocks:
        width = (b.A - b.B).twice // 2
        if (b.A + b.B).twice < 0 or 2 * b.l > width + 1:
            brute_ok = False
        base = b.rho.b_rho(group)
        if (b.A - base).twice % 2 != 0:
            brute_ok = False
    sign = 1
    for b in blocks:
        bl = (b.A - b.B).twice // 2 + 1
        sign *= (-1) ** (bl // 2 + b.l) * b.eta**bl
    if sign != 1:
        brute_ok = False
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            bi, bj = blocks[i], blocks[j]
            if bi.rho != bj.rho:
                continue
            if bj.A < bi.A and bj.B < bi.B:
                brute_ok = False
            if bj.B < bi.B < HalfInt(0):
                brute_ok = False
    total = sum(b.dim for b in blocks)
    if total % 2 != group.dim_parity:
        brute_ok = False
    assert (problems == []) == brute_ok or (problems != []) == (not brute_ok)


# ---------------------------------------------------------------------------
# parameter map


def test_psi_of_block_dimensions():
    psi = psi_of(E_of([blk(4, 0, 0, 1)]))
    assert psi.triples == (Triple(ONE, 5, 5),)
    assert psi.dim == 25

    psi2 = psi_of(
        E_of([blk("1/2", "1/2", 0, 1), blk("1/2", "1/2", 0, 1)], GroupType.SO_ODD)
    )
    assert psi2.triples == (Triple(ONE, 2, 1, 2),)

    assert psi_of(E_of([], GroupType.SO_ODD)).triples == ()


# ---------------------------------------------------------------------------
# diagonal position and shifts


def test_is_ddr_examples():
    assert is_ddr(E_of([blk(1, 0, 0, 1), blk(3, 2, 0, -1)], GroupType.SP))
    assert not is_ddr(E_of([blk(1, 0, 0, 1), blk(2, 1, 0, -1)], GroupType.SP))
    assert not is_ddr(E_of([blk(1, -1, 0, -1)], GroupType.SP))


def test_choose_shifts_examples():
    E = E_of([blk(1, 0, 0, 1), blk(3, 2, 0, -1)])
    assert choose_shifts(E) == (0, 0)
    E2 = E_of([blk(1, 0, 0, 1), blk(2, 1, 0, -1)])
    assert choose_shifts(E2) == (0, 1)
    E3 = E_of([blk(1, -1, 0, -1)])
    assert choose_shifts(E3) == (1,)
    # identical twins stay in place and share a shift
    E4 = E_of([blk("1/2", "1/2", 0, 1), blk("1/2", "1/2", 0, 1)], GroupType.SO_ODD)
    assert choose_shifts(E4) == (0, 0)


# ---------------------------------------------------------------------------
# diagonal evaluation: the closed formulas


def test_eval_ddr_tempered_alternation():
    d = eval_ddr(E_of([blk(4, 0, 0, 1)]))
    assert d.m == ()
    assert [(t.z.twice // 2, t.eps) for t in d.tempered.summands] == [
        (0, 1),
        (1, -1),
        (2, 1),
        (3, -1),
        (4, 1),
    ]


def test_eval_ddr_l2_block():
    d = eval_ddr(E_of([blk(4, 0, 2, 1)]))
    assert [str(s) for s in d.m] == ["[0,-4]_1", "[1,-3]_1"]
    assert [(t.z.twice // 2, t.eps) for t in d.tempered.summands] == [(2, 1)]
    assert d.dim == 25


def test_eval_ddr_twins_merge():
    d = eval_ddr(
        E_of([blk("1/2", "1/2", 0, 1), blk("1/2", "1/2", 0, 1)], GroupType.SO_ODD)
    )
    assert d.m == ()
    assert [(str(t.z), t.mult, t.eps) for t in d.tempered.summands] == [("1/2", 2, 1)]


def test_eval_ddr_rejects_non_diagonal():
    with pytest.raises(ValueError):
        eval_ddr(E_of([blk(1, 0, 0, 1), blk(2, 1, 0, -1)]))


def test_eval_ddr_segments_have_negative_centers():
    rng = random.Random(7)
    for _ in range(200):
        E = random_ddr(rng)
        if E is None or validate(E):
            continue
        d = eval_ddr(E)
        assert validate_datum(d) == []


# ---------------------------------------------------------------------------
# general evaluation


def test_eval_matches_ddr_when_diagonal():
    E = E_of([blk(4, 0, 1, -1)])
    assert eval_extended(E) == eval_ddr(E)


def test_eval_shift_invariance_single_block():
    E = E_of([blk(4, 0, 1, -1)])
    base = eval_ddr(E)
    for t in (1, 2, 3):
        assert eval_extended(E, shifts=(t,)) == base


def test_eval_interleaved_blocks_collision_free():
    # lowering the upper block is certified when the lower block carries
    # no tempered content in the landing window
    E = E_of(
        [blk(1, 0, 1, 1), blk(2, 1, 0, -1), ExtSegment(U, H(0), H(0), 0, -1)],
        GroupType.SP,
    )
    d = eval_extended(E)
    assert [str(s) for s in d.m] == ["[0,-1]_1"]
    assert [(t.rho.id, t.z.twice // 2, t.eps) for t in d.tempered.summands] == [
        ("1", 1, -1),
        ("1", 2, 1),
        ("u", 0, -1),
    ]


def test_eval_opposite_sign_collision_needs_oracle():
    E = E_of(
        [blk("3/2", "-3/2", 1, 1), blk("1/2", "-1/2", 0, 1)],
        GroupType.SO_ODD,
    )
    res = eval_extended(E)
    assert isinstance(res, NeedsOracle)
    assert res.reason


def test_eval_vanishing_certified():
    # ([3/2,-3/2], l=0) with eta = -1 dies at the half-point removal
    E = E_of(
        [blk("3/2", "-3/2", 0, -1), blk("5/2", "5/2", 0, -1)],
        GroupType.SO_ODD,
    )
    res = eval_extended(E)
    assert isinstance(res, Vanishes)


def test_eval_dimension_conserved_on_random_ddr_with_shifts():
    rng = random.Random(11)
    done = 0
    for _ in range(300):
        E = random_ddr(rng)
        if E is None or validate(E):
            continue
        d = eval_extended(E)
        assert d.dim == psi_of(E).dim
        done += 1
    assert done > 100


# ---------------------------------------------------------------------------
# equivalence


def test_equivalence_ignores_eta_at_half_width():
    a = E_of([blk(1, 0, 1, 1)])
    b = E_of([blk(1, 0, 1, -1)])
    assert equivalent(a, b)


def test_equivalence_respects_eta_otherwise():
    a = E_of([blk(4, 0, 2, 1)])
    b = E_of([blk(4, 0, 2, -1)])
    assert not equivalent(a, b)
    assert equivalent(a, a)


# ---------------------------------------------------------------------------
# packet enumeration


def test_packet_s5s5():
    psi = AParameter.of([Triple(ONE, 5, 5)], GroupType.SP)
    entries = enumerate_packet(psi)
    assert [(e.E.blocks[0].l, e.E.blocks[0].eta) for e in entries] == [
        (0, 1),
        (1, -1),
        (2, 1),
    ]
    assert all(e.status == "ok" for e in entries)
    first = entries[0].datum
    assert first.m == ()
    assert [(t.z.twice // 2, t.eps) for t in first.tempered.summands] == [
        (0, 1),
        (1, -1),
        (2, 1),
        (3, -1),
        (4, 1),
    ]


def test_packet_twin_pairs():
    psi = AParameter.of([Triple(ONE, 2, 1, 2)], GroupType.SO_ODD)
    entries = enumerate_packet(psi)
    assert len(entries) == 2
    etas = sorted(tuple(b.eta for b in e.E.blocks) for e in entries)
    assert etas == [(-1, -1), (1, 1)]


def test_packet_empty_parameter():
    # the rank-zero case only exists on the even-dimensional side
    psi = AParameter.of([], GroupType.SO_ODD)
    entries = enumerate_packet(psi)
    assert len(entries) == 1
    assert entries[0].datum.is_empty()


def test_packet_respects_dimension_bound():
    psi = AParameter.of([Triple(ONE, 7, 7)], GroupType.SP)
    with pytest.raises(ValueError):
        enumerate_packet(psi, dim_bound=40)


def test_packet_is_duplicate_free():
    psi = AParameter.of(
        [Triple(ONE, 2, 1), Triple(ONE, 1, 2), Triple(ONE, 2, 3)], GroupType.SO_ODD
    )
    entries = enumerate_packet(psi)
    data = [e.datum for e in entries if e.status == "ok"]
    assert len(data) == len(set(data))
