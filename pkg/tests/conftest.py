import random

import pytest
from hypothesis import strategies as st

from arthurtype.amseg import ExtMultiSegment, ExtSegment
from arthurtype.repdata import CuspSymbol, GroupType, HalfInt


ONE = CuspSymbol("1")
U = CuspSymbol("u")
V = CuspSymbol("v")
RHO_SYMP = CuspSymbol("r", orth_type="symp", dim=2)
RHO_PAIR = CuspSymbol("p", selfdual=False, dual_id="p*")


@pytest.fixture
def one():
    return ONE


def halfints(lo=-8, hi=8):
    return st.integers(min_value=2 * lo, max_value=2 * hi).map(HalfInt)


@st.composite
def raw_blocks(draw, max_A=6):
    """Arbitrary (not necessarily valid) blocks on the line of ONE."""
    group = draw(st.sampled_from(list(GroupType)))
    base = ONE.b_rho(group)
    A = base + draw(st.integers(min_value=0, max_value=max_A))
    B = A - draw(st.integers(min_value=0, max_value=max_A))
    l = draw(st.integers(min_value=0, max_value=4))
    eta = draw(st.sampled_from([1, -1]))
    return ExtSegment(ONE, A, B, l, eta), group


@st.composite
def block_lists(draw, max_blocks=6, max_A=6):
    group = draw(st.sampled_from(list(GroupType)))
    base = ONE.b_rho(group)
    n = draw(st.integers(min_value=1, max_value=max_blocks))
    blocks = []
    for _ in range(n):
        A = base + draw(st.integers(min_value=0, max_value=max_A))
        width = draw(st.integers(min_value=0, max_value=max_A))
        B = A - width
        if (A + B).twice < 0:
            B = -A
        l = draw(st.integers(min_value=0, max_value=(width + 1) // 2 + 1))
        eta = draw(st.sampled_from([1, -1]))
        blocks.append(ExtSegment(ONE, A, B, l, eta))
    return blocks, group


def random_ddr(rng: random.Random, max_blocks=3, max_width=3, group=None):
    """A random valid diagonal-position certificate on one line."""
    group = group or rng.choice(list(GroupType))
    base = ONE.b_rho(group)
    n = rng.randint(1, max_blocks)
    blocks = []
    bottom = base
    for _ in range(n):
        B = bottom + rng.randint(0, 2)
        A = B + rng.randint(0, max_width)
        b_len = (A - B).twice // 2 + 1
        l = rng.randint(0, b_len // 2)
        eta = rng.choice([1, -1])
        blocks.append(ExtSegment(ONE, A, B, l, eta))
        bottom = A + 1
    # repair the sign condition by flipping an odd-width block, or adding
    # a unit block when no flip can work
    E = ExtMultiSegment.of(blocks, group)
    sign = 1
    for b in E.blocks:
        sign *= b.sign_factor()
    if sign != 1:
        for i, b in enumerate(blocks):
            if b.b_len % 2 == 1 and 2 * b.l != b.b_len:
                blocks[i] = ExtSegment(b.rho, b.A, b.B, b.l, -b.eta)
                break
        else:
            top = blocks[-1]
            extra_B = top.A + 1
            blocks.append(ExtSegment(ONE, extra_B, extra_B, 0, -1))
    E = ExtMultiSegment.of(blocks, group)
    sign = 1
    for b in E.blocks:
        sign *= b.sign_factor()
    if sign != 1:
        return None
    return E
