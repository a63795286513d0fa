"""Extended multi-segments and their evaluation to Langlands data.

An extended segment ([A,B]_rho, l, eta) is a certificate block; an ordered
collection of them with the admissible-order and sign conditions is the
certificate for one candidate member of an A-packet.  Blocks in diagonal
position (0 <= B_1 <= A_1 < B_2 <= ...) evaluate by a closed formula;
general blocks are shifted into diagonal position and pulled back down
through derivative chains.  Each chain step is applied through the
certified rule set of ``jacquet``; a step that is certified to vanish
yields Vanishes, and a step outside the certified rules yields NeedsOracle
with the step's reason code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Union

from . import jacquet
from .repdata import (
    AParameter,
    CuspSymbol,
    GroupType,
    HalfInt,
    LanglandsDatum,
    Segment,
    TempSummand,
    TemperedParam,
    Triple,
    ZERO as H0,
)
from .results import NeedsOracle, Unknown, Vanishes, Zero


# ---------------------------------------------------------------------------
# blocks


@dataclass(frozen=True)
class ExtSegment:
    """One certificate block ([A,B]_rho, l, eta)."""

    rho: CuspSymbol
    A: HalfInt
    B: HalfInt
    l: int
    eta: int

    def __post_init__(self):
        if (self.A.twice - self.B.twice) % 2 != 0:
            raise ValueError("A - B must be an integer")
        if self.eta not in (1, -1):
            raise ValueError("eta must be +-1")
        if self.l < 0:
            raise ValueError("l must be nonnegative")

    @property
    def b_len(self) -> int:
        return (self.A.twice - self.B.twice) // 2 + 1

    @property
    def a_len(self) -> int:
        return (self.A.twice + self.B.twice) // 2 + 1

    @property
    def dim(self) -> int:
        return self.a_len * self.b_len * self.rho.dim

    def sign_factor(self) -> int:
        return (-1) ** (self.b_len // 2 + self.l) * self.eta ** self.b_len

    def normalized(self) -> "ExtSegment":
        """Canonical representative: eta is immaterial when 2l = b."""
        if 2 * self.l == self.b_len and self.eta != 1:
            return ExtSegment(self.rho, self.A, self.B, self.l, 1)
        return self

    def shifted(self, t: int) -> "ExtSegment":
        return ExtSegment(self.rho, self.A + t, self.B + t, self.l, self.eta)

    def triple(self) -> Triple:
        return Triple(self.rho, self.a_len, self.b_len)

    def segments(self) -> List[Segment]:
        """The l segments [B+j, -A+j] the block contributes."""
        return [Segment(self.rho, self.B + j, -self.A + j) for j in range(self.l)]

    def tempered_summands(self) -> List[TempSummand]:
        """The tempered run z = B+l, ..., A-l with alternating signs."""
        out = []
        for j in range(self.b_len - 2 * self.l):
            z = self.B + self.l + j
            out.append(TempSummand(self.rho, z, 1, (-1) ** j * self.eta))
        return out

    def sort_key(self):
        return (self.rho.id, self.B.twice, self.A.twice, self.l, -self.eta)

    def __str__(self):
        sign = "+" if self.eta == 1 else "-"
        return f"([{self.A},{self.B}]_{self.rho.id}, l={self.l}, eta={sign})"


@dataclass(frozen=True)
class ExtMultiSegment:
    """Canonically ordered collection of blocks for a fixed group."""

    blocks: tuple
    group: GroupType

    @staticmethod
    def of(blocks: Iterable[ExtSegment], group: GroupType) -> "ExtMultiSegment":
        norm = sorted((b.normalized() for b in blocks), key=ExtSegment.sort_key)
        return ExtMultiSegment(tuple(norm), group)

    def line(self, rho: CuspSymbol) -> List[ExtSegment]:
        return [b for b in self.blocks if b.rho == rho]

    def rhos(self) -> List[CuspSymbol]:
        seen = []
        for b in self.blocks:
            if b.rho not in seen:
                seen.append(b.rho)
        return seen

    @property
    def dim(self) -> int:
        return sum(b.dim for b in self.blocks)

    def __str__(self):
        return "{" + ", ".join(str(b) for b in self.blocks) + "}"


def psi_of(E: ExtMultiSegment) -> AParameter:
    return AParameter.of((b.triple() for b in E.blocks), E.group)


# ---------------------------------------------------------------------------
# validation


def validate_blocks(blocks: Sequence[ExtSegment], group: GroupType) -> list:
    """Validate a block sequence in its *given* order; returns violations."""
    problems: list = []
    for b in blocks:
        if b.A + b.B < H0:
            problems.append(f"block {b}: A+B < 0")
        if 2 * b.l > b.b_len:
            problems.append(f"block {b}: l exceeds b/2")
        if not b.rho.selfdual:
            problems.append(f"block {b}: rho is not self-dual")
        else:
            base = b.rho.b_rho(group)
            if (b.A - base).twice % 2 != 0:
                problems.append(f"block {b}: ends off the {base} lattice")
    for i, bi in enumerate(blocks):
        for bj in blocks[i + 1 :]:
            if bi.rho != bj.rho:
                continue
            if bj.A < bi.A and bj.B < bi.B:
                problems.append(f"order violation: {bj} must precede {bi}")
            elif bj.B < bi.B < H0:
                problems.append(f"order violation: {bj} must precede {bi} (negative B)")
    sign = 1
    for b in blocks:
        sign *= b.sign_factor()
    if sign != 1:
        problems.append("sign condition fails")
    if problems:
        # structural defects can make the parameter unbuildable
        return problems
    psi = AParameter.of((b.triple() for b in blocks), group)
    if not psi.is_good_parity():
        problems.append("associated parameter is not of good parity")
    problems.extend(psi.validate())
    return problems


def validate(E: ExtMultiSegment) -> list:
    return validate_blocks(E.blocks, E.group)


def equivalent(E1: ExtMultiSegment, E2: ExtMultiSegment) -> bool:
    """Blockwise equivalence: same segments and l, with eta compared only
    when l < b/2 (normalization makes this structural)."""
    if E1.group != E2.group:
        return False
    a = ExtMultiSegment.of(E1.blocks, E1.group).blocks
    b = ExtMultiSegment.of(E2.blocks, E2.group).blocks
    return a == b


# ---------------------------------------------------------------------------
# diagonal restriction and shifts


def is_ddr(E: ExtMultiSegment) -> bool:
    """Strict non-negative diagonal restriction, per rho line:
    0 <= B_1 <= A_1 < B_2 <= A_2 < ..."""
    for rho in E.rhos():
        line = E.line(rho)
        if line and line[0].B < H0:
            return False
        for prev, nxt in zip(line, line[1:]):
            if not prev.A < nxt.B:
                return False
    return True


def _grouped(line: Sequence[ExtSegment]) -> List[list]:
    """Group consecutive identical blocks of a line: [[block, mult], ...]."""
    groups: List[list] = []
    for b in line:
        if groups and groups[-1][0] == b:
            groups[-1][1] += 1
        else:
            groups.append([b, 1])
    return groups


def _is_evaluable_ddr(E: ExtMultiSegment) -> bool:
    """Diagonal restriction up to identical twins: repeated equal blocks sit
    in place and merge by multiplicity."""
    for rho in E.rhos():
        groups = _grouped(E.line(rho))
        if groups and groups[0][0].B < H0:
            return False
        for (prev, _), (nxt, _) in zip(groups, groups[1:]):
            if not prev.A < nxt.B:
                return False
    return True


def _shift_plan(E: ExtMultiSegment) -> dict:
    """Minimal greedy shifts per line: {rho: [(block, mult, t), ...]}."""
    plan: dict = {}
    for rho in E.rhos():
        entries = []
        prev_top: Optional[HalfInt] = None
        for b, mult in _grouped(E.line(rho)):
            t = max(0, (-b.B).ceil())
            if prev_top is not None:
                gap = prev_top + 1 - b.B
                if gap > H0:
                    t = max(t, gap.ceil())
            entries.append((b, mult, t))
            prev_top = b.A + t
        plan[rho] = entries
    return plan


def choose_shifts(E: ExtMultiSegment) -> tuple:
    """Per-block nonnegative integer shifts (identical blocks share one)
    making the shifted collection evaluable-diagonal; greedy minimal in
    canonical order."""
    plan = _shift_plan(E)
    per_line = {
        rho: [t for (b, mult, t) in plan[rho] for _ in range(mult)]
        for rho in plan
    }
    cursor = {rho: 0 for rho in per_line}
    out = []
    for b in E.blocks:
        i = cursor[b.rho]
        out.append(per_line[b.rho][i])
        cursor[b.rho] = i + 1
    return tuple(out)


def shift(E: ExtMultiSegment, t: Sequence[int]) -> ExtMultiSegment:
    if len(t) != len(E.blocks):
        raise ValueError("shift vector length mismatch")
    if any(ti < 0 for ti in t):
        raise ValueError("shifts must be nonnegative")
    return ExtMultiSegment.of((b.shifted(ti) for b, ti in zip(E.blocks, t)), E.group)


# ---------------------------------------------------------------------------
# evaluation


def eval_ddr(E: ExtMultiSegment) -> LanglandsDatum:
    """Closed-form Langlands datum of a (twin-extended) diagonal E."""
    if not _is_evaluable_ddr(E):
        raise ValueError("not in (twin-extended) diagonal position")
    segments: List[Segment] = []
    summands: List[TempSummand] = []
    for b in E.blocks:
        segments.extend(b.segments())
        summands.extend(b.tempered_summands())
    try:
        temp = TemperedParam.of(summands)
    except ValueError as exc:  # pragma: no cover - impossible in this position
        raise AssertionError(f"sign collision in diagonal position: {exc}")
    return LanglandsDatum.of(segments, temp, E.group)


EvalResult = Union[LanglandsDatum, Vanishes, NeedsOracle]


def eval_extended(E: ExtMultiSegment, shifts: Optional[Sequence[int]] = None) -> EvalResult:
    """Evaluate pi(E).

    With ``shifts`` given, that vector is used instead of the minimal one
    (it must put E in evaluable-diagonal position); the result must not
    depend on the choice wherever the lowering chains stay certified.
    """
    problems = validate(E)
    if problems:
        raise ValueError("invalid extended multi-segment: " + "; ".join(problems))
    t = tuple(shifts) if shifts is not None else choose_shifts(E)
    shifted = shift(E, t)
    if not _is_evaluable_ddr(shifted):
        raise ValueError("shift vector does not reach diagonal position")
    datum = eval_ddr(shifted)

    # pull blocks back down, lowest group of each line first
    for rho in E.rhos():
        line_blocks = E.line(rho)
        line_shifts = [ti for b, ti in zip(E.blocks, t) if b.rho == rho]
        groups = _grouped(line_blocks)
        pos = 0
        for b, mult in groups:
            tg = line_shifts[pos]
            if len(set(line_shifts[pos : pos + mult])) != 1:
                raise ValueError("identical blocks must share one shift")
            pos += mult
            for s in range(tg, 0, -1):
                res = jacquet.d_chain(datum, rho, b.B + s, b.A + s, k=mult)
                if isinstance(res, Zero):
                    return Vanishes(res.reason or "chain-step-zero")
                if isinstance(res, Unknown):
                    return NeedsOracle(res.reason)
                datum = res
    assert datum.tempered.eps_product() == 1, "sign descent lost during lowering"
    return datum


# ---------------------------------------------------------------------------
# packet enumeration


@dataclass(frozen=True)
class PacketEntry:
    E: ExtMultiSegment
    status: str  # "ok" | "vanishes" | "needs-oracle"
    datum: Optional[LanglandsDatum]
    reason: str = ""


def enumerate_packet(psi: AParameter, dim_bound: int = 40) -> List[PacketEntry]:
    """All inequivalent valid certificates with parameter psi, evaluated.

    Entries are canonically ordered; equal Langlands data are reported once
    (packets are multiplicity free), keeping the first witness.
    """
    if psi.dim > dim_bound:
        raise ValueError(f"parameter dimension {psi.dim} exceeds bound {dim_bound}")
    if not psi.is_good_parity():
        raise ValueError("packet enumeration requires a good-parity parameter")
    problems = psi.validate()
    if problems:
        raise ValueError("invalid parameter: " + "; ".join(problems))

    groups: List[tuple] = []  # ((rho, A, B), mult, choices)
    for tr in psi.triples:
        A = HalfInt(tr.a + tr.b - 2)
        B = HalfInt(tr.a - tr.b)
        choices = []
        for l in range(0, tr.b // 2 + 1):
            choices.append((l, 1))
            if 2 * l != tr.b:
                choices.append((l, -1))
        groups.append(((tr.rho, A, B), tr.mult, tuple(choices)))

    per_group = [
        list(itertools.combinations_with_replacement(choices, mult))
        for (_, mult, choices) in groups
    ]
    candidates: List[ExtMultiSegment] = []
    for combo in itertools.product(*per_group):
        blocks: List[ExtSegment] = []
        for ((rho, A, B), _, _), assignment in zip(groups, combo):
            blocks.extend(ExtSegment(rho, A, B, l, eta) for l, eta in assignment)
        E = ExtMultiSegment.of(blocks, psi.group)
        sign = 1
        for b in E.blocks:
            sign *= b.sign_factor()
        if sign != 1:
            continue
        candidates.append(E)
    # normalization can still identify distinct assignments (eta is
    # immaterial at 2l = b), so deduplicate on the canonical block tuple
    seen_blocks = set()
    unique: List[ExtMultiSegment] = []
    for E in sorted(candidates, key=lambda E: tuple(b.sort_key() for b in E.blocks)):
        if E.blocks in seen_blocks:
            continue
        seen_blocks.add(E.blocks)
        unique.append(E)
    candidates = unique

    entries: List[PacketEntry] = []
    seen_data = set()
    for E in candidates:
        res = eval_extended(E)
        if isinstance(res, Vanishes):
            entries.append(PacketEntry(E, "vanishes", None, res.reason))
        elif isinstance(res, NeedsOracle):
            entries.append(PacketEntry(E, "needs-oracle", None, res.reason))
        else:
            if res in seen_data:
                continue
            seen_data.add(res)
            entries.append(PacketEntry(E, "ok", res))
    return entries
