"""Arthur-type decision procedures.

The two pillars are a structural fast path and an exhaustive certainty
path.  The fast path (``check_initial_hypotheses`` / ``construct_initial``)
recognizes data whose exponent bookkeeping clusters into a bottom cluster
plus singleton windows, decomposes the cluster into certificate-shaped
layers, and synthesizes a certificate directly.  The certainty path
(``is_arthur``) enumerates every good-parity parameter whose cuspidal
support matches the datum and searches the associated packets; it is
complete at desk scale because support determines the finite candidate
list exactly.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import amseg, jacquet
from .amseg import ExtMultiSegment, ExtSegment, enumerate_packet
from .repdata import (
    AParameter,
    CuspSymbol,
    GroupType,
    HalfInt,
    LanglandsDatum,
    Segment,
    SpehShape,
    TempSummand,
    TemperedParam,
    Triple,
    ZERO as H0,
    hrange,
    is_good_parity_datum,
    line_items,
    sl2_type,
    speh_grid,
    tensor_type,
    validate_datum,
)
from .results import (
    REASON_DUAL_AMBIGUOUS,
    REASON_DUAL_UNAVAILABLE,
    REASON_ORACLE_NEEDED,
    NeedsOracle,
    Vanishes,
)


# ---------------------------------------------------------------------------
# bookkeeping


@dataclass(frozen=True)
class Bookkeeping:
    """Exponent-indexed content of one rho line: segment left ends (L),
    segment right ends (R, indexed by the negated end) and tempered
    summands (T, counted with multiplicity)."""

    rho: CuspSymbol
    L: dict
    R: dict
    T: dict

    def a_size(self, x: HalfInt) -> int:
        t = self.T.get(x)
        return len(self.L.get(x, ())) + len(self.R.get(x, ())) + (t.mult if t else 0)

    def occupied(self) -> list:
        xs = set(self.L) | set(self.R) | set(self.T)
        return sorted(xs, key=lambda h: h.twice)

    def total(self) -> int:
        return sum(self.a_size(x) for x in self.occupied())


def bookkeeping(d: LanglandsDatum, rho: CuspSymbol) -> Bookkeeping:
    items = line_items(d, rho)
    return Bookkeeping(rho, dict(items.L), dict(items.R), dict(items.T))


# ---------------------------------------------------------------------------
# the structural fast path


@dataclass(frozen=True)
class WindowSpec:
    """One singleton window [b, a] carrying a certificate-shaped block."""

    b: HalfInt
    a: HalfInt
    l: int
    eta: Optional[int]  # None when 2l = b (sign immaterial)


@dataclass(frozen=True)
class LinePlan:
    rho: CuspSymbol
    a_rho: HalfInt
    base_mult: int  # tempered content at b_rho outside the layers
    base_eps: int
    layers: tuple  # ((l, eta), ...) spanning [b_rho, a_rho]
    windows: tuple  # WindowSpec, bottom-up


@dataclass(frozen=True)
class InitialWindows:
    lines: tuple  # LinePlan per rho line with content


@dataclass(frozen=True)
class Fail:
    reason: str
    detail: str = ""


@dataclass(frozen=True)
class NotArthurWitness:
    reason: str = "no sign assignment reproduces the datum"


def _runs(xs: Sequence[HalfInt]) -> List[list]:
    runs: List[list] = []
    for x in xs:
        if runs and (x - runs[-1][-1]).twice == 2:
            runs[-1].append(x)
        else:
            runs.append([x])
    return runs


def _window_template(d, bk: Bookkeeping, lo: HalfInt, hi: HalfInt) -> Optional[WindowSpec]:
    """Match the content of [lo, hi] against one block shape: l paired
    segment ends, an alternating tempered run, singleton occupancy."""
    width = (hi.twice - lo.twice) // 2 + 1
    types = []
    for x in hrange(lo, hi):
        if bk.a_size(x) != 1:
            return None
        if x in bk.L:
            types.append("L")
        elif x in bk.R:
            types.append("R")
        else:
            types.append("T")
    l = 0
    while l < len(types) and types[l] == "L":
        l += 1
    r = 0
    while r < len(types) and types[len(types) - 1 - r] == "R":
        r += 1
    if l != r or l + r > width:
        return None
    if any(t != "T" for t in types[l : width - r]):
        return None
    # paired segments [lo+j, -(hi-j)]
    for j in range(l):
        idxs = bk.L.get(lo + j, ())
        if len(idxs) != 1:
            return None
        seg = d.m[idxs[0]]
        if seg != Segment(bk.rho, lo + j, -(hi - j)):
            return None
    # alternating tempered run
    eta: Optional[int] = None
    for j, x in enumerate(hrange(lo + l, hi - r)):
        t = bk.T.get(x)
        if t is None or t.mult != 1:
            return None
        expected = t.eps if j == 0 else eta * (-1) ** j
        if j == 0:
            eta = t.eps
        elif t.eps != eta * (-1) ** j:
            return None
    return WindowSpec(lo, hi, l, eta)


def _window_splits(d, bk: Bookkeeping, run: list) -> List[list]:
    """All decompositions of a singleton run into adjacent window blocks."""
    out: List[list] = []

    def rec(start: int, acc: list):
        if start == len(run):
            out.append(list(acc))
            return
        for end in range(start, len(run)):
            w = _window_template(d, bk, run[start], run[end])
            if w is not None:
                acc.append(w)
                rec(end + 1, acc)
                acc.pop()

    rec(0, [])
    return out


def _peel_layers(d, bk: Bookkeeping, b_rho: HalfInt, a_rho: HalfInt):
    """Decompose the cluster content over [b_rho, a_rho] into block-shaped
    layers plus leftover tempered content at b_rho.

    Returns (layers, base_mult, base_eps) or None.
    """
    seg_count = Counter()
    for x, idxs in bk.L.items():
        for i in idxs:
            s = d.m[i]
            seg_count[(s.x, s.y)] += 1
    t_count = {x: t.mult for x, t in bk.T.items()}
    t_sign = {x: t.eps for x, t in bk.T.items()}
    span = (a_rho.twice - b_rho.twice) // 2 + 1

    layers: List[tuple] = []

    def above_base() -> bool:
        if any(c > 0 for c in seg_count.values()):
            return True
        return any(c > 0 for x, c in t_count.items() if x != b_rho)

    def try_peel(l: int, eta: int) -> bool:
        need_segs = [(b_rho + j, -(a_rho - j)) for j in range(l)]
        for key in need_segs:
            if seg_count.get(key, 0) < 1:
                return False
        for j, z in enumerate(hrange(b_rho + l, a_rho - l)):
            if t_count.get(z, 0) < 1:
                return False
            if t_sign[z] != (-1) ** j * eta:
                return False
        for key in need_segs:
            seg_count[key] -= 1
        for z in hrange(b_rho + l, a_rho - l):
            t_count[z] -= 1
        return True

    guard = 0
    while above_base():
        guard += 1
        if guard > bk.total() + 1:
            return None
        for l in range(span // 2, -1, -1):
            if 2 * l > span:
                continue
            if 2 * l == span:
                if try_peel(l, 1):
                    layers.append((l, 1))
                    break
            else:
                z0 = b_rho + l
                eta = t_sign.get(z0)
                if eta is not None and try_peel(l, eta):
                    layers.append((l, eta))
                    break
        else:
            return None
    base_mult = t_count.get(b_rho, 0)
    base_eps = t_sign.get(b_rho, 1) if base_mult else 1
    # nothing but tempered content may remain at the base point
    if bk.L.get(b_rho) and seg_count.get((b_rho, None), 0):
        return None
    if any(c != 0 for key, c in seg_count.items()):
        return None
    return tuple(layers), base_mult, base_eps


def line_assignments(d: LanglandsDatum, rho: CuspSymbol) -> Union[List[LinePlan], Fail]:
    """Enumerate valid (cluster, windows) assignments for one rho line."""
    bk = bookkeeping(d, rho)
    occ = bk.occupied()
    b_rho = rho.b_rho(d.group)
    if not occ:
        return [LinePlan(rho, b_rho, 0, 1, (), ())]
    if occ[0] < b_rho:
        return Fail("support-below-base", f"{rho.id} line has content below {b_rho}")
    runs = _runs(occ)
    plans: List[LinePlan] = []
    # candidate cluster tops: b_rho alone, or any prefix of the bottom run
    tops: List[HalfInt] = [b_rho]
    if runs[0][0] == b_rho:
        tops.extend(runs[0])
    for a_rho in tops:
        peeled = _peel_layers(d, bk, b_rho, a_rho)
        if peeled is None:
            continue
        layers, base_mult, base_eps = peeled
        # everything above a_rho must split into windows
        rest_positions = [x for x in occ if x > a_rho]
        ok = True
        window_sets: List[List[list]] = []
        for run in _runs(rest_positions):
            splits = _window_splits(d, bk, run)
            if not splits:
                ok = False
                break
            window_sets.append(splits)
        if not ok:
            continue
        for combo in itertools.product(*window_sets):
            windows = tuple(w for split in combo for w in split)
            plans.append(LinePlan(rho, a_rho, base_mult, base_eps, layers, windows))
    if not plans:
        return Fail(REASON_ORACLE_NEEDED, f"{rho.id} line does not cluster")
    return plans


def check_initial_hypotheses(d: LanglandsDatum) -> Union[InitialWindows, Fail]:
    """Search a window assignment consistent with the clustering, singleton
    occupancy, balance and layer-decomposition requirements."""
    if not is_good_parity_datum(d):
        return Fail("not-good-parity")
    problems = validate_datum(d)
    if problems:
        return Fail("invalid-datum", "; ".join(problems))
    lines = []
    for rho in d.rho_lines():
        plans = line_assignments(d, rho)
        if isinstance(plans, Fail):
            return plans
        lines.append(plans[0])
    return InitialWindows(tuple(lines))


def construct_initial(
    d: LanglandsDatum, w: Optional[InitialWindows] = None
) -> Union[ExtMultiSegment, NotArthurWitness, NeedsOracle]:
    """Synthesize a certificate from a window assignment and verify it by
    evaluation.  Layer blocks sit at [a_rho, b_rho], window blocks at
    [a_i, b_i], base blocks at [b_rho, b_rho]."""
    if w is None:
        w = check_initial_hypotheses(d)
        if isinstance(w, Fail):
            return NotArthurWitness(f"hypotheses fail: {w.reason}")

    per_line_plans: List[List[LinePlan]] = []
    for plan in w.lines:
        plans = line_assignments(d, plan.rho)
        if isinstance(plans, Fail):
            return NotArthurWitness(f"hypotheses fail: {plans.reason}")
        per_line_plans.append(plans)

    saw_oracle = False
    for combo in itertools.product(*per_line_plans):
        blocks: List[ExtSegment] = []
        for plan in combo:
            rho = plan.rho
            b_rho = rho.b_rho(d.group)
            for _ in range(plan.base_mult):
                blocks.append(ExtSegment(rho, b_rho, b_rho, 0, plan.base_eps))
            for l, eta in plan.layers:
                blocks.append(ExtSegment(rho, plan.a_rho, b_rho, l, eta))
            for win in plan.windows:
                eta = win.eta if win.eta is not None else 1
                blocks.append(ExtSegment(rho, win.a, win.b, win.l, eta))
        E = ExtMultiSegment.of(blocks, d.group)
        if amseg.validate(E):
            continue
        res = amseg.eval_extended(E)
        if isinstance(res, NeedsOracle):
            saw_oracle = True
            continue
        if isinstance(res, Vanishes):
            continue
        if res == d:
            return E
    if saw_oracle:
        return NeedsOracle(REASON_ORACLE_NEEDED, {"stage": "construct-initial"})
    return NotArthurWitness()


# ---------------------------------------------------------------------------
# exhaustive Arthur-type search


@dataclass(frozen=True)
class IsArthur:
    status: str  # "yes" | "no" | "unknown"
    witness: Optional[ExtMultiSegment] = None
    reason: str = ""


def _grid_counter(rho: CuspSymbol, a: int, b: int) -> Counter:
    c: Counter = Counter()
    for e in speh_grid(SpehShape(rho, a, b)):
        c[e] += rho.dim
    return c


def _line_triple_multisets(counter: Counter, rho: CuspSymbol, group: GroupType):
    """All multisets of (a, b) pairs of good parity whose grids tile the
    given exponent multiset exactly."""
    items = tuple(sorted(((x.twice, n) for x, n in counter.items() if n)))
    memo: dict = {}

    def rec(frozen) -> List[tuple]:
        if not frozen:
            return [()]
        if frozen in memo:
            return memo[frozen]
        cnt = Counter({HalfInt(t): n for t, n in frozen})
        top = max(cnt, key=lambda h: h.twice)
        results = set()
        a_plus_b = top.twice + 2  # a + b = 2*top + 2
        for a in range(1, a_plus_b):
            b = a_plus_b - a
            ty = tensor_type(rho.orth_type, sl2_type(a), sl2_type(b))
            if ty != group.dual_type:
                continue
            grid = _grid_counter(rho, a, b)
            rest = cnt.copy()
            ok = True
            for e, n in grid.items():
                if rest.get(e, 0) < n:
                    ok = False
                    break
                rest[e] -= n
            if not ok:
                continue
            rest_frozen = tuple(
                sorted((x.twice, n) for x, n in rest.items() if n)
            )
            for tail in rec(rest_frozen):
                results.add(tuple(sorted(((a, b),) + tail)))
        memo[frozen] = sorted(results)
        return memo[frozen]

    return rec(items)


def candidate_parameters(d: LanglandsDatum) -> List[AParameter]:
    """Good-parity parameters whose associated cuspidal support equals the
    datum's, in canonical order.  Finite: every grid is anchored at the
    line's top exponent."""
    support = d.support()
    rho_by_key = {}
    for rho in d.rho_lines():
        if not rho.selfdual:
            raise ValueError("candidate search requires a good-parity datum")
        rho_by_key[(rho.id, rho.id, rho.dim)] = rho
    per_line: List[List[tuple]] = []
    rhos: List[CuspSymbol] = []
    for key, counter in sorted(support.items()):
        rho = rho_by_key[key]
        # support must be symmetric under negation
        for e, n in counter.items():
            if counter.get(-e, 0) != n:
                return []
        choices = _line_triple_multisets(counter, rho, d.group)
        if not choices:
            return []
        per_line.append(choices)
        rhos.append(rho)
    out = []
    for combo in itertools.product(*per_line):
        triples = []
        for rho, pairs in zip(rhos, combo):
            triples.extend(Triple(rho, a, b) for a, b in pairs)
        out.append(AParameter.of(triples, d.group))
    out.sort(key=lambda p: tuple(t.sort_key() for t in p.triples))
    return out


def is_arthur(d: LanglandsDatum, dim_bound: int = 40) -> IsArthur:
    """Decide Arthur-type membership by exhaustive packet search over all
    support-compatible parameters."""
    problems = validate_datum(d)
    if problems:
        raise ValueError("invalid datum: " + "; ".join(problems))
    if not is_good_parity_datum(d):
        raise ValueError("is_arthur requires a good-parity datum")
    if d.dim > dim_bound:
        raise ValueError(f"dimension {d.dim} exceeds bound {dim_bound}")
    saw_oracle = False
    for psi in candidate_parameters(d):
        for entry in enumerate_packet(psi, dim_bound):
            if entry.status == "ok" and entry.datum == d:
                return IsArthur("yes", witness=entry.E)
            if entry.status == "needs-oracle":
                saw_oracle = True
    if saw_oracle:
        return IsArthur("unknown", reason=REASON_ORACLE_NEEDED)
    return IsArthur("no")


# ---------------------------------------------------------------------------
# Aubert duality through certificates


def aubert_dual(
    d: LanglandsDatum,
    witness: Optional[ExtMultiSegment] = None,
    dim_bound: int = 40,
) -> Union[LanglandsDatum, NeedsOracle]:
    """Certificate-level dual: swap the two SL2 factors of a witness
    parameter and evaluate the swapped packet.  Only certified when the
    swapped packet pins the dual down uniquely."""
    if witness is None:
        verdict = is_arthur(d, dim_bound)
        if verdict.status != "yes":
            return NeedsOracle(REASON_DUAL_UNAVAILABLE, {"is_arthur": verdict.status})
        witness = verdict.witness
    psi = amseg.psi_of(witness)
    swapped = AParameter.of(
        (Triple(t.rho, t.b, t.a, t.mult) for t in psi.triples), psi.group
    )
    entries = enumerate_packet(swapped, dim_bound)
    ok = [e for e in entries if e.status == "ok"]
    if any(e.status == "needs-oracle" for e in entries):
        return NeedsOracle(REASON_DUAL_AMBIGUOUS, {"candidates": len(ok)})
    if len(ok) == 1:
        return ok[0].datum
    return NeedsOracle(REASON_DUAL_AMBIGUOUS, {"candidates": len(ok)})


# ---------------------------------------------------------------------------
# SZ-decomposition


@dataclass(frozen=True)
class SZDecomposition:
    """Peeled normal form: bad-parity GL factor, descending segment blocks,
    ascending Zelevinsky blocks (through the dual), and the core."""

    tau_bad: tuple  # segments (negative representatives of the bad part)
    tau_minus: tuple  # (Segment, k) with left end < 0, ascending
    tau_plus: tuple  # (Segment, k): Z[-x', -y'] blocks, from the dual side
    pi0: LanglandsDatum
    pi_prime: LanglandsDatum
    pi_prime_dual: Optional[LanglandsDatum]
    chain: tuple  # formal reconstruction steps, applied left to right


def _group_with_mult(segs: Sequence[Segment]) -> List[tuple]:
    groups: List[list] = []
    for s in sorted(segs, key=lambda s: (s.x.twice, s.y.twice, s.rho.id)):
        if groups and groups[-1][0] == s:
            groups[-1][1] += 1
        else:
            groups.append([s, 1])
    return [(s, k) for s, k in groups]


def sz_decompose(
    d: LanglandsDatum, dim_bound: int = 40
) -> Union[SZDecomposition, NeedsOracle]:
    problems = validate_datum(d)
    if problems:
        raise ValueError("invalid datum: " + "; ".join(problems))

    def is_bad_segment(s: Segment) -> bool:
        if not s.rho.selfdual:
            return True
        return (s.x - s.rho.b_rho(d.group)).twice % 2 != 0

    tau_bad = [s for s in d.m if is_bad_segment(s)]
    bad_temp: List[Segment] = []
    good_temp: List[TempSummand] = []
    for t in d.tempered.summands:
        good = t.rho.selfdual and (t.z - t.rho.b_rho(d.group)).twice % 2 == 0
        if good:
            good_temp.append(t)
            continue
        if t.rho.selfdual:
            if t.mult % 2:
                raise ValueError(
                    "wrong-parity self-dual tempered summand with odd multiplicity"
                )
            bad_temp.extend([Segment(t.rho, t.z, -t.z)] * (t.mult // 2))
        else:
            if t.rho.id < t.rho.dual_id:
                bad_temp.extend([Segment(t.rho, t.z, -t.z)] * t.mult)
    tau_bad.extend(bad_temp)

    good_segs = [s for s in d.m if not is_bad_segment(s)]
    minus = [s for s in good_segs if s.x < H0]
    rest = [s for s in good_segs if s.x >= H0]
    tau_minus = _group_with_mult(minus)
    pi_prime = LanglandsDatum.of(rest, TemperedParam.of(good_temp), d.group)

    chain: List[str] = []
    partial = {
        "tau_bad": tuple(sorted(tau_bad, key=Segment.sort_key)),
        "tau_minus": tuple(tau_minus),
    }
    dual = aubert_dual(pi_prime, dim_bound=dim_bound)
    if isinstance(dual, NeedsOracle):
        return NeedsOracle(dual.reason, {"partial": partial})
    plus_raw = [s for s in dual.m if s.x <= HalfInt.of(-1)]
    dual_rest = [s for s in dual.m if s.x > HalfInt.of(-1)]
    tau_plus = _group_with_mult([Segment(s.rho, -s.x, -s.y) for s in plus_raw])
    pi0_dual = LanglandsDatum.of(dual_rest, dual.tempered, d.group)
    pi0 = aubert_dual(pi0_dual, dim_bound=dim_bound)
    if isinstance(pi0, NeedsOracle):
        return NeedsOracle(pi0.reason, {"partial": partial})

    for seg, k in reversed(tau_plus):
        chain.append(f"soc(Z[{seg.x},{seg.y}]_{seg.rho.id}^{k} x -)")
    for seg, k in reversed(tau_minus):
        chain.append(f"soc(D[{seg.x},{seg.y}]_{seg.rho.id}^{k} x -)")
    if partial["tau_bad"]:
        chain.append("soc(tau_bad x -)")

    return SZDecomposition(
        tau_bad=partial["tau_bad"],
        tau_minus=tuple(tau_minus),
        tau_plus=tuple(tau_plus),
        pi0=pi0,
        pi_prime=pi_prime,
        pi_prime_dual=dual,
        chain=tuple(chain),
    )
