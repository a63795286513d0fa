"""Unitarity verdicts.

In the good-parity world unitarity is equivalent to Arthur-type
membership, so the verdict delegates to the exhaustive packet search.  For
the slightly-beyond family (unitary grid factors twisted into (0, 1/2)
riding a good-parity core) the criterion is combinatorial except for one
analytic fact, the irreducibility of the untwisted induction, which is
delegated to a pluggable oracle.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import decide
from .amseg import ExtMultiSegment, eval_extended
from .repdata import (
    CuspSymbol,
    GroupType,
    HalfInt,
    LanglandsDatum,
    Segment,
    SpehShape,
    TemperedParam,
    sl2_type,
    tensor_type,
)
from .results import NeedsOracle, REASON_ORACLE_NEEDED


# ---------------------------------------------------------------------------
# good parity


def good_part(d: LanglandsDatum) -> LanglandsDatum:
    """Drop bad-parity segments and tempered summands, keeping the signs on
    what remains."""
    segs = []
    for s in d.m:
        if s.rho.selfdual and (s.x - s.rho.b_rho(d.group)).twice % 2 == 0:
            segs.append(s)
    temps = []
    for t in d.tempered.summands:
        if t.rho.selfdual and (t.z - t.rho.b_rho(d.group)).twice % 2 == 0:
            temps.append(t)
    return LanglandsDatum.of(segs, TemperedParam(tuple(temps)), d.group)


@dataclass(frozen=True)
class UnitaryVerdict:
    status: str  # "unitary" | "not-unitary" | "possibly-unitary" | "unknown"
    witness: Optional[ExtMultiSegment] = None
    reason: str = ""


def is_unitary_good_parity(d: LanglandsDatum, dim_bound: int = 40) -> UnitaryVerdict:
    """Good-parity unitarity: unitary iff of Arthur type."""
    from .repdata import is_good_parity_datum

    if not is_good_parity_datum(d):
        raise ValueError("not a good-parity datum; take good_part first")
    verdict = decide.is_arthur(d, dim_bound)
    if verdict.status == "yes":
        return UnitaryVerdict("unitary", witness=verdict.witness)
    if verdict.status == "no":
        return UnitaryVerdict("not-unitary")
    return UnitaryVerdict("unknown", reason=verdict.reason)


def unitary_necessary(d: LanglandsDatum, dim_bound: int = 40) -> UnitaryVerdict:
    """Necessary condition for general data: the good part of a unitary
    representation is of Arthur type, so a failing good part rules
    unitarity out; a passing one remains only possibly unitary."""
    g = good_part(d)
    verdict = decide.is_arthur(g, dim_bound)
    if verdict.status == "no":
        return UnitaryVerdict("not-unitary")
    if verdict.status == "yes":
        return UnitaryVerdict("possibly-unitary", witness=verdict.witness)
    return UnitaryVerdict("unknown", reason=verdict.reason)


# ---------------------------------------------------------------------------
# irreducibility oracles


IRREDUCIBLE = "irreducible"
REDUCIBLE = "reducible"
UNKNOWN = "unknown"


class IrreducibilityOracle:
    """Answer interface for ``Sp(rho,c,d) x pi0`` irreducibility questions.

    ``first_reducibility_point`` may return None when unknown; when it is
    available, irreducibility at the unitary point is equivalent to a
    strictly positive first reducibility point.
    """

    def irreducible(self, rho: CuspSymbol, c: int, d: int, pi0) -> str:
        frp = self.first_reducibility_point(rho, c, d, pi0)
        if frp is None:
            return UNKNOWN
        return IRREDUCIBLE if frp > HalfInt(0) else REDUCIBLE

    def first_reducibility_point(self, rho, c, d, pi0) -> Optional[HalfInt]:
        return None


class TableOracle(IrreducibilityOracle):
    """Fixture-backed oracle: explicit verdicts and reducibility points."""

    def __init__(self, verdicts: Optional[dict] = None, frp: Optional[dict] = None):
        self.verdicts = dict(verdicts or {})
        self.frp = dict(frp or {})

    @staticmethod
    def _key(rho: CuspSymbol, c: int, d: int, pi0):
        return (rho.id, rho.dim, c, d, _pi0_token(pi0))

    def set_verdict(self, rho, c, d, pi0, verdict: str):
        self.verdicts[self._key(rho, c, d, pi0)] = verdict

    def set_frp(self, rho, c, d, pi0, value: HalfInt):
        self.frp[self._key(rho, c, d, pi0)] = value

    def irreducible(self, rho, c, d, pi0) -> str:
        key = self._key(rho, c, d, pi0)
        if key in self.verdicts:
            return self.verdicts[key]
        if key in self.frp:
            return IRREDUCIBLE if self.frp[key] > HalfInt(0) else REDUCIBLE
        return UNKNOWN

    def first_reducibility_point(self, rho, c, d, pi0):
        return self.frp.get(self._key(rho, c, d, pi0))


def _pi0_token(pi0) -> str:
    from . import jsonio

    if isinstance(pi0, LanglandsDatum):
        return json.dumps(jsonio.encode_datum(pi0), sort_keys=True)
    if isinstance(pi0, ExtMultiSegment):
        return json.dumps(jsonio.encode_ext_multisegment(pi0), sort_keys=True)
    return str(pi0)


class SubprocessOracle(IrreducibilityOracle):
    """One JSON request per line on the child's stdin, one JSON response
    per line on its stdout."""

    def __init__(self, command: Sequence[str]):
        self.proc = subprocess.Popen(
            list(command),
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
            text=True,
            bufsize=1,
        )
        self._cache: dict = {}

    def _ask(self, payload: dict) -> dict:
        key = json.dumps(payload, sort_keys=True)
        if key in self._cache:
            return self._cache[key]
        assert self.proc.stdin and self.proc.stdout
        self.proc.stdin.write(key + "\n")
        self.proc.stdin.flush()
        line = self.proc.stdout.readline()
        if not line:
            raise RuntimeError("oracle subprocess closed its stream")
        out = json.loads(line)
        self._cache[key] = out
        return out

    def irreducible(self, rho, c, d, pi0) -> str:
        from . import jsonio

        reply = self._ask(
            {
                "op": "irreducible",
                "rho": jsonio.encode_cusp(rho),
                "c": c,
                "d": d,
                "pi0": _pi0_token(pi0),
            }
        )
        return reply.get("result", UNKNOWN)

    def first_reducibility_point(self, rho, c, d, pi0):
        from . import jsonio

        reply = self._ask(
            {
                "op": "frp",
                "rho": jsonio.encode_cusp(rho),
                "c": c,
                "d": d,
                "pi0": _pi0_token(pi0),
            }
        )
        if "frp" not in reply or reply["frp"] is None:
            return None
        return HalfInt.parse(reply["frp"])

    def close(self):
        if self.proc.stdin:
            self.proc.stdin.close()
        self.proc.wait(timeout=5)


# ---------------------------------------------------------------------------
# the slightly-beyond criterion


@dataclass(frozen=True)
class BeyondFactor:
    rho: CuspSymbol
    c: int
    d: int
    x: Fraction

    def __post_init__(self):
        if self.c < 1 or self.d < 1:
            raise ValueError("c, d must be positive")
        if not (Fraction(0) <= self.x < Fraction(1, 2)):
            raise ValueError("exponent must lie in [0, 1/2)")


@dataclass(frozen=True)
class BeyondDatum:
    """pi = X_i Sp(rho_i, c_i, d_i)|.|^{x_i} x pi0, asserted irreducible,
    with pi0 of Arthur type and good parity."""

    pi0: Union[LanglandsDatum, ExtMultiSegment]
    factors: tuple
    irreducible_input: str = "asserted"  # or "oracle-checked"
    group: Optional[GroupType] = None

    def core_group(self) -> GroupType:
        if isinstance(self.pi0, LanglandsDatum):
            return self.pi0.group
        return self.pi0.group

    def validate(self) -> list:
        problems = []
        g = self.core_group()
        for f in self.factors:
            if f.x == 0:
                if f.rho.selfdual:
                    ty = tensor_type(f.rho.orth_type, sl2_type(f.c), sl2_type(f.d))
                    if ty == g.dual_type:
                        problems.append(
                            f"factor ({f.rho.id},{f.c},{f.d}) at x=0 is self-dual of"
                            " the parameter's type"
                        )
        return problems


@dataclass(frozen=True)
class GroupReport:
    rho_id: str
    dual_id: str
    c: int
    d: int
    condition: str  # "pairing" | "odd-multiplicity"
    status: str  # "pass" | "fail" | "unknown"
    detail: str = ""


@dataclass(frozen=True)
class WeakReport:
    status: str  # "unitary" | "not-unitary" | "unknown"
    groups: tuple


def weak_check(b: BeyondDatum, oracle: Optional[IrreducibilityOracle] = None) -> WeakReport:
    """Unitarity criterion for the slightly-beyond family.

    For non-self-dual rho the nonzero twists on the (rho, c, d) factors must
    match those on (rho-dual, c, d) as multisets; for self-dual rho with an
    odd number of factors the untwisted induction Sp(rho,c,d) x pi0 must be
    irreducible (oracle).  Unitary iff every condition holds.
    """
    problems = b.validate()
    if problems:
        raise ValueError("; ".join(problems))
    oracle = oracle or IrreducibilityOracle()

    groups: Dict[tuple, List[BeyondFactor]] = {}
    for f in b.factors:
        groups.setdefault((f.rho, f.c, f.d), []).append(f)

    reports: List[GroupReport] = []
    any_fail = False
    any_unknown = False
    seen_pairs = set()
    for (rho, c, d), fs in sorted(
        groups.items(), key=lambda kv: (kv[0][0].id, kv[0][1], kv[0][2])
    ):
        if not rho.selfdual:
            pair = tuple(sorted([rho.id, rho.dual_id])) + (c, d)
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            mine = sorted(f.x for f in fs if f.x != 0)
            theirs = sorted(
                f.x for f in groups.get((rho.dual(), c, d), ()) if f.x != 0
            )
            ok = mine == theirs
            reports.append(
                GroupReport(
                    rho.id,
                    rho.dual_id,
                    c,
                    d,
                    "pairing",
                    "pass" if ok else "fail",
                    detail=f"{[str(x) for x in mine]} vs {[str(x) for x in theirs]}",
                )
            )
            if not ok:
                any_fail = True
        else:
            if len(fs) % 2 == 1:
                answer = oracle.irreducible(rho, c, d, b.pi0)
                status = {
                    IRREDUCIBLE: "pass",
                    REDUCIBLE: "fail",
                    UNKNOWN: "unknown",
                }[answer]
                reports.append(
                    GroupReport(
                        rho.id, rho.id, c, d, "odd-multiplicity", status,
                        detail=f"induction {answer}",
                    )
                )
                if status == "fail":
                    any_fail = True
                elif status == "unknown":
                    any_unknown = True
    if any_fail:
        return WeakReport("not-unitary", tuple(reports))
    if any_unknown:
        return WeakReport("unknown", tuple(reports))
    return WeakReport("unitary", tuple(reports))
