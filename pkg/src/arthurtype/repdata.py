"""Exact data model for representation data of split SO(2n+1) and Sp(2n).

All numeric quantities live in (1/2)Z and are stored as twice their value,
so arithmetic, comparisons and lattice tests are exact.  Supercuspidal
representations are purely symbolic: a label, a self-duality type and a
dimension are the only attributes any algorithm here consumes.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Iterator, Optional, Sequence


# ---------------------------------------------------------------------------
# half-integers


@total_ordering
class HalfInt:
    """An element of (1/2)Z, stored as twice its value.

    >>> HalfInt(3)          # 3/2
    HalfInt('3/2')
    >>> HalfInt.of(2) + HalfInt(1)
    HalfInt('5/2')
    """

    __slots__ = ("twice",)

    def __init__(self, twice: int):
        if not isinstance(twice, int):
            raise TypeError("twice must be an int")
        self.twice = twice

    @staticmethod
    def of(value) -> "HalfInt":
        """Coerce an int, Fraction with denominator 1 or 2, or HalfInt."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, int):
            return HalfInt(2 * value)
        if isinstance(value, Fraction):
            if value.denominator in (1, 2):
                return HalfInt(int(value * 2))
            raise ValueError(f"{value} is not a half-integer")
        raise TypeError(f"cannot coerce {value!r} to HalfInt")

    @staticmethod
    def parse(text) -> "HalfInt":
        """Parse an int or a string like '3/2', '-7/2', '4'."""
        if isinstance(text, int):
            return HalfInt(2 * text)
        s = str(text).strip()
        if "/" in s:
            num, den = s.split("/")
            if int(den) != 2:
                raise ValueError(f"bad half-integer literal: {text!r}")
            return HalfInt(int(num))
        return HalfInt(2 * int(s))

    # arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, HalfInt):
            return other
        if isinstance(other, int):
            return HalfInt(2 * other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return HalfInt(other.twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __mul__(self, other):
        if isinstance(other, int):
            return HalfInt(self.twice * other)
        return NotImplemented

    __rmul__ = __mul__

    # comparisons / hashing ---------------------------------------------------

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.twice == other.twice

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.twice < other.twice

    def __hash__(self):
        return hash(("HalfInt", self.twice))

    # conversions -------------------------------------------------------------

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def as_int(self) -> int:
        if not self.is_integer:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def ceil(self) -> int:
        return -((-self.twice) // 2)

    def __str__(self):
        if self.is_integer:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt('{self}')"


ZERO = HalfInt(0)
HALF = HalfInt(1)
ONE = HalfInt(2)


def hrange(lo: HalfInt, hi: HalfInt) -> Iterator[HalfInt]:
    """Integers-steps from lo to hi inclusive (empty if lo > hi)."""
    t = lo.twice
    while t <= hi.twice:
        yield HalfInt(t)
        t += 2


# ---------------------------------------------------------------------------
# groups and duality types


class GroupType(Enum):
    """The two families handled here, named by the split group."""

    SP = "Sp"
    SO_ODD = "SOodd"

    @property
    def dual_type(self) -> str:
        # dual of Sp(2n) is SO(2n+1), orthogonal; dual of SO(2n+1) is
        # Sp(2n), symplectic
        return "orth" if self is GroupType.SP else "symp"

    @property
    def dim_parity(self) -> int:
        """Parity of the dimension of a full parameter for this group."""
        return 1 if self is GroupType.SP else 0

    @staticmethod
    def parse(text: str) -> "GroupType":
        for g in GroupType:
            if g.value == text:
                return g
        raise ValueError(f"unknown group {text!r}")


def sl2_type(n: int) -> str:
    """Self-duality type of the n-dimensional irreducible of SL2(C)."""
    return "orth" if n % 2 == 1 else "symp"


def tensor_type(*types: str) -> str:
    """Type of a tensor product of self-dual representations."""
    flips = sum(1 for t in types if t == "symp")
    return "orth" if flips % 2 == 0 else "symp"


# ---------------------------------------------------------------------------
# cuspidal symbols


@dataclass(frozen=True, order=True)
class CuspSymbol:
    """Abstract supercuspidal label.

    Only the self-duality type, the dimension (as a Weil-group
    representation) and the label itself are ever consulted.
    """

    id: str
    selfdual: bool = True
    dual_id: Optional[str] = None
    orth_type: str = "orth"  # meaningful iff selfdual
    dim: int = 1

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be positive")
        if self.selfdual:
            if self.orth_type not in ("orth", "symp"):
                raise ValueError("orth_type must be 'orth' or 'symp'")
            if self.dual_id is not None and self.dual_id != self.id:
                raise ValueError("self-dual symbol with foreign dual_id")
        else:
            if self.dual_id is None:
                raise ValueError("non-self-dual symbol needs dual_id")
            if self.dual_id == self.id:
                raise ValueError("dual_id equal to id on non-self-dual symbol")

    def b_rho(self, group: GroupType) -> HalfInt:
        """Base point of the exponent lattice: 0 if the type of rho matches
        the dual group, 1/2 otherwise."""
        if not self.selfdual:
            raise ValueError("b_rho only defined for self-dual symbols")
        return ZERO if self.orth_type == group.dual_type else HALF

    def dual(self) -> "CuspSymbol":
        if self.selfdual:
            return self
        return CuspSymbol(
            id=self.dual_id,
            selfdual=False,
            dual_id=self.id,
            orth_type=self.orth_type,
            dim=self.dim,
        )


# ---------------------------------------------------------------------------
# segments and multisegments


@dataclass(frozen=True)
class Segment:
    """The exponent string rho|.|^x, ..., rho|.|^y with x >= y, x = y mod 1."""

    rho: CuspSymbol
    x: HalfInt
    y: HalfInt

    def __post_init__(self):
        d = self.x.twice - self.y.twice
        if d < 0 or d % 2 != 0:
            raise ValueError(f"bad segment ends [{self.x},{self.y}]")

    @property
    def length(self) -> int:
        return (self.x.twice - self.y.twice) // 2 + 1

    @property
    def gl_dim(self) -> int:
        return self.length * self.rho.dim

    @property
    def center(self) -> HalfInt:
        return HalfInt((self.x.twice + self.y.twice) // 2)

    def exponents(self) -> Iterator[HalfInt]:
        t = self.x.twice
        while t >= self.y.twice:
            yield HalfInt(t)
            t -= 2

    def shift(self, n: int) -> "Segment":
        return Segment(self.rho, self.x + n, self.y + n)

    def dual(self) -> "Segment":
        return Segment(self.rho.dual(), -self.y, -self.x)

    def contains(self, other: "Segment") -> bool:
        return (
            self.rho == other.rho
            and self.x >= other.x
            and self.y <= other.y
        )

    def linked(self, other: "Segment") -> bool:
        """True if the two segments are linked (same rho, union a segment,
        neither containing the other)."""
        if self.rho != other.rho:
            return False
        if self.contains(other) or other.contains(self):
            return False
        lo, hi = sorted([self, other], key=lambda s: s.x.twice)
        # same lattice and overlapping-or-adjacent
        if (lo.x.twice - hi.x.twice) % 2 != 0:
            return False
        return hi.y <= lo.x + 1

    def sort_key(self):
        return (self.rho.id, self.x.twice, self.y.twice, self.rho.dim)

    def __str__(self):
        return f"[{self.x},{self.y}]_{self.rho.id}"


def sort_segments(segs: Iterable[Segment]) -> tuple:
    return tuple(sorted(segs, key=Segment.sort_key))


# ---------------------------------------------------------------------------
# Speh shapes and grids


@dataclass(frozen=True)
class SpehShape:
    """The a x b exponent grid attached to rho, with k parallel copies."""

    rho: CuspSymbol
    a: int
    b: int
    k: int = 1

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.k < 1:
            raise ValueError("a, b, k must be positive")

    @property
    def A(self) -> HalfInt:
        return HalfInt(self.a + self.b - 2)

    @property
    def B(self) -> HalfInt:
        return HalfInt(self.a - self.b)

    @property
    def gl_dim(self) -> int:
        return self.a * self.b * self.rho.dim


def speh_grid(shape: SpehShape) -> list:
    """Flat exponent sequence of the grid, columns left to right, each
    column read top to bottom; entry (row r, column c) is B + c - r."""
    B = shape.B
    out = []
    for c in range(shape.b):
        for r in range(shape.a):
            out.append(B + c - r)
    return out


def speh_column_segments(shape: SpehShape) -> list:
    """The b column segments [B+c, -A+c] of the grid."""
    A, B = shape.A, shape.B
    return [Segment(shape.rho, B + c, -A + c) for c in range(shape.b)]


# ---------------------------------------------------------------------------
# tempered parameters


@dataclass(frozen=True)
class TempSummand:
    rho: CuspSymbol
    z: HalfInt
    mult: int
    eps: int

    def __post_init__(self):
        if self.z < ZERO:
            raise ValueError("tempered exponent must be >= 0")
        if self.mult < 1:
            raise ValueError("multiplicity must be positive")
        if self.eps not in (1, -1):
            raise ValueError("eps must be +-1")

    @property
    def dim(self) -> int:
        return self.mult * (self.z.twice + 1) * self.rho.dim

    def sort_key(self):
        return (self.rho.id, self.z.twice, self.rho.dim)


@dataclass(frozen=True)
class TemperedParam:
    """Multiset of summands rho x S_{2z+1} with a sign on each distinct
    summand.  Signs are stored once per distinct summand, so equal summands
    share their sign by construction."""

    summands: tuple = ()

    @staticmethod
    def of(items: Iterable) -> "TemperedParam":
        """Build from (rho, z, mult, eps) tuples or TempSummand, merging
        duplicates; conflicting signs on one summand are an error."""
        merged = {}
        for it in items:
            s = it if isinstance(it, TempSummand) else TempSummand(*it)
            key = (s.rho, s.z)
            if key in merged:
                prev = merged[key]
                if prev.eps != s.eps:
                    raise ValueError(f"conflicting signs on {s.rho.id} x S_{s.z.twice + 1}")
                merged[key] = TempSummand(s.rho, s.z, prev.mult + s.mult, s.eps)
            else:
                merged[key] = s
        return TemperedParam(tuple(sorted(merged.values(), key=TempSummand.sort_key)))

    @property
    def dim(self) -> int:
        return sum(s.dim for s in self.summands)

    def eps_product(self) -> int:
        """Value of the character on the sum of all basis elements."""
        p = 1
        for s in self.summands:
            p *= s.eps ** s.mult
        return p

    def line(self, rho: CuspSymbol) -> tuple:
        return tuple(s for s in self.summands if s.rho == rho)

    def find(self, rho: CuspSymbol, z: HalfInt) -> Optional[TempSummand]:
        for s in self.summands:
            if s.rho == rho and s.z == z:
                return s
        return None

    def is_good_parity(self, group: GroupType) -> bool:
        for s in self.summands:
            if not s.rho.selfdual:
                return False
            if (s.z - s.rho.b_rho(group)).twice % 2 != 0:
                return False
        return True


# ---------------------------------------------------------------------------
# Langlands data


@dataclass(frozen=True)
class LanglandsDatum:
    """L(m; pi(phi_0, eps)): a multisegment of negative-center segments plus
    a tempered parameter with signs.  The universal handle for irreducible
    representations in this package."""

    m: tuple
    tempered: TemperedParam
    group: GroupType

    @staticmethod
    def of(segments: Iterable[Segment], tempered, group: GroupType) -> "LanglandsDatum":
        if not isinstance(tempered, TemperedParam):
            tempered = TemperedParam.of(tempered)
        return LanglandsDatum(sort_segments(segments), tempered, group)

    @property
    def dim(self) -> int:
        return sum(2 * s.gl_dim for s in self.m) + self.tempered.dim

    def segments_on(self, rho: CuspSymbol) -> list:
        return [s for s in self.m if s.rho == rho]

    def rho_lines(self) -> list:
        seen = []
        for s in self.m:
            if s.rho not in seen:
                seen.append(s.rho)
        for s in self.tempered.summands:
            if s.rho not in seen:
                seen.append(s.rho)
        return sorted(seen, key=lambda r: (r.id, r.dim))

    def support(self) -> dict:
        """Cuspidal support, as a Counter of exponents per rho line.

        Non-self-dual lines are recorded on the pair (id, dual_id) with the
        lexicographically smaller label first and exponents dualized onto it.
        """
        out: dict = {}
        for s in self.m:
            key, flip = _line_key(s.rho)
            c = out.setdefault(key, Counter())
            for e in s.exponents():
                c[(-e if flip else e)] += s.rho.dim
            for e in s.dual().exponents():
                c[(-e if flip else e)] += s.rho.dim
        for t in self.tempered.summands:
            key, flip = _line_key(t.rho)
            c = out.setdefault(key, Counter())
            for e in hrange(-t.z, t.z):
                c[e] += t.mult * t.rho.dim
        return out

    def is_empty(self) -> bool:
        return not self.m and not self.tempered.summands


def _line_key(rho: CuspSymbol):
    if rho.selfdual:
        return (rho.id, rho.id, rho.dim), False
    a, b = sorted([rho.id, rho.dual_id])
    return (a, b, rho.dim), (rho.id != a)


def validate_datum(d: LanglandsDatum) -> list:
    """Return the list of violated invariants (empty = pass)."""
    problems = []
    for s in d.m:
        if s.center >= ZERO:
            problems.append(f"segment {s} has non-negative center")
    for s in d.m:
        if s.rho.selfdual:
            b = s.rho.b_rho(d.group)
            if (s.x - b).twice % 2 != 0:
                problems.append(f"segment {s} off the {b} lattice")
    for t in d.tempered.summands:
        if t.rho.selfdual:
            b = t.rho.b_rho(d.group)
            if (t.z - b).twice % 2 != 0:
                problems.append(
                    f"tempered summand {t.rho.id} x S_{t.z.twice + 1} off the {b} lattice"
                )
    if d.dim % 2 != d.group.dim_parity:
        problems.append(
            f"total dimension {d.dim} has wrong parity for {d.group.value}"
        )
    if d.tempered.eps_product() != 1:
        problems.append("tempered signs do not descend (eps(z) = -1)")
    return problems


def is_good_parity_datum(d: LanglandsDatum) -> bool:
    if not d.tempered.is_good_parity(d.group):
        return False
    for s in d.m:
        if not s.rho.selfdual:
            return False
        if (s.x - s.rho.b_rho(d.group)).twice % 2 != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# A-parameters


@dataclass(frozen=True)
class Triple:
    rho: CuspSymbol
    a: int
    b: int
    mult: int = 1

    def __post_init__(self):
        if self.a < 1 or self.b < 1 or self.mult < 1:
            raise ValueError("a, b, mult must be positive")

    @property
    def dim(self) -> int:
        return self.mult * self.a * self.b * self.rho.dim

    def sl2_tensor_type(self) -> str:
        return tensor_type(sl2_type(self.a), sl2_type(self.b))

    def sort_key(self):
        return (self.rho.id, self.a, self.b, self.rho.dim)


@dataclass(frozen=True)
class AParameter:
    """Multiset of triples rho x S_a x S_b."""

    triples: tuple
    group: GroupType

    @staticmethod
    def of(items: Iterable, group: GroupType) -> "AParameter":
        merged = {}
        for it in items:
            t = it if isinstance(it, Triple) else Triple(*it)
            key = (t.rho, t.a, t.b)
            if key in merged:
                prev = merged[key]
                merged[key] = Triple(t.rho, t.a, t.b, prev.mult + t.mult)
            else:
                merged[key] = t
        return AParameter(tuple(sorted(merged.values(), key=Triple.sort_key)), group)

    @property
    def dim(self) -> int:
        return sum(t.dim for t in self.triples)

    def is_good_parity(self) -> bool:
        for t in self.triples:
            if not t.rho.selfdual:
                return False
            if tensor_type(t.rho.orth_type, t.sl2_tensor_type()) != self.group.dual_type:
                return False
        return True

    def validate(self) -> list:
        problems = []
        if self.dim % 2 != self.group.dim_parity:
            problems.append(
                f"dimension {self.dim} has wrong parity for {self.group.value}"
            )
        return problems


def phi_of_psi(psi: AParameter) -> list:
    """Expand each triple (rho, a, b) into the b summands rho|.|^s x S_a,
    s = (b-1)/2, ..., -(b-1)/2.  Returns (rho, s, a) with repetition."""
    out = []
    for t in psi.triples:
        top = HalfInt(t.b - 1)
        for _ in range(t.mult):
            for s in hrange(-top, top):
                out.append((t.rho, s, t.a))
    return out


def psi_support(psi: AParameter) -> dict:
    """Cuspidal support of the associated L-parameter, per rho line."""
    out: dict = {}
    for t in psi.triples:
        key, flip = _line_key(t.rho)
        c = out.setdefault(key, Counter())
        grid = speh_grid(SpehShape(t.rho, t.a, t.b))
        for e in grid:
            c[(-e if flip else e)] += t.mult * t.rho.dim
    return out


# ---------------------------------------------------------------------------
# full (possibly bad-parity) parameter summands


@dataclass(frozen=True)
class ParamSummand:
    """One summand rho|.|^e x S_a x S_b of a full L- or A-parameter; rho is
    unitary and the exponent is kept separately as an exact rational."""

    rho: CuspSymbol
    e: Fraction
    a: int
    b: int = 1

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("a, b must be positive")

    @property
    def dim(self) -> int:
        return self.a * self.b * self.rho.dim


def good_parity_split(summands: Sequence[ParamSummand], group: GroupType):
    """Partition the summands into (good, bad).

    A summand rho|.|^e x S_a x S_b is good when e is a half-integer and the
    unitarized, widened summand rho x S_{a+2|e|} x S_b is self-dual of the
    same type as the ambient parameter.
    """
    good, bad = [], []
    for s in summands:
        if s.e.denominator not in (1, 2):
            bad.append(s)
            continue
        if not s.rho.selfdual:
            bad.append(s)
            continue
        widened_a = s.a + abs(int(2 * s.e))
        ty = tensor_type(s.rho.orth_type, sl2_type(widened_a), sl2_type(s.b))
        (good if ty == group.dual_type else bad).append(s)
    return good, bad


# ---------------------------------------------------------------------------
# component groups


@dataclass(frozen=True)
class ComponentGroup:
    """Free Z/2 module on the distinct triples of a good-parity parameter,
    with repeated summands identified and the central element recorded."""

    basis: tuple  # distinct (rho, a, b) triples, canonical order
    mults: tuple  # multiplicity of each basis triple in the parameter

    @property
    def rank(self) -> int:
        return len(self.basis)

    def admissible(self, eps: Sequence[int]) -> bool:
        """A character (one sign per distinct triple) is admissible iff it
        kills the central element sum of all summands."""
        if len(eps) != self.rank:
            raise ValueError("sign vector has wrong length")
        p = 1
        for e, m in zip(eps, self.mults):
            if e not in (1, -1):
                raise ValueError("signs must be +-1")
            p *= e ** m
        return p == 1

    def characters(self) -> Iterator[tuple]:
        """All admissible characters, in lexicographic order."""
        if self.rank == 0:
            yield ()
            return
        for eps in itertools.product((1, -1), repeat=self.rank):
            if self.admissible(eps):
                yield eps


def component_group(psi: AParameter) -> ComponentGroup:
    if not psi.is_good_parity():
        raise ValueError("component group requires a good-parity parameter")
    basis = tuple((t.rho, t.a, t.b) for t in psi.triples)
    mults = tuple(t.mult for t in psi.triples)
    return ComponentGroup(basis, mults)


# ---------------------------------------------------------------------------
# exponent bookkeeping (shared by the derivative rules and the decision
# procedures)


@dataclass(frozen=True)
class LineItems:
    """Content of one rho line of a datum, indexed by exponent.

    L[x] lists segments with left end x, R[x] segments with right end -x,
    T[x] the tempered summand with z = x (if any).
    """

    L: dict
    R: dict
    T: dict

    def a_set_size(self, x: HalfInt) -> int:
        n = len(self.L.get(x, ())) + len(self.R.get(x, ()))
        t = self.T.get(x)
        return n + (t.mult if t else 0)

    def occupied(self) -> list:
        xs = set(self.L) | set(self.R) | set(self.T)
        return sorted(xs, key=lambda h: h.twice)


def line_items(d: LanglandsDatum, rho: CuspSymbol) -> LineItems:
    L: dict = {}
    R: dict = {}
    T: dict = {}
    for i, s in enumerate(d.m):
        if s.rho != rho:
            continue
        L.setdefault(s.x, []).append(i)
        R.setdefault(-s.y, []).append(i)
    for t in d.tempered.summands:
        if t.rho == rho:
            T[t.z] = t
    return LineItems(L, R, T)
