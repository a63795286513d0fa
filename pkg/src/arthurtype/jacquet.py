"""Grothendieck-group symbol algebra and rho-derivatives.

Two layers live here.  The symbolic layer (GL symbols, tensor symbols,
GrothElem) implements the semisimplified maximal-parabolic Jacquet formula
exactly: segment cuts, mirrored cuts for Zelevinsky quotients, ladder cuts
with strictly decreasing cut points, and convolution for products.

The rule layer acts on irreducible Langlands data.  It implements only a
certified subset of derivative behaviour:

  (a) stripping the leading exponent of a segment that can be commuted to
      the front of its standard module, or whose top has no adjacent
      blocking segment;
  (b) lowering a tempered summand S_{2z+1} -> S_{2z-1}, which is certified
      when the summand below is absent or carries the same sign (equal
      signs merge; opposite signs are out of certified scope);
  (c) the mirrored bottom-stripping rule.

Everything else is answered by Unknown with a reason code, never guessed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Union

from .repdata import (
    CuspSymbol,
    HalfInt,
    HALF,
    LanglandsDatum,
    Segment,
    SpehShape,
    TempSummand,
    TemperedParam,
    ZERO as H0,
    line_items,
    sort_segments,
    speh_grid,
)
from .results import (
    REASON_ADJACENT_EQUAL,
    REASON_ADJACENT_OPPOSITE,
    REASON_CENTER_ZERO_SEGMENT,
    REASON_CENTRAL_EXPONENT,
    REASON_MIXED_ROUTES,
    REASON_MULTIPLICITY,
    Unknown,
    Zero,
)


class JacquetTableError(ValueError):
    """A non-cuspidal classical factor was used without a declared table."""


# ---------------------------------------------------------------------------
# GL symbols


@dataclass(frozen=True)
class GLOne:
    def key(self):
        return (0,)

    def __str__(self):
        return "1"


@dataclass(frozen=True)
class GLCusp:
    rho: CuspSymbol
    e: HalfInt

    def key(self):
        return (1, self.rho.id, self.e.twice, self.rho.dim)

    def __str__(self):
        return f"{self.rho.id}|.|^{self.e}"


@dataclass(frozen=True)
class GLDelta:
    seg: Segment

    def key(self):
        return (2, self.seg.sort_key())

    def __str__(self):
        return f"D{self.seg}"


@dataclass(frozen=True)
class GLZel:
    seg: Segment

    def key(self):
        return (3, self.seg.sort_key())

    def __str__(self):
        return f"Z{self.seg}"


@dataclass(frozen=True)
class GLLadder:
    segs: tuple  # same rho, x and y both strictly decreasing

    def __post_init__(self):
        for a, b in zip(self.segs, self.segs[1:]):
            if a.rho != b.rho or not (a.x > b.x and a.y > b.y):
                raise ValueError("not a strict ladder")

    def key(self):
        return (4, tuple(s.sort_key() for s in self.segs))

    def __str__(self):
        return "L(" + ",".join(str(s) for s in self.segs) + ")"


@dataclass(frozen=True)
class GLProd:
    factors: tuple

    def key(self):
        return (5, tuple(f.key() for f in self.factors))

    def __str__(self):
        return " x ".join(str(f) for f in self.factors)


GLSymbol = Union[GLOne, GLCusp, GLDelta, GLZel, GLLadder, GLProd]


def gl_size(sym: GLSymbol) -> int:
    if isinstance(sym, GLOne):
        return 0
    if isinstance(sym, GLCusp):
        return sym.rho.dim
    if isinstance(sym, (GLDelta, GLZel)):
        return sym.seg.gl_dim
    if isinstance(sym, GLLadder):
        return sum(s.gl_dim for s in sym.segs)
    if isinstance(sym, GLProd):
        return sum(gl_size(f) for f in sym.factors)
    raise TypeError(sym)


def gl_prod(*factors: GLSymbol) -> GLSymbol:
    """Canonical product symbol: flattened, unit-free, sorted."""
    flat = []
    for f in factors:
        if isinstance(f, GLProd):
            flat.extend(f.factors)
        elif not isinstance(f, GLOne):
            flat.append(f)
    flat.sort(key=lambda s: s.key())
    if not flat:
        return GLOne()
    if len(flat) == 1:
        return flat[0]
    return GLProd(tuple(flat))


def _seg_symbol(seg: Segment, cls) -> GLSymbol:
    """Single-segment module; one-exponent segments are cuspidal."""
    if seg.length == 1:
        return GLCusp(seg.rho, seg.x)
    return cls(seg)


def _canon_segment_symbol(segs: list, cls) -> GLSymbol:
    if not segs:
        return GLOne()
    if len(segs) == 1:
        return _seg_symbol(segs[0], cls)
    ordered = sorted(segs, key=lambda s: -s.x.twice)
    return GLLadder(tuple(ordered))


def gl_dual(sym: GLSymbol) -> GLSymbol:
    if isinstance(sym, GLOne):
        return sym
    if isinstance(sym, GLCusp):
        return GLCusp(sym.rho.dual(), -sym.e)
    if isinstance(sym, GLDelta):
        return _seg_symbol(sym.seg.dual(), GLDelta)
    if isinstance(sym, GLZel):
        return _seg_symbol(sym.seg.dual(), GLZel)
    if isinstance(sym, GLLadder):
        return _canon_segment_symbol([s.dual() for s in sym.segs], GLDelta)
    if isinstance(sym, GLProd):
        return gl_prod(*(gl_dual(f) for f in sym.factors))
    raise TypeError(sym)


def delta_of(rho: CuspSymbol, x, y) -> GLSymbol:
    return _seg_symbol(Segment(rho, HalfInt.of(x), HalfInt.of(y)), GLDelta)


def cusp_of(rho: CuspSymbol, e) -> GLCusp:
    return GLCusp(rho, HalfInt.of(e))


def speh_symbol(shape: SpehShape) -> GLSymbol:
    """The irreducible Speh representation as a ladder of column segments."""
    from .repdata import speh_column_segments

    cols = speh_column_segments(shape)
    return _canon_segment_symbol(cols, GLDelta)


# ---------------------------------------------------------------------------
# two-part Jacquet cuts


@lru_cache(maxsize=None)
def _jac2(sym: GLSymbol, k: int):
    """Semisimplified two-block Jacquet [Jac_{(k, n-k)}], as a dict
    (first, second) -> coefficient."""
    n = gl_size(sym)
    if k < 0 or k > n:
        return {}
    if isinstance(sym, GLOne):
        return {(GLOne(), GLOne()): 1}
    if isinstance(sym, GLCusp):
        if k == 0:
            return {(GLOne(), sym): 1}
        if k == n:
            return {(sym, GLOne()): 1}
        return {}
    if isinstance(sym, GLDelta):
        d = sym.seg.rho.dim
        if k % d:
            return {}
        q = k // d
        top = _sub_segment(sym.seg, 0, q)
        bot = _sub_segment(sym.seg, q, sym.seg.length - q)
        return {(_seg_or_one(top, GLDelta), _seg_or_one(bot, GLDelta)): 1}
    if isinstance(sym, GLZel):
        d = sym.seg.rho.dim
        if k % d:
            return {}
        q = k // d
        L = sym.seg.length
        low = _sub_segment(sym.seg, L - q, q)
        high = _sub_segment(sym.seg, 0, L - q)
        return {(_seg_or_one(low, GLZel), _seg_or_one(high, GLZel)): 1}
    if isinstance(sym, GLLadder):
        return _ladder_jac2(sym, k)
    if isinstance(sym, GLProd):
        out: dict = {}
        _prod_jac2(sym.factors, k, out)
        return out
    raise TypeError(sym)


def _sub_segment(seg: Segment, offset: int, length: int) -> Optional[Segment]:
    """Sub-segment of `length` exponents starting `offset` below the top."""
    if length <= 0:
        return None
    x = seg.x - offset
    y = x - (length - 1)
    return Segment(seg.rho, x, y)


def _seg_or_one(seg: Optional[Segment], cls) -> GLSymbol:
    return _seg_symbol(seg, cls) if seg is not None else GLOne()


def _ladder_jac2(sym: GLLadder, k: int):
    segs = sym.segs
    d = segs[0].rho.dim
    if k % d:
        return {}
    quota = k // d
    out: dict = {}

    def rec(i, prev_cut_twice, taken, tops, bots):
        if taken > quota:
            return
        if i == len(segs):
            if taken != quota:
                return
            first = _canon_segment_symbol(tops, GLDelta)
            second = _canon_segment_symbol(bots, GLDelta)
            key = (first, second)
            out[key] = out.get(key, 0) + 1
            return
        s = segs[i]
        # cut point c in [y, x+1]; top part [x, c], bottom part [c-1, y];
        # cut points strictly decrease along the ladder
        c = s.x + 1
        while c >= s.y:
            if prev_cut_twice is None or c.twice < prev_cut_twice:
                top_len = (s.x.twice - c.twice) // 2 + 1
                new_tops = tops + [Segment(s.rho, s.x, c)] if top_len > 0 else tops
                bot_len = (c.twice - s.y.twice) // 2
                new_bots = bots + [Segment(s.rho, c - 1, s.y)] if bot_len > 0 else bots
                rec(i + 1, c.twice, taken + top_len, new_tops, new_bots)
            c = c - 1
        return

    rec(0, None, 0, [], [])
    return out


def _prod_jac2(factors, k, out, idx=0, coeff=1, firsts=(), seconds=()):
    if idx == len(factors):
        if k == 0:
            key = (gl_prod(*firsts), gl_prod(*seconds))
            out[key] = out.get(key, 0) + coeff
        return
    f = factors[idx]
    n = gl_size(f)
    for kf in range(0, min(k, n) + 1):
        for (a, b), c in _jac2(f, kf).items():
            _prod_jac2(
                factors, k - kf, out, idx + 1, coeff * c, firsts + (a,), seconds + (b,)
            )


def gl_jacquet(sym: GLSymbol, split) -> dict:
    """Three-block semisimplified Jacquet of a GL symbol.

    Returns {(s1, s2, s3): coefficient} for the split (n1, n2, n3).
    """
    n1, n2, n3 = split
    if n1 < 0 or n2 < 0 or n3 < 0 or n1 + n2 + n3 != gl_size(sym):
        raise ValueError(f"split {split} does not match size {gl_size(sym)}")
    out: dict = {}
    for (a, rest), c in _jac2(sym, n1).items():
        for (b, cc), c2 in _jac2(rest, n2).items():
            key = (a, b, cc)
            out[key] = out.get(key, 0) + c * c2
    return out


# ---------------------------------------------------------------------------
# tensor symbols and Grothendieck elements


@dataclass(frozen=True)
class ClassicalLabel:
    """Opaque classical-group factor; cuspidal labels have no proper
    Jacquet modules."""

    name: str
    cuspidal: bool = True

    def key(self):
        return (self.name, self.cuspidal)

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class ClPart:
    """The classical tensor slot: tau rtimes base."""

    tau: GLSymbol
    base: ClassicalLabel

    def key(self):
        return (self.tau.key(), self.base.key())

    def __str__(self):
        if isinstance(self.tau, GLOne):
            return str(self.base)
        return f"{self.tau} |x {self.base}"


@dataclass(frozen=True)
class TensorSymbol:
    gl: GLSymbol
    cl: ClPart

    def key(self):
        return (self.gl.key(), self.cl.key())

    def __str__(self):
        return f"{self.gl} (x) {self.cl}"


class GrothElem:
    """Integer combination of tensor symbols with exact arithmetic."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for sym, c in (terms.items() if isinstance(terms, dict) else terms):
                if c:
                    self.terms[sym] = self.terms.get(sym, 0) + c
            self.terms = {s: c for s, c in self.terms.items() if c}

    @staticmethod
    def of_induction(tau: GLSymbol, base: ClassicalLabel) -> "GrothElem":
        return GrothElem({TensorSymbol(GLOne(), ClPart(tau, base)): 1})

    def coeff(self, sym: TensorSymbol) -> int:
        return self.terms.get(sym, 0)

    def __add__(self, other: "GrothElem") -> "GrothElem":
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) + c
        return GrothElem(out)

    def __sub__(self, other: "GrothElem") -> "GrothElem":
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, 0) - c
        return GrothElem(out)

    def __mul__(self, n: int) -> "GrothElem":
        return GrothElem({s: c * n for s, c in self.terms.items()})

    __rmul__ = __mul__

    def dominates(self, other: "GrothElem") -> bool:
        """Coefficientwise >= (the Grothendieck-group partial order)."""
        return all((self.terms.get(s, 0) - c) >= 0 for s, c in other.terms.items())

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].key())

    def __eq__(self, other):
        return isinstance(other, GrothElem) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "GrothElem(0)"
        return " + ".join(f"{c}*[{s}]" for s, c in self.items_sorted())


def tadic_jacquet(
    tau: GLSymbol,
    pi: ClassicalLabel,
    m: int,
    pi_table: Optional[dict] = None,
) -> GrothElem:
    """Semisimplified Jacquet module of tau rtimes pi along the maximal
    parabolic with GL_m factor.

    The classical factor contributes through its declared Jacquet table
    {depth: ((coeff, gl, label), ...)}; a cuspidal pi has the empty table.
    Terms are (t1 x t4 x t3dual) tensor (t2 rtimes base).
    """
    size = gl_size(tau)
    if pi.cuspidal:
        table = {}
    else:
        table = pi_table
    out: dict = {}
    for n4 in range(0, m + 1):
        if n4 == 0:
            terms4 = ((1, GLOne(), pi),)
        else:
            if table is None:
                # probe whether any GL cell would need this depth
                needed = any(
                    gl_jacquet(tau, (n1, size - n1 - (m - n4 - n1), m - n4 - n1))
                    for n1 in range(0, m - n4 + 1)
                    if 0 <= size - n1 - (m - n4 - n1)
                )
                if needed:
                    raise JacquetTableError(
                        f"classical factor {pi.name} needs a Jacquet table at depth {n4}"
                    )
                continue
            terms4 = table.get(n4, ())
            if not terms4:
                continue
        for n1 in range(0, m - n4 + 1):
            n3 = m - n4 - n1
            n2 = size - n1 - n3
            if n2 < 0:
                continue
            for (t1, t2, t3), c in gl_jacquet(tau, (n1, n2, n3)).items():
                for c4, t4, base in terms4:
                    gl = gl_prod(t1, t4, gl_dual(t3))
                    sym = TensorSymbol(gl, ClPart(t2, base))
                    out[sym] = out.get(sym, 0) + c * c4
    return GrothElem(out)


# ---------------------------------------------------------------------------
# certified derivative rules on irreducible Langlands data


DerivResult = Union[LanglandsDatum, Zero, Unknown]


def _l_route_blocked(d: LanglandsDatum, rho, x, targets) -> bool:
    """A segment top at x-1 reaching strictly below some target bottom
    blocks the leading-exponent rule."""
    min_bottom = min((s.y for s in targets), key=lambda h: h.twice)
    for s in d.m:
        if s.rho == rho and s not in targets and s.x == x - 1 and s.y < min_bottom:
            return True
    return False


def _front_commutes(d: LanglandsDatum, seg: Segment) -> bool:
    """True if seg can be moved to the front of the standard module: every
    same-rho segment of strictly smaller center is unlinked with it."""
    for s in d.m:
        if s is seg or s.rho != seg.rho:
            continue
        if s.center < seg.center and s.linked(seg):
            return False
    return True


def apply_derivative(d: LanglandsDatum, rho: CuspSymbol, x: HalfInt, k: int = 1) -> DerivResult:
    """k-th derivative at rho|.|^x of an irreducible datum, within the
    certified rule set; Unknown elsewhere."""
    x = HalfInt.of(x)
    if k < 1:
        raise ValueError("k must be positive")
    if not rho.selfdual:
        return Zero("non-self-dual line is empty on a good-parity datum")
    if (x - rho.b_rho(d.group)).twice % 2 != 0:
        return Zero("exponent off the support lattice")
    items = line_items(d, rho)
    nL = len(items.L.get(x, ()))
    nR = len(items.R.get(x, ()))
    t = items.T.get(x)
    routes = (nL > 0) + (nR > 0) + (t is not None)
    if routes == 0:
        return Zero("no content at this exponent")
    if routes > 1:
        return Unknown(REASON_MIXED_ROUTES)

    if nL:
        idxs = items.L[x]
        targets = [d.m[i] for i in idxs]
        if len({(s.x, s.y) for s in targets}) > 1:
            return Unknown(REASON_MIXED_ROUTES)
        if len(targets) != k:
            return Unknown(REASON_MULTIPLICITY)
        seg = targets[0]
        if not _front_commutes(d, seg) and _l_route_blocked(d, rho, x, targets):
            return Unknown(REASON_MIXED_ROUTES)
        rest = [s for i, s in enumerate(d.m) if i not in idxs]
        if seg.length > 1:
            rest.extend(Segment(rho, seg.x - 1, seg.y) for _ in range(k))
        return LanglandsDatum.of(rest, d.tempered, d.group)

    if nR:
        idxs = items.R[x]
        targets = [d.m[i] for i in idxs]
        if len({(s.x, s.y) for s in targets}) > 1:
            return Unknown(REASON_MIXED_ROUTES)
        if len(targets) != k:
            return Unknown(REASON_MULTIPLICITY)
        seg = targets[0]
        # mirrored adjacency: a bottom at -(x-1) reaching strictly above
        for s in d.m:
            if s.rho == rho and s not in targets and -s.y == x - 1 and s.x > seg.x:
                return Unknown(REASON_MIXED_ROUTES)
        rest = [s for i, s in enumerate(d.m) if i not in idxs]
        if seg.length > 1:
            short = Segment(rho, seg.x, seg.y + 1)
            if short.center >= H0:
                return Unknown(REASON_CENTER_ZERO_SEGMENT)
            rest.extend(short for _ in range(k))
        return LanglandsDatum.of(rest, d.tempered, d.group)

    # tempered route
    if t.mult != k:
        return Unknown(REASON_MULTIPLICITY)
    if x == H0:
        return Unknown(REASON_CENTRAL_EXPONENT)
    others = [s for s in d.tempered.summands if not (s.rho == rho and s.z == x)]
    if x == HALF:
        # S_2 -> S_0 removes the summand; if the remaining signs do not
        # descend there is no such representation and the derivative is 0
        new_temp = TemperedParam(tuple(others))
        if new_temp.eps_product() != 1:
            return Zero("sign descent fails after removal")
        return LanglandsDatum.of(d.m, new_temp, d.group)
    below = d.tempered.find(rho, x - 1)
    if below is not None:
        reason = (
            REASON_ADJACENT_OPPOSITE if below.eps != t.eps else REASON_ADJACENT_EQUAL
        )
        return Unknown(reason)
    lowered = TempSummand(rho, x - 1, k, t.eps)
    return LanglandsDatum.of(d.m, TemperedParam.of(others + [lowered]), d.group)


class VanishResult:
    ZERO = "Zero"
    NONZERO = "NonZero"
    UNKNOWN = "Unknown"


def vanishing_test(d: LanglandsDatum, rho: CuspSymbol, x) -> str:
    """Sound tri-state nonvanishing test for D_{rho|.|^x} on an irreducible
    good-parity datum.

    Zero is only reported on support grounds (an upper bound on the Jacquet
    module of the standard module); NonZero only via a certified embedding
    or tempered-lowering certificate.
    """
    x = HalfInt.of(x)
    if not rho.selfdual:
        return VanishResult.ZERO
    if (x - rho.b_rho(d.group)).twice % 2 != 0:
        return VanishResult.ZERO
    items = line_items(d, rho)
    nL = len(items.L.get(x, ()))
    nR = len(items.R.get(x, ()))
    t = items.T.get(x)
    if nL == 0 and nR == 0 and t is None:
        return VanishResult.ZERO
    if nL:
        targets = [d.m[i] for i in items.L[x]]
        if any(_front_commutes(d, s) for s in targets):
            return VanishResult.NONZERO
        if t is None and nR == 0 and not _l_route_blocked(d, rho, x, targets):
            return VanishResult.NONZERO
        return VanishResult.UNKNOWN
    if t is not None and nL == 0 and nR == 0 and t.mult == 1:
        if x == HALF:
            return VanishResult.NONZERO if t.eps == 1 else VanishResult.UNKNOWN
        if x > HALF and d.tempered.find(rho, x - 1) is None:
            return VanishResult.NONZERO
    return VanishResult.UNKNOWN


# ---------------------------------------------------------------------------
# derivative chains and the Speh-grid operator


def d_rho(target, rho: CuspSymbol, x, k: int = 1, tables: Optional[dict] = None):
    """Dispatch D^{(k)}_{rho|.|^x} over the supported target kinds.

    GL symbols yield a dict {symbol: coefficient} (the GL-side Grothendieck
    element), which is also accepted back as a target.
    """
    x = HalfInt.of(x)
    if isinstance(target, LanglandsDatum):
        return apply_derivative(target, rho, x, k)
    if isinstance(target, GrothElem):
        return _groth_d_rho(target, rho, x, k, tables)
    if isinstance(target, (GLOne, GLCusp, GLDelta, GLZel, GLLadder, GLProd)):
        return _gl_d_rho(target, rho, x, k)
    if isinstance(target, dict):
        out: dict = {}
        for sym, c in target.items():
            for res, cc in _gl_d_rho(sym, rho, x, k).items():
                out[res] = out.get(res, 0) + c * cc
        return {s: c for s, c in out.items() if c}
    raise TypeError(f"cannot differentiate {type(target).__name__}")


def d_rho_k(target, rho, x, k, tables=None):
    return d_rho(target, rho, x, k, tables)


def _gl_d_rho(sym: GLSymbol, rho, x, k):
    """GL-side derivative: dict symbol -> coefficient."""
    want = gl_prod(*([GLCusp(rho, x)] * k))
    out: dict = {}
    for (first, second), c in _jac2(sym, k * rho.dim).items():
        if first == want:
            out[second] = out.get(second, 0) + c
    return out


def _groth_d_rho(elem: GrothElem, rho, x, k, tables):
    want = gl_prod(*([GLCusp(rho, x)] * k))
    out: dict = {}
    for sym, c in elem.terms.items():
        if not isinstance(sym.gl, GLOne):
            raise ValueError("derivatives act on purely classical elements")
        base = sym.cl.base
        table = (tables or {}).get(base.name)
        expansion = tadic_jacquet(sym.cl.tau, base, k * rho.dim, table)
        for tsym, cc in expansion.terms.items():
            if tsym.gl == want:
                key = TensorSymbol(GLOne(), tsym.cl)
                out[key] = out.get(key, 0) + c * cc
    return GrothElem(out)


def d_chain(target, rho: CuspSymbol, frm, to, k: int = 1, tables=None):
    """Composite of derivatives from exponent `frm` to `to` inclusive,
    stepping by the sign of (to - frm)."""
    frm, to = HalfInt.of(frm), HalfInt.of(to)
    if (to - frm).twice % 2 != 0:
        raise ValueError("chain endpoints must differ by an integer")
    step = 1 if to >= frm else -1
    cur = target
    x = frm
    while True:
        cur = d_rho(cur, rho, x, k, tables)
        if isinstance(cur, (Zero, Unknown)):
            return cur
        if isinstance(cur, (dict, GrothElem)) and not cur:
            return cur
        if x == to:
            return cur
        x = x + step


def d_s(target, shape: SpehShape, tables=None):
    """Composite of k-th derivatives along the Speh grid's flat exponent
    order (columns left to right, top to bottom)."""
    cur = target
    for x in speh_grid(shape):
        cur = d_rho(cur, shape.rho, x, shape.k, tables)
        if isinstance(cur, (Zero, Unknown)):
            return cur
        if isinstance(cur, (dict, GrothElem)) and not cur:
            return cur
    return cur
