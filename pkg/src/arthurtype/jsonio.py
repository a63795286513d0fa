"""JSON schema shared by the library and the CLI.

Half-integers serialize as ints or "p/2" strings; exact rationals as
"p/q" strings.  Every top-level output embeds the schema version so
fixture files double as regression goldens.
"""

from __future__ import annotations

from fractions import Fraction

from .amseg import ExtMultiSegment, ExtSegment
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
)

SCHEMA_VERSION = "1"


class SchemaError(ValueError):
    pass


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise SchemaError(f"missing field {key!r} in {where}")
    return obj[key]


# ---------------------------------------------------------------------------
# scalars


def encode_halfint(h: HalfInt):
    return h.twice // 2 if h.is_integer else f"{h.twice}/2"


def decode_halfint(v) -> HalfInt:
    try:
        return HalfInt.parse(v)
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"bad half-integer {v!r}: {exc}")


def encode_fraction(x: Fraction):
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def decode_fraction(v) -> Fraction:
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise SchemaError(f"bad rational {v!r}")


# ---------------------------------------------------------------------------
# cuspidal symbols


def encode_cusp(rho: CuspSymbol) -> dict:
    out = {
        "id": rho.id,
        "selfdual": rho.selfdual,
        "type": rho.orth_type if rho.selfdual else "orth",
        "dim": rho.dim,
    }
    if not rho.selfdual:
        out["dual_id"] = rho.dual_id
        del out["type"]
    return out


def decode_cusp(obj: dict) -> CuspSymbol:
    if not isinstance(obj, dict):
        raise SchemaError(f"cuspidal symbol must be an object, got {obj!r}")
    ident = _need(obj, "id", "cuspidal symbol")
    selfdual = obj.get("selfdual", True)
    ty = obj.get("type", "orth")
    if ty == "symp":
        orth_type = "symp"
    elif ty == "orth":
        orth_type = "orth"
    else:
        raise SchemaError(f"bad type {ty!r} (want 'orth' or 'symp')")
    return CuspSymbol(
        id=str(ident),
        selfdual=bool(selfdual),
        dual_id=obj.get("dual_id"),
        orth_type=orth_type,
        dim=int(obj.get("dim", 1)),
    )


# ---------------------------------------------------------------------------
# segments / data / parameters


def encode_segment(s: Segment) -> dict:
    return {"rho": encode_cusp(s.rho), "x": encode_halfint(s.x), "y": encode_halfint(s.y)}


def decode_segment(obj: dict) -> Segment:
    return Segment(
        decode_cusp(_need(obj, "rho", "segment")),
        decode_halfint(_need(obj, "x", "segment")),
        decode_halfint(_need(obj, "y", "segment")),
    )


def encode_datum(d: LanglandsDatum) -> dict:
    return {
        "group": d.group.value,
        "segments": [encode_segment(s) for s in d.m],
        "tempered": [
            {
                "rho": encode_cusp(t.rho),
                "z": encode_halfint(t.z),
                "mult": t.mult,
                "eps": t.eps,
            }
            for t in d.tempered.summands
        ],
    }


def decode_datum(obj: dict) -> LanglandsDatum:
    group = GroupType.parse(_need(obj, "group", "datum"))
    segs = [decode_segment(s) for s in obj.get("segments", [])]
    temps = [
        TempSummand(
            decode_cusp(_need(t, "rho", "tempered summand")),
            decode_halfint(_need(t, "z", "tempered summand")),
            int(t.get("mult", 1)),
            int(_need(t, "eps", "tempered summand")),
        )
        for t in obj.get("tempered", [])
    ]
    return LanglandsDatum.of(segs, TemperedParam.of(temps), group)


def encode_parameter(psi: AParameter) -> dict:
    triples = []
    for t in psi.triples:
        for _ in range(t.mult):
            triples.append({"rho": encode_cusp(t.rho), "a": t.a, "b": t.b})
    return {"group": psi.group.value, "triples": triples}


def decode_parameter(obj: dict) -> AParameter:
    group = GroupType.parse(_need(obj, "group", "parameter"))
    triples = [
        Triple(
            decode_cusp(_need(t, "rho", "triple")),
            int(_need(t, "a", "triple")),
            int(_need(t, "b", "triple")),
        )
        for t in _need(obj, "triples", "parameter")
    ]
    return AParameter.of(triples, group)


def encode_ext_multisegment(E: ExtMultiSegment) -> dict:
    return {
        "group": E.group.value,
        "blocks": [
            {
                "rho": encode_cusp(b.rho),
                "A": encode_halfint(b.A),
                "B": encode_halfint(b.B),
                "l": b.l,
                "eta": b.eta,
            }
            for b in E.blocks
        ],
    }


def decode_ext_multisegment(obj: dict, ordered: bool = False):
    group = GroupType.parse(_need(obj, "group", "extended multi-segment"))
    blocks = [
        ExtSegment(
            decode_cusp(_need(b, "rho", "block")),
            decode_halfint(_need(b, "A", "block")),
            decode_halfint(_need(b, "B", "block")),
            int(_need(b, "l", "block")),
            int(_need(b, "eta", "block")),
        )
        for b in _need(obj, "blocks", "extended multi-segment")
    ]
    if ordered:
        return blocks, group
    return ExtMultiSegment.of(blocks, group)
