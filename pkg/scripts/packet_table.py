#!/usr/bin/env python3
"""Enumerate packets for a family of one-line parameters and print a table.

Usage: python3 scripts/packet_table.py [--max-dim N] [--group Sp|SOodd]

For each one-line good-parity parameter up to the dimension bound, prints
the parameter, the number of certificates, and the per-status counts.
This is the quickest way to eyeball how far the certified evaluation
reaches before the companion-criterion oracle would be needed.
"""

import argparse
import itertools
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from arthurtype.amseg import enumerate_packet
from arthurtype.repdata import AParameter, CuspSymbol, GroupType, Triple


def one_line_parameters(rho: CuspSymbol, group: GroupType, max_dim: int):
    """All parameters on a single line up to max_dim, by recursive choice of
    (a, b) pairs with nonincreasing dimension."""
    from arthurtype.repdata import sl2_type, tensor_type

    pairs = [
        (a, b)
        for a in range(1, max_dim + 1)
        for b in range(1, max_dim // a + 1)
        if tensor_type(rho.orth_type, sl2_type(a), sl2_type(b)) == group.dual_type
    ]
    pairs.sort(key=lambda ab: (ab[0] * ab[1], ab))

    def rec(budget, start):
        yield ()
        for i in range(start, len(pairs)):
            a, b = pairs[i]
            if a * b > budget:
                continue
            for tail in rec(budget - a * b, i):
                yield ((a, b),) + tail

    seen = set()
    for combo in rec(max_dim, 0):
        if not combo or combo in seen:
            continue
        seen.add(combo)
        psi = AParameter.of([Triple(rho, a, b) for a, b in combo], group)
        if psi.dim % 2 == group.dim_parity:
            yield psi


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-dim", type=int, default=12)
    ap.add_argument("--group", choices=["Sp", "SOodd"], default="Sp")
    args = ap.parse_args()
    group = GroupType.parse(args.group)
    rho = CuspSymbol("1")
    print(f"{'parameter':40s} {'ok':>4s} {'vanish':>7s} {'oracle':>7s}")
    for psi in one_line_parameters(rho, group, args.max_dim):
        entries = enumerate_packet(psi, dim_bound=args.max_dim)
        counts = {"ok": 0, "vanishes": 0, "needs-oracle": 0}
        for e in entries:
            counts[e.status] += 1
        desc = " + ".join(
            f"S{t.a}xS{t.b}" + (f"^{t.mult}" if t.mult > 1 else "")
            for t in psi.triples
        )
        print(
            f"{desc:40s} {counts['ok']:>4d} {counts['vanishes']:>7d}"
            f" {counts['needs-oracle']:>7d}"
        )


if __name__ == "__main__":
    main()
