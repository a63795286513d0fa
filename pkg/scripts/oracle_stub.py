#!/usr/bin/env python3
"""Reference irreducibility oracle speaking the line-JSON protocol.

Answers from a small built-in table of first reducibility points; run with
--flip to invert every irreducibility verdict (used to exercise verdict
monotonicity in tests).  One JSON request per input line, one JSON response
per output line.
"""

import json
import sys

# (rho id, c, d) -> first reducibility point, as "p/2" or int
FRP_TABLE = {
    ("1", 2, 2): 4,
}


def main() -> None:
    flip = "--flip" in sys.argv[1:]
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        req = json.loads(line)
        key = (req["rho"]["id"], req["c"], req["d"])
        frp = FRP_TABLE.get(key)
        if req["op"] == "frp":
            print(json.dumps({"frp": frp}))
        elif req["op"] == "irreducible":
            if frp is None:
                print(json.dumps({"result": "unknown"}))
            else:
                irr = frp > 0
                if flip:
                    irr = not irr
                print(json.dumps({"result": "irreducible" if irr else "reducible"}))
        else:
            print(json.dumps({"error": f"bad op {req['op']!r}"}))
        sys.stdout.flush()


if __name__ == "__main__":
    main()
