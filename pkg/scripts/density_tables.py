"""Density tables for bbar(n) and abar(n) modulo 2, 4, 8.

    python scripts/density_tables.py [--X-max 100000] [--out DIR]

Writes one CSV per (sequence, modulus) and prints a summary.  The tables are
empirical; nothing here claims a limit.
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

from partcong.denscan import density_scan
from partcong.qseries import Domain
from partcong.sequences import coefficients

SEQUENCES = ("overcubic-pair", "overcubic")
MODULI = (2, 4, 8)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--X-max", type=int, default=100_000)
    ap.add_argument("--out", type=Path, default=Path("density_tables"))
    args = ap.parse_args()

    X = args.X_max
    cps = [x for x in (10**3, 10**4, 10**5, 10**6) if x <= X]
    if not cps or cps[-1] != X:
        cps.append(X)
    args.out.mkdir(parents=True, exist_ok=True)
    for name in SEQUENCES:
        t0 = time.perf_counter()
        # one series mod 8 serves all three moduli
        s = coefficients(name, X, Domain.mod(max(MODULI)))
        for u in MODULI:
            table = density_scan(name, u, X, cps, series=s)
            path = args.out / f"density_{name}_mod{u}.csv"
            path.write_text(table.to_csv())
            cells = "  ".join(f"X={r.X}: {float(r.density):.5f}" for r in table.rows)
            print(f"{name:15s} mod {u}  {cells}")
        print(f"  ({time.perf_counter() - t0:.1f} s)")


if __name__ == "__main__":
    main()
