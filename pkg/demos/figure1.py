"""
The two damping curves
======================

Tabulates S(r) and the semiclassical factor on [0, 3] through the CLI's
figure1 command and writes the CSV next to this script.  Any plotting tool
can draw the two curves from it.
"""

import pathlib

from vncut.cli import main

out = pathlib.Path(__file__).with_name("figure1.csv")
code = main(["figure1", "--r-lo", "0", "--r-hi", "3", "--step", "0.05", "--out", str(out)])
rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
print(f"exit {code}; wrote {len(rows) - 1} rows to {out.name}")
print(rows[0])
for line in rows[1::10]:
    r, s, sc = (float(x) for x in line.split(","))
    print(f"r={r:4.2f}  S={s:.6f}  semiclassical={sc:.6f}  gap={sc - s:.6f}")
