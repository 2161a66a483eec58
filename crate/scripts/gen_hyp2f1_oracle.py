"""Freeze reference values of 2F1(a, b; c; x) on the negative real axis.

Values come from mpmath at 60 decimal digits, independent of the Rust
implementation. Output: crates/core/tests/data/hyp2f1_negative_axis.csv
"""
import csv
import random
from pathlib import Path

import mpmath as mp

mp.mp.dps = 60
rng = random.Random(20240611)
rows = []


def push(a, b, c, x):
    val = mp.hyp2f1(a, b, c, x)
    rows.append((repr(a), repr(b), repr(c), repr(x), mp.nstr(val, 25)))


def neg_x():
    return -(10.0 ** rng.uniform(-4.0, 6.0))


while len(rows) < 1000:
    u = rng.random()
    if u < 0.4:
        d = rng.uniform(0.2, 0.95)
        push(1.0, d, 1.0 + d, neg_x())
    elif u < 0.7:
        d = rng.uniform(0.2, 0.95)
        n = rng.randint(1, 19)
        push(n + 1.0, n - d, n + 1.0 - d, neg_x())
    elif u < 0.8:
        d = rng.uniform(0.2, 0.95)
        push(1.0, 1.0 - d, 2.0 - d, neg_x())
    else:
        a = rng.uniform(0.1, 4.0)
        b = rng.uniform(0.1, 4.0)
        if abs((a - b) - round(a - b)) < 0.05:
            continue
        c = rng.uniform(0.5, 6.0)
        push(a, b, c, neg_x())

out = Path(__file__).resolve().parent.parent / "crates/core/tests/data/hyp2f1_negative_axis.csv"
with out.open("w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["a", "b", "c", "x", "value"])
    w.writerows(rows)
print(f"wrote {len(rows)} rows to {out}")
