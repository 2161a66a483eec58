"""Freeze derivatives of exp(V(s)) at s = 1 for interference-type exponents

    V(s) = -a s - 2 pi lam U(s c),
    U(x) = z^2/(alpha-2) * u * 2F1(1, 1-d; 2-d; -u),  u = beta z^-alpha x, d = 2/alpha,

computed by mpmath's high-precision numerical differentiation (finite
differences at 50 digits). Output: crates/core/tests/data/exp_v_derivatives.csv
"""
import csv
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50

CASES = [
    # alpha, z, beta, lam, c, a
    (4.0, 1.0, 1.0, 0.05, 1.0, 0.3),
    (3.5, 2.0, 1.0, 0.02, 10.0, 0.1),
    (3.0, 1.5, 0.5, 0.01, 3.0, 0.0),
    (4.0, 10.0, 1e-4, 1e-3, 1e8, 0.5),
    (2.5, 1.0, 1.0, 0.03, 0.2, 1.0),
]


def u_fun(x, alpha, z, beta):
    d = 2 / mp.mpf(alpha)
    u = beta * mp.power(z, -alpha) * x
    return z**2 / (alpha - 2) * u * mp.hyp2f1(1, 1 - d, 2 - d, -u)


rows = []
for case, (alpha, z, beta, lam, c, a) in enumerate(CASES):
    alpha, z, beta, lam, c, a = map(mp.mpf, (alpha, z, beta, lam, c, a))

    def f(s):
        return mp.exp(-a * s - 2 * mp.pi * lam * u_fun(s * c, alpha, z, beta))

    for n in range(0, 9):
        val = mp.diff(f, 1, n)
        rows.append((case, *(mp.nstr(v, 17) for v in (alpha, z, beta, lam, c, a)), n, mp.nstr(val, 25)))

out = Path(__file__).resolve().parent.parent / "crates/core/tests/data/exp_v_derivatives.csv"
with out.open("w", newline="") as fh:
    w = csv.writer(fh)
    w.writerow(["case", "alpha", "z", "beta", "lam", "c", "a", "order", "value"])
    w.writerows(rows)
print(f"wrote {len(rows)} rows to {out}")
