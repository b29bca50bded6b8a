"""Regenerate tests/fixtures/oracles.json with 50-digit mpmath evaluations.

    python tests/make_oracle_fixtures.py
"""

import json
import pathlib

import mpmath as mp

mp.mp.dps = 50

OUT = pathlib.Path(__file__).parent / "fixtures" / "oracles.json"


def s_series(r):
    # e^{-r^2} sum_n r^{2n+1} / sqrt(n! (n+1)!), to 50 digits
    r = mp.mpf(r)
    if r == 0:
        return mp.mpf(0)
    total, n = mp.mpf(0), 0
    while True:
        t = r ** (2 * n + 1) / mp.sqrt(mp.factorial(n) * mp.factorial(n + 1))
        total += t
        if n > r * r + 10 and t < total * mp.mpf(10) ** -55:
            return mp.exp(-r * r) * total
        n += 1


def bessel_factor(r):
    r = mp.mpf(r)
    z = r * r
    return mp.sqrt(mp.pi / 2) * r * mp.exp(-z) * (mp.besseli(0, z) + mp.besseli(1, z))


def main():
    radii = ["0", "0.001", "0.25", "0.5", "1", "2", "4", "6", "8"]
    lattice = [mp.mpf(k) / 20 for k in range(61)]
    data = {
        "s_factor": {r: mp.nstr(s_series(r), 30) for r in radii},
        "semiclassical_factor": {r: mp.nstr(bessel_factor(r), 30) for r in radii},
        "figure1_lattice": [
            [mp.nstr(r, 20), mp.nstr(s_series(r), 30), mp.nstr(bessel_factor(r), 30)] for r in lattice
        ],
        "coherent_norm_r1_N40": mp.nstr(mp.fsum(mp.exp(-1) / mp.factorial(k) for k in range(40)), 30),
        "bessel_i": {
            f"{n},{z}": mp.nstr(mp.besseli(n, z), 30)
            for n in (0, 1)
            for z in ("0.5", "2", "10", "15", "16", "30", "64")
        },
    }
    OUT.write_text(json.dumps(data, indent=1) + "\n")


if __name__ == "__main__":
    main()
