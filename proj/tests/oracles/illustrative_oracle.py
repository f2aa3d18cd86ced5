"""Independent oracle for the four-alternative illustrative data.

Computes beta-averages and r-OWAs as the linear programs they are defined
by (scipy's HiGHS), never by sorting, and prints the values frozen into
tests/test_enumeration.cpp:

  * h of every alternative at (beta, r) = (0.3, 0.17), raw and normalized
  * the 11 x 11 winner map and optimal-h surface on BETAS x RS

Usage: python3 tests/oracles/illustrative_oracle.py
"""

import json
import pathlib

import numpy as np
from scipy.optimize import linprog

DATA = pathlib.Path(__file__).resolve().parent.parent / "data" / "illustrative.json"
GRID = [0.01] + [round(0.1 * i, 1) for i in range(1, 11)]


def tail_average(values, mass, level):
    """max sum(u_i v_i) / level  s.t.  0 <= u_i <= mass_i, sum u_i = level."""
    n = len(values)
    res = linprog(
        c=-np.asarray(values, dtype=float),
        A_eq=np.ones((1, n)),
        b_eq=[level],
        bounds=[(0.0, m) for m in mass],
        method="highs",
    )
    assert res.status == 0, res.message
    return -res.fun / level


def h_value(matrix, probs, imps, beta, r):
    g = [tail_average(row, probs, beta) for row in matrix]
    return g, tail_average(g, imps, r)


def normalized(alts):
    arr = np.array([a["values"] for a in alts], dtype=float)  # A x K x J
    lo = arr.min(axis=(0, 2), keepdims=True)
    hi = arr.max(axis=(0, 2), keepdims=True)
    span = np.where(hi > lo, hi - lo, 1.0)
    arr = np.where(hi > lo, (arr - lo) / span, arr)
    return [{"name": a["name"], "values": arr[i].tolist()} for i, a in enumerate(alts)]


def main():
    doc = json.loads(DATA.read_text())
    probs, imps = doc["probs"], doc["importances"]

    for label, alts in (("raw", doc["alternatives"]), ("normalized", normalized(doc["alternatives"]))):
        print(f"# {label}, beta=0.3 r=0.17")
        for a in alts:
            g, h = h_value(a["values"], probs, imps, 0.3, 0.17)
            print(a["name"], " ".join(f"{x:.12f}" for x in g), f"h={h:.12f}")

    print("# winner map (rows beta, columns r) over", GRID)
    alts = doc["alternatives"]
    winners, surface = [], []
    for beta in GRID:
        wrow, hrow = [], []
        for r in GRID:
            hs = [h_value(a["values"], probs, imps, beta, r)[1] for a in alts]
            best = min(hs)
            ties = [i for i, h in enumerate(hs) if h <= best + 1e-7]
            wrow.append(ties)
            hrow.append(best)
        winners.append(wrow)
        surface.append(hrow)
    for beta, wrow in zip(GRID, winners):
        print(f"beta={beta}:", " ".join("/".join(str(i) for i in t) for t in wrow))
    print("# optimal h")
    for beta, hrow in zip(GRID, surface):
        print(f"beta={beta}:", ", ".join(f"{h:.9f}" for h in hrow))


if __name__ == "__main__":
    main()
