"""Arbitrage shows up as an empty pricing polytope.

A deterministic rising price path is free money once the spread is too narrow
to hide the drift: no shadow price can be a martingale inside the band.  The
dual program then has no feasible point at all, which the library reports as
a domain finding rather than a number.
"""

import json

from spreadhedge import ClaimSpec, DualInfeasible, load_tree, superhedge_price
from spreadhedge.superhedge import has_cps

RULE = "=" * 72

RISING = {
    "depth": 2,
    "nodes": [
        {"id": 0, "parent": None, "time": 0, "prob": 1.0, "price": 100.0},
        {"id": 1, "parent": 0, "time": 1, "prob": 1.0, "price": 120.0},
        {"id": 2, "parent": 1, "time": 2, "prob": 1.0, "price": 144.0},
    ],
}


def main():
    tree = load_tree(json.dumps(RISING))
    claim = ClaimSpec({2: 0.0})

    print(RULE)
    print("Deterministic path 100 -> 120 -> 144 (20% up each period)")
    print(RULE)
    print("a flat shadow price must live inside every band it passes through;")
    print("the bands are [0.9*S, S] per node, i.e. [90,100], [108,120], [129.6,144]")
    print()

    for lam in (0.05, 0.1, 0.15, 0.2, 0.3, 0.35):
        lo = max((1 - lam) * p for p in (100.0, 120.0, 144.0))
        hi = min(p for p in (100.0, 120.0, 144.0))
        feasible = has_cps(tree, lam)
        verdict = "prices exist" if feasible else "ARBITRAGE"
        print(f"  lambda {lam:4.2f}: band intersection "
              f"[{lo:7.2f}, {hi:7.2f}] {'nonempty' if lo <= hi else 'empty':>8}  -> {verdict}")
        assert feasible == (lo <= hi)
    print()

    try:
        superhedge_price(tree, 0.1, claim)
        raise AssertionError("expected the narrow-spread market to be flagged")
    except DualInfeasible as exc:
        print(f"pricing at lambda=0.1 raises DualInfeasible:\n  {exc}")
    print()

    report = superhedge_price(tree, 0.35, claim)
    print(f"pricing at lambda=0.35 succeeds: zero claim prices to {report.primal_value:.1e}")
    print()
    print("OK: infeasibility of the pricing polytope is exactly the arbitrage line")


if __name__ == "__main__":
    main()
