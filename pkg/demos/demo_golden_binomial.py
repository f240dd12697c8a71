"""Worked example: super-replicating a call on a one-period binomial market.

The market: one bond (price 1), one stock worth 100 today moving to 120 or 80
with equal probability.  Friction: 10% proportional cost on stock sales.
The claim: a call struck at 100, paying 20 in the up state and 0 down.

Both sides of the duality are solved exactly and compared against the numbers
a hand computation gives.
"""

import json

import numpy as np

from spreadhedge import ClaimSpec, load_tree, shadow_price, superhedge_price
from spreadhedge.strategy import liquidation_values, portfolio_path

B1 = {
    "depth": 1,
    "nodes": [
        {"id": 0, "parent": None, "time": 0, "prob": 1.0, "price": 100.0},
        {"id": 1, "parent": 0, "time": 1, "prob": 0.5, "price": 120.0},
        {"id": 2, "parent": 0, "time": 1, "prob": 0.5, "price": 80.0},
    ],
}

RULE = "=" * 72


def main():
    tree = load_tree(json.dumps(B1))
    claim = ClaimSpec({1: 20.0, 2: 0.0})
    lam = 0.10

    print(RULE)
    print("Super-replication of a call under a 10% bid-ask spread")
    print(RULE)
    print(f"stock today {tree.price[0]:.0f}, tomorrow {tree.price[1]:.0f} or {tree.price[2]:.0f}")
    print(f"bid-ask band today: [{(1-lam)*100:.0f}, 100]")
    print()

    report = superhedge_price(tree, lam, claim)

    print("hedging side (cheapest dominating portfolio)")
    print("-" * 72)
    print(f"  super-replication price  {report.primal_value:.12f}   (140/9 = {140/9:.12f})")
    path = portfolio_path(tree, lam, report.strategy)
    print(f"  shares bought at time 0  {report.strategy.buy[0]:.12f}   (5/9   = {5/9:.12f})")
    print(f"  bond account after trade {path.phi0[0]:+.12f}")
    print(f"  terminal bonds           up {path.phi0[1]:.4f} / down {path.phi0[2]:.4f}"
          f"   vs payoff 20 / 0")
    vals = liquidation_values(tree, lam, report.strategy)
    print(f"  liquidation values       {np.array2string(vals, precision=4)}")
    print()

    print("pricing side (richest consistent price system)")
    print("-" * 72)
    print(f"  dual value               {report.dual_value:.12f}")
    q_up = tree.path_prob[1] * report.cps.z0[1]
    print(f"  pricing weight Q(up)     {q_up:.12f}   (7/9   = {7/9:.12f})")
    shadows = [shadow_price(tree, report.cps, n) for n in range(3)]
    print(f"  shadow prices            {shadows[0]:.4f} -> ({shadows[1]:.4f}, {shadows[2]:.4f})")
    print(f"  check: 7/9*108 + 2/9*72  = {7/9*108 + 2/9*72:.4f} (martingale, hits the ask)")
    print()

    print("certificates")
    print("-" * 72)
    for key, val in report.certificates.items():
        print(f"  {key:28s} {val}")
    print(f"  duality gap              {report.gap:.3e}")
    print()
    assert abs(report.primal_value - 140 / 9) < 1e-9
    assert abs(report.dual_value - 140 / 9) < 1e-9
    print("OK: price, hedge and price system all match the hand computation")


if __name__ == "__main__":
    main()
