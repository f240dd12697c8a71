"""Tour of the consistent-price-system toolkit.

Builds a strict random price system directly (no optimization), inspects its
residuals, pairs it against trading strategies, checks the supermartingale
property of shadow wealth, mixes systems, and verifies the stopped-process
martingale upgrade.
"""

from spreadhedge import (
    ClaimSpec,
    expected_claim,
    generate_random_tree,
    make_ask_strategy,
    make_bid_strategy,
    mix_cps,
    polar_pairing,
    random_cps,
    random_strategy,
    shadow_price,
    stopped_martingale_check,
    supermartingale_check,
    verify_cps,
)

RULE = "=" * 72


def main():
    tree = generate_random_tree(seed=4, depth=3, max_branching=3)
    lam = 0.15
    print(RULE)
    print(f"Price systems on a {tree.node_count}-node tree at a 15% spread")
    print(RULE)

    cps = random_cps(tree, lam, seed=8)
    check = verify_cps(tree, lam, cps)
    print("forward-constructed random system:")
    for family in sorted(check.worst):
        print(f"  {family:12s} worst residual {check.worst[family]:.3e}")
    print(f"  strict density: {cps.strict}")
    print()

    print("shadow prices stay inside the band [(1-lambda) S, S]:")
    for n in list(tree.internal[:3]):
        s = shadow_price(tree, cps, int(n))
        print(
            f"  node {int(n):3d}: {(1-lam)*tree.price[n]:10.4f} <= {s:10.4f} "
            f"<= {tree.price[n]:10.4f}"
        )
    print()

    print("polar pairing E[phi0 z0 + phi1 z1] is never positive:")
    ask = make_ask_strategy(tree, {0}, {0: 1.0})
    bid = make_bid_strategy(tree, lam, {0}, {0: 1.0})
    rnd = random_strategy(tree, seed=21)
    for name, strat in (("buy-and-hold", ask), ("sell-and-hold", bid), ("random", rnd)):
        pairing = polar_pairing(tree, lam, cps, strat)
        sup = supermartingale_check(tree, lam, cps, strat)
        print(f"  {name:14s} pairing {pairing:12.5f}   shadow wealth supermartingale: {bool(sup)}")
        assert pairing <= 1e-9
    print()

    other = random_cps(tree, lam, seed=9)
    mixed = mix_cps(cps, other, 0.5)
    print(f"mixing two systems keeps the polytope: verified = {bool(verify_cps(tree, lam, mixed))}")
    claim = ClaimSpec({int(l): max(float(tree.price[l] - tree.price[0]), 0.0) for l in tree.leaves})
    vals = sorted(
        expected_claim(tree, c, claim) for c in (cps, other, mixed)
    )
    print(f"claim values under the three systems (sorted): "
          f"{vals[0]:.4f} <= {vals[1]:.4f} <= {vals[2]:.4f}")
    print()

    stop = set(int(l) for l in tree.leaves)
    bound = float(cps.z1[list(tree.internal)].max()) * 1.01
    ok = stopped_martingale_check(tree, cps.z1, stop, bound)
    print(f"stock account bounded by {bound:.2f} before the horizon;")
    print(f"stopped-process martingale identity: {ok}")
    print()
    print("OK: construction, verification, pairing, mixing and stopping all agree")


if __name__ == "__main__":
    main()
