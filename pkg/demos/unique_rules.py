"""How many genuinely different weighted voting rules exist for small groups.

Two weight vectors can induce the same decisions on every vote pattern, in
which case they are the same rule. Enumerating canonical representatives
shows how slowly the space of distinct rules grows.
"""

from votefuse import (
    VotingGame,
    WinningFamily,
    enumerate_unique_wmr,
    is_trade_robust,
    nearest_simple_rule,
    wmr_network,
)

for n in range(1, 8):
    rules = enumerate_unique_wmr(n)
    print(f"n={n}: {len(rules)} distinct decisive weighted rules")

print("\ncanonical weights for n=4:")
for rule in enumerate_unique_wmr(4):
    print(" ", rule.weights)

# Pairwise disagreement counts (over all 2^n vote patterns) arrange the
# rules into a small network; adjacent rules differ on the fewest patterns.
rules5 = enumerate_unique_wmr(5)
network = wmr_network(rules5)
print(f"\nn=5 disagreement matrix ({network.shape[0]}x{network.shape[1]}):")
for row in network:
    print("  ", " ".join(f"{int(d):3d}" for d in row))

# Estimated influence weights are noisy; snapping to the nearest canonical
# rule gives something implementable. Skills break ties by group accuracy.
measured = (2.0, 0.7, 0.7, 0.7)
snap = nearest_simple_rule(measured, skills=(0.9, 0.6, 0.6, 0.6))
print(f"\nmeasured weights {measured} snap to {snap.candidate.weights}"
      f" ({snap.disagreements} pattern disagreements, competence {snap.competence:.3f})")

# Weighted games survive any sequence of one-for-one member trades between
# winning coalitions. A family built from the seven lines of a combinatorial
# design looks like a voting rule but fails after a single trade, which
# certifies that no weights can represent it.
fano = WinningFamily.from_minimal(7, [
    (0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 3, 6),
    (2, 4, 5), (1, 4, 6), (0, 5, 6),
])
verdict = is_trade_robust(fano)
print(f"\nseven-line family trade robust: {verdict.robust}")
if verdict.witness is not None:
    print("  witness trades:", verdict.witness.trades)

weighted = is_trade_robust(VotingGame((4, 2, 1, 1)))
print(f"weighted game trade robust: {weighted.robust}")
