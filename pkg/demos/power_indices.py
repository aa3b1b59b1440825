"""Power indices on a weighted board.

A 4-seat board votes with weights 4, 2, 1, 1 and passes a motion when the
supporting weight exceeds half the total. Seat weight and actual influence
are different things; the two classic indices quantify the gap.
"""

from votefuse import VotingGame, banzhaf_exact, power_monte_carlo, shapley_shubik_exact

board = VotingGame((4, 2, 1, 1))
print(f"game: weights={board.weights} quota={board.quota} (strictly more than half)")

banzhaf = banzhaf_exact(board)
shapley = shapley_shubik_exact(board)
print("\nseat  weight  banzhaf  shapley-shubik")
for i in range(board.n):
    print(f"{i:4d}  {str(board.weights[i]):>6}  {banzhaf.normalized[i]:7.4f}  {shapley.normalized[i]:14.4f}")

# Seat 0 holds half the weight but all the power: every winning coalition
# needs it, and each small seat alone adds nothing it could not veto.
print("\nswing counts:", banzhaf.raw)

# The same question with a (2, 1, 1) committee gives the textbook 3:1:1 split.
small = banzhaf_exact(VotingGame((2, 1, 1)))
print("(2,1,1) committee normalized banzhaf:", small.normalized)

# Exact enumeration doubles in cost with every player, so large games are
# sampled instead. The report carries one standard error per player.
big = VotingGame(tuple(range(1, 31)))
estimate = power_monte_carlo(big, kind="banzhaf", trials=200_000, seed=42)
print("\n30-player game, sampled banzhaf for the three heaviest players:")
for i in (29, 28, 27):
    print(f"  weight {big.weights[i]}: {estimate.normalized[i]:.4f} +- {estimate.stderr[i]:.4f}")

# Same seed, same numbers, bit for bit.
again = power_monte_carlo(big, kind="banzhaf", trials=200_000, seed=42)
assert again.normalized == estimate.normalized
print("rerun with seed 42 reproduces the estimate exactly")
