"""Majority votes by independent jurors: when groups beat individuals.

Each juror is right with some probability. Under simple majority the group
is more reliable than any single member whenever members are better than
coin flips, and reliability climbs toward certainty as the jury grows.
"""

import numpy as np

from votefuse import (
    TeamStructure,
    competence_monte_carlo,
    decisiveness_probability,
    group_competence,
    indirect_competence,
    optimal_weights,
)

print("jury size vs majority competence at p=0.6:")
for n in (1, 3, 5, 9, 15, 21):
    c = group_competence((1.0,) * n, 0.0, (0.6,) * n)
    print(f"  n={n:3d}: {c:.4f}")

# Exact enumeration walks 2^n vote patterns, so big juries are sampled.
for n in (51, 101):
    est = competence_monte_carlo((1.0,) * n, 0.0, (0.6,) * n, trials=200_000, seed=5)
    print(f"  n={n:3d}: {est.value:.4f} +- {est.stderr:.4f} (sampled)")

# Below one half the same mechanism amplifies error.
print("\nsame sizes at p=0.4:")
for n in (1, 3, 9, 21):
    print(f"  n={n:3d}: {group_competence((1.0,) * n, 0.0, (0.4,) * n):.4f}")

# Voting through delegates loses information: nine jurors split into three
# teams of three, each team sends its majority view to a final vote.
teams = TeamStructure(((0, 1, 2), (3, 4, 5), (6, 7, 8)))
direct = group_competence((1.0,) * 9, 0.0, (0.6,) * 9)
tiered = indirect_competence(teams, (0.6,) * 9)
print(f"\nnine jurors at p=0.6: direct {direct:.6f} vs two-tier {tiered:.6f}")

# Decisiveness is the probability a given vote settles the outcome, which
# is also the sensitivity of group competence to that juror's skill.
weights = (3.0, 2.0, 1.0, 1.0, 1.0)
skills = (0.65, 0.65, 0.65, 0.65, 0.65)
print("\nweighted panel, chance each vote is decisive:")
for i, w in enumerate(weights):
    d = decisiveness_probability(weights, 0.0, skills, i)
    print(f"  weight {w}: {d:.4f}")

# Unequal skills call for unequal weights. Log odds of each skill is the
# best possible weighting; here it buys about two points of competence.
mixed = (0.9, 0.75, 0.6, 0.55, 0.55)
w_opt = tuple(float(x) for x in optimal_weights(mixed))
equal = group_competence((1.0,) * 5, 0.0, mixed)
best = group_competence(w_opt, 0.0, mixed)
print(f"\nskills {mixed}")
print(f"log-odds weights {np.round(w_opt, 3)}")
print(f"equal-weight competence {equal:.4f}, optimal {best:.4f}")
