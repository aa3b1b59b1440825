"""Combining classifiers: fixed score rules, accuracy-weighted votes, local skill.

Three classifiers label the same samples. Their outputs can be fused as raw
scores (sum, product, ...), as accuracy-weighted votes, or adaptively by
asking which classifier tends to be right near the query point.
"""

import numpy as np

from votefuse import (
    CostMatrix,
    binary_accuracies,
    confusion_from_predictions,
    expected_risk,
    fuse_dataset,
    fuse_fixed,
    fuse_wmr,
)
from votefuse.io import parse_predictions

# A labelled validation split and a test split in the on-disk CSV format.
VALIDATION = """sample_id,true_label,good,fair,poor
v1,y,y,y,y
v2,y,y,y,n
v3,y,y,n,n
v4,n,n,n,y
v5,n,n,y,y
v6,n,n,n,n
v7,y,y,y,n
v8,n,n,n,y
"""

TEST = """sample_id,true_label,good,fair,poor
t1,y,y,y,n
t2,n,n,n,y
t3,y,y,n,n
t4,n,n,y,y
"""

validation = parse_predictions(VALIDATION, source="validation.csv")
test = parse_predictions(TEST, source="test.csv")

accuracies = [
    float(binary_accuracies(confusion_from_predictions(validation, i))[0])
    for i in range(validation.n_classifiers)
]
print("validation accuracy per classifier:")
for name, acc in zip(validation.classifier_names, accuracies):
    print(f"  {name}: {acc:.3f}")

# On t3 and t4 the two weak classifiers agree against the strong one, so a
# bare majority follows them. Accuracy weighting trusts the strong one, and
# the below-chance classifier gets a negative weight: its vote is read as
# evidence for the opposite label.
for rule in ("majority", "wmr"):
    fused = fuse_dataset(test, rule, validation=validation)
    hits = sum(f == t for f, t in zip(fused, test.true_labels))
    print(f"\n{rule} fusion: {fused} ({hits}/4 correct)")

# Single vote fused directly from accuracies; a stalemate returns None.
print("\none sample, votes y/n/n at accuracies 0.9/0.6/0.6:",
      fuse_wmr(["y", "n", "n"], [0.9, 0.6, 0.6], labels=("n", "y")))

# Score-level fusion. The product rule lets one confident zero veto a class.
scores = np.array([
    [[0.6, 0.4], [0.7, 0.3], [0.1, 0.9]],
    [[0.6, 0.4], [0.7, 0.3], [0.0, 1.0]],
])
for rule in ("sum", "product", "median"):
    out = fuse_fixed(scores, rule)
    print(f"{rule:8s} winners {out.winner} scores {np.round(out.scores, 3)}")

# Adaptive fusion: each classifier dominates one half of a 1-d feature line,
# so the fused decision follows whichever is locally more reliable.
REGIONAL_VAL = """sample_id,true_label,feat_0,left,right
r1,A,-2.0,A,B
r2,A,-1.5,A,A
r3,B,-1.0,B,A
r4,A,-0.5,A,B
r5,B,0.5,A,B
r6,B,1.0,B,B
r7,A,1.5,B,A
r8,B,2.0,A,B
"""
REGIONAL_TEST = """sample_id,true_label,feat_0,left,right
q1,A,-1.2,A,B
q2,B,1.2,A,B
"""
rv = parse_predictions(REGIONAL_VAL, source="regional_val.csv")
rt = parse_predictions(REGIONAL_TEST, source="regional_test.csv")
adaptive = fuse_dataset(rt, "adaptive-wmr", validation=rv, k=4)
print(f"\nadaptive fusion picks the locally skilled classifier: {adaptive}")

# Costs reshape the target: here missing a 'y' is four times worse than a
# false alarm, so the risk of each classifier matters more than accuracy.
cost = CostMatrix(("n", "y"), np.array([[0.0, 1.0], [4.0, 0.0]]))
for i, name in enumerate(validation.classifier_names):
    cm = confusion_from_predictions(validation, i)
    print(f"expected risk of {name}: {expected_risk(cm, cost):.3f}")
