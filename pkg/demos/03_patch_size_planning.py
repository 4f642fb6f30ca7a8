"""Choosing a patch size under a transform workspace budget.

Run with ``python demos/03_patch_size_planning.py``.
"""

# %% Setup
import math

from splitconv import PlanRequest, choose_patch_size
from splitconv.planner import InfeasiblePlan

# %% Unlimited budget: the modeled optimum for a 224x224 image and a 3x3 kernel
res = choose_patch_size(PlanRequest(224, 3, math.inf, (4, 8, 16, 32, 64)))
for c in res.per_candidate:
    print(f"S={c.S:>2} workspace={c.workspace:>6} total={c.modeled_total:.4g}")
print("chosen:", res.chosen_S)

# %% Shrinking the budget pushes the choice toward smaller patches
for budget in (16384, 1024, 256, 64, 16):
    try:
        print(budget, "->", choose_patch_size(PlanRequest(224, 7, budget)).chosen_S)
    except InfeasiblePlan as exc:
        print(budget, "->", exc)
