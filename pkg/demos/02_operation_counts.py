"""Closed-form operation counts for overlap-add and split convolution.

Run with ``python demos/02_operation_counts.py``. The same table is available
as CSV from ``splitconv cost``.
"""

# %% Setup
from splitconv import Method, mul_split, add_split, sweep

N = 224
ks = [3, 5, 7, 9, 11]

# %% Totals for S=16 and S=32 against overlap-add
rows = sweep(N, ks, [16, 32])
print(f"{'k':>3} {'OAA':>12} {'SPLIT S=16':>12} {'SPLIT S=32':>12}")
for k in ks:
    by = {(r.method, r.s): r.total for r in rows if r.k == k}
    print(f"{k:>3} {by[Method.OAA, None]:12.4g} {by[Method.SPLIT, 16]:12.4g} "
          f"{by[Method.SPLIT, 32]:12.4g}")

# %% The difference in k is not monotone for S=16: the split patch cost grows with k as well
for s in (16, 32):
    gaps = [r_o.total - r_s.total
            for r_o, r_s in zip([r for r in rows if r.method is Method.OAA],
                                [r for r in rows if r.s == s])]
    print(f"S={s}: OAA - SPLIT =", [f"{g:.3g}" for g in gaps])

# %% Effect of the patch size at k=3
for s in (4, 8, 16, 32, 64):
    print(f"S={s:>2}: {mul_split(N, s, 3) + add_split(N, s, 3):.4g}")
