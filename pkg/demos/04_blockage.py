"""How often a given worker spends a step blocked, as a function of the success rate."""

# %%
from ringwalk import blockage_fraction_closed_form, Params

k, n = 3, 7
print(f"k={k}, n={n}")
for s in (0.1, 0.3, 0.5, 0.7, 0.9):
    r = Params(k, n, s).r
    print(f"  s={s:.1f}  r={r:7.4f}  blocked fraction={blockage_fraction_closed_form(k, n, r):.6f}")

# %% At s = 1/2 every state is equally likely.
print("B(2,3) at r=1:", blockage_fraction_closed_form(2, 3, 1.0))

# %% Adding bins at a fixed crew size makes collisions rarer.
for n in (4, 8, 16, 32, 64):
    print(f"  n={n:3d}: {blockage_fraction_closed_form(4, n, 1.0):.5f}")
