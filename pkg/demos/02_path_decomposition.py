"""Writing the difference of two configurations as a sum of single moves.

Moving worker i one bin forward shrinks the gap behind it and widens its own,
which gives one generator per worker. Any zero-sum displacement has a unique
non-negative combination of generators using at least one zero coefficient.
"""

# %%
from ringwalk import State, canonical_beta, costate, delta_vector, displacement, gamma, phi

print("generators for k=5:")
for i in range(1, 6):
    print("  delta_%d =" % i, delta_vector(i, 5))

# %% Prefix sums of the displacement, then a shift so the minimum is zero.
d = (1, 0, -2, -2, 3)
print("d     =", d)
print("gamma =", gamma(d))
dec = canonical_beta(d)
print("beta  =", dec.beta, " path length =", dec.length, "=", phi(d))

# %% Between actual configurations.
x, y = State((3, 6, 2, 5)), State((4, 4, 4, 4))
print(f"from {x.label()} to {y.label()}: displacement {displacement(x, y)}, length {phi(displacement(x, y))}")

# Reversing the ring swaps the roles of the two endpoints without changing the length.
print(f"costates: {costate(y).label()} -> {costate(x).label()}, length {phi(displacement(costate(y), costate(x)))}")
