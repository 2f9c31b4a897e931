"""Building the one-step transition matrix and its stationary distribution."""

# %%
import numpy as np

from ringwalk import build_transition_matrix, closed_form_stationary, power_iteration_stationary

k, n, s = 2, 3, 0.5
tm = build_transition_matrix(k, n, s)
labels = [st.label() for st in tm.states]
print("states:", labels)
with np.printoptions(precision=4, suppress=True):
    print(tm.p)
print("max |row sum - 1| =", np.max(np.abs(tm.row_sums() - 1)))

# %% The stationary weights depend only on how many workers are blocked.
nu = closed_form_stationary(k, n, s)
for lab, w in zip(labels, nu.nu):
    print(f"  {lab:6s} {w:.6f}")

# %% Power iteration from an arbitrary start lands on the same vector.
tm = build_transition_matrix(3, 7, 0.3)
start = np.random.default_rng(0).random(tm.order)
pw = power_iteration_stationary(tm, start=start)
exact = closed_form_stationary(3, 7, 0.3)
print(f"k=3 n=7: {pw.iterations} iterations, max deviation {np.max(np.abs(pw.nu - exact.nu)):.2e}")
