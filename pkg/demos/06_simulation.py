"""Simulating workers on the ring and comparing with the exact answers."""

# %%
import numpy as np

from ringwalk import Params, blockage_fraction_closed_form, closed_form_stationary
from ringwalk import empirical_state_distribution, run

params = Params(3, 7, 0.5)
stats = run(params, 200_000, seed=1, burnin=1_000)
exact_b = blockage_fraction_closed_form(3, 7, params.r)
print(f"worker 1 blocked: simulated {stats.worker_blocked_fraction(0):.4f}, exact {exact_b:.4f}")
l1 = np.abs(empirical_state_distribution(stats) - closed_form_stationary(3, 7, 0.5).nu).sum()
print(f"L1 distance between occupancy and stationary distribution: {l1:.4f}")

# %% A speed limit: a worker that has not succeeded after f_cap bins stops empty-handed.
for f_cap in (1, 2, 4, 8):
    st = run(params, 50_000, seed=2, burnin=500, f_cap=f_cap)
    print(f"  f_cap={f_cap}: exhausted {st.exhausted_fraction:.4f}, blocked {st.blocked_fraction:.4f}")

# %% Independent replicas can be spread over processes without changing the result.
a = run(params, 20_000, seed=3, replicas=4)
b = run(params, 20_000, seed=3, replicas=4, processes=2)
print("replicas identical across process counts:", a == b)
