"""Counting and indexing the states of a ring with k workers and n bins.

Run with ``python3 demos/01_counting_states.py``.
"""

# %% A state lists the clockwise gap from each worker to the next one.
# Workers whose gap is 1 may additionally be marked as blocked.
from ringwalk import State, count_configurations, count_states_with_blockages, count_total_states
from ringwalk import enumerate_states, rank, unrank

x = State((1, 3, 3), blocked=0b001)
print("state", x.label(), "has", x.num_blocked, "blocked worker(s) on", x.n, "bins")

# %% Counts come from binomial identities; here we compare them with enumeration.
k, n = 3, 7
states = enumerate_states(k, n)
print(f"k={k}, n={n}: {count_configurations(k, n)} configurations, {len(states)} states in total")
for b in range(k):
    print(f"  with {b} blocked: {count_states_with_blockages(b, k, n)}")
assert len(states) == count_total_states(k, n)

# A larger case: two blocked workers among five on sixteen bins.
print("N(2, 5, 16) =", count_states_with_blockages(2, 5, 16))

# %% Ranking is a bijection onto 0..M-1 that follows the canonical order.
for i in (0, 7, len(states) - 1):
    st = unrank(i, k, n)
    print(f"  index {i:2d} -> {st.label():10s} -> {rank(st, k, n)}")
