"""The directed graph of single-worker moves and its shortest paths."""

# %%
from ringwalk import bfs_distance, build_digraph, check_self_converse, phi
from ringwalk.digraph import all_pairs_distances, is_strongly_connected

g = build_digraph(3, 7)
print(f"{len(g.vertices)} vertices, {g.num_edges} edges, strongly connected: {is_strongly_connected(g)}")

# %% Reversing every edge gives an isomorphic graph; the isomorphism is the costate map.
res = check_self_converse(g)
print("self-converse:", bool(res))

# %% Shortest path lengths agree with the length of the canonical decomposition.
dist = all_pairs_distances(g)
mismatches = sum(
    dist[u, v] != phi([b - a for a, b in zip(x, y)])
    for u, x in enumerate(g.vertices)
    for v, y in enumerate(g.vertices)
)
print("pairs where BFS distance differs from phi:", mismatches)
print("distance (1,1,5) -> (5,1,1):", bfs_distance(g, (1, 1, 5), (5, 1, 1)))
