import pytest

from ringwalk import errors
from ringwalk.digraph import (
    all_pairs_distances,
    bfs_distance,
    build_digraph,
    check_self_converse,
    is_strongly_connected,
    to_dot,
    RearrangementDigraph,
)
from ringwalk.rearrangement import delta_vector, phi
from ringwalk.state_space import count_configurations


def test_build_small():
    g = build_digraph(3, 7)
    assert len(g.vertices) == 15 == count_configurations(3, 7)
    g1 = build_digraph(1, 6)
    assert g1.vertices == ((6,),) and g1.num_edges == 0
    g2 = build_digraph(2, 3)
    assert g2.vertices == ((1, 2), (2, 1))
    assert sorted(g2.edges()) == [(0, 1), (1, 0)]


@pytest.mark.parametrize("k,n", [(2, 6), (3, 7), (4, 9), (5, 9)])
def test_edges_are_single_generators(k, n):
    g = build_digraph(k, n)
    gens = {delta_vector(i, k) for i in range(1, k + 1)}
    for u, out in enumerate(g.adjacency):
        assert len(out) <= k
        for v, i in out:
            d = tuple(b - a for a, b in zip(g.vertices[u], g.vertices[v]))
            assert d in gens and d == delta_vector(i, k)
            assert phi(d) == 1


def test_bfs_basic():
    g = build_digraph(3, 7)
    assert bfs_distance(g, (2, 1, 4), (2, 1, 4)) == 0
    assert bfs_distance(g, (2, 1, 4), (3, 0 + 1, 3)) == phi((1, 0, -1))
    assert bfs_distance(g, (2, 1, 4), (2, 2, 3)) == 1
    with pytest.raises(errors.InvalidStateError):
        bfs_distance(g, (2, 1, 4), (7, 0, 0))


def test_bfs_unreachable_reported():
    g = RearrangementDigraph(2, 3, ((1, 2), (2, 1)), (((1, 1),), ()))
    assert bfs_distance(g, (2, 1), (1, 2)) is None


@pytest.mark.parametrize("k,n", [(2, 5), (3, 7), (3, 9), (4, 8), (4, 9), (5, 10)])
def test_bfs_equals_phi_all_pairs(k, n):
    g = build_digraph(k, n)
    dist = all_pairs_distances(g)
    for u, x in enumerate(g.vertices):
        for v, y in enumerate(g.vertices):
            assert dist[u, v] == phi([b - a for a, b in zip(x, y)]), (x, y)


def test_self_converse():
    assert check_self_converse(build_digraph(3, 7))
    assert check_self_converse(build_digraph(1, 4))
    for n in range(2, 13):
        assert check_self_converse(build_digraph(2, n))
    res = check_self_converse(build_digraph(4, 9))
    assert res.ok and sorted(res.mapping) == list(range(len(res.mapping)))


def test_self_converse_edge_level():
    for k in range(1, 6):
        for n in range(k, 12):
            if count_configurations(k, n) > 10**4:
                continue
            g = build_digraph(k, n)
            edges = set(g.edges())
            rev = {v: g.index(v[::-1]) for v in g.vertices}
            for u, v in edges:
                assert (rev[g.vertices[v]], rev[g.vertices[u]]) in edges


def test_self_converse_detects_violation():
    # drop one edge of (3,7): its mirrored partner is then unmatched
    g = build_digraph(3, 7)
    adj = list(g.adjacency)
    adj[0] = adj[0][1:]
    broken = RearrangementDigraph(g.k, g.n, g.vertices, tuple(adj))
    res = check_self_converse(broken)
    assert not res.ok and res.violation is not None


def test_strongly_connected():
    for k, n in [(2, 3), (3, 7), (4, 9), (5, 8)]:
        assert is_strongly_connected(build_digraph(k, n))


def test_dot_export():
    text = to_dot(build_digraph(2, 3))
    assert text.startswith("digraph")
    assert '"(1,2)" -> "(2,1)"' in text


def test_cap():
    with pytest.raises(errors.StateSpaceTooLarge):
        build_digraph(5, 20, max_vertices=100)
