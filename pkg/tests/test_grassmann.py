import random

import pytest

from grassver.gf import Subspace, enumerate_subspaces, qint
from grassver.geometry import GeometryContext
from grassver.grassmann import (
    EdgeType,
    GrassmannInstance,
    OrbitLabel,
    bfs_distances,
    brute_intersection_numbers,
    classify_orbit,
    closed_structure_constants,
    count_edge_types,
    edge_type,
    edge_type_matches_orbits,
    expected_orbit_sizes,
    graph_distance,
    intersection_numbers,
    structure_constants,
    verify_entry_table,
)


@pytest.fixture(scope="module")
def inst273():
    ctx = GeometryContext(2, 7, 3, dims=())
    return GrassmannInstance(ctx, i=2)


def test_graph_distance_examples():
    ctx = GeometryContext(2, 7, 3, dims=())
    x = Subspace.coordinate_span([0, 1, 2], 2, 7)
    y = Subspace.coordinate_span([4, 5, 6], 2, 7)
    assert graph_distance(x, x, ctx) == 0
    assert graph_distance(x, y, ctx) == 3
    z = Subspace.coordinate_span([0, 1, 3], 2, 7)
    assert graph_distance(x, z, ctx) == 1
    with pytest.raises(ValueError):
        graph_distance(Subspace.coordinate_span([0], 2, 7), x, ctx)


def test_distance_matches_bfs_all_pairs_262():
    ctx = GeometryContext(2, 6, 2, dims=())
    verts = list(enumerate_subspaces(6, 2, 2))
    assert len(verts) == 651
    for src in verts[:3]:
        dist = bfs_distances(src, ctx)
        assert len(dist) == len(verts)
        for v in verts:
            assert dist[v.rows] == graph_distance(src, v, ctx)


def test_distance_matches_bfs_sampled_273():
    ctx = GeometryContext(2, 7, 3, dims=())
    verts = list(enumerate_subspaces(7, 3, 2))
    rng = random.Random(7)
    for src in rng.sample(verts, 2):
        dist = bfs_distances(src, ctx)
        for v in rng.sample(verts, 500):
            assert dist[v.rows] == graph_distance(src, v, ctx)


def test_intersection_numbers_closed_form():
    ctx = GeometryContext(2, 7, 3, dims=())
    assert intersection_numbers(0, ctx) == (210, 0)
    assert intersection_numbers(2, ctx) == (96, 9)
    assert intersection_numbers(1, ctx)[1] == 1
    with pytest.raises(ValueError):
        intersection_numbers(4, ctx)


def test_orbit_sizes(inst273):
    sizes = {l.value: s for l, s in inst273.orbit_sizes().items()}
    assert sizes == {"B": 96, "C": 9, "A0": 9, "A+": 72, "A-": 24}
    assert sum(sizes.values()) == 210  # = b_0
    assert inst273.orbit_sizes() == expected_orbit_sizes(inst273)
    assert brute_intersection_numbers(inst273) == (96, 9)


def test_orbits_partition_neighborhood(inst273):
    orbits = inst273.orbit_partition()
    all_rows = [rows for members in orbits.values() for rows in members]
    assert len(all_rows) == len(set(all_rows)) == 210


def test_classify_orbit_single_vertices(inst273):
    ctx = inst273.ctx
    orbits = inst273.orbit_partition()
    for label, members in orbits.items():
        w = Subspace(2, 7, members[0])
        assert classify_orbit(w, inst273) is label
    far = Subspace.coordinate_span([2, 4, 6], 2, 7)
    if graph_distance(far, inst273.x, ctx) != 1:
        with pytest.raises(ValueError):
            classify_orbit(far, inst273)


def test_structure_constants_table(inst273):
    report = structure_constants(inst273)
    assert report.holds
    assert report.observed == report.expected
    # spot values from the closed-form table at q=2, i=2
    table = closed_structure_constants(2, 7, 3, 2)
    assert table[("B", "C")] == 0
    assert table[("C", "A0")] == 5  # 2q^i - q - 1
    assert table[("A+", "B")] == 8  # q^(i+1)[k-i]
    assert table[("A-", "A-")] == 11  # q[k] - q - 1


def test_edge_type_requires_adjacency(inst273):
    x = inst273.x
    y = inst273.y
    with pytest.raises(ValueError):
        edge_type(x, y, inst273)  # distance 2


def test_edge_type_cross_distance(inst273):
    orbits = inst273.orbit_partition()
    b = Subspace(2, 7, orbits[OrbitLabel.B][0])
    for rows in orbits[OrbitLabel.C]:
        c = Subspace(2, 7, rows)
        if graph_distance(b, c, inst273.ctx) == 1:
            assert edge_type(b, c, inst273) is EdgeType.NOT_EQUIDISTANT
            break


def test_edge_type_table(inst273):
    report = count_edge_types(inst273)
    assert report.holds
    # acceptance spot-checks at (2,7,3,2)
    assert report.observed[("B", "B")] == (13, 16, 0)
    assert report.observed[("C", "C")] == (0, 2, 2)
    assert report.observed[("A0", "A0")] == (4, 0, 0)
    assert report.observed[("A0", "A+")] == (0, 24, 0)
    # q[n-k]-q^i-q = 24; note 3+24+0 = 27 = the (A+,A+) structure constant
    assert report.observed[("A+", "A+")] == (3, 24, 0)
    assert report.observed[("A-", "A-")] == (3, 0, 8)


def test_edge_type_triples_sum_to_structure_constants(inst273):
    # equidistant orbit pairs only: elsewhere no edge gets a type
    et = count_edge_types(inst273).observed
    sc = structure_constants(inst273).observed
    same_dist = {("B", "B"), ("C", "C")} | {
        (a, b) for a in ("A0", "A+", "A-") for b in ("A0", "A+", "A-")}
    for pair in same_dist:
        if pair in et:
            assert sum(et[pair]) == sc[pair], pair


def test_edge_type_consistent_with_orbit_reading(inst273):
    assert edge_type_matches_orbits(inst273)


def test_entry_table(inst273):
    report = verify_entry_table(inst273)
    assert report.holds
    # F+F- and F-F+ entries vanish on every A-class
    for orbit in ("A0", "A+", "A-"):
        assert report.observed[("F+F-", orbit)] == 0
        assert report.observed[("F-F+", orbit)] == 0
    assert report.observed[("F0F0", "A0")] == 4  # 2q^i - q - 2
    assert report.observed[("F+F+", "A0")] == 24  # q^(i+1)[n-k-i]
    assert report.observed[("F0F+", "A+")] == 3  # (q-1)[i]


def test_entry_table_proportionality(inst273):
    # edge double-counts between A0 and A+/A- tie the table cells together
    q, n, k, i = inst273.instance
    rep = verify_entry_table(inst273)
    g = (q - 1) * qint(i, q)
    assert (g * rep.observed[("F0F+", "A0")]
            == q ** (i + 1) * qint(n - k - i, q)
            * rep.observed[("F0F0", "A+")])
    assert (g * rep.observed[("F+F+", "A0")]
            == q ** (i + 1) * qint(n - k - i, q)
            * rep.observed[("F0F+", "A+")])
    assert (g * rep.observed[("F0F-", "A0")]
            == q ** (i + 1) * qint(k - i, q)
            * rep.observed[("F0F0", "A-")])
    assert (g * rep.observed[("F-F-", "A0")]
            == q ** (i + 1) * qint(k - i, q)
            * rep.observed[("F0F-", "A-")])


def test_banded_instance_283():
    ctx = GeometryContext(2, 8, 3, dims=())
    inst = GrassmannInstance(ctx, i=2)
    sizes = {l.value: s for l, s in inst.orbit_sizes().items()}
    assert sizes == {"B": 224, "C": 9, "A0": 9, "A+": 168, "A-": 24}
    assert structure_constants(inst).holds
    assert count_edge_types(inst).holds
    assert verify_entry_table(inst).holds


def test_alternate_x_gives_same_tables(inst273):
    # orbit data must not depend on the representative x
    ctx = inst273.ctx
    alternates = []
    for u in enumerate_subspaces(7, 3, 2):
        if ctx.intersection_dim_with_y(u.rows) == 1 and u != inst273.x:
            alternates.append(u)
        if len(alternates) == 2:
            break
    for x in alternates:
        inst = GrassmannInstance(ctx, x=x)
        assert inst.i == 2
        assert inst.orbit_sizes() == expected_orbit_sizes(inst)
        assert structure_constants(inst).holds


def test_instance_validation():
    with pytest.raises(ValueError):
        GrassmannInstance(GeometryContext(2, 5, 2, dims=()), i=2)  # n<=2k
    ctx = GeometryContext(2, 7, 3, dims=())
    with pytest.raises(ValueError):
        GrassmannInstance(ctx, i=1)  # distance too small
    with pytest.raises(ValueError):
        GrassmannInstance(ctx, i=3)  # distance = k
    with pytest.raises(ValueError):
        GrassmannInstance(ctx)  # neither x nor i


def test_table_record_serialization(inst273):
    rec = structure_constants(inst273).to_record()
    assert rec["record"] == "structure-constants-table"
    assert rec["holds"] is True
    assert rec["instance"] == [2, 7, 3, 2]
    assert rec["observed"]["B|B"] == rec["expected"]["B|B"]
