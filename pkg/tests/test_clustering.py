import math

import numpy as np
import pytest

from conftest import make_waypoints
from turnplan.angles import TWO_PI, circular_separation, wrap_angle
from turnplan.clustering import (Cluster, ClusterParams, ClusterPlan, DegenerateMeanError,
                                 center_offset, circular_mean, cluster_points,
                                 order_clusters, reachability_report)
from turnplan.geometry import hemisphere_layout

DEG = math.pi / 180.0


def _singleton(index: int, angle: float) -> Cluster:
    return Cluster(members=(index,), centroid=np.zeros(3), mean_angle=angle)


# --- circular mean ---------------------------------------------------------

def test_circular_mean_single_angle_is_identity():
    for theta in (0.0, 1.0, 3.0, 6.0):
        assert abs(circular_mean([theta]) - theta) < 1e-12


def test_circular_mean_wraps_across_zero():
    # the arithmetic mean would wrongly give 180 degrees here
    assert circular_separation(circular_mean([350.0 * DEG, 10.0 * DEG]), 0.0) < 1e-12


def test_circular_mean_repeated_value():
    assert abs(circular_mean([90.0 * DEG] * 3) - 90.0 * DEG) < 1e-12


def test_circular_mean_rejects_empty_input():
    with pytest.raises(ValueError):
        circular_mean([])


def test_circular_mean_rejects_opposed_angles():
    with pytest.raises(DegenerateMeanError):
        circular_mean([0.0, math.pi])


def test_circular_mean_rotation_equivariant():
    rng = np.random.default_rng(1)
    for _ in range(200):
        angles = rng.uniform(0.0, TWO_PI, int(rng.integers(1, 12)))
        try:
            base = circular_mean(angles)
        except DegenerateMeanError:
            continue
        delta = float(rng.uniform(-10.0, 10.0))
        shifted = circular_mean(np.mod(angles + delta, TWO_PI))
        assert circular_separation(shifted, wrap_angle(base + delta)) < 1e-9


def test_circular_mean_matches_grid_search_argmin():
    grid = np.arange(0.0, TWO_PI, 1e-4)
    rng = np.random.default_rng(2)
    for _ in range(25):
        angles = rng.uniform(0.0, TWO_PI, int(rng.integers(1, 10)))
        try:
            mean = circular_mean(angles)
        except DegenerateMeanError:
            continue
        cost = (1.0 - np.cos(angles[:, None] - grid[None, :])).sum(axis=0)
        best = grid[int(cost.argmin())]
        assert circular_separation(mean, best) < 2e-4


# --- k-means clustering ----------------------------------------------------

def test_cluster_points_singleton():
    clusters = cluster_points([(0.2, 0.1, 0.0)], ClusterParams(k=1, seed=0))
    assert len(clusters) == 1
    assert clusters[0].members == (0,)
    np.testing.assert_allclose(clusters[0].centroid, [0.2, 0.1, 0.0])


def test_cluster_points_separates_well_separated_groups():
    rng = np.random.default_rng(3)
    left = rng.normal((1.0, 0.0, 0.0), 0.02, (8, 3))
    right = rng.normal((-1.0, 0.0, 0.0), 0.02, (8, 3))
    clusters = cluster_points(np.vstack([left, right]), ClusterParams(k=2, seed=5))
    groups = sorted(tuple(sorted(c.members)) for c in clusters)
    assert groups == [tuple(range(8)), tuple(range(8, 16))]


def test_cluster_points_deterministic_for_fixed_seed():
    part = hemisphere_layout(40, 0.15, seed=7)
    positions = np.array([h.origin for h in part.holes])
    a = cluster_points(positions, ClusterParams(k=5, seed=9))
    b = cluster_points(positions, ClusterParams(k=5, seed=9))
    assert [c.members for c in a] == [c.members for c in b]
    for ca, cb in zip(a, b):
        assert np.array_equal(ca.centroid, cb.centroid)
        assert ca.mean_angle == cb.mean_angle


def test_cluster_points_rejects_empty_input():
    with pytest.raises(ValueError):
        cluster_points([], ClusterParams())


def test_cluster_points_fewer_points_than_k_gives_singletons():
    pts = [(0.1, 0.0, 0.0), (0.0, 0.2, 0.0), (0.0, 0.0, 0.3)]
    clusters = cluster_points(pts, ClusterParams(k=5, seed=1))
    assert [c.members for c in clusters] == [(0,), (1,), (2,)]


def test_cluster_points_partition_and_nearest_centroid():
    rng = np.random.default_rng(6)
    for seed in range(10):
        n = int(rng.integers(6, 50))
        pts = rng.uniform(-1.0, 1.0, (n, 3))
        clusters = cluster_points(pts, ClusterParams(k=5, seed=seed))
        members = sorted(i for c in clusters for i in c.members)
        assert members == list(range(n))
        assert all(len(c.members) >= 1 for c in clusters)
        centroids = np.array([c.centroid for c in clusters])
        for ci, cluster in enumerate(clusters):
            for i in cluster.members:
                dists = np.linalg.norm(centroids - pts[i], axis=1)
                assert dists[ci] <= dists.min() + 1e-9


def test_cluster_points_survives_coincident_points():
    pts = np.tile([(0.3, 0.2, 0.1)], (12, 1))
    clusters = cluster_points(pts, ClusterParams(k=4, seed=0))
    assert len(clusters) == 4
    assert sorted(i for c in clusters for i in c.members) == list(range(12))


def test_cluster_mean_angle_uses_member_table_angles():
    # two tight groups at angles ~0 and ~pi/2
    pts = np.array([(1.0, 0.01, 0.0), (1.0, -0.01, 0.0), (0.01, 1.0, 0.5), (-0.01, 1.0, 0.5)])
    clusters = cluster_points(pts, ClusterParams(k=2, seed=2))
    angles = sorted(c.mean_angle for c in clusters)
    assert circular_separation(angles[0], 0.0) < 0.05
    assert circular_separation(angles[1], math.pi / 2.0) < 0.05


def test_cluster_points_opposed_angles_fall_back_instead_of_raising():
    # both points in one cluster with table angles 0 and pi
    pts = np.array([(1.0, 0.0, 0.0), (-1.0, 0.0, 0.0)])
    clusters = cluster_points(pts, ClusterParams(k=1, seed=0))
    assert clusters[0].mean_angle == 0.0  # lowest-index member's angle


# --- cluster ordering ------------------------------------------------------

def test_order_clusters_single_cluster():
    plan = order_clusters([_singleton(0, math.pi)], start_angle=0.0)
    assert plan.rotation_deltas == (math.pi,)
    assert abs(plan.total_rotation - math.pi) < 1e-12


def test_order_clusters_ascending_with_hand_deltas():
    clusters = [_singleton(0, 10 * DEG), _singleton(1, 200 * DEG), _singleton(2, 100 * DEG)]
    plan = order_clusters(clusters, start_angle=0.0)
    assert [c.mean_angle for c in plan.clusters] == [10 * DEG, 100 * DEG, 200 * DEG]
    np.testing.assert_allclose(plan.rotation_deltas, [10 * DEG, 90 * DEG, 100 * DEG])
    assert abs(plan.total_rotation - 200 * DEG) < 1e-9


def test_order_clusters_never_rotates_backwards():
    clusters = [_singleton(0, 350 * DEG), _singleton(1, 5 * DEG)]
    plan = order_clusters(clusters, start_angle=0.0)
    assert [c.mean_angle for c in plan.clusters] == [5 * DEG, 350 * DEG]
    assert abs(plan.total_rotation - 350 * DEG) < 1e-9


def test_order_clusters_permutation_and_single_revolution():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        clusters = [_singleton(i, float(rng.uniform(0.0, TWO_PI))) for i in range(n)]
        start = float(rng.uniform(0.0, TWO_PI))
        plan = order_clusters(clusters, start_angle=start)
        assert sorted(c.members[0] for c in plan.clusters) == list(range(n))
        assert plan.total_rotation <= TWO_PI + 1e-9
        assert all(0.0 <= d < TWO_PI for d in plan.rotation_deltas)


def test_order_clusters_rejects_empty_list():
    with pytest.raises(ValueError):
        order_clusters([], start_angle=0.0)


def test_center_offset_cases():
    assert center_offset(_singleton(0, 1.25), 1.25) == 0.0
    assert abs(center_offset(_singleton(0, 90 * DEG), 0.0) - 270 * DEG) < 1e-12
    assert abs(center_offset(_singleton(0, 300 * DEG), 0.0) - 60 * DEG) < 1e-12


def test_center_offset_always_in_range():
    rng = np.random.default_rng(8)
    for _ in range(100):
        offset = center_offset(_singleton(0, float(rng.uniform(0.0, TWO_PI))),
                               float(rng.uniform(-10.0, 10.0)))
        assert 0.0 <= offset < TWO_PI


# --- reachability ----------------------------------------------------------

def _plan_of_one_cluster(angles, mean_angle):
    waypoints = make_waypoints([(math.cos(a), math.sin(a), 0.0) for a in angles])
    cluster = Cluster(members=tuple(range(len(angles))), centroid=np.zeros(3),
                      mean_angle=mean_angle)
    plan = ClusterPlan(clusters=(cluster,), rotation_deltas=(0.0,), total_rotation=0.0)
    return plan, waypoints


def test_reachability_zero_extent():
    plan, wps = _plan_of_one_cluster([1.0, 1.0], mean_angle=1.0)
    (entry,) = reachability_report(plan, wps, ClusterParams())
    assert entry.extent < 1e-12
    assert entry.within_bound


def test_reachability_within_bound():
    mean = 2.0
    plan, wps = _plan_of_one_cluster([mean - 30 * DEG, mean + 30 * DEG], mean_angle=mean)
    (entry,) = reachability_report(plan, wps, ClusterParams())
    assert abs(entry.extent - 30 * DEG) < 1e-9
    assert entry.within_bound


def test_reachability_flags_violation():
    mean = 2.0
    plan, wps = _plan_of_one_cluster([mean - 50 * DEG, mean + 50 * DEG], mean_angle=mean)
    (entry,) = reachability_report(plan, wps, ClusterParams())
    assert abs(entry.extent - 50 * DEG) < 1e-9
    assert not entry.within_bound


# --- plan invariants -------------------------------------------------------

def test_cluster_plan_rejects_duplicated_members():
    clusters = (_singleton(0, 0.1), _singleton(0, 0.2))
    with pytest.raises(ValueError):
        ClusterPlan(clusters=clusters, rotation_deltas=(0.1, 0.1), total_rotation=0.2)


def test_cluster_plan_rejects_excess_rotation():
    clusters = (_singleton(0, 0.1), _singleton(1, 0.2))
    with pytest.raises(ValueError):
        ClusterPlan(clusters=clusters, rotation_deltas=(5.0, 5.0), total_rotation=10.0)
