from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cognipleasure.binning import (
    SSE_TIE_RTOL,
    Binner,
    BinnerKind,
    bin_binary,
    bin_boundaries,
    bin_soft,
    bin_strict,
    kmeans1d,
)

from oracles import brute_force_kmeans


class TestFixedBinners:
    @pytest.mark.parametrize("v, expected", [(2.99, "low"), (3.0, "high"), (5.0, "high"), (0.0, "low")])
    def test_binary(self, v, expected):
        assert bin_binary(v) == expected

    @pytest.mark.parametrize("v, expected", [(2.4, "low"), (2.5, "medium"), (3.5, "medium"), (3.51, "high")])
    def test_soft(self, v, expected):
        assert bin_soft(v) == expected

    @pytest.mark.parametrize(
        "v, expected",
        [(1.9, "low"), (2.49, "low"), (2.5, "medium"), (2.6, "medium"), (3.0, "medium"), (3.49, "medium"),
         (3.5, "high"), (5.0, "high")],
    )
    def test_strict(self, v, expected):
        assert bin_strict(v) == expected

    @pytest.mark.parametrize(
        "v, b1, b2, expected", [(1.0, 1.72, 3.44, "low"), (3.44, 1.72, 3.44, "high"), (2.0, 1.75, 3.43, "medium"),
                                (1.72, 1.72, 3.44, "medium")],
    )
    def test_boundaries(self, v, b1, b2, expected):
        assert bin_boundaries(v, b1, b2) == expected

    def test_boundaries_order(self):
        with pytest.raises(ValueError):
            bin_boundaries(1.0, 3.0, 2.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0, 5))
    def test_total(self, v):
        for b in (Binner("binary"), Binner("soft"), Binner("strict"), Binner("boundaries", (1.7, 3.4))):
            assert b(v) in ("low", "medium", "high")


class TestBinner:
    def test_dispatch(self):
        assert Binner(BinnerKind.SOFT)(3.5) == "medium"
        assert Binner(BinnerKind.BOUNDARIES, (1.72, 3.44))(3.44) == "high"

    @pytest.mark.parametrize("pair", [None, (3.0, 2.0), (1.0, 6.0), (1.0,)])
    def test_invalid_boundaries(self, pair):
        with pytest.raises(ValueError):
            Binner(BinnerKind.BOUNDARIES, pair)


class TestKMeans:
    def test_symmetric(self):
        km = kmeans1d([0, 0, 10, 10, 20, 20], 3)
        np.testing.assert_allclose(km.centroids, [0, 10, 20])
        np.testing.assert_allclose(km.boundaries, [5, 15])

    def test_two_clusters(self):
        km = kmeans1d([1, 1, 1, 5, 5, 5], 2)
        np.testing.assert_allclose(km.centroids, [1, 5])
        np.testing.assert_allclose(km.boundaries, [3])

    def test_mixed_matches_brute_force(self):
        # frozen from the exhaustive oracle: partition {1,2,2} {6,7} {12}
        km = kmeans1d([1, 2, 2, 6, 7, 12], 3)
        assert km.sizes == (3, 2, 1)
        assert km.sse == pytest.approx(7 / 6)
        np.testing.assert_allclose(km.centroids, [5 / 3, 6.5, 12])
        assert brute_force_kmeans([1, 2, 2, 6, 7, 12], 3) == ((3, 2, 1), pytest.approx(7 / 6))

    def test_tie_prefers_small_first_cluster(self):
        assert kmeans1d([0, 1, 2], 2).sizes == (1, 2)
        assert kmeans1d([0, 1, 2, 3], 3).sizes == (1, 1, 2)

    def test_unsorted_input(self):
        assert kmeans1d([20, 0, 10, 0, 20, 10], 3).boundaries == (5.0, 15.0)

    def test_errors(self):
        with pytest.raises(ValueError, match="at least one"):
            kmeans1d([], 3)
        with pytest.raises(ValueError, match="distinct"):
            kmeans1d([2.0, 2.0, 2.0], 3)
        with pytest.raises(ValueError):
            kmeans1d([1.0, np.nan], 1)

    def test_single_cluster(self):
        km = kmeans1d([1.0, 2.0, 3.0], 1)
        assert km.centroids == (2.0,) and km.boundaries == ()

    @settings(max_examples=300, deadline=None)
    @given(
        data=st.lists(st.integers(0, 10).map(lambda i: i / 2), min_size=3, max_size=12),
        k=st.integers(1, 4),
    )
    def test_oracle_equivalence(self, data, k):
        if len(set(data)) < k:
            return
        km = kmeans1d(data, k)
        sizes, sse = brute_force_kmeans(data, k)
        assert km.sizes == sizes
        assert km.sse == pytest.approx(sse, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    # subnormals excluded: a midpoint next to 0 can underflow onto 0 itself
    @given(st.lists(st.floats(0, 5, allow_nan=False, allow_subnormal=False), min_size=3, max_size=40))
    def test_partition_properties(self, data):
        if len(set(data)) < 3:
            return
        km = kmeans1d(data, 3)
        assert all(a < b for a, b in zip(km.boundaries, km.boundaries[1:]))
        x = np.sort(data)
        clusters = np.repeat(np.arange(3), km.sizes)
        # partitions within the SSE tie slack may misplace a point by at most sqrt(slack)
        tol = np.sqrt(SSE_TIE_RTOL * float(((x - x.mean()) ** 2).sum())) + 1e-12
        dist = np.abs(x[:, None] - np.asarray(km.centroids)[None, :])
        assert np.all(dist[np.arange(len(x)), clusters] <= dist.min(axis=1) + tol)
        b1, b2 = km.boundaries
        names = np.array(["low", "medium", "high"])
        binned = np.array([bin_boundaries(v, b1, b2) for v in x])
        near_edge = np.min(np.abs(x[:, None] - np.array([b1, b2])[None, :]), axis=1) <= tol
        assert np.all((binned == names[clusters]) | near_edge)
        np.testing.assert_array_equal(np.asarray(km.labels(x))[~near_edge], clusters[~near_edge])

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(0, 50).map(lambda i: i / 10), min_size=3, max_size=40))
    def test_grid_data_exact_assignment(self, data):
        # rating-like data: every point sits in its own cluster's bin
        if len(set(data)) < 3:
            return
        km = kmeans1d(data, 3)
        x = np.sort(data)
        clusters = np.repeat(np.arange(3), km.sizes)
        np.testing.assert_array_equal(km.labels(x), clusters)
        dist = np.abs(x[:, None] - np.asarray(km.centroids)[None, :])
        assert np.all(dist[np.arange(len(x)), clusters] <= dist.min(axis=1))
