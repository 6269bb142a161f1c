"""Shared fixtures and random-instance builders for the test suite."""

import numpy as np
import pytest

import cknntda as ck


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)


def random_points(rng, n, dim=2, spread=1.0):
    """Gaussian cloud with no duplicate points (almost surely)."""
    return spread * rng.standard_normal((n, dim))


def random_filtration(rng, n, method="fixed_eps", dim=2):
    """Complete edge ordering of a random Gaussian cloud."""
    d = ck.pairwise_distances(random_points(rng, n, dim))
    if method == "fixed_eps":
        return ck.fixed_eps_filtration(d)
    k = min(3, n - 1)
    return ck.cknn_filtration(d, ck.knn_bandwidth(d, k))


def random_graph(rng, n, p=0.3):
    """Erdos-Renyi adjacency as a Graph."""
    upper = np.triu(rng.random((n, n)) < p, k=1)
    return ck.Graph(adjacency=upper | upper.T)
