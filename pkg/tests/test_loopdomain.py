import cmath
import itertools
import math
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_closed_loops, unpruned_configs
from parafermion.errors import DomainError
from parafermion.loopdomain import (E, N, S, STATES, W, LatticePath, build_domain, config_table,
                                    contour_residuals, enumerate_configs, max_relative_residual,
                                    observable, observable_from_table, partition_function,
                                    vertex_contour_residual, winding_angle)
from parafermion.params import fugacity_from_lambda, spectral_from_angle, spin
from parafermion.weights import boltzmann_weights

PI = math.pi


@lru_cache(maxsize=None)
def oracle(width, height, source):
    return unpruned_configs(width, height, STATES, source)


def library(width, height, source):
    dom = build_domain(width, height)
    return sorted(c.vertex_states for c in enumerate_configs(dom, source))


def critical(lam, theta, du=0.0):
    sigma = spin(lam)
    u = spectral_from_angle(sigma, theta) + du
    return boltzmann_weights(lam, u), fugacity_from_lambda(lam), sigma


# -- domain geometry ---------------------------------------------------------

def test_build_domain_geometry():
    dom = build_domain(2, 3, PI / 3)
    assert len(dom.vertices) == 6
    assert dom.position(1, 2) == pytest.approx(1 + 2 * cmath.exp(1j * PI / 3))
    assert dom.direction(N) == pytest.approx(cmath.exp(1j * PI / 3))
    assert dom.direction(S) == pytest.approx(-cmath.exp(1j * PI / 3))
    # internal (W-1)H + W(H-1) plus boundary 2(W+H)
    assert len(dom.mid_edges) == 3 + 4 + 10
    assert len(dom.boundary_mid_edges) == 10
    me = dom.mid_edge(1, 0, W)
    assert me == (0, 0, E)
    assert dom.mid_edge_position(me) == pytest.approx(0.5)
    assert dom.mid_edge_coords((1, 2, N)) == (1.0, 2.5)


def test_build_domain_rejects():
    for args in [(0, 2), (2, -1), (2, 2, 0.0), (2, 2, PI)]:
        with pytest.raises(DomainError):
            build_domain(*args)


def test_interior_vertices():
    assert build_domain(3, 3).interior_vertices == [(1, 1)]
    assert build_domain(2, 3).interior_vertices == []
    assert build_domain(4, 3).interior_vertices == [(1, 1), (2, 1)]


# -- winding -----------------------------------------------------------------

def test_winding_examples():
    assert winding_angle(LatticePath((1, 1j, -1))) == pytest.approx(PI)
    assert winding_angle(LatticePath((1, 1j, 1))) == pytest.approx(0.0)
    assert winding_angle(LatticePath((1, -1j))) == pytest.approx(-PI / 2)
    assert winding_angle(LatticePath((1, 1j, -1, -1j, 1))) == pytest.approx(2 * PI)
    e = cmath.exp(1j * 0.4)
    assert winding_angle(LatticePath((1, e))) == pytest.approx(0.4)
    assert winding_angle(LatticePath((1, -e))) == pytest.approx(0.4 - PI)


# -- enumeration -------------------------------------------------------------

def test_single_vertex():
    dom = build_domain(1, 1)
    configs = list(enumerate_configs(dom))
    assert [c.vertex_states for c in configs] == [(0,)]
    straight = list(enumerate_configs(dom, (0, 0, W), sink=(0, 0, E)))
    assert [c.vertex_states for c in straight] == [(5,)]
    assert straight[0].path.end == (0, 0, E)
    assert len(list(enumerate_configs(dom, (0, 0, W)))) == 3


def test_source_must_be_boundary():
    with pytest.raises(DomainError):
        list(enumerate_configs(build_domain(2, 2), (0, 0, E)))


@pytest.mark.parametrize("source", [None, (0, 0, W), (0, 0, S), (1, 1, N), (1, 0, E)])
def test_oracle_equivalence_2x2(source):
    assert library(2, 2, source) == oracle(2, 2, source)


@pytest.mark.parametrize("shape, source", [((2, 3), None), ((2, 3), (0, 1, W)), ((3, 2), (1, 0, S))])
def test_oracle_equivalence_larger(shape, source):
    assert library(*shape, source) == oracle(*shape, source)


def test_closed_loop_counts_match_oracle():
    dom = build_domain(2, 3)
    for c in enumerate_configs(dom):
        assert c.P == count_closed_loops(2, 3, STATES, c.vertex_states)


def test_occupation_numbers():
    dom = build_domain(2, 2)
    for c in enumerate_configs(dom, (0, 0, W)):
        assert sum(c.m) == 4
        assert list(c.m) == list(np.bincount(c.vertex_states, minlength=9))


# -- partition function ------------------------------------------------------

def test_partition_function_examples():
    w, n, _ = critical(PI / 8, PI / 2)
    assert partition_function(build_domain(1, 1), w, n) == pytest.approx(w[0])
    # unit weights: n = 1 counts configurations, n = 0 keeps only the empty one
    ones = np.ones(9)
    assert partition_function(build_domain(2, 2), ones, 1.0) == len(oracle(2, 2, None))
    assert partition_function(build_domain(2, 2), ones, 0.0) == 1.0


@pytest.mark.parametrize("lam, theta", [(PI / 8, PI / 2), (0.3, 1.1)])
def test_partition_function_against_oracle(lam, theta):
    w, n, _ = critical(lam, theta)
    expected = math.fsum(
        np.prod([w[s] for s in a]) * n ** count_closed_loops(2, 3, STATES, a)
        for a in oracle(2, 3, None))
    dom = build_domain(2, 3, theta)
    assert partition_function(dom, w, n) == pytest.approx(expected, rel=1e-13)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.01, 2.0), min_size=6, max_size=6), st.integers(0, 5),
       st.floats(0.01, 1.0), st.floats(0.0, 2.0))
def test_partition_function_monotone(r, k, bump, n):
    dom = build_domain(2, 2)
    rho = np.array([r[0], r[1], r[1], r[2], r[2], r[3], r[3], r[4], r[5]])
    rho2 = rho.copy()
    idx = [[0], [1, 2], [3, 4], [5, 6], [7], [8]][k]
    rho2[idx] += bump
    assert partition_function(dom, rho2, n) >= partition_function(dom, rho, n)
    assert partition_function(dom, rho, n + bump) >= partition_function(dom, rho, n)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 5.0))
def test_homogeneity(alpha):
    dom = build_domain(2, 2)
    w, n, sigma = critical(0.3, 1.1)
    assert partition_function(dom, alpha * w.rho, n) == pytest.approx(
        alpha ** 4 * partition_function(dom, w, n), rel=1e-12)
    f1 = observable(dom, w, n, sigma, (0, 0, W))
    f2 = observable(dom, alpha * w.rho, n, sigma, (0, 0, W))
    for me, v in f1.values.items():
        assert f2[me] == pytest.approx(alpha ** 4 * v, rel=1e-12, abs=1e-300)


# -- observable --------------------------------------------------------------

def test_single_vertex_observable():
    theta = 1.2
    w, n, sigma = critical(0.3, theta)
    f = observable(build_domain(1, 1, theta), w, n, sigma, (0, 0, W))
    assert f[(0, 0, E)] == pytest.approx(w[5])
    assert f[(0, 0, N)] == pytest.approx(w[3] * cmath.exp(-1j * sigma * theta))
    assert f[(0, 0, S)] == pytest.approx(w[2] * cmath.exp(1j * sigma * (PI - theta)))
    assert set(f.values) == {(0, 0, E), (0, 0, N), (0, 0, S)}


def test_counting_limit():
    # sigma = 0, n = 1, unit weights: F(z) counts configurations ending at z
    dom = build_domain(3, 2)
    src = (0, 0, W)
    f = observable(dom, np.ones(9), 1.0, 0.0, src)
    for me in dom.mid_edges:
        if me == src:
            continue
        count = len(list(enumerate_configs(dom, src, sink=me)))
        assert f[me] == pytest.approx(count)


def test_observable_from_table_is_deterministic():
    dom = build_domain(3, 3)
    w, n, sigma = critical(PI / 8, PI / 2)
    fresh = config_table.__wrapped__(dom, (0, 1, W))
    a = observable_from_table(fresh, w, n, sigma)
    b = observable(dom, w, n, sigma, (0, 1, W))
    assert a.values == b.values


def test_workers_match_serial():
    dom = build_domain(3, 2)
    t1 = config_table.__wrapped__(dom, (0, 0, W), 1)
    t2 = config_table.__wrapped__(dom, (0, 0, W), 2)
    np.testing.assert_array_equal(t1.counts, t2.counts)
    np.testing.assert_array_equal(t1.loops, t2.loops)
    np.testing.assert_array_equal(t1.winding, t2.winding)
    assert t1.ends == t2.ends


def test_boundary_vertex_residual_raises():
    dom = build_domain(3, 3)
    w, n, sigma = critical(PI / 8, PI / 2)
    f = observable(dom, w, n, sigma, (0, 1, W))
    with pytest.raises(DomainError):
        vertex_contour_residual(f, (0, 0), PI / 2)


@pytest.mark.parametrize("lam, theta", [(PI / 8, PI / 2), (PI / 8, 0.45 * PI), (0.3, 1.1), (PI / 5, 2.0)])
def test_contour_identity(lam, theta):
    w, n, sigma = critical(lam, theta)
    f = observable(build_domain(3, 3, theta), w, n, sigma, (0, 1, W))
    assert max_relative_residual(f) < 1e-12
    assert set(contour_residuals(f)) == {(1, 1)}


@pytest.mark.parametrize("source", [(0, 1, W), (1, 0, S), (2, 2, N)])
def test_contour_identity_other_sources(source):
    theta = 0.45 * PI
    w, n, sigma = critical(PI / 8, theta)
    f = observable(build_domain(3, 3, theta), w, n, sigma, source)
    assert max_relative_residual(f) < 1e-12


def test_contour_identity_fails_off_criticality():
    w, n, sigma = critical(PI / 8, PI / 2, du=0.2)
    f = observable(build_domain(3, 3), w, n, sigma, (0, 1, W))
    assert max_relative_residual(f) > 1e-4


def _candidate_maps():
    """All placements of the weight classes on the local states that respect
    the equalities among weights: single-arc states go in pairs to the three
    doubly-degenerate weight classes, the two double-elbow states to the two
    remaining weights."""
    seen = set()
    for perm in itertools.permutations(range(1, 7)):
        pairs = tuple(frozenset(perm[k:k + 2]) for k in (0, 2, 4))
        if pairs in seen:
            continue
        seen.add(pairs)
        for double in ((7, 8), (8, 7)):
            state_map = [0] * 9
            for slot, pair in enumerate(pairs):
                for s, col in zip(sorted(pair), (1 + 2 * slot, 2 + 2 * slot)):
                    state_map[s] = col
            state_map[7], state_map[8] = double
            yield tuple(state_map)


def test_state_assignment_is_unique():
    theta = 0.45 * PI
    w, n, sigma = critical(PI / 8, theta)
    table = config_table(build_domain(3, 3, theta), (0, 1, W))
    maps = list(_candidate_maps())
    assert len(maps) == 180
    good = [m for m in maps if max_relative_residual(observable_from_table(table, w, n, sigma, m)) < 1e-9]
    assert good == [tuple(range(9))]
