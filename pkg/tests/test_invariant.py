"""Tests for the group-collapsed weight polytope and invariant channels."""

from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from ldpput.channels import apply_group_element, equivalent, is_ldp, symmetrize
from ldpput.errors import BadSubsetSizeError, DimensionCapError, NotTransitiveError
from ldpput.groups import (
    FiniteAlphabet,
    cyclic_group,
    symmetric_group,
    trivial_group,
)
from ldpput.invariant import (
    enumerate_invariant_vertices,
    in_invariant_polytope,
    input_orbits,
    invariant_extremal_channel,
    invariant_output_action,
    lift_weights,
    make_orbit_weights,
    orbit_coefficients,
    pure_orbit_weights,
    ss_mechanism,
    subset_orbits,
    transitive_vertex_weight,
)
from ldpput.ldp_geometry import (
    canonical_weight,
    enumerate_polytope_vertices,
    extremal_channel,
    in_weight_polytope,
    is_maximal,
)

X3 = FiniteAlphabet.of_size(3)
X4 = FiniteAlphabet.of_size(4)
F = Fraction


# -- orbit bookkeeping --------------------------------------------------------


def test_input_orbits_transitive():
    assert input_orbits(symmetric_group(X3)) == ((0, 1, 2),)
    assert input_orbits(cyclic_group(X4)) == ((0, 1, 2, 3),)


def test_input_orbits_trivial_group():
    assert input_orbits(trivial_group(X3)) == ((0,), (1,), (2,))


def test_subset_orbits_sym3():
    orbs = subset_orbits(symmetric_group(X3))
    assert [o.masks for o in orbs] == [(1, 2, 4), (3, 5, 6)]
    assert [o.representative for o in orbs] == [1, 3]
    assert [o.subset_size for o in orbs] == [1, 2]


def test_subset_orbits_z4():
    orbs = subset_orbits(cyclic_group(X4))
    assert [(o.representative, o.size, o.subset_size) for o in orbs] == [
        (1, 4, 1),
        (3, 4, 2),
        (5, 2, 2),
        (7, 4, 3),
    ]


def test_orbit_coefficients_sym3_pairs():
    group = symmetric_group(X3)
    letters = input_orbits(group)[0]
    k2 = subset_orbits(group)[1]
    oc = orbit_coefficients(group, letters, k2, F(2))
    # each letter lies in comb(m-1, k-1) = 2 of the three pairs
    assert oc.incidence == 2
    assert oc.orbit_size == 3
    assert oc.column_sum == F(2) * 2 + (3 - 2)


@pytest.mark.parametrize("m,k", [(3, 1), (3, 2), (4, 1), (4, 2), (4, 3)])
def test_orbit_coefficients_symmetric_incidence(m, k):
    group = symmetric_group(FiniteAlphabet.of_size(m))
    letters = input_orbits(group)[0]
    orbit = next(o for o in subset_orbits(group) if o.subset_size == k)
    oc = orbit_coefficients(group, letters, orbit, F(3))
    assert oc.incidence == comb(m - 1, k - 1)
    assert oc.orbit_size == comb(m, k)


# -- polytope membership and lifting ------------------------------------------


def test_make_orbit_weights_validates_length():
    with pytest.raises(ValueError):
        make_orbit_weights(symmetric_group(X3), F(2), [F(1, 4)])


def test_in_invariant_polytope_sym3():
    group = symmetric_group(X3)
    assert in_invariant_polytope(make_orbit_weights(group, F(2), [F(1, 4), 0]))
    assert in_invariant_polytope(make_orbit_weights(group, F(2), [0, F(1, 5)]))
    assert not in_invariant_polytope(make_orbit_weights(group, F(2), [F(1, 4), F(1, 5)]))


def test_lift_weights_spreads_orbit_values():
    group = symmetric_group(X3)
    w = make_orbit_weights(group, F(2), [F(1, 4), 0])
    lifted = lift_weights(w)
    assert lifted.values == (F(1, 4), F(1, 4), F(0), F(1, 4), F(0), F(0))


@pytest.mark.parametrize("values", [[F(1, 4), 0], [0, F(1, 5)], [F(1, 8), F(1, 10)]])
def test_lift_membership_consistency(values):
    group = symmetric_group(X3)
    w = make_orbit_weights(group, F(2), values)
    assert in_invariant_polytope(w) == in_weight_polytope(lift_weights(w))


def test_lift_membership_consistency_z4():
    group = cyclic_group(X4)
    t = F(2)
    # mix two orbits: adjacent pairs at half a vertex weight each plus triples
    for values in ([F(1, 5), 0, 0, 0], [0, F(1, 12), F(1, 6), 0], [0, 0, 0, F(1, 7)]):
        w = make_orbit_weights(group, t, values)
        assert in_invariant_polytope(w) == in_weight_polytope(lift_weights(w))


# -- transitive closed form ---------------------------------------------------


def test_transitive_vertex_weight_z4():
    group = cyclic_group(X4)
    t = F(2)
    expected = {1: F(1, 5), 3: F(1, 6), 5: F(1, 3), 7: F(1, 7)}
    for orbit in subset_orbits(group):
        assert transitive_vertex_weight(group, orbit, t) == expected[orbit.representative]


def test_transitive_vertex_weight_formula():
    group = symmetric_group(X4)
    t = F(5, 2)
    for orbit in subset_orbits(group):
        k = orbit.subset_size
        expected = F(4) / (orbit.size * (k * t + 4 - k))
        assert transitive_vertex_weight(group, orbit, t) == expected


def test_transitive_vertex_weight_rejects_intransitive():
    group = trivial_group(X3)
    orbit = subset_orbits(group)[0]
    with pytest.raises(NotTransitiveError):
        transitive_vertex_weight(group, orbit, F(2))


def test_pure_orbit_weights_are_vertices():
    group = cyclic_group(X4)
    t = F(2)
    for i, orbit in enumerate(subset_orbits(group)):
        w = pure_orbit_weights(group, i, t)
        assert in_invariant_polytope(w)
        assert w.values[i] == transitive_vertex_weight(group, orbit, t)
        assert all(v == 0 for j, v in enumerate(w.values) if j != i)


# -- invariant vertex enumeration ---------------------------------------------


def test_invariant_vertices_sym3_frozen():
    verts = enumerate_invariant_vertices(symmetric_group(X3), F(2))
    assert sorted(v.values for v in verts) == [(F(0), F(1, 5)), (F(1, 4), F(0))]


def test_invariant_vertices_z4_frozen():
    verts = enumerate_invariant_vertices(cyclic_group(X4), F(2))
    assert sorted(v.values for v in verts) == [
        (F(0), F(0), F(0), F(1, 7)),
        (F(0), F(0), F(1, 3), F(0)),
        (F(0), F(1, 6), F(0), F(0)),
        (F(1, 5), F(0), F(0), F(0)),
    ]


@pytest.mark.parametrize("m", [3, 4, 5])
def test_transitive_vertices_are_exactly_pure_orbits(m):
    """For transitive groups every reduced vertex is a single-orbit point."""
    group = cyclic_group(FiniteAlphabet.of_size(m))
    t = F(3)
    verts = enumerate_invariant_vertices(group, t)
    orbs = subset_orbits(group)
    assert len(verts) == len(orbs)
    for v in verts:
        support = [i for i, x in enumerate(v.values) if x != 0]
        assert len(support) == 1
        i = support[0]
        assert v.values[i] == transitive_vertex_weight(group, orbs[i], t)


def test_trivial_group_reduction_matches_full():
    """Under the trivial group the reduced polytope is the full polytope."""
    group = trivial_group(X3)
    t = F(2)
    reduced = sorted(lift_weights(v).values for v in enumerate_invariant_vertices(group, t))
    full = sorted(v.values for v in enumerate_polytope_vertices(X3, t))
    assert reduced == full


def test_invariant_enumeration_cap():
    group = trivial_group(FiniteAlphabet.of_size(4))
    with pytest.raises(DimensionCapError):
        enumerate_invariant_vertices(group, F(2), cap=5)


# -- invariant channels -------------------------------------------------------


def test_invariant_extremal_channel_matches_lift():
    group = symmetric_group(X3)
    t = F(2)
    w = make_orbit_weights(group, t, [F(1, 4), 0])
    q = invariant_extremal_channel(w)
    assert equivalent(q, extremal_channel(lift_weights(w)))


def test_invariant_channel_is_maximal_and_invariant():
    group = cyclic_group(X4)
    t = F(2)
    for i in range(len(subset_orbits(group))):
        w = pure_orbit_weights(group, i, t)
        q = invariant_extremal_channel(w)
        assert is_ldp(q, t)
        assert is_maximal(q, t)
        action = invariant_output_action(group, q)
        for g in group.elements:
            assert apply_group_element(g, action, q).rows == q.rows


def test_invariant_channel_symmetrize_equivalent():
    group = symmetric_group(X3)
    t = F(2)
    w = make_orbit_weights(group, t, [0, F(1, 5)])
    q = invariant_extremal_channel(w)
    assert equivalent(symmetrize(group, q), q)


def test_invariant_bijection_roundtrip():
    group = cyclic_group(X4)
    t = F(3)
    for i in range(4):
        w = pure_orbit_weights(group, i, t)
        q = invariant_extremal_channel(w)
        assert canonical_weight(q, t).values == lift_weights(w).values


# -- subset selection mechanism -----------------------------------------------


def test_ss_mechanism_m4_k2_frozen():
    q = ss_mechanism(X4, 2, F(2))
    # weight 4 / (6 * 6) = 1/9; entries t/9 inside the subset, 1/9 outside
    assert q.rows[0] == (F(2, 9), F(2, 9), F(1, 9), F(1, 9))
    assert len(q.rows) == comb(4, 2)
    assert is_maximal(q, F(2))


def test_ss_mechanism_m2_is_rr():
    q = ss_mechanism(FiniteAlphabet.of_size(2), 1, F(3))
    assert sorted(q.rows) == [(F(1, 4), F(3, 4)), (F(3, 4), F(1, 4))]


def test_ss_mechanism_equals_pure_symmetric_orbit():
    group = symmetric_group(X3)
    t = F(2)
    w = make_orbit_weights(group, t, [F(1, 4), 0])
    assert equivalent(ss_mechanism(X3, 1, t), invariant_extremal_channel(w))


def test_ss_mechanism_rejects_bad_k():
    with pytest.raises(BadSubsetSizeError):
        ss_mechanism(X3, 0, F(2))
    with pytest.raises(BadSubsetSizeError):
        ss_mechanism(X3, 3, F(2))
