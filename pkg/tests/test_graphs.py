"""Tests for decorated dual graphs and fixed-locus graphs: validation,
stability, tail contraction, marking conversion, enumeration against a
brute-force oracle, automorphism factors, and the partial order."""

from fractions import Fraction as Frac
import json

import pytest
from hypothesis import given, settings, strategies as st

from helpers_graphs import brute_loc_graphs
from glsmx import graphs as G
from glsmx.errors import (
    BoundsExceeded,
    ConfigError,
    NotInfinityStable,
    WrongMultiplicity,
)
from glsmx.model import GEOMETRIC, LG, GlsmModel, isotropy_order

QUINTIC = GlsmModel((1, 1, 1, 1, 1), 1, 5, LG)
QUINTIC_25 = GlsmModel((1, 1, 1, 1, 1), 1, 5, LG, Frac(2, 5))
QUINTIC_23 = GlsmModel((1, 1, 1, 1, 1), 1, 5, LG, Frac(2, 3))
QUINTIC_GEO_25 = GlsmModel((1, 1, 1, 1, 1), 1, 5, GEOMETRIC, Frac(2, 5))


# ---------------------------------------------------------------------------
# validation


def test_validate_single_vertex_with_leg():
    g = G.DualGraph((G.Vertex(1, 0, ((1, Frac(1, 5)),)),), ())
    assert G.validate(QUINTIC, g) == []


def test_validate_edge_condition_violation():
    g = G.DualGraph(
        (G.Vertex(1, 0), G.Vertex(1, 0)),
        (G.Edge((0, 1), (Frac(1, 5), Frac(3, 5))),),
    )
    out = G.validate(QUINTIC, g)
    assert any("not integral" in v and "edge 0" in v for v in out)


def test_extra_edge_adds_to_total_genus():
    g = G.DualGraph(
        (G.Vertex(0, 0, ((1, Frac(2, 5)),)), G.Vertex(0, 0, ((2, Frac(2, 5)),))),
        (
            G.Edge((0, 1), (Frac(1, 5), Frac(4, 5))),
            G.Edge((0, 1), (Frac(2, 5), Frac(3, 5))),
        ),
    )
    assert G.first_betti(g) == 1
    assert G.total_genus(g) == 1


def test_validate_catches_vertex_defect():
    g = G.DualGraph((G.Vertex(1, 0, ((1, Frac(2, 5)),)),), ())
    out = G.validate(QUINTIC, g)
    assert any("defect" in v for v in out)


def test_validate_loc_graph_levels_and_delta():
    # both ends at the same level, and a missing covering degree
    bad = G.LocGraph(
        (
            G.Vertex(1, 0, (), 0, G.LEVEL_ZERO),
            G.Vertex(1, 0, (), 0, G.LEVEL_ZERO),
        ),
        (G.Edge((0, 1), (Frac(0), Frac(0))),),
    )
    out = G.validate(QUINTIC_25, bad)
    assert any("both ends at level" in v for v in out)
    assert any("covering degree" in v for v in out)


def test_validate_disconnected():
    g = G.DualGraph((G.Vertex(1, 0), G.Vertex(2, 0)), ())
    assert any("not connected" in v for v in G.validate(QUINTIC, g))


def test_validate_duplicate_labels():
    g = G.DualGraph(
        (G.Vertex(2, 0, ((1, Frac(0)), (1, Frac(0)))),), ()
    )
    assert any("duplicate" in v for v in G.validate(QUINTIC, g))


# ---------------------------------------------------------------------------
# component stability


def test_stability_order_bound_beats_ampleness():
    # degree passes the ampleness test at epsilon=2 but the basepoint does not
    assert G.epsilon_stable(0, 1, 1, 2, basepoint_orders=()) is True
    assert G.epsilon_stable(0, 1, 1, 2, basepoint_orders=(1,)) is False


def test_stability_small_epsilon_tail():
    assert G.epsilon_stable(0, 1, 1, Frac(1, 3)) is False
    assert G.epsilon_stable(0, 1, 2, Frac(1, 3)) is True


def test_stability_high_genus():
    for eps in (None, Frac(1, 3), 2, Frac(7, 2)):
        assert G.epsilon_stable(2, 0, 0, eps) is True


def test_stability_infinity_chamber():
    assert G.epsilon_stable(0, 1, 1, None) is True
    assert G.epsilon_stable(0, 0, 2, None) is False
    assert G.epsilon_stable(0, 1, 1, None, basepoint_orders=(1,)) is False


def test_stability_light_marking():
    # one marking of weight 1/2 on a three-pointed rational component
    assert G.epsilon_stable(
        0, 0, 3, Frac(2, 3), light_delta=Frac(1, 2), light_markings=1
    ) is True
    assert G.epsilon_stable(
        0, 0, 2, Frac(2, 3), light_delta=Frac(1, 2), light_markings=1
    ) is False
    with pytest.raises(ConfigError):
        G.epsilon_stable(0, 0, 2, Frac(2, 3), light_markings=1)


# ---------------------------------------------------------------------------
# contraction


def _tail_on_anchor():
    # anchor of genus 2 and degree 1 with one unstable rational tail
    anchor = G.Vertex(2, 1)
    tail = G.Vertex(0, 1)
    edge = G.Edge((0, 1), (Frac(2, 5), Frac(3, 5)))
    return G.DualGraph((anchor, tail), (edge,))


def test_contract_single_pass():
    g = _tail_on_anchor()
    assert G.validate(QUINTIC, g) == []
    rec = G.contract_c(QUINTIC, g, Frac(1, 4))
    assert len(rec.graph.vertices) == 1
    assert rec.graph.vertices[0] == G.Vertex(2, 1)
    assert rec.basepoints == (G.Basepoint(0, 1, Frac(0)),)
    assert G.is_contraction_fixpoint(QUINTIC, rec, Frac(1, 4))


def _two_tail_chain():
    main = G.Vertex(2, 0)
    inner = G.Vertex(0, 1)
    outer = G.Vertex(0, 1)
    e_main = G.Edge((0, 1), (Frac(3, 5), Frac(2, 5)))
    e_out = G.Edge((1, 2), (Frac(2, 5), Frac(3, 5)))
    return G.DualGraph((main, inner, outer), (e_main, e_out))


def test_contract_cascades_two_passes():
    g = _two_tail_chain()
    assert G.validate(QUINTIC, g) == []
    rec = G.contract_c(QUINTIC, g, Frac(1, 4))
    assert len(rec.graph.vertices) == 1
    assert rec.basepoints == (G.Basepoint(0, 2, Frac(0)),)
    # conservation: surviving degree plus orders equals the input degree
    total = G.total_degree(rec.graph) + sum(b.order for b in rec.basepoints)
    assert total == G.total_degree(g)


def test_contract_identity_for_large_epsilon():
    g = _tail_on_anchor()
    for eps in (2, None):
        rec = G.contract_c(QUINTIC, g, eps)
        assert rec.graph == g
        assert rec.basepoints == ()


def test_contract_rejects_unstable_input():
    bad = G.DualGraph(
        (G.Vertex(2, 0), G.Vertex(0, 0)),
        (G.Edge((0, 1), (Frac(3, 5), Frac(2, 5))),),
    )
    with pytest.raises(NotInfinityStable):
        G.contract_c(QUINTIC, bad, Frac(1, 4))


def test_contract_rejects_record_with_basepoints():
    rec = G.contract_c(QUINTIC, _tail_on_anchor(), Frac(1, 4))
    with pytest.raises(NotInfinityStable):
        G.contract_c(QUINTIC, rec, Frac(1, 4))


def test_contract_accepts_clean_record():
    g = _tail_on_anchor()
    rec = G.contract_c(QUINTIC, g, 2)
    assert rec.basepoints == ()
    again = G.contract_c(QUINTIC, rec, Frac(1, 4))
    assert again.basepoints == (G.Basepoint(0, 1, Frac(0)),)


# ---------------------------------------------------------------------------
# marking conversion


def test_convert_marking_on_stable_vertex():
    g = G.DualGraph((G.Vertex(2, 0, ((1, Frac(3, 5)),)),), ())
    assert G.validate(QUINTIC, g) == []
    rec = G.convert_markings_b(QUINTIC, g, [2], Frac(1, 4))
    assert rec.graph.vertices == (G.Vertex(2, 0),)
    assert rec.basepoints == (G.Basepoint(0, 2, Frac(0)),)


def test_convert_marking_cascades():
    main = G.Vertex(2, 0)
    carrier = G.Vertex(0, 0, ((1, Frac(3, 5)),))
    edge = G.Edge((0, 1), (Frac(3, 5), Frac(2, 5)))
    g = G.DualGraph((main, carrier), (edge,))
    assert G.validate(QUINTIC, g) == []
    rec = G.convert_markings_b(QUINTIC, g, [2], Frac(1, 4))
    assert len(rec.graph.vertices) == 1
    assert rec.basepoints == (G.Basepoint(0, 2, Frac(0)),)


def test_convert_no_markings_is_identity():
    g = _tail_on_anchor()
    rec = G.convert_markings_b(QUINTIC, g, [], Frac(1, 4))
    assert rec.graph == g
    assert rec.basepoints == ()


def test_convert_rejects_wrong_multiplicity():
    g = G.DualGraph((G.Vertex(2, 0, ((1, Frac(2, 5)),)),), ())
    with pytest.raises(WrongMultiplicity):
        G.convert_markings_b(QUINTIC, g, [2], Frac(1, 4))


def test_convert_rejects_too_many_orders():
    g = G.DualGraph((G.Vertex(2, 0, ((1, Frac(3, 5)),)),), ())
    with pytest.raises(ConfigError):
        G.convert_markings_b(QUINTIC, g, [2, 1], Frac(1, 4))


def test_convert_takes_last_legs_by_label():
    # two markings; only the higher label is converted
    v = G.Vertex(2, 0, ((1, Frac(1, 5)), (2, Frac(3, 5))))
    g = G.DualGraph((v,), ())
    assert G.validate(QUINTIC, g) == []
    rec = G.convert_markings_b(QUINTIC, g, [2], Frac(1, 4))
    assert rec.graph.vertices[0].legs == ((1, Frac(1, 5)),)
    assert rec.basepoints == (G.Basepoint(0, 2, Frac(0)),)


@given(
    degrees=st.lists(st.integers(1, 3), min_size=1, max_size=3),
    eps=st.sampled_from([None, Frac(1, 4), Frac(2, 5), Frac(2, 3), Frac(3, 2)]),
)
@settings(deadline=None, max_examples=60)
def test_contract_chain_properties(degrees, eps):
    # a genus-2 anchor followed by a chain of rational tails; edge i joins
    # vertex i to vertex i+1 and the multiplicities are solved from the far
    # end inward
    model = QUINTIC
    d = model.d
    k = len(degrees)
    out_side = [None] * k
    in_side = [None] * k
    out_side[k - 1] = Frac(-degrees[-1] - 1, d) % 1
    for i in range(k - 1, 0, -1):
        in_side[i] = (-out_side[i]) % 1
        out_side[i - 1] = (Frac(-degrees[i - 1], d) - in_side[i]) % 1
    in_side[0] = (-out_side[0]) % 1
    anchor_leg = (Frac(4, d) - in_side[0]) % 1
    vertices = [G.Vertex(2, 0, ((1, anchor_leg),))]
    vertices += [G.Vertex(0, b) for b in degrees]
    edges = [
        G.Edge((i, i + 1), (in_side[i], out_side[i])) for i in range(k)
    ]
    graph = G.DualGraph(tuple(vertices), tuple(edges))
    assert G.validate(model, graph) == []
    rec = G.contract_c(model, graph, eps)
    conserved = G.total_degree(rec.graph) + sum(b.order for b in rec.basepoints)
    assert conserved == G.total_degree(graph)
    assert G.is_contraction_fixpoint(model, rec, eps)
    hosted = {}
    for b in rec.basepoints:
        hosted.setdefault(b.host, []).append(b.order)
    for vi, v in enumerate(rec.graph.vertices):
        # component degree includes the basepoints sitting on it
        assert G.epsilon_stable(
            v.genus,
            v.degree + sum(hosted.get(vi, ())),
            G.vertex_valence(rec.graph, vi),
            eps,
            hosted.get(vi, ()),
        )
    if eps is None:
        assert rec.graph == graph and rec.basepoints == ()


# ---------------------------------------------------------------------------
# enumeration


def _check_outputs(model, out, g, n, beta, delta):
    for lam in out:
        assert G.validate(model, lam) == []
        assert G.total_genus(lam) == g
        assert len(G.global_legs(lam)) == n
        assert G.total_degree(lam) == beta
        assert G.total_edge_degree(lam) == delta
        for e in lam.edges:
            assert (e.mults[0] + e.mults[1]).denominator == 1
            assert isotropy_order(model.d, e.mults[0]) == isotropy_order(
                model.d, e.mults[1]
            )


def test_enumerate_single_marking_two_graphs():
    out = G.enumerate_loc_graphs(QUINTIC_25, 0, 1, 0, 1)
    assert len(out) == 2
    _check_outputs(QUINTIC_25, out, 0, 1, 0, 1)
    carrier_levels = set()
    for lam in out:
        (label, mult, vi) = G.global_legs(lam)[0]
        carrier_levels.add(lam.vertices[vi].level)
        assert mult == Frac(4, 5)
    assert carrier_levels == {G.LEVEL_ZERO, G.LEVEL_INF}


def test_enumerate_unstable_isolated_vertex_excluded():
    # degree 3 exceeds both 1/eps and the stability bound at level zero,
    # so only the level-infinity configuration survives
    out = G.enumerate_loc_graphs(QUINTIC_25, 0, 0, 3, 0)
    assert len(out) == 1
    assert out[0].vertices[0].level == G.LEVEL_INF


def test_enumerate_remark_basepoint_bound():
    out = G.enumerate_loc_graphs(QUINTIC_25, 0, 1, 2, 1)
    _check_outputs(QUINTIC_25, out, 0, 1, 2, 1)
    for lam in out:
        for vi in range(len(lam.vertices)):
            role = G.classify_vertex(QUINTIC_25, lam, vi, Frac(2, 5))
            assert role is not None
            # no edge may carry a basepoint order at or above its covering
            # degree, which at delta=1 rules basepoints out entirely
            assert role != "basepoint"
    assert len(out) == 4


@pytest.mark.parametrize(
    "model,lg,g,n,beta,delta",
    [
        (QUINTIC_25, True, 0, 1, 0, 1),
        (QUINTIC_25, True, 0, 0, 3, 0),
        (QUINTIC_25, True, 1, 1, 0, 0),
        (QUINTIC_25, True, 0, 1, 2, 1),
        (QUINTIC_25, True, 1, 0, 1, 1),
        (QUINTIC_25, True, 0, 2, 0, 2),
        (QUINTIC_23, True, 0, 0, 2, 1),
        (QUINTIC_GEO_25, False, 0, 1, 0, 1),
        (QUINTIC_GEO_25, False, 0, 0, 2, 2),
    ],
)
def test_enumerate_matches_brute_force(model, lg, g, n, beta, delta):
    out = G.enumerate_loc_graphs(model, g, n, beta, delta)
    _check_outputs(model, out, g, n, beta, delta)
    oracle = brute_loc_graphs(model.d, lg, model.epsilon, g, n, beta, delta)
    assert len(out) == len(oracle)


def test_enumerate_bounds_and_errors():
    with pytest.raises(BoundsExceeded):
        G.enumerate_loc_graphs(QUINTIC_25, 3, 0, 0, 0)
    with pytest.raises(BoundsExceeded):
        G.enumerate_loc_graphs(QUINTIC_25, 0, 0, 7, 0)
    with pytest.raises(ConfigError):
        G.enumerate_loc_graphs(QUINTIC_25, 0, -1, 0, 0)


# ---------------------------------------------------------------------------
# automorphisms and the covering-degree factor


def test_aut_degree_single_nontrivial_node():
    lam = G.LocGraph(
        (
            G.Vertex(1, 0, (), 0, G.LEVEL_ZERO),
            G.Vertex(1, 1, (), 0, G.LEVEL_INF),
        ),
        (G.Edge((0, 1), (Frac(1, 5), Frac(0)), 1),),
    )
    assert G.aut_degree(QUINTIC, lam) == (1, Frac(1, 5))
    dual = G.DualGraph(
        (G.Vertex(1, 0), G.Vertex(2, 1)),
        (G.Edge((0, 1), (Frac(1, 5), Frac(0))),),
    )
    assert G.aut_degree(QUINTIC, dual) == (1, Frac(1, 5))


def test_aut_degree_parallel_edges():
    lam = G.LocGraph(
        (
            G.Vertex(1, 0, (), 0, G.LEVEL_ZERO),
            G.Vertex(1, 0, (), 0, G.LEVEL_INF),
        ),
        (
            G.Edge((0, 1), (Frac(0), Frac(0)), 1),
            G.Edge((0, 1), (Frac(0), Frac(0)), 1),
        ),
    )
    assert G.aut_degree(QUINTIC, lam) == (2, Frac(2))


def test_aut_degree_isolated_vertex_with_legs():
    g = G.DualGraph(
        (G.Vertex(1, 0, ((1, Frac(1, 5)), (2, Frac(1, 5)))),), ()
    )
    assert G.aut_degree(QUINTIC, g) == (1, Frac(1))


def test_aut_degree_identical_vertices_and_edges():
    g = G.DualGraph(
        (G.Vertex(1, 0), G.Vertex(1, 0)),
        (
            G.Edge((0, 1), (Frac(0), Frac(0))),
            G.Edge((0, 1), (Frac(0), Frac(0))),
        ),
    )
    aut, factor = G.aut_degree(QUINTIC, g)
    assert aut == 4 and factor == Frac(4)


def test_aut_degree_symmetric_loop():
    sym = G.DualGraph(
        (G.Vertex(1, 1),), (G.Edge((0, 0), (Frac(0), Frac(0))),)
    )
    asym = G.DualGraph(
        (G.Vertex(1, 1),), (G.Edge((0, 0), (Frac(1, 5), Frac(4, 5))),)
    )
    assert G.aut_degree(QUINTIC, sym)[0] == 2
    assert G.aut_degree(QUINTIC, asym)[0] == 1


def test_aut_degree_pointlike_vertex_counts_once():
    # an unlegged two-valent genus-0 degree-0 vertex contributes a single
    # half-edge to the covering-degree product
    lam = G.LocGraph(
        (
            G.Vertex(1, 0, (), 0, G.LEVEL_ZERO),
            G.Vertex(0, 0, (), 0, G.LEVEL_INF),
            G.Vertex(1, 1, ((1, Frac(2, 5)),), 0, G.LEVEL_ZERO),
        ),
        (
            G.Edge((0, 1), (Frac(1, 5), Frac(4, 5)), 1),
            G.Edge((1, 2), (Frac(1, 5), Frac(4, 5)), 2),
        ),
    )
    assert G.validate(QUINTIC_25, lam) == []
    aut, factor = G.aut_degree(QUINTIC, lam)
    assert aut == 1
    # stable ends contribute 5 and 5, the node in the middle once more
    assert factor == Frac(1, 125)


def test_aut_bounds():
    vs = tuple(G.Vertex(1, 0) for _ in range(13))
    es = tuple(G.Edge((i, i + 1), (Frac(0), Frac(0))) for i in range(12))
    with pytest.raises(BoundsExceeded):
        G.aut_degree(QUINTIC, G.DualGraph(vs, es))


def test_isomorphic_under_relabeling():
    a = G.DualGraph(
        (G.Vertex(1, 0, ((1, Frac(3, 5)),)), G.Vertex(2, 2)),
        (G.Edge((0, 1), (Frac(4, 5), Frac(1, 5))),),
        1,
    )
    b = G.DualGraph(
        (G.Vertex(2, 2), G.Vertex(1, 0, ((1, Frac(3, 5)),))),
        (G.Edge((1, 0), (Frac(4, 5), Frac(1, 5))),),
        0,
    )
    assert G.isomorphic(a, b)
    assert G.canonical_key(a) == G.canonical_key(b)
    assert G.aut_degree(QUINTIC, a) == G.aut_degree(QUINTIC, b)


# ---------------------------------------------------------------------------
# partial order


def _fig_top():
    return G.DualGraph(
        (G.Vertex(1, 0, ((1, Frac(3, 5)),)), G.Vertex(2, 2)),
        (G.Edge((0, 1), (Frac(4, 5), Frac(1, 5))),),
        1,
    )


def _fig_pred_chain_bullet_mid():
    return G.DualGraph(
        (
            G.Vertex(1, 0, ((1, Frac(3, 5)),)),
            G.Vertex(1, 1),
            G.Vertex(1, 1),
        ),
        (
            G.Edge((0, 1), (Frac(4, 5), Frac(1, 5))),
            G.Edge((1, 2), (Frac(0), Frac(0))),
        ),
        1,
    )


def _fig_pred_chain_bullet_far():
    return G.DualGraph(
        (
            G.Vertex(1, 0, ((1, Frac(3, 5)),)),
            G.Vertex(1, 1),
            G.Vertex(1, 1),
        ),
        (
            G.Edge((0, 1), (Frac(4, 5), Frac(1, 5))),
            G.Edge((1, 2), (Frac(0), Frac(0))),
        ),
        2,
    )


def _fig_pred_loop():
    return G.DualGraph(
        (G.Vertex(1, 0, ((1, Frac(3, 5)),)), G.Vertex(1, 2)),
        (
            G.Edge((0, 1), (Frac(4, 5), Frac(1, 5))),
            G.Edge((1, 1), (Frac(0), Frac(0))),
        ),
        1,
    )


def _fig_pred_loop_and_split():
    return G.DualGraph(
        (
            G.Vertex(1, 0, ((1, Frac(3, 5)),)),
            G.Vertex(0, 1),
            G.Vertex(1, 1),
        ),
        (
            G.Edge((0, 1), (Frac(4, 5), Frac(1, 5))),
            G.Edge((1, 1), (Frac(0), Frac(0))),
            G.Edge((1, 2), (Frac(0), Frac(0))),
        ),
        1,
    )


def test_figure_predecessors_are_below_top():
    top = _fig_top()
    assert G.validate(QUINTIC, top) == []
    preds = [
        _fig_pred_chain_bullet_mid(),
        _fig_pred_chain_bullet_far(),
        _fig_pred_loop(),
        _fig_pred_loop_and_split(),
    ]
    for p in preds:
        assert G.validate(QUINTIC, p) == []
        assert G.infinity_stable_graph(QUINTIC, p)
        assert G.graph_leq(QUINTIC, p, top)
        assert not G.graph_leq(QUINTIC, top, p)


def test_partial_order_reflexive():
    for g in (_fig_top(), _fig_pred_loop(), _fig_pred_loop_and_split()):
        assert G.graph_leq(QUINTIC, g, g)


def test_partial_order_unrelated():
    other = G.DualGraph(
        (G.Vertex(0, 0, ((1, Frac(3, 5)),)), G.Vertex(3, 2)),
        (G.Edge((0, 1), (Frac(4, 5), Frac(1, 5))),),
        1,
    )
    assert not G.graph_leq(QUINTIC, other, _fig_top())


def _small_top():
    # two-vertex genus split: the distinguished vertex holds all the degree
    return G.DualGraph(
        (
            G.Vertex(0, 0, ((1, Frac(3, 5)), (2, Frac(3, 5)))),
            G.Vertex(1, 1),
        ),
        (G.Edge((0, 1), (Frac(0), Frac(0))),),
        1,
    )


def test_minimal_expansions_are_strictly_below():
    top = _small_top()
    assert G.validate(QUINTIC, top) == []
    preds = G.minimal_expansions(QUINTIC, top)
    assert preds
    for p in preds:
        assert G.validate(QUINTIC, p) == []
        assert G.infinity_stable_graph(QUINTIC, p)
        assert G.graph_leq(QUINTIC, p, top)
        assert not G.isomorphic(p, top)
        assert not G.graph_leq(QUINTIC, top, p)


def test_descending_chains_respect_bound():
    top = _small_top()
    bound = len(top.edges) + sum(v.genus for v in top.vertices) + 2
    chains = G.descending_chains(QUINTIC, top, 12)
    assert chains
    assert max(len(c) for c in chains) <= bound
    # consecutive entries are strictly ordered
    for c in chains[:25]:
        for a, b in zip(c[1:], c[:-1]):
            assert G.graph_leq(QUINTIC, a, b)
            assert not G.isomorphic(a, b)


def test_chain_length_tracks_deepest_graph():
    # a distinguished vertex carrying both degree and two legs sheds them one
    # edge at a time, so chains outgrow the |E| + sum(g) + 2 count of the TOP
    # graph (here 3); the count of the chain's deepest graph always bounds the
    # chain, because every descent appends exactly one edge
    top = G.DualGraph(
        (
            G.Vertex(0, 2, ((1, Frac(1, 5)), (2, Frac(3, 5)))),
            G.Vertex(0, 1, ((3, Frac(4, 5)),)),
        ),
        (G.Edge((0, 1), (Frac(0), Frac(0))),),
        0,
    )
    assert not G.validate(QUINTIC, top)
    assert G.infinity_stable_graph(QUINTIC, top)
    chains = G.descending_chains(QUINTIC, top, 12)
    assert max(len(c) for c in chains) == 5  # exhaustive search, cap not hit
    for c in chains:
        bottom = c[-1]
        assert len(c) == len(bottom.edges) - len(top.edges) + 1
        assert len(c) <= len(bottom.edges) + sum(v.genus for v in bottom.vertices) + 2


def test_partial_order_transitive_on_samples():
    top = _small_top()
    sample = [top] + G.minimal_expansions(QUINTIC, top)[:4]
    for mid in list(sample[1:3]):
        sample += G.minimal_expansions(QUINTIC, mid)[:2]
    for a in sample:
        for b in sample:
            if G.graph_leq(QUINTIC, a, b) and G.graph_leq(QUINTIC, b, a):
                assert G.isomorphic(a, b)
    for a in sample:
        for b in sample:
            for c in sample:
                if G.graph_leq(QUINTIC, a, b) and G.graph_leq(QUINTIC, b, c):
                    assert G.graph_leq(QUINTIC, a, c)


# ---------------------------------------------------------------------------
# serialization


def test_json_round_trip_dual():
    g = _fig_top()
    blob = json.dumps(G.graph_to_obj(g), sort_keys=True)
    back = G.graph_from_obj(json.loads(blob))
    assert back == g
    assert json.dumps(G.graph_to_obj(back), sort_keys=True) == blob


def test_json_round_trip_loc():
    for lam in G.enumerate_loc_graphs(QUINTIC_25, 0, 1, 2, 1):
        blob = json.dumps(G.graph_to_obj(lam), sort_keys=True)
        back = G.graph_from_obj(json.loads(blob))
        assert back == lam
        assert isinstance(back, G.LocGraph)
        assert json.dumps(G.graph_to_obj(back), sort_keys=True) == blob
