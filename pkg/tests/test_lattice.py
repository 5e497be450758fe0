import pytest
from hypothesis import given, strategies as st

from foldcover import foldseq as fs
from foldcover.lattice import (Curve, dump_curve, edge_endpoints, edge_key, is_self_avoiding,
                               max_covered_square, parse_curve, reverse, rigid, rot, trace,
                               turns_of)
from foldcover.oracles import turtle

signs = st.sampled_from((1, -1))
turn_lists = st.lists(signs, max_size=40).map(tuple)


@given(turn_lists, st.integers(0, 3))
def test_trace_matches_turtle(turns, d):
    c = trace(turns, dir0=d)
    ref = turtle(turns, heading=1j ** d)
    assert [complex(*v) for v in c.vertices] == ref


@given(turn_lists)
def test_turns_of_inverts_trace(turns):
    assert turns_of(trace(turns).vertices) == turns


def test_left_turn_convention():
    # +1 is a left turn: east then north
    assert trace((1,)).vertices == ((0, 0), (1, 0), (1, 1))


@given(turn_lists, st.integers(0, 3), st.integers(-5, 5), st.integers(-5, 5), st.booleans())
def test_rigid_preserves_turns_up_to_reflection(turns, q, tx, ty, refl):
    c = trace(turns)
    r = rigid(c, q, (tx, ty), refl)
    assert turns_of(r.vertices) == r.turns
    assert r.turns == (tuple(-a for a in turns) if refl else turns)


@given(turn_lists)
def test_reverse_is_involution(turns):
    c = trace(turns)
    assert reverse(reverse(c)).vertices == c.vertices


@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(0, 3))
def test_rot_matches_complex(x, y, q):
    z = complex(x, y) * 1j ** q
    assert rot((x, y), q) == (int(z.real), int(z.imag))


def test_edge_key_round_trip():
    for a, b in (((0, 0), (1, 0)), ((2, 3), (2, 2)), ((-1, -1), (-2, -1))):
        assert set(edge_endpoints(edge_key(a, b))) == {a, b}


@pytest.mark.parametrize("n", [4, 8, 12])
def test_dragon_self_avoiding(n):
    assert is_self_avoiding(trace(fs.dragon(n).prefix((1 << n) - 1)))


def test_repeated_edge_detected():
    # four left turns retrace the first edge
    assert not is_self_avoiding(trace((1, 1, 1, 1)))


def test_double_visit_with_distinct_edges_is_allowed():
    # corners SW then NE at (1,0): the passages touch without crossing
    c = Curve((0, 0), 0, (), ((0, 0), (1, 0), (1, -1), (2, -1), (2, 0), (1, 0), (1, 1)))
    assert is_self_avoiding(c)


def _brute_square(edges):
    es = set(edges)
    xs = [k[0] for k in es] + [k[0] + 1 for k in es]
    ys = [k[1] for k in es] + [k[1] + 1 for k in es]
    best = 0
    for x0 in range(min(xs), max(xs) + 1):
        for y0 in range(min(ys), max(ys) + 1):
            s = 1
            while all((x, y, 0) in es and (x, y, 1) in es
                      and (x, y0 + s, 0) in es and (x0 + s, y, 1) in es
                      for x in range(x0, x0 + s) for y in range(y0, y0 + s)):
                best = max(best, s)
                s += 1
    return best


@pytest.mark.parametrize("p", range(2, 10))
def test_max_covered_square_matches_brute_force(p):
    c = trace(fs.dragon().prefix((1 << p) - 1))
    keys = [edge_key(a, b) for a, b in c.segments]
    assert max_covered_square(keys) == _brute_square(keys)


@given(turn_lists, st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 3))
def test_curve_round_trip(turns, x, y, d):
    c = trace(turns, (x, y), d)
    assert parse_curve(dump_curve(c)) == c


def test_parse_curve_rejects_garbage():
    with pytest.raises(ValueError):
        parse_curve("curve v1\norigin 0 0\ndir 0\nturns +x\n")
