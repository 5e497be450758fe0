import pytest

from foldcover.covering import centered_rect, vertex_level
from foldcover.oracles import flood_pairing
from foldcover.squares import (P_LATTICE_INDEX, flip_passage, in_p_coset, p_lattice,
                               predicate_p, predicate_p_turns, square_pairing)


def _block_quadrants(cov, v):
    return {(x, y): [q for q, _ in cov.passages((x, y))]
            for x in range(v[0] - 1, v[0] + 2) for y in range(v[1] - 1, v[1] + 2)}


def test_pairing_matches_flood_fill(dragon7):
    for x in range(-5, 6):
        for y in range(-5, 6):
            v = (x, y)
            assert flood_pairing(_block_quadrants(dragon7, v), v) == square_pairing(dragon7, v)


def test_flood_fill_coarse_resolution_undecided(dragon7):
    # at pixel size 1/4 the corner arcs seal the centre disk
    v = (1, 1)
    assert flood_pairing(_block_quadrants(dragon7, v), v, res=4) is None


def test_p_coset_index():
    pts = {(x, y) for x in range(8) for y in range(8) if in_p_coset((x, y), (0, 0))}
    assert len(pts) * P_LATTICE_INDEX == 64


@pytest.mark.parametrize("name", ["dragon7", "example9_7", "alt_six"])
def test_p_lattice_and_turn_rule(name, request):
    cov = request.getfixturevalue(name)
    core = centered_rect(12)
    lv = vertex_level(cov, 3, core)
    res = p_lattice(cov, core, lv)
    assert res.verified
    side = core[2] - core[0] + 1
    assert abs(len(res.p_set) - side * side / P_LATTICE_INDEX) <= 2 * side
    for v in lv.E(2):
        assert predicate_p(cov, v, lv) == predicate_p_turns(cov, v, lv)


def test_mutation_breaks_p_lattice(dragon7):
    core = centered_rect(12)
    p_set = p_lattice(dragon7, core).p_set
    idx = dragon7.vertex_index()
    flips = []
    for x in range(-5, 6):
        for y in range(-5, 6):
            v = (x, y)
            frags = {fi for fi, j in idx.get(v, ()) if 0 < j < dragon7.fragments[fi].nseg}
            near_p = any((x + dx, y + dy) in p_set for dx in (-1, 0, 1) for dy in (-1, 0, 1)
                         if (dx, dy) != (0, 0))
            if len(frags) == 2 and near_p:
                flips.append(v)
    assert len(flips) >= 4
    for v in flips[:4]:
        assert not p_lattice(flip_passage(dragon7, v), core).verified


def test_flip_rejects_single_passage(dragon7):
    far = (dragon7.bbox()[2] + 10, 0)
    with pytest.raises(ValueError):
        flip_passage(dragon7, far)
