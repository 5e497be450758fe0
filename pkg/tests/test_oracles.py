"""Sanity checks of the reference oracles themselves."""
from foldcover.oracles import flood_pairing, strip_fold, turtle


def test_single_fold():
    # one fold: the right cell lands on the face-up side for +1
    assert strip_fold((1,)) == (1,)
    assert strip_fold((-1,)) == (-1,)


def test_two_folds_by_hand():
    # fold twice the same way: creases +, +, - (the dragon of order 2)
    assert strip_fold((1, 1)) == (1, 1, -1)


def test_turtle_square():
    assert turtle((1, 1, 1)) == [0, 1, 1 + 1j, 1j, 0]


def test_flood_fill_isolated_vertex_undecided():
    # no passage at all: both diagonal pairs connect
    assert flood_pairing({}, (0, 0)) is None


def test_flood_fill_single_configuration():
    # corners NE and SW at the origin: NW and SE squares touch through it
    quads = {(0, 0): [0, 2]}
    assert flood_pairing(quads, (0, 0)) == ((-1, 0), (0, -1))
