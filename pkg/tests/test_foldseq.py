import itertools

import pytest
from hypothesis import given, settings, strategies as st

from foldcover import foldseq as fs
from foldcover.oracles import strip_fold

signs = st.sampled_from((1, -1))
sign_lists = st.lists(signs, min_size=1, max_size=10).map(tuple)
short_strings = st.lists(signs, min_size=1, max_size=4).map(tuple)


# -- frozen values ------------------------------------------------------------

def test_dragon_prefix_known():
    # [PAPER] the positive folding sequence starts ++-++--+++--+--
    assert fs.format_signs(fs.unfold((1, 1, 1, 1), 4)) == "++-++--+++--+--"


def test_alternating_identity():
    # [PAPER] (+,-,-)^{*2} is the alternating folding sequence
    a = fs.star_power((1, -1, -1), 2)
    assert a == fs.unfold((1, -1, 1, -1), 4)[:15]
    # [DERIVED] frozen from the strip-folding oracle
    assert fs.format_signs(a) == "+--+++--+---++-"


def test_example9_instructions():
    # [PAPER] a_{2^{4n}} = a_{2^{4n+1}} = +1, a_{2^{4n+2}} = a_{2^{4n+3}} = -1
    g = fs.example9()
    assert [g.term(1 << j) for j in range(12)] == [1, 1, -1, -1] * 3


def test_convolve_length_and_shape():
    s, t = (1, -1, -1), (1, 1)
    out = fs.convolve(s, t)
    assert len(out) == (len(s) + 1) * (len(t) + 1) - 1
    assert out == (1, 1, 1, -1, -1, -1, 1, 1, -1, -1, -1)


# -- oracles ------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 8))
def test_unfold_matches_strip_folding_exhaustive(n):
    for folds in itertools.product((1, -1), repeat=n):
        assert fs.unfold(folds, n) == strip_fold(folds)


def _convolve_by_definition(s, t):
    # S*T: T, s_1, T-bar, s_2, T, s_3, T-bar, ...
    out = []
    tbar = [-x for x in reversed(t)]
    for j in range(len(s) + 1):
        out.extend(t if j % 2 == 0 else tbar)
        if j < len(s):
            out.append(s[j])
    return tuple(out)


@given(short_strings, short_strings)
def test_convolve_matches_definition(s, t):
    assert fs.convolve(s, t) == _convolve_by_definition(s, t)


# -- properties ---------------------------------------------------------------

@given(sign_lists)
def test_term_4adic_matches_unfold(folds):
    n = len(folds)
    seq = fs.unfold(folds, n)
    assert all(fs.term_4adic(folds, k + 1) == seq[k] for k in range(len(seq)))


@given(sign_lists)
def test_unfold_prefix_property(folds):
    for n in range(len(folds)):
        small, big = fs.unfold(folds, n), fs.unfold(folds, n + 1)
        assert big[:len(small)] == small


@given(st.lists(signs, max_size=30).map(tuple))
def test_reverse_negate_involution(s):
    assert fs.reverse_negate(fs.reverse_negate(s)) == s


@given(short_strings, short_strings, short_strings)
@settings(max_examples=60)
def test_convolve_associative(s, t, u):
    assert fs.convolve(fs.convolve(s, t), u) == fs.convolve(s, fs.convolve(t, u))


@given(short_strings, st.integers(1, 3))
@settings(max_examples=60)
def test_star_power_prefix_and_lazy_terms(s, n):
    a, b = fs.star_power(s, n), fs.star_power(s, n + 1)
    assert b[:len(a)] == a
    assert fs.StarSequence(s).prefix(len(b)) == b


@given(sign_lists, signs)
def test_derive_inverts_primitive(folds, phase):
    g = fs.InstructionSequence(folds)
    assert fs.derive_seq(fs.primitive_seq(g, phase)).prefix(g.length) == g.prefix(g.length)
    lazy = fs.primitive_seq(fs.FiniteString(g.prefix(g.length)), phase)
    assert fs.derive_seq(lazy).prefix(g.length) == g.prefix(g.length)


def test_derive_rejects_non_folding():
    with pytest.raises(fs.InvalidFoldingSequence):
        fs.derive_seq(fs.FiniteString((1, 1, 1, 1, 1)))


@given(sign_lists)
def test_unfold_is_folding_prefix(folds):
    assert fs.is_folding_prefix(fs.unfold(folds, len(folds)))


@given(st.lists(signs, min_size=4, max_size=20).map(tuple))
def test_folding_prefix_is_s_folding_word(w):
    # a prefix is in particular a factor; the converse fails at other alignments
    if fs.is_folding_prefix(w):
        assert fs.is_s_folding_word(w, (1,))


def test_s_folding_word_dekking():
    s = (1, -1, 1, 1, -1, -1, -1, 1, -1)
    assert fs.is_s_folding_word(fs.StarSequence(s).prefix(300), s)
    assert not fs.is_s_folding_word((1,) * 30, s)


def test_derive_dekking_classical_matches_derive_seq():
    seq = fs.dragon().prefix(63)
    seps, off = fs.derive_dekking(seq, (1,))
    assert off == 1
    assert seps == fs.derive_seq(fs.dragon()).prefix(len(seps))


def test_derive_dekking_star_recovers_generator():
    s = (1, -1, -1)
    seps, off = fs.derive_dekking(fs.star_power(s, 3), s)
    assert off == len(s)
    assert seps == fs.star_power(s, 2)


def test_derive_dekking_rejects_constant():
    with pytest.raises(fs.NotSFolding):
        fs.derive_dekking((1,) * 12, (1, -1, -1))


def test_complete_sequence_symmetry():
    c = fs.complete_seq(fs.dragon(), -1)
    w = c.window(-7, 7)
    assert w[7] == -1
    assert w[8:] == fs.dragon().prefix(7)
    assert w[:7] == fs.reverse_negate(fs.dragon().prefix(7))


@pytest.mark.parametrize("gen", [
    fs.dragon(), fs.example9(), fs.InstructionSequence((1, -1, 1)),
    fs.StarSequence((1, -1, -1)), fs.FiniteString((1, -1, -1, 1)),
])
def test_sequence_round_trip(gen):
    assert fs.parse_sequence(fs.dump_sequence(gen)) == gen


@pytest.mark.parametrize("text", [
    "foldseq v2\nkind=string\n+-\n",
    "foldseq v1\nkind=string\n+x-\n",
    "foldseq v1\nkind=blob\n+-\n",
    "foldseq v1\nkind=instructions\n+- period=z\n",
])
def test_parse_rejects(text):
    with pytest.raises(fs.FoldSeqError):
        fs.parse_sequence(text)


def test_resource_cap(monkeypatch):
    monkeypatch.setattr(fs, "MAX_TERMS", 100)
    with pytest.raises(fs.ResourceError):
        fs.unfold((1,) * 8, 8)
    with pytest.raises(fs.ResourceError):
        fs.star_power((1, -1, -1), 4)
