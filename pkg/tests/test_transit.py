import random

from hypothesis import given, settings, strategies as st

from braidforge import grid as G
from braidforge.braid import (
    BraidWord,
    canonical_linking,
    closure_components,
    exponent_sum,
    free_reduce,
    linking_matrix_of_word,
    parse_word,
)
from braidforge.garside import are_conjugate
from braidforge.transit import braid_to_grid, grid_to_braid


def test_single_letter():
    # a closed 2-braid needs two arcs over every gap, so two columns cannot
    # carry it; one padding arc is added
    g, trace = braid_to_grid(parse_word("n=2: 1"))
    assert g.size == 3 and len(trace.pad_columns) == 1
    assert G.grid_components(g)[0] == 1
    assert trace.source_kind == "braid" and len(trace.letter_to_arcs) == 1


def test_empty_word():
    g, _ = braid_to_grid(parse_word("n=2:"))
    assert g.size == 4
    count, lk = G.grid_components_and_linking(g)
    assert count == 2 and lk == ((0, 0), (0, 0))


def test_hopf_linking_agrees():
    w = parse_word("n=2: 1 1")
    g, _ = braid_to_grid(w)
    assert G.grid_components_and_linking(g)[1] == linking_matrix_of_word(w)


def test_square_unknot_to_braid():
    w, trace = grid_to_braid(G.square_unknot())
    assert w == BraidWord(1, ())
    assert trace.source_kind == "grid"


def test_hopf_roundtrip_is_conjugate():
    w = parse_word("n=2: 1 1")
    back, _ = grid_to_braid(braid_to_grid(w)[0])
    assert back.strands == 2 and exponent_sum(back) == 2
    assert are_conjugate(back, w)


def test_deterministic():
    w = parse_word("n=4: 1 -3 2 2 -1 3")
    assert braid_to_grid(w) == braid_to_grid(w)


words = st.integers(2, 6).flatmap(lambda n: st.lists(
    st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), max_size=12
).map(lambda ls: BraidWord(n, tuple(ls))))


@settings(max_examples=150, deadline=None)
@given(words)
def test_roundtrip_invariants(w):
    g, trace = braid_to_grid(w)
    assert G.validate_presentation(g) == []
    assert len(trace.letter_to_arcs) == len(w)
    if w.letters and free_reduce(w.letters) == w.letters:
        assert G.complexity(g) == 2 * len(w) + len(trace.pad_columns)
    back, _ = grid_to_braid(g)
    assert closure_components(back)[1] == closure_components(w)[1]
    assert canonical_linking(linking_matrix_of_word(back)) == canonical_linking(linking_matrix_of_word(w))
    assert exponent_sum(back) == exponent_sum(w)


def test_grid_to_braid_matches_grid_invariants_on_moved_diagrams():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(2, 4)
        w = BraidWord(n, tuple(rng.choice([1, -1]) * rng.randint(1, n - 1) for _ in range(rng.randint(0, 8))))
        g, _ = braid_to_grid(w)
        for _ in range(rng.randint(0, 12)):
            moves = G.enumerate_elementary_moves(g)
            if not moves:
                break
            g, _, _ = G.apply_elementary_move(g, None, None, rng.choice(moves))
        count, lk = G.grid_components_and_linking(g)
        back, _ = grid_to_braid(g)
        assert closure_components(back)[1] == count
        assert canonical_linking(linking_matrix_of_word(back)) == canonical_linking(lk)
