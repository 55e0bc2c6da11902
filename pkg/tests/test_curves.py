import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import phase_distance, random_surface, random_word
from modfunctor.curves import (
    CurveDiagram,
    DiagramMismatchError,
    apply_move,
    apply_moves,
    delta_word,
    equal,
    free_reduce,
    induced_unitary,
    normal_form,
    refactor,
    word_normal_form,
)
from modfunctor.fusion import StandardSurface
from modfunctor.model import builtin
from modfunctor.moves import Move, MoveError, compile_word, parse_word
from oracles import _neighbours, oracle_equal, rewriting_class

FIB = builtin("fibonacci")
ISING = builtin("ising")
TAU4 = StandardSurface((1, 1, 1, 1), 0)


def diagram(word="", surface=TAU4, exterior=0):
    return CurveDiagram(surface, parse_word(word), exterior)


# -- normal forms


def test_normal_form_identity():
    nf = normal_form(diagram())
    assert nf.permutation == (0, 1, 2, 3, 4)
    assert nf.framing == (0,) * 5
    assert nf.images == ((1,), (2,), (3,), (4,), (5,))


def test_normal_form_cancellation():
    assert normal_form(diagram("s1 s1^-1")) == normal_form(diagram())


def test_normal_form_sigma1():
    nf = word_normal_form(3, "s1")
    assert nf.images == ((1, 2, -1), (1,), (3,))
    assert nf.permutation == (1, 0, 2)


def test_twist_framing_follows_strand():
    nf = word_normal_form(3, "s1 t1")
    assert nf.framing == (0, 1, 0)


def test_equal_examples():
    d = diagram("s1 s2 t3")
    assert equal(d, d)
    assert equal(diagram("s1 s2 s1"), diagram("s2 s1 s2"))
    assert not equal(diagram("s1"), diagram("s1^-1"))


def test_equal_requires_matching_frames():
    with pytest.raises(DiagramMismatchError):
        equal(diagram(), diagram(surface=StandardSurface((1, 1, 1, 1), 1)))
    with pytest.raises(DiagramMismatchError):
        equal(diagram(), diagram(exterior=1))


def test_faithfulness_against_garside_oracle():
    """Normal-form equality agrees with an independent word-problem solver."""
    rng = random.Random(2024)
    agree = equal_pairs = 0
    for _ in range(10_000):
        n = rng.randint(2, 6)
        strands = n + 1
        w1 = random_word(strands, rng.randint(0, 12), rng)
        if rng.random() < 0.5:
            w2 = random_word(strands, rng.randint(0, 12), rng)
        else:
            w2 = tuple(w1)
            for _ in range(rng.randint(1, 6)):
                options = list(_neighbours(w2, strands, 12))
                if options:
                    w2 = rng.choice(options)
        surface = StandardSurface((0,) * n, 0)
        ours = equal(CurveDiagram(surface, w1), CurveDiagram(surface, w2))
        assert ours == oracle_equal(strands, w1, w2), (w1, w2)
        agree += 1
        equal_pairs += ours
    assert agree == 10_000 and equal_pairs > 2000


def test_faithfulness_against_rewriting_oracle():
    """On short pure braids, words in one rewriting class are exactly the normal-form class."""
    rng = random.Random(5)
    for _ in range(25):
        n = 3
        w = tuple(("s", rng.randint(1, n - 1), rng.choice((1, -1))) for _ in range(rng.randint(0, 3)))
        cls = rewriting_class(n, w, 5)
        nf = word_normal_form(n, w)
        for v in cls:
            assert word_normal_form(n, v) == nf
        # every short word outside the class with a different normal form really is different
        for _ in range(50):
            v = tuple(("s", rng.randint(1, n - 1), rng.choice((1, -1))) for _ in range(rng.randint(0, 5)))
            if word_normal_form(n, v) == nf:
                assert oracle_equal(n, v, w)
            else:
                assert v not in cls


# -- moves on diagrams


def test_r_then_inverse():
    d = diagram("s2 t1")
    for m in (Move("R", (0, 2)), Move("R", (2, 4), True)):
        assert equal(apply_move(apply_move(d, m), m.inv), d)


def test_r_on_identity_gives_sigma1():
    assert normal_form(apply_move(diagram(), Move("R", (0, 2)))) == word_normal_form(5, "s1")


@pytest.mark.parametrize("n", range(0, 6))
def test_z_full_rotation(n):
    d = diagram("s1 t1" if n >= 2 else "", surface=StandardSurface((1,) * n, 1 if n else 0))
    e = d
    for _ in range(n + 1):
        e = apply_move(e, Move("Z"))
    assert e.exterior == d.exterior
    assert equal(e, d)


@given(st.integers(2, 5).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.sampled_from("st"), st.integers(1, n + 1), st.sampled_from((1, -1))), max_size=8),
    st.integers(0, n),
    st.sampled_from(["R", "T", "Z"]),
    st.integers(1, n), st.booleans())))
def test_group_action(args):
    n, raw, ext, kind, pos, inv = args
    word = tuple((k, min(i, n) if k == "s" else i, e) for k, i, e in raw)
    d = CurveDiagram(StandardSurface((1,) * n, 1), word, ext)
    if kind == "R":
        m = Move("R", (min(pos, n - 1) - 1, min(pos, n - 1) + 1), inv)
    elif kind == "T":
        m = Move("T", (pos - 1, pos), inv)
    else:
        m = Move("Z", None, inv)
    assert equal(apply_move(apply_move(d, m), m.inv), d)


def test_apply_move_rejects_bad_placements():
    d = diagram()
    for m in (Move("R", (3, 5)), Move("R", (0, 3)), Move("T", (0, 2)), Move("F", (0, 3))):
        with pytest.raises(MoveError):
            apply_move(d, m)


def test_domain_tracks_permutation_and_rotation():
    s = StandardSurface((0, 1, 2), 1)
    assert diagram("s1", surface=s).domain() == StandardSurface((1, 0, 2), 1)
    z = apply_move(diagram(surface=s), Move("Z"))
    assert z.exterior == 1
    assert z.domain() == StandardSurface((1, 2, 1), 0)


# -- refactoring


def test_refactor_identical_is_empty():
    d = diagram("s1 s3^-1 t2")
    assert refactor(d, d) == ()


def test_refactor_one_generator():
    d = diagram("s2 t1")
    target = apply_move(d, Move("R", (0, 2)))
    assert refactor(d, target) == (Move("R", (0, 2)),)


@pytest.mark.parametrize("method", ["word", "untangle"])
def test_refactor_soundness_random(method):
    rng = random.Random(99)
    for _ in range(200):
        n = rng.randint(1, 5)
        s = random_surface(ISING, n, rng)
        f = CurveDiagram(s, random_word(n + 1, rng.randint(0, 8), rng), rng.randrange(n + 1))
        g = CurveDiagram(s, random_word(n + 1, rng.randint(0, 8), rng), rng.randrange(n + 1))
        seq = refactor(f, g, method)
        assert equal(apply_moves(f, seq), g)
        if method == "word":
            assert len(seq) <= 3 * (len(f.word) + len(g.word)) + n
        assert all(m.kind in "RZT" for m in seq)


def test_refactor_mismatch():
    with pytest.raises(DiagramMismatchError):
        refactor(diagram(), diagram(surface=StandardSurface((1, 1, 1, 0), 0)))
    with pytest.raises(ValueError):
        refactor(diagram(), diagram(), method="magic")


def test_induced_unitary_empty_is_identity():
    d = diagram("s1 s2")
    u = induced_unitary(FIB, d, d, ())
    assert np.array_equal(u.matrix, np.eye(u.matrix.shape[0]))


def test_induced_unitary_matches_compile():
    s = StandardSurface((1, 2, 1, 1), 1)
    f = CurveDiagram(s, ())
    g = CurveDiagram(s, parse_word("s1 s3^-1 t2"))
    u = induced_unitary(ISING, f, g, refactor(f, g))
    # moves act in time order, the compiled word acts rightmost-first
    c = compile_word(ISING, s, "t2 s3^-1 s1")
    assert np.allclose(u.matrix, c.matrix, atol=1e-14)


def test_induced_unitary_rejects_wrong_target():
    f = diagram()
    with pytest.raises(DiagramMismatchError):
        induced_unitary(FIB, f, diagram(surface=StandardSurface((1, 1, 1, 1), 0), exterior=1), ())


@pytest.mark.parametrize("model", [FIB, ISING], ids=["fibonacci", "ising"])
def test_path_independence(model):
    rng = random.Random(17)
    for _ in range(40):
        n = rng.randint(1, 5)
        s = random_surface(model, n, rng)
        f = CurveDiagram(s, random_word(n + 1, rng.randint(0, 8), rng), rng.randrange(n + 1))
        g = CurveDiagram(s, random_word(n + 1, rng.randint(0, 8), rng), rng.randrange(n + 1))
        u1 = induced_unitary(model, f, g, refactor(f, g, "word"))
        u2 = induced_unitary(model, f, g, refactor(f, g, "untangle"))
        assert u1.rows == u2.rows and u1.cols == u2.cols
        assert phase_distance(u1.matrix, u2.matrix) <= 1e-9


@pytest.mark.parametrize("model", [FIB, ISING], ids=["fibonacci", "ising"])
def test_loop_sequence_is_pure_phase(model):
    """A nontrivial sequence that returns a diagram to itself acts as a scalar."""
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(2, 5)
        s = random_surface(model, n, rng)
        f = CurveDiagram(s, random_word(n + 1, rng.randint(0, 6), rng))
        detour = CurveDiagram(s, random_word(n + 1, rng.randint(1, 6), rng), rng.randrange(n + 1))
        seq = refactor(f, detour) + refactor(detour, f, "untangle")
        assert equal(apply_moves(f, seq), f)
        u = induced_unitary(model, f, f, seq).matrix
        assert phase_distance(u, np.eye(u.shape[0])) <= 1e-9


def test_delta_conjugation_shifts_generators():
    n = 4
    for i in range(1, n):
        lhs = delta_word(n) + (("s", i, 1),) + delta_word(n, -1)
        assert word_normal_form(n + 1, lhs) == word_normal_form(n + 1, (("s", i + 1, 1),))


def test_free_reduce():
    w = parse_word("s1 s2 s2^-1 s1^-1 t1 t1^-1 s3")
    assert free_reduce(w) == parse_word("s3")


def test_serialization_roundtrip():
    d = CurveDiagram(StandardSurface((1, 2, 1), 2), parse_word("s1 s3^-1 t4"), 2)
    back = CurveDiagram.from_dict(ISING, d.to_dict(ISING))
    assert back == d
    assert d.to_dict(ISING) == {
        "surface": {"interior": ["sigma", "psi", "sigma"], "exterior": "psi"},
        "exterior": 2,
        "word": "s1 s3^-1 t4",
    }


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_refactor_property(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    s = random_surface(FIB, n, rng)
    f = CurveDiagram(s, random_word(n + 1, rng.randint(0, 8), rng), rng.randrange(n + 1))
    g = CurveDiagram(s, random_word(n + 1, rng.randint(0, 8), rng), rng.randrange(n + 1))
    for method in ("word", "untangle"):
        assert equal(apply_moves(f, refactor(f, g, method)), g)
