"""Paths, bounded path homotopy, fundamental groupoid presentations, and
the pullback comparison machinery."""

import pytest

from cubigraph import graphs as gr
from cubigraph import pi1


def test_path_construction_and_trim():
    I3 = gr.interval(3)
    p = pi1.make_path(I3, (0, 1, 1, 2, 3, 3, 3))
    assert p.start == 0 and p.end == 3
    # constant tails are trimmed away, interior repeats stay
    assert p.word[-1] == 3 and p.word[-2] != 3
    c = pi1.constant_path(I3, 2)
    assert len(c.word) == 1


def test_concat_and_inverse():
    C5 = gr.cycle(5)
    p = pi1.make_path(C5, (0, 1, 2))
    q = pi1.make_path(C5, (2, 3, 4))
    pq = pi1.concat(p, q)
    assert pq.start == 0 and pq.end == 4
    assert pi1.inverse(pq).word == tuple(reversed(pq.word))
    with pytest.raises(ValueError):
        pi1.concat(q, p)


def test_path_homotopic_reflexive_and_symmetric():
    C5 = gr.cycle(5)
    p = pi1.make_path(C5, (0, 1, 2))
    q = pi1.make_path(C5, (0, 4, 3, 2))
    same = pi1.path_homotopic_bounded(p, p)
    assert same.verdict == "yes"
    r1 = pi1.path_homotopic_bounded(p, q, max_support=8)
    r2 = pi1.path_homotopic_bounded(q, p, max_support=8)
    assert r1.verdict == r2.verdict


def test_two_halves_of_square_homotopic():
    P = gr.box_product(gr.interval(1), gr.interval(1))
    p = pi1.make_path(P, ((0, 0), (0, 1), (1, 1)))
    q = pi1.make_path(P, ((0, 0), (1, 0), (1, 1)))
    rep = pi1.path_homotopic_bounded(p, q)
    assert rep.verdict == "yes"
    # the returned layers are a genuine homotopy: consecutive rows admit
    # endpoint paddings to a common length that are pointwise adjacent
    layers = rep.layers
    assert layers[0] == p.word and layers[-1] == q.word

    def one_step(a, b):
        for length in range(max(len(a), len(b)), len(a) + len(b) + 1):
            for fa in range(length - len(a) + 1):
                pa = (a[0],) * fa + a + (a[-1],) * (length - len(a) - fa)
                for fb in range(length - len(b) + 1):
                    pb = (b[0],) * fb + b + (b[-1],) * (length - len(b) - fb)
                    if all(P.adjacent(x, y) for x, y in zip(pa, pb)):
                        return True
        return False

    for a, b in zip(layers, layers[1:]):
        assert one_step(a, b)


def test_around_c5_not_null_homotopic():
    C5 = gr.cycle(5)
    loop = pi1.make_path(C5, (0, 1, 2, 3, 4, 0))
    const = pi1.constant_path(C5, 0)
    rep = pi1.path_homotopic_bounded(loop, const, max_support=8,
                                     max_steps=50000)
    assert rep.verdict == "no_exhausted"


def test_around_c3_contracts():
    C3 = gr.cycle(3)
    loop = pi1.make_path(C3, (0, 1, 2, 0))
    const = pi1.constant_path(C3, 0)
    rep = pi1.path_homotopic_bounded(loop, const)
    assert rep.verdict == "yes"


def test_presentations_of_small_cycles():
    # 3- and 4-cycles have trivial fundamental group
    for n in (3, 4):
        pres = pi1.a1_presentation(gr.cycle(n), 0)
        assert len(pres.generators) == 1
        word = ((0, 1),)
        assert pi1.loop_word_trivial(pres, word) is True
    # 5- and 6-cycles have fundamental group Z
    for n in (5, 6):
        pres = pi1.a1_presentation(gr.cycle(n), 0)
        assert pres.abelianization() == (1, [])
        assert pi1.loop_word_trivial(pres, ((0, 1),)) is False


def test_presentation_of_tree_is_trivial():
    pres = pi1.a1_presentation(gr.interval(4), 0)
    assert pres.generators == []
    assert pres.abelianization() == (0, [])


def test_generator_loop_and_walk_round_trip():
    C5 = gr.cycle(5)
    pres = pi1.a1_presentation(C5, 0)
    for j in range(len(pres.generators)):
        loop = pres.generator_loop(j)
        assert loop.start == 0 and loop.end == 0
        back = pi1.walk_to_word(pres, loop.word)
        assert back == ((j, 1),)


def test_presentation_oracle_agreement_on_corpus():
    # generator-word triviality must agree with bounded direct homotopy
    for X in (gr.cycle(4), gr.cycle(5), gr.interval(2)):
        pres = pi1.a1_presentation(X, 0)
        for j in range(len(pres.generators)):
            loop = pres.generator_loop(j)
            alg = pi1.loop_word_trivial(pres, ((j, 1),))
            direct = pi1.path_homotopic_bounded(
                loop, pi1.constant_path(X, 0), max_support=8
            )
            if alg is True:
                assert direct.verdict == "yes"
            elif alg is False:
                assert direct.verdict != "yes"


def test_pi1_functor_on_identity_and_fold():
    C5 = gr.cycle(5)
    ident = gr.graph_identity(C5)
    ff = pi1.pi1_functor(ident)
    pres = ff.source
    for j, img in enumerate(ff.generator_images):
        # identity sends each generator to a conjugate of itself
        assert pi1.loop_word_trivial(
            pres, pi1._free_reduce(img + ((j, -1),))
        ) in (True, None)


def test_lift_path_through_projection():
    C5 = gr.cycle(5)
    P, p1, p2 = gr.graph_product(C5, gr.interval(1))
    down = pi1.make_path(C5, (0, 1, 2))
    lifted = pi1._lift_path(p1, (0, 0), down)
    assert lifted is not None
    assert lifted.mapped(p1).word == down.word


def test_isofibration_yes_and_counterexample():
    C5 = gr.cycle(5)
    proj = gr.GraphMap(
        gr.box_product(C5, gr.interval(1)), C5,
        {v: v[0] for v in gr.box_product(C5, gr.interval(1)).vertices},
    )
    rep = pi1.is_isofibration_bounded(proj, samples=6)
    assert rep.verdict == "yes_on_tested_range"
    # the end inclusion of a vertex misses lifts of outgoing paths
    I1 = gr.interval(1)
    pt = gr.interval(0)
    incl = gr.GraphMap(pt, I1, {0: 0})
    rep = pi1.is_isofibration_bounded(incl)
    assert rep.verdict == "counterexample"


def test_psi_comparison_small_instance():
    C3 = gr.cycle(3)
    pt = gr.interval(0)
    f = gr.constant_map(C3, pt, 0)
    report = pi1.psi_comparison(f, f, samples=2, max_len=2, max_support=4,
                                max_steps=4000)
    assert report["pi0"]["verdict"] == "bijection"
    for entry in report["fullness"]:
        assert entry["verdict"] in ("pass", "inconclusive", "skipped")
