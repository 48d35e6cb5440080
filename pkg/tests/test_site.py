"""The cube and simplex categories: canonical forms, composition,
generator identities, enumeration, faithfulness."""

import itertools

import pytest

from cubigraph import site as st


def points(n):
    return list(itertools.product((0, 1), repeat=n))


def graph_of(m):
    return tuple(m.evaluate(p) for p in points(m.source_dim))


# --- canonical morphisms and evaluation ---------------------------------


def test_identity_evaluates_to_itself():
    for n in range(4):
        ident = st.cube_identity(n)
        for p in points(n):
            assert ident.evaluate(p) == p


def test_face_inserts_constant():
    d = st.cube_face(2, 1, 3)  # [1]^2 -> [1]^3 inserting 1 in slot 2
    assert d.source_dim == 2 and d.target_dim == 3
    for p in points(2):
        image = d.evaluate(p)
        assert image[1] == 1
        assert (image[0], image[2]) == p


def test_degeneracy_drops_coordinate():
    s = st.cube_degeneracy(2, 3)
    for p in points(3):
        assert s.evaluate(p) == (p[0], p[2])


def test_connections_min_max():
    for eps, fn in ((0, max), (1, min)):
        g = st.cube_connection(1, eps, 2)
        assert g.source_dim == 2 and g.target_dim == 1
        for p in points(2):
            assert g.evaluate(p) == (fn(p),)


def test_composition_matches_function_composition():
    mor22 = st.all_cube_morphisms(2, 2)
    mor21 = st.all_cube_morphisms(2, 1)
    for g in mor21:
        for f in mor22:
            gf = st.cube_compose(g, f)
            for p in points(2):
                assert gf.evaluate(p) == g.evaluate(f.evaluate(p))


def test_composition_is_canonical_nested_case():
    # max-of-min composite: the outer connection merges a variable with a
    # min-node, forcing a nested alternating term
    g10 = st.cube_connection(1, 0, 2)  # max: [1]^2 -> [1]^1
    g21 = st.cube_connection(2, 1, 3)  # min in slots 2,3: [1]^3 -> [1]^2
    comp = st.cube_compose(g10, g21)
    assert comp.source_dim == 3 and comp.target_dim == 1
    for p in points(3):
        assert comp.evaluate(p) == (max(p[0], min(p[1], p[2])),)
    assert comp.is_canonical()


def test_all_morphisms_are_canonical_and_closed_under_composition():
    for m, n in [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2)]:
        for f in st.all_cube_morphisms(m, n):
            assert f.is_canonical()
    for f in st.all_cube_morphisms(2, 1):
        for g in st.all_cube_morphisms(1, 2):
            assert st.cube_compose(g, f).is_canonical()
            assert st.cube_compose(f, g).is_canonical()


# --- enumeration counts, cross-checked against a closed-form count:
# a morphism is a tuple of terms with pairwise disjoint supports that
# appear in increasing variable order across coordinates (no symmetry
# morphisms), so |hom(m,n)| sums, over the number k of non-constant
# coordinates, position/constant choices times ordered-block products
# of per-size term counts ---------------------------------------------


def formula_hom_count(m, n):
    import math

    term_counts = [0] * (m + 1)
    for size in range(1, m + 1):
        term_counts[size] = len(st._term_shapes(size))

    def block_products(u, k):
        # sum over compositions u = a_1 + ... + a_k (a_i >= 1) of
        # prod term_counts[a_i]
        if k == 0:
            return 1 if u == 0 else 0
        return sum(
            term_counts[a] * block_products(u - a, k - 1)
            for a in range(1, u - k + 2)
        )

    total = 0
    for k in range(min(m, n) + 1):
        inner = sum(
            math.comb(m, u) * block_products(u, k) for u in range(k, m + 1)
        )
        total += math.comb(n, k) * 2 ** (n - k) * inner
    return total


@pytest.mark.parametrize(
    "m,n",
    [(0, 0), (0, 1), (1, 0), (1, 1), (2, 1), (1, 2), (1, 4),
     (3, 1), (4, 1), (2, 2), (2, 3), (5, 1)],
)
def test_hom_set_sizes_match_formula(m, n):
    homs = st.all_cube_morphisms(m, n)
    assert len(homs) == formula_hom_count(m, n)
    graphs = {graph_of(f) for f in homs}
    assert len(graphs) == len(homs)  # distinct canonical forms, distinct maps


def test_pinned_hom_counts():
    assert len(st.all_cube_morphisms(1, 1)) == 3
    assert len(st.all_cube_morphisms(1, 4)) == 48
    assert len(st.all_cube_morphisms(5, 1)) == 287


def test_connection_term_shape_counts():
    # numbers of canonical one-output terms using exactly k variables
    assert [len(st._term_shapes(k)) for k in range(1, 6)] == [1, 2, 6, 22, 90]


def test_simplex_hom_counts():
    # monotone maps [m] -> [n]: binomial(m+n+1, m+1)
    import math

    for m in range(4):
        for n in range(4):
            expect = math.comb(m + n + 1, m + 1)
            assert len(st.all_simplex_morphisms(m, n)) == expect


# --- faithfulness: canonical forms biject with monotone maps ------------


@pytest.mark.parametrize("m,n", [(0, 2), (1, 2), (2, 2), (3, 1), (2, 3)])
def test_enumeration_faithful(m, n):
    homs = st.all_cube_morphisms(m, n)
    seen = {}
    for f in homs:
        key = graph_of(f)
        assert key not in seen, f"duplicate map {f} vs {seen[key]}"
        seen[key] = f


def test_associativity_on_small_dims():
    for dims in [(1, 2, 1, 2), (2, 1, 2, 1)]:
        a, b, c, d = dims
        for f in st.all_cube_morphisms(a, b):
            for g in st.all_cube_morphisms(b, c):
                for h in st.all_cube_morphisms(c, d):
                    left = st.cube_compose(h, st.cube_compose(g, f))
                    right = st.cube_compose(st.cube_compose(h, g), f)
                    assert left == right


# --- generator identities ------------------------------------------------


def test_cubical_identities():
    # conventions: face(i, eps, n): [1]^{n-1} -> [1]^n (n = target);
    # degeneracy(i, n) and connection(i, eps, n): [1]^n -> [1]^{n-1}
    n = 2

    # faces: d_j d_i = d_i d_{j-1} for i < j
    for j in range(1, n + 3):
        for i in range(1, j):
            for ej in (0, 1):
                for ei in (0, 1):
                    lhs = st.cube_compose(
                        st.cube_face(j, ej, n + 2), st.cube_face(i, ei, n + 1)
                    )
                    rhs = st.cube_compose(
                        st.cube_face(i, ei, n + 2),
                        st.cube_face(j - 1, ej, n + 1),
                    )
                    assert lhs == rhs

    # degeneracy after its face is the identity
    for i in range(1, n + 2):
        for eps in (0, 1):
            comp = st.cube_compose(
                st.cube_degeneracy(i, n + 1), st.cube_face(i, eps, n + 1)
            )
            assert comp == st.cube_identity(n)

    # connection after its own face is the identity
    for eps in (0, 1):
        comp = st.cube_compose(
            st.cube_connection(1, eps, 2), st.cube_face(1, eps, 2)
        )
        assert comp == st.cube_identity(1)
        # against the opposite face: still evaluates like the identity for
        # eps-face absorbed by max/min with the neutral constant
        comp = st.cube_compose(
            st.cube_connection(1, eps, 2), st.cube_face(2, eps, 2)
        )
        assert comp == st.cube_identity(1)

    # connection against the absorbing constant face collapses
    for eps in (0, 1):
        comp = st.cube_compose(
            st.cube_connection(1, eps, 2), st.cube_face(1, 1 - eps, 2)
        )
        for p in points(1):
            assert comp.evaluate(p) == (1 - eps,)

    # connections satisfy the degeneracy-style commutation
    for eps in (0, 1):
        lhs = st.cube_compose(
            st.cube_connection(1, eps, 2), st.cube_connection(2, eps, 3)
        )
        rhs = st.cube_compose(
            st.cube_connection(1, eps, 2), st.cube_connection(1, eps, 3)
        )
        fn = max if eps == 0 else min
        for p in points(3):
            assert lhs.evaluate(p) == (fn(p),)
        assert lhs == rhs

    # degeneracy absorbs its connection
    for eps in (0, 1):
        comp = st.cube_compose(
            st.cube_degeneracy(1, 1), st.cube_connection(1, eps, 2)
        )
        assert comp == st.cube_compose(
            st.cube_degeneracy(1, 1), st.cube_degeneracy(1, 2)
        )


def test_tensor_of_generators():
    f = st.cube_face(1, 0, 2)  # [1]^1 -> [1]^2, constant 0 in slot 1
    g = st.cube_identity(1)
    t = st.cube_tensor(f, g)
    assert t.source_dim == 2 and t.target_dim == 3
    for p in points(2):
        assert t.evaluate(p) == (0, p[0], p[1])


# --- factorization -------------------------------------------------------


def test_factor_recomposes_everywhere():
    ops = st.CUBICAL
    for m, n in [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 1)]:
        for f in st.all_cube_morphisms(m, n):
            parts = ops.factor(f)
            acc = st.cube_identity(f.source_dim)
            for g in reversed(parts):
                acc = st.cube_compose(g, acc)
            assert acc == f
            for g in parts:
                assert st.CUBICAL.generator_key(g) is not None


def test_factor_keys_agree_with_factor():
    ops = st.CUBICAL
    for f in st.all_cube_morphisms(2, 2):
        keys = ops.factor_keys(f)
        parts = ops.factor(f)
        assert len(keys) == len(parts)


def test_simplex_factor_recomposes():
    for m, n in [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 2)]:
        for f in st.all_simplex_morphisms(m, n):
            parts = st.SIMPLICIAL.factor(f)
            acc = st.simplex_identity(f.source_dim)
            for g in reversed(parts):
                acc = st.simplex_compose(g, acc)
            assert acc == f


def test_mono_epi_factorization():
    for m, n in [(1, 1), (2, 1), (1, 2), (2, 2)]:
        for f in st.all_cube_morphisms(m, n):
            mono, epi = st.cube_mono_epi(f)
            assert st.cube_is_face_type(mono)
            assert st.cube_is_epi_type(epi)
            assert st.cube_compose(mono, epi) == f


# --- serialization --------------------------------------------------------


def test_morphism_json_round_trip():
    ops = st.CUBICAL
    for f in st.all_cube_morphisms(2, 2) + st.all_cube_morphisms(3, 1):
        blob = ops.morphism_to_json(f)
        assert ops.morphism_from_json(blob) == f
    ops = st.SIMPLICIAL
    for f in st.all_simplex_morphisms(2, 2):
        blob = ops.morphism_to_json(f)
        assert ops.morphism_from_json(blob) == f
