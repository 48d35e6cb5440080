"""Canonical morphisms of the cube category (with both connections) and the
simplex category.

A cube morphism [1]^m -> [1]^n is stored as a tuple of n coordinate terms.
Each term is one of:

    ("c", 0) / ("c", 1)     constant coordinate
    ("v", i)                input variable i (1-based)
    ("max", (t1, ..., tr))  pointwise max of sub-terms
    ("min", (t1, ..., tr))  pointwise min of sub-terms

Canonical form: supports of the coordinate terms are pairwise disjoint and
ordered (all variables of an earlier coordinate precede all variables of a
later one), max/min nodes have at least two children, children alternate
operations, and children supports are ordered intervals of the node's
support.  The flat one-level max/min descriptors are not closed under
composition once both connection kinds are present (a max-connection after
a min-connection already produces max(x1, min(x2, x3))), so terms nest.
Two canonical morphisms are equal iff they are equal as monotone functions
{0,1}^m -> {0,1}^n; this is checked exhaustively in the test suite.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

CONST0 = ("c", 0)
CONST1 = ("c", 1)


def var(i: int):
    return ("v", i)


def _mk_node(op: str, children):
    """Normalize a max/min node: flatten, absorb constants, collapse."""
    absorbing = CONST1 if op == "max" else CONST0
    neutral = CONST0 if op == "max" else CONST1
    flat = []
    for ch in children:
        if ch == absorbing:
            return absorbing
        if ch == neutral:
            continue
        if ch[0] == op:
            flat.extend(ch[1])
        else:
            flat.append(ch)
    if not flat:
        return neutral
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=_term_min_var)
    return (op, tuple(flat))


def mk_max(children):
    return _mk_node("max", children)


def mk_min(children):
    return _mk_node("min", children)


def term_support(t) -> frozenset:
    if t[0] == "c":
        return frozenset()
    if t[0] == "v":
        return frozenset((t[1],))
    out = frozenset()
    for ch in t[1]:
        out |= term_support(ch)
    return out


def _term_min_var(t) -> int:
    return min(term_support(t))


def term_eval(t, point) -> int:
    """Evaluate a term on a tuple of values; point is 1-indexed via position."""
    if t[0] == "c":
        return t[1]
    if t[0] == "v":
        return point[t[1] - 1]
    vals = [term_eval(ch, point) for ch in t[1]]
    return max(vals) if t[0] == "max" else min(vals)


def _term_subst(t, coords):
    """Substitute coordinate terms for the variables of t and renormalize."""
    if t[0] == "c":
        return t
    if t[0] == "v":
        return coords[t[1] - 1]
    return _mk_node(t[0], [_term_subst(ch, coords) for ch in t[1]])


def _term_relabel(t, rel):
    if t[0] == "c":
        return t
    if t[0] == "v":
        return ("v", rel[t[1]])
    return (t[0], tuple(_term_relabel(ch, rel) for ch in t[1]))


def _term_canonical(t) -> bool:
    """Alternating ops, >= 2 children, children supports are ordered blocks."""
    if t[0] in ("c", "v"):
        return True
    if t[0] not in ("max", "min"):
        return False
    kids = t[1]
    if len(kids) < 2:
        return False
    for ch in kids:
        if ch[0] == t[0]:
            return False
        if not _term_canonical(ch):
            return False
    for a, b in zip(kids, kids[1:]):
        if max(term_support(a)) >= min(term_support(b)):
            return False
    return True


@dataclass(frozen=True)
class CubeMorphism:
    """A morphism [1]^source_dim -> [1]^target_dim of the cube category."""

    source_dim: int
    coords: tuple

    @property
    def target_dim(self) -> int:
        return len(self.coords)

    def evaluate(self, point) -> tuple:
        return tuple(term_eval(t, point) for t in self.coords)

    def is_identity(self) -> bool:
        return self.source_dim == self.target_dim and all(
            t == ("v", i + 1) for i, t in enumerate(self.coords)
        )

    def is_canonical(self) -> bool:
        supports = []
        for t in self.coords:
            if not _term_canonical(t):
                return False
            s = term_support(t)
            if s:
                supports.append(s)
        seen = set()
        for s in supports:
            if s & seen:
                return False
            seen |= s
        if any(v < 1 or v > self.source_dim for v in seen):
            return False
        for a, b in zip(supports, supports[1:]):
            if max(a) >= min(b):
                return False
        return True

    def __repr__(self):
        return f"Cube({self.source_dim}->{self.target_dim}:{_coords_str(self.coords)})"


def _coords_str(coords):
    def ts(t):
        if t[0] == "c":
            return str(t[1])
        if t[0] == "v":
            return f"x{t[1]}"
        return t[0] + "(" + ",".join(ts(c) for c in t[1]) + ")"

    return ";".join(ts(t) for t in coords)


def cube_identity(n: int) -> CubeMorphism:
    return CubeMorphism(n, tuple(("v", i) for i in range(1, n + 1)))


def cube_compose(g: CubeMorphism, f: CubeMorphism) -> CubeMorphism:
    """g after f; evaluation equals pointwise composition."""
    if f.target_dim != g.source_dim:
        raise ValueError(
            f"dimension mismatch: {f.target_dim} -> cannot feed {g.source_dim}"
        )
    return CubeMorphism(f.source_dim, tuple(_term_subst(t, f.coords) for t in g.coords))


def cube_face(i: int, eps: int, n: int) -> CubeMorphism:
    """The face [1]^(n-1) -> [1]^n inserting constant eps at slot i."""
    if not (1 <= i <= n):
        raise ValueError(f"face index {i} out of range for dim {n}")
    coords = [("v", j) for j in range(1, n)]
    coords.insert(i - 1, ("c", eps))
    return CubeMorphism(n - 1, tuple(coords))


def cube_degeneracy(i: int, n: int) -> CubeMorphism:
    """The degeneracy [1]^n -> [1]^(n-1) dropping variable i."""
    if not (1 <= i <= n):
        raise ValueError(f"degeneracy index {i} out of range for dim {n}")
    coords = [("v", j) for j in range(1, n + 1) if j != i]
    return CubeMorphism(n, tuple(coords))


def cube_connection(i: int, eps: int, n: int) -> CubeMorphism:
    """The connection [1]^n -> [1]^(n-1) merging variables i, i+1.

    eps = 0 is the max-connection, eps = 1 the min-connection.
    """
    if not (1 <= i <= n - 1):
        raise ValueError(f"connection index {i} out of range for dim {n}")
    op = "max" if eps == 0 else "min"
    coords = []
    for j in range(1, n + 1):
        if j == i:
            coords.append((op, (("v", i), ("v", i + 1))))
        elif j == i + 1:
            continue
        else:
            coords.append(("v", j))
    return CubeMorphism(n, tuple(coords))


def cube_generator(kind: str, i: int, n: int, eps: int | None = None) -> CubeMorphism:
    """Spec-facing constructor: `n` is the dim parameter of the generator.

    face(i, eps) at dim n targets [1]^n; degeneracy(i)/connection(i, eps)
    at dim n start from [1]^n.
    """
    if kind == "face":
        return cube_face(i, eps, n)
    if kind == "degeneracy":
        return cube_degeneracy(i, n)
    if kind == "connection":
        return cube_connection(i, eps, n)
    raise ValueError(f"unknown generator kind {kind!r}")


def cube_is_face_type(m: CubeMorphism) -> bool:
    """True iff m is a composite of face maps only."""
    return all(t[0] in ("c", "v") for t in m.coords) and m.is_canonical() and (
        sum(1 for t in m.coords if t[0] == "v") == m.source_dim
    )


def cube_is_epi_type(m: CubeMorphism) -> bool:
    """True iff m is a composite of degeneracies and connections (split epi)."""
    return all(t[0] != "c" for t in m.coords)


def cube_mono_epi(m: CubeMorphism):
    """Unique factorization m = mono . epi (mono inserts the constants)."""
    nonconst = [t for t in m.coords if t[0] != "c"]
    r = len(nonconst)
    mono_coords = []
    slot = 0
    for t in m.coords:
        if t[0] == "c":
            mono_coords.append(t)
        else:
            slot += 1
            mono_coords.append(("v", slot))
    mono = CubeMorphism(r, tuple(mono_coords))
    epi = CubeMorphism(m.source_dim, tuple(nonconst))
    return mono, epi


def cube_tensor(f: CubeMorphism, g: CubeMorphism) -> CubeMorphism:
    """Concatenation [1]^(a+b) -> [1]^(p+q) of two cube morphisms."""
    a = f.source_dim
    rel = {i: i + a for i in range(1, g.source_dim + 1)}
    shifted = tuple(_term_relabel(t, rel) for t in g.coords)
    return CubeMorphism(a + g.source_dim, f.coords + shifted)


def _deepest_node_leaves(t, path=()):
    """Find a node all of whose children are leaves; return (op, leaf vars)."""
    if t[0] in ("c", "v"):
        return None
    for ch in t[1]:
        found = _deepest_node_leaves(ch)
        if found is not None:
            return found
    return (t[0], tuple(ch[1] for ch in t[1]))


def _merge_leaves(t, j):
    """Replace the leaf pair (j, j+1) by leaf j and relabel higher vars down."""
    rel = {v: (v if v <= j else v - 1) for v in range(1, 10000)}

    def go(t):
        if t[0] == "c":
            return t
        if t[0] == "v":
            return ("v", rel[t[1]])
        kids = []
        for ch in t[1]:
            if ch == ("v", j + 1):
                continue
            kids.append(go(ch))
        return _mk_node(t[0], kids)

    return go(t)


def cube_factor(m: CubeMorphism):
    """Factor m into generators: m = L[0] . L[1] . ... . L[-1].

    Intermediate dimensions never exceed max(source_dim, target_dim).
    """
    if m.is_identity():
        return []
    for idx, t in enumerate(m.coords):
        if t[0] == "c":
            rest = CubeMorphism(m.source_dim, m.coords[: idx] + m.coords[idx + 1:])
            return [cube_face(idx + 1, t[1], m.target_dim)] + cube_factor(rest)
    used = set()
    for t in m.coords:
        used |= term_support(t)
    for v in range(1, m.source_dim + 1):
        if v not in used:
            rel = {u: (u if u < v else u - 1) for u in range(1, m.source_dim + 1)}
            rest = CubeMorphism(
                m.source_dim - 1, tuple(_term_relabel(t, rel) for t in m.coords)
            )
            return cube_factor(rest) + [cube_degeneracy(v, m.source_dim)]
    # all variables used, no constants: peel one adjacent connection
    for idx, t in enumerate(m.coords):
        found = _deepest_node_leaves(t)
        if found is not None:
            op, leaves = found
            j = leaves[0]
            assert leaves[1] == j + 1, "used variables must be consecutive"
            new_t = _merge_leaves(t, j)
            rel = {u: (u if u <= j else u - 1) for u in range(1, m.source_dim + 1)}
            coords = tuple(
                new_t if k == idx else _term_relabel(c, rel)
                for k, c in enumerate(m.coords)
            )
            rest = CubeMorphism(m.source_dim - 1, coords)
            eps = 0 if op == "max" else 1
            return cube_factor(rest) + [cube_connection(j, eps, m.source_dim)]
    raise AssertionError(f"cannot factor {m!r}")


@lru_cache(maxsize=None)
def _term_shapes(n: int):
    """All canonical term shapes on n ordered leaves.

    A shape is 'leaf' or (op, (child shapes with sizes)); returned as a list
    of (shape, sizes) trees encoded as nested tuples: 'leaf' or
    (op, ((shape1, n1), ...)).
    """
    if n == 1:
        return ["leaf"]
    out = []
    for op in ("max", "min"):
        for parts in _compositions(n):
            if len(parts) < 2:
                continue
            child_lists = []
            ok = True
            for p in parts:
                opts = [
                    s
                    for s in _term_shapes(p)
                    if s == "leaf" or s[0] != op
                ]
                if not opts:
                    ok = False
                    break
                child_lists.append([(s, p) for s in opts])
            if not ok:
                continue
            for combo in itertools.product(*child_lists):
                out.append((op, combo))
    return out


@lru_cache(maxsize=None)
def _compositions(n: int):
    """All ordered compositions of n into positive parts."""
    if n == 0:
        return [()]
    out = []
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            out.append((first,) + rest)
    return out


def _shape_to_term(shape, leaves):
    if shape == "leaf":
        return ("v", leaves[0])
    op, kids = shape
    terms = []
    pos = 0
    for s, size in kids:
        terms.append(_shape_to_term(s, leaves[pos: pos + size]))
        pos += size
    return (op, tuple(terms))


def _terms_on(leaves: tuple):
    return [_shape_to_term(s, leaves) for s in _term_shapes(len(leaves))]


@lru_cache(maxsize=None)
def all_cube_morphisms(m: int, n: int):
    """All canonical morphisms [1]^m -> [1]^n, deterministically ordered."""
    out = []
    variables = list(range(1, m + 1))
    for used in _subsets(variables):
        for blocks in _ordered_blockings(used):
            r = len(blocks)
            if r > n:
                continue
            for positions in itertools.combinations(range(n), r):
                const_slots = [j for j in range(n) if j not in positions]
                term_opts = [_terms_on(b) for b in blocks]
                for terms in itertools.product(*term_opts):
                    for consts in itertools.product((0, 1), repeat=len(const_slots)):
                        coords = [None] * n
                        for p, t in zip(positions, terms):
                            coords[p] = t
                        for s, e in zip(const_slots, consts):
                            coords[s] = ("c", e)
                        out.append(CubeMorphism(m, tuple(coords)))
    out.sort(key=repr)
    return tuple(out)


def _subsets(items):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _ordered_blockings(used: tuple):
    """Partitions of the sorted tuple `used` into ordered consecutive blocks."""
    if not used:
        return [()]
    out = []
    n = len(used)
    for parts in _compositions(n):
        blocks = []
        pos = 0
        for p in parts:
            blocks.append(tuple(used[pos: pos + p]))
            pos += p
        out.append(tuple(blocks))
    return out


def all_cube_epis(m: int, n: int):
    return tuple(f for f in all_cube_morphisms(m, n) if cube_is_epi_type(f))


# ---------------------------------------------------------------------------
# simplex category


@dataclass(frozen=True)
class SimplexMorphism:
    """An order-preserving map [source_dim] -> [target_dim]."""

    target_dim: int
    values: tuple

    @property
    def source_dim(self) -> int:
        return len(self.values) - 1

    def is_identity(self) -> bool:
        return self.target_dim == self.source_dim and self.values == tuple(
            range(self.target_dim + 1)
        )

    def is_canonical(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:])) and all(
            0 <= v <= self.target_dim for v in self.values
        )

    def __repr__(self):
        return f"Simp({self.source_dim}->{self.target_dim}:{list(self.values)})"


def simplex_identity(n: int) -> SimplexMorphism:
    return SimplexMorphism(n, tuple(range(n + 1)))


def simplex_compose(g: SimplexMorphism, f: SimplexMorphism) -> SimplexMorphism:
    if f.target_dim != g.source_dim:
        raise ValueError("dimension mismatch")
    return SimplexMorphism(g.target_dim, tuple(g.values[v] for v in f.values))


def simplex_face(i: int, n: int) -> SimplexMorphism:
    """The injection [n-1] -> [n] skipping i."""
    if not (0 <= i <= n):
        raise ValueError(f"face index {i} out of range for dim {n}")
    return SimplexMorphism(n, tuple(v for v in range(n + 1) if v != i))


def simplex_degeneracy(i: int, n: int) -> SimplexMorphism:
    """The surjection [n+1] -> [n] repeating i."""
    if not (0 <= i <= n):
        raise ValueError(f"degeneracy index {i} out of range for dim {n}")
    vals = list(range(i + 1)) + [i] + list(range(i + 1, n + 1))
    return SimplexMorphism(n, tuple(vals))


def simplex_is_face_type(m: SimplexMorphism) -> bool:
    return all(a < b for a, b in zip(m.values, m.values[1:]))


def simplex_is_epi_type(m: SimplexMorphism) -> bool:
    return set(m.values) == set(range(m.target_dim + 1))


def simplex_mono_epi(m: SimplexMorphism):
    image = sorted(set(m.values))
    rank = {v: k for k, v in enumerate(image)}
    epi = SimplexMorphism(len(image) - 1, tuple(rank[v] for v in m.values))
    mono = SimplexMorphism(m.target_dim, tuple(image))
    return mono, epi


def simplex_factor(m: SimplexMorphism):
    """m = faces . degeneracies, outermost first."""
    if m.is_identity():
        return []
    missing = [v for v in range(m.target_dim + 1) if v not in m.values]
    if missing:
        i = missing[-1]
        rest = SimplexMorphism(
            m.target_dim - 1, tuple(v if v < i else v - 1 for v in m.values)
        )
        return [simplex_face(i, m.target_dim)] + simplex_factor(rest)
    for k in range(len(m.values) - 1):
        if m.values[k] == m.values[k + 1]:
            rest = SimplexMorphism(m.target_dim, m.values[:k] + m.values[k + 1:])
            return simplex_factor(rest) + [simplex_degeneracy(k, m.source_dim - 1)]
    raise AssertionError("unreachable")


@lru_cache(maxsize=None)
def all_simplex_morphisms(m: int, n: int):
    out = [
        SimplexMorphism(n, vals)
        for vals in itertools.combinations_with_replacement(range(n + 1), m + 1)
    ]
    out.sort(key=repr)
    return tuple(out)


def all_simplex_epis(m: int, n: int):
    return tuple(f for f in all_simplex_morphisms(m, n) if simplex_is_epi_type(f))


# ---------------------------------------------------------------------------
# site dispatch


class SiteOps:
    """Uniform interface over the two sites used by the presheaf layer."""

    def __init__(self, name):
        self.name = name
        self._factor_cache = {}
        self._compose_cache = {}

    @property
    def cubical(self):
        return self.name == "cubical"

    def identity(self, n):
        return cube_identity(n) if self.cubical else simplex_identity(n)

    def compose(self, g, f):
        key = (g, f)
        out = self._compose_cache.get(key)
        if out is None:
            out = cube_compose(g, f) if self.cubical else simplex_compose(g, f)
            self._compose_cache[key] = out
        return out

    def all_morphisms(self, m, n):
        return all_cube_morphisms(m, n) if self.cubical else all_simplex_morphisms(m, n)

    def all_epis(self, m, n):
        return all_cube_epis(m, n) if self.cubical else all_simplex_epis(m, n)

    def factor(self, m):
        out = self._factor_cache.get(m)
        if out is None:
            out = cube_factor(m) if self.cubical else simplex_factor(m)
            keyed = tuple(
                (self.generator_key(g), g.source_dim) for g in out
            )
            self._factor_cache[m] = out = (out, keyed)
        return out[0]

    def factor_keys(self, m):
        """Factorization as a list of ((gen_key, acting_dim), next_dim)."""
        self.factor(m)
        return self._factor_cache[m][1]

    def is_face_type(self, m):
        return cube_is_face_type(m) if self.cubical else simplex_is_face_type(m)

    def is_epi_type(self, m):
        return cube_is_epi_type(m) if self.cubical else simplex_is_epi_type(m)

    def mono_epi(self, m):
        return cube_mono_epi(m) if self.cubical else simplex_mono_epi(m)

    def generators(self, k, trunc_dim):
        """Generator keys and morphisms acting on cells of dimension k.

        Yields (key, morphism) with morphism target dimension k; faces lower
        cell dimension, degeneracies/connections raise it.
        """
        out = []
        if self.cubical:
            if k >= 1:
                for i in range(1, k + 1):
                    for eps in (0, 1):
                        out.append((("face", i, eps), cube_face(i, eps, k)))
            if k + 1 <= trunc_dim:
                for i in range(1, k + 2):
                    out.append((("deg", i), cube_degeneracy(i, k + 1)))
                for i in range(1, k + 1):
                    for eps in (0, 1):
                        out.append((("conn", i, eps), cube_connection(i, eps, k + 1)))
        else:
            if k >= 1:
                for i in range(k + 1):
                    out.append((("face", i), simplex_face(i, k)))
            if k + 1 <= trunc_dim:
                for i in range(k + 1):
                    out.append((("deg", i), simplex_degeneracy(i, k)))
        return out

    def generator_key(self, g):
        """Key + acting dimension for a generator morphism."""
        if self.cubical:
            n, m = g.source_dim, g.target_dim
            if n == m - 1:
                for i, t in enumerate(g.coords):
                    if t[0] == "c":
                        return ("face", i + 1, t[1]), m
            if n == m + 1:
                for i, t in enumerate(g.coords):
                    if t[0] != "v" or t[1] != i + 1:
                        if t[0] == "v":
                            return ("deg", i + 1), m
                        return ("conn", i + 1, 0 if t[0] == "max" else 1), m
                return ("deg", n), m
        else:
            n, m = g.source_dim, g.target_dim
            if n == m - 1:
                missing = [v for v in range(m + 1) if v not in g.values][0]
                return ("face", missing), m
            if n == m + 1:
                for i in range(len(g.values) - 1):
                    if g.values[i] == g.values[i + 1]:
                        return ("deg", g.values[i]), m
        raise ValueError(f"not a generator: {g!r}")

    def morphism_to_json(self, f):
        if self.cubical:
            return {
                "source_dim": f.source_dim,
                "coords": [_term_to_json(t) for t in f.coords],
            }
        return {"target_dim": f.target_dim, "values": list(f.values)}

    def morphism_from_json(self, data):
        if self.cubical:
            return CubeMorphism(
                data["source_dim"], tuple(_term_from_json(t) for t in data["coords"])
            )
        return SimplexMorphism(data["target_dim"], tuple(data["values"]))


def _term_to_json(t):
    if t == CONST0:
        return "const0"
    if t == CONST1:
        return "const1"
    if t[0] == "v":
        return t[1]
    return {t[0]: [_term_to_json(ch) for ch in t[1]]}


def _term_from_json(d):
    if d == "const0":
        return CONST0
    if d == "const1":
        return CONST1
    if isinstance(d, int):
        return ("v", d)
    (op, kids), = d.items()
    return (op, tuple(_term_from_json(ch) for ch in kids))


CUBICAL = SiteOps("cubical")
SIMPLICIAL = SiteOps("simplicial")


def site_ops(name: str) -> SiteOps:
    if name == "cubical":
        return CUBICAL
    if name == "simplicial":
        return SIMPLICIAL
    raise ValueError(f"unknown site {name!r}")
