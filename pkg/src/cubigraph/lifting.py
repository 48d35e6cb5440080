"""Lifting problems for finite presheaf maps: the generic square solver,
the level-n generating sets of boundary and open-box/horn inclusions, the
fibration classifiers defined by right lifting properties, and bounded
search for elementary homotopies through the cylinder.
"""

from __future__ import annotations

from collections import deque

from .presheaf import (
    FinitePresheaf,
    PresheafMap,
    build_standard,
    enumerate_maps,
    identity_map,
    representable,
)
from .product import cylinder


def empty_presheaf(site_name, trunc_dim):
    ops_cells = {d: () for d in range(trunc_dim + 1)}
    from . import site as st

    action = {}
    ops = st.site_ops(site_name)
    for d in range(trunc_dim + 1):
        for key, g in ops.generators(d, trunc_dim):
            action[(key, d)] = {}
    return FinitePresheaf(site_name, trunc_dim, ops_cells, action)


def terminal_map(X):
    """The unique map X -> standard 0-cell."""
    pt = representable(X.site, 0, X.trunc_dim)
    comps = {d: {c: pt.cells[d][0] for c in X.cells[d]} for d in X.dims()}
    return PresheafMap(X, pt, comps)


def inclusion_of_subset(A, B):
    """Inclusion between presheaves whose cells literally coincide."""
    return PresheafMap(A, B, {d: {c: c for c in A.cells[d]} for d in A.dims()})


class LiftingProblem:
    def __init__(self, left, right, top, bottom):
        self.left = left
        self.right = right
        self.top = top
        self.bottom = bottom
        for d in left.source.dims():
            for a in left.source.cells[d]:
                if right.components[d][top.components[d][a]] != bottom.components[d][
                    left.components[d][a]
                ]:
                    raise ValueError("lifting square does not commute")


def solve(problem, all_lifts=False):
    """Find h: B -> X with h.i = u and f.h = v, or certify absence."""
    i, f, u, v = problem.left, problem.right, problem.top, problem.bottom
    A, B, X = i.source, i.target, f.source
    forced = {}
    for d in A.dims():
        for a in A.cells[d]:
            b = i.components[d][a]
            want = u.components[d][a]
            if forced.get((d, b), want) != want:
                return {"no_lift": True}
            forced[(d, b)] = want
    fiber = lambda d, b, x: f.components[d][x] == v.components[d][b]
    lifts = enumerate_maps(
        B, X, forced=forced, cand_filter=fiber,
        limit=None if all_lifts else 1,
    )
    lifts = [h for h in lifts if f.compose(h) == v]
    if not lifts:
        return {"no_lift": True}
    return {"lifts": lifts} if all_lifts else {"lift": lifts[0]}


def squares_over(i, f):
    """All commuting squares (u, v) of i against f, deterministically."""
    A, B = i.source, i.target
    X, Y = f.source, f.target
    out = []
    for u in enumerate_maps(A, X):
        forced = {}
        ok = True
        for d in A.dims():
            for a in A.cells[d]:
                b = i.components[d][a]
                want = f.components[d][u.components[d][a]]
                if forced.get((d, b), want) != want:
                    ok = False
                    break
                forced[(d, b)] = want
            if not ok:
                break
        if not ok:
            continue
        for v in enumerate_maps(B, Y, forced=forced):
            out.append((u, v))
    return out


def has_rlp(f, gen_set, trunc_dim=None):
    """True iff every square over every member lifts; else a counterexample."""
    D = trunc_dim if trunc_dim is not None else f.source.trunc_dim
    if D != f.source.trunc_dim:
        raise ValueError("trunc_dim must match the map")
    members = gen_set.realize(D)
    for name, i in members:
        for u, v in squares_over(i, f):
            if "no_lift" in solve(LiftingProblem(i, f, u, v)):
                return False, {"member": name, "top": u, "bottom": v}
    return True, None


# ---------------------------------------------------------------------------
# generating sets


class GeneratingSet:
    """A named family of standard-cell inclusions, realized lazily."""

    def __init__(self, name, n, site_name, member_specs):
        self.name = name
        self.n = n
        self.site = site_name
        self.member_specs = member_specs
        self._cache = {}

    def max_k(self):
        return max(spec["k"] for spec in self.member_specs) if self.member_specs else 0

    def realize(self, trunc_dim):
        if trunc_dim < self.max_k():
            raise ValueError(
                f"trunc_dim {trunc_dim} too low for member of dim {self.max_k()}"
            )
        if trunc_dim in self._cache:
            return self._cache[trunc_dim]
        out = [
            (self._name_of(spec), _realize_member(self.site, spec, trunc_dim))
            for spec in self.member_specs
        ]
        self._cache[trunc_dim] = out
        return out

    def _name_of(self, spec):
        bits = [spec["shape"], f"k={spec['k']}"]
        if spec.get("i") is not None:
            bits.append(f"i={spec['i']}")
        if spec.get("eps") is not None:
            bits.append(f"eps={spec['eps']}")
        return " ".join(bits)


def _realize_member(site_name, spec, D):
    shape, k = spec["shape"], spec["k"]
    i, eps = spec.get("i"), spec.get("eps")
    if site_name == "cubical":
        if shape == "boundary_into_cell":
            if k == 0:
                cell = build_standard("cube", 0, trunc_dim=D)
                return inclusion_of_subset(empty_presheaf("cubical", D), cell.realized)
            bd = build_standard("boundary_cube", k, trunc_dim=D)
            return bd.inclusion
        if shape == "box_into_cell":
            return build_standard("open_box", k, i, eps, trunc_dim=D).inclusion
        if shape == "box_into_boundary":
            box = build_standard("open_box", k, i, eps, trunc_dim=D)
            bd = build_standard("boundary_cube", k, trunc_dim=D)
            return inclusion_of_subset(box.realized, bd.realized)
    else:
        if shape == "boundary_into_cell":
            if k == 0:
                cell = build_standard("simplex", 0, trunc_dim=D)
                return inclusion_of_subset(
                    empty_presheaf("simplicial", D), cell.realized
                )
            return build_standard("boundary_simplex", k, trunc_dim=D).inclusion
        if shape == "horn_into_cell":
            return build_standard("horn", k, i, trunc_dim=D).inclusion
        if shape == "horn_into_boundary":
            horn = build_standard("horn", k, i, trunc_dim=D)
            bd = build_standard("boundary_simplex", k, trunc_dim=D)
            return inclusion_of_subset(horn.realized, bd.realized)
    raise ValueError(f"unknown member shape {shape!r}")


def _box_indices(k):
    return [(i, eps) for i in range(1, k + 1) for eps in (0, 1)]


def generating_set(name, n):
    """The named level-n generating set.

    J_n' (cubical): open boxes into cubes for 0 < k <= n+1 plus all open
    boxes of dimension n+2 into the boundary; I_n': boundaries into cubes
    for 0 <= k <= n+1.  Simplicial mirrors use horns.
    """
    specs = []
    if name == "J_n_prime_cubical":
        for k in range(1, n + 2):
            for i, eps in _box_indices(k):
                specs.append({"shape": "box_into_cell", "k": k, "i": i, "eps": eps})
        for i, eps in _box_indices(n + 2):
            specs.append(
                {"shape": "box_into_boundary", "k": n + 2, "i": i, "eps": eps}
            )
        return GeneratingSet(name, n, "cubical", specs)
    if name == "I_n_prime_cubical":
        for k in range(0, n + 2):
            specs.append({"shape": "boundary_into_cell", "k": k})
        return GeneratingSet(name, n, "cubical", specs)
    if name == "J_n_prime_simplicial":
        for k in range(1, n + 2):
            for i in range(k + 1):
                specs.append({"shape": "horn_into_cell", "k": k, "i": i})
        for i in range(n + 3):
            specs.append({"shape": "horn_into_boundary", "k": n + 2, "i": i})
        return GeneratingSet(name, n, "simplicial", specs)
    if name == "I_n_prime_simplicial":
        for k in range(0, n + 2):
            specs.append({"shape": "boundary_into_cell", "k": k})
        return GeneratingSet(name, n, "simplicial", specs)
    if name == "J_cubical_bounded":
        for k in range(1, n + 1):
            for i, eps in _box_indices(k):
                specs.append({"shape": "box_into_cell", "k": k, "i": i, "eps": eps})
        return GeneratingSet(name, n, "cubical", specs)
    raise ValueError(f"unknown generating set {name!r}")


def is_transferred_naive_n_fibration(f, n):
    return has_rlp(f, generating_set(_j_name(f), n))


def _j_name(f):
    return (
        "J_n_prime_cubical" if f.source.site == "cubical" else "J_n_prime_simplicial"
    )


def _i_name(f):
    return (
        "I_n_prime_cubical" if f.source.site == "cubical" else "I_n_prime_simplicial"
    )


def is_acyclic_transferred_fibration(f, n):
    return has_rlp(f, generating_set(_i_name(f), n))


def is_kan_fibration_bounded(f, kmax):
    if f.source.site != "cubical":
        raise ValueError("Kan check is cubical")
    return has_rlp(f, generating_set("J_cubical_bounded", kmax))


# ---------------------------------------------------------------------------
# elementary homotopies


def elementary_homotopy_search(f, g, max_chain=4):
    """Zig-zag chains of elementary homotopies from f to g.

    Builds the full homotopy graph on enumerate_maps(X, Y) by enumerating
    every cylinder map, so a miss with the reachable set exhausted is a
    conclusive negative.
    """
    X, Y = f.source, f.target
    P, i0, i1, _ = cylinder(X)
    all_maps = enumerate_maps(X, Y)
    homotopies = enumerate_maps(P, Y)
    edges = {}
    for H in homotopies:
        a = H.compose(i0)
        b = H.compose(i1)
        edges.setdefault(a, set()).add(b)
        edges.setdefault(b, set()).add(a)
    idx_of = {m: i for i, m in enumerate(all_maps)}
    adj = {
        idx_of[m]: sorted(idx_of[b] for b in edges.get(m, ()))
        for m in all_maps
    }
    start, goal = idx_of[f], idx_of[g]
    prev = {start: None}
    frontier = deque([(start, 0)])
    exhausted = True
    while frontier:
        cur, depth = frontier.popleft()
        if cur == goal:
            chain = []
            while cur is not None:
                chain.append(all_maps[cur])
                cur = prev[cur]
            return {"chain": list(reversed(chain)), "length": depth}
        if depth >= max_chain:
            exhausted = False
            continue
        for nxt in adj[cur]:
            if nxt not in prev:
                prev[nxt] = cur
                frontier.append((nxt, depth + 1))
    return {"none_found": True, "exhausted": exhausted}
