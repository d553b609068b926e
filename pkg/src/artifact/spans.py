"""Squares, double isomorphisms and the span category of S(P)_2.

A span A <- X -> B is a decorated vertical map X -> A together with a plain
horizontal map X -> B.  Spans are stored in canonical form: the apex is
relabeled so that (horizontal, vertical map, decoration indices) is
lexicographically least.  Free P-algebra elements are orbit classes
(theta, tuple) in P(n) x_{S_n} m^n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from . import opcat
from .errors import ArityOverflow, BudgetExceeded, FlavorMismatch, GammaLiftUndefined
from .opcat import GAMMA, OMEGA, S, DecoratedMap, compose
from .operad import El, all_perms, perm_inverse

DEFAULT_BUDGET = 200_000


# ---------------------------------------------------------------------------
# squares


@dataclass(frozen=True)
class Square:
    """A --top--> B over C --bottom--> D with vertical left: A -> C, right: B -> D."""

    top: tuple[int, ...]
    bottom: tuple[int, ...]
    left: DecoratedMap
    right: DecoratedMap

    @property
    def flavor(self) -> str:
        return self.left.flavor

    @property
    def apex_size(self) -> int:
        return self.left.source_size

    def issues(self) -> list[str]:
        """Empty when the pullback and decoration conditions both hold."""
        out = []
        L, R = self.left, self.right
        op = L.operad
        if L.flavor != R.flavor:
            out.append("flavors differ")
            return out
        pointed = L.flavor == GAMMA
        if len(self.top) != L.source_size or len(self.bottom) != L.target_size:
            out.append("shapes do not match")
            return out
        for a in range(1, L.source_size + 1):
            c, b = L.map[a - 1], self.top[a - 1]
            gc = 0 if c == 0 else self.bottom[c - 1]
            pb = 0 if b == 0 else R.map[b - 1]
            if gc != pb:
                out.append(f"square does not commute at {a}")
        pairs = [(L.map[a - 1], self.top[a - 1]) for a in range(1, L.source_size + 1)]
        expected = _pullback_pairs(self.bottom, R.map, L.target_size, R.source_size, pointed)
        if sorted(pairs) != expected:
            out.append("apex is not the pullback")
        if out:
            return out
        for c in range(1, L.target_size + 1):
            d = self.bottom[c - 1]
            if d == 0:
                continue
            left_fiber = L.fiber(c)
            right_fiber = R.fiber(d)
            pos = {b: t for t, b in enumerate(right_fiber, start=1)}
            h = tuple(pos[self.top[a - 1]] for a in left_fiber)
            if op.act(L.decoration[c - 1], perm_inverse(h)) != R.decoration[d - 1]:
                out.append(f"decoration condition fails over {c}")
        return out

    def is_valid(self) -> bool:
        return not self.issues()


def _pullback_pairs(bottom, right_map, csize, bsize, pointed):
    lo = 0 if pointed else 1
    out = []
    for c in range(lo, csize + 1):
        gc = 0 if c == 0 else bottom[c - 1]
        for b in range(lo, bsize + 1):
            pb = 0 if b == 0 else right_map[b - 1]
            if gc == pb and (c, b) != (0, 0):
                out.append((c, b))
    return out


def lift_square(bottom: Sequence[int], right: DecoratedMap) -> Square:
    """The pullback square over (bottom, right), apex ordered by pairs (c, b)."""
    bottom = tuple(bottom)
    op = right.operad
    pointed = right.flavor == GAMMA
    if pointed and any(y == 0 for y in bottom):
        raise GammaLiftUndefined("the bottom map sends a non-basepoint element to 0")
    if right.flavor == OMEGA and set(bottom) != set(range(1, right.target_size + 1)):
        raise FlavorMismatch("horizontal Omega maps are surjective")
    if any(not 1 <= y <= right.target_size for y in bottom):
        raise ValueError("bottom map does not land in the target of the right map")
    pairs = _pullback_pairs(bottom, right.map, len(bottom), right.source_size, pointed)
    left_map = tuple(c for c, _ in pairs)
    top = tuple(b for _, b in pairs)
    dec = tuple(right.decoration[bottom[c - 1] - 1] for c in range(1, len(bottom) + 1))
    left = DecoratedMap(right.flavor, len(pairs), len(bottom), left_map, dec, op)
    return Square(top, bottom, left, right)


@dataclass(frozen=True)
class DoubleIso:
    """A bijection f of an object together with its vertical twin (f, 1^n)."""

    bijection: tuple[int, ...]

    def vertical(self, op, flavor: str = S) -> DecoratedMap:
        n = len(self.bijection)
        return DecoratedMap(flavor, n, n, self.bijection, (op.unit,) * n, op)

    def inverse(self) -> DoubleIso:
        return DoubleIso(perm_inverse(self.bijection))


def relabel_square(sq: Square, iso: DoubleIso) -> Square:
    """Precompose the apex legs with a double isomorphism."""
    h = iso.bijection
    left = compose(sq.left, iso.vertical(sq.left.operad, sq.left.flavor))
    top = opcat.compose_maps(sq.top, h)
    return Square(top, sq.bottom, left, sq.right)


def squares_isomorphic(a: Square, b: Square) -> DoubleIso | None:
    """A double isomorphism carrying b onto a when the outer legs agree."""
    if (a.bottom, a.right) != (b.bottom, b.right) or a.apex_size != b.apex_size:
        return None
    for h in all_perms(a.apex_size):
        iso = DoubleIso(h)
        if relabel_square(a, iso) == b:
            return iso
    return None


# ---------------------------------------------------------------------------
# spans


@dataclass(frozen=True)
class SpanMorphism:
    """[A <- X -> B] in canonical form; build with ``make_span``."""

    source: int
    target: int
    vertical: DecoratedMap
    horizontal: tuple[int, ...]

    @property
    def apex_size(self) -> int:
        return self.vertical.source_size

    @property
    def operad(self):
        return self.vertical.operad

    def key(self) -> tuple:
        return (self.horizontal, self.vertical.map, tuple(w.idx for w in self.vertical.decoration))

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "vertical": self.vertical.to_json(),
            "horizontal": list(self.horizontal),
        }

    def __str__(self) -> str:
        dec = ",".join(self.operad.label(w) for w in self.vertical.decoration)
        return f"[{self.source} <- {self.apex_size} -> {self.target}] v={list(self.vertical.map)}({dec}) h={list(self.horizontal)}"


def relabel(vertical: DecoratedMap, horizontal: Sequence[int], h: Sequence[int]) -> tuple[DecoratedMap, tuple[int, ...]]:
    """Transport along the double isomorphism h: X' -> X."""
    iso = DoubleIso(tuple(h))
    return compose(vertical, iso.vertical(vertical.operad, vertical.flavor)), opcat.compose_maps(horizontal, h)


def _canonical(vertical: DecoratedMap, horizontal: tuple[int, ...]) -> tuple[DecoratedMap, tuple[int, ...]]:
    n = vertical.source_size
    order = sorted(range(1, n + 1), key=lambda x: (horizontal[x - 1], vertical.map[x - 1], x))
    v, hz = relabel(vertical, horizontal, tuple(order))
    op = v.operad
    dec = list(v.decoration)
    for c in range(1, v.target_size + 1):
        fib = v.fiber(c)
        if len(fib) < 2:
            continue
        runs: list[list[int]] = []
        for t, x in enumerate(fib, start=1):
            if runs and hz[fib[runs[-1][0] - 1] - 1] == hz[x - 1]:
                runs[-1].append(t)
            else:
                runs.append([t])
        if all(len(r) == 1 for r in runs):
            continue
        best = dec[c - 1]
        for pieces in itertools.product(*[itertools.permutations(r) for r in runs]):
            perm = tuple(x for piece in pieces for x in piece)
            cand = op.act(dec[c - 1], perm)
            if cand.idx < best.idx:
                best = cand
        dec[c - 1] = best
    v = DecoratedMap(v.flavor, v.source_size, v.target_size, v.map, tuple(dec), op)
    return v, hz


def make_span(vertical: DecoratedMap, horizontal: Sequence[int], target: int) -> SpanMorphism:
    """Canonicalize the diagram source <- apex -> target."""
    horizontal = tuple(horizontal)
    if vertical.flavor != S:
        vertical = vertical.with_flavor(S)
    if len(horizontal) != vertical.source_size:
        raise ValueError("legs have different sources")
    if any(not 1 <= y <= target for y in horizontal):
        raise ValueError("horizontal map leaves the target")
    v, h = _canonical(vertical, horizontal)
    return SpanMorphism(vertical.target_size, target, v, h)


def canonical_bruteforce(vertical: DecoratedMap, horizontal: Sequence[int]) -> tuple:
    """Least key over all apex relabelings (reference implementation)."""
    best = None
    for h in all_perms(vertical.source_size):
        v, hz = relabel(vertical, tuple(horizontal), h)
        key = (hz, v.map, tuple(w.idx for w in v.decoration))
        if best is None or key < best:
            best = key
    return best


def spans_equivalent(a: SpanMorphism, b: SpanMorphism) -> DoubleIso | None:
    """A double isomorphism h with b = a o h, found by search."""
    if (a.source, a.target, a.apex_size) != (b.source, b.target, b.apex_size):
        return None
    for h in all_perms(a.apex_size):
        v, hz = relabel(a.vertical, a.horizontal, h)
        if v == b.vertical and hz == b.horizontal:
            return DoubleIso(h)
    return None


def identity_span(op, n: int) -> SpanMorphism:
    return make_span(opcat.identity(S, op, n), tuple(range(1, n + 1)), n)


def horizontal_span(op, mp: Sequence[int], target: int) -> SpanMorphism:
    """[n <- n -> m] for a plain map n -> m."""
    n = len(mp)
    return make_span(opcat.identity(S, op, n), tuple(mp), target)


def vertical_span(v: DecoratedMap) -> SpanMorphism:
    """[A <- X -> X] for a vertical map X -> A."""
    n = v.source_size
    return make_span(v, tuple(range(1, n + 1)), n)


def pointed_horizontal_span(op, mp: Sequence[int], target: int) -> SpanMorphism:
    """A pointed map [n] -> [m] as the span n <- n minus h^{-1}(0) -> m."""
    kept = [x for x, y in enumerate(mp, start=1) if y != 0]
    incl = opcat.inclusion(op, kept, len(mp))
    return make_span(incl, tuple(mp[x - 1] for x in kept), target)


def pointed_vertical_span(v: DecoratedMap) -> SpanMorphism:
    """A pointed decorated map [n] -> [m] read contravariantly: m <- kept -> n."""
    kept = [x for x, y in enumerate(v.map, start=1) if y != 0]
    pos = {x: k for k, x in enumerate(kept, start=1)}
    restricted = DecoratedMap(S, len(kept), v.target_size, tuple(v.map[x - 1] for x in kept), v.decoration, v.operad)
    del pos
    return make_span(restricted, tuple(kept), v.source_size)


def compose_spans(s2: SpanMorphism, s1: SpanMorphism) -> SpanMorphism:
    """s2 o s1 for s1: A -> B and s2: B -> C."""
    if s1.target != s2.source:
        raise FlavorMismatch("spans are not composable")
    sq = lift_square(s1.horizontal, s2.vertical)
    vertical = compose(s1.vertical, sq.left)
    horizontal = opcat.compose_maps(s2.horizontal, sq.top)
    return make_span(vertical, horizontal, s2.target)


def coproduct_spans(s1: SpanMorphism, s2: SpanMorphism) -> SpanMorphism:
    """The map A_1 + A_2 -> T induced by s1 and s2."""
    if s1.target != s2.target:
        raise FlavorMismatch("coproduct needs a common target")
    v = opcat.disjoint_union(s1.vertical, s2.vertical)
    return make_span(v, s1.horizontal + s2.horizontal, s1.target)


def coproduct_injection(op, n1: int, n2: int, which: int) -> SpanMorphism:
    n = n1 if which == 1 else n2
    off = 0 if which == 1 else n1
    return horizontal_span(op, tuple(x + off for x in range(1, n + 1)), n1 + n2)


def enumerate_spans(op, a: int, b: int, max_apex: int, budget: int = DEFAULT_BUDGET) -> list[SpanMorphism]:
    """All span classes a -> b whose apex has at most ``max_apex`` points."""
    seen: dict[tuple, SpanMorphism] = {}
    work = 0
    for x in range(max_apex + 1):
        verts = opcat.enumerate_hom(S, op, x, a, budget)
        work += len(verts) * b ** x
        if work > budget:
            raise BudgetExceeded(f"span enumeration needs {work} candidates", work)
        for v in verts:
            for hz in itertools.product(range(1, b + 1), repeat=x):
                s = make_span(v, hz, b)
                seen.setdefault(s.key(), s)
    return sorted(seen.values(), key=lambda s: (s.apex_size, s.key()))


# ---------------------------------------------------------------------------
# free algebra elements


@dataclass(frozen=True)
class FreeAlgebraElement:
    """Orbit class of (theta, tuple) in P(n) x_{S_n} m^n; build with ``free_element``."""

    theta: El
    tuple: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.tuple)

    def to_json(self, op) -> dict:
        return {"theta": op.label(self.theta), "tuple": list(self.tuple)}


def free_element(op, theta: El, tup: Sequence[int]) -> FreeAlgebraElement:
    """Least (theta index, tuple) over relabelings (theta . h, tuple o h)."""
    tup = tuple(tup)
    if theta.arity != len(tup):
        raise ValueError("arity of theta differs from the tuple length")
    best = None
    for h in all_perms(len(tup)):
        cand = (op.act(theta, h).idx, tuple(tup[x - 1] for x in h))
        if best is None or cand < best:
            best = cand
    return FreeAlgebraElement(El(len(tup), best[0]), best[1])


def span_to_algebra_map(s: SpanMorphism) -> FreeAlgebraElement:
    if s.source != 1:
        raise ValueError("span_to_algebra_map needs source 1")
    return free_element(s.operad, s.vertical.decoration[0], s.horizontal)


def span_to_algebra_maps(s: SpanMorphism) -> list[FreeAlgebraElement]:
    """The p-tuple of free algebra elements given by a span p -> m."""
    out = []
    for i in range(1, s.source + 1):
        fib = s.vertical.fiber(i)
        out.append(free_element(s.operad, s.vertical.decoration[i - 1], tuple(s.horizontal[x - 1] for x in fib)))
    return out


def algebra_map_to_span(op, e: FreeAlgebraElement, m: int) -> SpanMorphism:
    return algebra_maps_to_span(op, [e], m)


def algebra_maps_to_span(op, elems: Sequence[FreeAlgebraElement], m: int) -> SpanMorphism:
    vmap: list[int] = []
    hz: list[int] = []
    for i, e in enumerate(elems, start=1):
        vmap.extend([i] * e.arity)
        hz.extend(e.tuple)
    v = DecoratedMap(S, len(vmap), len(elems), tuple(vmap), tuple(e.theta for e in elems), op)
    return make_span(v, hz, m)


def compose_algebra_maps(op, g: Sequence[FreeAlgebraElement], outer: FreeAlgebraElement) -> FreeAlgebraElement:
    """Substitute g[j] for the j-th generator in outer."""
    parts = [g[t - 1] for t in outer.tuple]
    theta = op.gamma(outer.theta, [p.theta for p in parts])
    return free_element(op, theta, tuple(x for p in parts for x in p.tuple))


def enumerate_free_elements(op, m: int, bound: int, budget: int = DEFAULT_BUDGET) -> list[FreeAlgebraElement]:
    """All orbit classes with internal arity at most ``bound``."""
    if bound > op.max_arity:
        raise ArityOverflow(f"internal arity {bound} exceeds the truncation {op.max_arity}")
    seen: dict[tuple, FreeAlgebraElement] = {}
    work = 0
    for k in range(bound + 1):
        work += op.size(k) * m ** k
        if work > budget:
            raise BudgetExceeded(f"free algebra enumeration needs {work} candidates", work)
        for theta in op.elements(k):
            for tup in itertools.product(range(1, m + 1), repeat=k):
                e = free_element(op, theta, tup)
                seen.setdefault((e.arity, e.theta.idx, e.tuple), e)
    return [seen[k] for k in sorted(seen)]


def enumerate_free_hom(op, p: int, m: int, bound: int, budget: int = DEFAULT_BUDGET) -> list[tuple[FreeAlgebraElement, ...]]:
    """All p-tuples of orbit classes, i.e. algebra maps F(p) -> F(m) within the bound."""
    elems = enumerate_free_elements(op, m, bound, budget)
    if len(elems) ** p > budget:
        raise BudgetExceeded(f"{len(elems)}^{p} algebra maps exceed the budget", len(elems) ** p)
    return list(itertools.product(elems, repeat=p))


# ---------------------------------------------------------------------------
# admissible subsets


def admissible_subsets(sq: Square) -> list[tuple[int, ...]]:
    """Subsets A' of the apex on which both legs stay surjective."""
    if sq.flavor != OMEGA:
        raise FlavorMismatch("admissible subsets are defined for Omega squares")
    n = sq.apex_size
    out = []
    need_b = set(range(1, sq.right.source_size + 1))
    need_c = set(range(1, sq.left.target_size + 1))
    for r in range(n + 1):
        for sub in itertools.combinations(range(1, n + 1), r):
            if {sq.top[a - 1] for a in sub} == need_b and {sq.left.map[a - 1] for a in sub} == need_c:
                out.append(sub)
    return out


def restricted_legs(sq: Square, subset: Sequence[int]) -> tuple[tuple[int, ...], DecoratedMap]:
    """(f_{A'}, (phi, omega)_{A'}) for an admissible subset."""
    sub = sorted(subset)
    top = tuple(sq.top[a - 1] for a in sub)
    left = opcat.restrict_to_subset(sq.left, sub)
    return top, left


def presentation_square(op, n: int, i: int, k: int, alpha: El | None = None) -> Square:
    """The square over (s_i^n, (s_i^{n+k-1,n-1}, alpha)) whose apex has n+2k points."""
    right = opcat.collapse(op, n + k - 1, i, k, alpha)
    return lift_square(opcat.s_map(n, i), right)
