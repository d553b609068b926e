"""Concrete functors used as test subjects.

A span F(a) -> F(b) of free P-algebras induces a map of free monoids
sending each generator to a word; for As the word follows the total order
carried by the decoration, every other operad is read through Com.  The
fixtures below are functors of that monoid map.
"""

from __future__ import annotations

import random
from . import spans
from .functorlab import (
    COVARIANT,
    OmegaCat,
    SpanCat,
    TruncatedFunctor,
    compose_ab,
    divided_square,
    symmetric_square,
    tensor_power,
)
from .operad import El, TruncatedOperad
from .passi import TruncatedRing
from .zmod import Presentation, ZMatrix


def is_associative(op: TruncatedOperad) -> bool:
    return hasattr(op, "ordering")


def span_words(s: spans.SpanMorphism) -> list[tuple[int, ...]]:
    """The image word of each source generator (sorted unless the operad is As)."""
    op = s.operad
    out = []
    for e in spans.span_to_algebra_maps(s):
        if is_associative(op):
            out.append(tuple(e.tuple[k - 1] for k in op.ordering(e.theta)))
        else:
            out.append(tuple(sorted(e.tuple)))
    return out


def lin(cat: SpanCat) -> TruncatedFunctor:
    """Abelianization: F(n) = Z^n, a span acts by letter counts."""
    def action(s) -> ZMatrix:
        cols = []
        for w in span_words(s):
            v = [0] * s.target
            for y in w:
                v[y - 1] += 1
            cols.append(v)
        return ZMatrix.from_columns(cols, s.target)
    return TruncatedFunctor(cat, COVARIANT, Presentation.free, action, "Lin")


def tensor_square(cat: SpanCat) -> TruncatedFunctor:
    return compose_ab(tensor_power(2), lin(cat))


def tensor_cube(cat: SpanCat) -> TruncatedFunctor:
    return compose_ab(tensor_power(3), lin(cat))


def sym_square(cat: SpanCat) -> TruncatedFunctor:
    return compose_ab(symmetric_square(), lin(cat))


def gamma_square(cat: SpanCat) -> TruncatedFunctor:
    return compose_ab(divided_square(), lin(cat))


def passi_functor(cat: SpanCat, d: int) -> TruncatedFunctor:
    """I/I^{d+1} of the free monoid (free commutative unless the operad is As)."""
    commutative = not is_associative(cat.op)
    rings: dict[int, TruncatedRing] = {}

    def ring(n: int) -> TruncatedRing:
        if n not in rings:
            rings[n] = TruncatedRing(range(n) if commutative else [0] * n, d)
        return rings[n]

    def value(n: int) -> Presentation:
        return Presentation.free(ring(n).rank if n else 0)

    def action(s) -> ZMatrix:
        src, tgt = ring(s.source), ring(s.target)
        images = [tgt.word(w) for w in span_words(s)]
        cols = []
        for m in src.basis:
            val = tgt.one()
            for v in m:
                val = tgt.mul(val, tgt.add(images[v], tgt.one(), -1))
            cols.append(tgt.coords(val))
        return ZMatrix.from_columns(cols, tgt.rank)

    return TruncatedFunctor(cat, COVARIANT, value, action, f"P{d}")


def span_fixture_set(cat: SpanCat) -> list[TruncatedFunctor]:
    """Reduced functors of degree at most 2 with free values."""
    out = [lin(cat), tensor_square(cat), sym_square(cat), gamma_square(cat), passi_functor(cat, 2)]
    return out


def conjugate(F: TruncatedFunctor, seed: int, name: str | None = None) -> TruncatedFunctor:
    """F with a random unimodular change of basis on every free value."""
    rng = random.Random(seed)
    bases: dict[int, tuple[ZMatrix, ZMatrix]] = {}

    def change(n: int) -> tuple[ZMatrix, ZMatrix]:
        if n not in bases:
            r = F.gens(n)
            u, ui = random_unimodular(r, rng)
            bases[n] = (u, ui)
        return bases[n]

    def action(f) -> ZMatrix:
        s, t = (f.source_size, f.target_size) if hasattr(f, "source_size") else (f.source, f.target)
        m = F(f)
        if F.variance == COVARIANT:
            return change(t)[0] @ m @ change(s)[1]
        return change(s)[0] @ m @ change(t)[1]

    return TruncatedFunctor(F.category, F.variance, F.value_fn, action, name or f"{F.name}~{seed}")


def random_unimodular(r: int, rng: random.Random, steps: int = 6) -> tuple[ZMatrix, ZMatrix]:
    """A product of elementary matrices and its inverse."""
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    ui = [row[:] for row in u]
    for _ in range(steps if r > 1 else 0):
        i, j = rng.sample(range(r), 2)
        c = rng.choice([-2, -1, 1, 2])
        # u <- E u with E = I + c e_ij; ui <- ui E^{-1}
        u[i] = [a + c * b for a, b in zip(u[i], u[j])]
        for row in ui:
            row[j] -= c * row[i]
    if r and rng.random() < 0.5:
        u[0] = [-x for x in u[0]]
        for row in ui:
            row[0] = -row[0]
    return ZMatrix.from_rows(u, r), ZMatrix.from_rows(ui, r)


OMEGA_FAMILIES = ("point", "point2", "regular", "trivial_pair", "sign_pair", "mixed")


def omega_family(cat: OmegaCat, family: str, k: int = 1, variance: str = COVARIANT) -> TruncatedFunctor:
    """Small functors on Omega(P) supported on objects 1 and 2.

    point: Z at 1.  point2: Z^2 at 1.  regular: Z at 1, Z^2 at 2 permuted by
    S_2, the collapse 2 -> 1 decorated by w picks the coordinate listed
    first by w.  trivial_pair: Z at 1 and 2, collapse acts by k.
    sign_pair: Z at 2 with the sign action.  mixed: point plus sign_pair.
    """
    op = cat.op
    assoc = is_associative(op)
    ranks = {"point": (1, 0), "point2": (2, 0), "regular": (1, 2), "trivial_pair": (1, 1),
             "sign_pair": (0, 1), "mixed": (1, 1)}[family]

    def rank(n: int) -> int:
        return ranks[n - 1] if 1 <= n <= 2 else 0

    def covariant(f) -> ZMatrix:
        s, t = f.source_size, f.target_size
        rs, rt = rank(s), rank(t)
        if not rs or not rt:
            return ZMatrix.zeros(rt, rs)
        if s == t == 1:
            return ZMatrix.identity(rs)
        if s == t == 2:
            swap = f.map == (2, 1)
            if family == "regular":
                return ZMatrix.from_rows([[0, 1], [1, 0]] if swap else [[1, 0], [0, 1]], 2)
            if family in ("sign_pair", "mixed"):
                return ZMatrix.from_rows([[-1 if swap else 1]], 1)
            return ZMatrix.identity(1)
        # collapse 2 -> 1
        if family == "regular":
            first = op.ordering(f.decoration[0])[0] if assoc else None
            row = [1, 1] if first is None else [int(first == 1), int(first == 2)]
            return ZMatrix.from_rows([row], 2)
        if family == "trivial_pair":
            return ZMatrix.from_rows([[k]], 1)
        return ZMatrix.zeros(rt, rs)

    def action(f) -> ZMatrix:
        m = covariant(f)
        return m if variance == COVARIANT else m.T

    return TruncatedFunctor(cat, variance, lambda n: Presentation.free(rank(n)), action, f"{family}")


def random_omega_functor(cat: OmegaCat, seed: int, variance: str = COVARIANT) -> TruncatedFunctor:
    """A conjugated member of the small families with ranks at most 2."""
    rng = random.Random(seed)
    family = OMEGA_FAMILIES[seed % len(OMEGA_FAMILIES)]
    k = rng.choice([-2, -1, 0, 1, 2, 3])
    base = omega_family(cat, family, k, variance)
    return conjugate(base, seed + 1000, f"{family}~{seed}")


def ternary_operad() -> TruncatedOperad:
    """Singletons in arities 0..2 and P(3) = {c, t}, all actions trivial.

    A composite of arity 3 is t when t is among the inputs, or when the outer
    operation is t and every input is unary; otherwise it is c.
    """
    labels = {0: ["0"], 1: ["1"], 2: ["m"], 3: ["c", "t"]}
    t = El(3, 1)

    def g(op, theta, args):
        total = sum(a.arity for a in args)
        if total != 3:
            return El(total, 0)
        if t in args or (theta == t and all(a.arity == 1 for a in args)):
            return t
        return El(3, 0)

    def a(op, theta, sigma):
        return theta

    return TruncatedOperad("ternary", 3, labels, "1", g, a)


def unary_operad(involution: bool = True) -> TruncatedOperad:
    """P(1) = {1, e} with e^2 = 1 (or e^2 = e), nothing above arity 1."""
    labels = {0: ["0"], 1: ["1", "e"]}

    def g(op, theta, args):
        if not args:
            return theta
        (x,) = args
        if x.arity == 0:
            return x
        if involution:
            return El(1, theta.idx ^ x.idx)
        return El(1, theta.idx | x.idx)

    def a(op, theta, sigma):
        return theta

    return TruncatedOperad("z2" if involution else "idem", 1, labels, "1", g, a)
