"""Functors from truncated operadic categories to abelian groups.

A functor is given by a value presentation per object and an action on
morphisms; both are evaluated lazily and cached.  Cross-effects are kernels
of the retractions onto smaller wedges, Taylor quotients divide out the image
of the folded diagonal cross-effect.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from . import opcat, spans
from .errors import ArityOverflow, BudgetExceeded, ObjectBoundExceeded, VerificationFailure
from .opcat import GAMMA, OMEGA, S
from .report import Report, WARNING, timed
from .zmod import (
    FgAbGroup,
    Presentation,
    ZMatrix,
    block_diag,
    coordinates,
    hom_kernel,
    hstack,
    is_isomorphism,
    rank_mod_p,
    vstack,
)

COVARIANT, CONTRAVARIANT = "covariant", "contravariant"
DEFAULT_BUDGET = 20_000


# ---------------------------------------------------------------------------
# base categories


def _blocks(sizes: Sequence[int]) -> list[list[int]]:
    out, start = [], 1
    for s in sizes:
        out.append(list(range(start, start + s)))
        start += s
    return out


def _keep_map(sizes: Sequence[int], keep: Sequence[int]) -> tuple[list[int], int]:
    """Pointed map sum(sizes) -> sum(sizes[keep]) killing the other blocks."""
    blocks = _blocks(sizes)
    mp = [0] * sum(sizes)
    pos = 1
    for b in sorted(keep):
        for x in blocks[b]:
            mp[x - 1] = pos
            pos += 1
    return mp, pos - 1


class _Category:
    bound: int
    op: Any
    kind: str

    def check(self, n: int) -> None:
        if n > self.bound:
            raise ObjectBoundExceeded(f"object {n} exceeds the bound {self.bound}")

    def with_bound(self, bound: int):
        other = object.__new__(type(self))
        other.__dict__.update(self.__dict__)
        other.bound = bound
        return other

    def describe(self) -> dict:
        return {"category": self.kind, "operad": self.op.name, "bound": self.bound}


class GammaCat(_Category):
    """Gamma(P) on the pointed objects [0]..[bound]."""

    kind = "gamma"

    def __init__(self, op, bound: int, budget: int = DEFAULT_BUDGET) -> None:
        self.op, self.bound, self.budget = op, bound, budget

    def hom(self, m: int, n: int) -> list:
        return opcat.enumerate_hom(GAMMA, self.op, m, n, self.budget)

    def compose(self, g, f):
        return opcat.compose(g, f)

    def identity(self, n: int):
        return opcat.identity(GAMMA, self.op, n)

    def zero(self, m: int, n: int):
        return opcat.DecoratedMap(GAMMA, m, n, (0,) * m, (self.op.zero,) * n, self.op)

    def retraction(self, sizes: Sequence[int], keep: Sequence[int]):
        mp, t = _keep_map(sizes, keep)
        return opcat.DecoratedMap(GAMMA, len(mp), t, tuple(mp), (self.op.unit,) * t, self.op)

    def inclusion(self, sizes: Sequence[int], keep: Sequence[int]):
        mp, t = _keep_map(sizes, keep)
        src = [x for x in range(1, len(mp) + 1) if mp[x - 1]]
        dec = tuple(self.op.unit if mp[x - 1] else self.op.zero for x in range(1, len(mp) + 1))
        return opcat.DecoratedMap(GAMMA, t, len(mp), tuple(src), dec, self.op)

    def fold(self, size: int, copies: int):
        mp = tuple((x - 1) % size + 1 for x in range(1, size * copies + 1))
        return opcat.plain(GAMMA, self.op, mp, size)


class OmegaCat(_Category):
    """Omega(P) on 0..bound."""

    kind = "omega"

    def __init__(self, op, bound: int, budget: int = DEFAULT_BUDGET) -> None:
        self.op, self.bound, self.budget = op, bound, budget

    def hom(self, m: int, n: int) -> list:
        if (m == 0) != (n == 0):
            return []
        return opcat.enumerate_hom(OMEGA, self.op, m, n, self.budget)

    def compose(self, g, f):
        return opcat.compose(g, f)

    def identity(self, n: int):
        return opcat.identity(OMEGA, self.op, n)


class SpanCat(_Category):
    """Free(P) through spans; hom-sets are cut at apex size ``max_apex``."""

    kind = "span"

    def __init__(self, op, bound: int, max_apex: int | None = None, budget: int = DEFAULT_BUDGET) -> None:
        self.op, self.bound, self.budget = op, bound, budget
        self.max_apex = op.max_arity if max_apex is None else max_apex

    def describe(self) -> dict:
        return {**super().describe(), "max_apex": self.max_apex}

    def hom(self, m: int, n: int) -> list:
        return spans.enumerate_spans(self.op, m, n, self.max_apex, self.budget)

    def compose(self, g, f):
        return spans.compose_spans(g, f)

    def identity(self, n: int):
        return spans.identity_span(self.op, n)

    def zero(self, m: int, n: int):
        return spans.pointed_horizontal_span(self.op, (0,) * m, n)

    def retraction(self, sizes: Sequence[int], keep: Sequence[int]):
        mp, t = _keep_map(sizes, keep)
        return spans.pointed_horizontal_span(self.op, mp, t)

    def inclusion(self, sizes: Sequence[int], keep: Sequence[int]):
        blocks = _blocks(sizes)
        pos = [x for b in sorted(keep) for x in blocks[b]]
        return spans.horizontal_span(self.op, pos, sum(sizes))

    def fold(self, size: int, copies: int):
        mp = tuple((x - 1) % size + 1 for x in range(1, size * copies + 1))
        return spans.horizontal_span(self.op, mp, size)


# ---------------------------------------------------------------------------
# functors


@dataclass(eq=False)
class TruncatedFunctor:
    category: Any
    variance: str
    value_fn: Callable[[int], Presentation]
    action: Callable[[Any], ZMatrix]
    name: str = "F"
    _values: dict = field(default_factory=dict, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    def value(self, n: int) -> Presentation:
        self.category.check(n)
        hit = self._values.get(n)
        if hit is None:
            hit = self._values[n] = self.value_fn(n)
        return hit

    def gens(self, n: int) -> int:
        return self.value(n).generators

    def group(self, n: int) -> FgAbGroup:
        return self.value(n).group()

    def __call__(self, f) -> ZMatrix:
        key = (_ends(f), f.key()) if hasattr(f, "key") else f
        hit = self._cache.get(key)
        if hit is None:
            src, tgt = _ends(f)
            self.category.check(max(src, tgt))
            hit = self.action(f)
            want = (self.gens(tgt), self.gens(src)) if self.variance == COVARIANT else (self.gens(src), self.gens(tgt))
            if hit.shape != want:
                raise VerificationFailure(f"{self.name} gives shape {hit.shape}, expected {want}", f)
            self._cache[key] = hit
        return hit

    def is_free(self, objects: Sequence[int]) -> bool:
        return all(self.value(n).is_free_presentation() for n in objects)

    def is_reduced(self) -> bool:
        return self.group(0).is_trivial()

    def with_action(self, action: Callable[[Any], ZMatrix], name: str | None = None) -> TruncatedFunctor:
        return TruncatedFunctor(self.category, self.variance, self.value_fn, action, name or self.name)

    def to_json(self, objects: Sequence[int] | None = None) -> dict:
        objs = range(self.category.bound + 1) if objects is None else objects
        out = {"name": self.name, "variance": self.variance, **self.category.describe(), "objects": {}, "morphisms": []}
        for n in objs:
            v = self.value(n)
            out["objects"][str(n)] = {"generators": v.generators, "relations": v.relations.to_rows(),
                                      **v.group().to_json()}
        for a in objs:
            for b in objs:
                for f in self.category.hom(a, b):
                    out["morphisms"].append({"morphism": f.to_json(), "matrix": self(f).to_rows()})
        return out


def _ends(f) -> tuple[int, int]:
    if hasattr(f, "source_size"):
        return f.source_size, f.target_size
    return f.source, f.target


def zero_functor(cat, variance: str = COVARIANT) -> TruncatedFunctor:
    return TruncatedFunctor(cat, variance, lambda n: Presentation.free(0), lambda f: ZMatrix.zeros(0, 0), "0")


def functoriality_check(F: TruncatedFunctor, objects: Sequence[int] | None = None,
                        max_checks: int = 20_000, seed: int = 0) -> Report:
    """Identities, compositions and well-definedness on relations, by brute force."""
    cat = F.category
    objs = list(range(cat.bound + 1)) if objects is None else list(objects)
    rep = Report("functoriality", {"functor": F.name, **cat.describe(), "objects": objs})
    with timed(rep):
        homs = {(a, b): cat.hom(a, b) for a in objs for b in objs}
        for n in objs:
            v = F.value(n)
            rep.expect(F(cat.identity(n)).is_identity() or v.maps_equal(F(cat.identity(n)), ZMatrix.identity(v.generators)),
                       "identity not preserved", n)
        for (a, b), fs in homs.items():
            for f in fs:
                m = F(f)
                src, tgt = (a, b) if F.variance == COVARIANT else (b, a)
                rel = F.value(src).relations
                if rel.rows:
                    image = m @ rel.T
                    rep.expect(F.value(tgt).map_is_zero(image), "relations not preserved", f.to_json())
        triples = [(a, b, c) for a in objs for b in objs for c in objs]
        total = sum(len(homs[(a, b)]) * len(homs[(b, c)]) for a, b, c in triples)
        rng = random.Random(seed)
        sampled = total > max_checks
        done = 0
        for a, b, c in triples:
            pairs = [(g, f) for f in homs[(a, b)] for g in homs[(b, c)]]
            if sampled:
                share = max(1, max_checks * len(pairs) // max(total, 1))
                pairs = rng.sample(pairs, min(share, len(pairs)))
            for g, f in pairs:
                try:
                    gf = cat.compose(g, f)
                except ArityOverflow:
                    continue
                lhs = F(gf)
                rhs = F(g) @ F(f) if F.variance == COVARIANT else F(f) @ F(g)
                tgt = c if F.variance == COVARIANT else a
                done += 1
                if not F.value(tgt).maps_equal(lhs, rhs):
                    rep.fail("composition not preserved", {"g": g.to_json(), "f": f.to_json()})
                    return rep
        rep.witnesses.update({"pairs_checked": done, "sampled": sampled})
    return rep


# ---------------------------------------------------------------------------
# cross-effects


@dataclass
class CrossEffectResult:
    args: tuple[int, ...]
    group: FgAbGroup
    inclusion: ZMatrix
    presentation: Presentation
    certificate: ZMatrix | None = None

    def to_json(self) -> dict:
        out = {"args": list(self.args), "group": self.group.to_json(), "inclusion": self.inclusion.to_rows()}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_rows()
        return out


def _sum_presentation(pres: Sequence[Presentation]) -> Presentation:
    gens = sum(p.generators for p in pres)
    if not pres:
        return Presentation.free(0)
    rel = block_diag([p.relations for p in pres]) if any(p.relations.rows for p in pres) else ZMatrix.zeros(0, gens)
    return Presentation(gens, rel)


def _sub_presentation(ambient: Presentation, kern: ZMatrix) -> Presentation:
    """rowspan(kern) / (ambient relations), with kern containing them."""
    rel = coordinates(kern, ambient.relations) if ambient.relations.rows else ZMatrix.zeros(0, kern.rows)
    return Presentation(kern.rows, rel)


def _stacked(F: TruncatedFunctor, maps: Sequence, args_left: Sequence[int]) -> tuple[ZMatrix, Presentation]:
    mats = [F(f) for f in maps]
    target = _sum_presentation([F.value(n) for n in args_left])
    cols = mats[0].cols if mats else 0
    return (vstack(mats, cols=cols) if mats else ZMatrix.zeros(0, cols)), target


def cross_effect(F: TruncatedFunctor, args: Sequence[int]) -> CrossEffectResult:
    args = tuple(args)
    cat = F.category
    total = sum(args)
    cat.check(total)
    n = len(args)
    others = [[j for j in range(n) if j != k] for k in range(n)]
    smaller = [total - args[k] for k in range(n)]
    source = F.value(total)
    if F.variance == COVARIANT:
        maps = [cat.retraction(args, keep) for keep in others]
        stacked, target = _stacked(F, maps, smaller)
        if not maps:
            stacked = ZMatrix.zeros(0, source.generators)
        kern = hom_kernel(stacked, source, target)
        pres = _sub_presentation(source, kern)
        return CrossEffectResult(args, pres.group(), kern.T if kern.rows else ZMatrix.zeros(source.generators, 0), pres)
    # contravariant: kernel of the inclusions and cokernel of the retractions
    incl = [cat.inclusion(args, keep) for keep in others]
    stacked, target = _stacked(F, incl, smaller)
    if not incl:
        stacked = ZMatrix.zeros(0, source.generators)
    kern = hom_kernel(stacked, source, target)
    pres = _sub_presentation(source, kern)
    inc = kern.T if kern.rows else ZMatrix.zeros(source.generators, 0)
    rets = [F(cat.retraction(args, keep)) for keep in others]
    image_cols = hstack(rets, rows=source.generators) if rets else ZMatrix.zeros(source.generators, 0)
    rel_rows = source.relations.to_rows() + image_cols.T.to_rows()
    coker = Presentation(source.generators, ZMatrix.from_rows(rel_rows, source.generators))
    if not is_isomorphism(inc, pres, coker):
        raise VerificationFailure("kernel and cokernel forms of the contravariant cross-effect differ", args)
    return CrossEffectResult(args, pres.group(), inc, pres, certificate=inc)


def cross_effect_vanishes(F: TruncatedFunctor, args: Sequence[int]) -> bool:
    """cr = 0, with a mod-p rank shortcut for free covariant values."""
    cat = F.category
    total = sum(args)
    cat.check(total)
    n = len(args)
    if F.variance == COVARIANT and F.is_free([total] + [total - a for a in args]):
        maps = [cat.retraction(args, [j for j in range(n) if j != k]) for k in range(n)]
        stacked = vstack([F(f) for f in maps], cols=F.gens(total)) if maps else ZMatrix.zeros(0, F.gens(total))
        if rank_mod_p(stacked) == F.gens(total):
            return True
    return cross_effect(F, args).group.is_trivial()


def decompose(F: TruncatedFunctor, args: Sequence[int]) -> tuple[list[tuple[tuple[int, ...], CrossEffectResult]], ZMatrix]:
    """F(X_1 v ... v X_n) as the direct sum of cross-effects over nonempty index sets."""
    args = tuple(args)
    cat = F.category
    total = sum(args)
    cat.check(total)
    n = len(args)
    summands = []
    cols = []
    for r in range(1, n + 1):
        for sub in itertools.combinations(range(n), r):
            cr = cross_effect(F, [args[i] for i in sub])
            emb = F(cat.inclusion(args, sub)) @ cr.inclusion
            summands.append((sub, cr))
            cols.append(emb)
    mat = hstack(cols, rows=F.gens(total)) if cols else ZMatrix.zeros(F.gens(total), 0)
    source = _sum_presentation([cr.presentation for _, cr in summands])
    if not is_isomorphism(mat, source, F.value(total)):
        raise VerificationFailure("cross-effect summands do not decompose the value", args)
    return summands, mat


def _positive_tuples(length: int, total: int):
    for t in itertools.product(range(1, total + 1), repeat=length):
        if sum(t) <= total:
            yield t


def degree(F: TruncatedFunctor, probe: int = 1, all_tuples: bool = True) -> int | str:
    """Least d with cr_{d+1} vanishing on the probes within bound, else 'exceeds bound'."""
    bound = F.category.bound
    d = 0
    while (d + 1) * probe <= bound:
        probes = list(_positive_tuples(d + 1, bound)) if all_tuples and d + 1 > 0 else [(probe,) * (d + 1)]
        if d == 0:
            probes = [(x,) for x in range(1, bound + 1)]
        if all(cross_effect_vanishes(F, t) for t in probes):
            return d
        d += 1
    return "exceeds bound"


def taylor_truncate(F: TruncatedFunctor, n: int) -> TruncatedFunctor:
    """T_nF on objects X with (n+1)X inside the bound."""
    if F.variance != COVARIANT:
        raise ValueError("Taylor quotients are built for covariant functors")
    cat = F.category
    new_bound = cat.bound // (n + 1)
    newcat = cat.with_bound(new_bound)

    def value(x: int) -> Presentation:
        base = F.value(x)
        if x == 0:
            return Presentation(base.generators, ZMatrix.identity(base.generators))
        cr = cross_effect(F, [x] * (n + 1))
        s = F(cat.fold(x, n + 1)) @ cr.inclusion
        rows = base.relations.to_rows() + s.T.to_rows()
        return Presentation(base.generators, ZMatrix.from_rows(rows, base.generators))

    return TruncatedFunctor(newcat, COVARIANT, value, F.action, f"T{n}({F.name})")


def taylor_map_matrix(F: TruncatedFunctor, n: int, x: int) -> ZMatrix:
    """S_{n+1} = F(fold) o inclusion of cr_{n+1}F(x,..,x)."""
    cr = cross_effect(F, [x] * (n + 1))
    return F(F.category.fold(x, n + 1)) @ cr.inclusion


# ---------------------------------------------------------------------------
# functors on free abelian groups, applied after a functor


@dataclass(frozen=True)
class AbFunctor:
    """A functor on finitely generated free abelian groups given on matrices."""

    name: str
    rank_fn: Callable[[int], int]
    matrix_fn: Callable[[ZMatrix], ZMatrix]

    def rank(self, r: int) -> int:
        return self.rank_fn(r)

    def __call__(self, m: ZMatrix) -> ZMatrix:
        return self.matrix_fn(m)


def kron(a: ZMatrix, b: ZMatrix) -> ZMatrix:
    rows = []
    for i in range(a.rows):
        for k in range(b.rows):
            rows.append([a[i, j] * b[k, l] for j in range(a.cols) for l in range(b.cols)])
    return ZMatrix.from_rows(rows, a.cols * b.cols)


def identity_ab() -> AbFunctor:
    return AbFunctor("id", lambda r: r, lambda m: m)


def tensor_power(k: int) -> AbFunctor:
    def mat(m: ZMatrix) -> ZMatrix:
        out = ZMatrix.identity(1)
        for _ in range(k):
            out = kron(out, m)
        return out
    return AbFunctor(f"T^{k}", lambda r: r ** k, mat)


def _pairs(r: int, strict: bool) -> list[tuple[int, int]]:
    return [(i, j) for i in range(r) for j in range(i + (1 if strict else 0), r)]


def symmetric_square() -> AbFunctor:
    """S^2 with basis e_i e_j, i <= j."""
    def mat(m: ZMatrix) -> ZMatrix:
        src, tgt = _pairs(m.cols, False), _pairs(m.rows, False)
        idx = {p: t for t, p in enumerate(tgt)}
        cols = []
        for i, j in src:
            v = [0] * len(tgt)
            for a in range(m.rows):
                for b in range(m.rows):
                    c = m[a, i] * m[b, j]
                    if c:
                        v[idx[(min(a, b), max(a, b))]] += c
            cols.append(v)
        return ZMatrix.from_columns(cols, len(tgt))
    return AbFunctor("S^2", lambda r: r * (r + 1) // 2, mat)


def divided_square() -> AbFunctor:
    """Gamma^2 with basis gamma_2(e_i) followed by e_i e_j, i < j."""
    def basis(r):
        return [(i, i) for i in range(r)] + _pairs(r, True)

    def mat(m: ZMatrix) -> ZMatrix:
        tgt = basis(m.rows)
        idx = {p: t for t, p in enumerate(tgt)}
        cols = []
        for i, j in basis(m.cols):
            v = [0] * len(tgt)
            if i == j:
                c = [m[a, i] for a in range(m.rows)]
                for a in range(m.rows):
                    v[idx[(a, a)]] += c[a] * c[a]
                for a, b in _pairs(m.rows, True):
                    v[idx[(a, b)]] += c[a] * c[b]
            else:
                for a in range(m.rows):
                    for b in range(m.rows):
                        c = m[a, i] * m[b, j]
                        if not c:
                            continue
                        if a == b:
                            v[idx[(a, a)]] += 2 * c
                        else:
                            v[idx[(min(a, b), max(a, b))]] += c
            cols.append(v)
        return ZMatrix.from_columns(cols, len(tgt))
    return AbFunctor("Gamma^2", lambda r: r * (r + 1) // 2, mat)


def compose_ab(G: AbFunctor, F: TruncatedFunctor) -> TruncatedFunctor:
    """G o F for F with free values."""
    def value(n: int) -> Presentation:
        v = F.value(n)
        if not v.is_free_presentation():
            raise ValueError("compose_ab needs free values")
        return Presentation.free(G.rank(v.generators))
    return TruncatedFunctor(F.category, F.variance, value, lambda f: G(F(f)), f"{G.name}({F.name})")


def degree_of_composition_bound_check(F: TruncatedFunctor, G: AbFunctor, linear: TruncatedFunctor) -> Report:
    """deg(G o F) <= deg(F) deg(G), with deg(G) read off G o linear."""
    GF = compose_ab(G, F)
    rep = Report("functorlab-composition-degree", {"F": F.name, "G": G.name, **F.category.describe()})
    with timed(rep):
        df = degree(F, all_tuples=False)
        dg = degree(compose_ab(G, linear), all_tuples=False)
        rep.witnesses.update({"deg_F": df, "deg_G": dg})
        if isinstance(df, str) or isinstance(dg, str):
            rep.status = WARNING
            rep.witnesses["reason"] = "a factor degree exceeds the bound"
            return rep
        target = df * dg
        rep.witnesses["claimed_bound"] = target
        if target + 1 > F.category.bound:
            rep.status = WARNING
            rep.witnesses["reason"] = f"cr_{target + 1} needs object {target + 1}"
            return rep
        rep.expect(cross_effect_vanishes(GF, [1] * (target + 1)), "composite cross-effect is nonzero", target + 1)
    return rep


# ---------------------------------------------------------------------------
# linearized hom functors


def linearized_hom(cat, source: int, reduced: bool = True) -> TruncatedFunctor:
    """Z[Hom(source, -)] modulo the zero morphism, on Gamma(P)."""
    bases: dict[int, tuple[list, dict]] = {}

    def basis(n: int):
        hit = bases.get(n)
        if hit is None:
            zero = cat.zero(source, n)
            items = [h for h in cat.hom(source, n) if not (reduced and h == zero)]
            hit = bases[n] = (items, {h: i for i, h in enumerate(items)})
        return hit

    def value(n: int) -> Presentation:
        return Presentation.free(len(basis(n)[0]))

    def action(f) -> ZMatrix:
        src, _ = basis(f.source_size)
        _, idx = basis(f.target_size)
        cols = []
        for h in src:
            v = [0] * len(idx)
            gh = cat.compose(f, h)
            if gh in idx:
                v[idx[gh]] = 1
            cols.append(v)
        return ZMatrix.from_columns(cols, len(idx))

    return TruncatedFunctor(cat, COVARIANT, value, action, f"Z[Hom({source},-)]")


def truncated_linearized_hom(cat: SpanCat, m: int, length: int) -> TruncatedFunctor:
    """Reduced Z[Hom_Free(P)(F(m), -)] on algebra maps whose images have arity <= length.

    Only morphisms that do not raise arity (retractions, folds,
    inclusions) are guaranteed to stay inside the truncation.
    """
    op = cat.op
    bases: dict[int, tuple[list, dict]] = {}
    zero_el = spans.FreeAlgebraElement(op.zero, ())

    def basis(n: int):
        hit = bases.get(n)
        if hit is None:
            items = [t for t in spans.enumerate_free_hom(op, m, n, length, cat.budget) if t != (zero_el,) * m]
            hit = bases[n] = (items, {t: i for i, t in enumerate(items)})
        return hit

    def value(n: int) -> Presentation:
        return Presentation.free(len(basis(n)[0]))

    def action(s) -> ZMatrix:
        src, _ = basis(s.source)
        _, idx = basis(s.target)
        g = spans.span_to_algebra_maps(s)
        cols = []
        for t in src:
            v = [0] * len(idx)
            image = tuple(spans.compose_algebra_maps(op, g, e) for e in t)
            if image != (zero_el,) * m:
                if image not in idx:
                    raise BudgetExceeded("image leaves the length budget", length)
                v[idx[image]] = 1
            cols.append(v)
        return ZMatrix.from_columns(cols, len(idx))

    return TruncatedFunctor(cat, COVARIANT, value, action, f"Z[Hom(F({m}),-)]_{length}")
