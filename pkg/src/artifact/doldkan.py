"""Idempotents in Z[End_Gamma(P)([n])] and the equivalence between functors
on Gamma(P) and on Omega(P).

Subsets A of [n] always contain the basepoint 0 and are stored as sorted
tuples.  Morphisms of Gamma(P) are pointed maps, so e_A keeps A and sends the
rest to 0, decorated by 1 over A and by 0_P elsewhere.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from . import opcat
from .errors import BudgetExceeded, VerificationFailure
from .functorlab import (
    CONTRAVARIANT,
    COVARIANT,
    GammaCat,
    OmegaCat,
    TruncatedFunctor,
)
from .opcat import GAMMA, OMEGA, DecoratedMap
from .report import Report, timed
from .zmod import Presentation, ZMatrix, coordinates, hstack, row_basis, spans_equal

Subset = tuple[int, ...]


# ---------------------------------------------------------------------------
# the endomorphism ring


@dataclass(frozen=True)
class EndRingElement:
    """A finite Z-combination of Gamma(P)-endomorphisms of [n]."""

    n: int
    terms: tuple[tuple[DecoratedMap, int], ...]

    @classmethod
    def of(cls, n: int, coeffs: dict) -> EndRingElement:
        items = sorted(((f, c) for f, c in coeffs.items() if c), key=lambda t: _mkey(t[0]))
        return cls(n, tuple(items))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __add__(self, other: EndRingElement) -> EndRingElement:
        out = self.as_dict()
        for f, c in other.terms:
            out[f] = out.get(f, 0) + c
        return EndRingElement.of(self.n, out)

    def __neg__(self) -> EndRingElement:
        return EndRingElement(self.n, tuple((f, -c) for f, c in self.terms))

    def __sub__(self, other: EndRingElement) -> EndRingElement:
        return self + (-other)

    def __mul__(self, other: EndRingElement) -> EndRingElement:
        out: dict = {}
        for f, a in self.terms:
            for g, b in other.terms:
                h = opcat.compose(f, g)
                out[h] = out.get(h, 0) + a * b
        return EndRingElement.of(self.n, out)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[str]:
        return [f"{c:+d} {f.map}" for f, c in self.terms]


def _mkey(f: DecoratedMap) -> tuple:
    return (f.source_size, f.target_size, f.map, tuple((w.arity, w.idx) for w in f.decoration))


def subsets_with_base(n: int) -> list[Subset]:
    return [(0,) + c for r in range(n + 1) for c in itertools.combinations(range(1, n + 1), r)]


def e_morphism(op, n: int, A: Subset) -> DecoratedMap:
    keep = set(A)
    mp = tuple(x if x in keep else 0 for x in range(1, n + 1))
    dec = tuple(op.unit if y in keep else op.zero for y in range(1, n + 1))
    return DecoratedMap(GAMMA, n, n, mp, dec, op)


def ring_unit(op, n: int) -> EndRingElement:
    return EndRingElement.of(n, {opcat.identity(GAMMA, op, n): 1})


def e_element(op, n: int, A: Subset) -> EndRingElement:
    return EndRingElement.of(n, {e_morphism(op, n, A): 1})


@dataclass
class IdempotentSystem:
    operad_name: str
    n: int
    f: dict[Subset, EndRingElement]
    report: Report


def idempotents(op, n: int, budget: int = 50_000) -> IdempotentSystem:
    """f_A = sum over B in A of (-1)^{|A - B|} e_B, with the ring laws checked."""
    check_budget(op, n, budget)
    rep = Report("doldkan-idempotents", {"operad": op.name, "n": n})
    with timed(rep):
        subs = subsets_with_base(n)
        f = {}
        for A in subs:
            coeffs: dict = {}
            for B in subs:
                if set(B) <= set(A):
                    e = e_morphism(op, n, B)
                    coeffs[e] = coeffs.get(e, 0) + (-1) ** (len(A) - len(B))
            f[A] = EndRingElement.of(n, coeffs)
        one = ring_unit(op, n)
        total = EndRingElement.of(n, {})
        for A in subs:
            total = total + f[A]
        rep.expect(total == one, "sum of f_A is not the unit")
        for A in subs:
            for B in subs:
                prod = f[A] * f[B]
                want = f[A] if A == B else EndRingElement.of(n, {})
                rep.expect(prod == want, "orthogonality or idempotence fails", {"A": A, "B": B})
        # product formula: e_A times the product of (1 - e_B) over proper B
        for A in subs:
            val = e_element(op, n, A)
            for B in subs:
                if set(B) < set(A):
                    val = val * (one - e_element(op, n, B))
            rep.expect(val == f[A], "sum and product formulas differ", {"A": A})
        rep.witnesses["supports"] = {"".join(map(str, A)): f[A].support() for A in subs}
    return IdempotentSystem(op.name, n, f, rep)


def hom_count_identity(op, m: int, n: int) -> tuple[int, int]:
    """(|Hom_Gamma([m],[n])|, sum over A, B of |Hom_Omega(B - 0, A - 0)|)."""
    lhs = opcat.hom_size(GAMMA, op, m, n)
    rhs = 0
    for A in subsets_with_base(n):
        for B in subsets_with_base(m):
            a, b = len(A) - 1, len(B) - 1
            if a == 0 and b == 0:
                rhs += 1
            elif a and b >= a:
                rhs += opcat.hom_size(OMEGA, op, b, a)
    return lhs, rhs


def tilde(op, A: Subset, B: Subset, m: int, n: int, alpha: DecoratedMap) -> DecoratedMap:
    """alpha: |B - 0| -> |A - 0| in Omega, extended to [m] -> [n] by 0."""
    a_pts, b_pts = A[1:], B[1:]
    mp = [0] * m
    for j, x in enumerate(b_pts):
        mp[x - 1] = a_pts[alpha.map[j] - 1]
    dec = [op.zero] * n
    for k, y in enumerate(a_pts):
        dec[y - 1] = alpha.decoration[k]
    return DecoratedMap(GAMMA, m, n, tuple(mp), tuple(dec), op)


def _sandwich(op, fA: dict, g: DecoratedMap, fB: dict) -> dict:
    out: dict = {}
    for a, ca in fA.items():
        ag = opcat.compose(a, g)
        for b, cb in fB.items():
            h = opcat.compose(ag, b)
            out[h] = out.get(h, 0) + ca * cb
    return {h: c for h, c in out.items() if c}


def kappa(op, A: Subset, B: Subset, m: int, n: int, alpha: DecoratedMap, system_n=None, system_m=None) -> dict:
    """f_A (alpha~) f_B as a combination of Gamma morphisms [m] -> [n]."""
    sn = system_n or idempotents(op, n)
    sm = system_m or idempotents(op, m)
    return _sandwich(op, sn.f[A].as_dict(), tilde(op, A, B, m, n, alpha), sm.f[B].as_dict())


def kappa_basis_check(op, m: int, n: int) -> Report:
    """All kappa(alpha) together form a Z-basis of Z[Hom_Gamma([m],[n])]."""
    rep = Report("doldkan-kappa", {"operad": op.name, "m": m, "n": n})
    with timed(rep):
        homs = opcat.enumerate_hom(GAMMA, op, m, n)
        idx = {h: i for i, h in enumerate(homs)}
        sn, sm = idempotents(op, n), idempotents(op, m)
        cols = []
        for A in subsets_with_base(n):
            for B in subsets_with_base(m):
                a, b = len(A) - 1, len(B) - 1
                alphas = [None] if a == b == 0 else (opcat.enumerate_hom(OMEGA, op, b, a) if a and b >= a else [])
                for alpha in alphas:
                    if alpha is None:
                        g = DecoratedMap(GAMMA, m, n, (0,) * m, (op.zero,) * n, op)
                        el = _sandwich(op, sn.f[A].as_dict(), g, sm.f[B].as_dict())
                    else:
                        el = kappa(op, A, B, m, n, alpha, sn, sm)
                    v = [0] * len(homs)
                    for h, c in el.items():
                        v[idx[h]] += c
                    cols.append(v)
        lhs, rhs = hom_count_identity(op, m, n)
        rep.expect(lhs == rhs == len(cols), "hom-count identity fails", {"gamma": lhs, "omega": rhs})
        if len(cols) == len(homs):
            mat = ZMatrix.from_columns(cols, len(homs))
            rep.expect(mat.is_unimodular(), "kappa images are not a basis")
        rep.witnesses.update({"gamma_hom": lhs, "omega_sum": rhs})
    return rep


def kappa_composition_check(op, trials: int = 20, seed: int = 0, n_max: int = 2) -> Report:
    """kappa(alpha o beta) = kappa(alpha) kappa(beta) on random composable pairs."""
    rep = Report("doldkan-kappa-composition", {"operad": op.name, "trials": trials})
    rng = random.Random(seed)
    with timed(rep):
        systems = {k: idempotents(op, k) for k in range(n_max + 1)}
        done = 0
        for _ in range(trials):
            a = rng.randint(1, n_max)
            b = rng.randint(a, n_max)
            c = rng.randint(b, n_max)
            n, m, p = rng.randint(a, n_max), rng.randint(b, n_max), rng.randint(c, n_max)
            A = (0,) + tuple(sorted(rng.sample(range(1, n + 1), a)))
            B = (0,) + tuple(sorted(rng.sample(range(1, m + 1), b)))
            C = (0,) + tuple(sorted(rng.sample(range(1, p + 1), c)))
            ha = opcat.enumerate_hom(OMEGA, op, b, a)
            hb = opcat.enumerate_hom(OMEGA, op, c, b)
            alpha, beta = rng.choice(ha), rng.choice(hb)
            lhs = kappa(op, A, C, p, n, opcat.compose(alpha, beta), systems[n], systems[p])
            ka = kappa(op, A, B, m, n, alpha, systems[n], systems[m])
            kb = kappa(op, B, C, p, m, beta, systems[m], systems[p])
            rhs: dict = {}
            for f, cf in ka.items():
                for g, cg in kb.items():
                    h = opcat.compose(f, g)
                    rhs[h] = rhs.get(h, 0) + cf * cg
            rhs = {h: c for h, c in rhs.items() if c}
            done += 1
            rep.expect(lhs == rhs, "kappa is not multiplicative", {"A": A, "B": B, "C": C})
        rep.witnesses["pairs"] = done
    return rep


# ---------------------------------------------------------------------------
# functor equivalences


def _end_matrix(F: TruncatedFunctor, el: EndRingElement) -> ZMatrix:
    g = F.gens(el.n)
    out = ZMatrix.zeros(g, g)
    for f, c in el.terms:
        out = out + F(f).scale(c)
    return out


def _require_free(F: TruncatedFunctor, objects) -> None:
    if not F.is_free(objects):
        raise ValueError("the equivalences are implemented for functors with free values")


def cr_functor(F: TruncatedFunctor, systems: dict | None = None) -> TruncatedFunctor:
    """cr(F)(n) = image of F(f_[n]) on F([n]); Omega morphisms act through alpha_+."""
    gcat: GammaCat = F.category
    op = gcat.op
    ocat = OmegaCat(op, gcat.bound, gcat.budget)
    systems = systems if systems is not None else {}
    images: dict[int, ZMatrix] = {}
    projectors: dict[int, ZMatrix] = {}

    def image(n: int) -> ZMatrix:
        if n not in images:
            _require_free(F, [n])
            if n not in systems:
                systems[n] = idempotents(op, n)
            full = (0,) + tuple(range(1, n + 1))
            projectors[n] = _end_matrix(F, systems[n].f[full])
            images[n] = row_basis(projectors[n].T)
        return images[n]

    def value(n: int) -> Presentation:
        return Presentation.free(image(n).rows)

    def action(alpha) -> ZMatrix:
        # the image of F(f) is the cokernel of the retractions; project after moving
        plus = opcat.add_basepoint(alpha)
        s, t = alpha.source_size, alpha.target_size
        a, b = (s, t) if F.variance == COVARIANT else (t, s)
        image(a)
        moved = projectors[b] @ F(plus) @ image(a).T if image(b).rows else None
        if moved is None:
            return ZMatrix.zeros(0, image(a).rows)
        return coordinates(image(b), moved.T).T

    name = "cr" if F.variance == COVARIANT else "cr~"
    out = TruncatedFunctor(ocat, F.variance, value, action, f"{name}({F.name})")
    out.image = image  # type: ignore[attr-defined]
    return out


def _subsets(n: int) -> list[tuple[int, ...]]:
    return [c for r in range(n + 1) for c in itertools.combinations(range(1, n + 1), r)]


def restrict_pointed(g: DecoratedMap, mu: Sequence[int]) -> DecoratedMap | None:
    """g on mu as an Omega morphism mu -> g(mu), or None when mu meets g^{-1}(0)."""
    mu = sorted(mu)
    if any(g.map[x - 1] == 0 for x in mu):
        return None
    r = opcat.restrict_to_subset(g, mu)
    nu = sorted(set(r.map))
    pos = {y: k for k, y in enumerate(nu, start=1)}
    return DecoratedMap(OMEGA, len(mu), len(nu), tuple(pos[y] for y in r.map),
                        tuple(r.decoration[y - 1] for y in nu), g.operad)


def _summand_offsets(G: TruncatedFunctor, n: int) -> tuple[list[tuple[int, ...]], dict, int]:
    subs = _subsets(n)
    off, pos = {}, 0
    for mu in subs:
        off[mu] = pos
        pos += G.gens(len(mu))
    return subs, off, pos


def i_shriek(G: TruncatedFunctor, bound: int | None = None) -> TruncatedFunctor:
    """i_!(G)([n]) = sum over mu in n of G(|mu|); i_*(G) for contravariant G."""
    ocat: OmegaCat = G.category
    gcat = GammaCat(ocat.op, ocat.bound if bound is None else bound, ocat.budget)

    def value(n: int) -> Presentation:
        return Presentation.free(_summand_offsets(G, n)[2])

    def action(g: DecoratedMap) -> ZMatrix:
        n, m = g.source_size, g.target_size
        subs_n, off_n, tot_n = _summand_offsets(G, n)
        _, off_m, tot_m = _summand_offsets(G, m)
        rows, cols = (tot_m, tot_n) if G.variance == COVARIANT else (tot_n, tot_m)
        out = [[0] * cols for _ in range(rows)]
        for mu in subs_n:
            r = restrict_pointed(g, mu)
            if r is None:
                continue
            nu = tuple(sorted(set(g.map[x - 1] for x in mu)))
            block = G(r)
            if G.variance == COVARIANT:
                r0, c0 = off_m[nu], off_n[mu]
            else:
                r0, c0 = off_n[mu], off_m[nu]
            for i in range(block.rows):
                for j in range(block.cols):
                    out[r0 + i][c0 + j] += block[i, j]
        return ZMatrix.from_rows(out, cols)

    name = "i_!" if G.variance == COVARIANT else "i_*"
    return TruncatedFunctor(gcat, G.variance, value, action, f"{name}({G.name})")


def i_star(G: TruncatedFunctor, bound: int | None = None) -> TruncatedFunctor:
    if G.variance != CONTRAVARIANT:
        raise ValueError("i_* takes a contravariant functor")
    return i_shriek(G, bound)


# ---------------------------------------------------------------------------
# roundtrips


def _naturality(rep: Report, cat, src: TruncatedFunctor, tgt: TruncatedFunctor, phi: dict[int, ZMatrix],
                objects: Sequence[int], label: str) -> None:
    """phi: src => tgt natural on every enumerated morphism."""
    for a in objects:
        for b in objects:
            for f in cat.hom(a, b):
                if src.variance == COVARIANT:
                    lhs, rhs = phi[b] @ src(f), tgt(f) @ phi[a]
                else:
                    lhs, rhs = phi[a] @ src(f), tgt(f) @ phi[b]
                if lhs != rhs:
                    rep.fail(f"{label} naturality square fails", {"morphism": f.to_json(), "lhs": lhs, "rhs": rhs})
                    return


def roundtrip_omega(G: TruncatedFunctor, objects: Sequence[int] | None = None) -> Report:
    """cr(i_!G) = G with explicit iso matrices G(n) -> cr(i_!G)(n)."""
    ocat = G.category
    objs = list(range(ocat.bound + 1)) if objects is None else list(objects)
    rep = Report("doldkan-roundtrip-omega", {"functor": G.name, "operad": ocat.op.name, "variance": G.variance,
                                             "bound": max(objs)})
    with timed(rep):
        F = i_shriek(G)
        C = cr_functor(F)
        phi = {}
        for n in objs:
            _, off, tot = _summand_offsets(G, n)
            full = tuple(range(1, n + 1))
            g = G.gens(n)
            emb = ZMatrix.from_columns([[int(i == off[full] + j) for i in range(tot)] for j in range(g)], tot)
            img = C.image(n)  # type: ignore[attr-defined]
            if img.rows != g:
                rep.fail("ranks differ", {"n": n, "G": g, "cr": img.rows})
                continue
            m = coordinates(img, emb.T).T if g else ZMatrix.zeros(0, 0)
            phi[n] = m
            rep.expect(m.is_unimodular() if g else True, "iso matrix not unimodular", {"n": n})
        if rep.ok:
            _naturality(rep, OmegaCat(ocat.op, max(objs), ocat.budget), G, C, phi, objs, "cr o i_!")
        rep.witnesses["iso"] = {str(n): phi[n] for n in phi}
    return rep


def roundtrip_gamma(F: TruncatedFunctor, objects: Sequence[int] | None = None) -> Report:
    """i_!(cr F) = F through sum over mu of F(iota_mu) on cr(F)(|mu|)."""
    gcat: GammaCat = F.category
    op = gcat.op
    objs = list(range(gcat.bound + 1)) if objects is None else list(objects)
    rep = Report("doldkan-roundtrip-gamma", {"functor": F.name, "operad": op.name, "variance": F.variance,
                                             "bound": max(objs)})
    with timed(rep):
        C = cr_functor(F)
        back = i_shriek(C, bound=max(objs))
        psi = {}
        for n in objs:
            blocks = []
            for mu in _subsets(n):
                k = len(mu)
                img = C.image(k)  # type: ignore[attr-defined]
                if not img.rows:
                    continue
                if F.variance == COVARIANT:
                    iota = opcat.DecoratedMap(GAMMA, k, n, tuple(mu),
                                              tuple(op.unit if y in mu else op.zero for y in range(1, n + 1)), op)
                else:
                    pos = {x: j for j, x in enumerate(mu, start=1)}
                    iota = opcat.DecoratedMap(GAMMA, n, k, tuple(pos.get(x, 0) for x in range(1, n + 1)),
                                              (op.unit,) * k, op)
                blocks.append(F(iota) @ img.T)
            mat = hstack(blocks, rows=F.gens(n)) if blocks else ZMatrix.zeros(F.gens(n), 0)
            if mat.rows != mat.cols or (mat.rows and not mat.is_unimodular()):
                rep.fail("sum of cross-effect summands is not an isomorphism", {"n": n, "shape": mat.shape})
                continue
            psi[n] = mat
        if rep.ok:
            _naturality(rep, GammaCat(op, max(objs), gcat.budget), back, F, psi, objs, "i_! o cr")
        rep.witnesses["iso"] = {str(n): psi[n] for n in psi}
    return rep


def cross_effect_agreement(F: TruncatedFunctor, n: int) -> bool:
    """Image of F(f_[n]) equals the intersection of the kernels of the retractions."""
    from .functorlab import cross_effect

    C = cr_functor(F)
    img = C.image(n)  # type: ignore[attr-defined]
    cr = cross_effect(F, [1] * n) if F.variance == COVARIANT else None
    if cr is None:
        return True
    ker = cr.inclusion.T
    return spans_equal(img, ker) if img.rows or ker.rows else True


def pullback_along(F: TruncatedFunctor, phi, source_op) -> TruncatedFunctor:
    """F o Gamma(phi) for an operad morphism phi: source_op -> F's operad."""
    cat = F.category
    newcat = type(cat)(source_op, cat.bound, cat.budget)
    return TruncatedFunctor(newcat, F.variance, F.value_fn, lambda f: F(opcat.push_forward(phi, f)),
                            f"{F.name}*{phi.source.name}")


def corrupt(F: TruncatedFunctor, target, delta: int = 1) -> TruncatedFunctor:
    """F with one morphism matrix perturbed (fault injection)."""
    key = target

    def action(f):
        m = F(f)
        if f == key and m.rows and m.cols:
            rows = m.to_rows()
            rows[0][0] += delta
            return ZMatrix.from_rows(rows, m.cols)
        return m

    return TruncatedFunctor(F.category, F.variance, F.value_fn, action, f"{F.name}!")


def check_budget(op, n: int, budget: int) -> None:
    size = opcat.hom_size(GAMMA, op, n, n)
    if size > budget:
        raise BudgetExceeded(f"End([{n}]) has {size} elements", size)
