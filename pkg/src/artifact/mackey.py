"""Janus and pseudo-Mackey functors on Omega(P) given by generators.

A presentation stores the groups M(1..N) (free, given by rank; M(0) = 0 and
M(n) = 0 above N) and one matrix per generator:

    ("T", n, i)            M_*(tau_i^n)
    ("P", n, i)            M_*(s_i^n): M(n) -> M(n-1)
    ("Ts", n, i)           M^*(tau_i^n, 1)
    ("I", n, alphas)       M^*(Id_n, alphas), alphas a tuple of P(1) indices
    ("H", n, k, i, w)      M^*(s_i^{n,n-k}, w): M(n-k) -> M(n), w a P(k+1) index

Arbitrary maps are evaluated through a fixed normal form: a surjection is a
permutation followed by a monotone map, and the monotone part is a product of
collapses taken from the right.  The relation checks are what make the
result independent of that choice.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import opcat, spans
from .errors import BudgetExceeded, DegreeViolation, VerificationFailure
from .functorlab import COVARIANT, SpanCat, TruncatedFunctor
from .opcat import OMEGA, DecoratedMap
from .operad import El, perm_inverse
from .report import FAIL, Report
from .zmod import FgAbGroup, Presentation, ZMatrix, coordinates, hstack, row_basis

# ---------------------------------------------------------------------------
# presentations


def _key_ends(key: tuple) -> tuple[int, int, bool]:
    """(source, target, covariant) of the operator named by ``key``."""
    kind = key[0]
    n = key[1]
    if kind == "T":
        return n, n, True
    if kind == "P":
        return n, n - 1, True
    if kind in ("Ts", "I"):
        return n, n, False
    if kind == "H":
        return n - key[2], n, False
    raise ValueError(f"unknown generator {key!r}")


@dataclass
class JanusPresentation:
    operad: Any
    bound: int
    ranks: dict[int, int]
    ops: dict[tuple, ZMatrix] = field(default_factory=dict)
    name: str = "M"

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0) if 1 <= n <= self.bound else 0

    def group(self, n: int) -> FgAbGroup:
        return FgAbGroup(self.rank(n))

    def shape(self, key: tuple) -> tuple[int, int]:
        src, tgt, _ = _key_ends(key)
        return self.rank(tgt), self.rank(src)

    def op(self, key: tuple) -> ZMatrix:
        hit = self.ops.get(key)
        if hit is not None:
            return hit
        rows, cols = self.shape(key)
        if rows == 0 or cols == 0:
            return ZMatrix.zeros(rows, cols)
        raise KeyError(f"missing generator {describe_key(self.operad, key)}")

    def identity(self, n: int) -> ZMatrix:
        return ZMatrix.identity(self.rank(n))

    def with_operator(self, key: tuple, matrix: ZMatrix, name: str | None = None) -> JanusPresentation:
        ops = dict(self.ops)
        ops[key] = matrix
        return JanusPresentation(self.operad, self.bound, dict(self.ranks), ops, name or self.name)

    # evaluation -----------------------------------------------------------
    def lower(self, mp: Sequence[int], target: int) -> ZMatrix:
        """M_* of a plain surjection."""
        mats = [self.op(key) for key in horizontal_word(mp, target)]
        if not mats:
            return self.identity(len(mp))
        out = mats[0]
        for m in mats[1:]:
            out = out @ m
        return out

    def upper(self, v: DecoratedMap) -> ZMatrix:
        """M^* of an Omega morphism."""
        word = vertical_word(v)
        if not word:
            return self.identity(v.source_size)
        out = self.op(word[-1][0])
        for key, _ in reversed(word[:-1]):
            out = out @ self.op(key)
        return out

    def product(self, factors: Sequence[tuple]) -> ZMatrix:
        """Operators written left to right: ("lo", map, target) or ("up", DecoratedMap)."""
        out = None
        for f in factors:
            m = self.lower(f[1], f[2]) if f[0] == "lo" else self.upper(f[1])
            out = m if out is None else out @ m
        return out

    # serialization --------------------------------------------------------
    def to_json(self) -> dict:
        groups = {str(n): self.group(n).to_json() for n in range(1, self.bound + 1)}
        ops = []
        for key in sorted(self.ops, key=repr):
            ops.append({**describe_key(self.operad, key, as_dict=True), "matrix": self.ops[key].to_rows()})
        return {"operad": self.operad.name, "bound": self.bound, "name": self.name, "groups": groups,
                "operators": ops}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict | str, operad) -> JanusPresentation:
        if isinstance(data, str):
            data = json.loads(data)
        ranks = {int(n): g["rank"] for n, g in data["groups"].items()}
        for n, g in data["groups"].items():
            if g.get("torsion"):
                raise ValueError("presentations with torsion values are not supported")
        j = cls(operad, int(data["bound"]), ranks, {}, data.get("name", "M"))
        for entry in data["operators"]:
            key = key_from_dict(operad, entry)
            rows, cols = j.shape(key)
            j.ops[key] = ZMatrix.from_rows(entry["matrix"], cols)
        return j


def describe_key(op, key: tuple, as_dict: bool = False):
    kind, n = key[0], key[1]
    if kind in ("T", "P", "Ts"):
        d = {"op": kind, "n": n, "i": key[2]}
    elif kind == "I":
        d = {"op": "I", "n": n, "alpha": [op.label(El(1, a)) for a in key[2]]}
    else:
        d = {"op": "H", "n": n, "k": key[2], "i": key[3], "omega": op.label(El(key[2] + 1, key[4]))}
    if as_dict:
        return d
    return json.dumps(d, sort_keys=True)


def key_from_dict(op, d: dict) -> tuple:
    kind = d["op"]
    if kind in ("T", "P", "Ts"):
        return (kind, int(d["n"]), int(d["i"]))
    if kind == "I":
        return ("I", int(d["n"]), tuple(op.parse(a, 1).idx for a in d["alpha"]))
    if kind == "H":
        k = int(d["k"])
        return ("H", int(d["n"]), k, int(d["i"]), op.parse(d["omega"], k + 1).idx)
    raise ValueError(f"unknown generator kind {kind!r}")


def generator_keys(op, bound: int) -> list[tuple]:
    """Every generator with source and target in 1..bound."""
    keys: list[tuple] = []
    units = [a.idx for a in op.elements(1)]
    for n in range(1, bound + 1):
        for i in range(1, n):
            keys += [("T", n, i), ("P", n, i), ("Ts", n, i)]
        for alphas in itertools.product(units, repeat=n):
            keys.append(("I", n, alphas))
        for k in range(1, n):
            if k + 1 > op.max_arity:
                continue
            for i in range(1, n - k + 1):
                for w in op.elements(k + 1):
                    keys.append(("H", n, k, i, w.idx))
    return keys


def generator_map(op, key: tuple):
    """The morphism named by a key: a plain map for M_*, a DecoratedMap for M^*."""
    kind, n = key[0], key[1]
    if kind == "T":
        return opcat.tau_map(n, key[2]), n
    if kind == "P":
        return opcat.s_map(n, key[2]), n - 1
    if kind == "Ts":
        return opcat.tau(op, n, key[2])
    if kind == "I":
        return opcat.decorated_identity(op, [El(1, a) for a in key[2]])
    k, i, w = key[2], key[3], key[4]
    return opcat.collapse(op, n, i, k, El(k + 1, w))


# ---------------------------------------------------------------------------
# normal forms


def _blocks(mu: Sequence[int], target: int) -> list[tuple[int, int]]:
    """(first, k) per target point of a monotone surjection, fiber first..first+k."""
    out = []
    for y in range(1, target + 1):
        fib = [x for x, fx in enumerate(mu, start=1) if fx == y]
        out.append((fib[0], len(fib) - 1))
    return out


def horizontal_word(mp: Sequence[int], target: int) -> list[tuple]:
    """Keys g_1..g_r with mp = g_1 o ... o g_r."""
    mp = tuple(mp)
    n = len(mp)
    if set(mp) != set(range(1, target + 1)):
        raise ValueError("horizontal maps are surjections")
    pi = opcat.sorting_permutation(mp)
    mu = opcat.compose_maps(mp, perm_inverse(pi))
    seq = []
    cur = n
    for a, k in reversed(_blocks(mu, target)):
        for _ in range(k):
            seq.append(("P", cur, a))
            cur -= 1
    return list(reversed(seq)) + [("T", n, r) for r in opcat.adjacent_word(pi)]


def vertical_word(v: DecoratedMap) -> list[tuple[tuple, DecoratedMap]]:
    """(key, generator) pairs with v = d_1 o ... o d_r."""
    op = v.operad
    if v.flavor != OMEGA:
        v = v.with_flavor(OMEGA)
    n, m = v.source_size, v.target_size
    pi = opcat.sorting_permutation(v.map)
    mu = opcat.compose_maps(v.map, perm_inverse(pi))
    blocks = _blocks(mu, m)
    word: list[tuple[tuple, DecoratedMap]] = []
    alphas = tuple(v.decoration[y - 1].idx if k == 0 else op.unit.idx for y, (a, k) in enumerate(blocks, start=1))
    if any(a != op.unit.idx for a in alphas):
        key = ("I", m, alphas)
        word.append((key, generator_map(op, key)))
    seq = []
    cur = n
    for y in range(m, 0, -1):
        a, k = blocks[y - 1]
        if k:
            key = ("H", cur, k, a, v.decoration[y - 1].idx)
            seq.append((key, generator_map(op, key)))
            cur -= k
    word += list(reversed(seq))
    for r in opcat.adjacent_word(pi):
        key = ("Ts", n, r)
        word.append((key, generator_map(op, key)))
    return word


def check_normal_form(v: DecoratedMap) -> bool:
    """The vertical word composes back to v."""
    word = vertical_word(v)
    if not word:
        return v == opcat.identity(OMEGA, v.operad, v.source_size)
    return opcat.compose_all(*[g for _, g in word]) == v.with_flavor(OMEGA)


def check_horizontal_normal_form(mp: Sequence[int], target: int) -> bool:
    out = tuple(range(1, len(mp) + 1))
    for key in reversed(horizontal_word(mp, target)):
        g, _ = generator_map(None, key)
        out = opcat.compose_maps(g, out)
    return out == tuple(mp)


# ---------------------------------------------------------------------------
# relation bookkeeping


class _Collector:
    """Counts verified instances and records failures with their matrices."""

    def __init__(self, j: JanusPresentation) -> None:
        self.j = j
        self.verified: list[dict] = []
        self.failures: list[dict] = []

    def check(self, family: str, params: dict, lhs: ZMatrix, rhs: ZMatrix, **extra) -> bool:
        entry = {"family": family, **params, **extra}
        if lhs == rhs:
            self.verified.append(entry)
            return True
        self.failures.append({**entry, "lhs": lhs.to_rows(), "rhs": rhs.to_rows()})
        return False

    def report(self, name: str) -> Report:
        rep = Report(name, {"operad": self.j.operad.name, "bound": self.j.bound, "presentation": self.j.name})
        rep.witnesses["verified"] = len(self.verified)
        families = Counter(v["family"] for v in self.verified)
        rep.witnesses["by_family"] = dict(sorted(families.items()))
        if self.failures:
            rep.status = FAIL
            rep.witnesses["failures"] = self.failures
        return rep


def _words_equal(j: JanusPresentation, lhs: Sequence, rhs: Sequence, target: int) -> tuple[ZMatrix, ZMatrix]:
    """Evaluate two horizontal composites g_1 o ... o g_r given as plain maps."""
    def ev(word):
        out = None
        for mp, tgt in word:
            m = j.lower(mp, tgt)
            out = m if out is None else out @ m
        return out
    return ev(lhs), ev(rhs)


def _compose_plain(word: Sequence[tuple[tuple[int, ...], int]]) -> tuple[int, ...]:
    out = tuple(range(1, len(word[-1][0]) + 1))
    for mp, _ in reversed(word):
        out = opcat.compose_maps(mp, out)
    return out


def _hrel(col: _Collector, family: str, params: dict, lhs: list, rhs: list) -> None:
    """A horizontal relation lhs = rhs, both composites of generator maps."""
    if _compose_plain(lhs) != _compose_plain(rhs):
        raise VerificationFailure(f"horizontal relation {family} {params} does not hold for maps")
    a, b = _words_equal(col.j, lhs, rhs, lhs[0][1])
    col.check(family, params, a, b)


def _vrel(col: _Collector, family: str, params: dict, lhs: list[DecoratedMap], rhs: list[DecoratedMap]) -> None:
    """A vertical relation lhs = rhs in Omega(P); M^* reverses the order."""
    if opcat.compose_all(*lhs) != opcat.compose_all(*rhs):
        raise VerificationFailure(f"vertical relation {family} {params} does not hold for maps")

    def ev(word):
        out = None
        for g in reversed(word):
            m = col.j.upper(g)
            out = m if out is None else out @ m
        return out
    col.check(family, params, ev(lhs), ev(rhs))


def _h(n: int, i: int) -> tuple[tuple[int, ...], int]:
    return opcat.s_map(n, i), n - 1


def _t(n: int, i: int) -> tuple[tuple[int, ...], int]:
    return opcat.tau_map(n, i), n


# ---------------------------------------------------------------------------
# horizontal relations


def check_horizontal_relations(j: JanusPresentation) -> Report:
    """Symmetric group relations and the three families for s and tau on M_*."""
    col = _Collector(j)
    N = j.bound
    for n in range(2, N + 1):
        for i in range(1, n):
            col.check("S_n involution", {"n": n, "i": i}, j.op(("T", n, i)) @ j.op(("T", n, i)), j.identity(n))
            if i + 1 < n:
                _hrel(col, "S_n braid", {"n": n, "i": i}, [_t(n, i), _t(n, i + 1), _t(n, i)],
                      [_t(n, i + 1), _t(n, i), _t(n, i + 1)])
            for k in range(i + 2, n):
                _hrel(col, "S_n commute", {"n": n, "i": i, "j": k}, [_t(n, i), _t(n, k)], [_t(n, k), _t(n, i)])
        # (1) s_i^{n-1} s_j^n = s_{j-1}^{n-1} s_i^n for i < j
        for i in range(1, n - 1):
            for jj in range(i + 1, n):
                _hrel(col, "(1)", {"n": n, "i": i, "j": jj}, [_h(n - 1, i), _h(n, jj)], [_h(n - 1, jj - 1), _h(n, i)])
        # (2) s_i^n tau_i^n = s_i^n
        for i in range(1, n):
            _hrel(col, "(2)", {"n": n, "i": i}, [_h(n, i), _t(n, i)], [_h(n, i)])
        # (3) tau_k^{n-1} s_j^n
        for jj in range(1, n):
            for k in range(1, n - 1):
                if k < jj - 1:
                    rhs = [_h(n, jj), _t(n, k)]
                elif k == jj - 1:
                    rhs = [_h(n, jj - 1), _t(n, jj), _t(n, jj - 1)]
                elif k == jj:
                    rhs = [_h(n, jj + 1), _t(n, jj), _t(n, jj + 1)]
                else:
                    rhs = [_h(n, jj), _t(n, k + 1)]
                _hrel(col, "(3)", {"n": n, "j": jj, "k": k}, [_t(n - 1, k), _h(n, jj)], rhs)
    return col.report("horizontal relations")


# ---------------------------------------------------------------------------
# vertical relations


def check_vertical_relations(j: JanusPresentation) -> Report:
    """Symmetric group relations and the seven families of Omega(P) on M^*."""
    col = _Collector(j)
    op = j.operad
    N = j.bound
    P1 = op.elements(1)
    unit = op.unit

    def ident(alphas):
        return opcat.decorated_identity(op, alphas)

    def tau(n, i):
        return opcat.tau(op, n, i)

    def s(n, i, k, w):
        return opcat.collapse(op, n, i, k, w)

    def lab(w):
        return op.label(w)

    def elems(arity):
        return op.elements(arity) if arity <= op.max_arity else []

    for n in range(1, N + 1):
        for i in range(1, n):
            col.check("S_n involution", {"n": n, "i": i}, j.op(("Ts", n, i)) @ j.op(("Ts", n, i)), j.identity(n))
            if i + 1 < n:
                _vrel(col, "S_n braid", {"n": n, "i": i}, [tau(n, i), tau(n, i + 1), tau(n, i)],
                      [tau(n, i + 1), tau(n, i), tau(n, i + 1)])
            for k in range(i + 2, n):
                _vrel(col, "S_n commute", {"n": n, "i": i, "j": k}, [tau(n, i), tau(n, k)], [tau(n, k), tau(n, i)])
        tuples = list(itertools.product(P1, repeat=n))
        # (1)
        for w in tuples:
            for a in tuples:
                _vrel(col, "(1)", {"n": n, "omega": [lab(x) for x in w], "alpha": [lab(x) for x in a]},
                      [ident(w), ident(a)], [ident([op.gamma(x, (y,)) for x, y in zip(w, a)])])
        # (2)
        for w in tuples:
            for k in range(1, n):
                sw = list(w)
                sw[k - 1], sw[k] = sw[k], sw[k - 1]
                _vrel(col, "(2)", {"n": n, "k": k, "omega": [lab(x) for x in w]}, [ident(w), tau(n, k)],
                      [tau(n, k), ident(sw)])
        for k in range(1, n):
            m = n - k
            for i in range(1, m + 1):
                for w in elems(k + 1):
                    # (3)
                    for ws in itertools.product(P1, repeat=m):
                        rhs_id = list(ws[:i - 1]) + [unit] * (k + 1) + list(ws[i:])
                        _vrel(col, "(3)", {"n": n, "k": k, "i": i, "omega": lab(w), "outer": [lab(x) for x in ws]},
                              [ident(ws), s(n, i, k, w)], [s(n, i, k, op.gamma(ws[i - 1], (w,))), ident(rhs_id)])
                    # (4)
                    for ws in itertools.product(P1, repeat=n):
                        lhs_id = list(ws[:i - 1]) + [unit] + list(ws[i + k:])
                        _vrel(col, "(4)", {"n": n, "k": k, "i": i, "omega": lab(w), "inner": [lab(x) for x in ws]},
                              [s(n, i, k, w), ident(ws)], [ident(lhs_id), s(n, i, k, op.gamma(w, ws[i - 1:i + k]))])
        # (5) (s_i^{n-k,n-k-p}, w)(s_j^{n,n-k}, a)
        for k in range(1, n):
            for p in range(1, n - k):
                for jj in range(1, n - k + 1):
                    for i in range(1, n - k - p + 1):
                        for a in elems(k + 1):
                            for w in elems(p + 1):
                                params = {"n": n, "k": k, "p": p, "i": i, "j": jj, "omega": lab(w), "alpha": lab(a)}
                                lhs = [s(n - k, i, p, w), s(n, jj, k, a)]
                                if i <= jj <= i + p:
                                    if k + p + 1 > op.max_arity:
                                        continue
                                    args = [unit] * (jj - i) + [a] + [unit] * (p - jj + i)
                                    rhs = [s(n, i, k + p, op.gamma(w, args))]
                                elif jj < i:
                                    rhs = [s(n - p, jj, k, a), s(n, i + k, p, w)]
                                else:
                                    rhs = [s(n - p, jj - p, k, a), s(n, i, p, w)]
                                _vrel(col, "(5)", params, lhs, rhs)
        # (6) (tau_k^{n-p})(s_j^{n,n-p}, a)
        for p in range(1, n):
            for jj in range(1, n - p + 1):
                for k in range(1, n - p):
                    for a in elems(p + 1):
                        params = {"n": n, "p": p, "j": jj, "k": k, "alpha": lab(a)}
                        if k < jj - 1:
                            rhs = [s(n, jj, p, a), tau(n, k)]
                        elif k == jj - 1:
                            rhs = [s(n, jj - 1, p, a)] + [tau(n, t) for t in range(jj + p - 1, jj - 2, -1)]
                        elif k == jj:
                            rhs = [s(n, jj + 1, p, a)] + [tau(n, t) for t in range(jj, jj + p + 1)]
                        else:
                            rhs = [s(n, jj, p, a), tau(n, k + p)]
                        _vrel(col, "(6)", params, [tau(n - p, k), s(n, jj, p, a)], rhs)
        # (7) (s_j^{n,n-p}, a)(tau_k^n)
        for p in range(1, n):
            for jj in range(1, n - p + 1):
                for k in range(1, n):
                    if k in (jj + p, jj - 1):
                        continue
                    for a in elems(p + 1):
                        params = {"n": n, "p": p, "j": jj, "k": k, "alpha": lab(a)}
                        if jj <= k <= jj + p - 1:
                            t = k - jj + 1
                            sw = tuple(t + 1 if x == t else t if x == t + 1 else x for x in range(1, p + 2))
                            rhs = [s(n, jj, p, op.act(a, sw))]
                        elif k > jj + p:
                            rhs = [tau(n - p, k - p), s(n, jj, p, a)]
                        else:
                            rhs = [tau(n - p, k), s(n, jj, p, a)]
                        _vrel(col, "(7)", params, [s(n, jj, p, a), tau(n, k)], rhs)
    return col.report("vertical relations")


# ---------------------------------------------------------------------------
# pseudo-Mackey relations


@dataclass
class PseudoMackeyCertificate:
    verified: list[dict]
    failures: list[dict]
    report: Report

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "verified": len(self.verified), "failures": self.failures,
                "report": self.report.to_json()}


def square_terms(j: JanusPresentation, bottom: Sequence[int], right: DecoratedMap) -> tuple[ZMatrix, list[tuple]]:
    """M^*(right) M_*(bottom) and the admissible-subset terms of its square."""
    sq = spans.lift_square(bottom, right)
    lhs = j.upper(right) @ j.lower(tuple(bottom), right.target_size)
    terms = []
    for sub in spans.admissible_subsets(sq):
        top, left = spans.restricted_legs(sq, sub)
        terms.append((sub, j.lower(top, right.source_size) @ j.upper(left)))
    return lhs, terms


def _sum(mats: Iterable[ZMatrix], rows: int, cols: int) -> ZMatrix:
    out = ZMatrix.zeros(rows, cols)
    for m in mats:
        out = out + m
    return out


def big_sigma(n: int, i: int, k: int) -> tuple[int, ...]:
    """The interleaving permutation of n+2k letters supported on i+1..i+2k."""
    sigma = list(range(1, n + 2 * k + 1))
    for t in range(k + 1):
        sigma[i + t - 1] = i + 2 * t
        sigma[i + k + t] = i + 2 * t + 1
    return tuple(sigma)


def remove_columns(p: Sequence[int], cols: Iterable[int]) -> tuple[int, ...]:
    """Drop the columns x -> p(x) for x in cols and reindex both rows."""
    cols = set(cols)
    keep = [x for x in range(1, len(p) + 1) if x not in cols]
    images = sorted(p[x - 1] for x in keep)
    rank = {y: r for r, y in enumerate(images, start=1)}
    return tuple(rank[p[x - 1]] for x in keep)


def big_relation_terms(j: JanusPresentation, n: int, i: int, k: int, alpha: El) -> list[tuple[str, list]]:
    """The 3^{k+1}-2 summands of H_i^{(n+k-1,n-1) alpha} P_i^n as operator words."""
    op = j.operad
    one, zero = op.unit, op.zero
    sigma = big_sigma(n, i, k)

    def ps(removed: set[int], start: int) -> list:
        applied = []
        cur = start
        for u in range(i, i + k + 1):
            if u in removed:
                continue
            applied.append(("lo", opcat.s_map(cur, u), cur - 1))
            cur -= 1
        return list(reversed(applied))

    def hcol(src: int, tgt: int, pos: int, w: El) -> tuple:
        return ("up", opcat.collapse(op, src, pos, src - tgt, w))

    out = [("main", ps(set(), n + 2 * k) + [("lo", sigma, n + 2 * k)]
            + [hcol(n + 2 * k, n + k, i, alpha), hcol(n + k, n, i + 1, alpha)])]
    for beta in range(1, k + 2):
        for us in itertools.combinations(range(i, i + k + 1), beta):
            for eps in itertools.product((0, 1), repeat=beta):
                if not beta - k <= sum(eps) <= k:
                    continue
                w = [one] * (k + 1)
                w2 = [one] * (k + 1)
                for u, e in zip(us, eps):
                    if e == 0:
                        w[u - i] = zero
                    else:
                        w2[u - i] = zero
                src = n + 2 * k - beta
                mid = n + k - sum(eps)
                cols = [u + e * (k + 1) for u, e in zip(us, eps)]
                word = ps(set(us), src) + [("lo", remove_columns(sigma, cols), src)]
                word += [hcol(src, mid, i, op.gamma(alpha, w)), hcol(mid, n, i + 1, op.gamma(alpha, w2))]
                out.append((f"beta={beta} u={list(us)} eps={list(eps)}", word))
    return out


def binary_relation_terms(j: JanusPresentation, n: int, i: int, alpha: El) -> list[tuple[str, list]]:
    """The seven closed summands of H_i^{(n,n-1) alpha} P_i^n."""
    op = j.operad
    one, zero = op.unit, op.zero
    a10, a01 = op.gamma(alpha, (one, zero)), op.gamma(alpha, (zero, one))

    def P(m, u):
        return ("lo", opcat.s_map(m, u), m - 1)

    def T(m, u):
        return ("lo", opcat.tau_map(m, u), m)

    def H(src, pos):
        return ("up", opcat.collapse(op, src, pos, 1, alpha))

    def I(first, second):
        return ("up", opcat.decorated_identity(op, [one] * (i - 1) + [first, second] + [one] * (n - i - 1)))

    return [
        ("P P T H H", [P(n + 1, i + 1), P(n + 2, i), T(n + 2, i + 1), H(n + 2, i), H(n + 1, i + 1)]),
        ("P T H", [P(n + 1, i + 1), T(n + 1, i), H(n + 1, i + 1)]),
        ("P H", [P(n + 1, i + 1), H(n + 1, i)]),
        ("P H'", [P(n + 1, i), H(n + 1, i + 1)]),
        ("P T H'", [P(n + 1, i), T(n + 1, i + 1), H(n + 1, i)]),
        ("I", [I(a10, a01)]),
        ("T I", [T(n, i), I(a01, a10)]),
    ]


def _multiset(mats: Iterable[ZMatrix]) -> Counter:
    return Counter((m.rows, m.cols, tuple(map(tuple, m.to_rows()))) for m in mats)


def check_pseudo_mackey(j: JanusPresentation, generic: bool = True) -> PseudoMackeyCertificate:
    """The five families of the presentation, assembled from admissible subsets.

    With ``generic`` the exchange law is also checked for every pair of a
    horizontal and a vertical generator with a common target.
    """
    col = _Collector(j)
    op = j.operad
    N = j.bound
    P1 = op.elements(1)
    lab = op.label

    def elems(arity):
        return op.elements(arity) if arity <= op.max_arity else []

    for n in range(1, N + 1):
        # (1) T = (M^* tau)^{-1}
        for i in range(1, n):
            prod = j.op(("T", n, i)) @ j.op(("Ts", n, i))
            col.check("(1)", {"n": n, "i": i}, prod, j.identity(n))
            col.check("(1)", {"n": n, "i": i, "side": "right"}, j.op(("Ts", n, i)) @ j.op(("T", n, i)), j.identity(n))
        ident = opcat.decorated_identity(op, [op.unit] * n)
        col.check("(1)", {"n": n, "identity": True}, j.upper(ident) if n else j.identity(0), j.identity(n))
    for n in range(2, N + 1):
        # (2) I_{n-1}^alpha P_i^n = P_i^n I_n^{alpha doubled}
        for i in range(1, n):
            for alphas in itertools.product(P1, repeat=n - 1):
                doubled = list(alphas[:i]) + [alphas[i - 1]] + list(alphas[i:])
                lhs = j.upper(opcat.decorated_identity(op, alphas)) @ j.lower(opcat.s_map(n, i), n - 1)
                rhs = j.lower(opcat.s_map(n, i), n - 1) @ j.upper(opcat.decorated_identity(op, doubled))
                col.check("(2)", {"n": n, "i": i, "alpha": [lab(a) for a in alphas]}, lhs, rhs)
        for k in range(1, N - n + 2):
            for jj in range(1, n):
                for a in elems(k + 1):
                    v = opcat.collapse(op, n + k - 1, jj, k, a)
                    for i in range(1, n):
                        params = {"n": n, "k": k, "i": i, "j": jj, "alpha": lab(a)}
                        lhs, terms = square_terms(j, opcat.s_map(n, i), v)
                        if i < jj:
                            rhs = j.lower(opcat.s_map(n + k, i), n + k - 1) @ j.upper(opcat.collapse(op, n + k, jj + 1, k, a))
                            col.check("(3)", params, lhs, rhs)
                            col.check("(3) squares", params, lhs, _sum((m for _, m in terms), *lhs.shape))
                        elif jj < i:
                            rhs = j.lower(opcat.s_map(n + k, k + i), n + k - 1) @ j.upper(opcat.collapse(op, n + k, jj, k, a))
                            col.check("(4)", params, lhs, rhs)
                            col.check("(4) squares", params, lhs, _sum((m for _, m in terms), *lhs.shape))
                        else:
                            _check_big(col, n, i, k, a, lhs, terms)
    if generic:
        _check_generator_squares(col)
    rep = col.report("pseudo-Mackey relations")
    return PseudoMackeyCertificate(col.verified, col.failures, rep)


def _check_big(col: _Collector, n: int, i: int, k: int, a: El, lhs: ZMatrix, terms: list) -> None:
    j = col.j
    params = {"n": n, "k": k, "i": i, "alpha": j.operad.label(a)}
    shape = lhs.shape
    adm = [m for _, m in terms]
    col.check("(5) squares", {**params, "terms": len(terms)}, lhs, _sum(adm, *shape))
    formula = [(name, j.product(word)) for name, word in big_relation_terms(j, n, i, k, a)]
    col.check("(5)", {**params, "terms": len(formula)}, lhs, _sum((m for _, m in formula), *shape))
    col.check("(5) term count", params, ZMatrix.from_rows([[len(formula)]], 1),
              ZMatrix.from_rows([[3 ** (k + 1) - 2]], 1))
    col.check("(5) term matching", params, _term_match(adm, [m for _, m in formula]), ZMatrix.from_rows([[1]], 1))
    if k == 1:
        closed = [(name, j.product(word)) for name, word in binary_relation_terms(j, n, i, a)]
        col.check("(5) binary", {**params, "terms": len(closed)}, lhs, _sum((m for _, m in closed), *shape))
        col.check("(5) binary term matching", params, _term_match(adm, [m for _, m in closed]),
                  ZMatrix.from_rows([[1]], 1))


def _term_match(a: Sequence[ZMatrix], b: Sequence[ZMatrix]) -> ZMatrix:
    """[[1]] when the two term lists agree as multisets of matrices."""
    return ZMatrix.from_rows([[int(len(a) == len(b) and _multiset(a) == _multiset(b))]], 1)


def _check_generator_squares(col: _Collector) -> None:
    """The exchange law on every (horizontal, vertical) generator pair."""
    j = col.j
    op = j.operad
    N = j.bound
    for m in range(1, N + 1):
        horizontals = [(opcat.tau_map(m, i), f"tau_{i}^{m}") for i in range(1, m)]
        horizontals += [(opcat.s_map(m + 1, i), f"s_{i}^{m + 1}") for i in range(1, m + 1) if m + 1 <= N]
        verticals = [generator_map(op, key) for key in generator_keys(op, N) if key[0] in ("Ts", "I", "H")]
        verticals = [v for v in verticals if v.target_size == m]
        for h, hname in horizontals:
            for v in verticals:
                lhs, terms = square_terms(j, h, v)
                rhs = _sum((t for _, t in terms), *lhs.shape)
                col.check("exchange", {"horizontal": hname, "vertical": str(v)}, lhs, rhs)


def check_all_squares(j: JanusPresentation, limit: int | None = None) -> Report:
    """The exchange law on every square over maps between objects <= N."""
    col = _Collector(j)
    op = j.operad
    N = j.bound
    count = 0
    for m in range(1, N + 1):
        for n in range(m, N + 1):
            for f in opcat.enumerate_hom(OMEGA, op, n, m):
                for p in range(m, N + 1):
                    for v in opcat.enumerate_hom(OMEGA, op, p, m):
                        if limit is not None and count >= limit:
                            return col.report("exchange law on all squares")
                        lhs, terms = square_terms(j, f.map, v)
                        col.check("exchange", {"bottom": list(f.map), "right": str(v)}, lhs,
                                  _sum((t for _, t in terms), *lhs.shape))
                        count += 1
            if n == m:
                for f in opcat.enumerate_hom(OMEGA, op, n, n):
                    if all(w == op.unit for w in f.decoration):
                        col.check("iso", {"bijection": list(f.map)}, j.lower(f.map, n) @ j.upper(f), j.identity(n))
    return col.report("exchange law on all squares")


def check_all(j: JanusPresentation) -> Report:
    rep = Report("janus presentation", {"operad": j.operad.name, "bound": j.bound, "presentation": j.name})
    rep.add(check_horizontal_relations(j))
    rep.add(check_vertical_relations(j))
    rep.add(check_pseudo_mackey(j).report)
    return rep


# ---------------------------------------------------------------------------
# builders


def zero_presentation(op, bound: int) -> JanusPresentation:
    return JanusPresentation(op, bound, {n: 0 for n in range(1, bound + 1)}, {}, "zero")


def identity_presentation(op, bound: int) -> JanusPresentation:
    """Z everywhere, identity on endomorphisms, zero on maps between different objects."""
    j = JanusPresentation(op, bound, {n: 1 for n in range(1, bound + 1)}, {}, "identity")
    for key in generator_keys(op, bound):
        src, tgt, _ = _key_ends(key)
        j.ops[key] = ZMatrix.identity(1) if src == tgt else ZMatrix.zeros(1, 1)
    return j


def corrupt(j: JanusPresentation, key: tuple, delta: int = 1) -> JanusPresentation:
    """Add delta to the first entry of one generator matrix."""
    m = j.op(key)
    rows = m.to_rows()
    if not rows or not rows[0]:
        raise ValueError("cannot corrupt an empty matrix")
    rows[0][0] += delta
    return j.with_operator(key, ZMatrix.from_rows(rows, m.cols), f"{j.name}+fault")


def _pointed_e(op, n: int, subset: Sequence[int]) -> spans.SpanMorphism:
    keep = set(subset)
    return spans.pointed_horizontal_span(op, tuple(x if x in keep else 0 for x in range(1, n + 1)), n)


def cross_effect_projector(F: TruncatedFunctor, n: int) -> ZMatrix:
    """sum_B (-1)^{n-|B|} F(e_B), an idempotent with image cr_n F(1,..,1)."""
    op = F.category.op
    g = F.gens(n)
    out = ZMatrix.zeros(g, g)
    for r in range(n + 1):
        for sub in itertools.combinations(range(1, n + 1), r):
            m = F(_pointed_e(op, n, sub))
            out = out + m if (n - r) % 2 == 0 else out - m
    return out


@dataclass
class _Summand:
    projector: ZMatrix
    basis: ZMatrix  # rows span the image

    def coords(self, x: ZMatrix) -> ZMatrix:
        """Coordinates of the columns of projector @ x."""
        y = self.projector @ x
        return coordinates(self.basis, y.T).T


def _summand(F: TruncatedFunctor, n: int) -> _Summand:
    if not F.value(n).is_free_presentation():
        raise ValueError(f"{F.name}({n}) is not free")
    e = cross_effect_projector(F, n)
    if e @ e != e:
        raise VerificationFailure(f"cross-effect projector at {n} is not idempotent")
    basis = row_basis(e.T)
    return _Summand(e, basis)


def from_functor(F: TruncatedFunctor, bound: int | None = None, certify: bool = True) -> JanusPresentation:
    """The pseudo-Mackey data of a functor on the span category.

    M(n) is the image of the cross-effect projector at n; M_* comes from the
    horizontal spans n = n -> m and M^* from the vertical spans m <- n = n.
    """
    cat = F.category
    if not isinstance(cat, SpanCat) or F.variance != COVARIANT:
        raise ValueError("from_functor expects a covariant functor on the span category")
    op = cat.op
    N = cat.bound if bound is None else bound
    if N > cat.bound:
        raise ValueError(f"bound {N} exceeds the category bound {cat.bound}")
    if certify and N + 1 <= cat.bound:
        top = cross_effect_projector(F, N + 1)
        if not top.is_zero():
            raise DegreeViolation(f"{F.name} has a nonzero cross-effect at {N + 1}")
    summands = {n: _summand(F, n) for n in range(1, N + 1)}
    ranks = {n: summands[n].basis.rows for n in summands}
    j = JanusPresentation(op, N, ranks, {}, f"M[{F.name}]")
    incl = {n: summands[n].basis.T for n in summands}
    for key in generator_keys(op, N):
        src, tgt, cov = _key_ends(key)
        if cov:
            mp, t = generator_map(op, key)
            image = F(spans.horizontal_span(op, mp, t))
            j.ops[key] = summands[tgt].coords(image @ incl[src])
        else:
            v = generator_map(op, key)
            image = F(spans.vertical_span(v))
            # vertical span v: tgt(v) <- src(v) = src(v) acts F(tgt(v)) -> F(src(v))
            j.ops[key] = summands[v.source_size].coords(image @ incl[v.target_size])
    return j


def _restricted_omega(v: DecoratedMap, sub: Sequence[int], nu: Sequence[int]) -> DecoratedMap:
    """(v restricted to sub) viewed as an Omega map onto nu."""
    r = opcat.restrict_to_subset(v.with_flavor(opcat.S), sub)
    pos = {y: t for t, y in enumerate(nu, start=1)}
    return DecoratedMap(OMEGA, len(sub), len(nu), tuple(pos[y] for y in r.map),
                        tuple(r.decoration[y - 1] for y in nu), v.operad)


def _subsets(n: int, bound: int) -> list[tuple[int, ...]]:
    return [s for r in range(1, min(n, bound) + 1) for s in itertools.combinations(range(1, n + 1), r)]


def _offsets(j: JanusPresentation, n: int) -> tuple[dict[tuple[int, ...], int], int]:
    off, pos = {}, 0
    for s in _subsets(n, j.bound):
        off[s] = pos
        pos += j.rank(len(s))
    return off, pos


def to_functor(j: JanusPresentation, bound: int | None = None, max_apex: int | None = None) -> TruncatedFunctor:
    """The functor n -> sum over nonempty subsets nu of n of M(|nu|).

    A span a <- X -> b sends the summand nu through every A' in X lying over
    nu and covering it: M^* of the restricted vertical leg, then M_* of the
    horizontal leg onto its image, landing in the summand of that image.
    """
    op = j.operad
    cat = SpanCat(op, j.bound if bound is None else bound, max_apex)
    offsets: dict[int, tuple[dict, int]] = {}

    def layout(n: int):
        if n not in offsets:
            offsets[n] = _offsets(j, n)
        return offsets[n]

    def value(n: int) -> Presentation:
        return Presentation.free(layout(n)[1])

    def action(s: spans.SpanMorphism) -> ZMatrix:
        a, b = s.source, s.target
        off_a, ga = layout(a)
        off_b, gb = layout(b)
        rows = [[0] * ga for _ in range(gb)]
        v, h = s.vertical, s.horizontal
        for nu, ca in off_a.items():
            if not j.rank(len(nu)):
                continue
            fibers = [v.fiber(y) for y in nu]
            choices = [[c for r in range(1, len(f) + 1) for c in itertools.combinations(f, r)] for f in fibers]
            for pick in itertools.product(*choices):
                sub = tuple(sorted(x for part in pick for x in part))
                if len(sub) > j.bound:
                    continue
                lam = tuple(sorted({h[x - 1] for x in sub}))
                if not j.rank(len(lam)):
                    continue
                pos = {y: t for t, y in enumerate(lam, start=1)}
                f_rest = tuple(pos[h[x - 1]] for x in sub)
                block = j.lower(f_rest, len(lam)) @ j.upper(_restricted_omega(v, sub, nu))
                rb = off_b[lam]
                for r in range(block.rows):
                    row = rows[rb + r]
                    for c in range(block.cols):
                        row[ca + c] += block[r, c]
        return ZMatrix.from_rows(rows, ga)

    return TruncatedFunctor(cat, COVARIANT, value, action, f"F[{j.name}]")


# ---------------------------------------------------------------------------
# comparisons


def presentation_iso_check(j1: JanusPresentation, j2: JanusPresentation, phis: dict[int, ZMatrix]) -> Report:
    """phi_n: M1(n) -> M2(n) unimodular and intertwining every generator."""
    rep = Report("presentation isomorphism", {"source": j1.name, "target": j2.name})
    for n in range(1, max(j1.bound, j2.bound) + 1):
        phi = phis.get(n, ZMatrix.zeros(j2.rank(n), j1.rank(n)))
        if phi.shape != (j2.rank(n), j1.rank(n)):
            rep.fail("shape", {"n": n, "shape": phi.shape})
            continue
        if phi.rows and not phi.is_unimodular():
            rep.fail("not unimodular", {"n": n, "matrix": phi})
    if not rep.ok:
        return rep
    count = 0
    for key in generator_keys(j1.operad, min(j1.bound, j2.bound)):
        src, tgt, cov = _key_ends(key)
        a, b = (tgt, src) if cov else (tgt, src)
        pa = phis.get(a, ZMatrix.zeros(j2.rank(a), j1.rank(a)))
        pb = phis.get(b, ZMatrix.zeros(j2.rank(b), j1.rank(b)))
        if pa @ j1.op(key) != j2.op(key) @ pb:
            rep.fail("not natural", describe_key(j1.operad, key, as_dict=True))
        count += 1
    rep.witnesses["generators"] = count
    rep.witnesses["phi"] = {str(n): m.to_rows() for n, m in phis.items()}
    return rep


def presentation_roundtrip(j: JanusPresentation) -> Report:
    """from_functor(to_functor(j)) is isomorphic to j via the top summands."""
    rep = Report("presentation roundtrip", {"operad": j.operad.name, "bound": j.bound, "presentation": j.name})
    F = to_functor(j, bound=j.bound + 1 if j.bound < j.operad.max_arity else j.bound)
    j2 = from_functor(F, j.bound)
    phis = {}
    for n in range(1, j.bound + 1):
        off, g = _offsets(j, n)
        top = tuple(range(1, n + 1))
        r = j.rank(n)
        incl = ZMatrix.from_columns([[int(row == off[top] + c) for row in range(g)] for c in range(r)], g)
        phis[n] = _summand(F, n).coords(incl)
    rep.add(presentation_iso_check(j, j2, phis))
    return rep


def functor_roundtrip(F: TruncatedFunctor, bound: int | None = None, objects: Sequence[int] | None = None,
                      max_checks: int = 400, seed: int = 0) -> Report:
    """to_functor(from_functor(F)) is isomorphic to F, naturally in spans."""
    cat = F.category
    j = from_functor(F, bound)
    G = to_functor(j, cat.bound, cat.max_apex)
    op = cat.op
    rep = Report("functor roundtrip", {"functor": F.name, "operad": op.name, "bound": j.bound})
    summands = {n: _summand(F, n) for n in range(1, j.bound + 1)}
    objs = list(range(0, cat.bound + 1)) if objects is None else list(objects)
    psi = {}
    for n in objs:
        off, g = _offsets(j, n)
        blocks = []
        for nu in off:
            r = j.rank(len(nu))
            if not r:
                continue
            emb = F(spans.horizontal_span(op, nu, n)) @ summands[len(nu)].basis.T
            blocks.append(emb)
        psi[n] = hstack(blocks, F.gens(n)) if blocks else ZMatrix.zeros(F.gens(n), 0)
        if psi[n].shape != (F.gens(n), g) or (g and not psi[n].is_unimodular()) or (not g and F.gens(n)):
            rep.fail("not an isomorphism", {"n": n, "matrix": psi[n]})
    if not rep.ok:
        return rep
    rng = random.Random(seed)
    pairs = [(a, b) for a in objs for b in objs]
    per_pair = max(1, max_checks // len(pairs))
    checks, skipped = 0, []
    for a, b in pairs:
        try:
            homs = cat.hom(a, b)
        except BudgetExceeded:
            skipped.append([a, b])
            continue
        if len(homs) > per_pair:
            homs = rng.sample(homs, per_pair)
        for s in homs:
            if F(s) @ psi[a] != psi[b] @ G(s):
                rep.fail("not natural", str(s))
            checks += 1
    rep.witnesses["skipped_homs"] = skipped
    rep.witnesses["naturality_checks"] = checks
    rep.witnesses["ranks"] = {str(n): j.rank(n) for n in range(1, j.bound + 1)}
    return rep


# ---------------------------------------------------------------------------
# linear and quadratic data


@dataclass
class LinearDatum:
    M_e: FgAbGroup
    I_e: dict[str, ZMatrix]
    report: Report


def linear_presentation(j: JanusPresentation) -> LinearDatum:
    """A Z[P(1)]-module: the operators I_e^w with I^1 = Id and I^{w'} I^w = I^{gamma(w; w')}."""
    for n in range(2, j.bound + 1):
        if j.rank(n):
            raise DegreeViolation(f"M({n}) is nonzero; the presentation is not linear")
    op = j.operad
    rep = Report("linear presentation", {"operad": op.name, "presentation": j.name})
    I = {w: j.op(("I", 1, (w.idx,))) for w in op.elements(1)}
    rep.expect(I[op.unit] == j.identity(1), "I^1 is not the identity", I[op.unit])
    for w in I:
        for w2 in I:
            rep.expect(I[w2] @ I[w] == I[op.gamma(w, (w2,))], "I^{w'} I^w != I^{gamma(w;w')}",
                       {"w": op.label(w), "w'": op.label(w2)})
    rep.witnesses["M_e"] = j.group(1).to_json()
    rep.witnesses["I_e"] = {op.label(w): m.to_rows() for w, m in I.items()}
    return LinearDatum(j.group(1), {op.label(w): m for w, m in I.items()}, rep)


@dataclass
class QuadraticDatum:
    M_e: FgAbGroup
    M_ee: FgAbGroup
    P: ZMatrix
    T: ZMatrix
    T_star: ZMatrix
    H: dict[str, ZMatrix]
    I_e: dict[str, ZMatrix]
    I_ee: dict[tuple[str, str], ZMatrix]
    report: Report

    def to_json(self) -> dict:
        return {"M_e": self.M_e.to_json(), "M_ee": self.M_ee.to_json(), "P": self.P.to_rows(), "T": self.T.to_rows(),
                "H": {k: v.to_rows() for k, v in self.H.items()}, "report": self.report.to_json()}


def quadratic_presentation(j: JanusPresentation) -> QuadraticDatum:
    """The quadratic diagram and its eleven relations, plus the reduced sets when P(1) is trivial."""
    for n in range(3, j.bound + 1):
        if j.rank(n):
            raise DegreeViolation(f"M({n}) is nonzero; the presentation is not quadratic")
    op = j.operad
    one, zero = op.unit, op.zero
    lab = op.label
    P = j.op(("P", 2, 1)) if j.bound >= 2 else ZMatrix.zeros(j.rank(1), 0)
    T = j.op(("T", 2, 1)) if j.bound >= 2 else ZMatrix.zeros(0, 0)
    Ts = j.op(("Ts", 2, 1)) if j.bound >= 2 else ZMatrix.zeros(0, 0)
    P1, P2 = op.elements(1), op.elements(2)
    H = {a: j.op(("H", 2, 1, 1, a.idx)) for a in P2}
    Ie = {w: j.op(("I", 1, (w.idx,))) for w in P1}
    Iee = {(w, w2): j.op(("I", 2, (w.idx, w2.idx))) for w in P1 for w2 in P1}
    e2 = ZMatrix.identity(j.rank(2))
    tau = (2, 1)
    rep = Report("quadratic presentation", {"operad": op.name, "presentation": j.name})

    def rel(num: int, cond: bool, info: Any = None) -> None:
        rep.expect(cond, f"relation ({num})", info)

    rel(1, T @ T == e2)
    rel(2, P @ T == P)
    for w in P1:
        for w2 in P1:
            rel(3, Ie[w2] @ Ie[w] == Ie[op.gamma(w, (w2,))], [lab(w), lab(w2)])
    for (w, w2) in Iee:
        for (v, v2) in Iee:
            rel(4, Iee[(w, w2)] @ Iee[(v, v2)] == Iee[(op.gamma(v, (w,)), op.gamma(v2, (w2,)))])
        rel(5, Iee[(w, w2)] @ T == T @ Iee[(w2, w)], [lab(w), lab(w2)])
    for a in P2:
        for w in P1:
            rel(6, H[a] @ Ie[w] == H[op.gamma(w, (a,))], [lab(a), lab(w)])
        for (w, w2) in Iee:
            rel(7, Iee[(w, w2)] @ H[a] == H[op.gamma(a, (w, w2))], [lab(a), lab(w), lab(w2)])
        rel(8, T @ H[a] == H[op.act(a, tau)], lab(a))
    rel(9, T @ Ts == e2 and Ts @ T == e2)
    for w in P1:
        rel(10, Ie[w] @ P == P @ Iee[(w, w)], lab(w))
    for a in P2:
        a10, a01 = op.gamma(a, (one, zero)), op.gamma(a, (zero, one))
        rel(11, H[a] @ P == Iee[(a10, a01)] + T @ Iee[(a01, a10)], lab(a))
    reduced = {}
    if len(P1) == 1:
        two_p = P.scale(2)
        reduced["PHP=2P"] = all(P @ H[a] @ P == two_p for a in P2)
        reduced["HPH'=H'+H'tau"] = all(H[a] @ P @ H[b] == H[b] + H[op.act(b, tau)] for a in P2 for b in P2)
        if len(P2) == 1:
            (a,) = P2
            reduced["HPH=2H"] = H[a] @ P @ H[a] == H[a].scale(2)
        elif len(P2) == 2 and hasattr(op, "ordering"):
            h1 = H[op.from_perm((1, 2))]
            ht = H[op.from_perm((2, 1))]
            reduced["H^tau=H^1PH^1-H^1"] = ht == h1 @ P @ h1 - h1
        for name, ok in reduced.items():
            rep.expect(ok, f"reduced relation {name}")
    rep.witnesses["reduced"] = reduced
    rep.witnesses["M_e"] = j.group(1).to_json()
    rep.witnesses["M_ee"] = j.group(2).to_json()
    rep.witnesses["P"] = P.to_rows()
    rep.witnesses["H"] = {lab(a): m.to_rows() for a, m in H.items()}
    return QuadraticDatum(j.group(1), j.group(2), P, T, Ts, {lab(a): m for a, m in H.items()},
                          {lab(w): m for w, m in Ie.items()},
                          {(lab(w), lab(w2)): m for (w, w2), m in Iee.items()}, rep)
