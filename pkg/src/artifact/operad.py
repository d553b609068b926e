"""Finite unitary set-operads truncated at a maximal arity.

Elements are ``El(arity, idx)`` pairs; ``idx`` is a dense index into the
component P(arity) and labels are only used for input and output.
Permutations are tuples of 1-based images ``(s(1), ..., s(n))``.

Conventions for As: an element of As(n) = S_n is the rank function of a total
order on {1..n} (``p[x-1]`` is the position of x), S_n acts by right
translation ``p . s = p o s``, and gamma concatenates blocks in the order given
by the outer rank function.  ``ordering`` returns the listing of the order.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence


class ArityOverflow(ValueError):
    """A composition would leave the truncation range."""


class OperadError(ValueError):
    """Malformed operad data."""


class El(NamedTuple):
    arity: int
    idx: int


Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations


def perm_identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def perm_compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(x) = p(q(x))."""
    return tuple(p[x - 1] for x in q)


def perm_inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p, start=1):
        out[x - 1] = i
    return tuple(out)


def adjacent_transposition(n: int, i: int) -> Perm:
    p = list(range(1, n + 1))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


@lru_cache(maxsize=None)
def all_perms(n: int) -> tuple[Perm, ...]:
    return tuple(itertools.permutations(range(1, n + 1)))


@lru_cache(maxsize=None)
def _perm_index(n: int) -> dict[Perm, int]:
    return {p: i for i, p in enumerate(all_perms(n))}


def perm_to_cycles(p: Perm) -> str:
    """Cycle notation, ``id_n`` for the identity."""
    n = len(p)
    seen: set[int] = set()
    parts = []
    for start in range(1, n + 1):
        if start in seen or p[start - 1] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = p[start - 1]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = p[x - 1]
        sep = "," if n > 9 else ""
        parts.append("(" + sep.join(str(c) for c in cyc) + ")")
    return "".join(parts) if parts else f"id_{n}"


def perm_from_cycles(text: str, n: int) -> Perm:
    text = text.strip()
    if text in (f"id_{n}", "id", "e", "1"):
        return perm_identity(n)
    p = list(range(1, n + 1))
    for body in text.replace(" ", "").strip("()").split(")("):
        if not body:
            continue
        pts = [int(x) for x in (body.split(",") if "," in body else body)]
        if any(x < 1 or x > n for x in pts):
            raise OperadError(f"cycle {text!r} out of range for S_{n}")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            p[a - 1] = b
    if sorted(p) != list(range(1, n + 1)):
        raise OperadError(f"{text!r} is not a permutation")
    return tuple(p)


def block_permutation(sigma: Perm, sizes: Sequence[int]) -> Perm:
    """Permute consecutive blocks of the given sizes as sigma permutes letters.

    Block i (of size sizes[i-1]) is moved to slot sigma(i); the order inside a
    block is preserved.
    """
    k = len(sigma)
    inv = perm_inverse(sigma)
    # start offset of each slot in the target arrangement
    target_start = {}
    pos = 0
    for slot in range(1, k + 1):
        target_start[slot] = pos
        pos += sizes[inv[slot - 1] - 1]
    out = []
    for i in range(1, k + 1):
        base = target_start[sigma[i - 1]]
        out.extend(base + t + 1 for t in range(sizes[i - 1]))
    return tuple(out)


def block_sum(perms: Sequence[Perm]) -> Perm:
    out: list[int] = []
    off = 0
    for p in perms:
        out.extend(off + x for x in p)
        off += len(p)
    return tuple(out)


# ---------------------------------------------------------------------------
# operads


GammaFn = Callable[["TruncatedOperad", El, tuple[El, ...]], El]
ActFn = Callable[["TruncatedOperad", El, Perm], El]


class TruncatedOperad:
    """A unitary set-operad known up to arity ``max_arity``."""

    def __init__(
        self,
        name: str,
        max_arity: int,
        labels: dict[int, Sequence[str]],
        unit_label: str,
        gamma_fn: GammaFn,
        act_fn: ActFn,
    ) -> None:
        if max_arity < 1:
            raise OperadError("max_arity must be >= 1")
        self.name = name
        self.max_arity = max_arity
        self.labels = {n: tuple(labels.get(n, ())) for n in range(max_arity + 1)}
        if len(self.labels[0]) != 1:
            raise OperadError("unitary operads have exactly one element of arity 0")
        try:
            self.unit = El(1, self.labels[1].index(unit_label))
        except ValueError:
            raise OperadError(f"unit {unit_label!r} is not in P(1)") from None
        self.zero = El(0, 0)
        self._gamma_fn = gamma_fn
        self._act_fn = act_fn
        self._gamma_cache: dict[tuple[El, tuple[El, ...]], El] = {}
        self._act_cache: dict[tuple[El, Perm], El] = {}
        self.gamma_overrides: dict[tuple[El, tuple[El, ...]], El] = {}

    # elements ---------------------------------------------------------------
    def size(self, n: int) -> int:
        return len(self.labels[n]) if 0 <= n <= self.max_arity else 0

    def elements(self, n: int) -> list[El]:
        return [El(n, i) for i in range(self.size(n))]

    def all_elements(self) -> Iterator[El]:
        for n in range(self.max_arity + 1):
            yield from self.elements(n)

    def label(self, x: El) -> str:
        return self.labels[x.arity][x.idx]

    def qualified_label(self, x: El) -> str:
        lab = self.label(x)
        clashes = sum(lab in self.labels[n] for n in self.labels)
        return lab if clashes == 1 else f"{lab}@{x.arity}"

    def parse(self, text: str, arity: int | None = None) -> El:
        if "@" in text and arity is None:
            text, a = text.rsplit("@", 1)
            arity = int(a)
        if arity is not None:
            if arity > self.max_arity:
                raise ArityOverflow(f"arity {arity} exceeds truncation {self.max_arity}")
            try:
                return El(arity, self.labels[arity].index(text))
            except ValueError:
                pass
            alt = self._parse_alias(text, arity)
            if alt is not None:
                return alt
            raise OperadError(f"{text!r} is not an element of {self.name}({arity})")
        hits = [El(n, lab.index(text)) for n, lab in self.labels.items() if text in lab]
        if len(hits) != 1:
            raise OperadError(f"label {text!r} is {'ambiguous' if hits else 'unknown'}; use label@arity")
        return hits[0]

    def _parse_alias(self, text: str, arity: int) -> El | None:
        return None

    # structure --------------------------------------------------------------
    def gamma(self, theta: El, args: Sequence[El]) -> El:
        args = tuple(args)
        if len(args) != theta.arity:
            raise OperadError(f"gamma needs {theta.arity} arguments, got {len(args)}")
        total = sum(a.arity for a in args)
        if total > self.max_arity:
            raise ArityOverflow(f"total arity {total} exceeds truncation {self.max_arity}")
        key = (theta, args)
        hit = self.gamma_overrides.get(key)
        if hit is not None:
            return hit
        hit = self._gamma_cache.get(key)
        if hit is None:
            hit = self._gamma_fn(self, theta, args)
            self._gamma_cache[key] = hit
        return hit

    def act(self, theta: El, sigma: Perm) -> El:
        """Right action theta . sigma."""
        if len(sigma) != theta.arity:
            raise OperadError("permutation size differs from arity")
        if sigma == perm_identity(len(sigma)):
            return theta
        key = (theta, sigma)
        hit = self._act_cache.get(key)
        if hit is None:
            hit = self._act_fn(self, theta, sigma)
            self._act_cache[key] = hit
        return hit

    def induced_bijection(self, h: Perm, omega: El) -> El:
        """The map h_hat(omega) = omega . h^{-1} used to transport decorations."""
        return self.act(omega, perm_inverse(h))

    def with_gamma_override(self, theta: El, args: Sequence[El], result: El) -> TruncatedOperad:
        """A copy with one gamma entry replaced (fault injection)."""
        other = TruncatedOperad.__new__(type(self))
        other.__dict__.update(self.__dict__)
        other._gamma_cache = dict(self._gamma_cache)
        other._act_cache = dict(self._act_cache)
        other.gamma_overrides = dict(self.gamma_overrides)
        other.gamma_overrides[(theta, tuple(args))] = result
        other.name = self.name + "*"
        return other

    def binary_unital_element(self) -> El | None:
        """Some theta in P(2) with gamma(theta; 1, 0) = gamma(theta; 0, 1) = 1."""
        if self.max_arity < 2:
            return None
        for t in self.elements(2):
            if (self.gamma(t, (self.unit, self.zero)) == self.unit
                    and self.gamma(t, (self.zero, self.unit)) == self.unit):
                return t
        return None

    def __repr__(self) -> str:
        return f"<operad {self.name} N={self.max_arity}>"

    # serialization ----------------------------------------------------------
    def to_json(self) -> dict:
        comps = {str(n): list(self.labels[n]) for n in range(self.max_arity + 1)}
        gam = []
        for theta, args in _gamma_domain(self):
            res = self.gamma(theta, args)
            gam.append({
                "outer": self.qualified_label(theta),
                "inner": [self.qualified_label(a) for a in args],
                "result": self.qualified_label(res),
            })
        acts: dict[str, dict[str, dict[str, str]]] = {}
        for n in range(2, self.max_arity + 1):
            if not self.size(n):
                continue
            table = {}
            for i in range(1, n):
                tau = adjacent_transposition(n, i)
                table[perm_to_cycles(tau)] = {
                    self.label(x): self.label(self.act(x, tau)) for x in self.elements(n)
                }
            acts[str(n)] = table
        return {
            "name": self.name,
            "max_arity": self.max_arity,
            "components": comps,
            "unit": self.label(self.unit),
            "gamma": gam,
            "actions": acts,
        }


def _gamma_domain(op: TruncatedOperad) -> Iterator[tuple[El, tuple[El, ...]]]:
    """All (theta, args) whose total arity stays inside the truncation."""
    N = op.max_arity
    for k in range(N + 1):
        for theta in op.elements(k):
            for arities in _compositions_bounded(k, N):
                pools = [op.elements(a) for a in arities]
                for args in itertools.product(*pools):
                    yield theta, tuple(args)


def _compositions_bounded(k: int, total: int) -> Iterator[tuple[int, ...]]:
    """Tuples of k non-negative integers with sum <= total."""
    if k == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions_bounded(k - 1, total - first):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# built-ins


def _com(max_arity: int) -> TruncatedOperad:
    def g(op, theta, args):
        return El(sum(a.arity for a in args), 0)

    def a(op, theta, sigma):
        return theta

    labels = {n: ["*"] for n in range(max_arity + 1)}
    return TruncatedOperad("com", max_arity, labels, "*", g, a)


def _initial(max_arity: int) -> TruncatedOperad:
    def g(op, theta, args):
        total = sum(x.arity for x in args)
        if total > 1:
            raise OperadError("I has no elements of arity > 1")
        return El(total, 0)

    def a(op, theta, sigma):
        return theta

    labels = {0: ["0"], 1: ["1"]}
    return TruncatedOperad("i", max_arity, labels, "1", g, a)


class AsOperad(TruncatedOperad):
    """The associative operad; elements are rank functions of total orders."""

    def perm(self, x: El) -> Perm:
        return all_perms(x.arity)[x.idx]

    def from_perm(self, p: Sequence[int]) -> El:
        p = tuple(p)
        return El(len(p), _perm_index(len(p))[p])

    def ordering(self, x: El) -> Perm:
        """Listing of {1..n} in increasing rank."""
        return perm_inverse(self.perm(x))

    def from_ordering(self, word: Sequence[int]) -> El:
        return self.from_perm(perm_inverse(tuple(word)))

    def _parse_alias(self, text: str, arity: int) -> El | None:
        try:
            return self.from_perm(perm_from_cycles(text, arity))
        except (OperadError, ValueError):
            return None


def _as(max_arity: int) -> AsOperad:
    def g(op, theta, args):
        outer = all_perms(theta.arity)[theta.idx]
        sizes = [x.arity for x in args]
        order = perm_inverse(outer)  # blocks listed by increasing outer rank
        offset = {}
        pos = 0
        for j in order:
            offset[j] = pos
            pos += sizes[j - 1]
        ranks: list[int] = []
        for j, x in enumerate(args, start=1):
            inner = all_perms(x.arity)[x.idx]
            ranks.extend(offset[j] + r for r in inner)
        return El(len(ranks), _perm_index(len(ranks))[tuple(ranks)])

    def a(op, theta, sigma):
        p = all_perms(theta.arity)[theta.idx]
        return El(theta.arity, _perm_index(theta.arity)[perm_compose(p, sigma)])

    labels = {n: [perm_to_cycles(p) for p in all_perms(n)] for n in range(max_arity + 1)}
    labels[0] = ["id_0"]
    return AsOperad("as", max_arity, labels, "id_1", g, a)


BUILTINS = ("i", "com", "as")


def builtin(name: str, max_arity: int) -> TruncatedOperad:
    """The operads I, Com and As truncated at ``max_arity``."""
    key = name.lower()
    if max_arity < 1:
        raise OperadError("max_arity must be >= 1")
    if key == "i":
        return _initial(max_arity)
    if key == "com":
        return _com(max_arity)
    if key == "as":
        return _as(max_arity)
    raise OperadError(f"unknown built-in operad {name!r}")


def from_json(data: dict | str) -> TruncatedOperad:
    """Load a tabled operad; ``actions`` may list only generating permutations."""
    if isinstance(data, str):
        data = json.loads(data)
    N = int(data["max_arity"])
    labels = {int(k): list(v) for k, v in data["components"].items()}
    name = data.get("name", "custom")
    op = TruncatedOperad(name, N, labels, data["unit"], _missing_gamma, _missing_act)
    table: dict[tuple[El, tuple[El, ...]], El] = {}
    for entry in data.get("gamma", []):
        inner = [op.parse(s) for s in entry["inner"]]
        theta = op.parse(entry["outer"])
        res = op.parse(entry["result"])
        table[(theta, tuple(inner))] = res
    gen_tables: dict[int, dict[Perm, dict[int, int]]] = {}
    for n_text, perms in data.get("actions", {}).items():
        n = int(n_text)
        for ptext, mapping in perms.items():
            sigma = perm_from_cycles(ptext, n)
            gen_tables.setdefault(n, {})[sigma] = {
                op.parse(k, n).idx: op.parse(v, n).idx for k, v in mapping.items()
            }
    full = {n: _close_action(op.size(n), n, gens) for n, gens in gen_tables.items()}

    def g(op_, theta, args):
        try:
            return table[(theta, args)]
        except KeyError:
            raise OperadError(f"gamma entry missing for {op_.label(theta)} with {len(args)} inputs") from None

    def a(op_, theta, sigma):
        n = theta.arity
        if op_.size(n) == 1 or n < 2:
            return theta
        try:
            return El(n, full[n][sigma][theta.idx])
        except KeyError:
            raise OperadError(f"action of {sigma} on arity {n} not determined") from None

    op._gamma_fn = g
    op._act_fn = a
    return op


def _missing_gamma(op, theta, args):
    raise OperadError("gamma undefined")


def _missing_act(op, theta, sigma):
    raise OperadError("action undefined")


def _close_action(size: int, n: int, gens: dict[Perm, dict[int, int]]) -> dict[Perm, dict[int, int]]:
    """Extend an action given on some permutations to the group they generate."""
    ident = perm_identity(n)
    full: dict[Perm, dict[int, int]] = {ident: {i: i for i in range(size)}}
    frontier = [ident]
    while frontier:
        nxt = []
        for s in frontier:
            for t, tab in gens.items():
                st = perm_compose(s, t)
                if st not in full:
                    full[st] = {i: tab[full[s][i]] for i in range(size)}
                    nxt.append(st)
        frontier = nxt
    return full


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    operad: str
    max_arity: int
    violations: list[dict] = field(default_factory=list)
    checked: dict[str, int] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "operad": self.operad,
            "max_arity": self.max_arity,
            "status": "pass" if self.valid else "fail",
            "checked": dict(sorted(self.checked.items())),
            "violations": self.violations,
        }


def validate(op: TruncatedOperad, full_equivariance: bool = True) -> ValidationReport:
    """Check the operad axioms on every in-range instance.

    Equivariance in the outer slot is checked for every permutation when
    ``full_equivariance`` is set, otherwise for adjacent transpositions only
    (which suffices once the action laws hold).
    """
    rep = ValidationReport(op.name, op.max_arity)
    N = op.max_arity
    lab = op.qualified_label

    def fail(kind: str, **info) -> None:
        rep.violations.append({"axiom": kind, **info})

    def safe(fn, *a):
        try:
            return fn(*a)
        except OperadError as exc:
            return exc

    # action laws
    n_act = 0
    for n in range(N + 1):
        for x in op.elements(n):
            if safe(op.act, x, perm_identity(n)) != x:
                fail("action-identity", element=lab(x))
            for s in all_perms(n) if n <= 5 else ():
                for i in range(1, n):
                    t = adjacent_transposition(n, i)
                    n_act += 1
                    lhs = safe(op.act, safe(op.act, x, s), t)
                    rhs = safe(op.act, x, perm_compose(s, t))
                    if lhs != rhs:
                        fail("action-composition", element=lab(x), sigma=list(s), tau=list(t))
    rep.checked["action"] = n_act

    # unit laws
    n_unit = 0
    for n in range(N + 1):
        for x in op.elements(n):
            n_unit += 2
            if safe(op.gamma, op.unit, (x,)) != x:
                fail("left-unit", element=lab(x))
            if safe(op.gamma, x, (op.unit,) * n) != x:
                fail("right-unit", element=lab(x))
    rep.checked["unit"] = n_unit

    # associativity: gamma(gamma(c; d); e) = gamma(c; gamma(d_i; e_block_i))
    n_assoc = 0
    for c, ds in _gamma_domain(op):
        mid = sum(d.arity for d in ds)
        inner = safe(op.gamma, c, ds)
        for earities in _compositions_bounded(mid, N):
            for es in itertools.product(*[op.elements(a) for a in earities]):
                n_assoc += 1
                lhs = safe(op.gamma, inner, es) if isinstance(inner, El) else inner
                blocks = []
                pos = 0
                for d in ds:
                    blocks.append(safe(op.gamma, d, es[pos:pos + d.arity]))
                    pos += d.arity
                rhs = (safe(op.gamma, c, tuple(blocks))
                       if all(isinstance(b, El) for b in blocks) else None)
                if lhs != rhs:
                    fail("associativity", outer=lab(c), middle=[lab(d) for d in ds],
                         inner=[lab(e) for e in es])
    rep.checked["associativity"] = n_assoc

    # equivariance
    n_eq = 0
    for c, ds in _gamma_domain(op):
        k = c.arity
        sizes = [d.arity for d in ds]
        sigmas = all_perms(k) if full_equivariance else [
            adjacent_transposition(k, i) for i in range(1, k)]
        base = safe(op.gamma, c, ds)
        for s in sigmas:
            n_eq += 1
            lhs = safe(op.gamma, safe(op.act, c, s), ds)
            inv = perm_inverse(s)
            permuted = tuple(ds[inv[i] - 1] for i in range(k))
            inner = safe(op.gamma, c, permuted)
            rhs = safe(op.act, inner, block_permutation(s, sizes)) if isinstance(inner, El) else inner
            if lhs != rhs:
                fail("equivariance-outer", outer=lab(c), args=[lab(d) for d in ds], sigma=list(s))
        for j, d in enumerate(ds):
            for i in range(1, d.arity):
                t = adjacent_transposition(d.arity, i)
                n_eq += 1
                moved = list(ds)
                moved[j] = safe(op.act, d, t)
                lhs = safe(op.gamma, c, tuple(moved))
                pieces = [perm_identity(a) for a in sizes]
                pieces[j] = t
                rhs = safe(op.act, base, block_sum(pieces)) if isinstance(base, El) else base
                if lhs != rhs:
                    fail("equivariance-inner", outer=lab(c), args=[lab(x) for x in ds],
                         slot=j + 1, tau=list(t))
    rep.checked["equivariance"] = n_eq
    return rep


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class OperadMorphism:
    source: TruncatedOperad
    target: TruncatedOperad
    maps: dict[El, El]

    def __call__(self, x: El) -> El:
        return self.maps[x]

    def validate(self) -> list[dict]:
        src, tgt = self.source, self.target
        issues = []
        if self(src.unit) != tgt.unit:
            issues.append({"law": "unit"})
        N = min(src.max_arity, tgt.max_arity)
        for c, ds in _gamma_domain(src):
            if sum(d.arity for d in ds) > N:
                continue
            if self(src.gamma(c, ds)) != tgt.gamma(self(c), tuple(self(d) for d in ds)):
                issues.append({"law": "gamma", "outer": src.label(c)})
        for n in range(N + 1):
            for x in src.elements(n):
                for i in range(1, n):
                    t = adjacent_transposition(n, i)
                    if self(src.act(x, t)) != tgt.act(self(x), t):
                        issues.append({"law": "equivariance", "element": src.label(x)})
        return issues


def terminal_morphism(op: TruncatedOperad) -> OperadMorphism:
    """The constant maps P -> Com."""
    com = builtin("com", op.max_arity)
    return OperadMorphism(op, com, {x: El(x.arity, 0) for x in op.all_elements()})


def identity_morphism(op: TruncatedOperad) -> OperadMorphism:
    return OperadMorphism(op, op, {x: x for x in op.all_elements()})


# ---------------------------------------------------------------------------
# formal decorations


class Sym(NamedTuple):
    arity: int
    text: str


class SymbolicOperad:
    """Free formal composition used to display composites literally.

    Only the interface used by decorated-map composition is provided; no
    axioms are imposed, so equality is textual.
    """

    name = "symbolic"

    def __init__(self, max_arity: int = 64) -> None:
        self.max_arity = max_arity
        self.unit = Sym(1, "1")
        self.zero = Sym(0, "0")

    def gamma(self, theta: Sym, args: Sequence[Sym]) -> Sym:
        args = tuple(args)
        if theta == self.unit and len(args) == 1:
            return args[0]
        if args and all(a == self.unit for a in args):
            return theta
        body = ",".join(a.text for a in args)
        sep = "," if len(args) == 1 else ";"
        text = f"γ({theta.text}{sep}{body})" if args else f"γ({theta.text})"
        return Sym(sum(a.arity for a in args), text)

    def act(self, theta: Sym, sigma: Perm) -> Sym:
        if tuple(sigma) == perm_identity(len(sigma)):
            return theta
        return Sym(theta.arity, f"{theta.text}·({','.join(map(str, sigma))})")

    def label(self, x: Sym) -> str:
        return x.text
