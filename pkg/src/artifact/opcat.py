"""The categories S(P), Gamma(P) and Omega(P) of operad-decorated maps.

A morphism n -> m stores the images of 1..n (0 is allowed for the pointed
flavor, whose basepoint is implicit) and one operad element per target point
1..m whose arity is the size of the fiber over that point.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from math import prod
from typing import Any, Iterable, Sequence

from .errors import ArityOverflow, BudgetExceeded, FlavorMismatch
from .operad import El, OperadMorphism, Perm, TruncatedOperad, builtin, from_json as operad_from_json

S, GAMMA, OMEGA = "S", "Gamma", "Omega"
FLAVORS = (S, GAMMA, OMEGA)
_FLAVOR_NAMES = {"s": S, "gamma": GAMMA, "omega": OMEGA}

DEFAULT_BUDGET = 200_000


def flavor_of(name: str) -> str:
    try:
        return _FLAVOR_NAMES[name.lower()]
    except KeyError:
        raise FlavorMismatch(f"unknown flavor {name!r}") from None


@dataclass(frozen=True)
class DecoratedMap:
    flavor: str
    source_size: int
    target_size: int
    map: tuple[int, ...]
    decoration: tuple[Any, ...]
    operad: Any = field(compare=False, hash=False, repr=False, default=None)

    def __post_init__(self) -> None:
        if self.flavor not in FLAVORS:
            raise FlavorMismatch(f"unknown flavor {self.flavor!r}")
        if len(self.map) != self.source_size:
            raise ValueError("map length differs from source size")
        if len(self.decoration) != self.target_size:
            raise ValueError("one decoration per target point is required")
        low = 0 if self.flavor == GAMMA else 1
        for y in self.map:
            if not low <= y <= self.target_size:
                raise ValueError(f"image {y} outside the target")
        counts = [0] * (self.target_size + 1)
        for y in self.map:
            counts[y] += 1
        for y, w in enumerate(self.decoration, start=1):
            if w.arity != counts[y]:
                raise ValueError(f"decoration over {y} has arity {w.arity}, fiber has {counts[y]}")
        if self.flavor == OMEGA and any(c == 0 for c in counts[1:]):
            raise FlavorMismatch("Omega morphisms are surjective")

    def fiber(self, y: int) -> tuple[int, ...]:
        return tuple(x for x, fx in enumerate(self.map, start=1) if fx == y)

    def is_surjective(self) -> bool:
        return set(range(1, self.target_size + 1)) <= set(self.map)

    def with_flavor(self, flavor: str) -> DecoratedMap:
        return DecoratedMap(flavor, self.source_size, self.target_size, self.map, self.decoration, self.operad)

    def labels(self) -> list[str]:
        return [self.operad.label(w) for w in self.decoration]

    def __str__(self) -> str:
        dec = ", ".join(self.labels())
        return f"{self.flavor}[{self.source_size}->{self.target_size}] {list(self.map)} ({dec})"

    def to_json(self) -> dict:
        mp = [0, *self.map] if self.flavor == GAMMA else list(self.map)
        return {
            "flavor": self.flavor.lower(),
            "operad": self.operad.name,
            "source": self.source_size,
            "target": self.target_size,
            "map": mp,
            "decoration": {str(y): self.operad.label(w) for y, w in enumerate(self.decoration, start=1)},
        }


def morphism_from_json(data: dict | str, operad: TruncatedOperad | None = None) -> DecoratedMap:
    """Parse the morphism format; the operad is a built-in name unless given."""
    if isinstance(data, str):
        data = json.loads(data)
    flavor = flavor_of(data["flavor"])
    mp = list(data["map"])
    if flavor == GAMMA:
        if not mp or mp[0] != 0:
            raise ValueError("pointed maps list the basepoint image 0 first")
        mp = mp[1:]
    target = int(data.get("target", max(mp, default=0)))
    if operad is None:
        operad = builtin(data["operad"], max(2, max((mp.count(y) for y in range(1, target + 1)), default=1)))
    dec_labels = data.get("decoration", {})
    dec = []
    for y in range(1, target + 1):
        arity = mp.count(y)
        lab = dec_labels.get(str(y))
        dec.append(operad.unit if lab is None and arity == 1 else operad.parse(lab, arity) if lab is not None
                   else _default_element(operad, arity))
    return DecoratedMap(flavor, len(mp), target, tuple(mp), tuple(dec), operad)


def _default_element(op, arity: int):
    if arity == 0:
        return op.zero
    if op.size(arity) == 1:
        return op.elements(arity)[0]
    raise ValueError(f"decoration of arity {arity} must be given explicitly")


def make(flavor: str, op, mp: Sequence[int], decoration: Sequence, target: int | None = None) -> DecoratedMap:
    mp = tuple(mp)
    if target is None:
        target = len(decoration)
    return DecoratedMap(flavor, len(mp), target, mp, tuple(decoration), op)


def plain(flavor: str, op, mp: Sequence[int], target: int) -> DecoratedMap:
    """A map decorated by 1 on singleton fibers, 0 on empty ones, the unique element otherwise."""
    mp = tuple(mp)
    dec = []
    for y in range(1, target + 1):
        k = mp.count(y)
        dec.append(op.unit if k == 1 else _default_element(op, k))
    return DecoratedMap(flavor, len(mp), target, mp, tuple(dec), op)


# ---------------------------------------------------------------------------
# composition


def block_ordering(inner: DecoratedMap, outer: DecoratedMap, i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The orderings A_i (natural) and B_i (ordered union) of the fiber over i."""
    js = outer.fiber(i)
    b = tuple(x for j in js for x in inner.fiber(j))
    return tuple(sorted(b)), b


def block_permutation(inner: DecoratedMap, outer: DecoratedMap, i: int) -> Perm:
    """sigma_i with sigma_i(k) = l exactly when y_l = x_k."""
    a, b = block_ordering(inner, outer, i)
    pos = {y: l for l, y in enumerate(b, start=1)}
    return tuple(pos[x] for x in a)


def compose(outer: DecoratedMap, inner: DecoratedMap) -> DecoratedMap:
    """outer o inner with the block-permutation rule."""
    if outer.flavor != inner.flavor:
        raise FlavorMismatch(f"cannot compose {outer.flavor} after {inner.flavor}")
    if inner.target_size != outer.source_size:
        raise FlavorMismatch("target of the inner map is not the source of the outer map")
    op = outer.operad
    mp = tuple(0 if y == 0 else outer.map[y - 1] for y in inner.map)
    dec = []
    for i in range(1, outer.target_size + 1):
        js = outer.fiber(i)
        g = op.gamma(outer.decoration[i - 1], [inner.decoration[j - 1] for j in js])
        dec.append(op.act(g, block_permutation(inner, outer, i)))
    return DecoratedMap(outer.flavor, inner.source_size, outer.target_size, mp, tuple(dec), op)


def compose_all(*maps: DecoratedMap) -> DecoratedMap:
    """compose_all(a, b, c) = a o b o c."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def identity(flavor: str, op, n: int) -> DecoratedMap:
    return DecoratedMap(flavor, n, n, tuple(range(1, n + 1)), (op.unit,) * n, op)


def add_basepoint(m: DecoratedMap) -> DecoratedMap:
    """The functor j: S(P) -> Gamma(P); Omega maps are included first."""
    if m.flavor == GAMMA:
        raise FlavorMismatch("already pointed")
    return m.with_flavor(GAMMA)


def include_omega(m: DecoratedMap) -> DecoratedMap:
    """The inclusion iota: Omega(P) -> S(P)."""
    if m.flavor != OMEGA:
        raise FlavorMismatch("iota is defined on Omega morphisms")
    return m.with_flavor(S)


def push_forward(phi: OperadMorphism, m: DecoratedMap) -> DecoratedMap:
    """Gamma(phi), Omega(phi), S(phi) on one morphism."""
    return DecoratedMap(m.flavor, m.source_size, m.target_size, m.map,
                        tuple(phi(w) for w in m.decoration), phi.target)


# ---------------------------------------------------------------------------
# hom-sets


def _maps(flavor: str, m: int, n: int) -> Iterable[tuple[int, ...]]:
    low = 0 if flavor == GAMMA else 1
    for mp in itertools.product(range(low, n + 1), repeat=m):
        if flavor == OMEGA and len(set(mp)) != n:
            continue
        yield mp


def hom_size(flavor: str, op, m: int, n: int) -> int:
    total = 0
    for mp in _maps(flavor, m, n):
        sizes = [mp.count(y) for y in range(1, n + 1)]
        if max(sizes, default=0) > op.max_arity:
            raise ArityOverflow(f"a fiber of size {max(sizes)} exceeds the truncation")
        total += prod(op.size(k) for k in sizes)
    return total


def enumerate_hom(flavor: str, op, m: int, n: int, budget: int = DEFAULT_BUDGET) -> list[DecoratedMap]:
    """All morphisms m -> n of the given flavor, in a fixed order."""
    if flavor == OMEGA and n > m:
        return []
    if (n + 1) ** m > budget * 16:
        raise BudgetExceeded(f"at least {(n + 1) ** m} underlying maps", (n + 1) ** m)
    count = hom_size(flavor, op, m, n)
    if count > budget:
        raise BudgetExceeded(f"hom-set has {count} elements, budget {budget}", count)
    out = []
    for mp in _maps(flavor, m, n):
        pools = [op.elements(mp.count(y)) for y in range(1, n + 1)]
        for dec in itertools.product(*pools):
            out.append(DecoratedMap(flavor, m, n, mp, tuple(dec), op))
    return out


# ---------------------------------------------------------------------------
# restriction and decomposition


def restrict_to_union(m: DecoratedMap, block: Iterable[int]) -> tuple[DecoratedMap, DecoratedMap]:
    """Split along target = block | complement, relabeling both parts in order."""
    if m.flavor == GAMMA:
        raise FlavorMismatch("restriction along a union is stated for unpointed maps")
    t1 = sorted(set(block))
    t2 = [y for y in range(1, m.target_size + 1) if y not in set(t1)]
    return _restrict_target(m, t1), _restrict_target(m, t2)


def _restrict_target(m: DecoratedMap, targets: list[int]) -> DecoratedMap:
    pos = {y: k for k, y in enumerate(targets, start=1)}
    src = [x for x in range(1, m.source_size + 1) if m.map[x - 1] in pos]
    mp = tuple(pos[m.map[x - 1]] for x in src)
    dec = tuple(m.decoration[y - 1] for y in targets)
    return DecoratedMap(m.flavor, len(src), len(targets), mp, dec, m.operad)


def reassemble(m1: DecoratedMap, m2: DecoratedMap, source_block: Sequence[int],
               target_block: Sequence[int]) -> DecoratedMap:
    """Inverse of restrict_to_union given where the first parts sit."""
    n = m1.source_size + m2.source_size
    t = m1.target_size + m2.target_size
    sb = sorted(source_block)
    tb = sorted(target_block)
    s2 = [x for x in range(1, n + 1) if x not in set(sb)]
    t2 = [y for y in range(1, t + 1) if y not in set(tb)]
    mp = [0] * n
    for k, x in enumerate(sb):
        mp[x - 1] = tb[m1.map[k] - 1]
    for k, x in enumerate(s2):
        mp[x - 1] = t2[m2.map[k] - 1]
    dec: list = [None] * t
    for k, y in enumerate(tb):
        dec[y - 1] = m1.decoration[k]
    for k, y in enumerate(t2):
        dec[y - 1] = m2.decoration[k]
    return DecoratedMap(m1.flavor, n, t, tuple(mp), tuple(dec), m1.operad)


def disjoint_union(m1: DecoratedMap, m2: DecoratedMap) -> DecoratedMap:
    """The monoidal sum: sources and targets are concatenated."""
    if m1.flavor != m2.flavor:
        raise FlavorMismatch("flavors differ")
    off = m1.target_size
    mp = m1.map + tuple(0 if y == 0 else y + off for y in m2.map)
    return DecoratedMap(m1.flavor, m1.source_size + m2.source_size, m1.target_size + m2.target_size,
                        mp, m1.decoration + m2.decoration, m1.operad)


def inclusion(op, subset: Iterable[int], n: int, flavor: str = S) -> DecoratedMap:
    """(i, omega^i): |A'| -> n with 1 over the image and 0 elsewhere."""
    sub = sorted(set(subset))
    dec = tuple(op.unit if y in set(sub) else op.zero for y in range(1, n + 1))
    return DecoratedMap(flavor, len(sub), n, tuple(sub), dec, op)


def restrict_to_subset(m: DecoratedMap, subset: Iterable[int]) -> DecoratedMap:
    """m o (i, omega^i); Omega inputs come back in Omega when still surjective."""
    base = m.with_flavor(S) if m.flavor == OMEGA else m
    out = compose(base, inclusion(m.operad, subset, m.source_size, base.flavor))
    if m.flavor == OMEGA and out.is_surjective():
        return out.with_flavor(OMEGA)
    return out


# ---------------------------------------------------------------------------
# named generators of Omega(P)


def tau(op, n: int, i: int, flavor: str = OMEGA) -> DecoratedMap:
    """(tau_i^n, 1^n)."""
    mp = list(range(1, n + 1))
    mp[i - 1], mp[i] = mp[i], mp[i - 1]
    return DecoratedMap(flavor, n, n, tuple(mp), (op.unit,) * n, op)


def collapse(op, n: int, i: int, k: int, omega=None, flavor: str = OMEGA) -> DecoratedMap:
    """(s_i^{n,n-k}, omega): merges i..i+k into i; k = 0 gives an identity-type map."""
    if not (0 <= k < n or (k == 0 and n == 0)) or not 1 <= i <= n - k:
        raise ValueError(f"no collapse s_{i}^({n},{n - k})")
    mp = tuple(x if x < i else (i if x <= i + k else x - k) for x in range(1, n + 1))
    if omega is None:
        omega = op.unit if k == 0 else _default_element(op, k + 1)
    dec = tuple(omega if y == i else op.unit for y in range(1, n - k + 1))
    return DecoratedMap(flavor, n, n - k, mp, dec, op)


def decorated_identity(op, alphas: Sequence, flavor: str = OMEGA) -> DecoratedMap:
    """(Id_n, (alpha_1..alpha_n))."""
    n = len(alphas)
    return DecoratedMap(flavor, n, n, tuple(range(1, n + 1)), tuple(alphas), op)


def s_map(n: int, i: int) -> tuple[int, ...]:
    """The horizontal surjection s_i^n: n -> n-1 as a plain map."""
    return tuple(x if x <= i else x - 1 for x in range(1, n + 1))


def tau_map(n: int, i: int) -> tuple[int, ...]:
    mp = list(range(1, n + 1))
    mp[i - 1], mp[i] = mp[i], mp[i - 1]
    return tuple(mp)


def compose_maps(g: Sequence[int], f: Sequence[int]) -> tuple[int, ...]:
    """g o f for plain maps given as image tuples (0 is absorbing)."""
    return tuple(0 if y == 0 else g[y - 1] for y in f)


def sorting_permutation(mp: Sequence[int]) -> tuple[int, ...]:
    """A bijection pi with mp o pi^{-1} monotone: pi(x) is the rank of x by (mp(x), x)."""
    order = sorted(range(1, len(mp) + 1), key=lambda x: (mp[x - 1], x))
    pi = [0] * len(mp)
    for r, x in enumerate(order, start=1):
        pi[x - 1] = r
    return tuple(pi)


def adjacent_word(p: Sequence[int]) -> list[int]:
    """Indices i with p = tau_{i_1} o tau_{i_2} o ... (bubble sort)."""
    arr = list(p)
    word: list[int] = []
    n = len(arr)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                word.append(i + 1)
                changed = True
    # arr = p o t_{w1} o t_{w2} ..., sorted -> p = t_{wk} ... t_{w1}
    return list(reversed(word))
