"""Exact integer linear algebra over Z.

Matrices act on column vectors: a map Z^n -> Z^m is an m x n matrix.
Subgroups given by generators use row vectors (``row-span``).
All arithmetic uses Python integers, so nothing overflows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Sequence


class ContainmentViolation(ValueError):
    """Raised when a claimed subgroup is not contained in the ambient one."""


@dataclass(frozen=True)
class ZMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # construction -------------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> ZMatrix:
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("column count needed for an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> ZMatrix:
        return cls.from_rows([list(c) for c in columns], cols=rows).T

    @classmethod
    def zeros(cls, rows: int, cols: int) -> ZMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> ZMatrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> ZMatrix:
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            out[i][i] = v
        return cls.from_rows(out, cols)

    # access ---------------------------------------------------------------
    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> tuple[int, ...]:
        return self.entries[j::self.cols] if self.cols else ()

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def to_columns(self) -> list[list[int]]:
        return [list(self.column(j)) for j in range(self.cols)]

    @property
    def T(self) -> ZMatrix:
        return ZMatrix(self.cols, self.rows, tuple(
            self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)
        ))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == ZMatrix.identity(self.rows)

    # arithmetic -------------------------------------------------------------
    def __matmul__(self, other: ZMatrix) -> ZMatrix:
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.to_columns()
        out = []
        for i in range(self.rows):
            r = self.row(i)
            for c in ocols:
                out.append(sum(a * b for a, b in zip(r, c) if a and b))
        return ZMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(
            sum(a * b for a, b in zip(self.row(i), vector) if a and b) for i in range(self.rows)
        )

    def __add__(self, other: ZMatrix) -> ZMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return ZMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: ZMatrix) -> ZMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return ZMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> ZMatrix:
        return ZMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> ZMatrix:
        return ZMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def __rmul__(self, k: int) -> ZMatrix:
        return self.scale(k)

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def is_unimodular(self) -> bool:
        return self.rows == self.cols and abs(self.det()) == 1

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> ZMatrix:
        rows, cols = list(rows), list(cols)
        return ZMatrix(len(rows), len(cols), tuple(self[i, j] for i in rows for j in cols))

    def __repr__(self) -> str:
        return f"ZMatrix({self.to_rows()!r})" if self.rows else f"ZMatrix(0x{self.cols})"


def hstack(blocks: Sequence[ZMatrix], rows: int | None = None) -> ZMatrix:
    if not blocks:
        return ZMatrix.zeros(rows or 0, 0)
    r = blocks[0].rows
    if any(b.rows != r for b in blocks):
        raise ValueError("hstack row mismatch")
    out = [sum((list(b.row(i)) for b in blocks), []) for i in range(r)]
    return ZMatrix.from_rows(out, sum(b.cols for b in blocks))


def vstack(blocks: Sequence[ZMatrix], cols: int | None = None) -> ZMatrix:
    if not blocks:
        return ZMatrix.zeros(0, cols or 0)
    c = blocks[0].cols
    if any(b.cols != c for b in blocks):
        raise ValueError("vstack column mismatch")
    return ZMatrix(sum(b.rows for b in blocks), c, sum((b.entries for b in blocks), ()))


def block_diag(blocks: Sequence[ZMatrix]) -> ZMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out[r0 + i][c0:c0 + b.cols] = b.row(i)
        r0 += b.rows
        c0 += b.cols
    return ZMatrix.from_rows(out, cols)


# ---------------------------------------------------------------------------
# echelon forms


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _echelon(a: list[list[int]], ncols: int, track: list[list[int]] | None) -> list[int]:
    """In-place Hermite row reduction; returns pivot columns.

    Rows are combined with unimodular 2x2 steps; ``track`` receives the same
    row operations so that ``track @ original == a`` at the end.
    """
    pivots: list[int] = []
    r = 0
    nrows = len(a)
    for c in range(ncols):
        if r == nrows:
            break
        nz = [i for i in range(r, nrows) if a[i][c]]
        if not nz:
            continue
        best = min(nz, key=lambda i: abs(a[i][c]))
        if best != r:
            a[r], a[best] = a[best], a[r]
            if track is not None:
                track[r], track[best] = track[best], track[r]
        for i in range(r + 1, nrows):
            if not a[i][c]:
                continue
            p, q = a[r][c], a[i][c]
            if q % p == 0:
                k = q // p
                ai, ar = a[i], a[r]
                for j in range(c, ncols):
                    if ar[j]:
                        ai[j] -= k * ar[j]
                if track is not None:
                    ti, tr = track[i], track[r]
                    for j in range(len(tr)):
                        if tr[j]:
                            ti[j] -= k * tr[j]
                continue
            g, x, y = _xgcd(p, q)
            u, v = -q // g, p // g
            ar, ai = a[r], a[i]
            a[r] = [x * s + y * t for s, t in zip(ar, ai)]
            a[i] = [u * s + v * t for s, t in zip(ar, ai)]
            if track is not None:
                tr, ti = track[r], track[i]
                track[r] = [x * s + y * t for s, t in zip(tr, ti)]
                track[i] = [u * s + v * t for s, t in zip(tr, ti)]
        if a[r][c] < 0:
            a[r] = [-s for s in a[r]]
            if track is not None:
                track[r] = [-s for s in track[r]]
        p = a[r][c]
        for i in range(r):
            if a[i][c]:
                k = a[i][c] // p
                if k:
                    a[i] = [s - k * t for s, t in zip(a[i], a[r])]
                    if track is not None:
                        track[i] = [s - k * t for s, t in zip(track[i], track[r])]
        pivots.append(c)
        r += 1
    return pivots


def hermite_normal_form(m: ZMatrix) -> tuple[ZMatrix, ZMatrix]:
    """Row-style Hermite form: returns (H, U) with U unimodular and H = U @ m."""
    a = m.to_rows()
    u = ZMatrix.identity(m.rows).to_rows()
    _echelon(a, m.cols, u)
    return ZMatrix.from_rows(a, m.cols), ZMatrix.from_rows(u, m.rows)


def row_basis(m: ZMatrix) -> ZMatrix:
    """A basis (as rows, Hermite reduced) of the row span of m."""
    a = m.to_rows()
    piv = _echelon(a, m.cols, None)
    return ZMatrix.from_rows(a[:len(piv)], m.cols)


def rank(m: ZMatrix) -> int:
    return row_basis(m).rows


def smith_normal_form(m: ZMatrix) -> tuple[ZMatrix, ZMatrix, ZMatrix]:
    """Return (U, D, V) with U, V unimodular and D = U @ m @ V in Smith form."""
    nr, nc = m.rows, m.cols
    a = m.to_rows()
    u = ZMatrix.identity(nr).to_rows()
    v = ZMatrix.identity(nc).to_rows()  # kept as rows of V^T

    def col_op(j: int, k: int, x: int, y: int, s: int, t: int) -> None:
        # (col_j, col_k) <- (x col_j + y col_k, s col_j + t col_k)
        for row in a:
            row[j], row[k] = x * row[j] + y * row[k], s * row[j] + t * row[k]
        vj, vk = v[j], v[k]
        v[j] = [x * p + y * q for p, q in zip(vj, vk)]
        v[k] = [s * p + t * q for p, q in zip(vj, vk)]

    def row_op(i: int, k: int, x: int, y: int, s: int, t: int) -> None:
        ai, ak = a[i], a[k]
        a[i] = [x * p + y * q for p, q in zip(ai, ak)]
        a[k] = [s * p + t * q for p, q in zip(ai, ak)]
        ui, uk = u[i], u[k]
        u[i] = [x * p + y * q for p, q in zip(ui, uk)]
        u[k] = [s * p + t * q for p, q in zip(ui, uk)]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
        if j != t:
            for row in a:
                row[t], row[j] = row[j], row[t]
            v[t], v[j] = v[j], v[t]
        while True:
            done = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    p, q = a[t][t], a[i][t]
                    if q % p == 0:
                        k = q // p
                        a[i] = [x - k * y for x, y in zip(a[i], a[t])]
                        u[i] = [x - k * y for x, y in zip(u[i], u[t])]
                    else:
                        g, x, y = _xgcd(p, q)
                        row_op(t, i, x, y, -q // g, p // g)
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    p, q = a[t][t], a[t][j]
                    if q % p == 0:
                        k = q // p
                        for row in a:
                            row[j] -= k * row[t]
                        v[j] = [x - k * y for x, y in zip(v[j], v[t])]
                    else:
                        g, x, y = _xgcd(p, q)
                        col_op(t, j, x, y, -q // g, p // g)
                        done = False
            if not done:
                continue
            p = a[t][t]
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (
        ZMatrix.from_rows(u, nr),
        ZMatrix.from_rows(a, nc),
        ZMatrix.from_rows(v, nc).T,
    )


def invariant_factors(m: ZMatrix) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d[i, i] for i in range(min(d.rows, d.cols)) if d[i, i]]


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FgAbGroup:
    """Isomorphism class Z^rank + Z/d_1 + ... with d_1 | d_2 | ..."""

    rank: int
    torsion: tuple[int, ...] = ()
    basis_labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if self.rank < 0:
            raise ValueError("negative rank")
        for d in self.torsion:
            if d < 2:
                raise ValueError("torsion entries must be >= 2")
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError(f"invariant factors must divide: {d} !| {e}")

    @classmethod
    def from_factors(cls, rank: int, factors: Iterable[int]) -> FgAbGroup:
        """Normalize arbitrary cyclic orders to invariant factors."""
        diag = [f for f in factors if f not in (0, 1, -1)]
        d = invariant_factors(ZMatrix.diag([abs(x) for x in diag])) if diag else []
        return cls(rank, tuple(x for x in d if x > 1))

    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def order(self) -> int | None:
        if self.rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def to_json(self) -> dict:
        return {"rank": self.rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"


def cokernel(m: ZMatrix) -> FgAbGroup:
    """Z^rows / (column span of m)."""
    d = invariant_factors(m)
    return FgAbGroup(m.rows - len(d), tuple(x for x in d if x > 1))


def kernel(m: ZMatrix) -> ZMatrix:
    """Rows form a basis of {x in Z^cols : m x = 0}."""
    a = m.T.to_rows()
    u = ZMatrix.identity(m.cols).to_rows()
    piv = _echelon(a, m.rows, u)
    basis = u[len(piv):]
    if basis:
        basis = ZMatrix.from_rows(basis, m.cols).to_rows()
        b2 = [list(r) for r in basis]
        _echelon(b2, m.cols, None)
        basis = [r for r in b2 if any(r)]
    return ZMatrix.from_rows(basis, m.cols)


def image(m: ZMatrix) -> ZMatrix:
    """Rows form a basis of the column span of m."""
    return row_basis(m.T)


def solve_rows(basis: ZMatrix, target: Sequence[int]) -> tuple[int, ...] | None:
    """Integer coefficients c with c @ basis = target, or None.

    ``basis`` rows need not be independent; any solution is returned.
    """
    if basis.rows == 0:
        return tuple() if not any(target) else None
    aug = [list(r) + [1 if i == j else 0 for j in range(basis.rows)] for i, r in enumerate(basis.to_rows())]
    n = basis.cols
    a = [r[:n] for r in aug]
    track = [r[n:] for r in aug]
    piv = _echelon(a, n, track)
    rest = list(target)
    coeffs = [0] * basis.rows
    for r, c in enumerate(piv):
        if rest[c] % a[r][c]:
            return None
        k = rest[c] // a[r][c]
        if k:
            rest = [x - k * y for x, y in zip(rest, a[r])]
            coeffs = [x + k * y for x, y in zip(coeffs, track[r])]
    if any(rest):
        return None
    return tuple(coeffs)


def in_row_span(basis: ZMatrix, target: Sequence[int]) -> bool:
    return solve_rows(basis, target) is not None


def coordinates(basis: ZMatrix, vectors: ZMatrix) -> ZMatrix:
    """Coordinates of each row of ``vectors`` in the rows of ``basis``.

    Raises ContainmentViolation when some row is not in the span.
    """
    out = []
    for i in range(vectors.rows):
        c = solve_rows(basis, vectors.row(i))
        if c is None:
            raise ContainmentViolation(f"row {i} is not in the span")
        out.append(c)
    return ZMatrix.from_rows(out, basis.rows)


def spans_equal(a: ZMatrix, b: ZMatrix) -> bool:
    return row_basis(a) == row_basis(b)


def subquotient(ambient_rank: int, sub: ZMatrix, bigger: ZMatrix) -> FgAbGroup:
    """Isomorphism class of rowspan(bigger) / rowspan(sub) inside Z^ambient_rank."""
    for m in (sub, bigger):
        if m.cols != ambient_rank:
            raise ValueError("generator length differs from ambient rank")
    basis = row_basis(bigger)
    coords = coordinates(basis, sub)
    return cokernel(coords.T)


@dataclass(frozen=True)
class Presentation:
    """The group Z^generators / rowspan(relations)."""

    generators: int
    relations: ZMatrix

    def __post_init__(self) -> None:
        if self.relations.cols != self.generators:
            raise ValueError("relation length differs from generator count")

    @classmethod
    def free(cls, n: int) -> Presentation:
        return cls(n, ZMatrix.zeros(0, n))

    def group(self) -> FgAbGroup:
        return cokernel(self.relations.T)

    def is_free_presentation(self) -> bool:
        return self.relations.is_zero()

    def is_zero_element(self, v: Sequence[int]) -> bool:
        return in_row_span(self.relations, v)

    def map_is_zero(self, m: ZMatrix) -> bool:
        """Whether m (acting on generators) is zero into this group."""
        return all(self.is_zero_element(c) for c in m.to_columns())

    def maps_equal(self, a: ZMatrix, b: ZMatrix) -> bool:
        return self.map_is_zero(a - b)


def hom_kernel(f: ZMatrix, source: Presentation, target: Presentation) -> ZMatrix:
    """Generators (rows, source coordinates) of ker(f: source -> target).

    Elements x with f x in rowspan(target.relations), together with the
    source relations, which lie in the kernel trivially.
    """
    s, t = source.generators, target.generators
    if f.shape != (t, s):
        raise ValueError("map shape does not match presentations")
    rel = target.relations
    # solve f x - R^T y = 0
    big = hstack([f, -rel.T], rows=t) if rel.rows else f
    k = kernel(big)
    gens = [r[:s] for r in k.to_rows()] + source.relations.to_rows()
    gens = [g for g in gens if any(g)]
    return row_basis(ZMatrix.from_rows(gens, s)) if gens else ZMatrix.zeros(0, s)


def is_injective(f: ZMatrix, source: Presentation, target: Presentation) -> bool:
    k = hom_kernel(f, source, target)
    return all(source.is_zero_element(r) for r in k.to_rows())


def is_surjective(f: ZMatrix, source: Presentation, target: Presentation) -> bool:
    gens = vstack([f.T, target.relations], cols=target.generators)
    return spans_equal(gens, ZMatrix.identity(target.generators))


def is_isomorphism(f: ZMatrix, source: Presentation, target: Presentation) -> bool:
    return is_injective(f, source, target) and is_surjective(f, source, target)


def rank_mod_p(m: ZMatrix, p: int = 32749) -> int:
    """Rank of m over F_p; a lower bound for the rank over Q."""
    import numpy as np

    if m.rows == 0 or m.cols == 0:
        return 0
    a = np.array(m.to_rows(), dtype=np.int64) % p
    r = 0
    rows, cols = a.shape
    for c in range(cols):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        r += 1
        if r == rows:
            break
    return r
