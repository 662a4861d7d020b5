"""The stratified projective geometry P_q(n) relative to a reference k-space.

A GeometryContext fixes (q, n, k, y) and classifies every subspace u into
its stratum (i, j) with i = dim(u ∩ y) and j = dim(u) - i.  A subspace v
covering u does so in exactly one of two ways: raising i (a slash cover) or
raising j (a backslash cover).  The context also enumerates covers above and
below a subspace and sweeps the same-dimension adjacency of a subspace with
the cover kinds of (u+v over u, u+v over v, u over u∩v, v over u∩v), which
is the geometric data everything downstream consumes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple, Optional

from .gf import (
    Subspace,
    enumerate_subspaces,
    gaussian_binomial,
    qint,
    rank_rows,
    rref_rows,
    sum_rows,
    validate_field_order,
)
from .kernels import rank2, rankp


class Stratum(NamedTuple):
    i: int
    j: int


class CoverKind(enum.Enum):
    SLASH = "/"
    BACKSLASH = "\\"


class AdjacentProfile(NamedTuple):
    """Cover-kind profile of a same-dimension adjacent pair (u, z).

    ``top_u``/``top_z``: True when u+z slash-covers u (resp. z);
    ``bot_u``/``bot_z``: True when u (resp. z) slash-covers u∩z.
    """

    top_u: bool
    top_z: bool
    bot_u: bool
    bot_z: bool


class GeometryContext:
    """Fixed (q, n, k, y) with optional enumeration of dimension bands.

    ``dims`` selects which dimensions are enumerated into ``elements`` /
    ``id_of`` (None means all of 0..n; an empty tuple builds a lazy context
    with no enumeration, enough for local/banded computations).  Immutable
    after construction apart from internal caches; safe to share.
    """

    def __init__(self, q: int, n: int, k: int,
                 y: Subspace | None = None, dims=None):
        validate_field_order(q)
        if not (n > k >= 1):
            raise ValueError(f"need n > k >= 1, got n={n}, k={k}")
        self.q = q
        self.n = n
        self.k = k
        if y is None:
            y = Subspace.coordinate_span(range(k), q, n)
        if y.n != n or y.q != q or y.dim != k:
            raise ValueError("reference subspace must be a k-space of F_q^n")
        self.y = y
        self._canonical_y = y == Subspace.coordinate_span(range(k), q, n)
        self.dims = tuple(range(n + 1)) if dims is None else tuple(sorted(dims))
        if any(d < 0 or d > n for d in self.dims):
            raise ValueError("enumerated dimensions outside [0, n]")

        self.elements: list[Subspace] = []
        self.id_of: dict[Subspace, int] = {}
        self.id_by_rows: dict[tuple, int] = {}
        self.ids_by_dim: dict[int, range] = {}
        for d in self.dims:
            start = len(self.elements)
            for u in enumerate_subspaces(n, d, q):
                self.id_of[u] = len(self.elements)
                self.id_by_rows[u.rows] = self.id_of[u]
                self.elements.append(u)
            self.ids_by_dim[d] = range(start, len(self.elements))

        self._strat_cache: dict[tuple, int] = {}

    # -- strata ----------------------------------------------------------

    def intersection_dim_with_y(self, rows) -> int:
        """dim(u ∩ y) for packed basis rows (cached)."""
        i = self._strat_cache.get(rows)
        if i is not None:
            return i
        d = len(rows)
        if self._canonical_y:
            k = self.k
            if self.q == 2:
                i = d - rank2([r >> k for r in rows])
            else:
                i = d - rankp([r[k:] for r in rows], self.q)
        else:
            i = d + self.k - rank_rows(tuple(rows) + self.y.rows, self.q)
        self._strat_cache[rows] = i
        return i

    def stratum_rows(self, rows) -> Stratum:
        i = self.intersection_dim_with_y(rows)
        return Stratum(i, len(rows) - i)

    def stratum(self, u: Subspace) -> Stratum:
        if u.n != self.n or u.q != self.q:
            raise ValueError("subspace from a different ambient space")
        return self.stratum_rows(u.rows)

    def qint(self, m: int) -> int:
        return qint(m, self.q)

    def has_dim(self, d: int) -> bool:
        return d in self.ids_by_dim

    def subspaces_of_dim(self, d: int):
        if not self.has_dim(d):
            raise ValueError(f"dimension {d} not enumerated in this context")
        return (self.elements[t] for t in self.ids_by_dim[d])

    def ref(self, u: Subspace) -> str:
        """Stable textual reference for a subspace in reports."""
        idx = self.id_of.get(u)
        loc = f"#{idx}" if idx is not None else "-"
        return f"(dim={u.dim}, {loc}, rows={':'.join(u.row_strings())})"

    # -- covers ----------------------------------------------------------

    def superspaces_rows(self, rows):
        """All covers above: canonical bases of the (d+1)-spaces over rows.

        Enumerates one coset representative per cover (representatives are
        supported on the non-pivot columns), so each cover appears once.
        """
        n, q = self.n, self.q
        if q == 2:
            pivmask = 0
            for r in rows:
                pivmask |= r & -r
            free = [j for j in range(n) if not (pivmask >> j) & 1]
            for m in range(1, 1 << len(free)):
                w = 0
                t = 0
                mm = m
                while mm:
                    if mm & 1:
                        w |= 1 << free[t]
                    mm >>= 1
                    t += 1
                yield rref_rows(tuple(rows) + (w,), q), w
        else:
            pivots = {next(t for t, v in enumerate(r) if v) for r in rows}
            free = [j for j in range(n) if j not in pivots]
            for values in product(range(q), repeat=len(free)):
                lead = next((v for v in values if v), 0)
                if lead != 1:  # one normalized representative per line
                    continue
                w = [0] * n
                for j, v in zip(free, values):
                    w[j] = v
                w = tuple(w)
                yield rref_rows(tuple(rows) + (w,), q), w

    def hyperplanes_rows(self, rows):
        """All covers below: canonical bases of the (d-1)-spaces under rows.

        One hyperplane per normalized functional on the coefficient space.
        """
        d = len(rows)
        q = self.q
        if q == 2:
            for a in range(1, 1 << d):
                t = (a & -a).bit_length() - 1
                new = [
                    rows[s] ^ (rows[t] if (a >> s) & 1 else 0)
                    for s in range(d)
                    if s != t
                ]
                yield rref_rows(new, q)
        else:
            n = self.n
            for a in product(range(q), repeat=d):
                lead = next((v for v in a if v), 0)
                if lead != 1:
                    continue
                t = next(s for s, v in enumerate(a) if v)
                new = []
                for s in range(d):
                    if s == t:
                        continue
                    row = tuple(
                        (rows[s][c] - a[s] * rows[t][c]) % q for c in range(n)
                    )
                    new.append(row)
                yield rref_rows(new, q)

    def typed_adjacency(self, zrows):
        """Sweep the same-dimension adjacency of z with cover-kind profiles.

        Yields (u_rows, AdjacentProfile) for every u of the same dimension
        with dim(u ∩ z) = dim(z) - 1.  Each u appears exactly once (it is
        found under the unique hyperplane m = u ∩ z).
        """
        d = len(zrows)
        i_z = self.intersection_dim_with_y(zrows)
        q = self.q
        for mrows in self.hyperplanes_rows(zrows):
            i_m = self.intersection_dim_with_y(mrows)
            bot_z = i_z == i_m + 1
            for urows, w in self.superspaces_rows(mrows):
                if urows == zrows:
                    continue
                i_u = self.intersection_dim_with_y(urows)
                srows = rref_rows(tuple(zrows) + (w,), q)
                i_s = self.intersection_dim_with_y(srows)
                yield urows, AdjacentProfile(
                    i_s == i_u + 1, i_s == i_z + 1, i_u == i_m + 1, bot_z
                )


def classify_stratum(u: Subspace, ctx: GeometryContext) -> Stratum:
    """Stratum (i, j) of u: i = dim(u ∩ y), j = dim(u) - i."""
    return ctx.stratum(u)


def cover_kind(u: Subspace, v: Subspace,
               ctx: GeometryContext) -> Optional[CoverKind]:
    """Slash/Backslash if v covers u, else None."""
    if v.dim != u.dim + 1:
        return None
    if rank_rows(u.rows + v.rows, ctx.q) != v.dim:
        return None  # u not contained in v
    i_u = ctx.intersection_dim_with_y(u.rows)
    i_v = ctx.intersection_dim_with_y(v.rows)
    return CoverKind.SLASH if i_v == i_u + 1 else CoverKind.BACKSLASH


def pair_profile(u: Subspace, z: Subspace,
                 ctx: GeometryContext) -> AdjacentProfile:
    """Cover-kind profile of a same-dimension adjacent pair."""
    from .gf import intersect_rows

    if u.dim != z.dim:
        raise ValueError("pair_profile requires equal dimensions")
    mrows = intersect_rows(u.rows, z.rows, ctx.n, ctx.q)
    if len(mrows) != u.dim - 1:
        raise ValueError("subspaces are not adjacent")
    srows = sum_rows(u.rows, z.rows, ctx.q)
    i_u = ctx.intersection_dim_with_y(u.rows)
    i_z = ctx.intersection_dim_with_y(z.rows)
    i_s = ctx.intersection_dim_with_y(srows)
    i_m = ctx.intersection_dim_with_y(mrows)
    return AdjacentProfile(
        i_s == i_u + 1, i_s == i_z + 1, i_u == i_m + 1, i_z == i_m + 1
    )


@dataclass
class CoverCountViolation:
    element: Subspace
    stratum: Stratum
    observed: tuple[int, int, int, int]
    expected: tuple[int, int, int, int]


@dataclass
class CoverCountReport:
    """Per-element check of the four stratum cover counts.

    For u in stratum (i, j) the expected counts are:
    slash-covers q^j [i] elements, backslash-covers [j] elements,
    slash-covered by [k-i], backslash-covered by q^(k-i) [n-k-j].
    """

    instance: tuple[int, int, int]
    checked: int = 0
    violations: list[CoverCountViolation] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.violations


def verify_cover_counts(ctx: GeometryContext) -> CoverCountReport:
    """Check the four cover counts for every enumerated element."""
    if set(ctx.dims) != set(range(ctx.n + 1)):
        raise ValueError("cover-count verification needs the full poset")
    q, k, n = ctx.q, ctx.k, ctx.n
    report = CoverCountReport(instance=(q, n, k))
    for u in ctx.elements:
        i, j = ctx.stratum(u)
        slash_below = back_below = 0
        for mrows in ctx.hyperplanes_rows(u.rows):
            if i == ctx.intersection_dim_with_y(mrows) + 1:
                slash_below += 1
            else:
                back_below += 1
        slash_above = back_above = 0
        for vrows, _ in ctx.superspaces_rows(u.rows):
            if ctx.intersection_dim_with_y(vrows) == i + 1:
                slash_above += 1
            else:
                back_above += 1
        observed = (slash_below, back_below, slash_above, back_above)
        expected = (
            q**j * qint(i, q),
            qint(j, q),
            qint(k - i, q),
            q ** (k - i) * qint(n - k - j, q),
        )
        report.checked += 1
        if observed != expected:
            report.violations.append(
                CoverCountViolation(u, Stratum(i, j), observed, expected)
            )
    return report


def stratum_sizes(ctx: GeometryContext) -> dict[Stratum, int]:
    """Sizes |P_{i,j}| over the enumerated dimensions."""
    sizes: dict[Stratum, int] = {}
    for u in ctx.elements:
        s = ctx.stratum(u)
        sizes[s] = sizes.get(s, 0) + 1
    return sizes


def expected_stratum_size(i: int, j: int, ctx: GeometryContext) -> int:
    """|P_{i,j}| in closed form (independent cross-check for reports)."""
    q, n, k = ctx.q, ctx.n, ctx.k
    return (
        gaussian_binomial(k, i, q)
        * gaussian_binomial(n - k, j, q)
        * q ** ((k - i) * j)
    )
