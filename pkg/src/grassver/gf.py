"""Exact linear algebra over prime fields GF(q).

Subspaces of F_q^n are stored by their canonical reduced row-echelon basis,
so two equal subspaces are structurally identical (and hashable).  GF(2)
rows are bit-packed integers; rows over larger primes are tuples of
residues.  Only prime q is supported.
"""

from __future__ import annotations

from itertools import combinations, product

from .kernels import rank2, rankp, rref2, rrefp


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    d = 2
    while d * d <= q:
        if q % d == 0:
            return False
        d += 1
    return True


def validate_field_order(q: int) -> int:
    """Check that q is a prime field order; returns q."""
    if not isinstance(q, int) or not is_prime(q):
        raise ValueError(f"field order must be prime, got {q!r}")
    return q


def qint(m: int, q: int) -> int:
    """The q-integer [m] = 1 + q + ... + q^(m-1); [0] = 0."""
    if m < 0:
        raise ValueError("qint requires m >= 0")
    return (q**m - 1) // (q - 1)


def gaussian_binomial(n: int, l: int, q: int) -> int:
    """Number of l-dimensional subspaces of F_q^n."""
    if l < 0 or l > n:
        return 0
    num = den = 1
    for t in range(l):
        num *= q ** (n - t) - 1
        den *= q ** (t + 1) - 1
    assert num % den == 0
    return num // den


def _pack_row(row, q: int):
    if q == 2:
        acc = 0
        for j, v in enumerate(row):
            if v % 2:
                acc |= 1 << j
        return acc
    return tuple(v % q for v in row)


def _unpack_row(row, n: int, q: int) -> list[int]:
    if q == 2:
        return [(row >> j) & 1 for j in range(n)]
    return list(row)


def rref_rows(rows, q: int):
    """Canonical RREF of packed rows (dispatch on field order)."""
    if q == 2:
        return rref2(rows)
    return rrefp(rows, q)


def rank_rows(rows, q: int) -> int:
    if q == 2:
        return rank2(rows)
    return rankp(rows, q)


class Subspace:
    """A subspace of F_q^n in canonical RREF basis form.

    Immutable; equality and hashing are structural, so equal subspaces
    compare equal.  ``rows`` holds the packed basis rows (see module
    docstring for the packing).
    """

    __slots__ = ("q", "n", "rows", "_hash")

    def __init__(self, q: int, n: int, rows):
        self.q = q
        self.n = n
        self.rows = tuple(rows)
        self._hash = hash((q, n, self.rows))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @classmethod
    def from_matrix(cls, matrix, q: int, n: int | None = None) -> "Subspace":
        """Row space of an arbitrary residue matrix, in canonical form."""
        matrix = [list(row) for row in matrix]
        if n is None:
            if not matrix:
                raise ValueError("ambient dimension required for empty matrix")
            n = len(matrix[0])
        packed = [_pack_row(row, q) for row in matrix]
        return cls(q, n, rref_rows(packed, q))

    @classmethod
    def zero(cls, q: int, n: int) -> "Subspace":
        return cls(q, n, ())

    @classmethod
    def full(cls, q: int, n: int) -> "Subspace":
        return cls.coordinate_span(range(n), q, n)

    @classmethod
    def coordinate_span(cls, indices, q: int, n: int) -> "Subspace":
        rows = []
        for j in sorted(indices):
            e = [0] * n
            e[j] = 1
            rows.append(_pack_row(e, q))
        return cls(q, n, rows)

    def basis_matrix(self) -> list[list[int]]:
        return [_unpack_row(r, self.n, self.q) for r in self.rows]

    def row_strings(self) -> list[str]:
        """Compact row rendering: hex bitmask for q=2, digit string else."""
        if self.q == 2:
            return [format(r, "x") for r in self.rows]
        return ["".join(str(v) for v in r) for r in self.rows]

    def vectors(self):
        """Iterate every vector of the subspace (packed). Test-scale only."""
        for coeffs in product(range(self.q), repeat=self.dim):
            if self.q == 2:
                v = 0
                for c, r in zip(coeffs, self.rows):
                    if c:
                        v ^= r
                yield v
            else:
                v = [0] * self.n
                for c, r in zip(coeffs, self.rows):
                    for t in range(self.n):
                        v[t] = (v[t] + c * r[t]) % self.q
                yield tuple(v)

    def contains_vector(self, vec) -> bool:
        """Membership test for a packed vector."""
        if self.q == 2:
            v = vec
            for r in self.rows:
                if v & (r & -r):
                    v ^= r
            return v == 0
        return rank_rows(list(self.rows) + [tuple(vec)], self.q) == self.dim

    def contains(self, other: "Subspace") -> bool:
        _check_compatible(self, other)
        return rank_rows(self.rows + other.rows, self.q) == self.dim

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.q == other.q
            and self.n == other.n
            and self.rows == other.rows
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Subspace(q={self.q}, n={self.n}, rows={self.row_strings()})"


def _check_compatible(u: Subspace, v: Subspace) -> None:
    if u.n != v.n or u.q != v.q:
        raise ValueError(
            f"incompatible subspaces: (q={u.q}, n={u.n}) vs (q={v.q}, n={v.n})"
        )


def rref(matrix, q: int, n: int | None = None) -> Subspace:
    """Canonical subspace for the row space of ``matrix`` (residues mod q)."""
    validate_field_order(q)
    return Subspace.from_matrix(matrix, q, n)


def sum_rows(urows, vrows, q: int):
    return rref_rows(tuple(urows) + tuple(vrows), q)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    _check_compatible(u, v)
    return Subspace(u.q, u.n, sum_rows(u.rows, v.rows, u.q))


def intersect_rows(urows, vrows, n: int, q: int):
    """Basis of the intersection via the Zassenhaus stacked-basis trick."""
    if q == 2:
        mask = (1 << n) - 1
        stacked = [r | (r << n) for r in urows] + list(vrows)
        return tuple(r >> n for r in rref2(stacked) if not (r & mask))
    stacked = [tuple(r) + tuple(r) for r in urows]
    stacked += [tuple(r) + (0,) * n for r in vrows]
    out = []
    for row in rrefp(stacked, q):
        if not any(row[:n]):
            out.append(row[n:])
    return tuple(out)


def subspace_intersect(u: Subspace, v: Subspace) -> Subspace:
    _check_compatible(u, v)
    return Subspace(u.q, u.n, intersect_rows(u.rows, v.rows, u.n, u.q))


def dim_sum(u: Subspace, v: Subspace) -> int:
    _check_compatible(u, v)
    return rank_rows(u.rows + v.rows, u.q)


def dim_intersect(u: Subspace, v: Subspace) -> int:
    return u.dim + v.dim - dim_sum(u, v)


def enumerate_subspaces(n: int, l: int, q: int):
    """Yield every l-dimensional subspace of F_q^n exactly once.

    Generates RREF patterns directly: choose pivot columns, then fill the
    free entries (non-pivot columns to the right of each pivot).  The order
    is deterministic: lexicographic in the pivot columns, then in the free
    values.  The count equals gaussian_binomial(n, l, q).
    """
    validate_field_order(q)
    if l < 0 or l > n:
        raise ValueError(f"dimension {l} outside [0, {n}]")
    if l == 0:
        yield Subspace.zero(q, n)
        return
    for pivots in combinations(range(n), l):
        pivset = set(pivots)
        free = [
            (t, c)
            for t, p in enumerate(pivots)
            for c in range(p + 1, n)
            if c not in pivset
        ]
        for values in product(range(q), repeat=len(free)):
            if q == 2:
                rows = [1 << p for p in pivots]
                for (t, c), v in zip(free, values):
                    if v:
                        rows[t] |= 1 << c
                yield Subspace(q, n, tuple(rows))
            else:
                mat = [[0] * n for _ in range(l)]
                for t, p in enumerate(pivots):
                    mat[t][p] = 1
                for (t, c), v in zip(free, values):
                    mat[t][c] = v
                yield Subspace(q, n, tuple(tuple(r) for r in mat))
