"""Sparse exact operators indexed by the projective geometry.

The six generators K1, K2 (diagonal, half-integer powers of q) and L1, L2,
R1, R2 (cover-kind incidence) are built directly from the geometry; the
derived elements R, L are compositions, while F0, F+, F- are built
entrywise from the cover-kind profile of same-dimension adjacent pairs.
The algebraic expressions for F0/F+/F- are *verification targets* (see
grassver.relations), never constructors.

Operator expressions are linear combinations of Terms: a Term is
``num / (q-1)^dq * q^(half/2) * K1^k1 * K2^k2 * word`` where ``word`` is a
product of operator symbols.  The same Term lists drive full-matrix
evaluation here and column-mode evaluation in grassver.relations.
"""

from __future__ import annotations

import weakref
from fractions import Fraction
from typing import NamedTuple

from .geometry import GeometryContext
from .scalars import QSqrtScalar, q_pow_half

GENERATOR_NAMES = ("K1", "K2", "K1inv", "K2inv", "L1", "L2", "R1", "R2")
DERIVED_NAMES = ("R", "L", "F0", "Fplus", "Fminus", "F",
                 "Omega0", "Omega1", "Omega2")

# canonical short symbols used inside Term words
_ALIASES = {
    "K1inv": "K1i", "K2inv": "K2i",
    "Fplus": "F+", "Fminus": "F-",
    "Omega0": "O0", "Omega1": "O1", "Omega2": "O2",
}


def canon_symbol(name: str) -> str:
    return _ALIASES.get(name, name)


class Term(NamedTuple):
    """One summand of an operator expression (see module docstring)."""

    num: int
    dq: int = 0
    half: int = 0
    k1: int = 0
    k2: int = 0
    word: tuple = ()


def T(num, word=(), dq=0, half=0, k1=0, k2=0) -> Term:
    return Term(num, dq, half, k1, k2, tuple(word))


class SparseOperator:
    """Exact sparse matrix indexed by the enumerated elements of a context.

    Entries are QSqrtScalar; explicit zeros are never stored.  Immutable by
    convention: all operations return new operators.
    """

    __slots__ = ("ctx", "rows")

    def __init__(self, ctx: GeometryContext, rows=None):
        self.ctx = ctx
        self.rows = rows if rows is not None else {}

    @classmethod
    def zeros(cls, ctx) -> "SparseOperator":
        return cls(ctx, {})

    @classmethod
    def identity(cls, ctx) -> "SparseOperator":
        one = QSqrtScalar.from_int(1, ctx.q)
        return cls(ctx, {t: {t: one} for t in range(len(ctx.elements))})

    @classmethod
    def diagonal(cls, ctx, entry_fn) -> "SparseOperator":
        """Diagonal operator with (u,u)-entry entry_fn(stratum(u))."""
        rows = {}
        for t, u in enumerate(ctx.elements):
            v = entry_fn(ctx.stratum(u))
            if v:
                rows[t] = {t: v}
        return cls(ctx, rows)

    def _check(self, other: "SparseOperator"):
        if other.ctx is not self.ctx:
            raise ValueError("operators live on different contexts")

    def __add__(self, other):
        self._check(other)
        rows = {r: dict(row) for r, row in self.rows.items()}
        for r, row in other.rows.items():
            mine = rows.setdefault(r, {})
            for c, v in row.items():
                cur = mine.get(c)
                s = v if cur is None else cur + v
                if s:
                    mine[c] = s
                elif cur is not None:
                    del mine[c]
            if not mine:
                del rows[r]
        return SparseOperator(self.ctx, rows)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self.scale(QSqrtScalar.from_int(-1, self.ctx.q))

    def scale(self, scalar) -> "SparseOperator":
        if not scalar:
            return SparseOperator.zeros(self.ctx)
        return SparseOperator(
            self.ctx,
            {r: {c: scalar * v for c, v in row.items()}
             for r, row in self.rows.items()},
        )

    def __matmul__(self, other):
        self._check(other)
        out = {}
        brows = other.rows
        for r, row in self.rows.items():
            acc: dict = {}
            for m, a in row.items():
                brow = brows.get(m)
                if not brow:
                    continue
                for c, b in brow.items():
                    v = a * b
                    cur = acc.get(c)
                    acc[c] = v if cur is None else cur + v
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        return SparseOperator(self.ctx, out)

    def transpose(self) -> "SparseOperator":
        out: dict = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                out.setdefault(c, {})[r] = v
        return SparseOperator(self.ctx, out)

    def entry(self, r: int, c: int) -> QSqrtScalar:
        return self.rows.get(r, {}).get(c, QSqrtScalar.from_int(0, self.ctx.q))

    def nnz(self) -> int:
        return sum(len(row) for row in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def nonzero_entries(self):
        for r, row in self.rows.items():
            for c, v in row.items():
                yield r, c, v

    def apply_to_vector(self, vec: dict) -> dict:
        """Matrix-vector product; vec maps column id -> QSqrtScalar."""
        out: dict = {}
        for r, row in self.rows.items():
            acc = None
            for c, v in vec.items():
                a = row.get(c)
                if a is not None:
                    t = a * v
                    acc = t if acc is None else acc + t
            if acc:
                out[r] = acc
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SparseOperator)
            and self.ctx is other.ctx
            and self.rows == other.rows
        )

    def __hash__(self):
        return id(self)


def op_add(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a + b


def op_scale(scalar, a: SparseOperator) -> SparseOperator:
    return a.scale(scalar)


def op_compose(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    return a @ b


# ---------------------------------------------------------------------------
# derived-element definitions as Term lists


def omega_terms(which: str, q: int, n: int, k: int) -> list[Term]:
    """The three central elements, as displayed operator expressions."""
    if which == "O0":
        return [
            T(q - 1, ("F0", "K1i", "K2i"), half=-n),
            T(1, half=-k, k1=-1),
            T(1, half=-(n - k), k2=-1),
            T(-1, half=-n, k1=-1, k2=-1),
        ]
    if which == "O1":
        return [
            T(q, ("F0", "K2i"), half=-(n - k)),
            T(q - 1, ("F-", "K2i"), half=-(n - k)),
            T(1, dq=1, half=k + 2 - (n - k), k1=1, k2=-1),
            T(1, dq=1, half=k + 2, k1=-1),
            T(-1, dq=1, half=2 - (n - k), k2=-1),
            T(-q, dq=1),
        ]
    if which == "O2":
        return [
            T(q, ("F0", "K1i"), half=-k),
            T(q - 1, ("F+", "K1i"), half=-k),
            T(1, dq=1, half=n - 2 * k + 2, k1=-1, k2=1),
            T(1, dq=1, half=n + 2 - k, k2=-1),
            T(-1, dq=1, half=2 - k, k1=-1),
            T(-q, dq=1),
        ]
    raise ValueError(f"unknown central element {which!r}")


class OperatorSet:
    """Cached operators over one fully- or band-enumerated context."""

    def __init__(self, ctx: GeometryContext):
        self.ctx = ctx
        self._ops: dict[str, SparseOperator] = {}
        self._words: dict[tuple, SparseOperator] = {}

    # -- construction ------------------------------------------------------

    def _build_cover_incidence(self):
        ctx = self.ctx
        l1: dict = {}
        l2: dict = {}
        one = QSqrtScalar.from_int(1, ctx.q)
        for uid, u in enumerate(ctx.elements):
            if not ctx.has_dim(u.dim + 1):
                continue
            i_u = ctx.intersection_dim_with_y(u.rows)
            for vrows, _ in ctx.superspaces_rows(u.rows):
                vid = ctx.id_by_rows[vrows]
                if ctx.intersection_dim_with_y(vrows) == i_u + 1:
                    l1.setdefault(uid, {})[vid] = one
                else:
                    l2.setdefault(uid, {})[vid] = one
        self._ops["L1"] = SparseOperator(ctx, l1)
        self._ops["L2"] = SparseOperator(ctx, l2)
        self._ops["R1"] = self._ops["L1"].transpose()
        self._ops["R2"] = self._ops["L2"].transpose()

    def _build_f_matrices(self):
        ctx = self.ctx
        mats = {"F0": {}, "F+": {}, "F-": {}}
        one = QSqrtScalar.from_int(1, ctx.q)
        for zid, z in enumerate(ctx.elements):
            if z.dim == 0:
                continue
            for urows, prof in ctx.typed_adjacency(z.rows):
                uid = ctx.id_by_rows[urows]
                if prof.top_u and prof.top_z:
                    if not prof.bot_u and not prof.bot_z:
                        mats["F0"].setdefault(uid, {})[zid] = one
                elif not prof.top_u and not prof.top_z:
                    mats["F+"].setdefault(uid, {})[zid] = one
                if prof.bot_u and prof.bot_z:
                    mats["F-"].setdefault(uid, {})[zid] = one
        for name, rows in mats.items():
            self._ops[name] = SparseOperator(ctx, rows)

    def get(self, name: str) -> SparseOperator:
        sym = canon_symbol(name)
        op = self._ops.get(sym)
        if op is not None:
            return op
        ctx = self.ctx
        q, n, k = ctx.q, ctx.n, ctx.k
        if sym in ("L1", "L2", "R1", "R2"):
            self._build_cover_incidence()
        elif sym in ("F0", "F+", "F-"):
            self._build_f_matrices()
        elif sym == "I":
            self._ops["I"] = SparseOperator.identity(ctx)
        elif sym == "K1":
            self._ops["K1"] = SparseOperator.diagonal(
                ctx, lambda s: q_pow_half(k - 2 * s.i, q))
        elif sym == "K1i":
            self._ops["K1i"] = SparseOperator.diagonal(
                ctx, lambda s: q_pow_half(2 * s.i - k, q))
        elif sym == "K2":
            self._ops["K2"] = SparseOperator.diagonal(
                ctx, lambda s: q_pow_half(2 * s.j - (n - k), q))
        elif sym == "K2i":
            self._ops["K2i"] = SparseOperator.diagonal(
                ctx, lambda s: q_pow_half(n - k - 2 * s.j, q))
        elif sym == "R":
            self._ops["R"] = self.get("L1") @ self.get("R2")
        elif sym == "L":
            self._ops["L"] = self.get("R1") @ self.get("L2")
        elif sym == "F":
            self._ops["F"] = self.get("F0") + self.get("F+") + self.get("F-")
        elif sym in ("O0", "O1", "O2"):
            self._ops[sym] = self.evaluate_terms(omega_terms(sym, q, n, k))
        else:
            raise ValueError(f"unknown operator {name!r}")
        return self._ops[sym]

    def word(self, word: tuple) -> SparseOperator:
        if not word:
            return self.get("I")
        op = self._words.get(word)
        if op is None:
            op = self.get(word[0])
            for sym in word[1:]:
                op = op @ self.get(sym)
            self._words[word] = op
        return op

    # -- Term evaluation ----------------------------------------------------

    def term_matrix(self, term: Term) -> SparseOperator:
        ctx = self.ctx
        q, n, k = ctx.q, ctx.n, ctx.k
        base = Fraction(term.num, (q - 1) ** term.dq)
        mat = self.word(term.word)
        out: dict = {}
        for r, row in mat.rows.items():
            s = ctx.stratum(ctx.elements[r])
            factor = q_pow_half(
                term.half + term.k1 * (k - 2 * s.i)
                + term.k2 * (2 * s.j - (n - k)),
                q,
            ) * base
            if not factor:
                continue
            out[r] = {c: factor * v for c, v in row.items()}
        return SparseOperator(ctx, out)

    def evaluate_terms(self, terms) -> SparseOperator:
        acc = SparseOperator.zeros(self.ctx)
        for term in terms:
            acc = acc + self.term_matrix(term)
        return acc


_OPSETS: "weakref.WeakKeyDictionary[GeometryContext, OperatorSet]" = (
    weakref.WeakKeyDictionary()
)


def operator_set(ctx: GeometryContext) -> OperatorSet:
    ops = _OPSETS.get(ctx)
    if ops is None:
        ops = OperatorSet(ctx)
        _OPSETS[ctx] = ops
    return ops


def build_generator(which: str, ctx: GeometryContext) -> SparseOperator:
    """One of K1, K2, K1inv, K2inv, L1, L2, R1, R2 over ctx."""
    if which not in GENERATOR_NAMES:
        raise ValueError(f"unknown generator {which!r}")
    return operator_set(ctx).get(which)


def build_derived(which: str, ctx: GeometryContext) -> SparseOperator:
    """One of R, L, F0, Fplus, Fminus, F, Omega0, Omega1, Omega2 over ctx."""
    if which not in DERIVED_NAMES:
        raise ValueError(f"unknown derived element {which!r}")
    return operator_set(ctx).get(which)


def entry_of_product(factors, row_id: int, col_id: int) -> QSqrtScalar:
    """(product of factors)[row, col] by repeated sparse mat-vec.

    Never materializes the product: applies the factors right-to-left to
    the coordinate basis vector e_col.
    """
    factors = list(factors)
    if not factors:
        raise ValueError("empty factor list")
    ctx = factors[0].ctx
    vec = {col_id: QSqrtScalar.from_int(1, ctx.q)}
    for f in reversed(factors):
        vec = f.apply_to_vector(vec)
    return vec.get(row_id, QSqrtScalar.from_int(0, ctx.q))
