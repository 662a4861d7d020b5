"""Registry and verification of the operator identities.

Every identity is stored as a named list of components, each a list of
Terms summing to the zero operator.  Full mode evaluates the sum as a
sparse matrix over a fully enumerated context; Columns mode applies the
sum to selected coordinate basis vectors e_x, walking covers lazily so no
global enumeration is needed.

Relation ids: REL-1 .. REL-8 (plus REL-8P, the literally-printed variant
of REL-8 whose F- coefficient lacks a K2 factor), REL-F0A/F0B/F+/F-,
REL-CENT, REL-FC0/FC+/FC-, REL-COMM, REL-A1(i)-(viii), REL-A2(i)-(iv),
REL-A3(i)-(iv), REL-A4.
"""

from __future__ import annotations

import multiprocessing
import weakref
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import GeometryContext
from .operators import T, Term, omega_terms, operator_set
from .scalars import QSqrtScalar, q_pow_half

MAX_VIOLATIONS = 25  # reports stay readable; holds-flag still exact

# words made of these symbols preserve the dimension band of a column,
# and their Term coefficients reduce to plain rationals entrywise
_BAND_SYMBOLS = frozenset({"R", "L", "F0", "F+", "F-", "F"})


# ---------------------------------------------------------------------------
# registry


def _core_relations(q: int, n: int, k: int) -> dict[str, list[Term]]:
    """REL-1 .. REL-8 and the literal REL-8P variant."""
    rels = {
        "REL-1": [
            T(q * q, ("R", "F0")),
            T(-1, ("F0", "R")),
            T(1, ("R",), half=k, k1=1),
            T(1, ("R",), half=n - k, k2=1),
            T(-(q + 1), ("R",)),
        ],
        "REL-2": [
            T(q, ("R", "F+")),
            T(-1, ("F+", "R")),
            T(-1, ("F0", "R")),
            T(1, ("R",), dq=1, half=n + 2, k1=1, k2=-1),
            T(-1, ("R",), dq=1, half=k, k1=1),
            T(-1, ("R",), dq=1, half=n - k, k2=1),
            T(1, ("R",), dq=1),
        ],
        "REL-3": [
            T(q, ("R", "F-")),
            T(-1, ("F-", "R")),
            T(-1, ("F0", "R")),
            T(1, ("R",), dq=1, half=n + 2, k1=-1, k2=1),
            T(-1, ("R",), dq=1, half=k, k1=1),
            T(-1, ("R",), dq=1, half=n - k, k2=1),
            T(1, ("R",), dq=1),
        ],
        "REL-4": [
            T(q * q, ("F0", "L")),
            T(-1, ("L", "F0")),
            T(1, ("L",), half=k + 2, k1=1),
            T(1, ("L",), half=n - k + 2, k2=1),
            T(-(q + 1), ("L",)),
        ],
        "REL-5": [
            T(q, ("F+", "L")),
            T(-1, ("L", "F+")),
            T(-1, ("L", "F0")),
            T(1, ("L",), dq=1, half=n + 2, k1=1, k2=-1),
            T(-1, ("L",), dq=1, half=k + 2, k1=1),
            T(-1, ("L",), dq=1, half=n - k + 2, k2=1),
            T(1, ("L",), dq=1),
        ],
        "REL-6": [
            T(q, ("F-", "L")),
            T(-1, ("L", "F-")),
            T(-1, ("L", "F0")),
            T(1, ("L",), dq=1, half=n + 2, k1=-1, k2=1),
            T(-1, ("L",), dq=1, half=k + 2, k1=1),
            T(-1, ("L",), dq=1, half=n - k + 2, k2=1),
            T(1, ("L",), dq=1),
        ],
        "REL-7": [
            T(1, ("L", "R")),
            T(-q, ("F+", "F-")),
            T(-1, ("F+",), dq=1, half=n + 2, k1=-1, k2=1),
            T(1, ("F+",), dq=1, half=n - k + 2, k2=1),
            T(-1, ("F-",), dq=1, half=n + 2, k1=1, k2=-1),
            T(1, ("F-",), dq=1, half=k + 2, k1=1),
            T(-1, dq=2, half=n + 2, k1=1, k2=1),
            T(1, dq=2, half=2 * n - k + 2, k1=1),
            T(1, dq=2, half=n + k + 2, k2=1),
            T(-(q ** (n + 1)), dq=2),
        ],
    }
    rel8 = [
        T(q, ("R", "L")),
        T(-1, ("F", "F0")),
        T(-1, ("F+", "F-")),
        T(-1, ("F0",), dq=1, half=k, k1=1),
        T(-1, ("F0",), dq=1, half=n - k, k2=1),
        T(2, ("F0",), dq=1),
        T(-1, ("F+",), dq=1, half=k, k1=1),
        T(1, ("F+",), dq=1),
        T(1, ("F-",), dq=1),
        T(-1, dq=2, half=n, k1=1, k2=1),
        T(1, dq=2, half=k, k1=1),
        T(1, dq=2, half=n - k, k2=1),
        T(-1, dq=2),
    ]
    rels["REL-8"] = rel8 + [T(-1, ("F-",), dq=1, half=n - k, k2=1)]
    # literal printing: scalar q^{(n-k)/2} instead of q^{(n-k)/2} K2
    rels["REL-8P"] = rel8 + [T(-1, ("F-",), dq=1, half=n - k)]
    return rels


def _f_expression_relations(q: int, n: int, k: int) -> dict[str, list[Term]]:
    """F0/F+/F- (geometric) minus their algebraic expressions."""
    return {
        "REL-F0A": [
            T(1, ("F0",)),
            T(-1, ("L1", "R1")),
            T(1, ("R1", "L1")),
            T(-1, dq=1, half=n, k1=-1, k2=1),
            T(1, dq=1, half=k, k1=1),
            T(1, dq=1, half=n - k, k2=1),
            T(-1, dq=1),
        ],
        "REL-F0B": [
            T(1, ("F0",)),
            T(-1, ("R2", "L2")),
            T(1, ("L2", "R2")),
            T(-1, dq=1, half=n, k1=1, k2=-1),
            T(1, dq=1, half=k, k1=1),
            T(1, dq=1, half=n - k, k2=1),
            T(-1, dq=1),
        ],
        "REL-F+": [
            T(1, ("F+",)),
            T(-1, ("L2", "R2")),
            T(1, dq=1, half=n, k1=1, k2=-1),
            T(-1, dq=1, half=k, k1=1),
        ],
        "REL-F-": [
            T(1, ("F-",)),
            T(-1, ("R1", "L1")),
            T(1, dq=1, half=n, k1=-1, k2=1),
            T(-1, dq=1, half=n - k, k2=1),
        ],
    }


def _center_recovery_relations(q: int, n: int, k: int) -> dict[str, list[Term]]:
    """F0/F+/F- recovered from the central elements."""
    return {
        "REL-FC0": [
            T(1, ("F0",)),
            T(-1, ("O0", "K1", "K2"), dq=1, half=n),
            T(1, dq=1, half=k, k1=1),
            T(1, dq=1, half=n - k, k2=1),
            T(-1, dq=1),
        ],
        "REL-FC+": [
            T(1, ("F+",)),
            T(-1, ("O2", "K1"), dq=1, half=k),
            T(1, ("O0", "K2", "K1"), dq=2, half=n + 2),
            T(1, dq=2, half=n + 2, k1=1, k2=-1),
            T(-2, dq=2, half=k + 2, k1=1),
        ],
        "REL-FC-": [
            T(1, ("F-",)),
            T(-1, ("O1", "K2"), dq=1, half=n - k),
            T(1, ("O0", "K1", "K2"), dq=2, half=n + 2),
            T(1, dq=2, half=n + 2, k1=-1, k2=1),
            T(-2, dq=2, half=n - k + 2, k2=1),
        ],
    }


def _appendix_relations(q: int, n: int, k: int) -> dict[str, list[Term]]:
    rels = {
        "REL-A1(i)": [T(1, ("K1", "L1")), T(-q, ("L1", "K1"))],
        "REL-A1(ii)": [T(1, ("K1", "L2")), T(-1, ("L2", "K1"))],
        "REL-A1(iii)": [T(q, ("K1", "R1")), T(-1, ("R1", "K1"))],
        "REL-A1(iv)": [T(1, ("K1", "R2")), T(-1, ("R2", "K1"))],
        "REL-A1(v)": [T(1, ("K2", "L1")), T(-1, ("L1", "K2"))],
        "REL-A1(vi)": [T(q, ("K2", "L2")), T(-1, ("L2", "K2"))],
        "REL-A1(vii)": [T(1, ("K2", "R1")), T(-1, ("R1", "K2"))],
        "REL-A1(viii)": [T(1, ("K2", "R2")), T(-q, ("R2", "K2"))],
        "REL-A2(i)": [T(1, ("L1", "R2")), T(-1, ("R2", "L1"))],
        "REL-A2(ii)": [T(1, ("L2", "R1")), T(-1, ("R1", "L2"))],
        "REL-A2(iii)": [T(q, ("L1", "L2")), T(-1, ("L2", "L1"))],
        "REL-A2(iv)": [T(1, ("R1", "R2")), T(-q, ("R2", "R1"))],
        "REL-A3(i)": [
            T(1, ("R1", "R1", "L1")),
            T(-(q + 1), ("R1", "L1", "R1")),
            T(q, ("L1", "R1", "R1")),
            T(q + 1, ("R1",), half=n - 2, k1=-1, k2=1),
        ],
        "REL-A3(ii)": [
            T(q, ("R2", "R2", "L2")),
            T(-(q + 1), ("R2", "L2", "R2")),
            T(1, ("L2", "R2", "R2")),
            T(q + 1, ("R2",), half=n, k1=1, k2=-1),
        ],
        "REL-A3(iii)": [
            T(q, ("L1", "L1", "R1")),
            T(-(q + 1), ("L1", "R1", "L1")),
            T(1, ("R1", "L1", "L1")),
            T(q + 1, ("L1",), half=n, k1=-1, k2=1),
        ],
        "REL-A3(iv)": [
            T(1, ("L2", "L2", "R2")),
            T(-(q + 1), ("L2", "R2", "L2")),
            T(q, ("R2", "L2", "L2")),
            T(q + 1, ("L2",), half=n - 2, k1=1, k2=-1),
        ],
        "REL-A4": [
            T(1, ("L1", "R1")),
            T(-1, ("R1", "L1")),
            T(1, ("L2", "R2")),
            T(-1, ("R2", "L2")),
            T(-1, dq=1, half=n, k1=1, k2=-1),
            T(1, dq=1, half=n, k1=-1, k2=1),
        ],
    }
    return rels


def _commutator(a: str, b: str) -> list[Term]:
    return [T(1, (a, b)), T(-1, (b, a))]


def relation_components(relation_id: str, q: int, n: int, k: int):
    """Components of a relation: list of (component_name, terms).

    Each component must evaluate to the zero operator.  Most relations have
    a single component; REL-CENT and REL-COMM bundle several commutators.
    """
    if relation_id == "REL-CENT":
        return [
            (f"[{o},{g}]", _commutator(o, g))
            for o in ("O0", "O1", "O2")
            for g in ("K1", "K2", "L1", "L2", "R1", "R2")
        ]
    if relation_id == "REL-COMM":
        pairs = [("F0", "F+"), ("F0", "F-"), ("F0", "F"),
                 ("F+", "F-"), ("F+", "F"), ("F-", "F")]
        return [(f"[{a},{b}]", _commutator(a, b)) for a, b in pairs]
    for family in (_core_relations, _f_expression_relations,
                   _center_recovery_relations, _appendix_relations):
        rels = family(q, n, k)
        if relation_id in rels:
            return [(relation_id, rels[relation_id])]
    raise ValueError(f"unknown relation id {relation_id!r}")


def relation_ids() -> list[str]:
    ids = [f"REL-{t}" for t in range(1, 9)]
    ids += ["REL-8P", "REL-F0A", "REL-F0B", "REL-F+", "REL-F-",
            "REL-CENT", "REL-FC0", "REL-FC+", "REL-FC-", "REL-COMM"]
    ids += [f"REL-A1({r})" for r in
            ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii")]
    ids += [f"REL-A2({r})" for r in ("i", "ii", "iii", "iv")]
    ids += [f"REL-A3({r})" for r in ("i", "ii", "iii", "iv")]
    ids += ["REL-A4"]
    return ids


# ---------------------------------------------------------------------------
# reports


@dataclass
class RelationViolation:
    component: str
    row: str
    col: str
    value: str


@dataclass
class RelationReport:
    relation_id: str
    instance: tuple[int, int, int]
    mode: str  # "full" or "columns"
    components: list[str] = field(default_factory=list)
    checked_columns: int | None = None
    violations: list[RelationViolation] = field(default_factory=list)
    truncated: bool = False

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_record(self) -> dict:
        return {
            "record": "relation-report",
            "version": 1,
            "relation_id": self.relation_id,
            "instance": list(self.instance),
            "mode": self.mode,
            "holds": self.holds,
            "checked_columns": self.checked_columns,
            "violations": [
                {"component": v.component, "row": v.row,
                 "col": v.col, "value": v.value}
                for v in self.violations
            ],
            "violations_truncated": self.truncated,
        }


# ---------------------------------------------------------------------------
# column-mode evaluation


class ColumnEvaluator:
    """Applies operator words to basis vectors without global enumeration.

    The same-dimension labels (R, L, F0, F+, F-, F) run on an integer fast
    path: the typed adjacency of each visited subspace is swept once and
    cached, and Term coefficients reduce to rationals per target stratum.
    Everything else (cover generators, diagonals, central elements) goes
    through exact QSqrtScalar vectors.
    """

    def __init__(self, ctx: GeometryContext):
        self.ctx = ctx
        self._typed: dict[tuple, dict[str, list]] = {}

    def typed_columns(self, zrows) -> dict[str, list]:
        cols = self._typed.get(zrows)
        if cols is not None:
            return cols
        cols = {"F0": [], "F+": [], "F-": [], "R": [], "L": []}
        for urows, prof in self.ctx.typed_adjacency(zrows):
            if prof.top_u and prof.top_z:
                if not prof.bot_u and not prof.bot_z:
                    cols["F0"].append(urows)
            elif not prof.top_u and not prof.top_z:
                cols["F+"].append(urows)
            if prof.bot_u and prof.bot_z:
                cols["F-"].append(urows)
            if prof.top_u and not prof.top_z:
                cols["R"].append(urows)
            if prof.bot_u and not prof.bot_z:
                cols["L"].append(urows)
        self._typed[zrows] = cols
        return cols

    def _band_lists(self, sym: str, zrows):
        cols = self.typed_columns(zrows)
        if sym == "F":
            return cols["F0"] + cols["F+"] + cols["F-"]
        return cols[sym]

    def apply_band_int(self, sym: str, vec: dict) -> dict:
        out: dict = {}
        for zrows, val in vec.items():
            for urows in self._band_lists(sym, zrows):
                out[urows] = out.get(urows, 0) + val
        return out

    # -- exact slow path ----------------------------------------------------

    def apply_symbol(self, sym: str, vec: dict) -> dict:
        ctx = self.ctx
        q, n, k = ctx.q, ctx.n, ctx.k
        if sym in _BAND_SYMBOLS:
            out: dict = {}
            for zrows, val in vec.items():
                for urows in self._band_lists(sym, zrows):
                    cur = out.get(urows)
                    out[urows] = val if cur is None else cur + val
            return {r: v for r, v in out.items() if v}
        if sym in ("K1", "K1i", "K2", "K2i"):
            out = {}
            for rows, val in vec.items():
                i = ctx.intersection_dim_with_y(rows)
                j = len(rows) - i
                if sym == "K1":
                    f = q_pow_half(k - 2 * i, q)
                elif sym == "K1i":
                    f = q_pow_half(2 * i - k, q)
                elif sym == "K2":
                    f = q_pow_half(2 * j - (n - k), q)
                else:
                    f = q_pow_half(n - k - 2 * j, q)
                out[rows] = f * val
            return out
        if sym in ("L1", "L2"):
            # (L1 v)_m sums v_w over w slash-covering m; L2 backslash
            out = {}
            for wrows, val in vec.items():
                i_w = ctx.intersection_dim_with_y(wrows)
                for mrows in ctx.hyperplanes_rows(wrows):
                    slash = i_w == ctx.intersection_dim_with_y(mrows) + 1
                    if slash == (sym == "L1"):
                        cur = out.get(mrows)
                        out[mrows] = val if cur is None else cur + val
            return {r: v for r, v in out.items() if v}
        if sym in ("R1", "R2"):
            out = {}
            for wrows, val in vec.items():
                i_w = ctx.intersection_dim_with_y(wrows)
                for vrows, _ in ctx.superspaces_rows(wrows):
                    slash = ctx.intersection_dim_with_y(vrows) == i_w + 1
                    if slash == (sym == "R1"):
                        cur = out.get(vrows)
                        out[vrows] = val if cur is None else cur + val
            return {r: v for r, v in out.items() if v}
        if sym in ("O0", "O1", "O2"):
            return self.apply_terms(omega_terms(sym, q, n, k), vec)
        raise ValueError(f"unknown operator symbol {sym!r}")

    def apply_term(self, term: Term, vec: dict) -> dict:
        ctx = self.ctx
        q, n, k = ctx.q, ctx.n, ctx.k
        cur = vec
        for sym in reversed(term.word):
            cur = self.apply_symbol(sym, cur)
        base = Fraction(term.num, (q - 1) ** term.dq)
        out = {}
        for rows, val in cur.items():
            i = ctx.intersection_dim_with_y(rows)
            j = len(rows) - i
            f = q_pow_half(
                term.half + term.k1 * (k - 2 * i)
                + term.k2 * (2 * j - (n - k)), q) * base
            v = f * val
            if v:
                out[rows] = v
        return out

    def apply_terms(self, terms, vec: dict) -> dict:
        acc: dict = {}
        for term in terms:
            for rows, val in self.apply_term(term, vec).items():
                cur = acc.get(rows)
                s = val if cur is None else cur + val
                if s:
                    acc[rows] = s
                elif cur is not None:
                    del acc[rows]
        return acc

    # -- integer fast path --------------------------------------------------

    def evaluate_band_terms(self, terms, xrows) -> dict:
        """Residual of a band relation on e_x, scaled by (q-1)^max_dq.

        Only valid when every word uses band symbols; the scaled per-entry
        coefficients are then integers times q^e with integer e, so the
        whole evaluation stays in integer/Fraction arithmetic (no radicals).
        Returns a map rows -> residual coefficient; empty means zero.
        """
        ctx = self.ctx
        q, n, k = ctx.q, ctx.n, ctx.k
        scale_dq = max(t.dq for t in terms)
        acc: dict = {}
        for term in terms:
            vec = {xrows: 1}
            for sym in reversed(term.word):
                vec = self.apply_band_int(sym, vec)
            base = term.num * (q - 1) ** (scale_dq - term.dq)
            for rows, val in vec.items():
                i = ctx.intersection_dim_with_y(rows)
                j = len(rows) - i
                e2 = (term.half + term.k1 * (k - 2 * i)
                      + term.k2 * (2 * j - (n - k)))
                if e2 % 2:
                    raise ArithmeticError("band term with half-integer power")
                e = e2 // 2
                coeff = base * val
                contrib = coeff * q**e if e >= 0 else Fraction(coeff, q**-e)
                cur = acc.get(rows, 0)
                s = cur + contrib
                if s:
                    acc[rows] = s
                elif rows in acc:
                    del acc[rows]
        return acc


_EVALUATORS: "weakref.WeakKeyDictionary[GeometryContext, ColumnEvaluator]" = (
    weakref.WeakKeyDictionary()
)


def column_evaluator(ctx: GeometryContext) -> ColumnEvaluator:
    """Shared evaluator per context, so typed sweeps are cached across calls."""
    ev = _EVALUATORS.get(ctx)
    if ev is None:
        ev = ColumnEvaluator(ctx)
        _EVALUATORS[ctx] = ev
    return ev


def _is_band_component(terms) -> bool:
    return all(set(t.word) <= _BAND_SYMBOLS for t in terms)


def _rows_ref(rows, q: int) -> str:
    if q == 2:
        return ":".join(format(r, "x") for r in rows)
    return ":".join("".join(str(v) for v in r) for r in rows)


def _column_rows(ctx: GeometryContext, col) -> tuple:
    """Accepts an element id, a Subspace, or packed basis rows."""
    from .gf import Subspace

    if isinstance(col, int):
        return ctx.elements[col].rows
    if isinstance(col, Subspace):
        return col.rows
    return tuple(col)


def _verify_columns_chunk(ctx, components, col_rows_list):
    ev = column_evaluator(ctx)
    q = ctx.q
    out = []
    for xrows in col_rows_list:
        for name, terms in components:
            if _is_band_component(terms):
                residual = ev.evaluate_band_terms(terms, xrows)
                items = [(r, str(v)) for r, v in residual.items()]
            else:
                residual = ev.apply_terms(terms, {
                    xrows: QSqrtScalar.from_int(1, q)})
                items = [(r, str(v)) for r, v in residual.items()]
            for rrows, value in sorted(items):
                out.append((name, _rows_ref(rrows, q),
                            _rows_ref(xrows, q), value))
    return out


_WORKER_STATE: dict = {}


def _worker_init(q, n, k):
    _WORKER_STATE["ctx"] = GeometryContext(q, n, k, dims=())


def _worker_task(args):
    components, chunk = args
    return _verify_columns_chunk(_WORKER_STATE["ctx"], components, chunk)


def verify_relation(relation_id: str, ctx: GeometryContext,
                    mode: str = "full", columns=None,
                    workers: int = 1) -> RelationReport:
    """Check one identity, either as a full sparse matrix or on columns."""
    q, n, k = ctx.q, ctx.n, ctx.k
    components = relation_components(relation_id, q, n, k)
    report = RelationReport(
        relation_id=relation_id,
        instance=(q, n, k),
        mode=mode,
        components=[name for name, _ in components],
    )
    if mode == "full":
        ops = operator_set(ctx)
        for name, terms in components:
            residual = ops.evaluate_terms(terms)
            for r, c, v in sorted(residual.nonzero_entries()):
                if len(report.violations) >= MAX_VIOLATIONS:
                    report.truncated = True
                    return report
                report.violations.append(RelationViolation(
                    name, ctx.ref(ctx.elements[r]),
                    ctx.ref(ctx.elements[c]), str(v)))
        return report
    if mode != "columns":
        raise ValueError(f"unknown mode {mode!r}")
    if not columns:
        raise ValueError("columns mode requires a nonempty column list")
    col_rows = [_column_rows(ctx, c) for c in columns]
    report.checked_columns = len(col_rows)
    if workers > 1:
        size = max(1, len(col_rows) // (workers * 4))
        chunks = [col_rows[t:t + size] for t in range(0, len(col_rows), size)]
        with multiprocessing.Pool(
                workers, initializer=_worker_init, initargs=(q, n, k)) as pool:
            results = pool.map(_worker_task,
                               [(components, c) for c in chunks])
        flat = [v for chunk in results for v in chunk]
    else:
        flat = _verify_columns_chunk(ctx, components, col_rows)
    for name, row, col, value in sorted(flat, key=lambda t: (t[2], t[0], t[1])):
        if len(report.violations) >= MAX_VIOLATIONS:
            report.truncated = True
            break
        report.violations.append(RelationViolation(name, row, col, value))
    return report
