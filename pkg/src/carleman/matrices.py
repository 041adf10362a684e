"""Coefficient-matrix embeddings of truncated transformations.

The embedding sends a transformation g to the matrix whose row i lists the
expansion coefficients of g^(i-1) about the source of g, so that the matrix
acts on the column of monomials: M_g u_x = u_{g(x)}. Indices are 1-based
from the upper-left corner throughout.

Finite windows are exact `TruncatedMatrix` values; lazily generated infinite
matrices are `InfiniteMatrixHandle`s carrying a structure tag and provenance.
A product of two windows is truncation-exact only when the left factor is
lower triangular or the right factor is upper triangular; anything else is
flagged, and genuinely infinite products belong in a `LatentProduct`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientOrder, UndefinedOperation
from .scalars import (
    RATIONAL,
    infer_domain,
    is_zero,
    join_domains,
    scalar_to_json,
    scalar_to_text,
)
from .series import GroupoidElement, _pow_trunc, series_to_json

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class TruncatedMatrix:
    """Finite square window over a single scalar domain."""

    n: int
    rows: tuple
    domain: str
    truncation_exact: bool = True

    def entry(self, i: int, j: int):
        return self.rows[i - 1][j - 1]

    def is_lower_triangular(self) -> bool:
        return all(
            is_zero(self.rows[i][j]) for i in range(self.n) for j in range(i + 1, self.n)
        )

    def is_upper_triangular(self) -> bool:
        return all(is_zero(self.rows[i][j]) for i in range(self.n) for j in range(i))


def matrix_from_rows(rows, exact: bool = True) -> TruncatedMatrix:
    rows = tuple(tuple(r) for r in rows)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix window must be square")
    domain = infer_domain(x for r in rows for x in r)
    return TruncatedMatrix(n, rows, domain, exact)


def identity_matrix(n: int) -> TruncatedMatrix:
    rows = tuple(
        tuple(_F1 if i == j else _F0 for j in range(n)) for i in range(n)
    )
    return TruncatedMatrix(n, rows, RATIONAL)


def _coerce_cell(value, domain):
    # structural zeros/ones may stay rational inside complex windows
    if domain == "complex-float" and not isinstance(value, complex):
        return complex(value)
    return value


def matrix_to_json(m: TruncatedMatrix) -> dict:
    return {
        "n": m.n,
        "domain": m.domain,
        "truncation_exact": m.truncation_exact,
        "rows": [[scalar_to_json(_coerce_cell(x, m.domain)) for x in row] for row in m.rows],
    }


def matrix_from_json(data: dict) -> TruncatedMatrix:
    from .scalars import scalar_from_json

    try:
        rows = [[scalar_from_json(x) for x in row] for row in data["rows"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from exc
    m = matrix_from_rows(rows, data.get("truncation_exact", True))
    if "n" in data and data["n"] != m.n:
        raise ValueError("matrix JSON size field disagrees with rows")
    return m


def matrix_to_text(m: TruncatedMatrix) -> str:
    cells = [[scalar_to_text(_coerce_cell(x, m.domain)) for x in row] for row in m.rows]
    widths = [max(len(cells[i][j]) for i in range(m.n)) for j in range(m.n)]
    lines = [
        "  ".join(cells[i][j].rjust(widths[j]) for j in range(m.n))
        for i in range(m.n)
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Infinite matrices as entry oracles
# ---------------------------------------------------------------------------

LOWER_TAGS = ("lower", "lower-unipotent", "diagonal")
UPPER_TAGS = ("upper", "diagonal")


class InfiniteMatrixHandle:
    """Lazily generated infinite matrix with a structure tag.

    The entry oracle is 1-based and memoized; memoization is synchronized so
    concurrent window queries are safe and deterministic. `row_cols(i)` /
    `col_rows(j)` return the finite support of a row/column when the
    structure or provenance pins it down, else None (unknown / infinite).
    """

    def __init__(
        self,
        entry_fn,
        structure: str = "general",
        provenance: dict | None = None,
        row_cols=None,
        col_rows=None,
        window_limit: int | None = None,
    ):
        self._fn = entry_fn
        self.structure = structure
        self.provenance = provenance or {"kind": "explicit"}
        self._row_cols = row_cols
        self._col_rows = col_rows
        self.window_limit = window_limit
        self._cache: dict = {}
        self._lock = threading.Lock()

    def entry(self, i: int, j: int):
        if i < 1 or j < 1:
            raise IndexError("indices are 1-based")
        if self.window_limit is not None and max(i, j) > self.window_limit:
            raise InsufficientOrder(
                f"handle is window-limited to {self.window_limit}; asked for ({i},{j})"
            )
        key = (i, j)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        value = self._fn(i, j)
        with self._lock:
            self._cache.setdefault(key, value)
        return value

    def row_cols(self, i: int):
        if self._row_cols is not None:
            return self._row_cols(i)
        if self.structure in LOWER_TAGS:
            return tuple(range(1, i + 1)) if self.structure != "diagonal" else (i,)
        return None

    def col_rows(self, j: int):
        if self._col_rows is not None:
            return self._col_rows(j)
        if self.structure == "diagonal":
            return (j,)
        if self.structure == "upper":
            return tuple(range(1, j + 1))
        return None

    def window(self, n: int) -> TruncatedMatrix:
        rows = [[self.entry(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]
        return matrix_from_rows(rows)

    def check_structure(self, n: int) -> bool:
        """Spot-check the structure tag on an n x n window."""
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                v = self.entry(i, j)
                if self.structure in LOWER_TAGS and j > i and not is_zero(v):
                    return False
                if self.structure in UPPER_TAGS and i > j and not is_zero(v):
                    return False
                if self.structure == "lower-unipotent" and i == j and v != 1:
                    return False
        return True


def from_function(
    entry_fn, structure="general", provenance=None, row_cols=None, col_rows=None
) -> InfiniteMatrixHandle:
    return InfiniteMatrixHandle(entry_fn, structure, provenance, row_cols, col_rows)


class _CarlemanHandle(InfiniteMatrixHandle):
    """Rows are computed lazily from memoized pointwise powers of the series."""

    def __init__(self, coefficient, structure, provenance, window_limit=None):
        super().__init__(None, structure, provenance, window_limit=window_limit)
        self._coefficient = coefficient
        self._powers: dict = {}

    def row_cols(self, i: int):
        # row 1 is the zeroth power (1, 0, 0, ...) for every embedding
        if i == 1:
            return (1,)
        return super().row_cols(i)

    def entry(self, i: int, j: int):
        if i < 1 or j < 1:
            raise IndexError("indices are 1-based")
        if self.window_limit is not None and max(i, j) > self.window_limit:
            raise InsufficientOrder(
                f"handle is window-limited to {self.window_limit}; asked for ({i},{j})"
            )
        m, order = i - 1, j - 1
        with self._lock:
            row = self._powers.get(m)
        if row is None or len(row) <= order:
            coeffs = [self._coefficient(k) for k in range(order + 1)]
            row = _pow_trunc(coeffs, m, order)
            with self._lock:
                kept = self._powers.get(m)
                if kept is None or len(kept) < len(row):
                    self._powers[m] = row
                else:
                    row = kept
        return row[order]


def carleman_handle(source) -> InfiniteMatrixHandle:
    """Embedding handle for a transformation.

    `source` is either a GroupoidElement (window-limited by its order) or an
    exact coefficient oracle k -> a_k (unlimited). Isotropy input (constant
    term zero) yields an upper-triangular handle.
    """
    if isinstance(source, GroupoidElement):
        coeffs = source.coeffs

        def coefficient(k, _c=coeffs):
            return _c[k]

        limit = source.order + 1
        structure = "upper" if is_zero(coeffs[0]) else "general"
        provenance = {"kind": "carleman-of", "series": series_to_json(source)}
        return _CarlemanHandle(coefficient, structure, provenance, window_limit=limit)
    coefficient = source
    structure = "upper" if is_zero(coefficient(0)) else "general"
    provenance = {"kind": "carleman-of", "series": "oracle"}
    return _CarlemanHandle(coefficient, structure, provenance)


def builtin_carleman_handle(name: str) -> InfiniteMatrixHandle:
    from .series import builtin_coefficient

    handle = carleman_handle(builtin_coefficient(name))
    handle.provenance = {"kind": "carleman-of", "series": {"builtin": name}}
    return handle


def _binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def translation_handle(a) -> InfiniteMatrixHandle:
    """Lower-unipotent handle of the shift z -> z + a: entry C(i-1,j-1) a^(i-j)."""

    def fn(i, j):
        if j > i:
            return _F0
        if i == j:
            return _F1
        return _binomial(i - 1, j - 1) * a ** (i - j)

    structure = "diagonal" if is_zero(a) else "lower-unipotent"
    return InfiniteMatrixHandle(
        fn, structure, {"kind": "translation", "a": scalar_to_json(a)}
    )


def explicit_handle(block: TruncatedMatrix, beyond: str = "zero") -> InfiniteMatrixHandle:
    """Finite block continued by zeros or by the identity; supports are finite."""
    if beyond not in ("zero", "identity"):
        raise ValueError("beyond must be 'zero' or 'identity'")
    nb = block.n

    def fn(i, j):
        if i <= nb and j <= nb:
            return block.entry(i, j)
        if beyond == "identity" and i == j:
            return _F1
        return _F0

    def row_cols(i):
        if i <= nb:
            cols = tuple(j for j in range(1, nb + 1) if not is_zero(block.entry(i, j)))
            return cols
        return (i,) if beyond == "identity" else ()

    def col_rows(j):
        if j <= nb:
            return tuple(i for i in range(1, nb + 1) if not is_zero(block.entry(i, j)))
        return (j,) if beyond == "identity" else ()

    structure = "general"
    if block.is_lower_triangular():
        structure = "lower"
    elif block.is_upper_triangular():
        structure = "upper"
    return InfiniteMatrixHandle(
        fn,
        structure,
        {"kind": "explicit", "n": nb, "beyond": beyond},
        row_cols,
        col_rows,
    )


def _combine_structure(a: str, b: str) -> str:
    if a == "diagonal":
        return b
    if b == "diagonal":
        return a
    if a in LOWER_TAGS and b in LOWER_TAGS:
        if a == "lower-unipotent" and b == "lower-unipotent":
            return "lower-unipotent"
        return "lower"
    if a == "upper" and b == "upper":
        return "upper"
    return "general"


def product_handle(a: InfiniteMatrixHandle, b: InfiniteMatrixHandle) -> InfiniteMatrixHandle:
    """Entrywise product of two handles; defined only where sums are finite."""

    def fn(i, j):
        ks = a.row_cols(i)
        if ks is None:
            ks = b.col_rows(j)
        if ks is None:
            raise UndefinedOperation(
                f"entry ({i},{j}) of the product is an infinite sum; probe it instead"
            )
        acc = _F0
        for k in ks:
            acc = acc + a.entry(i, k) * b.entry(k, j)
        return acc

    def row_cols(i):
        ka = a.row_cols(i)
        if ka is not None:
            out = set()
            for k in ka:
                kb = b.row_cols(k)
                if kb is None:
                    return None
                out.update(kb)
            return tuple(sorted(out))
        return None

    def col_rows(j):
        kb = b.col_rows(j)
        if kb is not None:
            out = set()
            for k in kb:
                ka = a.col_rows(k)
                if ka is None:
                    return None
                out.update(ka)
            return tuple(sorted(out))
        return None

    structure = _combine_structure(a.structure, b.structure)
    limits = [x.window_limit for x in (a, b) if x.window_limit is not None]
    return InfiniteMatrixHandle(
        fn,
        structure,
        {"kind": "product", "factors": [a.provenance, b.provenance]},
        row_cols,
        col_rows,
        window_limit=min(limits) if limits else None,
    )


# ---------------------------------------------------------------------------
# Embedding operations
# ---------------------------------------------------------------------------


def carleman_embed(g: GroupoidElement, n: int) -> TruncatedMatrix:
    """n x n embedding window: entry (i,j) = coefficient of (x-s)^(j-1) in g^(i-1)."""
    if g.order < n - 1:
        raise InsufficientOrder(
            f"carleman_embed: series order {g.order} < window order {n - 1}"
        )
    rows = [_pow_trunc(g.coeffs, m, n - 1) for m in range(n)]
    return matrix_from_rows(rows)


def translation_matrix(a, n: int) -> TruncatedMatrix:
    if n < 1:
        raise ValueError("window size must be positive")
    return translation_handle(a).window(n)


@dataclass(frozen=True)
class MonomialColumn:
    """Powers 1, z, z^2, ..., z^(n-1) of a sample point."""

    z: object
    powers: tuple


def monomial_column(z, n: int) -> MonomialColumn:
    powers = [_F1]
    for _ in range(n - 1):
        powers.append(powers[-1] * z)
    return MonomialColumn(z, tuple(powers))


PERFORMED = "performed"
LATENT = "latent"


def _performed_allowed(left: InfiniteMatrixHandle, right: InfiniteMatrixHandle) -> bool:
    return left.structure in LOWER_TAGS or right.structure in UPPER_TAGS


@dataclass(frozen=True)
class LatentProduct:
    """Ordered factors with per-junction performed/latent flags.

    A junction may be flagged performed only when the multiplication is
    truncation-exact (left factor lower triangular or right factor upper
    triangular); everything else stays latent and is only ever probed.
    """

    factors: tuple
    junctions: tuple

    def __post_init__(self):
        if len(self.junctions) != len(self.factors) - 1:
            raise ValueError("need exactly one flag per junction")
        for idx, flag in enumerate(self.junctions):
            if flag not in (PERFORMED, LATENT):
                raise ValueError(f"unknown junction flag {flag!r}")
            if flag == PERFORMED and not _performed_allowed(
                self.factors[idx], self.factors[idx + 1]
            ):
                raise ValueError(
                    f"junction {idx + 1} is not truncation-exact; it must stay latent"
                )

    def to_json(self) -> dict:
        return {
            "factors": [f.provenance for f in self.factors],
            "structures": [f.structure for f in self.factors],
            "junctions": list(self.junctions),
        }


def lul_decompose(g: GroupoidElement, n: int) -> LatentProduct:
    """Split the embedding of g as T_target x M_gamma (latent) T_(-source).

    gamma is the isotropy part: conjugating g by the translations moves both
    source and target to 0, so its embedding is upper triangular with
    diagonal a1^(i-1). The first junction is truncation-exact (lower x upper)
    and may be performed; the second junction stays latent.
    """
    if g.order < n - 1:
        raise InsufficientOrder(
            f"lul_decompose: series order {g.order} < window order {n - 1}"
        )
    zero = g.coeffs[0] - g.coeffs[0]
    gamma = GroupoidElement(_F0, (zero,) + g.coeffs[1:])
    factors = (
        translation_handle(g.target),
        carleman_handle(gamma),
        translation_handle(-g.source),
    )
    return LatentProduct(factors, (PERFORMED, LATENT))


def _window_rows(value, n: int):
    if isinstance(value, InfiniteMatrixHandle):
        return value.window(n).rows, value.structure
    if isinstance(value, TruncatedMatrix):
        if value.n < n:
            raise InsufficientOrder(f"matrix window {value.n} smaller than {n}")
        rows = tuple(row[:n] for row in value.rows[:n])
        if value.is_lower_triangular():
            structure = "lower"
        elif value.is_upper_triangular():
            structure = "upper"
        else:
            structure = "general"
        if not value.truncation_exact:
            structure = structure + "/approximate"
        return rows, structure
    raise TypeError("expected a TruncatedMatrix or InfiniteMatrixHandle")


def truncated_multiply(a, b, n: int) -> TruncatedMatrix:
    """Exact n x n product when the structural condition holds, else flagged.

    The window product equals the true product window iff the left factor is
    lower triangular or the right factor is upper triangular; otherwise the
    result carries truncation_exact=False.
    """
    rows_a, struct_a = _window_rows(a, n)
    rows_b, struct_b = _window_rows(b, n)
    domain = join_domains(
        infer_domain(x for r in rows_a for x in r),
        infer_domain(x for r in rows_b for x in r),
    )
    inputs_exact = not (struct_a.endswith("/approximate") or struct_b.endswith("/approximate"))
    struct_a = struct_a.removesuffix("/approximate")
    struct_b = struct_b.removesuffix("/approximate")
    structural = struct_a in LOWER_TAGS or struct_b in UPPER_TAGS
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                term = rows_a[i][k] * rows_b[k][j]
                acc = term if acc is None else acc + term
            row.append(acc)
        rows.append(row)
    exact = structural and inputs_exact
    return TruncatedMatrix(
        n, tuple(tuple(r) for r in rows), domain, truncation_exact=exact
    )


@dataclass(frozen=True)
class MonomialCheck:
    """Outcome of comparing M_g u_z with the powers of the truncated value."""

    max_deviation: object
    deviations: tuple
    tol: float
    ok: bool


def monomial_column_check(g: GroupoidElement, z, n: int, tol) -> MonomialCheck:
    """Compare the embedding acting on monomials of (z - source) against the
    column of powers of the truncated evaluation g(z); returns the deviations."""
    m = carleman_embed(g, n)
    u = monomial_column(z - g.base_point, n)
    w = GroupoidElement(g.base_point, g.coeffs[:n]).evaluate(z) if n >= 2 else g.evaluate(z)
    target = monomial_column(w, n).powers
    deviations = []
    for i in range(n):
        acc = None
        for j in range(n):
            term = m.rows[i][j] * u.powers[j]
            acc = term if acc is None else acc + term
        dev = acc - target[i]
        deviations.append(abs(dev))
    max_dev = max(deviations)
    return MonomialCheck(max_dev, tuple(deviations), float(tol), float(max_dev) <= float(tol))
