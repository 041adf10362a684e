"""Exact linear algebra: PLU, minor sequences, and kernel probes.

Everything here runs over exact rationals with plain fraction arithmetic and
canonical reduction. Pivoting is deterministic minimal-row-index, so the
permutation produced for a given input never depends on evaluation order.

Deciding invertibility-in-the-large of a lazily generated infinite matrix
from finite data is only semi-decidable; `gamma_probe` therefore returns a
three-level verdict that encodes exactly what was proved. Certification of
a kernel vector requires a finite column-support argument supplied by the
handle's structure or provenance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DomainMismatch,
    SingularTruncation,
    WitnessNotFound,
    ZeroDiagonalError,
)
from .matrices import InfiniteMatrixHandle, TruncatedMatrix, matrix_from_rows
from .scalars import RATIONAL, format_rational

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class PermutationSpec:
    """Injective finite prefix of a permutation of N, identity beyond.

    Only the prefix is ever consumed by finite-window operations; the
    identity extension is a convention and is not consulted where it could
    collide with prefix values.
    """

    prefix: tuple

    def __post_init__(self):
        if len(set(self.prefix)) != len(self.prefix):
            raise ValueError("permutation prefix entries must be distinct")
        if any(p < 1 for p in self.prefix):
            raise ValueError("permutation prefix entries must be positive")

    @classmethod
    def identity(cls) -> "PermutationSpec":
        return cls(())

    def apply(self, i: int) -> int:
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        return i

    @property
    def is_identity(self) -> bool:
        return all(p == i + 1 for i, p in enumerate(self.prefix))

    def matrix(self, n: int) -> TruncatedMatrix:
        rows = [[_F0] * n for _ in range(n)]
        for j in range(1, n + 1):
            rows[self.apply(j) - 1][j - 1] = _F1
        return matrix_from_rows(rows)


@dataclass(frozen=True)
class BlockInjection:
    """Strictly increasing finite prefix of an injection N -> N."""

    prefix: tuple

    def __post_init__(self):
        if any(a >= b for a, b in zip(self.prefix, self.prefix[1:])):
            raise ValueError("block injection prefix must be strictly increasing")
        if any(p < 1 for p in self.prefix):
            raise ValueError("block injection entries must be positive")

    @classmethod
    def identity(cls) -> "BlockInjection":
        return cls(())

    def apply(self, i: int) -> int:
        if i <= len(self.prefix):
            return self.prefix[i - 1]
        if self.prefix and i > len(self.prefix):
            raise ValueError("block injection prefix exhausted")
        return i


@dataclass(frozen=True)
class FiniteSupportVector:
    """Sparse column vector: 1-based index -> nonzero rational entry."""

    entries: tuple  # sorted ((index, value), ...)

    @classmethod
    def from_dict(cls, mapping) -> "FiniteSupportVector":
        items = tuple(sorted((int(i), Fraction(v)) for i, v in mapping.items() if v))
        return cls(items)

    @classmethod
    def from_dense(cls, values, start: int = 1) -> "FiniteSupportVector":
        return cls.from_dict({start + k: v for k, v in enumerate(values) if v})

    @property
    def support(self) -> tuple:
        return tuple(i for i, _ in self.entries)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def get(self, i: int) -> Fraction:
        for idx, val in self.entries:
            if idx == i:
                return val
        return _F0

    def normalized(self) -> "FiniteSupportVector":
        """Scale so the leading (lowest-index) entry equals 1."""
        if not self.entries:
            return self
        lead = self.entries[0][1]
        return FiniteSupportVector(tuple((i, v / lead) for i, v in self.entries))

    def to_json(self) -> dict:
        return {str(i): format_rational(v) for i, v in self.entries}


def _require_rational(m: TruncatedMatrix, what: str):
    if m.domain != RATIONAL:
        raise DomainMismatch(f"{what} requires the exact rational domain, got {m.domain}")


def _as_fractions(rows):
    return [[Fraction(x) for x in row] for row in rows]


def plu_decompose(a: TruncatedMatrix):
    """Exact P L U with deterministic minimal-row-index pivoting.

    Returns (PermutationSpec, L, U) with P.matrix(n) @ L @ U = A, L lower
    unipotent and U upper with nonzero diagonal. The pivot for each column
    is the least-index unused row with a nonzero (reduced) entry.
    """
    _require_rational(a, "plu_decompose")
    n = a.n
    rows = _as_fractions(a.rows)
    avail = list(range(n))
    piv: list[int] = []
    mult: dict[int, dict[int, Fraction]] = {r: {} for r in range(n)}
    for c in range(n):
        pivot = next((r for r in avail if rows[r][c] != 0), None)
        if pivot is None:
            raise SingularTruncation(c + 1)
        avail.remove(pivot)
        piv.append(pivot)
        step = len(piv) - 1
        for r in avail:
            f = rows[r][c] / rows[pivot][c]
            mult[r][step] = f
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[pivot])]
    l_rows = []
    for k, orig in enumerate(piv):
        row = [mult[orig].get(m, _F0) for m in range(k)] + [_F1] + [_F0] * (n - k - 1)
        l_rows.append(row)
    u_rows = [rows[orig] for orig in piv]
    spec = PermutationSpec(tuple(p + 1 for p in piv))
    return spec, matrix_from_rows(l_rows), matrix_from_rows(u_rows)


def _det(rows) -> Fraction:
    """Determinant by fraction elimination with row swaps."""
    n = len(rows)
    m = [list(r) for r in rows]
    det = _F1
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return _F0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            det = -det
        det *= m[c][c]
        inv = _F1 / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def _handle_entry(m, i: int, j: int) -> Fraction:
    value = m.entry(i, j)
    if not isinstance(value, (int, Fraction)):
        raise DomainMismatch("minor sequences require exact rational entries")
    return Fraction(value)


def sigma_determinants(
    m: InfiniteMatrixHandle,
    pi1: PermutationSpec | None = None,
    pi2: PermutationSpec | None = None,
    beta: BlockInjection | None = None,
    count: int = 1,
) -> list:
    """Minor sequence: determinant of the beta(k) x beta(k) submatrix picked
    by the row permutation pi1 and column permutation pi2, for k = 1..count."""
    pi1 = pi1 or PermutationSpec.identity()
    pi2 = pi2 or PermutationSpec.identity()
    beta = beta or BlockInjection.identity()
    out = []
    for k in range(1, count + 1):
        size = beta.apply(k)
        rows = [
            [_handle_entry(m, pi1.apply(i), pi2.apply(j)) for j in range(1, size + 1)]
            for i in range(1, size + 1)
        ]
        out.append(_det(rows))
    return out


def find_pivot_rows(
    m: InfiniteMatrixHandle, n: int, row_budget: int
) -> PermutationSpec:
    """Greedy pivot-row search making all n leading minors nonzero.

    For each column in order, picks the least-index unused row within the
    budget whose reduced entry in that column is nonzero. The returned
    prefix is re-verified by recomputing the minors before returning.
    """
    if row_budget < n:
        raise ValueError("row budget must be at least the number of columns")
    chosen: list[int] = []
    used: set[int] = set()
    pivot_rows: list[list[Fraction]] = []
    for c in range(n):
        found = None
        for r in range(1, row_budget + 1):
            if r in used:
                continue
            v = [_handle_entry(m, r, j) for j in range(1, n + 1)]
            for k, p in enumerate(pivot_rows):
                if v[k]:
                    f = v[k] / p[k]
                    v = [x - f * y for x, y in zip(v, p)]
            if v[c] != 0:
                found = (r, v)
                break
        if found is None:
            raise WitnessNotFound(c + 1, row_budget)
        used.add(found[0])
        chosen.append(found[0])
        pivot_rows.append(found[1])
    spec = PermutationSpec(tuple(chosen))
    minors = sigma_determinants(m, pi1=spec, count=n)
    if any(d == 0 for d in minors):
        raise WitnessNotFound(minors.index(_F0) + 1, row_budget)
    return spec


NO_OBSTRUCTION = "NO-OBSTRUCTION"
KERNEL_CANDIDATE = "KERNEL-CANDIDATE"
KERNEL_CERTIFIED = "KERNEL-CERTIFIED"


@dataclass(frozen=True)
class GammaVerdict:
    """What a finite probe actually established about kernel triviality."""

    verdict: str
    vector: FiniteSupportVector | None
    n_cols: int
    rows_checked: int
    certificate: str | None = None
    transpose: bool = False

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "rows_checked": self.rows_checked}
        if self.vector is not None:
            out["vector"] = self.vector.to_json()
        if self.certificate is not None:
            out["certificate"] = self.certificate
        if self.verdict == NO_OBSTRUCTION:
            out["n_cols"] = self.n_cols
        if self.transpose:
            out["transpose"] = True
        return out


def _kernel_rect(rows, ncols):
    """Kernel basis of a rectangular system by reduced row echelon form.

    Basis vectors are normalized so the leading entry is 1.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    pivots = []  # (row, col)
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = _F1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append((r, c))
        r += 1
        if r == nrows:
            break
    pivot_cols = [c for _, c in pivots]
    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for fc in free_cols:
        v = [_F0] * ncols
        v[fc] = _F1
        for pr, pc in pivots:
            v[pc] = -m[pr][fc]
        basis.append(FiniteSupportVector.from_dense(v).normalized())
    return basis


def _probe_side(m: InfiniteMatrixHandle, n_cols: int, row_budget: int, transpose: bool):
    """Kernel probe of the first n_cols columns (or rows, when transposed)."""
    support_of = m.col_rows if not transpose else m.row_cols
    supports = [support_of(j) for j in range(1, n_cols + 1)]
    if all(s is not None for s in supports):
        row_set = sorted(set().union(*[set(s) for s in supports])) or [1]
        certified = True
    else:
        row_set = list(range(1, row_budget + 1))
        certified = False
    if transpose:
        rows = [
            [_handle_entry(m, j, r) for j in range(1, n_cols + 1)] for r in row_set
        ]
    else:
        rows = [
            [_handle_entry(m, r, j) for j in range(1, n_cols + 1)] for r in row_set
        ]
    basis = _kernel_rect(rows, n_cols)
    return basis, certified, len(row_set)


def _zero_column_certificate(m, vector, transpose):
    support = vector.support
    if len(support) != 1:
        return "finite-support"
    j = support[0]
    rows = m.col_rows(j) if not transpose else m.row_cols(j)
    if rows is not None and all(
        (m.entry(r, j) if not transpose else m.entry(j, r)) == 0 for r in rows
    ):
        return "zero-column" if not transpose else "zero-row"
    return "finite-support"


def gamma_probe(m: InfiniteMatrixHandle, n_cols: int, row_budget: int) -> GammaVerdict:
    """Probe kernel triviality of the matrix and its transpose on finitely
    supported vectors, using the first n_cols columns/rows.

    NO-OBSTRUCTION: both sides linearly independent on the tested window.
    KERNEL-CANDIDATE: a nonzero vector kills all tested rows, tail unverified.
    KERNEL-CERTIFIED: as above, plus the involved columns have finite row
    support, so the vector genuinely refutes kernel triviality.
    """
    if row_budget < n_cols:
        raise ValueError("row budget must be at least n_cols")
    rows_checked = 0
    for transpose in (False, True):
        basis, certified, checked = _probe_side(m, n_cols, row_budget, transpose)
        rows_checked = max(rows_checked, checked)
        if basis:
            vector = basis[0]
            if certified:
                return GammaVerdict(
                    KERNEL_CERTIFIED,
                    vector,
                    n_cols,
                    checked,
                    certificate=_zero_column_certificate(m, vector, transpose),
                    transpose=transpose,
                )
            return GammaVerdict(
                KERNEL_CANDIDATE, vector, n_cols, checked, transpose=transpose
            )
    return GammaVerdict(NO_OBSTRUCTION, None, n_cols, rows_checked)


def invert_triangular(a: TruncatedMatrix) -> TruncatedMatrix:
    """Exact inverse of a triangular window with nonzero diagonal."""
    _require_rational(a, "invert_triangular")
    n = a.n
    lower = a.is_lower_triangular()
    upper = a.is_upper_triangular()
    if not (lower or upper):
        raise ValueError("matrix is not triangular")
    for i in range(n):
        if a.rows[i][i] == 0:
            raise ZeroDiagonalError(f"zero diagonal entry at position {i + 1}")
    rows = _as_fractions(a.rows)
    inv = [[_F0] * n for _ in range(n)]
    order = range(n) if lower else range(n - 1, -1, -1)
    for col in range(n):
        e = [_F1 if i == col else _F0 for i in range(n)]
        x = [_F0] * n
        for i in order:
            acc = e[i]
            if lower:
                for k in range(i):
                    acc -= rows[i][k] * x[k]
            else:
                for k in range(i + 1, n):
                    acc -= rows[i][k] * x[k]
            x[i] = acc / rows[i][i]
        for i in range(n):
            inv[i][col] = x[i]
    return matrix_from_rows(inv)


def kernel_basis(a: TruncatedMatrix) -> list:
    """Basis of the kernel of a finite window, by elimination; [] iff injective."""
    _require_rational(a, "kernel_basis")
    return _kernel_rect(a.rows, a.n)
