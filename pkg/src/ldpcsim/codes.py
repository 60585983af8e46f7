"""Parity-check code model.

Sparse binary parity-check matrices with a column-layer partition, a
quasi-cyclic (QC) lift constructor, and the two interchange formats:
the classic alist adjacency format and a plain-text shift table for QC
base matrices.

A matrix is stored as flat adjacency arrays (CSR style, one edge id per
check slot) so that decoders can walk checks, variables, and layers
without per-call list building.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

__all__ = [
    "AlistFormatError",
    "QcConstructionError",
    "ParityCheckMatrix",
    "QcBase",
    "expand_qc",
    "random_qc_base",
    "has_four_cycles",
    "regroup_layers",
    "syndrome_ok",
    "load_alist",
    "dumps_alist",
    "load_qc_base",
    "dumps_qc_base",
    "wimax_r12_base",
]


class AlistFormatError(ValueError):
    """Raised when an alist stream violates the format contract."""


class QcConstructionError(RuntimeError):
    """Raised when the random shift-table search exhausts its retry budget."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class ParityCheckMatrix:
    """Immutable sparse binary parity-check matrix with layer partitions.

    Parameters
    ----------
    check_neighbors : sequence of sequences of int
        For each check (row), the variable (column) indices it taps.
        Every check must tap at least one variable; duplicates are
        rejected.
    n : int
        Number of variables (columns).
    layer_of_column : array_like of int, optional
        Column-layer id per variable. Defaults to one layer per column.
        Layer ids must form a contiguous partition 0..G-1 with every
        layer nonempty.
    row_layer_of : array_like of int, optional
        Row-layer id per check, used by the row-layered schedule.
        Defaults to one layer per row.

    Attributes
    ----------
    m, n : int
        Number of checks and variables.
    num_edges : int
        Number of ones in the matrix.
    check_ptr, check_vars : ndarray
        CSR layout of the rows. Edge ``e`` lives at slot ``e`` of
        ``check_vars``; edge ids are therefore check-major.
    var_ptr, var_checks, var_edges : ndarray
        Column-major listing; ``var_edges`` maps each column slot back
        to its check-major edge id.
    layer_of, num_layers, layer_ptr, layer_vars : ndarray / int
        Column-layer partition, plus variables grouped by layer
        (ascending inside each layer).
    one_per_layer : bool
        True when no check has two neighbors in the same column layer.
    edge_key : ndarray
        Removal key per edge: the column layer when ``one_per_layer``,
        else the global column index.
    """

    def __init__(self, check_neighbors: Sequence[Sequence[int]], n: int,
                 layer_of_column=None, row_layer_of=None):
        m = len(check_neighbors)
        if m < 1 or n < 1:
            raise ValueError("matrix needs at least one check and one variable")
        self.m = int(m)
        self.n = int(n)

        deg = np.array([len(row) for row in check_neighbors], dtype=np.int32)
        if np.any(deg < 1):
            raise ValueError("every check must tap at least one variable")
        check_ptr = np.zeros(m + 1, dtype=np.int32)
        np.cumsum(deg, out=check_ptr[1:])
        check_vars = np.empty(int(check_ptr[-1]), dtype=np.int32)
        for c, row in enumerate(check_neighbors):
            rv = np.asarray(row, dtype=np.int32)
            if rv.size and (rv.min() < 0 or rv.max() >= n):
                raise ValueError(f"check {c} taps a variable outside [0, {n})")
            if np.unique(rv).size != rv.size:
                raise ValueError(f"check {c} taps a variable twice")
            check_vars[check_ptr[c]:check_ptr[c + 1]] = rv
        self.num_edges = int(check_ptr[-1])
        self.check_ptr = _freeze(check_ptr)
        self.check_vars = _freeze(check_vars)
        self.check_deg = _freeze(deg)
        self.max_check_degree = int(deg.max())

        # column-major view: for each variable, its checks and edge ids
        order = np.argsort(check_vars, kind="stable").astype(np.int32)
        var_deg = np.bincount(check_vars, minlength=n).astype(np.int32)
        var_ptr = np.zeros(n + 1, dtype=np.int32)
        np.cumsum(var_deg, out=var_ptr[1:])
        edge_check = np.repeat(np.arange(m, dtype=np.int32), deg)
        self.var_ptr = _freeze(var_ptr)
        self.var_edges = _freeze(order)
        self.var_checks = _freeze(edge_check[order])
        self.var_deg = _freeze(var_deg)
        self.max_var_degree = int(var_deg.max()) if n else 0
        self.edge_check = _freeze(edge_check)

        self.layer_of = _freeze(self._partition(layer_of_column, n, "column layer"))
        self.num_layers = int(self.layer_of.max()) + 1
        self.row_layer_of = _freeze(self._partition(row_layer_of, m, "row layer"))
        self.num_row_layers = int(self.row_layer_of.max()) + 1

        # variables grouped by layer, ascending within a layer
        lorder = np.argsort(self.layer_of, kind="stable").astype(np.int32)
        lsizes = np.bincount(self.layer_of, minlength=self.num_layers)
        layer_ptr = np.zeros(self.num_layers + 1, dtype=np.int32)
        np.cumsum(lsizes, out=layer_ptr[1:])
        self.layer_ptr = _freeze(layer_ptr)
        self.layer_vars = _freeze(lorder)

        rorder = np.argsort(self.row_layer_of, kind="stable").astype(np.int32)
        rsizes = np.bincount(self.row_layer_of, minlength=self.num_row_layers)
        row_layer_ptr = np.zeros(self.num_row_layers + 1, dtype=np.int32)
        np.cumsum(rsizes, out=row_layer_ptr[1:])
        self.row_layer_ptr = _freeze(row_layer_ptr)
        self.row_layer_checks = _freeze(rorder)

        # a check with two neighbors in one layer forces global-column keys
        edge_layer = self.layer_of[check_vars]
        one = True
        for c in range(m):
            seg = edge_layer[check_ptr[c]:check_ptr[c + 1]]
            if np.unique(seg).size != seg.size:
                one = False
                break
        self.one_per_layer = bool(one)
        key_of_var = self.layer_of if one else np.arange(n, dtype=np.int32)
        self.key_of_var = _freeze(np.ascontiguousarray(key_of_var, dtype=np.int32))
        self.edge_key = _freeze(self.key_of_var[check_vars])

    @staticmethod
    def _partition(values, size: int, what: str) -> np.ndarray:
        if values is None:
            return np.arange(size, dtype=np.int32)
        arr = np.asarray(values, dtype=np.int32).copy()
        if arr.shape != (size,):
            raise ValueError(f"{what} assignment must have length {size}")
        if arr.min() < 0:
            raise ValueError(f"{what} ids must be nonnegative")
        count = int(arr.max()) + 1
        if np.unique(arr).size != count:
            raise ValueError(f"{what} ids must form a contiguous partition with no empty layer")
        return arr

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.n)

    @property
    def rate(self) -> float:
        """Design rate (n - m) / n."""
        return (self.n - self.m) / self.n

    def vars_of_check(self, c: int) -> np.ndarray:
        return self.check_vars[self.check_ptr[c]:self.check_ptr[c + 1]]

    def checks_of_var(self, v: int) -> np.ndarray:
        return self.var_checks[self.var_ptr[v]:self.var_ptr[v + 1]]

    def edges_of_var(self, v: int) -> np.ndarray:
        return self.var_edges[self.var_ptr[v]:self.var_ptr[v + 1]]

    def to_dense(self) -> np.ndarray:
        """Dense uint8 copy, mostly for demos and small-code inspection."""
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        for c in range(self.m):
            h[c, self.vars_of_check(c)] = 1
        return h

    def __repr__(self):
        return (f"ParityCheckMatrix(m={self.m}, n={self.n}, "
                f"edges={self.num_edges}, layers={self.num_layers})")


def syndrome_ok(matrix: ParityCheckMatrix, bits) -> bool:
    """True iff ``bits`` satisfies every check of ``matrix`` over GF(2)."""
    bits = np.asarray(bits)
    if bits.shape != (matrix.n,):
        raise ValueError(f"expected {matrix.n} bits, got shape {bits.shape}")
    taps = bits[matrix.check_vars].astype(np.int64)
    sums = np.add.reduceat(taps, matrix.check_ptr[:-1])
    return bool(np.all(sums % 2 == 0))


@dataclass(frozen=True)
class QcBase:
    """QC shift table: entry s >= 0 lifts to the s-step cyclic shift of
    the z x z identity block, -1 to the zero block."""

    shifts: np.ndarray
    z: int

    def __post_init__(self):
        shifts = np.asarray(self.shifts, dtype=np.int32).copy()
        if shifts.ndim != 2 or shifts.size == 0:
            raise ValueError("shift table must be a nonempty 2-D array")
        if self.z < 1:
            raise ValueError("lift size z must be positive")
        if shifts.max() >= self.z or shifts.min() < -1:
            raise ValueError("shifts must lie in [-1, z)")
        object.__setattr__(self, "shifts", _freeze(shifts))

    @property
    def rows_b(self) -> int:
        return self.shifts.shape[0]

    @property
    def cols_b(self) -> int:
        return self.shifts.shape[1]


def expand_qc(base: QcBase) -> ParityCheckMatrix:
    """Lift a shift table into its full parity-check matrix.

    Block (i, j) with shift s contributes, for every r in [0, z), the
    edge between check ``i*z + r`` and variable ``j*z + ((r + s) mod z)``.
    Column layers are the base columns and row layers the base rows, so
    each check has exactly one neighbor per nonzero block of its row.
    """
    z = base.z
    shifts = base.shifts
    rows_b, cols_b = shifts.shape
    neighbors = []
    for i in range(rows_b):
        row = [(j, int(s)) for j, s in enumerate(shifts[i]) if s >= 0]
        if not row:
            raise ValueError(f"base row {i} has no nonzero block")
        for r in range(z):
            neighbors.append([j * z + ((r + s) % z) for j, s in row])
    n = cols_b * z
    return ParityCheckMatrix(
        neighbors, n,
        layer_of_column=np.arange(n, dtype=np.int32) // z,
        row_layer_of=np.arange(rows_b * z, dtype=np.int32) // z,
    )


def _pair_diffs(col: np.ndarray, z: int) -> np.ndarray:
    # shift differences over all row pairs; equal differences in two
    # columns make the four cyclic edges close into a length-4 cycle
    rb = col.size
    out = []
    for i1 in range(rb):
        for i2 in range(i1 + 1, rb):
            out.append((int(col[i1]) - int(col[i2])) % z)
    return np.asarray(out, dtype=np.int64)


def has_four_cycles(base: QcBase) -> bool:
    """True iff the expanded graph of ``base`` contains a length-4 cycle.

    Two base columns close a 4-cycle iff some row pair, nonzero in both
    columns, has the same shift difference mod z in both.
    """
    shifts = base.shifts
    rb, cb = shifts.shape
    z = base.z
    for j1 in range(cb):
        for j2 in range(j1 + 1, cb):
            for i1 in range(rb):
                for i2 in range(i1 + 1, rb):
                    s = shifts[np.ix_([i1, i2], [j1, j2])]
                    if np.any(s < 0):
                        continue
                    if (int(s[0, 0]) - int(s[1, 0])) % z == (int(s[0, 1]) - int(s[1, 1])) % z:
                        return True
    return False


def random_qc_base(rows_b: int, cols_b: int, z: int, seed: int, *,
                   column_tries: int = 2000,
                   allow_4cycles: bool = False) -> QcBase:
    """Draw a fully populated random shift table, deterministically.

    Columns are drawn one at a time from ``default_rng(seed)`` and a
    column is rejected whenever it shares a row-pair shift difference
    with an earlier column (the 4-cycle condition). ``column_tries``
    bounds the redraws per column; exhausting it raises
    :class:`QcConstructionError`. ``allow_4cycles=True`` skips the
    filter entirely and accepts the first draw of every column.
    """
    if rows_b < 1 or cols_b < 1:
        raise ValueError("base dimensions must be positive")
    if z < 1:
        raise ValueError("lift size z must be positive")
    rng = np.random.default_rng(seed)
    shifts = np.zeros((rows_b, cols_b), dtype=np.int32)
    kept_diffs: list[np.ndarray] = []
    for j in range(cols_b):
        for _ in range(max(1, column_tries)):
            col = rng.integers(0, z, size=rows_b, dtype=np.int32)
            if allow_4cycles:
                break
            d = _pair_diffs(col, z)
            if all(not np.any(d == kd) for kd in kept_diffs):
                kept_diffs.append(d)
                break
        else:
            raise QcConstructionError(
                f"no 4-cycle-free column found for column {j} "
                f"after {column_tries} tries (rows_b={rows_b}, z={z})")
        shifts[:, j] = col
    return QcBase(shifts, z)


def regroup_layers(matrix: ParityCheckMatrix, group_size: int) -> ParityCheckMatrix:
    """Return a copy of ``matrix`` whose column layers group ``group_size``
    consecutive columns. ``group_size`` must divide n; 1 restores
    one-layer-per-column and n yields a single layer."""
    if group_size < 1 or matrix.n % group_size != 0:
        raise ValueError(f"group size {group_size} does not divide n={matrix.n}")
    neighbors = [matrix.vars_of_check(c) for c in range(matrix.m)]
    return ParityCheckMatrix(
        neighbors, matrix.n,
        layer_of_column=np.arange(matrix.n, dtype=np.int32) // group_size,
        row_layer_of=matrix.row_layer_of,
    )


# ---------------------------------------------------------------------------
# alist interchange format
# ---------------------------------------------------------------------------

def _int_tokens(line: str, what: str) -> list[int]:
    try:
        return [int(t) for t in line.split()]
    except ValueError as exc:
        raise AlistFormatError(f"non-integer token in {what}: {line!r}") from exc


def load_alist(source: str | TextIO) -> ParityCheckMatrix:
    """Parse an alist stream into a :class:`ParityCheckMatrix`.

    Layout: ``n m`` on the first line, the maximum variable and check
    degrees on the second, then n variable degrees, m check degrees,
    n lines of 1-based check indices per variable and m lines of
    1-based variable indices per check. Zero entries are padding and
    are ignored. ``source`` may be an open text stream or the file
    content itself.

    Raises
    ------
    AlistFormatError
        On a malformed header, an out-of-range index, a mismatch
        between declared and listed degrees, or disagreement between
        the variable and check adjacency sections.
    """
    text = source if isinstance(source, str) else source.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 4:
        raise AlistFormatError("truncated alist: fewer than 4 header lines")
    head = _int_tokens(lines[0], "header")
    if len(head) != 2 or head[0] < 1 or head[1] < 1:
        raise AlistFormatError(f"malformed size line: {lines[0]!r}")
    n, m = head
    maxes = _int_tokens(lines[1], "max-degree line")
    if len(maxes) != 2:
        raise AlistFormatError(f"malformed max-degree line: {lines[1]!r}")
    max_var_deg, max_check_deg = maxes
    var_deg = _int_tokens(lines[2], "variable degree line")
    check_deg = _int_tokens(lines[3], "check degree line")
    if len(var_deg) != n:
        raise AlistFormatError(f"expected {n} variable degrees, got {len(var_deg)}")
    if len(check_deg) != m:
        raise AlistFormatError(f"expected {m} check degrees, got {len(check_deg)}")
    if var_deg and max(var_deg) > max_var_deg:
        raise AlistFormatError("variable degree exceeds declared maximum")
    if check_deg and max(check_deg) > max_check_deg:
        raise AlistFormatError("check degree exceeds declared maximum")
    if len(lines) != 4 + n + m:
        raise AlistFormatError(
            f"expected {4 + n + m} lines, got {len(lines)}")

    def entries(line: str, count: int, top: int, what: str) -> list[int]:
        vals = [t for t in _int_tokens(line, what) if t != 0]
        if len(vals) != count:
            raise AlistFormatError(
                f"{what}: declared degree {count} but listed {len(vals)}")
        out = []
        for t in vals:
            if not 1 <= t <= top:
                raise AlistFormatError(f"{what}: index {t} outside [1, {top}]")
            out.append(t - 1)
        if len(set(out)) != len(out):
            raise AlistFormatError(f"{what}: duplicate index")
        return out

    var_adj = [entries(lines[4 + v], var_deg[v], m, f"variable {v} row")
               for v in range(n)]
    check_adj = [entries(lines[4 + n + c], check_deg[c], n, f"check {c} row")
                 for c in range(m)]

    # the two sections describe one matrix; cross-check them
    from_vars: list[set] = [set() for _ in range(m)]
    for v, checks in enumerate(var_adj):
        for c in checks:
            from_vars[c].add(v)
    for c in range(m):
        if from_vars[c] != set(check_adj[c]):
            raise AlistFormatError(
                f"variable and check sections disagree on check {c}")
    return ParityCheckMatrix(check_adj, n)


def dumps_alist(matrix: ParityCheckMatrix) -> str:
    """Serialize to alist text, zero-padding every adjacency row to the
    maximum degree of its section (the usual alist convention)."""
    out = [f"{matrix.n} {matrix.m}",
           f"{matrix.max_var_degree} {matrix.max_check_degree}",
           " ".join(str(int(d)) for d in matrix.var_deg),
           " ".join(str(int(d)) for d in matrix.check_deg)]
    for v in range(matrix.n):
        row = [int(c) + 1 for c in matrix.checks_of_var(v)]
        row += [0] * (matrix.max_var_degree - len(row))
        out.append(" ".join(map(str, row)))
    for c in range(matrix.m):
        row = [int(v) + 1 for v in matrix.vars_of_check(c)]
        row += [0] * (matrix.max_check_degree - len(row))
        out.append(" ".join(map(str, row)))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# QC shift-table file format
# ---------------------------------------------------------------------------

def load_qc_base(source: str | TextIO) -> QcBase:
    """Parse a shift-table stream: ``rows_b cols_b z`` then rows_b lines
    of cols_b integers, -1 marking the zero block."""
    text = source if isinstance(source, str) else source.read()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty shift-table stream")
    head = _int_tokens(lines[0], "shift-table header")
    if len(head) != 3:
        raise ValueError(f"malformed shift-table header: {lines[0]!r}")
    rows_b, cols_b, z = head
    if len(lines) != 1 + rows_b:
        raise ValueError(f"expected {rows_b} shift rows, got {len(lines) - 1}")
    shifts = np.empty((rows_b, cols_b), dtype=np.int32)
    for i in range(rows_b):
        row = _int_tokens(lines[1 + i], f"shift row {i}")
        if len(row) != cols_b:
            raise ValueError(f"shift row {i} has {len(row)} entries, expected {cols_b}")
        shifts[i] = row
    return QcBase(shifts, z)


def dumps_qc_base(base: QcBase) -> str:
    out = [f"{base.rows_b} {base.cols_b} {base.z}"]
    for i in range(base.rows_b):
        out.append(" ".join(str(int(s)) for s in base.shifts[i]))
    return "\n".join(out) + "\n"


# IEEE 802.16e rate-1/2 shift table for z = 96 (n = 2304, k = 1152).
_WIMAX_R12_Z96 = [
    [-1, 94, 73, -1, -1, -1, -1, -1, 55, 83, -1, -1,  7,  0, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1],
    [-1, 27, -1, -1, -1, 22, 79,  9, -1, -1, -1, 12, -1,  0,  0, -1, -1, -1, -1, -1, -1, -1, -1, -1],
    [-1, -1, -1, 24, 22, 81, -1, 33, -1, -1, -1,  0, -1, -1,  0,  0, -1, -1, -1, -1, -1, -1, -1, -1],
    [61, -1, 47, -1, -1, -1, -1, -1, 65, 25, -1, -1, -1, -1, -1,  0,  0, -1, -1, -1, -1, -1, -1, -1],
    [-1, -1, 39, -1, -1, -1, 84, -1, -1, 41, 72, -1, -1, -1, -1, -1,  0,  0, -1, -1, -1, -1, -1, -1],
    [-1, -1, -1, -1, 46, 40, -1, 82, -1, -1, -1, 79,  0, -1, -1, -1, -1,  0,  0, -1, -1, -1, -1, -1],
    [-1, -1, 95, 53, -1, -1, -1, -1, -1, 14, 18, -1, -1, -1, -1, -1, -1, -1,  0,  0, -1, -1, -1, -1],
    [-1, 11, 73, -1, -1, -1,  2, -1, -1, 47, -1, -1, -1, -1, -1, -1, -1, -1, -1,  0,  0, -1, -1, -1],
    [12, -1, -1, -1, 83, 24, -1, 43, -1, -1, -1, 51, -1, -1, -1, -1, -1, -1, -1, -1,  0,  0, -1, -1],
    [-1, -1, -1, -1, -1, 94, -1, 59, -1, -1, 70, 72, -1, -1, -1, -1, -1, -1, -1, -1, -1,  0,  0, -1],
    [-1, -1,  7, 65, -1, -1, -1, -1, 39, 49, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,  0,  0],
    [43, -1, -1, -1, -1, 66, -1, 41, -1, -1, -1, 26,  7, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1,  0],
]


def wimax_r12_base() -> QcBase:
    """The published 802.16e rate-1/2 shift table at z = 96; expanding it
    gives the (2304, 1152) code."""
    return QcBase(np.asarray(_WIMAX_R12_Z96, dtype=np.int32), 96)
