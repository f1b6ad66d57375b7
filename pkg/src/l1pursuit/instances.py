"""Instance tooling: synthetic generation, ERC checking, file I/O, LP export.

An instance lives on disk as a directory holding ``A.mtx`` (MatrixMarket
array or coordinate), ``b.mtx`` (array), optionally ``xtrue.mtx`` and
``meta.json``.  The MatrixMarket reader/writer here is deliberately
hand-rolled: round trips must be bit-exact for dense data and
structure-exact for sparse data, and coordinate files with duplicate
entries are rejected with their line number, neither of which stock
readers guarantee.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np
import scipy.sparse

from .kernels import is_sparse, validate_matrix

# Enumeration oracle is desk-scale only.
LP_ORACLE_MAX_N = 12


class InstanceFormatError(ValueError):
    """Malformed instance file or inconsistent dimensions."""


class InfeasibleInstanceError(RuntimeError):
    """The linear system Ax = b has no solution."""


@dataclass
class BpInstance:
    """A basis-pursuit instance: matrix, right-hand side, optional ground truth."""

    A: object
    b: np.ndarray
    x_true: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.A.shape[0]

    @property
    def n(self) -> int:
        return self.A.shape[1]

    @property
    def label(self) -> str:
        return str(self.meta.get("label", f"instance-{self.m}x{self.n}"))

    def validate(self) -> None:
        validate_matrix(self.A)
        b = np.asarray(self.b, dtype=float)
        if b.ndim != 1 or b.shape[0] != self.m:
            raise InstanceFormatError(f"b has length {b.shape}, expected {self.m}")
        if not np.all(np.isfinite(b)):
            raise InstanceFormatError("b must be finite")
        if self.x_true is not None:
            xt = np.asarray(self.x_true, dtype=float)
            if xt.shape != (self.n,):
                raise InstanceFormatError(f"x_true has shape {xt.shape}, expected ({self.n},)")
            resid = np.linalg.norm(self.A @ xt - b)
            if resid > 1e-10 * (1.0 + np.linalg.norm(b)):
                raise InstanceFormatError(
                    f"planted solution violates Ax = b (residual {resid:.3e})"
                )


@dataclass(frozen=True)
class GenSpec:
    """Parameters of the Gaussian synthetic ensemble."""

    m: int
    n: int
    s: int
    dynrange: float = 1.0
    seed: int = 0
    ensemble: str = "gaussian"

    def __post_init__(self):
        if not (0 <= self.s <= self.m <= self.n):
            raise ValueError(f"need s <= m <= n, got s={self.s}, m={self.m}, n={self.n}")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if self.dynrange < 0:
            raise ValueError("dynamic range exponent must be >= 0")
        if self.ensemble != "gaussian":
            raise ValueError(f"unsupported ensemble {self.ensemble!r}")


def generate(spec: GenSpec) -> BpInstance:
    """Draw a seeded Gaussian instance with a planted sparse solution.

    A has i.i.d. standard normal entries with columns rescaled to unit
    Euclidean norm.  The planted support is uniform without replacement;
    magnitudes are 10**U[0, dynrange] with independent Rademacher signs,
    and b = A x*.  Bit-identical for a fixed seed.
    """
    rng = np.random.default_rng(spec.seed)
    A = rng.standard_normal((spec.m, spec.n))
    A /= np.linalg.norm(A, axis=0)
    support = np.sort(rng.choice(spec.n, size=spec.s, replace=False))
    magnitudes = 10.0 ** rng.uniform(0.0, spec.dynrange, size=spec.s)
    signs = rng.integers(0, 2, size=spec.s) * 2.0 - 1.0
    x_true = np.zeros(spec.n)
    x_true[support] = signs * magnitudes
    b = A @ x_true
    meta = {
        "label": f"gauss-m{spec.m}-n{spec.n}-s{spec.s}-d{spec.dynrange:g}-seed{spec.seed}",
        "seed": spec.seed,
        "m": spec.m,
        "n": spec.n,
        "s": spec.s,
        "dynrange": spec.dynrange,
    }
    return BpInstance(A=A, b=b, x_true=x_true, meta=meta)


@dataclass(frozen=True)
class ErcResult:
    holds: bool
    value: float


def check_erc(instance: BpInstance) -> ErcResult:
    """Exact-recovery condition of the planted support.

    Returns max over off-support columns of ``||pinv(A_S) a_i||_1`` and
    whether it is below one.  Requires a planted solution with full
    column-rank A_S.
    """
    if instance.x_true is None:
        raise ValueError("check_erc needs an instance with a planted solution")
    A = instance.A.toarray() if is_sparse(instance.A) else np.asarray(instance.A, dtype=float)
    support = np.nonzero(instance.x_true)[0]
    if support.size == 0:
        return ErcResult(holds=True, value=0.0)
    A_S = A[:, support]
    if np.linalg.matrix_rank(A_S) < support.size:
        raise ValueError("A_S is rank deficient; ERC is undefined")
    off = np.setdiff1d(np.arange(instance.n), support)
    if off.size == 0:
        return ErcResult(holds=True, value=0.0)
    pinv = np.linalg.pinv(A_S)
    value = float(np.abs(pinv @ A[:, off]).sum(axis=0).max())
    return ErcResult(holds=value < 1.0, value=value)


# ---------------------------------------------------------------------------
# MatrixMarket I/O


def _mm_tokens(path: Path):
    """Yield (line_number, tokens) for non-comment, non-blank lines after the header."""
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if lineno == 1:
                yield lineno, stripped.split()
                continue
            if not stripped or stripped.startswith("%"):
                continue
            yield lineno, stripped.split()


def read_mm(path) -> np.ndarray | scipy.sparse.csc_array:
    """Read a MatrixMarket file (real, general; array or coordinate)."""
    path = Path(path)
    rows = _mm_tokens(path)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise InstanceFormatError(f"{path}: empty file") from None
    if len(header) != 5 or header[0] != "%%MatrixMarket" or header[1] != "matrix":
        raise InstanceFormatError(f"{path}:1: bad MatrixMarket header")
    fmt, fld, sym = header[2], header[3], header[4]
    if fmt not in ("array", "coordinate") or fld not in ("real", "integer") or sym != "general":
        raise InstanceFormatError(f"{path}:1: unsupported MatrixMarket variant {fmt}/{fld}/{sym}")
    try:
        lineno, size = next(rows)
    except StopIteration:
        raise InstanceFormatError(f"{path}: missing size line") from None

    if fmt == "array":
        if len(size) != 2:
            raise InstanceFormatError(f"{path}:{lineno}: array size line needs 2 integers")
        m, n = int(size[0]), int(size[1])
        values = []
        for lineno, toks in rows:
            for t in toks:
                try:
                    values.append(float(t))
                except ValueError:
                    raise InstanceFormatError(f"{path}:{lineno}: bad value {t!r}") from None
        if len(values) != m * n:
            raise InstanceFormatError(
                f"{path}: expected {m * n} entries, found {len(values)}"
            )
        return np.array(values).reshape((n, m)).T  # file is column-major

    if len(size) != 3:
        raise InstanceFormatError(f"{path}:{lineno}: coordinate size line needs 3 integers")
    m, n, nnz = int(size[0]), int(size[1]), int(size[2])
    ii = np.empty(nnz, dtype=np.int64)
    jj = np.empty(nnz, dtype=np.int64)
    vv = np.empty(nnz, dtype=float)
    seen: dict[tuple[int, int], int] = {}
    count = 0
    for lineno, toks in rows:
        if len(toks) != 3:
            raise InstanceFormatError(f"{path}:{lineno}: coordinate entry needs 'i j value'")
        if count >= nnz:
            raise InstanceFormatError(f"{path}:{lineno}: more entries than the declared {nnz}")
        try:
            i, j, v = int(toks[0]), int(toks[1]), float(toks[2])
        except ValueError:
            raise InstanceFormatError(f"{path}:{lineno}: bad coordinate entry {toks}") from None
        if not (1 <= i <= m and 1 <= j <= n):
            raise InstanceFormatError(f"{path}:{lineno}: index ({i}, {j}) out of bounds")
        if (i, j) in seen:
            raise InstanceFormatError(
                f"{path}:{lineno}: duplicate entry ({i}, {j}); first seen on line {seen[(i, j)]}"
            )
        seen[(i, j)] = lineno
        ii[count], jj[count], vv[count] = i - 1, j - 1, v
        count += 1
    if count != nnz:
        raise InstanceFormatError(f"{path}: expected {nnz} entries, found {count}")
    coo = scipy.sparse.coo_array((vv, (ii, jj)), shape=(m, n))
    csc = scipy.sparse.csc_array(coo)
    csc.sort_indices()
    return csc


def write_mm(path, M) -> None:
    """Write a matrix or vector to MatrixMarket (array for dense, coordinate for sparse)."""
    path = Path(path)
    if is_sparse(M):
        csc = scipy.sparse.csc_array(M)
        csc.sort_indices()
        m, n = csc.shape
        with open(path, "w", encoding="ascii") as fh:
            fh.write("%%MatrixMarket matrix coordinate real general\n")
            fh.write(f"{m} {n} {csc.nnz}\n")
            for j in range(n):
                for k in range(csc.indptr[j], csc.indptr[j + 1]):
                    fh.write(f"{csc.indices[k] + 1} {j + 1} {float(csc.data[k])!r}\n")
        return
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    m, n = M.shape
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix array real general\n")
        fh.write(f"{m} {n}\n")
        for j in range(n):
            for i in range(m):
                fh.write(f"{float(M[i, j])!r}\n")


def _read_mm_vector(path) -> np.ndarray:
    v = read_mm(path)
    if is_sparse(v):
        v = v.toarray()
    v = np.asarray(v)
    if v.ndim != 2 or v.shape[1] != 1:
        raise InstanceFormatError(f"{path}: expected a single-column vector, got shape {v.shape}")
    return v[:, 0].copy()


def write_instance(instance: BpInstance, dirpath) -> None:
    """Write A.mtx, b.mtx, optional xtrue.mtx and meta.json into a directory."""
    instance.validate()
    dirpath = Path(dirpath)
    dirpath.mkdir(parents=True, exist_ok=True)
    write_mm(dirpath / "A.mtx", instance.A)
    write_mm(dirpath / "b.mtx", instance.b)
    if instance.x_true is not None:
        write_mm(dirpath / "xtrue.mtx", instance.x_true)
    if instance.meta:
        with open(dirpath / "meta.json", "w", encoding="ascii") as fh:
            json.dump(instance.meta, fh, indent=2, sort_keys=True)
            fh.write("\n")


def read_instance(dirpath) -> BpInstance:
    """Read an instance directory written by :func:`write_instance`."""
    dirpath = Path(dirpath)
    a_path = dirpath / "A.mtx"
    b_path = dirpath / "b.mtx"
    if not a_path.is_file():
        raise InstanceFormatError(f"missing {a_path}")
    if not b_path.is_file():
        raise InstanceFormatError(f"missing {b_path}")
    A = read_mm(a_path)
    b = _read_mm_vector(b_path)
    if b.shape[0] != A.shape[0]:
        raise InstanceFormatError(
            f"{b_path}: b has length {b.shape[0]} but A has {A.shape[0]} rows"
        )
    x_true = None
    if (dirpath / "xtrue.mtx").is_file():
        x_true = _read_mm_vector(dirpath / "xtrue.mtx")
        if x_true.shape[0] != A.shape[1]:
            raise InstanceFormatError(
                f"xtrue has length {x_true.shape[0]} but A has {A.shape[1]} columns"
            )
    meta = {}
    if (dirpath / "meta.json").is_file():
        with open(dirpath / "meta.json", "r", encoding="ascii") as fh:
            meta = json.load(fh)
    instance = BpInstance(A=A, b=b, x_true=x_true, meta=meta)
    instance.validate()
    return instance


# ---------------------------------------------------------------------------
# LP reformulation (MPS export)


def _mps_entry(col: str, row: str, value: float) -> str:
    return f"    {col:<10}{row:<10}{value:.17g}\n"


def export_lp(instance: BpInstance, path) -> None:
    """Write the split LP  min 1'x+ + 1'x-  s.t.  A x+ - A x- = b,  x+, x- >= 0.

    MPS layout with one (row, value) pair per COLUMNS line.  Values carry 17
    significant digits so a re-import reproduces the instance exactly.
    """
    instance.validate()
    path = Path(path)
    m, n = instance.m, instance.n
    A = instance.A
    dense = not is_sparse(A)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"NAME          {instance.label}\n")
        fh.write("ROWS\n")
        fh.write(" N  COST\n")
        for i in range(m):
            fh.write(f" E  R{i + 1:05d}\n")
        fh.write("COLUMNS\n")
        for j in range(n):
            for name, sign in ((f"XP{j + 1:05d}", 1.0), (f"XN{j + 1:05d}", -1.0)):
                fh.write(_mps_entry(name, "COST", 1.0))
                if dense:
                    col_rows = np.nonzero(A[:, j])[0]
                    col_vals = A[col_rows, j]
                else:
                    start, stop = A.indptr[j], A.indptr[j + 1]
                    col_rows = A.indices[start:stop]
                    col_vals = A.data[start:stop]
                for i, v in zip(col_rows, col_vals):
                    fh.write(_mps_entry(name, f"R{i + 1:05d}", sign * float(v)))
        fh.write("RHS\n")
        for i in range(m):
            if instance.b[i] != 0.0:
                fh.write(_mps_entry("RHS1", f"R{i + 1:05d}", float(instance.b[i])))
        fh.write("ENDATA\n")


def read_lp_export(path) -> BpInstance:
    """Re-import an MPS file written by :func:`export_lp` as a BpInstance.

    Only the split structure produced by the exporter is accepted; anything
    else raises :class:`InstanceFormatError`.
    """
    path = Path(path)
    rows_order: list[str] = []
    cols: dict[str, dict[str, float]] = {}
    rhs: dict[str, float] = {}
    section = None
    with open(path, "r", encoding="ascii") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("*"):
                continue
            if not line[0].isspace():
                section = line.split()[0]
                continue
            toks = line.split()
            if section == "ROWS":
                if len(toks) != 2 or toks[0] not in ("N", "E"):
                    raise InstanceFormatError(f"{path}:{lineno}: unsupported row {line!r}")
                if toks[0] == "E":
                    rows_order.append(toks[1])
            elif section == "COLUMNS":
                if len(toks) != 3:
                    raise InstanceFormatError(f"{path}:{lineno}: expected 'col row value'")
                cols.setdefault(toks[0], {})[toks[1]] = float(toks[2])
            elif section == "RHS":
                if len(toks) != 3:
                    raise InstanceFormatError(f"{path}:{lineno}: expected 'set row value'")
                rhs[toks[1]] = float(toks[2])
            elif section in ("NAME", "ENDATA", None):
                continue
            else:
                raise InstanceFormatError(f"{path}:{lineno}: unsupported section {section!r}")
    xp = sorted(name for name in cols if name.startswith("XP"))
    xn = sorted(name for name in cols if name.startswith("XN"))
    if len(xp) != len(xn) or set(cols) != set(xp) | set(xn):
        raise InstanceFormatError(f"{path}: columns do not form an XP/XN split")
    m, n = len(rows_order), len(xp)
    row_index = {name: i for i, name in enumerate(rows_order)}
    A = np.zeros((m, n))
    for j, (p_name, n_name) in enumerate(zip(xp, xn)):
        if p_name[2:] != n_name[2:]:
            raise InstanceFormatError(f"{path}: mismatched column pair {p_name}/{n_name}")
        p_col, n_col = dict(cols[p_name]), dict(cols[n_name])
        if p_col.pop("COST", None) != 1.0 or n_col.pop("COST", None) != 1.0:
            raise InstanceFormatError(f"{path}: objective coefficients of {p_name} are not 1")
        for row, v in p_col.items():
            A[row_index[row], j] = v
        for row, v in n_col.items():
            if A[row_index[row], j] != -v:
                raise InstanceFormatError(f"{path}: {n_name} is not the negation of {p_name}")
        if set(n_col) != set(p_col):
            raise InstanceFormatError(f"{path}: {n_name} pattern differs from {p_name}")
    b = np.zeros(m)
    for row, v in rhs.items():
        if row not in row_index:
            raise InstanceFormatError(f"{path}: RHS references unknown row {row!r}")
        b[row_index[row]] = v
    return BpInstance(A=A, b=b)


# ---------------------------------------------------------------------------
# Enumeration oracle


@dataclass(frozen=True)
class LpSolution:
    objective: float
    solution: np.ndarray
    tie: bool


def lp_oracle(instance: BpInstance, rel_tol: float = 1e-9) -> LpSolution:
    """Exact desk-scale optimum of min ||x||_1 s.t. Ax = b by support enumeration.

    Every support of size <= m with full column rank and a consistent
    system contributes one candidate; the l1-minimal candidate wins, ties
    broken by lexicographically smallest support.  ``tie`` reports whether
    distinct minimizers were seen.  Limited to n <= 12.
    """
    if instance.n > LP_ORACLE_MAX_N:
        raise ValueError(f"lp_oracle is limited to n <= {LP_ORACLE_MAX_N}, got n={instance.n}")
    A = instance.A.toarray() if is_sparse(instance.A) else np.asarray(instance.A, dtype=float)
    b = np.asarray(instance.b, dtype=float)
    m, n = A.shape
    b_norm = np.linalg.norm(b)
    feas_tol = rel_tol * (1.0 + b_norm)

    candidates: list[tuple[float, tuple[int, ...], np.ndarray]] = []
    for size in range(0, min(m, n) + 1):
        for S in combinations(range(n), size):
            if size == 0:
                if b_norm <= feas_tol:
                    candidates.append((0.0, S, np.zeros(n)))
                continue
            A_S = A[:, S]
            if np.linalg.matrix_rank(A_S) < size:
                continue
            x_S, _, _, _ = np.linalg.lstsq(A_S, b, rcond=None)
            if np.linalg.norm(A_S @ x_S - b) > feas_tol:
                continue
            x = np.zeros(n)
            x[list(S)] = x_S
            candidates.append((float(np.abs(x_S).sum()), S, x))
    if not candidates:
        raise InfeasibleInstanceError("no support of size <= m solves Ax = b")

    best_obj = min(c[0] for c in candidates)
    cutoff = best_obj + rel_tol * (1.0 + best_obj)
    minimal = sorted((c for c in candidates if c[0] <= cutoff), key=lambda c: c[1])
    solution = minimal[0][2]
    scale = 1.0 + float(np.abs(solution).max())
    tie = any(
        float(np.abs(c[2] - solution).max()) > rel_tol * scale for c in minimal[1:]
    )
    return LpSolution(objective=best_obj, solution=solution, tie=tie)
