"""Exact sparse linear algebra over the integers.

Smith normal form with unimodular transforms, kernels, integer solves,
homology of composable differentials, and localization of invariant factors.
Everything is arbitrary-precision; a global resource cap guards against
combinatorial blowups (the chain complexes upstream grow fast in (n, k, q)).

Matrices are immutable values; every reduction returns transform matrices
rather than mutating its input.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd

from .errors import CapExceeded, CompositionError


@dataclass(frozen=True)
class ResourceCaps:
    """Global guard rails for every exact computation."""

    max_nnz: int = 8_000_000
    max_entry_bits: int = 8192
    max_basis: int = 1_000_000
    max_group_order: int = 200_000
    max_bar_cells: int = 6_000_000

    def check_basis(self, size, **ctx):
        if size > self.max_basis:
            raise CapExceeded(f"basis size {size} exceeds cap {self.max_basis}", size=size, **ctx)

    def check_bar(self, cells, **ctx):
        if cells > self.max_bar_cells:
            raise CapExceeded(f"bar complex with {cells} cells exceeds cap {self.max_bar_cells}",
                              cells=cells, **ctx)

    def check_group(self, order, **ctx):
        if order > self.max_group_order:
            raise CapExceeded(f"group order {order} exceeds cap {self.max_group_order}",
                              order=order, **ctx)


DEFAULT_CAPS = ResourceCaps()


class ExactMatrix:
    """Immutable sparse integer matrix (absent entry = zero)."""

    __slots__ = ("rows", "cols", "entries", "_col_cache")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        clean = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
            if v:
                clean[(r, c)] = int(v)
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "_col_cache", None)

    def __setattr__(self, *args):
        raise AttributeError("ExactMatrix is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def _unsafe(cls, rows, cols, entries):
        """Trusted constructor: entries already clean (no zeros, in bounds)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "rows", rows)
        object.__setattr__(obj, "cols", cols)
        object.__setattr__(obj, "entries", entries)
        object.__setattr__(obj, "_col_cache", None)
        return obj

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def from_dense(cls, data):
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(r, c): v for r, row in enumerate(data)
                                for c, v in enumerate(row) if v})

    @classmethod
    def diagonal(cls, diag, rows=None, cols=None):
        n = len(diag)
        rows = n if rows is None else rows
        cols = n if cols is None else cols
        return cls(rows, cols, {(i, i): d for i, d in enumerate(diag) if d})

    # -- basics ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def __getitem__(self, rc):
        return self.entries.get(rc, 0)

    @property
    def nnz(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self):
        return ExactMatrix._unsafe(self.cols, self.rows,
                                   {(c, r): v for (r, c), v in self.entries.items()})

    def scale(self, k):
        return ExactMatrix(self.rows, self.cols,
                           {rc: k * v for rc, v in self.entries.items()})

    def add(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        out = dict(self.entries)
        for rc, v in other.entries.items():
            w = out.get(rc, 0) + v
            if w:
                out[rc] = w
            else:
                out.pop(rc, None)
        return ExactMatrix(self.rows, self.cols, out)

    def sub(self, other):
        return self.add(other.scale(-1))

    def row_dict(self):
        rows = {}
        for (r, c), v in self.entries.items():
            rows.setdefault(r, {})[c] = v
        return rows

    def col_dict(self):
        if self._col_cache is None:
            cols = {}
            for (r, c), v in self.entries.items():
                cols.setdefault(c, {})[r] = v
            object.__setattr__(self, "_col_cache", cols)
        return self._col_cache

    def mul(self, other):
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        orows = other.row_dict()
        out = {}
        for (r, k), v in self.entries.items():
            row = orows.get(k)
            if not row:
                continue
            for c, w in row.items():
                rc = (r, c)
                s = out.get(rc, 0) + v * w
                if s:
                    out[rc] = s
                else:
                    del out[rc]
        return ExactMatrix._unsafe(self.rows, other.cols, out)

    def matvec(self, vec):
        """Apply to a sparse column vector {index: value}."""
        out = {}
        cols = self.col_dict()
        for j, x in vec.items():
            col = cols.get(j)
            if not col:
                continue
            for i, v in col.items():
                s = out.get(i, 0) + v * x
                if s:
                    out[i] = s
                else:
                    del out[i]
        return out

    def column(self, j):
        return {r: v for (r, c), v in self.entries.items() if c == j}

    def submatrix(self, row_indices, col_indices):
        rmap = {r: i for i, r in enumerate(row_indices)}
        cmap = {c: j for j, c in enumerate(col_indices)}
        ents = {}
        for (r, c), v in self.entries.items():
            if r in rmap and c in cmap:
                ents[(rmap[r], cmap[c])] = v
        return ExactMatrix(len(row_indices), len(col_indices), ents)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, nnz={self.nnz})"

    # -- coordinate text serialization --------------------------------------

    def to_coordinate_text(self):
        lines = [f"{self.rows} {self.cols} {self.nnz}"]
        for (r, c) in sorted(self.entries):
            lines.append(f"{r} {c} {self.entries[(r, c)]}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_coordinate_text(cls, text):
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        rows, cols, nnz = map(int, lines[0].split())
        if len(lines) - 1 != nnz:
            raise ValueError(f"header promises {nnz} entries, found {len(lines) - 1}")
        ents = {}
        for ln in lines[1:]:
            r, c, v = ln.split()
            ents[(int(r), int(c))] = int(v)
        return cls(rows, cols, ents)


# ---------------------------------------------------------------------------
# Smith normal form


class _Sparse:
    """Mutable dict-of-dicts matrix, rows and columns mirrored."""

    __slots__ = ("rows", "cols", "nnz")

    def __init__(self):
        self.rows = {}
        self.cols = {}
        self.nnz = 0

    @classmethod
    def from_matrix(cls, m):
        w = cls()
        for (r, c), v in m.entries.items():
            w.rows.setdefault(r, {})[c] = v
            w.cols.setdefault(c, {})[r] = v
        w.nnz = m.nnz
        return w

    @classmethod
    def identity(cls, n):
        w = cls()
        for i in range(n):
            w.rows[i] = {i: 1}
            w.cols[i] = {i: 1}
        w.nnz = n
        return w

    def set(self, r, c, v):
        if v:
            row = self.rows.setdefault(r, {})
            if c not in row:
                self.nnz += 1
            row[c] = v
            self.cols.setdefault(c, {})[r] = v
        else:
            row = self.rows.get(r)
            if row and c in row:
                self.nnz -= 1
                del row[c]
                if not row:
                    del self.rows[r]
                col = self.cols[c]
                del col[r]
                if not col:
                    del self.cols[c]

    def get(self, r, c):
        return self.rows.get(r, {}).get(c, 0)

    def row_axpy(self, dst, src, q):
        """row[dst] += q * row[src]"""
        if not q:
            return
        rows = self.rows
        cols = self.cols
        srow = rows.get(src)
        if not srow:
            return
        drow = rows.get(dst)
        if drow is None:
            drow = rows[dst] = {}
        nnz = self.nnz
        for c, v in srow.items():
            w = drow.get(c)
            if w is None:
                drow[c] = qv = q * v
                cols[c][dst] = qv
                nnz += 1
            else:
                w += q * v
                if w:
                    drow[c] = w
                    cols[c][dst] = w
                else:
                    del drow[c]
                    col = cols[c]
                    del col[dst]
                    if not col:
                        del cols[c]
                    nnz -= 1
        if not drow:
            del rows[dst]
        self.nnz = nnz

    def col_axpy(self, dst, src, q):
        if not q:
            return
        rows = self.rows
        cols = self.cols
        scol = cols.get(src)
        if not scol:
            return
        dcol = cols.get(dst)
        if dcol is None:
            dcol = cols[dst] = {}
        nnz = self.nnz
        for r, v in scol.items():
            w = dcol.get(r)
            if w is None:
                dcol[r] = qv = q * v
                rows[r][dst] = qv
                nnz += 1
            else:
                w += q * v
                if w:
                    dcol[r] = w
                    rows[r][dst] = w
                else:
                    del dcol[r]
                    row = rows[r]
                    del row[dst]
                    if not row:
                        del rows[r]
                    nnz -= 1
        if not dcol:
            del cols[dst]
        self.nnz = nnz

    def row_2x2(self, r1, r2, s, t, u, v):
        """(row r1, row r2) <- (s*r1 + t*r2, u*r1 + v*r2)"""
        cs = set(self.rows.get(r1, {})) | set(self.rows.get(r2, {}))
        for c in cs:
            a = self.get(r1, c)
            b = self.get(r2, c)
            self.set(r1, c, s * a + t * b)
            self.set(r2, c, u * a + v * b)

    def col_2x2(self, c1, c2, s, t, u, v):
        rs = set(self.cols.get(c1, {})) | set(self.cols.get(c2, {}))
        for r in rs:
            a = self.get(r, c1)
            b = self.get(r, c2)
            self.set(r, c1, s * a + t * b)
            self.set(r, c2, u * a + v * b)

    def negate_row(self, r):
        for c, v in list(self.rows.get(r, {}).items()):
            self.set(r, c, -v)

    def swap_rows(self, r1, r2):
        if r1 == r2:
            return
        self.row_2x2(r1, r2, 0, 1, 1, 0)

    def swap_cols(self, c1, c2):
        if c1 == c2:
            return
        self.col_2x2(c1, c2, 0, 1, 1, 0)

    def to_matrix(self, rows, cols):
        ents = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                ents[(r, c)] = v
        return ExactMatrix._unsafe(rows, cols, ents)

    def max_bits(self):
        best = 0
        for row in self.rows.values():
            for v in row.values():
                b = v.bit_length() if v >= 0 else (-v).bit_length()
                if b > best:
                    best = b
        return best


def _xgcd(a, b):
    """g, s, t with s*a + t*b = g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass
class SNFData:
    """Full Smith decomposition: left . matrix . right = diagonal."""

    diag: list
    rank: int
    left: ExactMatrix | None = None
    right: ExactMatrix | None = None
    left_inv: ExactMatrix | None = None
    right_inv: ExactMatrix | None = None


class _SNFEngine:
    """Elimination engine with fill-aware pivoting and transform tracking.

    Pivots prefer unit entries with low Markowitz cost; unit pivots keep
    coefficient growth at bay on the near-incidence matrices produced by the
    chain complexes.
    """

    def __init__(self, m: ExactMatrix, caps: ResourceCaps,
                 track_left=False, track_right=False,
                 track_left_inv=False, track_right_inv=False):
        self.nrows = m.rows
        self.ncols = m.cols
        self.caps = caps
        self.w = _Sparse.from_matrix(m)
        self.left = _Sparse.identity(m.rows) if track_left else None
        self.right_t = _Sparse.identity(m.cols) if track_right else None
        self.left_inv_t = _Sparse.identity(m.rows) if track_left_inv else None
        self.right_inv = _Sparse.identity(m.cols) if track_right_inv else None
        self.pivots = []  # (row, col) in pivot order

    # transform-aware elementary operations ------------------------------

    def _check_caps(self):
        if self.w.nnz > self.caps.max_nnz:
            raise CapExceeded("nonzero count exceeded during SNF",
                              nnz=self.w.nnz, pivots_done=len(self.pivots))

    def row_axpy(self, dst, src, q):
        self.w.row_axpy(dst, src, q)
        if self.left is not None:
            self.left.row_axpy(dst, src, q)
        if self.left_inv_t is not None:
            self.left_inv_t.row_axpy(src, dst, -q)

    def col_axpy(self, dst, src, q):
        self.w.col_axpy(dst, src, q)
        if self.right_t is not None:
            self.right_t.row_axpy(dst, src, q)
        if self.right_inv is not None:
            self.right_inv.row_axpy(src, dst, -q)

    def row_2x2(self, r1, r2, s, t, u, v):
        d = s * v - t * u
        assert d in (1, -1)
        self.w.row_2x2(r1, r2, s, t, u, v)
        if self.left is not None:
            self.left.row_2x2(r1, r2, s, t, u, v)
        if self.left_inv_t is not None:
            # inverse transpose of [[s,t],[u,v]] applied as a row op
            self.left_inv_t.row_2x2(r1, r2, d * v, -d * u, -d * t, d * s)

    def col_2x2(self, c1, c2, s, t, u, v):
        d = s * v - t * u
        assert d in (1, -1)
        self.w.col_2x2(c1, c2, s, t, u, v)
        if self.right_t is not None:
            self.right_t.row_2x2(c1, c2, s, t, u, v)
        if self.right_inv is not None:
            self.right_inv.row_2x2(c1, c2, d * v, -d * u, -d * t, d * s)

    def negate_row(self, r):
        self.w.negate_row(r)
        if self.left is not None:
            self.left.negate_row(r)
        if self.left_inv_t is not None:
            self.left_inv_t.negate_row(r)

    def swap_rows(self, r1, r2):
        if r1 != r2:
            self.row_2x2(r1, r2, 0, 1, 1, 0)

    def swap_cols(self, c1, c2):
        if c1 != c2:
            self.col_2x2(c1, c2, 0, 1, 1, 0)

    # main loop -----------------------------------------------------------

    def reduce(self):
        w = self.w
        heap = [(len(row), r) for r, row in w.rows.items()]
        heapq.heapify(heap)
        pivoted_rows = set()
        since_bits_check = 0
        while heap:
            rec_nnz, r0 = heapq.heappop(heap)
            row = w.rows.get(r0)
            if row is None or r0 in pivoted_rows:
                continue
            if len(row) != rec_nnz:
                heapq.heappush(heap, (len(row), r0))
                continue
            # best entry within the lightest row: unit first, then col fill
            best_c = best_key = None
            for c, v in row.items():
                key = (0 if v in (1, -1) else 1, len(w.cols[c]), abs(v))
                if best_key is None or key < best_key:
                    best_key, best_c = key, c
            c0 = best_c
            touched = set()
            saw_gcd = False
            # alternate clearing the pivot column and row until both stay clean
            while True:
                col = w.cols.get(c0, {})
                for r in [r for r in col if r != r0]:
                    a = w.rows[r0][c0]
                    b = w.rows.get(r, {}).get(c0, 0)
                    if b == 0:
                        continue
                    touched.add(r)
                    if b % a == 0:
                        self.row_axpy(r, r0, -(b // a))
                    else:
                        g, s, t = _xgcd(a, b)
                        self.row_2x2(r0, r, s, t, -(b // g), a // g)
                        saw_gcd = True
                row = w.rows.get(r0, {})
                dirty = False
                for c in [c for c in row if c != c0]:
                    a = w.rows[r0][c0]
                    b = w.rows[r0].get(c, 0)
                    if b == 0:
                        continue
                    touched.update(w.cols.get(c, ()))
                    if b % a == 0:
                        self.col_axpy(c, c0, -(b // a))
                    else:
                        g, s, t = _xgcd(a, b)
                        self.col_2x2(c0, c, s, t, -(b // g), a // g)
                        saw_gcd = True
                        dirty = True
                if not dirty and len(w.cols.get(c0, {})) == 1:
                    break
                self._check_caps()
            self.pivots.append((r0, c0))
            pivoted_rows.add(r0)
            for r in touched:
                if r != r0 and r not in pivoted_rows and r in w.rows:
                    heapq.heappush(heap, (len(w.rows[r]), r))
            self._check_caps()
            since_bits_check += 1
            if saw_gcd or since_bits_check >= 512:
                since_bits_check = 0
                if w.max_bits() > self.caps.max_entry_bits:
                    raise CapExceeded("entry bit-length exceeded during SNF",
                                      bits=w.max_bits(), pivots_done=len(self.pivots))

        self._fix_divisibility()
        self._normalize()
        return self._finish()

    def _fix_divisibility(self):
        # unit pivots divide everything; only non-unit pivots need folding
        w = self.w
        nonunit = [k for k, (r, c) in enumerate(self.pivots)
                   if abs(w.get(r, c)) != 1]
        for ii, i in enumerate(nonunit):
            ri, ci = self.pivots[i]
            for j in nonunit[ii + 1:]:
                rj, cj = self.pivots[j]
                a = w.get(ri, ci)
                b = w.get(rj, cj)
                if b % a == 0:
                    continue
                # fold b into the chain: diag(a, b) -> diag(gcd, lcm)
                self.col_axpy(ci, cj, 1)
                g, s, t = _xgcd(a, b)
                self.row_2x2(ri, rj, s, t, -(b // g), a // g)
                leftover = w.get(ri, cj)
                if leftover:
                    self.col_axpy(cj, ci, -(leftover // g))

    def _normalize(self):
        w = self.w
        for (r, c) in self.pivots:
            if w.get(r, c) < 0:
                self.negate_row(r)
        # order pivots so the divisibility chain reads along the diagonal
        self.pivots.sort(key=lambda rc: abs(self.w.get(*rc)))
        where_row = {r: k for k, (r, _c) in enumerate(self.pivots)}
        where_col = {c: k for k, (_r, c) in enumerate(self.pivots)}
        for k in range(len(self.pivots)):
            r, c = self.pivots[k]
            if r != k:
                self.swap_rows(k, r)
                other = where_row.get(k)
                del where_row[r]
                if other is not None:
                    pr, pc = self.pivots[other]
                    self.pivots[other] = (r, pc)
                    where_row[r] = other
                where_row[k] = k
                self.pivots[k] = (k, c)
            if c != k:
                self.swap_cols(k, c)
                other = where_col.get(k)
                del where_col[c]
                if other is not None:
                    pr, pc = self.pivots[other]
                    self.pivots[other] = (pr, c)
                    where_col[c] = other
                where_col[k] = k
                self.pivots[k] = (k, k)

    def _finish(self):
        diag = []
        for k in range(min(self.nrows, self.ncols)):
            diag.append(self.w.get(k, k))
        rank = sum(1 for d in diag if d)
        data = SNFData(diag=diag, rank=rank)
        if self.left is not None:
            data.left = self.left.to_matrix(self.nrows, self.nrows)
        if self.right_t is not None:
            data.right = self.right_t.to_matrix(self.ncols, self.ncols).transpose()
        if self.left_inv_t is not None:
            data.left_inv = self.left_inv_t.to_matrix(self.nrows, self.nrows).transpose()
        if self.right_inv is not None:
            data.right_inv = self.right_inv.to_matrix(self.ncols, self.ncols)
        return data


def smith_normal_form(m: ExactMatrix, caps: ResourceCaps | None = None):
    """Diagonalize by unimodular transforms.

    Returns (diag, left, right) with left . m . right the nonnegative diagonal
    matrix holding diag, and diag a divisibility chain d1 | d2 | ... followed
    by zeros.
    """
    caps = caps or DEFAULT_CAPS
    eng = _SNFEngine(m, caps, track_left=True, track_right=True)
    data = eng.reduce()
    return data.diag, data.left, data.right


def smith_full(m: ExactMatrix, caps: ResourceCaps | None = None,
               left_inv=False, right_inv=False) -> SNFData:
    caps = caps or DEFAULT_CAPS
    eng = _SNFEngine(m, caps, track_left=True, track_right=True,
                     track_left_inv=left_inv, track_right_inv=right_inv)
    return eng.reduce()


def smith_diagonal(m: ExactMatrix, caps: ResourceCaps | None = None):
    """Invariant factors only (no transforms); the fast path."""
    caps = caps or DEFAULT_CAPS
    eng = _SNFEngine(m, caps)
    return eng.reduce().diag


def matrix_rank(m: ExactMatrix, caps: ResourceCaps | None = None) -> int:
    return sum(1 for d in smith_diagonal(m, caps) if d)


def kernel_basis(m: ExactMatrix, caps: ResourceCaps | None = None) -> ExactMatrix:
    """Columns form a basis of the integer kernel (a saturated sublattice)."""
    data = smith_full(m, caps)
    ker_cols = list(range(data.rank, m.cols))
    return data.right.submatrix(list(range(m.cols)), ker_cols)


def solve(m: ExactMatrix, rhs: dict, caps: ResourceCaps | None = None,
          snf: SNFData | None = None):
    """One integer solution x of m x = rhs (rhs a sparse column), or None."""
    data = snf or smith_full(m, caps)
    lb = data.left.matvec(rhs)
    y = {}
    for i, v in lb.items():
        if i < data.rank:
            d = data.diag[i]
            if v % d:
                return None
            y[i] = v // d
        elif v:
            return None
    return data.right.matvec(y)


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyResult:
    """Free rank plus invariant-factor torsion, canonical."""

    free_rank: int
    invariant_factors: tuple = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        facs = tuple(int(d) for d in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", facs)
        for d in facs:
            if d < 2:
                raise ValueError(f"invariant factor {d} < 2")
        for a, b in zip(facs, facs[1:]):
            if b % a:
                raise ValueError(f"broken divisibility chain {facs}")

    def is_trivial(self):
        return self.free_rank == 0 and not self.invariant_factors

    def order(self):
        """Group order, or None if infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"


def homology_from_diagonals(dim: int, rank_out: int, in_diag) -> HomologyResult:
    """ker/im structure from the two SNF diagonals.

    For d_out . d_in = 0 on a rank-`dim` middle term: the kernel of d_out is a
    saturated direct summand, so the image invariant factors of d_in are the
    torsion of the quotient and the free rank is dim - rank(out) - rank(in).
    """
    in_facs = [d for d in in_diag if d]
    free = dim - rank_out - len(in_facs)
    if free < 0:
        raise ValueError("inconsistent ranks: maps do not compose to zero?")
    torsion = tuple(d for d in in_facs if d >= 2)
    return HomologyResult(free, torsion)


def homology_at(d_in: ExactMatrix, d_out: ExactMatrix,
                caps: ResourceCaps | None = None) -> HomologyResult:
    """Homology ker(d_out)/im(d_in) at the middle term of C --d_in--> C' --d_out--> C''."""
    if d_in.rows != d_out.cols:
        raise CompositionError(
            f"shape mismatch: d_in lands in Z^{d_in.rows}, d_out starts from Z^{d_out.cols}")
    if not d_out.mul(d_in).is_zero():
        raise CompositionError("d_out . d_in != 0")
    rank_out = matrix_rank(d_out, caps)
    in_diag = smith_diagonal(d_in, caps)
    return homology_from_diagonals(d_out.cols, rank_out, in_diag)


def strip_primes_of(d: int, m: int) -> int:
    """Remove from d every prime factor shared with m."""
    g = gcd(d, m)
    while g > 1:
        d //= g
        g = gcd(d, m)
    return d


def localize(h: HomologyResult, m: int) -> HomologyResult:
    """Tensor with Z[1/m]: kill torsion supported on primes dividing m."""
    if m < 1:
        raise ValueError("localization integer must be >= 1")
    if m == 1:
        return h
    facs = []
    for d in h.invariant_factors:
        d2 = strip_primes_of(d, m)
        if d2 >= 2:
            facs.append(d2)
    return HomologyResult(h.free_rank, tuple(facs))
