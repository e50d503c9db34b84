"""Exact field arithmetic and dense matrices over Q and GF(p).

Entries are stored as plain Python numbers: ``int``/``Fraction`` for the
rationals and ``int`` residues in ``[0, p)`` for prime fields.  The field tag
lives on the :class:`Matrix`; combining matrices over different fields raises
:class:`FieldMismatchError`.

Row reduction is done on sparse rows.  Over Q the elimination is
fraction-free (Bareiss-Jordan): every intermediate entry is an integer minor
of the row-scaled input, and rows are only divided by their pivot at the very
end.  Over GF(p) plain Gauss-Jordan is used.
"""

from __future__ import annotations

import os
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


class FieldMismatchError(ValueError):
    pass


class DimensionError(ValueError):
    pass


class CoefficientGuardError(ArithmeticError):
    """An intermediate coefficient exceeded ``CORINGKIT_MAX_BITS``."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class Field:
    """Ground field tag: ``Field(0)`` is Q, ``Field(p)`` is GF(p)."""

    __slots__ = ("characteristic",)

    def __init__(self, characteristic: int = 0):
        if characteristic:
            if not (characteristic < 2**31 and _is_prime(characteristic)):
                raise ValueError(f"GF(p) needs a prime p < 2^31, got {characteristic}")
        object.__setattr__(self, "characteristic", characteristic)

    def __setattr__(self, key, value):
        raise AttributeError("Field is immutable")

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"

    @property
    def name(self) -> str:
        return "rationals" if self.characteristic == 0 else f"gf:{self.characteristic}"

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction or ``"p/q"`` string) into the field."""
        p = self.characteristic
        if isinstance(x, str):
            x = Fraction(x.strip())
        if p == 0:
            if isinstance(x, Fraction):
                return x.numerator if x.denominator == 1 else x
            if isinstance(x, int):
                return x
            raise TypeError(f"cannot coerce {x!r} into QQ")
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, p)) % p
        if isinstance(x, int):
            return x % p
        raise TypeError(f"cannot coerce {x!r} into GF({p})")

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.characteristic:
            return pow(x, -1, self.characteristic)
        return _norm(Fraction(1) / x)

    def fmt(self, x) -> str:
        return str(x)


QQ = Field(0)


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


def parse_field(text: str) -> Field:
    """Parse ``rationals``/``QQ``/``gf:p``/``gf p``."""
    t = text.strip().lower()
    if t in ("rationals", "qq", "q"):
        return QQ
    for prefix in ("gf:", "gf(", "gf "):
        if t.startswith(prefix):
            return GF(int(t[len(prefix):].rstrip(")")))
    raise ValueError(f"unknown field {text!r}")


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def _max_bits() -> int | None:
    v = os.environ.get("CORINGKIT_MAX_BITS")
    return int(v) if v else None


class Matrix:
    """Immutable dense matrix with a field tag."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows: Iterable[Iterable], ncols: int | None = None,
                 _trusted: bool = False):
        if _trusted:
            rws = rows
        else:
            f = field
            rws = tuple(tuple(f(x) for x in r) for r in rows)
        if ncols is None:
            if not rws:
                raise DimensionError("ncols required for a matrix with no rows")
            ncols = len(rws[0])
        for r in rws:
            if len(r) != ncols:
                raise DimensionError("ragged rows")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", len(rws))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rws)

    def __setattr__(self, key, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def _raw(cls, field: Field, rows, ncols: int) -> "Matrix":
        return cls(field, tuple(tuple(r) for r in rows), ncols, _trusted=True)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int) -> "Matrix":
        z = (0,) * ncols
        return cls(field, tuple(z for _ in range(nrows)), ncols, _trusted=True)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        return cls(field, tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)),
                   n, _trusted=True)

    @classmethod
    def column(cls, field: Field, values: Sequence) -> "Matrix":
        return cls(field, [[v] for v in values], 1)

    @classmethod
    def unit_column(cls, field: Field, n: int, i: int) -> "Matrix":
        return cls(field, tuple((1,) if k == i else (0,) for k in range(n)), 1, _trusted=True)

    @classmethod
    def unit_row(cls, field: Field, n: int, i: int) -> "Matrix":
        return cls(field, (tuple(1 if k == i else 0 for k in range(n)),), n, _trusted=True)

    @classmethod
    def from_columns(cls, field: Field, nrows: int, cols: Sequence[Sequence]) -> "Matrix":
        return cls(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @classmethod
    def hstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        field = _common_field(mats)
        n = mats[0].nrows
        if any(m.nrows != n for m in mats):
            raise DimensionError("hstack row mismatch")
        rows = tuple(tuple(x for m in mats for x in m.rows[i]) for i in range(n))
        return cls(field, rows, sum(m.ncols for m in mats), _trusted=True)

    @classmethod
    def vstack(cls, mats: Sequence["Matrix"]) -> "Matrix":
        field = _common_field(mats)
        c = mats[0].ncols
        if any(m.ncols != c for m in mats):
            raise DimensionError("vstack column mismatch")
        return cls(field, tuple(r for m in mats for r in m.rows), c, _trusted=True)

    # -- basic access -------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]

    def take_columns(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, tuple(tuple(r[j] for j in idx) for r in self.rows),
                      len(idx), _trusted=True)

    def take_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, tuple(self.rows[i] for i in idx), self.ncols, _trusted=True)

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, tuple(zip(*self.rows)) if self.nrows else
                      tuple(() for _ in range(self.ncols)), self.nrows, _trusted=True)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and all(
            x == (1 if i == j else 0) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def first_difference(self, other: "Matrix") -> int | None:
        """Index of the first column where ``self`` and ``other`` differ."""
        self._check(other)
        for j in range(self.ncols):
            for i in range(self.nrows):
                if self.rows[i][j] != other.rows[i][j]:
                    return j
        return None

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and self.rows == other.rows)

    def __hash__(self):
        return hash((self.field, self.shape, self.rows))

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Matrix<{self.field} {self.nrows}x{self.ncols}>[{body}]"

    # -- arithmetic -----------------------------------------------------
    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if self.shape != other.shape:
            raise DimensionError(f"shape {self.shape} vs {other.shape}")

    def _reduce_rows(self, rows):
        p = self.field.characteristic
        if p:
            return tuple(tuple(x % p for x in r) for r in rows)
        return tuple(tuple(_norm(x) for x in r) for r in rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        rows = (tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix(self.field, self._reduce_rows(rows), self.ncols, _trusted=True)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        rows = (tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix(self.field, self._reduce_rows(rows), self.ncols, _trusted=True)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self._reduce_rows(tuple(-x for x in r) for r in self.rows),
                      self.ncols, _trusted=True)

    def scale(self, c) -> "Matrix":
        c = self.field(c) if not isinstance(c, (int, Fraction)) or self.field.characteristic else c
        return Matrix(self.field, self._reduce_rows(tuple(c * x for x in r) for r in self.rows),
                      self.ncols, _trusted=True)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        p = self.field.characteristic
        sparse = [[(j, b) for j, b in enumerate(r) if b] for r in other.rows]
        n = other.ncols
        out = []
        for r in self.rows:
            acc = [0] * n
            for k, a in enumerate(r):
                if a:
                    for j, b in sparse[k]:
                        acc[j] += a * b
            if p:
                out.append(tuple(x % p for x in acc))
            else:
                out.append(tuple(_norm(x) for x in acc))
        return Matrix(self.field, tuple(out), n, _trusted=True)

    def apply(self, v: Sequence) -> tuple:
        """Matrix times a coordinate vector."""
        if len(v) != self.ncols:
            raise DimensionError("vector length mismatch")
        p = self.field.characteristic
        nz = [(k, a) for k, a in enumerate(v) if a]
        res = []
        for r in self.rows:
            s = sum(r[k] * a for k, a in nz)
            res.append(s % p if p else _norm(s))
        return tuple(res)

    def rank(self) -> int:
        return len(rref_kernel(self)[1])


def _common_field(mats: Sequence[Matrix]) -> Field:
    if not mats:
        raise DimensionError("empty matrix list")
    f = mats[0].field
    for m in mats[1:]:
        if m.field != f:
            raise FieldMismatchError(f"{f} vs {m.field}")
    return f


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row/column index of ``(i, j)`` is ``i * dim(b) + j``."""
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    p = a.field.characteristic
    rows = []
    for ra in a.rows:
        for rb in b.rows:
            if p:
                rows.append(tuple((x * y) % p for x in ra for y in rb))
            else:
                rows.append(tuple(_norm(x * y) if x and y else 0 for x in ra for y in rb))
    return Matrix(a.field, tuple(rows), a.ncols * b.ncols, _trusted=True)


def kron_all(*mats: Matrix) -> Matrix:
    out = mats[0]
    for m in mats[1:]:
        out = kron(out, m)
    return out


# ---------------------------------------------------------------------------
# Row reduction on sparse rows


def _to_int_row(row: dict) -> dict:
    """Scale a rational sparse row to coprime-free integers."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            d = v.denominator
            den = den * d // _gcd(den, d)
    if den == 1:
        return {k: int(v) for k, v in row.items()}
    return {k: int(v * den) for k, v in row.items()}


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _bareiss_jordan(rows: list[dict], ncols: int, guard: int | None) -> tuple[list[dict], list[int]]:
    """Fraction-free Gauss-Jordan over Z.  Returns normalised rational RREF rows."""
    work = [r for r in (_to_int_row(r) for r in rows) if r]
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(ncols):
        if r >= len(work):
            break
        best = None
        for i in range(r, len(work)):
            if work[i].get(c):
                if best is None or len(work[i]) < len(work[best]):
                    best = i
        if best is None:
            continue
        work[r], work[best] = work[best], work[r]
        prow = work[r]
        piv = prow[c]
        for i in range(len(work)):
            if i == r:
                continue
            row = work[i]
            a = row.get(c, 0)
            if a:
                new = {}
                for k, v in row.items():
                    new[k] = piv * v
                for k, v in prow.items():
                    new[k] = new.get(k, 0) - a * v
                if prev != 1:
                    new = {k: v // prev for k, v in new.items() if v}
                else:
                    new = {k: v for k, v in new.items() if v}
            else:
                if piv == prev:
                    continue
                new = {k: piv * v // prev for k, v in row.items()}
            if guard is not None:
                for v in new.values():
                    if v.bit_length() > guard:
                        raise CoefficientGuardError(
                            f"coefficient of {v.bit_length()} bits exceeds CORINGKIT_MAX_BITS={guard}")
            work[i] = new
        pivots.append(c)
        prev = piv
        r += 1
    out = []
    for i, c in enumerate(pivots):
        row = work[i]
        d = row[c]
        out.append({k: _norm(Fraction(v, d)) for k, v in sorted(row.items())})
    return out, pivots


def _gauss_jordan_mod(rows: list[dict], ncols: int, p: int) -> tuple[list[dict], list[int]]:
    work = [{k: v % p for k, v in r.items() if v % p} for r in rows]
    work = [r for r in work if r]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= len(work):
            break
        best = None
        for i in range(r, len(work)):
            if work[i].get(c):
                if best is None or len(work[i]) < len(work[best]):
                    best = i
        if best is None:
            continue
        work[r], work[best] = work[best], work[r]
        inv = pow(work[r][c], -1, p)
        prow = {k: (v * inv) % p for k, v in work[r].items()}
        work[r] = prow
        for i in range(len(work)):
            if i == r:
                continue
            row = work[i]
            a = row.get(c)
            if a:
                new = dict(row)
                for k, v in prow.items():
                    nv = (new.get(k, 0) - a * v) % p
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                work[i] = new
        pivots.append(c)
        r += 1
    return [dict(sorted(work[i].items())) for i in range(len(pivots))], pivots


def rref_sparse(field: Field, rows: list[dict], ncols: int) -> tuple[list[dict], list[int]]:
    """RREF of sparse rows (``{col: value}``).  Returns (nonzero rref rows, pivots)."""
    if field.characteristic:
        return _gauss_jordan_mod(rows, ncols, field.characteristic)
    return _bareiss_jordan(rows, ncols, _max_bits())


def _sparse_rows(m: Matrix) -> list[dict]:
    return [{j: x for j, x in enumerate(r) if x} for r in m.rows]


def _dense(rows: list[dict], ncols: int) -> tuple:
    return tuple(tuple(r.get(j, 0) for j in range(ncols)) for r in rows)


class SubspaceBasis:
    """A subspace of ``k^ambient`` stored as RREF rows."""

    __slots__ = ("field", "ambient", "rows", "pivots")

    def __init__(self, field: Field, ambient: int, rows: list[dict], pivots: list[int]):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "rows", tuple(rows))
        object.__setattr__(self, "pivots", tuple(pivots))

    def __setattr__(self, key, value):
        raise AttributeError("SubspaceBasis is immutable")

    @classmethod
    def span(cls, field: Field, ambient: int, vectors: Iterable[Sequence | dict]) -> "SubspaceBasis":
        rows = []
        for v in vectors:
            if isinstance(v, dict):
                rows.append(v)
            else:
                rows.append({j: x for j, x in enumerate(v) if x})
        r, piv = rref_sparse(field, rows, ambient)
        return cls(field, ambient, r, piv)

    @classmethod
    def whole(cls, field: Field, n: int) -> "SubspaceBasis":
        return cls(field, n, [{i: 1} for i in range(n)], list(range(n)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def matrix(self) -> Matrix:
        """Basis vectors as rows (the RREF matrix)."""
        return Matrix(self.field, _dense(list(self.rows), self.ambient), self.ambient, _trusted=True)

    def inclusion(self) -> Matrix:
        """Basis vectors as columns: ``ambient x dim``."""
        return self.matrix().T

    def vectors(self) -> list[tuple]:
        return list(_dense(list(self.rows), self.ambient))

    def coordinates(self, v: Sequence) -> tuple | None:
        """Coordinates of ``v`` in this basis, or ``None`` if ``v`` is outside."""
        coords = tuple(v[p] for p in self.pivots)
        p = self.field.characteristic
        recon = [0] * self.ambient
        for c, row in zip(coords, self.rows):
            if c:
                for k, x in row.items():
                    recon[k] += c * x
        if p:
            recon = [x % p for x in recon]
        else:
            recon = [_norm(x) for x in recon]
        if tuple(recon) != tuple(v):
            return None
        return coords

    def coordinate_matrix(self, m: Matrix) -> Matrix:
        """Coordinates of every column of ``m``; raises if a column escapes."""
        cols = []
        for j, c in enumerate(m.columns()):
            x = self.coordinates(c)
            if x is None:
                raise ValueError(f"column {j} is not in the subspace")
            cols.append(x)
        return Matrix.from_columns(self.field, self.dim, cols) if cols else \
            Matrix.zeros(self.field, self.dim, 0)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def __eq__(self, other):
        return (isinstance(other, SubspaceBasis) and self.field == other.field
                and self.ambient == other.ambient and self.rows == other.rows)

    def __hash__(self):
        return hash((self.ambient, self.pivots))

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient})"


def rref_kernel(m: Matrix) -> tuple[Matrix, list[int], SubspaceBasis]:
    """Reduced row echelon form, pivot columns and kernel of ``m``."""
    rows, piv = rref_sparse(m.field, _sparse_rows(m), m.ncols)
    rref = Matrix(m.field, _dense(rows, m.ncols) + ((0,) * m.ncols,) * (m.nrows - len(rows)),
                  m.ncols, _trusted=True)
    return rref, piv, _kernel_from_rref(m.field, rows, piv, m.ncols)


def _kernel_from_rref(field: Field, rows: list[dict], piv: list[int], ncols: int) -> SubspaceBasis:
    pset = set(piv)
    free = [j for j in range(ncols) if j not in pset]
    p = field.characteristic
    vecs = []
    for f in free:
        v = {f: 1}
        for r, c in zip(rows, piv):
            x = r.get(f)
            if x:
                v[c] = (-x) % p if p else -x
        vecs.append(v)
    # already independent; the span call only canonicalises to RREF
    return SubspaceBasis.span(field, ncols, vecs)


def kernel(m: Matrix) -> SubspaceBasis:
    return rref_kernel(m)[2]


def image(m: Matrix) -> SubspaceBasis:
    """Column space of ``m``."""
    return SubspaceBasis.span(m.field, m.nrows, _sparse_rows(m.T))


def rank(m: Matrix) -> int:
    return len(rref_sparse(m.field, _sparse_rows(m), m.ncols)[1])


def solve_linear(m: Matrix, b: Sequence) -> tuple | None:
    """One solution of ``m x = b`` (free variables zero) or ``None``."""
    if len(b) != m.nrows:
        raise DimensionError(f"rhs has length {len(b)}, matrix has {m.nrows} rows")
    field = m.field
    b = tuple(field(x) for x in b)
    rows = []
    for r, y in zip(m.rows, b):
        d = {j: x for j, x in enumerate(r) if x}
        if y:
            d[m.ncols] = y
        rows.append(d)
    red, piv = rref_sparse(field, rows, m.ncols + 1)
    if piv and piv[-1] == m.ncols:
        return None
    x = [0] * m.ncols
    for r, c in zip(red, piv):
        x[c] = r.get(m.ncols, 0)
    return tuple(x)


def solve_many(m: Matrix, rhs: Matrix) -> Matrix | None:
    """Solve ``m X = rhs`` column-wise with the same tie-break; ``None`` if any column fails."""
    if rhs.nrows != m.nrows:
        raise DimensionError("rhs row mismatch")
    if m.field != rhs.field:
        raise FieldMismatchError(f"{m.field} vs {rhs.field}")
    n = m.ncols
    rows = []
    for r, y in zip(m.rows, rhs.rows):
        d = {j: x for j, x in enumerate(r) if x}
        for t, v in enumerate(y):
            if v:
                d[n + t] = v
        rows.append(d)
    red, piv = rref_sparse(m.field, rows, n + rhs.ncols)
    if any(c >= n for c in piv):
        return None
    out = [[0] * rhs.ncols for _ in range(n)]
    for r, c in zip(red, piv):
        for t in range(rhs.ncols):
            out[c][t] = r.get(n + t, 0)
    return Matrix(m.field, tuple(tuple(r) for r in out), rhs.ncols, _trusted=True)


def infeasibility_certificate(m: Matrix, b: Sequence) -> tuple | None:
    """A vector ``y`` with ``y m = 0`` and ``y . b != 0`` (exists iff ``m x = b`` is inconsistent)."""
    field = m.field
    b = tuple(field(x) for x in b)
    left = kernel(m.T)
    p = field.characteristic
    for y in left.vectors():
        s = sum(a * c for a, c in zip(y, b))
        if (s % p if p else s) != 0:
            return y
    return None


def inverse(m: Matrix) -> Matrix | None:
    if m.nrows != m.ncols:
        return None
    return solve_many(m, Matrix.identity(m.field, m.nrows)) if rank(m) == m.nrows else None


def naive_rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Textbook Gauss-Jordan with field division at every step.

    Kept deliberately independent of the sparse/fraction-free path so the two
    can be compared.
    """
    field = m.field
    p = field.characteristic
    a = [list(r) for r in m.rows]
    if not p:
        a = [[Fraction(x) for x in r] for r in a]
    piv = []
    r = 0
    for c in range(m.ncols):
        pr = next((i for i in range(r, m.nrows) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = pow(a[r][c], -1, p) if p else 1 / a[r][c]
        a[r] = [(x * inv) % p if p else x * inv for x in a[r]]
        for i in range(m.nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [((x - f * y) % p if p else x - f * y) for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    return Matrix(field, a, m.ncols), piv


# ---------------------------------------------------------------------------
# Linear matrix equations  sum_t L_t X R_t = K


class MatrixEquationSystem:
    """Collects linear equations in an unknown ``rows x cols`` matrix ``X``.

    Each equation is ``sum_t c_t * L_t @ X @ R_t == K``.  Vectorisation is
    row-major, so ``vec(L X R) = kron(L, R^T) vec(X)``; the coefficient rows are
    assembled sparsely without materialising the Kronecker products.
    """

    def __init__(self, field: Field, rows: int, cols: int):
        self.field = field
        self.shape = (rows, cols)
        self._eq_rows: list[dict] = []
        self._rhs: list = []

    @property
    def n_unknowns(self) -> int:
        return self.shape[0] * self.shape[1]

    def add(self, terms: Sequence[tuple], rhs: Matrix | None = None):
        """Add ``sum L X R = rhs``; ``terms`` holds ``(L, R)`` or ``(coef, L, R)``."""
        p = self.field.characteristic
        nr, nc = self.shape
        out_shape = None
        acc: dict[tuple[int, int], dict[int, object]] = {}
        for t in terms:
            if len(t) == 2:
                coef, L, R = 1, t[0], t[1]
            else:
                coef, L, R = t
            if L.field != self.field or R.field != self.field:
                raise FieldMismatchError("equation over a different field")
            if L.ncols != nr or R.nrows != nc:
                raise DimensionError(f"term shapes {L.shape}, {R.shape} do not fit X {self.shape}")
            shp = (L.nrows, R.ncols)
            if out_shape is None:
                out_shape = shp
            elif shp != out_shape:
                raise DimensionError("terms of one equation have different shapes")
            lnz = [[(k, x) for k, x in enumerate(r) if x] for r in L.rows]
            rnz: list[list] = [[] for _ in range(R.ncols)]
            for l, rr in enumerate(R.rows):
                for j, y in enumerate(rr):
                    if y:
                        rnz[j].append((l, y))
            for i in range(L.nrows):
                if not lnz[i]:
                    continue
                for j in range(R.ncols):
                    if not rnz[j]:
                        continue
                    row = acc.setdefault((i, j), {})
                    for k, x in lnz[i]:
                        base = k * nc
                        for l, y in rnz[j]:
                            key = base + l
                            row[key] = row.get(key, 0) + coef * x * y
        if out_shape is None:
            raise DimensionError("empty equation")
        if rhs is not None:
            if rhs.shape != out_shape:
                raise DimensionError(f"rhs shape {rhs.shape} vs {out_shape}")
        for i in range(out_shape[0]):
            for j in range(out_shape[1]):
                row = acc.get((i, j), {})
                if p:
                    row = {k: v % p for k, v in row.items() if v % p}
                else:
                    row = {k: _norm(v) for k, v in row.items() if v}
                y = rhs.rows[i][j] if rhs is not None else 0
                if not row and not y:
                    continue
                self._eq_rows.append(row)
                self._rhs.append(y)

    def coefficient_matrix(self) -> Matrix:
        n = self.n_unknowns
        return Matrix(self.field, _dense(self._eq_rows, n), n, _trusted=True) if self._eq_rows \
            else Matrix.zeros(self.field, 0, n)

    def rhs_vector(self) -> tuple:
        return tuple(self._rhs)

    def _reshape(self, vec) -> Matrix:
        nr, nc = self.shape
        return Matrix(self.field, tuple(tuple(vec[i * nc:(i + 1) * nc]) for i in range(nr)),
                      nc, _trusted=True)

    def solve(self) -> Matrix | None:
        """The RREF-tie-broken particular solution, or ``None`` if inconsistent."""
        n = self.n_unknowns
        rows = []
        for r, y in zip(self._eq_rows, self._rhs):
            d = dict(r)
            if y:
                d[n] = y
            rows.append(d)
        red, piv = rref_sparse(self.field, rows, n + 1)
        if piv and piv[-1] == n:
            return None
        x = [0] * n
        for r, c in zip(red, piv):
            x[c] = r.get(n, 0)
        return self._reshape(x)

    def solution_space(self) -> list[Matrix]:
        """RREF basis of the homogeneous solutions, reshaped to matrices."""
        n = self.n_unknowns
        red, piv = rref_sparse(self.field, list(self._eq_rows), n)
        ker = _kernel_from_rref(self.field, red, piv, n)
        return [self._reshape(v) for v in ker.vectors()]

    def homogeneous_dim(self) -> int:
        n = self.n_unknowns
        _, piv = rref_sparse(self.field, list(self._eq_rows), n)
        return n - len(piv)

    def certificate(self) -> tuple | None:
        """Infeasibility certificate ``y`` (``y A = 0``, ``y b != 0``) when inconsistent."""
        a = self.coefficient_matrix()
        if a.nrows == 0:
            return None
        return infeasibility_certificate(a, self._rhs)


def kron_left_terms(field: Field, c: int, p: int, q: int):
    """``kron(I_c, Y) = sum_i P_i Y Q_i`` for ``Y`` of shape ``p x q``."""
    out = []
    ip, iq = Matrix.identity(field, p), Matrix.identity(field, q)
    for i in range(c):
        out.append((kron(Matrix.unit_column(field, c, i), ip), kron(Matrix.unit_row(field, c, i), iq)))
    return out


def kron_right_terms(field: Field, c: int, p: int, q: int):
    """``kron(Y, I_c) = sum_i P_i Y Q_i`` for ``Y`` of shape ``p x q``."""
    out = []
    ip, iq = Matrix.identity(field, p), Matrix.identity(field, q)
    for i in range(c):
        out.append((kron(ip, Matrix.unit_column(field, c, i)), kron(iq, Matrix.unit_row(field, c, i))))
    return out


def fmt_vector(v: Sequence) -> str:
    return " ".join(str(x) for x in v)


def fmt_matrix(m: Matrix) -> str:
    return " ; ".join(fmt_vector(r) for r in m.rows) if m.nrows else "(empty)"
