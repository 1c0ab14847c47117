"""Exact integer and F_p linear algebra.

Integer work (Smith normal form, kernels, subquotients) is done here on
arbitrary-precision Python integers. Rank and row reduction over F_p and Q
are delegated to sympy's ``DomainMatrix``.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import factorint
from sympy.polys.domains import GF, QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import CompositionNonzero, ShapeMismatch


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise ShapeMismatch(f"ragged row of length {len(r)}, expected {cols}")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, value: int) -> "IntMatrix":
        return cls(n, n, tuple(value if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> "IntMatrix":
        return cls.from_rows([list(c) for c in columns], rows).transpose()

    @classmethod
    def block(
        cls,
        grid: Sequence[Sequence[Optional["IntMatrix"]]],
        row_sizes: Sequence[int],
        col_sizes: Sequence[int],
    ) -> "IntMatrix":
        """Assemble a block matrix; ``None`` blocks are zero."""
        out = [[0] * sum(col_sizes) for _ in range(sum(row_sizes))]
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                blk = grid[bi][bj]
                if blk is not None:
                    if (blk.rows, blk.cols) != (rs, cs):
                        raise ShapeMismatch(
                            f"block ({bi},{bj}) is {blk.rows}x{blk.cols}, expected {rs}x{cs}"
                        )
                    for i in range(rs):
                        for j in range(cs):
                            out[r0 + i][c0 + j] = blk.entries[i * cs + j]
                c0 += cs
            r0 += rs
        return cls.from_rows(out, sum(col_sizes))

    @classmethod
    def block_diag(cls, blocks: Sequence["IntMatrix"]) -> "IntMatrix":
        grid = [[b if i == j else None for j, b in enumerate(blocks)] for i in range(len(blocks))]
        return cls.block(grid, [b.rows for b in blocks], [b.cols for b in blocks])

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i * self.cols + j]

    def to_rows(self) -> List[List[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> List[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def columns(self) -> List[List[int]]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        a = self.to_rows()
        b = other.to_rows()
        out = []
        for i in range(self.rows):
            row = [0] * other.cols
            for k, aik in enumerate(a[i]):
                if aik:
                    bk = b[k]
                    for j in range(other.cols):
                        if bk[j]:
                            row[j] += aik * bk[j]
            out.append(row)
        return IntMatrix.from_rows(out, other.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ShapeMismatch(f"cannot add {self.shape} and {other.shape}")
        return IntMatrix(self.rows, self.cols, tuple(x + y for x, y in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * x for x in self.entries))

    def mod(self, p: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(x % p for x in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def power(self, k: int) -> "IntMatrix":
        result = IntMatrix.identity(self.rows)
        for _ in range(k):
            result = result @ self
        return result

    def kron(self, other: "IntMatrix") -> "IntMatrix":
        rows = []
        a = self.to_rows()
        b = other.to_rows()
        for i in range(self.rows):
            for k in range(other.rows):
                rows.append([a[i][j] * b[k][m] for j in range(self.cols) for m in range(other.cols)])
        return IntMatrix.from_rows(rows, self.cols * other.cols)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entry(i, j) for j in col_idx] for i in row_idx], len(col_idx)
        )

    def apply(self, vector: Sequence[int]) -> List[int]:
        if len(vector) != self.cols:
            raise ShapeMismatch(f"vector of length {len(vector)} for {self.shape} matrix")
        return [
            sum(self.entries[i * self.cols + j] * vector[j] for j in range(self.cols) if vector[j])
            for i in range(self.rows)
        ]


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with ``D`` diagonal and ``d1 | d2 | ...``."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix
    rank: int
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def invariant_factors(self) -> List[int]:
        return [self.D.entry(i, i) for i in range(self.rank)]


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: Tuple[int, ...] = ()
    p: Optional[int] = None
    p_exponents: Tuple[int, ...] = ()

    @classmethod
    def from_factors(cls, free_rank: int, factors: Iterable[int], p: Optional[int] = None):
        torsion = []
        p_exponents = []
        for d in factors:
            if d <= 1:
                continue
            for q, e in sorted(factorint(d).items()):
                torsion.append(q**e)
                if p is not None and q == p:
                    p_exponents.append(e)
        return cls(free_rank, tuple(sorted(torsion)), p, tuple(sorted(p_exponents)))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def p_local_is_zero(self) -> bool:
        return self.free_rank == 0 and not self.p_exponents

    def has_p_torsion(self) -> bool:
        return bool(self.p_exponents)

    def as_dict(self) -> Dict[str, object]:
        return {
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
            "p_exponents": list(self.p_exponents),
        }

    def __str__(self) -> str:
        parts = ["Z"] * min(self.free_rank, 1)
        if self.free_rank > 1:
            parts = [f"Z^{self.free_rank}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _identity_rows(n: int) -> List[List[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf(A: IntMatrix) -> SNFResult:
    """Smith normal form with smallest-absolute-value pivoting.

    Ties between equal pivots are broken by (row, col), so the output is a
    deterministic function of the input.
    """
    m, n = A.rows, A.cols
    a = A.to_rows()
    U = _identity_rows(m)
    Ui = _identity_rows(m)
    V = _identity_rows(n)
    Vi = _identity_rows(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(i, j, c):
        # row_i += c * row_j
        ai, aj = a[i], a[j]
        for k in range(n):
            ai[k] += c * aj[k]
        ui, uj = U[i], U[j]
        for k in range(m):
            ui[k] += c * uj[k]
        for row in Ui:
            row[j] -= c * row[i]

    def add_col(j, i, c):
        # col_j += c * col_i
        for row in a:
            row[j] += c * row[i]
        for row in V:
            row[j] += c * row[i]
        vi, vj = Vi[i], Vi[j]
        for k in range(n):
            vi[k] -= c * vj[k]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def smallest(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        return best

    t = 0
    while t < min(m, n):
        found = smallest(t)
        if found is None:
            break
        _, i, j = found
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            piv = a[t][t]
            clean = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    clean = clean and a[t][j] == 0
            if not clean:
                _, i, j = smallest(t)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return SNFResult(
        D=IntMatrix.from_rows(a, n),
        U=IntMatrix.from_rows(U, m),
        V=IntMatrix.from_rows(V, n),
        rank=t,
        U_inv=IntMatrix.from_rows(Ui, m),
        V_inv=IntMatrix.from_rows(Vi, n),
    )


@dataclass
class QuotientPresentation:
    """ker(d_out)/im(d_in) with generators and a coordinate map."""

    invariants: AbelianInvariants
    kernel_basis: IntMatrix
    orders: List[int] = field(default_factory=list)
    generators: List[List[int]] = field(default_factory=list)
    _kernel_rows: Optional[IntMatrix] = None
    _to_cyclic: Optional[IntMatrix] = None
    _positions: List[int] = field(default_factory=list)

    def coordinates(self, cocycle: Sequence[int]) -> List[int]:
        """Coordinates of a cocycle's class, reduced mod each finite order."""
        y = self._kernel_rows.apply(cocycle)
        w = self._to_cyclic.apply(y)
        out = []
        for pos, order in zip(self._positions, self.orders):
            out.append(w[pos] % order if order else w[pos])
        return out


def quotient_presentation(d_in: IntMatrix, d_out: IntMatrix, p: Optional[int] = None) -> QuotientPresentation:
    if d_in.rows != d_out.cols:
        raise ShapeMismatch(
            f"incoming map lands in rank {d_in.rows}, outgoing map starts at rank {d_out.cols}"
        )
    if not (d_out @ d_in).is_zero():
        raise CompositionNonzero("d_out * d_in is not zero")
    n = d_out.cols
    out_snf = snf(d_out)
    r = out_snf.rank
    kernel_idx = list(range(r, n))
    kernel_basis = out_snf.V.submatrix(range(n), kernel_idx)
    kernel_rows = out_snf.V_inv.submatrix(kernel_idx, range(n))
    coords = kernel_rows @ d_in
    in_snf = snf(coords)
    k = len(kernel_idx)
    diag = [in_snf.D.entry(i, i) for i in range(in_snf.rank)] + [0] * (k - in_snf.rank)
    gens_matrix = kernel_basis @ in_snf.U_inv
    orders, gens, positions = [], [], []
    for pos, d in enumerate(diag):
        if d == 1:
            continue
        orders.append(d)
        gens.append(gens_matrix.column(pos))
        positions.append(pos)
    invariants = AbelianInvariants.from_factors(k - in_snf.rank, [d for d in diag if d > 1], p)
    return QuotientPresentation(
        invariants=invariants,
        kernel_basis=kernel_basis,
        orders=orders,
        generators=gens,
        _kernel_rows=kernel_rows,
        _to_cyclic=in_snf.U,
        _positions=positions,
    )


def subquotient(d_in: IntMatrix, d_out: IntMatrix, p: int) -> AbelianInvariants:
    """Invariants of ker(d_out)/im(d_in), with the p-primary part recorded."""
    return quotient_presentation(d_in, d_out, p).invariants


def _domain_matrix(A: IntMatrix) -> DomainMatrix:
    return DomainMatrix([[ZZ(x) for x in row] for row in A.to_rows()], A.shape, ZZ)


def fp_rank(A: IntMatrix, p: int) -> int:
    if A.rows == 0 or A.cols == 0:
        return 0
    return _domain_matrix(A).convert_to(GF(p)).rank()


def q_rank(A: IntMatrix) -> int:
    if A.rows == 0 or A.cols == 0:
        return 0
    return _domain_matrix(A).convert_to(QQ).rank()


def fp_rref(A: IntMatrix, p: int) -> Tuple[List[List[int]], Tuple[int, ...]]:
    if A.rows == 0 or A.cols == 0:
        return [[0] * A.cols for _ in range(A.rows)], ()
    reduced, pivots = _domain_matrix(A).convert_to(GF(p)).rref()
    rows = [[int(x) % p for x in row] for row in reduced.to_list()]
    return rows, tuple(pivots)


def fp_nullspace(A: IntMatrix, p: int) -> List[List[int]]:
    """Basis of {x : A x = 0} over F_p."""
    rows, pivots = fp_rref(A, p)
    basis = []
    for f in range(A.cols):
        if f in pivots:
            continue
        x = [0] * A.cols
        x[f] = 1
        for i, pc in enumerate(pivots):
            x[pc] = (-rows[i][f]) % p
        basis.append(x)
    return basis


def fp_solve(A: IntMatrix, b: Sequence[int], p: int) -> Optional[List[int]]:
    """One solution of A x = b over F_p, or None."""
    aug = IntMatrix.block(
        [[A, IntMatrix.from_columns([list(b)], A.rows)]], [A.rows], [A.cols, 1]
    )
    rows, pivots = fp_rref(aug, p)
    if A.cols in pivots:
        return None
    x = [0] * A.cols
    for i, pc in enumerate(pivots):
        x[pc] = rows[i][A.cols]
    return x


def fp_independent_columns(columns: Sequence[Sequence[int]], length: int, p: int) -> List[int]:
    """Indices of a maximal F_p-independent prefix-greedy subset of columns."""
    if not columns:
        return []
    _, pivots = fp_rref(IntMatrix.from_columns(columns, length), p)
    return list(pivots)


class FpQuotient:
    """ker(d_out)/im(d_in) over F_p with chosen representatives."""

    def __init__(self, d_in: IntMatrix, d_out: IntMatrix, p: int) -> None:
        if d_in.rows != d_out.cols:
            raise ShapeMismatch(
                f"incoming map lands in dimension {d_in.rows}, outgoing starts at {d_out.cols}"
            )
        self.p = p
        self.length = d_out.cols
        image = [d_in.column(j) for j in fp_independent_columns(d_in.mod(p).columns(), self.length, p)]
        kernel = fp_nullspace(d_out.mod(p), p)
        chosen = fp_independent_columns(image + kernel, self.length, p)
        self.image = image
        self.representatives = [kernel[j - len(image)] for j in chosen if j >= len(image)]
        self._frame = IntMatrix.from_columns(
            [list(v) for v in image] + self.representatives, self.length
        ) if (image or self.representatives) else IntMatrix.zeros(self.length, 0)

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def coordinates(self, cocycle: Sequence[int]) -> List[int]:
        if not self.representatives:
            return []
        x = fp_solve(self._frame, [c % self.p for c in cocycle], self.p)
        if x is None:
            raise CompositionNonzero("vector is not a cocycle")
        return x[len(self.image):]


def fp_cohomology_dim(d_in: IntMatrix, d_out: IntMatrix, p: int) -> int:
    return d_out.cols - fp_rank(d_out, p) - fp_rank(d_in, p)
