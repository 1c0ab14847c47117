"""Finite dimensional associative algebras over F_p."""

from itertools import product
from typing import List, Optional, Sequence

from . import constants
from .constants import MAX_ENUMERATION
from .errors import ShapeMismatch, UnsupportedInput
from .linalg import IntMatrix, fp_independent_columns, fp_nullspace, fp_rank, fp_solve

Vector = List[int]


class FpAlgebra:
    """Structure constants: e_i e_j = sum_k table[i][j][k] e_k."""

    def __init__(
        self,
        p: int,
        table: Sequence[Sequence[Sequence[int]]],
        unit: Optional[Sequence[int]] = None,
        max_enumeration: int = MAX_ENUMERATION,
    ) -> None:
        self.p = p
        self.dim = len(table)
        for row in table:
            if len(row) != self.dim or any(len(v) != self.dim for v in row):
                raise ShapeMismatch(f"structure constants are not {self.dim}x{self.dim}x{self.dim}")
        self.table = [[[x % p for x in v] for v in row] for row in table]
        self.max_enumeration = max_enumeration
        self.unit = [x % p for x in unit] if unit is not None else self.find_unit()
        self._radical: Optional[List[Vector]] = None

    def basis_vector(self, i: int) -> Vector:
        return [1 if j == i else 0 for j in range(self.dim)]

    def zero(self) -> Vector:
        return [0] * self.dim

    def add(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return [(a + b) % self.p for a, b in zip(u, v)]

    def sub(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        return [(a - b) % self.p for a, b in zip(u, v)]

    def scale(self, c: int, u: Sequence[int]) -> Vector:
        return [(c * a) % self.p for a in u]

    def mul(self, u: Sequence[int], v: Sequence[int]) -> Vector:
        out = [0] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.table[i][j]):
                    if c:
                        out[k] += ab * c
        return [x % self.p for x in out]

    def left_matrix(self, a: Sequence[int]) -> IntMatrix:
        return IntMatrix.from_columns([self.mul(a, self.basis_vector(j)) for j in range(self.dim)], self.dim)

    def find_unit(self) -> Vector:
        # u e_j = e_j for all j, as dim^2 linear equations in u
        rows = []
        rhs = []
        for j in range(self.dim):
            for k in range(self.dim):
                rows.append([self.table[i][j][k] for i in range(self.dim)])
                rhs.append(1 if j == k else 0)
        A = IntMatrix.from_rows(rows, self.dim) if rows else IntMatrix.zeros(0, 0)
        u = fp_solve(A, rhs, self.p) if self.dim else []
        if u is None:
            raise UnsupportedInput("algebra has no unit")
        return u

    def is_associative(self) -> bool:
        e = self.basis_vector
        return all(
            self.mul(self.mul(e(i), e(j)), e(k)) == self.mul(e(i), self.mul(e(j), e(k)))
            for i in range(self.dim)
            for j in range(self.dim)
            for k in range(self.dim)
        )

    def span_rank(self, vectors: Sequence[Sequence[int]]) -> int:
        if not vectors:
            return 0
        return fp_rank(IntMatrix.from_columns(vectors, self.dim), self.p)

    def in_span(self, v: Sequence[int], vectors: Sequence[Sequence[int]]) -> bool:
        if not any(x % self.p for x in v):
            return True
        if not vectors:
            return False
        return fp_solve(IntMatrix.from_columns(vectors, self.dim), v, self.p) is not None

    def _basis_of(self, vectors: Sequence[Sequence[int]]) -> List[Vector]:
        vectors = [list(v) for v in vectors if any(v)]
        return [vectors[j] for j in fp_independent_columns(vectors, self.dim, self.p)]

    def is_nilpotent_ideal(self, ideal: Sequence[Sequence[int]]) -> bool:
        power = self._basis_of(ideal)
        for _ in range(self.dim + 1):
            if not power:
                return True
            power = self._basis_of([self.mul(x, y) for x in power for y in ideal])
        return not power

    def trace_ideal(self) -> List[Vector]:
        """{a : tr L_(ab) = 0 for all b}, a two-sided ideal containing the radical."""
        form = [
            [self.left_matrix(self.mul(self.basis_vector(i), self.basis_vector(j))) for j in range(self.dim)]
            for i in range(self.dim)
        ]
        traces = [[sum(m.entry(k, k) for k in range(self.dim)) for m in row] for row in form]
        if not self.dim:
            return []
        return fp_nullspace(IntMatrix.from_rows(traces, self.dim), self.p)

    def radical(self) -> List[Vector]:
        if self._radical is not None:
            return self._radical
        candidate = self.trace_ideal()
        if self.is_nilpotent_ideal(candidate):
            self._radical = candidate
            return candidate
        constants.debug(f"trace ideal of dimension {len(candidate)} is not nilpotent, enumerating")
        if self.p ** len(candidate) > self.max_enumeration:
            raise UnsupportedInput(
                f"radical search needs {self.p}^{len(candidate)} elements, above the limit {self.max_enumeration}"
            )
        found: List[Vector] = []
        for coeffs in product(range(self.p), repeat=len(candidate)):
            a = self.zero()
            for c, v in zip(coeffs, candidate):
                a = self.add(a, self.scale(c, v))
            if not any(a) or self.in_span(a, found):
                continue
            generated = [self.mul(self.mul(self.basis_vector(i), a), self.basis_vector(j)) for i in range(self.dim) for j in range(self.dim)]
            if self.is_nilpotent_ideal(generated):
                found = self._basis_of(found + [a])
        self._radical = found
        return found

    def is_idempotent(self, e: Sequence[int]) -> bool:
        return self.mul(e, e) == [x % self.p for x in e]

    def lift_idempotent(self, e: Sequence[int]) -> Vector:
        """Newton iteration e -> 3e^2 - 2e^3 from an idempotent modulo the radical."""
        e = list(e)
        for _ in range(self.dim + 2):
            if self.is_idempotent(e):
                return e
            e2 = self.mul(e, e)
            e = self.sub(self.scale(3, e2), self.scale(2, self.mul(e2, e)))
        raise UnsupportedInput("idempotent lifting did not converge")

    def _corner(self, e: Sequence[int]) -> List[Vector]:
        return self._basis_of([self.mul(self.mul(e, self.basis_vector(i)), e) for i in range(self.dim)])

    def _split(self, e: Vector) -> Optional[Vector]:
        """A nontrivial idempotent below e, modulo the radical, or None."""
        J = self.radical()
        corner = self._corner(e)
        reps = [
            (J + corner)[j]
            for j in fp_independent_columns(J + corner, self.dim, self.p)
            if j >= len(J)
        ]
        if len(reps) <= 1:
            return None
        if self.p ** len(reps) > self.max_enumeration:
            raise UnsupportedInput(
                f"idempotent search needs {self.p}^{len(reps)} elements, above the limit {self.max_enumeration}"
            )
        for coeffs in product(range(self.p), repeat=len(reps)):
            f = self.zero()
            for c, v in zip(coeffs, reps):
                f = self.add(f, self.scale(c, v))
            if self.in_span(f, J) or self.in_span(self.sub(e, f), J):
                continue
            if self.in_span(self.sub(self.mul(f, f), f), J):
                return self.lift_idempotent(self.mul(self.mul(e, f), e))
        return None

    def primitive_idempotents(self) -> List[Vector]:
        """A complete set of primitive orthogonal idempotents summing to 1."""
        if not self.dim:
            return []
        pending = [list(self.unit)]
        done: List[Vector] = []
        while pending:
            e = pending.pop(0)
            f = self._split(e)
            if f is None:
                done.append(e)
            else:
                pending[:0] = [f, self.sub(e, f)]
        return done

    def is_local(self) -> bool:
        return self.dim > 0 and len(self.primitive_idempotents()) == 1

    def semisimple_dim(self) -> int:
        return self.dim - len(self.radical())
