"""Lattices with an automorphism of order p."""

from dataclasses import dataclass
from typing import List

from .constants import is_odd_prime
from .errors import InvalidModule, PrimeMismatch, ShapeMismatch
from .linalg import IntMatrix, snf

STD_KINDS = ["trivial", "regular", "norm_quotient"]


@dataclass(frozen=True)
class PiModule:
    p: int
    rank: int
    action: IntMatrix

    def __post_init__(self) -> None:
        if not is_odd_prime(self.p):
            raise InvalidModule(f"p = {self.p} is not an odd prime")
        if self.action.shape != (self.rank, self.rank):
            raise InvalidModule(
                f"action is {self.action.rows}x{self.action.cols} on a rank {self.rank} lattice"
            )
        if self.action.power(self.p) != IntMatrix.identity(self.rank):
            raise InvalidModule("action^p is not the identity")

    @property
    def inverse_action(self) -> IntMatrix:
        return self.action.power(self.p - 1)

    def norm(self) -> IntMatrix:
        """Matrix of N = 1 + g + ... + g^(p-1)."""
        total = IntMatrix.zeros(self.rank, self.rank)
        power = IntMatrix.identity(self.rank)
        for _ in range(self.p):
            total = total + power
            power = power @ self.action
        return total

    def one_minus_g(self) -> IntMatrix:
        return IntMatrix.identity(self.rank) - self.action

    def fixed_rank(self) -> int:
        return self.rank - snf(self.one_minus_g()).rank

    def is_trivial(self) -> bool:
        return self.action == IntMatrix.identity(self.rank)

    def with_trivial_action(self) -> "PiModule":
        return PiModule(self.p, self.rank, IntMatrix.identity(self.rank))


@dataclass(frozen=True)
class PiMap:
    src: PiModule
    tgt: PiModule
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.src.p != self.tgt.p:
            raise PrimeMismatch(f"map from p = {self.src.p} to p = {self.tgt.p}")
        if self.matrix.shape != (self.tgt.rank, self.src.rank):
            raise ShapeMismatch(
                f"map matrix is {self.matrix.shape}, expected {(self.tgt.rank, self.src.rank)}"
            )

    def is_equivariant(self) -> bool:
        return self.matrix @ self.src.action == self.tgt.action @ self.matrix


def zero_module(p: int) -> PiModule:
    return PiModule(p, 0, IntMatrix.zeros(0, 0))


def cyclic_permutation(p: int) -> IntMatrix:
    """g e_i = e_(i+1 mod p)."""
    return IntMatrix.from_rows([[1 if i == (j + 1) % p else 0 for j in range(p)] for i in range(p)])


def std_module(kind: str, p: int, k: int = 1) -> PiModule:
    if not is_odd_prime(p):
        raise InvalidModule(f"p = {p} is not an odd prime")
    if k < 0:
        raise InvalidModule(f"multiplicity {k} is negative")
    if kind == "trivial":
        return PiModule(p, k, IntMatrix.identity(k))
    if kind == "regular":
        return PiModule(p, p * k, IntMatrix.block_diag([cyclic_permutation(p)] * k))
    if kind == "norm_quotient":
        # companion matrix of 1 + x + ... + x^(p-1)
        n = p - 1
        rows = [[0] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = 1
        for i in range(n):
            rows[i][n - 1] = -1
        return PiModule(p, n, IntMatrix.from_rows(rows))
    raise InvalidModule(f"unknown standard module '{kind}', expected one of {', '.join(STD_KINDS)}")


def _same_prime(M: PiModule, N: PiModule) -> None:
    if M.p != N.p:
        raise PrimeMismatch(f"modules over p = {M.p} and p = {N.p}")


def tensor_module(M: PiModule, N: PiModule) -> PiModule:
    _same_prime(M, N)
    return PiModule(M.p, M.rank * N.rank, M.action.kron(N.action))


def hom_module(M: PiModule, N: PiModule) -> PiModule:
    """Hom(M, N) with g.f = g_N f g_M^-1, vectorised column-major."""
    _same_prime(M, N)
    return PiModule(M.p, M.rank * N.rank, M.inverse_action.transpose().kron(N.action))


def direct_sum(modules: List[PiModule], p: int) -> PiModule:
    return PiModule(
        p,
        sum(m.rank for m in modules),
        IntMatrix.block_diag([m.action for m in modules]),
    )


def postcompose(B: IntMatrix, src_rank: int) -> IntMatrix:
    """Matrix of f -> B f on vectorised Hom(M, N) with rank M = src_rank."""
    return IntMatrix.identity(src_rank).kron(B)


def precompose(A: IntMatrix, tgt_rank: int) -> IntMatrix:
    """Matrix of f -> f A on vectorised Hom(M, N) with rank N = tgt_rank."""
    return A.transpose().kron(IntMatrix.identity(tgt_rank))


def vectorise(f: IntMatrix) -> List[int]:
    return [f.entry(i, j) for j in range(f.cols) for i in range(f.rows)]


def unvectorise(v: List[int], rows: int, cols: int) -> IntMatrix:
    return IntMatrix.from_rows([[v[j * rows + i] for j in range(cols)] for i in range(rows)], cols)
