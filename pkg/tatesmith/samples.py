"""Seeded random complexes and chain maps for property checks."""

import random
from typing import List, Optional

from .homcx import (
    PiChainMap,
    PiComplex,
    cone,
    cone_inclusion,
    direct_sum,
    scalar_map,
    single,
)
from .linalg import IntMatrix
from .pimod import PiModule, std_module

MODULE_KINDS = ["trivial", "regular", "norm_quotient"]


def random_module(rng: random.Random, p: int) -> PiModule:
    kind = rng.choice(MODULE_KINDS)
    return std_module(kind, p, rng.randint(1, 2) if kind == "trivial" else 1)


def _two_term(p: int, src: PiModule, tgt: PiModule, d: IntMatrix, n: int) -> PiComplex:
    return PiComplex(p, {n: src, n + 1: tgt}, {n: d})


def random_block(rng: random.Random, p: int, n: int) -> PiComplex:
    """A single module or an equivariant two-term complex starting in degree n."""
    trivial = std_module("trivial", p)
    regular = std_module("regular", p)
    choice = rng.randrange(5)
    if choice == 0:
        return single(random_module(rng, p), n)
    if choice == 1:
        k = rng.choice([0, 1, p, 2 * p, p + 1])
        return _two_term(p, trivial, trivial, IntMatrix.scalar(1, k), n)
    if choice == 2:
        return _two_term(p, regular, regular, regular.one_minus_g(), n)
    if choice == 3:
        return _two_term(p, regular, trivial, IntMatrix.from_rows([[1] * p]), n)
    return _two_term(p, trivial, regular, IntMatrix.from_columns([[1] * p], p), n)


def random_complex(
    rng: random.Random, p: int, blocks: Optional[int] = None, amplitude: int = 3
) -> PiComplex:
    C = PiComplex(p)
    for _ in range(blocks if blocks is not None else rng.randint(1, 2)):
        C = direct_sum(C, random_block(rng, p, rng.randint(-1, amplitude - 2)))
    return C


def random_chain_map(rng: random.Random, p: int) -> PiChainMap:
    """Scalar multiples, summand inclusions/projections and cone inclusions."""
    C = random_complex(rng, p)
    choice = rng.randrange(4)
    if choice == 0:
        return scalar_map(C, rng.choice([0, 1, -1, p, 2]))
    D = random_complex(rng, p, 1)
    S = direct_sum(C, D)
    if choice == 1:
        comps = {
            n: IntMatrix.block([[IntMatrix.identity(C.rank(n))], [None]], [C.rank(n), D.rank(n)], [C.rank(n)])
            for n in C.degrees
        }
        return PiChainMap(C, S, comps)
    if choice == 2:
        comps = {
            n: IntMatrix.block([[None, IntMatrix.identity(D.rank(n))]], [D.rank(n)], [C.rank(n), D.rank(n)])
            for n in S.degrees
        }
        return PiChainMap(S, D, comps)
    return cone_inclusion(scalar_map(C, rng.choice([1, p])))


def random_complexes(seed: int, count: int, primes: List[int]) -> List[PiComplex]:
    rng = random.Random(seed)
    return [random_complex(rng, rng.choice(primes)) for _ in range(count)]


def mod_p_complex(p: int, n: int = 0) -> PiComplex:
    """Z --p--> Z in degrees n - 1, n: a lattice model of F_p in degree n."""
    return cone(scalar_map(single(std_module("trivial", p), n), p))
