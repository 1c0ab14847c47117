"""Tate cohomology over a point, stable homs and their composition.

T^0 and T^1 of a bounded complex C are read off the invariant part of the
totalization of C with the 2-periodic complex t. That part is the double
complex with D^n = sum_a C^a (the summand C^a sitting in slot n - a) and
differential d_C + (-1)^a v, where v is 1 - g out of an even slot and N out
of an odd one. D^n only depends on the parity of n, so the computation is
exactly periodic.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import constants
from .constants import STABILIZATION_CHECKS, WINDOW_HI, WINDOW_LO
from .errors import (
    InvalidWindow,
    PrimeMismatch,
    ShapeMismatch,
    StabilizationFailure,
    TateCohomologyError,
)
from .homcx import (
    BlockLayout,
    PiChainMap,
    PiComplex,
    cone,
    cone_inclusion,
    cone_projection,
    hom_complex,
    invariants,
    modular_reduce,
    place,
    shift_map,
    std_window,
    tensor_complex,
)
from .linalg import (
    IntMatrix,
    QuotientPresentation,
    fp_rank,
    q_rank,
    quotient_presentation,
)


def _vertical(C: PiComplex, a: int, slot: int) -> IntMatrix:
    module = C.term(a)
    return module.one_minus_g() if slot % 2 == 0 else module.norm()


def double_differential(
    C: PiComplex, n: int, src_degrees: Sequence[int], tgt_degrees: Sequence[int]
) -> IntMatrix:
    """Differential of the Tate double complex from degree n to n + 1."""
    src = BlockLayout([(a, C.rank(a)) for a in src_degrees])
    tgt = BlockLayout([(a, C.rank(a)) for a in tgt_degrees])
    out = [[0] * src.total for _ in range(tgt.total)]
    for a in src_degrees:
        if a + 1 in tgt:
            place(out, C.diff(a), tgt.offsets[a + 1], src.offsets[a])
        if a in tgt:
            place(out, _vertical(C, a, n - a), tgt.offsets[a], src.offsets[a], -1 if a % 2 else 1)
    return IntMatrix.from_rows(out, src.total)


def tate_differential(C: PiComplex, n: int) -> IntMatrix:
    degrees = list(C.degrees)
    return double_differential(C, n, degrees, degrees)


def half_plane_differential(C: PiComplex, n: int) -> IntMatrix:
    """The part of the double complex in slots >= 0, from degree n to n + 1."""
    return double_differential(
        C, n, [a for a in C.degrees if a <= n], [a for a in C.degrees if a <= n + 1]
    )


def group_hypercohomology(C: PiComplex, n: int) -> QuotientPresentation:
    """H^n(Z/p; C), presented on the slot >= 0 half of the Tate double complex."""
    return quotient_presentation(half_plane_differential(C, n - 1), half_plane_differential(C, n), C.p)


def to_tate_vector(C: PiComplex, vector: Sequence[int]) -> List[int]:
    """Pad a half-plane vector by zeros in the negative slots."""
    full = sum(C.rank(a) for a in C.degrees)
    return list(vector) + [0] * (full - len(vector))


def reading_degree(window: Optional[Tuple[int, int]] = None) -> int:
    """Even degree r with r - 1 and r + 2 inside the window."""
    lo, hi = window if window is not None else (WINDOW_LO, WINDOW_HI)
    r = lo + 1 if (lo + 1) % 2 == 0 else lo + 2
    if r + 2 > hi:
        raise InvalidWindow(f"window [{lo}, {hi}] is too narrow to read T^0 and T^1")
    return r


@dataclass
class TateVS:
    t0_dim: int
    t1_dim: int
    p: int
    degree: int = 0
    presentations: Tuple[Optional[QuotientPresentation], Optional[QuotientPresentation]] = (None, None)

    @property
    def dims(self) -> Tuple[int, int]:
        return (self.t0_dim, self.t1_dim)

    def dim(self, i: int) -> int:
        return self.dims[i % 2]

    @property
    def bases(self) -> Tuple[List[List[int]], List[List[int]]]:
        return tuple(pres.generators if pres else [] for pres in self.presentations)

    def coordinates(self, i: int, cocycle: Sequence[int]) -> List[int]:
        pres = self.presentations[i % 2]
        if pres is None:
            raise TateCohomologyError("Tate space was computed without bases")
        return pres.coordinates(cocycle)

    def as_dict(self) -> Dict[str, int]:
        return {"t0": self.t0_dim, "t1": self.t1_dim}


def _presentation(d_in: IntMatrix, d_out: IntMatrix, p: int, label: str) -> QuotientPresentation:
    pres = quotient_presentation(d_in, d_out, p)
    if pres.invariants.free_rank or any(order != p for order in pres.orders):
        raise TateCohomologyError(f"{label} is {pres.invariants}, not an F_{p}-vector space")
    return pres


def tate_cohomology(
    C: PiComplex, window: Optional[Tuple[int, int]] = None, with_bases: bool = False
) -> TateVS:
    r = reading_degree(window)
    d_prev = tate_differential(C, r - 1)
    d_here = tate_differential(C, r)
    # H^(n+1) of D is the p-torsion of coker d^n since D is rationally acyclic
    t0 = q_rank(d_prev) - fp_rank(d_prev, C.p)
    t1 = q_rank(d_here) - fp_rank(d_here, C.p)
    constants.debug(f"tate cohomology at degree {r}: ({t0}, {t1})")
    vs = TateVS(t0, t1, C.p, r)
    if with_bases:
        pres0 = _presentation(d_prev, d_here, C.p, "T^0")
        pres1 = _presentation(d_here, tate_differential(C, r + 1), C.p, "T^1")
        if (len(pres0.orders), len(pres1.orders)) != (t0, t1):
            raise TateCohomologyError(
                f"rank route gives ({t0}, {t1}), presentation route gives "
                f"({len(pres0.orders)}, {len(pres1.orders)})"
            )
        vs.presentations = (pres0, pres1)
    return vs


def is_perfect(C: PiComplex) -> bool:
    vs = tate_cohomology(C)
    return vs.t0_dim == 0 and vs.t1_dim == 0


def classify(C: PiComplex) -> Tuple[int, int, int]:
    """(k0, k1, k0 - k1): C is T*Z^k0 + T*Z^k1[1] in the Tate category."""
    vs = tate_cohomology(C)
    return (vs.t0_dim, vs.t1_dim, vs.t0_dim - vs.t1_dim)


def _apply_blockwise(f: PiChainMap, vector: Sequence[int]) -> List[int]:
    src = BlockLayout([(a, f.src.rank(a)) for a in f.src.degrees])
    tgt = BlockLayout([(a, f.tgt.rank(a)) for a in f.tgt.degrees])
    out = [0] * tgt.total
    for a in f.src.degrees:
        if a not in tgt:
            continue
        image = f.component(a).apply([vector[i] for i in src.slice(a)])
        for i, x in zip(tgt.slice(a), image):
            out[i] = x
    return out


def tate_map(
    f: PiChainMap, src_vs: Optional[TateVS] = None, tgt_vs: Optional[TateVS] = None
) -> Tuple[IntMatrix, IntMatrix]:
    """Matrices of T^0(f) and T^1(f) in the representative bases, mod p."""
    f = f.unshifted()
    p = f.src.p
    src_vs = src_vs or tate_cohomology(f.src, with_bases=True)
    tgt_vs = tgt_vs or tate_cohomology(f.tgt, with_bases=True)
    blocks = []
    for i in (0, 1):
        columns = [tgt_vs.coordinates(i, _apply_blockwise(f, z)) for z in src_vs.bases[i]]
        blocks.append(IntMatrix.from_columns(columns, tgt_vs.dim(i)).mod(p))
    return tuple(blocks)


def long_exact_sequence(f: PiChainMap) -> List[Tuple[IntMatrix, int, int]]:
    """The six maps T^0 C -> T^0 D -> T^0 cone -> T^1 C -> T^1 D -> T^1 cone -> T^0 C[2].

    Returned as (matrix, source dim, target dim) triples.
    """
    K = cone(f)
    incl = cone_inclusion(f)
    proj = cone_projection(f)
    f1 = shift_map(f, 1)
    K1 = cone(f1)
    incl1 = cone_inclusion(f1)
    proj1 = cone_projection(f1)
    spaces = {
        "C": tate_cohomology(f.src, with_bases=True),
        "D": tate_cohomology(f.tgt, with_bases=True),
        "K": tate_cohomology(K, with_bases=True),
        "C1": tate_cohomology(f1.src, with_bases=True),
        "D1": tate_cohomology(f1.tgt, with_bases=True),
        "K1": tate_cohomology(K1, with_bases=True),
        "C2": tate_cohomology(proj1.tgt, with_bases=True),
    }
    steps = [
        (f, "C", "D"),
        (incl, "D", "K"),
        (proj, "K", "C1"),
        (f1, "C1", "D1"),
        (incl1, "D1", "K1"),
        (proj1, "K1", "C2"),
    ]
    out = []
    for m, s, t in steps:
        t0, _ = tate_map(m, spaces[s], spaces[t])
        out.append((t0, spaces[s].t0_dim, spaces[t].t0_dim))
    return out


def les_is_exact(f: PiChainMap) -> bool:
    seq = long_exact_sequence(f)
    p = f.src.p
    for (m_in, _, mid), (m_out, _, _) in zip(seq, seq[1:]):
        if not (m_out @ m_in).mod(p).is_zero():
            return False
        if fp_rank(m_in, p) + fp_rank(m_out, p) != mid:
            return False
    return True


@dataclass
class StableHom:
    """A morphism src -> tgt[degree] in the Tate category over a point.

    Over a point T* is an equivalence onto Z/2-graded F_p-vector spaces, so
    the morphism is the pair of maps T^i(src) -> T^(i+degree)(tgt).
    """

    src: PiComplex
    tgt: PiComplex
    degree: int
    blocks: Tuple[IntMatrix, IntMatrix]

    @classmethod
    def from_chain_map(cls, f: PiChainMap) -> "StableHom":
        f = f.unshifted()
        return cls(f.src, f.tgt, 0, tate_map(f))

    @classmethod
    def identity(cls, C: PiComplex) -> "StableHom":
        vs = tate_cohomology(C)
        return cls(C, C, 0, (IntMatrix.identity(vs.t0_dim), IntMatrix.identity(vs.t1_dim)))

    def is_zero(self) -> bool:
        return all(b.mod(self.src.p).is_zero() for b in self.blocks)

    @property
    def rank(self) -> int:
        return sum(fp_rank(b, self.src.p) for b in self.blocks)


@dataclass
class StableHomSpace:
    src: PiComplex
    tgt: PiComplex
    grading: Tuple[int, int]
    level: int
    route_a: Tuple[int, int]
    route_b: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    representatives: List[List[int]] = field(default_factory=list)

    def basis(self, degree: int) -> List[StableHom]:
        """Elementary morphisms of the given degree."""
        s = tate_cohomology(self.src)
        t = tate_cohomology(self.tgt)
        out = []
        for i in (0, 1):
            rows, cols = t.dim(i + degree), s.dim(i)
            for r in range(rows):
                for c in range(cols):
                    blocks = [
                        IntMatrix.zeros(t.dim(j + degree), s.dim(j)) for j in (0, 1)
                    ]
                    entries = [0] * (rows * cols)
                    entries[r * cols + c] = 1
                    blocks[i] = IntMatrix(rows, cols, tuple(entries))
                    out.append(StableHom(self.src, self.tgt, degree % 2, tuple(blocks)))
        return out


def stabilization_level(C: PiComplex, D: PiComplex) -> int:
    """Least n with 2n >= top(D) - bot(C) + 4."""
    bound = D.top - C.bot + 4
    return max(1, -(-bound // 2))


def projective_route(C: PiComplex, D: PiComplex, degree: int) -> Tuple[int, List[List[int]]]:
    """Equivariant chain maps P(C) -> D[degree] up to homotopy.

    P(C) is the brutal truncation of Tot(C (x) p-window); the truncation is
    taken long enough not to affect the given degree.
    """
    depth = C.top - D.bot + degree + 3
    P = std_window("frak_p", C.p, (-depth, 0))
    E = invariants(hom_complex(tensor_complex(P, C), D))
    pres = quotient_presentation(E.diff(degree - 1), E.diff(degree), C.p)
    if pres.invariants.free_rank or any(order != C.p for order in pres.orders):
        raise StabilizationFailure(
            f"equivariant homs in degree {degree} are {pres.invariants}, not an F_{C.p}-vector space"
        )
    return len(pres.orders), pres.generators


def stable_hom(C: PiComplex, D: PiComplex, checks: int = STABILIZATION_CHECKS) -> StableHomSpace:
    if C.p != D.p:
        raise PrimeMismatch(f"complexes over p = {C.p} and p = {D.p}")
    route_a = tate_cohomology(hom_complex(C, D)).dims
    s, t = tate_cohomology(C), tate_cohomology(D)
    by_class = (
        s.t0_dim * t.t0_dim + s.t1_dim * t.t1_dim,
        s.t0_dim * t.t1_dim + s.t1_dim * t.t0_dim,
    )
    if by_class != route_a:
        raise StabilizationFailure(
            f"hom complex gives {route_a}, classification gives {by_class}"
        )
    level = stabilization_level(C, D)
    route_b = {}
    representatives = []
    for n in range(level, level + checks + 1):
        even, reps = projective_route(C, D, 2 * n)
        odd, _ = projective_route(C, D, 2 * n + 1)
        route_b[n] = (even, odd)
        if n == level:
            representatives = reps
        constants.debug(f"stable hom level {n}: {route_b[n]}")
        if route_b[n] != route_a:
            raise StabilizationFailure(
                f"colimit route gives {route_b[n]} at level {n}, hom complex route gives {route_a}"
            )
    return StableHomSpace(C, D, route_a, level, route_a, route_b, representatives)


def compose(g: StableHom, f: StableHom) -> StableHom:
    if f.src.p != g.src.p:
        raise PrimeMismatch(f"morphisms over p = {f.src.p} and p = {g.src.p}")
    if f.tgt != g.src:
        raise ShapeMismatch("target of the first morphism is not the source of the second")
    p = f.src.p
    blocks = tuple((g.blocks[(i + f.degree) % 2] @ f.blocks[i]).mod(p) for i in (0, 1))
    return StableHom(f.src, g.tgt, (f.degree + g.degree) % 2, blocks)


def eps_formula(C: PiComplex) -> Tuple[int, int]:
    """(sum over even n, sum over odd n) of dim H^n(C (x) F_p).

    Equal to Tate cohomology when the action is trivial. Reducing mod p keeps
    the Tor terms that p-torsion in H^(n+1)(C) contributes.
    """
    even = odd = 0
    for n, d in modular_reduce(C).cohomology_dims().items():
        if n % 2 == 0:
            even += d
        else:
            odd += d
    return (even, odd)
