"""Bounded cochain complexes of PiModules and the constructions on them.

Differentials are stored as d^n : C^n -> C^(n+1). Shifts follow
C[k]^n = C^(n+k) with differential (-1)^k d, and the cone of f : C -> D is
C^(n+1) + D^n with differential [[-d_C, 0], [f, d_D]].
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InvalidComplex, InvalidWindow, PrimeMismatch, ShapeMismatch
from .linalg import (
    AbelianInvariants,
    IntMatrix,
    fp_cohomology_dim,
    snf,
    subquotient,
)
from .pimod import (
    PiModule,
    hom_module,
    postcompose,
    precompose,
    std_module,
    tensor_module,
    vectorise,
    zero_module,
)

WINDOW_KINDS = ["i", "t", "frak_p"]


@dataclass(frozen=True)
class PiComplex:
    p: int
    terms: Dict[int, PiModule] = field(default_factory=dict)
    diffs: Dict[int, IntMatrix] = field(default_factory=dict)
    action_forgotten: bool = False

    def __post_init__(self) -> None:
        terms = {n: m for n, m in sorted(self.terms.items()) if m.rank > 0}
        diffs = {n: d for n, d in sorted(self.diffs.items()) if not d.is_zero()}
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "diffs", diffs)
        for n, m in terms.items():
            if m.p != self.p:
                raise PrimeMismatch(f"term in degree {n} has p = {m.p}, complex has p = {self.p}")
        for n, d in diffs.items():
            if d.shape != (self.rank(n + 1), self.rank(n)):
                raise ShapeMismatch(
                    f"d^{n} is {d.shape}, expected {(self.rank(n + 1), self.rank(n))}"
                )
            if d @ self.term(n).action != self.term(n + 1).action @ d:
                raise InvalidComplex(f"d^{n} is not equivariant")
            nxt = diffs.get(n + 1)
            if nxt is not None and not (nxt @ d).is_zero():
                raise InvalidComplex(f"d^{n + 1} d^{n} is not zero")

    def term(self, n: int) -> PiModule:
        return self.terms.get(n) or zero_module(self.p)

    def rank(self, n: int) -> int:
        m = self.terms.get(n)
        return m.rank if m else 0

    def diff(self, n: int) -> IntMatrix:
        d = self.diffs.get(n)
        return d if d is not None else IntMatrix.zeros(self.rank(n + 1), self.rank(n))

    @property
    def bot(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def top(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def degrees(self) -> range:
        return range(self.bot, self.top + 1)

    @property
    def amplitude(self) -> int:
        return max(self.top - self.bot, 0)

    def is_zero(self) -> bool:
        return not self.terms

    def is_trivial_action(self) -> bool:
        return all(m.is_trivial() for m in self.terms.values())


@dataclass(frozen=True)
class PiChainMap:
    """f : src -> tgt[shift], with components f^n : src^n -> tgt^(n+shift)."""

    src: PiComplex
    tgt: PiComplex
    components: Dict[int, IntMatrix] = field(default_factory=dict)
    shift: int = 0

    def __post_init__(self) -> None:
        if self.src.p != self.tgt.p:
            raise PrimeMismatch(f"chain map from p = {self.src.p} to p = {self.tgt.p}")
        comps = {n: c for n, c in self.components.items() if not c.is_zero()}
        object.__setattr__(self, "components", comps)
        s = self.shift
        sign = -1 if s % 2 else 1
        for n in set(self.src.degrees) | {k - s for k in self.tgt.degrees}:
            f = self.component(n)
            if f.shape != (self.tgt.rank(n + s), self.src.rank(n)):
                raise ShapeMismatch(f"component {n} has shape {f.shape}")
            if f @ self.src.term(n).action != self.tgt.term(n + s).action @ f:
                raise InvalidComplex(f"component {n} is not equivariant")
            lhs = self.component(n + 1) @ self.src.diff(n)
            rhs = (self.tgt.diff(n + s) @ f).scale(sign)
            if lhs != rhs:
                raise InvalidComplex(f"chain map fails to commute at degree {n}")

    def component(self, n: int) -> IntMatrix:
        c = self.components.get(n)
        return c if c is not None else IntMatrix.zeros(self.tgt.rank(n + self.shift), self.src.rank(n))

    def unshifted(self) -> "PiChainMap":
        """The same components viewed as a degree-0 map src -> tgt[shift]."""
        if self.shift == 0:
            return self
        return PiChainMap(self.src, shift(self.tgt, self.shift), self.components, 0)


@dataclass(frozen=True)
class FpComplex:
    p: int
    dims: Dict[int, int] = field(default_factory=dict)
    diffs: Dict[int, IntMatrix] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for n, d in self.diffs.items():
            nxt = self.diffs.get(n + 1)
            if nxt is not None and not (nxt @ d).mod(self.p).is_zero():
                raise InvalidComplex(f"d^{n + 1} d^{n} is not zero mod {self.p}")

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def diff(self, n: int) -> IntMatrix:
        d = self.diffs.get(n)
        return d if d is not None else IntMatrix.zeros(self.dim(n + 1), self.dim(n))

    def cohomology_dims(self) -> Dict[int, int]:
        if not self.dims:
            return {}
        lo, hi = min(self.dims), max(self.dims)
        return {
            n: fp_cohomology_dim(self.diff(n - 1), self.diff(n), self.p) for n in range(lo, hi + 1)
        }


def single(module: PiModule, degree: int = 0) -> PiComplex:
    return PiComplex(module.p, {degree: module})


def identity_map(C: PiComplex) -> PiChainMap:
    return PiChainMap(C, C, {n: IntMatrix.identity(C.rank(n)) for n in C.degrees})


def scalar_map(C: PiComplex, value: int) -> PiChainMap:
    return PiChainMap(C, C, {n: IntMatrix.scalar(C.rank(n), value) for n in C.degrees})


def compose_maps(g: PiChainMap, f: PiChainMap) -> PiChainMap:
    if f.tgt != g.src:
        raise ShapeMismatch("target of the first map is not the source of the second")
    comps = {n: g.component(n + f.shift) @ f.component(n) for n in f.src.degrees}
    return PiChainMap(f.src, g.tgt, comps, f.shift + g.shift)


def std_window(kind: str, p: int, window: Tuple[int, int]) -> PiComplex:
    lo, hi = window
    if lo > hi:
        raise InvalidWindow(f"window [{lo}, {hi}] is empty")
    if kind not in WINDOW_KINDS:
        raise InvalidWindow(f"unknown periodic complex '{kind}', expected one of {', '.join(WINDOW_KINDS)}")
    if kind == "i":
        lo = max(lo, 0)
    elif kind == "frak_p":
        hi = min(hi, 0)
    free = std_module("regular", p)
    terms = {n: free for n in range(lo, hi + 1)}
    diffs = {}
    for n in range(lo, hi):
        odd = n % 2 == 1
        if kind == "frak_p":
            diffs[n] = free.one_minus_g() if odd else free.norm()
        else:
            diffs[n] = free.norm() if odd else free.one_minus_g()
    return PiComplex(p, terms, diffs)


def cohomology(C: PiComplex) -> Dict[int, AbelianInvariants]:
    return {n: subquotient(C.diff(n - 1), C.diff(n), C.p) for n in C.degrees}


def shift(C: PiComplex, k: int) -> PiComplex:
    sign = -1 if k % 2 else 1
    return PiComplex(
        C.p,
        {n - k: m for n, m in C.terms.items()},
        {n - k: d.scale(sign) for n, d in C.diffs.items()},
        C.action_forgotten,
    )


def direct_sum(C: PiComplex, D: PiComplex) -> PiComplex:
    if C.p != D.p:
        raise PrimeMismatch(f"complexes over p = {C.p} and p = {D.p}")
    degrees = sorted(set(C.terms) | set(D.terms))
    terms = {
        n: PiModule(
            C.p,
            C.rank(n) + D.rank(n),
            IntMatrix.block_diag([C.term(n).action, D.term(n).action]),
        )
        for n in degrees
    }
    diffs = {n: IntMatrix.block_diag([C.diff(n), D.diff(n)]) for n in degrees}
    return PiComplex(C.p, terms, diffs, C.action_forgotten and D.action_forgotten)


def cone(f: PiChainMap) -> PiComplex:
    if f.shift != 0:
        raise ShapeMismatch("cone needs a chain map of shift 0")
    C, D = f.src, f.tgt
    degrees = sorted({n - 1 for n in C.terms} | set(D.terms))
    terms = {
        n: PiModule(
            C.p,
            C.rank(n + 1) + D.rank(n),
            IntMatrix.block_diag([C.term(n + 1).action, D.term(n).action]),
        )
        for n in degrees
    }
    diffs = {}
    for n in degrees:
        diffs[n] = IntMatrix.block(
            [[-C.diff(n + 1), None], [f.component(n + 1), D.diff(n)]],
            [C.rank(n + 2), D.rank(n + 1)],
            [C.rank(n + 1), D.rank(n)],
        )
    return PiComplex(C.p, terms, diffs)


def cone_inclusion(f: PiChainMap) -> PiChainMap:
    """D -> cone(f)."""
    C, D, K = f.src, f.tgt, cone(f)
    comps = {
        n: IntMatrix.block([[None], [IntMatrix.identity(D.rank(n))]], [C.rank(n + 1), D.rank(n)], [D.rank(n)])
        for n in D.degrees
    }
    return PiChainMap(D, K, comps)


def cone_projection(f: PiChainMap) -> PiChainMap:
    """cone(f) -> C[1]."""
    C, D, K = f.src, f.tgt, cone(f)
    comps = {
        n: IntMatrix.block([[IntMatrix.identity(C.rank(n + 1)), None]], [C.rank(n + 1)], [C.rank(n + 1), D.rank(n)])
        for n in K.degrees
    }
    return PiChainMap(K, shift(C, 1), comps)


def shift_map(f: PiChainMap, k: int) -> PiChainMap:
    """f[k] : src[k] -> tgt[k] for a map of shift 0."""
    return PiChainMap(
        shift(f.src, k), shift(f.tgt, k), {n - k: c for n, c in f.components.items()}
    )


def build(op: str, *args) -> PiComplex:
    if op == "shift":
        return shift(*args)
    if op == "cone":
        return cone(*args)
    if op == "direct_sum":
        return direct_sum(*args)
    raise ShapeMismatch(f"unknown construction '{op}'")


class BlockLayout:
    """Offsets of labelled blocks inside a direct sum."""

    def __init__(self, sizes: Sequence[Tuple[object, int]]) -> None:
        self.keys = [k for k, _ in sizes]
        self.sizes = dict(sizes)
        self.offsets = {}
        total = 0
        for k, s in sizes:
            self.offsets[k] = total
            total += s
        self.total = total

    def __contains__(self, key) -> bool:
        return key in self.offsets

    def slice(self, key) -> range:
        o = self.offsets[key]
        return range(o, o + self.sizes[key])


def place(target: List[List[int]], block: IntMatrix, row0: int, col0: int, sign: int = 1) -> None:
    for i in range(block.rows):
        row = target[row0 + i]
        for j in range(block.cols):
            x = block.entries[i * block.cols + j]
            if x:
                row[col0 + j] += sign * x


def tensor_complex(C: PiComplex, D: PiComplex) -> PiComplex:
    if C.p != D.p:
        raise PrimeMismatch(f"complexes over p = {C.p} and p = {D.p}")
    if C.is_zero() or D.is_zero():
        return PiComplex(C.p)
    layouts = {}
    terms = {}
    for n in range(C.bot + D.bot, C.top + D.top + 1):
        parts = [(a, C.rank(a) * D.rank(n - a)) for a in C.degrees]
        layouts[n] = BlockLayout(parts)
        terms[n] = PiModule(
            C.p,
            layouts[n].total,
            IntMatrix.block_diag([tensor_module(C.term(a), D.term(n - a)).action for a in C.degrees]),
        )
    diffs = {}
    for n in range(C.bot + D.bot, C.top + D.top):
        src, tgt = layouts[n], layouts[n + 1]
        out = [[0] * src.total for _ in range(tgt.total)]
        for a in C.degrees:
            b = n - a
            if a + 1 in tgt:
                place(out, C.diff(a).kron(IntMatrix.identity(D.rank(b))), tgt.offsets[a + 1], src.offsets[a])
            place(
                out,
                IntMatrix.identity(C.rank(a)).kron(D.diff(b)),
                tgt.offsets[a],
                src.offsets[a],
                -1 if a % 2 else 1,
            )
        diffs[n] = IntMatrix.from_rows(out, src.total)
    return PiComplex(C.p, terms, diffs)


def hom_layout(C: PiComplex, D: PiComplex, n: int) -> BlockLayout:
    return BlockLayout([(a, C.rank(a) * D.rank(a + n)) for a in C.degrees])


def hom_complex(C: PiComplex, D: PiComplex) -> PiComplex:
    """E^n = sum_a Hom(C^a, D^(a+n)), d f = d_D f - (-1)^n f d_C."""
    if C.p != D.p:
        raise PrimeMismatch(f"complexes over p = {C.p} and p = {D.p}")
    if C.is_zero() or D.is_zero():
        return PiComplex(C.p)
    lo, hi = D.bot - C.top, D.top - C.bot
    layouts = {n: hom_layout(C, D, n) for n in range(lo, hi + 1)}
    terms = {
        n: PiModule(
            C.p,
            layouts[n].total,
            IntMatrix.block_diag([hom_module(C.term(a), D.term(a + n)).action for a in C.degrees]),
        )
        for n in range(lo, hi + 1)
    }
    diffs = {}
    for n in range(lo, hi):
        src, tgt = layouts[n], layouts[n + 1]
        out = [[0] * src.total for _ in range(tgt.total)]
        for a in C.degrees:
            place(out, postcompose(D.diff(a + n), C.rank(a)), tgt.offsets[a], src.offsets[a])
            if a - 1 in tgt:
                place(
                    out,
                    precompose(C.diff(a - 1), D.rank(a + n)),
                    tgt.offsets[a - 1],
                    src.offsets[a],
                    1 if n % 2 else -1,
                )
        diffs[n] = IntMatrix.from_rows(out, src.total)
    return PiComplex(C.p, terms, diffs)


def chain_map_to_cocycle(f: PiChainMap) -> List[int]:
    """Degree-0 cocycle of hom_complex(src, tgt) representing f."""
    layout = hom_layout(f.src, f.tgt, 0)
    vec = [0] * layout.total
    for a in f.src.degrees:
        comp = vectorise(f.component(a))
        for i, x in zip(layout.slice(a), comp):
            vec[i] = x
    return vec


def modular_reduce(C: PiComplex) -> FpComplex:
    return FpComplex(
        C.p,
        {n: m.rank for n, m in C.terms.items()},
        {n: d.mod(C.p) for n, d in C.diffs.items()},
    )


def forget_action(C: PiComplex) -> PiComplex:
    return PiComplex(
        C.p,
        {n: m.with_trivial_action() for n, m in C.terms.items()},
        dict(C.diffs),
        action_forgotten=True,
    )


def invariants(C: PiComplex) -> PiComplex:
    """The fixed subcomplex C^pi as a lattice complex with trivial action."""
    bases = {}
    coords = {}
    for n in C.degrees:
        m = C.term(n)
        res = snf(m.one_minus_g())
        idx = list(range(res.rank, m.rank))
        bases[n] = res.V.submatrix(range(m.rank), idx)
        coords[n] = res.V_inv.submatrix(idx, range(m.rank))
    terms = {n: std_module("trivial", C.p, b.cols) for n, b in bases.items()}
    diffs = {}
    for n in C.degrees:
        if n + 1 in bases:
            diffs[n] = coords[n + 1] @ C.diff(n) @ bases[n]
    return PiComplex(C.p, terms, diffs)


def eps_push_complex(C: PiComplex, p: Optional[int] = None) -> PiComplex:
    """Inflation of a lattice complex along the trivial action."""
    return PiComplex(
        p or C.p,
        {n: PiModule(p or C.p, m.rank, IntMatrix.identity(m.rank)) for n, m in C.terms.items()},
        dict(C.diffs),
    )
