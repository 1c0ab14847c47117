"""Constructible complexes on finite stratified posets with a Z/p action.

A sheaf is a strict functor from the closure-ordered poset of strata to
bounded lattice complexes. Opens are up-sets, closed sets are down-sets, and
derived sections are computed by the cobar total complex over strict chains.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

from . import constants
from .errors import (
    BaseMismatch,
    InvalidComplex,
    NotDownSet,
    NotUpSet,
    PrimeMismatch,
    UnknownStratum,
)
from .homcx import (
    BlockLayout,
    PiChainMap,
    PiComplex,
    compose_maps,
    cone,
    direct_sum,
    hom_complex,
    hom_layout,
    identity_map,
    place,
    shift,
    single,
)
from .linalg import IntMatrix
from .pimod import PiModule, postcompose, precompose, std_module, unvectorise, vectorise
from .tate import tate_cohomology

Chain = Tuple[str, ...]

SHEAF_OPS = ["open_restrict", "extend_zero", "closed_restrict", "closed_push", "open_push"]


@dataclass
class StratPoset:
    """Strata ordered by closure: lam <= mu iff lam lies in the closure of mu."""

    elements: Tuple[str, ...]
    relations: FrozenSet[Tuple[str, str]]
    dim: Dict[str, int] = field(default_factory=dict)
    dagger: Dict[str, int] = field(default_factory=dict)
    action: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        elements: Iterable[str],
        leq: Iterable[Tuple[str, str]] = (),
        dim: Optional[Dict[str, int]] = None,
        dagger: Optional[Dict[str, int]] = None,
        action: Optional[Dict[str, str]] = None,
    ) -> "StratPoset":
        elements = tuple(elements)
        leq = [tuple(r) for r in leq]
        for a, b in leq:
            for x in (a, b):
                if x not in elements:
                    raise UnknownStratum(f"relation mentions unknown stratum '{x}'")
        relations = _transitive_closure(elements, leq)
        poset = cls(elements, relations)
        poset.dim = dict(dim) if dim else {e: poset.height(e) for e in elements}
        poset.dagger = {e: v % 2 for e, v in (dagger or {e: poset.dim[e] for e in elements}).items()}
        poset.action = {e: e for e in elements}
        poset.action.update(action or {})
        return poset

    def __contains__(self, x: str) -> bool:
        return x in self.elements

    def check(self, x: str) -> str:
        if x not in self.elements:
            raise UnknownStratum(f"unknown stratum '{x}'")
        return x

    def le(self, a: str, b: str) -> bool:
        return (a, b) in self.relations

    def lt(self, a: str, b: str) -> bool:
        return a != b and (a, b) in self.relations

    def height(self, x: str) -> int:
        below = [y for y in self.elements if self.lt(y, x)]
        return 1 + max(self.height(y) for y in below) if below else 0

    def up_set(self, x: str) -> Set[str]:
        self.check(x)
        return {y for y in self.elements if self.le(x, y)}

    def down_set(self, x: str) -> Set[str]:
        self.check(x)
        return {y for y in self.elements if self.le(y, x)}

    def closure(self, subset: Iterable[str]) -> Set[str]:
        out = set()
        for x in subset:
            out |= self.down_set(x)
        return out

    def is_up_set(self, subset: Iterable[str]) -> bool:
        subset = set(subset)
        return all(y in subset for x in subset for y in self.up_set(x))

    def is_down_set(self, subset: Iterable[str]) -> bool:
        subset = set(subset)
        return all(y in subset for x in subset for y in self.down_set(x))

    def act(self, x: str) -> str:
        return self.action.get(x, x)

    def is_fixed(self, x: str) -> bool:
        return self.act(x) == x

    def fixed_points(self) -> List[str]:
        return [x for x in self.ordered() if self.is_fixed(x)]

    def orbit(self, x: str) -> List[str]:
        out = [x]
        y = self.act(x)
        while y != x:
            out.append(y)
            y = self.act(y)
        return out

    def is_stable(self, subset: Iterable[str]) -> bool:
        subset = set(subset)
        return all(self.act(x) in subset for x in subset)

    def has_trivial_action(self) -> bool:
        return all(self.is_fixed(x) for x in self.elements)

    def ordered(self, subset: Optional[Iterable[str]] = None) -> List[str]:
        """A linear extension, ties broken by label."""
        items = self.elements if subset is None else subset
        return sorted(items, key=lambda x: (len(self.down_set(x)), x))

    def chains(self, subset: Optional[Iterable[str]] = None) -> List[Chain]:
        """All strict chains inside subset, shortest first."""
        order = self.ordered(subset)
        out: List[Chain] = []

        def extend(chain: Chain, start: int) -> None:
            out.append(chain)
            for i in range(start, len(order)):
                if self.lt(chain[-1], order[i]):
                    extend(chain + (order[i],), i + 1)

        for i, x in enumerate(order):
            extend((x,), i + 1)
        rank = {x: i for i, x in enumerate(order)}
        return sorted(out, key=lambda c: (len(c), [rank[x] for x in c]))

    def covers(self) -> List[Tuple[str, str]]:
        return [
            (a, b)
            for a in self.elements
            for b in self.elements
            if self.lt(a, b) and not any(self.lt(a, c) and self.lt(c, b) for c in self.elements)
        ]

    def subposet(self, subset: Iterable[str], keep_action: bool = True) -> "StratPoset":
        subset = set(subset)
        elements = tuple(x for x in self.elements if x in subset)
        action = None
        if keep_action and self.is_stable(subset):
            action = {x: self.act(x) for x in elements}
        return StratPoset(
            elements,
            frozenset((a, b) for a, b in self.relations if a in subset and b in subset),
            {x: self.dim[x] for x in elements},
            {x: self.dagger[x] for x in elements},
            action or {x: x for x in elements},
        )

    def fixed_subposet(self) -> "StratPoset":
        return self.subposet(self.fixed_points())

    def problems(self, p: int) -> List[str]:
        out = []
        for a, b in self.relations:
            if a != b and (b, a) in self.relations:
                out.append(f"'{a}' and '{b}' are comparable both ways")
        if sorted(self.action.values()) != sorted(self.elements):
            out.append("action is not a permutation of the strata")
            return out
        for x in self.elements:
            y = x
            for _ in range(p):
                y = self.act(y)
            if y != x:
                out.append(f"action^{p} moves '{x}'")
            if self.dim.get(x) != self.dim.get(self.act(x)):
                out.append(f"action does not preserve dim at '{x}'")
            if self.dagger.get(x) != self.dagger.get(self.act(x)):
                out.append(f"action does not preserve dagger at '{x}'")
        for a, b in self.relations:
            if not self.le(self.act(a), self.act(b)):
                out.append(f"action does not preserve '{a}' <= '{b}'")
        fixed = self.fixed_points()
        if not self.is_down_set(fixed):
            out.append("fixed strata do not form a closed set")
        return out


def _transitive_closure(elements: Tuple[str, ...], leq: Iterable[Tuple[str, str]]) -> FrozenSet[Tuple[str, str]]:
    rel = {(x, x) for x in elements} | set(tuple(r) for r in leq)
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    return frozenset(rel)


def chain_poset(labels: Iterable[str]) -> StratPoset:
    """Totally ordered poset, first label the closed point."""
    labels = list(labels)
    return StratPoset.create(labels, list(zip(labels, labels[1:])))


def _zero(p: int) -> PiComplex:
    return PiComplex(p)


def _zero_map(src: PiComplex, tgt: PiComplex) -> PiChainMap:
    return PiChainMap(src, tgt, {})


@dataclass
class CellSheafComplex:
    base: StratPoset
    p: int
    values: Dict[str, PiComplex]
    gen: Dict[Tuple[str, str], PiChainMap] = field(default_factory=dict)
    equiv: Dict[str, PiChainMap] = field(default_factory=dict)

    @classmethod
    def from_covers(
        cls,
        base: StratPoset,
        p: int,
        values: Dict[str, PiComplex],
        cover_gen: Optional[Dict[Tuple[str, str], PiChainMap]] = None,
        equiv: Optional[Dict[str, PiChainMap]] = None,
    ) -> "CellSheafComplex":
        """Fill in generization along covers and identity defaults."""
        cover_gen = dict(cover_gen or {})
        values = {x: values.get(x) or _zero(p) for x in base.elements}
        gen: Dict[Tuple[str, str], PiChainMap] = {}
        for a, b in base.covers():
            gen[(a, b)] = cover_gen.get((a, b)) or _default_map(values[a], values[b])
        for a, b in cover_gen:
            if (a, b) not in gen:
                gen[(a, b)] = cover_gen[(a, b)]
        # longer relations as composites along covers, in increasing length
        pending = sorted(
            ((a, b) for a, b in base.relations if a != b and (a, b) not in gen),
            key=lambda r: len(base.up_set(r[0]) & base.down_set(r[1])),
        )
        for a, b in pending:
            mid = next(c for c in base.ordered() if (a, c) in gen and (c, b) in gen)
            gen[(a, b)] = compose_maps(gen[(mid, b)], gen[(a, mid)])
        equiv = dict(equiv or {})
        for x in base.elements:
            if x not in equiv:
                equiv[x] = _default_map(values[x], values[base.act(x)])
        return cls(base, p, values, gen, equiv)

    def value(self, x: str) -> PiComplex:
        return self.values[self.base.check(x)]

    def gen_map(self, a: str, b: str) -> PiChainMap:
        if a == b:
            return identity_map(self.value(a))
        if not self.base.lt(a, b):
            raise UnknownStratum(f"'{a}' is not below '{b}'")
        return self.gen[(a, b)]

    def equiv_power(self, x: str, k: int) -> PiChainMap:
        """equiv composed k times starting at x."""
        out = identity_map(self.value(x))
        y = x
        for _ in range(k):
            out = compose_maps(self.equiv[y], out)
            y = self.base.act(y)
        return out

    def equiv_inverse(self, x: str) -> PiChainMap:
        """values(sigma x) -> values(x)."""
        return self.equiv_power(self.base.act(x), self.p - 1)


def _default_map(src: PiComplex, tgt: PiComplex) -> PiChainMap:
    if all(src.rank(n) == tgt.rank(n) for n in set(src.degrees) | set(tgt.degrees)):
        return PiChainMap(src, tgt, {n: IntMatrix.identity(src.rank(n)) for n in src.degrees})
    return _zero_map(src, tgt)


def _maps_equal(f: PiChainMap, g: PiChainMap) -> bool:
    degrees = set(f.src.degrees) | set(g.src.degrees)
    return all(f.component(n) == g.component(n) for n in degrees)


def validate(F: CellSheafComplex) -> List[str]:
    """Every failed invariant of F, as readable messages."""
    out = list(F.base.problems(F.p))
    if out:
        return out
    P = F.base
    for x in P.elements:
        if x not in F.values:
            out.append(f"no value at '{x}'")
        elif F.values[x].p != F.p:
            out.append(f"value at '{x}' has p = {F.values[x].p}")
        elif not F.values[x].is_trivial_action():
            out.append(f"value at '{x}' carries its own action; use equiv")
    if out:
        return out
    for a, b in P.relations:
        if a == b:
            continue
        g = F.gen.get((a, b))
        if g is None:
            out.append(f"missing generization '{a}' -> '{b}'")
        elif g.src != F.values[a] or g.tgt != F.values[b]:
            out.append(f"generization '{a}' -> '{b}' has the wrong source or target")
    if out:
        return out
    for a, b in P.relations:
        for c in P.elements:
            if a != b and b != c and P.lt(b, c):
                lhs = compose_maps(F.gen[(b, c)], F.gen[(a, b)])
                if not _maps_equal(lhs, F.gen[(a, c)]):
                    out.append(f"generization fails functoriality on '{a}' < '{b}' < '{c}'")
    for x in P.elements:
        e = F.equiv.get(x)
        if e is None:
            out.append(f"missing equivariance at '{x}'")
            continue
        if e.src != F.values[x] or e.tgt != F.values[P.act(x)]:
            out.append(f"equivariance at '{x}' has the wrong source or target")
    if out:
        return out
    for x in P.elements:
        if not _maps_equal(F.equiv_power(x, F.p), identity_map(F.values[x])):
            out.append(f"equivariance cocycle fails around the orbit of '{x}'")
    for a, b in P.relations:
        if a == b:
            continue
        lhs = compose_maps(F.equiv[b], F.gen[(a, b)])
        rhs = compose_maps(F.gen[(P.act(a), P.act(b))], F.equiv[a])
        if not _maps_equal(lhs, rhs):
            out.append(f"equivariance does not commute with '{a}' -> '{b}'")
    return out


def require_valid(F: CellSheafComplex) -> CellSheafComplex:
    problems = validate(F)
    if problems:
        raise InvalidComplex("; ".join(problems))
    return F


def with_action(C: PiComplex, action: PiChainMap) -> PiComplex:
    terms = {n: PiModule(C.p, m.rank, action.component(n)) for n, m in C.terms.items()}
    return PiComplex(C.p, terms, dict(C.diffs))


def stalk(F: CellSheafComplex, x: str) -> PiComplex:
    F.base.check(x)
    if F.base.is_fixed(x):
        return with_action(F.values[x], F.equiv[x])
    return F.values[x]


@dataclass
class NerveTotal:
    """Cobar total complex over strict chains, with its block layouts."""

    complex: PiComplex
    chains: List[Chain]
    internal: Dict[Chain, PiComplex]
    layouts: Dict[int, BlockLayout]

    def block(self, vector: List[int], n: int, chain: Chain) -> List[int]:
        layout = self.layouts.get(n)
        if layout is None or chain not in layout:
            return []
        return [vector[i] for i in layout.slice(chain)]


def _nerve_total(
    p: int,
    chains: List[Chain],
    internal: Dict[Chain, PiComplex],
    coface: Callable[[Chain, int, int], IntMatrix],
    act: Optional[Callable[[Chain, int], Tuple[Chain, IntMatrix]]] = None,
) -> NerveTotal:
    live = [c for c in chains if not internal[c].is_zero()]
    if not live:
        return NerveTotal(PiComplex(p), chains, internal, {})
    lo = min(internal[c].bot + len(c) - 1 for c in live)
    hi = max(internal[c].top + len(c) - 1 for c in live)
    layouts = {
        n: BlockLayout([(c, internal[c].rank(n - len(c) + 1)) for c in live]) for n in range(lo, hi + 1)
    }
    terms = {}
    for n, layout in layouts.items():
        rows = [[0] * layout.total for _ in range(layout.total)]
        for c in live:
            m = n - len(c) + 1
            if act is None:
                place(rows, IntMatrix.identity(layout.sizes[c]), layout.offsets[c], layout.offsets[c])
            else:
                image, block = act(c, m)
                place(rows, block, layout.offsets[image], layout.offsets[c])
        terms[n] = PiModule(p, layout.total, IntMatrix.from_rows(rows, layout.total))
    diffs = {}
    for n in range(lo, hi):
        src, tgt = layouts[n], layouts[n + 1]
        out = [[0] * src.total for _ in range(tgt.total)]
        for c in live:
            k = len(c) - 1
            place(out, internal[c].diff(n - k), tgt.offsets[c], src.offsets[c], -1 if k % 2 else 1)
        for c2 in live:
            k2 = len(c2) - 1
            if k2 == 0:
                continue
            for i in range(k2 + 1):
                c = c2[:i] + c2[i + 1:]
                if c not in src or src.sizes[c] == 0 or tgt.sizes[c2] == 0:
                    continue
                place(out, coface(c2, i, n - k2 + 1), tgt.offsets[c2], src.offsets[c], -1 if i % 2 else 1)
        diffs[n] = IntMatrix.from_rows(out, src.total)
    return NerveTotal(PiComplex(p, terms, diffs, act is None), chains, internal, layouts)


def sections_total(F: CellSheafComplex, subset: Optional[Iterable[str]] = None) -> NerveTotal:
    P = F.base
    Q = set(P.elements if subset is None else subset)
    for x in Q:
        P.check(x)
    if not P.is_up_set(Q):
        raise NotUpSet(f"{sorted(Q)} is not upward closed")
    chains = P.chains(Q)
    internal = {c: F.values[c[-1]] for c in chains}

    def coface(c2: Chain, i: int, m: int) -> IntMatrix:
        if i < len(c2) - 1:
            return IntMatrix.identity(F.values[c2[-1]].rank(m))
        return F.gen_map(c2[-2], c2[-1]).component(m)

    act = None
    if P.is_stable(Q):

        def act(c: Chain, m: int) -> Tuple[Chain, IntMatrix]:
            return tuple(P.act(x) for x in c), F.equiv[c[-1]].component(m)

    constants.debug(f"sections over {len(Q)} strata: {len(chains)} chains")
    return _nerve_total(F.p, chains, internal, coface, act)


def sections(F: CellSheafComplex, subset: Optional[Iterable[str]] = None) -> PiComplex:
    return sections_total(F, subset).complex


def _level_zero_map(F: CellSheafComplex, x: str, V: PiComplex, S: NerveTotal) -> PiChainMap:
    """x |-> (gen(x -> mu) x) on the level-0 chains of S."""
    comps = {}
    for n in V.degrees:
        layout = S.layouts.get(n)
        if layout is None:
            continue
        rows = [[0] * V.rank(n) for _ in range(layout.total)]
        for c in S.chains:
            if len(c) == 1 and c in layout:
                place(rows, F.gen_map(x, c[0]).component(n), layout.offsets[c], 0)
        comps[n] = IntMatrix.from_rows(rows, V.rank(n))
    return PiChainMap(V, S.complex, comps)


def restriction_to_link(
    F: CellSheafComplex, x: str, removed: Optional[Iterable[str]] = None
) -> Tuple[PiChainMap, NerveTotal]:
    """r : stalk(x) -> sections over U_x minus the removed closed set (default {x})."""
    P = F.base
    removed = {x} if removed is None else set(removed)
    if x not in removed:
        raise NotDownSet(f"'{x}' is not in the removed set")
    S = sections_total(F, P.up_set(x) - removed)
    V = stalk(F, x) if P.is_fixed(x) else F.values[x]
    return _level_zero_map(F, x, V, S), S


def costalk_map(F: CellSheafComplex, x: str, removed: Optional[Iterable[str]] = None) -> PiChainMap:
    """The canonical map i^! -> i^* at x, as fib(r) -> values(x)."""
    r, _ = restriction_to_link(F, x, removed)
    fib = shift(cone(r), -1)
    V = r.src
    comps = {
        n: IntMatrix.block(
            [[IntMatrix.identity(V.rank(n)), None]],
            [V.rank(n)],
            [V.rank(n), r.tgt.rank(n - 1)],
        )
        for n in fib.degrees
    }
    return PiChainMap(fib, V, comps)


def costalk(F: CellSheafComplex, x: str) -> PiComplex:
    F.base.check(x)
    return costalk_map(F, x).src


def _require_same_base(F: CellSheafComplex, G: CellSheafComplex) -> None:
    if F.p != G.p:
        raise PrimeMismatch(f"sheaves over p = {F.p} and p = {G.p}")
    if F.base != G.base:
        raise BaseMismatch("sheaves live on different posets")


def end_hom_total(F: CellSheafComplex, G: CellSheafComplex) -> NerveTotal:
    """RHom(F, G): chains l0 < ... < lk carry Hom(F(l0), G(lk))."""
    _require_same_base(F, G)
    P = F.base
    chains = P.chains()
    internal = {c: hom_complex(F.values[c[0]], G.values[c[-1]]) for c in chains}

    def coface(c2: Chain, i: int, m: int) -> IntMatrix:
        first, last = c2[0], c2[-1]
        if 0 < i < len(c2) - 1:
            return IntMatrix.identity(internal[c2].rank(m))
        if i == 0:
            src_f, tgt_f = F.values[c2[1]], F.values[first]
            g = F.gen_map(first, c2[1])
            src = hom_layout(src_f, G.values[last], m)
            tgt = hom_layout(tgt_f, G.values[last], m)
            out = [[0] * src.total for _ in range(tgt.total)]
            for a in tgt_f.degrees:
                if a in src:
                    block = precompose(g.component(a), G.values[last].rank(a + m))
                    place(out, block, tgt.offsets[a], src.offsets[a])
            return IntMatrix.from_rows(out, src.total)
        g = G.gen_map(c2[-2], last)
        src = hom_layout(F.values[first], G.values[c2[-2]], m)
        tgt = hom_layout(F.values[first], G.values[last], m)
        out = [[0] * src.total for _ in range(tgt.total)]
        for a in F.values[first].degrees:
            block = postcompose(g.component(a + m), F.values[first].rank(a))
            place(out, block, tgt.offsets[a], src.offsets[a])
        return IntMatrix.from_rows(out, src.total)

    def act(c: Chain, m: int) -> Tuple[Chain, IntMatrix]:
        image = tuple(P.act(x) for x in c)
        f0, g0 = F.values[c[0]], G.values[c[-1]]
        A = F.equiv_inverse(c[0])
        B = G.equiv[c[-1]]
        layout = hom_layout(f0, g0, m)
        out = [[0] * layout.total for _ in range(layout.total)]
        for a in f0.degrees:
            block = precompose(A.component(a), g0.rank(a + m)) @ postcompose(B.component(a + m), f0.rank(a))
            place(out, block, layout.offsets[a], layout.offsets[a])
        return image, IntMatrix.from_rows(out, layout.total)

    return _nerve_total(F.p, chains, internal, coface, act)


def end_hom(F: CellSheafComplex, G: CellSheafComplex) -> PiComplex:
    return end_hom_total(F, G).complex


def identity_cocycle(E: NerveTotal, F: CellSheafComplex) -> List[int]:
    """The identity natural transformation as a degree-0 cocycle of RHom(F, F)."""
    layout = E.layouts.get(0)
    if layout is None:
        return []
    vec = [0] * layout.total
    for c in E.chains:
        if len(c) != 1 or c not in layout:
            continue
        value = F.values[c[0]]
        inner = hom_layout(value, value, 0)
        base = layout.offsets[c]
        for a in value.degrees:
            for i, x in zip(inner.slice(a), vectorise(IntMatrix.identity(value.rank(a)))):
                vec[base + i] = x
    return vec


def cup(
    psi: List[int],
    psi_degree: int,
    phi: List[int],
    phi_degree: int,
    E_gh: NerveTotal,
    E_fg: NerveTotal,
    E_fh: NerveTotal,
    F: CellSheafComplex,
    G: CellSheafComplex,
    H: CellSheafComplex,
) -> List[int]:
    """psi . phi, summing compositions over the splittings of each chain."""
    n = phi_degree + psi_degree
    layout = E_fh.layouts.get(n)
    if layout is None:
        return []
    out = [0] * layout.total
    for chain in E_fh.chains:
        if chain not in layout or layout.sizes[chain] == 0:
            continue
        K = len(chain) - 1
        f0, h1 = F.values[chain[0]], H.values[chain[-1]]
        target = hom_layout(f0, h1, n - K)
        base = layout.offsets[chain]
        for k in range(K + 1):
            x = E_fg.block(phi, phi_degree, chain[: k + 1])
            y = E_gh.block(psi, psi_degree, chain[k:])
            if not any(x) or not any(y):
                continue
            m1, m2 = phi_degree - k, psi_degree - (K - k)
            g_mid = G.values[chain[k]]
            lx = hom_layout(f0, g_mid, m1)
            ly = hom_layout(g_mid, h1, m2)
            sign = -1 if (k * psi_degree) % 2 else 1
            for a in f0.degrees:
                b = a + m1
                if f0.rank(a) == 0 or g_mid.rank(b) == 0 or h1.rank(b + m2) == 0:
                    continue
                phi_a = unvectorise([x[i] for i in lx.slice(a)], g_mid.rank(b), f0.rank(a))
                psi_b = unvectorise([y[i] for i in ly.slice(b)], h1.rank(b + m2), g_mid.rank(b))
                for i, v in zip(target.slice(a), vectorise(psi_b @ phi_a)):
                    out[base + i] += sign * v
    return out


def restrict(F: CellSheafComplex, subset: Iterable[str]) -> CellSheafComplex:
    """F on a subposet; the action is kept only when the subset is stable."""
    subset = set(subset)
    for x in subset:
        F.base.check(x)
    base = F.base.subposet(subset)
    values = {x: F.values[x] for x in base.elements}
    gen = {(a, b): F.gen[(a, b)] for a, b in base.relations if a != b}
    if F.base.is_stable(subset):
        equiv = {x: F.equiv[x] for x in base.elements}
    else:
        equiv = {x: identity_map(values[x]) for x in base.elements}
    return CellSheafComplex(base, F.p, values, gen, equiv)


def extend_by_zero(G: CellSheafComplex, P: StratPoset) -> CellSheafComplex:
    """Values of G on its strata and 0 elsewhere in P."""
    p = G.p
    values = {x: G.values[x] if x in G.base else _zero(p) for x in P.elements}
    gen = {}
    for a, b in P.relations:
        if a == b:
            continue
        if a in G.base and b in G.base:
            gen[(a, b)] = G.gen[(a, b)]
        else:
            gen[(a, b)] = _zero_map(values[a], values[b])
    equiv = {
        x: G.equiv[x] if x in G.base else _zero_map(values[x], values[P.act(x)]) for x in P.elements
    }
    return CellSheafComplex(P, p, values, gen, equiv)


def open_restrict(F: CellSheafComplex, U: Iterable[str]) -> CellSheafComplex:
    U = set(U)
    if not F.base.is_up_set(U):
        raise NotUpSet(f"{sorted(U)} is not open")
    return restrict(F, U)


def extend_zero(G: CellSheafComplex, P: StratPoset) -> CellSheafComplex:
    if not P.is_up_set(G.base.elements):
        raise NotUpSet(f"{sorted(G.base.elements)} is not open in the target poset")
    return extend_by_zero(G, P)


def closed_restrict(F: CellSheafComplex, Z: Iterable[str]) -> CellSheafComplex:
    Z = set(Z)
    if not F.base.is_down_set(Z):
        raise NotDownSet(f"{sorted(Z)} is not closed")
    return restrict(F, Z)


def closed_push(G: CellSheafComplex, P: StratPoset) -> CellSheafComplex:
    if not P.is_down_set(G.base.elements):
        raise NotDownSet(f"{sorted(G.base.elements)} is not closed in the target poset")
    return extend_by_zero(G, P)


def _projection(S_big: NerveTotal, S_small: NerveTotal) -> PiChainMap:
    """Restriction of cochains to a smaller up-set."""
    comps = {}
    for n, small in S_small.layouts.items():
        big = S_big.layouts.get(n)
        if big is None:
            continue
        rows = [[0] * big.total for _ in range(small.total)]
        for c in S_small.chains:
            if c in small and c in big:
                for i, j in zip(small.slice(c), big.slice(c)):
                    rows[i][j] = 1
        comps[n] = IntMatrix.from_rows(rows, big.total)
    return PiChainMap(S_big.complex, S_small.complex, comps)


def _chain_permutation(S_from: NerveTotal, S_to: NerveTotal, G: CellSheafComplex, P: StratPoset) -> PiChainMap:
    comps = {}
    for n, src in S_from.layouts.items():
        tgt = S_to.layouts[n]
        rows = [[0] * src.total for _ in range(tgt.total)]
        for c in S_from.chains:
            if c not in src:
                continue
            image = tuple(P.act(x) for x in c)
            place(rows, G.equiv[c[-1]].component(n - len(c) + 1), tgt.offsets[image], src.offsets[c])
        comps[n] = IntMatrix.from_rows(rows, src.total)
    return PiChainMap(S_from.complex, S_to.complex, comps)


def open_push(G: CellSheafComplex, P: StratPoset) -> CellSheafComplex:
    """j_* G: the value at x is the sections of G over U meet U_x."""
    U = set(G.base.elements)
    if not P.is_up_set(U):
        raise NotUpSet(f"{sorted(U)} is not open in the target poset")
    if not P.is_stable(U):
        raise InvalidComplex(f"{sorted(U)} is not stable under the action")
    trivial = _as_trivial(G)
    totals = {x: sections_total(trivial, U & P.up_set(x)) for x in P.elements}
    values = {x: totals[x].complex for x in P.elements}
    gen = {(a, b): _projection(totals[a], totals[b]) for a, b in P.relations if a != b}
    equiv = {x: _chain_permutation(totals[x], totals[P.act(x)], G, P) for x in P.elements}
    return CellSheafComplex(P, G.p, values, gen, equiv)


def _as_trivial(G: CellSheafComplex) -> CellSheafComplex:
    base = G.base.subposet(G.base.elements, keep_action=False)
    return CellSheafComplex(base, G.p, G.values, G.gen, {x: identity_map(G.values[x]) for x in base.elements})


def sheaf_ops(F: CellSheafComplex, kind: str, subset: Iterable[str]) -> CellSheafComplex:
    """Apply one recollement functor and land back on the base of F."""
    subset = set(subset)
    if kind == "open_restrict":
        return open_restrict(F, subset)
    if kind == "closed_restrict":
        return closed_restrict(F, subset)
    if kind == "extend_zero":
        return extend_zero(open_restrict(F, subset), F.base)
    if kind == "closed_push":
        return closed_push(closed_restrict(F, subset), F.base)
    if kind == "open_push":
        return open_push(open_restrict(F, subset), F.base)
    raise InvalidComplex(f"unknown sheaf operation '{kind}', expected one of {', '.join(SHEAF_OPS)}")


@dataclass
class SheafMap:
    src: CellSheafComplex
    tgt: CellSheafComplex
    components: Dict[str, PiChainMap]


def recollement_triangle(F: CellSheafComplex, U: Iterable[str]) -> Tuple[SheafMap, SheafMap]:
    """j_! j^* F -> F -> i_* i^* F for the open U and its closed complement."""
    U = set(U)
    Z = set(F.base.elements) - U
    A = sheaf_ops(F, "extend_zero", U)
    C = sheaf_ops(F, "closed_push", Z)
    into = {}
    out = {}
    for x in F.base.elements:
        V = F.values[x]
        ident = {n: IntMatrix.identity(V.rank(n)) for n in V.degrees}
        into[x] = PiChainMap(A.values[x], V, ident if x in U else {})
        out[x] = PiChainMap(V, C.values[x], ident if x in Z else {})
    return SheafMap(A, F, into), SheafMap(F, C, out)


def is_termwise_exact(first: SheafMap, second: SheafMap) -> bool:
    for x in first.tgt.base.elements:
        f, g = first.components[x], second.components[x]
        B = first.tgt.values[x]
        for n in B.degrees:
            if not (g.component(n) @ f.component(n)).is_zero():
                return False
            if f.src.rank(n) + g.tgt.rank(n) != B.rank(n):
                return False
    return True


def open_push_unit(F: CellSheafComplex, U: Iterable[str]) -> SheafMap:
    """F -> j_* j^* F."""
    U = set(U)
    target = sheaf_ops(F, "open_push", U)
    restricted = _as_trivial(open_restrict(F, U))
    comps = {}
    for x in F.base.elements:
        S = sections_total(restricted, U & F.base.up_set(x))
        comps[x] = _level_zero_map(F, x, F.values[x], S)
    return SheafMap(F, target, comps)


def tate_stalk_table(F: CellSheafComplex) -> Dict[str, Tuple[int, int]]:
    """Tate dimensions per stratum; strata off the fixed locus carry induced modules."""
    table = {}
    for x in F.base.ordered():
        if F.base.is_fixed(x):
            table[x] = tate_cohomology(stalk(F, x)).dims
        else:
            table[x] = (0, 0)
    return table


def support(F: CellSheafComplex) -> Tuple[Set[str], Set[str]]:
    raw = {x for x, dims in tate_stalk_table(F).items() if dims != (0, 0)}
    return raw, F.base.closure(raw)


def support_adjunction_check(F: CellSheafComplex) -> bool:
    """F -> i_* i^* F onto the Tate support closure has stalkwise perfect cone."""
    _, closed = support(F)
    _, unit = recollement_triangle(F, set(F.base.elements) - closed)
    for x in F.base.fixed_points():
        f = unit.components[x]
        src = with_action(f.src, F.equiv[x])
        tgt = with_action(f.tgt, unit.tgt.equiv[x])
        K = cone(PiChainMap(src, tgt, f.components))
        if tate_cohomology(K).dims != (0, 0):
            return False
    return True


def constant_sheaf(P: StratPoset, p: int, rank: int = 1, degree: int = 0) -> CellSheafComplex:
    value = single(std_module("trivial", p, rank), degree)
    return CellSheafComplex.from_covers(P, p, {x: value for x in P.elements})


def skyscraper(P: StratPoset, p: int, x: str, rank: int = 1) -> CellSheafComplex:
    """The constant lattice on a single closed point, pushed forward."""
    if not P.is_down_set({x}):
        raise NotDownSet(f"'{x}' is not a closed point")
    value = single(std_module("trivial", p, rank))
    return CellSheafComplex.from_covers(P, p, {x: value})


def direct_sum_sheaf(F: CellSheafComplex, G: CellSheafComplex) -> CellSheafComplex:
    _require_same_base(F, G)

    def combine(f: PiChainMap, g: PiChainMap) -> PiChainMap:
        src = direct_sum(f.src, g.src)
        tgt = direct_sum(f.tgt, g.tgt)
        comps = {n: IntMatrix.block_diag([f.component(n), g.component(n)]) for n in src.degrees}
        return PiChainMap(src, tgt, comps)

    values = {x: direct_sum(F.values[x], G.values[x]) for x in F.base.elements}
    gen = {r: combine(F.gen[r], G.gen[r]) for r in F.gen}
    equiv = {x: combine(F.equiv[x], G.equiv[x]) for x in F.base.elements}
    return CellSheafComplex(F.base, F.p, values, gen, equiv)


def shift_sheaf(F: CellSheafComplex, k: int) -> CellSheafComplex:
    def moved(f: PiChainMap) -> PiChainMap:
        return PiChainMap(shift(f.src, k), shift(f.tgt, k), {n - k: c for n, c in f.components.items()})

    values = {x: shift(v, k) for x, v in F.values.items()}
    return CellSheafComplex(
        F.base,
        F.p,
        values,
        {r: moved(g) for r, g in F.gen.items()},
        {x: moved(e) for x, e in F.equiv.items()},
    )
