"""Parity and Tate-parity of sheaf complexes, the Smith functor, and the lifting functor L.

Conventions: a complex is ?-even at a stratum when the cohomology of its
?-restriction there is p-torsion free and lives in degrees congruent to the
pariversity mod 2; it is ?-Tate-even when T^1 of the ?-restriction shifted by
the pariversity vanishes. Odd means the shift by one is even.

For trivial-action inputs a Tate cocycle z = sum_a z_a of the Tate double
complex (z_a in degree a, slot -a) gives classes z_a mod p in H^a of the mod p
reduction for even a. This slot decomposition identifies T^0 with the sum of
the even mod p cohomology groups and is how L and the algebra of
endomorphisms are computed.
"""

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from . import constants
from .constants import MAX_ENUMERATION, SAMPLES, SEED
from .errors import (
    DecompositionMismatch,
    NegativeExtensions,
    NotNormal,
    NotTateParity,
    SpectralBoundFailure,
    UnsupportedInput,
)
from .fdalgebra import FpAlgebra
from .homcx import (
    BlockLayout,
    FpComplex,
    PiChainMap,
    PiComplex,
    cohomology,
    cone,
    eps_push_complex,
    identity_map,
    modular_reduce,
)
from .linalg import FpQuotient, IntMatrix, fp_rank, quotient_presentation
from .stratsheaf import (
    CellSheafComplex,
    NerveTotal,
    costalk,
    costalk_map,
    cup,
    end_hom_total,
    identity_cocycle,
    restrict,
    sections,
    stalk,
    tate_stalk_table,
)
from .tate import (
    TateVS,
    group_hypercohomology,
    tate_cohomology,
    tate_map,
    to_tate_vector,
)


def shifted_dims(dims: Tuple[int, int], k: int) -> Tuple[int, int]:
    """(T^0, T^1) of X[k] from those of X."""
    return (dims[k % 2], dims[(k + 1) % 2])


def _placement(degrees: Sequence[int], dagger: int) -> str:
    if not degrees:
        return "zero"
    if all((d - dagger) % 2 == 0 for d in degrees):
        return "even"
    if all((d - dagger) % 2 == 1 for d in degrees):
        return "odd"
    return "mixed"


def _tate_placement(dims: Tuple[int, int]) -> str:
    t0, t1 = dims
    if not t0 and not t1:
        return "zero"
    if not t1:
        return "tate-even"
    if not t0:
        return "tate-odd"
    return "mixed"


@dataclass
class StratumParity:
    stratum: str
    kind: str
    degrees: List[int]
    free: bool
    verdict: str
    tate: Optional[Tuple[int, int]] = None

    def as_dict(self) -> Dict[str, object]:
        out = {
            "stratum": self.stratum,
            "kind": self.kind,
            "degrees": self.degrees,
            "free": self.free,
            "verdict": self.verdict,
        }
        if self.tate is not None:
            out["tate"] = list(self.tate)
        return out


@dataclass
class ParityReport:
    coeff: str
    rows: List[StratumParity]
    verdict: str
    certificate: Optional[Dict[str, object]] = None

    def as_dict(self) -> Dict[str, object]:
        out = {"coeff": self.coeff, "verdict": self.verdict, "strata": [r.as_dict() for r in self.rows]}
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


def restrictions(F: CellSheafComplex, x: str) -> Dict[str, PiComplex]:
    return {"*": stalk(F, x), "!": costalk(F, x)}


def _integral_row(F: CellSheafComplex, x: str, kind: str, C: PiComplex) -> StratumParity:
    degrees, free = [], True
    for n, inv in cohomology(C).items():
        if not inv.p_local_is_zero():
            degrees.append(n)
        if inv.has_p_torsion():
            free = False
    verdict = _placement(degrees, F.base.dagger[x]) if free else "none"
    return StratumParity(x, kind, degrees, free, verdict)


def _fp_row(F: CellSheafComplex, x: str, kind: str, C: PiComplex) -> StratumParity:
    dims = modular_reduce(C).cohomology_dims()
    degrees = [n for n, d in sorted(dims.items()) if d]
    return StratumParity(x, kind, degrees, True, _placement(degrees, F.base.dagger[x]))


def _global(verdicts: Sequence[str], prefix: str = "") -> str:
    live = [v for v in verdicts if v != "zero"]
    if not live:
        return "zero"
    if all(v == f"{prefix}even" for v in live):
        return f"{prefix}even"
    if all(v == f"{prefix}odd" for v in live):
        return f"{prefix}odd"
    return ""


def check_parity(F: CellSheafComplex, coeff: str = "integral") -> ParityReport:
    """Stalks and costalks of the underlying complex at every stratum."""
    row = _integral_row if coeff == "integral" else _fp_row
    rows = []
    for x in F.base.ordered():
        for kind, C in restrictions(F, x).items():
            rows.append(row(F, x, kind, C))
    verdicts = [r.verdict for r in rows]
    verdict = _global(verdicts)
    if not verdict:
        verdict = "none" if "none" in verdicts else "parity"
    return ParityReport(coeff, rows, verdict)


def hom_sum_certificate(F: CellSheafComplex, G: Optional[CellSheafComplex] = None) -> Dict[str, object]:
    """Compare Tate homs F -> G with the sum of stalk/costalk pairings over fixed strata."""
    G = G or F
    expected = [0, 0]
    for x in F.base.fixed_points():
        s = tate_cohomology(stalk(F, x)).dims
        c = tate_cohomology(costalk(G, x)).dims
        for e in (0, 1):
            expected[e] += s[0] * c[e % 2] + s[1] * c[(1 + e) % 2]
    actual = tate_hom_dims(F, G)
    return {"expected": expected, "actual": list(actual), "holds": tuple(expected) == actual}


def check_tate_parity(F: CellSheafComplex) -> ParityReport:
    rows = []
    for x in F.base.fixed_points():
        dagger = F.base.dagger[x]
        for kind, C in restrictions(F, x).items():
            dims = shifted_dims(tate_cohomology(C).dims, dagger)
            degrees = [i for i in (0, 1) if dims[i]]
            rows.append(StratumParity(x, kind, degrees, True, _tate_placement(dims), dims))
    verdict = _global([r.verdict for r in rows], "tate-")
    certificate = hom_sum_certificate(F)
    if not verdict:
        verdict = "tate-parity" if certificate["holds"] else "none"
    return ParityReport("tate", rows, verdict, certificate)


def eps_push(obj: Union[PiComplex, CellSheafComplex]) -> Union[PiComplex, CellSheafComplex]:
    """Inflate along the trivial action."""
    if isinstance(obj, PiComplex):
        return eps_push_complex(obj)
    if not obj.base.has_trivial_action():
        raise UnsupportedInput("eps_push needs a sheaf on a poset with trivial action")
    equiv = {x: identity_map(obj.values[x]) for x in obj.base.elements}
    return CellSheafComplex(obj.base, obj.p, obj.values, obj.gen, equiv)


def is_eps_presented(F: CellSheafComplex) -> bool:
    if not F.base.has_trivial_action():
        return False
    for x, e in F.equiv.items():
        if any(e.component(n) != IntMatrix.identity(F.values[x].rank(n)) for n in F.values[x].degrees):
            return False
    return True


def tate_model(F: CellSheafComplex, error: type = UnsupportedInput) -> CellSheafComplex:
    """F itself when eps-presented, else its restriction to the fixed locus.

    Chains through a free orbit only contribute perfect summands, so the
    restriction has the same Tate homs as F.
    """
    if is_eps_presented(F):
        return F
    fixed = F.base.fixed_points()
    if fixed:
        local = restrict(F, fixed)
        if is_eps_presented(local):
            return local
    raise error(
        "needs a trivial-action input, or a fixed locus on which the action is trivial on the values"
    )


@dataclass
class SmithStratum:
    stratum: str
    stalk: Tuple[int, int]
    costalk: Tuple[int, int]
    cone: Tuple[int, int]
    verdict: str

    def as_dict(self) -> Dict[str, object]:
        return {
            "stratum": self.stratum,
            "stalk": list(self.stalk),
            "costalk": list(self.costalk),
            "cone": list(self.cone),
            "verdict": self.verdict,
        }


@dataclass
class SmithReport:
    psm: Optional[CellSheafComplex]
    rows: List[SmithStratum]
    verdict: str
    table: Dict[str, Tuple[int, int]] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict,
            "fixed_strata": [r.as_dict() for r in self.rows],
            "psm": {x: list(d) for x, d in self.table.items()},
        }


def fixed_locus_costalk_map(F: CellSheafComplex, x: str) -> PiChainMap:
    """(i^! F)_x -> (i^* F)_x for the inclusion i of the fixed locus."""
    fixed = set(F.base.fixed_points())
    return costalk_map(F, x, fixed & F.base.up_set(x))


def smith(F: CellSheafComplex) -> SmithReport:
    """Restriction to the fixed locus, checked against the costalk route."""
    fixed = F.base.fixed_points()
    if not fixed:
        return SmithReport(None, [], "smith-iso")
    psm = restrict(F, fixed)
    rows = []
    for x in fixed:
        f = fixed_locus_costalk_map(F, x)
        s = tate_cohomology(f.tgt).dims
        c = tate_cohomology(f.src).dims
        k = tate_cohomology(cone(f)).dims
        rows.append(SmithStratum(x, s, c, k, "smith-iso" if k == (0, 0) else "not-iso"))
    verdict = "smith-iso" if all(r.verdict == "smith-iso" for r in rows) else "not-iso"
    return SmithReport(psm, rows, verdict, tate_stalk_table(psm))


@dataclass
class ModHomSpaces:
    """H^n of Hom(F, G) (x) F_p for n of one parity, with the cup structure."""

    total: NerveTotal
    quotients: Dict[int, FpQuotient]
    p: int

    @property
    def degrees(self) -> List[int]:
        return sorted(n for n, q in self.quotients.items() if q.dim)

    def dim(self, n: Optional[int] = None) -> int:
        if n is None:
            return sum(q.dim for q in self.quotients.values())
        q = self.quotients.get(n)
        return q.dim if q else 0

    def coordinates(self, n: int, cocycle: Sequence[int]) -> List[int]:
        q = self.quotients.get(n)
        if q is None or not q.dim:
            return []
        return q.coordinates([x % self.p for x in cocycle])


def mod_hom_spaces(
    F: CellSheafComplex, G: CellSheafComplex, parity: int = 0, total: Optional[NerveTotal] = None
) -> ModHomSpaces:
    E = total or end_hom_total(F, G)
    C = E.complex
    quotients = {
        n: FpQuotient(C.diff(n - 1), C.diff(n), F.p) for n in C.degrees if n % 2 == parity % 2
    }
    return ModHomSpaces(E, quotients, F.p)


def tate_hom_dims(F: CellSheafComplex, G: CellSheafComplex) -> Tuple[int, int]:
    return tate_cohomology(end_hom_total(F, G).complex).dims


def slot_matrix(E: PiComplex, vs: TateVS, spaces: ModHomSpaces) -> Tuple[IntMatrix, List[int]]:
    """Matrix of T^0 -> sum of even mod p cohomology, via slot components.

    Rows are grouped by degree in the returned order.
    """
    layout = BlockLayout([(a, E.rank(a)) for a in E.degrees])
    order = spaces.degrees
    columns = []
    for z in vs.bases[0]:
        col = []
        for a in order:
            col += spaces.coordinates(a, [z[i] for i in layout.slice(a)])
        columns.append(col)
    rows = sum(spaces.dim(a) for a in order)
    return IntMatrix.from_columns(columns, rows).mod(E.p), order


def _degree_block(order: List[int], spaces: ModHomSpaces, n: int) -> range:
    start = 0
    for a in order:
        if a == n:
            return range(start, start + spaces.dim(a))
        start += spaces.dim(a)
    return range(start, start)


def _tate_class_of_map(E: PiComplex, vs: TateVS, phi: Sequence[int]) -> List[int]:
    """T^0 coordinates of a degree-0 cocycle placed in slot 0."""
    layout = BlockLayout([(a, E.rank(a)) for a in E.degrees])
    vec = [0] * layout.total
    if 0 in layout:
        for i, x in zip(layout.slice(0), phi):
            vec[i] = x
    return vs.coordinates(0, vec)


def hom_algebra(
    F: CellSheafComplex, spaces: Optional[ModHomSpaces] = None, degrees: Optional[Sequence[int]] = None
) -> Tuple[FpAlgebra, List[Tuple[int, int]]]:
    """The algebra sum_i H^(2i)(End(F) (x) F_p) under cup product.

    Returns the algebra and, per basis vector, its (degree, index).
    """
    spaces = spaces or mod_hom_spaces(F, F)
    E = spaces.total
    degrees = [n for n in spaces.degrees if degrees is None or n in degrees]
    basis = [(n, j) for n in degrees for j in range(spaces.dim(n))]
    position = {b: i for i, b in enumerate(basis)}
    reps = {n: spaces.quotients[n].representatives for n in degrees}
    table = []
    for n1, j1 in basis:
        row = []
        for n2, j2 in basis:
            out = [0] * len(basis)
            n = n1 + n2
            if n in reps:
                prod = cup(reps[n1][j1], n1, reps[n2][j2], n2, E, E, E, F, F, F)
                for j, c in enumerate(spaces.coordinates(n, prod)):
                    out[position[(n, j)]] = c
            row.append(out)
        table.append(row)
    unit = [0] * len(basis)
    if 0 in reps:
        for j, c in enumerate(spaces.coordinates(0, identity_cocycle(E, F))):
            unit[position[(0, j)]] = c
    return FpAlgebra(F.p, table, unit), basis


@dataclass
class Summand:
    support: List[str]
    stratum: str
    shift: int
    multiplicity: int

    def as_dict(self) -> Dict[str, object]:
        return {
            "support": self.support,
            "stratum": self.stratum,
            "shift": self.shift,
            "multiplicity": self.multiplicity,
        }


@dataclass
class DecompositionReport:
    summands: List[Summand]
    algebra_dim: int
    local: bool
    idempotents: Optional[int] = None
    justification: str = ""

    def as_dict(self) -> Dict[str, object]:
        return {
            "summands": [s.as_dict() for s in self.summands],
            "algebra_dim": self.algebra_dim,
            "local": self.local,
            "idempotents": self.idempotents,
            "justification": self.justification,
        }


def multiplicities(F: CellSheafComplex) -> List[Summand]:
    """Rank of T^i(i^! F[dagger] -> i^* F[dagger]) at each fixed stratum."""
    out = []
    for x in F.base.fixed_points():
        M0, M1 = tate_map(costalk_map(F, x))
        dagger = F.base.dagger[x]
        for i in (0, 1):
            block = (M0, M1)[(i + dagger) % 2]
            m = fp_rank(block, F.p)
            if m:
                out.append(Summand(sorted(F.base.closure([x])), x, i, m))
    return out


def tate_end_algebra(F: CellSheafComplex) -> Tuple[FpAlgebra, str]:
    """The algebra T^0 End(F) under composition, read on tate_model(F).

    On a trivial-action model T^0 is the even mod p cohomology of the Hom
    complex and composition is the cup product.
    """
    model = tate_model(F)
    A, _ = hom_algebra(model)
    if model is F:
        route = "mod p reduction of the endomorphism algebra"
    else:
        route = f"mod p endomorphism algebra of the restriction to {', '.join(model.base.ordered())}"
    target = tate_hom_dims(F, F)[0]
    if A.dim != target:
        raise DecompositionMismatch(f"algebra has dimension {A.dim}, T^0 of the Hom complex is {target}")
    return A, route


def decompose_tate(F: CellSheafComplex, max_enumeration: int = MAX_ENUMERATION) -> DecompositionReport:
    report = check_tate_parity(F)
    if report.verdict not in ("tate-even", "tate-odd", "tate-parity", "zero"):
        raise NotTateParity(f"hom-sum certificate fails: {report.certificate}")
    summands = multiplicities(F)
    count = sum(s.multiplicity for s in summands)
    if not F.base.fixed_points():
        return DecompositionReport(summands, 0, False, 0, "empty fixed locus: the sheaf is Tate-zero")
    try:
        A, route = tate_end_algebra(F)
    except UnsupportedInput:
        if len(F.base.elements) != 1:
            raise
        x = F.base.elements[0]
        t0, t1 = tate_cohomology(stalk(F, x)).dims
        return DecompositionReport(
            summands, t0 * t0 + t1 * t1, count == 1, None, "one stratum: classified over a point"
        )
    A.max_enumeration = max_enumeration
    idempotents = len(A.primitive_idempotents())
    if idempotents != count:
        raise DecompositionMismatch(
            f"{count} summands from costalk ranks, {idempotents} primitive idempotents"
        )
    constants.debug(f"decomposition: {idempotents} primitive idempotents in dimension {A.dim}")
    return DecompositionReport(summands, A.dim, idempotents == 1, idempotents, f"locality tested on the {route}")


def _random_cocycles(C: PiComplex, n: int, rng: random.Random, count: int) -> List[List[int]]:
    pres = quotient_presentation(C.diff(n - 1), C.diff(n), C.p)
    basis = pres.kernel_basis.columns()
    out = []
    for _ in range(count):
        vec = [0] * pres.kernel_basis.rows
        for b in basis:
            c = rng.randint(-2, 2)
            vec = [x + c * y for x, y in zip(vec, b)]
        out.append(vec)
    return out


def modular_compare(
    F: CellSheafComplex,
    G: Optional[CellSheafComplex] = None,
    samples: int = SAMPLES,
    seed: int = SEED,
) -> Dict[str, object]:
    """Integral parity against mod p parity, and Tate homs against mod p homs.

    Inputs with a nontrivial action compare homs on their restrictions to the
    fixed locus.
    """
    G = G or F
    parity_integral = check_parity(F).verdict
    parity_fp = check_parity(F, "fp").verdict
    F_model, G_model = tate_model(F, UnsupportedInput), tate_model(G, UnsupportedInput)
    total = end_hom_total(F_model, G_model)
    E = total.complex
    vs = tate_cohomology(E, with_bases=True)
    if F_model is not F and vs.t0_dim != tate_hom_dims(F, G)[0]:
        raise DecompositionMismatch(
            f"restriction to the fixed locus has {vs.t0_dim} Tate homs, the full sheaf {tate_hom_dims(F, G)[0]}"
        )
    F, G = F_model, G_model
    spaces = mod_hom_spaces(F, G, 0, total)
    fp_side = spaces.dim()
    S, order = slot_matrix(E, vs, spaces)
    slot_rank = fp_rank(S, F.p)
    rng = random.Random(seed)
    addendum = True
    block0 = _degree_block(order, spaces, 0)
    for phi in _random_cocycles(E, 0, rng, samples) if 0 in E.degrees else []:
        coords = _tate_class_of_map(E, vs, phi)
        image = [x % F.p for x in S.apply(coords)]
        direct = [0] * S.rows
        for i, c in zip(block0, spaces.coordinates(0, phi)):
            direct[i] = c
        addendum = addendum and image == direct
    return {
        "domain": F.base.ordered(),
        "parity": {"integral": parity_integral, "fp": parity_fp, "agree": parity_integral == parity_fp},
        "homs": {"tate": vs.t0_dim, "fp_even_sum": fp_side, "slot_rank": slot_rank, "agree": vs.t0_dim == fp_side == slot_rank},
        "addendum": {"samples": samples if 0 in E.degrees else 0, "holds": addendum},
    }


@dataclass
class LiftReport:
    objects: Dict[str, Dict[int, int]]
    end_dim: int
    degree0_dim: int
    identity_ok: bool
    functorial: bool
    addendum: bool
    samples: int
    domain: List[str] = field(default_factory=list)

    def as_dict(self) -> Dict[str, object]:
        return {
            "objects": {x: {str(n): d for n, d in dims.items()} for x, dims in self.objects.items()},
            "end_dim": self.end_dim,
            "degree0_dim": self.degree0_dim,
            "identity": self.identity_ok,
            "functorial": self.functorial,
            "addendum": self.addendum,
            "samples": self.samples,
            "domain": self.domain,
        }


def lift_L(F: CellSheafComplex, samples: int = SAMPLES, seed: int = SEED) -> LiftReport:
    """The degree-0 projection from Tate endomorphisms to mod p endomorphisms.

    Computed on tate_model(F); the report names the strata it ran on.
    """
    F = tate_model(F, NotNormal)
    verdict = check_parity(F).verdict
    if verdict not in ("even", "zero"):
        raise NotNormal(f"lift is {verdict}, not a sum of unshifted parity sheaves")
    total = end_hom_total(F, F)
    E = total.complex
    for n, inv in cohomology(E).items():
        if n < 0 and not inv.p_local_is_zero():
            raise NegativeExtensions(f"Hom(F, F[{n}]) = {inv}")
    vs = tate_cohomology(E, with_bases=True)
    spaces = mod_hom_spaces(F, F, 0, total)
    S, order = slot_matrix(E, vs, spaces)
    block0 = _degree_block(order, spaces, 0)
    A0, _ = hom_algebra(F, spaces, [0])

    def L(tate_coords: Sequence[int]) -> List[int]:
        image = S.apply(tate_coords)
        return [image[i] % F.p for i in block0]

    identity = identity_cocycle(total, F)
    identity_ok = not identity or L(_tate_class_of_map(E, vs, identity)) == [x % F.p for x in A0.unit]
    rng = random.Random(seed)
    cocycles = _random_cocycles(E, 0, rng, 2 * samples) if 0 in E.degrees else []
    functorial = addendum = True
    for phi, psi in zip(cocycles[::2], cocycles[1::2]):
        l_phi = L(_tate_class_of_map(E, vs, phi))
        l_psi = L(_tate_class_of_map(E, vs, psi))
        composite = cup(psi, 0, phi, 0, total, total, total, F, F, F)
        l_comp = L(_tate_class_of_map(E, vs, composite))
        functorial = functorial and l_comp == A0.mul(l_psi, l_phi)
        addendum = addendum and l_phi == spaces.coordinates(0, phi)
    objects = {x: modular_reduce(F.values[x]).cohomology_dims() for x in F.base.ordered()}
    constants.debug(f"L checked on {len(cocycles) // 2} sampled pairs")
    return LiftReport(
        objects, vs.t0_dim, spaces.dim(0), identity_ok, functorial, addendum, len(cocycles) // 2, F.base.ordered()
    )


def _restrict_vector(big: NerveTotal, small: NerveTotal, n: int, vector: Sequence[int]) -> List[int]:
    """Restrict a degree-n cochain to the chains of a subposet."""
    src, tgt = big.layouts.get(n), small.layouts.get(n)
    if tgt is None:
        return []
    out = [0] * tgt.total
    if src is None:
        return out
    for c in small.chains:
        if c in tgt and c in src:
            for i, j in zip(tgt.slice(c), src.slice(c)):
                out[i] = vector[j]
    return out


def _restrict_tate_vector(big: NerveTotal, small: NerveTotal, vector: Sequence[int]) -> List[int]:
    B, S = big.complex, small.complex
    src = BlockLayout([(a, B.rank(a)) for a in B.degrees])
    tgt = BlockLayout([(a, S.rank(a)) for a in S.degrees])
    out = [0] * tgt.total
    for a in S.degrees:
        block = [vector[i] for i in src.slice(a)] if a in src else [0] * B.rank(a)
        for i, x in zip(tgt.slice(a), _restrict_vector(big, small, a, block)):
            out[i] = x
    return out


def psm_hom_surjectivity_check(E1: CellSheafComplex, E2: CellSheafComplex) -> Dict[str, object]:
    """Image of sum_(i>=0) Hom(E1, E2[2i]) in Tate homs between the Smith restrictions."""
    fixed = E1.base.fixed_points()
    if not fixed:
        return {"source": {}, "image_rank": 0, "target": 0, "surjective": True}
    big = end_hom_total(E1, E2)
    small = end_hom_total(restrict(E1, fixed), restrict(E2, fixed))
    target = tate_cohomology(small.complex, with_bases=True)
    columns = []
    source = {}
    top = big.complex.top if not big.complex.is_zero() else 0
    for i in range(0, max(1, -(-(top + 4) // 2)) + 1):
        pres = group_hypercohomology(big.complex, 2 * i)
        source[2 * i] = str(pres.invariants)
        for g in pres.generators:
            full = to_tate_vector(big.complex, g)
            columns.append(target.coordinates(0, _restrict_tate_vector(big, small, full)))
    rank = fp_rank(IntMatrix.from_columns(columns, target.t0_dim), E1.p) if columns else 0
    return {
        "source": source,
        "image_rank": rank,
        "target": target.t0_dim,
        "surjective": rank == target.t0_dim,
    }


def tate_sheaf_page(F: CellSheafComplex) -> Dict[Tuple[int, int], int]:
    """dim H^s(fixed locus; T^q F) for the Tate cohomology sheaves T^q F."""
    P = F.base
    fixed = P.fixed_points()
    spaces = {x: tate_cohomology(stalk(F, x), with_bases=True) for x in fixed}
    maps = {}
    for a in fixed:
        for b in fixed:
            if P.lt(a, b):
                g = F.gen_map(a, b)
                f = PiChainMap(stalk(F, a), stalk(F, b), g.components)
                maps[(a, b)] = tate_map(f, spaces[a], spaces[b])
    chains = P.chains(fixed)
    page = {}
    for q in (0, 1):
        levels: Dict[int, List[Tuple[str, ...]]] = {}
        for c in chains:
            levels.setdefault(len(c) - 1, []).append(c)
        layouts = {k: BlockLayout([(c, spaces[c[-1]].dim(q)) for c in cs]) for k, cs in levels.items()}
        diffs = {}
        for k in layouts:
            if k + 1 not in layouts:
                continue
            src, tgt = layouts[k], layouts[k + 1]
            rows = [[0] * src.total for _ in range(tgt.total)]
            for c2 in levels[k + 1]:
                for i in range(len(c2)):
                    c = c2[:i] + c2[i + 1:]
                    sign = -1 if i % 2 else 1
                    if i < len(c2) - 1:
                        block = IntMatrix.identity(spaces[c2[-1]].dim(q))
                    else:
                        block = maps[(c2[-2], c2[-1])][q]
                    for r in range(block.rows):
                        for s in range(block.cols):
                            rows[tgt.offsets[c2] + r][src.offsets[c] + s] += sign * block.entry(r, s)
            diffs[k] = IntMatrix.from_rows(rows, src.total).mod(F.p)
        dims = FpComplex(F.p, {k: lay.total for k, lay in layouts.items()}, diffs).cohomology_dims()
        for s, d in dims.items():
            if d:
                page[(s, q)] = d
    return page


def hyperco_check(F: CellSheafComplex) -> Dict[str, object]:
    """Sum of the Tate cohomology sheaf page against the Tate cohomology of sections."""
    page = tate_sheaf_page(F)
    even = sum(d for (s, q), d in page.items() if (s + q) % 2 == 0)
    odd = sum(d for (s, q), d in page.items() if (s + q) % 2 == 1)
    abutment = tate_cohomology(sections(F)).dims
    bound = even >= abutment[0] and odd >= abutment[1]
    collapse = odd == 0
    if not bound:
        raise SpectralBoundFailure(f"page ({even}, {odd}) is smaller than abutment {abutment}")
    if collapse and (even, odd) != abutment:
        raise SpectralBoundFailure(f"even page ({even}, 0) does not match abutment {abutment}")
    return {
        "page": {f"{s},{q}": d for (s, q), d in sorted(page.items())},
        "page_total": [even, odd],
        "abutment": list(abutment),
        "bound": bound,
        "collapse": collapse,
        "equality": (even, odd) == abutment,
    }

