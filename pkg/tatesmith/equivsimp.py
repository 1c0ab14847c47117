"""Finite simplicial complexes with a simplicial Z/p action.

Simplices are stored as vertex tuples sorted in the global vertex order; the
action sends an oriented simplex to its image with the sign of the
permutation needed to sort it again.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import constants
from .errors import InvalidComplex, NotRegular, UnsupportedInput
from .homcx import PiChainMap, PiComplex
from .linalg import IntMatrix, fp_rank
from .pimod import PiModule
from .stratsheaf import CellSheafComplex, StratPoset, chain_poset, constant_sheaf, require_valid
from .tate import tate_cohomology

Simplex = Tuple[str, ...]


def _sort_sign(items: Sequence[int]) -> int:
    """Sign of the permutation sorting a sequence of distinct integers."""
    items = list(items)
    sign = 1
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


@dataclass
class SimplicialPiComplex:
    p: int
    vertices: Tuple[str, ...]
    simplices: Tuple[Simplex, ...]
    action: Dict[str, str] = field(default_factory=dict)
    subdivisions: int = 0

    @classmethod
    def create(
        cls,
        p: int,
        vertices: Iterable[str],
        simplices: Iterable[Iterable[str]],
        action: Optional[Dict[str, str]] = None,
    ) -> "SimplicialPiComplex":
        """Close the given simplices under faces and check the action."""
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise InvalidComplex("repeated vertex label")
        position = {v: i for i, v in enumerate(vertices)}
        closed = {(v,) for v in vertices}
        for s in simplices:
            s = tuple(s)
            for v in s:
                if v not in position:
                    raise InvalidComplex(f"simplex {list(s)} uses unknown vertex '{v}'")
            if len(set(s)) != len(s):
                raise InvalidComplex(f"simplex {list(s)} repeats a vertex")
            s = tuple(sorted(s, key=position.get))
            for mask in range(1, 2 ** len(s)):
                closed.add(tuple(v for i, v in enumerate(s) if mask >> i & 1))
        ordered = tuple(sorted(closed, key=lambda s: (len(s), [position[v] for v in s])))
        X = cls(p, vertices, ordered, {v: (action or {}).get(v, v) for v in vertices})
        problems = X.problems()
        if problems:
            raise InvalidComplex("; ".join(problems))
        return X

    @property
    def position(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def of_dim(self, k: int) -> List[Simplex]:
        return [s for s in self.simplices if len(s) == k + 1]

    def act(self, s: Simplex) -> Tuple[Simplex, int]:
        """Image of an oriented simplex and its orientation sign."""
        pos = self.position
        image = [self.action[v] for v in s]
        return tuple(sorted(image, key=pos.get)), _sort_sign([pos[v] for v in image])

    def is_fixed_vertex(self, v: str) -> bool:
        return self.action[v] == v

    def is_regular(self) -> bool:
        """Every simplex fixed as a set is fixed pointwise."""
        for s in self.simplices:
            if self.act(s)[0] == s and not all(self.is_fixed_vertex(v) for v in s):
                return False
        return True

    def problems(self) -> List[str]:
        out = []
        if not constants.is_odd_prime(self.p):
            out.append(f"p = {self.p} is not an odd prime")
        if sorted(self.action.values()) != sorted(self.vertices):
            out.append("action is not a permutation of the vertices")
            return out
        for v in self.vertices:
            w = v
            for _ in range(self.p):
                w = self.action[w]
            if w != v:
                out.append(f"action^{self.p} moves '{v}'")
        simplices = set(self.simplices)
        for s in self.simplices:
            if self.act(s)[0] not in simplices:
                out.append(f"image of {list(s)} is not a simplex")
        return out

    def require_regular(self) -> "SimplicialPiComplex":
        if not self.is_regular():
            raise NotRegular("some simplex is fixed as a set but not pointwise")
        return self


def barycentric_subdivision(X: SimplicialPiComplex) -> SimplicialPiComplex:
    """Vertices are the simplices of X, simplices are flags of faces."""
    label = {s: s[0] if len(s) == 1 else "[" + ",".join(s) + "]" for s in X.simplices}
    flags: List[List[Simplex]] = [[s] for s in X.simplices]
    out = []
    while flags:
        flag = flags.pop()
        out.append([label[s] for s in flag])
        top = flag[-1]
        for t in X.simplices:
            if len(t) > len(top) and set(top) <= set(t):
                flags.append(flag + [t])
    action = {label[s]: label[X.act(s)[0]] for s in X.simplices}
    Y = SimplicialPiComplex.create(X.p, [label[s] for s in X.simplices], out, action)
    Y.subdivisions = X.subdivisions + 1
    return Y


def regularize(X: SimplicialPiComplex) -> SimplicialPiComplex:
    while not X.is_regular():
        constants.debug(f"subdividing complex with {len(X.simplices)} simplices")
        X = barycentric_subdivision(X)
    return X


def coboundary(X: SimplicialPiComplex, k: int) -> IntMatrix:
    """d^k : C^k -> C^(k+1) in the sorted simplex bases."""
    src, tgt = X.of_dim(k), X.of_dim(k + 1)
    index = {s: i for i, s in enumerate(src)}
    rows = [[0] * len(src) for _ in tgt]
    for r, t in enumerate(tgt):
        for i in range(len(t)):
            rows[r][index[t[:i] + t[i + 1:]]] += -1 if i % 2 else 1
    return IntMatrix.from_rows(rows, len(src))


def action_matrix(X: SimplicialPiComplex, k: int) -> IntMatrix:
    simplices = X.of_dim(k)
    index = {s: i for i, s in enumerate(simplices)}
    rows = [[0] * len(simplices) for _ in simplices]
    for j, s in enumerate(simplices):
        image, sign = X.act(s)
        rows[index[image]][j] = sign
    return IntMatrix.from_rows(rows, len(simplices))


def cochains(X: SimplicialPiComplex) -> PiComplex:
    X.require_regular()
    top = X.dimension
    terms = {k: PiModule(X.p, len(X.of_dim(k)), action_matrix(X, k)) for k in range(top + 1)}
    diffs = {k: coboundary(X, k) for k in range(top)}
    return PiComplex(X.p, terms, diffs)


def fixed_subcomplex(X: SimplicialPiComplex) -> SimplicialPiComplex:
    X.require_regular()
    fixed = [v for v in X.vertices if X.is_fixed_vertex(v)]
    simplices = [s for s in X.simplices if all(X.is_fixed_vertex(v) for v in s)]
    return SimplicialPiComplex.create(X.p, fixed, simplices)


def fp_cohomology(X: SimplicialPiComplex, p: Optional[int] = None) -> Dict[int, int]:
    """dim H^k(X; F_p), by ranks of coboundary matrices."""
    p = p or X.p
    counts = [len(X.of_dim(k)) for k in range(X.dimension + 1)]
    ranks = [fp_rank(coboundary(X, k), p) for k in range(X.dimension)]
    ranks = [0] + ranks + [0]
    return {k: counts[k] - ranks[k + 1] - ranks[k] for k in range(len(counts))}


def euler(X: SimplicialPiComplex) -> int:
    return sum(-1 if len(s) % 2 == 0 else 1 for s in X.simplices)


@dataclass
class LocalizationReport:
    tate: Tuple[int, int]
    fixed: Tuple[int, int]
    euler: int
    fixed_euler: int
    subdivisions: int
    p: int

    @property
    def euler_congruent(self) -> bool:
        return (self.euler - self.fixed_euler) % self.p == 0

    @property
    def verdict(self) -> str:
        return "pass" if self.tate == self.fixed and self.euler_congruent else "fail"

    def as_dict(self) -> Dict[str, object]:
        return {
            "tate": list(self.tate),
            "fixed_locus": list(self.fixed),
            "euler": self.euler,
            "fixed_euler": self.fixed_euler,
            "euler_congruent": self.euler_congruent,
            "subdivisions": self.subdivisions,
            "verdict": self.verdict,
        }


def smith_localization_check(X: SimplicialPiComplex) -> LocalizationReport:
    """Tate cohomology of the cochains against F_p cohomology of the fixed points."""
    X.require_regular()
    tate = tate_cohomology(cochains(X)).dims
    Y = fixed_subcomplex(X)
    dims = fp_cohomology(Y, X.p)
    even = sum(d for k, d in dims.items() if k % 2 == 0)
    odd = sum(d for k, d in dims.items() if k % 2 == 1)
    return LocalizationReport(tate, (even, odd), euler(X), euler(Y), X.subdivisions, X.p)


def face_poset(X: SimplicialPiComplex, dagger: Optional[Dict[str, int]] = None) -> StratPoset:
    """Open simplices ordered by the face relation."""
    X.require_regular()
    label = {s: "+".join(s) for s in X.simplices}
    leq = [
        (label[s], label[t])
        for s in X.simplices
        for t in X.simplices
        if len(s) + 1 == len(t) and set(s) <= set(t)
    ]
    return StratPoset.create(
        [label[s] for s in X.simplices],
        leq,
        dim={label[s]: len(s) - 1 for s in X.simplices},
        dagger=dagger,
        action={label[s]: label[X.act(s)[0]] for s in X.simplices},
    )


def face_poset_export(
    X: SimplicialPiComplex,
    values: Optional[Dict[str, PiComplex]] = None,
    gen: Optional[Dict[Tuple[str, str], PiChainMap]] = None,
    rank: int = 1,
) -> Tuple[StratPoset, CellSheafComplex]:
    """The face poset with the constant sheaf, or the given sheaf data, on it."""
    P = face_poset(X)
    if values is None:
        F = constant_sheaf(P, X.p, rank)
    else:
        F = CellSheafComplex.from_covers(P, X.p, values, gen)
    return P, require_valid(F)


def point(p: int) -> SimplicialPiComplex:
    return SimplicialPiComplex.create(p, ["o"], [])


def polygon(p: int) -> SimplicialPiComplex:
    """The p-gon circle with the rotation."""
    names = [f"v{i}" for i in range(p)]
    edges = [(names[i], names[(i + 1) % p]) for i in range(p)]
    return SimplicialPiComplex.create(p, names, edges, {names[i]: names[(i + 1) % p] for i in range(p)})


def suspension(p: int) -> SimplicialPiComplex:
    """Suspension of the p-gon, rotating the equator and fixing both cone points."""
    circle = polygon(p)
    edges = [s for s in circle.simplices if len(s) == 2]
    cones = [(c,) + e for c in ("n", "s") for e in edges]
    return SimplicialPiComplex.create(p, list(circle.vertices) + ["n", "s"], cones, dict(circle.action))


def triangle(p: int) -> SimplicialPiComplex:
    """Boundary of the 2-simplex with the trivial action."""
    return SimplicialPiComplex.create(p, ["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])


EXAMPLES = {
    "point": point,
    "polygon": polygon,
    "suspension": suspension,
    "triangle": triangle,
}


def example_space(name: str, p: int) -> SimplicialPiComplex:
    if name not in EXAMPLES:
        raise UnsupportedInput(f"'{name}' is not a simplicial example, choose from {', '.join(EXAMPLES)}")
    return EXAMPLES[name](p)


def example_sheaf(name: str, p: int) -> CellSheafComplex:
    """Constant sheaf on a named example; chain2 is the two-element chain poset."""
    if name == "chain2":
        return constant_sheaf(chain_poset(["z", "u"]), p)
    return face_poset_export(example_space(name, p))[1]
