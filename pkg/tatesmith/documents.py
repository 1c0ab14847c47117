"""JSON documents: pi_complex, strat_sheaf, simplicial and weights."""

import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

from .constants import TOOL_NAME
from .errors import DocumentError, InputError
from .homcx import PiChainMap, PiComplex
from .equivsimp import SimplicialPiComplex
from .linalg import IntMatrix
from .pimod import PiModule, std_module
from .stratsheaf import CellSheafComplex, StratPoset

DOCUMENT_TYPES = ["pi_complex", "strat_sheaf", "simplicial", "weights"]

INT64 = 2**63

Document = Union[PiComplex, CellSheafComplex, SimplicialPiComplex, "WeightsDocument"]


class WeightsDocument:
    def __init__(self, p: int, entries: List[Tuple[int, int, int]]) -> None:
        self.p = p
        self.entries = entries


def _int(value, where: str) -> int:
    if isinstance(value, bool):
        raise DocumentError(f"{where}: expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value)
        except ValueError as e:
            raise DocumentError(f"{where}: '{value}' is not a decimal integer") from e
    raise DocumentError(f"{where}: expected an integer, got {value!r}")


def dump_int(x: int) -> Union[int, str]:
    return x if -INT64 <= x < INT64 else str(x)


def _field(doc: dict, key: str, where: str):
    if not isinstance(doc, dict):
        raise DocumentError(f"{where}: expected an object")
    if key not in doc:
        raise DocumentError(f"{where}: missing field '{key}'")
    return doc[key]


def _matrix(rows, where: str, shape: Optional[Tuple[int, int]] = None) -> IntMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise DocumentError(f"{where}: expected a list of rows")
    cols = shape[1] if shape is not None else None
    try:
        M = IntMatrix.from_rows([[_int(x, where) for x in r] for r in rows], cols)
    except InputError as e:
        raise DocumentError(f"{where}: {e}") from e
    if shape is not None and M.shape != shape:
        raise DocumentError(f"{where}: matrix is {M.shape[0]}x{M.shape[1]}, expected {shape[0]}x{shape[1]}")
    return M


def dump_matrix(M: IntMatrix) -> List[List[Union[int, str]]]:
    return [[dump_int(x) for x in row] for row in M.to_rows()]


def _degree(key: str, where: str) -> int:
    try:
        return int(key)
    except ValueError as e:
        raise DocumentError(f"{where}: degree key '{key}' is not an integer") from e


def load_module(doc: dict, p: int, where: str) -> PiModule:
    if isinstance(doc, dict) and "kind" in doc:
        try:
            return std_module(doc["kind"], p, _int(doc.get("k", 1), f"{where}.k"))
        except InputError as e:
            raise DocumentError(f"{where}: {e}") from e
    rank = _int(_field(doc, "rank", where), f"{where}.rank")
    action = doc.get("action")
    M = IntMatrix.identity(rank) if action is None else _matrix(action, f"{where}.action", (rank, rank))
    try:
        return PiModule(p, rank, M)
    except InputError as e:
        raise DocumentError(f"{where}: {e}") from e


def dump_module(M: PiModule) -> Dict[str, object]:
    return {"rank": M.rank, "action": dump_matrix(M.action)}


def load_complex_body(doc: dict, p: int, where: str) -> PiComplex:
    terms = {
        _degree(k, where): load_module(v, p, f"{where}.terms.{k}")
        for k, v in (_field(doc, "terms", where) or {}).items()
    }
    diffs = {}
    for k, v in (doc.get("diffs") or {}).items():
        n = _degree(k, where)
        shape = tuple(terms[d].rank if d in terms else 0 for d in (n + 1, n))
        diffs[n] = _matrix(v, f"{where}.diffs.{k}", shape)
    try:
        return PiComplex(p, terms, diffs)
    except InputError as e:
        raise DocumentError(f"{where}: {e}") from e


def dump_complex_body(C: PiComplex) -> Dict[str, object]:
    return {
        "terms": {str(n): dump_module(m) for n, m in C.terms.items()},
        "diffs": {str(n): dump_matrix(d) for n, d in C.diffs.items()},
    }


def dump_pi_complex(C: PiComplex) -> Dict[str, object]:
    return {"type": "pi_complex", "p": C.p, **dump_complex_body(C)}


def _chain_map(doc: dict, src: PiComplex, tgt: PiComplex, where: str) -> PiChainMap:
    comps = {}
    for k, v in (doc or {}).items():
        n = _degree(k, where)
        comps[n] = _matrix(v, f"{where}.{k}", (tgt.rank(n), src.rank(n)))
    try:
        return PiChainMap(src, tgt, comps)
    except InputError as e:
        raise DocumentError(f"{where}: {e}") from e


def _relation_key(key: str, where: str) -> Tuple[str, str]:
    parts = key.split("<")
    if len(parts) != 2:
        raise DocumentError(f"{where}: relation key '{key}' should read 'a<b'")
    return parts[0], parts[1]


def load_poset(doc: dict, where: str) -> StratPoset:
    elements = _field(doc, "elements", where)
    leq = doc.get("leq") or []
    if not all(isinstance(r, list) and len(r) == 2 for r in leq):
        raise DocumentError(f"{where}.leq: expected pairs")
    try:
        return StratPoset.create(
            [str(x) for x in elements],
            leq,
            dim={k: _int(v, f"{where}.dim") for k, v in doc["dim"].items()} if "dim" in doc else None,
            dagger={k: _int(v, f"{where}.dagger") for k, v in doc["dagger"].items()} if "dagger" in doc else None,
            action=doc.get("action"),
        )
    except InputError as e:
        raise DocumentError(f"{where}: {e}") from e


def dump_poset(P: StratPoset) -> Dict[str, object]:
    return {
        "elements": list(P.elements),
        "leq": [[a, b] for a, b in P.covers()],
        "dim": dict(P.dim),
        "dagger": dict(P.dagger),
        "action": dict(P.action),
    }


def load_strat_sheaf(doc: dict, p: int) -> CellSheafComplex:
    P = load_poset(_field(doc, "poset", "strat_sheaf"), "strat_sheaf.poset")
    problems = P.problems(p)
    if problems:
        raise DocumentError("strat_sheaf.poset: " + "; ".join(problems))
    values = {}
    for x, v in (doc.get("values") or {}).items():
        if x not in P:
            raise DocumentError(f"strat_sheaf.values: unknown stratum '{x}'")
        values[x] = load_complex_body(v, p, f"strat_sheaf.values.{x}")
    full = {x: values.get(x) or PiComplex(p) for x in P.elements}
    gen = {}
    for key, v in (doc.get("gen") or {}).items():
        a, b = _relation_key(key, "strat_sheaf.gen")
        if not P.lt(a, b):
            raise DocumentError(f"strat_sheaf.gen: '{a}' is not below '{b}'")
        gen[(a, b)] = _chain_map(v, full[a], full[b], f"strat_sheaf.gen.{key}")
    equiv = {}
    for x, v in (doc.get("equiv") or {}).items():
        if x not in P:
            raise DocumentError(f"strat_sheaf.equiv: unknown stratum '{x}'")
        equiv[x] = _chain_map(v, full[x], full[P.act(x)], f"strat_sheaf.equiv.{x}")
    try:
        return CellSheafComplex.from_covers(P, p, values, gen, equiv)
    except InputError as e:
        raise DocumentError(f"strat_sheaf: {e}") from e


def _dump_map(f: PiChainMap) -> Dict[str, object]:
    return {str(n): dump_matrix(c) for n, c in f.components.items()}


def dump_strat_sheaf(F: CellSheafComplex) -> Dict[str, object]:
    return {
        "type": "strat_sheaf",
        "p": F.p,
        "poset": dump_poset(F.base),
        "values": {x: dump_complex_body(C) for x, C in F.values.items() if not C.is_zero()},
        "gen": {f"{a}<{b}": _dump_map(f) for (a, b), f in F.gen.items() if f.components},
        "equiv": {x: _dump_map(f) for x, f in F.equiv.items() if f.components},
    }


def load_simplicial(doc: dict, p: int) -> SimplicialPiComplex:
    vertices = [str(v) for v in _field(doc, "vertices", "simplicial")]
    simplices = doc.get("simplices") or []
    if not all(isinstance(s, list) for s in simplices):
        raise DocumentError("simplicial.simplices: expected a list of vertex lists")
    try:
        return SimplicialPiComplex.create(p, vertices, [[str(v) for v in s] for s in simplices], doc.get("action"))
    except InputError as e:
        raise DocumentError(f"simplicial: {e}") from e


def dump_simplicial(X: SimplicialPiComplex) -> Dict[str, object]:
    maximal = [s for s in X.simplices if not any(len(t) > len(s) and set(s) <= set(t) for t in X.simplices)]
    return {
        "type": "simplicial",
        "p": X.p,
        "vertices": list(X.vertices),
        "simplices": [list(s) for s in maximal],
        "action": {v: w for v, w in X.action.items() if v != w},
    }


def load_weights(doc: dict, p: int) -> WeightsDocument:
    entries = []
    for i, e in enumerate(_field(doc, "entries", "weights")):
        if not isinstance(e, list) or len(e) != 3:
            raise DocumentError(f"weights.entries.{i}: expected [weight, multiplicity, pairing]")
        entries.append(tuple(_int(x, f"weights.entries.{i}") for x in e))
    return WeightsDocument(p, entries)


def parse_document(doc: dict, p: Optional[int] = None) -> Document:
    """Typed object from a parsed JSON document; p overrides the document's prime."""
    kind = _field(doc, "type", "document")
    if kind not in DOCUMENT_TYPES:
        raise DocumentError(f"document: unknown type '{kind}', expected one of {', '.join(DOCUMENT_TYPES)}")
    prime = p if p is not None else _int(_field(doc, "p", kind), f"{kind}.p")
    if kind == "pi_complex":
        return load_complex_body(doc, prime, "pi_complex")
    if kind == "strat_sheaf":
        return load_strat_sheaf(doc, prime)
    if kind == "simplicial":
        return load_simplicial(doc, prime)
    return load_weights(doc, prime)


def read_source(source: str) -> str:
    """Contents of a path, or the text itself when source is not a file."""
    if not os.path.exists(source):
        return source
    try:
        with open(source) as f:
            return f.read()
    except OSError as e:
        raise DocumentError(f"unable to read {source}: {e}") from e


def loads_document(text: str, p: Optional[int] = None) -> Document:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"invalid JSON: {e}") from e
    return parse_document(doc, p)


def load_document(source: str, p: Optional[int] = None) -> Document:
    return loads_document(read_source(source), p)


def dumps(doc: Dict[str, object]) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


@dataclass
class RunReport:
    command: str
    digest: str
    verdicts: Dict[str, object] = field(default_factory=dict)
    tables: Dict[str, List[Dict[str, object]]] = field(default_factory=dict)
    timing: float = 0.0
    tool: str = TOOL_NAME
    document: Optional[Dict[str, object]] = None

    def as_dict(self) -> Dict[str, object]:
        out = {
            "command": self.command,
            "tool": self.tool,
            "input": self.digest,
            "verdicts": self.verdicts,
            "tables": self.tables,
            "timing": round(self.timing, 6),
        }
        if self.document is not None:
            out["document"] = self.document
        return out


def digest(texts: List[str]) -> str:
    h = hashlib.sha256()
    for text in texts:
        h.update(text.encode())
    return h.hexdigest()[:16]
