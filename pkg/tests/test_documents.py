import json

import pytest

from tatesmith.documents import (
    RunReport,
    WeightsDocument,
    digest,
    dump_int,
    dump_pi_complex,
    dump_simplicial,
    dump_strat_sheaf,
    load_document,
    loads_document,
    parse_document,
    read_source,
)
from tatesmith.equivsimp import SimplicialPiComplex, example_sheaf, example_space
from tatesmith.errors import DocumentError
from tatesmith.homcx import PiComplex
from tatesmith.pimod import std_module
from tatesmith.samples import mod_p_complex
from tatesmith.stratsheaf import CellSheafComplex, validate

MOD_P = {
    "type": "pi_complex",
    "p": 3,
    "terms": {"-1": {"kind": "trivial"}, "0": {"kind": "trivial"}},
    "diffs": {"-1": [[3]]},
}

CHAIN = {
    "type": "strat_sheaf",
    "p": 3,
    "poset": {"elements": ["z", "u"], "leq": [["z", "u"]]},
    "values": {
        "z": {"terms": {"0": {"rank": 1}}},
        "u": {"terms": {"0": {"rank": 1}}},
    },
    "gen": {"z<u": {"0": [[1]]}},
}


class TestPiComplexDocuments:
    """Test pi_complex documents"""

    def test_load(self):
        """Test a two-term document gives cone(p)"""
        C = parse_document(MOD_P)
        assert C == mod_p_complex(3)

    def test_action_matrix(self):
        """Test explicit actions are read"""
        doc = {
            "type": "pi_complex",
            "p": 3,
            "terms": {"0": {"rank": 3, "action": [[0, 0, 1], [1, 0, 0], [0, 1, 0]]}},
        }
        C = parse_document(doc)
        assert C.term(0) == std_module("regular", 3)

    def test_decimal_strings(self):
        """Test integers may be given as decimal strings"""
        doc = dict(MOD_P, p="3", diffs={"-1": [["3"]]})
        assert parse_document(doc) == mod_p_complex(3)

    def test_dump_then_load(self):
        """Test dumped complexes load back"""
        C = mod_p_complex(5, 2)
        assert parse_document(dump_pi_complex(C)) == C

    def test_prime_override(self):
        """Test an explicit prime wins over the document"""
        doc = {"type": "pi_complex", "p": 3, "terms": {"0": {"kind": "trivial"}}}
        assert parse_document(doc, 5).p == 5

    @pytest.mark.parametrize(
        "doc, field",
        [
            ({"p": 3}, "type"),
            ({"type": "cube", "p": 3}, "cube"),
            ({"type": "pi_complex", "terms": {}}, "p"),
            ({"type": "pi_complex", "p": 3}, "terms"),
            ({"type": "pi_complex", "p": 3, "terms": {"x": {"kind": "trivial"}}}, "'x'"),
            ({"type": "pi_complex", "p": 3, "terms": {"0": {"kind": "sign"}}}, "terms.0"),
            ({"type": "pi_complex", "p": 3, "terms": {"0": {"rank": True}}}, "rank"),
            ({"type": "pi_complex", "p": 3, "terms": {"0": {"rank": 1}}, "diffs": {"0": [[1]]}}, "diffs.0"),
        ],
    )
    def test_errors_name_the_field(self, doc, field):
        """Test malformed documents raise DocumentError naming the problem"""
        with pytest.raises(DocumentError) as e:
            parse_document(doc)
        assert field in str(e.value)

    def test_not_a_complex(self):
        """Test d^2 != 0 surfaces as a document error"""
        doc = {
            "type": "pi_complex",
            "p": 3,
            "terms": {str(n): {"kind": "trivial"} for n in range(3)},
            "diffs": {"0": [[1]], "1": [[1]]},
        }
        with pytest.raises(DocumentError):
            parse_document(doc)


class TestStratSheafDocuments:
    """Test strat_sheaf documents"""

    def test_load_chain(self):
        """Test the constant sheaf on a chain"""
        F = parse_document(CHAIN)
        assert isinstance(F, CellSheafComplex)
        assert validate(F) == []
        assert F.base.le("z", "u")

    def test_dump_then_load_suspension(self):
        """Test the suspension sheaf survives a dump"""
        F = example_sheaf("suspension", 3)
        G = parse_document(json.loads(json.dumps(dump_strat_sheaf(F))))
        assert G.base.elements == F.base.elements
        assert G.values == F.values
        assert validate(G) == []

    def test_unknown_stratum(self):
        """Test values at an unknown stratum"""
        doc = dict(CHAIN, values={"w": {"terms": {}}})
        with pytest.raises(DocumentError) as e:
            parse_document(doc)
        assert "'w'" in str(e.value)

    def test_bad_relation_key(self):
        """Test generization keys must read a<b"""
        doc = dict(CHAIN, gen={"z-u": {"0": [[1]]}})
        with pytest.raises(DocumentError):
            parse_document(doc)

    def test_relation_in_wrong_direction(self):
        """Test generization must go up the poset"""
        doc = dict(CHAIN, gen={"u<z": {"0": [[1]]}})
        with pytest.raises(DocumentError):
            parse_document(doc)

    def test_bad_action(self):
        """Test a poset action of the wrong order"""
        doc = dict(CHAIN, poset={"elements": ["a", "b"], "action": {"a": "b", "b": "a"}}, values={}, gen={})
        with pytest.raises(DocumentError) as e:
            parse_document(doc)
        assert "strat_sheaf.poset" in str(e.value)


class TestOtherDocuments:
    """Test simplicial and weights documents"""

    def test_simplicial(self):
        """Test a polygon document"""
        doc = {
            "type": "simplicial",
            "p": 3,
            "vertices": ["a", "b", "c"],
            "simplices": [["a", "b"], ["b", "c"], ["a", "c"]],
            "action": {"a": "b", "b": "c", "c": "a"},
        }
        X = parse_document(doc)
        assert isinstance(X, SimplicialPiComplex)
        assert len(X.of_dim(1)) == 3

    def test_simplicial_dump(self):
        """Test only maximal simplices are dumped"""
        X = example_space("suspension", 3)
        out = dump_simplicial(X)
        assert len(out["simplices"]) == 6
        assert parse_document(out).simplices == X.simplices

    def test_weights(self):
        """Test weights entries"""
        W = parse_document({"type": "weights", "p": 3, "entries": [[6, 2, 12]]})
        assert isinstance(W, WeightsDocument)
        assert W.entries == [(6, 2, 12)]

    def test_weights_entry_shape(self):
        """Test entries must be triples"""
        with pytest.raises(DocumentError) as e:
            parse_document({"type": "weights", "p": 3, "entries": [[6, 2]]})
        assert "weights.entries.0" in str(e.value)


class TestSources:
    """Test reading documents from files and text"""

    def test_load_from_file(self, tmp_path):
        """Test a path is read from disk"""
        path = tmp_path / "cone.json"
        path.write_text(json.dumps(MOD_P))
        assert load_document(str(path)) == mod_p_complex(3)

    def test_inline_text(self):
        """Test text that is not a path is parsed directly"""
        text = json.dumps(MOD_P)
        assert read_source(text) == text
        assert isinstance(loads_document(text), PiComplex)

    def test_invalid_json(self):
        """Test invalid JSON raises DocumentError"""
        with pytest.raises(DocumentError):
            loads_document("{not json")


class TestRunReport:
    """Test the report envelope"""

    def test_key_order(self):
        """Test the fixed envelope key order"""
        report = RunReport("tate", digest(["x"]), {"t0": 1})
        assert list(report.as_dict()) == ["command", "tool", "input", "verdicts", "tables", "timing"]
        report.document = {"type": "pi_complex"}
        assert list(report.as_dict())[-1] == "document"

    def test_digest(self):
        """Test digests are short stable hex strings"""
        assert len(digest(["a", "b"])) == 16
        assert digest(["ab"]) == digest(["a", "b"])
        assert digest(["a"]) != digest(["b"])

    def test_big_integers(self):
        """Test integers outside 64 bits are written as strings"""
        assert dump_int(5) == 5
        assert dump_int(2**70) == str(2**70)
