import json
from unittest.mock import patch, MagicMock

import pytest

from tatesmith.cli import create_parser, main, open_config, run
from tatesmith.config import TateSmithConfig
from tatesmith.errors import DocumentError, InvalidWindow, TateCohomologyError, UnsupportedInput

MOD_P = json.dumps(
    {
        "type": "pi_complex",
        "p": 3,
        "terms": {"-1": {"kind": "trivial"}, "0": {"kind": "trivial"}},
        "diffs": {"-1": [[3]]},
    }
)

TRIVIAL = json.dumps({"type": "pi_complex", "p": 3, "terms": {"0": {"kind": "trivial"}}})


@pytest.fixture
def mock_config():
    """Create a mock config object"""
    config = MagicMock()
    config.debug = False
    config.json = False
    config.no_color = False
    config.prime = 3
    config.seed = 0
    config.samples = 4
    config.stabilization_checks = 1
    config.window = [-1, 2]
    config.max_enumeration = 100000
    config.validate_prime = TateSmithConfig.validate_prime
    return config


@pytest.fixture
def parse(mock_config):
    def parse_args(argv):
        args = create_parser(mock_config).parse_args(argv)
        args.max_enumeration = mock_config.max_enumeration
        return args

    return parse_args


class TestRun:
    """Test loading inputs and dispatching commands"""

    def test_smith_example(self, parse):
        """Test smith on the suspension"""
        report = run(parse(["smith", "--example", "suspension"]))
        assert report.verdicts == {"verdict": "smith-iso"}
        assert [r["stratum"] for r in report.tables["fixed strata"]] == ["n", "s"]

    def test_simp_smith_example(self, parse):
        """Test the simplicial localization check on the suspension"""
        report = run(parse(["simp-smith", "--example", "suspension"]))
        assert report.verdicts["verdict"] == "pass"
        assert report.verdicts["tate"] == [2, 0]

    def test_tate_of_sheaf(self, parse):
        """Test tate on a sheaf reports stalks and sections"""
        report = run(parse(["tate", "--example", "point"]))
        assert report.verdicts == {"t0": 1, "t1": 0}
        assert report.tables["stalks"] == [{"stratum": "o", "t0": 1, "t1": 0}]

    def test_tate_of_complex(self, parse, tmp_path):
        """Test tate on a complex read from a file"""
        path = tmp_path / "cone.json"
        path.write_text(MOD_P)
        report = run(parse(["tate", str(path)]))
        assert report.verdicts == {"t0": 1, "t1": 1}
        assert report.digest != ""

    def test_classify(self, parse):
        """Test classify with the trivial-action formula"""
        report = run(parse(["classify", MOD_P]))
        assert report.verdicts == {"k0": 1, "k1": 1, "difference": 0, "eps_formula": [1, 1]}

    def test_perfect(self, parse):
        """Test perfect on the trivial lattice"""
        assert run(parse(["perfect", TRIVIAL])).verdicts == {"perfect": False}

    def test_stablehom(self, parse):
        """Test stablehom on two documents"""
        report = run(parse(["stablehom", TRIVIAL, TRIVIAL]))
        assert report.verdicts["hom"] == [1, 0]
        assert report.verdicts["routes_agree"] is True

    def test_stablehom_needs_two(self, parse):
        """Test stablehom with one document"""
        with pytest.raises(DocumentError):
            run(parse(["stablehom", TRIVIAL]))

    def test_too_many_inputs(self, parse):
        """Test unary commands refuse a second document"""
        with pytest.raises(DocumentError):
            run(parse(["classify", TRIVIAL, TRIVIAL]))

    def test_no_inputs(self, parse):
        """Test a command without inputs"""
        with pytest.raises(DocumentError):
            run(parse(["tate"]))

    def test_wrong_document_type(self, parse):
        """Test a sheaf command given a complex"""
        with pytest.raises(DocumentError):
            run(parse(["smith", TRIVIAL]))

    def test_chain_is_not_simplicial(self, parse):
        """Test chain2 is only a sheaf example"""
        with pytest.raises(UnsupportedInput):
            run(parse(["simp-smith", "--example", "chain2"]))

    def test_export_poset(self, parse):
        """Test export-poset attaches a strat_sheaf document"""
        report = run(parse(["export-poset", "--example", "triangle"]))
        assert report.verdicts == {"strata": 6, "fixed": 6}
        assert report.as_dict()["document"]["type"] == "strat_sheaf"

    def test_decompose_chain(self, parse):
        """Test decompose on the chain"""
        report = run(parse(["decompose", "--example", "chain2"]))
        assert report.verdicts["local"] is True
        assert report.tables["summands"][0]["stratum"] == "u"

    def test_hyperco(self, parse):
        """Test hyperco-check moves the page into a table"""
        report = run(parse(["hyperco-check", "--example", "suspension"]))
        assert report.verdicts["page_total"] == [2, 0]
        assert "page" not in report.verdicts
        assert report.tables["page"]

    def test_lift(self, parse):
        """Test lift on a point"""
        report = run(parse(["lift", "--example", "point"]))
        assert report.verdicts["identity"] is True
        assert report.tables["objects"] == [{"stratum": "o", "mod p cohomology": {"0": 1}}]

    def test_parity_fp(self, parse):
        """Test parity-check with mod p coefficients"""
        report = run(parse(["parity-check", "--example", "point", "--coeff", "fp"]))
        assert report.verdicts == {"coeff": "fp", "verdict": "even"}

    def test_weights(self, parse):
        """Test demo-gr-weights on inline JSON"""
        doc = json.dumps({"type": "weights", "p": 3, "entries": [[6, 2, 12], [5, 1, 10]]})
        report = run(parse(["demo-gr-weights", doc]))
        assert report.verdicts == {"kept": 1, "dropped": 1}
        assert report.tables["kept"] == [{"weight": 2, "multiplicity": 2, "pairing": 4}]

    def test_window_outside_tate(self, parse):
        """Test --window is refused by commands that do not read it"""
        with pytest.raises(InvalidWindow):
            run(parse(["classify", MOD_P, "--window", "1", "4"]))

    def test_window_for_tate(self, parse):
        """Test tate reads in the given window"""
        report = run(parse(["tate", MOD_P, "--window", "1", "4"]))
        assert report.verdicts == {"t0": 1, "t1": 1}

    def test_decompose_suspension(self, parse):
        """Test decompose splits the suspension at its cone points"""
        report = run(parse(["decompose", "--example", "suspension"]))
        assert report.verdicts["local"] is False
        assert report.verdicts["idempotents"] == 2
        assert [s["stratum"] for s in report.tables["summands"]] == ["n", "s"]

    def test_prime_override(self, parse):
        """Test -p changes the prime of an example"""
        report = run(parse(["simp-smith", "--example", "polygon", "-p", "5"]))
        assert report.verdicts["tate"] == [0, 0]


class TestMain:
    """Test the command line entry point"""

    def run_main(self, argv, mock_config):
        with patch("sys.argv", ["tatesmith"] + argv):
            with patch("tatesmith.cli.TateSmithConfig", return_value=mock_config):
                with pytest.raises(SystemExit) as e:
                    main(argv)
        return e.value.code

    def test_json_output(self, mock_config, capsys):
        """Test --json prints the report envelope"""
        code = self.run_main(["smith", "--example", "suspension", "--json"], mock_config)
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert out["command"] == "smith"
        assert out["verdicts"] == {"verdict": "smith-iso"}
        assert out["input"] and out["tool"].startswith("tatesmith/")

    def test_rich_output(self, mock_config):
        """Test the default output goes to the rich console"""
        with patch("tatesmith.constants.console") as mock_console:
            code = self.run_main(["simp-smith", "--example", "point"], mock_config)
        assert code == 0
        assert mock_console.print.called

    def test_invalid_input_exit_code(self, mock_config):
        """Test input errors exit with 2"""
        with patch("tatesmith.constants.console") as mock_console:
            code = self.run_main(["lift", "--example", "chain2"], mock_config)
        assert code == 2
        assert "Error" in mock_console.print.call_args[0][0]

    def test_cross_check_exit_code(self, mock_config):
        """Test failed cross-checks exit with 3"""
        with patch("tatesmith.constants.console") as mock_console:
            with patch("tatesmith.cli.smith", side_effect=TateCohomologyError("boom")):
                code = self.run_main(["smith", "--example", "suspension"], mock_config)
        assert code == 3
        assert "cross-check failed: boom" in mock_console.print.call_args[0][0]

    def test_invalid_prime(self, mock_config):
        """Test an even prime exits with 2"""
        code = self.run_main(["smith", "--example", "point", "-p", "4"], mock_config)
        assert code == 2

    def test_version(self, mock_config):
        """Test --version prints the version"""
        with patch("tatesmith.constants.console") as mock_console:
            code = self.run_main(["--version"], mock_config)
        assert code == 0
        mock_console.print.assert_called_with("0.1.0")

    def test_no_command_prints_help(self, mock_config, capsys):
        """Test running without a command shows help"""
        code = self.run_main([], mock_config)
        assert code == 0
        assert "COMMAND" in capsys.readouterr().out

    def test_window_misuse_exit_code(self, mock_config):
        """Test --window on a command that ignores it exits with 2"""
        with patch("tatesmith.constants.console") as mock_console:
            code = self.run_main(["perfect", TRIVIAL, "--window", "1", "4"], mock_config)
        assert code == 2
        assert "--window only applies to tate" in mock_console.print.call_args[0][0]


class TestOpenConfig:
    """Test opening the configuration file"""

    def test_uses_current_console(self, tmp_path):
        """Test messages go to the console chosen after --nocolor"""
        path = tmp_path / "config.ini"
        path.write_text("[tatesmith]\n")
        cfg = MagicMock()
        cfg.config_file = str(path)
        with patch("tatesmith.constants.console") as mock_console:
            with patch.dict("os.environ", {"EDITOR": "true"}):
                with patch("tatesmith.cli.subprocess.run") as mock_run:
                    assert open_config(cfg) == 0
        mock_console.print.assert_called_with(f"opening {path}")
        mock_run.assert_called_once_with(["true", str(path)], check=True)
