import pytest

from tatesmith.equivsimp import example_sheaf
from tatesmith.errors import InvalidComplex, NotDownSet, NotUpSet, UnknownStratum
from tatesmith.homcx import PiChainMap, cohomology, identity_map, scalar_map, single
from tatesmith.linalg import IntMatrix
from tatesmith.pimod import cyclic_permutation, std_module
from tatesmith.stratsheaf import (
    CellSheafComplex,
    StratPoset,
    chain_poset,
    closed_push,
    closed_restrict,
    constant_sheaf,
    costalk,
    end_hom,
    is_termwise_exact,
    open_push_unit,
    recollement_triangle,
    require_valid,
    sections,
    sheaf_ops,
    skyscraper,
    stalk,
    support,
    support_adjunction_check,
    tate_stalk_table,
    validate,
)
from tatesmith.tate import tate_cohomology


@pytest.fixture
def chain3():
    return constant_sheaf(chain_poset(["a", "b", "c"]), 3)


@pytest.fixture
def chain2():
    return example_sheaf("chain2", 3)


def point_sheaf(value, equiv=None, p=3):
    P = StratPoset.create(["o"])
    return CellSheafComplex.from_covers(P, p, {"o": value}, equiv={"o": equiv} if equiv else None)


def regular_point(p=3):
    """A one-stratum sheaf whose stalk is the regular lattice."""
    V = single(std_module("trivial", p, p))
    return point_sheaf(V, PiChainMap(V, V, {0: cyclic_permutation(p)}), p)


class TestStratPoset:
    """Test closure-ordered posets of strata"""

    def test_chain_order(self):
        """Test the first label is the closed point"""
        P = chain_poset(["z", "u"])
        assert P.le("z", "u")
        assert not P.le("u", "z")
        assert P.up_set("z") == {"z", "u"}
        assert P.closure(["u"]) == {"z", "u"}
        assert P.dim == {"z": 0, "u": 1}

    def test_transitive_closure(self, chain3):
        """Test relations are closed under composition"""
        P = chain3.base
        assert P.lt("a", "c")
        assert P.covers() == [("a", "b"), ("b", "c")]

    def test_unknown_stratum(self):
        """Test a relation naming an unknown stratum"""
        with pytest.raises(UnknownStratum):
            StratPoset.create(["a"], [("a", "b")])

    def test_action_must_permute(self):
        """Test an action that is not a permutation"""
        P = StratPoset.create(["a", "b"], action={"a": "b", "b": "b"})
        assert "action is not a permutation of the strata" in P.problems(3)

    def test_fixed_locus_must_be_closed(self):
        """Test a fixed stratum above a free orbit"""
        P = StratPoset.create(
            ["a0", "a1", "a2", "b"],
            [("a0", "b"), ("a1", "b"), ("a2", "b")],
            action={"a0": "a1", "a1": "a2", "a2": "a0"},
        )
        assert "fixed strata do not form a closed set" in P.problems(3)

    def test_orbit_and_chains(self):
        """Test orbits and strict chains"""
        P = StratPoset.create(["x", "y", "z"], action={"x": "y", "y": "z", "z": "x"})
        assert P.orbit("x") == ["x", "y", "z"]
        assert P.fixed_points() == []
        assert P.problems(3) == []
        assert chain_poset(["a", "b", "c"]).chains() == [
            ("a",),
            ("b",),
            ("c",),
            ("a", "b"),
            ("a", "c"),
            ("b", "c"),
            ("a", "b", "c"),
        ]


class TestValidation:
    """Test sheaf validation"""

    def test_constant_sheaf_is_valid(self, chain3):
        """Test the constant sheaf passes every check"""
        assert validate(chain3) == []
        assert require_valid(chain3) is chain3

    def test_broken_functoriality(self, chain3):
        """Test a generization map failing functoriality"""
        Z = chain3.values["a"]
        chain3.gen[("a", "c")] = scalar_map(Z, 2)
        problems = validate(chain3)
        assert any("functoriality" in m for m in problems)
        with pytest.raises(InvalidComplex):
            require_valid(chain3)

    def test_broken_cocycle(self):
        """Test an equivariant structure of the wrong order"""
        V = single(std_module("trivial", 3))
        F = point_sheaf(V, scalar_map(V, -1))
        assert any("cocycle" in m for m in validate(F))

    def test_value_with_own_action(self):
        """Test values must carry the action in equiv"""
        F = point_sheaf(single(std_module("regular", 3)))
        assert any("equiv" in m for m in validate(F))


class TestStalksAndSections:
    """Test stalks, sections and costalks"""

    def test_constant_stalk(self, chain3):
        """Test the stalk of the constant sheaf is Z in degree 0"""
        assert stalk(chain3, "b") == single(std_module("trivial", 3))

    def test_stalk_carries_equiv(self):
        """Test fixed strata see the action through equiv"""
        assert stalk(regular_point(), "o").term(0).action == cyclic_permutation(3)

    def test_sections_with_minimum(self, chain3):
        """Test sections over a poset with a minimum are the minimal value"""
        H = cohomology(sections(chain3))
        assert H[0].free_rank == 1
        assert all(inv.is_zero() for n, inv in H.items() if n != 0)

    def test_sections_of_circle(self):
        """Test sections of the constant sheaf on the triangle boundary"""
        H = cohomology(sections(example_sheaf("triangle", 3)))
        assert H[0].free_rank == 1
        assert H[1].free_rank == 1

    def test_empty_sections(self, chain3):
        """Test sections over the empty set vanish"""
        assert sections(chain3, []).is_zero()

    def test_sections_need_open_set(self, chain3):
        """Test sections over a non-open subset"""
        with pytest.raises(NotUpSet):
            sections(chain3, ["a"])

    def test_costalk_of_open_stratum(self, chain3):
        """Test the costalk at a maximal stratum is the stalk"""
        assert cohomology(costalk(chain3, "c")) == cohomology(stalk(chain3, "c"))

    def test_costalk_below_open_stratum(self, chain2):
        """Test the constant sheaf has zero costalk at the closed point of a chain"""
        assert all(inv.is_zero() for inv in cohomology(costalk(chain2, "z")).values())

    def test_costalk_at_cone_point(self):
        """Test the costalk at a suspension point is Z in degree 2"""
        F = example_sheaf("suspension", 3)
        H = cohomology(costalk(F, "n"))
        assert H[2].free_rank == 1
        assert all(inv.is_zero() for n, inv in H.items() if n != 2)


class TestRecollement:
    """Test the recollement functors"""

    def test_extend_zero_then_restrict(self, chain2):
        """Test j^* j_! is the identity"""
        F = sheaf_ops(chain2, "extend_zero", {"u"})
        assert F.values["z"].is_zero()
        assert F.values["u"] == chain2.values["u"]

    def test_closed_push_then_restrict(self, chain2):
        """Test i^* i_* is the identity"""
        G = closed_restrict(chain2, {"z"})
        back = closed_restrict(closed_push(G, chain2.base), {"z"})
        assert back.values == G.values

    def test_closed_set_required(self, chain2):
        """Test closed restriction needs a down-set"""
        with pytest.raises(NotDownSet):
            closed_restrict(chain2, {"u"})

    def test_open_push_stalk(self, chain2):
        """Test j_* of the open cell has the link sections at the closed point"""
        F = sheaf_ops(chain2, "open_push", {"u"})
        H = cohomology(F.values["z"])
        assert H[0].free_rank == 1

    def test_open_push_unit(self, chain2):
        """Test the unit F -> j_* j^* F restricts generization to the open cell"""
        unit = open_push_unit(chain2, {"u"})
        assert unit.src is chain2
        for x in ["z", "u"]:
            assert unit.components[x].component(0) == IntMatrix.identity(1)
            assert unit.components[x].tgt == unit.tgt.values[x]

    def test_triangle_is_termwise_exact(self):
        """Test j_! j^* F -> F -> i_* i^* F is short exact stalkwise"""
        F = example_sheaf("triangle", 3)
        edges = {"a+b", "b+c", "a+c"}
        first, second = recollement_triangle(F, edges)
        assert is_termwise_exact(first, second)

    def test_unknown_operation(self, chain2):
        """Test an unknown operation name"""
        with pytest.raises(InvalidComplex):
            sheaf_ops(chain2, "push_forward", {"u"})


class TestTateSupport:
    """Test stalkwise Tate cohomology and support"""

    def test_constant_table(self, chain2):
        """Test constant Z has (1, 0) everywhere"""
        assert tate_stalk_table(chain2) == {"z": (1, 0), "u": (1, 0)}
        raw, closed = support(chain2)
        assert raw == {"z", "u"}
        assert closed == {"z", "u"}

    def test_perfect_has_empty_support(self):
        """Test a stalkwise perfect sheaf has empty support"""
        raw, closed = support(regular_point())
        assert raw == set()
        assert closed == set()

    def test_skyscraper_support(self, chain2):
        """Test a skyscraper is supported at its point"""
        F = skyscraper(chain2.base, 3, "z")
        assert support(F)[0] == {"z"}

    def test_support_adjunction(self, chain2):
        """Test F -> i_* i^* F has perfect cone onto the support"""
        assert support_adjunction_check(chain2)
        assert support_adjunction_check(skyscraper(chain2.base, 3, "z"))


class TestEndHom:
    """Test derived homs between sheaves"""

    def test_point(self):
        """Test Hom(Z, Z) on a point is Z"""
        F = point_sheaf(single(std_module("trivial", 3)))
        E = end_hom(F, F)
        assert E.rank(0) == 1
        assert tate_cohomology(E).dims == (1, 0)

    def test_into_perfect(self):
        """Test homs into a stalkwise perfect sheaf are perfect"""
        F = point_sheaf(single(std_module("trivial", 3)))
        assert tate_cohomology(end_hom(F, regular_point())).dims == (0, 0)

    def test_identity_equiv(self, chain2):
        """Test from_covers fills in identity equivariance"""
        assert chain2.equiv["z"] == identity_map(chain2.values["z"])
        assert chain2.gen[("z", "u")].component(0) == IntMatrix.identity(1)
