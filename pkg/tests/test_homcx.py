import pytest

from tatesmith.errors import InvalidComplex, InvalidWindow, ShapeMismatch
from tatesmith.homcx import (
    PiChainMap,
    PiComplex,
    build,
    chain_map_to_cocycle,
    cohomology,
    cone,
    cone_inclusion,
    cone_projection,
    direct_sum,
    eps_push_complex,
    forget_action,
    hom_complex,
    identity_map,
    invariants,
    modular_reduce,
    scalar_map,
    shift,
    single,
    std_window,
    tensor_complex,
)
from tatesmith.linalg import IntMatrix
from tatesmith.pimod import std_module
from tatesmith.samples import mod_p_complex


@pytest.fixture
def trivial():
    return single(std_module("trivial", 3))


@pytest.fixture
def regular():
    return std_module("regular", 3)


class TestPiComplex:
    """Test bounded lattice complexes"""

    def test_zero_terms_dropped(self, trivial):
        """Test that zero terms and differentials are normalised away"""
        C = PiComplex(3, {0: std_module("trivial", 3), 1: std_module("trivial", 3, 0)})
        assert C.degrees == range(0, 1)
        assert C == trivial

    def test_d_squared_checked(self):
        """Test that d^2 != 0 is rejected"""
        T = std_module("trivial", 3)
        with pytest.raises(InvalidComplex):
            PiComplex(3, {0: T, 1: T, 2: T}, {0: IntMatrix.identity(1), 1: IntMatrix.identity(1)})

    def test_equivariance_checked(self, regular):
        """Test that a non-equivariant differential is rejected"""
        T = std_module("trivial", 3)
        with pytest.raises(InvalidComplex):
            PiComplex(3, {0: regular, 1: T}, {0: IntMatrix.from_rows([[1, 0, 0]])})

    def test_shape_checked(self):
        """Test that a differential of the wrong shape is rejected"""
        T = std_module("trivial", 3)
        with pytest.raises(ShapeMismatch):
            PiComplex(3, {0: T, 1: T}, {0: IntMatrix.identity(2)})

    def test_bot_top(self):
        """Test the support of a complex"""
        C = mod_p_complex(3, 2)
        assert (C.bot, C.top) == (1, 2)
        assert C.amplitude == 1


class TestWindows:
    """Test the periodic complexes"""

    def test_t_window(self, regular):
        """Test two regular terms joined by 1 - g"""
        C = std_window("t", 3, (0, 1))
        assert C.term(0) == regular
        assert C.diff(0) == regular.one_minus_g()

    def test_i_window(self, regular):
        """Test 1 - g then N"""
        C = std_window("i", 3, (0, 2))
        assert C.diff(0) == regular.one_minus_g()
        assert C.diff(1) == regular.norm()

    def test_single_term(self):
        """Test a window of width zero"""
        for kind in ["i", "t", "frak_p"]:
            C = std_window(kind, 3, (0, 0))
            assert C.rank(0) == 3
            assert not C.diffs

    def test_empty_window(self):
        """Test an empty window raises InvalidWindow"""
        with pytest.raises(InvalidWindow):
            std_window("t", 3, (2, 1))

    def test_group_cohomology_from_i_window(self):
        """Test invariants of the resolution compute H^*(Z/3; Z)"""
        H = cohomology(invariants(std_window("i", 3, (0, 4))))
        assert H[0].free_rank == 1
        assert H[1].is_zero()
        assert H[2].torsion == (3,)
        assert H[3].is_zero()

    def test_i_window_resolves_trivial(self):
        """Test the resolution has cohomology Z in degree 0 only"""
        H = cohomology(std_window("i", 3, (0, 3)))
        assert H[0].free_rank == 1
        assert H[1].is_zero()
        assert H[2].is_zero()


class TestConstructions:
    """Test shift, cone, sums, tensor and hom"""

    def test_cohomology_of_trivial(self, trivial):
        """Test H^0 of the trivial lattice"""
        H = cohomology(trivial)
        assert list(H) == [0]
        assert H[0].free_rank == 1

    def test_cone_of_p(self, trivial):
        """Test cone(p) is Z/p in degree 0"""
        K = cone(scalar_map(trivial, 3))
        H = cohomology(K)
        assert H[-1].is_zero()
        assert H[0].torsion == (3,)

    def test_cone_of_identity_is_acyclic(self, trivial):
        """Test the cone of the identity has no cohomology"""
        K = cone(identity_map(trivial))
        assert all(inv.is_zero() for inv in cohomology(K).values())

    def test_build_dispatches(self, trivial):
        """Test build names the same constructions"""
        assert build("shift", trivial, 1) == shift(trivial, 1)
        assert build("cone", scalar_map(trivial, 3)) == cone(scalar_map(trivial, 3))
        assert build("direct_sum", trivial, trivial) == direct_sum(trivial, trivial)

    def test_build_unknown(self, trivial):
        """Test an unknown construction name"""
        with pytest.raises(ShapeMismatch):
            build("mapping_cylinder", trivial)

    def test_shift(self, trivial):
        """Test shifting moves degrees down"""
        assert shift(trivial, 0) == trivial
        assert shift(trivial, 1).degrees == range(-1, 0)
        assert shift(shift(trivial, 2), -2) == trivial

    def test_direct_sum(self, trivial):
        """Test direct sums add ranks"""
        S = direct_sum(trivial, shift(trivial, -1))
        assert S.rank(0) == 1
        assert S.rank(1) == 1

    def test_cone_maps_compose_to_zero(self, trivial):
        """Test D -> cone(f) -> C[1] composes to zero"""
        f = scalar_map(trivial, 3)
        i, q = cone_inclusion(f), cone_projection(f)
        for n in i.src.degrees:
            assert (q.component(n) @ i.component(n)).is_zero()

    def test_tensor_unit(self):
        """Test tensoring with the trivial lattice in degree 0"""
        C = mod_p_complex(3)
        T = tensor_complex(C, single(std_module("trivial", 3)))
        assert T == C

    def test_hom_of_trivial(self, trivial):
        """Test Hom(Z, Z) is Z"""
        H = hom_complex(trivial, trivial)
        assert H.rank(0) == 1
        assert H.is_trivial_action()

    def test_hom_of_cone(self):
        """Test Hom(cone(p), cone(p)) has rank 4 in degrees -1..1"""
        C = mod_p_complex(3)
        H = hom_complex(C, C)
        assert (H.bot, H.top) == (-1, 1)
        assert sum(H.rank(n) for n in H.degrees) == 4

    def test_identity_is_cocycle(self):
        """Test the identity map gives a degree-0 cocycle"""
        C = mod_p_complex(3)
        H = hom_complex(C, C)
        v = chain_map_to_cocycle(identity_map(C))
        assert not any(H.diff(0).apply(v))

    def test_chain_map_must_commute(self):
        """Test that a non-commuting square is rejected"""
        C = mod_p_complex(3)
        D = single(std_module("trivial", 3))
        with pytest.raises(InvalidComplex):
            PiChainMap(C, D, {0: IntMatrix.identity(1)})


class TestReductions:
    """Test reduction mod p and changes of action"""

    def test_modular_reduce_trivial(self, trivial):
        """Test reducing Z gives F_p in degree 0"""
        assert modular_reduce(trivial).cohomology_dims() == {0: 1}

    def test_modular_reduce_cone(self):
        """Test reducing cone(p) gives F_p in two degrees"""
        assert modular_reduce(mod_p_complex(3)).cohomology_dims() == {-1: 1, 0: 1}

    def test_modular_reduce_t_window(self):
        """Test d^2 still vanishes after reduction"""
        R = modular_reduce(std_window("t", 3, (0, 3)))
        for n in range(0, 2):
            assert (R.diff(n + 1) @ R.diff(n)).mod(3).is_zero()

    def test_forget_action(self, regular):
        """Test forgetting the action keeps the lattice"""
        F = forget_action(single(regular))
        assert F.rank(0) == 3
        assert F.is_trivial_action()
        assert F.action_forgotten

    def test_eps_push_forget_round_trip(self):
        """Test inflating then forgetting returns the lattice complex"""
        C = mod_p_complex(5)
        E = eps_push_complex(C)
        assert E.is_trivial_action()
        assert forget_action(E).diffs == C.diffs
