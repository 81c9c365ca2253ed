import numpy as np
import pytest

from conftest import random_physical
from gaussact.channels import (
    GaussianChannel,
    apply,
    choi_state,
    compose,
    is_entanglement_binding,
    is_entanglement_breaking_ta,
    is_nondistillable_state,
    is_ppt_channel,
    make_identity,
    make_lossy,
    make_ssy_ppt,
    make_thermal_attenuator,
    tensor,
    validate,
)
from gaussact.errors import DomainError, ShapeMismatch
from gaussact.symplectic import direct_sum, is_physical, two_mode_squeezed

NAMED = [
    make_identity(1),
    make_identity(2),
    make_lossy(0.0),
    make_lossy(0.3),
    make_lossy(0.51),
    make_lossy(1.0),
    make_thermal_attenuator(0.6, 0.5),
    make_thermal_attenuator(0.51, 0.01),
    make_thermal_attenuator(0.2, 3.0),
    make_ssy_ppt(),
]


def same(a, b):
    return np.array_equal(a.X, b.X) and np.array_equal(a.Y, b.Y)


class TestApply:
    def test_identity(self):
        np.testing.assert_array_equal(apply(make_identity(1), 3 * np.eye(2)), 3 * np.eye(2))

    def test_lossy(self, rng):
        g = random_physical(1, rng)
        np.testing.assert_allclose(apply(make_lossy(0.37), g), 0.37 * g + 0.63 * np.eye(2), atol=1e-14)

    def test_thermal_attenuator_on_vacuum(self):
        np.testing.assert_allclose(apply(make_thermal_attenuator(0.6, 0.5), np.eye(2)), 1.4 * np.eye(2), atol=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            apply(make_lossy(0.5), np.eye(4))

    @pytest.mark.parametrize("ch", NAMED, ids=repr)
    def test_preserves_physicality(self, ch, rng):
        for _ in range(100):
            assert is_physical(apply(ch, random_physical(ch.in_modes, rng)))


class TestValidate:
    @pytest.mark.parametrize("ch", NAMED, ids=repr)
    def test_named_valid(self, ch):
        assert validate(ch)

    def test_amplifier_without_noise(self):
        v = validate(GaussianChannel(2 * np.eye(2), np.zeros((2, 2))))
        assert not v
        assert v.min_eigenvalue < -1

    def test_asymmetric_noise(self):
        assert not validate(GaussianChannel(np.eye(2), np.array([[1.0, 0.5], [0.0, 1.0]])))


class TestTensorCompose:
    def test_identity_tensor(self):
        assert same(tensor(make_identity(1), make_identity(1)), make_identity(2))

    def test_combined_mode_count(self):
        ch = tensor(make_ssy_ppt(), make_lossy(0.51))
        assert (ch.in_modes, ch.out_modes) == (3, 3)
        assert [p.kind for p in ch.parts] == [make_ssy_ppt().kind, make_lossy(0.5).kind]

    def test_block_identity(self, rng):
        a, b = make_ssy_ppt(), make_thermal_attenuator(0.7, 0.2)
        ga, gb = random_physical(2, rng), random_physical(1, rng)
        np.testing.assert_allclose(apply(tensor(a, b), direct_sum(ga, gb)), direct_sum(apply(a, ga), apply(b, gb)))

    def test_tensor_associative(self):
        a, b, c = make_lossy(0.2), make_ssy_ppt(), make_thermal_attenuator(0.9, 1.0)
        assert same(tensor(tensor(a, b), c), tensor(a, tensor(b, c)))

    def test_compose_lossy_semigroup(self):
        np.testing.assert_allclose(compose(make_lossy(0.6), make_lossy(0.5)).X, make_lossy(0.3).X, atol=1e-15)
        np.testing.assert_allclose(compose(make_lossy(0.6), make_lossy(0.5)).Y, make_lossy(0.3).Y, atol=1e-15)

    def test_compose_identity(self):
        ch = make_ssy_ppt()
        assert same(compose(make_identity(2), ch), ch)

    def test_compose_pointwise(self, rng):
        a, b = make_ssy_ppt(), tensor(make_lossy(0.4), make_thermal_attenuator(0.8, 0.3))
        c = compose(a, b)
        assert validate(c)
        for _ in range(20):
            g = random_physical(2, rng)
            np.testing.assert_allclose(apply(c, g), apply(a, apply(b, g)), rtol=1e-12, atol=1e-12)

    def test_compose_associative(self):
        a, b, c = make_lossy(0.25), make_lossy(0.5), make_thermal_attenuator(0.8, 0.5)
        assert same(compose(compose(a, b), c), compose(a, compose(b, c)))

    def test_compose_mismatch(self):
        with pytest.raises(ShapeMismatch):
            compose(make_ssy_ppt(), make_lossy(0.5))


class TestConstructors:
    def test_lossy_extremes(self):
        assert same(make_lossy(1.0), make_identity(1))
        np.testing.assert_array_equal(make_lossy(0.0).X, 0)
        np.testing.assert_array_equal(make_lossy(0.0).Y, np.eye(2))

    def test_half_attenuation(self):
        np.testing.assert_allclose(make_lossy(0.5).X, np.sqrt(0.5) * np.eye(2))

    @pytest.mark.parametrize("t", [-0.1, 1.2])
    def test_lossy_domain(self, t):
        with pytest.raises(DomainError):
            make_lossy(t)

    def test_thermal_domain(self):
        with pytest.raises(DomainError):
            make_thermal_attenuator(0.5, -1.0)

    @pytest.mark.parametrize("t", [0.0, 0.3, 0.51, 1.0])
    def test_zero_temperature_is_lossy(self, t):
        assert same(make_thermal_attenuator(t, 0.0), make_lossy(t))

    def test_thermal_noise(self):
        np.testing.assert_allclose(make_thermal_attenuator(0.6, 0.5).Y, 0.8 * np.eye(2), atol=1e-15)

    def test_ssy_entries(self):
        ch = make_ssy_ppt()
        np.testing.assert_array_equal(ch.X[0], [np.sqrt(2), 0, 1, 0])
        np.testing.assert_array_equal(np.diag(ch.Y), [2, 2, 2, 2])
        np.testing.assert_array_equal(ch.Y, ch.Y.T)

    def test_immutable(self):
        ch = make_lossy(0.5)
        with pytest.raises(ValueError):
            ch.X[0, 0] = 3.0


class TestPPT:
    def test_ssy_is_ppt_and_cp(self):
        ch = make_ssy_ppt()
        assert is_ppt_channel(ch) and validate(ch)

    def test_identity_not_ppt(self):
        assert not is_ppt_channel(make_identity(1))

    def test_lossy_above_half_not_ppt(self):
        assert not is_ppt_channel(make_lossy(0.51))

    def test_non_square(self):
        with pytest.raises(ShapeMismatch):
            is_ppt_channel(GaussianChannel(np.zeros((2, 4)), np.eye(2)))


class TestNonDistillable:
    def test_product_vacuum(self):
        assert is_nondistillable_state(np.eye(4), 1)

    def test_tmsv_distillable(self):
        assert not is_nondistillable_state(two_mode_squeezed(1.0), 1)

    @pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
    def test_ssy_choi_state(self, r):
        g = choi_state(make_ssy_ppt(), r)
        assert g.shape == (8, 8)
        assert is_physical(g)
        assert is_nondistillable_state(g, 2)

    def test_identity_choi_distillable(self):
        assert not is_nondistillable_state(choi_state(make_identity(2), 1.0), 2)

    def test_entanglement_binding(self):
        assert is_entanglement_binding(make_ssy_ppt())
        assert not is_entanglement_binding(make_lossy(0.51))

    def test_bad_split(self):
        with pytest.raises(ShapeMismatch):
            is_nondistillable_state(np.eye(4), 2)


class TestEntanglementBreaking:
    def test_fig4_parameters(self):
        assert not is_entanglement_breaking_ta(0.51, 0.01)

    def test_breaking(self):
        assert is_entanglement_breaking_ta(0.3, 1.0)

    def test_boundary_counts_as_breaking(self):
        assert is_entanglement_breaking_ta(0.5, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            is_entanglement_breaking_ta(1.5, 0.0)
