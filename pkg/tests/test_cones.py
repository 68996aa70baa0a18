import numpy as np
from numpy.testing import assert_allclose
import pytest

from fullstep.cones import build_cone
from fullstep.cones.composite import Extended, Product, Restricted
from fullstep.cones.orthant import Orthant
from fullstep.cones.selftest import self_test
from fullstep.exceptions import DimensionMismatch, NotInterior
from fullstep.linalg import nullspace
from fullstep.sos import MomentCone, stengle_instance


def test_orthant_oracle():
    x = np.array([1.0, 2.0, 4.0])
    ev = Orthant(3).evaluate(x)
    assert ev.nu == 3
    assert_allclose(ev.gradient, -1.0 / x)
    assert_allclose(ev.hessian, np.diag(1.0 / x**2))
    assert ev.value == pytest.approx(-np.log(8.0))
    assert ev.dual_norm(ev.gradient) == pytest.approx(np.sqrt(3))
    assert ev.local_norm(x) == pytest.approx(np.sqrt(3))


def test_orthant_rejects_boundary_and_bad_shape():
    with pytest.raises(NotInterior):
        Orthant(2).evaluate(np.array([1.0, 0.0]))
    with pytest.raises(DimensionMismatch):
        Orthant(2).evaluate(np.ones(3))


@pytest.mark.parametrize(
    "cone, point",
    [
        (Orthant(3), np.array([1.0, 2.0, 3.0])),
        (Product([Orthant(2), Orthant(1)]), np.array([0.5, 1.5, 2.0])),
        (Extended(Orthant(2)), np.array([1.0, 3.0, 0.5])),
        (Product([Orthant(2), Extended(Orthant(1))]), np.array([1.0, 2.0, 1.0, 0.7])),
    ],
)
def test_self_test_passes(cone, point):
    report = self_test(cone, point, seed=3)
    assert report.passed, report.failures


def test_composite_parameters():
    extended = Extended(Product([Orthant(2), Orthant(3)]))
    assert extended.dim == 6
    assert extended.nu == 6
    assert_allclose(extended.interior_point(), np.ones(6))


def test_restricted_cone():
    basis = nullspace(np.array([[1.0, -1.0, 0.0]]))
    plain = Restricted(Orthant(3), basis)
    anchor = plain.coordinates(np.array([1.0, 1.0, 2.0]))
    cone = Restricted(Orthant(3), basis, anchor=anchor)
    assert cone.dim == 2
    assert cone.nu == 3
    assert_allclose(cone.ambient(anchor), [1.0, 1.0, 2.0], atol=1e-12)
    report = self_test(cone, cone.interior_point(), seed=1)
    assert report.passed, report.failures
    with pytest.raises(NotImplementedError):
        plain.interior_point()


def test_restricted_cone_with_empty_kernel_is_degenerate():
    cone = Restricted(Orthant(2), nullspace(np.eye(2)))
    report = self_test(cone, np.zeros(0))
    assert report.degenerate
    assert not report.passed
    assert any("degenerate" in note for note in report.notes)
    with pytest.raises(NotInterior):
        cone.evaluate(np.zeros(0))


@pytest.mark.parametrize("degree", [8, 12, 20])
def test_moment_cone_self_test(degree):
    cone = MomentCone.from_instance(stengle_instance(degree))
    report = self_test(cone, cone.interior_point(), seed=degree)
    assert report.passed, report.failures


def test_moment_cone_at_random_positive_point():
    cone = MomentCone.from_instance(stengle_instance(12))
    rng = np.random.default_rng(7)
    lam = cone.interior_point() * np.exp(0.3 * rng.standard_normal(cone.dim))
    report = self_test(cone, lam, seed=7)
    assert report.passed, report.failures


def test_moment_cone_parameter():
    cone = MomentCone.from_instance(stengle_instance(20))
    assert cone.spec.sizes == [11, 8]
    assert cone.nu == 19
    assert cone.dim == 21
    assert cone.interior_point().sum() == pytest.approx(1.0)


def test_moment_cone_rejects_non_interior():
    cone = MomentCone.from_instance(stengle_instance(8))
    with pytest.raises(NotInterior):
        cone.evaluate(-cone.interior_point())


@pytest.mark.parametrize("degree", [20, 80])
def test_moment_cone_factor_reproduces_hessian(degree):
    cone = MomentCone.from_instance(stengle_instance(degree))
    ev = cone.evaluate(cone.interior_point())
    scale = np.max(np.abs(ev.hessian))
    assert_allclose(ev.factor.matrix(), ev.hessian, rtol=0, atol=1e-10 * scale)
    assert np.all(np.diag(ev.factor.lower) > 0)
    assert ev.dual_norm(ev.gradient) ** 2 == pytest.approx(cone.nu, rel=1e-6)


def test_build_cone_from_spec():
    cone = build_cone(
        {
            "type": "product",
            "cones": [
                {"type": "orthant", "dim": 2},
                {"type": "extended", "inner": {"type": "orthant", "dim": 1}},
            ],
        }
    )
    assert cone.dim == 4
    assert cone.nu == 4
    moment = build_cone({"type": "moment", "degree": 8, "constraints": [[0.5, 0.0, -0.5]]})
    assert moment.dim == 9
    assert moment.nu == 5 + 4
    with pytest.raises(ValueError):
        build_cone({"type": "cylinder"})
