"""Tests for the compatibility and positivity domains."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ncp_maps.core.matlin import hs_inner, identity, min_eigenvalue, partial_trace, pauli, tensor
from ncp_maps.systems.domains import (
    DomainSpec,
    RotatedBloch,
    boundary_time,
    compatibility_boundary_point,
    compatibility_mask,
    compatibility_sections,
    compatibility_witness,
    ellipse_residual,
    evolve_rotated,
    from_rotated,
    grid_axis,
    in_compatibility,
    in_positivity,
    in_product_region,
    intersection_equals_compatibility,
    membership_grid,
    north_pole_excluded,
    positivity_boundary,
    positivity_surface,
    product_state_witness,
    to_rotated,
)
from ncp_maps.systems.twoqubit import BlochVector, CorrelationParams, evolve_bloch


@pytest.fixture
def spec() -> DomainSpec:
    return DomainSpec(c=0.4, alpha=0.7)


def _sigma_plus(alpha: float) -> np.ndarray:
    return math.sin(alpha) * pauli(1) - math.cos(alpha) * pauli(2)


def _sigma_minus(alpha: float) -> np.ndarray:
    return -math.cos(alpha) * pauli(1) - math.sin(alpha) * pauli(2)


def _sample_compatible(c: float, count: int, seed: int = 0) -> np.ndarray:
    """Uniform points of the cube that lie in the compatibility domain, shape (count, 3)."""
    rng = np.random.default_rng(seed)
    points = rng.uniform(-1.0, 1.0, size=(600_000, 3))
    inside = points[compatibility_mask(points[:, 0], points[:, 1], points[:, 2], c)]
    assert len(inside) >= count
    return inside[:count]


class TestRotatedFrame:
    """Tests for the (s_+, s_-, s_3) coordinates."""

    def test_round_trip(self, spec: DomainSpec) -> None:
        v = BlochVector(0.2, -0.5, 0.3)
        back = from_rotated(to_rotated(v, spec), spec)
        assert_allclose(back.as_array(), v.as_array(), atol=1e-15)

    def test_drive_lies_along_minus_axis(self, spec: DomainSpec) -> None:
        """Test that (a1, a2) has components (0, -c)."""
        drive = to_rotated(BlochVector(spec.a1, spec.a2, 0.0), spec)
        assert drive.s_plus == pytest.approx(0.0, abs=1e-15)
        assert drive.s_minus == pytest.approx(-spec.c)

    def test_zero_correlation_uses_identity_axes(self) -> None:
        v = to_rotated(BlochVector(0.1, 0.2, 0.3), DomainSpec(c=0.0, alpha=1.0))
        assert (v.s_plus, v.s_minus, v.s3) == (0.1, 0.2, 0.3)

    def test_evolution_in_rotated_frame(self, spec: DomainSpec) -> None:
        """Test (s_+, s_-, s_3) -> (s_+ cos, s_- cos - c sin, s_3)."""
        v = RotatedBloch(0.3, -0.2, 0.5)
        wt = 1.1
        image = evolve_rotated(v, spec, wt)
        expected = [0.3 * math.cos(wt), -0.2 * math.cos(wt) - spec.c * math.sin(wt), 0.5]
        assert_allclose(image.as_array(), expected, atol=1e-15)

    def test_from_params(self) -> None:
        spec = DomainSpec.from_params(CorrelationParams(0.0, -0.5, 1.0))
        assert spec.c == pytest.approx(0.5)
        assert spec.alpha == pytest.approx(-0.5 * math.pi)

    @pytest.mark.parametrize("c", [-0.1, 1.0, 1.5])
    def test_rejects_c(self, c: float) -> None:
        with pytest.raises(ValueError, match=r"c must be in \[0, 1\)"):
            DomainSpec(c=c)


class TestCompatibility:
    """Tests for the compatibility domain and its witnesses."""

    def test_origin_is_compatible(self) -> None:
        assert in_compatibility(RotatedBloch(0.0, 0.0, 0.0), 0.9)

    def test_minus_axis_limit(self) -> None:
        """Test that on s_+ = 0 the domain is s_-^2 + s_3^2 <= 1 - c^2."""
        c = 0.5
        edge = math.sqrt(1.0 - c * c)
        assert in_compatibility(RotatedBloch(0.0, 0.99 * edge, 0.0), c)
        assert not in_compatibility(RotatedBloch(0.0, 1.01 * edge, 0.0), c)

    def test_plus_axis_reaches_sphere(self) -> None:
        assert in_compatibility(RotatedBloch(1.0, 0.0, 0.0), 0.5)

    def test_mask_is_vectorized(self) -> None:
        mask = compatibility_mask([0.0, 0.0], [0.0, 0.95], [0.0, 0.0], 0.5)
        assert mask.tolist() == [True, False]

    def test_in_compatibility_rejects_c(self) -> None:
        with pytest.raises(ValueError, match="c must be in"):
            in_compatibility(RotatedBloch(0.0, 0.0, 0.0), 1.0)

    @pytest.mark.parametrize("alpha", [0.0, 0.7, 2.5])
    def test_witness_state(self, alpha: float) -> None:
        """Test that the witness is a state with the right marginal and correlations."""
        c = 0.4
        v = RotatedBloch(0.3, 0.2, 0.1)
        pi = compatibility_witness(v, c, alpha)
        assert np.trace(pi).real == pytest.approx(1.0)
        assert min_eigenvalue(pi) >= -1e-12
        rho = partial_trace(pi, "second", (2, 2))
        assert hs_inner(_sigma_plus(alpha), rho).real == pytest.approx(v.s_plus)
        assert hs_inner(_sigma_minus(alpha), rho).real == pytest.approx(v.s_minus)
        assert hs_inner(pauli(3), rho).real == pytest.approx(v.s3)
        plus_xi = tensor(_sigma_plus(alpha), pauli(1))
        minus_xi = tensor(_sigma_minus(alpha), pauli(1))
        assert hs_inner(plus_xi, pi).real == pytest.approx(c)
        assert hs_inner(minus_xi, pi).real == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("c", [0.3, 1.0 / math.sqrt(2.0), 0.9])
    def test_witness_states_over_domain(self, c: float) -> None:
        """Test that every sampled compatible point yields a unit-trace PSD witness."""
        points = _sample_compatible(c, 10_000, seed=int(100 * c))
        states = np.array([compatibility_witness(RotatedBloch(*p), c, 0.3) for p in points])
        assert_allclose(np.trace(states, axis1=1, axis2=2), 1.0, atol=1e-12)
        assert np.linalg.eigvalsh(states).min() >= -1e-10

    def test_rejects_negative_right_side(self) -> None:
        """Test a point whose squared inequality holds while the right side is negative."""
        c = 0.5
        sp, sm, s3 = 1.0, 1.0, 1.0
        q = sp * sp + sm * sm
        rhs = 2.0 - 2.0 * s3 * s3 - q - c * c
        assert rhs < 0.0
        assert (q + c * c) ** 2 - 4.0 * sp * sp * c * c <= rhs * rhs
        assert not in_compatibility(RotatedBloch(sp, sm, s3), c)

    @pytest.mark.parametrize("c", [0.3, 0.6, 0.9])
    def test_s3_bounded(self, c: float) -> None:
        """Test s_3^2 <= 1 - c^2 on compatible points."""
        points = _sample_compatible(c, 5_000)
        assert np.max(points[:, 2] ** 2) <= 1.0 - c * c + 1e-10

    @pytest.mark.parametrize("c", [0.3, 0.6, 0.9])
    def test_convex(self, c: float) -> None:
        """Test that midpoints of compatible pairs are compatible."""
        points = _sample_compatible(c, 2_000, seed=7)
        mid = 0.5 * (points[:1_000] + points[1_000:])
        assert compatibility_mask(mid[:, 0], mid[:, 1], mid[:, 2], c).all()

    def test_witness_at_pole(self) -> None:
        pi = compatibility_witness(RotatedBloch(0.0, 0.0, 1.0), 0.0)
        assert_allclose(pi, tensor(np.diag([1.0, 0.0]), 0.5 * identity(2)), atol=1e-15)

    def test_witness_rejects_outside(self) -> None:
        with pytest.raises(ValueError, match="not in the compatibility domain"):
            compatibility_witness(RotatedBloch(0.0, 1.0, 0.0), 0.5)

    def test_product_witness(self) -> None:
        c = 0.4
        v = RotatedBloch(0.5, 0.0, 0.3)
        assert in_product_region(v, c)
        assert in_compatibility(v, c)
        pi = product_state_witness(v, c)
        assert min_eigenvalue(pi) >= -1e-12
        assert hs_inner(tensor(_sigma_plus(0.0), pauli(1)), pi).real == pytest.approx(c)

    def test_product_witness_rejects_small_plus(self) -> None:
        with pytest.raises(ValueError, match="no compatible product state"):
            product_state_witness(RotatedBloch(0.2, 0.0, 0.0), 0.4)


class TestPositivity:
    """Tests for the positivity domain at fixed phase."""

    def test_north_pole_excluded(self) -> None:
        assert north_pole_excluded(CorrelationParams(0.3, 0.0, 1.0))
        assert not north_pole_excluded(CorrelationParams(0.0, 0.0, 1.0))
        assert not north_pole_excluded(CorrelationParams(0.3, 0.0, 0.0))

    def test_center_is_positive(self) -> None:
        assert in_positivity(BlochVector(0.0, 0.0, 0.0), CorrelationParams(0.5, 0.5, 2.0))

    def test_outside_ball_is_not_positive(self) -> None:
        assert not in_positivity(BlochVector(1.0, 1.0, 0.0), CorrelationParams(0.0, 0.0, 0.0))

    @pytest.mark.parametrize(("theta", "phi"), [(0.3, 0.0), (1.2, 2.0), (2.8, 5.0)])
    def test_boundary_maps_to_sphere(self, theta: float, phi: float) -> None:
        p = CorrelationParams(0.3, -0.4, 0.6)
        v = positivity_boundary(p, theta, phi)
        assert evolve_bloch(v, p).norm == pytest.approx(1.0)

    def test_boundary_degenerates_at_quarter_period(self) -> None:
        with pytest.raises(ValueError, match="degenerates"):
            positivity_boundary(CorrelationParams(0.3, 0.0, 0.5 * math.pi), 0.5, 0.5)

    def test_surface_points_map_to_sphere(self) -> None:
        p = CorrelationParams(0.3, -0.4, 0.6)
        df = positivity_surface(p, n_theta=5, n_phi=8)
        assert len(df) == 40
        for row in df.itertuples():
            assert evolve_bloch(BlochVector(row.s1, row.s2, row.s3), p).norm == pytest.approx(1.0)

    def test_surface_rows_are_boundary_points(self) -> None:
        p = CorrelationParams(-0.2, 0.5, 2.4)
        df = positivity_surface(p, n_theta=4, n_phi=6)
        for row in df.itertuples():
            v = positivity_boundary(p, row.theta, row.phi)
            assert_allclose([row.s1, row.s2, row.s3], v.as_array(), atol=1e-15)

    def test_surface_slab_at_quarter_period(self) -> None:
        p = CorrelationParams(0.6, 0.0, 0.5 * math.pi)
        df = positivity_surface(p, n_theta=5, n_phi=4)
        assert_allclose(np.abs(df["s3"]), 0.8)
        assert df["in_unit_ball"].all()


class TestBoundaries:
    """Tests for boundary contours and touching phases."""

    @pytest.mark.parametrize("beta", [0.0, 0.9, 3.0])
    def test_boundary_point_on_ellipse(self, beta: float) -> None:
        v = compatibility_boundary_point(0.5, 0.3, beta)
        assert ellipse_residual(v, 0.5) == pytest.approx(0.0, abs=1e-14)

    def test_boundary_point_rejects_height(self) -> None:
        with pytest.raises(ValueError, match="exceeds the bound"):
            compatibility_boundary_point(0.8, 0.9, 0.0)

    def test_boundary_time(self) -> None:
        c, s3 = 0.5, 0.6
        wt = boundary_time(c, s3, 0.0)
        assert math.sin(wt) == pytest.approx(c / math.sqrt(1.0 - s3 * s3))

    def test_boundary_time_out_of_reach(self) -> None:
        with pytest.raises(ValueError, match="No phase"):
            boundary_time(0.9, 0.9, 0.0)


class TestSections:
    """Tests for the tabulated section curves and grids."""

    def test_grid_axis(self) -> None:
        assert_allclose(grid_axis(0.5), [-1.0, -0.5, 0.0, 0.5, 1.0])

    def test_grid_axis_rejects_step(self) -> None:
        with pytest.raises(ValueError, match="grid step"):
            grid_axis(0.0)

    def test_minus3_circle(self) -> None:
        df = compatibility_sections(0.6, "minus3", n_points=33)
        curve = df[df["section"] == "minus3"]
        assert_allclose(curve["u"] ** 2 + curve["v"] ** 2, 1.0 - 0.36, atol=1e-14)
        assert (df["section"] == "unit_circle").sum() == 33

    def test_plusminus_ellipse(self) -> None:
        df = compatibility_sections(0.6, "plusminus", n_points=33)
        curve = df[df["section"] == "plusminus"]
        assert_allclose(curve["u"] ** 2 + curve["v"] ** 2 / 0.64, 1.0, atol=1e-14)

    def test_product_outline_labels(self) -> None:
        df = compatibility_sections(0.5, "product", n_points=17)
        assert set(df["section"]) == {"product_plus", "product_minus", "unit_circle"}

    def test_unknown_section(self) -> None:
        with pytest.raises(ValueError, match="Unknown section"):
            compatibility_sections(0.5, "diagonal")  # type: ignore[arg-type]

    def test_membership_grid(self) -> None:
        df = membership_grid(0.5, 0.25)
        assert list(df.columns) == ["s_plus", "s_minus", "s3", "in_domain"]
        radius = df["s_plus"] ** 2 + df["s_minus"] ** 2 + df["s3"] ** 2
        assert (radius <= 1.0 + 1e-12).all()
        origin = df[(df["s_plus"] == 0) & (df["s_minus"] == 0) & (df["s3"] == 0)]
        assert bool(origin["in_domain"].iloc[0])


class TestIntersectionScan:
    """Tests for the grid comparison of compatibility and positivity."""

    @pytest.mark.parametrize("c", [0.0, 0.5, 0.8])
    def test_coarse_scan_passes(self, c: float) -> None:
        report = intersection_equals_compatibility(c, grid_step=0.1, t_samples=90)
        assert report.passed
        assert report.interior_violations == 0
        assert 0 < report.compatible <= report.in_ball
        assert report.as_dict()["passed"] is True

    def test_rejects_few_phases(self) -> None:
        with pytest.raises(ValueError, match="at least 8"):
            intersection_equals_compatibility(0.5, grid_step=0.2, t_samples=4)
