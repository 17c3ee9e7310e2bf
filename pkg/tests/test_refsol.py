"""Reference fields: values, damping law, Helmholtz residuals, traces."""

import numpy as np
import pytest

from helmop import geometry, refsol
from helmop.basis import Wavenumber
from helmop.errors import DomainRangeError

from oracles import fd_helmholtz_residual


class TestPlaneWave:
    def test_unit_on_y_axis(self):
        f = refsol.PlaneWave(Wavenumber(184.79, 9.2395))
        for y in (-0.3, 0.0, 1.7):
            assert refsol.eval_reference(f, (0.0, y)) == 1.0 + 0.0j

    def test_damped_value_oracle(self):
        k = Wavenumber(184.79, 9.2395)
        f = refsol.PlaneWave(k)
        got = refsol.eval_reference(f, (1.0, 0.0))
        expected = np.exp(1j * 184.79) * np.exp(-9.2395)
        assert abs(got - expected) < 1e-15

    def test_damping_law_exact(self):
        k = Wavenumber(50.0, 5.0)
        f = refsol.PlaneWave(k)
        a = abs(refsol.eval_reference(f, (0.37 + 0.11, 0.5)))
        b = abs(refsol.eval_reference(f, (0.37, 0.5)))
        assert abs(a / b - np.exp(-5.0 * 0.11)) < 1e-13

    def test_solves_helmholtz(self):
        k = Wavenumber(30.0, 3.0)
        f = refsol.PlaneWave(k)

        def u(x, y):
            return refsol.eval_reference(f, (x, y))

        resid = fd_helmholtz_residual(u, 0.21, -0.34, k.value)
        assert resid <= 1e-4 * abs(k.value) ** 2 * abs(u(0.21, -0.34))


class TestDipole:
    def test_identical_poles_cancel(self):
        k = Wavenumber(12.0, 0.6)
        f = refsol.Dipole(k, y1=(2.0, 0.0), y2=(2.0, 0.0))
        assert refsol.eval_reference(f, (0.1, 0.2)) == 0.0

    def test_singularity_guard(self):
        f = refsol.Dipole(Wavenumber(5.0), y1=(1.0, 0.0), y2=(0.0, 1.0))
        with pytest.raises(DomainRangeError):
            refsol.eval_reference(f, (1.0, 0.0))

    def test_solves_helmholtz(self):
        k = Wavenumber(20.0, 1.0)
        f = refsol.Dipole(k, y1=(1.5, 0.3), y2=(-1.2, -0.9))

        def u(x, y):
            return refsol.eval_reference(f, (x, y))

        resid = fd_helmholtz_residual(u, 0.2, 0.1, k.value)
        assert resid <= 1e-4 * abs(k.value) ** 2 * abs(u(0.2, 0.1))

    def test_default_placement_outside(self):
        curve = geometry.make_curve("kite")
        dip = refsol.default_dipole(curve, Wavenumber(10.0))
        assert not geometry.is_inside(curve, dip.y1)
        assert not geometry.is_inside(curve, dip.y2)


class TestBoundaryOnlyFields:
    def test_constant_trace(self):
        curve = geometry.make_curve("c_shape")
        colloc = geometry.sample_collocation(curve, 37)
        f = refsol.boundary_trace(refsol.ConstantBoundary(), colloc)
        assert np.array_equal(f, np.ones(37, dtype=complex))

    def test_plane_wave_trace_on_disk(self):
        k = Wavenumber(3.0)
        curve = geometry.make_curve("disk", radius=1.0)
        colloc = geometry.sample_collocation(curve, 4)
        f = refsol.boundary_trace(refsol.PlaneWave(k), colloc)
        x1 = np.array([1.0, 0.0, -1.0, 0.0])
        assert np.allclose(f, np.exp(1j * 3.0 * x1), rtol=1e-15)

    def test_pulse_maxima_near_centers(self):
        curve = geometry.make_curve("c_shape")
        colloc = geometry.sample_collocation(curve, 512)
        pulse = refsol.PulseBoundary(centers=((0.2, 1.0), (-1.2, 0.0)))
        f = np.abs(refsol.boundary_trace(pulse, colloc))
        top = colloc.points[np.argsort(f)[-8:]]
        d1 = np.hypot(top[:, 0] - 0.2, top[:, 1] - 1.0)
        d2 = np.hypot(top[:, 0] + 1.2, top[:, 1])
        assert (np.minimum(d1, d2) < 0.3).all()

    def test_pulse_width_fixed(self):
        pulse = refsol.PulseBoundary(centers=((0.0, 0.0),))
        v = refsol.eval_reference(pulse, (0.5, 0.0))
        assert abs(v - np.exp(-20.0 * 0.25)) < 1e-15
