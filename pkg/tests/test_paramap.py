import numpy as np
import pytest

from ringlab import paramap as pm
from ringlab.errors import ConfigError, InversionError


def lattice_2p(ell=100):
    return pm.default_lattice(kappa=0.3, lam_kind="constant", lam_value=0.2,
                              ell=ell)


def lattice_3p(ell=100):
    return pm.default_lattice(kappa=0.3, lam_kind="gap_over_mass", ell=ell)


class TestPhotonSphere:
    def test_schwarzschild_limit(self):
        assert abs(pm.photon_sphere_frequency(1.0, 0.0)
                   - 1.0 / (3.0 * np.sqrt(3.0))) < 1e-15

    def test_with_cosmological_constant(self):
        want = np.sqrt(0.82) / (3.0 * np.sqrt(3.0))
        assert abs(pm.photon_sphere_frequency(1.0, 0.02) - want) < 1e-15
        assert abs(want - 0.174271) < 1e-6

    def test_degeneration_to_zero(self):
        vals = [pm.photon_sphere_frequency(1.0, lam)
                for lam in (0.05, 0.1, 0.11, 0.111)]
        assert vals[-1] < 0.01 * vals[0] + 0.02
        with pytest.raises(ConfigError):
            pm.photon_sphere_frequency(1.0, 1.0 / 9.0)


class TestPseudopole:
    def test_zero_rotation_degeneracy(self):
        # v = kappa*a vanishes at a = 0: the labeled pair coalesces and the
        # splitting observable V is exactly zero
        model = lattice_2p()
        p = pm.ParameterPoint(m=1.0, a=0.0, lam=0.02)
        wp = pm.pseudopole(model, 0, +1, p)
        wm = pm.pseudopole(model, 0, -1, p)
        assert wp == wm
        assert pm.observables(wp, wm, model.ell, 0)["V"] == 0.0

    def test_layer_spacing(self):
        model = lattice_2p()
        p = pm.ParameterPoint(m=1.0, a=0.1, lam=0.02)
        w0 = pm.pseudopole(model, 0, +1, p)
        w1 = pm.pseudopole(model, 1, +1, p)
        assert abs((w0.imag - w1.imag) - 0.2) < 1e-14
        assert w0.real == w1.real

    def test_explicit_value(self):
        model = pm.default_lattice(kappa=0.3, lam_kind="constant",
                                   lam_value=0.2, ell=10)
        p = pm.ParameterPoint(m=1.0, a=0.1, lam=0.02)
        got = pm.pseudopole(model, 0, +1, p)
        want = 10 * (pm.photon_sphere_frequency(1.0, 0.02) + 0.03) - 0.1j
        assert abs(got - want) < 1e-13
        assert abs(got - (2.04271 - 0.1j)) < 1e-5


class TestObservables:
    def test_explicit(self):
        obs = pm.observables(2.0 - 0.15j, -1.8 - 0.15j, 10, 0)
        assert abs(obs["U"] - 0.01) < 1e-15
        assert abs(obs["V"] - 0.19) < 1e-15
        assert abs(obs["W"] - 0.3) < 1e-15

    def test_equal_frequencies_zero_split(self):
        obs = pm.observables(2.0 - 0.1j, 2.0 - 0.1j, 10, 0)
        assert obs["V"] == 0.0

    def test_lattice_exactness(self, rng):
        model = lattice_3p()
        for _ in range(50):
            p = pm.ParameterPoint(m=rng.uniform(0.8, 1.2),
                                  a=rng.uniform(-0.2, 0.2),
                                  lam=rng.uniform(0.0, 0.05))
            wp = pm.pseudopole(model, model.n, +1, p)
            wm = pm.pseudopole(model, model.n, -1, p)
            obs = pm.observables(wp, wm, model.ell, model.n)
            assert abs(obs["U"] - model.u_fn(p)) < 1e-12
            assert abs(obs["V"] - model.v_fn(p)) < 1e-12
            assert abs(obs["W"] - model.lam_fn(p)) < 1e-12


class TestEstimatedData:
    def test_exact_frequencies(self):
        a = pm.observables(2.0 - 0.1j, -1.9 - 0.1j, 10, 0)
        b = pm.estimated_data(2.0 - 0.1j, -1.9 - 0.1j, 10, 0)
        assert a == b

    def test_error_bounds(self):
        wp, wm = 2.0 - 0.15j, -1.8 - 0.15j
        dwp, dwm = 0.02j, 0.01 + 0j
        est = pm.estimated_data(wp + dwp, wm + dwm, 10, 0)
        tru = pm.observables(wp, wm, 10, 0)
        assert abs(est["U"] - tru["U"]) <= 0.03 / 20 + 1e-15
        g_err = np.hypot(est["U"] - tru["U"], est["V"] - tru["V"])
        assert g_err <= np.sqrt(2) / 20 * 0.03 + 1e-15
        assert abs(pm.data_map_error_bound(dwp, dwm, 10)
                   - np.sqrt(2) / 20 * 0.03) < 1e-15
        # damping channel: |W_hat - W| = |Im dw+|/(n+1/2)
        assert abs(abs(est["W"] - tru["W"]) - 0.04) < 1e-15


class TestInvertData:
    def test_fixed_point(self):
        model = lattice_2p()
        p = pm.ParameterPoint(m=1.0, a=0.08, lam=0.02)
        data = {"U": model.u_fn(p), "V": model.v_fn(p)}
        out = pm.invert_data(model, data, p)
        assert out["iterations"] <= 1
        assert abs(out["point"].m - p.m) < 1e-12

    def test_offset_guess_converges(self, rng):
        model = lattice_2p()
        for _ in range(20):
            p = pm.ParameterPoint(m=rng.uniform(0.9, 1.1),
                                  a=rng.uniform(0.02, 0.12), lam=0.02)
            data = {"U": model.u_fn(p), "V": model.v_fn(p)}
            guess = pm.ParameterPoint(m=p.m * 1.01, a=p.a * 1.01, lam=0.02)
            out = pm.invert_data(model, data, guess)
            err = np.hypot(out["point"].m - p.m, out["point"].a - p.a)
            assert err < 1e-10

    def test_three_parameter_round_trip(self):
        model = lattice_3p()
        p = pm.ParameterPoint(m=1.0, a=0.08, lam=0.02)
        data = {"U": model.u_fn(p), "V": model.v_fn(p), "W": model.lam_fn(p)}
        guess = pm.ParameterPoint(m=1.02, a=0.081, lam=0.021)
        out = pm.invert_data(model, data, guess)
        assert abs(out["point"].m - 1.0) < 1e-10
        assert abs(out["point"].lam - 0.02) < 1e-10

    def test_boundary_degeneracy_raises(self):
        # a_true = 0 with noisy V pushing a below the box floor mirrors the
        # |a| >= a1 restriction of the three-parameter regime
        model = lattice_2p()
        p = pm.ParameterPoint(m=1.0, a=0.0, lam=0.02)
        data = {"U": model.u_fn(p), "V": -1e-3}  # perturbed split, a < 0
        guess = pm.ParameterPoint(m=1.0, a=0.01, lam=0.02)
        with pytest.raises(InversionError):
            pm.invert_data(model, data, guess, box=[(0.9, 1.1), (0.0, 0.2)])

    def test_degenerate_damping_map_raises(self):
        # default lam = photon-sphere frequency duplicates U: singular 3p map
        model = pm.default_lattice(kappa=0.3, lam_kind="photon_sphere")
        p = pm.ParameterPoint(m=1.0, a=0.08, lam=0.02)
        data = {"U": model.u_fn(p), "V": model.v_fn(p), "W": model.lam_fn(p) + 1e-4}
        with pytest.raises(InversionError):
            pm.invert_data(model, data,
                           pm.ParameterPoint(m=1.01, a=0.081, lam=0.021))


class TestInverseConstants:
    def test_affine_map_exact(self):
        mat = np.array([[2.0, 0.3], [0.1, 1.5]])
        model = pm.LatticeModel(
            u_fn=lambda q: mat[0, 0] * q.m + mat[0, 1] * q.a,
            v_fn=lambda q: mat[1, 0] * q.m + mat[1, 1] * q.a,
            lam_fn=lambda q: 1.0)
        out = pm.inverse_constants(model, [(0.9, 1.1), (0.0, 0.1)], grid_n=3)
        assert abs(out["C_star"] - np.linalg.norm(np.linalg.inv(mat), 2)) < 1e-6
        assert abs(out["c_star"] - abs(np.linalg.det(mat))) < 1e-6

    def test_default_lattice_finite(self):
        out = pm.inverse_constants(lattice_2p(), [(0.9, 1.1), (0.02, 0.12)])
        assert 0 < out["c_star"] < np.inf
        assert 0 < out["C_star"] < np.inf

    def test_shrinking_box_monotone(self):
        model = lattice_2p()
        big = pm.inverse_constants(model, [(0.85, 1.15), (0.02, 0.14)], grid_n=7)
        small = pm.inverse_constants(model, [(0.95, 1.05), (0.05, 0.11)], grid_n=7)
        assert small["C_star"] <= big["C_star"] * (1 + 1e-9)


class TestBiasBounds:
    def test_zero_eps(self):
        assert pm.bias_bound_2p(0.0, 0.0, 1.0, 1.0, 1.0, 100, 2.0)["bound"] == 0.0
        assert pm.bias_bound_3p(0.0, 0.0, 1.0, 1.0, 1.0, 100, 0, 2.0)["bound"] == 0.0

    def test_explicit_values(self):
        b2 = pm.bias_bound_2p(0.01, 0.01, 0.9, 0.9, 1.0, 100, 2.0)
        want2 = 5 * np.sqrt(2) * 2.0 / 100 * (0.02 / 0.9)
        assert abs(b2["bound"] - want2) < 1e-15
        assert abs(want2 - 0.0031427) < 1e-7
        b3 = pm.bias_bound_3p(0.01, 0.01, 0.9, 0.9, 1.0, 100, 0, 2.0)
        want3 = want2 + (10 * 2.0 / 0.5) * 0.01 / 0.9
        assert abs(b3["bound"] - want3) < 1e-15
        assert abs(want3 - 0.447587) < 1e-6

    def test_ell_scaling(self):
        b1 = pm.bias_bound_2p(0.01, 0.01, 0.9, 0.9, 1.0, 100, 2.0)["bound"]
        b2 = pm.bias_bound_2p(0.01, 0.01, 0.9, 0.9, 1.0, 200, 2.0)["bound"]
        assert abs(b2 - b1 / 2) < 1e-15

    def test_3p_large_overtone_limit(self):
        b2 = pm.bias_bound_2p(0.01, 0.01, 0.9, 0.9, 1.0, 100, 2.0)["bound"]
        b3s = [pm.bias_bound_3p(0.01, 0.01, 0.9, 0.9, 1.0, 100, n, 2.0)["bound"]
               for n in (10, 10**3, 10**6)]
        assert b3s[0] > b3s[1] > b3s[2] > b2  # damping term shrinks to zero
        assert abs(b3s[-1] - b2) < 1e-6

    def test_split_adds_up(self):
        out = pm.bias_bound_split((0.01, 0.02), (0.003, 0.001), 0.9, 0.8,
                                  1.0, 100, 2.0)
        direct = pm.bias_bound_2p(0.013, 0.021, 0.9, 0.8, 1.0, 100, 2.0)
        assert abs(out["bound"] - direct["bound"]) < 1e-15

    def test_flags(self):
        assert not pm.bias_bound_2p(0.2, 0.01, 0.9, 0.9, 1.0, 100, 2.0)["eps_small"]


class TestCertifiedBias:
    def test_roundtrip_bias_within_bound(self, rng):
        # perturb frequencies by known delta-omegas; the inverted point must
        # stay within C* times the data-map perturbation
        model = lattice_2p()
        box = [(0.9, 1.1), (0.02, 0.14)]
        consts = pm.inverse_constants(model, box, grid_n=5)
        for _ in range(30):
            p = pm.ParameterPoint(m=rng.uniform(0.95, 1.05),
                                  a=rng.uniform(0.04, 0.12), lam=0.02)
            wp = pm.pseudopole(model, 0, +1, p)
            wm = pm.pseudopole(model, 0, -1, p)
            dwp = 1e-4 * np.exp(2j * np.pi * rng.random())
            dwm = 1e-4 * np.exp(2j * np.pi * rng.random())
            est = pm.estimated_data(wp + dwp, wm + dwm, model.ell, model.n)
            guess = pm.ParameterPoint(m=p.m, a=p.a, lam=0.02)
            out = pm.invert_data(model, {"U": est["U"], "V": est["V"]}, guess)
            err = np.hypot(out["point"].m - p.m, out["point"].a - p.a)
            bound = consts["C_star"] * pm.data_map_error_bound(dwp, dwm, model.ell)
            assert err <= bound * (1 + 1e-9)
