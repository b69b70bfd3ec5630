import numpy as np
import pytest
from conftest import fit_decay_order

from ringlab import merotoy as mt
from ringlab.errors import ConfigError, ContourError, ResolutionError, StructureError


class TestForcingTransform:
    def test_zero_payload(self):
        f = mt.ForcingSpec(k=2, payload=np.zeros(2))
        assert np.allclose(mt.forcing_transform(f, 1.0 - 0.5j), 0.0)

    def test_mean_value_positive(self):
        f = mt.ForcingSpec(k=3, payload=np.array([1.0]))
        val = mt.forcing_transform(f, 0.0)
        assert val[0].real > 0 and abs(val[0].imag) < 1e-14

    def test_closed_form_matches_quadrature(self, rng):
        f = mt.ForcingSpec(k=4, payload=np.array([1.0, -0.3 + 0.2j]))
        fast = mt.forcing_transform_callable(f)
        for _ in range(20):
            w = complex(rng.uniform(-50, 50), rng.uniform(-2, 2))
            a = mt.forcing_transform(f, w)
            b = fast(w)
            assert np.linalg.norm(a - b) < 1e-8 * max(1e-6, np.linalg.norm(b))

    def test_batched_matches_scalar(self, rng):
        f = mt.ForcingSpec(k=5, payload=np.array([0.7, 0.1j]))
        fast = mt.forcing_transform_callable(f)
        ws = rng.uniform(-30, 30, 16) - 0.5j
        batch = fast.eval_many(ws)
        for i, w in enumerate(ws):
            assert np.linalg.norm(batch[i] - fast(w)) < 1e-12

    def test_schwartz_decay_bounded(self):
        # |F(sigma - i nu)| (1+|sigma|)^N bounded for N <= k on [1, 100]:
        # the fitted asymptotic decay order is at least k, so each product
        # (1+sigma)^N |F| peaks and then falls off
        k = 4
        f = mt.ForcingSpec(k=k, payload=np.array([1.0]))
        fast = mt.forcing_transform_callable(f)
        sigma = np.geomspace(10.0, 1000.0, 600)
        vals = np.abs(fast.eval_many(sigma - 0.5j)[:, 0])
        fitted = fit_decay_order(sigma, vals)
        assert fitted >= k - 0.2
        for n_exp in range(1, k + 1):
            prod = vals * (1.0 + sigma) ** n_exp
            assert prod[-1] < prod.max()  # past its peak: bounded on the ray


class TestResidueTimeTerm:
    def test_simple_pole(self):
        pole = mt.Pole(omega=1 - 1j, order=1, laurent=(np.eye(2),))
        v = np.array([1.0, 2.0])
        out = mt.residue_time_term(pole, lambda w: v, 1.0)
        want = 1j * np.exp(-1j * (1 - 1j)) * v
        assert np.linalg.norm(out - want) < 1e-12

    def test_zero_forcing(self):
        pole = mt.Pole(omega=1 - 1j, order=2,
                       laurent=(np.eye(1), 0.5 * np.eye(1)))
        out = mt.residue_time_term(pole, lambda w: np.zeros(1), 2.0)
        assert np.linalg.norm(out) == 0.0

    def test_order_two_linear_in_t(self):
        # order-2 pole with constant forcing: i e^{-i w0 t}(A1 + A2 (-i t)) v
        a1, a2 = 1.5 * np.eye(1), 0.7 * np.eye(1)
        pole = mt.Pole(omega=0.4 - 0.8j, order=2, laurent=(a1, a2))
        v = np.array([2.0])
        outs = {}
        for t in (1.0, 2.0):
            out = mt.residue_time_term(pole, lambda w: v, t)
            want = 1j * np.exp(-1j * pole.omega * t) * (a1 + a2 * (-1j * t)) @ v
            assert np.linalg.norm(out - want) < 1e-12
            outs[t] = out / (1j * np.exp(-1j * pole.omega * t))
        # the (alpha + beta t) structure: difference is linear in t
        beta = outs[2.0] - outs[1.0]
        alpha = outs[1.0] - beta
        assert np.linalg.norm(alpha + 2 * beta - outs[2.0]) < 1e-12

    def test_order_two_with_derivative(self):
        pole = mt.Pole(omega=0.5 - 1j, order=2, laurent=(np.eye(1), 2 * np.eye(1)))
        fn = lambda w: np.array([np.exp(1j * w)])
        out = mt.residue_time_term(pole, fn, 1.0)
        w0 = pole.omega
        want = 1j * np.exp(-1j * w0) * (
            np.exp(1j * w0) + 2 * (-1j * np.exp(1j * w0) + 1j * np.exp(1j * w0)))
        assert abs(out[0] - want) < 1e-12


class TestLineIntegral:
    def test_zero_forcing(self):
        R = mt.RationalResolvent(
            poles=(mt.Pole(omega=1 - 1j, order=1, laurent=(np.eye(1),)),), dim=1)
        val, _ = mt.line_integral(R, lambda w: np.zeros(1), None, 0.5, 1.0)
        assert np.linalg.norm(val) == 0.0

    def test_envelope_bound_and_pole_rate(self):
        # contour above the pole: |I_nu(t)| <= C e^{-nu t}, and for a
        # rational family the actual rate is the topmost pole below the line
        R = mt.RationalResolvent(
            poles=(mt.Pole(omega=1 - 2j, order=1, laurent=(np.eye(1),)),), dim=1)
        f = mt.ForcingSpec(k=6, payload=np.array([1.0]))
        fhat = mt.forcing_transform_callable(f)
        nu = 0.5
        ts = np.array([2.0, 4.0, 6.0, 8.0])
        vals = []
        for t in ts:
            v, _ = mt.line_integral(R, fhat, None, nu, float(t), sigma_max=100.0)
            vals.append(np.linalg.norm(v))
        weighted = np.exp(nu * ts) * np.asarray(vals)
        assert np.all(np.diff(weighted) < 0)  # e^{nu t} envelope bounded
        slope = np.polyfit(ts, np.log(vals), 1)[0]
        assert abs(slope + 2.0) < 0.05  # pole at Im = -2 sets the rate

    def test_pole_on_line_rejected(self):
        R = mt.RationalResolvent(
            poles=(mt.Pole(omega=1 - 1j, order=1, laurent=(np.eye(1),)),), dim=1)
        with pytest.raises(ContourError):
            mt.line_integral(R, lambda w: np.ones(1), None, 1.0, 1.0)


class TestBandSubtract:
    def _fhat(self, dim, rng):
        f = mt.ForcingSpec(k=6, payload=rng.standard_normal(dim)
                           + 1j * rng.standard_normal(dim))
        return mt.forcing_transform_callable(f)

    def test_empty_strip(self, rng):
        R = mt.RationalResolvent(
            poles=(mt.Pole(omega=1 - 3j, order=1, laurent=(np.eye(1),)),), dim=1)
        out = mt.band_subtract(R, self._fhat(1, rng), None, 0.5, 2.0, 1.0)
        assert np.linalg.norm(out["difference"]) < 1e-8
        assert np.linalg.norm(out["residue_sum"]) == 0.0

    def test_single_simple_pole(self, rng):
        w0 = 1 - 1j
        pi1 = np.array([[0.3, 0.1], [0.0, 0.5]], dtype=complex)
        R = mt.RationalResolvent(
            poles=(mt.Pole(omega=w0, order=1, laurent=(pi1,)),), dim=2)
        fhat = self._fhat(2, rng)
        out = mt.band_subtract(R, fhat, None, 0.5, 2.0, 1.0)
        want = -1j * np.exp(-1j * w0) * pi1 @ fhat(w0)
        assert np.linalg.norm(out["difference"] - want) < 1e-7
        assert out["mismatch"] < 1e-7

    def test_five_poles_mixed_orders(self, rng):
        R = mt.random_rational_resolvent(rng, dim=2, n_poles=5, max_order=2)
        out = mt.band_subtract(R, self._fhat(2, rng), None, 0.3, 2.3, 2.0)
        assert out["mismatch"] < 1e-6

    def test_windowed_band(self, rng):
        from ringlab import analytic_window as aw
        R = mt.random_rational_resolvent(rng, dim=2, n_poles=4, max_order=2)
        nodes = aw.PseudopoleSet((1.0 - 0.5j, 1.0 - 1.5j))
        g = aw.modified_window(nodes, target=1, m0=1)
        out = mt.band_subtract(R, self._fhat(2, rng), g, 0.3, 2.3, 1.0)
        assert out["mismatch"] < 1e-6

    def test_window_killing_only_pole(self, rng):
        # g vanishing at the only strip pole: band content ~ 0
        from ringlab import analytic_window as aw
        w0 = 1.0 - 1.0j
        R = mt.RationalResolvent(
            poles=(mt.Pole(omega=w0, order=1, laurent=(np.eye(1),)),), dim=1)
        nodes = aw.PseudopoleSet((w0, 2.0 - 0.2j))
        g = aw.lagrange_weight(nodes, 1)  # zero at w0
        out = mt.band_subtract(R, self._fhat(1, rng), g, 0.5, 1.5, 1.0)
        assert np.linalg.norm(out["difference"]) < 1e-7


class TestRankOneResidue:
    def test_diagonal_case(self):
        p = mt.MatrixPencil(p0=np.diag([0.0, 1.0]), p1=np.eye(2), center=2.0 - 1j)
        out = mt.rank_one_residue(p, 2.0 - 1j)
        want = np.diag([1.0, 0.0])
        assert np.linalg.norm(out["projector"] - want) < 1e-12

    def test_random_pencils_vs_contour(self, rng):
        for _ in range(20):
            d = 4
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            w0 = complex(rng.standard_normal(), rng.standard_normal())
            p = mt.MatrixPencil(p0=a @ np.diag([0, 1, 1, 1.0]) @ b,
                                p1=rng.standard_normal((d, d))
                                + 1j * rng.standard_normal((d, d)),
                                center=w0)
            out = mt.rank_one_residue(p, w0)
            oracle = mt.cauchy_residue(lambda w: np.linalg.inv(p(w)), w0,
                                       radius=1e-3)
            assert np.linalg.norm(out["projector"] - oracle) < 1e-8

    def test_denominator_scaling(self):
        p1 = np.eye(2)
        base = mt.MatrixPencil(p0=np.diag([0.0, 1.0]), p1=p1)
        scaled = mt.MatrixPencil(p0=np.diag([0.0, 1.0]), p1=3.0 * p1)
        a = mt.rank_one_residue(base, 0.0)
        b = mt.rank_one_residue(scaled, 0.0)
        assert np.linalg.norm(b["projector"] - a["projector"] / 3.0) < 1e-12

    def test_full_rank_rejected(self):
        p = mt.MatrixPencil(p0=np.eye(2), p1=np.eye(2))
        with pytest.raises(StructureError):
            mt.rank_one_residue(p, 0.0)

    def test_two_dim_kernel_rejected(self):
        p = mt.MatrixPencil(p0=np.diag([0.0, 0.0, 1.0]), p1=np.eye(3))
        with pytest.raises(StructureError):
            mt.rank_one_residue(p, 0.0)


class TestAmplitudePairing:
    def test_blind_detector(self):
        swap = np.array([[0.0, 1.0], [1.0, 0.0]])
        out = mt.amplitude_pairing(np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                                   np.array([1.0, 0.0]), swap,
                                   np.array([1.0, 0.0]))
        assert out == 0.0

    def test_dual_orthogonal_data(self):
        out = mt.amplitude_pairing(np.array([0.0, 1.0]), np.array([1.0, 0.0]),
                                   np.array([1.0, 0.0]), np.eye(2),
                                   np.array([1.0, 0.0]))
        assert out == 0.0

    def test_diagonal_example(self):
        p = mt.MatrixPencil(p0=np.diag([0.0, 1.0]), p1=np.eye(2))
        ro = mt.rank_one_residue(p, 0.0)
        a = mt.amplitude_pairing(np.array([1.0, 0.0]), ro["u0"], ro["v0"],
                                 p.p1, np.array([1.0, 0.0]))
        # pairing * detector reproduce the projector's (1,1) entry
        assert abs(a - ro["projector"][0, 0]) < 1e-12

    def test_matches_residue_contribution(self, rng):
        # amplitude from dual states equals detector applied to Pi F
        d = 3
        a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        b = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        p = mt.MatrixPencil(p0=a @ np.diag([0, 1, 1.0]) @ b,
                            p1=rng.standard_normal((d, d)))
        ro = mt.rank_one_residue(p, 0.0)
        f = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        det = rng.standard_normal(d)
        amp = mt.amplitude_pairing(f, ro["u0"], ro["v0"], p.p1, det)
        want = np.dot(det, ro["projector"] @ f)
        assert abs(amp - want) < 1e-10


class TestPseudospectrum:
    def test_scalar_model_exact_disk(self):
        m = mt.PseudospectrumModel(poles=(0.5 - 1j,), e_plus=2.0, e_minus=2.0)
        re = np.linspace(-0.5, 1.5, 301)
        im = np.linspace(-2.0, 0.0, 301)
        eps = 0.02
        scan = mt.pseudospectrum_scan(m, re, im, eps)
        w = re[None, :] + 1j * im[:, None]
        exact = np.abs(w - (0.5 - 1j)) < 4.0 * eps
        assert np.array_equal(scan["mask"], exact)
        assert scan["inclusion_holds"]

    def test_shrinks_to_poles(self):
        m = mt.PseudospectrumModel(poles=(0.0 - 1j, 1.0 - 1j))
        re = np.linspace(-1, 2, 200)
        im = np.linspace(-2.5, 0.5, 200)
        flagged = [mt.pseudospectrum_scan(m, re, im, e)["n_flagged"]
                   for e in (1e-1, 1e-2, 1e-3)]
        assert flagged[0] > flagged[1] >= flagged[2]

    def test_two_pole_disjoint_disks(self):
        m = mt.PseudospectrumModel(poles=(0.0 - 1j, 1.0 - 1j))
        eps = 0.01
        # zoomed grids around each pole resolve the disks
        for pole in m.poles:
            re = np.linspace(pole.real - 0.1, pole.real + 0.1, 400)
            im = np.linspace(pole.imag - 0.1, pole.imag + 0.1, 400)
            scan = mt.pseudospectrum_scan(m, re, im, eps, require_resolved=True)
            assert scan["n_flagged"] > 0
            assert scan["inclusion_holds"]
            assert scan["radius"] <= 2.5 * eps * 2.0  # C*eps with C = 2 E+E-/c_q

    def test_resolution_error(self):
        m = mt.PseudospectrumModel(poles=(0.0 - 1j,))
        re = np.linspace(-2, 2, 10)
        im = np.linspace(-3, 1, 10)
        with pytest.raises(ResolutionError):
            mt.pseudospectrum_scan(m, re, im, 1e-4, require_resolved=True)


class TestHolomorphicDerivatives:
    def test_exponential(self):
        ders = mt.holomorphic_derivatives(lambda z: np.exp(2.0 * z), 0.3 + 0.1j, 3)
        base = np.exp(2.0 * (0.3 + 0.1j))
        for r, d in enumerate(ders):
            assert abs(d - 2.0**r * base) < 1e-10 * abs(base)

    def test_polynomial_exact_path(self):
        from ringlab import analytic_window as aw
        nodes = aw.PseudopoleSet((1.0, 2.0))
        g = aw.lagrange_weight(nodes, 1)  # omega - 1
        ders = mt.holomorphic_derivatives(g, 5.0, 2)
        assert abs(ders[0] - 4.0) < 1e-14
        assert abs(ders[1] - 1.0) < 1e-14
        assert abs(ders[2]) < 1e-14
