"""SO(4)/U(2) decomposition, star-Ricci, scalar-curvature relations."""

from __future__ import annotations

import numpy as np
import pytest

from ak4 import algebra, charts, decomp, riemann, sandbox

from conftest import KAHLER_NAMES


class TestSO4:
    def test_flat_all_parts_vanish(self, analyses):
        dr = analyses["flat"][0].dr
        for norm in dr.block_norms().values():
            assert norm == 0.0
        assert dr.s == 0.0

    def test_fubini_study_self_dual_einstein(self, analyses):
        for pa in analyses["fubini-study"]:
            assert np.abs(pa.dr.wminus).max() < 1e-8
            assert np.abs(pa.dr.ric0).max() < 1e-8
            assert pa.dr.recon_residual < 1e-8

    def test_unequal_constant_curvatures(self):
        spec = charts.product_surfaces(
            charts.sphere_factor(1.0),
            charts.hyperbolic_factor(-1.0),
            name="sphere-hyperbolic",
            domain=((-0.5, 0.5),) * 4,
        )
        for p in spec.sample_points(2, 21):
            pa_sp = charts.structure_at(spec, p, order=4)
            cd = riemann.curvature(riemann.connection(pa_sp))
            dr = decomp.decompose(cd, pa_sp)
            assert algebra.frobenius(dr.ric0) > 0.1  # not Einstein
            assert dr.recon_residual < 1e-8
            assert abs(dr.s) < 1e-8  # curvatures +1 and -1 cancel

    def test_reconstruction_all_charts(self, analyses):
        for rows in analyses.values():
            for pa in rows:
                assert pa.dr.recon_residual < 1e-8
                assert pa.dr.u2_residual < 1e-9
                assert pa.dr.orthogonality_residual < 1e-9


class TestU2:
    def test_kahler_charts(self, analyses):
        for name in KAHLER_NAMES:
            for pa in analyses[name]:
                dr = pa.dr
                assert algebra.frobenius(dr.w2) < 1e-8
                assert algebra.frobenius(dr.w3) < 1e-8
                assert abs(dr.kappa - dr.s) < 1e-8

    def test_kappa_identity_everywhere(self, analyses):
        for rows in analyses.values():
            for pa in rows:
                assert pa.dr.kappa_identity_residual < 1e-9

    def test_kodaira_thurston_blocks(self, analyses):
        for pa in analyses["kodaira-thurston"]:
            assert pa.dr.kappa_identity_residual < 1e-9
            assert pa.dr.s_star - pa.dr.s > 0.5  # strictly almost Kahler


class TestStarRicci:
    def test_kahler_star_ricci_equals_ricci(self, analyses):
        for name in KAHLER_NAMES:
            for pa in analyses[name]:
                ric = pa.cd.ric_frame
                assert np.abs(pa.dr.ric_star - ric).max() < 1e-8
                assert abs(pa.dr.s_star - pa.dr.s) < 1e-8

    def test_flat_star_ricci_zero(self, analyses):
        assert np.abs(analyses["flat"][0].dr.ric_star).max() == 0.0

    def test_kodaira_thurston_scalar_difference(self, analyses):
        for pa in analyses["kodaira-thurston"]:
            assert pa.dr.s_star_identity_residual is not None
            assert pa.dr.s_star_identity_residual < 1e-8
            assert pa.dr.s_star - pa.dr.s == pytest.approx(0.5 * pa.hfo.nabla_j_sq, abs=1e-9)

    def test_skew_part_consistency(self, analyses):
        for rows in analyses.values():
            for pa in rows:
                assert pa.dr.star_skew_residual < 1e-9


class TestJInvariance:
    def test_einstein_charts(self, analyses):
        for name in ("flat", "fubini-study", "complex-hyperbolic"):
            for pa in analyses[name]:
                ric_anti, mixed = decomp.j_invariance_residuals(pa.cd, pa.sp)
                assert ric_anti < 1e-8
                assert mixed < 1e-8

    def test_product_surfaces_kahler_non_einstein(self, analyses):
        for pa in analyses["product-surfaces"]:
            ric_anti, mixed = decomp.j_invariance_residuals(pa.cd, pa.sp)
            assert ric_anti < 1e-8
            assert mixed < 1e-8
            assert algebra.frobenius(pa.dr.ric0) > 1e-3  # Ric0 itself nonzero

    def test_injected_anti_invariant_ricci(self):
        # Constructed counterexample: a purely anti-invariant Ric0 must load
        # the (phi, Jphi) x anti-self-dual block, and the two residuals are
        # proportional within fixed bounds over random draws.
        rng = np.random.default_rng(7)
        for _ in range(50):
            h = rng.standard_normal((4, 4))
            h = 0.5 * (h + h.T)
            h = algebra.j_anti_part(h)
            h -= np.trace(h) / 4.0 * np.eye(4)
            if algebra.frobenius(h) < 0.1:
                continue
            ac = sandbox.curvature_with_blocks(ric0=h)
            m = algebra.operator_matrix(ac.r)
            ric_anti = float(algebra.frobenius(algebra.j_anti_part(algebra.ricci_contraction(ac.r))))
            mixed = float(algebra.frobenius(m[1:3, 3:]))
            assert ric_anti > 0.1
            assert mixed > 0.1
            ratio = mixed / ric_anti
            assert 0.2 < ratio < 5.0

    def test_equivalence_on_sandbox(self):
        # Ric J-invariant <=> the anti-invariant self-dual plane decouples
        # from the anti-self-dual forms.
        batch = sandbox.random_batch(200, 3)
        m = algebra.operator_matrix(batch)
        ric_anti = algebra.frobenius(algebra.j_anti_part(algebra.ricci_contraction(batch)))
        mixed = algebra.frobenius(m[:, 1:3, 3:])
        # remove the anti part block by block and check the mixed block dies
        fixed = batch - 0.5 * algebra.kn_delta(algebra.j_anti_part(algebra.ricci_contraction(batch)))
        m2 = algebra.operator_matrix(fixed)
        mixed2 = algebra.frobenius(m2[:, 1:3, 3:])
        assert mixed2.max() < 1e-10
        assert (mixed[ric_anti > 0.5] > 1e-3).all()


class TestAlgebraicSandboxRoundTrip:
    def test_thousand_tensors(self):
        batch = sandbox.random_batch(1000, 11)
        m = algebra.operator_matrix(batch)
        parts = algebra.split_operator(m)
        blocks = algebra.u2_blocks(parts["wplus"])
        eye3 = np.eye(3)
        rebuilt = np.zeros_like(m)
        rebuilt[..., :3, :3] = parts["wplus"] + parts["s"][..., None, None] / 12.0 * eye3
        rebuilt[..., 3:, 3:] = parts["wminus"] + parts["s"][..., None, None] / 12.0 * eye3
        rebuilt[..., :3, 3:] = parts["mixed"]
        rebuilt[..., 3:, :3] = np.swapaxes(parts["mixed"], -1, -2)
        tensors = algebra.tensor_from_operator(rebuilt)
        assert np.abs(tensors - batch).max() < 1e-10
        # projector idempotence: decomposing the rebuilt operator changes nothing
        parts2 = algebra.split_operator(algebra.operator_matrix(tensors))
        blocks2 = algebra.u2_blocks(parts2["wplus"])
        assert np.abs(parts2["wplus"] - parts["wplus"]).max() < 1e-10
        assert np.abs(parts2["wminus"] - parts["wminus"]).max() < 1e-10
        assert np.abs(parts2["s"] - parts["s"]).max() < 1e-10
        for key in ("w1", "w2", "w3"):
            assert np.abs(blocks2[key] - blocks[key]).max() < 1e-10


class TestTraces:
    def test_ric0_traceless_and_scalar_consistency(self, analyses):
        for rows in analyses.values():
            for pa in rows:
                assert abs(np.trace(pa.dr.ric0)) < 1e-9
                assert abs(np.trace(pa.cd.ric_frame) - pa.dr.s) < 1e-9
                # operator trace is s/2 under the half-norm convention
                assert abs(2.0 * np.trace(pa.dr.operator) - pa.dr.s) < 1e-9
