"""Gray curvature conditions, totally-real sectional curvature, the reversed
almost Hermitian structure, and the canonical-connection Ricci form.

The three Gray identities are evaluated as max-norm residuals over all
frame index tuples. The classification ladder turns them into verdicts:
KAHLER when nabla J vanishes, AK-G1/AK-G2/AK-G3 for almost Kahler
structures satisfying the corresponding identity, AK for merely almost
Kahler, ALMOST-HERMITIAN otherwise.

Totally-real (Lagrangian) planes are sampled deterministically: a random
unit vector X, then a unit Y from the orthogonal complement of
span{X, JX}, enforced by explicit projection rather than rejection, so the
sampling has no bias near J-invariant planes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra, jets, tensorops
from .charts import J_FRAME, StructurePoint
from .decomp import DecompReport
from .jets import Jet
from .riemann import CurvatureData, HermitianFirstOrder

DEFAULT_VERDICT_TOL = 1e-7


@dataclass
class GrayReport:
    g1: float
    g2: float
    g3: float
    lemma5_triple: tuple[float, float, float]  # |Ric^anti|, |W2+|, |W3+|
    lemma6_triple: tuple[float, float, float]  # |Ric^anti|, |W3+|, |W-|
    mu_formula: float  # (2s - kappa)/24
    mu_min: float
    mu_max: float
    wplus_eigenvalues: np.ndarray
    wplus_spectral_gap: float
    verdict: str
    flags: tuple[str, ...]
    prop1_residual: float | None
    prop1_note: str | None
    const_nabla_j_residual: float | None  # |d(s* - s)| under the second condition


@dataclass
class ReversedStructure:
    """Structure induced by flipping J on the orthogonal complement of the
    Kahler nullity; defined only where nabla J is nonzero."""

    valid: bool
    note: str
    jbar: np.ndarray | None = None
    omega_bar_value: np.ndarray | None = None
    d_omega_bar_norm: float | None = None
    xi: np.ndarray | None = None
    da_residual: float | None = None
    dja_residual: float | None = None
    prop2i_residual: float | None = None
    structure_residual: float | None = None  # Jbar orthogonal a.c.s. check
    second_derivative_residual: float | None = None  # unconditional shape identity
    nullity_basis: np.ndarray | None = None  # frame components of {B, JB} spanning D
    nullity_perp_basis: np.ndarray | None = None  # frame components of {A, JA}
    g2_holds: bool = False


def gray_residuals(cd: CurvatureData, sp: StructurePoint | None = None) -> tuple[float, float, float]:
    """Max-norm violations of the three Gray identities in the adapted frame."""
    g1, g2, g3 = algebra.gray_residuals(cd.R_frame)
    return float(g1), float(g2), float(g3)


def lemma5_check(dr: DecompReport, gr: tuple[float, float, float]) -> dict[str, float]:
    """Both sides of the equivalence: second Gray identity <-> (Ric J-invariant,
    W2+ = 0, W3+ = 0)."""
    triple = (dr.ric_anti_norm, float(algebra.frobenius(dr.w2)), float(algebra.frobenius(dr.w3)))
    return {"g2": gr[1], "triple_max": max(triple), "ric_anti": triple[0], "w2": triple[1], "w3": triple[2]}


def star_scalar_jet(cd: CurvatureData, sp: StructurePoint) -> Jet:
    """The star-scalar curvature as a jet field (trace of -R(Omega)(J., .))."""
    omega_up = tensorops.raise_pair(sp.omega, sp.g_inv, 0, 1)
    r_omega = 0.5 * jets.contract(cd.R, omega_up, (2, 3), (0, 1))
    ric_star = -jets.contract(sp.J, r_omega, 0, 0)  # -J^k_i (R Omega)_kj
    return jets.contract(sp.g_inv, ric_star, (0, 1), (0, 1))


def prop1_check(
    sp: StructurePoint,
    cd: CurvatureData,
    dr: DecompReport,
    hfo: HermitianFirstOrder,
    g2_residual: float,
    g2_tol: float = 1e-7,
) -> tuple[float | None, str | None, float | None]:
    """Residual of d(s - s*) - kappa theta = 4 Ric0(theta) under the second
    Gray condition, plus |d(s* - s)| for almost Kahler points (pointwise
    constancy of |nabla J|^2).

    Returns (residual, note, d_s_star_minus_s_norm); residual is None with an
    explanatory note when the hypothesis fails at the point.
    """
    if sp.order < 3:
        raise jets.JetOrderError("the first-derivative scalar identity needs jet order >= 3")
    if g2_residual > g2_tol:
        return None, f"hypothesis not met: g2 residual {g2_residual:.3e}", None
    s_star = star_scalar_jet(cd, sp)
    diff = cd.s - s_star
    d_diff = tensorops.frame_components(jets.partials(diff).value, sp.frame)
    theta_f = tensorops.frame_components(hfo.theta.value, sp.frame)
    lhs = d_diff - dr.kappa * theta_f
    rhs = 4.0 * dr.ric0 @ theta_f
    residual = float(np.abs(lhs - rhs).max())
    const_res = float(np.abs(d_diff).max()) if hfo.is_almost_kahler else None
    return residual, None, const_res


def totally_real_curvature(
    cd: CurvatureData,
    dr: DecompReport,
    sp: StructurePoint,
    n_planes: int = 64,
    seed: int = 42,
    tol: float = 1e-7,
) -> dict:
    """Sectional curvature statistics over seeded Lagrangian planes.

    A plane X ^ Y is Lagrangian when g(JX, Y) = 0; sampling Y orthogonal to
    both X and JX enforces this exactly. When the triple
    (|Ric^anti|, |W3+|, |W-|) vanishes the sampled curvature must be the
    pointwise constant (2s - kappa)/24.
    """
    if n_planes < 16:
        raise ValueError("need at least 16 sample planes")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x7A]))
    r = cd.R_frame
    mus = np.empty(n_planes)
    for k in range(n_planes):
        x = _unit(rng.standard_normal(4))
        jx = J_FRAME @ x
        y = rng.standard_normal(4)
        y -= (y @ x) * x + (y @ jx) * jx
        norm = np.linalg.norm(y)
        while norm < 1e-8:  # essentially impossible with continuous sampling
            y = rng.standard_normal(4)
            y -= (y @ x) * x + (y @ jx) * jx
            norm = np.linalg.norm(y)
        y /= norm
        mus[k] = np.einsum("ijkl,i,j,k,l->", r, x, y, x, y)
    mu_formula = (2.0 * dr.s - dr.kappa) / 24.0
    triple = (dr.ric_anti_norm, float(algebra.frobenius(dr.w3)), float(algebra.frobenius(dr.wminus)))
    out = {
        "mu_formula": mu_formula,
        "mu_min": float(mus.min()),
        "mu_max": float(mus.max()),
        "spread": float(mus.max() - mus.min()),
        "lemma6_triple": triple,
        "mu_deviation": float(np.abs(mus - mu_formula).max()),
    }
    if max(triple) < tol:
        out["constancy_asserted"] = True
    return out


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def wplus_degeneracy(dr: DecompReport) -> tuple[np.ndarray, float]:
    """Eigenvalues of the self-dual Weyl block and the minimal pairwise gap."""
    eig = np.linalg.eigvalsh(dr.wplus)
    gaps = [abs(eig[0] - eig[1]), abs(eig[1] - eig[2]), abs(eig[0] - eig[2])]
    return eig, float(min(gaps))


def reversed_structure(
    sp: StructurePoint,
    hfo: HermitianFirstOrder,
    dr: DecompReport,
    g2_residual: float,
    g2_tol: float = 1e-7,
) -> ReversedStructure:
    """Reversed-orientation almost Hermitian structure from the Kahler nullity.

    Builds Jbar = J on the nullity and -J on its orthogonal complement
    span{a, Ja}, the 2-form Omega_bar = Omega - (2/|a|^2) a ^ Ja, the
    connection 1-form xi of the phi gauge, the two structure-equation
    residuals for da and d(Ja), and the residual of the traceless-Ricci
    normal form Ric0 = (kappa/4)(-g|_D + g|_Dperp). Structure-equation and
    closedness numbers are asserted by callers only where the second Gray
    condition holds; here they are always reported as diagnostics.
    """
    if sp.order < 2:
        raise jets.JetOrderError("the reversed structure needs jet order >= 2")
    a = hfo.a
    ginv = sp.g_inv
    a_sq = tensorops.vector_inner(a, a, ginv)
    a_sq_val = float(a_sq.value)
    if a_sq_val <= 1e-10:
        return ReversedStructure(valid=False, note="nullity undefined: nabla J vanishes at this point")

    g2_holds = g2_residual <= g2_tol
    j_mat = sp.J.value
    g_mat = sp.g.value
    a_vec = sp.g_inv.value @ a.value
    a_unit = a_vec / np.sqrt(a_vec @ g_mat @ a_vec)
    ja_unit = j_mat @ a_unit
    # projector onto span{a, Ja}, then Jbar = J (Id - 2 P)
    proj = np.outer(a_unit, g_mat @ a_unit) + np.outer(ja_unit, g_mat @ ja_unit)
    jbar = j_mat @ (np.eye(4) - 2.0 * proj)
    structure_residual = float(
        max(
            np.abs(jbar @ jbar + np.eye(4)).max(),
            np.abs(jbar.T @ g_mat @ jbar - g_mat).max(),
        )
    )

    ja = -jets.contract(a, sp.J, 0, 0)  # (Ja)_i = -a_k J^k_i
    omega_bar = sp.omega - (2.0 / a_sq) * tensorops.wedge11(a, ja)
    d_omega_bar = tensorops.ext_d_2form(omega_bar)
    d_omega_bar_norm = float(np.abs(tensorops.frame_components(d_omega_bar.value, sp.frame)).max())

    # xi from nabla phi = -a (x) Omega + xi (x) J phi
    d_phi = hfo.conn.covd(sp.basis.phi)
    jphi_up = tensorops.raise_pair(sp.basis.jphi, ginv, 0, 1)
    xi = 0.25 * jets.contract(d_phi, jphi_up, (1, 2), (0, 1))

    s_star = dr.s_star
    factor = (s_star - dr.s) / 8.0
    da = tensorops.ext_d_1form(a)
    dja = tensorops.ext_d_1form(ja)
    da_pred = tensorops.wedge11(ja, xi) + factor * sp.basis.jphi
    dja_pred = -tensorops.wedge11(a, xi) + factor * sp.basis.phi
    frame = sp.frame
    da_residual = float(np.abs(tensorops.frame_components((da - da_pred).value, frame)).max())
    dja_residual = float(np.abs(tensorops.frame_components((dja - dja_pred).value, frame)).max())

    # Unconditional shape of the commuted second derivative on almost Kahler
    # points: antisymmetrized nabla^2 Omega = (da - Ja ^ xi) (x) phi
    # - (d(Ja) + a ^ xi) (x) J phi. Valid regardless of the second Gray
    # condition, so it pins down the xi extraction.
    second_derivative_residual = None
    if hfo.is_almost_kahler and sp.order >= 2:
        dd = hfo.conn.covd2(sp.omega).value  # (m, n, i, j)
        lhs = dd - np.moveaxis(dd, 0, 1)
        coeff_phi = (da - tensorops.wedge11(ja, xi)).value
        coeff_jphi = (dja + tensorops.wedge11(a, xi)).value
        rhs = np.einsum("mn,ij->mnij", coeff_phi, sp.basis.phi.value) - np.einsum(
            "mn,ij->mnij", coeff_jphi, sp.basis.jphi.value
        )
        second_derivative_residual = float(np.abs(tensorops.frame_components(lhs - rhs, frame)).max())

    # Ric0 = (kappa/4) (-g^D + g^Dperp) as frame tensors
    a_f = tensorops.frame_components(a.value, frame)
    a_f = a_f / np.linalg.norm(a_f)
    ja_f = J_FRAME @ a_f
    g_perp = np.outer(a_f, a_f) + np.outer(ja_f, ja_f)
    prop2i = dr.ric0 - (dr.kappa / 4.0) * (-(np.eye(4) - g_perp) + g_perp)
    prop2i_residual = float(np.abs(prop2i).max())

    # orthonormal frame components of the nullity and its complement
    perp = np.stack([a_f, ja_f])
    candidates = []
    for v in np.eye(4):
        w = v - (v @ a_f) * a_f - (v @ ja_f) * ja_f
        n = np.linalg.norm(w)
        if n > 1e-8 and not candidates:
            b = w / n
            candidates = [b, J_FRAME @ b]
    nullity = np.stack(candidates)

    xi_f = tensorops.frame_components(xi.value, frame)
    return ReversedStructure(
        valid=True,
        note="",
        jbar=jbar,
        omega_bar_value=omega_bar.value,
        d_omega_bar_norm=d_omega_bar_norm,
        xi=xi_f,
        da_residual=da_residual,
        dja_residual=dja_residual,
        prop2i_residual=prop2i_residual,
        structure_residual=structure_residual,
        second_derivative_residual=second_derivative_residual,
        nullity_basis=nullity,
        nullity_perp_basis=perp,
        g2_holds=g2_holds,
    )


def canonical_ricci_form(sp: StructurePoint, cd: CurvatureData, dr: DecompReport, hfo: HermitianFirstOrder) -> dict:
    """Ricci form of the first canonical Hermitian connection:

        gamma0(X, Y) = 4 Ric*(JX, Y) + <J nabla_X J, nabla_Y J>.

    Returned with its antisymmetry residual; on Kahler points the second
    term vanishes and gamma0 is four times the usual Ricci form.
    """
    frame = sp.frame
    d_omega_f = tensorops.frame_components(hfo.nabla_omega.value, frame)
    # first term: 4 Ric*(J e_x, e_y) with (J e_x)^k = J^k_x
    gamma = 4.0 * np.einsum("kx,ky->xy", J_FRAME, dr.ric_star)
    # (J o nabla_m J) as a lowered 2-tensor: g(J P e_i, e_j) = -P(e_i, J e_j),
    # where P(e_i, e_j) = (nabla_m Omega)(e_i, e_j)
    jp = -np.einsum("mik,kj->mij", d_omega_f, J_FRAME)
    gamma = gamma + np.einsum("xij,yij->xy", jp, d_omega_f)
    antisym = float(np.abs(gamma + gamma.T).max())
    return {"gamma0": gamma, "antisymmetry_residual": antisym}


# -- classification -------------------------------------------------------------


def classify(
    hfo: HermitianFirstOrder,
    dr: DecompReport,
    gr: tuple[float, float, float],
    tol: float = DEFAULT_VERDICT_TOL,
) -> tuple[str, tuple[str, ...]]:
    """Verdict string for the class ladder plus descriptive flags."""
    flags = []
    if dr.ric_anti_norm < tol and abs(np.trace(dr.ric0)) < tol and float(algebra.frobenius(dr.ric0)) < tol:
        flags.append("einstein")
    if float(algebra.frobenius(dr.wminus)) < tol:
        flags.append("self-dual")
    if float(algebra.frobenius(dr.wplus)) < tol:
        flags.append("anti-self-dual")
    if dr.ric_anti_norm < tol:
        flags.append("j-invariant-ricci")

    nabla_j = np.sqrt(max(hfo.nabla_j_sq, 0.0))
    if nabla_j < tol and hfo.nijenhuis_norm < tol:
        return "KAHLER", tuple(flags)
    if hfo.d_omega_norm < tol:
        g1, g2, g3 = gr
        if g1 < tol:
            return "AK-G1", tuple(flags)
        if g2 < tol:
            return "AK-G2", tuple(flags)
        if g3 < tol:
            return "AK-G3", tuple(flags)
        return "AK", tuple(flags)
    return "ALMOST-HERMITIAN", tuple(flags)


def gray_report(
    sp: StructurePoint,
    cd: CurvatureData,
    dr: DecompReport,
    hfo: HermitianFirstOrder,
    n_planes: int = 64,
    seed: int = 42,
    tol: float = DEFAULT_VERDICT_TOL,
) -> GrayReport:
    gr = gray_residuals(cd, sp)
    l5 = lemma5_check(dr, gr)
    planes = totally_real_curvature(cd, dr, sp, n_planes=n_planes, seed=seed, tol=tol)
    eig, gap = wplus_degeneracy(dr)
    verdict, flags = classify(hfo, dr, gr, tol=tol)
    if sp.order >= 3:
        prop1_res, prop1_note, const_res = prop1_check(sp, cd, dr, hfo, gr[1], g2_tol=tol)
    else:
        prop1_res, prop1_note, const_res = None, "skipped: jet order < 3", None
    return GrayReport(
        g1=gr[0],
        g2=gr[1],
        g3=gr[2],
        lemma5_triple=(l5["ric_anti"], l5["w2"], l5["w3"]),
        lemma6_triple=planes["lemma6_triple"],
        mu_formula=planes["mu_formula"],
        mu_min=planes["mu_min"],
        mu_max=planes["mu_max"],
        wplus_eigenvalues=eig,
        wplus_spectral_gap=gap,
        verdict=verdict,
        flags=flags,
        prop1_residual=prop1_res,
        prop1_note=prop1_note,
        const_nabla_j_residual=const_res,
    )
