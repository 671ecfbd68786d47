"""Metric-level tensor helpers acting on jets in coordinate indices.

All tensors are fully covariant (lower indices); raising is explicit via
the inverse metric. Two-form inner products follow the convention that the
squared norm is half the tensor norm, so the wedge of two orthonormal
covectors has unit norm and the fundamental 2-form has squared norm 2.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import jets
from .jets import Jet


def _eps4() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in itertools.permutations(range(4)):
        sign = 1
        p = list(perm)
        for i in range(4):
            for j in range(i + 1, 4):
                if p[i] > p[j]:
                    sign = -sign
        eps[perm] = sign
    return eps


EPS4 = _eps4()


def matrix_inverse(g: Jet) -> Jet:
    """Inverse of a 4x4 jet matrix with invertible constant term.

    Splits g = g0 + E with E nilpotent in the truncated algebra and sums the
    terminating Neumann series (I + g0^-1 E)^-1 g0^-1.
    """
    g0_inv = np.linalg.inv(g.value)
    e = g.c.copy()
    e[..., 0] = 0.0
    m = -jets.contract(Jet.constant(g0_inv, g.order, g.point), Jet(g.order, e, g.point), 1, 0)
    acc = Jet.constant(np.eye(4), g.order, g.point)
    term = acc
    for _ in range(g.order):
        term = jets.contract(term, m, 1, 0)
        acc = acc + term
    return jets.contract(acc, Jet.constant(g0_inv, g.order, g.point), 1, 0)


def determinant4(g: Jet) -> Jet:
    """Determinant of a 4x4 jet matrix (Laplace expansion over rows 0 and 1)."""
    det = None
    for c, d in itertools.combinations(range(4), 2):
        comp = [k for k in range(4) if k not in (c, d)]
        # parity of the permutation (0,1,2,3) -> (c,d,comp)
        sign = EPS4[c, d, comp[0], comp[1]]
        top = g[0, c] * g[1, d] - g[0, d] * g[1, c]
        bot = g[2, comp[0]] * g[3, comp[1]] - g[2, comp[1]] * g[3, comp[0]]
        term = sign * (top * bot)
        det = term if det is None else det + term
    return det


def volume_form(g: Jet, orientation: float) -> Jet:
    """mu_ijkl = orientation * sqrt(det g) * eps_ijkl as a jet tensor."""
    s = jets.sqrt(determinant4(g)) * float(orientation)
    c = s.c[None, None, None, None, :] * EPS4[..., None]
    return Jet(s.order, c, g.point)


def raise_axis(t: Jet, ginv: Jet, axis: int) -> Jet:
    """Raise the index at the given leading-axis position."""
    return jets.moveaxis(jets.contract(ginv, t, 1, axis), 0, axis)


def raise_pair(t: Jet, ginv: Jet, a: int, b: int) -> Jet:
    return raise_axis(raise_axis(t, ginv, a), ginv, b)


def form_inner(a: Jet, b: Jet, ginv: Jet) -> Jet:
    """Half-tensor-norm inner product of 2-form jets."""
    return 0.5 * jets.contract(a, raise_pair(b, ginv, 0, 1), (0, 1), (0, 1))


def vector_inner(a: Jet, b: Jet, ginv: Jet) -> Jet:
    """g^ij a_i b_j for 1-form jets."""
    return jets.contract(a, jets.contract(ginv, b, 1, 0), 0, 0)


def wedge11(a: Jet, b: Jet) -> Jet:
    """(a ^ b)_ij = a_i b_j - a_j b_i for 1-form jets."""
    t = jets.outer(a, b)
    return t - jets.moveaxis(t, 0, 1)


def ext_d_1form(a: Jet) -> Jet:
    """(da)_ij = d_i a_j - d_j a_i."""
    t = jets.partials(a)
    return t - jets.moveaxis(t, 0, 1)


def ext_d_2form(phi: Jet) -> Jet:
    """(d phi)_ijk = d_i phi_jk - d_j phi_ik + d_k phi_ij."""
    t = jets.partials(phi)
    return t - jets.moveaxis(t, 1, 0) + jets.moveaxis(t, (0, 1, 2), (2, 0, 1))


def hodge_star_2form(phi: Jet, ginv: Jet, mu: Jet) -> Jet:
    """(*phi)_ij = (1/2) mu_ijkl phi^kl."""
    return 0.5 * jets.contract(mu, raise_pair(phi, ginv, 0, 1), (2, 3), (0, 1))


def dual_projection(t: Jet, ginv: Jet, mu: Jet, sign: float, pair: tuple[int, int]) -> Jet:
    """Project an antisymmetric index pair onto its (anti-)self-dual part.

    sign=+1.0 applies (1/2)(id + *) to the pair, sign=-1.0 the complement.
    """
    a, b = pair
    tp = jets.moveaxis(jets.moveaxis(t, a, 0), b, 1)
    starred = 0.5 * jets.contract(mu, raise_pair(tp, ginv, 0, 1), (2, 3), (0, 1))
    out = 0.5 * (tp + float(sign) * starred)
    return jets.moveaxis(jets.moveaxis(out, 1, b), 0, a)


def kn_jet(h: Jet, g: Jet) -> Jet:
    """Kulkarni-Nomizu product of symmetric 2-tensor jets.

    (h kn g)_ijkl = h_ik g_jl + h_jl g_ik - h_il g_jk - h_jk g_il
    """
    hg = jets.outer(h, g)  # h_ab g_cd on axes (a,b,c,d)
    gh = jets.outer(g, h)
    t = jets.moveaxis(hg, (0, 1, 2, 3), (0, 2, 1, 3))  # h_ik g_jl
    t = t + jets.moveaxis(gh, (0, 1, 2, 3), (0, 2, 1, 3))  # + g_ik h_jl
    t = t - jets.moveaxis(hg, (0, 1, 2, 3), (0, 3, 1, 2))  # - h_il g_jk
    t = t - jets.moveaxis(gh, (0, 1, 2, 3), (0, 3, 1, 2))  # - g_il h_jk
    return t


def frame_components(values: np.ndarray, frame: np.ndarray) -> np.ndarray:
    """Express a fully covariant tensor's values in an orthonormal frame.

    frame[a] holds the coordinate components of the a-th frame vector.
    """
    out = np.asarray(values)
    for axis in range(out.ndim):
        out = np.moveaxis(np.tensordot(frame, out, axes=([1], [axis])), 0, axis)
    return out
