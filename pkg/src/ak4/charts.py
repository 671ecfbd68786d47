"""Chart ingestion, structure validation, adapted frames, and the built-in catalog.

A chart supplies coordinate expressions for a Riemannian metric g and an
orthogonal almost complex structure J on a box in R^4. The fundamental
2-form is always derived from (g, J) through Omega(X, Y) = g(JX, Y), never
read from input, which removes one consistency failure mode.

The adapted orthonormal coframe {e1, e2 = J e1, e3, e4 = J e3} is built
deterministically by normalizing d/dx1, applying J, and Gram-Schmidt on the
first coordinate vector independent of span{e1, e2}. Orientation is fixed
by declaring the 4-form Omega ^ Omega positive, so Omega is always
self-dual. The self-dual basis is completed by phi = e1^e3 - e2^e4 and
J phi, where (J phi)(X, Y) = -phi(JX, Y); this phi gauge is a free choice
and every gauge-dependent quantity downstream is documented as such.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import jets, tensorops
from .errors import ChartError, StructureError
from .exprs import Expr, eval_jet, parse_expr
from .jets import Jet

STRUCTURE_TOL = 1e-9
_UPPER = [(i, j) for i in range(4) for j in range(i, 4)]


@dataclass(frozen=True)
class ChartSpec:
    """A coordinate chart: expressions for g and J plus a domain box."""

    name: str
    coords: tuple[str, str, str, str]
    domain: tuple[tuple[float, float], ...]
    g_src: dict[tuple[int, int], str]
    j_src: tuple[tuple[str, ...], ...]
    tags: tuple[str, ...] = ()
    g: dict[tuple[int, int], Expr] = field(repr=False, default=None)
    J: tuple[tuple[Expr, ...], ...] = field(repr=False, default=None)

    def contains(self, p) -> bool:
        return all(lo <= x <= hi for x, (lo, hi) in zip(p, self.domain))

    def sample_points(self, n: int, seed: int) -> np.ndarray:
        """n deterministic uniform samples from the domain box."""
        rng = np.random.default_rng(np.random.SeedSequence([int(seed), 0x41]))
        lo = np.array([d[0] for d in self.domain])
        hi = np.array([d[1] for d in self.domain])
        return lo + rng.random((n, 4)) * (hi - lo)


def chart_from_dict(data: dict, name_hint: str = "<chart>") -> ChartSpec:
    """Build and validate a ChartSpec from the JSON object layout."""
    for key in ("name", "coords", "domain", "g", "J"):
        if key not in data:
            raise ChartError(f"{name_hint}: missing top-level key {key!r}")
    coords = tuple(data["coords"])
    if len(coords) != 4:
        raise ChartError(f"{name_hint}: coords must list exactly 4 names")
    domain = []
    for i, pair in enumerate(data["domain"]):
        lo, hi = float(pair[0]), float(pair[1])
        if not lo < hi:
            raise ChartError(f"{name_hint}: degenerate domain interval for coordinate {i + 1}")
        domain.append((lo, hi))
    if len(domain) != 4:
        raise ChartError(f"{name_hint}: domain must list exactly 4 intervals")

    g_src: dict[tuple[int, int], str] = {}
    for i, j in _UPPER:
        key = f"{i + 1}{j + 1}"
        if key not in data["g"]:
            raise ChartError(f"{name_hint}: missing metric component g_{key}")
        g_src[(i, j)] = data["g"][key]
    j_src = []
    for i in range(4):
        row = []
        for j in range(4):
            key = f"{i + 1}_{j + 1}"
            if key not in data["J"]:
                raise ChartError(f"{name_hint}: missing structure component J^{i + 1}_{j + 1}")
            row.append(data["J"][key])
        j_src.append(tuple(row))

    def _parse(src: str, what: str) -> Expr:
        try:
            return parse_expr(src)
        except Exception as exc:
            raise ChartError(f"{name_hint}: bad expression for {what}: {exc}") from exc

    g = {(i, j): _parse(g_src[(i, j)], f"g_{i + 1}{j + 1}") for i, j in _UPPER}
    J = tuple(tuple(_parse(j_src[i][j], f"J^{i + 1}_{j + 1}") for j in range(4)) for i in range(4))
    return ChartSpec(
        name=str(data["name"]),
        coords=coords,
        domain=tuple(domain),
        g_src=g_src,
        j_src=tuple(tuple(r) for r in j_src),
        tags=tuple(data.get("tags", ())),
        g=g,
        J=J,
    )


def chart_to_dict(spec: ChartSpec) -> dict:
    """Serialize a ChartSpec back to the JSON object layout."""
    return {
        "name": spec.name,
        "coords": list(spec.coords),
        "domain": [list(d) for d in spec.domain],
        "g": {f"{i + 1}{j + 1}": spec.g_src[(i, j)] for i, j in _UPPER},
        "J": {f"{i + 1}_{j + 1}": spec.j_src[i][j] for i in range(4) for j in range(4)},
        "tags": list(spec.tags),
    }


def load_chart(path) -> ChartSpec:
    """Load a chart from a UTF-8 JSON file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ChartError(f"cannot read chart file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ChartError(f"chart file {path} is not valid JSON: {exc}") from exc
    return chart_from_dict(data, name_hint=str(path))


# -- the built-in catalog ------------------------------------------------------

_J_STANDARD = {"2_1": "1", "1_2": "-1", "4_3": "1", "3_4": "-1"}


def _j_matrix(entries: dict[str, str]) -> dict[str, str]:
    full = {f"{i}_{j}": "0" for i in range(1, 5) for j in range(1, 5)}
    full.update(entries)
    return full


def _diag_metric(g11: str, g22: str, g33: str, g44: str, **off) -> dict[str, str]:
    g = {f"{i}{j}": "0" for i, j in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]}
    g.update({"11": g11, "22": g22, "33": g33, "44": g44})
    g.update(off)
    return g


def product_surfaces(f1: str, f2: str, name: str = "product-surfaces", domain=((-0.9, 0.9),) * 4, tags=("kahler",)) -> ChartSpec:
    """Product of two conformally flat surface factors.

    g = f1(x1,x2)^2 (dx1^2 + dx2^2) + f2(x3,x4)^2 (dx3^2 + dx4^2) with the
    product complex structure. Kahler for any factors; Einstein only for
    matched constant factor curvatures.
    """
    data = {
        "name": name,
        "coords": ["x1", "x2", "x3", "x4"],
        "domain": [list(d) for d in domain],
        "g": _diag_metric(f"({f1})^2", f"({f1})^2", f"({f2})^2", f"({f2})^2"),
        "J": _j_matrix(_J_STANDARD),
        "tags": list(tags),
    }
    return chart_from_dict(data, name_hint=name)


def sphere_factor(curvature: float = 1.0) -> str:
    """Conformal factor of a round 2-sphere of the given curvature."""
    if curvature <= 0:
        raise ValueError("sphere factor needs positive curvature")
    r2 = 1.0 / curvature
    return f"(2*{r2!r})/({r2!r} + x1^2 + x2^2)"


def hyperbolic_factor(curvature: float = -1.0) -> str:
    """Conformal factor of a hyperbolic disc factor in coordinates x3, x4."""
    if curvature >= 0:
        raise ValueError("hyperbolic factor needs negative curvature")
    r2 = -1.0 / curvature
    return f"(2*{r2!r})/({r2!r} - x3^2 - x4^2)"


def _flat_chart() -> ChartSpec:
    return chart_from_dict(
        {
            "name": "flat",
            "coords": ["x1", "x2", "x3", "x4"],
            "domain": [[-1.0, 1.0]] * 4,
            "g": _diag_metric("1", "1", "1", "1"),
            "J": _j_matrix(_J_STANDARD),
            "tags": ["kahler", "einstein", "flat"],
        },
        name_hint="flat",
    )


def _product_surfaces_default() -> ChartSpec:
    # Gaussian bump factor: curvature exp((x1^2+x2^2)/2), non-constant.
    return product_surfaces(
        "exp(-(x1^2 + x2^2)/4)",
        "1",
        name="product-surfaces",
        domain=((-0.9, 0.9),) * 4,
        tags=("kahler", "non-einstein", "non-constant-scalar"),
    )


def _fubini_study_chart() -> ChartSpec:
    d = "(1 + x1^2 + x2^2 + x3^2 + x4^2)"
    g = {
        "11": f"(1 + x3^2 + x4^2)/{d}^2",
        "22": f"(1 + x3^2 + x4^2)/{d}^2",
        "33": f"(1 + x1^2 + x2^2)/{d}^2",
        "44": f"(1 + x1^2 + x2^2)/{d}^2",
        "12": "0",
        "34": "0",
        "13": f"-(x1*x3 + x2*x4)/{d}^2",
        "24": f"-(x1*x3 + x2*x4)/{d}^2",
        "14": f"(x2*x3 - x1*x4)/{d}^2",
        "23": f"(x1*x4 - x2*x3)/{d}^2",
    }
    return chart_from_dict(
        {
            "name": "fubini-study",
            "coords": ["x1", "x2", "x3", "x4"],
            "domain": [[-0.6, 0.6]] * 4,
            "g": g,
            "J": _j_matrix(_J_STANDARD),
            "tags": ["kahler", "einstein", "self-dual", "positive-scalar"],
        },
        name_hint="fubini-study",
    )


def _complex_hyperbolic_chart() -> ChartSpec:
    d = "(1 - x1^2 - x2^2 - x3^2 - x4^2)"
    g = {
        "11": f"(1 - x3^2 - x4^2)/{d}^2",
        "22": f"(1 - x3^2 - x4^2)/{d}^2",
        "33": f"(1 - x1^2 - x2^2)/{d}^2",
        "44": f"(1 - x1^2 - x2^2)/{d}^2",
        "12": "0",
        "34": "0",
        "13": f"(x1*x3 + x2*x4)/{d}^2",
        "24": f"(x1*x3 + x2*x4)/{d}^2",
        "14": f"(x1*x4 - x2*x3)/{d}^2",
        "23": f"(x2*x3 - x1*x4)/{d}^2",
    }
    return chart_from_dict(
        {
            "name": "complex-hyperbolic",
            "coords": ["x1", "x2", "x3", "x4"],
            "domain": [[-0.45, 0.45]] * 4,
            "g": g,
            "J": _j_matrix(_J_STANDARD),
            "tags": ["kahler", "einstein", "negative-scalar"],
        },
        name_hint="complex-hyperbolic",
    )


def _kodaira_thurston_chart() -> ChartSpec:
    # Orthonormal coframe dx1, dx3 - x1 dx2, dx2, dx4 with the frame rotation
    # J pairing (e1, e2) and (e3, e4); the fundamental 2-form
    # dx1 ^ (dx3 - x1 dx2) + dx2 ^ dx4 is closed while J is non-parallel, so
    # the structure is strictly almost Kahler.
    g = _diag_metric("1", "1 + x1^2", "1", "1", **{"23": "-x1"})
    j = _j_matrix({"3_1": "1", "1_2": "x1", "4_2": "1", "1_3": "-1", "2_4": "-1", "3_4": "-x1"})
    return chart_from_dict(
        {
            "name": "kodaira-thurston",
            "coords": ["x1", "x2", "x3", "x4"],
            "domain": [[-1.0, 1.0]] * 4,
            "g": g,
            "J": j,
            "tags": ["strictly-almost-kahler", "homogeneous"],
        },
        name_hint="kodaira-thurston",
    )


def catalog() -> list[ChartSpec]:
    """The built-in example charts."""
    return [
        _flat_chart(),
        _product_surfaces_default(),
        _fubini_study_chart(),
        _complex_hyperbolic_chart(),
        _kodaira_thurston_chart(),
    ]


def catalog_chart(name: str) -> ChartSpec:
    for spec in catalog():
        if spec.name == name:
            return spec
    known = ", ".join(s.name for s in catalog())
    raise ChartError(f"unknown catalog chart {name!r} (known: {known})")


# -- structure evaluation ------------------------------------------------------

#: Frame components of the standard complex structure in an adapted frame.
J_FRAME = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)


def _frame_form(a: int, b: int) -> np.ndarray:
    f = np.zeros((4, 4))
    f[a, b] = 1.0
    f[b, a] = -1.0
    return f


#: Frame components of the 2-form basis (Omega, phi, J phi, then the
#: anti-self-dual triple); every element has squared norm 2.
FRAME_FORMS = np.stack(
    [
        _frame_form(0, 1) + _frame_form(2, 3),
        _frame_form(0, 2) - _frame_form(1, 3),
        _frame_form(0, 3) + _frame_form(1, 2),
        _frame_form(0, 1) - _frame_form(2, 3),
        _frame_form(0, 2) + _frame_form(1, 3),
        _frame_form(0, 3) - _frame_form(1, 2),
    ]
)


@dataclass
class FormBasis:
    """Adapted coframe data and the associated 2-form bases.

    frame[a] are the coordinate components of the frame vector e_a, coframe
    the components of the dual covectors. omega, phi and jphi are coordinate
    2-form jets; their frame components are the first three rows of
    FRAME_FORMS. tensor_norm_factor converts squared operator (matrix) norms
    on 2-forms into squared full tensor norms.
    """

    frame: np.ndarray
    coframe: np.ndarray
    frame_jet: Jet
    coframe_jet: Jet
    omega: Jet
    phi: Jet
    jphi: Jet
    vol_sign: float
    tensor_norm_factor: float = 4.0

    def to_frame(self, values: np.ndarray) -> np.ndarray:
        """Frame components of a fully covariant coordinate tensor."""
        return tensorops.frame_components(values, self.frame)


@dataclass
class StructurePoint:
    """All structure jets of a chart at one point, plus the adapted frame."""

    spec: ChartSpec
    point: tuple[float, float, float, float]
    order: int
    g: Jet
    g_inv: Jet
    J: Jet
    omega: Jet
    det_g: Jet
    mu: Jet
    vol_sign: float
    basis: FormBasis
    invariant_residuals: dict[str, float]

    @property
    def frame(self) -> np.ndarray:
        return self.basis.frame


def _check(residuals: dict[str, float], name: str, value: float, tol: float) -> None:
    residuals[name] = float(value)
    if not np.isfinite(value) or value > tol:
        raise StructureError(name, float(value))


def structure_at(spec: ChartSpec, p, order: int = 4, tol: float = STRUCTURE_TOL) -> StructurePoint:
    """Evaluate all structure jets at p and validate the pointwise invariants.

    Raises StructureError naming the violated invariant, or ChartError if
    p lies outside the chart's domain box.
    """
    p = tuple(float(x) for x in p)
    if not spec.contains(p):
        raise ChartError(f"point {p} outside domain of chart {spec.name!r}")
    if not 0 <= order <= jets.MAX_ORDER:
        raise ChartError(f"jet order must be in 0..{jets.MAX_ORDER}, got {order}")

    gmat = [[None] * 4 for _ in range(4)]
    for i, j in _UPPER:
        entry = eval_jet(spec.g[(i, j)], p, order)
        gmat[i][j] = entry
        gmat[j][i] = entry
    g = jets.stack([jets.stack(row) for row in gmat])
    J = jets.stack([jets.stack([eval_jet(spec.J[i][j], p, order) for j in range(4)]) for i in range(4)])

    residuals: dict[str, float] = {}
    g0 = g.value
    min_eig = float(np.linalg.eigvalsh(g0).min())
    residuals["g positive definite"] = max(0.0, -min_eig)
    if min_eig <= 0.0:
        raise StructureError("g positive definite", -min_eig)
    j0 = J.value
    _check(residuals, "J o J = -Id", float(np.abs(j0 @ j0 + np.eye(4)).max()), tol)
    _check(residuals, "g(J.,J.) = g", float(np.abs(j0.T @ g0 @ j0 - g0).max()), tol)

    g_inv = tensorops.matrix_inverse(g)
    # Omega_ij = g(J d_i, d_j) = J^k_i g_kj
    omega = jets.contract(J, g, 0, 0)
    _check(residuals, "Omega = g(J.,.)", float(np.abs(omega.value + omega.value.T).max()), tol)

    frame_jet = _adapted_frame_jet(g, J, p, tol)
    frame = frame_jet.value
    gram = frame @ g0 @ frame.T
    _check(residuals, "frame orthonormal", float(np.abs(gram - np.eye(4)).max()), tol)
    _check(residuals, "e2 = J e1", float(np.abs(j0 @ frame[0] - frame[1]).max()), tol)
    _check(residuals, "e4 = J e3", float(np.abs(j0 @ frame[2] - frame[3]).max()), tol)

    det_g = tensorops.determinant4(g)
    vol_sign = float(np.sign(np.linalg.det(frame)))
    mu = tensorops.volume_form(g, vol_sign)

    coframe_jet = jets.contract(frame_jet, g, 1, 0)  # (e^a)_i = g_ij E_a^j
    phi = _coframe_wedge(coframe_jet, 0, 2) - _coframe_wedge(coframe_jet, 1, 3)
    jphi = -jets.contract(J, phi, 0, 0)  # (J phi)_ij = -phi(J d_i, d_j)

    basis = FormBasis(
        frame=frame,
        coframe=coframe_jet.value,
        frame_jet=frame_jet,
        coframe_jet=coframe_jet,
        omega=omega,
        phi=phi,
        jphi=jphi,
        vol_sign=vol_sign,
    )

    # Omega must coincide with e1^e2 + e3^e4 in the constructed coframe.
    rebuilt = _coframe_wedge(coframe_jet, 0, 1) + _coframe_wedge(coframe_jet, 2, 3)
    _check(residuals, "Omega = e1^e2 + e3^e4", float(np.abs(rebuilt.value - omega.value).max()), tol)
    # Self-duality of the positive basis under the declared orientation.
    for name, form in (("*Omega = Omega", omega), ("*phi = phi", phi), ("*Jphi = Jphi", jphi)):
        starred = tensorops.hodge_star_2form(form, g_inv, mu)
        _check(residuals, name, float(np.abs(starred.value - form.value).max()), tol)

    return StructurePoint(
        spec=spec,
        point=p,
        order=order,
        g=g,
        g_inv=g_inv,
        J=J,
        omega=omega,
        det_g=det_g,
        mu=mu,
        vol_sign=vol_sign,
        basis=basis,
        invariant_residuals=residuals,
    )


def _coframe_wedge(coframe: Jet, a: int, b: int) -> Jet:
    return tensorops.wedge11(coframe[a], coframe[b])


def _adapted_frame_jet(g: Jet, J: Jet, p: tuple, tol: float) -> Jet:
    """Deterministic adapted frame {e1, Je1, e3, Je3} as coordinate jets."""
    e1 = _basis_vector_jet(0, g) / jets.sqrt(g[0, 0])
    e2 = jets.contract(J, e1, 1, 0)
    w = None
    for m in range(1, 4):
        cand = _basis_vector_jet(m, g)
        for e in (e1, e2):
            coeff = jets.contract(jets.contract(g, cand, 0, 0), e, 0, 0)
            cand = cand - coeff * e
        norm2 = jets.contract(jets.contract(g, cand, 0, 0), cand, 0, 0)
        if float(norm2.value) > 1e-10:
            w = cand / jets.sqrt(norm2)
            break
    if w is None:
        raise StructureError("frame construction (no independent coordinate vector)", 0.0)
    e3 = w
    e4 = jets.contract(J, e3, 1, 0)
    return jets.stack([e1, e2, e3, e4])


def _basis_vector_jet(m: int, g: Jet) -> Jet:
    c = np.zeros((4, jets.NCOEF[g.order]))
    c[m, 0] = 1.0
    return Jet(g.order, c, g.point)


def adapted_frame(sp: StructurePoint) -> FormBasis:
    """The adapted coframe and 2-form basis attached to a structure point."""
    return sp.basis
