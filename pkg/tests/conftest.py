from __future__ import annotations

import numpy as np
import pytest

from ak4 import charts
from ak4.cli import PointAnalysis, analyze_point

#: Points per chart for the full order-4 analyses shared across the suite.
N_FULL = 3
FULL_SEED = 42

CATALOG_NAMES = ("flat", "product-surfaces", "fubini-study", "complex-hyperbolic", "kodaira-thurston")
KAHLER_NAMES = ("flat", "product-surfaces", "fubini-study", "complex-hyperbolic")
EINSTEIN_NAMES = ("flat", "fubini-study", "complex-hyperbolic")


def ricci_anti_chart() -> charts.ChartSpec:
    """Hermitian (integrable, non-Kahler) chart whose Ricci tensor is not
    J-invariant: a warped product with the factor depending on a base
    coordinate. Violates the hypotheses of the J-invariant-Ricci lemmas."""
    j = {f"{i}_{k}": "0" for i in range(1, 5) for k in range(1, 5)}
    j.update({"2_1": "1", "1_2": "-1", "4_3": "1", "3_4": "-1"})
    return charts.chart_from_dict(
        {
            "name": "ricci-anti",
            "coords": ["x1", "x2", "x3", "x4"],
            "domain": [[-0.8, 0.8]] * 4,
            "g": {
                "11": "1",
                "22": "1",
                "33": "(1 + x1^2/2)^2",
                "44": "(1 + x1^2/2)^2",
                "12": "0",
                "13": "0",
                "14": "0",
                "23": "0",
                "24": "0",
                "34": "0",
            },
            "J": j,
            "tags": ["hermitian", "ricci-not-j-invariant"],
        },
        name_hint="ricci-anti",
    )


@pytest.fixture(scope="session")
def catalog_specs() -> dict[str, charts.ChartSpec]:
    return {spec.name: spec for spec in charts.catalog()}


@pytest.fixture(scope="session")
def analyses(catalog_specs) -> dict[str, list[PointAnalysis]]:
    """Full order-4 analyses at N_FULL seeded points per catalog chart."""
    out: dict[str, list[PointAnalysis]] = {}
    for name, spec in catalog_specs.items():
        pts = spec.sample_points(N_FULL, FULL_SEED)
        out[name] = [analyze_point(spec, p, order=4, planes=64, seed=FULL_SEED) for p in pts]
    return out


@pytest.fixture(scope="session")
def ricci_anti_analysis() -> PointAnalysis:
    spec = ricci_anti_chart()
    p = spec.sample_points(1, FULL_SEED)[0]
    return analyze_point(spec, p, order=4, planes=64, seed=FULL_SEED)


def all_points(analyses) -> list[tuple[str, PointAnalysis]]:
    return [(name, pa) for name, rows in analyses.items() for pa in rows]
