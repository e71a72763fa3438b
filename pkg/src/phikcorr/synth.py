"""Synthetic data sets used for validation and demos."""
from dataclasses import dataclass

import numpy as np

from .datamodel import Column, ContingencyTable, VariableKind
from .numerics import as_generator


def gen_bvn(rho, n, rng=None):
    """``n`` draws from the standardised bivariate normal with correlation rho."""
    if not -1.0 <= rho <= 1.0:
        raise ValueError("rho must lie in [-1, 1]")
    gen = as_generator(rng)
    z = gen.standard_normal((2, n))
    x = z[0]
    y = rho * z[0] + np.sqrt(1.0 - rho * rho) * z[1]
    return x, y


def gen_uniform_pmf(r, k, n, rng=None) -> ContingencyTable:
    """Multinomial table of ``n`` records over r x k equiprobable cells."""
    if r < 1 or k < 1:
        raise ValueError("need at least one row and one column")
    gen = as_generator(rng)
    counts = gen.multinomial(n, np.full(r * k, 1.0 / (r * k))).reshape(r, k)
    return ContingencyTable.from_counts(counts)


@dataclass(frozen=True)
class SmileySpec:
    """Two Gaussian eyes and a parabolic mouth y = a x^2 + b over |x| <= half_width."""

    eye_centers: tuple = ((-1.5, 1.5), (1.5, 1.5))
    eye_width: float = 0.3
    mouth_a: float = 0.5
    mouth_b: float = -3.0
    mouth_half_width: float = 2.0
    mouth_scatter: float = 0.2
    weights: tuple = (0.2, 0.2, 0.6)

    def __post_init__(self):
        w = np.asarray(self.weights)
        if (w < 0).any() or not np.isclose(w.sum(), 1.0):
            raise ValueError("mixture weights must be nonnegative and sum to 1")


def gen_smiley(n, rng=None, spec: SmileySpec = SmileySpec()):
    """Smiley-face point cloud; returns ``(x, y, component)``, component 0/1 for
    the eyes and 2 for the mouth."""
    if n < 1:
        raise ValueError("n must be positive")
    gen = as_generator(rng)
    comp = gen.choice(3, size=n, p=spec.weights)
    x = np.empty(n)
    y = np.empty(n)
    for eye in (0, 1):
        sel = comp == eye
        cx, cy = spec.eye_centers[eye]
        x[sel] = gen.normal(cx, spec.eye_width, sel.sum())
        y[sel] = gen.normal(cy, spec.eye_width, sel.sum())
    sel = comp == 2
    mx = gen.uniform(-spec.mouth_half_width, spec.mouth_half_width, sel.sum())
    x[sel] = mx + gen.normal(0.0, spec.mouth_scatter, sel.sum())
    y[sel] = spec.mouth_a * mx**2 + spec.mouth_b + gen.normal(0.0, spec.mouth_scatter, sel.sum())
    return x, y, comp


CAR_COLORS = ("black", "blue", "gray", "green", "metallic", "multicolor", "red", "white")
AREAS = ("countryside", "downtown", "hills", "suburbs")
CAR_SIZES = ("XS", "S", "M", "L", "XL", "XXL")

# P(area | color); rows follow CAR_COLORS, columns AREAS.
_AREA_GIVEN_COLOR = np.array([
    [0.15, 0.10, 0.15, 0.60],  # black: suburbs, rarely downtown
    [0.25, 0.25, 0.25, 0.25],
    [0.20, 0.40, 0.15, 0.25],
    [0.40, 0.15, 0.30, 0.15],
    [0.20, 0.30, 0.20, 0.30],
    [0.15, 0.45, 0.15, 0.25],
    [0.20, 0.35, 0.15, 0.30],
    [0.25, 0.25, 0.25, 0.25],
])
_COLOR_P = np.array([0.15, 0.15, 0.15, 0.08, 0.12, 0.05, 0.12, 0.18])
_SIZE_P = np.array([0.08, 0.18, 0.27, 0.24, 0.15, 0.08])
# median yearly mileage per size class; XXL drives far more
_SIZE_MILEAGE = np.array([9000.0, 13000.0, 18000.0, 25000.0, 35000.0, 60000.0])


def gen_car_dataset(n=2000, rng=None):
    """Five mixed-type columns mimicking a car insurance portfolio.

    Built-in dependencies: car size drives mileage, car color drives area, area
    mildly shifts driver age. Driver age is independent of car color and of car
    size.
    """
    if n < 1:
        raise ValueError("n must be positive")
    gen = as_generator(rng)
    color_idx = gen.choice(len(CAR_COLORS), size=n, p=_COLOR_P)
    u = gen.random(n)
    cum = np.cumsum(_AREA_GIVEN_COLOR, axis=1)[color_idx]
    area_idx = (u[:, None] > cum).sum(axis=1)
    size_idx = gen.choice(len(CAR_SIZES), size=n, p=_SIZE_P)
    mileage = np.rint(_SIZE_MILEAGE[size_idx] * np.exp(gen.normal(0.0, 0.45, n)))
    age_shift = np.array([4.0, -5.0, 3.0, 0.0])[area_idx]
    age = np.clip(gen.normal(44.0, 14.0, n) + age_shift, 18.0, 90.0).round(1)
    return [
        Column("car_color", VariableKind.CATEGORICAL, tuple(CAR_COLORS[i] for i in color_idx)),
        Column("driver_age", VariableKind.INTERVAL, tuple(float(a) for a in age)),
        Column("area", VariableKind.CATEGORICAL, tuple(AREAS[i] for i in area_idx)),
        Column("mileage", VariableKind.INTERVAL, tuple(float(m) for m in mileage)),
        Column("car_size", VariableKind.ORDINAL, tuple(CAR_SIZES[i] for i in size_idx), CAR_SIZES),
    ]
