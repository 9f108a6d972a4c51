"""CEC2017-style composition functions CF1..CF10.

A composition blends shifted and rotated component functions::

    z_i = M_i (x - o_i)
    w_i = exp(-|x - o_i|^2 / (2 D sigma_i^2)) / |x - o_i|
    F(x) = sum_i (w_i / sum_j w_j) * (lambda_i * f_i(z_i) + bias_i) + f_star

Each component applies its usual CEC shrink rate to ``z`` and has its
minimum 0 at ``z = 0``. Shift vectors and rotations come from data files
(``cf<k>_D<dims>.txt``); without one, shifts are drawn from a seeded
generator in ``[-80, 80]^D`` and rotations are the identity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from ..core import DimensionError, SearchSpace

log = logging.getLogger(__name__)

BOUND = 100.0
SHIFT_RANGE = 80.0
ORTHO_TOL = 1e-9


class CompositeDataError(ValueError):
    """Malformed or inconsistent composition data."""


# Component functions. Each takes the rotated offset z and returns >= 0 with
# its minimum at z = 0.

def rosenbrock(z):
    y = z * (2.048 / 100.0) + 1.0
    return float(np.sum(100.0 * (y[:-1] ** 2 - y[1:]) ** 2 + (y[:-1] - 1.0) ** 2))


def high_conditioned_elliptic(z):
    n = z.size
    if n == 1:
        return float(z[0] ** 2)
    i = np.arange(n)
    return float(np.sum(10.0 ** (6.0 * i / (n - 1)) * z ** 2))


def rastrigin(z):
    y = z * (5.12 / 100.0)
    return float(np.sum(y ** 2 - 10.0 * np.cos(2.0 * np.pi * y) + 10.0))


def modified_schwefel(z):
    y = z * (1000.0 / 100.0) + 4.209687462275036e2
    n = y.size
    out = np.empty(n)
    hi, lo = y > 500.0, y < -500.0
    mid = ~(hi | lo)
    m = np.fmod(y[hi], 500.0)
    out[hi] = (500.0 - m) * np.sin(np.sqrt(500.0 - m)) - (y[hi] - 500.0) ** 2 / (10000.0 * n)
    m = np.fmod(np.abs(y[lo]), 500.0)
    out[lo] = (m - 500.0) * np.sin(np.sqrt(500.0 - m)) - (y[lo] + 500.0) ** 2 / (10000.0 * n)
    out[mid] = y[mid] * np.sin(np.sqrt(np.abs(y[mid])))
    return float(4.189828872724338e2 * n - np.sum(out))


def griewank(z):
    y = z * (600.0 / 100.0)
    i = np.arange(1.0, y.size + 1.0)
    return float(np.sum(y ** 2) / 4000.0 - np.prod(np.cos(y / np.sqrt(i))) + 1.0)


def ackley(z):
    n = z.size
    value = (-20.0 * np.exp(-0.2 * np.sqrt(np.sum(z ** 2) / n))
             - np.exp(np.sum(np.cos(2.0 * np.pi * z)) / n) + 20.0 + np.e)
    return float(value)


def happy_cat(z):
    y = z * (5.0 / 100.0) - 1.0
    n = y.size
    r2 = np.sum(y ** 2)
    return float(abs(r2 - n) ** 0.25 + (0.5 * r2 + np.sum(y)) / n + 0.5)


def discus(z):
    return float(1e6 * z[0] ** 2 + np.sum(z[1:] ** 2))


def expanded_schaffer_f6(z):
    a, b = z, np.roll(z, -1)
    s = a ** 2 + b ** 2
    return float(np.sum(0.5 + (np.sin(np.sqrt(s)) ** 2 - 0.5) / (1.0 + 0.001 * s) ** 2))


COMPONENTS: dict[str, Callable[[np.ndarray], float]] = {
    "rosenbrock": rosenbrock,
    "elliptic": high_conditioned_elliptic,
    "rastrigin": rastrigin,
    "modified_schwefel": modified_schwefel,
    "griewank": griewank,
    "ackley": ackley,
    "happycat": happy_cat,
    "discus": discus,
    "expanded_schaffer_f6": expanded_schaffer_f6,
}


@dataclass(frozen=True)
class CompositeLayout:
    """Parameters of one composition, independent of dimension and data."""

    components: tuple[str, ...]
    sigma: tuple[float, ...]
    lam: tuple[float, ...]
    bias: tuple[float, ...]
    f_star: float


def _layout(components, sigma, lam, f_star):
    return CompositeLayout(tuple(components), tuple(map(float, sigma)), tuple(map(float, lam)),
                           tuple(100.0 * i for i in range(len(components))), float(f_star))


CF_LAYOUTS: dict[int, CompositeLayout] = {
    1: _layout(["rosenbrock", "elliptic", "rastrigin"], [10, 20, 30], [1, 1e-6, 1], 2100),
    2: _layout(["rastrigin", "griewank", "modified_schwefel"], [10, 20, 30], [1, 10, 1], 2200),
    3: _layout(["rosenbrock", "ackley", "modified_schwefel", "rastrigin"],
               [10, 20, 30, 40], [1, 10, 1, 1], 2300),
    4: _layout(["ackley", "rastrigin", "elliptic", "griewank"],
               [10, 20, 30, 40], [1, 1, 1e-6, 10], 2400),
    5: _layout(["rastrigin", "happycat", "ackley", "discus", "rosenbrock"],
               [10, 20, 30, 40, 50], [10, 1, 10, 1, 1], 2500),
    6: _layout(["expanded_schaffer_f6", "modified_schwefel", "griewank", "rosenbrock", "rastrigin"],
               [10, 20, 20, 30, 40], [1, 1, 10, 1, 1], 2600),
    7: _layout(["elliptic", "rastrigin", "happycat", "rosenbrock", "modified_schwefel", "ackley"],
               [10, 10, 10, 20, 20, 20], [1e-6, 10, 1, 1, 1, 10], 2700),
    8: _layout(["rastrigin", "griewank", "elliptic", "happycat", "discus", "rosenbrock"],
               [10, 20, 30, 40, 50, 60], [1, 10, 1e-6, 1, 1, 1], 2800),
    9: _layout(["elliptic", "rastrigin", "rosenbrock"], [10, 30, 50], [1, 1, 1], 2900),
    10: _layout(["elliptic", "rastrigin", "rosenbrock"], [10, 30, 50], [0.1, 1, 10], 3000),
}


@dataclass
class CompositeSpec:
    components: Sequence[Callable[[np.ndarray], float]]
    sigma: Sequence[float]
    lam: Sequence[float]
    bias: Sequence[float]
    f_star: float
    shifts: np.ndarray  # (n_components, D)
    rotations: np.ndarray  # (n_components, D, D)
    name: str = "composite"
    annotations: list = field(default_factory=list)

    def __post_init__(self):
        k = len(self.components)
        if not (len(self.sigma) == len(self.lam) == len(self.bias) == k):
            raise CompositeDataError("sigma, lambda and bias need one entry per component")
        self.shifts = np.asarray(self.shifts, dtype=float)
        self.rotations = np.asarray(self.rotations, dtype=float)
        if self.shifts.ndim != 2 or self.shifts.shape[0] != k:
            raise CompositeDataError(f"need {k} shift vectors, got array of shape {self.shifts.shape}")
        d = self.shifts.shape[1]
        if self.rotations.shape != (k, d, d):
            raise CompositeDataError(f"rotations must have shape {(k, d, d)}, got {self.rotations.shape}")
        for i, m in enumerate(self.rotations):
            check_orthogonal(m, f"rotation {i}")

    @property
    def dims(self) -> int:
        return self.shifts.shape[1]

    def space(self) -> SearchSpace:
        return SearchSpace.box(-BOUND, BOUND, self.dims)

    def __call__(self, x) -> float:
        return eval_composite(self, x)


def check_orthogonal(m: np.ndarray, what: str = "matrix") -> None:
    m = np.asarray(m, dtype=float)
    err = np.max(np.abs(m.T @ m - np.eye(m.shape[0])))
    if not err <= ORTHO_TOL:
        raise CompositeDataError(f"{what} is not orthogonal: max |M^T M - I| = {err:.3g}")


def composite_weights(spec: CompositeSpec, x: np.ndarray) -> np.ndarray:
    """Normalized blending weights; all mass goes to a component hit exactly."""
    d = spec.dims
    diff = x[None, :] - spec.shifts
    sq = np.sum(diff ** 2, axis=1)
    hit = np.flatnonzero(sq == 0.0)
    if hit.size:
        w = np.zeros(len(spec.components))
        w[hit[0]] = 1.0
        return w
    sigma = np.asarray(spec.sigma, dtype=float)
    w = np.exp(-sq / (2.0 * d * sigma ** 2)) / np.sqrt(sq)
    total = np.sum(w)
    if total == 0.0 or not math.isfinite(total):
        # every exponential underflowed: blend evenly, as the CEC code does
        return np.full(w.size, 1.0 / w.size)
    return w / total


def eval_composite(spec: CompositeSpec, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dims,):
        raise DimensionError(f"{spec.name} is {spec.dims}-dimensional, got shape {x.shape}")
    weights = composite_weights(spec, x)
    total = 0.0
    for i, f in enumerate(spec.components):
        if weights[i] == 0.0:
            continue
        z = spec.rotations[i] @ (x - spec.shifts[i])
        total += weights[i] * (spec.lam[i] * f(z) + spec.bias[i])
    return float(total + spec.f_star)


def load_composite_data(
    path: Optional["str | Path"],
    dims: int,
    n_components: int,
    seed: int = 0,
) -> tuple[np.ndarray, np.ndarray, list[str]]:
    """Read shifts and rotations, or fall back to seeded shifts and identities.

    The file holds one record per component: a line of ``dims`` shift values,
    then ``dims`` lines of ``dims`` rotation entries (row-major). Returns
    ``(shifts, rotations, annotations)``.
    """
    if path is None or not Path(path).exists():
        note = (f"composite data {path} not found; using seeded shifts (seed={seed}) "
                "in [-80, 80] and identity rotations" if path is not None else
                f"no composite data file; using seeded shifts (seed={seed}) and identity rotations")
        log.info(note)
        gen = np.random.default_rng(seed)
        shifts = gen.uniform(-SHIFT_RANGE, SHIFT_RANGE, size=(n_components, dims))
        rotations = np.broadcast_to(np.eye(dims), (n_components, dims, dims)).copy()
        return shifts, rotations, [note]
    try:
        rows = [line.split() for line in Path(path).read_text().splitlines() if line.strip()]
        table = np.array([[float(v) for v in row] for row in rows], dtype=float)
    except ValueError as exc:
        raise CompositeDataError(f"{path}: {exc}") from None
    per_record = dims + 1
    if table.ndim != 2 or table.shape[1] != dims or table.shape[0] < per_record * n_components:
        raise CompositeDataError(
            f"{path}: expected {n_components} records of {per_record} lines x {dims} values"
        )
    table = table[: per_record * n_components].reshape(n_components, per_record, dims)
    shifts = table[:, 0, :].copy()
    rotations = table[:, 1:, :].copy()
    for i, m in enumerate(rotations):
        check_orthogonal(m, f"{path}: rotation {i}")
    return shifts, rotations, []


def write_composite_data(path: "str | Path", shifts: np.ndarray, rotations: np.ndarray) -> None:
    lines = []
    for shift, rot in zip(shifts, rotations):
        lines.append(" ".join(repr(float(v)) for v in shift))
        lines.extend(" ".join(repr(float(v)) for v in row) for row in rot)
    Path(path).write_text("\n".join(lines) + "\n")


def data_path(data_dir: "str | Path", k: int, dims: int) -> Path:
    return Path(data_dir) / f"cf{k}_D{dims}.txt"


def make_cf(
    k: int,
    dims: int,
    data_dir: Optional["str | Path"] = None,
    seed: Optional[int] = None,
) -> CompositeSpec:
    """Build composition ``CF<k>`` in ``dims`` dimensions.

    Without a data file the fallback shifts use ``seed`` (default ``k``).
    """
    if k not in CF_LAYOUTS:
        raise KeyError(f"unknown composition CF{k}; have 1..10")
    layout = CF_LAYOUTS[k]
    path = data_path(data_dir, k, dims) if data_dir is not None else None
    shifts, rotations, notes = load_composite_data(
        path, dims, len(layout.components), k if seed is None else seed
    )
    return CompositeSpec(
        components=[COMPONENTS[name] for name in layout.components],
        sigma=layout.sigma,
        lam=layout.lam,
        bias=layout.bias,
        f_star=layout.f_star,
        shifts=shifts,
        rotations=rotations,
        name=f"cf{k}",
        annotations=notes,
    )
