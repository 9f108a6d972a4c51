"""Classical test functions used in the two-dimensional benchmark table.

Closed forms and default boxes follow the Opfunu ``name_based`` module.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..core import DimensionError, SearchSpace

# Minimizer of the 2-D Michalewicz function (m = 10); x1 solves a 1-D problem,
# x2 = pi/2 exactly. Polished with scipy.optimize.minimize_scalar.
MICHALEWICZ_2D_ARGMIN = (2.2029055186862294, np.pi / 2)
MICHALEWICZ_2D_MIN = -1.8013034100985523


@dataclass(frozen=True)
class BenchmarkFn:
    name: str
    func: Callable[[np.ndarray], float]
    bounds: tuple[float, float]
    fixed_dims: Optional[int] = None
    default_dims: int = 2
    # (minimizer as a function of dims, optimum value)
    optimum: Optional[tuple[Callable[[int], np.ndarray], float]] = None

    def space(self, dims: Optional[int] = None) -> SearchSpace:
        dims = self.check_dims(dims if dims is not None else self.default_dims)
        return SearchSpace.box(self.bounds[0], self.bounds[1], dims)

    def check_dims(self, dims: int) -> int:
        if self.fixed_dims is not None and dims != self.fixed_dims:
            raise DimensionError(f"{self.name} is {self.fixed_dims}-dimensional, got {dims}")
        if dims < 1:
            raise DimensionError("dims must be positive")
        return dims

    def known_optimum(self, dims: Optional[int] = None):
        if self.optimum is None:
            return None
        dims = self.check_dims(dims if dims is not None else self.default_dims)
        where, value = self.optimum
        return np.asarray(where(dims), dtype=float), value

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        self.check_dims(x.size)
        return float(self.func(x))


def beale(x):
    return ((1.5 - x[0] + x[0] * x[1]) ** 2
            + (2.25 - x[0] + x[0] * x[1] ** 2) ** 2
            + (2.625 - x[0] + x[0] * x[1] ** 3) ** 2)


def matyas(x):
    return 0.26 * (x[0] ** 2 + x[1] ** 2) - 0.48 * x[0] * x[1]


def camel3(x):
    return 2 * x[0] ** 2 - 1.05 * x[0] ** 4 + x[0] ** 6 / 6 + x[0] * x[1] + x[1] ** 2


def exponential(x):
    return -np.exp(-0.5 * np.sum(x ** 2))


def drop_wave(x):
    r2 = np.sum(x ** 2)
    return -(1 + np.cos(12 * np.sqrt(r2))) / (0.5 * r2 + 2)


def egg_holder(x):
    a, b = x[:-1], x[1:]
    return np.sum(-(b + 47) * np.sin(np.sqrt(np.abs(b + a / 2 + 47)))
                  - a * np.sin(np.sqrt(np.abs(a - (b + 47)))))


def himmelblau(x):
    return (x[0] ** 2 + x[1] - 11) ** 2 + (x[0] + x[1] ** 2 - 7) ** 2


def levy13(x):
    return (np.sin(3 * np.pi * x[0]) ** 2
            + (x[0] - 1) ** 2 * (1 + np.sin(3 * np.pi * x[1]) ** 2)
            + (x[1] - 1) ** 2 * (1 + np.sin(2 * np.pi * x[1]) ** 2))


def ackley01(x):
    n = x.size
    return (-20.0 * np.exp(-0.2 * np.sqrt(np.sum(x ** 2) / n))
            - np.exp(np.sum(np.cos(2 * np.pi * x)) / n) + 20.0 + np.e)


def griewank(x):
    i = np.arange(1.0, x.size + 1.0)
    return np.sum(x ** 2 / 4000) - np.prod(np.cos(x / np.sqrt(i))) + 1


def michalewicz(x, m=10.0):
    i = np.arange(1, x.size + 1)
    return -np.sum(np.sin(x) * np.sin(i * x ** 2 / np.pi) ** (2 * m))


def qing(x):
    i = np.arange(1, x.size + 1)
    return np.sum((x ** 2 - i) ** 2)


def salomon(x):
    r = np.sqrt(np.sum(x ** 2))
    return 1 - np.cos(2 * np.pi * r) + 0.1 * r


def zimmerman(x):
    h1 = 9.0 - x[0] - x[1]
    h2 = (x[0] - 3.0) ** 2 + (x[1] - 2.0) ** 2 - 16.0
    h3 = x[0] * x[1] - 14.0

    def p(t):
        return 100.0 * (1.0 + t)

    return max(h1, p(h2) * np.sign(h2), p(h3) * np.sign(h3),
               p(-x[0]) * np.sign(x[0]), p(-x[1]) * np.sign(x[1]))


def rana(x):
    a, b = x[:-1], x[1:]
    t1 = np.sqrt(np.abs(b + a + 1))
    t2 = np.sqrt(np.abs(b - a + 1))
    return np.sum((b + 1) * np.cos(t2) * np.sin(t1) + a * np.cos(t1) * np.sin(t2))


def parsopoulos(x):
    return np.cos(x[0]) ** 2 + np.sin(x[1]) ** 2


def _zeros(d):
    return np.zeros(d)


def _at(*point):
    return lambda d: np.array(point, dtype=float)


CLASSICAL: dict[str, BenchmarkFn] = {
    f.name: f
    for f in [
        BenchmarkFn("beale", beale, (-4.5, 4.5), 2, optimum=(_at(3.0, 0.5), 0.0)),
        BenchmarkFn("matyas", matyas, (-10.0, 10.0), 2, optimum=(_zeros, 0.0)),
        BenchmarkFn("camel3", camel3, (-5.0, 5.0), 2, optimum=(_zeros, 0.0)),
        BenchmarkFn("exponential", exponential, (-1.0, 1.0), optimum=(_zeros, -1.0)),
        BenchmarkFn("dropwave", drop_wave, (-5.12, 5.12), optimum=(_zeros, -1.0)),
        BenchmarkFn("eggholder", egg_holder, (-512.0, 512.0)),
        BenchmarkFn("himmelblau", himmelblau, (-5.0, 5.0), 2, optimum=(_at(3.0, 2.0), 0.0)),
        BenchmarkFn("levy13", levy13, (-10.0, 10.0), 2, optimum=(_at(1.0, 1.0), 0.0)),
        BenchmarkFn("ackley01", ackley01, (-35.0, 35.0), optimum=(_zeros, 0.0)),
        BenchmarkFn("griewank", griewank, (-100.0, 100.0), optimum=(_zeros, 0.0)),
        BenchmarkFn("michalewicz", michalewicz, (0.0, np.pi), 2,
                    optimum=(_at(*MICHALEWICZ_2D_ARGMIN), MICHALEWICZ_2D_MIN)),
        BenchmarkFn("qing", qing, (-500.0, 500.0),
                    optimum=(lambda d: np.sqrt(np.arange(1.0, d + 1.0)), 0.0)),
        BenchmarkFn("salomon", salomon, (-100.0, 100.0), optimum=(_zeros, 0.0)),
        BenchmarkFn("zimmerman", zimmerman, (0.0, 100.0), 2),
        BenchmarkFn("rana", rana, (-500.0, 500.0)),
        BenchmarkFn("parsopoulos", parsopoulos, (-5.0, 5.0), 2,
                    optimum=(_at(np.pi / 2, 0.0), 0.0)),
    ]
}

ALIASES = {"matya": "matyas", "ackley": "ackley01", "threehumpcamel": "camel3",
           "camelthreehump": "camel3", "drop_wave": "dropwave", "egg_holder": "eggholder"}


def get_classical(name: str) -> BenchmarkFn:
    key = name.strip().lower()
    key = ALIASES.get(key, key)
    try:
        return CLASSICAL[key]
    except KeyError:
        raise KeyError(f"unknown benchmark {name!r}") from None


def eval_classical(name: str, x) -> float:
    return get_classical(name)(x)
