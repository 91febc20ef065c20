"""
数値実験

球の点質量つき汎関数の漸近挙動、隣接族の関係、Bessel–Laguerre の λ_n の表を作ります。
実験は名前で登録し、CLI の experiment サブコマンドから呼び出します。
"""

import inspect
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence

from .backend import get_backend
from .exceptions import ConfigurationError, UnknownExperimentError
from .families.ball import (
    adjacent_residual,
    default_degrees,
    interior_rows,
    is_monotone,
    mass_limit_rows,
)
from .families.bessel_laguerre import BesselLaguerreUvarov
from .report import Table
from .verification import INTERIOR_LIMIT_TOLERANCE, MASS_LIMIT_TOLERANCE

logger = logging.getLogger(__name__)

ADJACENT_TOLERANCE = 1e-12


@dataclass
class ExperimentResult:
    """実験の表と合否"""

    name: str
    tables: List[Table] = field(default_factory=list)
    passed: bool = True


ExperimentFunc = Callable[..., ExperimentResult]

EXPERIMENTS: Dict[str, ExperimentFunc] = {}


def experiment(name: str) -> Callable[[ExperimentFunc], ExperimentFunc]:
    """実験を登録するデコレータ"""

    def decorator(func: ExperimentFunc) -> ExperimentFunc:
        EXPERIMENTS[name] = func
        return func

    return decorator


def _degrees(n_max: int) -> List[int]:
    degrees = default_degrees(n_max)
    if n_max >= 200:
        degrees = sorted(set(degrees) | {50, 100, 200})
    return degrees


@experiment("ball-mass-limit")
def ball_mass_limit(
    mu: float = 0.5,
    d: int = 2,
    masses: Sequence[float] = (0.5, 1.0, 2.0),
    n_max: int = 200,
) -> ExperimentResult:
    """原点に質量 λ を置いた球の汎関数で K_n(v;0,0) → 1/λ"""
    result = ExperimentResult("ball-mass-limit")
    for mass in masses:
        rows = mass_limit_rows(float(mu), d, float(mass), _degrees(n_max))
        table = Table(f"mass_{float(mass):g}", ["n", "kernel_origin", "inverse_mass", "rel_err"])
        for row in rows:
            table.add(*row)
        result.tables.append(table)
        errors = [row[3] for row in rows]
        ok = errors[-1] < MASS_LIMIT_TOLERANCE and is_monotone(errors)
        if not ok:
            logger.warning("mass %g: relative error %g at n=%d", mass, errors[-1], rows[-1][0])
        result.passed = result.passed and ok
    return result


@experiment("ball-interior")
def ball_interior(
    mu: float = 0.5,
    d: int = 2,
    mass: float = 1.0,
    radius: float = 0.5,
    n_max: int = 200,
) -> ExperimentResult:
    """内部の点での K_n(v;x,x)/C(n+d,d) の極限"""
    rows = interior_rows(float(mu), d, float(mass), float(radius), _degrees(n_max))
    table = Table("interior", ["n", "ratio", "limit", "rel_err"])
    for row in rows:
        table.add(*row)
    passed = rows[-1][3] < INTERIOR_LIMIT_TOLERANCE
    if not passed:
        logger.warning("interior: relative error %g at n=%d", rows[-1][3], rows[-1][0])
    return ExperimentResult("ball-interior", [table], passed)


@experiment("adjacent")
def adjacent(mu: Any = 0.5, max_degree: int = 6) -> ExperimentResult:
    """μ と μ+1 の円板の基底を結ぶ二項関係の残差"""
    backend = get_backend("float")
    table = Table("adjacent", ["n", "residual"])
    passed = True
    for n in range(max_degree + 1):
        residual = backend.magnitude(adjacent_residual(backend, mu, n))
        table.add(n, residual)
        passed = passed and residual < ADJACENT_TOLERANCE
    return ExperimentResult("adjacent", [table], passed)


@experiment("bessel-laguerre-lambda")
def bessel_laguerre_lambda(
    g: Any = 1, gamma: Any = 2, mass: Any = 1, max_degree: int = 8
) -> ExperimentResult:
    """原点質量つき Bessel–Laguerre 汎関数の λ_n と擬定値性の判定"""
    backend = get_backend("exact")
    closed = BesselLaguerreUvarov.create(backend, g, gamma, mass, max_degree)
    table = Table("lambda", ["n", "lambda_n", "quasi_definite"])
    previous = True
    for n, value, nonzero in closed.lambda_table(max_degree):
        table.add(n, backend.format(value), previous and nonzero)
        previous = nonzero
    return ExperimentResult("bessel-laguerre-lambda", [table], True)


def available_experiments() -> List[str]:
    return sorted(EXPERIMENTS)


def run_experiment(name: str, **params: Any) -> ExperimentResult:
    """名前で実験を実行

    Raises:
        UnknownExperimentError: 未登録の名前
        ConfigurationError: 実験が受け取らないパラメータ
    """
    if name not in EXPERIMENTS:
        raise UnknownExperimentError(name, available=available_experiments())
    func = EXPERIMENTS[name]
    accepted = inspect.signature(func).parameters
    unknown = sorted(set(params) - set(accepted))
    if unknown:
        raise ConfigurationError(
            f"experiment '{name}' does not take {', '.join(unknown)}", option=unknown[0]
        )
    logger.info("running experiment %s", name)
    return func(**params)
