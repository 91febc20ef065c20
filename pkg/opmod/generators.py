"""
検証用インスタンスの生成

シードから決定的に有理数モーメントの汎関数、点質量、2 次の乗数を作ります。
モーメント μ_ν は numpy.random.default_rng([seed, attempt, *ν]) から引くため、
同じ (seed, ν) からは常に同じ値が得られます。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .backend import Backend, get_backend
from .christoffel import QuadraticMultiplier, christoffel_functional
from .exceptions import ConfigurationError, InvalidModificationError, SingularMomentMatrix
from .moments import MomentFunctional
from .multiindex import MultiIndex, degree, rank_size
from .ops import OPSystem, build_monic_ops
from .uvarov import UvarovSystem

logger = logging.getLogger(__name__)

NUMERATOR_RANGE = (-4, 5)
DENOMINATOR_RANGE = (1, 5)
MAX_ATTEMPTS = 50

_MASS_STREAM = 10_000_001
_MULTIPLIER_STREAM = 10_000_002


def _check_seed(seed: int) -> None:
    if seed < 0:
        raise ConfigurationError(f"seed must be non-negative, got {seed}", option="seed")


def random_rational(rng: np.random.Generator, nonzero: bool = False) -> Fraction:
    """小さな分子・分母の有理数"""
    while True:
        value = Fraction(int(rng.integers(*NUMERATOR_RANGE)), int(rng.integers(*DENOMINATOR_RANGE)))
        if value or not nonzero:
            return value


def random_functional(
    seed: int, d: int, backend: Optional[Backend] = None, attempt: int = 0
) -> MomentFunctional:
    """μ_0 = 1、それ以外は乱数の有理数モーメント"""
    _check_seed(seed)
    backend = backend or get_backend("exact")

    def oracle(nu: MultiIndex) -> Fraction:
        if degree(nu) == 0:
            return Fraction(1)
        return random_rational(np.random.default_rng([seed, attempt, *nu]))

    return MomentFunctional(d, oracle, backend, label=f"random(seed={seed},attempt={attempt})")


def random_quasi_definite_functional(
    seed: int,
    d: int,
    max_degree: int,
    backend: Optional[Backend] = None,
    max_attempts: int = MAX_ATTEMPTS,
) -> Tuple[MomentFunctional, OPSystem]:
    """次数 max_degree まで擬定値になるまで引き直す

    Returns:
        Tuple[MomentFunctional, OPSystem]: 汎関数とそのモニック OPS

    Raises:
        ConfigurationError: max_attempts 回で見つからない
    """
    for attempt in range(max_attempts):
        u = random_functional(seed, d, backend, attempt)
        try:
            ops = build_monic_ops(u, max_degree)
        except SingularMomentMatrix as error:
            logger.debug("seed %d attempt %d singular at degree %s", seed, attempt, error.degree)
            continue
        return u, ops
    raise ConfigurationError(
        f"no quasi-definite functional for seed {seed} after {max_attempts} attempts",
        option="seed",
    )


@dataclass
class UvarovInstance:
    """乱数で作った Uvarov 変形の例"""

    seed: int
    ops: OPSystem
    system: UvarovSystem

    @property
    def functional(self) -> MomentFunctional:
        return self.ops.functional


def _random_points(
    rng: np.random.Generator, d: int, count: int
) -> Tuple[List[Tuple[Fraction, ...]], List[Fraction]]:
    points: List[Tuple[Fraction, ...]] = []
    while len(points) < count:
        point = tuple(random_rational(rng) for _ in range(d))
        if point not in points:
            points.append(point)
    masses = [random_rational(rng, nonzero=True) for _ in range(count)]
    return points, masses


def random_uvarov_instance(
    seed: int,
    d: int = 2,
    max_degree: int = 4,
    masses: int = 1,
    backend: Optional[Backend] = None,
    max_attempts: int = MAX_ATTEMPTS,
) -> UvarovInstance:
    """判定をすべて通る点質量つきの例（I + Λ𝒦_{max_degree} の可逆性も確認）"""
    if masses < 1:
        raise ConfigurationError("at least one point mass is required", option="masses")
    _, ops = random_quasi_definite_functional(seed, d, max_degree, backend, max_attempts)
    for attempt in range(max_attempts):
        rng = np.random.default_rng([seed, attempt, _MASS_STREAM])
        points, weights = _random_points(rng, d, masses)
        system = UvarovSystem.create(ops, points, weights)
        if system.first_failure(max_degree) is not None:
            continue
        if ops.backend.det_negligible(system.system_matrix(max_degree)):
            continue
        logger.debug("seed %d: %d masses after %d attempts", seed, masses, attempt + 1)
        return UvarovInstance(seed, ops, system)
    raise ConfigurationError(
        f"no certified point masses for seed {seed} after {max_attempts} attempts",
        option="seed",
    )


@dataclass
class ChristoffelPair:
    """u と v = λu の OPS の組"""

    seed: int
    multiplier: QuadraticMultiplier
    u_ops: OPSystem
    v_ops: OPSystem

    @property
    def u(self) -> MomentFunctional:
        return self.u_ops.functional

    @property
    def v(self) -> MomentFunctional:
        return self.v_ops.functional


def random_multiplier(
    rng: np.random.Generator, backend: Backend, d: int
) -> QuadraticMultiplier:
    """ちょうど 2 次の乗数"""
    a2: Sequence[Fraction] = [Fraction(0)]
    while not any(a2):
        a2 = [random_rational(rng) for _ in range(rank_size(2, d))]
    a1 = [random_rational(rng) for _ in range(d)]
    return QuadraticMultiplier.create(backend, d, a2, a1, random_rational(rng))


def christoffel_pair(
    u_ops: OPSystem, multiplier: QuadraticMultiplier, max_degree: int, seed: int = -1
) -> ChristoffelPair:
    """既知の u と λ から組を作成（v が擬定値でなければ SingularMomentMatrix）"""
    v = christoffel_functional(u_ops.functional, multiplier, label="v")
    v_ops = build_monic_ops(v, max_degree)
    return ChristoffelPair(seed, multiplier, u_ops, v_ops)


def random_christoffel_pair(
    seed: int,
    d: int = 2,
    max_degree: int = 4,
    backend: Optional[Backend] = None,
    max_attempts: int = MAX_ATTEMPTS,
) -> ChristoffelPair:
    """u と v がともに次数 max_degree まで擬定値となる組"""
    u, u_ops = random_quasi_definite_functional(seed, d, max_degree, backend, max_attempts)
    for attempt in range(max_attempts):
        rng = np.random.default_rng([seed, attempt, _MULTIPLIER_STREAM])
        multiplier = random_multiplier(rng, u.backend, d)
        try:
            return christoffel_pair(u_ops, multiplier, max_degree, seed)
        except (InvalidModificationError, SingularMomentMatrix) as error:
            logger.debug("seed %d attempt %d rejected: %s", seed, attempt, error.message)
    raise ConfigurationError(
        f"no quasi-definite Christoffel pair for seed {seed} after {max_attempts} attempts",
        option="seed",
    )
