"""
モーメント汎関数

多重指数 ν から μ_ν = ⟨u, x^ν⟩ を返すオラクルを包み、モーメントブロック 𝐦_{h,k}、
モーメント行列 𝐌_n、擬定値性の判定、多項式の左乗算と点質量の追加を提供します。
"""

import logging
import threading
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .backend import Backend, Matrix, Scalar
from .exceptions import (
    InconsistentSymmetry,
    InvalidModificationError,
    IrrationalMomentError,
    MissingMomentError,
    format_modification_errors,
)
from .multiindex import MultiIndex, add, degree, enumerate_indices
from .polynomial import Polynomial, degree_for_size, monomial_power, monomials

logger = logging.getLogger(__name__)

MomentOracle = Callable[[MultiIndex], Any]


@dataclass(frozen=True)
class QuasiDefiniteVerdict:
    """次数ごとの擬定値性の判定"""

    degree: int
    measure: Any
    quasi_definite: bool


class MomentFunctional:
    """モーメント汎関数 u

    モーメントはオラクルから一度だけ計算してキャッシュします（スレッド安全）。
    """

    def __init__(
        self,
        dimension: int,
        oracle: MomentOracle,
        backend: Backend,
        label: Optional[str] = None,
        centrally_symmetric: bool = False,
    ) -> None:
        if dimension < 1:
            raise ValueError(f"dimension must be at least 1, got {dimension}")
        self.dimension = dimension
        self.backend = backend
        self.label = label or "u"
        self.centrally_symmetric = centrally_symmetric
        self._oracle = oracle
        self._moments: Dict[MultiIndex, Scalar] = {}
        self._rectangles: Dict[Tuple[int, int], Matrix] = {}
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"MomentFunctional(label={self.label!r}, d={self.dimension}, {self.backend.name})"

    def moment(self, nu: MultiIndex) -> Scalar:
        """μ_ν"""
        nu = tuple(nu)
        cached = self._moments.get(nu)
        if cached is not None:
            return cached
        if len(nu) != self.dimension:
            raise ValueError(f"multi-index {nu} does not have {self.dimension} entries")

        with self._lock:
            if nu in self._moments:
                return self._moments[nu]
            raw = self._oracle(nu)
            try:
                value = self.backend.scalar(raw)
            except IrrationalMomentError:
                raise IrrationalMomentError(
                    raw, where=f"{self.label} moment {nu}", details={"index": str(nu)}
                ) from None
            if self.centrally_symmetric and degree(nu) % 2 and not self.backend.is_zero_scalar(
                value
            ):
                raise InconsistentSymmetry(
                    message=f"{self.label} is flagged centrally symmetric but μ{nu} ≠ 0",
                    moments_route=False,
                    details={"index": str(nu)},
                )
            self._moments[nu] = value
            return value

    def moment_rectangle(self, p: int, q: int) -> Matrix:
        """⟨u, 𝕏_{≤p} 𝕏_{≤q}^t⟩（𝐫_p x 𝐫_q）"""
        key = (p, q)
        cached = self._rectangles.get(key)
        if cached is not None:
            return cached

        rows = monomials(p, self.dimension)
        cols = monomials(q, self.dimension)
        result = self.backend.matrix(
            [[self.moment(add(nu, kappa)) for kappa in cols] for nu in rows], len(cols)
        )
        with self._lock:
            self._rectangles.setdefault(key, result)
        return self._rectangles[key]

    def moment_block(self, h: int, k: int) -> Matrix:
        """𝐦_{h,k} = ⟨u, 𝕏_h 𝕏_k^t⟩"""
        rows = enumerate_indices(h, self.dimension)
        cols = enumerate_indices(k, self.dimension)
        return self.backend.matrix(
            [[self.moment(add(nu, kappa)) for kappa in cols] for nu in rows], len(cols)
        )

    def moment_matrix(self, n: int) -> Matrix:
        """ブロック対称なモーメント行列 𝐌_n"""
        return self.moment_rectangle(n, n)

    def is_quasi_definite(self, n: int) -> List[QuasiDefiniteVerdict]:
        """次数 0..n の各 𝐌_k について擬定値性を判定"""
        verdicts = []
        for k in range(n + 1):
            matrix = self.moment_matrix(k)
            if self.backend.exact:
                measure = self.backend.det(matrix)
            else:
                measure = _smallest_singular_value(self.backend, matrix)
            verdict = QuasiDefiniteVerdict(
                degree=k, measure=measure, quasi_definite=not self.backend.is_singular(matrix)
            )
            logger.debug("%s: degree %d quasi-definite=%s", self.label, k, verdict.quasi_definite)
            verdicts.append(verdict)
        return verdicts

    def apply(self, p: Polynomial) -> Scalar:
        """⟨u, p⟩ = Σ a_ν μ_ν"""
        total = self.backend.zero()
        for nu, value in p.items():
            total = total + self.backend.scalar(value) * self.moment(tuple(nu))
        return total

    def pairing(self, a: Matrix, b: Matrix) -> Matrix:
        """係数行列 A, B で表した多項式ベクトルに対する ⟨u, P Q^t⟩ = A 𝐌 B^t"""
        p = degree_for_size(a.shape[1], self.dimension)
        q = degree_for_size(b.shape[1], self.dimension)
        return a @ self.moment_rectangle(p, q) @ b.T

    def left_multiply(self, q: Polynomial, label: Optional[str] = None) -> "MomentFunctional":
        """⟨q u, p⟩ = ⟨u, q p⟩ となる汎関数 q u"""
        terms = [(tuple(kappa), self.backend.scalar(value)) for kappa, value in q.items()]
        base = self

        def oracle(nu: MultiIndex) -> Scalar:
            total = base.backend.zero()
            for kappa, value in terms:
                total = total + value * base.moment(add(nu, kappa))
            return total

        return MomentFunctional(
            self.dimension, oracle, self.backend, label=label or f"q*{self.label}"
        )

    def add_point_masses(
        self,
        points: Sequence[Sequence[Any]],
        masses: Sequence[Any],
        label: Optional[str] = None,
    ) -> "MomentFunctional":
        """⟨v, p⟩ = ⟨u, p⟩ + Σ λ_i p(ξ_i)"""
        nodes, weights = validate_point_masses(self.backend, self.dimension, points, masses)
        base = self

        def oracle(nu: MultiIndex) -> Scalar:
            total = base.moment(nu)
            for node, weight in zip(nodes, weights):
                total = total + weight * monomial_power(node, nu, base.backend)
            return total

        symmetric = self.centrally_symmetric and _symmetric_masses(nodes, weights)
        return MomentFunctional(
            self.dimension,
            oracle,
            self.backend,
            label=label or f"{self.label}+masses",
            centrally_symmetric=symmetric,
        )

    def odd_moments_vanish(self, n: int) -> bool:
        """全次数が奇数のモーメントが次数 n まですべて 0 か"""
        for k in range(1, n + 1, 2):
            for nu in enumerate_indices(k, self.dimension):
                if not self.backend.is_zero_scalar(self.moment(nu)):
                    return False
        return True


def validate_point_masses(
    backend: Backend,
    dimension: int,
    points: Sequence[Sequence[Any]],
    masses: Sequence[Any],
) -> Tuple[List[Tuple[Scalar, ...]], List[Scalar]]:
    """点と質量を検証してバックエンドのスカラーに変換"""
    errors: List[InvalidModificationError] = []
    if len(points) != len(masses):
        raise InvalidModificationError(
            f"{len(points)} points but {len(masses)} masses", field="masses"
        )
    if not points:
        raise InvalidModificationError("at least one point mass is required", field="masses")

    nodes: List[Tuple[Scalar, ...]] = []
    weights: List[Scalar] = []
    for index, (point, mass) in enumerate(zip(points, masses)):
        if len(point) != dimension:
            errors.append(
                InvalidModificationError(
                    f"point {index} must have {dimension} coordinates",
                    field=f"masses[{index}].point",
                    value=list(point),
                )
            )
            continue
        node = tuple(backend.scalar(value) for value in point)
        weight = backend.scalar(mass)
        if node in nodes:
            errors.append(
                InvalidModificationError(
                    f"duplicate mass point {list(point)}",
                    field=f"masses[{index}].point",
                    value=list(point),
                )
            )
        if weight == 0:
            errors.append(
                InvalidModificationError(
                    "masses must be nonzero", field=f"masses[{index}].lambda", value=mass
                )
            )
        nodes.append(node)
        weights.append(weight)

    if errors:
        raise format_modification_errors(errors)
    return nodes, weights


def _symmetric_masses(nodes: Sequence[Tuple[Scalar, ...]], weights: Sequence[Scalar]) -> bool:
    """点質量の集まりが原点対称か"""
    table = dict(zip(nodes, weights))
    for node, weight in table.items():
        mirrored = tuple(-value for value in node)
        if table.get(mirrored) != weight:
            return False
    return True


def _smallest_singular_value(backend: Backend, matrix: Matrix) -> float:
    values = backend.to_numpy(matrix)
    if values.size == 0:
        return 0.0
    return float(np.linalg.svd(values, compute_uv=False)[-1])


def table_functional(
    dimension: int,
    moments: Dict[MultiIndex, Any],
    backend: Backend,
    fill: Optional[Any] = None,
    label: str = "table",
) -> MomentFunctional:
    """モーメント表から汎関数を作成（fill がなければ不足は MissingMomentError）"""
    table = {tuple(nu): value for nu, value in moments.items()}

    def oracle(nu: MultiIndex) -> Any:
        if nu in table:
            return table[nu]
        if fill is None:
            raise MissingMomentError(nu)
        return fill

    return MomentFunctional(dimension, oracle, backend, label=label)

