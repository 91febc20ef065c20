"""
Uvarov 変形

点質量を加えた汎関数 v = u + Σ λ_i δ_{ξ_i} について、u の OPS から
接続公式で ℚ_n、変形 Gram 行列 Ĥ_n とその逆行列、変形核を計算し、
I_N + Λ𝒦_{n-1} と Ĥ_n の可逆性を次数ごとに判定します。
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .backend import Backend, Matrix, Scalar
from .exceptions import NotQuasiDefinite
from .moments import MomentFunctional, validate_point_masses
from .multiindex import cumulative_size
from .ops import OPSystem
from .polynomial import VectorPolynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class UvarovSpec:
    """質量点 ξ_i と質量 λ_i"""

    points: Tuple[Tuple[Scalar, ...], ...]
    masses: Tuple[Scalar, ...]

    @classmethod
    def create(
        cls,
        backend: Backend,
        dimension: int,
        points: Sequence[Sequence[Any]],
        masses: Sequence[Any],
    ) -> "UvarovSpec":
        """検証してバックエンドのスカラーで作成"""
        nodes, weights = validate_point_masses(backend, dimension, points, masses)
        return cls(points=tuple(nodes), masses=tuple(weights))

    @property
    def size(self) -> int:
        return len(self.points)

    def weights(self, backend: Backend) -> Matrix:
        """Λ = diag(λ_i)"""
        return backend.diag(self.masses)


@dataclass(frozen=True)
class CertificateVerdict:
    """次数 n の可逆性判定

    determinant は det(I_N + Λ𝒦_{n-1})。gram_invertible は Ĥ_n の可逆性で、
    前者が失敗した場合は None。
    """

    degree: int
    determinant: Scalar
    resolvent_invertible: bool
    gram_invertible: Optional[bool]

    @property
    def passed(self) -> bool:
        return self.resolvent_invertible and bool(self.gram_invertible)


class UvarovSystem:
    """u の OPS と点質量から v の OPS を組み立てる"""

    def __init__(self, ops: OPSystem, spec: UvarovSpec) -> None:
        self.ops = ops
        self.spec = spec
        self.backend = ops.backend
        self.dimension = ops.dimension
        self._lambda = spec.weights(self.backend)
        self._evaluations: Dict[int, Matrix] = {}
        self._kernel_matrices: Dict[int, Matrix] = {}
        self._resolvents: Dict[int, Matrix] = {}
        self._verdicts: Dict[int, CertificateVerdict] = {}

    @classmethod
    def create(
        cls, ops: OPSystem, points: Sequence[Sequence[Any]], masses: Sequence[Any]
    ) -> "UvarovSystem":
        spec = UvarovSpec.create(ops.backend, ops.dimension, points, masses)
        return cls(ops, spec)

    def modified_functional(self) -> MomentFunctional:
        """v = u + Σ λ_i δ_{ξ_i}"""
        return self.ops.functional.add_point_masses(
            self.spec.points, self.spec.masses, label=f"{self.ops.functional.label}+masses"
        )

    # --- 行列 ---

    def evaluation_matrix(self, n: int) -> Matrix:
        """𝖯_n(ξ) = (𝐏_n(ξ_1) | ... | 𝐏_n(ξ_N))（r_n x N）"""
        if n not in self._evaluations:
            columns = [self.ops.evaluate(n, point) for point in self.spec.points]
            self._evaluations[n] = self.backend.hstack(columns)
        return self._evaluations[n]

    def kernel_matrix(self, n: int) -> Matrix:
        """𝒦_n = (K_n(u; ξ_i, ξ_j))（N x N、𝒦_{-1} = 0）"""
        if n not in self._kernel_matrices:
            points = self.spec.points
            self._kernel_matrices[n] = self.backend.matrix(
                [[self.ops.kernel(n, x, y) for y in points] for x in points], len(points)
            )
        return self._kernel_matrices[n]

    def kernel_vectors(self, n: int, size_degree: Optional[int] = None) -> Matrix:
        """𝖪_n(ξ, ·) の係数（N x 𝐫_n、各行が K_n(ξ_i, ·)）"""
        width_degree = n if size_degree is None else size_degree
        if n < 0:
            width = cumulative_size(width_degree, self.dimension)
            return self.backend.zeros(self.spec.size, width)
        rows = [self.ops.kernel_vector(n, point, width_degree) for point in self.spec.points]
        return self.backend.vstack(rows)

    def kernel_column(self, n: int, x: Sequence[Any]) -> Matrix:
        """𝖪_n(ξ, x)（N x 1）"""
        return self.backend.column([self.ops.kernel(n, point, x) for point in self.spec.points])

    def system_matrix(self, n: int) -> Matrix:
        """I_N + Λ𝒦_n"""
        return self.backend.eye(self.spec.size) + self._lambda @ self.kernel_matrix(n)

    def resolvent(self, n: int) -> Matrix:
        """(I_N + Λ𝒦_n)^{-1} Λ"""
        if n not in self._resolvents:
            self._resolvents[n] = self.backend.solve(self.system_matrix(n), self._lambda)
        return self._resolvents[n]

    # --- 判定 ---

    def certificate(self, n: int) -> CertificateVerdict:
        """次数 n の判定（I_N + Λ𝒦_{n-1} と Ĥ_n）"""
        if n in self._verdicts:
            return self._verdicts[n]

        backend = self.backend
        matrix = self.system_matrix(n - 1)
        determinant = backend.det(matrix)
        resolvent_ok = not backend.det_negligible(matrix)
        gram_ok: Optional[bool] = None
        if resolvent_ok:
            gram_ok = not backend.is_singular(self._gram_formula(n))

        verdict = CertificateVerdict(n, determinant, resolvent_ok, gram_ok)
        if not verdict.passed:
            logger.warning(
                "degree %d: I+ΛK invertible=%s, modified Gram invertible=%s",
                n,
                resolvent_ok,
                gram_ok,
            )
        self._verdicts[n] = verdict
        return verdict

    def certify(self, max_degree: int) -> List[CertificateVerdict]:
        """次数 0..max_degree の判定"""
        return [self.certificate(n) for n in range(max_degree + 1)]

    def first_failure(self, max_degree: int) -> Optional[int]:
        """最初に判定に失敗した次数（なければ None）"""
        for verdict in self.certify(max_degree):
            if not verdict.passed:
                return verdict.degree
        return None

    def _require_resolvent(self, n: int) -> None:
        """I_N + Λ𝒦_{k-1}（k ≤ n）がすべて可逆であることを確認"""
        for k in range(n + 1):
            if not self.certificate(k).resolvent_invertible:
                raise NotQuasiDefinite(
                    k, message=f"I + ΛK_{k - 1} is singular", details={"matrix": "resolvent"}
                )

    # --- 接続公式 ---

    def connect(self, n: int) -> VectorPolynomial:
        """ℚ_n = 𝐏_n - 𝖯_n(ξ)(I_N + Λ𝒦_{n-1})^{-1}Λ𝖪_{n-1}(ξ, ·)"""
        self._require_resolvent(n)
        weights = self.evaluation_matrix(n) @ self.resolvent(n - 1)
        correction = weights @ self.kernel_vectors(n - 1, n)
        coefficients = self.ops.coefficients(n) - correction
        return VectorPolynomial(self.dimension, n, coefficients, self.backend)

    def _gram_formula(self, n: int) -> Matrix:
        evaluation = self.evaluation_matrix(n)
        return self.ops.gram(n) + evaluation @ self.resolvent(n - 1) @ evaluation.T

    def modified_gram(self, n: int) -> Matrix:
        """Ĥ_n = H_n + 𝖯_n(ξ)(I_N + Λ𝒦_{n-1})^{-1}Λ𝖯_n^t(ξ)"""
        self._require_resolvent(n)
        return self._gram_formula(n)

    def modified_gram_inverse(self, n: int) -> Matrix:
        """Ĥ_n^{-1} = H_n^{-1} - H_n^{-1}𝖯_n(ξ)(I_N + Λ𝒦_n)^{-1}Λ𝖯_n^t(ξ)H_n^{-1}"""
        self._require_resolvent(n)
        # 𝒦_n を使うため次数 n+1 の行列も可逆である必要がある
        if self.backend.det_negligible(self.system_matrix(n)):
            raise NotQuasiDefinite(n, message=f"I + ΛK_{n} is singular")
        inverse = self.ops.gram_inverse(n)
        evaluation = self.evaluation_matrix(n)
        return inverse - inverse @ evaluation @ self.resolvent(n) @ evaluation.T @ inverse

    def modified_kernel(self, n: int, x: Sequence[Any], y: Sequence[Any]) -> Scalar:
        """K_n(v; x, y) = K_n(u; x, y) - 𝖪_n^t(ξ, x)(I_N + Λ𝒦_n)^{-1}Λ𝖪_n(ξ, y)"""
        self._require_resolvent(n)
        if self.backend.det_negligible(self.system_matrix(n)):
            raise NotQuasiDefinite(n, message=f"I + ΛK_{n} is singular")
        correction = self.kernel_column(n, x).T @ self.resolvent(n) @ self.kernel_column(n, y)
        return self.ops.kernel(n, x, y) - correction[0, 0]

    # --- 恒等式 ---

    def telescoping_residual(self, n: int) -> Matrix:
        """𝖯_n^t(ξ)H_n^{-1}𝐏_n - (𝖪_n(ξ, ·) - 𝖪_{n-1}(ξ, ·)) の係数"""
        weights = self.evaluation_matrix(n).T @ self.ops.gram_inverse(n)
        increment = weights @ self.ops.coefficients(n)
        return increment - (self.kernel_vectors(n) - self.kernel_vectors(n - 1, n))

    def kernel_matrix_residual(self, n: int) -> Matrix:
        """𝖯_n^t(ξ)H_n^{-1}𝖯_n(ξ) - (𝒦_n - 𝒦_{n-1})"""
        evaluation = self.evaluation_matrix(n)
        increment = evaluation.T @ self.ops.gram_inverse(n) @ evaluation
        return increment - (self.kernel_matrix(n) - self.kernel_matrix(n - 1))

    def resolvent_symmetry_residual(self, n: int) -> Matrix:
        """(I_N + Λ𝒦_n)^{-1}Λ - その転置"""
        resolvent = self.resolvent(n)
        return resolvent - resolvent.T
