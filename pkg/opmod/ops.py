"""
モニック直交多項式系

擬定値なモーメント汎関数から次数ごとのブロック線形方程式でモニック OPS {𝐏_n} を構成し、
Gram 行列 H_n、三項関係の係数 B_{n,i}, C_{n,i}、Christoffel–Darboux 核を提供します。
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .backend import Backend, Matrix, Scalar
from .exceptions import SingularGram, SingularMomentMatrix
from .moments import MomentFunctional
from .multiindex import cumulative_size, rank_size, shift
from .polynomial import (
    VectorPolynomial,
    monomial_vector,
    multiply_by_variable,
    pad,
)

logger = logging.getLogger(__name__)


@dataclass
class OPSystem:
    """モニック OPS とその Gram 行列"""

    functional: MomentFunctional
    polynomials: List[VectorPolynomial]
    grams: List[Matrix]
    failed_degree: Optional[int] = None
    _gram_inverses: Dict[int, Matrix] = field(default_factory=dict, repr=False)
    _recurrence: Dict[Tuple[int, int], Tuple[Matrix, Matrix]] = field(
        default_factory=dict, repr=False
    )

    @property
    def backend(self) -> Backend:
        return self.functional.backend

    @property
    def dimension(self) -> int:
        return self.functional.dimension

    @property
    def max_degree(self) -> int:
        return len(self.polynomials) - 1

    def polynomial(self, n: int) -> VectorPolynomial:
        """𝐏_n"""
        self._require(n)
        return self.polynomials[n]

    def gram(self, n: int) -> Matrix:
        """H_n = ⟨u, 𝐏_n 𝐏_n^t⟩"""
        self._require(n)
        return self.grams[n]

    def gram_inverse(self, n: int) -> Matrix:
        """H_n^{-1}"""
        if n not in self._gram_inverses:
            self._gram_inverses[n] = self.backend.inv(self.gram(n))
        return self._gram_inverses[n]

    def coefficients(self, n: int, size_degree: Optional[int] = None) -> Matrix:
        """𝐏_n の係数行列（n < 0 は 0 行、size_degree まで零列で拡張）"""
        d = self.dimension
        width = cumulative_size(n if size_degree is None else size_degree, d)
        if n < 0:
            return self.backend.zeros(0, width)
        return pad(self.backend, self.polynomial(n).coefficients, width)

    def three_term(self, n: int, i: int) -> Tuple[Matrix, Matrix]:
        """(B_{n,i}, C_{n,i})"""
        key = (n, i)
        if key not in self._recurrence:
            self._recurrence[key] = _three_term(self, n, i)
        return self._recurrence[key]

    def evaluate(self, n: int, point: Sequence[Any]) -> Matrix:
        """𝐏_n(x)（r_n x 1）"""
        if n < 0:
            return self.backend.zeros(0, 1)
        return self.polynomial(n).evaluate(point)

    def kernel_vector(
        self, n: int, point: Sequence[Any], size_degree: Optional[int] = None
    ) -> Matrix:
        """K_n(ξ, ·) の係数行（1 x 𝐫_n）"""
        width_degree = n if size_degree is None else size_degree
        result = self.backend.zeros(1, cumulative_size(width_degree, self.dimension))
        for m in range(n + 1):
            weights = self.evaluate(m, point).T @ self.gram_inverse(m)
            result = result + weights @ self.coefficients(m, width_degree)
        return result

    def kernel(self, n: int, x: Sequence[Any], y: Sequence[Any]) -> Scalar:
        """K_n(u; x, y) = Σ_m 𝐏_m(x)^t H_m^{-1} 𝐏_m(y)"""
        total = self.backend.zero()
        for m in range(n + 1):
            value = self.evaluate(m, x).T @ self.gram_inverse(m) @ self.evaluate(m, y)
            total = total + value[0, 0]
        return total

    def _require(self, n: int) -> None:
        if 0 <= n <= self.max_degree:
            return
        if self.failed_degree is not None and n >= self.failed_degree:
            raise SingularGram(self.failed_degree)
        raise ValueError(f"OPS built through degree {self.max_degree}, degree {n} requested")


def build_monic_ops(u: MomentFunctional, max_degree: int, truncate: bool = False) -> OPSystem:
    """モーメント行列 𝐌_{n-1} に対する線形方程式でモニック OPS を構成

    Args:
        u: モーメント汎関数
        max_degree: 構成する最大次数 N
        truncate: True の場合、𝐌_k が特異なら次数 k-1 までで打ち切る

    Returns:
        OPSystem: 構成した OPS

    Raises:
        SingularMomentMatrix: 𝐌_k が特異（truncate=False の場合）
    """
    backend = u.backend
    d = u.dimension
    polynomials: List[VectorPolynomial] = []
    grams: List[Matrix] = []

    for n in range(max_degree + 1):
        if n == 0:
            coefficients = backend.eye(1)
        else:
            lower = cumulative_size(n - 1, d)
            rectangle = u.moment_rectangle(n - 1, n)
            rhs = -rectangle[:, lower : cumulative_size(n, d)]
            solution = backend.solve(u.moment_matrix(n - 1), rhs)
            coefficients = backend.hstack([solution.T, backend.eye(rank_size(n, d))])

        polynomial = VectorPolynomial(d, n, coefficients, backend)
        gram = u.pairing(coefficients, coefficients)
        # det 𝐌_n = det 𝐌_{n-1} det H_n
        if backend.is_singular(gram):
            logger.info("%s: moment matrix singular at degree %d", u.label, n)
            if truncate:
                return OPSystem(u, polynomials, grams, failed_degree=n)
            raise SingularMomentMatrix(n)

        logger.debug("%s: built degree %d", u.label, n)
        polynomials.append(polynomial)
        grams.append(gram)

    return OPSystem(u, polynomials, grams)


def _three_term(ops: OPSystem, n: int, i: int) -> Tuple[Matrix, Matrix]:
    backend = ops.backend
    d = ops.dimension
    coefficients = ops.coefficients(n)
    shifted = multiply_by_variable(backend, coefficients, d, i)
    b = ops.functional.pairing(shifted, coefficients) @ ops.gram_inverse(n)
    if n == 0:
        c = backend.zeros(rank_size(0, d), 0)
    else:
        c = ops.gram(n) @ shift(backend, n - 1, i, d).T @ ops.gram_inverse(n - 1)
    return b, c


def three_term_residual(ops: OPSystem, n: int, i: int) -> Matrix:
    """x_i 𝐏_n - L_{n,i} 𝐏_{n+1} - B_{n,i} 𝐏_n - C_{n,i} 𝐏_{n-1} の係数"""
    backend = ops.backend
    d = ops.dimension
    b, c = ops.three_term(n, i)
    shifted = multiply_by_variable(backend, ops.coefficients(n), d, i)
    return (
        shifted
        - shift(backend, n, i, d) @ ops.coefficients(n + 1)
        - b @ ops.coefficients(n, n + 1)
        - c @ ops.coefficients(n - 1, n + 1)
    )


@dataclass(frozen=True)
class RankVerdict:
    """三項関係の係数の階数条件"""

    degree: int
    variable_ranks: Tuple[int, ...]
    joint_rank: int
    expected_variable_rank: int
    expected_joint_rank: int

    @property
    def passed(self) -> bool:
        return (
            all(rank == self.expected_variable_rank for rank in self.variable_ranks)
            and self.joint_rank == self.expected_joint_rank
        )


def rank_conditions(ops: OPSystem, n: int) -> RankVerdict:
    """rank C_{n+1,i} = r_n と rank (C_{n+1,1} | ... | C_{n+1,d}) = r_{n+1}"""
    backend = ops.backend
    d = ops.dimension
    blocks = [ops.three_term(n + 1, i)[1] for i in range(1, d + 1)]
    return RankVerdict(
        degree=n,
        variable_ranks=tuple(backend.rank(block) for block in blocks),
        joint_rank=backend.rank(backend.hstack(blocks)),
        expected_variable_rank=rank_size(n, d),
        expected_joint_rank=rank_size(n + 1, d),
    )


def orthogonality_residual(ops: OPSystem, n: int) -> Matrix:
    """⟨u, 𝕏_{≤n-1} 𝐏_n^t⟩（0 であるべき）"""
    if n == 0:
        return ops.backend.zeros(0, 1)
    u = ops.functional
    return u.moment_rectangle(n - 1, n) @ ops.coefficients(n).T


def kernel_reproduction_residual(ops: OPSystem, n: int, point: Sequence[Any]) -> Matrix:
    """⟨u_y, K_n(x, y) 𝕏(y)^t⟩ - 𝕏(x)^t（0 であるべき）"""
    row = ops.kernel_vector(n, point)
    reproduced = row @ ops.functional.moment_matrix(n)
    return reproduced - monomial_vector(ops.backend, point, n).T
