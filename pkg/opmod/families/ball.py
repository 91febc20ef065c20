"""
単位球上の古典族

重み (1-‖x‖²)^{μ-1/2}（μ_0 = 1 に正規化）のモーメント、d = 2 の明示的な正規直交基底、
隣接族 μ と μ+1 の関係、原点での核の閉じた形、原点に質量を加えた Uvarov 変形と
その漸近挙動を提供します。
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy import special

from ..backend import Backend, ExactBackend, Matrix, Scalar
from ..exceptions import InadmissibleParameters, MassDegenerate
from ..moments import MomentFunctional
from ..multiindex import MultiIndex, cumulative_size, rank_size, shift
from ..ops import OPSystem
from ..polynomial import coefficient_row, pad

logger = logging.getLogger(__name__)

_EXACT = ExactBackend()
_X, _Y, _T = sympy.symbols("x y t")


def check_ball_parameters(mu: Any, d: int) -> None:
    """μ > -1/2、d ≥ 1"""
    if d < 1:
        raise InadmissibleParameters(f"dimension must be at least 1, got {d}", family="ball")
    if _EXACT.scalar(mu) <= sympy.Rational(-1, 2):
        raise InadmissibleParameters(f"ball parameter μ = {mu} must exceed -1/2", family="ball")


def ball_moment(backend: Backend, d: int, mu: Any, nu: MultiIndex) -> Scalar:
    """⟨u_μ, x^ν⟩（奇数の指数があれば 0、ν = 2α なら Π(1/2)_{α_i} / (μ+(d+1)/2)_{|α|}）"""
    if any(exponent % 2 for exponent in nu):
        return backend.zero()
    half = [exponent // 2 for exponent in nu]
    value = backend.one()
    for alpha in half:
        value = value * backend.rising(backend.scalar("1/2"), alpha)
    shifted = backend.scalar(mu) + backend.scalar(d + 1) / 2
    return value / backend.rising(shifted, sum(half))


def ball_functional(backend: Backend, d: int, mu: Any) -> MomentFunctional:
    """中心対称な正定値汎関数 u_μ"""
    check_ball_parameters(mu, d)
    return MomentFunctional(
        d,
        lambda nu: ball_moment(backend, d, mu, nu),
        backend,
        label=f"ball(d={d},mu={mu})",
        centrally_symmetric=True,
    )


# --- 明示的な基底 ---


def basis_norm_squared(mu: Any, d: int, j: int, n: int) -> sympy.Rational:
    """h_{j,n}(μ)^2（厳密な有理数）"""
    mu = _EXACT.scalar(mu)
    half_d = sympy.Rational(d, 2)
    shifted = mu + sympy.Rational(d - 1, 2)
    numerator = (
        _EXACT.rising(mu + sympy.Rational(1, 2), j)
        * _EXACT.rising(half_d, n - j)
        * (n - j + shifted)
    )
    denominator = sympy.factorial(j) * _EXACT.rising(mu + half_d + sympy.Rational(1, 2), n - j)
    return numerator / (denominator * (n + shifted))


def harmonic_dimension(ell: int, d: int) -> int:
    """次数 ℓ の球面調和関数の空間の次元"""
    if d == 1:
        return 1 if ell <= 1 else 0
    lower = math.comb(ell + d - 3, ell - 2) if ell >= 2 else 0
    return math.comb(ell + d - 1, ell) - lower


def disk_basis_index(n: int) -> List[Tuple[int, int]]:
    """次数 n の (j, k) の並び（j の降順、各 j で k = 1, 2）"""
    result = []
    for j in range(n // 2, -1, -1):
        result.append((j, 1))
        if n - 2 * j >= 1:
            result.append((j, 2))
    return result


def _harmonic_sum(m: int, k: int, x: Any, y: Any, zero: Any) -> Any:
    """Re (k = 1) または Im (k = 2) of (x + iy)^m"""
    if m == 0:
        return zero + 1
    total = zero
    for t in range(m + 1):
        if (t % 2 == 0) != (k == 1):
            continue
        sign = -1 if (t // 2) % 2 else 1
        total = total + sign * math.comb(m, t) * x ** (m - t) * y**t
    return total


def _harmonic(m: int, k: int) -> sympy.Expr:
    """r^m cos(mθ)（k = 1）または r^m sin(mθ)（k = 2）"""
    return sympy.expand(_harmonic_sum(m, k, _X, _Y, sympy.Integer(0)))


def _harmonic_value(backend: Backend, m: int, k: int, point: Sequence[Any]) -> Scalar:
    x, y = (backend.scalar(value) for value in point)
    return _harmonic_sum(m, k, x, y, backend.zero())


def _scale(mu: Any, j: int, n: int) -> sympy.Expr:
    m = n - 2 * j
    factor = 1 if m == 0 else 2
    return sympy.sqrt(sympy.Integer(factor) / basis_norm_squared(mu, 2, j, n))


def disk_basis_coefficients(backend: Backend, mu: Any, n: int) -> Matrix:
    """d = 2 の正規直交基底 {P^n_{j,k}} の係数行列（r_n x 𝐫_n、disk_basis_index の順）"""
    check_ball_parameters(mu, 2)
    alpha = _EXACT.scalar(mu) - sympy.Rational(1, 2)
    rows = []
    for j, k in disk_basis_index(n):
        m = n - 2 * j
        radial = sympy.jacobi_poly(j, alpha, m, _T).subs(_T, 2 * (_X**2 + _Y**2) - 1)
        poly = sympy.Poly(sympy.expand(radial * _harmonic(m, k)), _X, _Y)
        terms = {monomial: value for monomial, value in poly.terms()}
        row = coefficient_row(backend, terms, 2, n)
        rows.append(row * backend.scalar(_scale(mu, j, n)))
    return backend.vstack(rows)


def disk_basis_eval(
    backend: Backend, mu: Any, n: int, j: int, k: int, point: Sequence[Any]
) -> Scalar:
    """P^n_{j,k}(x; μ) = h_{j,n}^{-1} P_j^{(μ-1/2, n-2j)}(2‖x‖²-1) Y_k^{n-2j}(x)"""
    m = n - 2 * j
    if m < 0 or k not in (1, 2) or (m == 0 and k == 2):
        raise ValueError(f"no disk basis element (n={n}, j={j}, k={k})")
    x, y = (backend.scalar(value) for value in point)
    t = 2 * (x * x + y * y) - 1
    radial = backend.jacobi(j, backend.scalar(mu) - backend.scalar("1/2"), m, t)
    return backend.scalar(_scale(mu, j, n)) * radial * _harmonic_value(backend, m, k, point)


# --- 隣接族 ---


def adjacent_coefficients(
    backend: Backend, mu: Any, n: int, d: int = 2
) -> Tuple[List[Scalar], List[Scalar]]:
    """P^n_{j,k}(μ) = a_j^n P^n_{j,k}(μ+1) - b_j^n P^{n-2}_{j-1,k}(μ+1) の (a_j^n, b_j^n)"""
    mu_exact = _EXACT.scalar(mu)
    offset = mu_exact + sympy.Rational(d - 1, 2)
    a_values, b_values = [], []
    for j in range(n // 2 + 1):
        h = sympy.sqrt(basis_norm_squared(mu_exact, d, j, n))
        h_next = sympy.sqrt(basis_norm_squared(mu_exact + 1, d, j, n))
        a_values.append(backend.scalar(h_next / h * (n - j + offset) / (n + offset)))
        if j == 0:
            b_values.append(backend.zero())
            continue
        h_lower = sympy.sqrt(basis_norm_squared(mu_exact + 1, d, j - 1, n - 2))
        ratio = (n - j - 1 + sympy.Rational(d, 2)) / (n + offset)
        b_values.append(backend.scalar(h_lower / h * ratio))
    return a_values, b_values


def adjacent_relation(backend: Backend, mu: Any, n: int) -> Tuple[Matrix, Matrix]:
    """𝐏_n^{(μ)} = F_n 𝐏_n^{(μ+1)} + N_n 𝐏_{n-2}^{(μ+1)} の (F_n, N_n)（d = 2）"""
    a_values, b_values = adjacent_coefficients(backend, mu, n)
    index = disk_basis_index(n)
    f = backend.diag([a_values[j] for j, _ in index])
    if n < 2:
        return f, backend.zeros(rank_size(n, 2), rank_size(n - 2, 2))
    lower = disk_basis_index(n - 2)
    embed = shift(backend, n - 1, 1, 2).T @ shift(backend, n - 2, 1, 2).T
    weights = backend.diag([b_values[j + 1] for j, _ in lower])
    return f, -embed @ weights


def adjacent_residual(backend: Backend, mu: Any, n: int) -> Matrix:
    """𝐏_n^{(μ)} - F_n 𝐏_n^{(μ+1)} - N_n 𝐏_{n-2}^{(μ+1)} の係数"""
    f, nn = adjacent_relation(backend, mu, n)
    mu_next = _EXACT.scalar(mu) + 1
    upper = disk_basis_coefficients(backend, mu_next, n)
    residual = disk_basis_coefficients(backend, mu, n) - f @ upper
    if n >= 2:
        lower = disk_basis_coefficients(backend, mu_next, n - 2)
        residual = residual - nn @ pad(backend, lower, cumulative_size(n, 2))
    return residual


# --- 原点での核 ---


def kernel_origin_ratio(backend: Backend, mu: Any, d: int, m: int) -> Scalar:
    """(μ+(d+1)/2)_m / (μ+1/2)_m"""
    mu = backend.scalar(mu)
    return backend.rising(mu + backend.scalar(d + 1) / 2, m) / backend.rising(
        mu + backend.scalar("1/2"), m
    )


def ball_kernel_origin(backend: Backend, mu: Any, d: int, n: int, point: Sequence[Any]) -> Scalar:
    """K_n(u_μ; x, 0) = ratio · P_{⌊n/2⌋}^{(d/2, μ-1/2)}(1 - 2‖x‖²)"""
    m = n // 2
    r2 = sum(backend.scalar(value) ** 2 for value in point)
    jacobi = backend.jacobi(
        m, backend.scalar(d) / 2, backend.scalar(mu) - backend.scalar("1/2"), 1 - 2 * r2
    )
    return kernel_origin_ratio(backend, mu, d, m) * jacobi


def ball_kernel_at_origin(backend: Backend, mu: Any, d: int, n: int) -> Scalar:
    """K_n(u_μ; 0, 0) = ratio · C(⌊n/2⌋ + d/2, ⌊n/2⌋)"""
    if n < 0:
        return backend.zero()
    m = n // 2
    return kernel_origin_ratio(backend, mu, d, m) * backend.binomial(
        backend.scalar(d) / 2 + m, m
    )


def _kernel_origin_row(mu: Any, n: int) -> Dict[MultiIndex, sympy.Rational]:
    """K_n(u_μ; x, 0) の係数（d = 2）"""
    m = n // 2
    ratio = kernel_origin_ratio(_EXACT, mu, 2, m)
    beta = _EXACT.scalar(mu) - sympy.Rational(1, 2)
    expression = sympy.jacobi_poly(m, 1, beta, _T).subs(_T, 1 - 2 * (_X**2 + _Y**2))
    poly = sympy.Poly(sympy.expand(ratio * expression), _X, _Y)
    return {monomial: value for monomial, value in poly.terms()}


# --- 原点への質量 ---


@dataclass(frozen=True)
class BallUvarov:
    """u_μ + λδ_0 の閉じた形"""

    backend: Backend
    mu: Any
    dimension: int
    mass: Scalar

    @classmethod
    def create(cls, backend: Backend, mu: Any, d: int, mass: Any) -> "BallUvarov":
        check_ball_parameters(mu, d)
        return cls(backend, mu, d, backend.scalar(mass))

    def denominator(self, n: int) -> Scalar:
        """1 + λK_n(u_μ; 0, 0)"""
        value = 1 + self.mass * ball_kernel_at_origin(self.backend, self.mu, self.dimension, n)
        if self.backend.is_zero_scalar(value):
            raise MassDegenerate(n + 1, message=f"1 + λK_{n}(0,0) vanishes")
        return value

    def radial_value_at_origin(self, n: int) -> Scalar:
        """P^n_{n/2,1}(0)（n 偶数、それ以外は 0）"""
        backend = self.backend
        if n % 2:
            return backend.zero()
        j = n // 2
        scale = backend.scalar(sympy.sqrt(1 / basis_norm_squared(self.mu, self.dimension, j, n)))
        alpha = backend.scalar(self.mu) - backend.scalar("1/2")
        beta = backend.scalar(self.dimension - 2) / 2
        return scale * backend.jacobi(j, alpha, beta, -1)

    def a(self, n: int) -> Scalar:
        """a_n = λP^n_{⌊n/2⌋,1}(0) / (1 + λK_{n-1}(0,0))"""
        if n % 2:
            return self.backend.zero()
        return self.mass * self.radial_value_at_origin(n) / self.denominator(n - 1)

    def b(self, n: int) -> Scalar:
        """b_n = λ ratio² / (1 + λK_n(0,0))"""
        ratio = kernel_origin_ratio(self.backend, self.mu, self.dimension, n // 2)
        return self.mass * ratio * ratio / self.denominator(n)

    def kernel_at_origin(self, n: int) -> Scalar:
        """K_n(v; 0, 0) = K / (1 + λK)"""
        value = ball_kernel_at_origin(self.backend, self.mu, self.dimension, n)
        return value / self.denominator(n)

    def modified_kernel(self, ops: OPSystem, n: int, x: Sequence[Any], y: Sequence[Any]) -> Scalar:
        """K_n(v; x, y) = K_n(u_μ; x, y) - b_n P_m(1-2‖x‖²) P_m(1-2‖y‖²)"""
        backend = self.backend
        m = n // 2
        alpha = backend.scalar(self.dimension) / 2
        beta = backend.scalar(self.mu) - backend.scalar("1/2")

        def radial(point: Sequence[Any]) -> Scalar:
            r2 = sum(backend.scalar(value) ** 2 for value in point)
            return backend.jacobi(m, alpha, beta, 1 - 2 * r2)

        return ops.kernel(n, x, y) - self.b(n) * radial(x) * radial(y)

    def q_coefficients(self, n: int) -> Matrix:
        """Q^n_{j,k} の係数（d = 2、先頭行が P^n_{n/2,1} の変形）"""
        backend = self.backend
        if self.dimension != 2:
            raise InadmissibleParameters("explicit basis exists for d = 2 only", family="ball")
        basis = disk_basis_coefficients(backend, self.mu, n)
        if n % 2:
            return basis
        correction = coefficient_row(backend, _kernel_origin_row(self.mu, n - 1), 2, n)
        return backend.vstack([basis[0:1, :] - self.a(n) * correction, basis[1:, :]])


def ball_uvarov(backend: Backend, mu: Any, d: int, mass: Any) -> BallUvarov:
    return BallUvarov.create(backend, mu, d, mass)


# --- 漸近挙動（浮動小数点） ---


def _log_rising(a: float, k: int) -> float:
    return float(special.gammaln(a + k) - special.gammaln(a))


def christoffel_diagonal(mu: float, d: int, n: int, radius: float) -> float:
    """K_n(u_μ; x, x)（‖x‖ = radius）を基底の平方和で計算"""
    mu = float(mu)
    r2 = radius * radius
    t = 2 * r2 - 1
    total = 0.0
    for ell in range(n + 1):
        weight = harmonic_dimension(ell, d) * r2**ell
        if weight == 0.0:
            continue
        beta = ell + (d - 2) / 2
        for j in range((n - ell) // 2 + 1):
            degree = 2 * j + ell
            log_h2 = (
                _log_rising(mu + 0.5, j)
                + _log_rising(d / 2, degree - j)
                + math.log(degree - j + mu + (d - 1) / 2)
                - float(special.gammaln(j + 1))
                - _log_rising(mu + (d + 1) / 2, degree - j)
                - math.log(degree + mu + (d - 1) / 2)
            )
            value = float(special.eval_jacobi(j, mu - 0.5, beta, t))
            total += weight * value * value * math.exp(-log_h2)
    return total


def _kernel_origin_float(mu: float, d: int, n: int) -> float:
    m = n // 2
    log_ratio = _log_rising(mu + (d + 1) / 2, m) - _log_rising(mu + 0.5, m)
    return math.exp(log_ratio) * float(special.binom(d / 2 + m, m))


def interior_limit(mu: float, d: int, radius: float) -> float:
    """lim K_n(v; x, x) / C(n+d, d)"""
    log_value = (
        special.gammaln(mu + 0.5)
        + special.gammaln((d + 1) / 2)
        - special.gammaln(mu + (d + 1) / 2)
    )
    return float(np.exp(log_value) / math.sqrt(math.pi) * (1 - radius * radius) ** (-mu))


def mass_limit_rows(
    mu: float, d: int, mass: float, degrees: Sequence[int]
) -> List[Tuple[int, float, float, float]]:
    """(n, K_n(v;0,0), 1/λ, 相対誤差)"""
    rows = []
    limit = 1.0 / mass
    for n in degrees:
        kernel = _kernel_origin_float(mu, d, n)
        value = kernel / (1.0 + mass * kernel)
        rows.append((n, value, limit, abs(value - limit) / abs(limit)))
        logger.debug("mass limit n=%d value=%g", n, value)
    return rows


def interior_rows(
    mu: float, d: int, mass: float, radius: float, degrees: Sequence[int]
) -> List[Tuple[int, float, float, float]]:
    """(n, K_n(v;x,x)/C(n+d,d), 極限, 相対誤差)"""
    rows = []
    limit = interior_limit(mu, d, radius)
    for n in degrees:
        m = n // 2
        kernel = christoffel_diagonal(mu, d, n, radius)
        b = mass * math.exp(2 * (_log_rising(mu + (d + 1) / 2, m) - _log_rising(mu + 0.5, m)))
        b /= 1.0 + mass * _kernel_origin_float(mu, d, n)
        radial = float(special.eval_jacobi(m, d / 2, mu - 0.5, 1 - 2 * radius * radius))
        ratio = (kernel - b * radial * radial) / math.comb(n + d, d)
        rows.append((n, ratio, limit, abs(ratio - limit) / limit))
        logger.debug("interior n=%d ratio=%g", n, ratio)
    return rows


def is_monotone(values: Sequence[float]) -> bool:
    """単調非増加か"""
    return all(later <= earlier for earlier, later in zip(values, values[1:]))


def default_degrees(n_max: int, count: Optional[int] = None) -> List[int]:
    """n_max までの表示用の次数（n_max/4, n_max/2, n_max を含む）"""
    degrees = {n_max // 4, n_max // 2, n_max}
    if count:
        step = max(1, n_max // count)
        degrees.update(range(step, n_max + 1, step))
    return sorted(degree for degree in degrees if degree > 0)
