"""
Bessel–Laguerre 多項式

x の Bessel 多項式と y/x でスケールした Laguerre 因子の積で表される
二変数 Krall–Sheffer 族です。汎関数は擬定値ですが正定値ではありません。
原点に質量を加えた変形の擬定値性の判定と、一変数 Bessel の Uvarov 変形への帰着を扱います。
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from ..backend import Backend, ExactBackend, Matrix, Scalar
from ..exceptions import InadmissibleParameters, NotQuasiDefinite
from ..moments import MomentFunctional
from ..multiindex import MultiIndex
from ..ops import build_monic_ops
from ..polynomial import coefficient_row
from .special import (
    bessel_coefficients,
    bessel_functional,
    bessel_leading,
    bessel_norm,
    laguerre_coefficients,
    laguerre_norm,
)

logger = logging.getLogger(__name__)

FAMILY = "bessel_laguerre"
_EXACT = ExactBackend()
_X, _Y = sympy.symbols("x y")


def check_parameters(g: Any, gamma: Any, max_degree: int) -> None:
    """g ≠ 0、gγ > -2、g+n ≠ 0、gγ+n ≠ 0（モーメントに現れる範囲の n）"""
    g = _EXACT.scalar(g)
    product = g * _EXACT.scalar(gamma)
    if g == 0:
        raise InadmissibleParameters("g must be nonzero", family=FAMILY)
    if product <= -2:
        raise InadmissibleParameters(f"gγ = {product} must exceed -2", family=FAMILY)
    for n in range(2 * max_degree + 2):
        if g + n == 0:
            raise InadmissibleParameters(f"g + {n} vanishes", family=FAMILY)
        if product + n == 0:
            raise InadmissibleParameters(f"gγ + {n} vanishes", family=FAMILY)


def bl_moment(backend: Backend, g: Any, gamma: Any, nu: MultiIndex) -> Scalar:
    """⟨u^{(g,γ)}, x^h y^k⟩ = Γ(gγ) (gγ)_k g^{h+1} / (g)_{h+k}"""
    h, k = nu
    g = backend.scalar(g)
    product = g * backend.scalar(gamma)
    return (
        backend.gamma(product)
        * backend.rising(product, k)
        * g ** (h + 1)
        / backend.rising(g, h + k)
    )


def bl_functional(backend: Backend, g: Any, gamma: Any, max_degree: int = 8) -> MomentFunctional:
    """二変数 Bessel–Laguerre 汎関数 u^{(g,γ)}"""
    check_parameters(g, gamma, max_degree)
    return MomentFunctional(
        2,
        lambda nu: bl_moment(backend, g, gamma, nu),
        backend,
        label=f"bessel_laguerre(g={g},gamma={gamma})",
    )


def bl_polynomial(backend: Backend, g: Any, gamma: Any, n: int, m: int) -> Dict[MultiIndex, Scalar]:
    """P_{n,m} = B_{n-m}^{(g+2m,-g)}(x) x^m L_m^{(gγ-1)}(gy/x) の係数"""
    if not 0 <= m <= n:
        raise ValueError(f"need 0 <= m <= n, got n={n}, m={m}")
    g = backend.scalar(g)
    bessel = bessel_coefficients(backend, n - m, g + 2 * m, -g)
    laguerre = laguerre_coefficients(backend, m, g * backend.scalar(gamma) - 1)
    result: Dict[MultiIndex, Scalar] = {}
    for i, b in enumerate(bessel):
        for k, c in enumerate(laguerre):
            # c_k (gy)^k x^{m-k}
            key = (i + m - k, k)
            result[key] = result.get(key, backend.zero()) + b * c * g**k
    return result


def bl_basis_coefficients(backend: Backend, g: Any, gamma: Any, n: int) -> Matrix:
    """(P_{n,0}, ..., P_{n,n}) の係数行列（(n+1) x 𝐫_n）"""
    rows = [
        coefficient_row(backend, bl_polynomial(backend, g, gamma, n, m), 2, n)
        for m in range(n + 1)
    ]
    return backend.vstack(rows)


def bl_basis_eval(
    backend: Backend, g: Any, gamma: Any, n: int, m: int, point: Sequence[Any]
) -> Scalar:
    x, y = (backend.scalar(value) for value in point)
    total = backend.zero()
    for (i, k), value in bl_polynomial(backend, g, gamma, n, m).items():
        total = total + value * x**i * y**k
    return total


def bl_product_norm(backend: Backend, g: Any, gamma: Any, n: int, m: int) -> Scalar:
    """h_{n-m}^{(g+2m,-g)} h_m^{(gγ-1)}"""
    g = backend.scalar(g)
    return bessel_norm(backend, n - m, g + 2 * m, -g) * laguerre_norm(
        backend, m, g * backend.scalar(gamma) - 1
    )


def bl_norm(backend: Backend, g: Any, gamma: Any, n: int, m: int) -> Scalar:
    """⟨u^{(g,γ)}, P_{n,m}^2⟩ = 積のノルム × g^{2m} / (g)_{2m}（m = 0 では一致）"""
    g_value = backend.scalar(g)
    return bl_product_norm(backend, g, gamma, n, m) * g_value ** (2 * m) / backend.rising(
        g_value, 2 * m
    )


def bl_kernel_at_origin(backend: Backend, g: Any, gamma: Any, n: int) -> Scalar:
    """K_n(u; (0,0), (0,0)) = (-1)^n C(g+n-1, n) / (g Γ(gγ))"""
    if n < 0:
        return backend.zero()
    g = backend.scalar(g)
    sign = -1 if n % 2 else 1
    return sign * backend.binomial(g + n - 1, n) / (g * backend.gamma(g * backend.scalar(gamma)))


def krall_sheffer_residual(g: Any, gamma: Any, n: int, m: int) -> sympy.Expr:
    """x²w_xx + 2xyw_xy + (y²-y)w_yy + g(x-1)w_x + g(y-γ)w_y - n(n+g-1)w（厳密）"""
    g_value = _EXACT.scalar(g)
    gamma_value = _EXACT.scalar(gamma)
    w = sum(
        value * _X**i * _Y**k
        for (i, k), value in bl_polynomial(_EXACT, g_value, gamma_value, n, m).items()
    )
    residual = (
        _X**2 * sympy.diff(w, _X, 2)
        + 2 * _X * _Y * sympy.diff(w, _X, _Y)
        + (_Y**2 - _Y) * sympy.diff(w, _Y, 2)
        + g_value * (_X - 1) * sympy.diff(w, _X)
        + g_value * (_Y - gamma_value) * sympy.diff(w, _Y)
        - n * (n + g_value - 1) * w
    )
    return sympy.expand(residual)


@dataclass(frozen=True)
class BesselLaguerreUvarov:
    """u^{(g,γ)} + λδ_{(0,0)}"""

    backend: Backend
    g: Scalar
    gamma: Scalar
    mass: Scalar

    @classmethod
    def create(
        cls, backend: Backend, g: Any, gamma: Any, mass: Any, max_degree: int = 8
    ) -> "BesselLaguerreUvarov":
        check_parameters(g, gamma, max_degree)
        return cls(backend, backend.scalar(g), backend.scalar(gamma), backend.scalar(mass))

    def lambda_n(self, n: int) -> Scalar:
        """λ_n = 1 + λ K_n((0,0),(0,0))"""
        return 1 + self.mass * bl_kernel_at_origin(self.backend, self.g, self.gamma, n)

    def lambda_table(self, max_degree: int) -> List[Tuple[int, Scalar, bool]]:
        """(n, λ_n, λ_n ≠ 0)"""
        rows = []
        for n in range(max_degree + 1):
            value = self.lambda_n(n)
            rows.append((n, value, not self.backend.is_zero_scalar(value)))
        return rows

    def first_failure(self, max_degree: int) -> Optional[int]:
        """λ_k = 0 となる最初の k"""
        for n, _, passed in self.lambda_table(max_degree):
            if not passed:
                return n
        return None

    def _require(self, n: int) -> None:
        failure = self.first_failure(n - 1)
        if failure is not None:
            raise NotQuasiDefinite(failure, message=f"λ_{failure} vanishes")

    def kernel_vector_origin(self, n: int) -> Dict[MultiIndex, Scalar]:
        """𝖪_n((0,0), ·) = (1/Γ(gγ)) Σ_{k≤n} B_k^{(g,-g)}(x) / h_k^{(g,-g)}"""
        backend = self.backend
        scale = backend.one() / backend.gamma(self.g * self.gamma)
        result: Dict[MultiIndex, Scalar] = {}
        for k in range(n + 1):
            weight = scale / bessel_norm(backend, k, self.g, -self.g)
            for i, value in enumerate(bessel_coefficients(backend, k, self.g, -self.g)):
                result[(i, 0)] = result.get((i, 0), backend.zero()) + weight * value
        return result

    def q_polynomial(self, n: int, m: int) -> Dict[MultiIndex, Scalar]:
        """Q_{n,m}（m > 0 では P_{n,m}）"""
        base = bl_polynomial(self.backend, self.g, self.gamma, n, m)
        if m > 0 or n == 0:
            return base
        self._require(n)
        factor = self.mass / self.lambda_n(n - 1)
        result = dict(base)
        for key, value in self.kernel_vector_origin(n - 1).items():
            result[key] = result.get(key, self.backend.zero()) - factor * value
        return result

    def q_coefficients(self, n: int) -> Matrix:
        """(Q_{n,0}, ..., Q_{n,n}) の係数行列"""
        return self.backend.vstack(
            [coefficient_row(self.backend, self.q_polynomial(n, m), 2, n) for m in range(n + 1)]
        )

    def reduced_functional(self, max_degree: int) -> MomentFunctional:
        """b^{(g,-g)} + (λ/Γ(gγ)) δ_0"""
        backend = self.backend
        weight = self.mass / backend.gamma(self.g * self.gamma)
        base = bessel_functional(backend, self.g, -self.g, max_degree)
        return base.add_point_masses([(0,)], [weight], label="bessel+mass")

    def reduction_residual(self, n: int) -> Matrix:
        """Q_{n,0}(x) / lc(B_n) と一変数の変形汎関数のモニック OPS の差"""
        backend = self.backend
        q = self.q_polynomial(n, 0)
        if any(k for _, k in q):
            raise ValueError("Q_{n,0} depends on y")
        lead = bessel_leading(backend, n, self.g, -self.g)
        row = backend.row([q.get((i, 0), backend.zero()) / lead for i in range(n + 1)])
        ops = build_monic_ops(self.reduced_functional(n), n)
        return row - ops.coefficients(n)


def bessel_laguerre_uvarov(
    backend: Backend, g: Any, gamma: Any, mass: Any, max_degree: int = 8
) -> BesselLaguerreUvarov:
    return BesselLaguerreUvarov.create(backend, g, gamma, mass, max_degree)
