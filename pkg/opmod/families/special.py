"""
一変数の古典族

Bessel（Krall–Frink）多項式と Laguerre 多項式のモーメント・係数・ノルム、
および直積型汎関数に使う一変数モーメントを提供します。
"""

import logging
from typing import Any, Callable, List, Sequence

from ..backend import Backend, Scalar
from ..exceptions import InadmissibleParameters
from ..moments import MomentFunctional
from ..multiindex import MultiIndex

logger = logging.getLogger(__name__)

UnivariateMoments = Callable[[int], Scalar]


# --- Bessel: B_n^{(a,b)} ---


def check_bessel_parameters(a: Any, b: Any, max_degree: int) -> None:
    """b ≠ 0 かつ n + a - 1 ≠ 0（次数 2*max_degree まで）"""
    if b == 0:
        raise InadmissibleParameters("Bessel parameter b must be nonzero", family="bessel")
    for n in range(1, 2 * max_degree + 2):
        if n + a - 1 == 0:
            raise InadmissibleParameters(
                f"Bessel parameter a = {a} makes (a)_n vanish", family="bessel"
            )


def bessel_moment(backend: Backend, a: Any, b: Any, k: int) -> Scalar:
    """⟨b^{(a,b)}, x^k⟩ = (-b)^{k+1} / (a)_k"""
    b = backend.scalar(b)
    return (-b) ** (k + 1) / backend.rising(a, k)


def bessel_coefficients(backend: Backend, n: int, a: Any, b: Any) -> List[Scalar]:
    """B_n^{(a,b)}(x) = Σ_k C(n,k) (n+a-1)_k (x/b)^k の係数（x^0 から）"""
    b = backend.scalar(b)
    shifted = backend.scalar(a) + n - 1
    return [
        backend.binomial(n, k) * backend.rising(shifted, k) / b**k for k in range(n + 1)
    ]


def bessel_eval(backend: Backend, n: int, a: Any, b: Any, x: Any) -> Scalar:
    x = backend.scalar(x)
    total = backend.zero()
    for k, coefficient in enumerate(bessel_coefficients(backend, n, a, b)):
        total = total + coefficient * x**k
    return total


def bessel_leading(backend: Backend, n: int, a: Any, b: Any) -> Scalar:
    """B_n の主係数 (n+a-1)_n / b^n"""
    return backend.rising(backend.scalar(a) + n - 1, n) / backend.scalar(b) ** n


def bessel_norm(backend: Backend, n: int, a: Any, b: Any) -> Scalar:
    """⟨b^{(a,b)}, B_n^2⟩ = (-1)^{n+1} n! b / ((2n+a-1)(a)_{n-1})（h_0 = -b）"""
    b = backend.scalar(b)
    if n == 0:
        return -b
    a = backend.scalar(a)
    sign = -1 if n % 2 == 0 else 1
    return sign * backend.rising(1, n) * b / ((2 * n + a - 1) * backend.rising(a, n - 1))


def bessel_functional(backend: Backend, a: Any, b: Any, max_degree: int = 8) -> MomentFunctional:
    """一変数 Bessel 汎関数 b^{(a,b)}"""
    check_bessel_parameters(a, b, max_degree)
    return MomentFunctional(
        1, lambda nu: bessel_moment(backend, a, b, nu[0]), backend, label=f"bessel({a},{b})"
    )


# --- Laguerre: L_n^{(α)} ---


def laguerre_moment(backend: Backend, alpha: Any, k: int) -> Scalar:
    """∫_0^∞ x^k x^α e^{-x} dx = Γ(α+k+1)"""
    return backend.gamma(backend.scalar(alpha) + k + 1)


def laguerre_coefficients(backend: Backend, n: int, alpha: Any) -> List[Scalar]:
    """L_n^{(α)}(x) = Σ_k (-1)^k (α+k+1)_{n-k} / ((n-k)! k!) x^k"""
    alpha = backend.scalar(alpha)
    result = []
    for k in range(n + 1):
        sign = -1 if k % 2 else 1
        numerator = backend.rising(alpha + k + 1, n - k)
        result.append(sign * numerator / (backend.rising(1, n - k) * backend.rising(1, k)))
    return result


def laguerre_eval(backend: Backend, n: int, alpha: Any, x: Any) -> Scalar:
    x = backend.scalar(x)
    total = backend.zero()
    for k, coefficient in enumerate(laguerre_coefficients(backend, n, alpha)):
        total = total + coefficient * x**k
    return total


def laguerre_norm(backend: Backend, n: int, alpha: Any) -> Scalar:
    """Γ(α+n+1) / n!"""
    return backend.gamma(backend.scalar(alpha) + n + 1) / backend.rising(1, n)


def laguerre_functional(backend: Backend, alpha: Any) -> MomentFunctional:
    if alpha <= -1:
        raise InadmissibleParameters("Laguerre parameter must exceed -1", family="laguerre")
    return MomentFunctional(
        1, lambda nu: laguerre_moment(backend, alpha, nu[0]), backend, label=f"laguerre({alpha})"
    )


# --- 直積型汎関数 ---


def legendre_moment(backend: Backend, k: int) -> Scalar:
    """∫_{-1}^1 t^k dt / 2"""
    if k % 2:
        return backend.zero()
    return backend.one() / (k + 1)


def hermite_moment(backend: Backend, k: int) -> Scalar:
    """∫ t^k e^{-t^2} dt / √π = (1/2)_{k/2}"""
    if k % 2:
        return backend.zero()
    return backend.rising(backend.scalar("1/2"), k // 2)


def univariate_moments(backend: Backend, kind: str, **params: Any) -> UnivariateMoments:
    """因子の種類からモーメント列 k -> μ_k を作成"""
    if kind == "legendre":
        return lambda k: legendre_moment(backend, k)
    if kind == "hermite":
        return lambda k: hermite_moment(backend, k)
    if kind == "laguerre":
        alpha = params.get("alpha", 0)
        if alpha <= -1:
            raise InadmissibleParameters("Laguerre parameter must exceed -1", family="laguerre")
        return lambda k: laguerre_moment(backend, alpha, k)
    if kind == "bessel":
        a, b = params.get("a", 2), params.get("b", -2)
        check_bessel_parameters(a, b, params.get("max_degree", 8))
        return lambda k: bessel_moment(backend, a, b, k)
    if kind == "table":
        values = [backend.scalar(value) for value in params.get("moments", [])]

        def table(k: int) -> Scalar:
            if k >= len(values):
                raise InadmissibleParameters(
                    f"table factor lists {len(values)} moments, moment {k} needed",
                    family="table",
                )
            return values[k]

        return table
    raise InadmissibleParameters(f"unknown univariate factor '{kind}'", family=kind)


def product_functional(
    backend: Backend, factors: Sequence[UnivariateMoments], label: str = "product"
) -> MomentFunctional:
    """μ_ν = Π_i μ^{(i)}_{ν_i}"""
    def oracle(nu: MultiIndex) -> Scalar:
        value = backend.one()
        for factor, k in zip(factors, nu):
            value = value * factor(k)
        return value

    return MomentFunctional(len(factors), oracle, backend, label=label)
