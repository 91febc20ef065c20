"""
多項式の係数表現

Π_N^d の単項式を「全次数順 + 次数内は逆辞書式」で並べた大域順序に対する係数行列で
多項式（およびその列ベクトル）を表します。ν の大域位置は 𝐫_{|ν|-1} + (次数 |ν| 内の位置)。
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Mapping, Sequence, Tuple

from .backend import Backend, Matrix, Scalar
from .multiindex import (
    MultiIndex,
    add,
    cumulative_size,
    degree,
    enumerate_indices,
    rank_size,
    unit,
)

Polynomial = Mapping[MultiIndex, Any]


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> Tuple[MultiIndex, ...]:
    """次数 n 以下の単項式を大域順序で列挙"""
    result: List[MultiIndex] = []
    for k in range(n + 1):
        result.extend(enumerate_indices(k, d).indices)
    return tuple(result)


def position(nu: MultiIndex) -> int:
    """単項式 x^ν の大域位置"""
    k = degree(nu)
    d = len(nu)
    return cumulative_size(k - 1, d) + enumerate_indices(k, d).position(nu)


def degree_for_size(size: int, d: int) -> int:
    """𝐫_N^d = size となる N"""
    n = -1
    while cumulative_size(n, d) < size:
        n += 1
    if cumulative_size(n, d) != size:
        raise ValueError(f"{size} columns do not match any full degree in dimension {d}")
    return n


def monomial_power(point: Sequence[Scalar], nu: MultiIndex, backend: Backend) -> Scalar:
    """x^ν の値"""
    value = backend.one()
    for coordinate, exponent in zip(point, nu):
        if exponent:
            value = value * coordinate**exponent
    return value


def monomial_vector(backend: Backend, point: Sequence[Any], n: int) -> Matrix:
    """次数 n 以下の単項式ベクトル 𝕏(x)（𝐫_n x 1）"""
    coordinates = [backend.scalar(value) for value in point]
    return backend.column(
        [monomial_power(coordinates, nu, backend) for nu in monomials(n, len(coordinates))]
    )


def pad(backend: Backend, coefficients: Matrix, size: int) -> Matrix:
    """右側に零列を足して列数を size にする"""
    rows, cols = coefficients.shape
    if cols == size:
        return coefficients
    if cols > size:
        raise ValueError(f"cannot shrink {cols} columns to {size}")
    return backend.hstack([coefficients, backend.zeros(rows, size - cols)])


def multiplication_matrix(backend: Backend, n: int, d: int, q: Polynomial) -> Matrix:
    """𝕏_{≤n} に q を掛ける行列 T（q 𝕏_{≤n} = T 𝕏_{≤n+deg q}）"""
    q_degree = max((degree(kappa) for kappa in q), default=0)
    result = backend.zeros(cumulative_size(n, d), cumulative_size(n + q_degree, d))
    terms = [(tuple(kappa), backend.scalar(value)) for kappa, value in q.items()]
    for row, nu in enumerate(monomials(n, d)):
        for kappa, value in terms:
            column = position(add(nu, kappa))
            result[row, column] = result[row, column] + value
    return result


def multiply_by_variable(backend: Backend, coefficients: Matrix, d: int, i: int) -> Matrix:
    """係数行列の各行の多項式に x_i（1 始まり）を掛ける"""
    return multiply_by_polynomial(backend, coefficients, d, {unit(i - 1, d): 1})


def multiply_by_polynomial(
    backend: Backend, coefficients: Matrix, d: int, q: Polynomial
) -> Matrix:
    """係数行列の各行の多項式に多項式 q を掛ける"""
    n = degree_for_size(coefficients.shape[1], d)
    return coefficients @ multiplication_matrix(backend, n, d, q)


def coefficient_row(backend: Backend, p: Polynomial, d: int, n: int) -> Matrix:
    """多項式（多重指数 -> 係数）を 1 x 𝐫_n の係数行に変換"""
    row = backend.zeros(1, cumulative_size(n, d))
    for nu, value in p.items():
        if degree(nu) > n:
            raise ValueError(f"monomial {nu} exceeds degree {n}")
        row[0, position(tuple(nu))] = row[0, position(tuple(nu))] + backend.scalar(value)
    return row


def row_to_polynomial(backend: Backend, row: Matrix, d: int) -> Dict[MultiIndex, Scalar]:
    """1 行の係数を多項式の辞書に変換（0 でない項のみ）"""
    n = degree_for_size(row.shape[1], d)
    return {
        nu: row[0, column]
        for column, nu in enumerate(monomials(n, d))
        if not backend.is_zero_scalar(row[0, column])
    }


def multiply_polynomials(backend: Backend, p: Polynomial, q: Polynomial) -> Dict[MultiIndex, Any]:
    """辞書表現の多項式の積"""
    result: Dict[MultiIndex, Any] = {}
    for nu, a in p.items():
        for kappa, b in q.items():
            key = add(tuple(nu), tuple(kappa))
            result[key] = result.get(key, backend.zero()) + backend.scalar(a) * backend.scalar(b)
    return result


@dataclass(frozen=True)
class VectorPolynomial:
    """次数 n の多項式の列ベクトル 𝐏_n = Σ_k G_{n,k} 𝕏_k

    係数は r_n x 𝐫_n の一枚の行列で保持します。
    """

    dimension: int
    degree: int
    coefficients: Matrix
    backend: Backend = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        d = self.dimension
        expected = (rank_size(self.degree, d), cumulative_size(self.degree, d))
        if tuple(self.coefficients.shape) != expected:
            raise ValueError(
                f"coefficient matrix of degree {self.degree} must be {expected}, "
                f"got {tuple(self.coefficients.shape)}"
            )

    @property
    def size(self) -> int:
        """成分数 r_n"""
        return rank_size(self.degree, self.dimension)

    def block(self, k: int) -> Matrix:
        """係数ブロック G_{n,k}"""
        start = cumulative_size(k - 1, self.dimension)
        stop = cumulative_size(k, self.dimension)
        return self.coefficients[:, start:stop]

    def leading(self) -> Matrix:
        """主係数 G_{n,n}"""
        return self.block(self.degree)

    def is_monic(self) -> bool:
        return self.backend.equal(self.leading(), self.backend.eye(self.size))

    def padded(self, n: int) -> Matrix:
        """次数 n まで零列を足した係数行列"""
        return pad(self.backend, self.coefficients, cumulative_size(n, self.dimension))

    def evaluate(self, point: Sequence[Any]) -> Matrix:
        """点 x での値（r_n x 1）"""
        return self.coefficients @ monomial_vector(self.backend, point, self.degree)

    def component(self, r: int) -> Dict[MultiIndex, Scalar]:
        """第 r 成分を辞書表現で取得"""
        return row_to_polynomial(self.backend, self.coefficients[r : r + 1, :], self.dimension)
