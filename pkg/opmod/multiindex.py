"""
多重指数

次数付き逆辞書式順序での多重指数の列挙と、変数シフト行列 L_{n,i} を提供します。

順序: 同じ全次数の中では、左から見て最初に異なる位置の指数が大きい方を先に並べます
（d=2 では 1; x1, x2; x1², x1x2, x2²; ...）。
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb
from typing import Dict, Iterator, List, Tuple

from .backend import Backend, Matrix

MultiIndex = Tuple[int, ...]


def rank_size(n: int, d: int) -> int:
    """次数ちょうど n の単項式の個数 r_n^d"""
    if n < 0:
        return 0
    _check_dimension(d)
    return comb(n + d - 1, n)


def cumulative_size(n: int, d: int) -> int:
    """次数 n 以下の単項式の個数 𝐫_n^d = dim Π_n^d"""
    if n < 0:
        return 0
    _check_dimension(d)
    return comb(n + d, n)


def degree(nu: MultiIndex) -> int:
    """全次数 |ν|"""
    return sum(nu)


def add(nu: MultiIndex, kappa: MultiIndex) -> MultiIndex:
    """多重指数の和"""
    return tuple(a + b for a, b in zip(nu, kappa))


def unit(i: int, d: int) -> MultiIndex:
    """単位多重指数 e_i（i は 0 始まり）"""
    return tuple(1 if position == i else 0 for position in range(d))


@dataclass(frozen=True)
class GradedBasis:
    """次数 n の多重指数を逆辞書式順序で並べたもの"""

    dimension: int
    degree: int
    indices: Tuple[MultiIndex, ...]
    _positions: Dict[MultiIndex, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        self._positions.update({nu: position for position, nu in enumerate(self.indices)})

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[MultiIndex]:
        return iter(self.indices)

    def __getitem__(self, position: int) -> MultiIndex:
        return self.indices[position]

    def position(self, nu: MultiIndex) -> int:
        """ν の位置（0 始まり）"""
        return self._positions[tuple(nu)]


@lru_cache(maxsize=None)
def enumerate_indices(n: int, d: int) -> GradedBasis:
    """次数 n の多重指数を逆辞書式順序で列挙"""
    _check_dimension(d)
    indices: List[MultiIndex] = []
    # 変数番号の非減少列 = x_{i1} x_{i2} ... を辞書式に並べると求める順序になる
    for variables in combinations_with_replacement(range(d), n):
        exponents = [0] * d
        for variable in variables:
            exponents[variable] += 1
        indices.append(tuple(exponents))
    return GradedBasis(dimension=d, degree=n, indices=tuple(indices))


@dataclass(frozen=True)
class ShiftMatrix:
    """x_i 𝕏_n = L_{n,i} 𝕏_{n+1} を満たす 0/1 行列"""

    dimension: int
    degree: int
    variable: int
    columns: Tuple[int, ...]

    @property
    def shape(self) -> Tuple[int, int]:
        d = self.dimension
        return (rank_size(self.degree, d), rank_size(self.degree + 1, d))

    def as_matrix(self, backend: Backend) -> Matrix:
        """バックエンドの行列に変換"""
        rows, cols = self.shape
        result = backend.zeros(rows, cols)
        for row, column in enumerate(self.columns):
            result[row, column] = backend.one()
        return result


@lru_cache(maxsize=None)
def shift_matrix(n: int, i: int, d: int) -> ShiftMatrix:
    """シフト行列 L_{n,i}（i は 1 始まり）"""
    if not 1 <= i <= d:
        raise ValueError(f"variable index must be in 1..{d}, got {i}")
    source = enumerate_indices(n, d)
    target = enumerate_indices(n + 1, d)
    step = unit(i - 1, d)
    columns = tuple(target.position(add(nu, step)) for nu in source)
    return ShiftMatrix(dimension=d, degree=n, variable=i, columns=columns)


def shift(backend: Backend, n: int, i: int, d: int) -> Matrix:
    """L_{n,i} を行列として取得（n < 0 では 0 行の行列）"""
    if n < 0:
        return backend.zeros(0, rank_size(n + 1, d))
    return shift_matrix(n, i, d).as_matrix(backend)


def monomial_name(nu: MultiIndex) -> str:
    """表示用の単項式表記（例: x1^2*x2）"""
    factors = []
    for position, exponent in zip(range(1, len(nu) + 1), nu):
        if exponent == 1:
            factors.append(f"x{position}")
        elif exponent > 1:
            factors.append(f"x{position}^{exponent}")
    return "*".join(factors) if factors else "1"


def _check_dimension(d: int) -> None:
    if d < 1:
        raise ValueError(f"dimension must be at least 1, got {d}")
