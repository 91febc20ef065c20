"""
スカラーバックエンド

厳密な有理数演算（sympy）と倍精度浮動小数点演算（numpy / scipy）を同一の
インターフェースで提供します。上位モジュールはバックエンドを通してのみ
行列・特殊関数を扱います。
"""

import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Type

import numpy as np
import sympy
from scipy import special

from .exceptions import ConfigurationError, IrrationalMomentError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10

# 型エイリアス（バックエンドごとに実体が異なる）
Scalar = Any
Matrix = Any

_T = sympy.Symbol("t")


class Backend(ABC):
    """スカラーと行列演算の抽象インターフェース"""

    name: str = ""
    exact: bool = False

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE) -> None:
        if tolerance <= 0:
            raise ConfigurationError("tolerance must be positive", option="tol")
        self.tolerance = tolerance

    def __repr__(self) -> str:
        return f"{type(self).__name__}(tolerance={self.tolerance})"

    # --- スカラー ---

    @abstractmethod
    def scalar(self, value: Any) -> Scalar:
        """値をバックエンドのスカラーに変換"""

    def zero(self) -> Scalar:
        return self.scalar(0)

    def one(self) -> Scalar:
        return self.scalar(1)

    @abstractmethod
    def is_zero_scalar(self, value: Scalar) -> bool:
        """スカラーが 0 かどうか"""

    @abstractmethod
    def format(self, value: Any) -> str:
        """CSV 出力用の文字列表現"""

    # --- 行列生成 ---

    @abstractmethod
    def matrix(self, rows: Iterable[Iterable[Any]], cols: Optional[int] = None) -> Matrix:
        """二重リストから行列を作成（空の場合は cols 列の 0 行行列）"""

    @abstractmethod
    def zeros(self, rows: int, cols: int) -> Matrix:
        """零行列"""

    @abstractmethod
    def eye(self, size: int) -> Matrix:
        """単位行列"""

    def column(self, values: Sequence[Any]) -> Matrix:
        """列ベクトル"""
        return self.matrix([[value] for value in values], 1)

    def row(self, values: Sequence[Any]) -> Matrix:
        """行ベクトル"""
        values = list(values)
        return self.matrix([values] if values else [], len(values))

    def diag(self, values: Sequence[Any]) -> Matrix:
        """対角行列"""
        values = list(values)
        result = self.zeros(len(values), len(values))
        for position, value in enumerate(values):
            result[position, position] = self.scalar(value)
        return result

    @abstractmethod
    def hstack(self, blocks: Sequence[Matrix]) -> Matrix:
        """横に連結"""

    @abstractmethod
    def vstack(self, blocks: Sequence[Matrix]) -> Matrix:
        """縦に連結"""

    # --- 線形代数 ---

    @abstractmethod
    def inv(self, m: Matrix) -> Matrix:
        """逆行列"""

    @abstractmethod
    def solve(self, a: Matrix, b: Matrix) -> Matrix:
        """a X = b を解く"""

    @abstractmethod
    def det(self, m: Matrix) -> Scalar:
        """行列式（0x0 行列は 1）"""

    @abstractmethod
    def rank(self, m: Matrix) -> int:
        """階数"""

    @abstractmethod
    def max_abs(self, m: Matrix) -> float:
        """成分の最大絶対値"""

    @abstractmethod
    def is_zero(self, m: Matrix) -> bool:
        """零行列かどうか（浮動小数点では許容誤差内）"""

    @abstractmethod
    def is_singular(self, m: Matrix) -> bool:
        """正方行列が特異かどうか"""

    @abstractmethod
    def det_negligible(self, m: Matrix) -> bool:
        """行列式が 0 とみなせるかどうか"""

    def equal(self, a: Matrix, b: Matrix) -> bool:
        """二つの行列が（許容誤差内で）等しいか"""
        return a.shape == b.shape and self.is_zero(a - b)

    def magnitude(self, m: Matrix) -> Scalar:
        """成分の最大絶対値（厳密: 有理数、浮動小数点: float）"""
        if self.exact:
            return max((abs(entry) for entry in m), default=self.zero())
        return self.max_abs(m)

    def residual(self, a: Matrix, b: Matrix) -> Scalar:
        """a - b の残差"""
        return self.magnitude(a - b)

    @abstractmethod
    def to_numpy(self, m: Matrix) -> np.ndarray:
        """float の ndarray に変換"""

    # --- 特殊関数 ---

    @abstractmethod
    def rising(self, a: Any, k: int) -> Scalar:
        """上昇階乗 (a)_k"""

    @abstractmethod
    def binomial(self, a: Any, k: int) -> Scalar:
        """二項係数 C(a, k)"""

    @abstractmethod
    def gamma(self, a: Any) -> Scalar:
        """ガンマ関数"""

    @abstractmethod
    def jacobi(self, n: int, alpha: Any, beta: Any, t: Any) -> Scalar:
        """Jacobi 多項式 P_n^{(alpha, beta)}(t)"""


class ExactBackend(Backend):
    """sympy による厳密有理数バックエンド"""

    name = "exact"
    exact = True

    def scalar(self, value: Any) -> Scalar:
        if isinstance(value, sympy.Rational):
            return value
        if isinstance(value, sympy.Basic):
            return _rational(value)
        if isinstance(value, Fraction):
            return sympy.Rational(value.numerator, value.denominator)
        if isinstance(value, (bool, np.bool_)):
            return sympy.Integer(int(value))
        if isinstance(value, (int, np.integer)):
            return sympy.Integer(int(value))
        if isinstance(value, (float, np.floating)):
            if not math.isfinite(float(value)):
                raise IrrationalMomentError(value)
            # 10 進表記をそのまま有理数にする（0.1 -> 1/10）
            return sympy.Rational(repr(float(value)))
        if isinstance(value, str):
            try:
                return sympy.Rational(value.strip())
            except (TypeError, ValueError, sympy.SympifyError):
                raise IrrationalMomentError(value)
        return _rational(sympy.sympify(value))

    def is_zero_scalar(self, value: Scalar) -> bool:
        return bool(self.scalar(value) == 0)

    def format(self, value: Any) -> str:
        return str(self.scalar(value))

    def matrix(self, rows: Iterable[Iterable[Any]], cols: Optional[int] = None) -> Matrix:
        data = [[self.scalar(value) for value in row] for row in rows]
        if not data:
            return sympy.zeros(0, cols or 0)
        if not data[0]:
            return sympy.zeros(len(data), 0)
        return sympy.Matrix(data)

    def zeros(self, rows: int, cols: int) -> Matrix:
        return sympy.zeros(rows, cols)

    def eye(self, size: int) -> Matrix:
        return sympy.eye(size)

    def hstack(self, blocks: Sequence[Matrix]) -> Matrix:
        if not blocks:
            return sympy.zeros(0, 0)
        return sympy.Matrix.hstack(*blocks)

    def vstack(self, blocks: Sequence[Matrix]) -> Matrix:
        if not blocks:
            return sympy.zeros(0, 0)
        return sympy.Matrix.vstack(*blocks)

    def inv(self, m: Matrix) -> Matrix:
        if m.rows == 0:
            return m.copy()
        return m.inv()

    def solve(self, a: Matrix, b: Matrix) -> Matrix:
        if a.rows == 0:
            return sympy.zeros(0, b.cols)
        return a.LUsolve(b)

    def det(self, m: Matrix) -> Scalar:
        if m.rows == 0:
            return sympy.Integer(1)
        # 分数を使わない Bareiss 消去
        return m.det(method="bareiss")

    def rank(self, m: Matrix) -> int:
        if m.rows == 0 or m.cols == 0:
            return 0
        return int(m.rank())

    def max_abs(self, m: Matrix) -> float:
        return max((abs(float(entry)) for entry in m), default=0.0)

    def is_zero(self, m: Matrix) -> bool:
        return all(entry == 0 for entry in m)

    def is_singular(self, m: Matrix) -> bool:
        return bool(self.det(m) == 0)

    def det_negligible(self, m: Matrix) -> bool:
        return self.is_singular(m)

    def to_numpy(self, m: Matrix) -> np.ndarray:
        if m.rows == 0 or m.cols == 0:
            return np.zeros((m.rows, m.cols))
        return np.array(m.tolist(), dtype=float)

    def rising(self, a: Any, k: int) -> Scalar:
        return _rational(sympy.rf(self.scalar(a), int(k)), where=f"({a})_{k}")

    def binomial(self, a: Any, k: int) -> Scalar:
        return _rational(sympy.binomial(self.scalar(a), int(k)), where=f"C({a}, {k})")

    def gamma(self, a: Any) -> Scalar:
        return _rational(sympy.gamma(self.scalar(a)), where=f"Gamma({a})")

    def jacobi(self, n: int, alpha: Any, beta: Any, t: Any) -> Scalar:
        poly = sympy.Poly(
            sympy.jacobi_poly(int(n), self.scalar(alpha), self.scalar(beta), _T), _T
        )
        return _rational(poly.eval(self.scalar(t)))


class FloatBackend(Backend):
    """numpy / scipy による倍精度バックエンド"""

    name = "float"
    exact = False

    def scalar(self, value: Any) -> Scalar:
        if isinstance(value, str):
            return float(Fraction(value.strip()))
        return float(value)

    def is_zero_scalar(self, value: Scalar) -> bool:
        return abs(float(value)) <= self.tolerance

    def format(self, value: Any) -> str:
        return repr(float(value))

    def matrix(self, rows: Iterable[Iterable[Any]], cols: Optional[int] = None) -> Matrix:
        data = [[self.scalar(value) for value in row] for row in rows]
        if not data:
            return np.zeros((0, cols or 0))
        if not data[0]:
            return np.zeros((len(data), 0))
        return np.array(data, dtype=float)

    def zeros(self, rows: int, cols: int) -> Matrix:
        return np.zeros((rows, cols))

    def eye(self, size: int) -> Matrix:
        return np.eye(size)

    def hstack(self, blocks: Sequence[Matrix]) -> Matrix:
        if not blocks:
            return np.zeros((0, 0))
        return np.hstack(blocks)

    def vstack(self, blocks: Sequence[Matrix]) -> Matrix:
        if not blocks:
            return np.zeros((0, 0))
        return np.vstack(blocks)

    def inv(self, m: Matrix) -> Matrix:
        if m.shape[0] == 0:
            return m.copy()
        return np.linalg.inv(m)

    def solve(self, a: Matrix, b: Matrix) -> Matrix:
        if a.shape[0] == 0:
            return np.zeros((0, b.shape[1]))
        # LAPACK gesv（部分ピボット付き LU）
        return np.linalg.solve(a, b)

    def det(self, m: Matrix) -> Scalar:
        if m.shape[0] == 0:
            return 1.0
        return float(np.linalg.det(m))

    def rank(self, m: Matrix) -> int:
        if m.size == 0:
            return 0
        return int(np.linalg.matrix_rank(m))

    def max_abs(self, m: Matrix) -> float:
        if m.size == 0:
            return 0.0
        return float(np.max(np.abs(m)))

    def is_zero(self, m: Matrix) -> bool:
        return self.max_abs(m) <= self.tolerance

    def is_singular(self, m: Matrix) -> bool:
        if m.size == 0:
            return False
        singular_values = np.linalg.svd(m, compute_uv=False)
        scale = self.max_abs(m)
        if scale == 0.0:
            return True
        return bool(singular_values[-1] <= self.tolerance * scale)

    def det_negligible(self, m: Matrix) -> bool:
        if m.size == 0:
            return False
        # Hadamard の上界で正規化した行列式
        bound = float(np.prod(np.linalg.norm(m, axis=1)))
        return bool(abs(self.det(m)) <= self.tolerance * bound)

    def to_numpy(self, m: Matrix) -> np.ndarray:
        return np.asarray(m, dtype=float)

    def rising(self, a: Any, k: int) -> Scalar:
        return float(special.poch(self.scalar(a), int(k)))

    def binomial(self, a: Any, k: int) -> Scalar:
        return float(special.binom(self.scalar(a), int(k)))

    def gamma(self, a: Any) -> Scalar:
        return float(special.gamma(self.scalar(a)))

    def jacobi(self, n: int, alpha: Any, beta: Any, t: Any) -> Scalar:
        return float(
            special.eval_jacobi(int(n), self.scalar(alpha), self.scalar(beta), self.scalar(t))
        )


def _rational(value: Any, where: Optional[str] = None) -> Scalar:
    """sympy の値を有理数に確定させる"""
    result = sympy.sympify(value)
    if not result.is_Rational:
        result = sympy.nsimplify(sympy.expand_func(result), rational=False)
    if not result.is_Rational:
        raise IrrationalMomentError(value, where=where)
    return result


_BACKENDS: Dict[str, Type[Backend]] = {
    ExactBackend.name: ExactBackend,
    FloatBackend.name: FloatBackend,
}


def get_backend(name: str = "exact", tolerance: float = DEFAULT_TOLERANCE) -> Backend:
    """名前からバックエンドを作成"""
    try:
        backend_class = _BACKENDS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown backend '{name}'", option="backend", details={"choices": list(_BACKENDS)}
        )
    logger.debug("using %s backend (tol=%g)", name, tolerance)
    return backend_class(tolerance)


def available_backends() -> List[str]:
    """利用可能なバックエンド名"""
    return list(_BACKENDS)
