"""
スカラーバックエンドのテスト
"""

import sys
import os
from fractions import Fraction

import numpy as np
import pytest
import sympy

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import ConfigurationError, IrrationalMomentError, available_backends, get_backend


class TestExactBackend:
    """厳密バックエンドのテスト"""

    def setup_method(self, method):
        self.backend = get_backend("exact")

    def test_scalar_conversion(self):
        """文字列、Fraction、float を有理数に変換"""
        assert self.backend.scalar("1/3") == sympy.Rational(1, 3)
        assert self.backend.scalar(Fraction(2, 5)) == sympy.Rational(2, 5)
        assert self.backend.scalar(0.1) == sympy.Rational(1, 10)
        assert self.backend.scalar(True) == 1

    def test_irrational_value(self):
        """無理数はエラー"""
        with pytest.raises(IrrationalMomentError) as excinfo:
            self.backend.scalar(sympy.sqrt(2))
        assert excinfo.value.exit_code == 64
        assert "sqrt(2)" in excinfo.value.details["value"]

    def test_gamma_of_half_integer_is_irrational(self):
        """Γ(1/2) = √π は有理数ではない"""
        with pytest.raises(IrrationalMomentError, match="Gamma"):
            self.backend.gamma("1/2")

    def test_special_functions(self):
        """上昇階乗、二項係数、ガンマ関数"""
        assert self.backend.rising("1/2", 2) == sympy.Rational(3, 4)
        assert self.backend.binomial("5/2", 2) == sympy.Rational(15, 8)
        assert self.backend.gamma(4) == 6

    def test_jacobi(self):
        """P_1^{(a,b)}(t) = (a+1) + (a+b+2)(t-1)/2"""
        value = self.backend.jacobi(1, 1, "1/2", "1/3")
        assert value == 2 + sympy.Rational(7, 2) * (sympy.Rational(1, 3) - 1) / 2

    def test_linear_algebra(self):
        """行列式、解、階数"""
        m = self.backend.matrix([[2, 1], [1, 1]])
        assert self.backend.det(m) == 1
        assert self.backend.solve(m, self.backend.column([3, 2])) == self.backend.column([1, 1])
        assert self.backend.rank(m) == 2
        assert self.backend.is_singular(self.backend.matrix([[1, 2], [2, 4]]))

    def test_empty_matrices(self):
        """0x0 行列の行列式は 1"""
        empty = self.backend.zeros(0, 0)
        assert self.backend.det(empty) == 1
        assert self.backend.inv(empty).shape == (0, 0)
        assert self.backend.matrix([], 3).shape == (0, 3)

    def test_magnitude_is_exact(self):
        """最大絶対値は有理数のまま"""
        m = self.backend.matrix([["-1/3", "1/4"]])
        assert self.backend.magnitude(m) == sympy.Rational(1, 3)
        assert self.backend.magnitude(self.backend.zeros(0, 2)) == 0

    def test_format(self):
        """有理数は p/q"""
        assert self.backend.format(sympy.Rational(-3, 4)) == "-3/4"
        assert self.backend.format(2) == "2"


class TestFloatBackend:
    """浮動小数点バックエンドのテスト"""

    def setup_method(self, method):
        self.backend = get_backend("float", 1e-12)

    def test_scalar_conversion(self):
        """文字列の有理数も float に変換"""
        assert self.backend.scalar("1/4") == 0.25
        assert isinstance(self.backend.scalar(3), float)

    def test_singularity_is_relative(self):
        """最小特異値を最大成分で正規化して判定"""
        nearly = np.array([[1.0, 1.0], [1.0, 1.0 + 1e-14]])
        assert self.backend.is_singular(nearly)
        assert not self.backend.is_singular(np.array([[1e-6, 0.0], [0.0, 1e-6]]))

    def test_special_functions(self):
        """scipy.special の値"""
        assert self.backend.rising(0.5, 2) == pytest.approx(0.75)
        assert self.backend.gamma(0.5) == pytest.approx(np.sqrt(np.pi))
        assert self.backend.jacobi(1, 1, 0.5, 1.0) == pytest.approx(2.0)

    def test_format(self):
        """repr 形式"""
        assert self.backend.format(0.5) == "0.5"


class TestFactory:
    """get_backend のテスト"""

    def test_available(self):
        """二つのバックエンド"""
        assert available_backends() == ["exact", "float"]

    def test_unknown_backend(self):
        """未知の名前は ConfigurationError"""
        with pytest.raises(ConfigurationError, match="unknown backend"):
            get_backend("quad")

    def test_tolerance(self):
        """許容誤差を保持"""
        assert get_backend("float", 1e-8).tolerance == 1e-8
