"""
一変数の古典族と直積型汎関数のテスト
"""

import sys
import os

import pytest
import sympy

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import InadmissibleParameters, build_monic_ops, get_backend
from opmod.families import (
    bessel_functional,
    bessel_norm,
    laguerre_functional,
    product_functional,
    univariate_moments,
)
from opmod.families.special import (
    bessel_coefficients,
    bessel_eval,
    bessel_leading,
    bessel_moment,
    laguerre_coefficients,
    laguerre_eval,
)

R = sympy.Rational


class TestBessel:
    """B_n^{(a,b)} のテスト"""

    def setup_method(self, method):
        self.backend = get_backend("exact")

    def test_moments(self):
        """⟨b^{(a,b)}, x^k⟩ = (-b)^{k+1} / (a)_k"""
        assert bessel_moment(self.backend, 2, -2, 0) == 2
        assert bessel_moment(self.backend, 2, -2, 2) == R(8, 6)

    def test_coefficients(self):
        """B_1^{(2,-2)}(x) = 1 - x"""
        assert bessel_coefficients(self.backend, 1, 2, -2) == [1, -1]
        assert bessel_eval(self.backend, 1, 2, -2, 3) == -2
        assert bessel_leading(self.backend, 2, 2, -2) == R(3 * 4, 4)

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_norms(self, n):
        """⟨b, B_n B_m⟩ = δ_{nm} h_n"""
        u = bessel_functional(self.backend, 2, -2)
        row = self.backend.row(bessel_coefficients(self.backend, n, 2, -2))
        padded = self.backend.hstack([row, self.backend.zeros(1, 3 - n)])
        assert u.pairing(padded, padded)[0, 0] == bessel_norm(self.backend, n, 2, -2)
        if n > 0:
            lower = self.backend.row(bessel_coefficients(self.backend, n - 1, 2, -2))
            lower = self.backend.hstack([lower, self.backend.zeros(1, 4 - n)])
            assert u.pairing(padded, lower)[0, 0] == 0

    def test_inadmissible(self):
        """b = 0 と (a)_n = 0 はエラー"""
        with pytest.raises(InadmissibleParameters, match="nonzero"):
            bessel_functional(self.backend, 2, 0)
        with pytest.raises(InadmissibleParameters, match="vanish"):
            bessel_functional(self.backend, -1, 2)


class TestLaguerre:
    """L_n^{(α)} のテスト"""

    def setup_method(self, method):
        self.backend = get_backend("exact")

    def test_coefficients(self):
        """L_1^{(α)}(x) = α + 1 - x"""
        assert laguerre_coefficients(self.backend, 1, 2) == [3, -1]
        assert laguerre_eval(self.backend, 2, 0, 1) == R(-1, 2)

    def test_inadmissible(self):
        """α ≤ -1 はエラー"""
        with pytest.raises(InadmissibleParameters):
            laguerre_functional(self.backend, -1)


class TestProductFunctional:
    """直積型汎関数"""

    def setup_method(self, method):
        self.backend = get_backend("exact")

    def test_product_moments(self):
        """μ_ν = Π μ^{(i)}_{ν_i}"""
        factors = [
            univariate_moments(self.backend, "legendre"),
            univariate_moments(self.backend, "laguerre", alpha=1),
        ]
        u = product_functional(self.backend, factors)
        assert u.moment((2, 1)) == R(1, 3) * 2
        assert u.moment((1, 3)) == 0

    def test_hermite(self):
        """⟨t^4⟩ = 3/4"""
        assert univariate_moments(self.backend, "hermite")(4) == R(3, 4)

    def test_table_factor(self):
        """モーメント表の因子は長さを超えるとエラー"""
        factor = univariate_moments(self.backend, "table", moments=[1, 0, "1/2"])
        assert factor(2) == R(1, 2)
        with pytest.raises(InadmissibleParameters, match="moment 3"):
            factor(3)

    def test_unknown_factor(self):
        """未知の種類はエラー"""
        with pytest.raises(InadmissibleParameters, match="unknown univariate factor"):
            univariate_moments(self.backend, "chebyshev")

    def test_product_ops_is_quasi_definite(self):
        """Legendre × Laguerre は正定値"""
        factors = [
            univariate_moments(self.backend, "legendre"),
            univariate_moments(self.backend, "laguerre", alpha=0),
        ]
        ops = build_monic_ops(product_functional(self.backend, factors), 3)
        assert ops.max_degree == 3
        assert ops.failed_degree is None
