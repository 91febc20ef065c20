"""
Bessel–Laguerre 族のテスト
"""

import sys
import os

import pytest
import sympy

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import InadmissibleParameters, NotQuasiDefinite, build_monic_ops, get_backend
from opmod.families import (
    bessel_laguerre_uvarov,
    bl_basis_eval,
    bl_functional,
    bl_moment,
    bl_norm,
    krall_sheffer_residual,
)
from opmod.families.bessel_laguerre import bl_basis_coefficients, bl_kernel_at_origin
from opmod.polynomial import monomial_vector

R = sympy.Rational


class TestMoments:
    """g = 1、γ = 2 のモーメント"""

    def setup_method(self, method):
        self.backend = get_backend("exact")

    @pytest.mark.parametrize(
        "nu,expected",
        [
            ((0, 0), 1),
            ((1, 0), 1),
            ((0, 1), 2),
            ((2, 0), R(1, 2)),
            ((1, 1), 1),
            ((0, 2), 3),
        ],
    )
    def test_low_moments(self, nu, expected):
        """低次のモーメント"""
        assert bl_moment(self.backend, 1, 2, nu) == expected

    def test_inadmissible(self):
        """g = 0 と gγ ≤ -2 は許容しない"""
        with pytest.raises(InadmissibleParameters, match="nonzero"):
            bl_functional(self.backend, 0, 2)
        with pytest.raises(InadmissibleParameters, match="exceed -2"):
            bl_functional(self.backend, 1, -3)


class TestBasis:
    """明示的な基底と直交性"""

    def setup_method(self, method):
        self.backend = get_backend("exact")
        self.u = bl_functional(self.backend, 1, 2, 4)

    def test_basis_eval(self):
        """P_{n,m}(x, y) は係数行列と同じ値"""
        point = (R(1, 3), R(-1, 2))
        basis = bl_basis_coefficients(self.backend, 1, 2, 2)
        values = basis @ monomial_vector(self.backend, point, 2)
        for m in range(3):
            assert bl_basis_eval(self.backend, 1, 2, 2, m, point) == values[m, 0]

    def test_basis_index(self):
        """m > n はエラー"""
        with pytest.raises(ValueError, match="0 <= m <= n"):
            bl_basis_eval(self.backend, 1, 2, 1, 2, (0, 0))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_orthogonal_to_lower_degrees(self, n):
        """P_{n,m} は次数 n-1 以下と直交"""
        basis = bl_basis_coefficients(self.backend, 1, 2, n)
        assert self.backend.is_zero(self.u.moment_rectangle(n - 1, n) @ basis.T)

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_norms(self, n):
        """⟨u, P_{n,m} P_{n,l}⟩ = δ_{ml} ノルム"""
        basis = bl_basis_coefficients(self.backend, 1, 2, n)
        expected = self.backend.diag([bl_norm(self.backend, 1, 2, n, m) for m in range(n + 1)])
        assert self.u.pairing(basis, basis) == expected

    def test_not_positive_definite(self):
        """正定値ではないが擬定値"""
        verdicts = self.u.is_quasi_definite(3)
        assert all(verdict.quasi_definite for verdict in verdicts)
        assert any(verdict.measure < 0 for verdict in verdicts)

    @pytest.mark.parametrize("n,m", [(1, 0), (2, 1), (3, 0), (3, 2)])
    def test_krall_sheffer_equation(self, n, m):
        """二階偏微分方程式を満たす"""
        assert krall_sheffer_residual(1, 2, n, m) == 0
        assert krall_sheffer_residual(R(3, 2), R(1, 2), n, m) == 0

    def test_kernel_at_origin(self):
        """K_n((0,0),(0,0)) = (-1)^n（g = 1、γ = 2）"""
        ops = build_monic_ops(self.u, 3)
        for n in range(4):
            assert bl_kernel_at_origin(self.backend, 1, 2, n) == (-1) ** n
            assert ops.kernel(n, (0, 0), (0, 0)) == (-1) ** n


class TestOriginMass:
    """u + λδ_{(0,0)} の擬定値性"""

    def setup_method(self, method):
        self.backend = get_backend("exact")

    def test_unit_mass_fails_at_degree_one(self):
        """λ = 1 では λ_1 = 0"""
        modified = bessel_laguerre_uvarov(self.backend, 1, 2, 1)
        assert modified.lambda_n(0) == 2
        assert modified.first_failure(6) == 1
        with pytest.raises(NotQuasiDefinite):
            modified.q_polynomial(2, 0)

    def test_third_mass_passes(self):
        """λ = 1/3 ではすべての λ_n ≠ 0"""
        modified = bessel_laguerre_uvarov(self.backend, 1, 2, R(1, 3))
        table = modified.lambda_table(8)
        assert all(passed for _, _, passed in table)
        assert table[1][1] == R(2, 3)
        assert modified.first_failure(8) is None

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_modified_basis_is_orthogonal(self, n):
        """Q_{n,m} は v について低い次数と直交"""
        modified = bessel_laguerre_uvarov(self.backend, 1, 2, R(1, 3))
        u = bl_functional(self.backend, 1, 2, 4)
        v = u.add_point_masses([(0, 0)], [R(1, 3)])
        q = modified.q_coefficients(n)
        assert self.backend.is_zero(v.moment_rectangle(n - 1, n) @ q.T)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_reduction_to_bessel(self, n):
        """Q_{n,0} は一変数 Bessel の Uvarov 変形のモニック OPS に比例"""
        modified = bessel_laguerre_uvarov(self.backend, 1, 2, R(1, 3))
        assert self.backend.is_zero(modified.reduction_residual(n))
