"""
多項式の係数表現のテスト
"""

import sys
import os

import pytest
import sympy

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import get_backend
from opmod.polynomial import (
    VectorPolynomial,
    coefficient_row,
    degree_for_size,
    monomial_vector,
    monomials,
    multiply_by_polynomial,
    multiply_by_variable,
    multiply_polynomials,
    pad,
    position,
    row_to_polynomial,
)

R = sympy.Rational


class TestOrdering:
    """単項式の大域順序"""

    def test_monomials(self):
        """全次数順、次数内は (2,0), (1,1), (0,2)"""
        assert monomials(2, 2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))

    def test_position(self):
        """大域位置は monomials の添字"""
        for index, nu in enumerate(monomials(3, 3)):
            assert position(nu) == index

    def test_degree_for_size(self):
        """列数から次数"""
        assert degree_for_size(6, 2) == 2
        assert degree_for_size(1, 3) == 0
        with pytest.raises(ValueError, match="do not match"):
            degree_for_size(4, 2)


class TestCoefficients:
    """係数行列の操作"""

    def setup_method(self, method):
        self.backend = get_backend("exact")

    def test_coefficient_row(self):
        """x1^2 - 1/4"""
        row = coefficient_row(self.backend, {(2, 0): 1, (0, 0): R(-1, 4)}, 2, 2)
        assert list(row) == [R(-1, 4), 0, 0, 1, 0, 0]
        assert row_to_polynomial(self.backend, row, 2) == {(0, 0): R(-1, 4), (2, 0): 1}

    def test_coefficient_row_degree(self):
        """次数を超える項はエラー"""
        with pytest.raises(ValueError, match="exceeds degree 1"):
            coefficient_row(self.backend, {(1, 1): 1}, 2, 1)

    def test_multiply_by_variable(self):
        """x2 (x1 + 1) = x1x2 + x2"""
        row = coefficient_row(self.backend, {(1, 0): 1, (0, 0): 1}, 2, 1)
        product = multiply_by_variable(self.backend, row, 2, 2)
        assert row_to_polynomial(self.backend, product, 2) == {(1, 1): 1, (0, 1): 1}

    def test_multiply_by_polynomial(self):
        """(1 - x1^2 - x2^2) x1"""
        row = coefficient_row(self.backend, {(1, 0): 1}, 2, 1)
        q = {(0, 0): 1, (2, 0): -1, (0, 2): -1}
        product = multiply_by_polynomial(self.backend, row, 2, q)
        assert product.shape == (1, 10)
        assert row_to_polynomial(self.backend, product, 2) == {
            (1, 0): 1,
            (3, 0): -1,
            (1, 2): -1,
        }

    def test_multiply_polynomials(self):
        """(x1 + x2)^2"""
        p = {(1, 0): 1, (0, 1): 1}
        assert multiply_polynomials(self.backend, p, p) == {(2, 0): 1, (1, 1): 2, (0, 2): 1}

    def test_monomial_vector(self):
        """𝕏(x) の値"""
        vector = monomial_vector(self.backend, (R(1, 2), 3), 2)
        assert list(vector) == [1, R(1, 2), 3, R(1, 4), R(3, 2), 9]

    def test_pad(self):
        """零列の追加"""
        row = coefficient_row(self.backend, {(1, 0): 2}, 2, 1)
        padded = pad(self.backend, row, 6)
        assert padded.shape == (1, 6)
        assert padded[:, :3] == row
        with pytest.raises(ValueError, match="cannot shrink"):
            pad(self.backend, padded, 3)


class TestVectorPolynomial:
    """ベクトル多項式"""

    def setup_method(self, method):
        self.backend = get_backend("exact")
        rows = [
            [R(-1, 4), 0, 0, 1, 0, 0],
            [0, 0, 0, 0, 1, 0],
            [R(-1, 4), 0, 0, 0, 0, 1],
        ]
        self.p2 = VectorPolynomial(2, 2, self.backend.matrix(rows), self.backend)

    def test_shape_check(self):
        """係数行列の形が次数と合わなければエラー"""
        with pytest.raises(ValueError, match="must be"):
            VectorPolynomial(2, 2, self.backend.zeros(2, 6), self.backend)

    def test_blocks(self):
        """G_{2,0} と主係数"""
        assert self.p2.size == 3
        assert list(self.p2.block(0)) == [R(-1, 4), 0, R(-1, 4)]
        assert self.p2.is_monic()

    def test_evaluate(self):
        """原点での値"""
        assert list(self.p2.evaluate((0, 0))) == [R(-1, 4), 0, R(-1, 4)]
        assert list(self.p2.evaluate((1, 1))) == [R(3, 4), 1, R(3, 4)]

    def test_component(self):
        """第 1 成分は x1x2"""
        assert self.p2.component(1) == {(1, 1): 1}

    def test_padded(self):
        """次数 3 まで延ばす"""
        assert self.p2.padded(3).shape == (3, 10)
