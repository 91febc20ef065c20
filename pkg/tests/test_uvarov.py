"""
Uvarov 変形のテスト
"""

import sys
import os

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import (
    InvalidModificationError,
    NotQuasiDefinite,
    SingularMomentMatrix,
    UvarovSystem,
    build_monic_ops,
    get_backend,
)
from opmod.families import ball_functional
from opmod.generators import random_uvarov_instance


class TestOriginMassOnDisk:
    """円板 μ = 1/2 に原点質量を加える"""

    def setup_method(self, method):
        self.backend = get_backend("exact")
        self.ops = build_monic_ops(ball_functional(self.backend, 2, "1/2"), 4)
        self.system = UvarovSystem.create(self.ops, [(0, 0)], [1])
        self.brute = build_monic_ops(self.system.modified_functional(), 3)

    def test_degree_zero(self):
        """Ĥ_0 = 1 + λ"""
        assert self.system.modified_gram(0) == self.backend.matrix([[2]])

    def test_certificates_pass(self):
        """正の質量ではすべての次数で合格"""
        verdicts = self.system.certify(4)
        assert all(verdict.passed for verdict in verdicts)
        assert verdicts[0].determinant == 1
        assert verdicts[1].determinant == 2
        assert self.system.first_failure(4) is None

    def test_connection_matches_direct_build(self):
        """接続公式の ℚ_n は v から直接作ったモニック OPS と一致"""
        for n in range(4):
            assert self.system.connect(n).coefficients == self.brute.coefficients(n)

    def test_modified_gram(self):
        """Ĥ_n とその逆行列"""
        for n in range(4):
            assert self.system.modified_gram(n) == self.brute.gram(n)
            assert self.system.modified_gram_inverse(n) == self.brute.gram_inverse(n)

    def test_modified_kernel(self):
        """K_n(v; x, y) を直接計算した核と比較"""
        x, y = (0, 0), ("1/3", "-1/2")
        for n in range(3):
            assert self.system.modified_kernel(n, x, y) == self.brute.kernel(n, x, y)

    def test_identities(self):
        """核の差分と行列の対称性"""
        for n in range(4):
            assert self.backend.is_zero(self.system.telescoping_residual(n))
            assert self.backend.is_zero(self.system.kernel_matrix_residual(n))
            assert self.backend.is_zero(self.system.resolvent_symmetry_residual(n))


class TestDegenerateMass:
    """λ = -1/4 では 1 + λK_2(0, 0) = 0"""

    def setup_method(self, method):
        self.backend = get_backend("exact")
        self.ops = build_monic_ops(ball_functional(self.backend, 2, "1/2"), 4)
        self.system = UvarovSystem.create(self.ops, [(0, 0)], ["-1/4"])

    def test_first_failure(self):
        """次数 2 で Ĥ_2 が特異、次数 3 で I + Λ𝒦_2 が特異"""
        assert self.system.first_failure(4) == 2
        second = self.system.certificate(2)
        assert second.resolvent_invertible
        assert second.gram_invertible is False
        third = self.system.certificate(3)
        assert not third.resolvent_invertible
        assert third.gram_invertible is None
        assert third.determinant == 0

    def test_connection_refuses(self):
        """判定に失敗した次数では NotQuasiDefinite"""
        with pytest.raises(NotQuasiDefinite) as excinfo:
            self.system.connect(3)
        assert excinfo.value.degree == 3

    def test_direct_build_agrees(self):
        """直接構成も次数 2 で特異"""
        with pytest.raises(SingularMomentMatrix) as excinfo:
            build_monic_ops(self.system.modified_functional(), 3)
        assert excinfo.value.degree == 2

    def test_modified_gram_inverse_needs_next_degree(self):
        """Ĥ_2^{-1} の公式は I + Λ𝒦_2 を使う"""
        with pytest.raises(NotQuasiDefinite, match="K_2"):
            self.system.modified_gram_inverse(2)


class TestInvalidMasses:
    """質量の指定エラー"""

    def setup_method(self, method):
        self.ops = build_monic_ops(ball_functional(get_backend("exact"), 2, "1/2"), 2)

    def test_zero_mass(self):
        """0 の質量は不正"""
        with pytest.raises(InvalidModificationError):
            UvarovSystem.create(self.ops, [(0, 0)], [0])

    def test_wrong_point_dimension(self):
        """点の次元が違う"""
        with pytest.raises(InvalidModificationError):
            UvarovSystem.create(self.ops, [(0, 0, 0)], [1])


class TestRandomInstances:
    """乱数の汎関数と複数の質量"""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_matches_direct_build(self, seed):
        """ℚ_n と Ĥ_n は直接構成と一致"""
        instance = random_uvarov_instance(seed, 2, 3, masses=2)
        system = instance.system
        brute = build_monic_ops(system.modified_functional(), 3)
        for n in range(4):
            assert system.connect(n).coefficients == brute.coefficients(n)
            assert system.modified_gram(n) == brute.gram(n)

    def test_deterministic(self):
        """同じシードからは同じ質量"""
        first = random_uvarov_instance(5, 2, 2)
        second = random_uvarov_instance(5, 2, 2)
        assert first.system.spec == second.system.spec
