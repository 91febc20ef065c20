"""
検証スイートのテスト
"""

import sys
import os

import pytest
import sympy

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import get_backend
from opmod.verification import (
    CheckResult,
    _Recorder,
    ball_suite,
    bessel_laguerre_suite,
    christoffel_suite,
    limit_suite,
    ops_suite,
    sample_points,
    uvarov_suite,
    verify_all,
)


def failures(results):
    return [(r.suite, r.check, r.degree, r.residual) for r in results if not r.passed]


class TestRecorder:
    """残差の判定"""

    def test_exact_requires_zero(self):
        """厳密バックエンドではちょうど 0 のときだけ合格"""
        exact = get_backend("exact")
        rec = _Recorder(exact, "unit")
        assert rec.scalar("zero", 0, sympy.Integer(0)).passed
        assert not rec.scalar("tiny", 0, sympy.Rational(1, 10**30)).passed
        assert rec.matrix("matrix", 1, sympy.zeros(2, 2)).passed

    def test_float_tolerance(self):
        """浮動小数点では許容誤差で判定"""
        rec = _Recorder(get_backend("float"), "unit", 1e-10)
        assert rec.scalar("small", 0, 1e-12).passed
        assert not rec.scalar("large", 0, 1e-6).passed
        assert [result.check for result in rec.results] == ["small", "large"]

    def test_check_result(self):
        """CheckResult はスイート名と次数を持つ"""
        result = CheckResult("ops", "orthogonality", 2, 0, True)
        assert (result.suite, result.degree) == ("ops", 2)

    def test_sample_points(self):
        """探索点の個数と次元"""
        points = sample_points(get_backend("exact"), 3, count=2)
        assert len(points) == 2
        assert all(len(point) == 3 for point in points)


class TestSuites:
    """小さな設定の受け入れスイート"""

    def test_ops_suite(self):
        """乱数の擬定値汎関数の OPS"""
        results = ops_suite(seeds=1, max_degree=3)
        assert results
        assert failures(results) == []

    def test_uvarov_suite(self):
        """1 個と 2 個の点質量"""
        results = uvarov_suite(seeds=2, max_degree=3)
        assert failures(results) == []

    def test_christoffel_suite(self):
        """乱数の組と円板の例"""
        results = christoffel_suite(seeds=1, max_degree=3)
        suites = {result.suite for result in results}
        assert suites == {"christoffel", "christoffel_disk"}
        assert failures(results) == []

    def test_ball_suite(self):
        """明示的な基底と閉じた形"""
        results = ball_suite(max_degree=3)
        checks = {result.check for result in results}
        assert {"basis_gram", "kernel_at_origin", "adjacent", "uvarov_kernel"} <= checks
        assert failures(results) == []

    def test_bessel_laguerre_suite(self):
        """ノルム、Krall–Sheffer、λ_n の判定"""
        results = bessel_laguerre_suite(max_degree=3)
        checks = {result.check for result in results}
        assert {"norms", "krall_sheffer", "criterion", "failure_degree", "reduction"} <= checks
        assert failures(results) == []

    def test_limit_suite_mass(self):
        """K_n(v;0,0) → 1/λ"""
        results = limit_suite(degrees=(10, 50, 200))
        mass_checks = [result for result in results if result.check.startswith("mass_limit")]
        assert len(mass_checks) == 6
        assert all(result.passed for result in mass_checks)
        interior = [result for result in results if result.check == "interior_limit"]
        assert len(interior) == 1
        assert interior[0].passed


@pytest.mark.slow
class TestVerifyAll:
    """すべてのスイート"""

    def test_verify_all(self):
        """20 個のシードで極限を含む全項目が合格"""
        results = verify_all(20)
        assert failures(results) == []
        assert {result.suite for result in results} >= {
            "ops",
            "uvarov",
            "christoffel",
            "christoffel_disk",
            "ball",
            "limits",
            "bessel_laguerre",
        }
