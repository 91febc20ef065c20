"""
数値実験のテスト
"""

import sys
import os

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import ConfigurationError, UnknownExperimentError
from opmod.experiments import (
    EXPERIMENTS,
    ExperimentResult,
    available_experiments,
    experiment,
    run_experiment,
)


class TestRegistry:
    """実験の登録"""

    def test_available(self):
        """組み込みの実験"""
        assert available_experiments() == [
            "adjacent",
            "ball-interior",
            "ball-mass-limit",
            "bessel-laguerre-lambda",
        ]

    def test_register(self):
        """デコレータで登録した実験を名前で呼べる"""

        @experiment("constant")
        def constant(value: int = 1) -> ExperimentResult:
            return ExperimentResult("constant", passed=value > 0)

        try:
            assert run_experiment("constant").passed
            assert not run_experiment("constant", value=0).passed
        finally:
            del EXPERIMENTS["constant"]

    def test_unknown_name(self):
        """未登録の名前"""
        with pytest.raises(UnknownExperimentError) as excinfo:
            run_experiment("ball-boundary")
        assert "adjacent" in excinfo.value.details["available"]

    def test_unknown_parameter(self):
        """受け取らないパラメータ"""
        with pytest.raises(ConfigurationError, match="does not take radius"):
            run_experiment("adjacent", radius=0.5)


class TestExperiments:
    """実験の表と合否"""

    def test_adjacent(self):
        """隣接族の残差は 1e-12 未満"""
        result = run_experiment("adjacent", mu=0.5, max_degree=3)
        assert result.passed
        table = result.tables[0]
        assert table.name == "adjacent"
        assert [row[0] for row in table.rows] == [0, 1, 2, 3]
        assert all(row[1] < 1e-12 for row in table.rows)

    def test_bessel_laguerre_lambda_failure(self):
        """λ = 1 では λ_1 = 0 で以降は擬定値でない"""
        result = run_experiment("bessel-laguerre-lambda", mass=1, max_degree=3)
        rows = result.tables[0].rows
        assert [row[1] for row in rows[:2]] == ["2", "0"]
        assert [row[2] for row in rows] == [True, False, False, False]

    def test_bessel_laguerre_lambda_regular(self):
        """λ = 1/3 ではすべての λ_n が 0 でない"""
        result = run_experiment("bessel-laguerre-lambda", mass="1/3", max_degree=3)
        rows = result.tables[0].rows
        assert rows[1][1] == "2/3"
        assert all(row[2] for row in rows)

    def test_ball_mass_limit(self):
        """K_n(v;0,0) は 1/λ に単調に近づく"""
        result = run_experiment("ball-mass-limit", masses=(1.0, 2.0), n_max=50)
        assert result.passed
        assert [table.name for table in result.tables] == ["mass_1", "mass_2"]
        rows = result.tables[1].rows
        assert [row[0] for row in rows] == [12, 25, 50]
        assert all(row[2] == 0.5 for row in rows)
        assert rows[-1][3] < rows[0][3]

    def test_ball_interior_table(self):
        """内部の点の表は次数ごとに一行"""
        result = run_experiment("ball-interior", n_max=40, radius=0.5)
        table = result.tables[0]
        assert table.columns == ["n", "ratio", "limit", "rel_err"]
        assert [row[0] for row in table.rows] == [10, 20, 40]
        assert all(row[2] == table.rows[0][2] for row in table.rows)
