"""
CLI のテスト
"""

import sys
import os
import csv
import json

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod.cli import build_parser, experiment_params, run


def read_csv(path):
    with path.open(encoding="utf-8") as handle:
        return list(csv.reader(handle))


@pytest.fixture
def disk_spec(tmp_path):
    """原点に質量 1 を置いた円板（μ = 1/2）と乗数 1 - ‖x‖²"""
    path = tmp_path / "disk.json"
    path.write_text(
        json.dumps(
            {
                "kind": "ball",
                "d": 2,
                "mu": "1/2",
                "masses": [{"point": [0, 0], "lambda": 1}],
                "lambda2": [-1, 0, -1],
                "lambda0": 1,
            }
        ),
        encoding="utf-8",
    )
    return str(path)


class TestParser:
    """引数の解析"""

    def test_experiment_params(self):
        """指定されたオプションだけを渡す"""
        parser = build_parser()
        args = parser.parse_args(
            ["experiment", "ball-mass-limit", "--mass", "1/2", "--mass", "2", "--n-max", "50"]
        )
        params = experiment_params(args)
        assert params["n_max"] == 50
        assert [str(mass) for mass in params["masses"]] == ["1/2", "2"]
        assert "mu" not in params

    def test_single_mass(self):
        """他の実験では最後の質量を使う"""
        args = build_parser().parse_args(
            ["experiment", "ball-interior", "--mass", "3", "--dim", "3"]
        )
        assert experiment_params(args) == {"d": 3, "mass": 3}

    def test_invalid_rational(self):
        """有理数でない --mu"""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["experiment", "adjacent", "--mu", "pi"])


class TestRun:
    """コマンドの実行と終了コード"""

    def test_no_command(self, capsys):
        """コマンドなしはヘルプを表示して 64"""
        assert run([]) == 64
        assert "opmod" in capsys.readouterr().out

    def test_build(self, disk_spec, tmp_path, capsys):
        """build は CSV と要約を書き出す"""
        out = tmp_path / "out"
        assert run(["build", "--spec", disk_spec, "--degree", "2", "--out", str(out)]) == 0
        assert "✅ build: passed" in capsys.readouterr().out
        names = sorted(path.name for path in out.iterdir())
        assert names == [
            "build_gram.csv",
            "build_polynomials.csv",
            "build_quasi_definite.csv",
            "build_recurrence.csv",
            "build_summary.json",
        ]
        assert ["1", "0", "0", "1/4"] in read_csv(out / "build_gram.csv")
        summary = json.loads((out / "build_summary.json").read_text(encoding="utf-8"))
        assert summary["built_degree"] == 2
        assert summary["failed_degree"] is None

    def test_build_needs_spec(self, capsys):
        """--spec なしの build は設定エラー"""
        assert run(["build"]) == 64
        assert "build needs --spec" in capsys.readouterr().out

    def test_invalid_spec(self, tmp_path, capsys):
        """壊れた仕様ファイルは 65"""
        path = tmp_path / "broken.json"
        path.write_text('{"kind": "ball",\n "mu": }', encoding="utf-8")
        assert run(["build", "--spec", str(path)]) == 65
        output = capsys.readouterr().out
        assert "❌ build: line 2" in output
        assert '"SPEC_FILE_ERROR"' in output

    def test_uvarov_with_spec(self, disk_spec, tmp_path):
        """原点の質量では閉じた形の表も出す"""
        out = tmp_path / "out"
        assert run(["uvarov", "--spec", disk_spec, "--degree", "3", "--out", str(out)]) == 0
        rows = read_csv(out / "uvarov_ball_closed_form.csv")
        assert rows[0] == ["degree", "generic", "closed_form", "residual"]
        assert len(rows) == 5
        certificate = read_csv(out / "uvarov_certificate.csv")
        assert all(row[-1] == "true" for row in certificate[1:])

    def test_uvarov_with_seed(self, capsys):
        """--seed だけで乱数のインスタンス"""
        assert run(["uvarov", "--seed", "0", "--degree", "2"]) == 0
        output = capsys.readouterr().out
        assert "✅ uvarov: passed" in output
        assert '"first_failure": null' in output

    def test_christoffel_with_spec(self, disk_spec, tmp_path):
        """乗数 1 - ‖x‖² の検証"""
        out = tmp_path / "out"
        assert run(["christoffel", "--spec", disk_spec, "--degree", "3", "--out", str(out)]) == 0
        multiplier = read_csv(out / "christoffel_multiplier.csv")
        assert multiplier[0] == ["monomial", "coefficient"]
        checks = read_csv(out / "christoffel_checks.csv")
        assert checks[0] == ["suite", "check", "equation", "degree", "residual", "passed"]
        assert all(row[-1] == "true" for row in checks[1:])
        equations = {row[2] for row in checks[1:]}
        assert {"4.5", "4.6", "4.7", "4.9", "N_2", "recovery"} <= equations

    def test_christoffel_mutation_row(self, tmp_path):
        """N_3 の変異は関係式 4.7 の行として出力"""
        out = tmp_path / "out"
        assert run(["christoffel", "--seed", "0", "--degree", "4", "--out", str(out)]) == 0
        checks = read_csv(out / "christoffel_checks.csv")
        mutation = [row for row in checks[1:] if row[1].startswith("mutation_")]
        assert len(mutation) == 1
        assert mutation[0][2] == "4.7"
        assert mutation[0][3] == "3"
        assert mutation[0][-1] == "true"

    def test_experiment(self, tmp_path):
        """実験の表は実験名で書き出す"""
        out = tmp_path / "out"
        assert run(["experiment", "adjacent", "--degree", "2", "--out", str(out)]) == 0
        rows = read_csv(out / "adjacent_adjacent.csv")
        assert rows[0] == ["n", "residual"]
        assert (out / "adjacent_summary.json").exists()

    def test_unknown_experiment(self, capsys):
        """未登録の実験名は 64"""
        assert run(["experiment", "ball-boundary"]) == 64
        assert "ball-boundary" in capsys.readouterr().out
