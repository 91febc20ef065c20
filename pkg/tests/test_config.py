"""
仕様ファイルと実行設定のテスト
"""

import sys
import os
import json

import pytest
import sympy

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import ConfigurationError, SpecFileError, create_run_config, get_backend, parse_spec
from opmod.config import (
    RunConfig,
    load_spec,
    parse_index,
    spec_functional,
    spec_masses,
    spec_multiplier,
)


class TestParseIndex:
    """多重指数のキー"""

    def test_parse(self):
        """"(i,j)" と "i,j" の両方を受け付ける"""
        assert parse_index("(2,1)") == (2, 1)
        assert parse_index(" 0, 3 ") == (0, 3)

    @pytest.mark.parametrize("key", ["()", "(a,b)", "(-1,0)"])
    def test_invalid(self, key):
        """空、非整数、負の成分はエラー"""
        with pytest.raises(ValueError, match="multi-index"):
            parse_index(key)


class TestFunctionalSpec:
    """仕様ファイルの検証"""

    def test_ball(self):
        """球の汎関数"""
        spec = parse_spec('{"kind": "ball", "d": 2, "mu": "1/2"}')
        assert spec.dimension == 2
        assert not spec.has_multiplier
        u = spec_functional(spec, get_backend("exact"), 4)
        assert u.moment((2, 0)) == sympy.Rational(1, 4)

    def test_table(self):
        """モーメント表と fill"""
        moments = {"(0,0)": 1, "(1,0)": "1/3"}
        spec = parse_spec(json.dumps({"kind": "table", "d": 2, "moments": moments, "fill": 0}))
        u = spec_functional(spec, get_backend("exact"), 2)
        assert u.moment((1, 0)) == sympy.Rational(1, 3)
        assert u.moment((4, 4)) == 0

    def test_product(self):
        """直積型の因子"""
        factors = [{"kind": "legendre"}, {"kind": "laguerre", "alpha": 1}]
        spec = parse_spec(json.dumps({"kind": "product", "factors": factors}))
        assert spec.dimension == 2
        u = spec_functional(spec, get_backend("exact"), 2)
        assert u.moment((2, 1)) == sympy.Rational(2, 3)

    def test_bessel_laguerre(self):
        """Bessel–Laguerre は二変数"""
        spec = parse_spec('{"kind": "bessel_laguerre", "g": 1, "gamma": 2}')
        assert spec.dimension == 2
        assert spec_functional(spec, get_backend("exact"), 4).moment((0, 2)) == 3

    def test_masses_and_multiplier(self):
        """点質量は "lambda" キー、乗数は lambda2/lambda1/lambda0"""
        spec = parse_spec(
            json.dumps(
                {
                    "kind": "ball",
                    "mu": "1/2",
                    "masses": [{"point": [0, 0], "lambda": "1/2"}],
                    "lambda2": [-1, 0, -1],
                    "lambda0": 1,
                }
            )
        )
        points, masses = spec_masses(spec)
        assert points == [[0, 0]]
        assert masses == ["1/2"]
        multiplier = spec_multiplier(spec, get_backend("exact"))
        assert multiplier.a0 == 1
        assert multiplier.a1 == (0, 0)

    def test_missing_multiplier(self):
        """lambda2 がなければエラー"""
        spec = parse_spec('{"kind": "ball", "mu": 1}')
        with pytest.raises(SpecFileError, match="lambda2"):
            spec_multiplier(spec, get_backend("exact"))

    def test_required_fields(self):
        """種類ごとの必須項目"""
        with pytest.raises(SpecFileError, match="requires mu"):
            parse_spec('{"kind": "ball", "d": 2}')
        with pytest.raises(SpecFileError, match="requires moments"):
            parse_spec('{"kind": "table", "d": 2}')

    def test_unknown_field(self):
        """未知のフィールドはフィールド名つきのエラー"""
        with pytest.raises(SpecFileError) as excinfo:
            parse_spec('{"kind": "ball", "mu": 1, "sigma": 2}')
        assert excinfo.value.details["field"] == "sigma"
        assert excinfo.value.exit_code == 65

    def test_irrational_text(self):
        """有理数でない文字列"""
        with pytest.raises(SpecFileError, match="not a rational number"):
            parse_spec('{"kind": "ball", "mu": "pi"}')

    def test_moment_index_length(self):
        """多重指数の長さは d と一致"""
        with pytest.raises(SpecFileError, match="does not have 2 entries"):
            parse_spec('{"kind": "table", "d": 2, "moments": {"(0,0,0)": 1}}')

    def test_load_spec(self, tmp_path):
        """ファイルから読み込む"""
        path = tmp_path / "disk.json"
        path.write_text('{"kind": "ball", "mu": "1/2"}', encoding="utf-8")
        assert load_spec(path).kind == "ball"

    def test_missing_file(self, tmp_path):
        """存在しないファイル"""
        with pytest.raises(SpecFileError, match="cannot read"):
            load_spec(tmp_path / "missing.json")


class TestRunConfig:
    """実行設定の検証"""

    def test_defaults(self):
        """デフォルト値"""
        config = create_run_config("verify-all")
        assert config.degree == 4
        assert config.backend == "exact"
        assert config.seeds == 20
        assert config.make_backend().exact

    def test_make_float_backend(self):
        """許容誤差を渡す"""
        config = create_run_config("verify-all", backend="float", tolerance=1e-8)
        assert config.make_backend().tolerance == 1e-8

    @pytest.mark.parametrize(
        "kwargs,option",
        [
            ({"command": "plot"}, "command"),
            ({"command": "verify-all", "degree": -1}, "degree"),
            ({"command": "verify-all", "backend": "quad"}, "backend"),
            ({"command": "verify-all", "tolerance": 0}, "tol"),
            ({"command": "verify-all", "seeds": 0}, "seeds"),
            ({"command": "verify-all", "log_level": "trace"}, "log-level"),
            ({"command": "build"}, "spec"),
            ({"command": "uvarov"}, "spec"),
            ({"command": "experiment"}, "name"),
        ],
    )
    def test_invalid(self, kwargs, option):
        """不正な設定は ConfigurationError"""
        with pytest.raises(ConfigurationError) as excinfo:
            RunConfig(**kwargs)
        assert excinfo.value.details["option"] == option

    def test_seed_is_enough(self):
        """uvarov と christoffel は --seed だけでもよい"""
        assert create_run_config("christoffel", seed=3).seed == 3
