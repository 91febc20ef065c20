"""
エラーハンドリング機能のテスト
"""

import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from opmod import (
    ConfigurationError,
    DegreeCollapse,
    InadmissibleParameters,
    InvalidModificationError,
    MissingMomentError,
    NoThreeTerm,
    NotQuasiDefinite,
    OPModError,
    Report,
    SingularGram,
    SingularMomentMatrix,
    SpecFileError,
    UnknownExperimentError,
    error_handler,
    get_global_registry,
)
from opmod.error_handlers import UNKNOWN_ERROR_EXIT_CODE, ErrorHandlerRegistry
from opmod.exceptions import create_error_payload, format_modification_errors


class TestExceptions:
    """カスタム例外のテスト"""

    def test_base_error(self):
        """OPModError の既定値"""
        error = OPModError("Something went wrong")
        assert error.message == "Something went wrong"
        assert error.exit_code == 1
        assert error.error_code == "ERR_1"
        assert error.details == {}
        assert str(error) == "Something went wrong"

    def test_degree_errors(self):
        """次数を伴うエラーは終了コード 2"""
        for error_type, code in [
            (SingularMomentMatrix, "SINGULAR_MOMENT_MATRIX"),
            (SingularGram, "SINGULAR_GRAM"),
            (NotQuasiDefinite, "NOT_QUASI_DEFINITE"),
        ]:
            error = error_type(3)
            assert error.degree == 3
            assert error.exit_code == 2
            assert error.error_code == code
            assert error.details["degree"] == 3
            assert "degree 3" in error.message

    def test_no_three_term(self):
        """関係式の名前をメッセージと詳細に含める"""
        error = NoThreeTerm(3, 1, relation="consistency_m")
        assert error.details == {"degree": 3, "variable": 1, "relation": "consistency_m"}
        assert error.message == "no three-term relation at degree 3 for x_1 (consistency_m)"

    def test_degree_collapse(self):
        """DegreeCollapse の既定メッセージ"""
        error = DegreeCollapse()
        assert "N_2" in error.message
        assert error.error_code == "DEGREE_COLLAPSE"

    def test_input_errors(self):
        """入力エラーは終了コード 64 または 65"""
        assert InadmissibleParameters("bad", family="ball").exit_code == 64
        assert ConfigurationError("bad", option="degree").details == {"option": "degree"}
        assert MissingMomentError((1, 2)).exit_code == 65
        assert UnknownExperimentError("x", ["adjacent"]).details["available"] == ["adjacent"]

    def test_spec_file_error_line(self):
        """行番号をメッセージの先頭に付ける"""
        error = SpecFileError("Expecting value", line=4)
        assert error.message == "line 4: Expecting value"
        assert error.details["line"] == 4

    def test_to_dict(self):
        """辞書形式"""
        error = InvalidModificationError(
            "masses must be nonzero", field="masses[0].lambda", value=0
        )
        result = error.to_dict()
        assert result["error"] == "INVALID_MODIFICATION"
        assert result["exit_code"] == 64
        assert result["details"] == {"field": "masses[0].lambda", "value": "0"}

    def test_error_payload(self):
        """コマンド名つきの辞書"""
        payload = create_error_payload(SingularGram(2), "build")
        assert payload["command"] == "build"
        assert payload["error"] == "SINGULAR_GRAM"

    def test_format_modification_errors(self):
        """複数のエラーを一つにまとめる"""
        single = InvalidModificationError("one")
        assert format_modification_errors([single]) is single
        combined = format_modification_errors([single, InvalidModificationError("two")])
        assert combined.details["count"] == 2
        assert "2 errors" in combined.message


class TestErrorHandlerRegistry:
    """エラーハンドラーのテスト"""

    def setup_method(self, method):
        self.registry = ErrorHandlerRegistry()

    def test_opmod_error_becomes_failure_report(self):
        """OPModError は失敗レポートになる"""
        report = self.registry.handle_error(SingularMomentMatrix(2), "build")
        assert not report.passed
        assert report.exit_code == 2
        assert report.summary["error"]["error"] == "SINGULAR_MOMENT_MATRIX"
        rows = dict(report.table("error").rows)
        assert rows["details.degree"] == 2
        assert rows["command"] == "build"

    def test_unknown_error(self):
        """想定外の例外は INTERNAL_ERROR"""
        report = self.registry.handle_error(RuntimeError("boom"), "uvarov")
        assert report.exit_code == UNKNOWN_ERROR_EXIT_CODE
        assert report.summary["error"]["error"] == "INTERNAL_ERROR"
        rows = dict(report.table("error").rows)
        assert rows["message"] == "RuntimeError: boom"

    def test_registered_handler(self):
        """登録したハンドラーが優先される"""

        def handle_singular(error, command):
            return Report(command, passed=False, exit_code=3)

        self.registry.register(SingularGram, handle_singular)
        assert self.registry.handle_error(SingularGram(1), "build").exit_code == 3
        assert self.registry.handle_error(SingularMomentMatrix(1), "build").exit_code == 2

    def test_default_handler(self):
        """OPModError 以外はデフォルトハンドラーへ"""

        def fallback(error, command):
            return Report(command, passed=False, exit_code=99)

        self.registry.set_default_handler(fallback)
        assert self.registry.handle_error(KeyError("x"), "build").exit_code == 99
        assert self.registry.handle_error(SingularGram(1), "build").exit_code == 2

    def test_base_class_handler(self):
        """基底クラスのハンドラーは派生クラスにも使われ、近い方が優先"""

        def handle_base(error, command):
            return Report(command, passed=False, exit_code=5)

        def handle_gram(error, command):
            return Report(command, passed=False, exit_code=6)

        self.registry.register(OPModError, handle_base)
        self.registry.register(SingularGram, handle_gram)
        assert self.registry.handle_error(SingularMomentMatrix(1), "build").exit_code == 5
        assert self.registry.handle_error(SingularGram(1), "build").exit_code == 6

    def test_decorator_registers_globally(self):
        """error_handler デコレータはグローバルレジストリに登録"""

        class LocalError(Exception):
            pass

        @error_handler(LocalError)
        def handle_local(error, command):
            return Report(command, passed=False, exit_code=9)

        registry = get_global_registry()
        try:
            assert registry.lookup(LocalError()) is handle_local
            assert registry.handle_error(LocalError(), "uvarov").exit_code == 9
        finally:
            registry._handlers.pop(LocalError)
