"""
構造化エラーハンドリング

直交多項式系の構成・変形で発生するエラーを、統一された形式のカスタム例外として提供します。
各例外は CLI の終了コードとレポート用の詳細情報を持ちます。
"""

from typing import Dict, Any, Optional, List
from dataclasses import dataclass


@dataclass(eq=False)
class OPModError(Exception):
    """opmod エラーの基底クラス"""

    message: str
    exit_code: int = 1
    error_code: Optional[str] = None
    details: Optional[Dict[str, Any]] = None

    def __post_init__(self) -> None:
        """初期化後の処理"""
        if self.error_code is None:
            self.error_code = f"ERR_{self.exit_code}"

        if self.details is None:
            self.details = {}

        # Exception の message を設定
        super().__init__(self.message)

    def to_dict(self) -> Dict[str, Any]:
        """辞書形式に変換"""
        result: Dict[str, Any] = {
            "error": self.error_code,
            "message": self.message,
            "exit_code": self.exit_code,
        }

        if self.details:
            result["details"] = self.details

        return result


class _DegreeError(OPModError):
    """次数を伴うエラーの共通処理"""

    default_code = "DEGREE_ERROR"

    def __init__(
        self,
        degree: int,
        message: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        error_details["degree"] = degree
        self.degree = degree

        super().__init__(
            message=message or f"{type(self).__name__} at degree {degree}",
            exit_code=2,
            error_code=self.default_code,
            details=error_details,
        )


class SingularMomentMatrix(_DegreeError):
    """モーメント行列 M_k が特異（擬定値でない）"""

    default_code = "SINGULAR_MOMENT_MATRIX"


class SingularGram(_DegreeError):
    """Gram 行列 H_n が特異"""

    default_code = "SINGULAR_GRAM"


class NotQuasiDefinite(_DegreeError):
    """変形後の汎関数が擬定値でない"""

    default_code = "NOT_QUASI_DEFINITE"


class MassDegenerate(_DegreeError):
    """1 + λK_{n-1}(0,0) = 0 となり原点質量の公式が退化する"""

    default_code = "MASS_DEGENERATE"


class NoThreeTerm(OPModError):
    """接続係数から作った多項式が三項関係を満たさない"""

    def __init__(
        self,
        degree: int,
        variable: int,
        residual: Any = None,
        relation: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        error_details["degree"] = degree
        error_details["variable"] = variable
        if relation:
            error_details["relation"] = relation
        self.degree = degree
        self.variable = variable
        self.residual = residual

        message = f"no three-term relation at degree {degree} for x_{variable}"
        if relation:
            message += f" ({relation})"

        super().__init__(
            message=message, exit_code=2, error_code="NO_THREE_TERM", details=error_details
        )


class DegreeCollapse(OPModError):
    """N_2 = 0 のため乗数の次数が 2 にならない"""

    def __init__(
        self,
        message: str = "N_2 vanishes; not a degree-2 Christoffel pair",
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(
            message=message, exit_code=2, error_code="DEGREE_COLLAPSE", details=details
        )


class InconsistentSymmetry(OPModError):
    """中心対称性の二つの判定が食い違う"""

    def __init__(
        self,
        message: str = "central symmetry verdicts disagree",
        moments_route: Optional[bool] = None,
        recurrence_route: Optional[bool] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        if moments_route is not None:
            error_details["moments_route"] = moments_route
        if recurrence_route is not None:
            error_details["recurrence_route"] = recurrence_route

        super().__init__(
            message=message,
            exit_code=70,
            error_code="INCONSISTENT_SYMMETRY",
            details=error_details,
        )


class InadmissibleParameters(OPModError):
    """族のパラメータが許容範囲外"""

    def __init__(
        self,
        message: str,
        family: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        if family:
            error_details["family"] = family

        super().__init__(
            message=message,
            exit_code=64,
            error_code="INADMISSIBLE_PARAMETERS",
            details=error_details,
        )


class InvalidModificationError(OPModError):
    """点質量や乗数の指定が不正"""

    def __init__(
        self,
        message: str,
        field: Optional[str] = None,
        value: Any = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        if field:
            error_details["field"] = field
        if value is not None:
            error_details["value"] = str(value)

        super().__init__(
            message=message,
            exit_code=64,
            error_code="INVALID_MODIFICATION",
            details=error_details,
        )


class SpecFileError(OPModError):
    """仕様ファイルの読み込み・検証エラー"""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        field: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        if line is not None:
            error_details["line"] = line
            message = f"line {line}: {message}"
        if field:
            error_details["field"] = field

        super().__init__(
            message=message, exit_code=65, error_code="SPEC_FILE_ERROR", details=error_details
        )


class IrrationalMomentError(OPModError):
    """厳密バックエンドで有理数にならない値"""

    def __init__(
        self,
        value: Any,
        where: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        error_details["value"] = str(value)
        if where:
            error_details["where"] = where

        message = f"value {value} is not rational; use the float backend"
        if where:
            message = f"{where}: {message}"

        super().__init__(
            message=message, exit_code=64, error_code="IRRATIONAL_MOMENT", details=error_details
        )


class MissingMomentError(OPModError):
    """モーメント表に必要なモーメントがない"""

    def __init__(self, index: Any, details: Optional[Dict[str, Any]] = None):
        error_details = details or {}
        error_details["index"] = str(index)

        super().__init__(
            message=f"moment {index} is not given in the table",
            exit_code=65,
            error_code="MISSING_MOMENT",
            details=error_details,
        )


class UnknownExperimentError(OPModError):
    """未知の実験名"""

    def __init__(
        self,
        name: str,
        available: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        error_details["name"] = name
        if available:
            error_details["available"] = available

        super().__init__(
            message=f"unknown experiment '{name}'",
            exit_code=64,
            error_code="UNKNOWN_EXPERIMENT",
            details=error_details,
        )


class ConfigurationError(OPModError):
    """実行設定エラー"""

    def __init__(
        self,
        message: str,
        option: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        error_details = details or {}
        if option:
            error_details["option"] = option

        super().__init__(
            message=message, exit_code=64, error_code="CONFIGURATION_ERROR", details=error_details
        )


# 便利な関数
def create_error_payload(error: OPModError, command: Optional[str] = None) -> Dict[str, Any]:
    """エラーレポート用の辞書を作成"""
    payload = error.to_dict()

    if command:
        payload["command"] = command

    return payload


def format_modification_errors(
    errors: List[InvalidModificationError],
) -> InvalidModificationError:
    """複数の変形指定エラーをまとめる"""
    if len(errors) == 1:
        return errors[0]

    error_details = {"errors": [err.to_dict() for err in errors], "count": len(errors)}

    return InvalidModificationError(
        message=f"Multiple modification errors ({len(errors)} errors)", details=error_details
    )
