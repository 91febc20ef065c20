"""
JSON 処理統一ハンドラー

仕様ファイルの読み込みとレポートの書き出しに使う JSON 処理です。
orjson がインストールされていれば使用します。
"""

import json
from typing import Any, Dict, Optional, Union

from .exceptions import SpecFileError

# オプション: orjson による高速化
try:
    import orjson

    HAS_ORJSON = True
except ImportError:
    HAS_ORJSON = False


def _default(value: Any) -> Any:
    """JSON にない型（sympy の有理数、numpy のスカラー）を文字列または float に変換"""
    if hasattr(value, "is_Rational") and value.is_Rational:
        return str(value)
    if hasattr(value, "item"):
        return value.item()
    return str(value)


class JSONHandler:
    """JSON 処理の統一インターフェース"""

    @staticmethod
    def loads(data: Union[str, bytes, None]) -> Dict[str, Any]:
        """
        JSON オブジェクトをパース

        Args:
            data: JSON 文字列またはバイト列

        Returns:
            Dict[str, Any]: パースされた辞書オブジェクト

        Raises:
            SpecFileError: 空データ、無効な JSON、またはオブジェクト以外の場合（行番号つき）
        """
        if not data:
            raise SpecFileError("specification is empty")

        if isinstance(data, bytes):
            try:
                data = data.decode("utf-8")
            except UnicodeDecodeError as e:
                raise SpecFileError(f"specification is not UTF-8: {e}")

        # orjson は行番号を返さないため、エラー時は json で位置を求める
        try:
            result = orjson.loads(data) if HAS_ORJSON else json.loads(data)
        except ValueError:
            try:
                json.loads(data)
            except json.JSONDecodeError as e:
                raise SpecFileError(e.msg, line=e.lineno)
            raise SpecFileError("invalid JSON")

        if not isinstance(result, dict):
            raise SpecFileError("specification must be a JSON object", line=1)
        return result

    @staticmethod
    def dumps(data: Any, ensure_ascii: bool = False, indent: Optional[int] = None) -> str:
        """
        JSON シリアライズ

        Args:
            data: シリアライズするオブジェクト
            ensure_ascii: ASCII エンコーディングを強制するか
            indent: インデントレベル（None で最小化）

        Returns:
            str: JSON 文字列
        """
        if HAS_ORJSON and not ensure_ascii:
            option = orjson.OPT_NON_STR_KEYS
            if indent is not None:
                option |= orjson.OPT_INDENT_2
            return orjson.dumps(data, default=_default, option=option).decode("utf-8")

        separators = (",", ":") if indent is None else (",", ": ")
        return json.dumps(
            data, ensure_ascii=ensure_ascii, separators=separators, indent=indent, default=_default
        )
