"""
エラーハンドラー

コマンドの実行中に発生した例外を失敗レポートに変換します。
ハンドラーは例外の型ごとに登録し、継承関係の近いものから順に探します。
"""

import logging
from typing import Callable, Dict, Optional, Type

from .exceptions import OPModError
from .report import Report, Table

logger = logging.getLogger(__name__)

UNKNOWN_ERROR_EXIT_CODE = 70

ErrorHandlerFunc = Callable[[Exception, str], Report]


class ErrorHandlerRegistry:
    """例外の型からレポートを作るハンドラーの表"""

    def __init__(self) -> None:
        self._handlers: Dict[Type[Exception], ErrorHandlerFunc] = {}
        self._fallback: Optional[ErrorHandlerFunc] = None

    def register(self, exception_type: Type[Exception], handler: ErrorHandlerFunc) -> None:
        self._handlers[exception_type] = handler

    def set_default_handler(self, handler: ErrorHandlerFunc) -> None:
        """OPModError 以外で登録のない例外に使うハンドラー"""
        self._fallback = handler

    def lookup(self, error: Exception) -> Optional[ErrorHandlerFunc]:
        for klass in type(error).__mro__:
            handler = self._handlers.get(klass)
            if handler is not None:
                return handler
        return None

    def handle_error(self, error: Exception, command: str) -> Report:
        """例外を失敗レポートに変換

        順序: 登録済みハンドラー、OPModError の既定処理、デフォルトハンドラー、内部エラー。
        """
        handler = self.lookup(error)
        if handler is not None:
            return handler(error, command)
        if isinstance(error, OPModError):
            logger.warning("%s failed: %s", command, error.message)
            return Report.failure(command, error)
        if self._fallback is not None:
            return self._fallback(error, command)
        return internal_error_report(error, command)


def internal_error_report(error: Exception, command: str) -> Report:
    """想定外の例外（終了コード 70）"""
    logger.exception("unexpected error in %s", command, exc_info=error)
    table = Table("error", ["key", "value"])
    table.add("error", "INTERNAL_ERROR")
    table.add("message", f"{type(error).__name__}: {error}")
    table.add("exit_code", UNKNOWN_ERROR_EXIT_CODE)
    table.add("command", command)
    return Report(
        command,
        [table],
        passed=False,
        exit_code=UNKNOWN_ERROR_EXIT_CODE,
        summary={"error": {"error": "INTERNAL_ERROR", "message": str(error)}},
    )


_registry = ErrorHandlerRegistry()


def error_handler(
    exception_type: Type[Exception],
) -> Callable[[ErrorHandlerFunc], ErrorHandlerFunc]:
    """exception_type のハンドラーとして登録するデコレータ"""

    def decorator(func: ErrorHandlerFunc) -> ErrorHandlerFunc:
        _registry.register(exception_type, func)
        return func

    return decorator


def default_error_handler(func: ErrorHandlerFunc) -> ErrorHandlerFunc:
    _registry.set_default_handler(func)
    return func


def get_global_registry() -> ErrorHandlerRegistry:
    return _registry
