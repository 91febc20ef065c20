"""
Report クラス

コマンドの結果を CSV の表と JSON の要約として出力します。
有理数は "p/q"、厳密に 0 の残差は EXACT と書き出します。
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

from .backend import Backend
from .exceptions import OPModError, create_error_payload
from .json_handler import JSONHandler

logger = logging.getLogger(__name__)

EXACT = "EXACT"
RESIDUAL_COLUMNS = frozenset({"residual"})


@dataclass
class Table:
    """CSV に書き出す表"""

    name: str
    columns: List[str]
    rows: List[List[Any]] = field(default_factory=list)

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"table {self.name} has {len(self.columns)} columns")
        self.rows.append(list(values))


def format_value(backend: Optional[Backend], value: Any, residual: bool = False) -> str:
    """CSV 用の文字列表現"""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        if residual and value == 0 and backend is not None and backend.exact:
            return EXACT
        return str(value)
    if isinstance(value, float):
        return repr(float(value))
    if backend is None:
        return str(value)
    text = backend.format(value)
    if residual and backend.exact and text == "0":
        return EXACT
    return text


class Report:
    """コマンドの結果"""

    def __init__(
        self,
        command: str,
        tables: Optional[Sequence[Table]] = None,
        passed: bool = True,
        exit_code: Optional[int] = None,
        summary: Optional[Dict[str, Any]] = None,
        backend: Optional[Backend] = None,
    ):
        self.command = command
        self.tables = list(tables or [])
        self.passed = passed
        self.exit_code = (0 if passed else 1) if exit_code is None else exit_code
        self.summary = summary or {}
        self.backend = backend

    def table(self, name: str) -> Table:
        for table in self.tables:
            if table.name == name:
                return table
        raise KeyError(name)

    def formatted_rows(self, table: Table) -> List[List[str]]:
        """表の行を文字列に変換"""
        flags = [column in RESIDUAL_COLUMNS for column in table.columns]
        return [
            [format_value(self.backend, value, flag) for value, flag in zip(row, flags)]
            for row in table.rows
        ]

    def to_summary(self) -> Dict[str, Any]:
        """JSON 要約"""
        return {
            "command": self.command,
            "passed": self.passed,
            "exit_code": self.exit_code,
            "backend": self.backend.name if self.backend else None,
            "tables": [table.name for table in self.tables],
            **self.summary,
        }

    def write(self, out_dir: Any) -> List[Path]:
        """<command>_<table>.csv と <command>_summary.json を書き出す"""
        directory = Path(out_dir)
        directory.mkdir(parents=True, exist_ok=True)
        written = []
        for table in self.tables:
            path = directory / f"{self.command}_{table.name}.csv"
            with path.open("w", newline="", encoding="utf-8") as handle:
                writer = csv.writer(handle)
                writer.writerow(table.columns)
                writer.writerows(self.formatted_rows(table))
            written.append(path)

        path = directory / f"{self.command}_summary.json"
        path.write_text(JSONHandler.dumps(self.to_summary(), indent=2) + "\n", encoding="utf-8")
        written.append(path)
        logger.info("wrote %d files to %s", len(written), directory)
        return written

    @classmethod
    def failure(cls, command: str, error: OPModError) -> "Report":
        """エラーから失敗レポートを作成"""
        payload = create_error_payload(error, command)
        table = Table("error", ["key", "value"])
        for key, value in _flatten(payload):
            table.add(key, value)
        return cls(
            command, [table], passed=False, exit_code=error.exit_code, summary={"error": payload}
        )


def check_table(results: Iterable[Any], name: str = "checks") -> Table:
    """CheckResult の一覧を表にする（equation は関係式の番号、なければ空）"""
    table = Table(name, ["suite", "check", "equation", "degree", "residual", "passed"])
    for result in results:
        table.add(
            result.suite,
            result.check,
            result.equation,
            result.degree,
            result.residual,
            result.passed,
        )
    return table


def _flatten(data: Dict[str, Any], prefix: str = "") -> Iterable[Any]:
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, f"{name}.")
        else:
            yield name, value if isinstance(value, (str, int, float, bool)) else str(value)
