"""
opmod CLI ツール

pip install opmod 後に使用可能なコマンドライン インターフェース
"""

import argparse
import logging
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import __version__
from .backend import DEFAULT_TOLERANCE, available_backends
from .commands import run_command
from .config import LOG_LEVELS, RunConfig, create_run_config
from .error_handlers import get_global_registry
from .experiments import available_experiments
from .json_handler import JSONHandler
from .report import Report
from .verification import DEFAULT_SEEDS

logger = logging.getLogger(__name__)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"'{text}' is not a rational number")


def _common_options() -> argparse.ArgumentParser:
    """全サブコマンド共通のオプション"""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--spec", help="汎関数の仕様ファイル (JSON)")
    parent.add_argument("--degree", type=int, default=None, help="最大次数 (デフォルト: 4)")
    parent.add_argument(
        "--backend", choices=available_backends(), default="exact", help="スカラーのバックエンド"
    )
    parent.add_argument(
        "--tol", type=float, default=DEFAULT_TOLERANCE, help="浮動小数点の許容誤差"
    )
    parent.add_argument("--out", help="CSV と要約 JSON の出力ディレクトリ")
    parent.add_argument("--seed", type=int, default=None, help="乱数の汎関数のシード")
    parent.add_argument(
        "--log-level", choices=list(LOG_LEVELS), default="warning", help="ログレベル"
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    """引数パーサーを作成"""
    parser = argparse.ArgumentParser(
        prog="opmod", description="多変数直交多項式の Uvarov / Christoffel 変形"
    )
    parser.add_argument("--version", action="version", version=f"opmod {__version__}")
    subparsers = parser.add_subparsers(dest="command", help="利用可能なコマンド")
    common = _common_options()

    subparsers.add_parser("build", parents=[common], help="OPS を構成して Gram 行列と三項関係を出力")
    subparsers.add_parser("uvarov", parents=[common], help="点質量による変形を判定・検証")
    subparsers.add_parser("christoffel", parents=[common], help="2 次の乗数による変形を検証")

    verify_parser = subparsers.add_parser(
        "verify-all", parents=[common], help="すべての検証スイートを実行"
    )
    verify_parser.add_argument(
        "--seeds", type=int, default=DEFAULT_SEEDS, help="乱数インスタンスの数"
    )

    experiment_parser = subparsers.add_parser(
        "experiment", parents=[common], help="数値実験の表を作成"
    )
    experiment_parser.add_argument("name", help=f"実験名 ({', '.join(available_experiments())})")
    experiment_parser.add_argument("--mu", type=_rational, help="球のパラメータ μ")
    experiment_parser.add_argument("--dim", type=int, help="次元 d")
    experiment_parser.add_argument(
        "--mass", type=_rational, action="append", help="原点の質量 λ（複数指定可）"
    )
    experiment_parser.add_argument("--radius", type=float, help="内部の点の半径 ‖x‖")
    experiment_parser.add_argument("--n-max", type=int, help="最大次数（漸近実験）")
    experiment_parser.add_argument("--g", type=_rational, help="Bessel–Laguerre の g")
    experiment_parser.add_argument("--gamma", type=_rational, help="Bessel–Laguerre の γ")
    return parser


def experiment_params(args: argparse.Namespace) -> Dict[str, Any]:
    """指定されたオプションだけを実験のパラメータにする"""
    params: Dict[str, Any] = {}
    for option, key in (
        ("mu", "mu"),
        ("dim", "d"),
        ("radius", "radius"),
        ("n_max", "n_max"),
        ("g", "g"),
        ("gamma", "gamma"),
        ("degree", "max_degree"),
    ):
        value = getattr(args, option, None)
        if value is not None:
            params[key] = value
    masses = getattr(args, "mass", None)
    if masses:
        if args.name == "ball-mass-limit":
            params["masses"] = tuple(masses)
        else:
            params["mass"] = masses[-1]
    return params


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """引数から実行設定を作成"""
    is_experiment = args.command == "experiment"
    return create_run_config(
        command=args.command,
        spec_path=args.spec,
        degree=4 if args.degree is None else args.degree,
        backend=args.backend,
        tolerance=args.tol,
        out_dir=args.out,
        seed=args.seed,
        log_level=args.log_level,
        experiment=args.name if is_experiment else None,
        seeds=getattr(args, "seeds", DEFAULT_SEEDS),
        params=experiment_params(args) if is_experiment else None,
    )


def configure_logging(level: str) -> None:
    """ルートロガーを設定"""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def print_report(report: Report, out_dir: Optional[str]) -> None:
    """結果を表示（出力ディレクトリがあれば書き出す）"""
    if report.passed:
        print(f"✅ {report.command}: passed")
    else:
        error = report.summary.get("error")
        reason = error.get("message") if isinstance(error, dict) else "verification failed"
        print(f"❌ {report.command}: {reason} (exit code {report.exit_code})")

    if out_dir:
        for path in report.write(out_dir):
            print(f"📄 {path}")
    else:
        print(JSONHandler.dumps(report.to_summary(), indent=2))


def run(argv: Optional[List[str]] = None) -> int:
    """CLI を実行して終了コードを返す"""
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help()
        return 64

    configure_logging(args.log_level)
    try:
        config = config_from_args(args)
    except Exception as error:
        report = get_global_registry().handle_error(error, args.command)
        print_report(report, None)
        return report.exit_code

    report = run_command(config)
    print_report(report, config.out_dir)
    return report.exit_code


def main() -> None:
    """メイン CLI エントリーポイント"""
    sys.exit(run())


if __name__ == "__main__":
    main()
