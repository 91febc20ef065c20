"""
コマンド

CLI の各サブコマンドの本体です。どのコマンドも Report を返し、
例外はエラーハンドラーレジストリで失敗レポートに変換します。
"""

import logging
from collections import Counter
from typing import Any, Callable, Dict, List, Optional, Sequence

from .backend import Backend, Matrix
from .config import (
    FunctionalSpecModel,
    RunConfig,
    load_spec,
    spec_functional,
    spec_masses,
    spec_multiplier,
)
from .error_handlers import ErrorHandlerRegistry, get_global_registry
from .exceptions import InvalidModificationError, NotQuasiDefinite
from .experiments import run_experiment
from .families.ball import BallUvarov
from .families.bessel_laguerre import BesselLaguerreUvarov
from .generators import christoffel_pair, random_christoffel_pair, random_uvarov_instance
from .multiindex import monomial_name
from .ops import build_monic_ops
from .polynomial import monomials
from .report import Report, Table, check_table
from .uvarov import UvarovSystem
from .verification import CheckResult, verify_all, verify_christoffel, verify_uvarov

logger = logging.getLogger(__name__)

CommandFunc = Callable[[RunConfig], Report]


def _add_matrix(table: Table, prefix: Sequence[Any], matrix: Matrix) -> None:
    rows, cols = matrix.shape
    for r in range(rows):
        for c in range(cols):
            table.add(*prefix, r, c, matrix[r, c])


def _add_coefficients(
    table: Table, backend: Backend, degree: int, coefficients: Matrix, d: int
) -> None:
    """係数行列の 0 でない成分を (degree, row, monomial, coefficient) で追加"""
    names = [monomial_name(nu) for nu in monomials(degree, d)]
    rows, cols = coefficients.shape
    for r in range(rows):
        for c in range(cols):
            value = coefficients[r, c]
            if not backend.is_zero_scalar(value):
                table.add(degree, r, names[c], value)


def _is_origin(backend: Backend, point: Sequence[Any]) -> bool:
    return all(backend.is_zero_scalar(backend.scalar(value)) for value in point)


def _all_passed(results: Sequence[CheckResult]) -> bool:
    return all(result.passed for result in results)


def _failed_count(results: Sequence[CheckResult]) -> int:
    return sum(not result.passed for result in results)


def cmd_build(config: RunConfig) -> Report:
    """汎関数の OPS を構成して H_n、B_{n,i}、C_{n,i} と擬定値性の判定を出力"""
    backend = config.make_backend()
    spec = load_spec(str(config.spec_path))
    u = spec_functional(spec, backend, config.degree)
    d = u.dimension

    verdicts = Table("quasi_definite", ["degree", "measure", "quasi_definite"])
    for verdict in u.is_quasi_definite(config.degree):
        verdicts.add(verdict.degree, verdict.measure, verdict.quasi_definite)

    ops = build_monic_ops(u, config.degree, truncate=True)
    polynomials = Table("polynomials", ["degree", "row", "monomial", "coefficient"])
    grams = Table("gram", ["degree", "row", "column", "value"])
    recurrence = Table("recurrence", ["degree", "variable", "matrix", "row", "column", "value"])
    for n in range(ops.max_degree + 1):
        _add_coefficients(polynomials, backend, n, ops.coefficients(n), d)
        _add_matrix(grams, [n], ops.gram(n))
        if n == ops.max_degree:
            continue
        for i in range(1, d + 1):
            b, c = ops.three_term(n, i)
            _add_matrix(recurrence, [n, i, "B"], b)
            _add_matrix(recurrence, [n, i, "C"], c)

    passed = ops.failed_degree is None
    if passed:
        logger.info("built OPS of %s through degree %d", u.label, ops.max_degree)
    else:
        logger.warning("%s is not quasi-definite at degree %d", u.label, ops.failed_degree)
    return Report(
        "build",
        [verdicts, polynomials, grams, recurrence],
        passed=passed,
        summary={
            "functional": u.label,
            "dimension": d,
            "max_degree": config.degree,
            "built_degree": ops.max_degree,
            "failed_degree": ops.failed_degree,
        },
        backend=backend,
    )


def _family_tables(
    spec: FunctionalSpecModel, system: UvarovSystem, top: int
) -> List[Table]:
    """原点に一つの質量を置いた球・Bessel–Laguerre の閉じた形との照合"""
    backend = system.backend
    if len(system.spec.points) != 1 or not _is_origin(backend, system.spec.points[0]):
        return []
    mass = system.spec.masses[0]
    origin = system.spec.points[0]

    if spec.kind == "ball":
        closed = BallUvarov.create(backend, spec.mu, spec.dimension, mass)
        table = Table("ball_closed_form", ["degree", "generic", "closed_form", "residual"])
        for n in range(top + 1):
            try:
                generic = system.modified_kernel(n, origin, origin)
            except NotQuasiDefinite:
                break
            value = closed.kernel_at_origin(n)
            table.add(n, generic, value, abs(generic - value))
        return [table]

    if spec.kind == "bessel_laguerre":
        closed_bl = BesselLaguerreUvarov.create(backend, spec.g, spec.gamma, mass, top)
        table = Table("lambda", ["degree", "lambda_n", "nonzero"])
        for n, value, nonzero in closed_bl.lambda_table(top):
            table.add(n, value, nonzero)
        return [table]
    return []


def cmd_uvarov(config: RunConfig) -> Report:
    """点質量を加えた汎関数の判定、接続公式、検証"""
    backend = config.make_backend()
    top = config.degree
    spec: Optional[FunctionalSpecModel] = None
    if config.spec_path:
        spec = load_spec(config.spec_path)
        points, masses = spec_masses(spec)
        if not masses:
            raise InvalidModificationError("specification declares no point masses", "masses")
        ops = build_monic_ops(spec_functional(spec, backend, top), top)
        system = UvarovSystem.create(ops, points, masses)
    else:
        seed = int(config.seed or 0)
        system = random_uvarov_instance(seed, 2, top, 1 + seed % 3, backend).system

    certificate = Table(
        "certificate",
        ["degree", "determinant", "resolvent_invertible", "gram_invertible", "passed"],
    )
    for verdict in system.certify(top):
        certificate.add(
            verdict.degree,
            verdict.determinant,
            verdict.resolvent_invertible,
            verdict.gram_invertible,
            verdict.passed,
        )
    failure = system.first_failure(top)
    last = top if failure is None else failure - 1

    connection = Table("connection", ["degree", "row", "monomial", "coefficient"])
    for n in range(last + 1):
        q = system.connect(n)
        _add_coefficients(connection, backend, n, q.coefficients, system.dimension)

    results = verify_uvarov(system, top)
    tables = [certificate, connection, check_table(results)]
    if spec is not None:
        tables.extend(_family_tables(spec, system, top))

    if failure is not None:
        logger.warning("modified functional fails at degree %d", failure)
    return Report(
        "uvarov",
        tables,
        passed=failure is None and _all_passed(results),
        summary={
            "masses": len(system.spec.masses),
            "max_degree": top,
            "first_failure": failure,
            "failed_checks": _failed_count(results),
        },
        backend=backend,
    )


def cmd_christoffel(config: RunConfig) -> Report:
    """v = λu の接続係数と三項関係の移送を恒等式ごとに検証"""
    backend = config.make_backend()
    top = config.degree
    if config.spec_path:
        spec = load_spec(config.spec_path)
        multiplier = spec_multiplier(spec, backend)
        u_ops = build_monic_ops(spec_functional(spec, backend, top + 2), top)
        pair = christoffel_pair(u_ops, multiplier, top)
    else:
        pair = random_christoffel_pair(int(config.seed or 0), 2, top, backend)

    multiplier_table = Table("multiplier", ["monomial", "coefficient"])
    for nu, value in pair.multiplier.as_polynomial().items():
        multiplier_table.add(monomial_name(nu), value)

    results = verify_christoffel(pair, top)
    return Report(
        "christoffel",
        [multiplier_table, check_table(results)],
        passed=_all_passed(results),
        summary={"max_degree": top, "failed_checks": _failed_count(results)},
        backend=backend,
    )


def cmd_verify_all(config: RunConfig) -> Report:
    """すべての検証スイート"""
    backend = config.make_backend()
    results = verify_all(config.seeds, backend)
    counts = Counter(result.suite for result in results)
    failures = Counter(result.suite for result in results if not result.passed)
    suites = Table("suites", ["suite", "checks", "failed"])
    for suite in sorted(counts):
        suites.add(suite, counts[suite], failures[suite])
    return Report(
        "verify-all",
        [suites, check_table(results)],
        passed=_all_passed(results),
        summary={"seeds": config.seeds, "checks": len(results), "failed": sum(failures.values())},
        backend=backend,
    )


def cmd_experiment(config: RunConfig) -> Report:
    """名前つきの数値実験"""
    name = str(config.experiment)
    result = run_experiment(name, **config.params)
    return Report(
        name,
        result.tables,
        passed=result.passed,
        summary={"experiment": name, "params": {key: str(v) for key, v in config.params.items()}},
    )


COMMANDS: Dict[str, CommandFunc] = {
    "build": cmd_build,
    "uvarov": cmd_uvarov,
    "christoffel": cmd_christoffel,
    "verify-all": cmd_verify_all,
    "experiment": cmd_experiment,
}


def run_command(config: RunConfig, registry: Optional[ErrorHandlerRegistry] = None) -> Report:
    """コマンドを実行し、例外は失敗レポートに変換"""
    registry = registry or get_global_registry()
    logger.info("running %s", config.command)
    try:
        return COMMANDS[config.command](config)
    except Exception as error:
        return registry.handle_error(error, config.command)
