"""
検証スイート

OPS と各変形について恒等式の残差を次数ごとの CheckResult として集めます。
厳密バックエンドでは残差がちょうど 0 のときだけ合格、浮動小数点では許容誤差で判定します。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy

from .backend import Backend, Matrix, Scalar, get_backend
from .christoffel import (
    QuadraticMultiplier,
    build_from_connection,
    connection,
    connection_residual,
    modified_moment_block,
    n2_residual,
    n_gram_residual,
    quasi_orthogonality_residual,
    recover_multiplier,
    symmetry_equivalence,
    transport_three_term,
)
from .exceptions import NotQuasiDefinite, NoThreeTerm, OPModError
from .families.ball import (
    BallUvarov,
    adjacent_residual,
    ball_functional,
    ball_kernel_at_origin,
    ball_kernel_origin,
    disk_basis_coefficients,
    interior_rows,
    is_monotone,
    mass_limit_rows,
)
from .families.bessel_laguerre import (
    BesselLaguerreUvarov,
    bl_basis_coefficients,
    bl_functional,
    bl_kernel_at_origin,
    bl_norm,
    krall_sheffer_residual,
)
from .generators import (
    ChristoffelPair,
    christoffel_pair,
    random_christoffel_pair,
    random_quasi_definite_functional,
    random_uvarov_instance,
)
from .multiindex import cumulative_size, rank_size
from .ops import (
    OPSystem,
    build_monic_ops,
    kernel_reproduction_residual,
    orthogonality_residual,
    rank_conditions,
    three_term_residual,
)
from .polynomial import pad
from .uvarov import UvarovSystem

logger = logging.getLogger(__name__)

DEFAULT_SEEDS = 20
MASS_LIMIT_TOLERANCE = 0.02
INTERIOR_LIMIT_TOLERANCE = 0.05

# Christoffel の確認項目から関係式の番号への対応（接頭辞で引く）
CHRISTOFFEL_EQUATIONS: Dict[str, str] = {
    "moment_block": "moments",
    "connection": "connection",
    "quasi_orthogonality": "quasi_orthogonality",
    "n2_formula": "N_2",
    "n_gram": "4.9",
    "n_rank": "4.9",
    "three_term": "4.4",
    "rebuild": "4.4",
    "transported_b": "4.5",
    "transported_c": "4.6",
    "consistency_m": "4.7",
    "consistency_n": "4.8",
    "orthogonality": "orthogonality",
    "quasi_definite": "orthogonality",
    "multiplier_recovery": "recovery",
    "symmetry_equivalence": "symmetry",
}


def equation_id(check: str, equations: Dict[str, str] = CHRISTOFFEL_EQUATIONS) -> str:
    """確認項目名に対応する関係式の番号（なければ空文字）。mutation_ の接頭辞は外して引く"""
    name = check[len("mutation_") :] if check.startswith("mutation_") else check
    for prefix, equation in equations.items():
        if name == prefix or name.startswith(prefix + "_"):
            return equation
    return ""


@dataclass(frozen=True)
class CheckResult:
    """一つの恒等式の判定"""

    suite: str
    check: str
    degree: int
    residual: Any
    passed: bool
    equation: str = ""


class _Recorder:
    """残差から CheckResult を作って溜める"""

    def __init__(
        self,
        backend: Backend,
        suite: str,
        tolerance: Optional[float] = None,
        equations: Optional[Dict[str, str]] = None,
    ) -> None:
        self.backend = backend
        self.suite = suite
        self.tolerance = tolerance
        self.equations = equations
        self.results: List[CheckResult] = []

    def _small(self, size: Scalar, exact_zero: bool) -> bool:
        if self.tolerance is None:
            return exact_zero
        return float(size) <= self.tolerance

    def matrix(self, check: str, degree: int, residual: Matrix) -> CheckResult:
        size = self.backend.magnitude(residual)
        return self.add(check, degree, size, self._small(size, self.backend.is_zero(residual)))

    def many(self, check: str, degree: int, residuals: Sequence[Matrix]) -> CheckResult:
        sizes = [self.backend.magnitude(residual) for residual in residuals]
        size = max(sizes, default=self.backend.zero())
        passed = all(
            self._small(value, self.backend.is_zero(residual))
            for value, residual in zip(sizes, residuals)
        )
        return self.add(check, degree, size, passed)

    def scalar(self, check: str, degree: int, difference: Scalar) -> CheckResult:
        size = abs(difference)
        return self.add(check, degree, size, self._small(size, self.backend.is_zero_scalar(size)))

    def flag(self, check: str, degree: int, passed: bool, residual: Any = 0) -> CheckResult:
        return self.add(check, degree, residual, passed)

    def add(self, check: str, degree: int, residual: Any, passed: bool) -> CheckResult:
        equation = equation_id(check, self.equations) if self.equations else ""
        result = CheckResult(self.suite, check, degree, residual, bool(passed), equation)
        if not result.passed:
            logger.warning(
                "%s/%s failed at degree %d (residual %s)", self.suite, check, degree, residual
            )
        self.results.append(result)
        return result


def sample_points(backend: Backend, d: int, count: int = 2) -> List[Tuple[Scalar, ...]]:
    """原点と質量点を避けた有理数の評価点"""
    return [
        tuple(
            backend.scalar(Fraction((-1) ** i * (i + k + 1), 2 * (i + 2 * k) + 5))
            for i in range(d)
        )
        for k in range(count)
    ]


def _origin(backend: Backend, d: int) -> Tuple[Scalar, ...]:
    return tuple(backend.zero() for _ in range(d))


def _leading_block(coefficients: Matrix, n: int, d: int) -> Matrix:
    return coefficients[:, cumulative_size(n - 1, d) : cumulative_size(n, d)]


# --- 個別の検証 ---


def verify_ops(
    ops: OPSystem, max_degree: Optional[int] = None, suite: str = "ops"
) -> List[CheckResult]:
    """直交性、Gram 行列、三項関係、階数条件、核の対称性と再生性"""
    backend = ops.backend
    d = ops.dimension
    top = ops.max_degree if max_degree is None else min(max_degree, ops.max_degree)
    rec = _Recorder(backend, suite)
    x, y = sample_points(backend, d)
    u = ops.functional

    for n in range(top + 1):
        rec.matrix("orthogonality", n, orthogonality_residual(ops, n))
        gram = ops.gram(n)
        rec.matrix("gram_symmetry", n, gram - gram.T)
        rec.many(
            "cross_gram",
            n,
            [u.pairing(ops.coefficients(n), ops.coefficients(m)) for m in range(n)],
        )
        if n < top:
            rec.many("three_term", n, [three_term_residual(ops, n, i) for i in range(1, d + 1)])
            verdict = rank_conditions(ops, n)
            rec.flag(
                "rank_conditions",
                n,
                verdict.passed,
                residual=verdict.expected_joint_rank - verdict.joint_rank,
            )
        rec.scalar("kernel_symmetry", n, ops.kernel(n, x, y) - ops.kernel(n, y, x))
        rec.matrix("kernel_reproduction", n, kernel_reproduction_residual(ops, n, x))
    return rec.results


def verify_uvarov(
    system: UvarovSystem, max_degree: int, suite: str = "uvarov"
) -> List[CheckResult]:
    """接続公式、Ĥ_n とその逆行列、変形核を直接計算と比較

    判定に失敗した次数の手前までを調べます。
    """
    backend = system.backend
    d = system.dimension
    rec = _Recorder(backend, suite)
    v = system.modified_functional()
    x = system.spec.points[0]
    y = sample_points(backend, d, 1)[0]
    direct_kernel = backend.zero()

    for n in range(max_degree + 1):
        verdict = system.certificate(n)
        rec.flag("certificate", n, verdict.passed, residual=verdict.determinant)
        if not verdict.passed:
            break
        rec.matrix("telescoping", n, system.telescoping_residual(n))
        rec.matrix("kernel_increment", n, system.kernel_matrix_residual(n))

        q = system.connect(n)
        rec.flag("monic", n, q.is_monic())
        if n > 0:
            rec.matrix("orthogonality", n, q.coefficients @ v.moment_rectangle(n, n - 1))
        direct = v.pairing(q.coefficients, q.coefficients)
        rec.matrix("gram_formula", n, direct - system.modified_gram(n))

        direct_inverse = backend.inv(direct)
        value = q.evaluate(x).T @ direct_inverse @ q.evaluate(y)
        direct_kernel = direct_kernel + value[0, 0]

        # 以下は I + Λ𝒦_n の可逆性が必要
        if backend.det_negligible(system.system_matrix(n)):
            continue
        rec.matrix("resolvent_symmetry", n, system.resolvent_symmetry_residual(n))
        inverse = system.modified_gram_inverse(n)
        rec.matrix("gram_inverse", n, direct @ inverse - backend.eye(rank_size(n, d)))
        rec.scalar("modified_kernel", n, system.modified_kernel(n, x, y) - direct_kernel)
    return rec.results


def verify_christoffel(
    pair: ChristoffelPair,
    max_degree: Optional[int] = None,
    suite: str = "christoffel",
    mutate: bool = True,
) -> List[CheckResult]:
    """変形モーメント、接続係数、移送した三項関係、λ の復元、準直交性、対称性"""
    u_ops, v_ops, multiplier = pair.u_ops, pair.v_ops, pair.multiplier
    backend = u_ops.backend
    d = u_ops.dimension
    top = min(u_ops.max_degree, v_ops.max_degree)
    if max_degree is not None:
        top = min(top, max_degree)
    rec = _Recorder(backend, suite, equations=CHRISTOFFEL_EQUATIONS)
    u, v = pair.u, pair.v

    for h in range(top + 1):
        rec.many(
            "moment_block",
            h,
            [
                modified_moment_block(u, multiplier, h, k) - v.moment_block(h, k)
                for k in range(top + 1)
            ],
        )

    conn = connection(u_ops, v_ops, top)
    for n in range(top + 1):
        rec.matrix("connection", n, connection_residual(u_ops, v_ops, conn, n))
        rec.matrix(
            "quasi_orthogonality",
            n,
            quasi_orthogonality_residual(u_ops, multiplier, v_ops.coefficients(n), n),
        )
    if top >= 2:
        rec.matrix("n2_formula", 2, n2_residual(u_ops, conn, multiplier))
    for n in range(2, top + 1):
        rec.matrix("n_gram", n, n_gram_residual(u_ops, v_ops, conn, multiplier, n))
        rank = backend.rank(conn.n[n])
        expected = rank_size(n - 2, d)
        rec.flag("n_rank", n, rank == expected, residual=expected - rank)

    recurrence = transport_three_term(u_ops, conn)
    for (n, i), b_hat in sorted(recurrence.b.items()):
        b, c = v_ops.three_term(n, i)
        rec.matrix(f"transported_b_x{i}", n, b_hat - b)
        rec.matrix(f"transported_c_x{i}", n, recurrence.c[(n, i)] - c)
    for (n, i), residual in sorted(recurrence.consistency_m.items()):
        rec.matrix(f"consistency_m_x{i}", n, residual)
    for (n, i), residual in sorted(recurrence.consistency_n.items()):
        rec.matrix(f"consistency_n_x{i}", n, residual)

    if top >= 2:
        recovered = recover_multiplier(u_ops, conn)
        rec.matrix("multiplier_recovery", 2, recovered.row(backend) - multiplier.row(backend))
        try:
            build = build_from_connection(u_ops, conn.m, conn.n, conn.h0)
        except OPModError as error:
            rec.flag("rebuild", top, False, residual=error.message)
        else:
            for n, polynomial in enumerate(build.polynomials):
                rec.matrix("rebuild", n, polynomial.coefficients - v_ops.coefficients(n))

    if mutate and top >= 4:
        rec.results.append(mutation_check(u_ops, conn.m, conn.n, conn.h0, suite))

    if u.centrally_symmetric:
        v_symmetric, odd_free = symmetry_equivalence(u, multiplier, top)
        rec.flag("symmetry_equivalence", top, v_symmetric == odd_free)
    return rec.results


def mutation_check(
    u_ops: OPSystem,
    m_seq: Sequence[Matrix],
    n_seq: Sequence[Matrix],
    h0: Optional[Scalar] = None,
    suite: str = "christoffel",
    degree: int = 3,
) -> CheckResult:
    """N_degree の (0, 0) 成分をずらした接続係数が次数 degree で棄却されるか"""
    backend = u_ops.backend
    n_mutated = [matrix.copy() for matrix in n_seq]
    n_mutated[degree][0, 0] = n_mutated[degree][0, 0] + backend.one()
    try:
        build_from_connection(u_ops, m_seq, n_mutated, h0)
    except (NoThreeTerm, NotQuasiDefinite) as error:
        default = "three_term" if isinstance(error, NoThreeTerm) else "quasi_definite"
        relation = error.details.get("relation", default) if error.details else default
        logger.info("mutated N_%d rejected at degree %d (%s)", degree, error.degree, relation)
        residual = getattr(error, "residual", None)
        size = backend.zero() if residual is None else backend.magnitude(residual)
        check = f"mutation_{relation}"
        return CheckResult(
            suite, check, error.degree, size, error.degree == degree, equation_id(check)
        )
    return CheckResult(suite, "mutation_undetected", degree, backend.zero(), False)


# --- 受け入れスイート ---


def ops_suite(
    seeds: int = 5, max_degree: int = 4, backend: Optional[Backend] = None
) -> List[CheckResult]:
    """乱数の擬定値汎関数（d = 2）の OPS"""
    results: List[CheckResult] = []
    for seed in range(seeds):
        _, ops = random_quasi_definite_functional(seed, 2, max_degree, backend)
        results.extend(verify_ops(ops, suite="ops"))
    return results


def uvarov_suite(
    seeds: int = DEFAULT_SEEDS, max_degree: int = 4, backend: Optional[Backend] = None
) -> List[CheckResult]:
    """乱数の汎関数に N ∈ {1, 2, 3} 個の点質量"""
    results: List[CheckResult] = []
    for seed in range(seeds):
        instance = random_uvarov_instance(seed, 2, max_degree, 1 + seed % 3, backend)
        results.extend(verify_uvarov(instance.system, max_degree, suite="uvarov"))
    logger.info("uvarov suite: %d instances", seeds)
    return results


def disk_pairs(max_degree: int = 4, mu: Any = "1/2") -> List[ChristoffelPair]:
    """u_μ（d = 2）と λ = 1 - ‖x‖²（対称）、λ = 2 + x - ‖x‖²（非対称）"""
    backend = get_backend("exact")
    u_ops = build_monic_ops(ball_functional(backend, 2, mu), max_degree)
    symmetric = QuadraticMultiplier.create(backend, 2, [-1, 0, -1], [0, 0], 1)
    shifted = QuadraticMultiplier.create(backend, 2, [-1, 0, -1], [1, 0], 2)
    return [
        christoffel_pair(u_ops, symmetric, max_degree),
        christoffel_pair(u_ops, shifted, max_degree),
    ]


def christoffel_suite(
    seeds: int = DEFAULT_SEEDS, max_degree: int = 4, backend: Optional[Backend] = None
) -> List[CheckResult]:
    """乱数の Christoffel の組と円板の例（N_3 の変異検出を含む）"""
    results: List[CheckResult] = []
    for seed in range(seeds):
        pair = random_christoffel_pair(seed, 2, max_degree, backend)
        results.extend(verify_christoffel(pair, max_degree, suite="christoffel"))
    for pair in disk_pairs(max_degree):
        results.extend(verify_christoffel(pair, max_degree, suite="christoffel_disk"))
    logger.info("christoffel suite: %d random pairs", seeds)
    return results


def ball_suite(
    max_degree: int = 6,
    mu: Any = "1/2",
    mass: Any = 1,
    tolerance: float = 1e-10,
    adjacent_tolerance: float = 1e-12,
    adjacent_parameters: Sequence[Any] = ("1/2", 1, "3/2"),
) -> List[CheckResult]:
    """d = 2 の明示的な基底、核の閉じた形、隣接族、原点質量の閉じた形"""
    exact = get_backend("exact")
    fl = get_backend("float", tolerance)
    d = 2
    u_exact = ball_functional(exact, d, mu)
    u_float = ball_functional(fl, d, mu)
    ops = build_monic_ops(u_exact, max_degree)
    exact_rec = _Recorder(exact, "ball")
    float_rec = _Recorder(fl, "ball", tolerance)
    adjacent_rec = _Recorder(fl, "ball", adjacent_tolerance)
    origin = _origin(exact, d)
    points = sample_points(exact, d, 3)

    width = cumulative_size(max_degree, d)
    blocks = [disk_basis_coefficients(fl, mu, n) for n in range(max_degree + 1)]
    stacked = fl.vstack([pad(fl, block, width) for block in blocks])
    float_rec.matrix(
        "basis_gram", max_degree, u_float.pairing(stacked, stacked) - fl.eye(stacked.shape[0])
    )

    system = UvarovSystem.create(ops, [origin], [mass])
    closed_exact = BallUvarov.create(exact, mu, d, mass)
    closed_float = BallUvarov.create(fl, mu, d, mass)
    v_float = u_float.add_point_masses([(0, 0)], [mass])

    for n in range(max_degree + 1):
        basis = blocks[n]
        monic = exact.to_numpy(ops.coefficients(n))
        float_rec.matrix("basis_span", n, basis - _leading_block(basis, n, d) @ monic)

        exact_rec.scalar(
            "kernel_at_origin",
            n,
            ops.kernel(n, origin, origin) - ball_kernel_at_origin(exact, mu, d, n),
        )
        for point in points:
            exact_rec.scalar(
                "kernel_origin",
                n,
                ops.kernel(n, point, origin) - ball_kernel_origin(exact, mu, d, n, point),
            )
        if n >= 1:
            for parameter in adjacent_parameters:
                adjacent_rec.matrix("adjacent", n, adjacent_residual(fl, parameter, n))

        q_explicit = closed_float.q_coefficients(n)
        lead = _leading_block(q_explicit, n, d)
        q_generic = exact.to_numpy(system.connect(n).coefficients)
        float_rec.matrix("uvarov_basis", n, q_explicit - lead @ q_generic)
        gram_generic = exact.to_numpy(system.modified_gram(n))
        float_rec.matrix(
            "uvarov_gram",
            n,
            v_float.pairing(q_explicit, q_explicit) - lead @ gram_generic @ lead.T,
        )
        exact_rec.scalar(
            "uvarov_kernel_at_origin",
            n,
            system.modified_kernel(n, origin, origin) - closed_exact.kernel_at_origin(n),
        )
        exact_rec.scalar(
            "uvarov_kernel",
            n,
            system.modified_kernel(n, points[0], points[1])
            - closed_exact.modified_kernel(ops, n, points[0], points[1]),
        )
    return exact_rec.results + float_rec.results + adjacent_rec.results


def limit_suite(
    mu: float = 0.5,
    d: int = 2,
    masses: Sequence[float] = (0.5, 1.0, 2.0),
    degrees: Sequence[int] = (50, 100, 200),
    radius: float = 0.5,
) -> List[CheckResult]:
    """K_n(v;0,0) → 1/λ と内部の Christoffel 関数の極限"""
    backend = get_backend("float")
    rec = _Recorder(backend, "limits")
    for mass in masses:
        rows = mass_limit_rows(mu, d, mass, degrees)
        n, _, _, error = rows[-1]
        rec.flag(f"mass_limit_{mass:g}", n, error < MASS_LIMIT_TOLERANCE, residual=error)
        rec.flag(
            f"mass_limit_monotone_{mass:g}",
            n,
            is_monotone([row[3] for row in rows]),
            residual=error,
        )
    rows = interior_rows(mu, d, 1.0, radius, degrees)
    n, _, _, error = rows[-1]
    rec.flag("interior_limit", n, error < INTERIOR_LIMIT_TOLERANCE, residual=error)
    return rec.results


def bessel_laguerre_suite(
    g: Any = 1,
    gamma: Any = 2,
    max_degree: int = 4,
    masses: Sequence[Any] = (1, "1/3"),
) -> List[CheckResult]:
    """ノルム、Krall–Sheffer 作用素、原点での核、λ_n の判定と一変数への帰着"""
    backend = get_backend("exact")
    d = 2
    rec = _Recorder(backend, "bessel_laguerre")
    u = bl_functional(backend, g, gamma, max_degree)
    origin = _origin(backend, d)

    width = cumulative_size(max_degree, d)
    degrees = range(max_degree + 1)
    stacked = backend.vstack(
        [pad(backend, bl_basis_coefficients(backend, g, gamma, n), width) for n in degrees]
    )
    norms = [bl_norm(backend, g, gamma, n, m) for n in degrees for m in range(n + 1)]
    rec.matrix("norms", max_degree, u.pairing(stacked, stacked) - backend.diag(norms))

    for n in degrees:
        for m in range(n + 1):
            residual = krall_sheffer_residual(g, gamma, n, m)
            terms = 0 if residual == 0 else len(sympy.Add.make_args(residual))
            rec.flag("krall_sheffer", n, terms == 0, residual=terms)

    ops = build_monic_ops(u, max_degree)
    for n in range(max_degree + 1):
        rec.scalar(
            "kernel_at_origin",
            n,
            ops.kernel(n, origin, origin) - bl_kernel_at_origin(backend, g, gamma, n),
        )

    for mass in masses:
        closed = BesselLaguerreUvarov.create(backend, g, gamma, mass, max_degree)
        system = UvarovSystem.create(ops, [origin], [mass])
        nonzero = [passed for _, _, passed in closed.lambda_table(max_degree)]
        for n, verdict in enumerate(system.certify(max_degree)):
            expected = nonzero[n] and (n == 0 or nonzero[n - 1])
            rec.flag("criterion", n, verdict.passed == expected, residual=verdict.determinant)

        failure = closed.first_failure(max_degree)
        if failure is not None:
            try:
                closed.q_coefficients(max_degree)
            except NotQuasiDefinite as error:
                rec.flag("failure_degree", failure, error.degree == failure)
            else:
                rec.flag("failure_degree", failure, False)
            continue

        for n in range(1, max_degree + 1):
            rec.matrix("reduction", n, closed.reduction_residual(n))
            q_closed = closed.q_coefficients(n)
            lead = _leading_block(q_closed, n, d)
            rec.matrix(
                "uvarov_basis", n, q_closed - lead @ system.connect(n).coefficients
            )
    return rec.results


def verify_all(
    seeds: int = DEFAULT_SEEDS, backend: Optional[Backend] = None
) -> List[CheckResult]:
    """すべてのスイート"""
    results: List[CheckResult] = []
    results.extend(ops_suite(min(seeds, 5), backend=backend))
    results.extend(uvarov_suite(seeds, backend=backend))
    results.extend(christoffel_suite(seeds, backend=backend))
    results.extend(ball_suite())
    results.extend(limit_suite())
    results.extend(bessel_laguerre_suite())
    failed = sum(not result.passed for result in results)
    logger.info("verify-all: %d checks, %d failed", len(results), failed)
    return results
