"""
Christoffel 変形

2 次の乗数 λ(x) による v = λ(x)u について、変形モーメントブロック、
接続係数 M_n, N_n、三項関係の係数の移送 B̂_{n,i}, Ĉ_{n,i}、
接続係数からの λ の復元と OPS の再構成、中心対称性の判定を提供します。
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .backend import Backend, Matrix, Scalar
from .exceptions import (
    DegreeCollapse,
    InconsistentSymmetry,
    InvalidModificationError,
    NoThreeTerm,
    NotQuasiDefinite,
)
from .moments import MomentFunctional
from .multiindex import MultiIndex, cumulative_size, enumerate_indices, rank_size, shift, unit
from .ops import OPSystem, build_monic_ops
from .polynomial import (
    VectorPolynomial,
    coefficient_row,
    multiply_by_polynomial,
    multiply_by_variable,
    pad,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class QuadraticMultiplier:
    """λ(x) = 𝐚_2 𝕏_2 + 𝐚_1 𝕏_1 + 𝐚_0

    a2 は enumerate_indices(2, d) の順（a_11, a_12, ..., a_dd）。
    """

    dimension: int
    a2: Tuple[Any, ...]
    a1: Tuple[Any, ...]
    a0: Any

    def __post_init__(self) -> None:
        d = self.dimension
        errors = []
        if len(self.a2) != rank_size(2, d):
            errors.append(f"lambda2 needs {rank_size(2, d)} entries, got {len(self.a2)}")
        if len(self.a1) != d:
            errors.append(f"lambda1 needs {d} entries, got {len(self.a1)}")
        if errors:
            raise InvalidModificationError("; ".join(errors), field="lambda")
        if all(value == 0 for value in self.a2):
            raise InvalidModificationError(
                "multiplier must have exact degree 2", field="lambda2", value=list(self.a2)
            )

    @classmethod
    def create(
        cls,
        backend: Backend,
        dimension: int,
        a2: Sequence[Any],
        a1: Optional[Sequence[Any]] = None,
        a0: Any = 0,
    ) -> "QuadraticMultiplier":
        """係数をバックエンドのスカラーに変換して作成（a1 省略時は 0）"""
        if a1 is None:
            a1 = [0] * dimension
        return cls(
            dimension=dimension,
            a2=tuple(backend.scalar(value) for value in a2),
            a1=tuple(backend.scalar(value) for value in a1),
            a0=backend.scalar(a0),
        )

    @classmethod
    def from_row(cls, backend: Backend, row: Matrix, dimension: int) -> "QuadraticMultiplier":
        """1 x 𝐫_2 の係数行から作成"""
        values = [row[0, column] for column in range(cumulative_size(2, dimension))]
        if all(backend.is_zero_scalar(value) for value in values[dimension + 1 :]):
            raise DegreeCollapse("recovered multiplier has no degree-2 part")
        return cls(
            dimension=dimension,
            a2=tuple(values[dimension + 1 :]),
            a1=tuple(values[1 : dimension + 1]),
            a0=values[0],
        )

    def as_polynomial(self) -> Dict[MultiIndex, Any]:
        """多重指数 -> 係数の辞書"""
        d = self.dimension
        terms: Dict[MultiIndex, Any] = {(0,) * d: self.a0}
        for i, value in enumerate(self.a1):
            terms[unit(i, d)] = value
        for nu, value in zip(enumerate_indices(2, d), self.a2):
            terms[nu] = value
        return terms

    def row(self, backend: Backend) -> Matrix:
        """係数行（1 x 𝐫_2）"""
        return coefficient_row(backend, self.as_polynomial(), self.dimension, 2)

    def shift_aggregate(self, backend: Backend, h: int) -> Tuple[Matrix, Matrix]:
        """(A_{h,1}, A_{h,2})

        A_{h,1} = Σ_i a_i L_{h,i}、A_{h,2} = Σ_{i≤j} a_ij L_{h,j} L_{h+1,i}
        """
        d = self.dimension
        first = backend.zeros(rank_size(h, d), rank_size(h + 1, d))
        for i, value in enumerate(self.a1, start=1):
            first = first + backend.scalar(value) * shift(backend, h, i, d)

        second = backend.zeros(rank_size(h, d), rank_size(h + 2, d))
        # enumerate_indices(2, d) の順は i ≤ j の組の辞書式順
        pairs = [(i, j) for i in range(1, d + 1) for j in range(i, d + 1)]
        for (i, j), value in zip(pairs, self.a2):
            second = second + backend.scalar(value) * (
                shift(backend, h, j, d) @ shift(backend, h + 1, i, d)
            )
        return first, second

    def is_odd_free(self) -> bool:
        """𝐚_1 = 0 か"""
        return all(value == 0 for value in self.a1)


def modified_moment_block(
    u: MomentFunctional, multiplier: QuadraticMultiplier, h: int, k: int
) -> Matrix:
    """𝐦̂_{h,k} = a_0 𝐦_{h,k} + A_{h,1} 𝐦_{h+1,k} + A_{h,2} 𝐦_{h+2,k}"""
    backend = u.backend
    first, second = multiplier.shift_aggregate(backend, h)
    return (
        backend.scalar(multiplier.a0) * u.moment_block(h, k)
        + first @ u.moment_block(h + 1, k)
        + second @ u.moment_block(h + 2, k)
    )


def christoffel_functional(
    u: MomentFunctional, multiplier: QuadraticMultiplier, label: Optional[str] = None
) -> MomentFunctional:
    """v = λ(x)u（⟨u, λ⟩ ≠ 0 を確認）"""
    polynomial = multiplier.as_polynomial()
    if u.backend.is_zero_scalar(u.apply(polynomial)):
        raise InvalidModificationError("⟨u, λ⟩ vanishes", field="lambda")
    v = u.left_multiply(polynomial, label=label or f"λ*{u.label}")
    v.centrally_symmetric = u.centrally_symmetric and multiplier.is_odd_free()
    return v


@dataclass
class ConnectionCoeffs:
    """𝐏_n = ℚ_n + M_n ℚ_{n-1} + N_n ℚ_{n-2} の係数

    m[n] は r_n x r_{n-1}、n[k] は r_k x r_{k-2}（範囲外は 0 列の行列）。
    h0 は Ĥ_0（既知の場合）。
    """

    dimension: int
    m: List[Matrix]
    n: List[Matrix]
    h0: Optional[Scalar] = None

    @property
    def max_degree(self) -> int:
        return len(self.m) - 1


def connection(
    u_ops: OPSystem, v_ops: OPSystem, max_degree: Optional[int] = None
) -> ConnectionCoeffs:
    """M_n = ⟨v, 𝐏_n ℚ_{n-1}^t⟩Ĥ_{n-1}^{-1}、N_n = ⟨v, 𝐏_n ℚ_{n-2}^t⟩Ĥ_{n-2}^{-1}"""
    backend = u_ops.backend
    d = u_ops.dimension
    top = min(u_ops.max_degree, v_ops.max_degree)
    if max_degree is not None:
        top = min(top, max_degree)
    v = v_ops.functional

    m_seq: List[Matrix] = []
    n_seq: List[Matrix] = []
    for n in range(top + 1):
        p = u_ops.coefficients(n)
        if n >= 1:
            projection = v.pairing(p, v_ops.coefficients(n - 1))
            m_seq.append(projection @ v_ops.gram_inverse(n - 1))
        else:
            m_seq.append(backend.zeros(rank_size(n, d), 0))
        if n >= 2:
            projection = v.pairing(p, v_ops.coefficients(n - 2))
            n_seq.append(projection @ v_ops.gram_inverse(n - 2))
        else:
            n_seq.append(backend.zeros(rank_size(n, d), rank_size(n - 2, d)))
        logger.debug("connection coefficients at degree %d", n)

    return ConnectionCoeffs(d, m_seq, n_seq, h0=v_ops.gram(0)[0, 0])


def connection_residual(
    u_ops: OPSystem, v_ops: OPSystem, conn: ConnectionCoeffs, n: int
) -> Matrix:
    """𝐏_n - ℚ_n - M_n ℚ_{n-1} - N_n ℚ_{n-2} の係数"""
    return (
        u_ops.coefficients(n)
        - v_ops.coefficients(n)
        - conn.m[n] @ v_ops.coefficients(n - 1, n)
        - conn.n[n] @ v_ops.coefficients(n - 2, n)
    )


def n2_residual(
    u_ops: OPSystem, conn: ConnectionCoeffs, multiplier: QuadraticMultiplier
) -> Matrix:
    """N_2 - H_2 𝐚_2^t Ĥ_0^{-1}"""
    backend = u_ops.backend
    a2 = backend.column(multiplier.a2)
    return conn.n[2] - u_ops.gram(2) @ a2 / conn.h0


def n_gram_residual(
    u_ops: OPSystem,
    v_ops: OPSystem,
    conn: ConnectionCoeffs,
    multiplier: QuadraticMultiplier,
    n: int,
) -> Matrix:
    """N_n Ĥ_{n-2} - H_n A_{n-2,2}^t"""
    _, second = multiplier.shift_aggregate(u_ops.backend, n - 2)
    return conn.n[n] @ v_ops.gram(n - 2) - u_ops.gram(n) @ second.T


@dataclass
class TransportedRecurrence:
    """移送した三項関係の係数と整合性条件の残差"""

    b: Dict[Tuple[int, int], Matrix] = field(default_factory=dict)
    c: Dict[Tuple[int, int], Matrix] = field(default_factory=dict)
    consistency_m: Dict[Tuple[int, int], Matrix] = field(default_factory=dict)
    consistency_n: Dict[Tuple[int, int], Matrix] = field(default_factory=dict)

    @property
    def max_degree(self) -> int:
        return max((n for n, _ in self.b), default=-1)


def transport_three_term(
    u_ops: OPSystem, conn: ConnectionCoeffs, max_degree: Optional[int] = None
) -> TransportedRecurrence:
    """B̂_{n,i}, Ĉ_{n,i} と整合性条件の残差

    B̂_{n,i} = B_{n,i} - M_n L_{n-1,i} + L_{n,i} M_{n+1}
    Ĉ_{n,i} = C_{n,i} - M_n B̂_{n-1,i} + B_{n,i} M_n - N_n L_{n-2,i} + L_{n,i} N_{n+1}
    """
    backend = u_ops.backend
    d = u_ops.dimension
    top = conn.max_degree - 1
    if max_degree is not None:
        top = min(top, max_degree)
    result = TransportedRecurrence()
    m, nn = conn.m, conn.n

    for n in range(top + 1):
        for i in range(1, d + 1):
            b, c = u_ops.three_term(n, i)
            b_hat = b - m[n] @ shift(backend, n - 1, i, d) + shift(backend, n, i, d) @ m[n + 1]
            result.b[(n, i)] = b_hat
            if n == 0:
                result.c[(n, i)] = c
                continue
            c_hat = (
                c
                - m[n] @ result.b[(n - 1, i)]
                + b @ m[n]
                - nn[n] @ shift(backend, n - 2, i, d)
                + shift(backend, n, i, d) @ nn[n + 1]
            )
            result.c[(n, i)] = c_hat
            if n >= 2:
                result.consistency_m[(n, i)] = (
                    m[n] @ result.c[(n - 1, i)]
                    + nn[n] @ result.b[(n - 2, i)]
                    - c @ m[n - 1]
                    - b @ nn[n]
                )
            if n >= 3:
                result.consistency_n[(n, i)] = c @ nn[n - 1] - nn[n] @ result.c[(n - 2, i)]
    return result


def recover_multiplier(u_ops: OPSystem, conn: ConnectionCoeffs) -> QuadraticMultiplier:
    """λ = Ĥ_0 (N_2^t H_2^{-1} 𝐏_2 + M_1^t H_1^{-1} 𝐏_1 + H_0^{-1} 𝐏_0)

    Ĥ_0 が未知なら 1 とします（λ は定数倍を除いて決まる）。
    """
    backend = u_ops.backend
    if conn.max_degree < 2 or backend.is_zero(conn.n[2]):
        raise DegreeCollapse()
    scale = backend.one() if conn.h0 is None else conn.h0
    row = (
        conn.n[2].T @ u_ops.gram_inverse(2) @ u_ops.coefficients(2)
        + conn.m[1].T @ u_ops.gram_inverse(1) @ u_ops.coefficients(1, 2)
        + u_ops.gram_inverse(0) @ u_ops.coefficients(0, 2)
    )
    return QuadraticMultiplier.from_row(backend, row * scale, u_ops.dimension)


@dataclass
class ChristoffelBuild:
    """接続係数から再構成した OPS"""

    polynomials: List[VectorPolynomial]
    multiplier: QuadraticMultiplier
    functional: MomentFunctional
    grams: List[Matrix]
    recurrence: TransportedRecurrence


def _candidate_polynomials(u_ops: OPSystem, conn: ConnectionCoeffs) -> List[Matrix]:
    """ℚ_n = 𝐏_n - M_n ℚ_{n-1} - N_n ℚ_{n-2}"""
    backend = u_ops.backend
    d = u_ops.dimension
    q: List[Matrix] = []
    for n in range(conn.max_degree + 1):
        width = cumulative_size(n, d)
        current = u_ops.coefficients(n)
        if n >= 1:
            current = current - conn.m[n] @ pad(backend, q[n - 1], width)
        if n >= 2:
            current = current - conn.n[n] @ pad(backend, q[n - 2], width)
        q.append(current)
    return q


def build_from_connection(
    u_ops: OPSystem, m_seq: Sequence[Matrix], n_seq: Sequence[Matrix], h0: Optional[Any] = None
) -> ChristoffelBuild:
    """接続係数から ℚ_n を作り、三項関係と直交性を確認

    Raises:
        DegreeCollapse: N_2 = 0
        NoThreeTerm: 三項関係が成り立たない最初の次数
        NotQuasiDefinite: ℚ_n が低い次数と v について直交しない、または Ĥ_n が特異
    """
    backend = u_ops.backend
    d = u_ops.dimension
    conn = ConnectionCoeffs(d, list(m_seq), list(n_seq), h0)
    if conn.max_degree < 2 or backend.is_zero(conn.n[2]):
        raise DegreeCollapse()

    q = _candidate_polynomials(u_ops, conn)
    recurrence = transport_three_term(u_ops, conn)
    for n in range(conn.max_degree):
        for i in range(1, d + 1):
            _check_relation(backend, recurrence.consistency_m, n, i, "consistency_m")
            _check_relation(backend, recurrence.consistency_n, n, i, "consistency_n")
            residual = _three_term_residual(backend, q, recurrence, n, i, d)
            if not backend.is_zero(residual):
                raise NoThreeTerm(n, i, residual=residual, relation="three_term")

    multiplier = recover_multiplier(u_ops, conn)
    v = christoffel_functional(u_ops.functional, multiplier, label="v")
    grams: List[Matrix] = []
    for n, coefficients in enumerate(q):
        for m in range(n):
            if not backend.is_zero(v.pairing(coefficients, q[m])):
                raise NotQuasiDefinite(
                    n,
                    message=f"Q_{n} is not orthogonal to Q_{m} with respect to v",
                    details={"relation": "orthogonality", "against": m},
                )
        gram = v.pairing(coefficients, coefficients)
        if backend.is_singular(gram):
            raise NotQuasiDefinite(n, message=f"modified Gram matrix singular at degree {n}")
        grams.append(gram)

    polynomials = [VectorPolynomial(d, n, coeffs, backend) for n, coeffs in enumerate(q)]
    logger.info("rebuilt %d degrees from connection coefficients", len(polynomials))
    return ChristoffelBuild(polynomials, multiplier, v, grams, recurrence)


def _check_relation(
    backend: Backend, table: Dict[Tuple[int, int], Matrix], n: int, i: int, name: str
) -> None:
    residual = table.get((n, i))
    if residual is not None and not backend.is_zero(residual):
        raise NoThreeTerm(n, i, residual=residual, relation=name)


def _three_term_residual(
    backend: Backend,
    q: List[Matrix],
    recurrence: TransportedRecurrence,
    n: int,
    i: int,
    d: int,
) -> Matrix:
    """x_i ℚ_n - L_{n,i} ℚ_{n+1} - B̂_{n,i} ℚ_n - Ĉ_{n,i} ℚ_{n-1}"""
    width = cumulative_size(n + 1, d)
    result = multiply_by_variable(backend, q[n], d, i)
    result = result - shift(backend, n, i, d) @ q[n + 1]
    result = result - recurrence.b[(n, i)] @ pad(backend, q[n], width)
    if n >= 1:
        result = result - recurrence.c[(n, i)] @ pad(backend, q[n - 1], width)
    return result


def orthogonality_residual(v: MomentFunctional, q: Sequence[Matrix]) -> Matrix:
    """⟨v, ℚ_n ℚ_m^t⟩（m < n）の成分を一行に並べたもの"""
    backend = v.backend
    blocks = [v.pairing(q[n], q[m]) for n in range(len(q)) for m in range(n)]
    if not blocks:
        return backend.zeros(0, 0)
    return backend.hstack([block.reshape(1, block.shape[0] * block.shape[1]) for block in blocks])


def quasi_orthogonality_residual(
    u_ops: OPSystem, multiplier: QuadraticMultiplier, q_n: Matrix, n: int
) -> Matrix:
    """⟨u, λℚ_n 𝐏_k^t⟩（k < n、0 であるべき）"""
    backend = u_ops.backend
    d = u_ops.dimension
    if n == 0:
        return backend.zeros(rank_size(0, d), 0)
    product = multiply_by_polynomial(backend, q_n, d, multiplier.as_polynomial())
    lower = backend.vstack([u_ops.coefficients(k, n - 1) for k in range(n)])
    return u_ops.functional.pairing(product, lower)


def is_centrally_symmetric(
    u: MomentFunctional, max_degree: int, ops: Optional[OPSystem] = None
) -> bool:
    """奇数次モーメントの消滅と B_{n,i} = 0 の二通りで判定

    Raises:
        InconsistentSymmetry: 二つの判定が食い違う
    """
    moments_route = u.odd_moments_vanish(2 * max_degree + 1)
    if ops is None or ops.max_degree < max_degree:
        ops = build_monic_ops(u, max_degree)
    backend = u.backend
    recurrence_route = all(
        backend.is_zero(ops.three_term(n, i)[0])
        for n in range(max_degree + 1)
        for i in range(1, u.dimension + 1)
    )
    if moments_route != recurrence_route:
        raise InconsistentSymmetry(
            moments_route=moments_route, recurrence_route=recurrence_route
        )
    logger.debug("%s: centrally symmetric=%s", u.label, moments_route)
    return moments_route


def symmetry_equivalence(
    u: MomentFunctional, multiplier: QuadraticMultiplier, max_degree: int
) -> Tuple[bool, bool]:
    """中心対称な u について (v が中心対称か, 𝐚_1 = 0 か)"""
    v = christoffel_functional(u, multiplier)
    v.centrally_symmetric = False
    return is_centrally_symmetric(v, max_degree), multiplier.is_odd_free()
