"""
設定

汎関数の仕様ファイル（JSON）を pydantic のモデルで検証し、
汎関数・点質量・乗数に変換します。実行設定は RunConfig にまとめます。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .backend import DEFAULT_TOLERANCE, Backend, available_backends, get_backend
from .christoffel import QuadraticMultiplier
from .exceptions import ConfigurationError, SpecFileError
from .families.ball import ball_functional
from .families.bessel_laguerre import bl_functional
from .families.special import product_functional, univariate_moments
from .json_handler import JSONHandler
from .moments import MomentFunctional, table_functional
from .multiindex import MultiIndex

logger = logging.getLogger(__name__)

RationalValue = Union[int, float, str]

COMMANDS = ("build", "uvarov", "christoffel", "verify-all", "experiment")
LOG_LEVELS = ("critical", "error", "warning", "info", "debug")


def _check_rational(value: Any) -> Any:
    if isinstance(value, str):
        try:
            Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"'{value}' is not a rational number")
    return value


def parse_index(key: str) -> MultiIndex:
    """"(i,j)" を多重指数に変換"""
    text = key.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    try:
        index = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ValueError(f"'{key}' is not a multi-index")
    if not index or any(value < 0 for value in index):
        raise ValueError(f"'{key}' is not a multi-index")
    return index


class FactorModel(BaseModel):
    """直積型汎関数の一変数因子"""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["legendre", "laguerre", "hermite", "bessel", "table"]
    alpha: Optional[RationalValue] = None
    a: Optional[RationalValue] = None
    b: Optional[RationalValue] = None
    moments: List[RationalValue] = Field(default_factory=list)

    check_rational = field_validator("alpha", "a", "b")(_check_rational)

    @field_validator("moments")
    @classmethod
    def check_moments(cls, values: List[RationalValue]) -> List[RationalValue]:
        return [_check_rational(value) for value in values]

    def params(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {}
        for name in ("alpha", "a", "b"):
            value = getattr(self, name)
            if value is not None:
                result[name] = Fraction(str(value))
        if self.moments:
            result["moments"] = self.moments
        return result


class MassModel(BaseModel):
    """点質量 λδ_ξ"""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    point: List[RationalValue]
    mass: RationalValue = Field(alias="lambda")

    @field_validator("point")
    @classmethod
    def check_point(cls, values: List[RationalValue]) -> List[RationalValue]:
        if not values:
            raise ValueError("point needs at least one coordinate")
        return [_check_rational(value) for value in values]

    check_rational = field_validator("mass")(_check_rational)


class FunctionalSpecModel(BaseModel):
    """汎関数の仕様ファイル"""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["table", "ball", "bessel_laguerre", "product"]
    d: Optional[int] = Field(default=None, ge=1)
    mu: Optional[RationalValue] = None
    g: Optional[RationalValue] = None
    gamma: Optional[RationalValue] = None
    moments: Dict[str, RationalValue] = Field(default_factory=dict)
    fill: Optional[RationalValue] = None
    factors: List[FactorModel] = Field(default_factory=list)
    masses: List[MassModel] = Field(default_factory=list)
    lambda2: Optional[List[RationalValue]] = None
    lambda1: Optional[List[RationalValue]] = None
    lambda0: Optional[RationalValue] = None

    check_rational = field_validator("mu", "g", "gamma", "fill", "lambda0")(_check_rational)

    @field_validator("moments")
    @classmethod
    def check_moment_table(cls, values: Dict[str, RationalValue]) -> Dict[str, RationalValue]:
        for key, value in values.items():
            parse_index(key)
            _check_rational(value)
        return values

    @model_validator(mode="after")
    def check_required_fields(self) -> "FunctionalSpecModel":
        missing = {
            "table": [name for name in ("d",) if getattr(self, name) is None],
            "ball": [name for name in ("mu",) if getattr(self, name) is None],
            "bessel_laguerre": [name for name in ("g", "gamma") if getattr(self, name) is None],
            "product": [] if self.factors else ["factors"],
        }[self.kind]
        if missing:
            raise ValueError(f"kind '{self.kind}' requires {', '.join(missing)}")
        if self.kind == "table" and not self.moments:
            raise ValueError("kind 'table' requires moments")
        if self.kind == "bessel_laguerre" and self.d not in (None, 2):
            raise ValueError("kind 'bessel_laguerre' is bivariate")
        if self.kind == "product" and self.d not in (None, len(self.factors)):
            raise ValueError("d must equal the number of factors")
        for index in self.moments:
            if self.d is not None and len(parse_index(index)) != self.d:
                raise ValueError(f"moment index {index} does not have {self.d} entries")
        return self

    @property
    def dimension(self) -> int:
        if self.kind == "bessel_laguerre":
            return 2
        if self.kind == "product":
            return len(self.factors)
        return self.d if self.d is not None else 2

    @property
    def has_multiplier(self) -> bool:
        return self.lambda2 is not None


def parse_spec(text: Union[str, bytes]) -> FunctionalSpecModel:
    """JSON テキストから仕様を検証

    Raises:
        SpecFileError: JSON の構文エラー（行番号つき）または検証エラー（フィールドつき）
    """
    data = JSONHandler.loads(text)
    try:
        return FunctionalSpecModel.model_validate(data)
    except ValidationError as e:
        errors = e.errors()
        first = errors[0]
        location = ".".join(str(part) for part in first["loc"]) or None
        messages = [f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in errors]
        raise SpecFileError(first["msg"], field=location, details={"errors": messages})


def load_spec(path: Union[str, Path]) -> FunctionalSpecModel:
    """仕様ファイルを読み込む"""
    try:
        text = Path(path).read_bytes()
    except OSError as e:
        raise SpecFileError(f"cannot read specification: {e}", field=str(path))
    logger.debug("loaded specification %s", path)
    return parse_spec(text)


def spec_functional(
    spec: FunctionalSpecModel, backend: Backend, max_degree: int
) -> MomentFunctional:
    """仕様から汎関数を作成"""
    if spec.kind == "table":
        moments = {parse_index(key): value for key, value in spec.moments.items()}
        return table_functional(spec.dimension, moments, backend, fill=spec.fill)
    if spec.kind == "ball":
        return ball_functional(backend, spec.dimension, spec.mu)
    if spec.kind == "bessel_laguerre":
        return bl_functional(backend, spec.g, spec.gamma, max_degree)
    factors = [
        univariate_moments(backend, factor.kind, max_degree=max_degree, **factor.params())
        for factor in spec.factors
    ]
    label = "x".join(factor.kind for factor in spec.factors)
    return product_functional(backend, factors, label=label)


def spec_masses(spec: FunctionalSpecModel) -> Tuple[List[List[Any]], List[Any]]:
    """仕様の点質量（点の並びと質量の並び）"""
    return [list(mass.point) for mass in spec.masses], [mass.mass for mass in spec.masses]


def spec_multiplier(spec: FunctionalSpecModel, backend: Backend) -> QuadraticMultiplier:
    """仕様の 2 次の乗数"""
    if spec.lambda2 is None:
        raise SpecFileError("specification has no lambda2", field="lambda2")
    return QuadraticMultiplier.create(
        backend,
        spec.dimension,
        spec.lambda2,
        spec.lambda1,
        spec.lambda0 if spec.lambda0 is not None else 0,
    )


@dataclass
class RunConfig:
    """実行設定"""

    command: str
    spec_path: Optional[str] = None
    degree: int = 4
    backend: str = "exact"
    tolerance: float = DEFAULT_TOLERANCE
    out_dir: Optional[str] = None
    seed: Optional[int] = None
    log_level: str = "warning"
    experiment: Optional[str] = None
    seeds: int = 20
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        """初期化後の検証"""
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command '{self.command}'", option="command")
        if self.degree < 0:
            raise ConfigurationError("degree must be non-negative", option="degree")
        if self.backend not in available_backends():
            raise ConfigurationError(f"unknown backend '{self.backend}'", option="backend")
        if self.tolerance <= 0:
            raise ConfigurationError("tolerance must be positive", option="tol")
        if self.seed is not None and self.seed < 0:
            raise ConfigurationError("seed must be non-negative", option="seed")
        if self.seeds < 1:
            raise ConfigurationError("at least one seed is required", option="seeds")
        if self.log_level not in LOG_LEVELS:
            raise ConfigurationError(f"unknown log level '{self.log_level}'", option="log-level")
        if self.command == "experiment" and not self.experiment:
            raise ConfigurationError("experiment name is required", option="name")
        if self.command == "build" and not self.spec_path:
            raise ConfigurationError("build needs --spec", option="spec")
        if self.command in ("uvarov", "christoffel") and not self.spec_path and self.seed is None:
            raise ConfigurationError(f"{self.command} needs --spec or --seed", option="spec")

    def make_backend(self) -> Backend:
        return get_backend(self.backend, self.tolerance)


def create_run_config(
    command: str,
    spec_path: Optional[str] = None,
    degree: int = 4,
    backend: str = "exact",
    tolerance: float = DEFAULT_TOLERANCE,
    out_dir: Optional[str] = None,
    seed: Optional[int] = None,
    log_level: str = "warning",
    experiment: Optional[str] = None,
    seeds: int = 20,
    params: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """実行設定を作成するヘルパー関数"""
    return RunConfig(
        command=command,
        spec_path=spec_path,
        degree=degree,
        backend=backend,
        tolerance=tolerance,
        out_dir=out_dir,
        seed=seed,
        log_level=log_level,
        experiment=experiment,
        seeds=seeds,
        params=dict(params or {}),
    )
