"""
具体的な汎関数族

一変数の Bessel / Laguerre、球上の古典汎関数、二変数 Bessel–Laguerre。
"""

from .ball import (
    BallUvarov,
    adjacent_relation,
    adjacent_residual,
    ball_functional,
    ball_kernel_at_origin,
    ball_kernel_origin,
    ball_moment,
    ball_uvarov,
    disk_basis_coefficients,
    disk_basis_eval,
    interior_limit,
    interior_rows,
    mass_limit_rows,
)
from .bessel_laguerre import (
    BesselLaguerreUvarov,
    bessel_laguerre_uvarov,
    bl_basis_eval,
    bl_functional,
    bl_moment,
    bl_norm,
    bl_product_norm,
    krall_sheffer_residual,
)
from .special import (
    bessel_functional,
    bessel_norm,
    laguerre_functional,
    laguerre_norm,
    product_functional,
    univariate_moments,
)

__all__ = [
    "BallUvarov",
    "adjacent_relation",
    "adjacent_residual",
    "ball_functional",
    "ball_kernel_at_origin",
    "ball_kernel_origin",
    "ball_moment",
    "ball_uvarov",
    "disk_basis_coefficients",
    "disk_basis_eval",
    "interior_limit",
    "interior_rows",
    "mass_limit_rows",
    "BesselLaguerreUvarov",
    "bessel_laguerre_uvarov",
    "bl_basis_eval",
    "bl_functional",
    "bl_moment",
    "bl_norm",
    "bl_product_norm",
    "krall_sheffer_residual",
    "bessel_functional",
    "bessel_norm",
    "laguerre_functional",
    "laguerre_norm",
    "product_functional",
    "univariate_moments",
]
