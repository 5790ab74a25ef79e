"""Boundary-to-bulk maps of MPS and PEPS regions and their injectivity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotFoundBelowCap
from .lattice import DEFAULT_AMPLITUDE_CAP, MpsSpec, PepsSpec, block_region, check_scale, config_products
from .tensor_core import DEFAULT_TOL, Tolerance, singular_values


@dataclass(frozen=True)
class InjectivityReport:
    region: tuple
    gamma_rank: int
    full_rank_target: int
    injective: bool
    tolerance: Tolerance
    # singular values on either side of the rank cut (relative to the largest)
    sv_above_cut: float
    sv_below_cut: float

    def summary(self) -> str:
        verdict = "injective" if self.injective else "not injective"
        return f"{verdict}, rank {self.gamma_rank}/{self.full_rank_target}"


def gamma_matrix_mps(spec: MpsSpec, length: int, cap: int = DEFAULT_AMPLITUDE_CAP) -> np.ndarray:
    """Matrix of X -> sum tr(X A_{i_1}...A_{i_L}) |i_1...i_L>, columns indexed by row-major vec(X)."""
    if spec.boundary != "periodic":
        raise ValueError("injectivity is defined for translation-invariant MPS")
    check_scale(spec.d ** length, cap)
    products = config_products(spec.tensor, length)
    # tr(X P) = sum_{a,b} X[a,b] P[b,a]
    return products.transpose(0, 2, 1).reshape(products.shape[0], -1)


def gamma_matrix_peps(spec: PepsSpec, H: int, K: int, cap: int = DEFAULT_AMPLITUDE_CAP) -> np.ndarray:
    """Rows: physical configurations of the H x K region; columns: (left, down, right, up) boundary legs."""
    check_scale(spec.d ** (H * K), cap)
    region = block_region(spec, H, K)
    return region.reshape(region.shape[0], -1)


def _report(gamma, region, target, tol: Tolerance) -> InjectivityReport:
    s = singular_values(gamma)
    if s.size == 0 or s[0] == 0.0:
        rank, rel = 0, np.zeros(0)
    else:
        rel = s / s[0]
        rank = int(np.count_nonzero(rel > tol.relative_rank_cut))
    above = float(rel[rank - 1]) if rank > 0 else 0.0
    below = float(rel[rank]) if rank < rel.size else 0.0
    return InjectivityReport(
        region=region,
        gamma_rank=rank,
        full_rank_target=target,
        injective=rank == target,
        tolerance=tol,
        sv_above_cut=above,
        sv_below_cut=below,
    )


def is_injective_mps(spec: MpsSpec, length: int, tol: Tolerance = DEFAULT_TOL,
                     cap: int = DEFAULT_AMPLITUDE_CAP) -> InjectivityReport:
    gamma = gamma_matrix_mps(spec, length, cap)
    return _report(gamma, (length,), spec.D ** 2, tol)


def minimal_injective_length(spec: MpsSpec, cap_length: int, tol: Tolerance = DEFAULT_TOL,
                             cap: int = DEFAULT_AMPLITUDE_CAP) -> int:
    """Smallest region length with full-rank Gamma; raises :class:`NotFoundBelowCap` otherwise."""
    if cap_length < 1:
        raise ValueError("cap_length must be at least 1")
    best = 0
    for length in range(1, cap_length + 1):
        if spec.d ** length > cap:
            break
        report = is_injective_mps(spec, length, tol, cap)
        if report.injective:
            return length
        best = max(best, report.gamma_rank)
    raise NotFoundBelowCap(cap_length, best, spec.D ** 2)


def is_injective_peps(spec: PepsSpec, H: int, K: int, tol: Tolerance = DEFAULT_TOL,
                      cap: int = DEFAULT_AMPLITUDE_CAP) -> InjectivityReport:
    gamma = gamma_matrix_peps(spec, H, K, cap)
    target = (spec.Dh ** H * spec.Dv ** K) ** 2
    return _report(gamma, (H, K), target, tol)


def affordable_regions(spec: PepsSpec, max_side: int = 3, cap: int = 2 ** 16):
    """Regions (H, K) with both Gamma dimensions within ``cap`` (SVD-sized, not amplitude-sized)."""
    out = []
    for H in range(1, max_side + 1):
        for K in range(1, max_side + 1):
            rows = spec.d ** (H * K)
            cols = (spec.Dh ** H * spec.Dv ** K) ** 2
            if rows <= cap and cols <= cap and rows * min(rows, cols) <= 2 ** 26:
                out.append((H, K))
    return out


_REGION_CACHE: dict = {}


def find_injective_region(spec: PepsSpec, tol: Tolerance = DEFAULT_TOL, max_side: int = 2):
    """First affordable region (by area) on which the PEPS is injective, or ``None``.

    Results are memoized on the tensor contents, since gauge solves ask repeatedly.
    """
    key = (spec.tensor.shape, spec.tensor.tobytes(), tol, max_side)
    if key in _REGION_CACHE:
        return _REGION_CACHE[key]
    found = None
    for H, K in sorted(affordable_regions(spec, max_side), key=lambda hk: (hk[0] * hk[1], hk)):
        if is_injective_peps(spec, H, K, tol).injective:
            found = (H, K)
            break
    if len(_REGION_CACHE) > 256:
        _REGION_CACHE.clear()
    _REGION_CACHE[key] = found
    return found


def check_region_growth(spec: PepsSpec, H: int, K: int, tol: Tolerance = DEFAULT_TOL,
                        cap: int = DEFAULT_AMPLITUDE_CAP) -> bool:
    """Whether injectivity on H x K carries over to (H+1) x K and H x (K+1)."""
    if not is_injective_peps(spec, H, K, tol, cap).injective:
        return True
    return (is_injective_peps(spec, H + 1, K, tol, cap).injective
            and is_injective_peps(spec, H, K + 1, tol, cap).injective)
