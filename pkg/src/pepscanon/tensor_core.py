"""Dense complex tensor kernels: matricization, rank, kernels, Kronecker factorization.

Tensors and matrices are plain ``numpy`` complex arrays in row-major (C) order.
PEPS site tensors always carry the axis order ``(physical, left, down, right, up)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .errors import AxisSpecError, NotAKroneckerProduct

PEPS_AXES = ("physical", "left", "down", "right", "up")


@dataclass(frozen=True)
class Tolerance:
    relative_rank_cut: float = 1e-9
    residual_cut: float = 1e-9

    def __post_init__(self):
        for name in ("relative_rank_cut", "residual_cut"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")


DEFAULT_TOL = Tolerance()


def as_tensor(t) -> np.ndarray:
    """Copy ``t`` into a complex array, rejecting NaN/Inf and empty axes."""
    arr = np.array(t, dtype=complex)
    if arr.size == 0 or any(n < 1 for n in arr.shape):
        raise ValueError("tensor axes must have positive length")
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor has non-finite entries")
    return arr


def _check_axes(ndim, row_axes, col_axes):
    row_axes, col_axes = list(row_axes), list(col_axes)
    axes = row_axes + col_axes
    if sorted(axes) != list(range(ndim)):
        raise AxisSpecError(
            f"row axes {row_axes} and column axes {col_axes} must partition range({ndim})"
        )
    return row_axes, col_axes


def matricize(t: np.ndarray, row_axes, col_axes) -> np.ndarray:
    """Group ``row_axes`` into rows and ``col_axes`` into columns, row-major within each group."""
    t = np.asarray(t)
    row_axes, col_axes = _check_axes(t.ndim, row_axes, col_axes)
    rows = prod(t.shape[a] for a in row_axes)
    cols = prod(t.shape[a] for a in col_axes)
    return np.transpose(t, row_axes + col_axes).reshape(rows, cols)


def unmatricize(m: np.ndarray, shape, row_axes, col_axes) -> np.ndarray:
    """Inverse of :func:`matricize` for a tensor of the given ``shape``."""
    row_axes, col_axes = _check_axes(len(shape), row_axes, col_axes)
    order = row_axes + col_axes
    t = np.asarray(m).reshape([shape[a] for a in order])
    return np.transpose(t, np.argsort(order))


def singular_values(m: np.ndarray) -> np.ndarray:
    return np.linalg.svd(np.asarray(m, dtype=complex), compute_uv=False)


def _rank_from_singular_values(s, tol: Tolerance) -> int:
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.relative_rank_cut * s[0]))


def numeric_rank(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above ``relative_rank_cut`` times the largest one."""
    return _rank_from_singular_values(singular_values(m), tol)


def nullspace(m: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the right kernel of ``m``, one vector per column."""
    m = np.asarray(m, dtype=complex)
    # the full row basis is only needed for wide matrices
    _, s, vh = np.linalg.svd(m, full_matrices=m.shape[0] < m.shape[1])
    rank = _rank_from_singular_values(s, tol)
    return vh[rank:].conj().T


def frobenius(m) -> float:
    return float(np.linalg.norm(np.ravel(m)))


def fix_scalar(m: np.ndarray):
    """Split ``m = scalar * normalized`` under the library-wide scalar convention.

    ``normalized`` has Frobenius norm ``(rows*cols) ** 0.25`` (so an identity stays an
    identity) and its leading largest-magnitude entry is real and positive.
    """
    m = np.asarray(m, dtype=complex)
    norm = frobenius(m)
    if norm == 0.0:
        raise ValueError("cannot fix the scalar of a zero matrix")
    flat = m.ravel()
    mags = np.abs(flat)
    lead = int(np.flatnonzero(mags >= (1.0 - 1e-9) * mags.max())[0])
    phase = flat[lead] / mags[lead]
    target = float(m.size) ** 0.25
    scalar = phase * norm / target
    return m / scalar, scalar


def distance_up_to_scalar(a, b) -> float:
    """min over complex c of ||a - c b|| / ||a||."""
    a = np.ravel(np.asarray(a, dtype=complex))
    b = np.ravel(np.asarray(b, dtype=complex))
    na = np.linalg.norm(a)
    nb2 = np.vdot(b, b).real
    if na == 0.0:
        return 0.0 if nb2 == 0.0 else 1.0
    if nb2 == 0.0:
        return 1.0
    c = np.vdot(b, a) / nb2
    return float(np.linalg.norm(a - c * b) / na)


def fidelity_defect(psi, phi) -> float:
    """1 - |<psi|phi>|^2 / (<psi|psi><phi|phi>); zero iff the vectors are parallel."""
    psi = np.ravel(psi)
    phi = np.ravel(phi)
    npsi = np.vdot(psi, psi).real
    nphi = np.vdot(phi, phi).real
    if npsi == 0.0 or nphi == 0.0:
        return 1.0
    return float(max(0.0, 1.0 - abs(np.vdot(psi, phi)) ** 2 / (npsi * nphi)))


def _reshuffle(m, first, rest):
    """Rearrange m of shape (r1*R, c1*C) into (r1*c1, R*C) so kron(A, B) becomes vec(A) vec(B)^T."""
    (r1, c1), (rr, cr) = first, rest
    return m.reshape(r1, rr, c1, cr).transpose(0, 2, 1, 3).reshape(r1 * c1, rr * cr)


def kron_factorize(m: np.ndarray, dims, tol: Tolerance = DEFAULT_TOL):
    """Factor ``m`` as a Kronecker product with factor shapes ``dims``.

    Returns ``(factors, residual)`` where ``np.kron(*factors)`` reconstructs ``m`` with
    relative Frobenius error ``residual``. Every factor obeys :func:`fix_scalar`'s
    convention except the first, which absorbs the leftover global scalar.
    """
    m = np.asarray(m, dtype=complex)
    dims = [tuple(int(x) for x in d) for d in dims]
    if (prod(d[0] for d in dims), prod(d[1] for d in dims)) != m.shape:
        raise ValueError(f"factor shapes {dims} do not multiply to {m.shape}")
    norm = frobenius(m)
    if norm == 0.0:
        raise NotAKroneckerProduct("zero matrix has no Kronecker factorization", 0.0)

    factors = []
    rest = m
    for k in range(len(dims) - 1):
        head = dims[k]
        tail = (prod(d[0] for d in dims[k + 1:]), prod(d[1] for d in dims[k + 1:]))
        shuffled = _reshuffle(rest, head, tail)
        u, s, vh = np.linalg.svd(shuffled, full_matrices=False)
        truncation = float(np.sqrt(np.sum(s[1:] ** 2)) / np.sqrt(np.sum(s ** 2)))
        if truncation > tol.residual_cut:
            raise NotAKroneckerProduct(
                f"reshuffled matrix is not rank one at factor {k} (relative residual {truncation:.3g})",
                truncation,
            )
        factors.append(u[:, 0].reshape(head))
        rest = (s[0] * vh[0]).reshape(tail)
    factors.append(rest)

    normalized = []
    total = 1.0 + 0.0j
    for f in factors:
        f_norm, scalar = fix_scalar(f)
        normalized.append(f_norm)
        total *= scalar
    normalized[0] = normalized[0] * total

    rebuilt = normalized[0]
    for f in normalized[1:]:
        rebuilt = np.kron(rebuilt, f)
    residual = frobenius(rebuilt - m) / norm
    if residual > tol.residual_cut:
        raise NotAKroneckerProduct(f"Kronecker reconstruction residual {residual:.3g}", residual)
    return normalized, residual


def kron_all(mats):
    out = np.ones((1, 1), dtype=complex)
    for mat in mats:
        out = np.kron(out, mat)
    return out


def condition_number(m) -> float:
    s = singular_values(m)
    return float(np.inf) if s[-1] == 0.0 else float(s[0] / s[-1])
