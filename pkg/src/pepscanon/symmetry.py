"""Certificates for on-site and spatial symmetries, each reduced to a gauge solve."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy.linalg import expm

from .errors import IncompatibleBonds, NotASymmetry, NotSameState
from .gauge import (
    GaugeCertificate,
    STATE_CHECK_CAP,
    check_same_peps_state,
    mps_gauge,
    peps_gauge,
)
from .lattice import MpsSpec, PepsSpec, apply_physical, mps_state, peps_state
from .tensor_core import DEFAULT_TOL, Tolerance, distance_up_to_scalar, fidelity_defect, frobenius

CONSTRAINT_TOL = 1e-8

# A'[i,l,d,r,u] = A[i, ...] for each lattice transformation
LEG_PERMUTATIONS = {
    "reflection": (0, 3, 2, 1, 4),        # A'_{ldru} = A_{rdlu}
    "rotation_half": (0, 3, 4, 1, 2),     # A'_{ldru} = A_{ruld}
    "rotation_quarter": (0, 4, 1, 2, 3),  # A'_{ldru} = A_{uldr}
}
SPATIAL_KINDS = tuple(LEG_PERMUTATIONS)


@dataclass(frozen=True)
class SymmetryCertificate:
    """``apply_gauge(A, Y, Z) = exp(-i theta) * (u A)`` for local kinds,
    ``apply_gauge(A, Y, Z) = scalar * A'`` (leg-permuted) for spatial kinds."""

    kind: str
    Y: np.ndarray
    Z: np.ndarray | None
    theta: float
    residual: float
    constraint_report: dict
    gauge: GaugeCertificate
    u: np.ndarray | None = None
    theta_branch: str = "principal"

    @property
    def constraints_hold(self) -> bool:
        return all(ok for ok, _ in self.constraint_report.values())


def _check_unitary(u, d):
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise ValueError(f"u must be {d}x{d}, got {u.shape}")
    if frobenius(u.conj().T @ u - np.eye(d)) > 1e-9 * np.sqrt(d):
        raise ValueError("u is not unitary")
    return u


def _wrap(angle):
    return float((angle + np.pi) % (2 * np.pi) - np.pi)


def _principal_theta(scalar) -> float:
    """theta with scalar = exp(-i theta), in (-pi, pi]."""
    theta = -float(np.angle(scalar))
    return theta + 2 * np.pi if theta <= -np.pi else theta


def certify_local(spec, u, tol: Tolerance = DEFAULT_TOL, torus=None, mps_sites: int = 9) -> SymmetryCertificate:
    """Certify ``u^{(x)n}|psi> = e^{i theta n}|psi>`` through a virtual gauge on every site.

    For an MPS the certificate's ``Y`` is ``R^T`` with ``R A R^{-1} = e^{-i theta} u A``,
    so that ``g -> Y_g`` is a representation in both geometries.
    """
    u = _check_unitary(u, spec.d)
    if isinstance(spec, MpsSpec):
        B = MpsSpec.uniform(apply_physical(spec.tensor, u))
        n = mps_sites
        while spec.d ** n > STATE_CHECK_CAP:
            n -= 1
        if fidelity_defect(mps_state(spec, n), mps_state(B, n)) > tol.residual_cut:
            raise NotASymmetry(f"state is not invariant on {n} sites")
        try:
            cert = mps_gauge(spec, B, tol)
        except NotSameState as exc:
            raise NotASymmetry(str(exc)) from exc
        Y, Z = cert.R.T, None
    else:
        B = spec.with_tensor(apply_physical(spec.tensor, u))
        try:
            check_same_peps_state(spec, B, tol, shape=torus)
            cert = peps_gauge(spec, B, tol, torus=torus)
        except NotSameState as exc:
            raise NotASymmetry(str(exc)) from exc
        Y, Z = cert.Y, cert.Z
    lam = cert.scalar
    report = {"unit_modulus": (abs(abs(lam) - 1.0) < CONSTRAINT_TOL, abs(abs(lam) - 1.0))}
    return SymmetryCertificate("local", Y, Z, _principal_theta(lam), cert.residual, report, cert, u=u)


def spatial_transform(tensor, kind) -> np.ndarray:
    if kind not in LEG_PERMUTATIONS:
        raise ValueError(f"unknown spatial kind {kind!r}; choose from {SPATIAL_KINDS}")
    return np.ascontiguousarray(np.transpose(tensor, LEG_PERMUTATIONS[kind]))


def _rel(a, b):
    return frobenius(a - b) / max(frobenius(b), 1e-300)


def _involution_residual(Z):
    sq = Z @ Z
    c = np.trace(sq) / Z.shape[0]
    if abs(c) < 1e-300:
        return np.inf
    return frobenius(sq / c - np.eye(Z.shape[0]))


def spatial_constraints(kind, Y, Z) -> dict:
    """Residuals of the constraint identities a spatial gauge must satisfy."""
    checks = {}
    if kind == "reflection":
        checks["Y^T=Y"] = _rel(Y.T, Y)
        checks["Z^2=1"] = _involution_residual(Z)
    elif kind == "rotation_half":
        checks["Z^T=Z"] = _rel(Z.T, Z)
        checks["Y^T=Y"] = _rel(Y.T, Y)
    else:
        checks["(YZ)^T=YZ"] = _rel((Y @ Z).T, Y @ Z)
        checks["(ZY)^T=ZY"] = _rel((Z @ Y).T, Z @ Y)
    return {name: (bool(r < CONSTRAINT_TOL), float(r)) for name, r in checks.items()}


def _square_torus(d, cap=STATE_CHECK_CAP):
    for n in (3, 2, 1):
        if d ** (n * n) <= cap:
            return (n, n)
    return (1, 1)


def certify_spatial(spec: PepsSpec, kind: str, tol: Tolerance = DEFAULT_TOL, torus=None) -> SymmetryCertificate:
    """Certify a reflection or rotation symmetry by gauging ``A`` onto its leg-permuted copy."""
    if kind == "rotation_quarter":
        if spec.Dh != spec.Dv:
            raise IncompatibleBonds(f"quarter rotation needs Dh == Dv, got {spec.Dh} and {spec.Dv}")
        torus = torus or _square_torus(spec.d)
        if torus[0] != torus[1]:
            raise ValueError("quarter rotation needs a square torus")
    B = spec.with_tensor(spatial_transform(spec.tensor, kind))
    try:
        check_same_peps_state(spec, B, tol, shape=torus)
        cert = peps_gauge(spec, B, tol, torus=torus)
    except NotSameState as exc:
        raise NotASymmetry(str(exc)) from exc
    report = spatial_constraints(kind, cert.Y, cert.Z)
    return SymmetryCertificate(kind, cert.Y, cert.Z, _principal_theta(cert.scalar), cert.residual, report, cert)


def apply_on_every_site(state, u, n_sites, d) -> np.ndarray:
    psi = np.asarray(state, dtype=complex).reshape([d] * n_sites)
    for k in range(n_sites):
        psi = np.moveaxis(np.tensordot(u, psi, axes=(1, k)), 0, k)
    return psi.reshape(-1)


def global_residual(spec, cert: SymmetryCertificate, shape) -> float:
    """Relative violation of the global statement implied by ``cert`` on a given lattice.

    ``shape`` is ``(rows, cols)`` for a PEPS torus or ``(n,)`` for an MPS ring.
    """
    if isinstance(spec, MpsSpec):
        n = shape[0]
        psi = mps_state(spec, n)
    else:
        n = shape[0] * shape[1]
        psi = peps_state(spec.on_lattice(*shape))
    norm = np.linalg.norm(psi)
    if cert.kind == "local":
        image = apply_on_every_site(psi, cert.u, n, spec.d)
        return float(np.linalg.norm(image - np.exp(1j * cert.theta * n) * psi) / norm)
    moved = peps_state(spec.with_tensor(spatial_transform(spec.tensor, cert.kind)).on_lattice(*shape))
    return float(np.linalg.norm(cert.gauge.scalar ** n * moved - psi) / norm)


@dataclass(frozen=True)
class RepresentationReport:
    samples: tuple
    certificates: dict
    y_residuals: dict = field(default_factory=dict)
    z_residuals: dict = field(default_factory=dict)
    theta_residuals: dict = field(default_factory=dict)
    charges_y: np.ndarray | None = None
    charges_z: np.ndarray | None = None
    theta_slope: float | None = None
    theta_linearity: float | None = None

    @staticmethod
    def centered(charges):
        return None if charges is None else charges - charges.mean()

    @property
    def max_residual(self) -> float:
        vals = [*self.y_residuals.values(), *self.z_residuals.values(), *self.theta_residuals.values()]
        return max(vals, default=0.0)


def _certify_labeled(spec, label, u, tol):
    try:
        return certify_local(spec, u, tol)
    except Exception as exc:  # annotate and re-raise unchanged
        exc.element = label
        raise


def _charges(Y, g):
    """Generator spectrum of ``Y_g`` at small ``g``, relative to the largest charge."""
    mu = np.linalg.eigvals(Y)
    q = np.angle(mu / mu[0]) / g
    q = np.sort(q)[::-1]
    return q - q[0]


def _pair_residuals(certs, pairs):
    y, z, th = {}, {}, {}
    for key, (a, b, c) in pairs.items():
        ca, cb, cc = certs[a], certs[b], certs[c]
        y[key] = distance_up_to_scalar(ca.Y @ cb.Y, cc.Y)
        if ca.Z is not None:
            z[key] = distance_up_to_scalar(ca.Z @ cb.Z, cc.Z)
        th[key] = abs(_wrap(ca.theta + cb.theta - cc.theta))
    return y, z, th


def certify_representation(spec, generator=None, angles=(0.05, 0.4, 1.1), elements=None,
                           tol: Tolerance = DEFAULT_TOL) -> RepresentationReport:
    """Check that the virtual gauges of a sampled symmetry group form a representation.

    Either a Hermitian ``generator`` (U(1) elements ``expm(i g h)`` at ``angles``; every
    pair sum is certified as well) or an explicit list of unitary ``elements`` (pairs whose
    product is again in the list are compared).
    """
    if (generator is None) == (elements is None):
        raise ValueError("give exactly one of generator or elements")
    if elements is not None:
        elements = [np.asarray(e, dtype=complex) for e in elements]
        certs = {k: _certify_labeled(spec, k, e, tol) for k, e in enumerate(elements)}
        pairs = {}
        for i in range(len(elements)):
            for j in range(len(elements)):
                if i == j:
                    continue
                prod_ij = elements[i] @ elements[j]
                for k, e in enumerate(elements):
                    if frobenius(e - prod_ij) <= 1e-9 * frobenius(e):
                        pairs[(i, j)] = (i, j, k)
                        break
        y, z, th = _pair_residuals(certs, pairs)
        return RepresentationReport(tuple(range(len(elements))), certs, y, z, th)

    h = np.asarray(generator, dtype=complex)
    if frobenius(h - h.conj().T) > 1e-12 * max(frobenius(h), 1.0):
        raise ValueError("generator must be Hermitian")
    angles = [float(g) for g in angles]
    needed = sorted(set(angles) | {a + b for a, b in combinations(angles, 2)})
    certs = {g: _certify_labeled(spec, g, expm(1j * g * h), tol) for g in needed}
    pairs = {(a, b): (a, b, a + b) for a, b in combinations(angles, 2)}
    y, z, th = _pair_residuals(certs, pairs)
    g0 = min(angles, key=abs)
    slope = certs[g0].theta / g0
    linearity = max(abs(_wrap(certs[g].theta - g * slope)) for g in needed)
    return RepresentationReport(
        samples=tuple(needed),
        certificates=certs,
        y_residuals=y,
        z_residuals=z,
        theta_residuals=th,
        charges_y=_charges(certs[g0].Y, g0),
        charges_z=None if certs[g0].Z is None else _charges(certs[g0].Z, g0),
        theta_slope=float(slope),
        theta_linearity=float(linearity),
    )
