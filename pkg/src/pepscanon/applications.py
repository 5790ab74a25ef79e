"""Consequences of injectivity and symmetry: LSM test, Wilson loops, parent Hamiltonians, area law."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import NotFoundBelowCap, TensorNetworkError
from .injectivity import (
    affordable_regions,
    gamma_matrix_mps,
    gamma_matrix_peps,
    is_injective_mps,
    is_injective_peps,
)
from .lattice import (
    MpsSpec,
    PepsSpec,
    _grid_network,
    check_scale,
    mps_state,
    peps_state,
    reduced_density,
    region_sites,
    renyi0,
)
from .symmetry import apply_on_every_site, certify_representation
from .tensor_core import DEFAULT_TOL, Tolerance, frobenius, nullspace, numeric_rank

HILBERT_CAP = 2 ** 12
INTEGER_TOL = 1e-6


def _lattice_of(spec, lattice):
    if lattice is not None:
        return tuple(lattice)
    return (spec.rows, spec.cols) if isinstance(spec, PepsSpec) else (6,)


def state_on(spec, lattice=None) -> np.ndarray:
    lattice = _lattice_of(spec, lattice)
    if isinstance(spec, MpsSpec):
        return mps_state(spec, lattice[0])
    return peps_state(spec.on_lattice(*lattice))


def _apply_local(psi, op, sites, n, d):
    """Apply a (d**k x d**k) operator to ``sites`` (in that order) of an n-site vector or block."""
    k = len(sites)
    extra = psi.shape[1:] if psi.ndim > 1 else ()
    t = psi.reshape([d] * n + list(extra))
    rest = [a for a in range(n) if a not in sites]
    t = np.transpose(t, list(sites) + rest + list(range(n, n + len(extra))))
    shape = t.shape
    t = (op @ t.reshape(d ** k, -1)).reshape(shape)
    t = np.transpose(t, np.argsort(list(sites) + rest + list(range(n, n + len(extra)))))
    return t.reshape(psi.shape)


def magnetization(spec, Sz, lattice=None) -> float:
    """<psi| sum_j S_j |psi> / (n_sites <psi|psi>) on the given (or the spec's) lattice."""
    Sz = np.asarray(Sz, dtype=complex)
    if frobenius(Sz - Sz.conj().T) > 1e-12 * max(frobenius(Sz), 1.0):
        raise ValueError("Sz must be Hermitian")
    psi = state_on(spec, lattice)
    d = spec.d
    n = int(round(np.log(psi.size) / np.log(d)))
    norm = np.vdot(psi, psi).real
    total = 0.0
    for j in range(n):
        t = psi.reshape(d ** j, d, -1)
        total += np.einsum("aib,ik,akb->", t.conj(), Sz, t).real
    return float(total / (n * norm))


# ----------------------------------------------------------------- LSM


@dataclass(frozen=True)
class LsmVerdict:
    J: float
    m: float
    J_minus_m_integer: bool
    symmetric: bool
    injective: bool
    injectivity: dict
    consistent: bool
    theta_slope: float | None = None
    theta_linearity: float | None = None
    symmetry_residual: float = 0.0
    notes: tuple = ()


def _injectivity_scan(spec, tol, max_side=2, cap_length=4):
    out = {}
    if isinstance(spec, MpsSpec):
        for length in range(1, cap_length + 1):
            if spec.d ** length > 2 ** 14:
                break
            out[(length,)] = is_injective_mps(spec, length, tol).injective
    else:
        for H, K in affordable_regions(spec, max_side):
            out[(H, K)] = is_injective_peps(spec, H, K, tol).injective
    return out


def lsm_check(spec, J, Sz, tol: Tolerance = DEFAULT_TOL, angles=(0.05, 0.4, 1.1), lattice=None,
              max_side: int = 2) -> LsmVerdict:
    """Test the obstruction: a U(1)-invariant injective state must have J - m integer."""
    Sz = np.asarray(Sz, dtype=complex)
    psi = state_on(spec, lattice)
    n = int(round(np.log(psi.size) / np.log(spec.d)))
    worst = 0.0
    for g in angles:
        image = apply_on_every_site(psi, expm(1j * g * Sz), n, spec.d)
        phase = np.vdot(psi, image) / np.vdot(psi, psi)
        worst = max(worst, np.linalg.norm(image - phase * psi) / np.linalg.norm(psi))
    symmetric = bool(worst <= tol.residual_cut)
    m = magnetization(spec, Sz, lattice)
    integer = bool(abs((J - m) - round(J - m)) <= INTEGER_TOL)
    scan = _injectivity_scan(spec, tol, max_side)
    injective = any(scan.values())
    slope = linearity = None
    notes = []
    if symmetric and injective:
        try:
            rep = certify_representation(spec, generator=Sz, angles=angles, tol=tol)
            slope, linearity = rep.theta_slope, rep.theta_linearity
        except TensorNetworkError as exc:
            notes.append(f"representation not certified: {exc}")
    if not symmetric:
        notes.append("NotSymmetric")
    return LsmVerdict(
        J=float(J), m=m, J_minus_m_integer=integer, symmetric=symmetric, injective=injective,
        injectivity=scan, consistent=not (symmetric and injective and not integer),
        theta_slope=slope, theta_linearity=linearity, symmetry_residual=float(worst), notes=tuple(notes),
    )


# --------------------------------------------------------------- Wilson


@dataclass(frozen=True)
class WilsonReport:
    loop_vertical_invariant: bool
    loop_horizontal_invariant: bool
    single_site_noninvariant: bool
    residuals: dict
    non_injectivity_implied: bool
    injectivity: dict
    contradiction: bool


def wilson_check(spec: PepsSpec, u, tol: Tolerance = DEFAULT_TOL, lattice=None, max_side: int = 2) -> WilsonReport:
    """Dense test of the three loop conditions on column 0, row 0 and site (0, 0)."""
    u = np.asarray(u, dtype=complex)
    L, N = _lattice_of(spec, lattice)
    psi = state_on(spec, (L, N))
    n, d = L * N, spec.d
    nrm = np.linalg.norm(psi)

    def moved(sites):
        out = psi
        for s in sites:
            out = _apply_local(out, u, [s], n, d)
        return float(np.linalg.norm(out - psi) / nrm)

    res = {
        "vertical": moved([r * N for r in range(L)]),
        "horizontal": moved(list(range(N))),
        "single_site": moved([0]),
    }
    vert = res["vertical"] <= tol.residual_cut
    horiz = res["horizontal"] <= tol.residual_cut
    single = res["single_site"] > tol.residual_cut
    implied = bool(vert and horiz and single)
    scan = {hk: is_injective_peps(spec, *hk, tol).injective for hk in affordable_regions(spec, max_side)}
    return WilsonReport(bool(vert), bool(horiz), bool(single), res, implied, scan,
                        contradiction=implied and any(scan.values()))


# ----------------------------------------------------- parent Hamiltonian


def region_gamma(spec, region, lattice=None) -> np.ndarray:
    """Boundary-to-bulk matrix of ``region`` as it sits on the lattice.

    A PEPS patch spanning the whole torus in one direction has its bonds in that direction
    closed, so only the legs that actually cross the cut remain.
    """
    if isinstance(spec, MpsSpec):
        return gamma_matrix_mps(spec, region[0])
    H, K = region
    L, N = _lattice_of(spec, lattice)
    if H > L or K > N:
        raise ValueError(f"region {region} does not fit on the {L}x{N} torus")
    check_scale(spec.d ** (H * K))
    t = _grid_network(spec.tensor, H, K, H == L, K == N)
    return t.reshape(spec.d ** (H * K), -1)


@dataclass(frozen=True)
class ParentHamiltonianSpec:
    region: tuple
    projector: np.ndarray
    d: int
    geometry: str
    gamma_rank: int
    placement: str = "all translations, periodic"
    frustration_residual: float | None = None
    lattice: tuple = ()

    @property
    def term_rank(self) -> int:
        return int(round(np.trace(self.projector).real))

    def projector_residual(self) -> float:
        P = self.projector
        return max(frobenius(P @ P - P), frobenius(P - P.conj().T))

    def placements(self, lattice):
        if self.geometry == "mps":
            n, k = lattice[0], self.region[0]
            if k > n:
                raise ValueError("region longer than the chain")
            return [[(s + j) % n for j in range(k)] for s in range(n)]
        L, N = lattice
        H, K = self.region
        if H > L or K > N:
            raise ValueError(f"region {self.region} does not fit on the {L}x{N} torus")
        return [region_sites(L, N, a, b, H, K) for a in range(L) for b in range(N)]

    def apply(self, vecs, lattice):
        """H applied to a state vector or to the columns of a matrix."""
        n = int(np.prod(lattice))
        out = np.zeros_like(vecs, dtype=complex)
        for sites in self.placements(lattice):
            out += _apply_local(vecs, self.projector, sites, n, self.d)
        return out


def parent_hamiltonian(spec, region, tol: Tolerance = DEFAULT_TOL, lattice=None) -> ParentHamiltonianSpec:
    """Local term = projector onto the orthogonal complement of range(Gamma_region).

    The region map is always that of an open patch; terms sit at every translation.
    """
    region = tuple(region)
    lattice = _lattice_of(spec, lattice)
    if isinstance(spec, MpsSpec):
        gamma = gamma_matrix_mps(spec, region[0])
    else:
        gamma = gamma_matrix_peps(spec, *region)
    u, s, _ = np.linalg.svd(gamma, full_matrices=False)
    rank = numeric_rank(gamma, tol)
    basis = u[:, :rank]
    P = np.eye(gamma.shape[0], dtype=complex) - basis @ basis.conj().T
    geometry = "mps" if isinstance(spec, MpsSpec) else "peps"
    h = ParentHamiltonianSpec(region, P, spec.d, geometry, rank, lattice=lattice)
    psi = state_on(spec, lattice)
    residual = float(np.linalg.norm(h.apply(psi, lattice)) / np.linalg.norm(psi))
    return ParentHamiltonianSpec(region, P, spec.d, geometry, rank, frustration_residual=residual,
                                 lattice=lattice)


def ground_space_dimension(h: ParentHamiltonianSpec, lattice=None, tol: Tolerance = DEFAULT_TOL,
                           cap: int = HILBERT_CAP) -> int:
    """Dimension of the common kernel of all placed terms, built up one term at a time."""
    lattice = tuple(lattice) if lattice is not None else h.lattice
    n = int(np.prod(lattice))
    dim = h.d ** n
    check_scale(dim, cap)
    basis = np.eye(dim, dtype=complex)
    for sites in h.placements(lattice):
        image = _apply_local(basis, h.projector, sites, n, h.d)
        if frobenius(image) <= tol.residual_cut * np.sqrt(basis.shape[1]):
            continue
        keep = nullspace(image, tol)
        # columns of ``image`` are the term applied to the current orthonormal basis
        basis = basis @ keep
        if basis.shape[1] == 0:
            return 0
    return int(basis.shape[1])


# ------------------------------------------------------------- area law


@dataclass(frozen=True)
class AreaLawReport:
    region: tuple
    lattice: tuple
    S0: float
    boundary_legs: int
    boundary_bound: float
    saturated: bool
    injective: bool

    @property
    def correction(self) -> float:
        return self.boundary_bound - self.S0


def area_law_check(spec: PepsSpec, region, tol: Tolerance = DEFAULT_TOL, lattice=None, corner=(0, 0)) -> AreaLawReport:
    """Compare the 0-Renyi entropy of a patch with the number of bonds it cuts."""
    H, K = region
    L, N = _lattice_of(spec, lattice)
    if H > L or K > N:
        raise ValueError(f"region {region} does not fit on the {L}x{N} torus")
    psi = state_on(spec, (L, N))
    rho = reduced_density(psi, region_sites(L, N, corner[0], corner[1], H, K), spec.d)
    S0 = renyi0(rho, tol)
    h_legs = 2 * H if K < N else 0
    v_legs = 2 * K if H < L else 0
    bound = h_legs * np.log2(spec.Dh) + v_legs * np.log2(spec.Dv)
    gamma = region_gamma(spec, region, (L, N))
    injective = numeric_rank(gamma, tol) == gamma.shape[1]
    saturated = bool(abs(S0 - bound) < 1e-9)
    return AreaLawReport((H, K), (L, N), S0, h_legs + v_legs, float(bound), saturated, bool(injective))


def minimal_length_or_none(spec: MpsSpec, cap_length: int, tol: Tolerance = DEFAULT_TOL):
    from .injectivity import minimal_injective_length

    try:
        return minimal_injective_length(spec, cap_length, tol)
    except NotFoundBelowCap:
        return None
