"""End-to-end pipelines over the bundled states, returning checklists."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .applications import (
    area_law_check,
    ground_space_dimension,
    lsm_check,
    parent_hamiltonian,
    wilson_check,
)
from .errors import NonUniqueGauge
from .gauge import mps_gauge
from .injectivity import affordable_regions, is_injective_mps, is_injective_peps, minimal_injective_length
from .lattice import block_columns
from .states import PAULI, aklt, ghz, polarized_product, spin_matrices, toric_code, toric_code_edges
from .symmetry import RepresentationReport, certify_representation
from .tensor_core import DEFAULT_TOL, Tolerance


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    value: object
    tag: str


def _half_odd(values, tol=1e-8):
    return bool(np.all(np.abs(2 * np.asarray(values) - np.round(2 * np.asarray(values))) < tol)
                and np.all(np.round(2 * np.asarray(values)) % 2 == 1))


def demo_ghz(tol: Tolerance = DEFAULT_TOL):
    spec = ghz()
    ranks = {L: is_injective_mps(spec, L, tol) for L in range(1, 5)}
    checks = [Check("not injective at lengths 1-4", not any(r.injective for r in ranks.values()),
                    {L: r.summary() for L, r in ranks.items()}, "injectivity")]
    try:
        mps_gauge(spec, spec, tol)
        checks.append(Check("gauge is not unique", False, "unique", "gauge-uniqueness"))
    except NonUniqueGauge as exc:
        checks.append(Check("gauge is not unique", exc.intertwiner_dim == 2,
                            f"intertwiner dim {exc.intertwiner_dim}", "gauge-uniqueness"))
    h = parent_hamiltonian(spec, (2,), tol, lattice=(6,))
    checks.append(Check("parent term rank 2", h.term_rank == 2, h.term_rank, "parent-hamiltonian"))
    checks.append(Check("frustration free", h.frustration_residual < tol.residual_cut,
                        h.frustration_residual, "parent-hamiltonian"))
    dim = ground_space_dimension(h, (6,), tol)
    checks.append(Check("ground space dimension 2 at N=6", dim == 2, dim, "degeneracy-non-injective"))
    return checks


def demo_aklt(tol: Tolerance = DEFAULT_TOL):
    spec = aklt()
    sx, sy, sz = spin_matrices(1)
    length = minimal_injective_length(spec, 4, tol)
    checks = [Check("injective at length 2", length == 2, length, "injectivity")]
    h = parent_hamiltonian(spec, (2,), tol, lattice=(6,))
    checks.append(Check("parent term rank 5", h.term_rank == 5, h.term_rank, "parent-hamiltonian"))
    checks.append(Check("frustration free", h.frustration_residual < tol.residual_cut,
                        h.frustration_residual, "parent-hamiltonian"))
    dim = ground_space_dimension(h, (6,), tol)
    checks.append(Check("unique ground state at N=6", dim == 1, dim, "unique-ground-state"))
    for name, gen in (("Sx", sx), ("Sy", sy), ("Sz", sz)):
        rep = certify_representation(spec, generator=gen, tol=tol)
        charges = RepresentationReport.centered(rep.charges_y)
        checks.append(Check(f"SU(2) generator {name}: half-integer virtual charges", _half_odd(charges),
                            [round(float(q), 12) for q in charges], "local-symmetry"))
        checks.append(Check(f"SU(2) generator {name}: representation residual", rep.max_residual < 1e-8,
                            rep.max_residual, "local-symmetry"))
    gx, gy = expm(0.7j * sx), expm(1.3j * sy)
    rep = certify_representation(spec, elements=[np.eye(3), gx, gy, gx @ gy], tol=tol)
    checks.append(Check("non-commuting elements compose", rep.max_residual < 1e-8 and len(rep.y_residuals) > 0,
                        rep.max_residual, "local-symmetry"))
    verdict = lsm_check(spec, 1.0, sz, tol)
    checks.append(Check("LSM consistent (J=1, m=0)", verdict.consistent and verdict.J_minus_m_integer,
                        round(verdict.m, 12), "lsm"))
    return checks


def demo_toric(tol: Tolerance = DEFAULT_TOL):
    spec = toric_code(2, 2)
    w = wilson_check(spec, PAULI["X"], tol)
    checks = [
        Check("(i) column loop leaves the state invariant", w.loop_vertical_invariant, w.residuals["vertical"], "wilson"),
        Check("(ii) row loop leaves the state invariant", w.loop_horizontal_invariant, w.residuals["horizontal"], "wilson"),
        Check("(iii) single site moves the state", w.single_site_noninvariant, w.residuals["single_site"], "wilson"),
    ]
    scan = {hk: is_injective_peps(spec, *hk, tol).summary() for hk in affordable_regions(spec, 3)}
    checks.append(Check("not injective on any affordable region", all(v.startswith("not") for v in scan.values()),
                        scan, "wilson"))
    h = parent_hamiltonian(spec, (2, 2), tol, lattice=(2, 2))
    checks.append(Check("frustration free", h.frustration_residual < tol.residual_cut,
                        h.frustration_residual, "parent-hamiltonian"))
    dim = ground_space_dimension(h, (2, 2), tol)
    checks.append(Check("ground space dimension 4 on the 2x2 torus", dim == 4, dim, "degeneracy-non-injective"))
    column = block_columns(spec, 2)
    hc = parent_hamiltonian(column, (2,), tol, lattice=(4,))
    dim_c = ground_space_dimension(hc, (4,), tol)
    checks.append(Check("blocked columns: degenerate 1D parent kernel", dim_c >= 2, dim_c, "degeneracy-non-injective"))
    edges = toric_code_edges(2, 4)
    area = area_law_check(edges, (2, 2), tol, lattice=(2, 4))
    checks.append(Check("area law: exact 1-bit correction", abs(area.correction - 1.0) < 1e-12 and not area.injective,
                        {"S0": area.S0, "bound": area.boundary_bound}, "area-law"))
    return checks


def demo_polarized(tol: Tolerance = DEFAULT_TOL):
    spec = polarized_product(2, 2)
    sz = spin_matrices(0.5)[2]
    verdict = lsm_check(spec, 0.5, sz, tol)
    checks = [Check("LSM consistent (J=1/2, m=1/2)", verdict.consistent and abs(verdict.m - 0.5) < 1e-12,
                    verdict.m, "lsm")]
    w = wilson_check(spec, PAULI["Z"], tol)
    checks.append(Check("sigma_z column loop invariant, single site invariant too",
                        w.loop_vertical_invariant and not w.single_site_noninvariant and not w.non_injectivity_implied,
                        w.residuals, "wilson"))
    area = area_law_check(spec, (1, 1), tol)
    checks.append(Check("D=1: area law saturated and injective", area.saturated and area.injective,
                        {"S0": area.S0, "bound": area.boundary_bound}, "area-law"))
    return checks


DEMOS = {"ghz": demo_ghz, "aklt": demo_aklt, "toric": demo_toric, "polarized": demo_polarized}


def run_demo(name: str, tol: Tolerance = DEFAULT_TOL):
    if name not in DEMOS:
        raise KeyError(f"unknown demo {name!r}; choose from {tuple(DEMOS)}")
    return DEMOS[name](tol)
