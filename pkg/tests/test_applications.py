import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import (
    aklt_hamiltonian,
    code_state_entropy,
    dense_magnetization,
    dense_pauli_string,
    edge_loop_code,
    wen_code_dimension,
)
from pepscanon.applications import (
    area_law_check,
    ground_space_dimension,
    lsm_check,
    magnetization,
    minimal_length_or_none,
    parent_hamiltonian,
    state_on,
    wilson_check,
)
from pepscanon.lattice import MpsSpec
from pepscanon.states import (
    PAULI,
    PlantedU1Config,
    aklt,
    ghz,
    planted_u1,
    polarized_product,
    random_mps,
    random_peps,
    spin_matrices,
    toric_code,
    toric_code_edges,
)


@given(st.integers(0, 10_000))
def test_magnetization_matches_dense_oracle_mps(seed):
    spec = random_mps(seed, 3, 2)
    sz = spin_matrices(1)[2]
    psi = state_on(spec, (5,))
    assert abs(magnetization(spec, sz, (5,)) - dense_magnetization(psi, sz, 5)) < 1e-12


def test_magnetization_matches_dense_oracle_peps():
    spec, sz = planted_u1(PlantedU1Config(J=0.5, multiplicity=2, q_h=(0.0, 1.0), q_v=(0.0, 0.0), m=0.5, seed=4))
    psi = state_on(spec)
    m = magnetization(spec, sz)
    assert abs(m - dense_magnetization(psi, sz, 4)) < 1e-12
    assert abs(m - 0.5) < 1e-12


def test_magnetization_rejects_non_hermitian():
    with pytest.raises(ValueError):
        magnetization(aklt(), np.triu(np.ones((3, 3))))


def test_lsm_aklt_consistent():
    v = lsm_check(aklt(), 1.0, spin_matrices(1)[2])
    assert v.symmetric and v.injective and v.J_minus_m_integer and v.consistent
    assert abs(v.m) < 1e-12
    assert abs(v.theta_slope) < 1e-8


def test_lsm_polarized_product():
    v = lsm_check(polarized_product(2, 2), 0.5, spin_matrices(0.5)[2])
    assert v.symmetric and v.injective and v.consistent
    assert abs(v.m - 0.5) < 1e-12
    assert abs(v.theta_slope - 0.5) < 1e-8


def test_lsm_half_integer_mismatch_is_non_injective():
    cfg = PlantedU1Config(J=0.5, multiplicity=3, q_h=(0.5, 1.0), q_v=(0.5, 1.0), m=0.0, seed=1)
    spec, sz = planted_u1(cfg)
    v = lsm_check(spec, 0.5, sz)
    assert v.symmetric and not v.J_minus_m_integer
    assert not v.injective and v.consistent


def test_lsm_not_symmetric():
    v = lsm_check(random_peps(0, 4), 1.5, spin_matrices(1.5)[2])
    assert not v.symmetric and v.consistent


def test_wilson_toric_against_dense_strings():
    spec = toric_code()
    psi = state_on(spec)
    X = PAULI["X"]
    # oracle: dense Pauli strings on column 0, row 0 and a single site
    col = dense_pauli_string({0: X, 2: X}, 4) @ psi
    row = dense_pauli_string({0: X, 1: X}, 4) @ psi
    one = dense_pauli_string({0: X}, 4) @ psi
    assert np.allclose(col, psi) and np.allclose(row, psi) and not np.allclose(one, psi)
    w = wilson_check(spec, X)
    assert w.loop_vertical_invariant and w.loop_horizontal_invariant and w.single_site_noninvariant
    assert w.non_injectivity_implied and not w.contradiction
    assert not any(w.injectivity.values())


def test_wilson_on_larger_torus():
    w = wilson_check(toric_code(2, 4, validate_on=()), PAULI["X"])
    assert w.non_injectivity_implied and not w.contradiction


def test_wilson_product_state():
    w = wilson_check(polarized_product(2, 2), PAULI["Z"])
    assert not w.single_site_noninvariant and not w.non_injectivity_implied


def test_parent_term_ranks():
    assert parent_hamiltonian(aklt(), (2,)).term_rank == 5
    h = parent_hamiltonian(ghz(), (2,))
    assert h.term_rank == 2
    assert h.projector_residual() < 1e-12
    for k in (0, 2 ** 6 - 1):
        e = np.zeros(2 ** 6)
        e[k] = 1
        assert np.linalg.norm(h.apply(e, (6,))) < 1e-12


def test_ground_dimension_aklt_matches_dense_hamiltonian():
    w = np.linalg.eigvalsh(aklt_hamiltonian(6))
    oracle = int(np.sum(np.abs(w - w[0]) < 1e-9))
    h = parent_hamiltonian(aklt(), (2,), lattice=(6,))
    assert ground_space_dimension(h, (6,)) == oracle == 1
    assert h.frustration_residual < 1e-12


def test_ground_dimension_ghz_matches_domain_wall_count():
    # oracle: the GHZ term is diagonal and penalizes domain walls; kernel = wall-free configurations
    oracle = sum(1 for k in range(2 ** 6)
                 if all(((k >> j) & 1) == ((k >> ((j + 1) % 6)) & 1) for j in range(6)))
    h = parent_hamiltonian(ghz(), (2,), lattice=(6,))
    assert ground_space_dimension(h, (6,)) == oracle == 2


def test_ground_dimension_toric_matches_stabilizer_code():
    h = parent_hamiltonian(toric_code(), (2, 2), lattice=(2, 2))
    assert h.frustration_residual < 1e-12
    assert ground_space_dimension(h, (2, 2)) == wen_code_dimension(2, 2) == 4


def test_area_law_edge_toric_one_bit():
    spec = toric_code_edges(2, 4)
    r = area_law_check(spec, (2, 2), lattice=(2, 4))
    region = [q for row in (0, 1) for c in (0, 1) for q in (2 * (row * 4 + c), 2 * (row * 4 + c) + 1)]
    oracle = code_state_entropy(edge_loop_code(2, 4), region)
    assert r.S0 == oracle == 3
    assert r.boundary_bound == 4 and r.correction == 1.0
    assert not r.saturated and not r.injective


def test_area_law_wen_strip_is_not_a_one_bit_case():
    r = area_law_check(toric_code(), (2, 1))
    assert r.S0 == 1.0 and r.boundary_bound == 4.0


def test_area_law_random_injective():
    r = area_law_check(random_peps(0, 16), (1, 1))
    assert r.S0 == 4.0 and r.saturated and r.injective


def test_area_law_product_state():
    r = area_law_check(polarized_product(2, 2), (1, 1))
    assert r.S0 == 0.0 and r.saturated and r.injective


def test_region_must_fit():
    with pytest.raises(ValueError):
        area_law_check(toric_code(), (3, 1))


def test_minimal_length_or_none():
    assert minimal_length_or_none(aklt(), 3) == 2
    assert minimal_length_or_none(ghz(), 3) is None


def test_parent_hamiltonian_of_product_state():
    spec = MpsSpec.uniform(np.array([[[1.0]], [[0.0]]]))
    h = parent_hamiltonian(spec, (1,), lattice=(4,))
    assert ground_space_dimension(h, (4,)) == 1
