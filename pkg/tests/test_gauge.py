import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import crandn
from pepscanon.errors import (
    NonUniqueGauge,
    NotFactorizable,
    NotProductPreserving,
    NotSameState,
    RankDeficient,
    ZeroState,
)
from pepscanon.gauge import (
    canonicalize_obc,
    factor_product_preserving,
    honeycomb_cell,
    honeycomb_gauge,
    intertwiner_space,
    intertwiner_system,
    mps_gauge,
    peps_gauge,
    permutation_operator,
    split_gauge,
)
from pepscanon.lattice import MpsSpec, PepsSpec, apply_gauge, apply_mps_gauge, mps_state, peps_state
from pepscanon.states import aklt, ghz, random_invertible, random_mps, random_peps
from pepscanon.tensor_core import distance_up_to_scalar, fidelity_defect, kron_all


def test_intertwiner_system_matches_definition(rng):
    B, C = crandn(rng, 2, 3, 3), crandn(rng, 2, 2, 2)
    X = crandn(rng, 3, 2)
    direct = np.concatenate([(X @ C[i] - B[i] @ X).ravel() for i in range(2)])
    assert np.allclose(intertwiner_system(B, C) @ X.ravel(), -direct)


def test_generic_commutant_is_scalars(rng):
    B = crandn(rng, 2, 3, 3)
    space = intertwiner_space(B, B)
    assert space.shape[0] == 1
    assert distance_up_to_scalar(space[0], np.eye(3)) < 1e-10


def test_ghz_commutant_is_diagonal():
    space = intertwiner_space(ghz().tensor, ghz().tensor)
    assert space.shape[0] == 2
    assert all(np.allclose(x, np.diag(np.diag(x))) for x in space)


def _lifted_dimension(B, C, n):
    lift = lambda ms: np.array([np.kron(m, np.eye(n)) for m in ms])  # noqa: E731
    return intertwiner_space(lift(B), lift(C)).shape[0]


@pytest.mark.parametrize("size", [2, 3])
def test_lifted_intertwiner_dimension_law(rng, size):
    R = random_invertible(rng, size)
    B = crandn(rng, 2, size, size)
    C = np.array([np.linalg.solve(R, b @ R) for b in B])
    for Bs, Cs in ((B, C), (B, crandn(rng, 2, size, size)), (np.array([np.eye(size)] * 2), np.array([np.eye(size)] * 2))):
        dim_s = intertwiner_space(Bs, Cs).shape[0]
        assert _lifted_dimension(Bs, Cs, 2) == 4 * dim_s


@given(st.integers(0, 10_000), st.sampled_from([(2, 2), (3, 2), (2, 3), (3, 3)]))
def test_mps_gauge_recovers_planted_conjugation(seed, dims):
    d, D = dims
    rng = np.random.default_rng(seed)
    A = random_mps(seed, d, D)
    R0 = random_invertible(rng, D)
    B = MpsSpec.uniform(apply_mps_gauge(A.tensor, R0))
    cert = mps_gauge(A, B)
    assert cert.intertwiner_dim == 1
    assert distance_up_to_scalar(cert.R, R0) < 1e-8
    assert cert.residual < 1e-9


def test_mps_gauge_identity_for_aklt():
    cert = mps_gauge(aklt(), aklt())
    assert np.allclose(cert.R, np.eye(2))
    assert cert.injective_region == (2,)


def test_mps_gauge_ghz_not_unique():
    with pytest.raises(NonUniqueGauge) as info:
        mps_gauge(ghz(), ghz())
    assert info.value.intertwiner_dim == 2
    assert str(info.value) == "NonUniqueGauge (intertwiner dim 2)"


def test_mps_gauge_unrelated_states():
    with pytest.raises(NotSameState):
        mps_gauge(random_mps(1, 2, 2), random_mps(2, 2, 2))


def test_mps_gauge_scalar_multiple(rng):
    A = random_mps(3, 3, 2)
    B = MpsSpec.uniform(-2.5j * A.tensor)
    cert = mps_gauge(A, B)
    assert np.isclose(cert.scalar * -2.5j, 1.0)


def _random_obc(rng, d, D, n):
    dims = [1] + [D] * (n - 1) + [1]
    return MpsSpec.open_chain([crandn(rng, d, dims[k], dims[k + 1]) for k in range(n)])


@given(st.integers(0, 10_000))
def test_canonical_form_conditions(seed):
    rng = np.random.default_rng(seed)
    spec = _random_obc(rng, 2, 3, 5)
    can = canonicalize_obc(spec)
    res = can.condition_residuals()
    assert res["isometry"] < 1e-10 and res["weight_update"] < 1e-10 and res["weight_shape"] < 1e-10
    assert res["positive"]
    psi = mps_state(spec)
    phi = mps_state(can.as_spec())
    assert fidelity_defect(psi, phi) < 1e-10
    assert np.allclose(can.norm * phi, psi, atol=1e-10 * np.linalg.norm(psi))


def test_canonical_form_zero_state():
    with pytest.raises(ZeroState):
        canonicalize_obc(MpsSpec.open_chain([np.zeros((2, 1, 2)), np.zeros((2, 2, 1))]))


def test_canonical_form_truncates_rank(rng):
    # bond of size 3 carrying rank 2
    a = crandn(rng, 2, 1, 2) @ crandn(rng, 2, 3)
    spec = MpsSpec.open_chain([a, crandn(rng, 2, 3, 1)])
    can = canonicalize_obc(spec)
    assert can.weights[1].size == 2
    assert fidelity_defect(mps_state(spec), mps_state(can.as_spec())) < 1e-10


@pytest.mark.parametrize("d,seed", [(16, 0), (4, 1), (4, 2)])
def test_peps_gauge_roundtrip(d, seed):
    rng = np.random.default_rng(100 + seed)
    A = random_peps(seed, d)
    Y0, Z0 = random_invertible(rng, 2), random_invertible(rng, 2)
    B = A.with_tensor(apply_gauge(A.tensor, Y0, Z0))
    cert = peps_gauge(A, B)
    assert cert.residual < 1e-8
    assert distance_up_to_scalar(cert.Y, Y0) < 1e-8
    assert distance_up_to_scalar(cert.Z, Z0) < 1e-8
    assert not cert.theorem_size_met


def test_peps_gauge_unrelated():
    with pytest.raises(NotSameState):
        peps_gauge(random_peps(0, 4), random_peps(1, 4))


def test_permutation_operator_moves_factors(rng):
    vs = [crandn(rng, 2), crandn(rng, 3), crandn(rng, 2)]
    P = permutation_operator([2, 1, 0], [2, 3, 2])
    assert np.allclose(P @ kron_all([v[:, None] for v in vs]).ravel(),
                       kron_all([v[:, None] for v in vs[::-1]]).ravel())


@given(st.integers(0, 10_000), st.sampled_from([[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1]]))
def test_product_preserving_factorization(seed, perm):
    rng = np.random.default_rng(seed)
    dims = [2, 2, 2]
    Ys = [random_invertible(rng, 2) for _ in dims]
    M = permutation_operator(perm, dims) @ kron_all(Ys)
    got_perm, factors, residual = factor_product_preserving(M, dims)
    assert got_perm == perm
    assert residual < 1e-9
    for f, y in zip(factors, Ys):
        assert distance_up_to_scalar(f, y) < 1e-8


def test_cnot_is_not_product_preserving():
    cnot = np.eye(4)[[0, 1, 3, 2]]
    with pytest.raises(NotProductPreserving):
        factor_product_preserving(cnot, [2, 2])


def test_split_gauge(rng):
    C, D = crandn(rng, 6, 2), crandn(rng, 2, 5)
    W0 = random_invertible(rng, 2)
    A, B = C @ W0, np.linalg.solve(W0, D)
    W = split_gauge(A, B, C, D)
    assert np.allclose(W, W0, atol=1e-10)


def test_split_gauge_errors(rng):
    C, D = crandn(rng, 6, 2), crandn(rng, 2, 5)
    with pytest.raises(RankDeficient):
        split_gauge(C, np.zeros((2, 5)), C, D)
    with pytest.raises(NotFactorizable):
        split_gauge(crandn(rng, 6, 2), crandn(rng, 2, 5), C, D)


def test_honeycomb_gauge_planted(rng):
    a = crandn(rng, 2, 2, 2, 2)
    b = crandn(rng, 2, 2, 2, 2)
    Y0, Z0, W0 = (random_invertible(rng, 2) for _ in range(3))
    # pair B: gauge the outer legs by (Y0, Z0) and the internal bond by W0
    a2 = np.einsum("ipqc,pl,qd,ce->ilde", a, Y0, Z0, W0)
    b2 = np.einsum("iepq,ce,rp,uq->icru", b, np.linalg.inv(W0), np.linalg.inv(Y0), np.linalg.inv(Z0))
    cell_a = PepsSpec(honeycomb_cell(a, b))
    cell_b = PepsSpec(honeycomb_cell(a2, b2))
    assert fidelity_defect(peps_state(cell_a), peps_state(cell_b)) < 1e-12
    hc = honeycomb_gauge((a2, b2), (a, b))
    assert hc.split_residual < 1e-9
    assert distance_up_to_scalar(hc.W, W0) < 1e-8
    # blocked-cell gauge agrees with the direct peps_gauge on the blocked tensors
    direct = peps_gauge(cell_b, cell_a)
    assert distance_up_to_scalar(direct.Y, hc.cell.Y) < 1e-9
    assert distance_up_to_scalar(direct.Z, hc.cell.Z) < 1e-9
