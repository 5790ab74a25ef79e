"""Bundled example states and planted-symmetry constructions."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .lattice import MpsSpec, PepsSpec, apply_gauge, apply_physical, peps_state
from .tensor_core import DEFAULT_TOL, Tolerance, nullspace

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def spin_matrices(J):
    """(Sx, Sy, Sz) for spin ``J`` in the basis m = J, J-1, ..., -J."""
    ms = np.arange(J, -J - 1, -1)
    n = ms.size
    sp = np.zeros((n, n), dtype=complex)
    for k in range(1, n):
        m = ms[k]
        sp[k - 1, k] = np.sqrt(J * (J + 1) - m * (m + 1))
    sx = (sp + sp.conj().T) / 2
    sy = (sp - sp.conj().T) / 2j
    return sx, sy, np.diag(ms).astype(complex)


def ghz() -> MpsSpec:
    A = np.zeros((2, 2, 2))
    A[0, 0, 0] = A[1, 1, 1] = 1.0
    return MpsSpec.uniform(A)


def aklt() -> MpsSpec:
    """Spin-1 AKLT chain, physical basis m = +1, 0, -1."""
    sp = np.array([[0, 1], [0, 0]])
    A = np.stack([np.sqrt(2 / 3) * sp, -np.sqrt(1 / 3) * PAULI["Z"].real, -np.sqrt(2 / 3) * sp.T])
    return MpsSpec.uniform(A)


def polarized_product(rows=2, cols=2, d=2) -> PepsSpec:
    A = np.zeros((d, 1, 1, 1, 1))
    A[0] = 1.0
    return PepsSpec(A, rows, cols)


def polarized_chain(d=2) -> MpsSpec:
    A = np.zeros((d, 1, 1))
    A[0] = 1.0
    return MpsSpec.uniform(A)


def singlet_pairs() -> MpsSpec:
    """Chain of spin-1/2 singlets, each pair blocked into one d=4 site."""
    v = np.array([0, 1, -1, 0]) / np.sqrt(2)
    return MpsSpec.uniform(v.reshape(4, 1, 1))


# ---------------------------------------------------------------- toric code

WEN_PATTERN = ("Z", "Y", "Z", "Y")  # top-left, top-right, bottom-right, bottom-left


def wen_stabilizers(rows, cols):
    """Plaquette generators plus the sigma_x row and column loops, as {site: Pauli} dicts."""
    gens = []
    for r, c in product(range(rows), range(cols)):
        sites = [r * cols + c, r * cols + (c + 1) % cols,
                 ((r + 1) % rows) * cols + (c + 1) % cols, ((r + 1) % rows) * cols + c]
        gens.append(list(zip(sites, WEN_PATTERN)))
    gens.append([(r * cols, "X") for r in range(rows)])
    gens.append([(c, "X") for c in range(cols)])
    return gens


def apply_pauli_string(psi, string, n_sites):
    out = np.asarray(psi, dtype=complex).reshape([2] * n_sites)
    for site, name in string:
        out = np.moveaxis(np.tensordot(PAULI[name], out, axes=(1, site)), 0, site)
    return out.reshape(-1)


def stabilizer_code_space(rows, cols):
    """Orthonormal basis of the common +1 eigenspace of :func:`wen_stabilizers` (small lattices only)."""
    n = rows * cols
    basis = np.eye(2 ** n, dtype=complex)
    for string in wen_stabilizers(rows, cols):
        image = np.stack([apply_pauli_string(v, string, n) for v in basis.T], axis=1)
        projected = (basis + image) / 2
        u, s, _ = np.linalg.svd(projected, full_matrices=False)
        basis = u[:, s > 1e-9]
        if basis.shape[1] == 0:
            break
    return basis


def _wen_tensor():
    A = np.zeros((2, 2, 2, 2, 2), dtype=complex)
    for l, d, r, u in product(range(2), repeat=4):
        if l ^ r ^ u ^ d == 0:
            A[l ^ r, l, d, r, u] = (-1j) ** (r + d + (l ^ u))
    # built in the sigma_x eigenbasis; rotate to the computational basis
    return np.tensordot(HADAMARD, A, axes=(1, 0))


def toric_code(rows=2, cols=2, validate_on=((2, 2), (4, 4))) -> PepsSpec:
    """Wen-plaquette form of the toric code, d = 2, D = 2, in the sigma_x-loop sector.

    Before returning, the torus state is checked to be a +1 eigenvector of every
    stabilizer generator on each lattice of ``validate_on``.
    """
    A = _wen_tensor()
    for L, N in validate_on:
        psi = peps_state(PepsSpec(A, L, N))
        leak = max(np.linalg.norm(apply_pauli_string(psi, g, L * N) - psi)
                   for g in wen_stabilizers(L, N)) / np.linalg.norm(psi)
        if leak > 1e-9:
            raise AssertionError(f"toric tensor leaves the code space on {L}x{N} (leak {leak:.3g})")
    return PepsSpec(A, rows, cols)


def edge_stabilizers(rows, cols):
    """Loop-gas toric code with qubits on the right (slot 0) and up (slot 1) edge of each site.

    Vertex terms are Z on the four edges meeting at a site, plaquette terms X around the face
    above-right of it; two X strings along non-contractible edge loops fix the sector.
    """
    def s(r, c):
        return (r % rows) * cols + (c % cols)

    gens = []
    for r, c in product(range(rows), range(cols)):
        gens.append([((s(r, c), 0), "Z"), ((s(r, c), 1), "Z"), ((s(r, c - 1), 0), "Z"), ((s(r + 1, c), 1), "Z")])
        gens.append([((s(r, c), 1), "X"), ((s(r - 1, c), 0), "X"), ((s(r, c + 1), 1), "X"), ((s(r, c), 0), "X")])
    gens.append([((s(r, 0), 1), "X") for r in range(rows)])
    gens.append([((s(0, c), 0), "X") for c in range(cols)])
    return gens


def apply_edge_string(psi, string, n_sites):
    ops = {}
    for (site, slot), name in string:
        pair = ops.get(site, [PAULI["I"], PAULI["I"]])
        pair[slot] = PAULI[name] @ pair[slot]
        ops[site] = pair
    out = np.asarray(psi, dtype=complex).reshape([4] * n_sites)
    for site, (a, b) in ops.items():
        out = np.moveaxis(np.tensordot(np.kron(a, b), out, axes=(1, site)), 0, site)
    return out.reshape(-1)


def toric_code_edges(rows=2, cols=4, validate_on=((2, 2), (2, 3))) -> PepsSpec:
    """Edge-qubit (loop gas) toric code, d = 4, D = 2: each bond carries one edge value."""
    A = np.zeros((4, 2, 2, 2, 2), dtype=complex)
    for l, d, r, u in product(range(2), repeat=4):
        if l ^ d ^ r ^ u == 0:
            A[2 * r + u, l, d, r, u] = 1.0
    for L, N in validate_on:
        psi = peps_state(PepsSpec(A, L, N))
        leak = max(np.linalg.norm(apply_edge_string(psi, g, L * N) - psi)
                   for g in edge_stabilizers(L, N)) / np.linalg.norm(psi)
        if leak > 1e-9:
            raise AssertionError(f"edge toric tensor leaves the code space on {L}x{N} (leak {leak:.3g})")
    return PepsSpec(A, rows, cols)


# --------------------------------------------------------- planted symmetry


def _random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_invertible(rng, n, max_condition=100.0):
    while True:
        m = _random_complex(rng, n, n)
        s = np.linalg.svd(m, compute_uv=False)
        if s[0] / s[-1] <= max_condition:
            return m


def planted_kernel_tensor(relation, shape, rng, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Random tensor in the kernel of the linear map ``relation`` (tensor -> tensor)."""
    n = int(np.prod(shape))
    cols = []
    for j in range(n):
        e = np.zeros(n, dtype=complex)
        e[j] = 1.0
        cols.append(np.ravel(relation(e.reshape(shape))))
    kernel = nullspace(np.stack(cols, axis=1), tol)
    if kernel.shape[1] == 0:
        raise ValueError("the planted relation admits no nonzero tensor")
    return (kernel @ _random_complex(rng, kernel.shape[1])).reshape(shape)


def random_peps(seed, d, D=2, rows=2, cols=2) -> PepsSpec:
    rng = np.random.default_rng(seed)
    return PepsSpec(_random_complex(rng, d, D, D, D, D), rows, cols)


def random_mps(seed, d, D) -> MpsSpec:
    rng = np.random.default_rng(seed)
    return MpsSpec.uniform(_random_complex(rng, d, D, D))


def planted_local(seed, u, Y0, Z0, theta=0.0, rows=2, cols=2) -> PepsSpec:
    """Random PEPS tensor with ``apply_gauge(A, Y0, Z0) = e^{-i theta} u A``."""
    rng = np.random.default_rng(seed)
    u = np.asarray(u, dtype=complex)
    D = Y0.shape[0]
    phase = np.exp(-1j * theta)
    A = planted_kernel_tensor(lambda t: apply_gauge(t, Y0, Z0) - phase * apply_physical(t, u),
                              (u.shape[0], D, D, D, D), rng)
    return PepsSpec(A, rows, cols)


def planted_spatial(seed, kind, Y0, Z0, d, rows=2, cols=2) -> PepsSpec:
    """Random PEPS tensor whose leg-permuted copy equals ``apply_gauge(A, Y0, Z0)``."""
    from .symmetry import spatial_transform

    rng = np.random.default_rng(seed)
    D = Y0.shape[0]
    A = planted_kernel_tensor(lambda t: spatial_transform(t, kind) - apply_gauge(t, Y0, Z0),
                              (d, D, D, D, D), rng)
    return PepsSpec(A, rows, cols)


def planted_spatial_gauges(kind, rng, D=2):
    """Gauges compatible with ``kind``: symmetric/involutive, symmetric/symmetric or Z = Y^T."""
    G = random_invertible(rng, D)
    sym = G @ G.T
    if kind == "reflection":
        signs = np.diag([1.0] + [-1.0] * (D - 1))
        return sym, G @ signs @ np.linalg.inv(G)
    if kind == "rotation_half":
        H = random_invertible(rng, D)
        return sym, H @ H.T
    if kind == "rotation_quarter":
        return G, G.T
    raise ValueError(f"unknown spatial kind {kind!r}")


@dataclass(frozen=True)
class PlantedU1Config:
    """Spin-J sites with a multiplicity space; virtual charges on horizontal/vertical legs.

    Entries survive iff ``s_i - m = q_l + q_d - q_r - q_u``.
    """

    J: float = 0.5
    multiplicity: int = 8
    q_h: tuple = (0.0, 1.0)
    q_v: tuple = (0.0, 1.0)
    m: float = 0.5
    seed: int = 0
    rows: int = 2
    cols: int = 2
    conjugate: bool = True


def planted_u1(cfg: PlantedU1Config):
    """Returns ``(spec, Sz)`` for a PEPS invariant under ``exp(i g Sz)`` on every site."""
    rng = np.random.default_rng(cfg.seed)
    spins = np.arange(cfg.J, -cfg.J - 1, -1)
    s = np.repeat(spins, cfg.multiplicity)
    qh, qv = np.asarray(cfg.q_h, float), np.asarray(cfg.q_v, float)
    Dh, Dv = qh.size, qv.size
    mask = (np.abs(s[:, None, None, None, None] - cfg.m
                   - (qh[None, :, None, None, None] + qv[None, None, :, None, None]
                      - qh[None, None, None, :, None] - qv[None, None, None, None, :])) < 1e-12)
    A = _random_complex(rng, s.size, Dh, Dv, Dh, Dv) * mask
    if cfg.conjugate:
        A = apply_gauge(A, random_invertible(rng, Dh), random_invertible(rng, Dv))
    return PepsSpec(A, cfg.rows, cfg.cols), np.diag(s).astype(complex)


U1_SPINS = (0.5, 1.0, 1.5, 2.0)
U1_CHARGES = ((0.0, 1.0), (0.0, 0.5), (0.5, 1.0), (0.0, 2.0), (1.0, 1.0))


def random_u1_config(rng, max_d=16, rows=2, cols=2) -> PlantedU1Config:
    """Draw spin, multiplicity, leg charges and m; the planted tensor may still vanish."""
    J = float(rng.choice(U1_SPINS))
    spins = int(round(2 * J + 1))
    if rng.random() < 0.4:
        # unit charges and m near zero: the layout that can be injective on 2x2 blocks
        mult = int(rng.integers(max(1, 6 // spins), max_d // spins + 1))
        q_h = q_v = (0.0, 1.0)
        m = 0.0 if J.is_integer() else float(rng.choice((-0.5, 0.5)))
    else:
        mult = int(rng.integers(1, max_d // spins + 1))
        q_h = U1_CHARGES[rng.integers(len(U1_CHARGES))]
        q_v = U1_CHARGES[rng.integers(len(U1_CHARGES))]
        m = float(rng.choice(np.arange(-J, J + 0.5, 0.5)))
    return PlantedU1Config(J, mult, q_h, q_v, m, int(rng.integers(2**31)), rows, cols)


def planted_u1_sweep(n, seed=0, max_d=16):
    """``n`` nonzero planted U(1) instances as ``(cfg, spec, Sz)``; zero tensors are re-drawn."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        cfg = random_u1_config(rng, max_d)
        spec, sz = planted_u1(cfg)
        if np.any(spec.tensor != 0):
            out.append((cfg, spec, sz))
    return out

# ------------------------------------------------------------------ registry

EXAMPLE_NAMES = ("ghz", "aklt", "toric", "toric_edges", "polarized", "singlets", "planted")


def example_states(name: str, **kwargs):
    """Bundled specs by name; ``planted`` forwards its keywords to :class:`PlantedU1Config`."""
    key = name.lower().replace("_", "").replace("-", "")
    if key == "ghz":
        return ghz()
    if key == "aklt":
        return aklt()
    if key in ("toric", "toriccode"):
        return toric_code(**kwargs)
    if key in ("toricedges", "toriccodeedges"):
        return toric_code_edges(**kwargs)
    if key in ("polarized", "polarizedproduct"):
        return polarized_product(**kwargs)
    if key in ("singlets", "singletpairs"):
        return singlet_pairs()
    if key in ("planted", "plantedsymmetric", "plantedu1"):
        return planted_u1(PlantedU1Config(**kwargs))[0]
    raise KeyError(f"unknown example {name!r}; choose from {EXAMPLE_NAMES}")
