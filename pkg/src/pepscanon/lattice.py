"""MPS/PEPS specifications, exact state synthesis on small lattices, and blocking.

Sites of a PEPS are ordered row-major with rows indexed downward, so the up leg of
row ``k`` is bonded to the down leg of row ``k - 1``. States are never normalized.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DeskScaleExceeded, NotADensityMatrix
from .tensor_core import DEFAULT_TOL, Tolerance, as_tensor, numeric_rank

DEFAULT_AMPLITUDE_CAP = 2 ** 22


def check_scale(needed, cap=DEFAULT_AMPLITUDE_CAP):
    if needed > cap:
        raise DeskScaleExceeded(needed, cap)


@dataclass(frozen=True)
class MpsSpec:
    """Matrix product state.

    ``tensors`` holds arrays of shape ``(d, D_left, D_right)``. A periodic spec has a
    single translation-invariant tensor; an open spec has one tensor per site with
    outer bond dimensions equal to one.
    """

    tensors: tuple
    boundary: str = "periodic"

    def __post_init__(self):
        tensors = tuple(as_tensor(t) for t in self.tensors)
        object.__setattr__(self, "tensors", tensors)
        if self.boundary not in ("periodic", "open"):
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if not tensors:
            raise ValueError("an MPS needs at least one tensor")
        if any(t.ndim != 3 for t in tensors):
            raise ValueError("MPS tensors must have shape (d, D_left, D_right)")
        d = tensors[0].shape[0]
        if any(t.shape[0] != d for t in tensors):
            raise ValueError("all sites must share the physical dimension")
        if self.boundary == "periodic":
            if len(tensors) != 1 or tensors[0].shape[1] != tensors[0].shape[2]:
                raise ValueError("a periodic MPS is one square translation-invariant tensor")
        else:
            if tensors[0].shape[1] != 1 or tensors[-1].shape[2] != 1:
                raise ValueError("open chains need trivial outer bonds")
            for a, b in zip(tensors, tensors[1:]):
                if a.shape[2] != b.shape[1]:
                    raise ValueError("bond dimensions do not chain")

    @classmethod
    def uniform(cls, tensor):
        return cls((tensor,), "periodic")

    @classmethod
    def open_chain(cls, tensors):
        return cls(tuple(tensors), "open")

    @property
    def tensor(self) -> np.ndarray:
        return self.tensors[0]

    @property
    def d(self) -> int:
        return self.tensors[0].shape[0]

    @property
    def D(self) -> int:
        return max(max(t.shape[1:]) for t in self.tensors)

    @property
    def n_sites(self):
        return len(self.tensors) if self.boundary == "open" else None


@dataclass(frozen=True)
class PepsSpec:
    """Translation-invariant PEPS on an ``rows x cols`` torus.

    ``tensor`` has axes (physical, left, down, right, up).
    """

    tensor: np.ndarray
    rows: int = 2
    cols: int = 2
    boundary: str = field(default="torus")

    def __post_init__(self):
        t = as_tensor(self.tensor)
        object.__setattr__(self, "tensor", t)
        if t.ndim != 5:
            raise ValueError("PEPS tensors have axes (physical, left, down, right, up)")
        if t.shape[1] != t.shape[3] or t.shape[2] != t.shape[4]:
            raise ValueError("left/right and down/up legs must match for translation invariance")
        if self.boundary != "torus":
            raise ValueError("only torus boundary conditions are supported")
        if self.rows < 1 or self.cols < 1:
            raise ValueError("lattice must have at least one row and column")

    @property
    def d(self) -> int:
        return self.tensor.shape[0]

    @property
    def Dh(self) -> int:
        return self.tensor.shape[1]

    @property
    def Dv(self) -> int:
        return self.tensor.shape[2]

    @property
    def n_sites(self) -> int:
        return self.rows * self.cols

    def on_lattice(self, rows, cols) -> "PepsSpec":
        return replace(self, rows=rows, cols=cols)

    def with_tensor(self, tensor) -> "PepsSpec":
        return replace(self, tensor=tensor)


# ---------------------------------------------------------------- MPS states


def config_products(tensor: np.ndarray, n: int) -> np.ndarray:
    """All products ``A_{i_1} ... A_{i_n}``, shape ``(d**n, D, D)`` with row-major configs."""
    out = tensor
    d = tensor.shape[0]
    for _ in range(n - 1):
        out = np.einsum("pab,qbc->pqac", out, tensor).reshape(-1, out.shape[1], tensor.shape[2])
    assert out.shape[0] == d ** n
    return out


def _chain_products(tensors) -> np.ndarray:
    out = tensors[0]
    for t in tensors[1:]:
        out = np.einsum("pab,qbc->pqac", out, t).reshape(-1, out.shape[1], t.shape[2])
    return out


def mps_state(spec: MpsSpec, n_sites: int | None = None, cap: int = DEFAULT_AMPLITUDE_CAP) -> np.ndarray:
    """Amplitudes ``tr(A_{i_1} ... A_{i_N})`` (periodic) or the 1x1 product (open)."""
    if spec.boundary == "open":
        if n_sites not in (None, spec.n_sites):
            raise ValueError("open MPS length is fixed by its tensors")
        tensors = list(spec.tensors)
        n = len(tensors)
    else:
        if n_sites is None or n_sites < 1:
            raise ValueError("periodic MPS needs a positive number of sites")
        n = n_sites
        tensors = [spec.tensor] * n
    check_scale(spec.d ** n, cap)

    if n == 1:
        block = tensors[0]
        return np.einsum("paa->p", block) if spec.boundary == "periodic" else block[:, 0, 0].copy()
    k = n // 2
    if spec.boundary == "periodic":
        left = config_products(spec.tensor, k)
        right = config_products(spec.tensor, n - k)
        dd = left.shape[1] * left.shape[2]
        psi = left.reshape(-1, dd) @ right.transpose(0, 2, 1).reshape(-1, dd).T
    else:
        left = _chain_products(tensors[:k])[:, 0, :]
        right = _chain_products(tensors[k:])[:, :, 0]
        psi = left @ right.T
    return psi.reshape(-1)


# --------------------------------------------------------------- PEPS blocks


def _grid_network(tensor, H, K, wrap_vertical, wrap_horizontal):
    """Contract an H x K patch of copies of ``tensor``.

    Output axes: physical legs (row-major), then the open left, down, right and up
    legs as available. Wrapped directions have no open legs.
    """
    counter = iter(range(10 ** 6))
    phys = [[next(counter) for _ in range(K)] for _ in range(H)]
    # hbond[i][j]: bond between (i, j-1) and (i, j); j == 0 is the left edge
    hbond = [[next(counter) for _ in range(K + 1)] for _ in range(H)]
    vbond = [[next(counter) for _ in range(K)] for _ in range(H + 1)]
    if wrap_horizontal:
        for i in range(H):
            hbond[i][K] = hbond[i][0]
    if wrap_vertical:
        for j in range(K):
            vbond[H][j] = vbond[0][j]

    operands = []
    for i in range(H):
        for j in range(K):
            operands += [tensor, [phys[i][j], hbond[i][j], vbond[i + 1][j], hbond[i][j + 1], vbond[i][j]]]
    out = [p for row in phys for p in row]
    if not wrap_horizontal:
        out += [hbond[i][0] for i in range(H)]
    if not wrap_vertical:
        out += [vbond[H][j] for j in range(K)]
    if not wrap_horizontal:
        out += [hbond[i][K] for i in range(H)]
    if not wrap_vertical:
        out += [vbond[0][j] for j in range(K)]
    operands.append(out)
    return np.einsum(*operands, optimize=True)


def block_region(spec: PepsSpec, H: int, K: int) -> np.ndarray:
    """Joint tensor of an open H x K region.

    Axes: (physical d**(H*K), left Dh**H, down Dv**K, right Dh**H, up Dv**K), each leg
    group row-major over its sites (top to bottom, left to right).
    """
    if H < 1 or K < 1:
        raise ValueError("region sides must be positive")
    t = _grid_network(spec.tensor, H, K, False, False)
    return t.reshape(spec.d ** (H * K), spec.Dh ** H, spec.Dv ** K, spec.Dh ** H, spec.Dv ** K)


def column_tensor(tensor: np.ndarray, height: int) -> np.ndarray:
    """A column of ``height`` sites with the vertical bonds closed periodically.

    Shape ``(d**height, Dh**height, Dh**height)``.
    """
    d, dh = tensor.shape[0], tensor.shape[1]
    t = _grid_network(tensor, height, 1, True, False)
    return t.reshape(d ** height, dh ** height, dh ** height)


def row_tensor(tensor: np.ndarray, width: int) -> np.ndarray:
    """A row of ``width`` sites with horizontal bonds closed, as an MPS running downward.

    Shape ``(d**width, Dv**width, Dv**width)`` with matrix index order (up, down).
    """
    d, dv = tensor.shape[0], tensor.shape[2]
    t = _grid_network(tensor, 1, width, False, True)
    # open legs come out as (down..., up...)
    t = t.reshape(d ** width, dv ** width, dv ** width)
    return t.transpose(0, 2, 1)


def block_columns(spec: PepsSpec, rows: int | None = None) -> MpsSpec:
    """Group each column of ``rows`` sites into one MPS tensor (physical d**rows, bond Dh**rows)."""
    rows = spec.rows if rows is None else rows
    return MpsSpec.uniform(column_tensor(spec.tensor, rows))


def block_rows(spec: PepsSpec, cols: int | None = None) -> MpsSpec:
    cols = spec.cols if cols is None else cols
    return MpsSpec.uniform(row_tensor(spec.tensor, cols))


def peps_state(spec: PepsSpec, cap: int = DEFAULT_AMPLITUDE_CAP) -> np.ndarray:
    """Full torus contraction, amplitudes in row-major site order."""
    L, N, d = spec.rows, spec.cols, spec.d
    check_scale(d ** (L * N), cap)
    columns = block_columns(spec, L)
    psi = mps_state(columns, N, cap=cap)
    # psi is column-major over sites: (col0 rows..., col1 rows..., ...)
    psi = psi.reshape([d] * (L * N))
    order = [c * L + r for r in range(L) for c in range(N)]
    return np.transpose(psi, order).reshape(-1)


def apply_gauge(tensor: np.ndarray, Y: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """Insert invertible matrices on the virtual legs of a PEPS tensor.

    ``out[i,l,d,r,u] = sum A[i,l',d',r',u'] Y[l',l] Z[d',d] Yinv[r,r'] Zinv[u,u']``;
    on a torus the inserted matrices cancel bond by bond.
    """
    Yinv = np.linalg.inv(Y)
    Zinv = np.linalg.inv(Z)
    return np.einsum("iabcd,al,bm,rc,ud->ilmru", tensor, Y, Z, Yinv, Zinv, optimize=True)


def apply_mps_gauge(tensor: np.ndarray, R: np.ndarray) -> np.ndarray:
    """``R A_i R^{-1}`` for every physical index."""
    return np.einsum("ab,ibc,cd->iad", R, tensor, np.linalg.inv(R))


def apply_physical(tensor: np.ndarray, u: np.ndarray) -> np.ndarray:
    """``B^i = sum_j u_ij A^j`` on the leading (physical) axis."""
    return np.tensordot(u, tensor, axes=(1, 0))


# ------------------------------------------------------- reduced states


def site_index(row, col, cols):
    return row * cols + col


def reduced_density(state: np.ndarray, region, d: int) -> np.ndarray:
    """Unit-trace reduced density matrix on ``region`` (site indices), others traced out."""
    state = np.asarray(state, dtype=complex)
    n = int(round(np.log(state.size) / np.log(d)))
    if d ** n != state.size:
        raise ValueError("state length is not a power of d")
    region = list(region)
    if not region or len(set(region)) != len(region) or len(region) > n:
        raise ValueError("region must be a nonempty set of distinct sites")
    rest = [k for k in range(n) if k not in region]
    m = np.transpose(state.reshape([d] * n), region + rest).reshape(d ** len(region), -1)
    rho = m @ m.conj().T
    tr = np.trace(rho).real
    if tr == 0.0:
        raise ValueError("zero state has no reduced density matrix")
    return rho / tr


def renyi0(rho: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> float:
    """0-Renyi entropy in bits: log2 of the numerical rank."""
    rho = np.asarray(rho, dtype=complex)
    scale = max(np.linalg.norm(rho), 1e-300)
    if np.linalg.norm(rho - rho.conj().T) > tol.residual_cut * scale:
        raise NotADensityMatrix("input is not Hermitian")
    evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if evals.min() < -tol.residual_cut * max(evals.max(), 0.0) - 1e-14:
        raise NotADensityMatrix("input has negative eigenvalues")
    rank = numeric_rank(rho, tol)
    return float(np.log2(rank)) if rank else float("-inf")


def region_sites(rows, cols, top, left, H, K):
    """Row-major site indices of an H x K patch on a rows x cols torus."""
    return [site_index((top + i) % rows, (left + j) % cols, cols) for i in range(H) for j in range(K)]
