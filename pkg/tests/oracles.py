"""Brute-force reference constructions used as test oracles.

Nothing here calls the contraction, rank or gauge code of the package: states are
summed over every virtual configuration, stabilizer entropies use GF(2) ranks,
and Hamiltonians are built as dense matrices.
"""
from itertools import product

import numpy as np


def naive_reindex(t, row_axes, col_axes):
    rows = int(np.prod([t.shape[a] for a in row_axes]))
    cols = int(np.prod([t.shape[a] for a in col_axes]))
    out = np.zeros((rows, cols), dtype=complex)
    for idx in product(*[range(n) for n in t.shape]):
        r = 0
        for a in row_axes:
            r = r * t.shape[a] + idx[a]
        c = 0
        for a in col_axes:
            c = c * t.shape[a] + idx[a]
        out[r, c] = t[idx]
    return out


def naive_mps(A, n):
    """psi(i_1..i_n) = tr(A_{i_1} ... A_{i_n}), first site most significant."""
    d = A.shape[0]
    psi = np.zeros(d ** n, dtype=complex)
    for k, conf in enumerate(product(range(d), repeat=n)):
        m = np.eye(A.shape[1], dtype=complex)
        for i in conf:
            m = m @ A[i]
        psi[k] = np.trace(m)
    return psi


def naive_peps(A, rows, cols):
    """Torus state summed over every assignment of horizontal and vertical bonds.

    Bond h[r][c] joins the right leg of (r, c) to the left leg of (r, c+1); bond
    v[r][c] joins the up leg of (r, c) to the down leg of (r-1, c). Rows run downward.
    """
    d, Dh, Dv = A.shape[0], A.shape[1], A.shape[2]
    n = rows * cols
    psi = np.zeros(d ** n, dtype=complex)
    for hs in product(range(Dh), repeat=n):
        h = np.reshape(hs, (rows, cols))
        for vs in product(range(Dv), repeat=n):
            v = np.reshape(vs, (rows, cols))
            vec = np.ones(1, dtype=complex)
            for r in range(rows):
                for c in range(cols):
                    site = A[:, h[r, (c - 1) % cols], v[(r + 1) % rows, c], h[r, c], v[r, c]]
                    vec = np.kron(vec, site)
            psi += vec
    return psi


def dense_site_operator(op, site, n, d):
    mats = [np.eye(d)] * n
    mats[site] = op
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def dense_magnetization(psi, Sz, n):
    """<psi| sum_k Sz_k |psi> / (n <psi|psi>) with the total operator built explicitly.

    A diagonal Sz gives a diagonal total operator, stored as its diagonal.
    """
    d = Sz.shape[0]
    weights = np.abs(psi) ** 2
    if np.allclose(Sz, np.diag(np.diag(Sz))):
        s = np.diag(Sz).real
        total = np.zeros(d ** n)
        for conf_index, conf in enumerate(product(range(d), repeat=n)):
            total[conf_index] = sum(s[c] for c in conf)
        return float(np.dot(weights, total) / weights.sum()) / n
    total = sum(dense_site_operator(Sz, k, n, d) for k in range(n))
    return float((np.vdot(psi, total @ psi) / np.vdot(psi, psi)).real) / n


def dense_pauli_string(ops, n):
    out = np.ones((1, 1), dtype=complex)
    for k in range(n):
        out = np.kron(out, ops.get(k, np.eye(2)))
    return out


def gf2_rank(rows):
    m = (np.array(rows, dtype=np.uint8) % 2).copy()
    if m.size == 0:
        return 0
    rank = 0
    for col in range(m.shape[1]):
        pivot = next((r for r in range(rank, m.shape[0]) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] ^= m[rank]
        rank += 1
    return rank


def gf2_kernel(m):
    """Basis of {x : m x = 0 mod 2} as rows."""
    m = (np.array(m, dtype=np.uint8) % 2).copy()
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i, c]), None)
        if p is None:
            continue
        m[[r, p]] = m[[p, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        x = np.zeros(cols, dtype=np.uint8)
        x[f] = 1
        for i, p in enumerate(pivots):
            x[p] = m[i, f]
        basis.append(x)
    return np.array(basis, dtype=np.uint8)


def edge_loop_code(rows, cols):
    """Cycle space of the torus graph, qubit 2*site + (0 right edge, 1 up edge).

    The vertex at site (r, c) touches its own right and up edges, the right edge of
    (r, c-1) and the up edge of (r+1, c).
    """
    n = 2 * rows * cols
    inc = np.zeros((rows * cols, n), dtype=np.uint8)
    for r in range(rows):
        for c in range(cols):
            s = r * cols + c
            for q in (2 * s, 2 * s + 1, 2 * (r * cols + (c - 1) % cols), 2 * (((r + 1) % rows) * cols + c) + 1):
                inc[s, q] ^= 1
    return gf2_kernel(inc)


def code_state_entropy(code, region_qubits):
    """Entropy (bits) of the uniform superposition over a GF(2) code: dim C - dim C_A - dim C_B."""
    n = code.shape[1]
    inside = sorted(region_qubits)
    outside = [q for q in range(n) if q not in set(inside)]
    dim = gf2_rank(code)
    # codewords supported inside A are those vanishing outside; dim = dim C - rank(C|_B)
    dim_a = dim - gf2_rank(code[:, outside]) if outside else dim
    dim_b = dim - gf2_rank(code[:, inside]) if inside else dim
    return dim - dim_a - dim_b


def aklt_hamiltonian(n):
    """Periodic spin-1 chain sum of S.S + (S.S)^2 / 3."""
    s = 1 / np.sqrt(2)
    sx = s * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex)
    sy = s * np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]])
    sz = np.diag([1.0, 0.0, -1.0]).astype(complex)
    H = np.zeros((3 ** n, 3 ** n), dtype=complex)
    for k in range(n):
        j = (k + 1) % n
        ss = sum(dense_site_operator(a, k, n, 3) @ dense_site_operator(a, j, n, 3) for a in (sx, sy, sz))
        H += ss + ss @ ss / 3
    return H


def wen_code_dimension(rows, cols):
    """Dimension of the common +1 space of the Wen plaquettes Z_tl Y_tr Z_br Y_bl (dense projectors)."""
    Y = np.array([[0, -1j], [1j, 0]])
    Z = np.diag([1.0, -1.0]).astype(complex)
    n = rows * cols
    P = np.eye(2 ** n, dtype=complex)
    for r in range(rows):
        for c in range(cols):
            tl = r * cols + c
            tr = r * cols + (c + 1) % cols
            bl = ((r + 1) % rows) * cols + c
            br = ((r + 1) % rows) * cols + (c + 1) % cols
            ops = {}
            for site, op in ((tl, Z), (tr, Y), (br, Z), (bl, Y)):
                ops[site] = ops.get(site, np.eye(2)) @ op
            S = dense_pauli_string(ops, n)
            P = P @ (np.eye(2 ** n) + S) / 2
    return int(round(np.trace(P).real))
