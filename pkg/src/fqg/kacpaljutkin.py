"""The 8-dimensional Kac-Paljutkin quantum group.

Construction from the standard presentation by unitary generators x, y, z with

    x^2 = y^2 = 1,  xy = yx,  zx = yz,  zy = xz,  z^2 = (1 + x + y - xy)/2,
    delta(x) = x (x) x,  delta(y) = y (x) y,
    delta(z) = (1(x)1 + 1(x)x + y(x)1 - y(x)x)/2 * (z (x) z),
    eps(x) = eps(y) = eps(z) = 1.

The generators are realised concretely on C + C + C + C + M_2: the four
characters send (x, y, z) to (1,1,1), (1,1,-1), (-1,-1,i), (-1,-1,-i) and the
2-dimensional block uses x = diag(1,-1), y = -x, z = [[0,1],[1,0]].  The
antipode is solved from the antipode law and the Haar state from the
invariance system, so nothing is copied from the literature unchecked.
"""

from __future__ import annotations

import numpy as np

from .blockalg import BlockAlgebra, tensor_element, tensor_perm
from .hopf import HopfAlgebra, compute_haar, verify_axioms
from .errors import NotCStarAlgebra

BLOCK_DIMS = (1, 1, 1, 1, 2)


def _generators(alg: BlockAlgebra):
    sx = np.array([[1, 0], [0, -1]], dtype=complex)
    flip = np.array([[0, 1], [1, 0]], dtype=complex)
    x = alg.element([np.array([[1.0]])] * 2 + [np.array([[-1.0]])] * 2 + [sx])
    y = alg.element([np.array([[1.0]])] * 2 + [np.array([[-1.0]])] * 2 + [-sx])
    z = alg.element([np.array([[1.0]]), np.array([[-1.0]]),
                     np.array([[1j]]), np.array([[-1j]]), flip])
    return x, y, z


def build_kac_paljutkin() -> HopfAlgebra:
    alg = BlockAlgebra(BLOCK_DIMS)
    x, y, z = _generators(alg)
    one = alg.unit()
    words = [one, x, y, x * y, z, x * z, y * z, x * y * z]
    wmat = np.column_stack([w.coords() for w in words])
    winv = np.linalg.inv(wmat)

    # coproduct on generators, extended multiplicatively to the word basis
    dx = tensor_element(x, x)
    dy = tensor_element(y, y)
    omega = 0.5 * (tensor_element(one, one) + tensor_element(one, x)
                   + tensor_element(y, one) - tensor_element(y, x))
    dz = omega * tensor_element(z, z)
    done = tensor_element(one, one)
    dwords = [done, dx, dy, dx * dy, dz, dx * dz, dy * dz, dx * dy * dz]
    n = alg.dim
    coproduct = np.column_stack([d.coords() for d in dwords]) @ winv

    counit = np.ones(n) @ winv  # every generator has counit 1

    # antipode: solve m(kappa (x) id)delta = eps(.)1 as a linear system in kappa
    perm = tensor_perm(alg, alg)
    basis = [alg.basis_element(k) for k in range(n)]
    unit_coords = one.coords()
    rows, rhs = [], []
    for j in range(n):
        gamma = _coords_to_kron(coproduct[:, j], perm).reshape(n, n)
        # sum_ab gamma[a,b] kappa(e_a) e_b ; unknown kappa as N x N matrix
        block_rows = np.zeros((n, n * n), complex)
        for a in range(n):
            for b in range(n):
                if abs(gamma[a, b]) < 1e-15:
                    continue
                right = basis[b]
                lm = np.column_stack([(alg.basis_element(k) * right).coords()
                                      for k in range(n)])
                block_rows += gamma[a, b] * np.kron(lm, _unit_row(n, a))
        rows.append(block_rows)
        rhs.append(counit[j] * unit_coords)
    sys = np.vstack(rows)
    target = np.concatenate(rhs)
    sol, *_ = np.linalg.lstsq(sys, target, rcond=None)
    antipode = sol.reshape(n, n)
    if np.linalg.norm(sys @ sol - target) > 1e-9:
        raise NotCStarAlgebra("antipode system inconsistent")

    haar = compute_haar(alg, coproduct)
    h = HopfAlgebra(alg, coproduct, counit, antipode, haar,
                    name="KacPaljutkin", meta={"kind": "kac_paljutkin"})
    report = verify_axioms(h)
    if not report.passed:
        raise NotCStarAlgebra(f"presentation fails axioms: {report.failing()}")
    return h


def _coords_to_kron(w: np.ndarray, perm: np.ndarray) -> np.ndarray:
    kron = np.empty_like(w)
    kron[perm] = w[np.arange(len(w))]
    return kron


def _unit_row(n: int, a: int) -> np.ndarray:
    row = np.zeros((1, n))
    row[0, a] = 1.0
    return row
