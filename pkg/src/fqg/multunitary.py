"""GNS space of the Haar state and the multiplicative unitary.

The unitary is built on the vector model V(La (x) Lb) = (L (x) L)(delta(a)(1 (x) b))
and certified by unitarity, the pentagon equation and the leg-algebra spans.
The convention is fixed here, in one place; if a certificate fails the
construction aborts instead of silently flipping to another variant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from . import blockalg as ba
from .blockalg import AlgebraElement, BlockAlgebra, DEFAULT_TOL, ToleranceConfig
from .duality import DualHopfAlgebra, Functional
from .errors import (CommutantViolation, HaarNotFaithful, LegMismatch,
                     NotSimpleTensor, NotUnitary, PentagonFailed,
                     SpectrumFullCircle)
from .hopf import HopfAlgebra
from .morphisms import AlgebraMap


@dataclass(eq=False)
class GnsSpace:
    """L^2(A, tau) with the matrix-unit image as spanning set.

    onb maps element coordinates to coefficients in an orthonormal basis
    (Cholesky of the Gram matrix, so the basis is the Gram-Schmidt one in
    the deterministic matrix-unit order).
    """

    hopf: HopfAlgebra
    gram: np.ndarray
    onb: np.ndarray
    onb_inv: np.ndarray

    @property
    def dim(self) -> int:
        return self.hopf.algebra.dim

    def vector(self, x: AlgebraElement) -> np.ndarray:
        """GNS image Lambda(x) in the orthonormal basis."""
        return self.onb @ x.coords()

    def element(self, vec: np.ndarray) -> AlgebraElement:
        return self.hopf.algebra.from_coords(self.onb_inv @ vec)

    def rep(self, x: AlgebraElement) -> np.ndarray:
        """Left multiplication by x as an operator on the GNS space."""
        n = self.dim
        cols = np.column_stack([(x * self.hopf.algebra.basis_element(k)).coords()
                                for k in range(n)])
        return self.onb @ cols @ self.onb_inv

    @cached_property
    def rep_basis(self) -> np.ndarray:
        """rep of every basis element, shape (N, N, N)."""
        return np.array([self.rep(self.hopf.algebra.basis_element(k))
                         for k in range(self.dim)])

    def rep_coords(self, v: np.ndarray) -> np.ndarray:
        return np.tensordot(v, self.rep_basis, axes=(0, 0))

    @cached_property
    def rep_pinv(self) -> np.ndarray:
        flat = self.rep_basis.reshape(self.dim, -1).T
        return np.linalg.pinv(flat)

    def rep_inverse(self, op: np.ndarray, tol: float = 1e-8):
        """Coordinates of the element represented by op, or None."""
        c = self.rep_pinv @ op.reshape(-1)
        if np.linalg.norm(self.rep_coords(c) - op) > tol * max(1.0, np.linalg.norm(op)):
            return None
        return c


def build_gns(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> GnsSpace:
    gram = h.gram
    eig = np.linalg.eigvalsh(gram)
    if eig[0] <= tol.inv_tol * max(1.0, eig[-1]):
        raise HaarNotFaithful(f"Gram matrix nearly singular: {eig[0]:.2e}")
    chol = np.linalg.cholesky(gram)
    onb = chol.conj().T
    gns = GnsSpace(h, gram, onb, np.linalg.inv(onb))
    # representation must be a unital *-homomorphism for the inner product
    rng = np.random.default_rng(0x6E5)
    for _ in range(4):
        x = ba.random_element(h.algebra, rng)
        y = ba.random_element(h.algebra, rng)
        if np.linalg.norm(gns.rep(x) @ gns.rep(y) - gns.rep(x * y)) > 1e-8 or \
           np.linalg.norm(gns.rep(x.adjoint()) - gns.rep(x).conj().T) > 1e-8:
            raise HaarNotFaithful("GNS representation defect")
    return gns


@dataclass(eq=False)
class MultiplicativeUnitary:
    gns: GnsSpace
    dual: DualHopfAlgebra
    matrix: np.ndarray                   # unitary on H (x) H, kron ordering
    sbasis: np.ndarray                   # rep of the base algebra basis
    shat_basis: np.ndarray               # first-leg coefficients X_k
    certificates: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.gns.dim

    # -- representations of both legs -----------------------------------------
    def rep(self, x: AlgebraElement) -> np.ndarray:
        return self.gns.rep(x)

    def rep_dual(self, xhat: AlgebraElement) -> np.ndarray:
        """Represent an element of the dual inside the second-leg slice algebra."""
        row = self.dual.from_dual_mat @ xhat.coords()
        return np.tensordot(row, self.shat_basis, axes=(0, 0))

    def rep_dual_inverse(self, op: np.ndarray, tol: float = 1e-8):
        flat = self.shat_basis.reshape(self.dim, -1).T
        row, *_ = np.linalg.lstsq(flat, op.reshape(-1), rcond=None)
        if np.linalg.norm(flat @ row - op.reshape(-1)) > tol * max(1.0, np.linalg.norm(op)):
            return None
        return self.dual.hopf.algebra.from_coords(self.dual.to_dual_mat @ row)


def build_multiplicative_unitary(gns: GnsSpace, dual: DualHopfAlgebra,
                                 tol: ToleranceConfig = DEFAULT_TOL) -> MultiplicativeUnitary:
    h = gns.hopf
    if dual.base is not h:
        raise ba.ShapeMismatch("GNS space and dual must come from the same algebra")
    n = gns.dim
    a = h.algebra
    one = a.unit()
    basis = [a.basis_element(k) for k in range(n)]

    # V on element coordinates: column (a, b) = coords of delta(e_a)(1 (x) e_b)
    v_el = np.empty((n * n, n * n), complex)
    for i in range(n):
        di = h.delta(basis[i])
        for j in range(n):
            w = di * ba.tensor_element(one, basis[j])
            v_el[:, i * n + j] = _coords_to_kron(w.coords(), h.perm2)
    w2 = np.kron(gns.onb, gns.onb)
    v = w2 @ v_el @ np.linalg.inv(w2)

    cert = {}
    cert["unitarity"] = float(np.linalg.norm(v.conj().T @ v - np.eye(n * n))) / n
    if cert["unitarity"] > tol.eq_tol * 100:
        raise NotUnitary(f"V fails unitarity: {cert['unitarity']:.2e}")

    # pentagon V12 V13 V23 = V23 V12 on H (x) H (x) H
    eye = np.eye(n)
    v12 = np.kron(v, eye)
    v23 = np.kron(eye, v)
    v13 = _middle_leg(v, n)
    pent = v12 @ v13 @ v23 - v23 @ v12
    cert["pentagon"] = float(np.linalg.norm(pent)) / max(1.0, float(np.linalg.norm(v12)))
    if cert["pentagon"] > 1e-8:
        raise PentagonFailed(f"pentagon residual {cert['pentagon']:.2e}")

    # decompose V = sum_k X_k (x) rep(e_k): second legs span the GNS image of A
    sbasis = gns.rep_basis
    v_schmidt = v.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)
    flat = sbasis.reshape(n, n * n)
    xmat, res, *_ = np.linalg.lstsq(flat.T, v_schmidt.T, rcond=None)
    fit = float(np.linalg.norm(flat.T @ xmat - v_schmidt.T))
    cert["second_leg_membership"] = fit / max(1.0, float(np.linalg.norm(v)))
    if cert["second_leg_membership"] > 1e-8:
        raise LegMismatch("V does not lie in B(H) (x) rep(A)")
    shat = xmat.reshape(n, n, n)

    # leg spans: second legs = rep(A), first legs = span X_k with full rank
    cert["leg_dim_first"] = int(np.linalg.matrix_rank(shat.reshape(n, -1), tol=1e-8))
    cert["leg_dim_second"] = int(np.linalg.matrix_rank(
        _second_legs(v, n).reshape(-1, n * n), tol=1e-8))
    cert["second_leg_span_distance"] = _span_distance(
        _second_legs(v, n).reshape(-1, n * n), flat)
    if cert["leg_dim_first"] != n or cert["leg_dim_second"] != n:
        raise LegMismatch(f"leg ranks {cert['leg_dim_first']}, {cert['leg_dim_second']} != {n}")
    if cert["second_leg_span_distance"] > 1e-8:
        raise LegMismatch("second legs do not span rep(A)")

    mu = MultiplicativeUnitary(gns, dual, v, sbasis, shat, cert)

    # the slice map must be a unital *-isomorphism from the dual onto span{X_k}
    dual_alg = dual.hopf.algebra
    rng = np.random.default_rng(0xA11)
    worst_m = worst_s = 0.0
    for _ in range(6):
        xh = ba.random_element(dual_alg, rng)
        yh = ba.random_element(dual_alg, rng)
        worst_m = max(worst_m, float(np.linalg.norm(
            mu.rep_dual(xh * yh) - mu.rep_dual(xh) @ mu.rep_dual(yh))))
        worst_s = max(worst_s, float(np.linalg.norm(
            mu.rep_dual(xh.adjoint()) - mu.rep_dual(xh).conj().T)))
    cert["dual_rep_multiplicative"] = worst_m
    cert["dual_rep_star"] = worst_s
    cert["dual_rep_unital"] = float(np.linalg.norm(
        mu.rep_dual(dual_alg.unit()) - np.eye(n)))
    if max(worst_m, worst_s, cert["dual_rep_unital"]) > 1e-7:
        raise LegMismatch("first-leg slices do not represent the dual algebra")

    # pairing certificate: expanding V over the two leg bases recovers the
    # duality pairing; with Q the coefficient matrix of the first legs over
    # the represented dual basis, beta_mat @ Q must be the identity
    flat_hat = np.array([mu.rep_dual(dual_alg.basis_element(i))
                         for i in range(n)]).reshape(n, n * n)
    q = np.linalg.lstsq(flat_hat.T, shat.reshape(n, n * n).T, rcond=None)[0]
    beta = np.empty((n, n), complex)
    for i in range(n):
        ehat = dual_alg.basis_element(i)
        for j in range(n):
            beta[i, j] = dual.pairing(h.algebra.basis_element(j), ehat)
    cert["pairing_via_v"] = float(np.linalg.norm(beta.T @ q - np.eye(n))) / n
    if cert["pairing_via_v"] > 1e-7:
        raise LegMismatch("V does not implement the duality pairing")
    return mu


def _coords_to_kron(w: np.ndarray, perm: np.ndarray) -> np.ndarray:
    kron = np.empty_like(w)
    kron[perm] = w
    return kron


def _middle_leg(v: np.ndarray, n: int) -> np.ndarray:
    """V13 acting on legs 1 and 3 of C^n (x) C^n (x) C^n."""
    v4 = v.reshape(n, n, n, n)       # axes (row1, row2, col1, col2)
    out = np.einsum('abcd,ef->aebcfd', v4, np.eye(n))
    return out.reshape(n ** 3, n ** 3)


def _second_legs(v: np.ndarray, n: int) -> np.ndarray:
    """All slices (omega (x) id)(V): the (i,j) block pattern of V."""
    v4 = v.reshape(n, n, n, n)
    return v4.transpose(0, 2, 1, 3).reshape(n * n, n, n)


def _span_distance(rows_a: np.ndarray, rows_b: np.ndarray) -> float:
    """Distance between row spans via orthogonal projectors."""
    qa = _orth(rows_a.T)
    qb = _orth(rows_b.T)
    pa = qa @ qa.conj().T
    pb = qb @ qb.conj().T
    return float(np.linalg.norm(pa - pb, 2))


def _orth(cols: np.ndarray) -> np.ndarray:
    u, sv, _ = np.linalg.svd(cols, full_matrices=False)
    rank = int(np.sum(sv > 1e-10 * max(1.0, sv[0])))
    return u[:, :rank]


# ---------------------------------------------------------------------------
# fixed and cofixed vectors
# ---------------------------------------------------------------------------

@dataclass
class FixedSpaces:
    fixed: np.ndarray      # columns: ON basis of {xi : V(xi (x) eta) = xi (x) eta}
    cofixed: np.ndarray
    eigenvector_residual: float


def fixed_and_cofixed(mu: MultiplicativeUnitary, tol: ToleranceConfig = DEFAULT_TOL) -> FixedSpaces:
    n = mu.dim
    v = mu.matrix
    eye = np.eye(n)
    # stack conditions over a basis of the other leg
    rows_fixed = []
    rows_cofixed = []
    for k in range(n):
        ek = eye[:, k]
        sel = np.kron(eye, ek.reshape(n, 1))          # xi -> xi (x) e_k
        rows_fixed.append((v - np.eye(n * n)) @ sel)
        sel2 = np.kron(ek.reshape(n, 1), eye)         # eta -> e_k (x) eta
        rows_cofixed.append((v - np.eye(n * n)) @ sel2)
    fixed = _null(np.vstack(rows_fixed))
    cofixed = _null(np.vstack(rows_cofixed))

    # quoted eigenvector property: rep(A) maps cofixed vectors to multiples,
    # dual slices map fixed vectors to multiples
    worst = 0.0
    for j in range(cofixed.shape[1]):
        vec = cofixed[:, j]
        for k in range(n):
            img = mu.sbasis[k] @ vec
            worst = max(worst, _off_ray(img, vec))
    for j in range(fixed.shape[1]):
        vec = fixed[:, j]
        for k in range(n):
            img = mu.shat_basis[k] @ vec
            worst = max(worst, _off_ray(img, vec))
    return FixedSpaces(fixed, cofixed, worst)


def _null(mat: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    _, sv, vh = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(sv > tol * max(1.0, sv[0])))
    return vh.conj().T[:, rank:]


def _off_ray(img: np.ndarray, vec: np.ndarray) -> float:
    """Norm of the component of img orthogonal to vec."""
    vn = vec / np.linalg.norm(vec)
    return float(np.linalg.norm(img - (vn.conj() @ img) * vn))


# ---------------------------------------------------------------------------
# commutation with u-hat (x) u
# ---------------------------------------------------------------------------

def _check_unitary(op: np.ndarray, tol: ToleranceConfig, what: str):
    n = op.shape[0]
    if np.linalg.norm(op.conj().T @ op - np.eye(n)) > tol.eq_tol * 100 * n:
        raise NotUnitary(f"{what} is not unitary")


def commutation_test(uhat: AlgebraElement, u: AlgebraElement,
                     mu: MultiplicativeUnitary,
                     tol: ToleranceConfig = DEFAULT_TOL) -> dict:
    """Residual of [V, uhat (x) u] plus invariance of both leg algebras under
    conjugation of V by the pair."""
    t_hat = mu.rep_dual(uhat)
    t = mu.rep(u)
    _check_unitary(t_hat, tol, "uhat")
    _check_unitary(t, tol, "u")
    big = np.kron(t_hat, t)
    v = mu.matrix
    resid = float(np.linalg.norm(v @ big - big @ v)) / max(1.0, float(np.linalg.norm(v)))
    n = mu.dim
    v_conj = big.conj().T @ v @ big
    first = np.array([x.reshape(-1) for x in _first_legs(v_conj, n)])
    second = _second_legs(v_conj, n).reshape(-1, n * n)
    inv_first = _span_distance(first, mu.shat_basis.reshape(n, -1))
    inv_second = _span_distance(second, mu.sbasis.reshape(n, -1))
    return {"residual": resid,
            "leg_invariance_first": inv_first,
            "leg_invariance_second": inv_second}


def _first_legs(v: np.ndarray, n: int):
    v4 = v.reshape(n, n, n, n)
    return [v4[:, i, :, j] for i in range(n) for j in range(n)]


def solve_commutant_partner(u: AlgebraElement, mu: MultiplicativeUnitary,
                            tol: ToleranceConfig = DEFAULT_TOL):
    """All W in the first-leg algebra with V(W (x) rep(u)) = (W (x) rep(u))V.

    Returns an orthonormal basis (list of dual-coefficient rows); the linear
    system is solved over span{X_k} so central scalar mismatches cannot hide.
    """
    n = mu.dim
    t = mu.rep(u)
    v = mu.matrix
    cols = []
    for k in range(n):
        xk = np.tensordot(mu.dual.from_dual_mat @ mu.dual.hopf.algebra.basis_element(k).coords(),
                          mu.shat_basis, axes=(0, 0))
        big = np.kron(xk, t)
        cols.append((v @ big - big @ v).reshape(-1))
    sys = np.array(cols).T
    _, sv, vh = np.linalg.svd(sys, full_matrices=False)
    rank = int(np.sum(sv > 1e-8 * max(1.0, sv[0])))
    null = vh.conj().T[:, rank:]
    return [mu.dual.hopf.algebra.from_coords(null[:, i])
            for i in range(null.shape[1])]


# ---------------------------------------------------------------------------
# simple tensors in the commutant and the connecting path
# ---------------------------------------------------------------------------

def split_simple_tensor(op: np.ndarray, n: int, gap_ratio: float = 1e6):
    """Split a rank-one operator T = X (x) Y on C^n (x) C^n.

    Raises NotSimpleTensor unless the operator-Schmidt spectrum has a
    dominant gap (sigma_1/sigma_2 > gap_ratio).
    """
    schmidt = op.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n)
    u_s, sv, vh_s = np.linalg.svd(schmidt)
    if len(sv) > 1 and sv[0] < gap_ratio * sv[1]:
        raise NotSimpleTensor(f"operator-Schmidt ratio {sv[0]/max(sv[1],1e-300):.2e}")
    x = u_s[:, 0].reshape(n, n) * np.sqrt(sv[0])
    y = vh_s[0, :].reshape(n, n) * np.sqrt(sv[0])
    # phase convention: largest entry of the second factor real positive
    idx = np.unravel_index(np.argmax(np.abs(y)), y.shape)
    ph = np.abs(y[idx]) / y[idx]
    return x / ph, y * ph


def pair_from_commutant(op: np.ndarray, mu: MultiplicativeUnitary,
                        tol: ToleranceConfig = DEFAULT_TOL):
    """From a simple-tensor unitary commuting with V, extract the dual pair
    of inner automorphisms with certificates.

    Returns dict with u, uhat (algebra elements), the two conjugation maps,
    and residuals (commutation, pairing invariance).
    """
    n = mu.dim
    v = mu.matrix
    resid = float(np.linalg.norm(v @ op - op @ v)) / max(1.0, float(np.linalg.norm(v)))
    if resid > tol.eq_tol * 1e3:
        raise CommutantViolation(f"commutation residual {resid:.2e}")
    xop, yop = split_simple_tensor(op, n)
    _check_unitary(xop, tol, "first factor")
    _check_unitary(yop, tol, "second factor")
    u_coords = mu.gns.rep_inverse(yop)
    if u_coords is None:
        raise NotSimpleTensor("second factor is not in the base leg algebra")
    u = mu.gns.hopf.algebra.from_coords(u_coords)
    uhat = mu.rep_dual_inverse(xop)
    if uhat is None:
        raise NotSimpleTensor("first factor is not in the dual leg algebra")
    alpha = AlgebraMap.ad(u, tol)
    alpha_hat = AlgebraMap.ad(uhat, tol)
    # pairing invariance: beta(u x u*, uhat yhat uhat*) = beta(x, yhat)
    rng = np.random.default_rng(0xBE7A)
    worst = 0.0
    for _ in range(8):
        x = ba.random_element(mu.gns.hopf.algebra, rng)
        yh = ba.random_element(mu.dual.hopf.algebra, rng)
        worst = max(worst, abs(mu.dual.pairing(alpha(x), alpha_hat(yh))
                               - mu.dual.pairing(x, yh)))
    return {"u": u, "uhat": uhat, "alpha": alpha, "alpha_hat": alpha_hat,
            "commutation_residual": resid, "pairing_invariance": worst}


def unitary_fractional_power(op: np.ndarray, r: float,
                             min_gap: float = 1e-6) -> np.ndarray:
    """op^r by functional calculus with the branch cut in the largest
    spectral gap on the unit circle."""
    vals, vecs = scipy.linalg.schur(op, output="complex")
    d = np.diag(vals)
    angles = np.angle(d)
    order = np.argsort(angles)
    sorted_ang = angles[order]
    gaps = np.diff(np.concatenate([sorted_ang, [sorted_ang[0] + 2 * np.pi]]))
    imax = int(np.argmax(gaps))
    if gaps[imax] < min_gap:
        raise SpectrumFullCircle("no usable gap on the unit circle")
    cut = sorted_ang[imax] + gaps[imax] / 2
    shifted = np.where(angles > cut, angles - 2 * np.pi, angles)
    shifted = np.where(shifted <= cut - 2 * np.pi, shifted + 2 * np.pi, shifted)
    powered = np.exp(1j * r * shifted)
    return (vecs * powered) @ vecs.conj().T


def path_in_commutant(uhat: AlgebraElement, u: AlgebraElement,
                      mu: MultiplicativeUnitary, r: float,
                      tol: ToleranceConfig = DEFAULT_TOL):
    """The simple tensor uhat^r (x) u^r (principal powers); returns the pair
    of operators and the commutation residual at this r."""
    if not (0 < r <= 1):
        raise ValueError("r must be in (0, 1]")
    t_hat = unitary_fractional_power(mu.rep_dual(uhat), r)
    t = unitary_fractional_power(mu.rep(u), r)
    big = np.kron(t_hat, t)
    v = mu.matrix
    resid = float(np.linalg.norm(v @ big - big @ v)) / max(1.0, float(np.linalg.norm(v)))
    return t_hat, t, resid
