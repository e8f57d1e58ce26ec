"""Hopf C*-algebra structure on a block algebra.

Structure maps are stored as matrices over matrix-unit coordinates:
coproduct (N^2 x N), antipode (N x N), counit and Haar state as row vectors.
Only the Kac case is supported: tracial Haar state and involutive antipode;
anything else is rejected by the axiom checker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import blockalg as ba
from .blockalg import (AlgebraElement, BlockAlgebra, DEFAULT_TOL, ToleranceConfig,
                       tensor_algebra, tensor_perm, inverse_perm, flip_perm,
                       tensor_map, tensor_element)
from .errors import (HaarNotFaithful, NoCharacterBlock, NonUniqueHaar,
                     NotInvolutive, NotCStarAlgebra)
from .groups import Group
from .wedderburn import AbstractStarAlgebra, wedderburn


@dataclass(eq=False)
class HopfAlgebra:
    algebra: BlockAlgebra
    coproduct: np.ndarray
    counit: np.ndarray
    antipode: np.ndarray
    haar: np.ndarray
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = self.algebra.dim
        self.coproduct = np.asarray(self.coproduct, complex).reshape(n * n, n)
        self.counit = np.asarray(self.counit, complex).reshape(n)
        self.antipode = np.asarray(self.antipode, complex).reshape(n, n)
        self.haar = np.asarray(self.haar, complex).reshape(n)

    # -- cached plumbing ------------------------------------------------------
    @cached_property
    def square(self) -> BlockAlgebra:
        return tensor_algebra(self.algebra, self.algebra)

    @cached_property
    def perm2(self) -> np.ndarray:
        return tensor_perm(self.algebra, self.algebra)

    @cached_property
    def iperm2(self) -> np.ndarray:
        return inverse_perm(self.perm2)

    @cached_property
    def flip(self) -> np.ndarray:
        return flip_perm(self.algebra)

    @cached_property
    def mult_mat(self) -> np.ndarray:
        """Multiplication A(x)A -> A as a matrix on tensor coordinates."""
        n = self.algebra.dim
        m = np.empty((n, n * n), complex)
        basis = [self.algebra.basis_element(k) for k in range(n)]
        for a in range(n):
            for b in range(n):
                m[:, a * n + b] = (basis[a] * basis[b]).coords()
        # columns are indexed kron-style; reorder to tensor coordinates
        return m[:, self.perm2]

    @cached_property
    def gram(self) -> np.ndarray:
        """Hermitian Gram matrix tau(e_i* e_j)."""
        n = self.algebra.dim
        g = np.empty((n, n), complex)
        basis = [self.algebra.basis_element(k) for k in range(n)]
        for i in range(n):
            ei = basis[i].adjoint()
            for j in range(n):
                g[i, j] = self.haar @ (ei * basis[j]).coords()
        return 0.5 * (g + g.conj().T)

    @cached_property
    def gram_bilinear(self) -> np.ndarray:
        """Bilinear Gram matrix tau(e_i e_j)."""
        n = self.algebra.dim
        g = np.empty((n, n), complex)
        basis = [self.algebra.basis_element(k) for k in range(n)]
        for i in range(n):
            for j in range(n):
                g[i, j] = self.haar @ (basis[i] * basis[j]).coords()
        return g

    @cached_property
    def star_mat(self) -> np.ndarray:
        """Matrix S with coords(x*) = S @ conj(coords(x))."""
        n = self.algebra.dim
        s = np.empty((n, n), complex)
        for j in range(n):
            s[:, j] = self.algebra.basis_element(j).adjoint().coords()
        return s

    # -- structure map application -------------------------------------------
    def delta(self, x: AlgebraElement) -> AlgebraElement:
        return self.square.from_coords(self.coproduct @ x.coords())

    def epsilon(self, x: AlgebraElement) -> complex:
        return complex(self.counit @ x.coords())

    def kappa(self, x: AlgebraElement) -> AlgebraElement:
        return self.algebra.from_coords(self.antipode @ x.coords())

    def tau(self, x: AlgebraElement) -> complex:
        return complex(self.haar @ x.coords())

    def unit_coords(self) -> np.ndarray:
        return self.algebra.unit().coords()

    def ksym_defect(self, x: AlgebraElement) -> float:
        """Norm of kappa(x*) - x."""
        return (self.kappa(x.adjoint()) - x).norm()

    def is_ksymmetric(self, x: AlgebraElement, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        return self.ksym_defect(x) <= tol * max(1.0, x.norm())


# ---------------------------------------------------------------------------
# axiom verification
# ---------------------------------------------------------------------------

@dataclass
class AxiomReport:
    residuals: dict[str, float]
    tol: float

    @property
    def passed(self) -> bool:
        return all(r < self.tol for r in self.residuals.values())

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    def failing(self) -> list[str]:
        return [k for k, v in self.residuals.items() if v >= self.tol]

    def to_dict(self) -> dict:
        return {"passed": self.passed, "tol": self.tol,
                "residuals": {k: float(v) for k, v in self.residuals.items()}}


def verify_axioms(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> AxiomReport:
    """Residual of every defining identity: coassociativity, counit and
    antipode laws, *-homomorphism property of the coproduct, Haar invariance,
    traciality and the Kac conditions."""
    a = h.algebra
    n = a.dim
    res: dict[str, float] = {}
    basis = [a.basis_element(k) for k in range(n)]
    eye = np.eye(n)

    # coassociativity on the triple tensor (both bracketings share coordinates)
    p_l = tensor_perm(h.square, a)
    p_r = tensor_perm(a, h.square)
    lhs = tensor_map(h.coproduct, eye, h.perm2, p_l) @ h.coproduct
    rhs = tensor_map(eye, h.coproduct, h.perm2, p_r) @ h.coproduct
    res["coassociativity"] = _rel(lhs - rhs, lhs, rhs)

    # counit laws; C (x) A and A (x) C share coordinates with A
    triv = BlockAlgebra((1,))
    p_ca = tensor_perm(triv, a)
    p_ac = tensor_perm(a, triv)
    left = tensor_map(h.counit.reshape(1, n), eye, h.perm2, p_ca) @ h.coproduct
    right = tensor_map(eye, h.counit.reshape(1, n), h.perm2, p_ac) @ h.coproduct
    res["counit_left"] = _rel(left - eye, left, eye)
    res["counit_right"] = _rel(right - eye, right, eye)

    # antipode laws
    unit_eps = np.outer(h.unit_coords(), h.counit)
    lhs = h.mult_mat @ tensor_map(h.antipode, eye, h.perm2, h.perm2) @ h.coproduct
    rhs = h.mult_mat @ tensor_map(eye, h.antipode, h.perm2, h.perm2) @ h.coproduct
    res["antipode_left"] = _rel(lhs - unit_eps, lhs, unit_eps)
    res["antipode_right"] = _rel(rhs - unit_eps, rhs, unit_eps)

    # coproduct is a unital *-homomorphism
    res["coproduct_unital"] = _vecrel(
        h.coproduct @ h.unit_coords() - h.square.unit().coords())
    worst_m, worst_s = 0.0, 0.0
    dbasis = [h.delta(b) for b in basis]
    for i in range(n):
        ds = h.delta(basis[i].adjoint())
        worst_s = max(worst_s, (ds - dbasis[i].adjoint()).norm())
        for j in range(n):
            dm = h.delta(basis[i] * basis[j])
            worst_m = max(worst_m, (dm - dbasis[i] * dbasis[j]).norm())
    res["coproduct_multiplicative"] = worst_m
    res["coproduct_star"] = worst_s

    # Haar state: normalisation, positivity, two-sided invariance, traciality
    res["haar_normalised"] = abs(h.tau(a.unit()) - 1.0)
    eig = np.linalg.eigvalsh(h.gram)
    res["haar_positive"] = max(0.0, -float(eig[0]))
    if eig[0] <= tol.inv_tol * max(1.0, eig[-1]):
        res["haar_faithful"] = 1.0
    else:
        res["haar_faithful"] = 0.0
    left_inv = tensor_map(eye, h.haar.reshape(1, n), h.perm2, p_ac) @ h.coproduct
    right_inv = tensor_map(h.haar.reshape(1, n), eye, h.perm2, p_ca) @ h.coproduct
    target = np.outer(h.unit_coords(), h.haar)
    res["haar_invariance_right"] = _rel(left_inv - target, left_inv, target)
    res["haar_invariance_left"] = _rel(right_inv - target, right_inv, target)
    res["haar_tracial"] = float(np.max(np.abs(h.gram_bilinear - h.gram_bilinear.T)))

    # Kac conditions
    res["antipode_involutive"] = _rel(h.antipode @ h.antipode - eye, eye)
    worst = 0.0
    for b in basis:
        worst = max(worst, (h.kappa(b.adjoint()) - h.kappa(b).adjoint()).norm())
    res["antipode_star"] = worst
    res["haar_kappa_invariant"] = _vecrel(h.haar @ h.antipode - h.haar)

    return AxiomReport(res, tol.eq_tol)


def _rel(diff: np.ndarray, *refs: np.ndarray) -> float:
    d = float(np.linalg.norm(diff))
    scale = max([1.0] + [float(np.linalg.norm(r)) for r in refs])
    return d / scale


def _vecrel(v: np.ndarray) -> float:
    return float(np.linalg.norm(v))


# ---------------------------------------------------------------------------
# Haar state solver
# ---------------------------------------------------------------------------

def compute_haar(algebra: BlockAlgebra, coproduct: np.ndarray,
                 counit: np.ndarray | None = None,
                 antipode: np.ndarray | None = None,
                 tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Solve the two-sided invariance system for the Haar state.

    Returns the coefficient row of the unique functional t with
    (id (x) t)delta = t(.)1 = (t (x) id)delta and t(1) = 1; raises
    NonUniqueHaar if the invariance solution space is not one-dimensional.
    """
    n = algebra.dim
    coproduct = np.asarray(coproduct, complex).reshape(n * n, n)
    perm = tensor_perm(algebra, algebra)
    unit = algebra.unit().coords()
    triv = BlockAlgebra((1,))
    p_ac = tensor_perm(algebra, triv)
    p_ca = tensor_perm(triv, algebra)
    eye = np.eye(n)

    # linear map t -> [(id (x) t)delta - 1 t ; (t (x) id)delta - 1 t]
    def residual_op(t: np.ndarray) -> np.ndarray:
        right = tensor_map(eye, t.reshape(1, n), perm, p_ac) @ coproduct
        left = tensor_map(t.reshape(1, n), eye, perm, p_ca) @ coproduct
        target = np.outer(unit, t)
        return np.concatenate([(right - target).reshape(-1), (left - target).reshape(-1)])

    cols = [residual_op(eye[k]) for k in range(n)]
    sys = np.array(cols).T
    _, sv, vh = np.linalg.svd(sys, full_matrices=False)
    null_dim = int(np.sum(sv <= 1e-10 * max(1.0, sv[0])))
    if null_dim != 1:
        raise NonUniqueHaar(f"invariance solution space has dimension {null_dim}")
    t = vh.conj().T[:, -1]
    norm = t @ unit
    if abs(norm) < tol.inv_tol:
        raise NonUniqueHaar("invariant functional is not normalisable")
    return t / norm


# ---------------------------------------------------------------------------
# distinguished subspaces
# ---------------------------------------------------------------------------

def cocentre_basis(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> list[AlgebraElement]:
    """Orthonormal basis (Haar inner product) of the cocommutative elements."""
    n = h.algebra.dim
    sigma_delta = h.coproduct[h.flip, :]
    _, sv, vh = np.linalg.svd(h.coproduct - sigma_delta, full_matrices=False)
    null_dim = int(np.sum(sv <= 1e-10 * max(1.0, sv[0])))
    raw = vh.conj().T[:, n - null_dim:]
    # orthonormalise against <a,b> = tau(a* b) = a^dagger Gram b
    chol = np.linalg.cholesky(h.gram + 0j)
    q, _ = np.linalg.qr(chol.conj().T @ raw)
    basis = np.linalg.solve(chol.conj().T, q)
    return [h.algebra.from_coords(basis[:, i]) for i in range(basis.shape[1])]


def ksymmetric_basis(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> list[AlgebraElement]:
    """Real basis of the +1 eigenspace of x -> kappa(x*)."""
    n = h.algebra.dim

    def theta(v: np.ndarray) -> np.ndarray:
        return h.antipode @ (h.star_mat @ np.conj(v))

    theta_mat = ba.real_matrix_of_map(theta, n)
    ident = np.eye(2 * n)
    if np.linalg.norm(theta_mat @ theta_mat - ident) > 1e-8 * 2 * n:
        raise NotInvolutive("kappa composed with * is not an involution")
    fixed = ba.real_null_space(theta_mat - ident)
    return [h.algebra.from_coords(ba.real_vec_to_coords(fixed[:, i]))
            for i in range(fixed.shape[1])]


@dataclass(frozen=True)
class CentralProjection:
    element: AlgebraElement
    block: int


def counit_support(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> CentralProjection:
    """Minimal central projection j with x j = eps(x) j for all x.

    The counit is a character, so it lives on a single 1x1 block; we scan the
    blocks for the one where the defining identity holds.
    """
    a = h.algebra
    basis = [a.basis_element(k) for k in range(a.dim)]
    for b, nb in enumerate(a.block_dims):
        if nb != 1:
            continue
        j = a.block_unit(b)
        worst = max(((x * j) - h.epsilon(x) * j).norm() for x in basis)
        if worst < tol.eq_tol * 10:
            return CentralProjection(j, b)
    raise NoCharacterBlock("no 1x1 block carries the counit character")


# ---------------------------------------------------------------------------
# example families
# ---------------------------------------------------------------------------

def group_algebra(group: Group, tol: ToleranceConfig = DEFAULT_TOL,
                  seed: int = 0x517C) -> HopfAlgebra:
    """C[G] in block form via the numerical Wedderburn decomposition.

    On the group basis: delta(g) = g (x) g, eps(g) = 1, kappa(g) = g^{-1},
    tau(g) = [g = e].  The change of basis to block coordinates is kept in
    meta["group_basis"].
    """
    n = group.order
    left = np.zeros((n, n, n))
    for g in range(n):
        for x in range(n):
            left[g, group.mul(g, x), x] = 1.0
    star = np.zeros((n, n))
    for g in range(n):
        star[group.inv(g), g] = 1.0
    unit = np.zeros(n)
    unit[0] = 1.0
    abstract = AbstractStarAlgebra(left.astype(complex), star.astype(complex),
                                   unit.astype(complex))
    wd = wedderburn(abstract, seed=seed)
    phi, phi_inv = wd.iso, wd.iso_inv
    alg = wd.algebra

    perm = tensor_perm(alg, alg)
    coproduct = np.empty((alg.dim ** 2, n), complex)
    for g in range(n):
        xg = alg.from_coords(phi[:, g])
        coproduct[:, g] = tensor_element(xg, xg).coords()
    coproduct = coproduct @ phi_inv
    counit = np.ones(n) @ phi_inv
    kappa_group = np.zeros((n, n))
    for g in range(n):
        kappa_group[group.inv(g), g] = 1.0
    antipode = phi @ kappa_group @ phi_inv
    haar = unit @ phi_inv  # tau(lambda_g) = [g = e]
    return HopfAlgebra(alg, coproduct, counit, antipode, haar,
                       name=f"C[{group.name}]",
                       meta={"group": group, "group_basis": phi, "kind": "group"})


def function_algebra(group: Group, tol: ToleranceConfig = DEFAULT_TOL) -> HopfAlgebra:
    """C(G): all blocks 1x1, delta(f)(s,t) = f(st) on the delta-function basis."""
    n = group.order
    alg = BlockAlgebra((1,) * n)
    perm = tensor_perm(alg, alg)
    coproduct = np.zeros((n * n, n), complex)
    for g in range(n):
        kron = np.zeros(n * n)
        for s in range(n):
            for t in range(n):
                if group.mul(s, t) == g:
                    kron[s * n + t] = 1.0
        coproduct[:, g] = kron[perm]
    counit = np.zeros(n)
    counit[0] = 1.0
    antipode = np.zeros((n, n))
    for g in range(n):
        antipode[group.inv(g), g] = 1.0
    haar = np.full(n, 1.0 / n)
    return HopfAlgebra(alg, coproduct, counit, antipode, haar,
                       name=f"C({group.name})",
                       meta={"group": group, "kind": "function"})


def with_computed_haar(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> HopfAlgebra:
    """Clone of h with the Haar row recomputed from the invariance system."""
    haar = compute_haar(h.algebra, h.coproduct, h.counit, h.antipode, tol)
    return HopfAlgebra(h.algebra, h.coproduct, h.counit, h.antipode, haar,
                       name=h.name, meta=dict(h.meta))
