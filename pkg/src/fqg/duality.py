"""Dual Hopf algebra, Fourier transform, convolution, faithful functionals.

A functional on A is stored through its density: f = tau(v .) with v an
element of A (the trace pairing is nondegenerate because the Haar state is
faithful).  The dual algebra is the space of functionals with convolution
product (f.g)(x) = (f (x) g)(delta x); its block form is computed numerically
by the Wedderburn engine, never entered by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import blockalg as ba
from .blockalg import (AlgebraElement, BlockAlgebra, DEFAULT_TOL, ToleranceConfig,
                       invert, polar_symmetry, tensor_perm, tensor_map)
from .errors import (NotFaithful, NotInjective, NotInvertible, NotSelfAdjoint,
                     NotStarHom)
from .hopf import HopfAlgebra, compute_haar, verify_axioms, AxiomReport
from .wedderburn import AbstractStarAlgebra, wedderburn


class Functional:
    """Linear functional f = tau(density . ) on the algebra of a HopfAlgebra."""

    __slots__ = ("hopf", "density")

    def __init__(self, hopf: HopfAlgebra, density: AlgebraElement):
        if density.algebra != hopf.algebra:
            raise ba.ShapeMismatch("density lives in the wrong algebra")
        object.__setattr__(self, "hopf", hopf)
        object.__setattr__(self, "density", density)

    def __setattr__(self, *a):
        raise AttributeError("Functional is immutable")

    def __call__(self, x: AlgebraElement) -> complex:
        return self.hopf.tau(self.density * x)

    @property
    def row(self) -> np.ndarray:
        """Coefficient row: row[j] = f(e_j)."""
        return self.density.coords() @ self.hopf.gram_bilinear

    @classmethod
    def from_row(cls, hopf: HopfAlgebra, row: np.ndarray) -> "Functional":
        density = hopf.algebra.from_coords(
            np.linalg.solve(hopf.gram_bilinear.T, np.asarray(row, complex)))
        return cls(hopf, density)

    # density-level predicates (these ARE the functional-level notions)
    def is_selfadjoint(self, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        return self.density.is_selfadjoint(tol)

    def is_positive(self, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
        return self.is_selfadjoint(tol.eq_tol) and ba.is_positive(self.density, tol)

    def is_faithful(self, inv_tol: float = DEFAULT_TOL.inv_tol) -> bool:
        return self.density.is_invertible(inv_tol)

    def annihilator_rank_defect(self) -> int:
        """dim ker of the bilinear form (a,b) -> f(ab); 0 iff faithful."""
        n = self.hopf.algebra.dim
        basis = [self.hopf.algebra.basis_element(k) for k in range(n)]
        g = np.array([[self(basis[i] * basis[j]) for j in range(n)] for i in range(n)])
        sv = np.linalg.svd(g, compute_uv=False)
        return int(np.sum(sv <= 1e-10 * max(1.0, sv[0])))


@dataclass(eq=False)
class DualHopfAlgebra:
    """The dual quantum group realised as a block algebra.

    to_dual maps a functional row (length N) to block coordinates of the dual
    algebra; the pairing is beta(a, ahat) = (functional of ahat)(a).
    """

    base: HopfAlgebra
    hopf: HopfAlgebra
    to_dual_mat: np.ndarray
    from_dual_mat: np.ndarray

    # -- conversions -----------------------------------------------------------
    def to_dual(self, f: Functional) -> AlgebraElement:
        return self.hopf.algebra.from_coords(self.to_dual_mat @ f.row)

    def to_functional(self, ahat: AlgebraElement) -> Functional:
        row = self.from_dual_mat @ ahat.coords()
        return Functional.from_row(self.base, row)

    def pairing(self, a: AlgebraElement, ahat: AlgebraElement) -> complex:
        row = self.from_dual_mat @ ahat.coords()
        return complex(row @ a.coords())

    @cached_property
    def fourier_mat(self) -> np.ndarray:
        """Matrix of F: coords(A) -> coords(Ahat), beta(a, F(b)) = tau(ab)."""
        return self.to_dual_mat @ self.base.gram_bilinear

    @cached_property
    def fourier_inv(self) -> np.ndarray:
        return np.linalg.inv(self.fourier_mat)

    def fourier(self, x: AlgebraElement) -> AlgebraElement:
        return self.hopf.algebra.from_coords(self.fourier_mat @ x.coords())

    def inverse_fourier(self, xhat: AlgebraElement) -> AlgebraElement:
        return self.base.algebra.from_coords(self.fourier_inv @ xhat.coords())

    def convolve(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        """a <> b = F^{-1}(F(a) F(b))."""
        if a.algebra != self.base.algebra or b.algebra != self.base.algebra:
            raise ba.ShapeMismatch("convolution arguments must live in the base algebra")
        return self.inverse_fourier(self.fourier(a) * self.fourier(b))

    def dual_convolve(self, ahat: AlgebraElement, bhat: AlgebraElement) -> AlgebraElement:
        """Convolution of the dual: multiplication of A transported by F."""
        return self.fourier(self.inverse_fourier(ahat) * self.inverse_fourier(bhat))


def build_dual(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL,
               seed: int = 0x0D0A1) -> DualHopfAlgebra:
    """Construct the dual quantum group of h and certify its axioms."""
    n = h.algebra.dim
    perm = h.perm2

    # abstract convolution algebra on coefficient rows
    def conv(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.kron(u, v)[perm] @ h.coproduct

    left = np.empty((n, n, n), complex)
    eye = np.eye(n)
    for a in range(n):
        for b in range(n):
            left[a][:, b] = conv(eye[a], eye[b])

    # star: f*(x) = conj(f(kappa(x)*))
    kstar_cols = np.empty((n, n), complex)
    for j in range(n):
        kj = h.kappa(h.algebra.basis_element(j))
        kstar_cols[:, j] = kj.adjoint().coords()
    star = np.conj(kstar_cols.T)  # rows transform with conj(C^T)

    unit_row = h.counit.copy()
    abstract = AbstractStarAlgebra(left, star, unit_row)
    wd = wedderburn(abstract, seed=seed)
    phi, phi_inv = wd.iso, wd.iso_inv
    dual_alg = wd.algebra

    # dual coproduct: transpose of multiplication, transported block by block
    dual_perm = tensor_perm(dual_alg, dual_alg)
    phi2 = tensor_map(phi, phi, np.arange(n * n), dual_perm)
    iperm = ba.inverse_perm(perm)
    dual_coproduct = np.empty((n * n, n), complex)
    for j in range(n):
        row2 = (phi_inv[:, j] @ h.mult_mat)  # functional on A(x)A
        gamma = row2[iperm]                  # kron coefficients of f(e_a e_b)
        dual_coproduct[:, j] = phi2 @ gamma
    dual_counit = h.algebra.unit().coords() @ phi_inv
    dual_antipode = phi @ h.antipode.T @ phi_inv
    dual_haar = compute_haar(dual_alg, dual_coproduct, tol=tol)
    dual_h = HopfAlgebra(dual_alg, dual_coproduct, dual_counit, dual_antipode,
                         dual_haar, name=f"dual({h.name})",
                         meta={"kind": "dual", "base": h.name})
    return DualHopfAlgebra(h, dual_h, phi, phi_inv)


def dual_axiom_report(d: DualHopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> AxiomReport:
    return verify_axioms(d.hopf, tol)


# ---------------------------------------------------------------------------
# Jordan decomposition and pullbacks of faithful functionals
# ---------------------------------------------------------------------------

def jordan_decompose(f: Functional, tol: ToleranceConfig = DEFAULT_TOL):
    """Split a faithful self-adjoint functional as f1 - f2 with f1, f2
    positive, orthogonal, faithful on complementary corners.

    Returns (f1, f2, p) where p = (1 + sym)/2 for the polar symmetry of the
    density; f1 = f(p .), f2 = -f((1-p) .).
    """
    v = f.density
    if not v.is_selfadjoint(tol.eq_tol):
        raise NotSelfAdjoint("density must be self-adjoint")
    if not v.is_invertible(tol.inv_tol):
        raise NotInvertible("density must be invertible")
    _, sym = polar_symmetry(v, tol)
    one = v.algebra.unit()
    p = 0.5 * (one + sym)
    f1 = Functional(f.hopf, v * p)
    f2 = Functional(f.hopf, -(v * (one - p)))
    return f1, f2, p


def pullback(hom_matrix: np.ndarray, f: Functional, source: HopfAlgebra,
             tol: ToleranceConfig = DEFAULT_TOL) -> Functional:
    """f o hom for an injective unital *-homomorphism hom: source -> target.

    hom_matrix maps coords(source) to coords(target algebra of f).  The result
    is verified self-adjoint and faithful (density invertible).
    """
    target = f.hopf
    ns = source.algebra.dim
    hom_matrix = np.asarray(hom_matrix, complex)
    if hom_matrix.shape[1] != ns:
        raise ba.ShapeMismatch("hom matrix has wrong source dimension")
    sv = np.linalg.svd(hom_matrix, compute_uv=False)
    if sv[-1] <= tol.inv_tol * max(1.0, sv[0]):
        raise NotInjective("homomorphism has a kernel")
    # unital *-homomorphism checks
    sb = [source.algebra.basis_element(k) for k in range(ns)]
    tgt = target.algebra
    img = [tgt.from_coords(hom_matrix @ b.coords()) for b in sb]
    if np.linalg.norm(hom_matrix @ source.algebra.unit().coords()
                      - tgt.unit().coords()) > tol.eq_tol * 10:
        raise NotStarHom("homomorphism is not unital")
    for i in range(ns):
        if (tgt.from_coords(hom_matrix @ sb[i].adjoint().coords())
                - img[i].adjoint()).norm() > tol.eq_tol * 10:
            raise NotStarHom("homomorphism does not preserve the involution")
        for j in range(ns):
            got = tgt.from_coords(hom_matrix @ (sb[i] * sb[j]).coords())
            if (got - img[i] * img[j]).norm() > tol.eq_tol * 100:
                raise NotStarHom("homomorphism is not multiplicative")
    if not f.is_selfadjoint(tol.eq_tol):
        raise NotSelfAdjoint("functional must be self-adjoint")
    row = f.row @ hom_matrix
    result = Functional.from_row(source, row)
    if not result.is_faithful(tol.inv_tol):
        raise NotFaithful("pullback density is singular")
    return result


def fourier_of_counit_support(h: HopfAlgebra, d: DualHopfAlgebra,
                              tol: ToleranceConfig = DEFAULT_TOL):
    """F(j) for the counit support j; returns (scalar, residual to scalar*1).

    The scalar is reported, never normalised away.
    """
    from .hopf import counit_support
    j = counit_support(h, tol).element
    fj = d.fourier(j)
    one = d.hopf.algebra.unit()
    scalar = complex(np.vdot(one.coords(), fj.coords()) / np.vdot(one.coords(), one.coords()))
    residual = (fj - scalar * one).norm()
    return scalar, residual
