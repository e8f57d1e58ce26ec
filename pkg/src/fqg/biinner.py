"""Bi-inner Hopf *-automorphisms.

Two independent routes decide whether a map is bi-inner:

* definitional route: the map is a Hopf *-automorphism, it is inner, and its
  induced dual action is inner on the dual algebra;
* identity-component route: the map is conjugation by a unitary from the
  identity component of the group of kappa-symmetric unitaries commuting
  with the cocentre (computed as the exponential image of its Lie algebra,
  with membership decided by repeated principal square roots).

The consistency harness samples unitaries, runs both routes and reports the
confusion matrix, which must be diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import blockalg as ba
from .blockalg import AlgebraElement, BlockAlgebra, DEFAULT_TOL, ToleranceConfig
from .duality import DualHopfAlgebra
from .errors import NotInLieAlgebra, PreconditionFailed
from .hopf import HopfAlgebra, cocentre_basis
from .morphisms import (AlgebraMap, hopf_flags_fast, induced_dual_action,
                        inner_implementer)
from .multunitary import (MultiplicativeUnitary, commutation_test,
                          path_in_commutant, solve_commutant_partner)


@dataclass(eq=False)
class BiInnerGroupModel:
    """Lie-algebra model of the unitary group behind the bi-inner maps.

    lie_basis spans {X : X* = -X, kappa(X*) = X, [X, c] = 0 for cocentral c}
    over the reals; sign_patterns enumerates the finite part of the central
    kappa-symmetric unitary subgroup (one +-1 per antipode-fixed block).
    constant_stack is the realified matrix of the alpha-independent
    constraints (kappa-symmetry and cocentre commutators), reused by every
    membership query.
    """

    hopf: HopfAlgebra
    lie_basis: list[AlgebraElement]
    cocentre: list[AlgebraElement]
    kappa_block_map: list[int]
    sign_patterns: list[AlgebraElement]
    constant_stack: np.ndarray = None

    @property
    def dim(self) -> int:
        return len(self.lie_basis)

    def lie_matrix(self) -> np.ndarray:
        """Realified coordinates of the Lie basis, as columns."""
        if not self.lie_basis:
            return np.zeros((2 * self.hopf.algebra.dim, 0))
        return np.column_stack([np.concatenate([x.coords().real, x.coords().imag])
                                for x in self.lie_basis])

    def project_defect(self, x: AlgebraElement) -> float:
        """Distance of x from the real span of the Lie basis."""
        vec = np.concatenate([x.coords().real, x.coords().imag])
        basis = self.lie_matrix()
        if basis.shape[1] == 0:
            return float(np.linalg.norm(vec))
        coef, *_ = np.linalg.lstsq(basis, vec, rcond=None)
        return float(np.linalg.norm(basis @ coef - vec))

    def random_element(self, rng: np.random.Generator,
                       scale: float = 1.0) -> AlgebraElement:
        x = self.hopf.algebra.zero()
        for c, b in zip(rng.standard_normal(max(self.dim, 1)), self.lie_basis):
            x = x + float(c) * scale * b
        return x


def _commutator_stack(a: BlockAlgebra, elements: list[AlgebraElement]) -> np.ndarray:
    """Complex stack of w -> [w, c] over the given central-ish elements."""
    left = ba.left_mult_tensor(a)
    right = ba.right_mult_tensor(a)
    rows = []
    for c in elements:
        lc = np.tensordot(c.coords(), left, axes=(0, 0))
        rc = np.tensordot(c.coords(), right, axes=(0, 0))
        rows.append(rc - lc)   # w*c - c*w on coords(w)
    return np.vstack(rows) if rows else np.zeros((0, a.dim), complex)


def build_group_model(h: HopfAlgebra, tol: ToleranceConfig = DEFAULT_TOL) -> BiInnerGroupModel:
    a = h.algebra
    n = a.dim
    coc = cocentre_basis(h, tol)

    # kappa(w*) - w = K S conj(w) - w is real-linear; commutators are complex
    ks = h.antipode @ h.star_mat
    ktwist_real = ba.realify_antilinear(ks) - np.eye(2 * n)
    comm_real = ba.realify_complex_linear(_commutator_stack(a, coc))
    constant_stack = np.vstack([ktwist_real, comm_real])

    # the Lie algebra additionally requires skewness: w + w* = 0
    skew_real = ba.realify_antilinear(h.star_mat) + np.eye(2 * n)
    null = ba.real_null_space(np.vstack([skew_real, constant_stack]))
    lie = [a.from_coords(ba.real_vec_to_coords(null[:, i])) for i in range(null.shape[1])]

    # closure under the commutator bracket
    for i, x in enumerate(lie):
        for y in lie[i + 1:]:
            br = x * y - y * x
            defect = _project_defect_raw(br, null)
            if defect > 1e-8 * max(1.0, br.norm()):
                raise NotInLieAlgebra(f"bracket leaves the constraint space: {defect:.2e}")

    # antipode action on the minimal central projections
    kmap = []
    projections = a.central_projections()
    for b, p in enumerate(projections):
        img = h.kappa(p)
        hits = [c for c, q in enumerate(projections) if (img - q).norm() < 1e-8]
        kmap.append(hits[0] if hits else -1)

    fixed_blocks = [b for b, c in enumerate(kmap) if c == b]
    patterns = []
    for bits in range(1 << len(fixed_blocks)):
        signs = [1.0] * a.nblocks
        for i, b in enumerate(fixed_blocks):
            if bits >> i & 1:
                signs[b] = -1.0
        el = a.element([s * np.eye(d, dtype=complex)
                        for s, d in zip(signs, a.block_dims)])
        patterns.append(el)
    return BiInnerGroupModel(h, lie, coc, kmap, patterns, constant_stack)


def _project_defect_raw(x: AlgebraElement, null: np.ndarray) -> float:
    vec = np.concatenate([x.coords().real, x.coords().imag])
    if null.shape[1] == 0:
        return float(np.linalg.norm(vec))
    coef, *_ = np.linalg.lstsq(null, vec, rcond=None)
    return float(np.linalg.norm(null @ coef - vec))


def exp_element(x: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(x.algebra, [scipy.linalg.expm(b) for b in x.blocks])


def sample_identity_component(model: BiInnerGroupModel, x: AlgebraElement,
                              t: float, tol: ToleranceConfig = DEFAULT_TOL) -> AlgebraElement:
    """exp(t x) for x in the Lie algebra: a kappa-symmetric unitary commuting
    with the cocentre."""
    if model.project_defect(x) > 1e-7 * max(1.0, x.norm()):
        raise NotInLieAlgebra("element outside the computed Lie algebra")
    v = exp_element(t * x)
    h = model.hopf
    assert h.ksym_defect(v) < 1e-7 * max(1.0, v.norm())
    return v


# ---------------------------------------------------------------------------
# identity-component membership
# ---------------------------------------------------------------------------

def _principal_sqrt_unitary(u: AlgebraElement) -> AlgebraElement:
    blocks = []
    for b in u.blocks:
        vals, vecs = scipy.linalg.schur(b, output="complex")
        d = np.diag(vals)
        half = np.exp(0.5j * np.angle(d))
        blocks.append((vecs * half) @ vecs.conj().T)
    return AlgebraElement(u.algebra, blocks)


def _principal_log_skew(u: AlgebraElement) -> AlgebraElement:
    blocks = []
    for b in u.blocks:
        vals, vecs = scipy.linalg.schur(b, output="complex")
        d = np.diag(vals)
        blocks.append((vecs * (1j * np.angle(d))) @ vecs.conj().T)
    return AlgebraElement(u.algebra, blocks)


def _in_group(model: BiInnerGroupModel, u: AlgebraElement, tol: float) -> bool:
    h = model.hopf
    if h.ksym_defect(u) > tol:
        return False
    return all((u * c - c * u).norm() <= tol for c in model.cocentre)


def _sqrt_descent(model: BiInnerGroupModel, v: AlgebraElement,
                  tol: float = 1e-7) -> AlgebraElement | None:
    """Halve spectral angles until close to 1, staying inside the unitary
    group; returns the Lie-algebra logarithm or None."""
    cand = v
    one = v.algebra.unit()
    for _ in range(48):
        if (cand - one).opnorm() <= 0.8:
            x = _principal_log_skew(cand)
            if model.project_defect(x) <= 1e-7 * max(1.0, x.norm()):
                return x
            return None
        cand = _principal_sqrt_unitary(cand)
        if not _in_group(model, cand, tol * max(1.0, cand.norm())):
            return None
    return None


def in_identity_component(alpha: AlgebraMap, model: BiInnerGroupModel,
                          tol: ToleranceConfig = DEFAULT_TOL,
                          rng: np.random.Generator | None = None):
    """Decide alpha = Ad(v) for v in the identity component of the
    kappa-symmetric cocentre-commuting unitary group.

    Returns (verdict, info); info carries the witness v and its logarithm
    when the verdict is True.
    """
    rng = rng or np.random.default_rng(0x1D)
    h = model.hopf
    a = h.algebra
    n = a.dim

    # intertwiner condition alpha(e_a) w - w e_a = 0, stacked over the basis
    left = ba.left_mult_tensor(a)
    right = ba.right_mult_tensor(a)
    rows = np.empty((n * n, n), complex)
    for k in range(n):
        l_img = np.tensordot(alpha.matrix[:, k], left, axes=(0, 0))
        rows[k * n:(k + 1) * n, :] = l_img - right[k]
    stack = np.vstack([ba.realify_complex_linear(rows), model.constant_stack])
    null = ba.real_null_space(stack)
    if null.shape[1] == 0:
        return False, {"reason": "no kappa-symmetric intertwiner"}

    w_el = None
    best_sv = 0.0
    for _ in range(16):
        coef = rng.standard_normal(null.shape[1])
        cand = a.from_coords(ba.real_vec_to_coords(null @ coef))
        sv = cand.smallest_sv() / max(1.0, cand.norm())
        if sv > best_sv:
            best_sv, w_el = sv, cand
    if w_el is None or best_sv <= 1e-6:
        return False, {"reason": "no invertible kappa-symmetric intertwiner"}

    # unitarise: w*w is central, so the polar part is per-block scaling
    ww = w_el.adjoint() * w_el
    blocks = []
    for i, b in enumerate(w_el.blocks):
        mu = float(np.trace(ww.blocks[i]).real) / ww.blocks[i].shape[0]
        blocks.append(b / np.sqrt(mu))
    v = AlgebraElement(a, blocks)

    for attempt in range(4):
        for z in model.sign_patterns:
            cand = v * z
            if not _in_group(model, cand, 1e-7 * max(1.0, cand.norm())):
                continue
            x = _sqrt_descent(model, cand)
            if x is not None:
                return True, {"witness": cand, "log_steps": x}
        if model.dim == 0:
            break
        # dodge branch collisions by a small shift inside the component
        y = model.random_element(rng, scale=0.3)
        v = exp_element(y) * v
    return False, {"reason": "no path to the identity found"}


# ---------------------------------------------------------------------------
# the end-to-end classifier
# ---------------------------------------------------------------------------

@dataclass
class BiInnerVerdict:
    is_biinner: bool
    reason: str
    u: AlgebraElement | None = None
    uhat: AlgebraElement | None = None
    certificates: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"is_biinner": self.is_biinner, "reason": self.reason}
        certs = {}
        if "commutation" in self.certificates:
            certs["commutation"] = {k: float(v) for k, v in
                                    self.certificates["commutation"].items()}
        if "path_residuals" in self.certificates:
            certs["path_residuals"] = {str(r): float(v) for r, v in
                                       self.certificates["path_residuals"].items()}
        for key in ("partner_implements_dual", "exp_membership"):
            if key in self.certificates:
                val = self.certificates[key]
                certs[key] = float(val) if isinstance(val, float) else bool(val)
        out["certificates"] = certs
        return out


def _unitary_in_span(sols: list[AlgebraElement], rng: np.random.Generator,
                     tol: float = 1e-8):
    """A unitary element of a *-closed solution space, by polar projection."""
    if not sols:
        return None
    a = sols[0].algebra
    span = np.column_stack([s.coords() for s in sols])
    for _ in range(12):
        coef = rng.standard_normal(len(sols)) + 1j * rng.standard_normal(len(sols))
        w = a.from_coords(span @ coef)
        if not w.is_invertible(1e-6):
            continue
        u_bl = []
        for b in w.blocks:
            uu, _, vvh = np.linalg.svd(b)
            u_bl.append(uu @ vvh)
        u = AlgebraElement(a, u_bl)
        # the polar part must stay inside the solution space
        resid, *_ = np.linalg.lstsq(span, u.coords(), rcond=None)
        if np.linalg.norm(span @ resid - u.coords()) < tol * max(1.0, u.norm()):
            return u
    return None


def classify_biinner(alpha: AlgebraMap, h: HopfAlgebra, d: DualHopfAlgebra,
                     mu: MultiplicativeUnitary | None = None,
                     model: BiInnerGroupModel | None = None,
                     tol: ToleranceConfig = DEFAULT_TOL,
                     seed: int = 0xB11) -> BiInnerVerdict:
    """Definitional bi-inner classification with certificates.

    When a multiplicative unitary is supplied, the verdict carries the
    commutation certificate with the aligned dual partner and the path
    residuals at r in {0.25, 0.5, 0.75, 1}; when a group model is supplied
    it also carries the exponential-image membership check.
    """
    rng = np.random.default_rng(seed)
    if not hopf_flags_fast(alpha, h, tol):
        return BiInnerVerdict(False, "not a Hopf *-automorphism")
    u = inner_implementer(alpha, tol)
    if u is None:
        return BiInnerVerdict(False, "not inner on the algebra")
    alpha_hat = induced_dual_action(alpha, d, tol, check=False)
    uhat = inner_implementer(alpha_hat, tol)
    if uhat is None:
        return BiInnerVerdict(False, "dual action is not inner")
    certs: dict = {}
    if mu is not None:
        sols = solve_commutant_partner(u, mu, tol)
        partner = _unitary_in_span(sols, rng)
        if partner is None:
            return BiInnerVerdict(False, "no unitary commutant partner",
                                  u=u, uhat=uhat)
        report = commutation_test(partner, u, mu, tol)
        certs["commutation"] = report
        certs["partner_implements_dual"] = min(
            float(np.linalg.norm(AlgebraMap.ad(partner, tol).matrix - alpha_hat.matrix)),
            float(np.linalg.norm(AlgebraMap.ad(partner.adjoint(), tol).matrix
                                 - alpha_hat.matrix)))
        certs["path_residuals"] = {
            r: path_in_commutant(partner, u, mu, r, tol)[2]
            for r in (0.25, 0.5, 0.75, 1.0)}
        uhat = partner
    if model is not None:
        member, info = in_identity_component(alpha, model, tol, rng)
        certs["exp_membership"] = member
        if member:
            certs["exp_log"] = info.get("log_steps")
    return BiInnerVerdict(True, "bi-inner", u=u, uhat=uhat, certificates=certs)


# ---------------------------------------------------------------------------
# consistency harness
# ---------------------------------------------------------------------------

@dataclass
class ConsistencyReport:
    confusion: np.ndarray          # [def-route][component-route] counts
    samples: int
    lie_dim: int
    positives_are_identity: bool
    worst_commutation: float
    mismatches: list = field(default_factory=list)

    @property
    def diagonal(self) -> bool:
        return self.confusion[0, 1] == 0 and self.confusion[1, 0] == 0

    def to_dict(self) -> dict:
        return {"confusion": self.confusion.tolist(), "samples": self.samples,
                "lie_dim": self.lie_dim, "diagonal": bool(self.diagonal),
                "positives_are_identity": self.positives_are_identity,
                "worst_commutation": self.worst_commutation}


def brute_force_biinner_consistency(h: HopfAlgebra, d: DualHopfAlgebra,
                                    mu: MultiplicativeUnitary | None = None,
                                    model: BiInnerGroupModel | None = None,
                                    samples: int = 200, seed: int = 0,
                                    tol: ToleranceConfig = DEFAULT_TOL) -> ConsistencyReport:
    """Sample unitaries, classify by both routes, report the confusion matrix.

    The sample mix is Haar-random unitaries plus planted members of the
    component (central unitaries and exponentials of the Lie algebra) so both
    verdict classes are populated.
    """
    if h.algebra.dim > 12:
        raise PreconditionFailed("consistency harness is desk-scale: dim <= 12")
    model = model or build_group_model(h, tol)
    rng = np.random.default_rng(seed)
    a = h.algebra
    confusion = np.zeros((2, 2), dtype=int)
    mismatches = []
    positives_identity = True
    worst_comm = 0.0
    for k in range(samples):
        mode = k % 5
        if mode <= 2:
            u = ba.random_unitary(a, rng)
        elif mode == 3:
            u = ba.random_central_unitary(a, rng)
        else:
            if model.dim > 0:
                x = model.random_element(rng)
                u = exp_element((0.5 + rng.random()) * x)
            else:
                u = ba.random_central_unitary(a, rng)
        alpha = AlgebraMap.ad(u, tol)

        route_a = False
        if hopf_flags_fast(alpha, h, tol):
            alpha_hat = induced_dual_action(alpha, d, tol, check=False)
            route_a = inner_implementer(alpha_hat, tol) is not None
        route_b, _ = in_identity_component(alpha, model, tol, rng)
        confusion[int(route_a), int(route_b)] += 1
        if route_a != route_b:
            mismatches.append({"sample": k, "route_a": route_a, "route_b": route_b})
        if route_a:
            if not alpha.is_identity(1e-7):
                positives_identity = False
            if mu is not None:
                verdict = classify_biinner(alpha, h, d, mu, None, tol)
                if verdict.is_biinner and "commutation" in verdict.certificates:
                    worst_comm = max(worst_comm,
                                     verdict.certificates["commutation"]["residual"])
    return ConsistencyReport(confusion, samples, model.dim,
                             positives_identity, worst_comm, mismatches)
