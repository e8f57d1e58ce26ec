"""Block-diagonal complex matrix algebras.

A finite-dimensional C*-algebra is stored as a direct sum of full matrix
blocks; elements are tuples of dense complex matrices.  Everything downstream
(Hopf structure, duality, automorphism classification) works in the
"matrix-unit coordinates" defined here: an element is flattened block by
block, row-major, into a vector of length sum(n_i**2), and linear maps
between algebras are plain matrices acting on those coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotInvertible, NotSelfAdjoint, ShapeMismatch


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds used everywhere.

    eq_tol: relative Frobenius tolerance for equality of elements/maps.
    inv_tol: smallest-singular-value threshold for invertibility.
    psd_tol: eigenvalue floor below which positivity is rejected.
    """

    eq_tol: float = 1e-9
    inv_tol: float = 1e-8
    psd_tol: float = 1e-9

    def __post_init__(self):
        if min(self.eq_tol, self.inv_tol, self.psd_tol) <= 0:
            raise ValueError("tolerances must be strictly positive")
        if self.eq_tol >= 1:
            raise ValueError("eq_tol must be < 1")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class BlockAlgebra:
    """Direct sum of matrix algebras M_{n_1} + ... + M_{n_k}."""

    block_dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.block_dims) == 0 or any(n <= 0 for n in self.block_dims):
            raise ValueError("block_dims must be a nonempty tuple of positive ints")
        object.__setattr__(self, "block_dims", tuple(int(n) for n in self.block_dims))

    @property
    def dim(self) -> int:
        """Complex dimension sum(n_i**2)."""
        return sum(n * n for n in self.block_dims)

    @property
    def nblocks(self) -> int:
        return len(self.block_dims)

    @property
    def offsets(self) -> tuple[int, ...]:
        off, acc = [], 0
        for n in self.block_dims:
            off.append(acc)
            acc += n * n
        return tuple(off)

    @property
    def basis_labels(self) -> list[tuple[int, int, int]]:
        """(block, row, col) for every matrix-unit basis vector, in coordinate order."""
        out = []
        for b, n in enumerate(self.block_dims):
            for r in range(n):
                for s in range(n):
                    out.append((b, r, s))
        return out

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.zeros((n, n), complex) for n in self.block_dims])

    def unit(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.eye(n, dtype=complex) for n in self.block_dims])

    def element(self, blocks) -> "AlgebraElement":
        return AlgebraElement(self, blocks)

    def basis_element(self, k: int) -> "AlgebraElement":
        v = np.zeros(self.dim, complex)
        v[k] = 1.0
        return self.from_coords(v)

    def from_coords(self, v: np.ndarray) -> "AlgebraElement":
        v = np.asarray(v, dtype=complex).reshape(-1)
        if v.shape[0] != self.dim:
            raise ShapeMismatch(f"expected {self.dim} coordinates, got {v.shape[0]}")
        blocks, pos = [], 0
        for n in self.block_dims:
            blocks.append(v[pos:pos + n * n].reshape(n, n))
            pos += n * n
        return AlgebraElement(self, blocks)

    def block_unit(self, b: int) -> "AlgebraElement":
        """Identity of a single block: the b-th minimal central projection."""
        blocks = [np.eye(n, dtype=complex) if i == b else np.zeros((n, n), complex)
                  for i, n in enumerate(self.block_dims)]
        return AlgebraElement(self, blocks)

    def central_projections(self) -> list["AlgebraElement"]:
        return [self.block_unit(b) for b in range(self.nblocks)]


@lru_cache(maxsize=None)
def left_mult_tensor(a: BlockAlgebra) -> np.ndarray:
    """T[a] = matrix of left multiplication by basis e_a on coordinates."""
    n = a.dim
    t = np.zeros((n, n, n), complex)
    for i in range(n):
        ei = a.basis_element(i)
        for j in range(n):
            t[i][:, j] = (ei * a.basis_element(j)).coords()
    return t


@lru_cache(maxsize=None)
def right_mult_tensor(a: BlockAlgebra) -> np.ndarray:
    """T[a] = matrix of right multiplication by basis e_a on coordinates."""
    n = a.dim
    t = np.zeros((n, n, n), complex)
    for i in range(n):
        ei = a.basis_element(i)
        for j in range(n):
            t[i][:, j] = (a.basis_element(j) * ei).coords()
    return t


class AlgebraElement:
    """Immutable element of a BlockAlgebra."""

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: BlockAlgebra, blocks):
        if len(blocks) != algebra.nblocks:
            raise ShapeMismatch("wrong number of blocks")
        mats = []
        for n, blk in zip(algebra.block_dims, blocks):
            m = np.array(blk, dtype=complex)
            if m.shape != (n, n):
                raise ShapeMismatch(f"block shape {m.shape} != ({n},{n})")
            m.setflags(write=False)
            mats.append(m)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "blocks", tuple(mats))

    def __setattr__(self, *a):
        raise AttributeError("AlgebraElement is immutable")

    # -- arithmetic ---------------------------------------------------------
    def _check_same(self, other):
        if self.algebra != other.algebra:
            raise ShapeMismatch("elements live in different algebras")

    def __add__(self, other):
        self._check_same(other)
        return AlgebraElement(self.algebra, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check_same(other)
        return AlgebraElement(self.algebra, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgebraElement(self.algebra, [-a for a in self.blocks])

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check_same(other)
            return AlgebraElement(self.algebra, [a @ b for a, b in zip(self.blocks, other.blocks)])
        return AlgebraElement(self.algebra, [complex(other) * a for a in self.blocks])

    def __rmul__(self, scalar):
        return AlgebraElement(self.algebra, [complex(scalar) * a for a in self.blocks])

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, [a.conj().T for a in self.blocks])

    @property
    def h(self) -> "AlgebraElement":
        return self.adjoint()

    # -- coordinates and norms ----------------------------------------------
    def coords(self) -> np.ndarray:
        return np.concatenate([b.reshape(-1) for b in self.blocks])

    def norm(self) -> float:
        """Global Frobenius norm (used for residuals)."""
        return math.sqrt(sum(float(np.sum(np.abs(b) ** 2)) for b in self.blocks))

    def opnorm(self) -> float:
        """C*-norm: max over blocks of the spectral norm."""
        return max(float(np.linalg.norm(b, 2)) for b in self.blocks)

    def smallest_sv(self) -> float:
        return min(float(np.linalg.svd(b, compute_uv=False)[-1]) for b in self.blocks)

    def is_selfadjoint(self, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        return (self - self.adjoint()).norm() <= tol * max(1.0, self.norm())

    def is_invertible(self, inv_tol: float = DEFAULT_TOL.inv_tol) -> bool:
        return self.smallest_sv() > inv_tol

    def allclose(self, other, tol: float = DEFAULT_TOL.eq_tol) -> bool:
        self._check_same(other)
        return (self - other).norm() <= tol * max(1.0, self.norm(), other.norm())

    def __repr__(self):
        return f"AlgebraElement(dims={self.algebra.block_dims})"


def rel_residual(diff_norm: float, *scales: float) -> float:
    return diff_norm / max(1.0, *scales) if scales else diff_norm


# ---------------------------------------------------------------------------
# spectral operations
# ---------------------------------------------------------------------------

def _require_selfadjoint(x: AlgebraElement, tol: float):
    if not x.is_selfadjoint(tol):
        raise NotSelfAdjoint(f"residual {(x - x.h).norm():.3e}")


def spectrum(x: AlgebraElement, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Sorted eigenvalue multiset of a self-adjoint element, across all blocks."""
    _require_selfadjoint(x, tol.eq_tol)
    vals = np.concatenate([np.linalg.eigvalsh((b + b.conj().T) / 2) for b in x.blocks])
    return np.sort(vals)


def is_positive(x: AlgebraElement, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    return bool(spectrum(x, tol)[0] >= -tol.psd_tol)


def invert(x: AlgebraElement, tol: ToleranceConfig = DEFAULT_TOL) -> AlgebraElement:
    if x.smallest_sv() <= tol.inv_tol:
        raise NotInvertible(f"smallest singular value {x.smallest_sv():.3e}")
    return AlgebraElement(x.algebra, [np.linalg.inv(b) for b in x.blocks])


def polar_symmetry(v: AlgebraElement, tol: ToleranceConfig = DEFAULT_TOL):
    """Split a self-adjoint invertible v as |v| * U with U a symmetry.

    Returns (absval, sym) with absval positive, sym self-adjoint unitary,
    v = absval*sym and [absval, sym] = 0.
    """
    _require_selfadjoint(v, tol.eq_tol)
    if v.smallest_sv() <= tol.inv_tol:
        raise NotInvertible("polar symmetry requires an invertible element")
    abs_blocks, sym_blocks = [], []
    for b in v.blocks:
        lam, q = np.linalg.eigh((b + b.conj().T) / 2)
        abs_blocks.append((q * np.abs(lam)) @ q.conj().T)
        sym_blocks.append((q * np.sign(lam)) @ q.conj().T)
    return AlgebraElement(v.algebra, abs_blocks), AlgebraElement(v.algebra, sym_blocks)


# ---------------------------------------------------------------------------
# tensor products
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def tensor_algebra(a: BlockAlgebra, b: BlockAlgebra) -> BlockAlgebra:
    """A (x) B with blocks n_i*m_j ordered lexicographically in (i, j)."""
    return BlockAlgebra(tuple(n * m for n in a.block_dims for m in b.block_dims))


@lru_cache(maxsize=None)
def tensor_perm(a: BlockAlgebra, b: BlockAlgebra) -> np.ndarray:
    """Permutation P with coords_{A(x)B}(x(x)y) = kron(coords x, coords y)[P]."""
    ab = tensor_algebra(a, b)
    nb_ = b.dim
    perm = np.empty(ab.dim, dtype=np.intp)
    # index helpers
    a_idx = {(blk, r, s): i for i, (blk, r, s) in enumerate(a.basis_labels)}
    b_idx = {(blk, r, s): i for i, (blk, r, s) in enumerate(b.basis_labels)}
    t = 0
    for i, n in enumerate(a.block_dims):
        for j, m in enumerate(b.block_dims):
            for r in range(n):
                for tt in range(m):
                    for s in range(n):
                        for u in range(m):
                            perm[t] = a_idx[(i, r, s)] * nb_ + b_idx[(j, tt, u)]
                            t += 1
    return perm


def inverse_perm(p: np.ndarray) -> np.ndarray:
    inv = np.empty_like(p)
    inv[p] = np.arange(len(p))
    return inv


def tensor_element(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Kronecker product, block pair by block pair."""
    ab = tensor_algebra(x.algebra, y.algebra)
    blocks = [np.kron(bx, by) for bx in x.blocks for by in y.blocks]
    return AlgebraElement(ab, blocks)


def tensor_map(m1: np.ndarray, m2: np.ndarray, p_in: np.ndarray, p_out: np.ndarray) -> np.ndarray:
    """Matrix of L1 (x) L2 on tensor coordinates.

    m1: coords(A)->coords(B), m2: coords(C)->coords(D); p_in = tensor_perm(A, C),
    p_out = tensor_perm(B, D).
    """
    return np.kron(m1, m2)[np.ix_(p_out, p_in)]


def tensor_functional_row(r1: np.ndarray, r2: np.ndarray, p_in: np.ndarray) -> np.ndarray:
    """Row vector of f(x)g on coords of the tensor algebra."""
    return np.kron(r1, r2)[p_in]


@lru_cache(maxsize=None)
def flip_perm(a: BlockAlgebra) -> np.ndarray:
    """Permutation F on coords(A(x)A) with sigma(w) = w[F], sigma(x(x)y) = y(x)x."""
    aa = tensor_algebra(a, a)
    dims = a.block_dims
    off = {}
    t = 0
    for i, n in enumerate(dims):
        for j, m in enumerate(dims):
            off[(i, j)] = t
            t += (n * m) ** 2
    f = np.empty(aa.dim, dtype=np.intp)
    for i, n in enumerate(dims):
        for j, m in enumerate(dims):
            base = off[(i, j)]
            base_sw = off[(j, i)]
            nm = n * m
            for r in range(n):
                for tt in range(m):
                    for s in range(n):
                        for u in range(m):
                            dst = base + (r * m + tt) * nm + (s * m + u)
                            src = base_sw + (tt * n + r) * nm + (u * n + s)
                            f[dst] = src
    return f


def flip_matrix(a: BlockAlgebra) -> np.ndarray:
    f = flip_perm(a)
    aa_dim = len(f)
    m = np.zeros((aa_dim, aa_dim))
    m[np.arange(aa_dim), f] = 1.0
    return m


# ---------------------------------------------------------------------------
# centre
# ---------------------------------------------------------------------------

def centre_basis(a: BlockAlgebra, tol: float = 1e-10) -> list[AlgebraElement]:
    """Orthonormal basis of {z : [z, e] = 0 for all basis matrix units e}.

    For a block algebra this is spanned by the block identities; computed
    honestly from the commutator system so it doubles as a test oracle.
    """
    n = a.dim
    rows = []
    for k in range(n):
        e = a.basis_element(k)
        cols = np.empty((n, n), complex)
        for j in range(n):
            z = a.basis_element(j)
            cols[:, j] = (z * e - e * z).coords()
        rows.append(cols)
    stack = np.vstack(rows)
    _, sv, vh = np.linalg.svd(stack, full_matrices=False)
    null = vh.conj().T[:, np.sum(sv > tol * max(1.0, sv[0])):] if len(sv) else vh.conj().T
    return [a.from_coords(null[:, i]) for i in range(null.shape[1])]


# ---------------------------------------------------------------------------
# seeded random elements (shared source for all property tests)
# ---------------------------------------------------------------------------

def random_element(a: BlockAlgebra, rng: np.random.Generator) -> AlgebraElement:
    blocks = [(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
              for n in a.block_dims]
    return AlgebraElement(a, blocks)


def random_selfadjoint(a: BlockAlgebra, rng: np.random.Generator) -> AlgebraElement:
    x = random_element(a, rng)
    return 0.5 * (x + x.adjoint())


def random_selfadjoint_invertible(a: BlockAlgebra, rng: np.random.Generator,
                                  min_sv: float = 1e-3) -> AlgebraElement:
    for _ in range(64):
        x = random_selfadjoint(a, rng)
        if x.smallest_sv() > min_sv:
            return x
    raise NotInvertible("failed to sample a well-conditioned self-adjoint element")


def random_positive_invertible(a: BlockAlgebra, rng: np.random.Generator,
                               floor: float = 0.1) -> AlgebraElement:
    x = random_element(a, rng)
    return x * x.adjoint() + floor * a.unit()


def random_unitary(a: BlockAlgebra, rng: np.random.Generator) -> AlgebraElement:
    """Haar-random unitary, independently per block."""
    blocks = []
    for n in a.block_dims:
        z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
        q, r = np.linalg.qr(z)
        q = q * (np.diag(r) / np.abs(np.diag(r)))
        blocks.append(q)
    return AlgebraElement(a, blocks)


def random_central_unitary(a: BlockAlgebra, rng: np.random.Generator) -> AlgebraElement:
    phases = np.exp(2j * np.pi * rng.random(a.nblocks))
    blocks = [ph * np.eye(n, dtype=complex) for ph, n in zip(phases, a.block_dims)]
    return AlgebraElement(a, blocks)


# ---------------------------------------------------------------------------
# real-linear solves
# ---------------------------------------------------------------------------

def realify_complex_linear(m: np.ndarray) -> np.ndarray:
    """Realified matrix of w -> M w on stacked [Re w; Im w] coordinates."""
    return np.block([[m.real, -m.imag], [m.imag, m.real]])


def realify_antilinear(b: np.ndarray) -> np.ndarray:
    """Realified matrix of w -> B conj(w)."""
    return np.block([[b.real, b.imag], [b.imag, -b.real]])


def real_matrix_of_map(fun, n_in: int) -> np.ndarray:
    """Realified matrix of a real-linear map C^n -> C^m given as a callable.

    Real coordinates are stacked [Re v; Im v] on both sides.
    """
    cols = []
    for k in range(n_in):
        v = np.zeros(n_in, complex)
        v[k] = 1.0
        w = fun(v)
        cols.append(np.concatenate([w.real, w.imag]))
    for k in range(n_in):
        v = np.zeros(n_in, complex)
        v[k] = 1j
        w = fun(v)
        cols.append(np.concatenate([w.real, w.imag]))
    return np.array(cols).T


def real_null_space(mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the real null space."""
    if mat.shape[0] == 0:
        return np.eye(mat.shape[1])
    if mat.shape[0] < mat.shape[1]:
        mat = np.vstack([mat, np.zeros((mat.shape[1] - mat.shape[0], mat.shape[1]))])
    u, sv, vh = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(sv > tol * max(1.0, sv[0] if len(sv) else 1.0)))
    return vh.T[:, rank:]


def real_vec_to_coords(v: np.ndarray) -> np.ndarray:
    n = len(v) // 2
    return v[:n] + 1j * v[n:]
