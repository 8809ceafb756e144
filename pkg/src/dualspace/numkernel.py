"""Dense real/complex matrix primitives the rest of the library builds on.

All data lives in plain numpy arrays.  Real matrices are float64 and
complex ones complex128; the dtype doubles as the field tag, and binary
operations follow numpy promotion (real operands are upcast to complex,
never the other way around).  Every function here is pure: arguments are
never mutated, so values are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericalError

# Structural checks (orthogonality, forced zero blocks) default to 1e-10;
# reconstruction-grade identities to 1e-11 .. 1e-12.  Double precision
# leaves comfortable headroom at the n + m <= 64 sizes targeted here.
ORTHO_TOL = 1e-10
RECON_TOL = 1e-11
RANK_TOL = 1e-12


def as_matrix(a, dtype=None) -> np.ndarray:
    """Validate and return ``a`` as a finite 2-d float64/complex128 array."""
    out = np.asarray(a)
    if out.dtype.kind in "iub":
        out = out.astype(np.float64)
    elif out.dtype.kind == "f":
        out = out.astype(np.float64, copy=False)
    elif out.dtype.kind == "c":
        out = out.astype(np.complex128, copy=False)
    else:
        raise DomainError(f"unsupported entry type {out.dtype}")
    if dtype is not None:
        out = out.astype(dtype, copy=False)
    if out.ndim != 2:
        raise DomainError(f"expected a matrix, got array of ndim {out.ndim}")
    if not np.all(np.isfinite(out)):
        raise DomainError("matrix has non-finite entries")
    return out


def is_real(a: np.ndarray) -> bool:
    return np.asarray(a).dtype.kind != "c"


def expm(x) -> np.ndarray:
    """Matrix exponential of a square matrix.

    Backed by scipy's scaling-and-squaring Pade implementation, which meets
    the accuracy budget (relative error well below 1e-12 in spectral norm)
    for the moderate-norm, mostly normal matrices used throughout this
    library.
    """
    x = as_matrix(x)
    if x.shape[0] != x.shape[1]:
        raise DomainError(f"expm needs a square matrix, got {x.shape}")
    return scipy.linalg.expm(x)


def svd(y):
    """Full singular value decomposition ``y = u @ rect_diag(s) @ v.conj().T``.

    Returns
    -------
    (u, s, v)
        ``u`` is rows x rows, ``v`` is cols x cols, both unitary; ``s`` holds
        the singular values in descending order.
    """
    y = as_matrix(y)
    u, s, vh = np.linalg.svd(y, full_matrices=True)
    return u, s, vh.conj().T


def rect_diag(s, rows: int, cols: int, dtype=np.float64) -> np.ndarray:
    """Embed the vector ``s`` as the leading diagonal of a rows x cols matrix."""
    out = np.zeros((rows, cols), dtype=dtype)
    k = min(len(s), rows, cols)
    out[np.arange(k), np.arange(k)] = s[:k]
    return out


@dataclass(frozen=True)
class BlockShape:
    """Block partition of a square matrix with forced-zero blocks.

    ``zero_pattern`` lists (block row, block column) pairs that must vanish;
    for the parabolic shapes used here it is exactly the strictly lower
    block triangle, so conforming matrices are block upper-triangular.
    """

    row_blocks: tuple
    col_blocks: tuple
    zero_pattern: tuple

    def __post_init__(self):
        object.__setattr__(self, "row_blocks", tuple(int(b) for b in self.row_blocks))
        object.__setattr__(self, "col_blocks", tuple(int(b) for b in self.col_blocks))
        object.__setattr__(self, "zero_pattern", tuple((int(i), int(j)) for i, j in self.zero_pattern))
        if min(self.row_blocks, default=0) <= 0 or min(self.col_blocks, default=0) <= 0:
            raise DomainError("block sizes must be positive")
        for i, j in self.zero_pattern:
            if i <= j:
                raise DomainError("zero pattern must be strictly lower block triangular")

    @classmethod
    def parabolic(cls, sizes) -> "BlockShape":
        """Block upper-triangular shape with the given diagonal block sizes."""
        sizes = tuple(int(b) for b in sizes)
        zeros = tuple((i, j) for i in range(len(sizes)) for j in range(i))
        return cls(sizes, sizes, zeros)

    @property
    def dim(self) -> int:
        return sum(self.row_blocks)

    def check_dim(self, k: int):
        if sum(self.row_blocks) != k or sum(self.col_blocks) != k:
            raise DomainError(f"block sizes {self.row_blocks} do not sum to matrix dimension {k}")

    def _slices(self, blocks):
        edges = np.cumsum((0,) + blocks)
        return [slice(edges[i], edges[i + 1]) for i in range(len(blocks))]

    def max_forced_entry(self, a: np.ndarray) -> float:
        """Largest |entry| inside the forced-zero blocks of ``a``."""
        a = np.asarray(a)
        rows = self._slices(self.row_blocks)
        cols = self._slices(self.col_blocks)
        worst = 0.0
        for i, j in self.zero_pattern:
            block = a[rows[i], cols[j]]
            if block.size:
                worst = max(worst, float(np.max(np.abs(block))))
        return worst


def block_qr(a, shape: BlockShape | None = None):
    """Factor an invertible matrix as ``q = a @ rinv`` with ``q`` in the
    compact group and ``rinv`` inverse-to an upper triangular matrix.

    Modified Gram-Schmidt over the columns, left to right, with one
    re-orthogonalization pass.  The triangular factor has a positive real
    diagonal, which pins the result uniquely; since it is genuinely upper
    triangular it conforms to every parabolic ``shape`` (the shape argument
    is validated against the matrix dimension).

    Returns
    -------
    (q, rinv)
        ``q`` orthogonal/unitary, ``rinv`` upper triangular with
        ``a @ rinv == q`` and ``inv(rinv)`` respecting ``shape``.

    Raises
    ------
    NumericalError
        If a Gram-Schmidt step drops below 1e-12 of the original column
        scale, i.e. the matrix is numerically singular.
    """
    a = as_matrix(a)
    k = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise DomainError(f"block_qr needs a square matrix, got {a.shape}")
    if shape is not None:
        shape.check_dim(k)

    q = a.copy()
    r = np.zeros((k, k), dtype=q.dtype)
    col_scale = np.linalg.norm(a, axis=0)
    for j in range(k):
        for _ in range(2):  # second pass re-orthogonalizes
            for i in range(j):
                c = np.vdot(q[:, i], q[:, j])
                r[i, j] += c
                q[:, j] = q[:, j] - c * q[:, i]
        nrm = np.linalg.norm(q[:, j])
        if nrm <= 1e-12 * max(col_scale[j], 1e-300):
            raise NumericalError(f"Gram-Schmidt breakdown at column {j}: input is singular")
        r[j, j] = nrm
        q[:, j] = q[:, j] / nrm

    rinv = scipy.linalg.solve_triangular(r, np.eye(k, dtype=r.dtype))
    return q, rinv


def is_positive_definite(s, tol: float = ORTHO_TOL) -> bool:
    """True iff the Hermitian matrix ``s`` has smallest eigenvalue > tol."""
    s = as_matrix(s)
    if s.shape[0] != s.shape[1]:
        raise DomainError(f"expected a square matrix, got {s.shape}")
    scale = max(1.0, float(np.max(np.abs(s))))
    if np.max(np.abs(s - s.conj().T)) > tol * scale:
        raise DomainError("matrix is not Hermitian within tolerance")
    sym = 0.5 * (s + s.conj().T)
    return bool(np.linalg.eigvalsh(sym)[0] > tol)


def orthonormal_basis(l) -> np.ndarray:
    """Orthonormal basis of the column span of a full-column-rank matrix."""
    l = as_matrix(l)
    sv = np.linalg.svd(l, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= 1e-10 * sv[0]:
        raise DomainError("rank-deficient column span")
    q, _ = np.linalg.qr(l)
    return q


def projector(l) -> np.ndarray:
    """Orthogonal projector onto the column span of ``l``."""
    q = orthonormal_basis(l)
    return q @ q.conj().T


def projector_distance(l1, l2) -> float:
    """Frobenius distance between the orthogonal projectors onto two spans.

    Zero exactly when the two (full-column-rank) matrices have the same
    column span; invariant under right multiplication by invertible
    matrices.  This is the canonical basis-free way to compare subspace
    representatives.
    """
    p1 = projector(l1)
    p2 = projector(l2)
    if p1.shape != p2.shape:
        raise DomainError(f"ambient dimensions differ: {p1.shape} vs {p2.shape}")
    return float(np.linalg.norm(p1 - p2))
