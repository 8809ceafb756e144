"""Catalog of the classical symmetric-space families in scope.

Each space is described by a :class:`SpaceDescriptor` holding the base
point, the indefinite form, the commuting flat generators, the unit
lattice, and the parabolic block shape.  Conventions:

* the ambient space is R^(n+m) or C^(n+m) with n <= m, the quadratic form
  has signature (n, m), and the base point is the span of the first n
  coordinate axes;
* the compact-side flat generator ``R_i`` has +1 at entry (i, n+i) and -1
  at (n+i, i); its noncompact partner has +1 at both, so that the flat
  geodesics are plane rotations respectively boosts;
* the inner product is ``metric_scale * Re tr(X^H Y)``, which evaluates to
  -1/2 tr(XY) on the compact side at the default scale 1/2 and makes the
  ``R_i`` orthonormal.  The circle/sphere family uses scale 2, so its
  closed geodesics have length 4*pi; this pins where the quarter and half
  regions land for the rank-1 stereographic comparisons.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import numkernel as nk
from .errors import DomainError
from .lattice import LatticeBasis


class Family(enum.Enum):
    """Symmetric-space families in the catalog."""

    REAL_GRASSMANNIAN = "gr-real"
    COMPLEX_GRASSMANNIAN = "gr-complex"
    ORIENTED_TWO_PLANE = "oriented-2plane"
    CIRCLE_SPHERE = "sphere"


class Side(enum.Enum):
    COMPACT = "compact"
    NONCOMPACT = "noncompact"


def _basis_matrix(dim, i, j, lower, dtype):
    out = np.zeros((dim, dim), dtype=dtype)
    out[i, j] = 1.0
    out[j, i] = lower
    return out


@dataclass(frozen=True, eq=False)
class SpaceDescriptor:
    """One classical symmetric-space family instance.

    Immutable after construction; build through :func:`make_space`.
    """

    family: Family
    n: int
    m: int
    rank: int
    field: str                      # "real" or "complex"
    metric_scale: float             # c in <X, Y> = c * Re tr(X^H Y)
    oriented: bool                  # determinant-one groups, oriented subspaces
    form_j: np.ndarray              # diag(+1 x n, -1 x m)
    lattice_coeff: np.ndarray       # columns: lattice generators in R_i coordinates
    lattice: LatticeBasis
    parabolic: nk.BlockShape

    @property
    def dim(self) -> int:
        return self.n + self.m

    @property
    def dtype(self):
        return np.complex128 if self.field == "complex" else np.float64

    def identity(self) -> np.ndarray:
        return np.eye(self.dim, dtype=self.dtype)

    def base_point(self) -> "SubspacePoint":
        rep = np.zeros((self.dim, self.n), dtype=self.dtype)
        rep[: self.n, : self.n] = np.eye(self.n)
        return SubspacePoint(self, rep, orientation=1 if self.oriented else None)

    def cartan_basis(self, side: Side) -> list:
        """The rank commuting generators R_i (compact) or their boosts."""
        lower = -1.0 if side is Side.COMPACT else 1.0
        return [
            _basis_matrix(self.dim, i, self.n + i, lower, self.dtype)
            for i in range(self.rank)
        ]

    def label(self) -> str:
        return f"{self.family.value}({self.n},{self.m})"


def inner(space: SpaceDescriptor, x, y) -> float:
    """Invariant inner product on the tangent space."""
    x = np.asarray(x)
    y = np.asarray(y)
    return space.metric_scale * float(np.real(np.trace(x.conj().T @ y)))


def norm(space: SpaceDescriptor, x) -> float:
    return float(np.sqrt(max(inner(space, x, x), 0.0)))


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Element of the tangent space at the base point, as a block matrix.

    The matrix has vanishing diagonal blocks and off-diagonal blocks tied
    by ``lower = -upper^H`` (compact side) or ``lower = +upper^H``
    (noncompact side).
    """

    space: SpaceDescriptor
    side: Side
    x: np.ndarray

    def __post_init__(self):
        x = nk.as_matrix(self.x, dtype=self.space.dtype)
        if x.shape != (self.space.dim, self.space.dim):
            raise DomainError(f"tangent matrix must be {self.space.dim} x {self.space.dim}")
        n = self.space.n
        sign = -1.0 if self.side is Side.COMPACT else 1.0
        resid = max(
            float(np.max(np.abs(x[:n, :n]))) if n else 0.0,
            float(np.max(np.abs(x[n:, n:]))) if self.space.m else 0.0,
            float(np.max(np.abs(x[n:, :n] - sign * x[:n, n:].conj().T))),
        )
        scale = max(1.0, float(np.max(np.abs(x))))
        if resid > 1e-12 * scale:
            raise DomainError("matrix does not lie in the tangent block structure")
        object.__setattr__(self, "x", x)

    def block(self) -> np.ndarray:
        """The free n x m block determining the vector."""
        return self.x[: self.space.n, self.space.n :]

    def norm(self) -> float:
        return norm(self.space, self.x)


@dataclass(frozen=True, eq=False)
class FlatCoordinates:
    """Coordinates of a flat tangent vector in the lattice basis."""

    space: SpaceDescriptor
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.float64).reshape(-1)
        if c.shape[0] != self.space.rank:
            raise DomainError(f"expected {self.space.rank} coordinates, got {c.shape[0]}")
        if not np.all(np.isfinite(c)):
            raise DomainError("non-finite flat coordinates")
        object.__setattr__(self, "coords", c)

    def cartan_coords(self) -> np.ndarray:
        """Coordinates with respect to the generators R_i."""
        return self.space.lattice_coeff @ self.coords

    def matrix(self, side: Side) -> np.ndarray:
        basis = self.space.cartan_basis(side)
        cart = self.cartan_coords()
        out = np.zeros((self.space.dim, self.space.dim), dtype=self.space.dtype)
        for c, b in zip(cart, basis):
            out = out + c * b
        return out

    def tangent(self, side: Side) -> TangentVector:
        return TangentVector(self.space, side, self.matrix(side))

    def metric_norm(self) -> float:
        g = self.space.lattice.gram
        return float(np.sqrt(max(self.coords @ g @ self.coords, 0.0)))


@dataclass(frozen=True, eq=False)
class SubspacePoint:
    """Point of the (compact or dual) Grassmannian, as a tall frame matrix.

    Two points are equal when their column spans coincide, and, for the
    oriented families, when the orientation signs agree as well.
    """

    space: SpaceDescriptor
    rep: np.ndarray
    orientation: int | None = None

    def __post_init__(self):
        rep = nk.as_matrix(self.rep, dtype=self.space.dtype)
        if rep.shape != (self.space.dim, self.space.n):
            raise DomainError(f"representative must be {self.space.dim} x {self.space.n}")
        sv = np.linalg.svd(rep, compute_uv=False)
        if sv[0] == 0.0 or sv[-1] <= 1e-10 * sv[0]:
            raise DomainError("rank-deficient subspace representative")
        object.__setattr__(self, "rep", rep)
        if self.space.oriented and self.orientation is None:
            object.__setattr__(self, "orientation", 1)

    def projector(self) -> np.ndarray:
        return nk.projector(self.rep)

    def distance(self, other: "SubspacePoint") -> float:
        return nk.projector_distance(self.rep, other.rep)


def same_point(a: SubspacePoint, b: SubspacePoint, tol: float = 1e-9) -> bool:
    """Equality of subspace points: same span, and same orientation if tracked."""
    if a.distance(b) > tol:
        return False
    if a.orientation is None or b.orientation is None:
        return True
    basis = nk.orthonormal_basis(a.rep)
    g1 = basis.conj().T @ a.rep
    g2 = basis.conj().T @ b.rep
    rel = np.linalg.solve(g1, g2)  # change of frame within the common span
    sign = np.sign(np.real(np.linalg.det(rel)))
    return bool(sign * a.orientation * b.orientation > 0)


def act(g: np.ndarray, point: SubspacePoint) -> SubspacePoint:
    """Left action of a group matrix on a subspace point."""
    return SubspacePoint(point.space, np.asarray(g) @ point.rep, orientation=point.orientation)


# ---------------------------------------------------------------------------
# catalog construction


def make_space(family: Family, n: int, m: int) -> SpaceDescriptor:
    """Build the descriptor for one catalog space.

    Parameters
    ----------
    family : Family
        One of the four in-scope families.  Real and complex Grassmannians
        accept any 1 <= n <= m.  The oriented families are the rank <= 2
        ones: oriented 2-planes need n = 2 (rank 2), and n = 1 gives the
        oriented lines, i.e. the circle/sphere family (rank 1).
    n, m : int
        Subspace dimension and codimension, n <= m.

    Raises
    ------
    DomainError
        For families outside the catalog (quaternionic and exceptional
        spaces are unsupported) or invalid (n, m).
    """
    family = Family(family)
    n = int(n)
    m = int(m)
    if n < 1:
        raise DomainError(f"need n >= 1, got n={n}")
    if m < n:
        raise DomainError(f"catalog convention requires m >= n, got (n, m) = ({n}, {m})")

    if family is Family.REAL_GRASSMANNIAN or family is Family.COMPLEX_GRASSMANNIAN:
        rank = n
        scale = 0.5
        oriented = False
        coeff = np.pi * np.eye(rank)
        fld = "complex" if family is Family.COMPLEX_GRASSMANNIAN else "real"
    elif family is Family.CIRCLE_SPHERE or (family is Family.ORIENTED_TWO_PLANE and n == 1):
        if n != 1:
            raise DomainError("the circle/sphere family needs n = 1")
        rank = 1
        scale = 2.0
        oriented = True
        coeff = 2.0 * np.pi * np.eye(1)
        fld = "real"
    elif family is Family.ORIENTED_TWO_PLANE:
        if n != 2:
            raise DomainError("oriented planes are supported for n in {1, 2} only")
        rank = 2
        scale = 0.5
        oriented = True
        # generators pi*(R_1 + R_2) and pi*(R_1 - R_2): orthogonal, equal length
        coeff = np.pi * np.array([[1.0, 1.0], [1.0, -1.0]])
        fld = "real"
    else:  # pragma: no cover - Family() above already rejects other values
        raise DomainError(f"unsupported family {family}")

    gen_norm = np.sqrt(2.0 * scale)  # |R_i| under the family metric
    basis = LatticeBasis(generators=gen_norm * coeff)
    form_j = np.diag(np.concatenate([np.ones(n), -np.ones(m)]))
    return SpaceDescriptor(
        family=family,
        n=n,
        m=m,
        rank=rank,
        field=fld,
        metric_scale=scale,
        oriented=oriented,
        form_j=form_j,
        lattice_coeff=coeff,
        lattice=basis,
        parabolic=nk.BlockShape.parabolic((n, m)),
    )


CATALOG = (
    (Family.REAL_GRASSMANNIAN, 1, 1),
    (Family.REAL_GRASSMANNIAN, 1, 2),
    (Family.REAL_GRASSMANNIAN, 2, 2),
    (Family.REAL_GRASSMANNIAN, 2, 3),
    (Family.REAL_GRASSMANNIAN, 3, 4),
    (Family.COMPLEX_GRASSMANNIAN, 1, 1),
    (Family.COMPLEX_GRASSMANNIAN, 1, 2),
    (Family.COMPLEX_GRASSMANNIAN, 2, 2),
    (Family.ORIENTED_TWO_PLANE, 2, 2),
    (Family.CIRCLE_SPHERE, 1, 1),
    (Family.CIRCLE_SPHERE, 1, 2),
)


# ---------------------------------------------------------------------------
# membership tests and group constructions


def _scaled_tol(a: np.ndarray, tol: float) -> float:
    # residuals of A^H J A - J grow like ||A||^2 * eps; keep the test
    # meaningful for strong boosts without loosening it near the identity
    scale = max(1.0, float(np.max(np.abs(a))) ** 2)
    return tol * scale


def in_group(space: SpaceDescriptor, a, side: Side, tol: float = 1e-10) -> bool:
    """Whether ``a`` preserves the defining form of the given side.

    Compact side: A^H A = I.  Noncompact side: A^H J A = J for the
    signature (n, m) form.  The oriented families additionally require
    det A = +1.  The tolerance applies relative to ||A||^2, which is the
    natural scale of the residual.
    """
    a = nk.as_matrix(a)
    if a.shape != (space.dim, space.dim):
        raise DomainError(f"expected a {space.dim} x {space.dim} matrix, got {a.shape}")
    if space.field == "real" and not nk.is_real(a):
        if np.max(np.abs(a.imag)) > tol:
            return False
        a = a.real
    j = np.eye(space.dim) if side is Side.COMPACT else space.form_j
    resid = float(np.max(np.abs(a.conj().T @ j @ a - j)))
    if resid > _scaled_tol(a, tol):
        return False
    if space.oriented:
        if abs(np.linalg.det(a) - 1.0) > _scaled_tol(a, tol):
            return False
    return True


def in_isotropy(space: SpaceDescriptor, k, tol: float = 1e-10) -> bool:
    """Whether ``k`` is block diagonal with compact blocks (fixes the base point)."""
    k = nk.as_matrix(k)
    if k.shape != (space.dim, space.dim):
        raise DomainError(f"expected a {space.dim} x {space.dim} matrix, got {k.shape}")
    n = space.n
    off = max(float(np.max(np.abs(k[:n, n:]))), float(np.max(np.abs(k[n:, :n]))))
    if off > tol:
        return False
    for block in (k[:n, :n], k[n:, n:]):
        if np.max(np.abs(block.conj().T @ block - np.eye(block.shape[0]))) > tol:
            return False
        if space.oriented and abs(np.linalg.det(block) - 1.0) > tol:
            return False
    return True


def _inv_sqrt_pd(s: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (s + s.conj().T))
    if w[0] <= 1e-14:
        raise DomainError("matrix is not positive definite: input is not space-like")
    return (v * (w ** -0.5)) @ v.conj().T


def transitivity_element(space: SpaceDescriptor, y) -> np.ndarray:
    """The standard form-preserving matrix mapping the base point to span([I; Y]).

    ``y`` is the m x n slope block; the space-like condition I - Y^H Y > 0
    must hold.  The result A satisfies A^H J A = J, has determinant one,
    and its first n columns span [I; Y].
    """
    y = nk.as_matrix(y, dtype=space.dtype)
    if y.shape != (space.m, space.n):
        raise DomainError(f"slope block must be {space.m} x {space.n}, got {y.shape}")
    n = space.n
    s_top = np.eye(n, dtype=space.dtype) - y.conj().T @ y
    s_bot = np.eye(space.m, dtype=space.dtype) - y @ y.conj().T
    isr_top = _inv_sqrt_pd(s_top)
    isr_bot = _inv_sqrt_pd(s_bot)
    a = np.zeros((space.dim, space.dim), dtype=space.dtype)
    a[:n, :n] = isr_top
    a[:n, n:] = y.conj().T @ isr_bot
    a[n:, :n] = y @ isr_top
    a[n:, n:] = isr_bot
    return a


def _block_diag(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    n = u.shape[0]
    m = v.shape[0]
    out = np.zeros((n + m, n + m), dtype=np.promote_types(u.dtype, v.dtype))
    out[:n, :n] = u
    out[n:, n:] = v
    return out


def _det_sign_fix(u, vh, s, oriented):
    """Push determinant signs around so both factors are special.

    Flipping column j of u together with row j of vh preserves u @ S @ vh.
    When m > n a row of vh outside the singular block is free; when m = n
    the leftover sign is absorbed into the last (smallest) coefficient.
    """
    if not oriented:
        return u, vh, s
    u = u.copy()
    vh = vh.copy()
    s = s.copy()
    n = u.shape[0]
    m = vh.shape[0]
    if np.linalg.det(u) < 0:
        u[:, n - 1] *= -1.0
        vh[n - 1, :] *= -1.0
    if np.linalg.det(vh) < 0:
        if m > n:
            vh[m - 1, :] *= -1.0
        else:
            vh[n - 1, :] *= -1.0
            s[n - 1] *= -1.0
    return u, vh, s


def flat_decompose(space: SpaceDescriptor, xv: TangentVector):
    """Rotate a tangent vector into the flat: X = k (sum_i h_i A_i) k^-1.

    The canonical representative keeps |h_i| descending (the singular
    values of the free block), with k in the isotropy group.  The returned
    coordinates are in lattice units.

    Returns
    -------
    (k, h) : (ndarray, FlatCoordinates)
    """
    if xv.space is not space and xv.space.label() != space.label():
        raise DomainError("tangent vector belongs to a different space")
    b = xv.block()
    u, s, vh = np.linalg.svd(b, full_matrices=True)
    sgn = s.copy()
    u, vh, sgn = _det_sign_fix(u, vh, sgn, space.oriented)
    k = _block_diag(u, vh.conj().T)
    coeffs = np.zeros(space.rank)
    coeffs[: len(sgn)] = sgn[: space.rank]
    coords = np.linalg.solve(space.lattice_coeff, coeffs)
    return k, FlatCoordinates(space, coords)
