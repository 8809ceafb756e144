"""The embeddings of a noncompact symmetric space into its compact dual.

Four maps are provided, all landing in the compact space of the same
descriptor and all agreeing with each other on the Grassmannian families:

* ``p_embed``  -- realize the coset as a space-like subspace (act on the
  base point and keep the column span);
* ``g_embed``  -- factor the group element through the parabolic subgroup
  by block QR; the orthogonal/unitary factor represents the image coset;
* ``f_embed``  -- pull the coset back to the tangent space, contract the
  flat coordinates into the quarter-lattice box, and push forward with the
  compact exponential;
* ``b_embed_rank1`` -- the stereographic formula on the rank-1 flat of the
  circle/sphere family, the one place where it differs from ``f_embed``.

The sign convention of the flat contraction is chosen so that p, g and f
produce literally the same subspaces: a boost of rapidity t along a flat
direction lands at the rotation angle theta with tan(theta) = -tanh(t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import numkernel as nk
from .errors import DomainError, NumericalError
from .lattice import cut_radius, in_half_region
from .spaces import (
    FlatCoordinates,
    Side,
    SpaceDescriptor,
    SubspacePoint,
    TangentVector,
    _block_diag,
    flat_decompose,
    in_group,
)

# cosets whose slope block has a singular value this close to 1 are
# rejected: artanh would amplify roundoff past any useful accuracy
BOUNDARY_GUARD = 1e-13


@dataclass(frozen=True, eq=False)
class GroupElement:
    """A form-preserving matrix representing a coset point."""

    space: SpaceDescriptor
    side: Side
    a: np.ndarray

    def __post_init__(self):
        a = nk.as_matrix(self.a, dtype=self.space.dtype)
        if not in_group(self.space, a, self.side):
            raise DomainError("matrix does not preserve the defining form of this side")
        object.__setattr__(self, "a", a)

    def point(self) -> SubspacePoint:
        return SubspacePoint(
            self.space, self.a[:, : self.space.n],
            orientation=1 if self.space.oriented else None,
        )


@dataclass(frozen=True, eq=False)
class HMapImage:
    """Flat coordinates produced by the contraction; all lie in (-1/4, 1/4)."""

    coords: FlatCoordinates

    def __post_init__(self):
        if np.max(np.abs(self.coords.coords)) >= 0.25:
            raise DomainError("contracted coordinates must lie strictly inside (-1/4, 1/4)")


def _contract(x):
    """Odd increasing squash of the line onto (-1/4, 1/4), per coordinate.

    tanh saturates to 1.0 in double precision around |x| ~ 6, beyond the
    range reachable from any admissible coset (the boundary guard caps
    lattice coordinates near 4.9); clip there so the image stays open.
    """
    out = np.arctan(np.tanh(np.pi * np.asarray(x, dtype=np.float64))) / np.pi
    limit = np.nextafter(0.25, 0.0)
    return np.clip(out, -limit, limit)


def h_flat(coords: FlatCoordinates) -> HMapImage:
    """Contract noncompact flat coordinates into the open quarter-lattice box.

    Acts coordinate-wise in lattice units as x -> -arctan(tanh(pi x)) / pi,
    the sign-flipped odd increasing squash, with range (-1/4, 1/4).  The
    quarter box is half of the half-lattice box where the cut locus sits,
    which is what keeps the resulting embedding inside the space-like
    region.
    """
    return HMapImage(FlatCoordinates(coords.space, -_contract(coords.coords)))


def b_embed_rank1(t: float) -> float:
    """Stereographic embedding of the rank-1 flat, in arc-length units.

    Maps the boost parameter t to the angle 2*arctan(tanh(t/2)), with range
    (-pi/2, pi/2): a quarter of the closed geodesic of length 4*pi used by
    the circle/sphere family.
    """
    t = float(t)
    if not np.isfinite(t):
        raise DomainError("need a finite flat parameter")
    return 2.0 * np.arctan(np.tanh(t / 2.0))


def f_flat_rank1(t: float) -> float:
    """Flat profile of ``f_embed`` on the circle/sphere family.

    Same arc-length units and orientation as :func:`b_embed_rank1`, so the
    two are directly comparable: this one has range (-pi, pi), twice the
    stereographic range, and the two differ at every t != 0.
    """
    t = float(t)
    if not np.isfinite(t):
        raise DomainError("need a finite flat parameter")
    return 4.0 * np.arctan(np.tanh(t / 4.0))


def space_like(space: SpaceDescriptor, point: SubspacePoint, tol: float = 1e-10) -> bool:
    """Whether the indefinite form is positive definite on the subspace."""
    q = nk.orthonormal_basis(point.rep)
    gram = q.conj().T @ space.form_j.astype(q.dtype) @ q
    try:
        return nk.is_positive_definite(gram, tol)
    except DomainError:
        return False


def p_embed(space: SpaceDescriptor, g: GroupElement) -> SubspacePoint:
    """Space-like realization: the image of the base point under the coset."""
    if g.side is not Side.NONCOMPACT:
        raise DomainError("p_embed expects a noncompact coset representative")
    return g.point()


def g_embed(space: SpaceDescriptor, g: GroupElement) -> GroupElement:
    """Parabolic factorization: the compact factor of the block QR of A.

    Well defined on cosets: right-multiplying A by an isotropy element only
    changes the result by right isotropy multiplication, so the image
    subspace is unchanged.
    """
    if g.side is not Side.NONCOMPACT:
        raise DomainError("g_embed expects a noncompact coset representative")
    q, _ = nk.block_qr(g.a, space.parabolic)
    return GroupElement(space, Side.COMPACT, q)


def _slope_block(space: SpaceDescriptor, point: SubspacePoint) -> np.ndarray:
    """Normalized slope Y with span([I; Y]) = span(point)."""
    n = space.n
    top = point.rep[:n, :]
    bot = point.rep[n:, :]
    sv = np.linalg.svd(top, compute_uv=False)
    if sv[0] == 0.0 or sv[-1] <= 1e-13 * max(sv[0], 1.0):
        raise DomainError("subspace is not a graph over the base point")
    return bot @ np.linalg.inv(top)


def _slope_svd(space: SpaceDescriptor, y: np.ndarray):
    """SVD ``y = w @ rect_diag(s) @ z.conj().T`` with isotropy-ready factors.

    For the oriented families both factors are pushed into the special
    group.  Flipping column j of w together with column j of z preserves
    the product, as does flipping any column of w beyond the singular
    block; when m = n one leftover sign is absorbed into the last (and
    smallest) coefficient, which may therefore come back negative.
    """
    w, s, zh = np.linalg.svd(y, full_matrices=True)
    w = w.copy()
    z = zh.conj().T.copy()
    s = s.copy()
    if space.oriented:
        n = z.shape[0]
        m = w.shape[0]
        if np.linalg.det(z) < 0:
            z[:, n - 1] *= -1.0
            w[:, n - 1] *= -1.0
        if np.linalg.det(w) < 0:
            if m > n:
                w[:, m - 1] *= -1.0
            else:
                w[:, n - 1] *= -1.0
                s[n - 1] *= -1.0
    return w, s, z


def _flat_point(space: SpaceDescriptor, k: np.ndarray, cartan_coeffs, side: Side) -> np.ndarray:
    """Matrix of k . (sum_i c_i R_i) . k^-1 for cartan coefficients c."""
    basis = space.cartan_basis(side)
    flat = np.zeros((space.dim, space.dim), dtype=space.dtype)
    for c, b in zip(cartan_coeffs, basis):
        flat = flat + c * b
    return k @ flat @ k.conj().T


def _checked_slope_svd(space: SpaceDescriptor, point: SubspacePoint):
    """Slope SVD of a space-like graph point, with boundary classification.

    The subspace is space-like exactly when every slope singular value is
    below one; values in [1 - 1e-13, 1) are mathematically fine but are
    rejected rather than clamped, since artanh would amplify roundoff past
    any useful accuracy there.
    """
    y = _slope_block(space, point)
    w, sig, z = _slope_svd(space, y)
    top = float(np.max(np.abs(sig))) if sig.size else 0.0
    if top >= 1.0:
        raise DomainError("point is not space-like")
    if top >= 1.0 - BOUNDARY_GUARD:
        raise NumericalError("coset too close to the boundary for double precision")
    return w, sig, z


def log_noncompact(space: SpaceDescriptor, point: SubspacePoint) -> TangentVector:
    """Tangent vector X with exp(X) . o = point, on the noncompact side.

    Computed from the singular value decomposition of the slope block: the
    singular values are hyperbolic tangents of the flat coefficients and
    the singular bases assemble the isotropy rotation.

    Raises
    ------
    DomainError
        If the point is not space-like.
    NumericalError
        If a singular value of the slope exceeds 1 - 1e-13; such cosets
        are rejected rather than clamped.
    """
    w, sig, z = _checked_slope_svd(space, point)
    k = _block_diag(z, w)
    x = _flat_point(space, k, np.arctanh(sig), Side.NONCOMPACT)
    return TangentVector(space, Side.NONCOMPACT, x)


def log_compact(space: SpaceDescriptor, point: SubspacePoint) -> TangentVector:
    """Tangent vector X with exp(X) . o = point, on the compact side.

    Valid on the chart where the point is a graph over the base point, in
    particular everywhere the embeddings of this module take values.  Flat
    coefficients are arctangents of the slope's singular values; the sign
    convention (slope of a flat point is minus the tangent of its angle)
    is handled by decomposing the negated slope.
    """
    y = _slope_block(space, point)
    w, sig, z = _slope_svd(space, -y)
    k = _block_diag(z, w)
    x = _flat_point(space, k, np.arctan(sig), Side.COMPACT)
    return TangentVector(space, Side.COMPACT, x)


def exp_point(space: SpaceDescriptor, xv: TangentVector) -> SubspacePoint:
    """Exponential of a tangent vector applied to the base point."""
    rep = nk.expm(xv.x)[:, : space.n]
    return SubspacePoint(space, rep, orientation=1 if space.oriented else None)


def point_flat_coords(space: SpaceDescriptor, point: SubspacePoint, side: Side) -> FlatCoordinates:
    """Lattice-unit flat coordinates of the log of a point, on either side."""
    xv = log_noncompact(space, point) if side is Side.NONCOMPACT else log_compact(space, point)
    _, coords = flat_decompose(space, xv)
    return coords


def f_embed(space: SpaceDescriptor, x) -> SubspacePoint:
    """Cut-locus embedding: compact exp of the contracted noncompact log.

    Accepts either a noncompact :class:`GroupElement` or a space-like
    :class:`SubspacePoint`.  The pipeline takes the noncompact log, applies
    the coordinate-wise contraction on the flat in lattice units, rotates
    back with the same isotropy element, and exponentiates on the compact
    side.  The image always lies strictly inside half of the cut radius.
    """
    if isinstance(x, GroupElement):
        if x.side is not Side.NONCOMPACT:
            raise DomainError("f_embed expects a noncompact coset representative")
        point = x.point()
    elif isinstance(x, SubspacePoint):
        point = x
    else:
        raise DomainError("f_embed takes a GroupElement or a SubspacePoint")

    w, sig, z = _checked_slope_svd(space, point)
    lattice_coords = np.linalg.solve(space.lattice_coeff, np.arctanh(sig[: space.rank]))
    contracted = h_flat(FlatCoordinates(space, lattice_coords))
    theta = space.lattice_coeff @ contracted.coords.coords

    k = _block_diag(z, w)
    xc = _flat_point(space, k, theta, Side.COMPACT)
    rep = nk.expm(xc)[:, : space.n]
    return SubspacePoint(space, rep, orientation=1 if space.oriented else None)


def image_region_fraction(space: SpaceDescriptor, point: SubspacePoint) -> float:
    """Distance of a compact point from the base point, as a fraction of the
    cut radius along its own direction (0 at the base point)."""
    coords = point_flat_coords(space, point, Side.COMPACT)
    nrm = coords.metric_norm()
    if nrm == 0.0:
        return 0.0
    return nrm / cut_radius(coords).radius


def in_image_region(space: SpaceDescriptor, point: SubspacePoint, fraction: float) -> bool:
    """Whether a compact point lies strictly inside ``fraction`` of the cut radius."""
    coords = point_flat_coords(space, point, Side.COMPACT)
    return in_half_region(coords, fraction)
