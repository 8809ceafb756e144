"""Unit-lattice computations on a maximal flat.

The flat is modelled abstractly: a lattice is a set of generator vectors
in some orthonormal coordinate system of the flat together with its Gram
matrix, decoupled from any matrix realization.  This keeps the rank-2
counterexample lattice of the special unitary group SU(3) in scope even
though it has no Grassmannian realization here.

Directions through these functions may be given either as plain
coordinate arrays (with an explicit ``LatticeBasis``) or as
``spaces.FlatCoordinates`` objects, which carry their space's lattice
along.  Coordinates are always with respect to the lattice generators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_REL_TIE = 1e-12


@dataclass(frozen=True, eq=False)
class LatticeBasis:
    """Generators of a full-rank lattice in an inner-product space.

    ``generators`` holds one generator per column, expressed in orthonormal
    coordinates of the flat; ``gram`` is the matrix of pairwise inner
    products and is derived from the generators when not supplied.
    """

    generators: np.ndarray
    gram: np.ndarray = None

    def __post_init__(self):
        gens = np.array(self.generators, dtype=np.float64)
        if gens.ndim != 2 or gens.shape[0] != gens.shape[1]:
            raise DomainError("generators must form a square coordinate matrix")
        object.__setattr__(self, "generators", gens)
        gram = self.gram
        if gram is None:
            gram = gens.T @ gens
        gram = np.array(gram, dtype=np.float64)
        gram = 0.5 * (gram + gram.T)
        eigs = np.linalg.eigvalsh(gram)
        if eigs[0] <= 0.0:
            raise DomainError("lattice Gram matrix must be positive definite")
        object.__setattr__(self, "gram", gram)

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    def norms(self) -> np.ndarray:
        return np.sqrt(np.diag(self.gram))


@dataclass(frozen=True)
class CutRadiusResult:
    """Cut radius along a direction, with the lattice vector attaining it.

    ``radius`` equals <A,A> / (2 |<X,A>|) at A = sum_i minimizer[i] * A_i
    for the direction X normalized to unit length.
    """

    radius: float
    minimizer: tuple
    used_closed_form: bool


def _coords_array(coords, basis):
    """Accept FlatCoordinates-like objects or raw arrays plus a basis."""
    if basis is None:
        space = getattr(coords, "space", None)
        if space is None or getattr(space, "lattice", None) is None:
            raise DomainError("no lattice basis supplied and none attached to the coordinates")
        basis = space.lattice
    x = np.asarray(getattr(coords, "coords", coords), dtype=np.float64)
    if x.ndim != 1 or x.shape[0] != basis.rank:
        raise DomainError(f"expected {basis.rank} flat coordinates, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite flat coordinates")
    return x, basis


def is_orthonormal(basis: LatticeBasis, tol: float = 1e-10) -> bool:
    """Whether the given generators are orthogonal and of equal length.

    The test applies to the generators as given; recognizing a lattice that
    only becomes orthonormal after a change of Z-basis would need a
    reduction step and is out of scope.
    """
    gram = basis.gram
    alpha2 = float(np.mean(np.diag(gram)))
    return bool(np.max(np.abs(gram - alpha2 * np.eye(basis.rank))) <= tol * alpha2)


def _unit_direction(x, gram):
    nrm2 = float(x @ gram @ x)
    if nrm2 <= 0.0 or not np.isfinite(nrm2):
        raise DomainError("zero flat direction")
    return x / np.sqrt(nrm2)


def cut_radius_closed(coords, basis: LatticeBasis = None) -> float:
    """Cut radius along a flat direction, by the orthonormal-lattice formula.

    For a unit direction X this is alpha^2 / (2 max_i |<X, A_i>|) where
    alpha is the common generator length.  The input direction may have any
    positive length; only its direction enters.

    Raises
    ------
    DomainError
        If the lattice is not orthonormal (use :func:`cut_radius_brute`)
        or the direction is zero.
    """
    x, basis = _coords_array(coords, basis)
    if not is_orthonormal(basis):
        raise DomainError("closed-form cut radius needs an orthonormal lattice")
    x = _unit_direction(x, basis.gram)
    alpha2 = float(np.mean(np.diag(basis.gram)))
    c = basis.gram @ x
    return alpha2 / (2.0 * float(np.max(np.abs(c))))


def _l1_shell(rank: int, s: int):
    """Integer vectors with L1 norm exactly s, in deterministic order."""
    if rank == 1:
        if s == 0:
            yield (0,)
        else:
            yield (-s,)
            yield (s,)
        return
    for v in range(-s, s + 1):
        for rest in _l1_shell(rank - 1, s - abs(v)):
            yield (v,) + rest


def cut_radius_brute(coords, basis: LatticeBasis = None) -> CutRadiusResult:
    """Cut radius by exact minimization of <A,A> / (2|<X,A>|) over the lattice.

    Nonzero lattice vectors are enumerated in shells of increasing L1 norm.
    With X normalized, Cauchy-Schwarz gives value >= |A|/2, so the search
    can stop once every vector in the current shell is longer than twice
    the best value found; |A|^2 >= eigmin(gram) |m|_2^2 >= eigmin |m|_1^2 / r
    turns that into a shell bound.  Ties are broken by lexicographic order
    of the integer coefficient vector, making the minimizer reproducible.
    """
    x, basis = _coords_array(coords, basis)
    gram = basis.gram
    r = basis.rank
    x = _unit_direction(x, gram)
    c = gram @ x
    if float(np.max(np.abs(c))) < 1e-14:
        raise DomainError("direction is orthogonal to the whole lattice (infinite cut radius)")

    eigmin = float(np.linalg.eigvalsh(gram)[0])
    best = np.inf
    best_m = None
    s = 1
    while True:
        if best_m is not None and s * np.sqrt(eigmin / r) / 2.0 > best * (1.0 + _REL_TIE):
            break
        for m in _l1_shell(r, s):
            mv = np.array(m, dtype=np.float64)
            d = abs(float(c @ mv))
            if d < 1e-14:
                continue
            val = float(mv @ gram @ mv) / (2.0 * d)
            if val < best * (1.0 - _REL_TIE):
                best, best_m = val, m
            elif val <= best * (1.0 + _REL_TIE) and best_m is not None and m < best_m:
                best_m = m
        s += 1
    return CutRadiusResult(radius=best, minimizer=best_m, used_closed_form=False)


def cut_radius(coords, basis: LatticeBasis = None) -> CutRadiusResult:
    """Cut radius by the closed form when available, brute force otherwise."""
    x, basis = _coords_array(coords, basis)
    if is_orthonormal(basis):
        radius = cut_radius_closed(x, basis)
        c = np.abs(basis.gram @ _unit_direction(x, basis.gram))
        i0 = int(np.argmax(c))
        m = tuple(-1 if i == i0 else 0 for i in range(basis.rank))
        return CutRadiusResult(radius=radius, minimizer=m, used_closed_form=True)
    return cut_radius_brute(x, basis)


def in_half_region(coords, fraction: float, basis: LatticeBasis = None) -> bool:
    """Whether a flat vector lies strictly inside ``fraction`` of the cut radius.

    The open star-shaped region { tX : |X| = 1, t < fraction * t0(X) } is
    where the embeddings of this library take their values (fraction 1/2,
    or 1/4 for the stereographic one on the sphere).  The zero vector is
    inside for every fraction.
    """
    if not 0.0 < fraction <= 1.0:
        raise DomainError(f"fraction must be in (0, 1], got {fraction}")
    x, basis = _coords_array(coords, basis)
    nrm = float(np.sqrt(x @ basis.gram @ x))
    if nrm == 0.0:
        return True
    return nrm < fraction * cut_radius(x, basis).radius


def su3_lattice() -> LatticeBasis:
    """Integral lattice of SU(3) on its maximal torus (rank 2).

    This is the hexagonal lattice spanned by two vectors of equal length
    2*pi meeting at 120 degrees, with Gram matrix 2*pi^2 * [[2, -1], [-1, 2]].
    It is the standard counterexample: a full-rank unit lattice that is not
    orthonormal, so the closed-form cut radius does not apply to it.
    """
    alpha = 2.0 * np.pi
    gens = alpha * np.array([[1.0, -0.5], [0.0, np.sqrt(3.0) / 2.0]])
    return LatticeBasis(generators=gens)
