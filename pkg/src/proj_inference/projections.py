# -*- coding: utf-8 -*-
"""
subspaces, projections of points and measures, Heppes families and good directions
"""
import logging
import math

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import null_space, subspace_angles
from scipy.spatial.distance import pdist

from proj_inference.errors import NumericalError
from proj_inference.measures import DiscreteMeasure, tv_distance, MERGE_TOL
from proj_inference.measures.discrete_measure import as_point, as_points, cluster_points


logger = logging.getLogger(__name__)

# allowed deviation of basis^T basis from the identity
ORTHO_TOL = 1e-10

# smallest singular value below this counts as rank deficient
RANK_TOL = 1e-8

# projected differences shorter than this count as collisions
INJECTIVE_TOL = 1e-9


class Subspace:
    """
    Linear subspace H of R^d given by a d x m matrix with orthonormal columns.

    Coordinates of a projected point are taken in this basis, so projecting x gives ``basis.T @ x``.

    Args:
        basis (ArrayLike): d x m column-orthonormal matrix; a 1-D input is read as a single column
    """
    def __init__(self, basis:ArrayLike):
        b = np.asarray(basis, dtype=float)
        if b.ndim == 1:
            b = b.reshape(-1, 1)
        self.basis = b
        self._check_params()
        self.basis.setflags(write=False)


    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return f"{type(self).__name__}(ambient_dim={self.ambient_dim}, dim={self.dim})"


    def project_points(self, X:ArrayLike) -> np.ndarray:
        """Coordinates in H of the rows of ``X`` (shape (n, d) -> (n, m))."""
        X = as_points(X, key='X')
        if X.shape[1] != self.ambient_dim:
            raise ValueError(f"Invalid 'X': \n dimension mismatch, expected {self.ambient_dim} columns, got {X.shape[1]}")
        return X @ self.basis


    def orthocomplement_basis(self) -> np.ndarray:
        """Orthonormal basis of H^perp as a d x (d - m) matrix (no columns when H = R^d)."""
        return null_space(self.basis.T)


    def orthocomplement(self):
        """
        H^perp as a Subspace.

        Raises:
            ValueError: H is the whole space
        """
        if self.dim == self.ambient_dim:
            raise ValueError(f"Invalid subspace: \n the orthocomplement of R^{self.ambient_dim} is trivial")
        return Subspace(self.orthocomplement_basis())


    def principal_angles(self, other) -> np.ndarray:
        """Principal angles (radians, decreasing) between H and ``other``."""
        if other.ambient_dim != self.ambient_dim:
            raise ValueError(f"Invalid 'other': \n ambient dimension mismatch")
        return subspace_angles(self.basis, other.basis)


    def _check_params(self):
        """
        Checks the params
        - basis: 2-D, finite, 1 <= m <= d
        - basis^T basis = I within ORTHO_TOL

        Raises:
            ValueError: basis violates one of the rules above
        """
        if self.basis.ndim != 2:
            raise ValueError(f"Invalid 'basis': \n must be a d x m matrix")
        elif not np.all(np.isfinite(self.basis)):
            raise ValueError(f"Invalid 'basis': \n must be finite")

        d, m = self.basis.shape
        if not 1 <= m <= d:
            raise ValueError(f"Invalid 'basis': \n need 1 <= m <= d, got d={d}, m={m}")

        gram = self.basis.T @ self.basis
        if np.max(np.abs(gram - np.eye(m))) > ORTHO_TOL:
            raise ValueError(f"Invalid 'basis': \n columns must be orthonormal")


class Direction(Subspace):
    """
    One-dimensional subspace span{u} for a unit vector u.

    Args:
        u (ArrayLike): unit vector in R^d
    """
    def __init__(self, u:ArrayLike):
        u = np.asarray(u, dtype=float).reshape(-1)
        if u.shape[0] == 0 or not np.all(np.isfinite(u)):
            raise ValueError(f"Invalid 'u': \n must be a nonempty finite vector")
        if abs(np.linalg.norm(u) - 1.0) > 1e-12:
            raise ValueError(f"Invalid 'u': \n must have unit norm, got {np.linalg.norm(u)!r}")
        super().__init__(u.reshape(-1, 1))


    @classmethod
    def from_vector(cls, v:ArrayLike):
        """Direction of a nonzero vector ``v``."""
        v = np.asarray(v, dtype=float).reshape(-1)
        norm = np.linalg.norm(v)
        if not norm > 0:
            raise ValueError(f"Invalid 'v': \n must be a nonzero vector")
        return cls(v / norm)


    @classmethod
    def from_angle(cls, theta:float):
        """Planar direction (cos theta, sin theta)."""
        return cls(np.array([math.cos(theta), math.sin(theta)]))


    @property
    def u(self) -> np.ndarray:
        return self.basis[:, 0]


    def perpendicular(self) -> np.ndarray:
        """u^perp = (-u2, u1) for a planar direction."""
        if self.ambient_dim != 2:
            raise ValueError(f"Invalid direction: \n u^perp is defined for planar directions only")
        return np.array([-self.u[1], self.u[0]])


class HeppesFamily:
    """
    Subspaces H_1..H_{k+1} of a common R^d whose orthocomplements pairwise meet only at the origin.

    Args:
        subspaces (list): the k+1 subspaces
        validate (bool, optional): check every pair with validate_heppes_pair. Defaults to True.
    """
    def __init__(self, subspaces:list, validate:bool = True):
        self.subspaces = list(subspaces)
        self._check_params()
        if validate:
            for i in range(len(self.subspaces)):
                for j in range(i + 1, len(self.subspaces)):
                    if not validate_heppes_pair(self.subspaces[i], self.subspaces[j]):
                        raise ValueError(f"Invalid 'subspaces': \n pair ({i}, {j}) has orthocomplements with a nontrivial intersection")


    @property
    def k(self) -> int:
        """Number of atoms the family can resolve."""
        return len(self.subspaces) - 1

    @property
    def ambient_dim(self) -> int:
        return self.subspaces[0].ambient_dim

    def __len__(self):
        return len(self.subspaces)

    def __iter__(self):
        return iter(self.subspaces)

    def __repr__(self):
        return f"HeppesFamily(k={self.k}, ambient_dim={self.ambient_dim})"


    def _check_params(self):
        if len(self.subspaces) == 0:
            raise ValueError(f"Invalid 'subspaces': \n need at least one subspace")
        for H in self.subspaces:
            if not isinstance(H, Subspace):
                raise ValueError(f"Invalid 'subspaces': \n every element must be a Subspace, got {type(H).__name__}")
        if len({H.ambient_dim for H in self.subspaces}) != 1:
            raise ValueError(f"Invalid 'subspaces': \n ambient dimensions differ")


def project_point(H:Subspace, x:ArrayLike) -> np.ndarray:
    """
    Coordinates of the orthogonal projection of ``x`` onto H.

    Args:
        H (Subspace): target subspace
        x (ArrayLike): point of dimension ``H.ambient_dim``

    Returns:
        np.ndarray: vector of length ``H.dim``
    """
    return H.basis.T @ as_point(x, H.ambient_dim)


def project_points(H:Subspace, X:ArrayLike) -> np.ndarray:
    """Coordinates in H of every row of ``X``."""
    return H.project_points(X)


def project_measure(H:Subspace, P:DiscreteMeasure, merge_tol:float = MERGE_TOL) -> DiscreteMeasure:
    """
    Pushforward P_H of P under the projection onto H: atoms are projected, coinciding images merged and their
    masses summed.
    """
    if P.dim != H.ambient_dim:
        raise ValueError(f"Invalid 'P': \n dimension mismatch, P has dimension {P.dim} and H lives in R^{H.ambient_dim}")
    return DiscreteMeasure(P.points @ H.basis, P.weights, merge_tol=merge_tol)


def random_direction(d:int, rng:np.random.Generator) -> Direction:
    """
    Direction uniform on the unit sphere of R^d (normalized standard Gaussian vector).
    """
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    while True:
        g = rng.standard_normal(d)
        norm = np.linalg.norm(g)
        if norm > 0:
            return Direction(g / norm)


def random_directions(d:int, n:int, rng:np.random.Generator) -> list:
    """``n`` independent random directions in R^d."""
    return [random_direction(d, rng) for _ in range(n)]


def random_subspace(d:int, m:int, rng:np.random.Generator) -> Subspace:
    """
    Random m-dimensional subspace of R^d with a rotation-invariant law.

    A d x m standard Gaussian matrix is orthonormalized by a QR factorization with the sign of each column
    fixed by the diagonal of R. Rank-deficient draws are redrawn.

    Raises:
        ValueError: m outside 1..d
    """
    if d < 1:
        raise ValueError(f"Invalid 'd': \n must be a positive integer")
    if not 1 <= m <= d:
        raise ValueError(f"Invalid 'm': \n need 1 <= m <= d, got m={m}, d={d}")

    while True:
        g = rng.standard_normal((d, m))
        q, r = np.linalg.qr(g)
        diag = np.diag(r)
        if np.min(np.abs(diag)) > RANK_TOL * max(np.max(np.abs(diag)), 1.0):
            return Subspace(q * np.sign(diag))
        logger.debug("rank deficient Gaussian draw, redrawing")


def validate_heppes_pair(H_i:Subspace, H_j:Subspace, tol:float = RANK_TOL) -> bool:
    """
    Whether H_i^perp and H_j^perp meet only at the origin.

    Decided by the smallest singular value of the concatenated orthocomplement bases. Automatically false when
    the orthocomplement dimensions add up to more than d.
    """
    if H_i.ambient_dim != H_j.ambient_dim:
        raise ValueError(f"Invalid 'H_j': \n ambient dimension mismatch")

    d = H_i.ambient_dim
    if (d - H_i.dim) + (d - H_j.dim) > d:
        return False
    if H_i.dim == d or H_j.dim == d:
        return True

    stacked = np.hstack([H_i.orthocomplement_basis(), H_j.orthocomplement_basis()])
    singular = np.linalg.svd(stacked, compute_uv=False)
    return bool(singular.min() > tol)


def heppes_family(d:int, k:int, m:int = None, rng:np.random.Generator = None, max_tries:int = 1000) -> HeppesFamily:
    """
    Draw k+1 random m-dimensional subspaces of R^d forming a Heppes family.

    Each candidate is redrawn until it validates against all subspaces accepted so far.

    Args:
        d (int): ambient dimension
        k (int): number of atoms to resolve; the family has k+1 members
        m (int, optional): subspace dimension, at least ceil(d/2). Defaults to ceil(d/2).
        rng (np.random.Generator, optional): random generator. Defaults to a fresh unseeded generator.
        max_tries (int, optional): cap on the number of candidate draws. Defaults to 1000.

    Raises:
        ValueError: m < ceil(d/2) or m > d
        NumericalError: max_tries exhausted
    """
    if d < 1 or k < 0:
        raise ValueError(f"Invalid 'd' or 'k': \n need d >= 1 and k >= 0, got d={d}, k={k}")

    min_dim = math.ceil(d / 2)
    if m is None:
        m = min_dim
    if m < min_dim or m > d:
        raise ValueError(f"Invalid 'm': \n need ceil(d/2) = {min_dim} <= m <= d, got m={m}")

    rng = np.random.default_rng() if rng is None else rng
    accepted = []
    failing_pairs = 0
    tries = 0
    while len(accepted) < k + 1:
        if tries >= max_tries:
            raise NumericalError(f"heppes_family: max_tries={max_tries} exhausted with {len(accepted)} of {k + 1} subspaces accepted ({failing_pairs} failing pairs)")
        tries += 1
        H = random_subspace(d, m, rng)
        bad = sum(not validate_heppes_pair(H, A) for A in accepted)
        if bad == 0:
            accepted.append(H)
        else:
            failing_pairs += bad

    logger.debug("heppes_family: d=%d k=%d m=%d accepted after %d draws", d, k, m, tries)
    return HeppesFamily(accepted, validate=False)


def _distinct_points(E:ArrayLike) -> np.ndarray:
    pts = as_points(E, key='E')
    representatives, _ = cluster_points(pts, MERGE_TOL)
    return pts[representatives]


def is_good_direction(H:Subspace, E:ArrayLike, tol:float = INJECTIVE_TOL) -> bool:
    """
    Whether the projection onto H is injective on the finite set E, i.e. no nonzero difference of points of E is
    orthogonal to H.
    """
    pts = _distinct_points(E)
    if pts.shape[1] != H.ambient_dim:
        raise ValueError(f"Invalid 'E': \n dimension mismatch, expected {H.ambient_dim} coordinates")
    if pts.shape[0] < 2:
        return True
    return bool(pdist(pts @ H.basis).min() > tol)


def good_direction_for_support(E:ArrayLike, rng:np.random.Generator, max_tries:int = 100) -> Direction:
    """
    Random direction on which the projection is injective for E.

    Raises:
        NumericalError: no good direction within max_tries draws
    """
    pts = _distinct_points(E)
    for attempt in range(1, max_tries + 1):
        u = random_direction(pts.shape[1], rng)
        if is_good_direction(u, pts):
            logger.debug("good direction found after %d draws", attempt)
            return u
    raise NumericalError(f"good_direction_for_support: no injective direction in {max_tries} draws")


def bad_directions_2d(E:ArrayLike) -> list:
    """
    All directions in the plane on which the projection fails to be injective for E.

    The line span{u} is bad exactly when u is perpendicular to a difference of two points of E. Each direction is
    returned once, with its first nonzero coordinate positive.
    """
    pts = _distinct_points(E)
    if pts.shape[1] != 2:
        raise ValueError(f"Invalid 'E': \n expected planar points, got dimension {pts.shape[1]}")
    if pts.shape[0] < 2:
        return []

    i, j = np.triu_indices(pts.shape[0], k=1)
    delta = pts[j] - pts[i]
    perp = np.column_stack([-delta[:, 1], delta[:, 0]])
    perp /= np.linalg.norm(perp, axis=1, keepdims=True)
    flip = (perp[:, 0] < -INJECTIVE_TOL) | ((np.abs(perp[:, 0]) <= INJECTIVE_TOL) & (perp[:, 1] < 0))
    perp[flip] *= -1

    representatives, _ = cluster_points(perp, INJECTIVE_TOL)
    return [Direction.from_vector(perp[r]) for r in representatives]


def _check_bound_inputs(P:DiscreteMeasure, Q:DiscreteMeasure, fam:HeppesFamily):
    if P.dim != Q.dim or P.dim != fam.ambient_dim:
        raise ValueError(f"Invalid 'P' or 'Q': \n dimension mismatch with the family's R^{fam.ambient_dim}")
    if Q.n_atoms > fam.k:
        raise ValueError(f"Invalid 'Q': \n has {Q.n_atoms} atoms but a family of {len(fam)} subspaces resolves at most {fam.k}")


def quantitative_bound(P:DiscreteMeasure, Q:DiscreteMeasure, fam:HeppesFamily):
    """
    Both sides of d_TV(P, Q) <= sum_j d_TV(P_{H_j}, Q_{H_j}) for Q with at most k atoms.

    Returns:
        tuple: ``(lhs, rhs)``

    Raises:
        ValueError: Q has more than k atoms, or dimensions differ
    """
    _check_bound_inputs(P, Q, fam)
    lhs = tv_distance(P, Q)
    rhs = sum(tv_distance(project_measure(H, P), project_measure(H, Q)) for H in fam)
    return lhs, float(rhs)


def pointwise_lemma_check(P:DiscreteMeasure, Q:DiscreteMeasure, fam:HeppesFamily, x:ArrayLike, slack:float = 1e-10) -> bool:
    """
    Check P({x}) - Q({x}) <= max_j (P_{H_j}({pi_j x}) - Q_{H_j}({pi_j x})) at the point x.
    """
    _check_bound_inputs(P, Q, fam)
    point = as_point(x, P.dim)
    lhs = P.mass_at(point) - Q.mass_at(point)
    rhs = max(project_measure(H, P).mass_at(project_point(H, point)) - project_measure(H, Q).mass_at(project_point(H, point)) for H in fam)
    return bool(lhs <= rhs + slack)
