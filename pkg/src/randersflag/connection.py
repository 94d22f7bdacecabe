"""Chern-Rund and Levi-Civita connections of left-invariant Randers metrics.

For left-invariant fields the directional-derivative terms of the generalized
Koszul formula drop out, leaving an algebraic system for the connection
coefficients at a fixed reference vector.  The system is triangular in three
stages -- nabla_w w, then nabla_x w for basis x, then nabla_x y -- because
every Cartan correction appearing in an earlier stage carries a w slot and
therefore vanishes.  Each stage is one symmetric-positive-definite solve
against the cached osculating Gram factorization; no iteration is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .lie_algebra import MetricLieAlgebra, _as_vector
from .randers import OsculatingFrame, RandersStructure

#: Center coordinates larger than this disqualify a pole from the adapted
#: orthogonal construction below.
CENTER_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ConnectionTable:
    """Connection coefficients at a fixed reference vector.

    ``gamma[i, j, k]`` holds the e_k coordinate of nabla_{e_i} e_j in the
    fixed orthonormal basis.  Torsion-freeness ties gamma back to the algebra:
    gamma[i, j] - gamma[j, i] equals the coordinates of [e_i, e_j].
    """

    frame: OsculatingFrame
    gamma: np.ndarray

    def derivative(self, x, y) -> np.ndarray:
        """Coordinates of nabla_x y for constant-coefficient (left-invariant)
        fields; bilinear in (x, y)."""
        dim = self.frame.dim
        x = _as_vector(x, dim)
        y = _as_vector(y, dim)
        return np.einsum("i,j,ijk->k", x, y, self.gamma)


def nabla_w_of_w(frame: OsculatingFrame) -> np.ndarray:
    """Covariant derivative of the reference vector along itself.

    Solves <v, e_i>_w = <[e_i, w], w>_w; every Cartan correction carries a w
    slot and vanishes, so this stage needs no prior data.
    """
    c = frame.structure.algebra.structure
    q, gram = frame.w, frame.gram
    rhs = np.einsum("ijk,j,kl,l->i", c, q, gram, q)
    return frame.solve(rhs)


def _nabla_x_w_rows(frame: OsculatingFrame, nww: np.ndarray) -> np.ndarray:
    """Row j holds nabla_{e_j} w.  Uses the stage-1 vector in the single
    surviving Cartan correction (the other two carry a w slot)."""
    c = frame.structure.algebra.structure
    q, gram, cartan = frame.w, frame.gram, frame.cartan_tensor
    bw = np.einsum("jik,i->jk", c, q)  # [e_j, w]
    t1 = bw @ gram  # <[e_j, w], e_k>_w
    wb = np.einsum("ikm,i->km", c, q)  # [w, e_k]
    t2 = (wb @ gram).T  # <[w, e_k], e_j>_w, indexed [j, k]
    t3 = np.einsum("kjm,ml,l->jk", c, gram, q)  # <[e_k, e_j], w>_w
    correction = np.einsum("m,mkj->jk", nww, cartan)
    rhs = 0.5 * (t1 - t2 + t3) - correction
    return frame.solve(rhs.T).T


def nabla_x_w_map(frame: OsculatingFrame) -> np.ndarray:
    """Matrix of x -> nabla_x w; column j holds nabla_{e_j} w.

    Applying the map to the reference vector itself reproduces
    :func:`nabla_w_of_w`.
    """
    return _nabla_x_w_rows(frame, nabla_w_of_w(frame)).T.copy()


def chern_rund_table(frame: OsculatingFrame) -> ConnectionTable:
    """All connection coefficients nabla_{e_i} e_j at the frame's reference
    vector, via the staged Koszul solve (one SPD solve per (i, j) pair)."""
    c = frame.structure.algebra.structure
    gram, cartan = frame.gram, frame.cartan_tensor
    dim = frame.dim
    rows = _nabla_x_w_rows(frame, nabla_w_of_w(frame))
    term1 = np.einsum("ijm,mk->ijk", c, gram)  # <[e_i, e_j], e_k>_w
    term2 = np.einsum("jkm,mi->ijk", c, gram)  # <[e_j, e_k], e_i>_w
    term3 = np.einsum("kim,mj->ijk", c, gram)  # <[e_k, e_i], e_j>_w
    corr1 = np.einsum("im,mjk->ijk", rows, cartan)
    corr2 = np.einsum("jm,mki->ijk", rows, cartan)
    corr3 = np.einsum("km,mij->ijk", rows, cartan)
    rhs = 0.5 * (term1 - term2 + term3) - corr1 - corr2 + corr3
    gamma = frame.solve(rhs.reshape(dim * dim, dim).T).T.reshape(dim, dim, dim)
    return ConnectionTable(frame=frame, gamma=gamma)


def levi_civita_table(algebra: MetricLieAlgebra) -> ConnectionTable:
    """Levi-Civita connection of the Euclidean product, directly from the
    bracket terms of the Koszul formula against the identity Gram matrix.

    Independent of the staged solver; with a zero deformation vector,
    :func:`chern_rund_table` must coincide with it for any reference vector.
    """
    c = algebra.structure
    gamma = 0.5 * (c - np.einsum("jki->ijk", c) + np.einsum("kij->ijk", c))
    zero = RandersStructure(algebra, np.zeros(algebra.dim))
    frame = zero.osculating_gram(algebra.basis_vector(0))
    return ConnectionTable(frame=frame, gamma=gamma)


def torsion_defect(table: ConnectionTable) -> float:
    """Largest Euclidean norm over (i, j) of
    nabla_{e_i} e_j - nabla_{e_j} e_i - [e_i, e_j]; contract: <= 1e-10."""
    c = table.frame.structure.algebra.structure
    defect = table.gamma - np.swapaxes(table.gamma, 0, 1) - c
    return float(np.sqrt((defect**2).sum(axis=2)).max())


def almost_metric_defect(table: ConnectionTable) -> float:
    """Largest violation of the almost-metric identity over basis triples.

    For left-invariant fields the derivative of the inner product vanishes, so
    <nabla_{e_i} e_j, e_k>_w + <e_j, nabla_{e_i} e_k>_w
    + 2 * C_w(nabla_{e_i} w, e_j, e_k) must be zero; contract: <= 1e-10.
    """
    gram = table.frame.gram
    cartan = table.frame.cartan_tensor
    rows = np.einsum("ijk,j->ik", table.gamma, table.frame.w)  # nabla_{e_i} w
    s1 = np.einsum("ijm,mk->ijk", table.gamma, gram)
    s2 = np.einsum("ikm,mj->ijk", table.gamma, gram)
    s3 = 2.0 * np.einsum("im,mjk->ijk", rows, cartan)
    return float(np.abs(s1 + s2 + s3).max())


def w_perp(algebra: MetricLieAlgebra, w) -> np.ndarray:
    """Distinguished orthogonal direction of a center-free pole on the
    five-dimensional Heisenberg model.

    For w = w1 e1 + w2 e2 + w3 e3 + w4 e4 returns
    lam*w2 e1 - lam*w1 e2 + mu*w4 e3 - mu*w3 e4, which is Euclidean-orthogonal
    to w.  Specific to the heisenberg5 bracket layout.
    """
    if algebra.dim != 5:
        raise DomainError("w_perp is defined only on the 5-dimensional Heisenberg model")
    w = _as_vector(w, 5)
    if abs(w[4]) > CENTER_TOL:
        raise DomainError(
            f"pole must be center-free (|center component| = {abs(w[4]):.3g} > {CENTER_TOL:g})"
        )
    lam = float(algebra.structure[0, 1, 4])
    mu = float(algebra.structure[2, 3, 4])
    return np.array([lam * w[1], -lam * w[0], mu * w[3], -mu * w[2], 0.0])
