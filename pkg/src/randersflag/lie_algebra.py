"""Finite-dimensional real metric Lie algebras given by structure constants.

The basis (e_1, ..., e_n) is implicitly orthonormal for the ambient Euclidean
inner product, so the Euclidean Gram matrix is the identity and is never
stored.  Vectors are plain float ndarrays of coordinates in that basis.
Indices are 0-based in code; documentation and config files use the 1-based
labels e_1..e_n, so ``e_i`` is ``coords[i-1]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, ParameterError

#: Absolute tolerance for the antisymmetry and Jacobi defects on unit-scale
#: structure constants.  Inputs are exact user-provided reals, so any defect
#: reflects entry error rather than round-off.
VALIDATION_TOL = 1e-12


def _as_vector(x, dim: int) -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (dim,):
        raise DimensionMismatch(
            f"expected a coordinate vector of length {dim}, got shape {v.shape}"
        )
    return v


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class ValidationReport:
    """Largest antisymmetry and Jacobi defects over all basis tuples."""

    antisymmetry_defect: float
    jacobi_defect: float
    tolerance: float = VALIDATION_TOL

    @property
    def passed(self) -> bool:
        return (
            self.antisymmetry_defect <= self.tolerance
            and self.jacobi_defect <= self.tolerance
        )


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    """Lie algebra with bracket [e_i, e_j] = sum_k structure[i, j, k] e_k.

    ``structure`` is a dense (dim, dim, dim) array of bracket coefficients on
    the fixed orthonormal basis.  Instances are immutable after construction
    and safe to share across threads; all operations are pure.
    """

    structure: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.structure, dtype=float)
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[0] != c.shape[2]:
            raise DimensionMismatch(
                f"structure constants must have shape (n, n, n), got {c.shape}"
            )
        if c.shape[0] == 0:
            raise ParameterError("dimension must be positive")
        object.__setattr__(self, "structure", _frozen(c))

    @property
    def dim(self) -> int:
        return self.structure.shape[0]

    def basis_vector(self, i: int) -> np.ndarray:
        """Coordinate vector of e_{i+1} (0-based ``i``)."""
        v = np.zeros(self.dim)
        v[i] = 1.0
        return v

    def bracket(self, x, y) -> np.ndarray:
        """Lie bracket [x, y]; bilinear and antisymmetric."""
        x = _as_vector(x, self.dim)
        y = _as_vector(y, self.dim)
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def validate(self) -> ValidationReport:
        """Check antisymmetry and the Jacobi identity on all basis tuples.

        Returns a report rather than raising: callers decide whether a defect
        is fatal.  Both defects must be <= ``VALIDATION_TOL`` to pass.
        """
        c = self.structure
        antisymmetry = float(np.abs(c + np.swapaxes(c, 0, 1)).max())
        # [e_i, [e_j, e_k]] + [e_j, [e_k, e_i]] + [e_k, [e_i, e_j]], all components
        jacobi = float(
            np.abs(
                np.einsum("jkl,ilm->ijkm", c, c)
                + np.einsum("kil,jlm->ijkm", c, c)
                + np.einsum("ijl,klm->ijkm", c, c)
            ).max()
        )
        return ValidationReport(antisymmetry, jacobi)


def heisenberg5(lam: float, mu: float) -> MetricLieAlgebra:
    """Five-dimensional Heisenberg algebra in an orthonormal adapted basis.

    Basis order is (e1, e2, e3, e4, Z) with the one-dimensional center spanned
    by Z = e5.  The only nonzero brackets are [e1, e2] = lam * Z and
    [e3, e4] = mu * Z, normalized to lam >= mu > 0.
    """
    if not (lam >= mu > 0.0):
        raise ParameterError(f"heisenberg5 requires lam >= mu > 0, got lam={lam}, mu={mu}")
    c = np.zeros((5, 5, 5))
    c[0, 1, 4] = lam
    c[1, 0, 4] = -lam
    c[2, 3, 4] = mu
    c[3, 2, 4] = -mu
    return MetricLieAlgebra(c)
