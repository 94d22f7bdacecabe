"""Shared sampling helpers for the test suite."""

import numpy as np

from randersflag import RandersStructure, heisenberg5


def unit(rng, dim=5):
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def unit_in_plane(rng, first, dim=5):
    """Uniform unit vector in span(e_{first+1}, e_{first+2}) (0-based first)."""
    theta = rng.uniform(0.0, 2.0 * np.pi)
    v = np.zeros(dim)
    v[first] = np.cos(theta)
    v[first + 1] = np.sin(theta)
    return v


def random_heisenberg_params(rng):
    """Admissible (lam, mu, xi) with lam >= mu > 0 and 0 < xi < 1."""
    mu = rng.uniform(0.3, 2.5)
    lam = mu + rng.uniform(0.0, 2.5)
    xi = rng.uniform(0.05, 0.95)
    return lam, mu, xi


def z_randers(lam, mu, xi):
    """Heisenberg-5 structure with center deformation x0 = xi * Z."""
    x0 = np.zeros(5)
    x0[4] = xi
    return RandersStructure(heisenberg5(lam, mu), x0)


def abelian_structure(dim=5, x0=None):
    from randersflag import MetricLieAlgebra

    algebra = MetricLieAlgebra(np.zeros((dim, dim, dim)))
    return RandersStructure(algebra, np.zeros(dim) if x0 is None else x0)
