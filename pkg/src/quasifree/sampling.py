"""Random well-formed covariances for sweeps and stress tests."""

from __future__ import annotations

import numpy as np

from .car import CarCovariance, validate_car
from .ccr import CcrCovariance, validate_ccr

__all__ = [
    "random_car_covariance",
    "random_car_pair",
    "random_ccr_covariance",
    "random_ccr_pair",
    "random_orthogonal",
    "random_psd",
    "random_skew",
    "singular_overlap_car_pair",
]


def random_skew(rng: np.random.Generator, dim: int, complex_entries: bool = True) -> np.ndarray:
    """Random skew-symmetric matrix with entries of order one."""
    m = rng.standard_normal((dim, dim))
    if complex_entries:
        m = m + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (m - m.T)


def random_psd(rng: np.random.Generator, dim: int, complex_entries: bool = True) -> np.ndarray:
    m = rng.standard_normal((dim, dim))
    if complex_entries:
        m = m + 1j * rng.standard_normal((dim, dim))
    return (m @ m.conj().T) / dim


def random_orthogonal(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
    return q * np.sign(np.diag(r))


def random_car_covariance(
    rng: np.random.Generator, dim: int, radius: float | None = None
) -> CarCovariance:
    """Random covariance S = I/2 + iA with A real antisymmetric.

    ``radius`` in (0, 1/2] is the spectral radius of iA (distance from the
    tracial state); default draws it uniformly, so near-pure covariances
    (radius close to 1/2) do occur.
    """
    if radius is None:
        radius = rng.uniform(0.05, 0.5)
    a = random_skew(rng, dim, complex_entries=False)
    top = float(np.max(np.abs(np.linalg.eigvalsh(1j * a))))
    if top > 0.0:
        a *= radius / top
    return validate_car(0.5 * np.eye(dim) + 1j * a)


def random_car_pair(rng: np.random.Generator, dim: int):
    return random_car_covariance(rng, dim), random_car_covariance(rng, dim)


def singular_overlap_car_pair(rng: np.random.Generator, dim: int):
    """Pair with a shared direction that S fixes and T annihilates.

    The overlap matrix sqrt(S)sqrt(T) + sqrt(I-S)sqrt(I-T) kills that
    direction, so the transition probability is exactly zero while both
    covariances stay valid. Built from opposite pure 2-dim blocks conjugated
    by a common real orthogonal matrix; dim must be even and >= 2.
    """
    if dim < 2 or dim % 2:
        raise ValueError(f"need even dim >= 2, got {dim}")
    block = np.array([[0.5, -0.5j], [0.5j, 0.5]])
    rest = dim - 2
    if rest:
        filler_s = random_car_covariance(rng, rest).matrix
        filler_t = random_car_covariance(rng, rest).matrix
    else:
        filler_s = filler_t = np.zeros((0, 0))
    s = np.block(
        [[block, np.zeros((2, rest))], [np.zeros((rest, 2)), filler_s]]
    )
    t = np.block(
        [[np.conj(block), np.zeros((2, rest))], [np.zeros((rest, 2)), filler_t]]
    )
    o = random_orthogonal(rng, dim)
    return validate_car(o @ s @ o.T), validate_car(o @ t @ o.T)


def random_ccr_covariance(
    rng: np.random.Generator,
    sigma: np.ndarray,
    margin: float | None = None,
) -> CcrCovariance:
    """Random valid R for a given symplectic form.

    Starts from a random PSD form and shifts it until R + i*sigma/2 clears
    ``margin`` (default: a small random positive margin, so near-boundary
    covariances occur but validation never fails).
    """
    dim = sigma.shape[0]
    if margin is None:
        margin = float(rng.uniform(0.0, 0.2))
    r = random_psd(rng, dim, complex_entries=False)
    r = 0.5 * (r + r.T)
    w = np.linalg.eigvalsh(r + 0.5j * np.asarray(sigma))
    lift = max(0.0, margin - float(w[0]))
    return validate_ccr(sigma, r + lift * np.eye(dim))


def random_ccr_pair(rng: np.random.Generator, sigma: np.ndarray):
    return random_ccr_covariance(rng, sigma), random_ccr_covariance(rng, sigma)
