"""Brute-force Fock-space oracle for fermionic quasi-free states.

Represents the CAR generators as explicit 2^n x 2^n matrices (Jordan-Wigner),
reconstructs the density matrix of a quasi-free state from its Wick moments,
and evaluates state overlaps directly. Exponential in the mode count — the
whole point is to be an independent check on the determinant formulas, so
everything here is as literal as possible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matcore
from .car import CarCovariance, validate_car
from .errors import SizeCapError
from .matcore import hermitian_part, sqrt_psd

__all__ = [
    "CliffordRep",
    "MAX_MODES",
    "density_from_covariance",
    "fidelity_tr",
    "jw_generators",
    "overlap",
]

MAX_MODES = 10

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class CliffordRep:
    """Hermitian matrices c_1..c_2n with c_j c_k + c_k c_j = 2 delta_jk."""

    n_modes: int
    generators: tuple

    @property
    def dim(self) -> int:
        return 2**self.n_modes


def _kron_chain(factors) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for f in factors:
        out = np.kron(out, f)
    return out


def jw_generators(n_modes: int) -> CliffordRep:
    """Jordan-Wigner representation: Z-strings followed by X or Y on one site."""
    if not 1 <= n_modes <= MAX_MODES:
        raise SizeCapError(f"n_modes must be in 1..{MAX_MODES}, got {n_modes}")
    gens = []
    for j in range(n_modes):
        prefix = [_Z] * j
        suffix = [_I2] * (n_modes - j - 1)
        for op in (_X, _Y):
            g = _kron_chain(prefix + [op] + suffix)
            g.setflags(write=False)
            gens.append(g)
    return CliffordRep(n_modes=n_modes, generators=tuple(gens))


def _subset_moment(s: np.ndarray, indices) -> complex:
    """Wick moment of the ordered product of basis generators in ``indices``."""
    sub = s[np.ix_(indices, indices)]
    skew = np.triu(sub, 1)
    skew = skew - skew.T
    return matcore.pfaffian(skew)


def density_from_covariance(s, rep: CliffordRep | None = None) -> np.ndarray:
    """Density matrix of the quasi-free state with covariance ``s``.

    Expands rho in the orthogonal basis of ordered generator monomials; the
    coefficient of each even monomial is its Wick moment (odd ones vanish).
    The result is verified Hermitian, trace one, and PSD within 1e-9 — a
    violation means a convention bug, so it raises instead of clamping.
    """
    cov = s if isinstance(s, CarCovariance) else validate_car(s)
    d = cov.dim
    if d % 2:
        raise SizeCapError(f"oracle needs an even dimension (pairs of generators), got {d}")
    if d > 2 * MAX_MODES:
        raise SizeCapError(f"dimension {d} exceeds oracle cap {2 * MAX_MODES}")
    n = d // 2
    if rep is None:
        rep = jw_generators(n)
    elif rep.n_modes != n:
        raise ValueError(f"representation has {rep.n_modes} modes, covariance needs {n}")

    sm = cov.matrix
    dim = rep.dim
    rho = np.eye(dim, dtype=complex) / dim

    # depth-first over ordered index subsets; each step extends the monomial
    # product by one generator, so the whole walk costs 2^d small matmuls
    def visit(start: int, indices: list, monomial: np.ndarray) -> None:
        k = len(indices)
        if k and k % 2 == 0:
            moment = _subset_moment(sm, indices)
            sign = -1.0 if (k * (k - 1) // 2) % 2 else 1.0
            rho[...] += (sign * 2.0 ** (k / 2.0) / dim * moment) * monomial
        if k < d:
            for j in range(start, d):
                visit(j + 1, indices + [j], monomial @ rep.generators[j])

    visit(0, [], np.eye(dim, dtype=complex))

    rho = hermitian_part(rho)
    trace_err = abs(float(np.trace(rho).real) - 1.0)
    if trace_err > 1e-10:
        raise RuntimeError(f"oracle density trace off by {trace_err:.3e} (convention bug)")
    w = np.linalg.eigvalsh(rho)
    if w[0] < -1e-9:
        raise RuntimeError(f"oracle density not PSD: eigenvalue {w[0]:.3e} (convention bug)")
    rho.setflags(write=False)
    return rho


def overlap(rho: np.ndarray, tau: np.ndarray) -> float:
    """tr(sqrt(rho) sqrt(tau)) for two density matrices, clipped to [0, 1]."""
    rho = np.asarray(rho, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    if rho.shape != tau.shape:
        raise ValueError(f"shape mismatch: {rho.shape} vs {tau.shape}")
    val = float(np.trace(sqrt_psd(rho) @ sqrt_psd(tau)).real)
    return float(np.clip(val, 0.0, 1.0))


def fidelity_tr(rho: np.ndarray, tau: np.ndarray) -> float:
    """Trace-norm fidelity tr|sqrt(rho) sqrt(tau)|, clipped to [0, 1].

    Dominates :func:`overlap` and is dominated by its square root.
    """
    rho = np.asarray(rho, dtype=complex)
    tau = np.asarray(tau, dtype=complex)
    if rho.shape != tau.shape:
        raise ValueError(f"shape mismatch: {rho.shape} vs {tau.shape}")
    sv = np.linalg.svd(sqrt_psd(rho) @ sqrt_psd(tau), compute_uv=False)
    return float(np.clip(float(np.sum(sv)), 0.0, 1.0))
