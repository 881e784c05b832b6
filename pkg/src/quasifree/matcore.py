"""Dense matrix calculus: Hermitian eigenroutines, Pfaffians, operator means.

Everything operates on plain complex numpy arrays. Inputs are explicitly
symmetrized (Hermitian ops) or antisymmetrized (skew ops) before use, all
spectral computations go through ``numpy.linalg.eigh``, and eigenvalues below
a relative clamp threshold are treated as structural zeros. Results are
deterministic for identical input bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveError, SupportError

__all__ = [
    "PSD_CLAMP_TOL",
    "SUPPORT_TOL",
    "GeometricMeanInfo",
    "conj_matrix",
    "eig_h",
    "geometric_mean",
    "hermitian_part",
    "hs_norm",
    "pfaffian",
    "pfaffian_pairings",
    "projection_defect",
    "projection_meet",
    "ratio",
    "sqrt_psd",
    "support_projection",
]

# Relative threshold below which eigenvalues count as exact zeros.
PSD_CLAMP_TOL = 1e-10
# Relative threshold for membership in the support (range) of a PSD operator.
SUPPORT_TOL = 1e-10

_PAIRING_DIM_CAP = 12


def conj_matrix(x: np.ndarray) -> np.ndarray:
    """Entrywise complex conjugate (the conjugation V^C -> V^C fixing V)."""
    return np.conj(np.asarray(x))


def hermitian_part(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return 0.5 * (x + x.conj().T)


def hs_norm(x: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(np.asarray(x)))


def _check_square(x: np.ndarray, name: str) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {x.shape}")
    return x


def eig_h(h: np.ndarray):
    """Eigendecomposition of the Hermitian part of ``h``.

    Returns ``(w, v)`` with eigenvalues ascending and orthonormal eigenvector
    columns, so ``(v * w) @ v.conj().T`` reconstructs the Hermitian part.
    """
    _check_square(h, "matrix")
    return np.linalg.eigh(hermitian_part(h))


def sqrt_psd(h: np.ndarray, clamp_tol: float = PSD_CLAMP_TOL) -> np.ndarray:
    """Positive-semidefinite square root via eigendecomposition.

    Eigenvalues in ``[-clamp_tol * ||h||, 0)`` are clamped to zero; anything
    below that raises :class:`NotPositiveError`.
    """
    w, v = eig_h(h)
    scale = float(np.max(np.abs(w), initial=0.0))
    if scale > 0.0 and w[0] < -clamp_tol * scale:
        raise NotPositiveError(
            f"matrix is not PSD: minimal eigenvalue {w[0]:.6e} "
            f"(clamp threshold {-clamp_tol * scale:.1e})",
            float(w[0]),
        )
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def support_projection(h: np.ndarray, tol: float = SUPPORT_TOL) -> np.ndarray:
    """Orthogonal projection onto the span of eigenvectors with |eigenvalue| above tol*||h||."""
    b, _ = _support_basis(h, tol)
    return b @ b.conj().T


def _support_basis(h: np.ndarray, tol: float = SUPPORT_TOL):
    """Orthonormal basis of the support of the Hermitian part of ``h``."""
    w, v = eig_h(h)
    scale = float(np.max(np.abs(w), initial=0.0))
    keep = np.abs(w) > tol * scale if scale > 0.0 else np.zeros_like(w, dtype=bool)
    return v[:, keep], w[keep]


def pfaffian(a: np.ndarray) -> complex:
    """Pfaffian of a complex skew-symmetric matrix by Parlett-Reid elimination.

    The input is antisymmetrized (``(a - a.T)/2``) first. Convention:
    ``pfaffian([[0, x], [-x, 0]]) == x``, and ``pfaffian(a)**2 == det(a)``.
    Odd dimension is a contract violation; an empty matrix has Pfaffian 1.
    """
    a = _check_square(np.asarray(a, dtype=complex), "skew matrix")
    d = a.shape[0]
    if d % 2:
        raise ValueError(f"pfaffian needs even dimension, got {d}")
    if d == 0:
        return 1.0 + 0.0j
    a = 0.5 * (a - a.T)
    val = 1.0 + 0.0j
    for k in range(0, d - 1, 2):
        # pivot the largest entry of column k into position (k+1, k)
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1 :, k])))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            val = -val
        if a[k + 1, k] == 0.0:
            return 0.0 + 0.0j
        val *= a[k, k + 1]
        if k + 2 < d:
            tau = a[k, k + 2 :] / a[k, k + 1]
            col = a[k + 2 :, k + 1]
            a[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return complex(val)


def pfaffian_pairings(a: np.ndarray) -> complex:
    """Pfaffian as the exhaustive signed sum over pair partitions, O((d-1)!!).

    Brute-force cross-check for :func:`pfaffian`; refuses dimensions above
    12 where the enumeration explodes.
    """
    a = _check_square(np.asarray(a, dtype=complex), "skew matrix")
    d = a.shape[0]
    if d % 2:
        raise ValueError(f"pfaffian needs even dimension, got {d}")
    if d > _PAIRING_DIM_CAP:
        raise ValueError(
            f"pairing enumeration is exponential; dimension {d} exceeds cap "
            f"{_PAIRING_DIM_CAP}, use pfaffian()"
        )
    a = 0.5 * (a - a.T)

    def expand(idx: tuple) -> complex:
        if not idx:
            return 1.0 + 0.0j
        first, rest = idx[0], idx[1:]
        total = 0.0 + 0.0j
        sign = 1.0
        for pos, j in enumerate(rest):
            sub = rest[:pos] + rest[pos + 1 :]
            total += sign * a[first, j] * expand(sub)
            sign = -sign
        return total

    return complex(expand(tuple(range(d))))


@dataclass(frozen=True)
class GeometricMeanInfo:
    """Support metadata from a geometric-mean computation."""

    support_mismatch: bool
    support_dim: int


def geometric_mean(
    a: np.ndarray,
    b: np.ndarray,
    reg: float = PSD_CLAMP_TOL,
    return_info: bool = False,
):
    """Operator geometric mean of two PSD matrices, restricted to their common support.

    On the common support this is the usual
    ``a^{1/2} (a^{-1/2} b a^{-1/2})^{1/2} a^{1/2}`` (the variational operator
    mean); off the common support the result is zero. Eigenvalues at or below
    ``reg * trace`` count as outside the support. With ``return_info=True``
    also returns a :class:`GeometricMeanInfo` flagging whether the two
    supports differ.
    """
    a = hermitian_part(_check_square(a, "first matrix"))
    b = hermitian_part(_check_square(b, "second matrix"))
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    d = a.shape[0]

    supports = []
    for m, name in ((a, "first matrix"), (b, "second matrix")):
        w, v = np.linalg.eigh(m)
        scale = float(np.max(np.abs(w), initial=0.0))
        if scale > 0.0 and w[0] < -reg * scale:
            raise NotPositiveError(
                f"{name} is not PSD: minimal eigenvalue {w[0]:.6e}", float(w[0])
            )
        thr = reg * max(float(np.trace(m).real), 0.0)
        keep = w > thr
        supports.append(v[:, keep])

    ba, bb = supports
    # common support = eigenvalue-2 space of the sum of the two support projections
    ww, vv = np.linalg.eigh(ba @ ba.conj().T + bb @ bb.conj().T)
    common = vv[:, ww >= 2.0 - 1e-8]
    r = common.shape[1]
    mismatch = r < max(ba.shape[1], bb.shape[1])

    if r == 0:
        g = np.zeros((d, d), dtype=complex)
    else:
        a_r = hermitian_part(common.conj().T @ a @ common)
        b_r = hermitian_part(common.conj().T @ b @ common)
        wa, va = np.linalg.eigh(a_r)
        root = (va * np.sqrt(wa)) @ va.conj().T
        inv_root = (va * (1.0 / np.sqrt(wa))) @ va.conj().T
        mid = sqrt_psd(inv_root @ b_r @ inv_root)
        core = hermitian_part(root @ mid @ root)
        g = common @ core @ common.conj().T

    g = hermitian_part(g)
    if return_info:
        return g, GeometricMeanInfo(support_mismatch=mismatch, support_dim=r)
    return g


def ratio(x: np.ndarray, g: np.ndarray, tol: float = SUPPORT_TOL) -> np.ndarray:
    """``g^{-1/2} x g^{-1/2}`` with the pseudo-inverse root, zero off supp(g).

    Requires supp(x) contained in supp(g); a violating direction raises
    :class:`SupportError` carrying a witness vector.
    """
    x = hermitian_part(_check_square(x, "numerator"))
    g = _check_square(g, "denominator")
    if x.shape != g.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {g.shape}")
    w, v = eig_h(g)
    scale = float(np.max(np.abs(w), initial=0.0))
    keep = w > tol * scale if scale > 0.0 else np.zeros_like(w, dtype=bool)
    null = v[:, ~keep]
    if null.size:
        leak = np.linalg.norm(x @ null, axis=0)
        bound = 1e-8 * (1.0 + hs_norm(x))
        if np.any(leak > bound):
            j = int(np.argmax(leak))
            raise SupportError(
                f"support violation: |X v| = {leak[j]:.3e} on a kernel vector of "
                f"the denominator (bound {bound:.1e})",
                null[:, j].copy(),
            )
    basis = v[:, keep]
    scaled = basis * (1.0 / np.sqrt(w[keep]))
    core = hermitian_part(scaled.conj().T @ x @ scaled)
    return hermitian_part((basis @ core) @ basis.conj().T)


def projection_meet(p: np.ndarray, r: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Projection onto ran(p) ∩ ran(r): the eigenvalue-2 space of p + r."""
    p = _check_square(p, "first projection")
    r = _check_square(r, "second projection")
    if p.shape != r.shape:
        raise ValueError(f"shape mismatch: {p.shape} vs {r.shape}")
    w, v = eig_h(np.asarray(p, dtype=complex) + np.asarray(r, dtype=complex))
    basis = v[:, w >= 2.0 - tol]
    return basis @ basis.conj().T


def projection_defect(p: np.ndarray) -> float:
    """HS distance from idempotence, ||p @ p - p||."""
    p = np.asarray(p, dtype=complex)
    return hs_norm(p @ p - p)
