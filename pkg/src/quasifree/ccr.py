"""Quasi-free states of the CCR (Weyl) algebra over a presymplectic space.

A state is given by a real symmetric form R on V (the Gaussian width of the
characteristic function) such that S = R + i*sigma/2 is PSD on the
complexification; sigma may be degenerate, in which case the algebra has a
nontrivial center and states can become disjoint through central elements.

The transition probability between two such states is a determinant of
support-restricted operator means; classification into quasi-equivalent vs
disjoint reads off whether it vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import matcore
from .errors import CovarianceError, SupportError
from .matcore import eig_h, hermitian_part, hs_norm, sqrt_psd

__all__ = [
    "CENTRAL_ELEMENT_MISMATCH",
    "CcrCovariance",
    "CcrVerdict",
    "DISJOINT",
    "POSITIVE_TRANSITION_PROBABILITY",
    "QUASI_EQUIVALENT",
    "SUPPORT_MISMATCH",
    "ab_form",
    "canonical_sigma",
    "char_value",
    "classify_ccr",
    "condition3_distance",
    "is_standard_ccr",
    "qe_distance_ccr",
    "thermal_covariance",
    "trans_prob_ccr",
    "validate_ccr",
]

VALIDATION_TOL = 1e-10
# A ratio eigenvalue below this is a kernel direction of one of the forms ...
KERNEL_TOL = 1e-10
# ... and the pair is disjoint if the other form exceeds this on it.
FORM_POSITIVE_TOL = 1e-8
# Mutual-domination condition bound for metric equivalence.
CONDITION_BOUND = 1e12

QUASI_EQUIVALENT = "QuasiEquivalent"
DISJOINT = "Disjoint"
POSITIVE_TRANSITION_PROBABILITY = "PositiveTransitionProbability"
CENTRAL_ELEMENT_MISMATCH = "CentralElementMismatch"
SUPPORT_MISMATCH = "SupportMismatch"


@dataclass(frozen=True)
class CcrCovariance:
    """Validated pair (sigma, R): sigma real antisymmetric, R real symmetric,
    with R + i*sigma/2 PSD."""

    sigma: np.ndarray
    r: np.ndarray

    @property
    def dim(self) -> int:
        return self.r.shape[0]

    @property
    def s_matrix(self) -> np.ndarray:
        """The sesquilinear covariance form S = R + i*sigma/2."""
        return self.r + 0.5j * self.sigma

    @property
    def conj_s_matrix(self) -> np.ndarray:
        return self.r - 0.5j * self.sigma


def _as_real(m, name: str) -> np.ndarray:
    m = np.asarray(m)
    if np.iscomplexobj(m):
        if float(np.max(np.abs(m.imag), initial=0.0)) > 1e-12:
            raise CovarianceError(f"{name} must be real")
        m = m.real
    return np.asarray(m, dtype=float)


def validate_ccr(sigma, r, tol: float = VALIDATION_TOL) -> CcrCovariance:
    """Check that R + i*sigma/2 is PSD; antisymmetrize/symmetrize exactly.

    The error message carries the minimal eigenvalue when positivity fails.
    """
    sigma = _as_real(sigma, "sigma")
    r = _as_real(r, "R")
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise CovarianceError(f"sigma must be square, got shape {sigma.shape}")
    if r.shape != sigma.shape:
        raise CovarianceError(f"shape mismatch: sigma {sigma.shape} vs R {r.shape}")
    sigma = 0.5 * (sigma - sigma.T)
    r = 0.5 * (r + r.T)
    s = r + 0.5j * sigma
    w = np.linalg.eigvalsh(s)
    scale = 1.0 + float(np.max(np.abs(s), initial=0.0))
    if w.size and w[0] < -tol * scale:
        raise CovarianceError(
            f"not a covariance form: minimal eigenvalue of R + i*sigma/2 is {w[0]:.6e}"
        )
    sigma.setflags(write=False)
    r.setflags(write=False)
    return CcrCovariance(sigma=sigma, r=r)


def canonical_sigma(n_modes: int) -> np.ndarray:
    """Standard symplectic form on n modes in (q..., p...) order."""
    eye = np.eye(n_modes)
    zero = np.zeros((n_modes, n_modes))
    return np.block([[zero, eye], [-eye, zero]])


def thermal_covariance(c: float, n_modes: int = 1) -> CcrCovariance:
    """Product thermal covariance R = (c/2) I on the canonical form, c >= 1."""
    return validate_ccr(canonical_sigma(n_modes), 0.5 * c * np.eye(2 * n_modes))


def _check_same_space(a: CcrCovariance, b: CcrCovariance) -> None:
    if a.dim != b.dim:
        raise CovarianceError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if float(np.max(np.abs(a.sigma - b.sigma), initial=0.0)) > 1e-12:
        raise CovarianceError("covariances live on different symplectic forms")


def char_value(cov: CcrCovariance, x) -> float:
    """Characteristic function at a real vector: exp(-R(x, x)/2)."""
    x = _as_real(x, "x")
    if x.shape != (cov.dim,):
        raise CovarianceError(f"vector length {x.shape} does not match dim {cov.dim}")
    return float(math.exp(-0.5 * float(x @ cov.r @ x)))


def ab_form(cov: CcrCovariance) -> np.ndarray:
    """The symmetrized form A with 2A = S + 2*gm(S, conj S) + conj S.

    Equals R plus the operator geometric mean of S and its conjugate; real
    symmetric PSD, and sandwiched between (S + conj S)/2 and S + conj S.
    """
    s = cov.s_matrix
    return hermitian_part(cov.r + matcore.geometric_mean(s, cov.conj_s_matrix))


@dataclass(frozen=True)
class CcrVerdict:
    kind: str
    reason: str
    transition_probability: float
    diagnostics: dict = field(default_factory=dict)


def _transition_analysis(
    cov_s: CcrCovariance, cov_t: CcrCovariance, support_tol: float = 1e-10
):
    """Shared computation behind trans_prob_ccr and classify_ccr.

    Returns (t, reason, diagnostics).
    """
    _check_same_space(cov_s, cov_t)
    a = ab_form(cov_s)
    b = ab_form(cov_t)
    g = hermitian_part(a + b)

    w, v = eig_h(g)
    thr = support_tol * max(float(np.trace(g).real), 0.0)
    keep = w > thr
    r = int(np.count_nonzero(keep))
    diagnostics: dict = {"support_dim": r}
    if r == 0:
        # both forms vanish entirely: the two states coincide (trivial character)
        return 1.0, POSITIVE_TRANSITION_PROBABILITY, diagnostics

    basis = v[:, keep]
    scaled = basis * (1.0 / np.sqrt(w[keep]))
    ra = hermitian_part(scaled.conj().T @ a @ scaled)
    rb = hermitian_part(scaled.conj().T @ b @ scaled)

    # central-element detection: a kernel direction of one form inside supp(G)
    # on which the other form is positive makes the states disjoint
    for this, other, label in ((ra, b, "A"), (rb, a, "B")):
        wt, vt = np.linalg.eigh(this)
        for idx in np.nonzero(wt < KERNEL_TOL)[0]:
            h = basis @ vt[:, idx]
            other_val = float((h.conj() @ other @ h).real)
            if other_val > FORM_POSITIVE_TOL:
                diagnostics["central_witness"] = {
                    "side": label,
                    "ratio_eigenvalue": float(wt[idx]),
                    "other_form_value": other_val,
                }
                return 0.0, CENTRAL_ELEMENT_MISMATCH, diagnostics

    gm_ab, info = matcore.geometric_mean(a, b, return_info=True)
    diagnostics["ab_support_mismatch"] = info.support_mismatch
    core = hermitian_part(scaled.conj().T @ (2.0 * gm_ab) @ scaled)
    wc = np.clip(np.linalg.eigvalsh(core), 0.0, 1.0)
    diagnostics["det_eigenvalues"] = [float(x) for x in wc]
    if np.any(wc <= 1e-13):
        # a vanishing determinant factor that escaped the witness check above
        return 0.0, CENTRAL_ELEMENT_MISMATCH, diagnostics
    t = float(math.exp(0.5 * float(np.sum(np.log(wc)))))
    return min(t, 1.0), POSITIVE_TRANSITION_PROBABILITY, diagnostics


def trans_prob_ccr(cov_s: CcrCovariance, cov_t: CcrCovariance) -> float:
    """Transition probability between two quasi-free CCR states.

    The square is det(2 * ratio(gm(A, B), A + B)) over the support of A + B,
    with A, B the symmetrized forms of :func:`ab_form`; it vanishes exactly
    when a central element separates the states.
    """
    return _transition_analysis(cov_s, cov_t)[0]


def classify_ccr(cov_s: CcrCovariance, cov_t: CcrCovariance, tol: float = 1e-12) -> CcrVerdict:
    """Quasi-equivalent vs disjoint dichotomy for a pair of states.

    In finite dimension the two states are quasi-equivalent exactly when the
    transition probability is positive, otherwise disjoint.
    """
    t, reason, diagnostics = _transition_analysis(cov_s, cov_t)
    equiv, hs_dist = qe_distance_ccr(cov_s, cov_t)
    diagnostics = dict(diagnostics)
    diagnostics["metric_equivalent"] = equiv
    diagnostics["qe_hs_distance"] = hs_dist
    if t > tol:
        return CcrVerdict(
            kind=QUASI_EQUIVALENT,
            reason=POSITIVE_TRANSITION_PROBABILITY,
            transition_probability=t,
            diagnostics=diagnostics,
        )
    return CcrVerdict(
        kind=DISJOINT,
        reason=reason if reason != POSITIVE_TRANSITION_PROBABILITY else SUPPORT_MISMATCH,
        transition_probability=t,
        diagnostics=diagnostics,
    )


def qe_distance_ccr(
    cov_s: CcrCovariance,
    cov_t: CcrCovariance,
    support_tol: float = 1e-10,
    cond_bound: float = CONDITION_BOUND,
):
    """Metric-equivalence flag and HS distance of covariance-ratio roots.

    Returns ``(equiv_metrics, hs_dist)``: the flag says whether S + conj S
    and T + conj T induce equivalent inner products (equal supports, mutual
    domination within ``cond_bound``); the distance is
    ||sqrt(ratio(S, S + conj S)) - sqrt(ratio(T, T + conj T))||. When the flag
    is False the distance slot is +inf (the criterion fails outright).
    """
    _check_same_space(cov_s, cov_t)
    gs = 2.0 * cov_s.r
    gt = 2.0 * cov_t.r

    ps = matcore.support_projection(gs, support_tol)
    pt = matcore.support_projection(gt, support_tol)
    if hs_norm(ps - pt) > 1e-6:
        return False, math.inf
    rank = int(round(float(np.trace(ps).real)))
    if rank > 0:
        try:
            wr = np.linalg.eigvalsh(matcore.ratio(gs, gt))
        except SupportError:
            return False, math.inf
        pos = wr[wr > 1e-15]
        if pos.size != rank:
            return False, math.inf
        lo, hi = float(pos[0]), float(pos[-1])
        if hi / lo > cond_bound:
            return False, math.inf

    xs = sqrt_psd(matcore.ratio(cov_s.s_matrix, gs))
    xt = sqrt_psd(matcore.ratio(cov_t.s_matrix, gt))
    return True, hs_norm(xs - xt)


def condition3_distance(cov_s: CcrCovariance, cov_t: CcrCovariance) -> float:
    """HS distance of the ratio roots of X = (sqrt S + sqrt conj S)^2.

    Diagnostic companion to :func:`qe_distance_ccr` (same finiteness class on
    sequences); classification never branches on it.
    """
    _check_same_space(cov_s, cov_t)

    def x_form(cov: CcrCovariance) -> np.ndarray:
        root = sqrt_psd(cov.s_matrix)
        m = root + np.conj(root)
        return hermitian_part(m @ m)

    x = x_form(cov_s)
    y = x_form(cov_t)
    g = hermitian_part(x + y)
    rx = matcore.ratio(x, g)
    ry = matcore.ratio(y, g)
    return hs_norm(sqrt_psd(rx) - sqrt_psd(ry))


def is_standard_ccr(cov: CcrCovariance, tol: float = 1e-10) -> bool:
    """Whether ratio(S, S + conj S) has trivial kernel on the metric support.

    Fails for states with a pure factor (e.g. the vacuum), holds for fully
    thermal states; on a trivial metric support it holds vacuously.
    """
    g = 2.0 * cov.r
    basis, wk = matcore._support_basis(g, tol=1e-10)
    if basis.shape[1] == 0:
        return True
    scaled = basis * (1.0 / np.sqrt(wk))
    core = hermitian_part(scaled.conj().T @ cov.s_matrix @ scaled)
    w = np.linalg.eigvalsh(core)
    return bool(w[0] > tol)
