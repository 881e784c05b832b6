"""Infinite products of quasi-free states, truncated to finite mode sequences.

A :class:`ModeFamily` is a rule k -> (S_k, T_k) of same-kind covariance pairs,
one independent mode per index. Quasi-equivalence of the product states is
decided by summability of per-mode quasi-equivalence distances; disjointness
by divergence (equivalently, by the transition probability product collapsing
to zero). The classifier reports partial sums at checkpoints and is explicit
about inconclusiveness when the window is too short to call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import car, ccr
from .errors import ConsistencyViolation

__all__ = [
    "CAR",
    "CCR",
    "HS_CONVERGENT",
    "HS_DIVERGENCE",
    "INCONCLUSIVE",
    "ModeFamily",
    "SequenceVerdict",
    "car_counterexample",
    "car_mu_sequence",
    "car_power_family",
    "ccr_thermal_power_family",
    "ccr_thermal_sequence",
    "classify_sequence",
    "concat_families",
    "literal_family",
    "partial_log_tp",
    "partial_qe_sum",
]

CAR = "car"
CCR = "ccr"

INCONCLUSIVE = "Inconclusive"
HS_CONVERGENT = "HSConvergent"
HS_DIVERGENCE = "HSDivergence"

# transition probabilities at or below this floor count as exact zero
TP_FLOOR = 1e-14
DEFAULT_N_MAX = 4096
MIN_N_MAX = 64
DEFAULT_EPS = 1e-3
DIVERGENCE_FACTOR = 10.0


@dataclass(frozen=True)
class ModeFamily:
    """Rule-based sequence of independent covariance pairs of one kind."""

    kind: str
    label: str
    rule: Callable[[int], tuple]

    def pair_at(self, k: int):
        """The (S_k, T_k) pair at mode index k >= 1."""
        if k < 1:
            raise ValueError(f"mode index must be >= 1, got {k}")
        return self.rule(k)


def car_mu_sequence(mu, nu, label: str = "car-mu") -> ModeFamily:
    """CAR family of 2-dim modes with eigenvalue offsets mu(k) vs nu(k)."""
    return ModeFamily(
        kind=CAR,
        label=label,
        rule=lambda k: (car.mu_covariance(mu(k)), car.mu_covariance(nu(k))),
    )


def ccr_thermal_sequence(c1, c2, label: str = "ccr-thermal") -> ModeFamily:
    """CCR family of single-mode thermal pairs with widths c1(k) vs c2(k) >= 1."""
    return ModeFamily(
        kind=CCR,
        label=label,
        rule=lambda k: (ccr.thermal_covariance(c1(k)), ccr.thermal_covariance(c2(k))),
    )


def car_power_family(p: float) -> ModeFamily:
    """Built-in CAR family: mu_k = 1/2 against nu_k = (1 - k^-p)/2.

    Per-mode offset eps_k = k^-p / 2 stays strictly inside the unit interval,
    so every per-mode transition probability is positive. Square-summable
    perturbation (quasi-equivalent) for p > 1, divergent (disjoint) for
    p <= 1 with per-mode distance squared >= 1/(2k) at p = 1.
    """
    return car_mu_sequence(
        lambda k: 0.5, lambda k: 0.5 * (1.0 - k**-p), label=f"car-power-{p:g}"
    )


def ccr_thermal_power_family(p: float) -> ModeFamily:
    """Built-in CCR family: thermal widths 1 + k^-p against constant 1."""
    return ccr_thermal_sequence(
        lambda k: 1.0 + k**-p, lambda k: 1.0, label=f"ccr-thermal-power-{p:g}"
    )


def car_counterexample() -> ModeFamily:
    """Quasi-equivalent pair whose transition probability is nevertheless 0.

    Mode 1 pits the two pure 2-dim covariances against each other (orthogonal
    states, transition probability 0, meet rank 2); all other modes are
    identical tracial pairs. The converse of the meet criterion fails here:
    vanishing transition probability does not imply disjointness.
    """

    def rule(k: int):
        if k == 1:
            return car.mu_covariance(0.5), car.mu_covariance(-0.5)
        half = car.mu_covariance(0.0)
        return half, half

    return ModeFamily(kind=CAR, label="car-counterexample", rule=rule)


def literal_family(kind: str, pairs, tail=None, label: str = "literal") -> ModeFamily:
    """Family from an explicit list of pairs with a constant tail.

    ``tail`` defaults to an identical pair repeating the last listed first
    covariance, which contributes zero to every partial sum.
    """
    if kind not in (CAR, CCR):
        raise ValueError(f"kind must be {CAR!r} or {CCR!r}, got {kind!r}")
    pairs = list(pairs)
    if not pairs:
        raise ValueError("need at least one explicit pair")
    if tail is None:
        tail = (pairs[-1][0], pairs[-1][0])

    def rule(k: int):
        return pairs[k - 1] if k <= len(pairs) else tail

    return ModeFamily(kind=kind, label=label, rule=rule)


def concat_families(first: ModeFamily, n_first: int, second: ModeFamily,
                    label: str | None = None) -> ModeFamily:
    """First n_first modes of one family followed by another (same kind)."""
    if first.kind != second.kind:
        raise ValueError(f"kind mismatch: {first.kind} vs {second.kind}")
    return ModeFamily(
        kind=first.kind,
        label=label or f"{first.label}+{second.label}",
        rule=lambda k: first.pair_at(k) if k <= n_first else second.pair_at(k - n_first),
    )


def _mode_qe_sq(family: ModeFamily, k: int) -> float:
    s, t = family.pair_at(k)
    if family.kind == CAR:
        return car.qe_distance_car(s, t) ** 2
    equiv, dist = ccr.qe_distance_ccr(s, t)
    if not equiv:
        return math.inf
    return dist**2


def _mode_neg_log_tp(family: ModeFamily, k: int) -> float:
    s, t = family.pair_at(k)
    tp = car.trans_prob_car(s, t) if family.kind == CAR else ccr.trans_prob_ccr(s, t)
    if tp <= TP_FLOOR:
        return math.inf
    return -math.log(tp)


def partial_qe_sum(family: ModeFamily, n: int) -> float:
    """Sum over modes 1..n of squared per-mode quasi-equivalence distances.

    +inf as soon as any CCR mode fails metric equivalence. Nondecreasing in n
    and additive over blocks of modes: terms are summed with math.fsum, so the
    value is the correctly rounded sum and block groupings agree to within an
    ulp or two of each other.
    """
    if n < 1:
        raise ValueError(f"N must be >= 1, got {n}")
    terms = []
    for k in range(1, n + 1):
        term = _mode_qe_sq(family, k)
        if math.isinf(term):
            return math.inf
        terms.append(term)
    return math.fsum(terms)


def partial_log_tp(family: ModeFamily, n: int) -> float:
    """Sum over modes 1..n of -log of per-mode transition probabilities.

    +inf as soon as any mode's transition probability hits the zero floor;
    finite values mean the product of transition probabilities is
    exp(-result).
    """
    if n < 1:
        raise ValueError(f"N must be >= 1, got {n}")
    terms = []
    for k in range(1, n + 1):
        term = _mode_neg_log_tp(family, k)
        if math.isinf(term):
            return math.inf
        terms.append(term)
    return math.fsum(terms)


@dataclass(frozen=True)
class SequenceVerdict:
    kind: str
    reason: str
    checkpoints: tuple
    qe_partial_sums: tuple
    neg_log_tp_partial_sums: tuple
    n_used: int


def _series_class(sum_half: float, sum_full: float, last_term: float,
                  window: int, eps: float) -> str:
    """'convergent' / 'divergent' / 'inconclusive' from a partial-sum window.

    A series is called convergent when the last window of partial sums added
    less than eps; divergent when it added at least 10*eps AND the final term
    has not collapsed below a tenth of the window average (so slowly decaying
    but summable tails are not misread as divergence); inconclusive between.
    """
    if math.isinf(sum_full):
        return "divergent"
    inc = sum_full - sum_half
    if inc < eps:
        return "convergent"
    if inc >= DIVERGENCE_FACTOR * eps and last_term >= inc / (DIVERGENCE_FACTOR * window):
        return "divergent"
    return "inconclusive"


def classify_sequence(
    family: ModeFamily, n_max: int = DEFAULT_N_MAX, eps: float = DEFAULT_EPS
) -> SequenceVerdict:
    """Quasi-equivalent / disjoint / inconclusive verdict for a mode family.

    Scans modes 1..n_max once, recording both partial-sum traces at
    checkpoints n_max/8, n_max/4, n_max/2, n_max. CAR families are decided by
    the quasi-equivalence sums alone; CCR families additionally classify the
    transition-probability product and the two verdicts are cross-checked —
    a confident disagreement raises :class:`ConsistencyViolation` instead of
    guessing. (With a nondegenerate symplectic form the two criteria agree;
    fully degenerate families can genuinely split them, and refusing to
    answer is deliberate there.)
    """
    if n_max < MIN_N_MAX:
        raise ValueError(f"n_max must be at least {MIN_N_MAX}, got {n_max}")
    checkpoints = (n_max // 8, n_max // 4, n_max // 2, n_max)

    qe_terms = []
    tp_terms = []
    qe_hit_inf = False
    tp_hit_inf = False
    for k in range(1, n_max + 1):
        if not qe_hit_inf:
            term = _mode_qe_sq(family, k)
            qe_hit_inf = math.isinf(term)
            qe_terms.append(term)
        if not tp_hit_inf:
            term = _mode_neg_log_tp(family, k)
            tp_hit_inf = math.isinf(term)
            tp_terms.append(term)

    def _prefix_sum(terms, n):
        head = terms[:n]
        return math.inf if any(map(math.isinf, head)) else math.fsum(head)

    qe_sums = [_prefix_sum(qe_terms, c) for c in checkpoints]
    tp_sums = [_prefix_sum(tp_terms, c) for c in checkpoints]
    qe_last = qe_terms[-1]
    tp_last = tp_terms[-1]

    window = n_max - n_max // 2
    qe_class = _series_class(qe_sums[-2], qe_sums[-1], qe_last, window, eps)
    tp_class = _series_class(tp_sums[-2], tp_sums[-1], tp_last, window, eps)

    if family.kind == CAR:
        kind, reason = {
            "convergent": (ccr.QUASI_EQUIVALENT, HS_CONVERGENT),
            "divergent": (ccr.DISJOINT, HS_DIVERGENCE),
            "inconclusive": (INCONCLUSIVE, INCONCLUSIVE),
        }[qe_class]
    else:
        if "inconclusive" in (qe_class, tp_class):
            kind, reason = INCONCLUSIVE, INCONCLUSIVE
        elif qe_class != tp_class:
            raise ConsistencyViolation(
                f"family {family.label!r}: quasi-equivalence sums are {qe_class} "
                f"but the transition-probability product is {tp_class}"
            )
        elif qe_class == "convergent":
            kind, reason = ccr.QUASI_EQUIVALENT, ccr.POSITIVE_TRANSITION_PROBABILITY
        else:
            kind = ccr.DISJOINT
            reason = ccr.SUPPORT_MISMATCH if math.isinf(qe_sums[-1]) else HS_DIVERGENCE

    return SequenceVerdict(
        kind=kind,
        reason=reason,
        checkpoints=checkpoints,
        qe_partial_sums=tuple(qe_sums),
        neg_log_tp_partial_sums=tuple(tp_sums),
        n_used=n_max,
    )
