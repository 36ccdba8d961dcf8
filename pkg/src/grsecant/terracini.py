"""Secant-dimension probes for Gr(k,n) by stacked tangent frames over GF(p).

A probe draws s random points, stacks all tangent-frame generators (plus
basis rows of any requested coordinate spans) and compares the GF(p) rank of
the stack with the expected affine dimension.  Hitting the expectation is a
valid characteristic-0 certificate by semicontinuity; falling short is only
circumstantial evidence of a defect, so such verdicts are inconclusive and
retried with fresh seeds.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass

import numpy as np

from . import codes
from .fieldcore import DEFAULT_PRIME, rank_mod_p, validate_prime
from .grassmann import (
    CoordinateSubspace,
    GrassPoint,
    coordinate_point,
    frame_rows,
    random_point,
    span_unit_rows,
    subgrassmannian_span,
    tangent_space_dim,
)

DEFAULT_TRIALS = 3

# Beyond this many ambient coordinates the greedy certificate search is
# pointless overhead next to the rank computation itself.
AUTO_CERTIFICATE_AMBIENT_LIMIT = 200_000


class CertificateUnavailable(RuntimeError):
    """The monomial strategy was forced but no certificate of size s exists."""


class Verdict(str, enum.Enum):
    CERTIFIED_EXPECTED = "CertifiedExpected"
    CERTIFIED_FILLS = "CertifiedFills"
    INCONCLUSIVE_DEFICIT = "InconclusiveDeficit"

    def is_certified(self) -> bool:
        return self is not Verdict.INCONCLUSIVE_DEFICIT


def expected_affine_dim(k: int, n: int, s: int) -> int:
    """min(s * ((k+1)(n-k)+1), C(n+1, k+1)): the affine dimension cap."""
    if k < 1 or n <= k or s < 1:
        raise ValueError(f"bad parameters k={k}, n={n}, s={s}")
    return min(s * tangent_space_dim(k, n), math.comb(n + 1, k + 1))


@dataclass(frozen=True)
class SecantProblem:
    k: int
    n: int
    s: int
    prime: int = DEFAULT_PRIME
    seed: int = 0
    trials: int = DEFAULT_TRIALS
    point_constraints: tuple[CoordinateSubspace | None, ...] | None = None
    extra_spans: tuple[CoordinateSubspace, ...] = ()

    def __post_init__(self):
        if self.s < 1 or self.k < 1 or self.n <= self.k:
            raise ValueError(f"bad problem ({self.k}, {self.n}, {self.s})")
        validate_prime(self.prime)
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.point_constraints is not None and len(self.point_constraints) != self.s:
            raise ValueError("one constraint slot per point required")
        for sub in list(self.point_constraints or ()) + list(self.extra_spans):
            if sub is not None and sub.n != self.n:
                raise ValueError("constraint subspace lives in the wrong space")

    @property
    def ambient(self) -> int:
        return math.comb(self.n + 1, self.k + 1)


@dataclass
class SpanVerdict:
    problem: SecantProblem
    achieved_rank: int
    expected_rank: int
    ambient: int
    verdict: Verdict
    trials_used: int
    elapsed_ms: int = 0
    residual_dimension: int | None = None

    def __post_init__(self):
        if not self.achieved_rank <= self.expected_rank <= self.ambient:
            raise ValueError(
                f"rank bookkeeping broken: {self.achieved_rank} <= "
                f"{self.expected_rank} <= {self.ambient} fails"
            )

    @property
    def deficit(self) -> int:
        return self.expected_rank - self.achieved_rank

    def to_record(self) -> dict:
        rec = {
            "k": self.problem.k,
            "n": self.problem.n,
            "s": self.problem.s,
            "prime": self.problem.prime,
            "seed": self.problem.seed,
            "trials": self.trials_used,
            "achieved": self.achieved_rank,
            "expected": self.expected_rank,
            "ambient": self.ambient,
            "verdict": self.verdict.value,
            "elapsed_ms": self.elapsed_ms,
        }
        if self.verdict is Verdict.INCONCLUSIVE_DEFICIT:
            rec["deficit"] = self.deficit
        if self.residual_dimension is not None:
            rec["residual"] = self.residual_dimension
        return rec


def _point_rng(problem: SecantProblem, trial: int, index: int) -> np.random.Generator:
    # The stream depends on the point index but not on s, so growing s keeps
    # the earlier points fixed and stack ranks monotone for a fixed seed.
    seed = problem.seed & (2**64 - 1)
    return np.random.default_rng([seed, problem.prime, problem.k, problem.n, trial, index])


def _sample_points(problem: SecantProblem, trial: int) -> list[GrassPoint]:
    constraints = problem.point_constraints or (None,) * problem.s
    return [
        random_point(problem.k, problem.n, _point_rng(problem, trial, i), constraints[i], problem.prime)
        for i in range(problem.s)
    ]


def _stack(problem: SecantProblem, points: list[GrassPoint]) -> np.ndarray:
    dim, d = problem.n + 1, problem.k + 1
    blocks = [
        span_unit_rows(subgrassmannian_span(span, d), dim, d) for span in problem.extra_spans
    ]
    blocks.extend(frame_rows(pt.rows, problem.prime) for pt in points)
    return np.vstack(blocks)


def _monomial_points(problem: SecantProblem) -> list[GrassPoint] | None:
    if problem.k < 2 or problem.point_constraints or problem.extra_spans:
        return None
    if problem.s * tangent_space_dim(problem.k, problem.n) > problem.ambient:
        return None
    cert = codes.monomial_certificate(problem.k, problem.n, problem.s)
    if cert is None:
        return None
    return [coordinate_point(problem.k, problem.n, w) for w in cert.words[: problem.s]]


def probe(problem: SecantProblem, strategy: str = "random", target_rank: int | None = None) -> SpanVerdict:
    """Run the prober; `strategy` is one of random, monomial, auto."""
    if strategy not in ("random", "monomial", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    t0 = time.perf_counter()
    expected = expected_affine_dim(problem.k, problem.n, problem.s) if target_rank is None else target_rank
    ambient = problem.ambient
    if not 0 <= expected <= ambient:
        raise ValueError(f"target rank {expected} out of range [0, {ambient}]")

    fixed_points: list[GrassPoint] | None = None
    if strategy == "monomial":
        fixed_points = _monomial_points(problem)
        if fixed_points is None:
            raise CertificateUnavailable(
                f"no monomial certificate for (k={problem.k}, n={problem.n}, s={problem.s})"
            )
    elif strategy == "auto" and problem.ambient <= AUTO_CERTIFICATE_AMBIENT_LIMIT:
        fixed_points = _monomial_points(problem)

    best = 0
    trials_used = 0
    budget = 1 if fixed_points is not None else problem.trials
    for trial in range(budget):
        points = fixed_points if fixed_points is not None else _sample_points(problem, trial)
        rank = rank_mod_p(_stack(problem, points), problem.prime)
        trials_used = trial + 1
        best = max(best, rank)
        if best >= expected:
            break

    if best == expected:
        verdict = Verdict.CERTIFIED_FILLS if expected == ambient else Verdict.CERTIFIED_EXPECTED
    else:
        verdict = Verdict.INCONCLUSIVE_DEFICIT
    elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return SpanVerdict(problem, best, expected, ambient, verdict, trials_used, elapsed_ms)


def probe_with_specialization(problem: SecantProblem, target_rank: int) -> SpanVerdict:
    """Probe a configuration with spans and constrained points against a target.

    The reported residual ambient - achieved counts the hyperplanes through
    the whole configuration; it matches the expected residual exactly when
    the verdict is certified.
    """
    spans = problem.extra_spans
    for sub in problem.point_constraints or ():
        if sub is None:
            continue
        if not any(set(sub.support) <= set(span.support) for span in spans):
            raise ValueError(f"constraint support {sub.support} lies in no span")
    verdict = probe(problem, strategy="random", target_rank=target_rank)
    verdict.residual_dimension = verdict.ambient - verdict.achieved_rank
    return verdict


@dataclass(frozen=True)
class ImpliedRange:
    """Certificates implied by monotonicity from a single certified verdict."""

    verdict: Verdict
    s_min: int
    s_max: int | None  # None = unbounded above

    def covers(self, s: int) -> bool:
        return self.s_min <= s and (self.s_max is None or s <= self.s_max)


def monotone_extend(verdict: SpanVerdict) -> ImpliedRange:
    """Expected dimension at s certifies all s' <= s; filling certifies all s' >= s."""
    if not verdict.verdict.is_certified():
        raise ValueError("monotone extension needs a certified verdict")
    s = verdict.problem.s
    if verdict.verdict is Verdict.CERTIFIED_FILLS:
        return ImpliedRange(Verdict.CERTIFIED_FILLS, s, None)
    return ImpliedRange(Verdict.CERTIFIED_EXPECTED, 1, s)
