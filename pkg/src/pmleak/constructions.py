"""The correlated binary database and its leakage under calibrated Laplace noise.

The construction: a database of n+1 binary entries where, conditioned on the
first entry being 1 (resp. 0), the remaining n entries are the all-ones
(resp. all-zeros) string with probability eta and uniform over the other
2^n - 1 strings otherwise.  Releasing the empirical frequency of ones
through a Laplace mechanism calibrated to epsilon-DP still leaks almost the
entire first entry: its per-entry PML approaches log(1/alpha), the leakage
of releasing the entry unperturbed.

Everything here is evaluated in log domain so the analysis scales to n in
the thousands; the closed forms for y <= 0 and a binomial-sum evaluator
valid for all y cross-check each other and, for small n, full enumeration.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .logdomain import (LOG_TWO, LOG_ZERO, LogReal, log_add, log_binom,
                        log_sub, log_sum_exp, signed_log_sum)
from .mechanisms import LaplaceMechanism, laplace_log_density
from .probability import DatabaseModel, FiniteDistribution


def _log_two_pow_minus_one(n: int) -> float:
    """log(2^n - 1), overflow-free."""
    return n * LOG_TWO + math.log1p(-math.exp(-n * LOG_TWO))


@dataclass(frozen=True)
class CorrelatedBinaryModel(DatabaseModel):
    """Binary database of n+1 entries with strongly correlated tail.

    ``n`` counts the correlated entries beyond the first, so the database
    has n+1 entries; entry 0 is the distinguished one with P(0) = alpha.
    """

    n: int
    alpha: float
    eta: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 < self.alpha < 0.5:
            raise ValueError("alpha must lie in (0, 0.5)")
        if not 0.0 < self.eta < 1.0:
            raise ValueError("eta must lie in (0, 1)")

    @property
    def alphabet(self):
        return (0, 1)

    @property
    def num_entries(self):
        return self.n + 1

    def joint_logp(self, x):
        if len(x) != self.num_entries:
            raise ValueError("tuple length mismatch")
        d1, rest = x[0], x[1:]
        lp = math.log(self.alpha) if d1 == 0 else math.log1p(-self.alpha)
        if all(d == d1 for d in rest):
            return lp + math.log(self.eta)
        return lp + math.log1p(-self.eta) - _log_two_pow_minus_one(self.n)

    def entry_marginal(self, i):
        self._check_index(i)
        if i == 0:
            return FiniteDistribution.from_probs((0, 1), (self.alpha, 1.0 - self.alpha))
        # exact big-int ratios: of the 2^n - 1 uniform strings given D_1 = d,
        # 2^(n-1) - d of them carry a 1 at any fixed tail position
        frac_given1 = self.eta + (1.0 - self.eta) * ((2 ** (self.n - 1) - 1) / (2 ** self.n - 1))
        frac_given0 = (1.0 - self.eta) * (2 ** (self.n - 1) / (2 ** self.n - 1))
        p1 = (1.0 - self.alpha) * frac_given1 + self.alpha * frac_given0
        return FiniteDistribution.from_probs((0, 1), (1.0 - p1, p1))

    def conditional_rest(self, i, d):
        self._check_index(i)
        if d not in self.alphabet:
            raise KeyError(f"symbol {d!r} not in alphabet")
        if i != 0:
            return super().conditional_rest(i, d)
        self._require_enumerable(2 ** self.n)
        log_uniform = math.log1p(-self.eta) - _log_two_pow_minus_one(self.n)
        labels, logs = [], []
        for rest in itertools.product((0, 1), repeat=self.n):
            labels.append(rest)
            logs.append(math.log(self.eta) if all(s == d for s in rest) else log_uniform)
        return FiniteDistribution(tuple(labels), tuple(logs))


@dataclass(frozen=True)
class EtaSchedule:
    """Correlation weight as a function of n: constant or c / n**r."""

    mode: str = "constant"
    c: float = 0.5
    r: float = 1.0

    def __post_init__(self):
        if self.mode not in ("constant", "polynomial"):
            raise ValueError(f"unknown eta schedule mode {self.mode!r}")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.mode == "polynomial" and self.r < 1:
            raise ValueError("polynomial rate r must be at least 1")

    @classmethod
    def constant(cls, c):
        return cls("constant", c)

    @classmethod
    def polynomial(cls, c, r=1.0):
        return cls("polynomial", c, r)

    def eta(self, n: int) -> float:
        value = self.c if self.mode == "constant" else self.c / n ** self.r
        if not 0.0 < value < 1.0:
            raise ValueError(f"eta schedule leaves (0, 1) at n={n}")
        return value


def calibrated_scale(n: int, epsilon: float) -> float:
    """Laplace scale b = 1 / (epsilon * (n+1)) for the empirical-frequency query."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    return 1.0 / (epsilon * (n + 1))


def calibrated_mechanism(model: CorrelatedBinaryModel, epsilon: float) -> LaplaceMechanism:
    """Empirical frequency of ones under Laplace noise at DP level epsilon."""
    m = model.num_entries
    return LaplaceMechanism(lambda x: sum(x) / m, calibrated_scale(model.n, epsilon),
                            sensitivity=1.0 / m)


def cond_density_binomial(model: CorrelatedBinaryModel, b: float, d1: int, y: float) -> LogReal:
    """log P(Y = y | D_1 = d1) via the Hamming-weight binomial sum; valid for all y.

    The output is a mixture of 2^n Laplace densities whose centers depend
    only on the tail's Hamming weight, so the uniform part collapses to
    n+1 binomially weighted terms (minus the all-d1 string, which carries
    weight eta instead).
    """
    if d1 not in (0, 1):
        raise ValueError("d1 must be a bit")
    n = model.n
    m = n + 1
    lap_peak = laplace_log_density(float(d1), b, y)  # all-d1 tail: center is d1 itself
    terms = [log_binom(n, i) + laplace_log_density((d1 + i) / m, b, y) for i in range(n + 1)]
    total = log_sum_exp(terms)
    uniform_part = log_sub(total, lap_peak)
    return log_add(math.log(model.eta) + lap_peak,
                   math.log1p(-model.eta) - _log_two_pow_minus_one(n) + uniform_part)


def cond_density_closed_form(model: CorrelatedBinaryModel, b: float, d1: int, y: float) -> LogReal:
    """log P(Y = y | D_1 = d1) in closed form; valid only for y <= 0.

    For y <= 0 every |y - center| opens to center - y, so the binomial sum
    telescopes to (1 + q)^n with q = exp(-1/(b(n+1))):

        d1 = 0:  e^{y/b} / (2b(2^n-1)) * [2^n eta - 1 + (1-eta)(1+q)^n]
        d1 = 1:  e^{y/b} / (2b(2^n-1)) * [(2^n eta - 1) e^{-1/b}
                                          + (1-eta) q (1+q)^n]

    The bracketed subtraction is carried as signed log-domain terms.
    """
    if y > 0:
        raise ValueError("closed form valid only for y <= 0")
    if b <= 0:
        raise ValueError("scale must be positive")
    if d1 not in (0, 1):
        raise ValueError("d1 must be a bit")
    n = model.n
    log_q = -1.0 / (b * (n + 1))
    log_pow = n * math.log1p(math.exp(log_q))  # log (1+q)^n
    s1 = n * LOG_TWO + math.log(model.eta)     # log 2^n eta
    t2 = math.log1p(-model.eta) + log_pow
    if d1 == 0:
        sign, mag = signed_log_sum([(1, s1), (-1, 0.0), (1, t2)])
    else:
        inv_b = 1.0 / b
        sign, mag = signed_log_sum([(1, s1 - inv_b), (-1, -inv_b), (1, t2 + log_q)])
    if sign <= 0:
        # mathematically impossible: the bracket is a sum of positive masses
        raise ArithmeticError("conditional density bracket lost positivity")
    return -math.log(2.0 * b) - _log_two_pow_minus_one(n) + y / b + mag


def marginal_density(model: CorrelatedBinaryModel, b: float, y: float,
                     method: str = "auto") -> LogReal:
    """log P_Y(y): the alpha-weighted mixture of the two conditional densities."""
    if method == "auto":
        method = "closed" if y <= 0 else "binomial"
    evaluator = {"closed": cond_density_closed_form,
                 "binomial": cond_density_binomial}.get(method)
    if evaluator is None:
        raise ValueError(f"unknown evaluator {method!r}")
    c1 = evaluator(model, b, 1, y)
    c0 = evaluator(model, b, 0, y)
    return log_add(math.log1p(-model.alpha) + c1, math.log(model.alpha) + c0)


def pml_d1(model: CorrelatedBinaryModel, epsilon: float, y: float) -> float:
    """Exact PML of entry 0 at outcome y under the calibrated Laplace mechanism.

    For y <= 0 the d1 = 0 branch provably dominates and the closed forms
    apply; for y > 0 dominance is not established, so both branches are
    evaluated via the binomial sum and maxed explicitly.
    """
    b = calibrated_scale(model.n, epsilon)
    if y <= 0:
        c0 = cond_density_closed_form(model, b, 0, y)
        c1 = cond_density_closed_form(model, b, 1, y)
    else:
        c0 = cond_density_binomial(model, b, 0, y)
        c1 = cond_density_binomial(model, b, 1, y)
    log_py = log_add(math.log1p(-model.alpha) + c1, math.log(model.alpha) + c0)
    return max(c0, c1) - log_py


def lower_bound(n: int, alpha: float, eta: float, epsilon: float) -> float:
    """y-independent lower bound on the PML of entry 0, for y <= 0.

        log [ 2^n eta + (1+e^-eps)^n (1-eta) - 1 ] -
        log [ 2^n eta alpha + (2/e^eps)^n eta e^-eps (1-alpha)
              + (1+e^-eps)^n (1-eta) ]

    Returns -inf (a vacuous bound) if the numerator loses positivity,
    which can happen for tiny n * eta.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 < alpha < 0.5:
        raise ValueError("alpha must lie in (0, 0.5)")
    if not 0.0 < eta < 1.0:
        raise ValueError("eta must lie in (0, 1)")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    l2 = n * LOG_TWO + math.log(eta)                  # log 2^n eta
    le = math.log1p(math.exp(-epsilon))               # log (1 + e^-eps)
    t_mix = n * le + math.log1p(-eta)                 # log (1+e^-eps)^n (1-eta)
    sign, num = signed_log_sum([(1, l2), (1, t_mix), (-1, 0.0)])
    if sign <= 0:
        return LOG_ZERO
    den = log_sum_exp([
        l2 + math.log(alpha),
        n * (LOG_TWO - epsilon) + math.log(eta) - epsilon + math.log1p(-alpha),
        t_mix,
    ])
    return num - den


def find_limit_n(alpha: float, schedule: EtaSchedule, epsilon: float,
                 delta: float, n_max: int = 10 ** 6) -> int:
    """Smallest power-of-two n with log(1/alpha) - lower_bound(n) < delta.

    Doubling search; n values where the schedule's eta leaves (0, 1) are
    skipped.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    target = -math.log(alpha)
    n = 1
    while n <= n_max:
        try:
            gap = target - lower_bound(n, alpha, schedule.eta(n), epsilon)
        except ValueError:
            gap = math.inf
        if gap < delta:
            return n
        n *= 2
    raise ValueError(f"no n <= {n_max} brings the bound within {delta} of log(1/alpha)")


@dataclass(frozen=True)
class BobModel:
    """Counting-query scenario: attribute j in 1..k implies scale * j counts."""

    k: int
    scale: float = 10_000.0
    prior: Optional[FiniteDistribution] = None

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.scale <= 0:
            raise ValueError("scale must be positive")
        if self.prior is not None:
            if self.prior.labels != tuple(range(1, self.k + 1)):
                raise ValueError("prior labels must be 1..k")
            self.prior.require_full_support("prior must have full support")

    def attribute_prior(self) -> FiniteDistribution:
        if self.prior is not None:
            return self.prior
        return FiniteDistribution.uniform(tuple(range(1, self.k + 1)))


def bob_mechanism(model: BobModel, epsilon: float) -> LaplaceMechanism:
    """Laplace-noised count: sensitivity 1, scale 1/epsilon, centers scale * j."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    labels = tuple(range(1, model.k + 1))
    return LaplaceMechanism(lambda j: model.scale * j, 1.0 / epsilon,
                            sensitivity=1.0, labels=labels)


def bob_pml(model: BobModel, epsilon: float, y: float) -> float:
    """PML of the sensitive attribute at noisy-count outcome y."""
    from .leakage import pml
    prior = model.attribute_prior()
    mech = bob_mechanism(model, epsilon)
    return pml(prior, [mech.log_likelihood(j, y) for j in prior.labels])


@dataclass(frozen=True)
class SweepRow:
    n: int
    bound: float
    exact_pml: float
    enum_pml: Optional[float]
    eps_max: float


def sweep(n_values, alpha: float, schedule: EtaSchedule, epsilon: float,
          y: float, enum_limit: int = 15) -> list[SweepRow]:
    """Bound vs exact PML across n; enumeration cross-check where feasible."""
    from .leakage import pml_entry
    from .probability import ExplicitJointModel
    rows = []
    for n in sorted(set(int(v) for v in n_values)):
        eta = schedule.eta(n)
        model = CorrelatedBinaryModel(n, alpha, eta)
        bound = lower_bound(n, alpha, eta, epsilon)
        exact = pml_d1(model, epsilon, y)
        enum_pml = None
        if n <= enum_limit:
            joint = ExplicitJointModel.from_model(model)
            mech = calibrated_mechanism(model, epsilon)
            enum_pml = pml_entry(joint, mech, 0, y).pml
        rows.append(SweepRow(n=n, bound=bound, exact_pml=exact,
                             enum_pml=enum_pml, eps_max=-math.log(alpha)))
    return rows
