"""Pointwise maximal leakage (PML) core.

PML of an outcome y is the order-infinity Renyi divergence of the posterior
over the secret from its prior, which for a full-support prior reduces to

    log max_x P(y | x) / P(y).

Values are reported in nats.  Also provides the per-entry leakage of a
database model under a mechanism, the universal upper bound log(1/min
prior mass), and a numerical check of the DP <-> per-entry-PML equivalence
on product distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .logdomain import LOG_ZERO, log_sum_exp
from .mechanisms import FiniteMechanism
from .probability import DatabaseModel, FiniteDistribution, ProductModel


@dataclass(frozen=True)
class LeakageReport:
    """PML of one outcome, with the prior's leakage capacity for context."""

    y: object
    pml: float
    argmax_label: object
    eps_max: float
    upper_bound_satisfied: bool
    context: str = "secret"


def eps_max(prior: FiniteDistribution) -> float:
    """log(1 / min prior mass): the leakage of releasing the secret unperturbed."""
    prior.require_full_support("eps_max undefined for zero-probability atom")
    return -min(prior.logp)


def pml(prior: FiniteDistribution, log_likelihoods) -> float:
    """PML at one outcome, given log P(y | x) for every x in prior order.

    Outcomes with zero marginal density leak nothing: conditioning on them
    equals no conditioning, so the value is 0.
    """
    prior.require_full_support("PML requires full-support prior")
    lls = [float(v) for v in log_likelihoods]
    if len(lls) != prior.size:
        raise ValueError("likelihood vector length mismatch")
    log_py = log_sum_exp([ll + lp for ll, lp in zip(lls, prior.logp)])
    if log_py == LOG_ZERO:
        return 0.0
    return max(lls) - log_py


def _argmax_label(labels, values):
    # ties broken by lowest label index
    best = max(range(len(values)), key=lambda i: (values[i], -i))
    return labels[best]


def pml_report(prior: FiniteDistribution, mech, y, context="secret") -> LeakageReport:
    """PML of mechanism outcome y under the given prior, as a full report."""
    lls = [mech.log_likelihood(x, y) for x in prior.labels]
    value = pml(prior, lls)
    em = eps_max(prior)
    return LeakageReport(
        y=y,
        pml=value,
        argmax_label=_argmax_label(prior.labels, lls),
        eps_max=em,
        upper_bound_satisfied=value <= em + 1e-9,
        context=context,
    )


def pml_profile(prior: FiniteDistribution, mech, y_grid) -> list[LeakageReport]:
    grid = list(y_grid)
    if not grid:
        raise ValueError("empty grid")
    return [pml_report(prior, mech, y) for y in grid]


def entry_log_likelihoods(model: DatabaseModel, mech, i: int, y) -> list[float]:
    """log P(y | D_i = d) for each symbol d: the channel induced on entry i.

    Mixes the full-database channel over the conditional law of the other
    entries.
    """
    prior = model.entry_marginal(i)
    out = []
    for d in prior.labels:
        cond = model.conditional_rest(i, d)
        terms = [lp + mech.log_likelihood(rest[:i] + (d,) + rest[i:], y)
                 for rest, lp in zip(cond.labels, cond.logp) if lp > LOG_ZERO]
        out.append(log_sum_exp(terms) if terms else LOG_ZERO)
    return out


def pml_entry(model: DatabaseModel, mech, i: int, y) -> LeakageReport:
    """PML of database entry i at mechanism outcome y."""
    prior = model.entry_marginal(i)
    lls = entry_log_likelihoods(model, mech, i, y)
    value = pml(prior, lls)
    em = eps_max(prior)
    return LeakageReport(
        y=y,
        pml=value,
        argmax_label=_argmax_label(prior.labels, lls),
        eps_max=em,
        upper_bound_satisfied=value <= em + 1e-9,
        context=f"entry-{i}",
    )


@dataclass(frozen=True)
class Theorem2Report:
    """Numerical supremum of per-entry PML over sampled/grid product priors.

    The supremum over all full-support product priors may only be
    approached at the simplex boundary, so this is an estimate with a
    witness, not an exact optimum.
    """

    epsilon_dp: float
    max_observed_pml: float
    witness_prior: tuple
    witness_entry: int
    witness_outcome: object
    forward_ok: bool


def theorem2_check(mech: FiniteMechanism, epsilon_dp: float, num_entries: int,
                   alphabet, prior_samples: int = 50, grid_resolution: int = 25,
                   seed: int = 0, tol: float = 1e-9,
                   grid_span=(0.01, 0.99)) -> Theorem2Report:
    """Estimate sup over product priors, outcomes, entries of per-entry PML.

    The forward direction of the DP equivalence says the estimate never
    exceeds epsilon_dp for an epsilon_dp-DP mechanism.
    """
    alphabet = tuple(alphabet)
    if num_entries == 1 and mech.x_labels and not isinstance(mech.x_labels[0], tuple):
        # lift a scalar-labeled channel so its inputs look like 1-entry databases
        mech = FiniteMechanism(tuple((x,) for x in mech.x_labels),
                               mech.y_labels, mech.logp)
    rng = np.random.default_rng(seed)
    prior_specs = []
    for _ in range(prior_samples):
        spec = []
        for _ in range(num_entries):
            probs = rng.dirichlet(np.ones(len(alphabet)))
            probs = np.clip(probs, 1e-3, None)
            spec.append(tuple(probs / probs.sum()))
        prior_specs.append(tuple(spec))
    if len(alphabet) == 2 and grid_resolution > 0:
        for q in np.linspace(grid_span[0], grid_span[1], grid_resolution):
            prior_specs.append((((1.0 - q), float(q)),) * num_entries)

    best = -math.inf
    witness = (None, None, None)
    for spec in prior_specs:
        model = ProductModel(tuple(
            FiniteDistribution.from_probs(alphabet, p, normalize=True) for p in spec))
        for i in range(num_entries):
            lls_by_y = [entry_log_likelihoods(model, mech, i, y) for y in mech.y_labels]
            prior = model.entry_marginal(i)
            for y, lls in zip(mech.y_labels, lls_by_y):
                value = pml(prior, lls)
                if value > best:
                    best = value
                    witness = (spec, i, y)
    return Theorem2Report(
        epsilon_dp=epsilon_dp,
        max_observed_pml=best,
        witness_prior=witness[0],
        witness_entry=witness[1],
        witness_outcome=witness[2],
        forward_ok=best <= epsilon_dp + tol,
    )
