"""End-to-end flows: decide, hull, certify, solve, density.

This is the glue the command line and the test suites share. Every flow is
gated the same way: verdicts first, the certificate only for free and rotund
pairs, the solver only with a nonzero certificate in hand. Refusals carry
the witness or the missing-data reason instead of a silent zero.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .checker import PairVerdict, SubvarietyData, check_pair, reduce_L
from .forms import Certificate, eac_certificate, hypersurface_form
from .hull import HullChain, HullResult, hull_chain, rational_hull
from .instance import Instance
from .solver import (PulledBackSystem, SolveReport, SolverConfig,
                     harvest_density)
from .weierstrass import (ContourError, ProductEvaluator, bidegree_of,
                          jacobian_probe, point_count_on_curve)


class BidegreeMismatch(ValueError):
    """Declared and measured fiber counts disagree; the instance is inconsistent."""


@dataclass
class Decision:
    verdicts: PairVerdict
    W_effective: SubvarietyData
    measured_bidegree: tuple[int, int] | None
    hull: HullResult
    chain: HullChain


@dataclass
class CertifyOutcome:
    decision: Decision
    certificate: Certificate | None
    refused: bool
    reason: str | None
    L_used: object = None


def resolve_w(instance: Instance, pe: ProductEvaluator | None = None,
              measure: str = "auto") -> tuple[SubvarietyData, tuple[int, int] | None]:
    """Fill in the bidegree of W by fiber counting when the file omits it.

    measure: "never" trusts the declared data, "auto" measures only when
    missing, "always" measures and cross-checks a declared bidegree.
    """
    W = instance.W
    g = instance.A.g
    if g != 2:
        return W, None
    if measure == "never" or (W.bidegree is not None and measure != "always"):
        return W, None
    pe = pe or ProductEvaluator(instance.A)
    measured = bidegree_of(instance.F, instance.A, pe)
    if W.bidegree is not None and tuple(W.bidegree) != measured:
        raise BidegreeMismatch(
            f"declared bidegree {tuple(W.bidegree)} but fiber counts give {measured}")
    return SubvarietyData(dim=W.dim, bidegree=measured,
                          dominant_projections=W.dominant_projections), measured


def decide(instance: Instance, pe: ProductEvaluator | None = None,
           measure: str = "auto") -> Decision:
    W_eff, measured = resolve_w(instance, pe, measure)
    verdicts = check_pair(instance.L, W_eff, instance.A)
    hull = rational_hull(instance.L, instance.A)
    chain = hull_chain(instance.L, instance.A)
    return Decision(verdicts=verdicts, W_effective=W_eff,
                    measured_bidegree=measured, hull=hull, chain=chain)


def certify(instance: Instance, pe: ProductEvaluator | None = None,
            decision: Decision | None = None,
            reduce_seed: int | None = None) -> CertifyOutcome:
    """Produce the non-vanishing certificate or an explicit refusal.

    When dim L + dim W exceeds g the parameter space is first cut down by
    seeded rational hyperplanes and the certificate describes the reduced
    pair; the solver consumes the same reduction.
    """
    A = instance.A
    g = A.g
    if decision is None:
        decision = decide(instance, pe)
    v = decision.verdicts
    if v.indeterminate:
        reason = "; ".join(
            str(x.detail.get("reason", "missing data"))
            for x in (v.free, v.rotund) if x.ok is None)
        return CertifyOutcome(decision, None, True, f"indeterminate: {reason}")
    if v.free.ok is False:
        return CertifyOutcome(decision, None, True, f"not free: {v.free.witness}")
    if v.rotund.ok is False:
        return CertifyOutcome(decision, None, True, f"not rotund: {v.rotund.witness}")
    W = decision.W_effective
    L = instance.L
    if L.dim + W.dim > g:
        seed = instance.config.seed if reduce_seed is None else reduce_seed
        L = reduce_L(L, W, A, seed=seed)
    if L.dim + W.dim < g:
        return CertifyOutcome(
            decision, None, True,
            f"dim L + dim W = {L.dim + W.dim} < {g}: generic intersection is empty")
    if g == 2:
        m, n = W.bidegree
        eta = hypersurface_form(m, n)
    elif g == 1:
        pe = pe or ProductEvaluator(A)
        npts = point_count_on_curve(instance.F, A, pe)
        if npts == 0:
            return CertifyOutcome(decision, None, True,
                                  "W has no points on the curve")
        from .forms import ExteriorForm
        from fractions import Fraction

        eta = ExteriorForm(2, 2, {(1, 2): Fraction(npts)})
    else:
        return CertifyOutcome(decision, None, True,
                              "certificates cover one or two factors")
    hull = rational_hull(L, A) if L is not instance.L else decision.hull
    cert = eac_certificate(eta, L, A, hull=hull)
    if not cert.nonzero:
        return CertifyOutcome(decision, cert, True,
                              "certificate vanished on a free and rotund pair",
                              L_used=L)
    return CertifyOutcome(decision, cert, False, None, L_used=L)


@dataclass
class SolveOutcome:
    certify: CertifyOutcome
    report: SolveReport | None
    exit_code: int


def solve(instance: Instance, pe: ProductEvaluator | None = None,
          config: SolverConfig | None = None) -> SolveOutcome:
    """Certify, then harvest verified intersection points.

    Exit code 0: at least one verified point. 4: refused before solving.
    5: certified but nothing verified within budget (reported as a defect).
    """
    pe = pe or ProductEvaluator(instance.A)
    cfg = config or instance.config
    outcome = certify(instance, pe)
    if outcome.refused:
        return SolveOutcome(outcome, None, 4)
    L = outcome.L_used
    if L.dim != 1:
        refusal = CertifyOutcome(outcome.decision, outcome.certificate, True,
                                 "solver needs a one-dimensional parameter space",
                                 L_used=L)
        return SolveOutcome(refusal, None, 4)
    direction = tuple(complex(x) for x in L.basis[0])
    system = PulledBackSystem(instance.F, direction, instance.A, pe)
    if instance.A.g == 2:
        def jac(l):
            try:
                return jacobian_probe(l, direction, instance.F, instance.A, pe)
            except (ContourError, ValueError):
                return -1
    else:
        jac = None
    report = harvest_density(system, cfg, certified=True, jacobian_cb=jac)
    code = 0 if report.solutions else 5
    return SolveOutcome(outcome, report, code)


def density_summary(instance: Instance, report: SolveReport) -> dict:
    """Spread statistics of the harvested points on the product variety."""
    pts = [s.z for s in report.solutions]
    out = {
        "points": len(pts),
        "cells": len(report.cells_with_solutions),
        "min_pairwise_distance": None,
        "median_nearest_distance": None,
        "per_cell": sorted(
            [[c, sum(1 for s in report.solutions if s.cell == c)]
             for c in report.cells_with_solutions]),
    }
    if len(pts) >= 2:
        A = instance.A
        nearest = []
        minall = None
        for i, p in enumerate(pts):
            dmin = None
            for j, q in enumerate(pts):
                if i == j:
                    continue
                d = A.torus_distance(p, q)
                dmin = d if dmin is None else min(dmin, d)
            nearest.append(dmin)
            minall = dmin if minall is None else min(minall, dmin)
        out["min_pairwise_distance"] = minall
        out["median_nearest_distance"] = statistics.median(nearest)
    return out
