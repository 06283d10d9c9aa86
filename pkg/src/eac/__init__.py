"""Exact certificates and numerical solving for exponential-algebraic
intersections on products of elliptic curves."""

from __future__ import annotations

__version__ = "0.1.0"

from .checker import (PairVerdict, SubvarietyData, Verdict, check_free,
                      check_pair, check_rotund, reduce_L)
from .forms import (Certificate, ExteriorForm, HomologyClass,
                    class_of_hypersurface, eac_certificate, form_of_subspace,
                    holomorphic_form_realized, hypersurface_form, integrate_top)
from .hull import (HullChain, HullResult, complexification, hull_chain,
                   rational_hull)
from .instance import (Instance, InstanceError, builtin_instance,
                       catalog_names, instance_from_dict, load_instance)
from .multiquad import ComplexMQ, MultiQuadElem, parse_mq, render_mq
from .pipeline import certify, decide, density_summary, solve
from .segre import SegrePoint, SegrePolynomial
from .solver import (PulledBackSystem, SolutionPoint, SolveReport,
                     SolverConfig, harvest_density)
from .variety import EllipticFactor, ExactSubspace, ProductVariety
from .weierstrass import (AtInfinity, ProductEvaluator, WpEvaluator,
                          bidegree_of, count_roots_on_fiber, delta_map,
                          jacobian_probe, point_count_on_curve)

__all__ = [
    "AtInfinity", "Certificate", "ComplexMQ", "EllipticFactor", "ExactSubspace",
    "ExteriorForm", "HomologyClass", "HullChain", "HullResult", "Instance",
    "InstanceError", "MultiQuadElem", "PairVerdict", "ProductEvaluator",
    "ProductVariety", "PulledBackSystem", "SegrePoint", "SegrePolynomial",
    "SolutionPoint", "SolveReport", "SolverConfig", "SubvarietyData", "Verdict",
    "WpEvaluator", "bidegree_of", "builtin_instance", "catalog_names",
    "certify", "check_free", "check_pair", "check_rotund",
    "class_of_hypersurface", "complexification", "count_roots_on_fiber",
    "decide", "delta_map", "density_summary", "eac_certificate",
    "form_of_subspace", "harvest_density", "holomorphic_form_realized",
    "hull_chain", "hypersurface_form", "instance_from_dict", "integrate_top",
    "jacobian_probe", "load_instance", "parse_mq", "point_count_on_curve",
    "rational_hull", "reduce_L", "render_mq", "solve",
]
