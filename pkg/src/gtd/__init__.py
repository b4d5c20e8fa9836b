"""Geometrothermodynamics of Gauss-Bonnet black holes.

Fundamental equations are differentiated to fourth order with truncated
bivariate Taylor jets; temperatures, heat capacities, the GTD metric and its
curvature follow from the jet coefficients.
"""
from .analysis import (SweepSpec, TransitionLocus, evaluate_state, find_roots, grid_scan,
                       helmholtz_extrema, locate_transitions, locus_consistency, stability_scan,
                       verify_model)
from .errors import (DegenerateJacobianError, DegenerateMetric, DivisionByZeroJet, DomainError,
                     GTDError, NoRootError, ParamError, UnknownOracle, WrongRepresentation)
from .fundeq import (ENTHALPY, ENTROPY, GIBBS, MASS, ExplicitEquation, ParametricEquation,
                     StatePoint, eval_jet, legendre_transform, to_entropy_representation)
from .geometry import Metric2, comparison_metric, gtd_metric, scalar_curvature
from .jets import Jet2, Jet4, compose, derivative_jet, jet_const, jet_var
from .models import ModelBundle, ModelId, make_model, model_catalog, oracle_eval
from .thermo import heat_capacity, potentials, temperature, thermo_report

__all__ = [
    "SweepSpec", "TransitionLocus", "evaluate_state", "find_roots", "grid_scan",
    "helmholtz_extrema", "locate_transitions", "locus_consistency", "stability_scan",
    "verify_model", "DegenerateJacobianError", "DegenerateMetric", "DivisionByZeroJet",
    "DomainError", "GTDError", "NoRootError", "ParamError", "UnknownOracle", "WrongRepresentation",
    "ENTHALPY", "ENTROPY", "GIBBS", "MASS", "ExplicitEquation", "ParametricEquation", "StatePoint",
    "eval_jet", "legendre_transform", "to_entropy_representation", "Metric2", "comparison_metric",
    "gtd_metric", "scalar_curvature", "Jet2", "Jet4", "compose", "derivative_jet", "jet_const",
    "jet_var", "ModelBundle", "ModelId", "make_model", "model_catalog", "oracle_eval",
    "heat_capacity", "potentials", "temperature", "thermo_report",
]

__version__ = "0.1.0"
