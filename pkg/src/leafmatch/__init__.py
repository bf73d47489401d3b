"""Partial contour matching: retrieve full closed contours from an occluded open curve."""

from ._backend import get_backend, set_backend
from .alignment import AffineTransform, CandidateMatch, FrechetResult, fit_affine, frechet_distance, overlay, prune_candidates
from .config import RunConfig
from .dce import FeatureGraph, dce_relevance, extract_features
from .energy import AdjacencyBundle, EnergyWeights, build_bundle, chi2_cost, matching_energy, shape_context, stringcut
from .geometry import Contour, OpenCurve, PERIMETER, curvature_profile, normalize, occlude, resample_uniform, savgol_smooth
from .gnccp import AssignmentState, GnccpConfig, gnccp_optimize
from .pipeline import LeafDatabase, LeafRecord, QueryResult, build_database, load_database, query, save_database
from .spline import SplineConfig, SplineCurve, beta_blend, sample_spline
from .subgraph import MatchConfig, NodeMapping, extract_section, subgraph_match

__version__ = "0.1.0"
