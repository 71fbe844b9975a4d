"""Exact tautological intersection numbers on moduli of stable curves,
certified volume bounds, and growth diagnostics."""

from .asymptotics import RatioPoint, growth_root, log_profile, normalized_ratio, root_window
from .bounds import (
    BoundCertificate,
    DivisorSpec,
    KappaForm,
    MuVector,
    TraceInput,
    VolumeTable,
    build_chain,
    divisor_mu,
    kappa_form,
    kodaira_bound,
    replay_certificate,
    thm1_step,
    thm1_upper_prev,
    thm2_bound,
    thm3_bound,
    verify_anchor_values,
    verify_lemma1,
    verify_thm1,
    verify_thm2,
)
from .errors import CacheError, DomainError, VerificationError
from .intersect import (
    IntersectionEngine,
    IntersectionKey,
    ModuliPoint,
    default_engine,
    mixed_intersection,
    psi_intersection,
    wp_volume,
)

__version__ = "0.1.0"

__all__ = [
    "BoundCertificate",
    "CacheError",
    "DivisorSpec",
    "DomainError",
    "IntersectionEngine",
    "IntersectionKey",
    "KappaForm",
    "ModuliPoint",
    "MuVector",
    "RatioPoint",
    "TraceInput",
    "VerificationError",
    "VolumeTable",
    "build_chain",
    "default_engine",
    "divisor_mu",
    "growth_root",
    "kappa_form",
    "kodaira_bound",
    "log_profile",
    "mixed_intersection",
    "normalized_ratio",
    "psi_intersection",
    "replay_certificate",
    "root_window",
    "thm1_step",
    "thm1_upper_prev",
    "thm2_bound",
    "thm3_bound",
    "verify_anchor_values",
    "verify_lemma1",
    "verify_thm1",
    "verify_thm2",
    "wp_volume",
]
