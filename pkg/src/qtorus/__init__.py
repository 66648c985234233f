"""Exact symbolic verification of q-exponential identities on a chain.

The package provides, bottom up:

- :mod:`qtorus.series` — integer Laurent series with explicit q-adic
  precision, rational functions of q, and factored rational forms whose
  denominators are products of cyclotomic polynomials.
- :mod:`qtorus.algebra` — the quantum-torus algebra of a finite chain of
  sites, with adjacent generators commuting up to a fixed power of q.
- :mod:`qtorus.qexp` — the q-exponential as an infinite product and as a
  power series with closed-form coefficients, plus the truncation-depth
  bound that makes finite evaluation exact.
- :mod:`qtorus.verifier` — two verification engines: an exact engine for
  identities whose coefficients close in rational functions of q, and a
  certified truncated engine that enumerates, per monomial, the finite
  tuple set contributing below a q-adic precision.
- :mod:`qtorus.words` / :mod:`qtorus.scripts` — a rewriting layer: words
  of q-exponential letters, verified local relations, and derivation
  scripts that are replayed step by step.
- :mod:`qtorus.catalog` / :mod:`qtorus.cli` — the named identity catalog
  and the ``qtorus`` command-line front end producing JSON reports.
"""

from .errors import (
    ExactDivisionError,
    InfiniteSupport,
    InvalidParams,
    InvalidStep,
    KernelError,
    NoCertificate,
    NoMatch,
    NotAUnit,
    NotExpandable,
    PrecisionError,
)
from .series import FactoredRational, LaurentSeries, RationalQ, cyclotomic
from .algebra import AlgebraConfig, Element, monomial_label, phase_exponent
from .qexp import (
    euler_coeff_exact,
    euler_coeff_factored,
    euler_coeff_truncated,
    euler_denominator_factors,
    qexp_product,
    qexp_series,
    stable_depth,
    stable_depth_for,
)
from .verifier import (
    FactorProduct,
    QExpFactor,
    TupleCertificate,
    coefficient_of,
    exact_window_map,
    window_targets,
)
from .words import (
    DerivationScript,
    ExpLetter,
    Letter,
    Relation,
    ReplayResult,
    Step,
    Word,
    apply_step,
    expand_composites,
    parse_script,
    parse_word,
    render_script,
    render_word,
    replay,
)
from .scripts import (
    applicable_steps,
    braid_script,
    braid_translation_fwd,
    braid_translation_rev,
    random_walk,
    seven_term_script,
    sigma_commute_script,
    sigma_script1,
    sigma_script2,
    sigma_translation_fwd,
    sigma_translation_rev,
    structural_relations,
    word_image,
    word_to_product,
)
from .catalog import (
    MAX_PRECISION,
    MAX_SITES,
    MAX_WINDOW,
    Report,
    SCHEMA_VERSION,
    identity_names,
    list_identities,
    verify_identity,
)

__version__ = "1.0.0"

__all__ = [
    "__version__",
    # errors
    "KernelError",
    "PrecisionError",
    "NotAUnit",
    "NotExpandable",
    "ExactDivisionError",
    "InvalidParams",
    "NoMatch",
    "InvalidStep",
    "NoCertificate",
    "InfiniteSupport",
    # series
    "LaurentSeries",
    "RationalQ",
    "FactoredRational",
    "cyclotomic",
    # algebra
    "AlgebraConfig",
    "Element",
    "monomial_label",
    "phase_exponent",
    # q-exponential
    "euler_coeff_exact",
    "euler_coeff_factored",
    "euler_coeff_truncated",
    "euler_denominator_factors",
    "qexp_series",
    "qexp_product",
    "stable_depth",
    "stable_depth_for",
    # verifier
    "QExpFactor",
    "FactorProduct",
    "TupleCertificate",
    "coefficient_of",
    "window_targets",
    "exact_window_map",
    # words
    "Letter",
    "ExpLetter",
    "Word",
    "Relation",
    "Step",
    "DerivationScript",
    "ReplayResult",
    "apply_step",
    "replay",
    "expand_composites",
    "parse_word",
    "render_word",
    "parse_script",
    "render_script",
    # scripts
    "braid_script",
    "sigma_script1",
    "sigma_script2",
    "sigma_commute_script",
    "seven_term_script",
    "braid_translation_fwd",
    "braid_translation_rev",
    "sigma_translation_fwd",
    "sigma_translation_rev",
    "word_to_product",
    "word_image",
    "structural_relations",
    "applicable_steps",
    "random_walk",
    # catalog
    "SCHEMA_VERSION",
    "MAX_SITES",
    "MAX_WINDOW",
    "MAX_PRECISION",
    "Report",
    "identity_names",
    "list_identities",
    "verify_identity",
]
