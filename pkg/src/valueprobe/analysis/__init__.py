from .anchored import AnchoredCurve, SineFit, anchored_curve, fit_sine
from .mds import Embedding2D, classical_scaling, dissimilarity, mds_embed, smacof, stress1
from .procrustes import ProcrustesResult, align_labelled, procrustes_align
from .profiles import (
    CorrelationMatrix,
    center_session,
    centered_profiles,
    correlation_from_profiles,
    correlation_matrix,
    item_alphas,
    mean_profile,
)
from .ranks import (
    WilcoxonResult,
    average_ranks,
    cronbach_alpha,
    rank_profile,
    spearman_rho,
    wilcoxon_signed_rank,
)
from .structure import circular_order_agreement, ideal_circumplex_correlation, human_reference_embedding

__all__ = [
    "AnchoredCurve",
    "CorrelationMatrix",
    "Embedding2D",
    "ProcrustesResult",
    "SineFit",
    "WilcoxonResult",
    "align_labelled",
    "anchored_curve",
    "average_ranks",
    "center_session",
    "centered_profiles",
    "circular_order_agreement",
    "classical_scaling",
    "correlation_from_profiles",
    "correlation_matrix",
    "cronbach_alpha",
    "dissimilarity",
    "fit_sine",
    "human_reference_embedding",
    "ideal_circumplex_correlation",
    "item_alphas",
    "mds_embed",
    "mean_profile",
    "procrustes_align",
    "rank_profile",
    "smacof",
    "spearman_rho",
    "stress1",
    "wilcoxon_signed_rank",
]
