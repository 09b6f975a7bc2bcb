"""unirec: unified text/formula recognition infrastructure.

Semantic-decoupled tokenization, hierarchical supervision label coding,
balanced corpus planning, geometry/decoding contracts, and a block-level
edit-distance benchmark harness.
"""

from .bpe import BpeModel, Modality, TokenEntry, train_bpe
from .corpus import (
    DocumentProfile,
    colorize_tokens,
    generate_document,
    length_filter,
    recover_labels,
)
from .decoding import NgramScorer, greedy_decode, sequence_loss
from .evalbench import EvalRecord, EvalReport, canonicalize, evaluate, render_report
from .geometry import GeometrySpec, fit_geometry
from .hst import (
    HierLevel,
    Span,
    StructuredDocument,
    decode_hst,
    derive_levels,
    encode_hst,
    strip_hst,
)
from .metrics import levenshtein, normalized_ed
from .sampling import DataSource, EpochPlan, plan_epoch
from .sdt import (
    DecoupledVocabulary,
    SegmentedLabel,
    merge_decoupled,
    modality_overlap_report,
    segment_label,
)

__version__ = "0.1.0"
