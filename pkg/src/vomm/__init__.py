"""Variable-order sequence predictors over finite alphabets.

Train a model on symbol sequences, query next-symbol probabilities, score
test data by average log-loss, tune hyper-parameters by cross-validation,
and classify sequences by best-scoring class model.  All algorithms sit
behind one contract (:class:`~vomm.core.Predictor`), so evaluation and
classification code is algorithm-agnostic.
"""

from ._kernels import BACKEND_NAME, available_backends
from .classify import (
    Classifier,
    ClassificationReport,
    cross_validated_classification,
    fit_classifier,
    group_by_label,
    wta_classify,
)
from .core import (
    Alphabet,
    DataError,
    KtCounter,
    NumericError,
    Predictor,
    PredictionSession,
    Sequence,
    VommError,
    VommWarning,
    average_log_loss,
    half_split,
    kt_conditional,
    kt_sequence_prob,
    sequence_log_prob,
    subsequence_after_context,
)
from .ctw import (
    BiCtwParams,
    BiCtwPredictor,
    CtwParams,
    CtwPredictor,
    DeCtwParams,
    DeCtwPredictor,
    DecompositionTree,
    bi_ctw_train,
    ctw_conditional,
    ctw_sequence_prob,
    ctw_train,
    de_ctw_train,
    enumerate_models,
    huffman_decomposition,
    model_cost,
    tree_source_mixture_prob,
)
from .evaluation import (
    EvalResult,
    TuneResult,
    builtin_grid,
    cv_tune,
    cv_tune_sequences,
    default_classification_grid,
    default_prediction_grid,
    half_split_eval,
    lzms_ablation,
    median_of_five,
    tuned_half_split_eval,
)
from .lz import Lz78Predictor, LzMsParams, LzMsPredictor, lz78_parse, lz78_prob, lzms_parse, lzms_prob
from .midi import (
    NoteEvent,
    SILENCE_PITCH,
    decode_event_text,
    encode_events,
    events_to_sequence,
    midi_alphabet,
    midi_tokenize,
    parse_event_csv,
    sequence_to_events,
)
from .ppm import PpmParams, PpmPredictor, ppm_prob, ppm_train
from .pst import (
    PstParams,
    PstPredictor,
    PstStarParams,
    PstStarPredictor,
    pst_candidates,
    pst_grow,
    pst_prob,
    pst_smooth,
)
from .registry import ALGORITHMS, make_params, train
from .serialize import load_classifier, load_model, save_classifier, save_model
from .synth import synthetic_markov_corpus

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
