"""recurrex: nonlinear recurrence-dynamics features for speech-scale signals.

The pipeline goes signal -> frames -> delay embedding -> recurrence plot
-> quantification measures -> statistical functionals, with a small
protocol harness for classification experiments on the resulting vectors.
"""

__version__ = "0.1.0"

from .errors import (DegenerateDistancesError, DegenerateFrameError,
                     DegenerateLabelsError, EmptyInputError, FormatError,
                     GroupingError, JoinError, ParameterError, ParseError,
                     ProtocolError, RecurrexError)
from .signal import (Frame, Segment, Signal, frame_signal, gen_synthetic,
                     load_wav, segment_signal, write_wav)
from .embedding import (EmbeddingParams, Trajectory, ami_curve, embed,
                        estimate_m_fnn, estimate_params, estimate_tau_ami,
                        fnn_fractions)
from .recurrence import (DistanceMatrix, EpsilonCriterion, RecurrencePlot,
                         fixed_rr, fixed_value, pairwise_distances,
                         recurrence_plot, select_epsilon, sigma_ratio,
                         write_pgm)
from .rqa import (ATTRIBUTES, LineHistogram, RqaVector, degenerate_vector,
                  line_histograms, rqa_measures)
from .features import (FUNCTIONALS, FeatureVector, aggregate, deltas,
                       feature_names, functionals, fuse, fuse_all,
                       read_external_csv, read_feature_csv,
                       write_feature_csv, write_feature_jsonl)
from .evaluation import (Dataset, Fold, FoldPlan, LogRegModel, evaluate,
                         grid_search_C, make_folds, predict, run_protocol,
                         train_logreg, znormalize)
from .config import Config, load_config
from .pipeline import (ManifestRow, extract_segments, extract_utterance,
                       frame_rqa, process_file, read_manifest, run_extract)

__all__ = [
    "__version__",
    # errors
    "RecurrexError", "FormatError", "ParseError", "EmptyInputError",
    "ParameterError", "DegenerateFrameError", "DegenerateDistancesError",
    "DegenerateLabelsError", "GroupingError", "ProtocolError", "JoinError",
    # signal
    "Signal", "Frame", "Segment", "load_wav", "write_wav", "frame_signal",
    "segment_signal", "gen_synthetic",
    # embedding
    "EmbeddingParams", "Trajectory", "ami_curve", "estimate_tau_ami",
    "fnn_fractions", "estimate_m_fnn", "estimate_params", "embed",
    # recurrence
    "DistanceMatrix", "EpsilonCriterion", "RecurrencePlot", "fixed_value",
    "fixed_rr", "sigma_ratio", "pairwise_distances", "select_epsilon",
    "recurrence_plot", "write_pgm",
    # rqa
    "ATTRIBUTES", "LineHistogram", "RqaVector", "line_histograms",
    "rqa_measures", "degenerate_vector",
    # features
    "FUNCTIONALS", "FeatureVector", "feature_names", "deltas", "functionals",
    "aggregate", "fuse", "fuse_all", "write_feature_csv",
    "write_feature_jsonl", "read_feature_csv", "read_external_csv",
    # evaluation
    "Dataset", "Fold", "FoldPlan", "LogRegModel", "znormalize", "make_folds",
    "train_logreg", "predict", "evaluate", "grid_search_C", "run_protocol",
    # config / pipeline
    "Config", "load_config", "ManifestRow", "read_manifest", "frame_rqa",
    "extract_utterance", "extract_segments", "process_file", "run_extract",
]
