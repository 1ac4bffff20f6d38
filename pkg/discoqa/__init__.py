from .circuit import HyperParams, ParamRegistry, SentenceCircuit, compile
from .corpora import LabeledCorpus, load_builtin, read_corpus, write_corpus
from .diagram import SentenceDiagram, from_sentence
from .evaluators import Evaluator, ExactEvaluator, HadamardEvaluator, ShotEvaluator
from .optimizers import BasinHopping, NelderMead, Optimizer, SPSA
from .pregroup import Dictionary, PregroupType, parse_type, reduce
from .simulator import hadamard_test, predicted_label, run
from .train import SpsaSettings, TrainConfig, run_experiment

__version__ = "0.1.0"

__all__ = [
    "BasinHopping",
    "Dictionary",
    "Evaluator",
    "ExactEvaluator",
    "HadamardEvaluator",
    "HyperParams",
    "LabeledCorpus",
    "NelderMead",
    "Optimizer",
    "ParamRegistry",
    "PregroupType",
    "SPSA",
    "SentenceCircuit",
    "SentenceDiagram",
    "ShotEvaluator",
    "SpsaSettings",
    "TrainConfig",
    "compile",
    "from_sentence",
    "hadamard_test",
    "load_builtin",
    "parse_type",
    "predicted_label",
    "read_corpus",
    "reduce",
    "run",
    "run_experiment",
    "write_corpus",
]
