"""
Command-line front end.

Exit status is 0 on success, 1 when the input is well formed but the
operation fails (an ungrammatical sentence, an exhausted generator), and 2
for usage and configuration errors.
"""
import argparse
import json
import logging
import os
import sys

from pydantic import ValidationError

from . import circuit as circuits
from .cfg import (
    CorpusGenerationError,
    QA_RULES,
    generate_corpus,
    read_vocabulary,
)
from .circuit import (
    HyperParams,
    ParamRegistry,
    RegistryMismatch,
    SlotOutOfRange,
    cnot_count,
)
from .config import ConfigError, load_config, write_config
from .corpora import (
    BUILTINS,
    CorpusFormatError,
    LabeledCorpus,
    builtin_dictionary,
    read_corpus,
    write_corpus,
)
from .diagram import UngrammaticalSentence, from_sentence
from .formatting import key_value_block, numbered_list
from .pregroup import (
    TypeSyntaxError,
    UnknownWord,
    format_type,
    read_dictionary,
    reduce,
    reduction_steps,
    sentence_type,
)
from .simulator import OpenWires, hadamard_label, hadamard_parts, predicted_label
from .train import (
    Timer,
    UnseenWords,
    run_experiment,
    write_params,
    write_summary,
    write_trace,
)
from .utils import merge, valfilter

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Bad arguments or inputs; reported with exit status 2."""


def _dictionary(path):
    if path is None:
        return builtin_dictionary()
    try:
        return read_dictionary(path)
    except (OSError, ValueError) as e:
        raise UsageError("can't read dictionary {!r}: {}".format(path, e))


def _hyper(args, base=None):
    """Hyperparameters from the flags, falling back to ``base``."""
    base = base if base is not None else HyperParams()
    given = valfilter(
        lambda v: v is not None, {"q_n": args.qn, "q_s": args.qs, "d": args.depth}
    )
    try:
        return HyperParams(**merge([base.model_dump(), given]))
    except ValidationError as e:
        raise UsageError(str(e))


def cmd_parse(args):
    words = args.sentence.split()
    dictionary = _dictionary(args.dictionary)
    try:
        t = sentence_type(words, dictionary)
    except UnknownWord as e:
        raise UsageError(str(e))

    print(key_value_block((w, format_type(dictionary[w])) for w in words))
    pattern = reduce(t)
    if pattern is None:
        print("type: {}".format(format_type(t)))
        print("not grammatical")
        return EXIT_FAILURE
    print("reduction:")
    print(numbered_list(reduction_steps(t, pattern)))
    print("cups: {}".format(" ".join("({}, {})".format(i, j) for i, j in pattern.pairs)))
    print("grammatical ({} cups)".format(len(pattern.pairs)))
    return EXIT_OK


def _diagram(sentence, dictionary):
    try:
        return from_sentence(sentence.split(), dictionary)
    except UnknownWord as e:
        raise UsageError(str(e))


def cmd_compile(args):
    hyper = _hyper(args)
    d = _diagram(args.sentence, _dictionary(args.dictionary))
    registry = ParamRegistry()
    c = circuits.compile(d, hyper, registry)
    with open(args.out, "w") as f:
        f.write(circuits.to_json(c))
        f.write("\n")
    if args.qasm:
        with open(args.qasm, "w") as f:
            f.write(circuits.to_qasm(c))
    print(key_value_block([
        ("qubits", c.qubit_count),
        ("slots", registry.total_slots),
        ("cnots", cnot_count(c)),
        ("written", args.out),
    ]))
    return EXIT_OK


def _vocabulary(name_or_path):
    if name_or_path in BUILTINS:
        return BUILTINS[name_or_path].vocabulary
    try:
        return read_vocabulary(name_or_path)
    except (OSError, ValueError, KeyError) as e:
        raise UsageError("can't read vocabulary {!r}: {}".format(name_or_path, e))


def cmd_gen(args):
    if args.count < 1:
        raise UsageError("--count must be at least 1, got {}".format(args.count))
    if args.max_depth < 1:
        raise UsageError("--max-depth must be at least 1, got {}".format(args.max_depth))
    vocab = _vocabulary(args.vocab)
    sentences = generate_corpus(
        QA_RULES, vocab, args.count, args.seed, max_depth=args.max_depth
    )
    write_corpus(args.out, LabeledCorpus(((s, None) for s in sentences), args.out))
    print("wrote {} sentences to {}".format(len(sentences), args.out))
    return EXIT_OK


def _corpus(name_or_path):
    if name_or_path in BUILTINS:
        return BUILTINS[name_or_path].corpus
    try:
        return read_corpus(name_or_path)
    except OSError as e:
        raise UsageError("can't read corpus {!r}: {}".format(name_or_path, e))
    except CorpusFormatError as e:
        raise UsageError(str(e))


_TRAIN_FLAGS = (
    "corpus", "dictionary", "qn", "qs", "depth", "optimizer", "a", "c",
    "iterations", "max_iter", "hops", "temperature", "step_size", "cost",
    "evaluator", "shots", "workers", "split_p", "seed", "out",
)


def cmd_train(args):
    overrides = {k: getattr(args, k) for k in _TRAIN_FLAGS}
    config = load_config(args.config, overrides)
    corpus = _corpus(config.corpus)
    dictionary = _dictionary(config.dictionary)

    try:
        train_config = config.train_config()
    except ValidationError as e:
        raise UsageError(str(e))

    os.makedirs(config.out, exist_ok=True)
    write_config(os.path.join(config.out, "config.cfg"), config)
    with Timer() as timer:
        record = run_experiment(corpus, train_config, dictionary)

    write_trace(os.path.join(config.out, "trace.csv"), record)
    write_summary(
        os.path.join(config.out, "summary.json"),
        record,
        train_config,
        config.corpus,
        timer.started,
        timer.elapsed,
    )
    write_params(
        os.path.join(config.out, "params.json"), record, train_config.hyper
    )
    log.info("wrote run outputs to %s", config.out)
    print(key_value_block([
        ("parameters", record.n_params),
        ("final cost", "{:.6f}".format(record.cost_trace[-1][1])),
        ("e_train", "{:.4f}".format(record.e_train)),
        ("e_test", "{:.4f}".format(record.e_test)),
        ("output", config.out),
    ]))
    return EXIT_OK


def _read_params(path):
    try:
        with open(path) as f:
            raw = json.load(f)
        hyper = raw.get("hyper")
        return (
            ParamRegistry.from_dict(raw["registry"]),
            raw["theta"],
            HyperParams(**hyper) if hyper is not None else None,
        )
    except (OSError, ValueError, KeyError, TypeError) as e:
        raise UsageError("can't read parameters {!r}: {}".format(path, e))


def cmd_hadamard(args):
    registry, theta, trained = _read_params(args.params)
    hyper = _hyper(args, trained)
    d = _diagram(args.sentence, _dictionary(args.dictionary))
    known = registry.total_slots
    c = circuits.compile(d, hyper, registry)
    if registry.total_slots != known:
        raise UsageError(
            "{!r} uses words without trained parameters: {}".format(
                args.sentence,
                ", ".join(w for w in registry.words if registry.slots(w).start >= known),
            )
        )
    if args.shots is not None and args.shots < 1:
        raise UsageError("--shots must be at least 1, got {}".format(args.shots))
    re, im = hadamard_parts(c, theta, args.shots, args.seed)
    label = hadamard_label(c, theta, args.shots, args.seed)
    rows = [
        ("Re", "{:.12f}".format(re)),
        ("Im", "{:.12f}".format(im)),
        ("Re^2+Im^2", "{:.12f}".format(label.value)),
        ("postselected", "{:.12f}".format(predicted_label(c, theta).value)),
    ]
    if label.stderr is not None:
        rows.append(("stderr", "{:.6f}".format(label.stderr)))
    print(key_value_block(rows))
    return EXIT_OK


def _add_hyper(parser):
    parser.add_argument("--qn", type=int, help="qubits per n wire (default 1)")
    parser.add_argument("--qs", type=int, help="qubits per s wire (default 0)")
    parser.add_argument("--depth", type=int, help="IQP layers (default 1)")


def _add_dictionary(parser):
    parser.add_argument(
        "--dictionary",
        help="word typings (JSON or 'word: type' lines); "
             "defaults to the built-in corpora",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="discoqa",
        description="Compile sentences to quantum circuits and train them on "
                    "question answering.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0,
        help="log more; repeat for debug output",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="show a sentence's pregroup reduction")
    p.add_argument("sentence")
    _add_dictionary(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("compile", help="compile a sentence to a circuit")
    p.add_argument("sentence")
    _add_dictionary(p)
    _add_hyper(p)
    p.add_argument("--out", default="circuit.json", help="circuit JSON file")
    p.add_argument("--qasm", help="also write OpenQASM 2.0 to this file")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("gen", help="generate an unlabelled corpus")
    p.add_argument("--vocab", default="K30",
                   help="built-in corpus name or vocabulary JSON file")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--out", default="corpus.jsonl")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("train", help="train and score on a labelled corpus")
    p.add_argument("--config", help="config file or bundled config name")
    p.add_argument("--corpus", help="built-in corpus name or JSON-lines file")
    _add_dictionary(p)
    p.add_argument("--qn", type=int)
    p.add_argument("--qs", type=int)
    p.add_argument("--depth", type=int)
    p.add_argument("--optimizer", choices=["spsa", "nelder_mead", "basinhopping"])
    p.add_argument("--a", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--iterations", type=int)
    p.add_argument("--max-iter", type=int)
    p.add_argument("--hops", type=int)
    p.add_argument("--temperature", type=float)
    p.add_argument("--step-size", type=float)
    p.add_argument("--cost", choices=["squared", "bce"])
    p.add_argument("--evaluator", choices=["exact", "shots", "hadamard"])
    p.add_argument("--shots", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--split-p", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("hadamard", help="Hadamard-test estimate of a label")
    p.add_argument("sentence")
    p.add_argument("--params", required=True,
                   help="params.json written by 'discoqa train'")
    _add_dictionary(p)
    _add_hyper(p)
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_hadamard)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        return args.func(args)
    except (UsageError, ConfigError, TypeSyntaxError, UnknownWord,
            RegistryMismatch) as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_USAGE
    except (UngrammaticalSentence, CorpusGenerationError, UnseenWords,
            SlotOutOfRange, OpenWires) as e:
        print("error: {}".format(e), file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
