import json
import re
from textwrap import dedent

import pytest

from ..circuit import from_json
from ..cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from ..config import load_config
from ..corpora import read_corpus


def _rows(out):
    """``key: value`` lines as a dict."""
    rows = {}
    for line in out.splitlines():
        key, sep, value = line.partition(":")
        if sep:
            rows[key.strip()] = value.strip()
    return rows


def test_parse(capsys):
    assert main(["parse", "Romeo dies"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out == dedent(
        """\
        Romeo: n
        dies:  n@1 s
        reduction:
          0. n n@1 s
          1. s
        cups: (0, 1)
        grammatical (1 cups)
        """
    )


def test_parse_relative_clause(capsys):
    assert main(["parse", "Romeo who loves Juliet dies"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "cups: (0, 1) (2, 9) (3, 6) (4, 5) (7, 8)" in out
    assert out.endswith("grammatical (5 cups)\n")


def test_parse_failures(capsys):
    assert main(["parse", "dies Romeo"]) == EXIT_FAILURE
    out = capsys.readouterr().out
    assert "type: n@1 s n" in out
    assert out.endswith("not grammatical\n")

    assert main(["parse", "Romeo xyzzy"]) == EXIT_USAGE
    assert "'xyzzy'" in capsys.readouterr().err


def test_parse_with_dictionary_file(tmpdir, capsys):
    path = tmpdir.join("words.txt")
    path.write("Tybalt: n\nfights: n@1 s\n")
    assert main(["parse", "Tybalt fights", "--dictionary", str(path)]) == EXIT_OK

    path.write("Tybalt n\n")
    assert main(["parse", "Tybalt fights", "--dictionary", str(path)]) == EXIT_USAGE
    assert "expected 'word: type'" in capsys.readouterr().err


def test_compile(tmpdir, capsys):
    out = tmpdir.join("circuit.json")
    qasm = tmpdir.join("circuit.qasm")
    status = main([
        "compile", "Romeo who loves Juliet dies", "--out", str(out),
        "--qasm", str(qasm),
    ])
    assert status == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows["qubits"] == "8"
    assert rows["slots"] == "7"
    c = from_json(out.read())
    assert c.qubit_count == 8
    assert c.sentence == ("Romeo", "who", "loves", "Juliet", "dies")
    assert qasm.read().startswith("OPENQASM 2.0;\n")


def test_compile_failures(tmpdir, capsys):
    out = str(tmpdir.join("circuit.json"))
    assert main(["compile", "Romeo dies", "--depth", "0", "--out", out]) == EXIT_USAGE
    assert main(["compile", "Romeo plugh", "--out", out]) == EXIT_USAGE
    assert main(["compile", "dies Romeo", "--out", out]) == EXIT_FAILURE
    err = capsys.readouterr().err
    assert err.count("error: ") == 3
    assert not tmpdir.join("circuit.json").check()


def test_gen(tmpdir, capsys):
    out = tmpdir.join("corpus.jsonl")
    assert main(["gen", "--vocab", "K6", "--count", "5", "--seed", "1",
                 "--out", str(out)]) == EXIT_OK
    corpus = read_corpus(out, labelled=False)
    assert len(corpus) == 5
    assert corpus.labels == [None] * 5
    assert "wrote 5 sentences" in capsys.readouterr().out

    again = tmpdir.join("again.jsonl")
    main(["gen", "--vocab", "K6", "--count", "5", "--seed", "1", "--out", str(again)])
    assert again.read() == out.read()


def test_gen_failures(tmpdir):
    out = str(tmpdir.join("corpus.jsonl"))
    assert main(["gen", "--count", "0", "--out", out]) == EXIT_USAGE
    missing = ["gen", "--count", "3", "--vocab", "nowhere.json", "--out", out]
    assert main(missing) == EXIT_USAGE
    # K6 has only six distinct sentences without relative clauses.
    assert main(["gen", "--vocab", "K6", "--count", "7", "--max-depth", "1",
                 "--out", out]) == EXIT_FAILURE

    with pytest.raises(SystemExit) as e:
        main(["gen"])
    assert e.value.code == 2


def _train(tmpdir, *extra):
    out = tmpdir.join("run")
    argv = ["train", "--corpus", "K6", "--iterations", "5", "--out", str(out)]
    return main(argv + list(extra)), out


def test_train(tmpdir, capsys):
    status, out = _train(tmpdir)
    assert status == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert rows["parameters"] == "7"
    assert rows["output"] == str(out)

    for name in ["config.cfg", "trace.csv", "summary.json", "params.json"]:
        assert out.join(name).check()
    summary = json.loads(out.join("summary.json").read())
    assert summary["corpus"] == "K6"
    assert summary["evaluations"] == 10
    assert len(out.join("trace.csv").read().splitlines()) == 6

    config = load_config(str(out.join("config.cfg")))
    assert config.corpus == "K6"
    assert config.iterations == 5


def test_train_with_bundled_config(tmpdir):
    status, out = _train(tmpdir, "--config", "k16_qn1_d3", "--corpus", "K16")
    assert status == EXIT_OK
    summary = json.loads(out.join("summary.json").read())
    assert summary["n_params"] == 12
    assert summary["config"]["optimizer"]["a"] == 0.05


def test_train_failures(tmpdir, capsys):
    assert _train(tmpdir, "--config", "nope")[0] == EXIT_USAGE
    assert _train(tmpdir, "--evaluator", "shots")[0] == EXIT_USAGE
    assert not tmpdir.join("run").check()
    assert _train(tmpdir, "--corpus", "missing.jsonl")[0] == EXIT_USAGE

    corpus = tmpdir.join("unseen.jsonl")
    corpus.write(
        '{"sentence": "Romeo dies", "label": 1}\n'
        '{"sentence": "Juliet dies", "label": 0}\n'
    )
    assert _train(tmpdir, "--corpus", str(corpus))[0] == EXIT_FAILURE
    assert "never appear in training" in capsys.readouterr().err


def test_hadamard(tmpdir, capsys):
    status, out = _train(tmpdir)
    assert status == EXIT_OK
    capsys.readouterr()
    params = str(out.join("params.json"))

    assert main(["hadamard", "Romeo loves Juliet", "--params", params]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert set(rows) == {"Re", "Im", "Re^2+Im^2", "postselected"}
    re, im = float(rows["Re"]), float(rows["Im"])
    assert float(rows["Re^2+Im^2"]) == pytest.approx(re ** 2 + im ** 2, abs=1e-11)
    postselected = float(rows["postselected"])
    assert float(rows["Re^2+Im^2"]) == pytest.approx(postselected, abs=1e-9)

    assert main(["hadamard", "Romeo dies", "--params", params,
                 "--shots", "1000", "--seed", "3"]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert "stderr" in rows


def test_hadamard_failures(tmpdir, capsys):
    _, out = _train(tmpdir)
    params = str(out.join("params.json"))

    # "kills" has no trained parameters.
    assert main(["hadamard", "Romeo kills Juliet", "--params", params]) == EXIT_USAGE
    assert "kills" in capsys.readouterr().err
    # "loves" was trained with one slot.
    assert main(["hadamard", "Romeo loves Juliet", "--params", params,
                 "--depth", "2"]) == EXIT_USAGE
    assert main(["hadamard", "Romeo dies", "--params", params,
                 "--shots", "0"]) == EXIT_USAGE
    assert main(["hadamard", "Romeo dies", "--params",
                 str(tmpdir.join("none.json"))]) == EXIT_USAGE


def test_hadamard_reuses_trained_hyperparameters(tmpdir, capsys):
    status, out = _train(tmpdir, "--depth", "2")
    assert status == EXIT_OK
    capsys.readouterr()
    params = out.join("params.json")
    assert json.loads(params.read())["hyper"] == {"q_n": 1, "q_s": 0, "d": 2}

    assert main(["hadamard", "Romeo loves Juliet", "--params", str(params)]) == EXIT_OK
    rows = _rows(capsys.readouterr().out)
    assert float(rows["Re^2+Im^2"]) == pytest.approx(
        float(rows["postselected"]), abs=1e-9
    )

    # Explicit flags still win over the stored shape.
    assert main(["hadamard", "Romeo loves Juliet", "--params", str(params),
                 "--depth", "1"]) == EXIT_USAGE


def test_train_runs_are_byte_identical_apart_from_the_timestamp(tmpdir):
    texts = []
    for name in ("first", "second"):
        out = tmpdir.join(name)
        argv = ["train", "--corpus", "K6", "--iterations", "5", "--seed", "4",
                "--out", str(out)]
        assert main(argv) == EXIT_OK
        summary = re.sub(r'"timestamp": \{[^}]*\}', '"timestamp": null',
                         out.join("summary.json").read())
        texts.append((summary, out.join("trace.csv").read(),
                      out.join("params.json").read()))
    assert texts[0] == texts[1]
    assert '"timestamp": null' in texts[0][0]
