"""
config
------
Experiment configuration: a flat pydantic model, flat ``key = value`` files,
and the reproduction configs bundled with the package.

Keys in files are the long command-line flag names with ``-`` or ``_``
(``step-size`` and ``step_size`` are the same key). Values are parsed by the
model's field types; ``none`` clears an optional field.
"""
import logging
import os
from importlib import resources
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .circuit import HyperParams
from .formatting import bulleted_list
from .train import (
    BasinhoppingSettings,
    EvaluatorSettings,
    NelderMeadSettings,
    SpsaSettings,
    TrainConfig,
)
from .utils import merge, valfilter

log = logging.getLogger(__name__)

CONFIG_SUFFIX = ".cfg"


class ConfigError(ValueError):
    """
    Raised for unreadable config files and invalid settings.
    """


class ExperimentConfig(BaseModel):
    """
    A training run plus its inputs and outputs.

    ``corpus`` is a built-in corpus name or a JSON-lines path; ``dictionary``
    optionally points at a typings file for corpora outside the built-in
    vocabulary.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    corpus: str = "K30"
    dictionary: Optional[str] = None
    qn: int = Field(1, ge=1)
    qs: int = Field(0, ge=0)
    depth: int = Field(1, ge=1)
    optimizer: Literal["spsa", "nelder_mead", "basinhopping"] = "spsa"
    a: float = Field(0.1, gt=0)
    c: float = Field(0.1, gt=0)
    iterations: int = Field(1000, ge=1)
    max_iter: Optional[int] = Field(None, ge=1)
    xatol: float = Field(1e-6, gt=0)
    fatol: float = Field(1e-6, gt=0)
    hops: int = Field(100, ge=1)
    temperature: float = Field(1.0, ge=0)
    step_size: float = Field(0.5, gt=0)
    cost: Literal["squared", "bce"] = "squared"
    evaluator: Literal["exact", "shots", "hadamard"] = "exact"
    shots: Optional[int] = Field(None, ge=1)
    workers: int = Field(1, ge=1)
    split_p: float = Field(0.5, gt=0, lt=1)
    seed: int = 0
    out: str = "runs"

    @property
    def hyper(self):
        return HyperParams(q_n=self.qn, q_s=self.qs, d=self.depth)

    def _optimizer_settings(self):
        inner = NelderMeadSettings(
            max_iter=self.max_iter, xatol=self.xatol, fatol=self.fatol
        )
        if self.optimizer == "spsa":
            return SpsaSettings(a=self.a, c=self.c, iterations=self.iterations)
        if self.optimizer == "nelder_mead":
            return inner
        return BasinhoppingSettings(
            hops=self.hops,
            temperature=self.temperature,
            step_size=self.step_size,
            inner=inner,
        )

    def train_config(self):
        """The :class:`~discoqa.train.TrainConfig` this run trains with."""
        return TrainConfig(
            optimizer=self._optimizer_settings(),
            cost=self.cost,
            hyper=self.hyper,
            split_p=self.split_p,
            seed=self.seed,
            evaluator=EvaluatorSettings(
                mode=self.evaluator, shots=self.shots, workers=self.workers
            ),
        )


def normalize_key(key):
    return key.strip().lstrip("-").replace("-", "_")


def parse_config(text, source="<string>"):
    """
    Parse ``key = value`` lines into a dict of raw strings.

    Blank lines and ``#`` comments are skipped; a repeated key keeps its last
    value.
    """
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(
                "{}:{}: expected 'key = value', got {!r}".format(source, lineno, line)
            )
        out[normalize_key(key)] = value.strip()
    return out


def bundled_configs():
    """Names of the configs shipped with the package."""
    root = resources.files("discoqa") / "configs"
    return sorted(
        p.name[:-len(CONFIG_SUFFIX)]
        for p in root.iterdir()
        if p.name.endswith(CONFIG_SUFFIX)
    )


def read_config(name_or_path):
    """
    Read a config file, or a bundled config by bare name.

    Returns
    -------
    values : dict[str, str]
    """
    name_or_path = str(name_or_path)
    if os.path.exists(name_or_path):
        with open(name_or_path) as f:
            return parse_config(f.read(), name_or_path)
    bundled = resources.files("discoqa") / "configs" / (name_or_path + CONFIG_SUFFIX)
    if bundled.is_file():
        log.debug("reading bundled config %s", name_or_path)
        return parse_config(bundled.read_text(), name_or_path)
    raise ConfigError(
        "No config file {!r} and no bundled config of that name; bundled "
        "configs are:\n{}".format(name_or_path, bulleted_list(bundled_configs()))
    )


def _clear_none(values):
    return {
        k: (None if isinstance(v, str) and v.lower() == "none" else v)
        for k, v in values.items()
    }


def load_config(path=None, overrides=None):
    """
    Build an :class:`ExperimentConfig` from an optional file and overrides.

    ``overrides`` map keys to values; ``None`` values are ignored, so unset
    command-line flags fall through to the file and then to the defaults.

    Raises
    ------
    ConfigError
        If the file is missing or malformed, or a value fails validation.
    """
    layers = []
    if path is not None:
        layers.append(_clear_none(read_config(path)))
    if overrides:
        layers.append(
            valfilter(
                lambda v: v is not None,
                {normalize_key(k): v for k, v in overrides.items()},
            )
        )
    try:
        return ExperimentConfig(**merge(layers))
    except ValidationError as e:
        raise ConfigError(str(e))


def format_config(config):
    """Render ``config`` as a file :func:`read_config` reads back."""
    lines = []
    for key, value in config.model_dump().items():
        lines.append("{} = {}".format(key, "none" if value is None else value))
    return "\n".join(lines) + "\n"


def write_config(path, config):
    with open(str(path), "w") as f:
        f.write(format_config(config))
