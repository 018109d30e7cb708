"""Experiment configuration: flat ``key = value`` files plus overrides.

Example::

    # California housing, as in the usual 70/30 protocol
    dataset = data/california_housing.csv
    response = median_house_value
    train_frac = 0.7
    folds = 5
    learners = forest:n_trees=100,min_leaf=5; knn:n_neighbors=20; ridge:penalty=1.0
    alpha = 0.2, 0.15, 0.1
    seed = 0
    out = results/california

``dataset = synthetic`` draws data from the ``synth_*`` keys instead.
"""

from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import ConfigError
from .learners import ForestSpec, KNNSpec, LearnerSpec, RidgeSpec, format_learner, parse_learner
from .synthetic import SyntheticSpec

DEFAULT_LEARNERS = (RidgeSpec(1.0), KNNSpec(20), ForestSpec(n_trees=50, min_leaf=5))


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str = "synthetic"
    response: str = "y"
    train_frac: float = 0.7
    folds: int = 5
    learners: tuple[LearnerSpec, ...] = DEFAULT_LEARNERS
    alphas: tuple[float, ...] = (0.2, 0.15, 0.1)
    epsilon: float | None = None
    u: float = 10.0
    denom_floor: float = 1e-6
    expand_bracket: bool = False
    calib_frac: float = 0.3
    seed: int = 0
    out: str = "results"
    synthetic: SyntheticSpec = field(default_factory=SyntheticSpec)
    probe_trials: int = 100
    probe_eps: tuple[float, ...] | None = None

    def __post_init__(self):
        if not 0 < self.train_frac < 1:
            raise ConfigError(f"train_frac must lie in (0, 1), got {self.train_frac}")
        if not 0 < self.calib_frac < 1:
            raise ConfigError(f"calib_frac must lie in (0, 1), got {self.calib_frac}")
        if self.folds < 2:
            raise ConfigError(f"folds must be >= 2, got {self.folds}")
        if not self.learners:
            raise ConfigError("at least one learner is required")
        if not self.alphas or not all(0 < a < 1 for a in self.alphas):
            raise ConfigError(f"alpha values must lie in (0, 1), got {self.alphas}")
        if self.epsilon is not None and self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")
        if self.u <= 0 or self.denom_floor <= 0:
            raise ConfigError("u and denom_floor must be positive")

    @property
    def is_synthetic(self) -> bool:
        return self.dataset == "synthetic"

    def as_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["learners"] = [format_learner(s) for s in self.learners]
        d["alphas"] = list(self.alphas)
        d["synthetic"] = asdict(self.synthetic)
        d["probe_eps"] = None if self.probe_eps is None else list(self.probe_eps)
        return d


def _floats(text):
    return tuple(float(t) for t in text.replace(";", ",").split(",") if t.strip())


def _bool(text):
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _opt_float(text):
    return None if str(text).strip().lower() in ("", "none", "auto") else float(text)


_SCALARS = {
    "dataset": str,
    "response": str,
    "train_frac": float,
    "folds": int,
    "epsilon": _opt_float,
    "u": float,
    "denom_floor": float,
    "expand_bracket": _bool,
    "calib_frac": float,
    "seed": int,
    "out": str,
    "probe_trials": int,
}
_SYNTH = {"n": int, "d": int, "function": str, "noise": str, "sigma": float}


def parse_config(values: dict) -> ExperimentConfig:
    """Build a config from raw string values (file entries or CLI flags)."""
    kwargs, synth = {}, {}
    for key, raw in values.items():
        key = key.strip().replace("-", "_")
        try:
            if key in _SCALARS:
                kwargs[key] = _SCALARS[key](raw)
            elif key in ("alpha", "alphas"):
                kwargs["alphas"] = _floats(raw)
            elif key == "probe_eps":
                kwargs["probe_eps"] = _floats(raw) or None
            elif key == "learners":
                kwargs["learners"] = tuple(parse_learner(s) for s in raw.split(";") if s.strip())
            elif key.startswith("synth_") and key[6:] in _SYNTH:
                synth[key[6:]] = _SYNTH[key[6:]](raw)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {raw!r} ({exc})") from exc
    try:
        if synth:
            kwargs["synthetic"] = SyntheticSpec(**synth)
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def read_config_file(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    values = {}
    for lineno, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        if not eq:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        values[key.strip()] = value.strip()
    return values


def load_config(path=None, overrides: dict | None = None) -> ExperimentConfig:
    values = read_config_file(path) if path else {}
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return parse_config(values)
