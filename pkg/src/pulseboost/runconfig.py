"""Run configuration: one flat key = value file drives every command.

Defaults match the reproduced evaluation setup. Command-line
``--set key=value`` flags override file values; the full effective
config is echoed into every output artifact so runs are reproducible
from their outputs alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .boosting.config import TrainConfig
from .errors import ParseError
from .preprocessing import AGGREGATION_MODES, SegmentSpec

Combination = tuple[str, ...]

_TRAIN_KEYS = {
    "n_trees": int,
    "learning_rate": float,
    "max_depth": int,
    "reg_lambda": float,
    "gamma": float,
    "min_child_hessian": float,
    "base_score": float,
    "subsample": float,
    "colsample": float,
    "positive_weight": float,
}
_INT_KEYS = {"window", "overlap", "seed"}
_FLOAT_KEYS = {"train_ratio", "val_ratio", "test_ratio"}
_TEXT_KEYS = {"aggregation", "categories", "combinations"}

KNOWN_KEYS = set(_TRAIN_KEYS) | _INT_KEYS | _FLOAT_KEYS | _TEXT_KEYS


def parse_combinations(text: str) -> tuple[Combination, ...] | None:
    """'default' -> None; else semicolon-separated groups of +-joined names."""
    text = text.strip()
    if text == "default":
        return None
    groups = []
    for chunk in text.split(";"):
        names = tuple(n.strip() for n in chunk.replace(",", "+").split("+") if n.strip())
        if names:
            groups.append(names)
    if not groups:
        raise ValueError(f"no combinations in {text!r}")
    return tuple(groups)


def parse_categories(text: str) -> tuple[str, ...] | None:
    """'all' -> None; else a +- or comma-separated category list."""
    text = text.strip()
    if text == "all":
        return None
    names = tuple(n.strip() for n in text.replace(",", "+").split("+") if n.strip())
    if not names:
        raise ValueError(f"no categories in {text!r}")
    return names


@dataclass(frozen=True)
class RunConfig:
    """Everything a run needs beyond the dataset itself."""

    train: TrainConfig = field(default_factory=TrainConfig)
    segments: SegmentSpec = field(default_factory=SegmentSpec)
    aggregation: str = "feature_mean"
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0
    categories: tuple[str, ...] | None = None          # fit: None = all
    combinations: tuple[Combination, ...] | None = None  # ablate: None = default sets

    def __post_init__(self):
        if self.aggregation not in AGGREGATION_MODES:
            raise ValueError(
                f"aggregation must be one of {AGGREGATION_MODES}, got {self.aggregation!r}"
            )
        if self.train.seed != self.seed:
            object.__setattr__(self, "train", replace(self.train, seed=self.seed))

    def as_flat_dict(self) -> dict[str, str]:
        d: dict[str, object] = dict(self.train.to_dict())
        d.pop("seed", None)
        d.update(
            window=self.segments.window,
            overlap=self.segments.overlap,
            aggregation=self.aggregation,
            train_ratio=self.ratios[0],
            val_ratio=self.ratios[1],
            test_ratio=self.ratios[2],
            seed=self.seed,
            categories="all" if self.categories is None else "+".join(self.categories),
            combinations=(
                "default" if self.combinations is None
                else "; ".join("+".join(c) for c in self.combinations)
            ),
        )
        return {k: str(v) for k, v in sorted(d.items())}


def parse_config_file(path: str | Path) -> dict[str, str]:
    """Flat 'key = value' lines; blank lines and # comments ignored."""
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", path=str(path), line=lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in KNOWN_KEYS:
            raise ParseError(
                f"unknown config key {key!r}; known keys: {sorted(KNOWN_KEYS)}",
                path=str(path), line=lineno,
            )
        values[key] = value
    return values


def build_run_config(values: dict[str, str]) -> RunConfig:
    """RunConfig from string key/values layered over the defaults."""
    def convert(key: str, caster, text: str):
        try:
            return caster(text)
        except ValueError as exc:
            raise ParseError(f"config key {key!r}: {exc}") from exc

    train_kwargs = {}
    for key, caster in _TRAIN_KEYS.items():
        if key in values:
            train_kwargs[key] = convert(key, caster, values[key])
    seed = convert("seed", int, values["seed"]) if "seed" in values else 0
    defaults = RunConfig()
    ratios = (
        convert("train_ratio", float, values["train_ratio"]) if "train_ratio" in values else defaults.ratios[0],
        convert("val_ratio", float, values["val_ratio"]) if "val_ratio" in values else defaults.ratios[1],
        convert("test_ratio", float, values["test_ratio"]) if "test_ratio" in values else defaults.ratios[2],
    )
    try:
        spec = SegmentSpec(
            window=convert("window", int, values["window"]) if "window" in values else defaults.segments.window,
            overlap=convert("overlap", int, values["overlap"]) if "overlap" in values else defaults.segments.overlap,
        )
        return RunConfig(
            train=TrainConfig(seed=seed, **train_kwargs),
            segments=spec,
            aggregation=values.get("aggregation", defaults.aggregation),
            ratios=ratios,
            seed=seed,
            categories=(
                parse_categories(values["categories"]) if "categories" in values else None
            ),
            combinations=(
                parse_combinations(values["combinations"]) if "combinations" in values else None
            ),
        )
    except ValueError as exc:
        raise ParseError(f"invalid configuration: {exc}") from exc


def load_run_config(
    path: str | Path | None, overrides: dict[str, str] | None = None
) -> RunConfig:
    """File values (if any) layered under command-line overrides."""
    values = parse_config_file(path) if path is not None else {}
    for key, val in (overrides or {}).items():
        if key not in KNOWN_KEYS:
            raise ParseError(
                f"unknown config key {key!r}; known keys: {sorted(KNOWN_KEYS)}"
            )
        values[key] = val
    return build_run_config(values)
