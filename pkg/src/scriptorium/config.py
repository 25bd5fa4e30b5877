"""Flat key=value configuration shared by the CLI and the service.

Recognized keys:

    ns.<prefix> = <iri base>          extends/overrides the namespace table
    weights.title|author|incipit     scoring weights
    thresholds.auto|review           banding thresholds
    blocking.min_token_len           blocking: minimum shared-token length
    blocking.incipit_prefix          blocking: incipit prefix length (tokens)

Unknown keys are rejected so typos fail loudly. Command-line flags always
win over file values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .linkage import BlockingConfig, Thresholds
from .rdf import NamespaceTable


class ConfigError(ValueError):
    pass


@dataclass
class Settings:
    namespaces: NamespaceTable = field(default_factory=NamespaceTable.default)
    weights: dict[str, float] = field(default_factory=dict)
    thresholds: Thresholds = field(default_factory=Thresholds)
    blocking: BlockingConfig = field(default_factory=BlockingConfig)


def parse_settings(text: str) -> Settings:
    ns_overrides: dict[str, str] = {}
    weights: dict[str, float] = {}
    thresholds = {"auto": Thresholds.auto, "review": Thresholds.review}
    blocking = {"min_token_len": BlockingConfig.min_title_token_len,
                "incipit_prefix": BlockingConfig.incipit_prefix_tokens}

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("ns."):
            ns_overrides[key[3:]] = value
        elif key in ("weights.title", "weights.author", "weights.incipit"):
            weights[key.split(".", 1)[1]] = _number(key, value)
        elif key in ("thresholds.auto", "thresholds.review"):
            thresholds[key.split(".", 1)[1]] = _number(key, value)
        elif key == "blocking.min_token_len":
            blocking["min_token_len"] = int(_number(key, value))
        elif key == "blocking.incipit_prefix":
            blocking["incipit_prefix"] = int(_number(key, value))
        else:
            raise ConfigError(f"line {lineno}: unknown configuration key {key!r}")

    return Settings(
        namespaces=NamespaceTable.from_mapping(ns_overrides),
        weights=weights,
        thresholds=Thresholds(auto=thresholds["auto"], review=thresholds["review"]),
        blocking=BlockingConfig(min_title_token_len=blocking["min_token_len"],
                                incipit_prefix_tokens=blocking["incipit_prefix"]),
    )


def _number(key: str, value: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {value!r}") from None


def load_settings(path: str | Path | None) -> Settings:
    if path is None:
        return Settings()
    return parse_settings(Path(path).read_text("utf-8"))
