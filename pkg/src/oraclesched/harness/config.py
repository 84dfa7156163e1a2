"""INI-style experiment configuration files.

Sections and keys (every key optional)::

    [experiment]
    steps = 100000
    replications = 5
    seed = 0
    load = 0.9
    stride = 100
    out_dir = results
    check_invariants = true
    tail_fraction = 0.5

    [topology]
    kind = switch        ; or grid
    ports = 10           ; switch only
    rows = 4             ; grid only
    cols = 4

    [oracle]
    kind = bp-greedy
    perturbation = dyadic

    [weights]
    family = auto        ; auto, power, logpower or log
    a = 0.25
    b = 0.1
"""
from __future__ import annotations

import configparser

from .experiment import ConfigError

_SECTION_KEYS = {
    "experiment": {
        "steps", "replications", "seed", "load", "stride", "out_dir",
        "check_invariants", "tail_fraction",
    },
    "oracle": {"kind", "perturbation"},
    "weights": {"family", "a", "b"},
    "topology": {"kind", "ports", "rows", "cols"},
}


def read_config(path) -> dict:
    """Flatten a config file into :class:`ExperimentConfig` keyword strings."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    out: dict[str, str] = {}
    for section in parser.sections():
        allowed = _SECTION_KEYS.get(section)
        if allowed is None:
            raise ConfigError(f"unknown config section [{section}]")
        for key, value in parser.items(section):
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{section}]")
            if section == "oracle" and key == "kind":
                out["oracle"] = value
            elif section != "topology":
                out[key] = value

    if parser.has_section("topology"):
        topo = parser["topology"]
        kind = topo.get("kind", "switch").strip()
        if kind == "switch":
            out["topology"] = f"switch:{topo.get('ports', '10')}"
        elif kind == "grid":
            out["topology"] = f"grid:{topo.get('rows', '4')}x{topo.get('cols', '4')}"
        else:
            raise ConfigError(f"unknown topology kind {kind!r}")
    return out
