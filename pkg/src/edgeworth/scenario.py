"""Scenario files: one TOML document per economy + network + integrator setup.

Layout::

    name = "symmetric_pair"
    description = "free text"

    [economy]
    alphas = [0.5, 0.5]              # 2-good shorthand, or
    # exponents = [[0.5, 0.5], ...]  # one row per agent
    endowments = [[3.0, 1.0], [1.0, 3.0]]   # one row per agent

    [network]
    probabilities = [0.5, 0.5]       # optional, uniform if omitted

    [integrator]                     # optional, any IntegratorConfig field
    relative_error_target = 1e-10

    [labels]                         # optional, free-form strings
    agents = ["rich", "poor"]
"""

from __future__ import annotations

import dataclasses
import sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .economy import BOUNDARY_FLOOR, Allocation, UtilityParams
from .errors import BoundaryError, ParseError, ProbabilityError, ValidationError
from .integrate import IntegratorConfig
from .networks import NetworkSpec, weights_from_probabilities

_TOP_KEYS = {"name", "description", "economy", "network", "integrator", "labels"}
_ECONOMY_KEYS = {"alphas", "exponents", "endowments"}
_NETWORK_KEYS = {"probabilities"}
_CONFIG_FIELDS = {f.name: f.type for f in dataclasses.fields(IntegratorConfig)}


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    params: UtilityParams
    initial: Allocation
    network: NetworkSpec
    config: IntegratorConfig = field(default_factory=IntegratorConfig)
    description: str = ""
    labels: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.initial.n

    @property
    def m(self):
        return self.initial.m

    def with_network(self, p):
        return dataclasses.replace(self, network=weights_from_probabilities(p))

    def with_config(self, **changes):
        return dataclasses.replace(self, config=self.config.replace(**changes))


def _reject_unknown(table, allowed, prefix):
    for key in table:
        if key not in allowed:
            path = f"{prefix}.{key}" if prefix else key
            raise ValidationError(path, "unknown field")


def _matrix(value, path):
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(path, f"expected a rectangular array of numbers ({exc})") from None
    if arr.ndim != 2:
        raise ValidationError(path, f"expected one row per agent, got {arr.ndim}-d data")
    return arr


def coerce_config_value(key, value, path):
    kind = _CONFIG_FIELDS.get(key)
    if kind is None:
        raise ValidationError(path, "unknown integrator setting")
    try:
        if kind in (int, "int"):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError("not an integer")
            return int(value)
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(path, f"bad value {value!r}: {exc}") from None


def build_config(table, base=None, prefix="integrator"):
    base = base or IntegratorConfig()
    changes = {k: coerce_config_value(k, v, f"{prefix}.{k}") for k, v in table.items()}
    try:
        return base.replace(**changes)
    except ValueError as exc:
        raise ValidationError(prefix, str(exc)) from None


def scenario_from_dict(doc, source="<memory>"):
    """Validate a parsed document into a :class:`Scenario`."""
    _reject_unknown(doc, _TOP_KEYS, "")
    name = doc.get("name", Path(source).stem)
    if not isinstance(name, str):
        raise ValidationError("name", "must be a string")

    economy = doc.get("economy")
    if not isinstance(economy, dict):
        raise ValidationError("economy", "missing [economy] table")
    _reject_unknown(economy, _ECONOMY_KEYS, "economy")
    if "endowments" not in economy:
        raise ValidationError("economy.endowments", "required")
    E = _matrix(economy["endowments"], "economy.endowments")
    n, m = E.shape
    if n < 2 or m < 2:
        raise ValidationError("economy.endowments", f"need at least 2 agents and 2 goods, got {n}x{m}")
    if not np.all(np.isfinite(E)):
        raise ValidationError("economy.endowments", "entries must be finite")
    if E.min() <= BOUNDARY_FLOOR:
        raise BoundaryError(f"economy.endowments: entry {E.min()!r} is not strictly interior")

    if ("alphas" in economy) == ("exponents" in economy):
        raise ValidationError("economy", "give exactly one of 'alphas' or 'exponents'")
    try:
        if "alphas" in economy:
            if m != 2:
                raise ValidationError("economy.alphas", "shorthand only valid with 2 goods")
            alphas = np.array(economy["alphas"], dtype=float)
            if alphas.shape != (n,):
                raise ValidationError("economy.alphas", f"expected {n} values")
            params = UtilityParams.two_goods(alphas)
        else:
            A = _matrix(economy["exponents"], "economy.exponents")
            if A.shape != (n, m):
                raise ValidationError("economy.exponents", f"expected shape {(n, m)}, got {A.shape}")
            params = UtilityParams.from_agents(A)
    except ValidationError:
        raise
    except (TypeError, ValueError) as exc:
        key = "alphas" if "alphas" in economy else "exponents"
        raise ValidationError(f"economy.{key}", str(exc)) from None

    network = doc.get("network", {})
    if not isinstance(network, dict):
        raise ValidationError("network", "must be a table")
    _reject_unknown(network, _NETWORK_KEYS, "network")
    p = network.get("probabilities", [1.0 / n] * n)
    try:
        p = np.array(p, dtype=float)
    except (TypeError, ValueError):
        raise ValidationError("network.probabilities", "expected numbers") from None
    if p.shape != (n,):
        raise ValidationError("network.probabilities", f"expected {n} values, got shape {p.shape}")
    try:
        net = weights_from_probabilities(p)
    except ProbabilityError as exc:
        raise ProbabilityError(f"network.probabilities: {exc}") from None

    integrator = doc.get("integrator", {})
    if not isinstance(integrator, dict):
        raise ValidationError("integrator", "must be a table")
    config = build_config(integrator)

    labels = doc.get("labels", {})
    if not isinstance(labels, dict):
        raise ValidationError("labels", "must be a table")

    return Scenario(
        name=name,
        params=params,
        initial=Allocation.from_agents(E),
        network=net,
        config=config,
        description=str(doc.get("description", "")),
        labels=dict(labels),
    )


def bundled_scenarios():
    """Names of the scenarios shipped with the package, sorted."""
    root = resources.files("edgeworth") / "scenarios"
    return sorted(p.name[: -len(".toml")] for p in root.iterdir() if p.name.endswith(".toml"))


def _resolve(path_or_name):
    path = Path(path_or_name)
    if path.exists():
        return path.read_text(), str(path)
    candidate = resources.files("edgeworth") / "scenarios" / f"{path_or_name}.toml"
    if candidate.is_file():
        return candidate.read_text(), str(path_or_name)
    raise FileNotFoundError(f"no scenario file or bundled scenario named {path_or_name!r}")


def load_scenario(path_or_name):
    """Load a scenario from a TOML file path or a bundled scenario name."""
    text, source = _resolve(path_or_name)
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(f"{source}: {exc}") from None
    return scenario_from_dict(doc, source)
