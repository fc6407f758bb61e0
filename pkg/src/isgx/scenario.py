"""Scenario files: JSON descriptions of (X, G, alpha, representations)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .action import DEFAULT_TOL, PartialAction, tautological_action
from .covrep import MatrixRep, regular_rep
from .errors import IsgxError, ScenarioError
from .semigroup import FiniteInverseSemigroup, GroundSet, PartialBijection, generate_semigroup

BUNDLED = ("semilattice", "z2-partial", "ix2-tautological", "chain3-semilattice", "trivial-group")
MUTATIONS = ("corrupt-axiom-iii", "corrupt-covariance", "corrupt-ideal", "corrupt-table")


@dataclass
class Scenario:
    name: str
    ground: GroundSet
    semigroup: FiniteInverseSemigroup
    action: PartialAction
    reps: list[MatrixRep] = field(default_factory=list)
    tolerance: float = DEFAULT_TOL
    seed: int = 0

    def rep(self, name: str) -> MatrixRep:
        for r in self.reps:
            if r.name == name:
                return r
        raise ScenarioError(f"no representation named {name!r} (have {[r.name for r in self.reps]})", "$.representations")


def schema() -> dict:
    return json.loads(resources.files("isgx").joinpath("data/scenario.schema.json").read_text())


def bundled_path(name: str) -> Path:
    stem = name[:-5] if name.endswith(".json") else name
    return Path(str(resources.files("isgx").joinpath(f"data/scenarios/{stem}.json")))


def resolve(path: str | Path) -> Path:
    """Return ``path`` if it exists, else the bundled scenario of that name."""
    p = Path(path)
    if p.exists():
        return p
    b = bundled_path(p.name)
    if b.exists():
        return b
    raise ScenarioError(f"no such scenario file: {path}")


def load(path: str | Path) -> Scenario:
    p = resolve(path)
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from exc
    return parse(data, default_name=p.stem)


def _where(path) -> str:
    return "$" + "".join(f"[{k}]" if isinstance(k, int) else f".{k}" for k in path)


def parse(data: dict[str, Any], default_name: str = "scenario") -> Scenario:
    errors = sorted(jsonschema.Draft202012Validator(schema()).iter_errors(data), key=lambda e: list(e.path))
    if errors:
        err = errors[0]
        raise ScenarioError(err.message, _where(err.absolute_path))
    try:
        ground = GroundSet(tuple(data["ground_set"]))
        S = _parse_semigroup(data["semigroup"], ground)
        pa = _parse_action(data["action"], S, ground)
        reps = [_parse_rep(cfg, k, pa, S, ground) for k, cfg in enumerate(data.get("representations", ["regular"]))]
    except ScenarioError:
        raise
    except IsgxError as exc:
        raise ScenarioError(str(exc)) from exc
    names = [r.name for r in reps]
    if len(set(names)) != len(names):
        raise ScenarioError(f"duplicate representation names {names}", "$.representations")
    return Scenario(
        name=data.get("name", default_name),
        ground=ground,
        semigroup=S,
        action=pa,
        reps=reps,
        tolerance=float(data.get("tolerance", DEFAULT_TOL)),
        seed=int(data.get("seed", 0)),
    )


def _point_map(ground: GroundSet, mapping: dict[str, str], where: str) -> PartialBijection:
    try:
        return PartialBijection.from_mapping(ground, mapping)
    except IsgxError as exc:
        raise ScenarioError(str(exc), where) from exc


def _parse_semigroup(cfg: dict, ground: GroundSet) -> FiniteInverseSemigroup:
    if cfg["mode"] == "generators":
        names = list(cfg["generators"])
        gens = [_point_map(ground, cfg["generators"][n], f"$.semigroup.generators.{n}") for n in names]
        return generate_semigroup(gens, names, unit_name=cfg.get("unit_name", "e"))

    labels = cfg["elements"]
    k = len(labels)
    idx = {name: i for i, name in enumerate(labels)}

    def look(name, where):
        if name not in idx:
            raise ScenarioError(f"unknown element {name!r}", where)
        return idx[name]

    mult = cfg["mult"]
    if len(mult) != k or any(len(row) != k for row in mult):
        raise ScenarioError(f"multiplication table must be {k}x{k}", "$.semigroup.mult")
    table = [[look(v, f"$.semigroup.mult[{i}][{j}]") for j, v in enumerate(row)] for i, row in enumerate(mult)]
    missing = [n for n in labels if n not in cfg["inv"]]
    if missing:
        raise ScenarioError(f"involution missing for {missing}", "$.semigroup.inv")
    inv = [look(cfg["inv"][n], f"$.semigroup.inv.{n}") for n in labels]
    unit = look(cfg["unit"], "$.semigroup.unit")
    # laws are checked by the validate command, not here
    return FiniteInverseSemigroup(labels, table, inv, unit)


def _parse_action(cfg, S: FiniteInverseSemigroup, ground: GroundSet) -> PartialAction:
    if cfg == "tautological":
        if S.embedding is None:
            raise ScenarioError("tautological action requires a semigroup given by generators", "$.action")
        return tautological_action(S)
    unknown = [g for g in cfg if g not in S.labels]
    if unknown:
        raise ScenarioError(f"unknown elements {unknown}", "$.action")
    missing = [g for g in S.labels if g not in cfg]
    if missing:
        raise ScenarioError(f"no record for elements {missing}", "$.action")
    maps, ideals = [], []
    for g in S.labels:
        rec, where = cfg[g], f"$.action.{g}"
        m = _point_map(ground, rec["map"], where + ".map")
        if "domain" in rec and set(rec["domain"]) != set(rec["map"]):
            raise ScenarioError("declared domain differs from the keys of map", where + ".domain")
        ideal = ground.subset(rec["ideal"]) if "ideal" in rec else m.range
        maps.append(m)
        ideals.append(ideal)
    return PartialAction.from_maps(S, ground, maps, ideals)


def _complex_matrix(rows, dim: int, where: str) -> np.ndarray:
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ScenarioError(f"matrix must be {dim}x{dim}", where)
    return np.array([[complex(*z) if isinstance(z, list) else complex(z) for z in row] for row in rows], dtype=complex)


def _parse_rep(cfg, k: int, pa: PartialAction, S: FiniteInverseSemigroup, ground: GroundSet) -> MatrixRep:
    if cfg == "regular":
        return regular_rep(pa)
    where = f"$.representations[{k}]"
    dim = cfg["dim"]
    if len(cfg["labeling"]) != dim:
        raise ScenarioError(f"labeling has {len(cfg['labeling'])} entries, dim is {dim}", where + ".labeling")
    labeling = tuple(ground.index(p) for p in cfg["labeling"])
    missing = [g for g in S.labels if g not in cfg["u"]]
    if missing:
        raise ScenarioError(f"u missing for elements {missing}", where + ".u")
    u = tuple(_complex_matrix(cfg["u"][g], dim, f"{where}.u.{g}") for g in S.labels)
    return MatrixRep(labeling, u, name=cfg.get("name", f"rep{k}"))
