"""Reports: a JSON machine section plus rendered text, and module JSON input."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exact.parse import parse_scalar
from .exact.polynomial import PolyRing
from .exact.scalars import format_scalar


@dataclass
class Report:
    command: str
    machine: dict
    human: str = ""
    exit_code: int = 0

    def to_json(self) -> str:
        return render(self)


def render(report: Report) -> str:
    payload = {"command": report.command, "exit_code": report.exit_code,
               "machine": report.machine, "human": report.human}
    return json.dumps(payload, indent=2, sort_keys=True, default=str) + "\n"


def parse(text: str) -> Report:
    data = json.loads(text)
    return Report(data["command"], data["machine"], data.get("human", ""), data.get("exit_code", 0))


def verdict_of(machine: dict):
    for key in ("verdict", "ok"):
        if key in machine:
            return machine[key]
    return None


# --- module files ------------------------------------------------------------------

class ModuleFormatError(ValueError):
    pass


def _matrix(rows, name):
    try:
        return [[parse_scalar(str(c)) for c in row] for row in rows]
    except Exception as exc:
        raise ModuleFormatError(f"bad scalar in {name}: {exc}") from exc


def load_module(data: dict, default_group=None):
    """Build an EquivariantModule from the JSON module description."""
    from .descent.action import ActionError, EquivariantModule, GroupAction
    from .exact.modules import ModulePresentation
    try:
        names = list(data["variables"])
        mod = data["module"]
        degrees = [int(d) for d in mod["degrees"]]
        action = [_matrix(M, "module action") for M in mod["action"]]
        rels_text = data.get("relations", [])
    except (KeyError, TypeError) as exc:
        raise ModuleFormatError(f"missing field {exc}") from exc
    ring = PolyRing(names)
    if "group" in data:
        gens = [_matrix(A, "group generator") for A in data["group"]["generators"]]
        G = GroupAction(ring, gens, name=data["group"].get("name", ""),
                        coxeter=bool(data["group"].get("coxeter", False)))
    elif default_group is not None:
        G = default_group(ring)
    else:
        raise ModuleFormatError("no group given (use --type or a 'group' entry)")
    rels = []
    for col in rels_text:
        if len(col) != len(degrees):
            raise ModuleFormatError("relation column has the wrong length")
        try:
            rels.append([ring.parse(str(p)) for p in col])
        except Exception as exc:
            raise ModuleFormatError(f"bad polynomial: {exc}") from exc
    try:
        return EquivariantModule(ModulePresentation(ring, degrees, rels), G, action,
                                 recipe={"source": data.get("name", "file")})
    except ActionError as exc:
        raise ModuleFormatError(str(exc)) from exc


def dump_module(EM) -> dict:
    G = EM.group
    return {
        "variables": list(EM.ring.names),
        "group": {"name": G.name,
                  "generators": [[[format_scalar(c) for c in row] for row in A] for A in G.generators]},
        "module": {"degrees": list(EM.gen_degrees),
                   "action": [[[format_scalar(c) for c in row] for row in M] for M in EM.gen_action]},
        "relations": [[str(p) for p in col] for col in EM.relations],
    }
