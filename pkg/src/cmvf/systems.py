"""Built-in example systems and the system-definition file format.

A system file is TOML::

    name = "planar9"
    dim = 2
    equations = ["x1*(1 - x1^2 - 3*x2^2) - 0.01", "x2*(1 - 3*x1^2 - 2*x2^2) + 0.05"]
    field = "Q"                       # or "GF(p)"

    [constants]                       # optional named constants
    lam = 9.42477796076938

    [domain]
    box = [[-1.4, 1.4], [-1.1, 1.1]]

    [mesh]
    type = "delaunay"                 # interior point count + seed
    points = 800
    seed = 0
    # type = "cubical"; resolution = [25, 21, 15]
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field, replace
from pathlib import Path
from typing import Mapping

try:  # Python 3.11+
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - depends on interpreter
    import tomli as tomllib

from .discretize import GeometricComplex, cubical_mesh, delaunay_mesh
from .errors import ConfigError
from .expr import VectorFieldExpr, parse_vf


@dataclass(frozen=True)
class MeshSpec:
    kind: str  # "delaunay" | "cubical"
    points: int = 0
    seed: int = 0
    resolution: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.kind == "delaunay":
            return f"delaunay:{self.points}"
        return "cubical:" + "x".join(str(r) for r in self.resolution)


@dataclass(frozen=True)
class SystemSpec:
    name: str
    dim: int
    equations: tuple[str, ...]
    box: tuple[tuple[float, float], ...]
    mesh: MeshSpec
    field: str = "Q"
    constants: Mapping[str, float] = dc_field(default_factory=dict)

    def vector_field(self) -> VectorFieldExpr:
        return parse_vf(list(self.equations), self.dim, dict(self.constants))

    def build_mesh(self, mesh: MeshSpec | None = None, field_id: str | None = None) -> GeometricComplex:
        mesh = mesh or self.mesh
        fid = field_id or self.field
        if mesh.kind == "delaunay":
            if self.dim != 2:
                raise ConfigError("delaunay meshes are planar only")
            return delaunay_mesh(self.box, mesh.points, mesh.seed, fid)
        if mesh.kind == "cubical":
            res = mesh.resolution
            if len(res) == 1:
                res = res * self.dim
            if len(res) != self.dim:
                raise ConfigError(f"cubical resolution {res} does not match dimension {self.dim}")
            return cubical_mesh(self.box, res, fid)
        raise ConfigError(f"unknown mesh type {mesh.kind!r}")


PLANAR9 = SystemSpec(
    name="planar9",
    dim=2,
    equations=(
        "x1*(1 - x1^2 - 3*x2^2) - 0.01",
        "x2*(1 - 3*x1^2 - 2*x2^2) + 0.05",
    ),
    box=((-1.4, 1.4), (-1.1, 1.1)),
    mesh=MeshSpec("delaunay", points=800, seed=0),
)

# Galerkin projection of an Allen-Cahn equation onto three Laplacian modes.
# The x3 bracket enters with a plus sign so the cubic x3^3 term is damping.
ALLENCAHN3D = SystemSpec(
    name="allencahn3d",
    dim=3,
    equations=(
        "(lam - 1)*x1 - 3*lam/(2*pi)*(x1^3 - x1^2*x3 + x2^2*x3 + 2*x1*(x2^2 + x3^2))",
        "(lam - 4)*x2 - 3*lam/(2*pi)*x2*(2*x1^2 + x2^2 + 2*x1*x3 + 2*x3^2)",
        "(lam - 9)*x3 + lam/(2*pi)*(x1*(x1^2 - 3*x2^2) - 3*x3*(2*x1^2 + 2*x2^2 + x3^2))",
    ),
    box=((-1.8, 1.8), (-1.5, 1.5), (-1.0, 1.0)),
    mesh=MeshSpec("cubical", resolution=(25, 21, 15)),
    constants={"lam": 3 * math.pi},
)

BUILTINS = {s.name: s for s in (PLANAR9, ALLENCAHN3D)}


def parse_mesh(text: str, seed: int | None = None) -> MeshSpec:
    """``delaunay:N`` or ``cubical:AxBxC`` (``cubical:N`` repeats ``N`` on every axis)."""
    m = re.fullmatch(r"\s*(delaunay|cubical)\s*:\s*([0-9x]+)\s*", text or "")
    if not m:
        raise ConfigError(f"bad mesh {text!r}; expected delaunay:N or cubical:AxBxC")
    kind, arg = m.groups()
    try:
        if kind == "delaunay":
            return MeshSpec("delaunay", points=int(arg), seed=seed or 0)
        return MeshSpec("cubical", resolution=tuple(int(v) for v in arg.split("x")))
    except ValueError:
        raise ConfigError(f"bad mesh {text!r}") from None


def _mesh_from_table(table: Mapping) -> MeshSpec:
    kind = table.get("type")
    if kind == "delaunay":
        return MeshSpec("delaunay", points=int(table.get("points", 400)), seed=int(table.get("seed", 0)))
    if kind == "cubical":
        res = table.get("resolution")
        if isinstance(res, int):
            res = [res]
        if not res:
            raise ConfigError("cubical mesh needs a resolution")
        return MeshSpec("cubical", resolution=tuple(int(r) for r in res))
    raise ConfigError(f"unknown mesh type {kind!r}")


def system_from_mapping(data: Mapping) -> SystemSpec:
    try:
        dim = int(data["dim"])
        equations = tuple(str(e) for e in data["equations"])
        box = tuple((float(a), float(b)) for a, b in data["domain"]["box"])
        mesh = _mesh_from_table(data.get("mesh", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid system definition: {exc}") from exc
    if len(box) != dim:
        raise ConfigError(f"domain box has {len(box)} axes, system has {dim}")
    if any(a >= b for a, b in box):
        raise ConfigError("domain box needs lower < upper on every axis")
    constants = {str(k): float(v) for k, v in data.get("constants", {}).items()}
    return SystemSpec(
        name=str(data.get("name", "system")),
        dim=dim,
        equations=equations,
        box=box,
        mesh=mesh,
        field=str(data.get("field", "Q")),
        constants=constants,
    )


def load_system(name_or_path: str) -> SystemSpec:
    """A built-in system by name, or a TOML system file."""
    if name_or_path in BUILTINS:
        return BUILTINS[name_or_path]
    path = Path(name_or_path)
    if not path.is_file():
        raise ConfigError(f"no built-in system or file named {name_or_path!r}")
    try:
        data = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return system_from_mapping(data)


def with_mesh(spec: SystemSpec, mesh: MeshSpec) -> SystemSpec:
    return replace(spec, mesh=mesh)
