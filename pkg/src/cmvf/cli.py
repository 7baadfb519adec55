"""``cmvf`` command-line driver.

    cmvf morse    --system planar9 --out out/
    cmvf interval --system planar9 --indices 0,1,2 --out out/
    cmvf cm       --system allencahn3d --field GF:2 --out out/
    cmvf plot     --system planar9 --product hasse --out out/

A system is a built-in name or a TOML file (see :mod:`cmvf.systems`).  A
bare complex can be given instead with ``--complex c.json [--mvf v.json]``;
without ``--mvf`` every cell is its own multivector.

Each command writes canonical JSON (and SVG where applicable) into
``--out`` and prints a tab-separated summary on stdout.  Exit codes: 0 ok,
2 configuration error, 3 computation error, 4 connection-matrix
verification failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .algebra import field_from_id
from .conley import connection_matrix, conley_index, verify_connection_matrix
from .discretize import SAMPLE_STRATEGIES, GeometricComplex, mvf_from_field
from .dynamics import FlowGraph, MorseDecomposition, finest_morse_decomposition, is_attractor, is_repeller, morse_interval
from .errors import (
    ArityMismatch,
    CmvfError,
    ConfigError,
    NotAnInterval,
    UnknownVariable,
    UnsupportedDimension,
    VFSyntaxError,
)
from .homology import betti_euler
from .lefschetz import LefschetzComplex, complex_from_json
from .mvf import MultivectorField, mvf_from_json
from .systems import load_system, parse_mesh

log = logging.getLogger("cmvf")

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_VERIFY = 0, 2, 3, 4
PRODUCTS = ("morse", "interval", "hasse")
CONFIG_ERRORS = (ConfigError, NotAnInterval, UnsupportedDimension, VFSyntaxError, UnknownVariable, ArityMismatch)


@dataclass
class PipelineConfig:
    out: Path
    system: str | None = None
    complex_file: str | None = None
    mvf_file: str | None = None
    mesh: str | None = None
    field: str | None = None
    seed: int | None = None
    indices: tuple[int, ...] | None = None
    product: str | None = None
    tol: float = 1e-9
    samples: str = "barycenter+vertices"


@dataclass
class Analysis:
    name: str
    mesh: str
    geometry: GeometricComplex | None
    complex: LefschetzComplex
    mvf: MultivectorField
    flow: FlowGraph
    morse: MorseDecomposition


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def run_pipeline(cfg: PipelineConfig) -> Analysis:
    """Mesh, transitions, minimal multivector field, flow graph and Morse decomposition."""
    t0 = time.perf_counter()
    if cfg.complex_file:
        try:
            X = complex_from_json(_read_json(cfg.complex_file))
            if cfg.field:
                X = X.with_field(field_from_id(cfg.field))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"invalid complex file: {exc}") from exc
        X.validate()
        if cfg.mvf_file:
            try:
                V = mvf_from_json(X, _read_json(cfg.mvf_file))
            except (KeyError, TypeError) as exc:
                raise ConfigError(f"invalid multivector file: {exc}") from exc
        else:
            V = MultivectorField(X, [[x] for x in range(len(X))])
        name, mesh, G = Path(cfg.complex_file).stem, "file", None
    else:
        if not cfg.system:
            raise ConfigError("either --system or --complex is required")
        spec = load_system(cfg.system)
        mesh_spec = parse_mesh(cfg.mesh, cfg.seed) if cfg.mesh else spec.mesh
        if cfg.seed is not None and mesh_spec.kind == "delaunay":
            mesh_spec = type(mesh_spec)("delaunay", points=mesh_spec.points, seed=cfg.seed)
        try:
            field_from_id(cfg.field or spec.field)
        except (ValueError, CmvfError) as exc:
            raise ConfigError(f"bad field {cfg.field!r}: {exc}") from exc
        f = spec.vector_field()
        G = spec.build_mesh(mesh_spec, cfg.field)
        X = G.complex
        V = mvf_from_field(G, f, cfg.tol, cfg.samples)
        name, mesh = spec.name, mesh_spec.describe()
    log.info("complex: %d cells, %d multivectors (%.1fs)", len(X), len(V), time.perf_counter() - t0)
    flow = FlowGraph(X, V)
    M = finest_morse_decomposition(flow)
    log.info("morse decomposition: %d sets (%.1fs)", len(M), time.perf_counter() - t0)
    return Analysis(name, mesh, G, X, V, flow, M)


def _write_json(path: Path, obj) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")
    return path


def _tsv(rows: Sequence[Sequence]) -> None:
    for row in rows:
        print("\t".join(str(v) for v in row))


def _sig(ch) -> str:
    return ",".join(str(c) for c in ch)


def _header(a: Analysis) -> dict:
    return {"system": a.name, "mesh": a.mesh, "field": a.complex.field.id, "n_cells": len(a.complex)}


def morse_report(a: Analysis) -> dict:
    M = a.morse
    inv = M.invariant_part()
    morse_sum = sum(betti_euler(ch) for ch in M.conley_indices)
    return {
        **_header(a),
        "morse_sets": [sorted(s) for s in M.morse_sets],
        "conley_indices": [list(ch) for ch in M.conley_indices],
        "poset": [list(p) for p in M.poset_pairs],
        "hasse": [list(p) for p in M.hasse_edges()],
        "euler": {
            "morse_sets": morse_sum,
            "invariant_part": betti_euler(conley_index(a.complex, a.mvf, inv)) if inv else 0,
        },
    }


def cmd_morse(cfg: PipelineConfig, a: Analysis | None = None) -> list[Path]:
    a = a or run_pipeline(cfg)
    M = a.morse
    files = [_write_json(cfg.out / "morse.json", morse_report(a))]
    if a.geometry is not None and a.geometry.ambient_dim == 2:
        from .plotting import plot_morse_sets

        files.append(plot_morse_sets(a.geometry, M, cfg.out / "morse.svg", f"Morse sets of {a.name}"))
    _tsv([("morse_set", "cells", "conley_index")])
    _tsv([(p, len(s), _sig(ch)) for p, (s, ch) in enumerate(zip(M.morse_sets, M.conley_indices))])
    return files


def _indices(cfg: PipelineConfig, M: MorseDecomposition) -> list[int]:
    if not cfg.indices:
        raise ConfigError("--indices is required")
    bad = [p for p in cfg.indices if not 0 <= p < len(M)]
    if bad:
        raise NotAnInterval(f"indices {bad} are outside 0..{len(M) - 1}")
    return sorted(set(cfg.indices))


def interval_report(a: Analysis, I: Sequence[int]) -> dict:
    M, G = a.morse, a.flow
    cells = morse_interval(G, M, I)
    down, up = M.is_down_set(I), M.is_up_set(I)
    return {
        **_header(a),
        "indices": list(I),
        "cells": sorted(cells),
        "conley_index": list(conley_index(a.complex, a.mvf, cells)),
        "contains_morse_sets": all(M.morse_sets[p] <= cells for p in I),
        "is_down_set": down,
        "is_up_set": up,
        "is_attractor": is_attractor(G, cells) if down else None,
        "is_repeller": is_repeller(G, cells, within=M.invariant_part()) if up else None,
    }


def cmd_interval(cfg: PipelineConfig, a: Analysis | None = None) -> list[Path]:
    a = a or run_pipeline(cfg)
    I = _indices(cfg, a.morse)
    rep = interval_report(a, I)
    files = [_write_json(cfg.out / "interval.json", rep)]
    if a.geometry is not None and a.geometry.ambient_dim == 2:
        from .plotting import plot_interval

        files.append(plot_interval(a.geometry, a.morse, I, rep["cells"], cfg.out / "interval.svg"))
    keys = ("indices", "conley_index", "contains_morse_sets", "is_down_set", "is_up_set", "is_attractor", "is_repeller")
    _tsv([("key", "value")])
    _tsv([("cells", len(rep["cells"]))])
    _tsv([(k, _sig(rep[k]) if isinstance(rep[k], list) else json.dumps(rep[k])) for k in keys])
    return files


def cmd_cm(cfg: PipelineConfig, a: Analysis | None = None) -> tuple[list[Path], bool]:
    a = a or run_pipeline(cfg)
    X, V, M = a.complex, a.mvf, a.morse
    cm = connection_matrix(X, V, M)
    report = verify_connection_matrix(cm, X, V, M)
    hasse = set(M.hasse_edges())
    counts: dict[tuple[int, int], int] = {}
    for j, col in enumerate(cm.delta.columns):
        for i in col:
            key = (cm.generators[i].morse_index, cm.generators[j].morse_index)
            counts[key] = counts.get(key, 0) + 1
    blocks = [
        {"from": q, "to": p, "entries": n, "adjacent": (p, q) in hasse} for (p, q), n in sorted(counts.items())
    ]
    data = {**_header(a), **cm.to_json(), "blocks": blocks}
    files = [
        _write_json(cfg.out / "cm.json", data),
        _write_json(cfg.out / "cm_report.json", report.to_json()),
    ]
    _tsv([("from", "to", "entries", "adjacent")])
    _tsv([(b["from"], b["to"], b["entries"], str(b["adjacent"]).lower()) for b in blocks])
    return files, report.ok


def cmd_plot(cfg: PipelineConfig, product: str | None, a: Analysis | None = None) -> Path:
    from .plotting import plot_hasse, plot_interval, plot_morse_sets

    if not product:
        raise ConfigError(f"no plot product given; choose one of {', '.join(PRODUCTS)}")
    if product not in PRODUCTS:
        raise ConfigError(f"unknown plot product {product!r}")
    a = a or run_pipeline(cfg)
    if product == "hasse":
        path = plot_hasse(a.morse, cfg.out / "hasse.svg", f"Morse poset of {a.name}")
    else:
        if a.geometry is None:
            raise UnsupportedDimension("mesh plots need a geometric complex")
        if product == "morse":
            path = plot_morse_sets(a.geometry, a.morse, cfg.out / "morse.svg", f"Morse sets of {a.name}")
        else:
            I = _indices(cfg, a.morse)
            cells = morse_interval(a.flow, a.morse, I)
            path = plot_interval(a.geometry, a.morse, I, cells, cfg.out / "interval.svg")
    _tsv([("product", "path"), (product, path)])
    return path


def _parse_indices(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad index list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cmvf", description="Morse decompositions and connection matrices of combinatorial multivector fields.")
    ap.add_argument("command", choices=("morse", "interval", "cm", "plot"))
    ap.add_argument("--system", help="built-in system (planar9, allencahn3d) or TOML system file")
    ap.add_argument("--complex", dest="complex_file", help="JSON Lefschetz complex instead of a system")
    ap.add_argument("--mvf", dest="mvf_file", help="JSON multivector field on --complex")
    ap.add_argument("--mesh", help="delaunay:N or cubical:AxBxC (overrides the system default)")
    ap.add_argument("--field", help="Q or GF:p (default: the system's field)")
    ap.add_argument("--out", type=Path, default=Path("."), help="output directory")
    ap.add_argument("--indices", type=_parse_indices, help="comma-separated Morse indices")
    ap.add_argument("--seed", type=int, help="mesh seed for delaunay meshes")
    ap.add_argument("--product", help="plot product: " + ", ".join(PRODUCTS))
    ap.add_argument("--tol", type=float, default=1e-9, help="relative threshold for transitions")
    ap.add_argument("--samples", choices=SAMPLE_STRATEGIES, default="barycenter+vertices")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    cfg = PipelineConfig(
        out=args.out,
        system=args.system,
        complex_file=args.complex_file,
        mvf_file=args.mvf_file,
        mesh=args.mesh,
        field=args.field,
        seed=args.seed,
        indices=args.indices,
        product=args.product,
        tol=args.tol,
        samples=args.samples,
    )
    try:
        if args.command == "morse":
            cmd_morse(cfg)
        elif args.command == "interval":
            cmd_interval(cfg)
        elif args.command == "cm":
            _, ok = cmd_cm(cfg)
            if not ok:
                print("cmvf: connection matrix verification failed", file=sys.stderr)
                return EXIT_VERIFY
        else:
            cmd_plot(cfg, args.product)
    except CONFIG_ERRORS as exc:
        print(f"cmvf: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CmvfError as exc:
        print(f"cmvf: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
