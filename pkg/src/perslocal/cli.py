"""Command line front end: ``spectrum``, ``local`` and ``validate``.

``local`` fans out one task per ``(vertex, n, i, j)`` over a bounded process
pool.  Each task only touches the two link complexes it needs, built straight
from the neighbourhood of the vertex, and results are sorted before they are
written, so the output does not depend on ``--jobs``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from . import __version__
from .builders import (
    DEFAULT_MAX_DIM,
    PointCloud,
    WeightedGraph,
    clique_filtration,
    graph_link_view,
    neighbourhood_complex,
    vr_filtration,
)
from .complex import betti_numbers, combinatorial_laplacian
from .errors import (
    DuplicateEdge,
    InconsistentDimension,
    ParseError,
    PersLocalError,
    UnknownVertex,
)
from .localize import link, local_betti, local_laplacian, relative_local_laplacian
from .numerics import Tolerance, pseudoinverse, symmetric_eigenvalues
from .persist import (
    Filtration,
    persistent_laplacian_of_links,
    persistent_local_betti,
    persistent_local_laplacian,
    relative_persistent_local_laplacian,
)

log = logging.getLogger("perslocal")

CSV_COLUMNS = ["vertex", "n", "i", "j", "r_i", "r_j", "size", "zero_mult", "gap", "eigenvalues", "error"]

Data = Union[PointCloud, WeightedGraph]


# -- ingestion -------------------------------------------------------------------


def _content_lines(path):
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line


def _split(line: str) -> List[str]:
    return line.replace(",", " ").split()


def ingest(path, kind: str = "points") -> Data:
    """Read a point CSV, a distance matrix, or a ``u v w`` edge list.

    Lines starting with ``#`` are ignored.  An edge-list line holding a single
    integer declares an isolated vertex.
    """
    if kind in ("points", "distances"):
        rows = []
        width = None
        for lineno, line in _content_lines(path):
            try:
                row = [float(t) for t in _split(line)]
            except ValueError:
                if not rows and width is None and lineno == 1:
                    continue  # header line
                raise ParseError(f"non-numeric entry in {line!r}", lineno)
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise InconsistentDimension(f"expected {width} values, got {len(row)}", lineno)
            if not all(np.isfinite(row)):
                raise ParseError("non-finite value", lineno)
            rows.append(row)
        if not rows:
            raise ParseError(f"no data in {path}")
        arr = np.array(rows)
        if kind == "points":
            return PointCloud.from_points(arr)
        try:
            return PointCloud(arr)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
    if kind == "graph":
        edges = {}
        vertices = set()
        for lineno, line in _content_lines(path):
            parts = _split(line)
            try:
                if len(parts) == 1:
                    vertices.add(int(parts[0]))
                    continue
                if len(parts) != 3:
                    raise ValueError
                a, b, w = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise ParseError(f"expected 'u v w', got {line!r}", lineno)
            if a < 0 or b < 0:
                raise ParseError("vertex ids must be non-negative", lineno)
            if a == b:
                raise ParseError(f"self-loop at vertex {a}", lineno)
            if not np.isfinite(w):
                raise ParseError("non-finite weight", lineno)
            key = (min(a, b), max(a, b))
            if key in edges:
                raise DuplicateEdge(f"duplicate edge {key}", lineno)
            edges[key] = w
        return WeightedGraph(tuple(vertices), edges)
    raise ValueError(f"unknown input kind {kind!r}")


# -- configuration ---------------------------------------------------------------


@dataclass
class JobConfig:
    input: str
    kind: str = "points"
    scales: Optional[List[float]] = None
    auto_scales: Optional[int] = None
    scale_min: Optional[float] = None
    scale_max: Optional[float] = None
    max_dim: int = DEFAULT_MAX_DIM
    dims: List[int] = field(default_factory=lambda: [1])
    vertices: Union[str, List[int]] = "all"
    pairs: Union[str, List[Tuple[int, int]]] = "adjacent"
    tol: Tolerance = field(default_factory=Tolerance)
    jobs: int = 1
    out: Optional[str] = None
    format: str = "csv"
    strict: bool = False
    skip_errors: bool = False
    augmented: bool = False
    timing: Optional[str] = None

    def check(self):
        if self.jobs < 1:
            raise ValueError("--jobs must be at least 1")
        if any(n < 0 or n > self.max_dim for n in self.dims):
            raise ValueError(f"dimensions {self.dims} must lie in 0..{self.max_dim}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")


def resolve_scales(cfg: JobConfig, data: Data) -> List[float]:
    if cfg.scales:
        scales = [float(r) for r in cfg.scales]
    elif cfg.auto_scales:
        if isinstance(data, WeightedGraph):
            weights = list(data.edges.values()) or [0.0]
            hi = max(weights)
        else:
            hi = float(data.distances.max()) if len(data) else 0.0
        lo = 0.0 if cfg.scale_min is None else cfg.scale_min
        hi = hi if cfg.scale_max is None else cfg.scale_max
        if cfg.auto_scales == 1:
            scales = [hi]
        else:
            scales = [float(r) for r in np.linspace(lo, hi, cfg.auto_scales)]
    else:
        raise ValueError("give --scales or --auto-scales")
    if any(a >= b for a, b in zip(scales, scales[1:])):
        raise ValueError(f"scales must be strictly ascending: {scales}")
    return scales


def resolve_vertices(cfg: JobConfig, data: Data) -> List[int]:
    if cfg.vertices == "all":
        return list(data.vertices) if isinstance(data, WeightedGraph) else list(range(len(data)))
    return list(cfg.vertices)


def resolve_pairs(mode, m: int) -> List[Tuple[int, int]]:
    """Index pairs for ``m + 1`` scales: ``diag``, ``adjacent`` (diag + (i, i+1)) or ``all``."""
    if not isinstance(mode, str):
        return sorted(set((int(i), int(j)) for i, j in mode))
    if mode == "diag":
        return [(i, i) for i in range(m + 1)]
    if mode == "adjacent":
        return sorted([(i, i) for i in range(m + 1)] + [(i, i + 1) for i in range(m)])
    if mode == "all":
        return [(i, j) for i in range(m + 1) for j in range(i, m + 1)]
    raise ValueError(f"unknown pair mode {mode!r}")


# -- per-task work ---------------------------------------------------------------


@dataclass
class ResultRow:
    vertex: int
    n: int
    i: int
    j: int
    r_i: float
    r_j: float
    size: int = 0
    zero_mult: int = 0
    gap: Optional[float] = None
    eigenvalues: List[float] = field(default_factory=list)
    error: str = ""

    @property
    def key(self):
        return (self.vertex, self.n, self.i, self.j)


def _link_complex(data: Data, v: int, r: float, max_dim: int):
    if isinstance(data, WeightedGraph):
        return graph_link_view(data, v, r, max_dim)
    if not 0 <= v < len(data):
        raise UnknownVertex(f"point index {v} out of range")
    return neighbourhood_complex(data, v, r, max_dim)


def _degree(data: Data, v: int, r: float) -> int:
    if isinstance(data, WeightedGraph):
        return len(data.neighbours(v, r))
    if not 0 <= v < len(data):
        raise UnknownVertex(f"point index {v} out of range")
    return len(data.neighbours(v, r))


def local_operator(data: Data, v: int, n: int, r_i: float, r_j: float, max_dim: int,
                   tol: Tolerance, augmented: bool = False) -> np.ndarray:
    """(i, j)-persistent local Laplacian of ``v`` from its neighbourhood alone."""
    if n == 0:
        _degree(data, v, r_i)
        return np.array([[float(_degree(data, v, r_j))]])
    lk_i = _link_complex(data, v, r_i, max_dim)
    lk_j = _link_complex(data, v, r_j, max_dim)
    return persistent_laplacian_of_links(lk_i, lk_j, n, augmented, tol)


_WORKER = {}


def _init_worker(data, scales, max_dim, tol, augmented):
    _WORKER.update(data=data, scales=scales, max_dim=max_dim, tol=tol, augmented=augmented)


def _run_task(task):
    v, n, i, j = task
    w = _WORKER
    scales = w["scales"]
    row = ResultRow(v, n, i, j, scales[i], scales[j])
    t0 = time.perf_counter()
    try:
        op = local_operator(w["data"], v, n, scales[i], scales[j], w["max_dim"], w["tol"], w["augmented"])
        spec = symmetric_eigenvalues(op, w["tol"])
        row.size = op.shape[0]
        row.zero_mult = spec.zero_multiplicity
        row.gap = spec.spectral_gap
        row.eigenvalues = list(spec.eigenvalues)
    except PersLocalError as exc:
        row.error = f"{type(exc).__name__}: {exc}"
    return row, time.perf_counter() - t0


def run(cfg: JobConfig, data: Optional[Data] = None):
    """Execute a ``local`` job; returns ``(rows, timings, scales)``.

    Rows come back sorted by ``(vertex, n, i, j)``.  ``timings`` maps each task
    key to its wall-clock seconds.
    """
    cfg.check()
    if data is None:
        data = ingest(cfg.input, cfg.kind)
    scales = resolve_scales(cfg, data)
    vertices = resolve_vertices(cfg, data)
    pairs = resolve_pairs(cfg.pairs, len(scales) - 1)
    for i, j in pairs:
        if not 0 <= i <= j < len(scales):
            raise ValueError(f"pair ({i}, {j}) outside 0..{len(scales) - 1}")
    tasks = [(v, n, i, j) for v in vertices for n in sorted(set(cfg.dims)) for i, j in pairs]
    init = (data, scales, cfg.max_dim, cfg.tol, cfg.augmented)
    if cfg.jobs == 1:
        _init_worker(*init)
        results = [_run_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (cfg.jobs * 8))
        with ProcessPoolExecutor(cfg.jobs, initializer=_init_worker, initargs=init) as pool:
            results = list(pool.map(_run_task, tasks, chunksize=chunk))
    results.sort(key=lambda rt: rt[0].key)
    rows = [r for r, _ in results]
    if cfg.strict:
        bad = [r for r in rows if r.error]
        if bad:
            r = bad[0]
            raise PersLocalError(f"task (v={r.vertex}, n={r.n}, i={r.i}, j={r.j}) failed: {r.error}")
    timings = {r.key: t for r, t in results}
    if cfg.skip_errors:
        rows = [r for r in rows if not r.error]
    return rows, timings, scales


# -- serialisation ---------------------------------------------------------------


def _fmt(x: Optional[float]) -> str:
    return "" if x is None else repr(float(x))


def header(cfg: JobConfig, scales) -> dict:
    return {
        "version": __version__,
        "tolerance": {"relative": cfg.tol.relative, "absolute_floor": cfg.tol.absolute_floor},
        "scales": list(scales),
        "max_dim": cfg.max_dim,
        "augmented": cfg.augmented,
    }


def rows_to_csv(rows: Sequence[ResultRow], head: Optional[dict] = None) -> str:
    buf = io.StringIO()
    if head is not None:
        buf.write("# " + json.dumps(head, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow([
            r.vertex, r.n, r.i, r.j, _fmt(r.r_i), _fmt(r.r_j), r.size, r.zero_mult,
            _fmt(r.gap), ";".join(repr(float(x)) for x in r.eigenvalues), r.error,
        ])
    return buf.getvalue()


def rows_from_csv(text: str) -> Tuple[Optional[dict], List[ResultRow]]:
    lines = text.splitlines()
    head = None
    if lines and lines[0].startswith("# "):
        head = json.loads(lines[0][2:])
        lines = lines[1:]
    rows = []
    for rec in csv.DictReader(lines):
        rows.append(ResultRow(
            vertex=int(rec["vertex"]), n=int(rec["n"]), i=int(rec["i"]), j=int(rec["j"]),
            r_i=float(rec["r_i"]), r_j=float(rec["r_j"]), size=int(rec["size"]),
            zero_mult=int(rec["zero_mult"]),
            gap=float(rec["gap"]) if rec["gap"] else None,
            eigenvalues=[float(x) for x in rec["eigenvalues"].split(";")] if rec["eigenvalues"] else [],
            error=rec.get("error") or "",
        ))
    return head, rows


def rows_to_json(rows: Sequence[ResultRow], head: dict) -> str:
    return json.dumps({"header": head, "rows": [asdict(r) for r in rows]}, indent=1)


def rows_from_json(text: str) -> Tuple[dict, List[ResultRow]]:
    obj = json.loads(text)
    return obj["header"], [ResultRow(**r) for r in obj["rows"]]


def _emit(text: str, out: Optional[str]):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- spectrum / validate ---------------------------------------------------------


def build_filtration(data: Data, scales, max_dim: int) -> Filtration:
    if isinstance(data, WeightedGraph):
        return clique_filtration(data, scales, max_dim)
    return vr_filtration(data, scales, max_dim)


def global_spectra(filt: Filtration, dims, tol: Tolerance) -> List[dict]:
    out = []
    for idx, (k, r) in enumerate(zip(filt.complexes, filt.scales)):
        for n in dims:
            if n > k.max_dimension:
                spec = symmetric_eigenvalues(np.zeros((0, 0)), tol)
            else:
                spec = symmetric_eigenvalues(combinatorial_laplacian(k, n), tol)
            out.append({"index": idx, "r": r, "n": n, "size": len(spec), "zero_mult": spec.zero_multiplicity,
                        "gap": spec.spectral_gap, "eigenvalues": list(spec.eigenvalues)})
    return out


def validate(cfg: JobConfig, data: Optional[Data] = None, max_vertices: int = 12) -> List[dict]:
    """Run the invariant checks on (a prefix of) the actual input.

    Returns one record per invariant with ``passed``, number of cases and the
    worst residual.  Failures are report content; nothing is raised.
    """
    if data is None:
        data = ingest(cfg.input, cfg.kind)
    scales = resolve_scales(cfg, data)
    tol = cfg.tol
    filt = build_filtration(data, scales, cfg.max_dim)
    vertices = resolve_vertices(cfg, data)[:max_vertices]
    top = min(cfg.max_dim, 2)
    checks = {}

    def record(name, residual, ok):
        c = checks.setdefault(name, {"invariant": name, "cases": 0, "failures": 0, "worst_residual": 0.0})
        c["cases"] += 1
        c["failures"] += 0 if ok else 1
        c["worst_residual"] = max(c["worst_residual"], float(residual))

    for k in filt.complexes:
        for n in range(1, k.max_dimension):
            prod = k.boundary_matrix(n) @ k.boundary_matrix(n + 1)
            res = float(np.abs(prod).max()) if prod.size else 0.0
            record("boundary_squared_zero", res, res == 0)
        betti = betti_numbers(k, min(top, k.max_dimension))
        for n, b in enumerate(betti):
            z = symmetric_eigenvalues(combinatorial_laplacian(k, n), tol).zero_multiplicity
            record("hodge_static", abs(z - b), z == b)
        for n in range(1, k.max_dimension + 1):
            b = k.boundary_matrix(n).astype(float)
            bp = pseudoinverse(b, tol)
            res = float(np.abs(b @ bp @ b - b).max()) if b.size else 0.0
            record("penrose", res, res <= 1e-8)
    for v in vertices:
        for idx, (k, r) in enumerate(zip(filt.complexes, filt.scales)):
            direct = link(k, v)
            fast = _link_complex(data, v, r, cfg.max_dim)
            same = set(direct.all_simplices()) == set(fast.all_simplices())
            record("link_identity", 0.0 if same else 1.0, same)
            lb = local_betti(k, v, top)
            for n in range(0, top + 1):
                z = symmetric_eigenvalues(local_laplacian(k, v, n, augmented=True), tol).zero_multiplicity
                record("local_hodge", abs(z - lb[n]), z == lb[n])
                if n >= 1:
                    a = symmetric_eigenvalues(local_laplacian(k, v, n, augmented=True), tol).eigenvalues
                    b = symmetric_eigenvalues(relative_local_laplacian(k, v, n), tol).eigenvalues
                    res = float(np.abs(np.subtract(a, b)).max()) if len(a) == len(b) and a else (0.0 if len(a) == len(b) else 1.0)
                    record("unitary_equivalence", res, res <= 1e-8)
        pv = filt.persistent_vertex(v)
        for i, j in resolve_pairs("adjacent", filt.m):
            for n in range(1, top + 1):
                op = persistent_local_laplacian(filt, pv, n, i, j, tol, augmented=True)
                z = symmetric_eigenvalues(op, tol).zero_multiplicity
                b = persistent_local_betti(filt, pv, n, i, j)
                record("persistent_local_hodge", abs(z - b), z == b)
                rel = relative_persistent_local_laplacian(filt, pv, n, i, j, tol)
                a = symmetric_eigenvalues(op, tol).eigenvalues
                c = symmetric_eigenvalues(rel, tol).eigenvalues
                res = float(np.abs(np.subtract(a, c)).max()) if len(a) == len(c) and a else (0.0 if len(a) == len(c) else 1.0)
                record("persistent_unitary_equivalence", res, res <= 1e-8)
    report = []
    for c in checks.values():
        c["passed"] = c["failures"] == 0
        report.append(c)
    return report


# -- argument parsing ------------------------------------------------------------


def _floats(s: str) -> List[float]:
    return [float(x) for x in s.split(",") if x.strip()]


def _ints(s: str) -> List[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def _pairs(s: str):
    if s in ("diag", "adjacent", "all"):
        return s
    out = []
    for item in s.split(";"):
        i, j = item.split(":")
        out.append((int(i), int(j)))
    return out


def _common(p: argparse.ArgumentParser):
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=["points", "distances", "graph"], default="points")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--scales", type=_floats, help="comma-separated ascending scales")
    g.add_argument("--auto-scales", type=int, metavar="N")
    p.add_argument("--scale-min", type=float)
    p.add_argument("--scale-max", type=float)
    p.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    p.add_argument("--dims", type=_ints, default=[1])
    p.add_argument("--tol", type=float, default=1e-9, help="relative tolerance")
    p.add_argument("--tol-floor", type=float, default=1e-12)
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def _config(ns) -> JobConfig:
    return JobConfig(
        input=ns.input, kind=ns.kind, scales=ns.scales, auto_scales=ns.auto_scales,
        scale_min=ns.scale_min, scale_max=ns.scale_max, max_dim=ns.max_dim, dims=ns.dims,
        vertices=getattr(ns, "vertices", "all"), pairs=getattr(ns, "pairs", "adjacent"),
        tol=Tolerance(ns.tol, ns.tol_floor), jobs=getattr(ns, "jobs", 1), out=ns.out,
        format=ns.format, strict=getattr(ns, "strict", False),
        skip_errors=getattr(ns, "skip_errors", False),
        augmented=getattr(ns, "augmented", False), timing=getattr(ns, "timing", None),
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perslocal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="global Laplacian spectra per scale")
    _common(sp)

    lp = sub.add_parser("local", help="persistent local spectra per vertex")
    _common(lp)
    lp.add_argument("--vertices", type=lambda s: s if s == "all" else _ints(s), default="all")
    lp.add_argument("--pairs", type=_pairs, default="adjacent",
                    help="diag | adjacent | all | explicit 'i:j;i:j'")
    lp.add_argument("--jobs", type=int, default=1)
    lp.add_argument("--strict", action="store_true", help="abort on the first failed task")
    lp.add_argument("--skip-errors", action="store_true", help="drop failed tasks instead of emitting error rows")
    lp.add_argument("--augmented", action="store_true",
                    help="include the augmentation term at n=1 (kernel = local homology)")
    lp.add_argument("--timing", help="write per-task wall-clock seconds to this CSV")

    vp = sub.add_parser("validate", help="run invariant checks on the input")
    _common(vp)
    vp.add_argument("--max-vertices", type=int, default=12)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    ns = make_parser().parse_args(argv)
    cfg = _config(ns)
    try:
        if ns.command == "local":
            t0 = time.perf_counter()
            rows, timings, scales = run(cfg)
            head = header(cfg, scales)
            _emit(rows_to_csv(rows, head) if cfg.format == "csv" else rows_to_json(rows, head), cfg.out)
            if cfg.timing:
                with open(cfg.timing, "w") as fh:
                    fh.write("vertex,n,i,j,seconds\n")
                    for key in sorted(timings):
                        fh.write(",".join(map(str, key)) + f",{timings[key]:.6g}\n")
            total = sum(timings.values())
            log.info("%d tasks, %.3fs task time, %.3fs wall, jobs=%d",
                     len(rows), total, time.perf_counter() - t0, cfg.jobs)
        elif ns.command == "spectrum":
            data = ingest(cfg.input, cfg.kind)
            scales = resolve_scales(cfg, data)
            recs = global_spectra(build_filtration(data, scales, cfg.max_dim), cfg.dims, cfg.tol)
            if cfg.format == "json":
                text = json.dumps({"header": header(cfg, scales), "rows": recs}, indent=1)
            else:
                buf = io.StringIO()
                w = csv.writer(buf, lineterminator="\n")
                w.writerow(["index", "r", "n", "size", "zero_mult", "gap", "eigenvalues"])
                for r in recs:
                    w.writerow([r["index"], repr(r["r"]), r["n"], r["size"], r["zero_mult"], _fmt(r["gap"]),
                                ";".join(repr(x) for x in r["eigenvalues"])])
                text = buf.getvalue()
            _emit(text, cfg.out)
        else:
            report = validate(cfg, max_vertices=ns.max_vertices)
            _emit(json.dumps(report, indent=1) + "\n", cfg.out)
            for c in report:
                log.info("%-32s %s  cases=%d worst=%.3g", c["invariant"], "PASS" if c["passed"] else "FAIL",
                         c["cases"], c["worst_residual"])
            return 0 if all(c["passed"] for c in report) else 1
    except (PersLocalError, ValueError, OSError) as exc:
        log.error("error: %s", exc)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
