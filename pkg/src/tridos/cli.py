"""Command-line interface and experiment driver.

Exit codes: 0 success, 1 computation failure (any library error), 2 bad
usage or invalid configuration. The `run` subcommand executes a TOML
experiment plan and writes a manifest recording input hashes, package
versions, task runtimes, and output hashes; reruns of an unchanged plan
produce byte-identical outputs.
"""

from __future__ import annotations

import functools
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import __version__
from .core import PointedTriangulation, Triangulation
from .errors import ConfigError, TridosError
from .fileio import (
    load_patch,
    load_triangulation,
    save_eigenfunction_report,
    save_ids_curve,
    save_spectrum,
    save_triangulation,
    triangulation_to_dict,
)
from .generators import (
    capped_cylinder_sphere,
    decorate_iid,
    double_grid_sphere,
    hyperbolic_sphere,
    octahedron,
    substitution_sphere,
    tetrahedron,
)
from .iso import DEFAULT_RADIUS_CAP, delta, delta_hat
from .measures import patch_frequency, rw_distribution, uniform_measure
from .operators import laplacian
from .spectral import css_search, css_verify, eigensolve, ids as ids_curve

_FAMILIES = {
    "double-grid": lambda stages: double_grid_sphere(stages),
    "substitution": lambda stages: substitution_sphere(stages),
    "hyperbolic": lambda stages: hyperbolic_sphere(stages),
    "tetrahedron": lambda stages: tetrahedron(),
    "octahedron": lambda stages: octahedron(),
    "capped-cylinder": lambda stages: capped_cylinder_sphere(),
}
_STAGED = ("double-grid", "substitution", "hyperbolic")


def workers() -> int:
    """Worker count for parallel per-sphere work (TRIDOS_WORKERS, default 1)."""
    try:
        return max(1, int(os.environ.get("TRIDOS_WORKERS", "1")))
    except ValueError:
        return 1


def _pool_map(fn, items):
    items = list(items)
    n = workers()
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _catching(fn):
    """Map library errors to the documented exit codes."""

    @functools.wraps(fn)
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(2)
        except TridosError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapped


def _emit(text: str, out) -> None:
    if out in (None, "-"):
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(out).write_text(text)


@click.group()
@click.version_option(__version__, prog_name="tridos")
def main() -> None:
    """Decorated triangulations: generation, validation, spectra, metrics."""


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _generate(family: str, stages, decorate: bool, seed) -> Triangulation:
    if family not in _FAMILIES:
        raise ConfigError(
            f"unknown family {family!r}; choose from {sorted(_FAMILIES)}",
            field="family")
    if family in _STAGED and stages is None:
        raise ConfigError(f"family {family!r} needs stages", field="stages")
    T = _FAMILIES[family](stages)
    if decorate:
        if seed is None:
            raise ConfigError(
                "decorated generation needs a seed for reproducibility",
                field="seed")
        T = decorate_iid(T, (0, 1), seed=int(seed))
    return T


@main.command()
@click.argument("family")
@click.option("--stages", type=int, default=None,
              help="Growth stage for staged families.")
@click.option("--decorate", is_flag=True,
              help="Attach i.i.d. {0,1} edge decorations.")
@click.option("--seed", type=int, default=None,
              help="RNG seed (required with --decorate).")
@click.option("--out", default="-", help="Output path, '-' for stdout.")
@_catching
def gen(family, stages, decorate, seed, out):
    """Generate a sphere from a named family as triangulation JSON."""
    T = _generate(family, stages, decorate, seed)
    _emit(json.dumps(triangulation_to_dict(T), indent=1), out)


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


@main.command()
@click.argument("files", nargs=-1, required=True)
@_catching
def validate(files):
    """Validate triangulation files; print a summary per file."""
    for f in files:
        T = load_triangulation(f)
        kind = "closed" if not T.boundary_darts else "bounded"
        click.echo(
            f"{f}: ok ({kind}, V={T.n_vertices}, E={T.n_edges}, "
            f"F={T.n_faces}, dim={T.decoration_dim})")


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------


@main.command()
@click.argument("file")
@click.option("--out", default="-")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv")
@_catching
def spectrum(file, out, fmt):
    """Eigenvalues of the walk Laplacian of a triangulation file."""
    T = load_triangulation(file)
    spec = eigensolve(laplacian(T))
    if fmt == "json":
        _emit(json.dumps({"eigenvalues": [float(x)
                                          for x in spec.eigenvalues]},
                         indent=1), out)
    else:
        if out in (None, "-"):
            lines = ["# columns: index,eigenvalue"]
            lines += [f"{i},{float(x)!r}"
                      for i, x in enumerate(spec.eigenvalues)]
            _emit("\n".join(lines), out)
        else:
            save_spectrum(spec, out)


# ---------------------------------------------------------------------------
# ids
# ---------------------------------------------------------------------------


def _parse_energies(t: str) -> np.ndarray:
    try:
        if ":" in t:
            lo, hi, n = t.split(":")
            return np.linspace(float(lo), float(hi), int(n))
        return np.array([float(x) for x in t.split(",") if x.strip()])
    except ValueError as exc:
        raise ConfigError(f"cannot parse energies {t!r}: {exc}",
                          field="t") from exc


def _ensemble_ids(files, energies):
    spheres = _pool_map(load_triangulation, files)
    curves = _pool_map(lambda T: ids_curve(T, energies), spheres)
    return np.mean(curves, axis=0)


@main.command(name="ids")
@click.argument("files", nargs=-1, required=True)
@click.option("--t", "energies", required=True,
              help="Energies: 'a,b,c' or 'lo:hi:n'.")
@click.option("--out", default="-")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
              default="csv")
@_catching
def ids_command(files, energies, out, fmt):
    """Integrated density of states, averaged over the input spheres."""
    ts = _parse_energies(energies)
    vals = _ensemble_ids(files, ts)
    if fmt == "json":
        _emit(json.dumps({"energy": [float(x) for x in ts],
                          "ids": [float(v) for v in vals]}, indent=1), out)
    elif out in (None, "-"):
        lines = ["# columns: energy,ids"]
        lines += [f"{float(t)!r},{float(v)!r}" for t, v in zip(ts, vals)]
        _emit("\n".join(lines), out)
    else:
        save_ids_curve(ts, vals, out)


# ---------------------------------------------------------------------------
# css
# ---------------------------------------------------------------------------


def _css_report(source_path, t: float, hop_range: int, tol: float) -> dict:
    path = Path(source_path)
    data = json.loads(path.read_text())
    A = load_patch(path) if "marked" in data else load_triangulation(path)
    rep = css_search(A, t, hop_range=hop_range)
    tri = A.tri if hasattr(A, "tri") else A
    report = {"energy": t, "dimension": rep.dimension,
              "interior_size": len(rep.interior_vertices), "kind": "css"}
    if rep.vectors:
        vec = rep.vectors[0]
        residual = css_verify(tri, vec, t)
        report["values"] = vec
        report["residual"] = residual
        report["certified"] = bool(residual <= tol)
    return report


@main.command()
@click.argument("file")
@click.option("--t", type=float, required=True, help="Target energy.")
@click.option("--hop-range", type=int, default=1, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True,
              help="Residual bound for certification.")
@click.option("--out", default="-")
@_catching
def css(file, t, hop_range, tol, out):
    """Search for compactly supported eigenfunctions at an energy."""
    report = _css_report(file, t, hop_range, tol)
    if out in (None, "-"):
        show = dict(report)
        if "values" in show:
            show["values"] = {str(k): float(np.real(v))
                              for k, v in show["values"].items()}
        _emit(json.dumps(show, indent=1), out)
    else:
        save_eigenfunction_report(report, out)


# ---------------------------------------------------------------------------
# walk
# ---------------------------------------------------------------------------


@main.command()
@click.argument("file")
@click.option("--start", type=int, required=True, help="Start vertex.")
@click.option("--steps", type=int, required=True)
@click.option("--cesaro", is_flag=True, help="Average over step horizons.")
@click.option("--seed", type=int, default=None,
              help="Seed for the sampled fallback on huge spheres.")
@click.option("--out", default="-")
@_catching
def walk(file, start, steps, cesaro, seed, out):
    """Simple random walk occupation law from a start vertex."""
    T = load_triangulation(file)
    dist = rw_distribution(T, start, steps, cesaro=cesaro, seed=seed)
    lines = ["# columns: vertex,probability",
             f"# start {dist.start} steps {dist.steps} cesaro {dist.cesaro}"]
    lines += [f"{v},{p!r}" for v, p in sorted(dist.probabilities.items())]
    _emit("\n".join(lines), out)


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------


def _parse_root(spec: str):
    u, sep, v = spec.partition("->")
    if not sep:
        raise ConfigError(f"root must look like 'u->v', got {spec!r}",
                          field="root")
    return (int(u), int(v))


@main.command()
@click.argument("file_a")
@click.argument("file_b")
@click.option("--root-a", default=None, help="Root dart 'u->v' in A.")
@click.option("--root-b", default=None, help="Root dart 'u->v' in B.")
@click.option("--radius-cap", type=int, default=DEFAULT_RADIUS_CAP,
              show_default=True)
@click.option("--out", default="-")
@_catching
def metric(file_a, file_b, root_a, root_b, radius_cap, out):
    """Pointed-triangulation distance between two rooted spheres."""
    TA = load_triangulation(file_a)
    TB = load_triangulation(file_b)
    ra = _parse_root(root_a) if root_a else TA.darts[0]
    rb = _parse_root(root_b) if root_b else TB.darts[0]
    P = PointedTriangulation(TA, ra)
    Q = PointedTriangulation(TB, rb)
    result = {
        "radius_cap": radius_cap,
        "delta_hat_ab": delta_hat(P, Q, radius_cap),
        "delta_hat_ba": delta_hat(Q, P, radius_cap),
        "delta": delta(P, Q, radius_cap),
    }
    _emit(json.dumps(result, indent=1), out)


# ---------------------------------------------------------------------------
# stats
# ---------------------------------------------------------------------------


def _stats_report(entries, probe_path) -> dict:
    """entries: (label, path) pairs; labels are what the report prints, so
    callers pass the user-declared names and reruns stay byte-identical."""
    labels = [label for label, _ in entries]
    spheres = _pool_map(load_triangulation, [p for _, p in entries])
    per_file = []
    for label, T in zip(labels, spheres):
        hist = {}
        for v in T.vertices:
            hist[T.degree(v)] = hist.get(T.degree(v), 0) + 1
        per_file.append({
            "file": str(label), "vertices": T.n_vertices, "edges": T.n_edges,
            "faces": T.n_faces,
            "euler_characteristic": T.n_vertices - T.n_edges + T.n_faces,
            "degree_histogram": {str(k): hist[k] for k in sorted(hist)},
        })
    report = {"spheres": per_file}
    if probe_path is not None:
        probe = load_patch(probe_path)
        m = uniform_measure(spheres)
        report["probe"] = str(probe_path)
        report["patch_frequency"] = patch_frequency(m, probe)
    return report


@main.command()
@click.argument("files", nargs=-1, required=True)
@click.option("--probe", default=None,
              help="Patch file; adds its dart-uniform frequency.")
@click.option("--out", default="-")
@_catching
def stats(files, probe, out):
    """Size, Euler characteristic, degree histogram, patch frequency."""
    _emit(json.dumps(_stats_report([(f, f) for f in files], probe), indent=1),
          out)


# ---------------------------------------------------------------------------
# run: the experiment driver
# ---------------------------------------------------------------------------


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _resolve(outdir: Path, name: str) -> Path:
    p = outdir / name
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _run_task(task: dict, outdir: Path, default_seed) -> list[str]:
    kind = task.get("kind")
    if kind is None:
        raise ConfigError("task missing 'kind'", field="kind")
    out_name = task.get("out")
    if out_name is None:
        raise ConfigError(f"task of kind {kind!r} missing 'out'", field="out")
    out = _resolve(outdir, out_name)

    def infile(key="input"):
        name = task.get(key)
        if name is None:
            raise ConfigError(f"task of kind {kind!r} missing {key!r}",
                              field=key)
        p = outdir / name
        return p if p.exists() else Path(name)

    if kind == "gen":
        seed = task.get("seed", default_seed)
        T = _generate(task.get("family"), task.get("stages"),
                      bool(task.get("decorate", False)), seed)
        save_triangulation(T, out)
    elif kind == "spectrum":
        T = load_triangulation(infile())
        save_spectrum(eigensolve(laplacian(T)), out)
    elif kind == "ids":
        energies = task.get("energies")
        if energies is None:
            raise ConfigError("ids task missing 'energies'", field="energies")
        ts = np.asarray([float(t) for t in energies])
        T = load_triangulation(infile())
        save_ids_curve(ts, ids_curve(T, ts), out)
    elif kind == "css":
        if "t" not in task:
            raise ConfigError("css task missing 't'", field="t")
        report = _css_report(infile(), float(task["t"]),
                             int(task.get("hop_range", 1)),
                             float(task.get("tol", 1e-8)))
        save_eigenfunction_report(report, out)
    elif kind == "walk":
        T = load_triangulation(infile())
        if "start" not in task or "steps" not in task:
            raise ConfigError("walk task needs 'start' and 'steps'",
                              field="start")
        dist = rw_distribution(T, int(task["start"]), int(task["steps"]),
                               cesaro=bool(task.get("cesaro", False)),
                               seed=task.get("seed", default_seed))
        lines = ["# columns: vertex,probability"]
        lines += [f"{v},{p!r}" for v, p in sorted(dist.probabilities.items())]
        out.write_text("\n".join(lines) + "\n")
    elif kind == "metric":
        TA = load_triangulation(infile("input_a"))
        TB = load_triangulation(infile("input_b"))
        cap = int(task.get("radius_cap", DEFAULT_RADIUS_CAP))
        P = PointedTriangulation(TA, TA.darts[0])
        Q = PointedTriangulation(TB, TB.darts[0])
        out.write_text(json.dumps({
            "radius_cap": cap,
            "delta_hat_ab": delta_hat(P, Q, cap),
            "delta_hat_ba": delta_hat(Q, P, cap),
            "delta": delta(P, Q, cap)}, indent=1))
    elif kind == "stats":
        names = task.get("inputs")
        if not names:
            raise ConfigError("stats task missing 'inputs'", field="inputs")
        entries = []
        for name in names:
            p = outdir / name
            entries.append((name, p if p.exists() else Path(name)))
        report = _stats_report(entries, task.get("probe"))
        out.write_text(json.dumps(report, indent=1))
    else:
        raise ConfigError(f"unknown task kind {kind!r}", field="kind")
    return [out_name]


@main.command(name="run")
@click.argument("config", type=click.Path(exists=True))
@click.option("--out-dir", default=None,
              help="Output directory (default: '<config stem>_out').")
@_catching
def run_command(config, out_dir):
    """Execute a TOML experiment plan and write outputs plus a manifest."""
    import tomli

    cfg_path = Path(config)
    with open(cfg_path, "rb") as fh:
        try:
            plan = tomli.load(fh)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML: {exc}") from exc
    exp = plan.get("experiment", {})
    tasks = plan.get("task", [])
    if not tasks:
        raise ConfigError("plan has no [[task]] entries", field="task")
    outdir = Path(out_dir) if out_dir else cfg_path.with_name(
        cfg_path.stem + "_out")
    outdir.mkdir(parents=True, exist_ok=True)
    default_seed = exp.get("seed")

    produced: list[str] = []
    runtimes: dict[str, float] = {}
    for i, task in enumerate(tasks):
        label = f"{i:02d}-{task.get('kind', '?')}"
        t0 = time.perf_counter()
        produced += _run_task(task, outdir, default_seed)
        runtimes[label] = time.perf_counter() - t0

    import importlib.metadata

    import scipy

    manifest = {
        "experiment": exp.get("name", cfg_path.stem),
        "config": str(cfg_path),
        "config_sha256": _sha256(cfg_path),
        "versions": {
            "tridos": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "click": importlib.metadata.version("click"),
        },
        "outputs": {name: _sha256(outdir / name) for name in produced},
        "runtimes_seconds": {k: round(v, 6) for k, v in runtimes.items()},
        "workers": workers(),
    }
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=1))
    click.echo(f"wrote {len(produced)} outputs and manifest to {outdir}")


if __name__ == "__main__":
    main()
