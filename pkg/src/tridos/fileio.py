"""File formats: JSON for structured objects (triangulations, patches,
rules, eigenfunction reports), comment-headed CSV for tabular output
(matrices, measures, spectra, density-of-states curves).

Dart keys are serialized as "tail->head" strings. Vertex labels round-trip
as integers when they parse as integers, otherwise as strings.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .core import (
    BoxOmega,
    ExactOmega,
    Patch,
    PointedTriangulation,
    Triangulation,
    WildcardOmega,
    build_triangulation,
)
from .generators import FaceImage, SubstitutionRule
from .iso import CanonicalCode
from .measures import EmpiricalMeasure
from .operators import LocalRule, OperatorMatrix
from .spectral import Spectrum


def _dart_key(dart) -> str:
    return f"{dart[0]}->{dart[1]}"


def _parse_vertex(s: str):
    try:
        return int(s)
    except ValueError:
        return s


def _parse_dart(key: str) -> tuple:
    u, _, v = key.partition("->")
    return (_parse_vertex(u), _parse_vertex(v))


# ---------------------------------------------------------------------------
# triangulations and patches
# ---------------------------------------------------------------------------


def triangulation_to_dict(T: Triangulation) -> dict:
    out = {"faces": [list(f) for f in T.faces],
           "degree_bound": T.degree_bound}
    if T.decoration_dim:
        out["decorations"] = {_dart_key(d): list(T.decorations[d])
                              for d in T.darts}
    return out


def triangulation_from_dict(data: dict) -> Triangulation:
    deco = None
    if "decorations" in data:
        deco = {_parse_dart(k): tuple(v)
                for k, v in data["decorations"].items()}
    return build_triangulation(
        [tuple(f) for f in data["faces"]], deco,
        degree_bound=int(data.get("degree_bound", 12)))


def save_triangulation(T: Triangulation, path) -> None:
    Path(path).write_text(json.dumps(triangulation_to_dict(T), indent=1))


def load_triangulation(path) -> Triangulation:
    return triangulation_from_dict(json.loads(Path(path).read_text()))


def _omega_to_dict(omega) -> dict:
    if isinstance(omega, WildcardOmega):
        return {"kind": "wildcard"}
    if isinstance(omega, ExactOmega):
        return {"kind": "exact",
                "vectors": {_dart_key(d): list(v)
                            for d, v in omega.vectors.items()}}
    if isinstance(omega, BoxOmega):
        return {"kind": "box",
                "bounds": {_dart_key(d): [list(iv) for iv in b]
                           for d, b in omega.bounds.items()}}
    raise TypeError(f"cannot serialize constraint {omega!r}")


def _omega_from_dict(data: dict):
    kind = data["kind"]
    if kind == "wildcard":
        return WildcardOmega()
    if kind == "exact":
        return ExactOmega({_parse_dart(k): tuple(v)
                           for k, v in data["vectors"].items()})
    if kind == "box":
        return BoxOmega({_parse_dart(k): tuple(tuple(iv) for iv in b)
                         for k, b in data["bounds"].items()})
    raise ValueError(f"unknown constraint kind {kind!r}")


def patch_to_dict(A: Patch) -> dict:
    if A.degenerate:
        return {"degenerate": True, "marked": _dart_key(A.marked)}
    return {"triangulation": triangulation_to_dict(A.tri),
            "marked": _dart_key(A.marked),
            "omega": _omega_to_dict(A.omega)}


def patch_from_dict(data: dict) -> Patch:
    marked = _parse_dart(data["marked"])
    if data.get("degenerate"):
        return Patch(None, marked)
    return Patch(triangulation_from_dict(data["triangulation"]), marked,
                 _omega_from_dict(data["omega"]))


def save_patch(A: Patch, path) -> None:
    Path(path).write_text(json.dumps(patch_to_dict(A), indent=1))


def load_patch(path) -> Patch:
    return patch_from_dict(json.loads(Path(path).read_text()))


# ---------------------------------------------------------------------------
# substitution rules and local rules
# ---------------------------------------------------------------------------


def save_substitution_rule(rule: SubstitutionRule, path) -> None:
    images = [{"key": [list(d) for d in key],
               "marks": list(img.marks),
               "triangulation": triangulation_to_dict(img.tri)}
              for key, img in rule.images.items()]
    Path(path).write_text(json.dumps(
        {"kind": "substitution-rule", "images": images}, indent=1))


def load_substitution_rule(path) -> SubstitutionRule:
    data = json.loads(Path(path).read_text())
    if data.get("kind") != "substitution-rule":
        raise ValueError("not a substitution-rule file")
    images = {}
    for entry in data["images"]:
        key = tuple(tuple(d) for d in entry["key"])
        images[key] = FaceImage(
            triangulation_from_dict(entry["triangulation"]),
            tuple(entry["marks"]))
    return SubstitutionRule(images)


def _code_to_json(code: CanonicalCode) -> list:
    return list(code.data)


def _code_from_json(items) -> CanonicalCode:
    return CanonicalCode(tuple(items))


def save_local_rule(rule: LocalRule, path) -> None:
    rows = []
    for code, row in rule.table.items():
        arr = np.asarray(row)
        cplx = np.iscomplexobj(arr)
        rows.append({
            "code": _code_to_json(code),
            "complex": bool(cplx),
            "row": ([[float(c.real), float(c.imag)] for c in arr]
                    if cplx else [float(c) for c in arr])})
    Path(path).write_text(json.dumps(
        {"kind": "local-rule", "radius": rule.radius, "rows": rows},
        indent=1))


def load_local_rule(path) -> LocalRule:
    data = json.loads(Path(path).read_text())
    if data.get("kind") != "local-rule":
        raise ValueError("not a local-rule file")
    table = {}
    for entry in data["rows"]:
        code = _code_from_json(entry["code"])
        if entry.get("complex"):
            row = tuple(complex(re, im) for re, im in entry["row"])
        else:
            row = tuple(float(c) for c in entry["row"])
        table[code] = row
    return LocalRule(int(data["radius"]), table)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def save_matrix(op, path) -> None:
    """Sparse text form: one 'row,col,re,im' line per nonzero entry."""
    M = op.matrix if isinstance(op, OperatorMatrix) else np.asarray(op)
    with open(path, "w", newline="") as fh:
        fh.write(f"# matrix shape {M.shape[0]} {M.shape[1]}\n")
        fh.write("# columns: row,col,re,im (dimensionless entries)\n")
        w = csv.writer(fh)
        for i, j in zip(*np.nonzero(M)):
            z = complex(M[i, j])
            w.writerow([int(i), int(j), repr(z.real), repr(z.imag)])


def load_matrix(path) -> np.ndarray:
    shape = None
    entries = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line.startswith("# matrix shape"):
                    parts = line.split()
                    shape = (int(parts[3]), int(parts[4]))
                continue
            i, j, re_, im_ = line.split(",")
            entries.append((int(i), int(j), float(re_), float(im_)))
    if shape is None:
        if not entries:
            raise ValueError("matrix file has no shape header and no entries")
        n = 1 + max(max(i for i, *_ in entries),
                    max(j for _, j, *_ in entries))
        shape = (n, n)
    M = np.zeros(shape, dtype=complex)
    for i, j, re_, im_ in entries:
        M[i, j] = re_ + 1j * im_
    if np.max(np.abs(M.imag)) == 0.0:
        return M.real
    return M


# ---------------------------------------------------------------------------
# measures, spectra, density-of-states curves
# ---------------------------------------------------------------------------


def save_measure(m: EmpiricalMeasure, path, sphere_dir=None) -> None:
    """Atom table as CSV; the distinct spheres go to JSON files when
    sphere_dir is given (sphere_000.json, ...)."""
    spheres = [t for t, _ in m.spheres()]
    index = {id(t): i for i, t in enumerate(spheres)}
    if sphere_dir is not None:
        d = Path(sphere_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i, t in enumerate(spheres):
            save_triangulation(t, d / f"sphere_{i:03d}.json")
    with open(path, "w", newline="") as fh:
        fh.write("# columns: sphere,root_tail,root_head,weight\n")
        fh.write("# units: weight is probability mass (dimensionless)\n")
        w = csv.writer(fh)
        for pt, wt in m.atoms:
            w.writerow([index[id(pt.tri)], pt.root[0], pt.root[1], repr(wt)])


def load_measure(path, sphere_dir) -> EmpiricalMeasure:
    d = Path(sphere_dir)
    spheres = {}
    atoms = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            si, tail, head, wt = line.split(",")
            i = int(si)
            if i not in spheres:
                spheres[i] = load_triangulation(d / f"sphere_{i:03d}.json")
            T = spheres[i]
            root = (_parse_vertex(tail), _parse_vertex(head))
            atoms.append((PointedTriangulation(T, root), float(wt)))
    return EmpiricalMeasure(tuple(atoms))


def save_spectrum(spec: Spectrum, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("# columns: index,eigenvalue\n")
        fh.write("# units: eigenvalue in operator units (dimensionless)\n")
        if spec.window is not None:
            fh.write(f"# window: {spec.window[0]} {spec.window[1]}\n")
        w = csv.writer(fh)
        for i, lam in enumerate(spec.eigenvalues):
            w.writerow([i, repr(float(lam))])


def load_spectrum_values(path) -> np.ndarray:
    vals = []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            _, lam = line.split(",")
            vals.append(float(lam))
    return np.array(vals)


def save_ids_curve(energies, values, path) -> None:
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    values = np.atleast_1d(np.asarray(values, dtype=float))
    if energies.shape != values.shape:
        raise ValueError("energies and values must have matching length")
    with open(path, "w", newline="") as fh:
        fh.write("# columns: energy,ids\n")
        fh.write("# units: energy in operator units; ids is a fraction in [0,1]\n")
        w = csv.writer(fh)
        for t, v in zip(energies, values):
            w.writerow([repr(float(t)), repr(float(v))])


def load_ids_curve(path):
    ts, vs = [], []
    with open(path, newline="") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            t, v = line.split(",")
            ts.append(float(t))
            vs.append(float(v))
    return np.array(ts), np.array(vs)


# ---------------------------------------------------------------------------
# eigenfunction reports
# ---------------------------------------------------------------------------


def save_eigenfunction_report(report: dict, path) -> None:
    """Report: energy, values (vertex -> coefficient), plus free-form
    numeric fields (defect, residual, dimension, ...)."""
    out = dict(report)
    vals = out.get("values", {})
    out["values"] = {str(v): [complex(c).real, complex(c).imag]
                     for v, c in vals.items()}
    Path(path).write_text(json.dumps(out, indent=1))


def load_eigenfunction_report(path) -> dict:
    data = json.loads(Path(path).read_text())
    vals = {}
    for k, (re_, im_) in data.get("values", {}).items():
        c = re_ + 1j * im_ if im_ else re_
        vals[_parse_vertex(k)] = c
    data["values"] = vals
    return data
