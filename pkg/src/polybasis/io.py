"""Coefficient-file persistence and OBJ mesh export.

Coefficients are stored one JSON file per degree; Python's shortest
round-trip float formatting makes save -> load -> save byte-identical.
Meshes are subdivided icospheres displaced radially by one basis-function
component, viewable in any standard OBJ reader.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .basis import BasisSet, CoeffMatrix
from . import wigner


# -- coefficient files ------------------------------------------------------

def _complex_rows(h: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in h]


def coeff_file_dict(basis_set: BasisSet, l: int) -> dict:
    blocks = sorted(basis_set.select(l=l), key=lambda b: (b.p, b.n))
    return {
        "group": basis_set.group_name,
        "l": l,
        "blocks": [{"p": b.p, "n": b.n, "rows": _complex_rows(b.H)}
                   for b in blocks],
        "meta": {
            "seed": basis_set.seed,
            "tolerances": {"construction": 1e-10, "end_to_end": 1e-8},
            "convention_id": "zyz-active-condon-shortley-v1",
        },
    }


def save_basis_set(basis_set: BasisSet, out_dir: str | Path) -> list[Path]:
    """One coefficient file per degree plus a manifest; returns the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for l in range(basis_set.l_max + 1):
        path = out / f"coeff_{basis_set.group_name}_l{l:02d}.json"
        path.write_text(json.dumps(coeff_file_dict(basis_set, l), indent=1)
                        + "\n")
        paths.append(path)
    manifest = {
        "group": basis_set.group_name,
        "l_max": basis_set.l_max,
        "seed": basis_set.seed,
        "files": [p.name for p in paths],
    }
    mpath = out / f"manifest_{basis_set.group_name}.json"
    mpath.write_text(json.dumps(manifest, indent=1) + "\n")
    return paths + [mpath]


def load_basis_set(manifest_path: str | Path) -> BasisSet:
    mpath = Path(manifest_path)
    manifest = json.loads(mpath.read_text())
    bs = BasisSet(group_name=manifest["group"], l_max=manifest["l_max"],
                  seed=manifest["seed"])
    for name in manifest["files"]:
        if name.startswith("manifest"):
            continue
        data = json.loads((mpath.parent / name).read_text())
        for blk in data["blocks"]:
            rows = np.array([[complex(re, im) for re, im in row]
                             for row in blk["rows"]])
            bs.blocks.append(CoeffMatrix(p=blk["p"], l=data["l"],
                                         n=blk["n"], H=rows))
    bs.blocks.sort(key=lambda b: (b.l, b.p, b.n))
    return bs


# -- icosphere mesh ---------------------------------------------------------

def icosphere(subdivisions: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """Unit sphere triangulation from a subdivided icosahedron.

    Returns (vertices (n,3), faces (m,3) int).  Closed genus-0 manifold;
    m = 20 * 4^subdivisions.
    """
    t = (1.0 + np.sqrt(5.0)) / 2.0
    verts = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [tuple(v) for v in verts]
    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                v = np.array(verts[i]) + np.array(verts[j])
                v /= np.linalg.norm(v)
                verts.append(tuple(v))
                cache[key] = len(verts) - 1
            return cache[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return np.array(verts), np.array(faces, dtype=int)


def displaced_mesh(basis: CoeffMatrix, component: int = 1,
                   kappa1: float | None = None, kappa2: float | None = None,
                   subdivisions: int = 5):
    """Sphere displaced to r = kappa1 + kappa2 * I[component](theta, phi).

    With both kappas unset, they are chosen so the vertex radii span
    exactly [0.5, 1.0]; a constant function degenerates to the sphere of
    radius 0.75.  Returns (vertices, faces, radii).
    """
    if not 1 <= component <= basis.dim:
        raise ValueError(f"component must be in 1..{basis.dim}")
    verts, faces = icosphere(subdivisions)
    theta, phi = wigner.spherical_from_cartesian(verts)
    f = basis.evaluate(theta, phi)[component - 1]
    if kappa1 is None and kappa2 is None:
        lo, hi = float(f.min()), float(f.max())
        if hi - lo < 1e-12:
            kappa1, kappa2 = 0.75, 0.0
        else:
            kappa2 = 0.5 / (hi - lo)
            kappa1 = 0.5 - kappa2 * lo
    elif kappa1 is None or kappa2 is None:
        raise ValueError("set both kappa1 and kappa2, or neither")
    if kappa1 <= 0:
        raise ValueError("kappa1 must be positive")
    radii = kappa1 + kappa2 * f
    return verts * radii[:, None], faces, radii


def write_obj(path: str | Path, vertices: np.ndarray, faces: np.ndarray,
              radii: np.ndarray | None = None) -> None:
    """OBJ writer; vertex radii, when given, are kept in a comment block
    for color mapping in external viewers."""
    lines = ["# polybasis surface export"]
    if radii is not None:
        lines.append("# vertex radii:")
        lines += [f"# r {float(r)!r}" for r in radii]
    lines += [f"v {float(v[0])!r} {float(v[1])!r} {float(v[2])!r}"
              for v in vertices]
    lines += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in faces]
    Path(path).write_text("\n".join(lines) + "\n")


def read_obj(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    """Minimal OBJ reader (v/f records only), for round-trip tests."""
    verts, faces = [], []
    for line in Path(path).read_text().splitlines():
        parts = line.split()
        if not parts or parts[0] not in ("v", "f"):
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        else:
            faces.append([int(x.split("/")[0]) - 1 for x in parts[1:4]])
    return np.array(verts), np.array(faces, dtype=int)
