"""Command-line front-end.

Subcommands: ``faces``, ``lagrangian``, ``fiber``, ``verify``, ``render``,
``polytope``.  Output is deterministic for a fixed seed and configuration
(sorted JSON keys, canonical face ordering), so runs diff cleanly.  Exit
code 0 means every requested check passed.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction

from . import __version__
from .blocks import (
    fiber_descriptor,
    homotopy_invariants,
    lagrangian_classification,
    rigid_l_blocks,
    torus_factorization,
)
from .errors import GCFibersError
from .ladder import build_ladder, enumerate_faces, face_lattice
from .polytope import face_by_equalities, hrep_to_json, interior_point, psi
from .render import ascii_face, svg_face
from .spectral import verify_face
from .spectrum import parse_lambda_string


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--lambda", dest="lam", required=True,
                   help="comma-separated spectrum, e.g. 3,2,1,0 or 7/2,1/2")
    p.add_argument("--format", choices=["json", "table", "svg", "ascii"],
                   default="table")
    p.add_argument("--out", help="write output to this path instead of stdout")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers for per-face work")


def _add_face_selector(p: argparse.ArgumentParser):
    p.add_argument("--face", help="face id, 'improper', or 'all'")
    p.add_argument("--face-by-equalities",
                   help="e.g. \"u11=u12,u31=4\": cell equalities and pins")


_EQ_TOKEN = re.compile(r"^u(\d)(\d)$|^u(\d+)\.(\d+)$")


def _parse_cell(tok: str):
    m = _EQ_TOKEN.match(tok.strip())
    if not m:
        raise ValueError(
            f"cannot parse coordinate {tok!r}; use u13 or u1.3 for cell (1,3)"
        )
    if m.group(1) is not None:
        return (int(m.group(1)), int(m.group(2)))
    return (int(m.group(3)), int(m.group(4)))


def _parse_equalities(text: str) -> list:
    out = []
    for chunk in text.split(","):
        lhs, _, rhs = chunk.partition("=")
        if not rhs:
            raise ValueError(f"missing '=' in {chunk!r}")
        left = _parse_cell(lhs)
        rhs = rhs.strip()
        if rhs.startswith("u"):
            out.append((left, _parse_cell(rhs)))
        else:
            out.append((left, Fraction(rhs)))
    return out


def _resolve_faces(args, spec):
    diagram = build_ladder(spec)
    if args.face_by_equalities:
        return [face_by_equalities(spec, _parse_equalities(args.face_by_equalities))]
    faces = enumerate_faces(diagram)
    if not args.face or args.face == "all":
        return faces
    if args.face == "improper":
        return [f for f in faces if f.is_improper()]
    hit = [f for f in faces if f.id == args.face or f.id.startswith(args.face)]
    if not hit:
        raise GCFibersError(f"no face with id {args.face!r}")
    return hit


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _map_faces(args, faces, fn):
    if args.jobs > 1 and len(faces) > 1:
        import multiprocessing as mp

        with mp.Pool(args.jobs) as pool:
            results = pool.map(fn, faces)
    else:
        results = [fn(f) for f in faces]
    return sorted(results, key=lambda r: r["face_id"])


def cmd_faces(args) -> int:
    spec = parse_lambda_string(args.lam)
    faces = _resolve_faces(args, spec)
    lattice = face_lattice(enumerate_faces(build_ladder(spec)))
    rows = []
    for f in sorted(faces, key=lambda f: (f.dim, f.id)):
        eq = psi(f)
        rows.append(
            {
                "face_id": f.id,
                "dim": f.dim,
                "n_edges": len(f.edges),
                "equalities": len(eq.pairs) + len(eq.pins),
                "improper": f.is_improper(),
            }
        )
    payload = {
        "lambda": spec.to_json(),
        "f_vector": list(lattice.f_vector()),
        "faces": rows,
    }
    if args.format == "json":
        _emit(args, _json_dumps(payload))
    else:
        lines = [f"f-vector: {tuple(lattice.f_vector())}"]
        for r in rows:
            tag = " improper" if r["improper"] else ""
            lines.append(
                f"{r['face_id']}  dim={r['dim']}  edges={r['n_edges']}  "
                f"eqs={r['equalities']}{tag}"
            )
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _fiber_record(face) -> dict:
    desc = fiber_descriptor(face)
    cls = lagrangian_classification(face)
    rec = desc.to_json()
    rec["l_blocks"] = [b.to_json() for b in cls["l_blocks"]]
    rec["dim_face"] = face.dim
    return rec


def cmd_lagrangian(args) -> int:
    spec = parse_lambda_string(args.lam)
    faces = enumerate_faces(build_ladder(spec))
    records = _map_faces(args, faces, _fiber_record)
    lag = [r for r in records if r["lagrangian"]]
    proper = [r for r in lag if not _is_improper_record(r, faces)]
    payload = {
        "lambda": spec.to_json(),
        "n_faces": len(faces),
        "n_lagrangian": len(lag),
        "n_proper_lagrangian": len(proper),
        "lagrangian_faces": lag,
    }
    if args.format == "json":
        _emit(args, _json_dumps(payload))
    else:
        lines = [
            f"faces: {len(faces)}  Lagrangian: {len(lag)} "
            f"({len(proper)} proper + {len(lag) - len(proper)} improper)"
        ]
        for r in lag:
            blocks = ",".join(f"L{b['k']}({b['p']},{b['q']})" for b in r["l_blocks"])
            lines.append(
                f"{r['face_id']}  dim={r['dim_face']}  fiber_dim={r['total_dim']}  "
                f"T^{r['r']} x {r['y_bundle']}  blocks=[{blocks}]"
            )
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _is_improper_record(rec, faces) -> bool:
    full = max(len(f.edges) for f in faces)
    by_id = {f.id: f for f in faces}
    return len(by_id[rec["face_id"]].edges) == full


def cmd_fiber(args) -> int:
    spec = parse_lambda_string(args.lam)
    faces = _resolve_faces(args, spec)
    records = _map_faces(args, faces, _fiber_record)
    payload = {"lambda": spec.to_json(), "fibers": records}
    if args.format == "json":
        _emit(args, _json_dumps(payload))
    else:
        lines = []
        for r in records:
            lines.append(
                f"{r['face_id']}  dim={r['dim_face']}  fiber: {r['bundle']}  "
                f"(dim {r['total_dim']}, T^{r['r']} x {r['y_bundle']}, "
                f"pi1 rank {r['pi1_rank']}, Lagrangian: {r['lagrangian']})"
            )
        _emit(args, "\n".join(lines) + "\n")
    return 0


class _VerifyJob:
    """Picklable per-face verification callable for worker pools."""

    def __init__(self, spec, samples: int, seed: int):
        self.spec = spec
        self.samples = samples
        self.seed = seed

    def __call__(self, face):
        return verify_face(
            self.spec, face, n_samples=self.samples, rng_seed=self.seed
        )


def cmd_verify(args) -> int:
    spec = parse_lambda_string(args.lam)
    faces = _resolve_faces(args, spec)
    reports = _map_faces(args, faces, _VerifyJob(spec, args.samples, args.seed))
    ok = all(r["ok"] for r in reports)
    payload = {
        "lambda": spec.to_json(),
        "samples": args.samples,
        "seed": args.seed,
        "ok": ok,
        "n_faces": len(reports),
        "n_failed": sum(1 for r in reports if not r["ok"]),
        "reports": reports,
    }
    if args.format == "json":
        _emit(args, _json_dumps(payload))
    else:
        lines = []
        for r in reports:
            status = "ok" if r["ok"] else "FAIL " + "; ".join(r["failures"])
            lines.append(f"{r['face_id']}  dim {r['fiber_dim']}  {status}")
        lines.append(f"{'PASS' if ok else 'FAIL'}: {len(reports)} faces")
        _emit(args, "\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_render(args) -> int:
    spec = parse_lambda_string(args.lam)
    faces = _resolve_faces(args, spec)
    if len(faces) != 1:
        raise GCFibersError("render needs exactly one face (use --face or "
                            "--face-by-equalities)")
    face = faces[0]
    blocks = rigid_l_blocks(face) if args.shade_l_blocks else None
    overlay = None
    if args.overlay:
        if not re.fullmatch(r"w\d+", args.overlay):
            raise GCFibersError("--overlay expects w<k>, e.g. w2")
        overlay = int(args.overlay[1:])
    if args.format == "svg":
        _emit(args, svg_face(face, shade_blocks=blocks, overlay_w=overlay))
    else:
        _emit(args, ascii_face(face, shade_blocks=blocks, overlay_w=overlay))
    return 0


def cmd_polytope(args) -> int:
    spec = parse_lambda_string(args.lam)
    _emit(args, _json_dumps(hrep_to_json(spec)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gc-fibers",
        description="Classify the fibers of a Gelfand-Cetlin system from its "
                    "ladder diagram, and cross-check numerically.",
    )
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("faces", help="enumerate faces of the ladder diagram")
    _add_common(p)
    _add_face_selector(p)
    p.set_defaults(fn=cmd_faces)

    p = sub.add_parser("lagrangian", help="list Lagrangian faces")
    _add_common(p)
    p.set_defaults(fn=cmd_lagrangian)

    p = sub.add_parser("fiber", help="fiber descriptor of selected faces")
    _add_common(p)
    _add_face_selector(p)
    p.set_defaults(fn=cmd_fiber)

    p = sub.add_parser("verify", help="numerical cross-check of selected faces")
    _add_common(p)
    _add_face_selector(p)
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("render", help="draw one face (ascii or svg)")
    _add_common(p)
    _add_face_selector(p)
    p.add_argument("--shade-l-blocks", action="store_true",
                   help="shade the rigid L-blocks")
    p.add_argument("--overlay", help="overlay a W-block, e.g. --overlay w2")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("polytope", help="export the H-representation")
    _add_common(p)
    p.set_defaults(fn=cmd_polytope)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (GCFibersError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
