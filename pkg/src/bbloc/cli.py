"""Batch front-end: model ingestion, computation subcommands, figures.

Usage: bbloc <complex|coeffs|density|verify|svg> --model FILE
              [--points FILE] [--out FILE] [--format text|json]

Text reports are tab-delimited; JSON reports carry the same data with
rationals serialized as "p/q" strings.  Exit codes: 0 success, 1
verification failure, 2 input error.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import coefficients as coeffs
from . import measures
from .lattice import weight
from .localization import DEFAULT_SEED
from .models import ValidationError, load_model_file
from .verify import FAIL, run_verification


def _meta(model):
    """Conventions a reader needs to reproduce the numbers."""
    return {
        "seed": int(os.environ.get("BBLOC_SEED", DEFAULT_SEED)),
        "variables": ["D"] + [f"y{i}" for i in range(1, model.ambient_dim + 1)],
    }


def _rs(x) -> str:
    """Rational to string, 'p/q' or plain integer."""
    x = Fraction(x)
    return str(x)


def _load(path):
    try:
        return load_model_file(path)
    except FileNotFoundError:
        _die(f"model file not found: {path}")
    except ValidationError as exc:
        _die(str(exc))


def _die(msg, code=2):
    print(f"bbloc: error: {msg}", file=sys.stderr)
    sys.exit(code)


def _emit(lines_or_obj, fmt, out):
    if fmt == "json":
        text = json.dumps(lines_or_obj, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(lines_or_obj) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# complex


def _complex_data(model):
    cc = model.closure_complex()
    from .complexes import cone_points, facets, is_pure

    order = {fp.id: fp.phi_S for fp in model.fixed_points}
    face_list = sorted(
        (tuple(sorted(f, key=lambda x: order[x])) for f in cc.faces),
        key=lambda t: (len(t), [str(x) for x in t]),
    )
    by_dim = {}
    for f in face_list:
        by_dim[len(f) - 1] = by_dim.get(len(f) - 1, 0) + 1
    return {
        "name": model.name,
        "kind": model.kind,
        "dim_x": model.dim_x,
        "vertices": [
            {"id": str(fp.id), "phi_S": _rs(fp.phi_S), "phi_T": [_rs(c) for c in fp.phi_T]}
            for fp in model.fixed_points
        ],
        "faces": [[str(x) for x in f] for f in face_list],
        "face_counts": {str(d): c for d, c in sorted(by_dim.items())},
        "facets": sorted(
            [[str(x) for x in sorted(f, key=lambda x: order[x])] for f in facets(cc)]
        ),
        "pure": is_pure(cc, model.dim_x),
        "cone_points": sorted(str(v) for v in cone_points(cc)),
    }


def cmd_complex(model, fmt, out):
    data = _complex_data(model)
    if fmt == "json":
        _emit(data, fmt, out)
        return 0
    lines = [f"model\t{data['name']}\tkind\t{data['kind']}\tdim\t{data['dim_x']}"]
    lines.append("id\tphi_S\tphi_T")
    for v in data["vertices"]:
        lines.append(f"{v['id']}\t{v['phi_S']}\t{','.join(v['phi_T'])}")
    lines.append("face_dim\tcount")
    for d, c in data["face_counts"].items():
        lines.append(f"{d}\t{c}")
    lines.append("facets\t" + " ".join("<".join(f) for f in data["facets"]))
    lines.append(f"pure\t{str(data['pure']).lower()}")
    cps = data["cone_points"]
    lines.append("cone_points\t" + (" ".join(cps) if cps else "(none)"))
    _emit(lines, fmt, out)
    return 0


# ---------------------------------------------------------------------------
# coeffs


def _coeffs_data(model):
    listed = model.maximal_chains()
    full_length = True
    if model.kind == "generic":
        order = {fp.id: fp.phi_S for fp in model.fixed_points}
        listed = sorted(model.declared_v, key=lambda c: [order[f] for f in c])
        full_length = all(len(c) == model.dim_x + 1 for c in listed)
    rows = []
    total = 0
    for chain in listed:
        v = coeffs.chain_v(model, chain)
        if len(chain) == model.dim_x + 1:
            total += v
        try:
            wits = len(coeffs.enumerate_witnesses(model, chain))
        except coeffs.IncompleteModelError:
            wits = None
        rows.append({"chain": [str(f) for f in chain], "v": v, "witnesses": wits})
    data = {
        "name": model.name,
        "kind": model.kind,
        "chains": rows,
        "degree": total if full_length else None,
        "as_generic": _as_generic(model, rows),
        "meta": _meta(model),
    }
    return data


def _as_generic(model, rows):
    return {
        "kind": "generic",
        "name": model.name + "-exported",
        "dim_x": model.dim_x,
        "fixed_points": [
            {
                "id": str(fp.id),
                "phi_T": [_rs(c) for c in fp.phi_T],
                "phi_S": _rs(fp.phi_S),
                "tangent_weights": (
                    [[_rs(c) for c in w] for w in fp.tangent_weights]
                    if fp.tangent_weights is not None
                    else None
                ),
            }
            for fp in model.fixed_points
        ],
        "maximal_chains": [
            {"points": r["chain"], "v": r["v"]} for r in rows
        ],
    }


def cmd_coeffs(model, fmt, out):
    try:
        data = _coeffs_data(model)
    except coeffs.IncompleteModelError as exc:
        _die(str(exc))
    if fmt == "json":
        _emit(data, fmt, out)
        return 0
    lines = ["chain\tv\twitnesses"]
    for r in data["chains"]:
        w = "-" if r["witnesses"] is None else str(r["witnesses"])
        lines.append(f"{'<'.join(r['chain'])}\t{r['v']}\t{w}")
    if data["degree"] is None:
        lines.append("degree\t(undefined: some chains below maximal length)")
    else:
        lines.append(f"degree\t{data['degree']}")
    _emit(lines, fmt, out)
    return 0


# ---------------------------------------------------------------------------
# density


def _load_points(path):
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = data["points"]
    return [weight(p) for p in data]


def cmd_density(model, points_path, fmt, out):
    if points_path is None:
        _die("density needs --points FILE")
    try:
        points = _load_points(points_path)
    except FileNotFoundError:
        _die(f"points file not found: {points_path}")
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        _die(f"malformed points file: {exc}")
    dh = measures.dh_from_model(model)
    if dh.simplex_dim < dh.ambient_dim:
        _die(
            "density undefined: the measure is singular against Lebesgue"
            " (restrict the torus first)"
        )
    has_tangents = all(fp.tangent_weights is not None for fp in model.fixed_points)
    alternating_possible = (
        has_tangents
        and model.dim_x == model.ambient_dim
        and all(
            len(fp.tangent_weights) == model.ambient_dim
            for fp in model.fixed_points
        )
    )
    vv = None
    if alternating_possible:
        from .verify import generic_direction

        try:
            vv = generic_direction(model)
        except RuntimeError:
            vv = None
    rows = []
    for p in points:
        row = {"point": [_rs(c) for c in p]}
        try:
            row["density"] = _rs(measures.density_at(dh, p))
        except measures.NonGenericPointError:
            row["density"] = None
            row["note"] = "non-generic, skipped"
            rows.append(row)
            continue
        if vv is not None:
            try:
                alt = measures.alternating_density_at(model.fixed_points, vv, p)
                row["alternating"] = _rs(alt)
            except (measures.NonGenericPointError, measures.DegenerateConeError):
                row["alternating"] = None
        rows.append(row)
    if fmt == "json":
        _emit({"name": model.name, "points": rows}, fmt, out)
        return 0
    lines = ["point\tdensity\talternating"]
    for r in rows:
        d = r["density"] if r["density"] is not None else r.get("note", "")
        a = r.get("alternating")
        lines.append(f"{','.join(r['point'])}\t{d}\t{a if a is not None else '-'}")
    _emit(lines, fmt, out)
    return 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(model, fmt, out):
    checks = run_verification(model)
    failed = any(status == FAIL for _, status, _ in checks)
    meta = _meta(model)
    if fmt == "json":
        _emit(
            {
                "name": model.name,
                "checks": [
                    {"check": n, "status": s, "detail": d} for n, s, d in checks
                ],
                "ok": not failed,
                "meta": meta,
            },
            fmt,
            out,
        )
    else:
        lines = [f"{s}\t{n}\t{d}" for n, s, d in checks]
        lines.append(("FAIL" if failed else "PASS") + "\toverall")
        lines.append(
            f"meta\tseed={meta['seed']}\tvariables={','.join(meta['variables'])}"
        )
        _emit(lines, fmt, out)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# svg


def cmd_svg(model, out):
    if model.kind != "toric" or model.ambient_dim != 2:
        _die("svg rendering supports 2-dimensional toric models only")
    if out is None:
        _die("svg needs --out FILE")
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "bbloc"
    import matplotlib.pyplot as plt

    P = model.polytope
    hull = _hull_cycle(P)
    colors = {}
    palette = matplotlib.colormaps["tab10"]
    for rank, fp in enumerate(model.fixed_points):
        colors[model.vertex_index(fp.id)] = palette(rank % 10)

    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    for ax in axes:
        ax.set_aspect("equal")
        ax.axis("off")

    def draw_outline(ax):
        xs = [float(P.vertices[i][0]) for i in hull + hull[:1]]
        ys = [float(P.vertices[i][1]) for i in hull + hull[:1]]
        ax.plot(xs, ys, color="black", linewidth=1)

    # panel 1: the polytope with labels
    ax = axes[0]
    draw_outline(ax)
    for i, v in enumerate(P.vertices):
        ax.plot([float(v[0])], [float(v[1])], "o", color="black", markersize=4)
        ax.annotate(str(model.labels[i]), (float(v[0]), float(v[1])),
                    textcoords="offset points", xytext=(5, 5))
    ax.set_title("moment polytope")

    # panel 2: faces colored by their bottom vertex
    ax = axes[1]
    full = frozenset(range(len(P.vertices)))
    bottom_full = model.bottom(full)
    xs = [float(P.vertices[i][0]) for i in hull]
    ys = [float(P.vertices[i][1]) for i in hull]
    ax.fill(xs, ys, color=colors[bottom_full], alpha=0.3, linewidth=0)
    for face in sorted(P.faces, key=sorted):
        if len(face) == 2 and P.face_dim(face) == 1:
            a, b = sorted(face)
            ax.plot(
                [float(P.vertices[a][0]), float(P.vertices[b][0])],
                [float(P.vertices[a][1]), float(P.vertices[b][1])],
                color=colors[model.bottom(face)],
                linewidth=3,
            )
    for i, v in enumerate(P.vertices):
        ax.plot([float(v[0])], [float(v[1])], "o", color=colors[i], markersize=7)
    ax.set_title("flow decomposition by bottom vertex")

    # panel 3: the pulling triangulation with coefficients
    ax = axes[2]
    draw_outline(ax)
    for chain in model.maximal_chains():
        idx = [model.vertex_index(f) for f in chain]
        pts = [P.vertices[i] for i in idx]
        xs = [float(q[0]) for q in pts + pts[:1]]
        ys = [float(q[1]) for q in pts + pts[:1]]
        ax.plot(xs, ys, color="tab:blue", linewidth=1)
        cx = sum(float(q[0]) for q in pts) / 3
        cy = sum(float(q[1]) for q in pts) / 3
        from .models import toric_v

        ax.annotate(f"v={toric_v(model, chain)}", (cx, cy), ha="center")
    ax.set_title("pulling triangulation")

    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    print(f"wrote {out}")
    return 0


def _hull_cycle(P):
    """Vertex indices of a 2-polytope in boundary order."""
    edges = [tuple(sorted(f)) for f in P.faces if len(f) == 2 and P.face_dim(f) == 1]
    adj = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    start = min(adj)
    cycle = [start]
    prev = None
    while len(cycle) < len(adj):
        nxt = [x for x in adj[cycle[-1]] if x != prev]
        prev = cycle[-1]
        cycle.append(nxt[0])
    return cycle


# ---------------------------------------------------------------------------


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="bbloc",
        description="closure-chain complexes and compactly supported measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("complex", "coeffs", "density", "verify", "svg"):
        sp = sub.add_parser(name)
        sp.add_argument("--model", required=True)
        sp.add_argument("--points")
        sp.add_argument("--out")
        sp.add_argument("--format", choices=("text", "json"), default="text")
    args = parser.parse_args(argv)
    model = _load(args.model)
    if args.command == "complex":
        code = cmd_complex(model, args.format, args.out)
    elif args.command == "coeffs":
        code = cmd_coeffs(model, args.format, args.out)
    elif args.command == "density":
        code = cmd_density(model, args.points, args.format, args.out)
    elif args.command == "verify":
        code = cmd_verify(model, args.format, args.out)
    else:
        code = cmd_svg(model, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
