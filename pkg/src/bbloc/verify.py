"""The per-model verification suite behind the verify command.

Each check returns (name, status, detail) with status PASS, FAIL or
SKIP; the caller decides the exit code.  Checks are gated on what the
model kind can actually answer: identity checks that need tangent data,
witness data or a smooth structure are skipped with a note instead of
failing.
"""

from fractions import Fraction as Rat
from math import factorial

from . import coefficients as coeffs
from . import localization as loc
from . import measures
from .complexes import is_pure
from .lattice import primitive, rational_kernel, wdot, weight, wsub
from .models import toric_bb_faces, toric_v

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


def _chain_component_pairs(model):
    """(chain, component) pairs with the component of matching codimension."""
    order = {fp.id: fp.phi_S for fp in model.fixed_points}
    chains = sorted(
        tuple(sorted(f, key=lambda x: order[x]))
        for f in model.closure_complex().faces
    )
    out = []
    for chain in chains:
        k = len(chain) - 1
        for comp in coeffs.iterated_closure_components(model, chain):
            if model.component_dim(comp) == model.dim_x - k:
                out.append((chain, comp))
    return out


def interior_ridge_functionals(model):
    """Functionals cut out by interior ridges through the minimum.

    A ridge shared by two maximal chains and containing the minimum spans
    a hyperplane through the minimum's moment image; its primitive normal
    is the natural functional to feed the linear-relation check.
    """
    mins = min(model.fixed_points, key=lambda fp: fp.phi_S).id
    maximal = model.maximal_chains()
    ridges = {}
    for gamma in maximal:
        for drop in gamma:
            ridge = tuple(f for f in gamma if f != drop)
            ridges.setdefault(ridge, set()).add(gamma)
    out = []
    for ridge, owners in sorted(ridges.items()):
        if len(owners) < 2 or mins not in ridge:
            continue
        base = model.fixed_point(mins).phi_T
        rows = [wsub(model.fixed_point(f).phi_T, base) for f in ridge if f != mins]
        kernel = rational_kernel(rows)
        if len(kernel) != 1:
            continue
        out.append((ridge, primitive(kernel[0])))
    return out


def small_functionals(model, bound=3):
    """Primitive integer functionals with small entries, deduplicated."""
    from itertools import product

    d = model.ambient_dim
    seen = set()
    out = []
    for cand in product(range(-bound, bound + 1), repeat=d):
        if all(x == 0 for x in cand):
            continue
        f = primitive(weight(cand))
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def run_verification(model):
    checks = []

    def add(name, ok, detail=""):
        checks.append((name, PASS if ok else FAIL, detail))

    cc = model.closure_complex()
    add("complex-downward-closed", True, f"{len(cc.faces)} faces")

    if model.kind == "generic" and model.unverified:
        checks.append(
            ("identities", SKIP, "unverified example data; structure checks only")
        )
        add("chains-increasing", True)
        add("coefficients-positive", all(v >= 1 for v in model.declared_v.values()))
        return checks

    # purity
    if model.kind == "sr":
        if is_pure(model.delta, model.dim_x):
            add("purity", is_pure(cc, model.dim_x), f"dim {model.dim_x}")
        else:
            checks.append(("purity", SKIP, "n/a (input not pure)"))
    else:
        add("purity", is_pure(cc, model.dim_x), f"dim {model.dim_x}")

    # coefficients and degree
    try:
        deg = coeffs.degree(model)
        add("degree", deg >= 1, f"degree {deg}")
    except coeffs.IncompleteModelError as exc:
        checks.append(("degree", SKIP, str(exc)))
        deg = None

    if model.kind == "sr":
        add("closure-complex-equals-input", model.closure_complex() == model.delta)
        vs = [coeffs.chain_v(model, c) for c in model.maximal_chains()]
        add("coefficients-all-one", all(v == 1 for v in vs))
        top = sum(1 for f in model.delta.faces if len(f) == model.dim_x + 1
                  and not any(f < g for g in model.delta.faces))
        add("degree-counts-top-facets", deg == top, f"{deg} = {top}")

    if model.kind == "toric":
        P = model.polytope
        vol = P.volume()
        tri = model.maximal_chains()
        simplex_vol = Rat(0)
        for chain in tri:
            pts = [model.fixed_point(f).phi_T for f in chain]
            from .lattice import normalized_volume

            simplex_vol += normalized_volume(pts) / factorial(P.dim)
        add("pulling-covers-polytope", simplex_vol == vol, f"{simplex_vol} = {vol}")
        nvol = vol * factorial(P.dim)
        add("degree-is-normalized-volume", deg == nvol, f"{deg} = {nvol}")
        add(
            "witness-v-equals-simplex-volume",
            all(coeffs.v_from_witnesses(model, c) == toric_v(model, c) for c in tri),
        )
        owners = {}
        for fp in model.fixed_points:
            for face in toric_bb_faces(model, fp.id):
                owners.setdefault(face, []).append(fp.id)
        add(
            "bb-faces-partition",
            len(owners) == len(P.faces) and all(len(v) == 1 for v in owners.values()),
        )

    # recurrence and assembling over the component oracle
    if model.supports_witnesses:
        rec_ok, asm_ok, count = True, True, 0
        for chain, comp in _chain_component_pairs(model):
            for j in range(len(chain)):
                rec_ok = rec_ok and coeffs.recurrence_check(model, chain, j, comp)
            asm_ok = asm_ok and coeffs.assembling_check(model, chain, comp)
            count += 1
        add("recurrence", rec_ok, f"{count} chain/component pairs")
        add("assembling", asm_ok, f"{count} chain/component pairs")
    else:
        checks.append(("recurrence", SKIP, "no component oracle for this model kind"))
        checks.append(("assembling", SKIP, "no component oracle for this model kind"))

    # witness data consistency (generic models carrying it)
    if model.kind == "generic":
        with_data = [c for c in model.declared_v if c in model.witness_data]
        if with_data:
            ok = all(
                sum(w.product() for w in model.witness_data[c]) == model.declared_v[c]
                for c in with_data
            )
            add("witness-products-match-v", ok, f"{len(with_data)} chains")

    # measure checks (the mass identity holds even when the measure is
    # singular against Lebesgue and no pointwise density exists)
    if model.maximal_chains():
        dh = measures.dh_from_model(model)
        add(
            "mass-times-factorial-is-degree",
            measures.total_mass(dh) * factorial(model.dim_x) == deg,
        )
    else:
        checks.append(("mass-times-factorial-is-degree", SKIP, "no maximal chains"))

    if model.kind == "toric":
        _toric_density_checks(model, add, checks)
        _toric_localization_checks(model, add, checks)

    if model.kind == "generic" and model.tangent_cone is not None:
        add("tangent-cone-identity", _tangent_cone_from_data(model), "")

    return checks


def _interior_sample(model):
    """A generic rational point strictly inside the polytope."""
    P = model.polytope
    n = len(P.vertices)
    base = [Rat(17 + 3 * i, 53 + 5 * i) for i in range(n)]
    total = sum(base)
    coeffsum = [c / total for c in base]
    p = tuple(
        sum((c * v[i] for c, v in zip(coeffsum, P.vertices)), Rat(0))
        for i in range(P.dim)
    )
    return p


def _toric_density_checks(model, add, checks):
    dh = measures.dh_from_model(model)
    p = _interior_sample(model)
    try:
        add("density-one-inside", measures.density_at(dh, p) == 1, f"at {p}")
    except measures.NonGenericPointError:
        checks.append(("density-one-inside", SKIP, "sample point non-generic"))
    outside = tuple(x + 1 + max(abs(v[i]) for v in model.polytope.vertices for i in range(model.polytope.dim)) for i, x in enumerate(p))
    try:
        add("density-zero-outside", measures.density_at(dh, outside) == 0)
    except measures.NonGenericPointError:
        checks.append(("density-zero-outside", SKIP, "sample point non-generic"))
    for scale in (5, 10, 20):
        try:
            est = measures.ehrhart_density_estimate(model, p, scale)
        except measures.NonGenericPointError as exc:
            checks.append((f"ehrhart-oracle-n{scale}", SKIP, str(exc)))
            continue
        ok = abs(est - 1) <= Rat(3, scale)
        add(f"ehrhart-oracle-n{scale}", ok, f"estimate {est}")
    if model.is_smooth():
        vv = generic_direction(model)
        try:
            alt = measures.alternating_density_at(model.fixed_points, vv, p)
            add("alternating-matches-positive", alt == measures.density_at(dh, p))
        except (measures.NonGenericPointError, measures.DegenerateConeError) as exc:
            checks.append(("alternating-matches-positive", SKIP, str(exc)))
    else:
        checks.append(
            ("alternating-matches-positive", SKIP, "model has a non-simple vertex")
        )


def generic_direction(model):
    """Small integer direction pairing nonzero with every tangent weight."""
    d = model.ambient_dim
    from itertools import product

    for cand in product(range(1, 8), repeat=d):
        vec = weight(cand)
        if all(
            wdot(vec, lam) != 0
            for fp in model.fixed_points
            for lam in fp.tangent_weights or ()
        ):
            return vec
    raise RuntimeError("no generic direction found")


def _toric_localization_checks(model, add, checks):
    if model.is_smooth():
        eq = loc.equivariant_multiplicity(model)
        ab = loc.ab_sum(model.fixed_points)
        add("eqmult-matches-fixed-point-sum", loc.fraction_sums_equal(eq, ab))
    else:
        checks.append(
            ("eqmult-matches-fixed-point-sum", SKIP, "non-simple vertex; sum needs smoothness")
        )
    # tangent cone at the minimum
    mn = min(model.fixed_points, key=lambda fp: fp.phi_S)
    if model.tangent_cone is not None:
        add("tangent-cone-identity", _tangent_cone_from_data(model))
    elif len(mn.tangent_weights) == model.dim_x:
        ok = loc.tangent_cone_identity(model, 1, list(mn.tangent_weights))
        add("tangent-cone-identity", ok, "smooth minimum, cone class 1")
    else:
        checks.append(
            ("tangent-cone-identity", SKIP, "singular minimum without cone data")
        )
    # linear relations: ridge-derived functionals plus a small sweep
    mins = mn.id
    neighbors = sorted(
        {f for f in model.ids() if f != mins and _shares_edge(model, mins, f)},
        key=str,
    )
    candidates = [f for _, f in interior_ridge_functionals(model)]
    candidates += small_functionals(model)
    seen = set()
    ran = 0
    ok = True
    for functional in candidates:
        if functional in seen:
            continue
        seen.add(functional)
        try:
            val = loc.linrels_check(model, neighbors, functional)
        except loc.HypothesisFailedError:
            continue
        ran += 1
        ok = ok and val == 0
    if ran:
        add("linear-relations", ok, f"{ran} applicable functionals")
    else:
        checks.append(
            ("linear-relations", SKIP, "no functional satisfies the hypotheses")
        )


def _shares_edge(model, a, b):
    ia, ib = model.vertex_index(a), model.vertex_index(b)
    return tuple(sorted((ia, ib))) in model.polytope.edges_at(ia)


def _tangent_cone_from_data(model):
    data = model.tangent_cone
    nvars = 1 + model.ambient_dim
    poly = loc.SparsePoly.const(nvars, 1)
    for form in data.get("numerator_forms", []):
        poly = poly * loc.SparsePoly.linear((0,) + tuple(weight(form)))
    Q = [weight(w) for w in data["tangent_weights"]]
    return loc.tangent_cone_identity(model, poly, Q)
