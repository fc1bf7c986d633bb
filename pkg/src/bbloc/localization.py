"""Exact rational-function identities attached to a model.

Polynomials live in the variables (D, y_1, ..., y_d): the dilation
character first, then the torus coordinates in input order.  Linear
forms are coefficient tuples in those variables; a fraction sum is a
list of (numerator polynomial, denominator form list) pairs compared
exactly by clearing denominators, with a seeded random-evaluation
fallback for oversized clearings.
"""

import os
import random
from itertools import combinations, permutations

from .lattice import (
    NoBasisError,
    Rat,
    in_affine_hull,
    lex_first_basis,
    rat,
    solve_exact,
    wdot,
    weight,
    wsub,
)

DEFAULT_SEED = 20080131


class HypothesisFailedError(ValueError):
    """A stated precondition of the identity does not hold."""


class SparsePoly:
    """Polynomial as a map from exponent tuples to rational coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for exps, c in terms.items():
                c = rat(c)
                if c != 0:
                    self.terms[tuple(exps)] = c

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: rat(c)})

    @classmethod
    def linear(cls, form):
        form = weight(form)
        terms = {}
        for i, c in enumerate(form):
            if c != 0:
                e = [0] * len(form)
                e[i] = 1
                terms[tuple(e)] = c
        return cls(len(form), terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Rat(0)) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        return SparsePoly(self.nvars, out)

    def __neg__(self):
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Rat, str)):
            c = rat(other)
            return SparsePoly(self.nvars, {e: c * x for e, x in self.terms.items()})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Rat(0)) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        return SparsePoly(self.nvars, out)

    __rmul__ = __mul__

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def evaluate(self, point):
        total = Rat(0)
        for e, c in self.terms.items():
            val = c
            for x, k in zip(point, e):
                val *= x**k
            total += val
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        names = ["D"] + [f"y{i}" for i in range(1, self.nvars)]
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{names[i]}^{k}" if k > 1 else names[i]
                for i, k in enumerate(e)
                if k
            )
            bits.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(bits)


class FractionSum:
    """Sum of numerator/product-of-linear-forms terms, compared exactly."""

    def __init__(self, nvars, terms):
        self.nvars = nvars
        self.terms = []
        for num, forms in terms:
            if isinstance(num, (int, Rat, str)):
                num = SparsePoly.const(nvars, num)
            forms = tuple(weight(f) for f in forms)
            for f in forms:
                if all(x == 0 for x in f):
                    raise ValueError("zero linear form in a denominator")
            self.terms.append((num, forms))

    def evaluate(self, point):
        """Value at a point; None when some denominator vanishes."""
        total = Rat(0)
        for num, forms in self.terms:
            denom = Rat(1)
            for f in forms:
                val = wdot(f, point)
                if val == 0:
                    return None
                denom *= val
            total += num.evaluate(point) / denom
        return total

    def _normalized(self):
        """Terms with denominators scaled to lead-1 canonical forms."""
        out = []
        for num, forms in self.terms:
            scale = Rat(1)
            canon = []
            for f in forms:
                lead = next(x for x in f if x != 0)
                scale *= lead
                canon.append(tuple(x / lead for x in f))
            out.append((num * (Rat(1) / scale), tuple(canon)))
        return out

    def as_single_fraction(self):
        """(numerator, denominator multiset) over the least common clearing."""
        normalized = self._normalized()
        lcm = {}
        counts = []
        for _, forms in normalized:
            cnt = {}
            for f in forms:
                cnt[f] = cnt.get(f, 0) + 1
            counts.append(cnt)
            for f, k in cnt.items():
                lcm[f] = max(lcm.get(f, 0), k)
        num = SparsePoly(self.nvars, {})
        for (n, _), cnt in zip(normalized, counts):
            part = n
            for f, k in lcm.items():
                for _ in range(k - cnt.get(f, 0)):
                    part = part * SparsePoly.linear(f)
            num = num + part
        return num, lcm


def fraction_sums_equal(a: FractionSum, b: FractionSum, seed=None, budget=18) -> bool:
    """Exact equality as rational functions.

    Clears to common denominators and compares polynomials; if the
    combined clearing exceeds the budget, falls back to evaluation at
    seeded random rational points away from every pole.
    """
    if a.nvars != b.nvars:
        raise ValueError("variable count mismatch")
    na, da = a.as_single_fraction()
    nb, db = b.as_single_fraction()
    size = sum(da.values()) + sum(db.values())
    if size <= budget:
        left = na
        for f, k in db.items():
            extra = k - da.get(f, 0)
            for _ in range(max(extra, 0)):
                left = left * SparsePoly.linear(f)
        right = nb
        for f, k in da.items():
            extra = k - db.get(f, 0)
            for _ in range(max(extra, 0)):
                right = right * SparsePoly.linear(f)
        return left == right
    if seed is None:
        seed = int(os.environ.get("BBLOC_SEED", DEFAULT_SEED))
    rng = random.Random(seed)
    needed = max(na.total_degree(), nb.total_degree()) + size + 2
    checked = 0
    while checked < needed:
        point = tuple(
            Rat(rng.randint(-10**6, 10**6), rng.randint(1, 1000))
            for _ in range(a.nvars)
        )
        va = a.evaluate(point)
        vb = b.evaluate(point)
        if va is None or vb is None:
            continue
        if va != vb:
            return False
        checked += 1
    return True


# ---------------------------------------------------------------------------
# Fixed-point sums


def _dilated(phi):
    return (Rat(1),) + tuple(phi)


def _undilated(lam):
    return (Rat(0),) + tuple(lam)


def equivariant_multiplicity(model) -> FractionSum:
    """Sum over maximal chains of v / prod (D + weight at each point)."""
    from .coefficients import chain_v

    nvars = 1 + model.ambient_dim
    terms = []
    for chain in model.maximal_chains():
        v = chain_v(model, chain)
        forms = tuple(_dilated(model.fixed_point(f).phi_T) for f in chain)
        terms.append((SparsePoly.const(nvars, v), forms))
    return FractionSum(nvars, terms)


def ab_sum(points, numerators=None, nvars=None) -> FractionSum:
    """Fixed-point sum: numerator over (D + weight) times tangent weights.

    The cone convention: each point contributes its dilated weight once
    and its tangent weights undilated, matching the affine-chart picture
    of the cone over a smooth projectively embedded variety.
    """
    points = list(points)
    if nvars is None:
        nvars = 1 + len(points[0].phi_T)
    terms = []
    for i, fp in enumerate(points):
        if fp.tangent_weights is None:
            raise ValueError(f"fixed point {fp.id} lacks tangent weights")
        num = SparsePoly.const(nvars, 1) if numerators is None else numerators[i]
        forms = (_dilated(fp.phi_T),) + tuple(
            _undilated(lam) for lam in fp.tangent_weights
        )
        terms.append((num, forms))
    return FractionSum(nvars, terms)


# ---------------------------------------------------------------------------
# Partial-fraction schemata and tensors


class SchemaInjection:
    """An injection step list: positions eaten from the vector list."""

    def __init__(self, vectors, sigma):
        self.sigma = tuple(sigma)
        if len(set(self.sigma)) != len(self.sigma):
            raise ValueError("injection must not repeat positions")
        for i in range(len(self.sigma)):
            remaining = [j for j in range(len(vectors)) if j not in self.sigma[:i]]
            basis = _lex_first_positions(vectors, remaining)
            if basis is None or self.sigma[i] not in basis:
                raise ValueError(
                    f"position {self.sigma[i]} not in the lex-first basis at step {i}"
                )

    def __repr__(self):
        return f"SchemaInjection({self.sigma})"

    def __eq__(self, other):
        return isinstance(other, SchemaInjection) and self.sigma == other.sigma

    def __hash__(self):
        return hash(self.sigma)


def _lex_first_positions(vectors, remaining):
    """Original positions of the lex-first basis among ``remaining``."""
    try:
        rel = lex_first_basis([vectors[j] for j in remaining])
    except NoBasisError:
        return None
    return [remaining[i] for i in rel]


def enumerate_schemata(vectors, M):
    """All partial-fraction schemata with image the complement of M.

    ``vectors`` is the ordered list; ``M`` the positions kept in the
    denominator.  Each returned injection eats the complement one
    position at a time, each eaten position lying in the lex-first basis
    of the vectors still present, and the survivors must span.
    """
    vectors = [weight(v) for v in vectors]
    M = set(M)
    complement = [j for j in range(len(vectors)) if j not in M]
    k = len(complement)
    if k == 0:
        return [SchemaInjection(vectors, ())]
    if _lex_first_positions(vectors, sorted(M)) is None:
        return []
    out = []
    for perm in permutations(complement):
        ok = True
        for i in range(k):
            remaining = [j for j in range(len(vectors)) if j not in perm[:i]]
            basis = _lex_first_positions(vectors, remaining)
            if basis is None or perm[i] not in basis:
                ok = False
                break
        if ok:
            out.append(SchemaInjection(vectors, perm))
    return out


class PFTensor:
    """Order-k tensor kept as scaled rank-one summands of covectors."""

    def __init__(self, order, summands=()):
        self.order = order
        self.summands = list(summands)

    def add(self, coef, covectors):
        if len(covectors) != self.order:
            raise ValueError("summand order mismatch")
        self.summands.append((rat(coef), tuple(tuple(c) for c in covectors)))

    def contract(self, vectors) -> Rat:
        if len(vectors) != self.order:
            raise ValueError("contraction order mismatch")
        total = Rat(0)
        for coef, covs in self.summands:
            prod = coef
            for cov, vec in zip(covs, vectors):
                prod *= wdot(cov, vec)
            total += prod
        return total

    def is_zero(self):
        return not self.summands


def _dual_covector(vectors, basis_positions, target):
    basis = [vectors[j] for j in basis_positions]
    e = [Rat(0)] * len(basis)
    e[basis_positions.index(target)] = Rat(1)
    sol = solve_exact(basis, e)
    return tuple(sol)


def tau_tensor(model, gamma, gamma_sub) -> PFTensor:
    """Partial-fraction tensor of a maximal chain against a subchain.

    Sums, over schemata eating gamma minus gamma_sub, the tensor product
    of the dual-basis covectors picked at each step.
    """
    gamma = tuple(gamma)
    sub = set(gamma_sub)
    if not sub <= set(gamma):
        raise ValueError("subchain is not contained in the chain")
    if len(gamma) != model.dim_x + 1:
        raise ValueError("chain must have maximal length")
    vectors = [_dilated(model.fixed_point(f).phi_T) for f in gamma]
    M = {i for i, f in enumerate(gamma) if f in sub}
    k = len(gamma) - len(M)
    tensor = PFTensor(k)
    for schema in enumerate_schemata(vectors, M):
        covs = []
        for i, pos in enumerate(schema.sigma):
            remaining = [j for j in range(len(vectors)) if j not in schema.sigma[:i]]
            basis = _lex_first_positions(vectors, remaining)
            covs.append(_dual_covector(vectors, basis, pos))
        tensor.add(Rat(1), covs)
    return tensor


def subchain_tensor(model, gamma_sub, v_table=None) -> PFTensor:
    """The chain tensor: sum of v_gamma tau over maximal chains above."""
    from .coefficients import chain_v

    sub = tuple(gamma_sub)
    k = model.dim_x + 1 - len(sub)
    tensor = PFTensor(k)
    for gamma in model.maximal_chains():
        if not set(sub) <= set(gamma):
            continue
        v = chain_v(model, gamma) if v_table is None else v_table[gamma]
        tau = tau_tensor(model, gamma, sub)
        for coef, covs in tau.summands:
            tensor.add(v * coef, covs)
    return tensor


def integrate_class_at(model, alphas, p) -> Rat:
    """Pointwise value of the transform of multiply-by-alpha at p.

    Sums, over subchains of colength k = len(alphas), the contraction of
    the subchain tensor with the alphas times the simplex density of the
    subchain's vertex weights.  With k = 0 this is the plain density.
    """
    from .measures import NonGenericPointError, simplex_density

    p = weight(p)
    d = model.ambient_dim
    n = model.dim_x
    k = len(alphas)
    if k > n:
        raise ValueError(f"class degree {k} exceeds dimension {n}")
    images = sorted({fp.phi_T for fp in model.fixed_points})
    for size in range(1, min(len(images), d) + 1):
        for sub in combinations(images, size):
            if in_affine_hull(p, list(sub)):
                raise NonGenericPointError(
                    f"point lies on the affine hull of {size} fixed-point images"
                )
    alphas_lifted = [_undilated(weight(a)) for a in alphas]
    size = n + 1 - k
    complex = model.closure_complex()
    order = {fp.id: fp.phi_S for fp in model.fixed_points}
    subchains = sorted(
        tuple(sorted(f, key=lambda x: order[x]))
        for f in complex.faces
        if len(f) == size
    )
    memo = {}
    total = Rat(0)
    for sub in subchains:
        tensor = subchain_tensor(model, sub)
        coef = tensor.contract(alphas_lifted)
        if coef == 0:
            continue
        verts = tuple(model.fixed_point(f).phi_T for f in sub)
        total += coef * simplex_density(verts, p, d, memo)
    return total


# ---------------------------------------------------------------------------
# Linear relations and the tangent-cone identity


def _min_fixed_point(model):
    return min(model.fixed_points, key=lambda fp: fp.phi_S).id


def linrels_check(model, Q, functional, delta=None, v_table=None) -> Rat:
    """Exact value of the linear-relation sum; zero when hypotheses hold.

    ``functional`` composes with the moment images; the level set of the
    minimum must form a closure chain not inside Q plus the minimum.
    The sum runs over maximum-length chains containing that level set,
    each weighted by its coefficient times the product of the shifted
    functional values over the fixed points it omits.
    """
    from .coefficients import chain_v

    sigma = weight(functional)
    mn = _min_fixed_point(model)
    phi_R = {fp.id: wdot(sigma, fp.phi_T) for fp in model.fixed_points}
    base = phi_R[mn]
    level = [fp.id for fp in model.fixed_points if phi_R[fp.id] == base]
    level = tuple(sorted(level, key=lambda f: model.fixed_point(f).phi_S))
    if delta is not None and tuple(delta) != level:
        raise HypothesisFailedError(
            f"declared delta {tuple(delta)} differs from the level set {level}"
        )
    if not model.closure_complex().has_face(level):
        raise HypothesisFailedError(f"level set {level} is not a closure chain")
    if set(level) <= set(Q) | {mn}:
        raise HypothesisFailedError(
            "level set lies inside Q plus the minimum; no relation follows"
        )
    ids = set(model.ids())
    total = Rat(0)
    for gamma in model.maximal_chains():
        if not set(level) <= set(gamma):
            continue
        v = chain_v(model, gamma) if v_table is None else v_table[gamma]
        prod = Rat(v)
        for f in sorted(ids - set(gamma), key=str):
            prod *= phi_R[f] - base
        total += prod
    return total


def tangent_cone_identity(model, cone_class, Q, seed=None) -> bool:
    """Check the chain sum against the tangent-cone class at the minimum.

    ``cone_class`` is a polynomial in (D, torus coordinates) with no D
    dependence in practice; ``Q`` is the multiset of tangent weights of
    the ambient space at the minimum.  Both sides live in the torus-only
    variables; the chain side divides by the moment differences to the
    minimum.
    """
    from .coefficients import chain_v

    nvars = 1 + model.ambient_dim
    mn = _min_fixed_point(model)
    mphi = model.fixed_point(mn).phi_T
    terms = []
    for gamma in model.maximal_chains():
        v = chain_v(model, gamma)
        forms = []
        for f in gamma:
            if f == mn:
                continue
            diff = wsub(model.fixed_point(f).phi_T, mphi)
            if all(x == 0 for x in diff):
                raise HypothesisFailedError(
                    f"moment image of {f} coincides with the minimum"
                )
            forms.append(_undilated(diff))
        terms.append((SparsePoly.const(nvars, v), tuple(forms)))
    lhs = FractionSum(nvars, terms)
    rhs_forms = tuple(_undilated(weight(lam)) for lam in Q)
    if isinstance(cone_class, (int, str, Rat)):
        cone_class = SparsePoly.const(nvars, cone_class)
    rhs = FractionSum(nvars, [(cone_class, rhs_forms)])
    return fraction_sums_equal(lhs, rhs, seed=seed)
