"""Witness enumeration and the coefficient recurrence.

The positive integers attached to maximal chains arise as sums, over
nested-component witnesses, of products of hyperplane-section
multiplicities.  Models expose those components and multiplicities
through a small oracle (see ``models``); everything here is written
against that oracle and never inspects geometry directly.
"""

from .complexes import Witness


class IncompleteModelError(ValueError):
    """The model lacks data (witnesses, degrees) needed by the operation."""


class NotAChainError(ValueError):
    """The given point sequence is not a closure chain of the model."""


def _check_chain(model, chain):
    chain = tuple(chain)
    if not model.closure_complex().has_face(chain):
        raise NotAChainError(f"{chain} is not a closure chain")
    order = [model.fixed_point(f).phi_S for f in chain]
    if any(a >= b for a, b in zip(order, order[1:])):
        raise NotAChainError(f"{chain} is not phi_S-increasing")
    return chain


def _maximal(handles):
    out = []
    for h in handles:
        if not any(h < g for g in handles):
            out.append(h)
    return sorted(set(out), key=sorted)


def stratum_closure_components(model, fid, within=None):
    """Irreducible components of the closed B-B stratum of ``fid``.

    ``within`` restricts to a single irreducible component handle; by
    default the stratum is taken in the whole model.
    """
    if within is not None:
        return model.bb_components(within, fid)
    cands = set()
    for comp, _mult in model.top_components():
        cands.update(model.bb_components(comp, fid))
    return _maximal(cands)


def iterated_closure_components(model, chain, within=None):
    """Components of the iterated stratum closure along the chain."""
    comps = None
    for fid in chain:
        if comps is None:
            comps = stratum_closure_components(model, fid, within=within)
        else:
            nxt = set()
            for c in comps:
                nxt.update(model.bb_components(c, fid))
            comps = _maximal(nxt)
    return comps if comps is not None else [h for h, _ in model.top_components()]


def _top_multiplicity(model, handle):
    for comp, mult in model.top_components():
        if comp == handle:
            return mult
    return None


def _section_multiplicity(model, parent, child):
    for comp, mult in model.section_components(parent):
        if comp == child:
            return mult
    return None


def enumerate_witnesses(model, chain):
    """All witnesses to the chain: nested components with matching minima.

    Dimension-graded witnesses (component dimension dropping by exactly
    one from the top) additionally carry their multiplicity vector.
    """
    chain = _check_chain(model, chain)
    if not model.supports_witnesses:
        if getattr(model, "witness_data", None) and chain in model.witness_data:
            return list(model.witness_data[chain])
        raise IncompleteModelError(
            f"model {model.name!r} carries no witness data for {chain}"
        )
    if not chain:
        return []
    results = []

    def descend(steps):
        i = len(steps)
        if i == len(chain):
            results.append([h for _, h in steps])
            return
        for nxt in model.bb_components(steps[-1][1], chain[i]):
            descend(steps + [(chain[i], nxt)])

    for y0 in stratum_closure_components(model, chain[0]):
        descend([(chain[0], y0)])

    dim_x = model.dim_x
    witnesses = []
    for handles in results:
        graded = all(
            model.component_dim(h) == dim_x - i for i, h in enumerate(handles)
        )
        mults = None
        if graded:
            m0 = _top_multiplicity(model, handles[0])
            ms = [m0]
            for prev, cur in zip(handles, handles[1:]):
                ms.append(_section_multiplicity(model, prev, cur))
            if all(m is not None for m in ms):
                mults = tuple(ms)
        witnesses.append(Witness(tuple(zip(chain, handles)), mults))
    return witnesses


def v_from_witnesses(model, chain) -> int:
    """Coefficient of a maximal chain: sum of witness multiplicity products."""
    chain = _check_chain(model, chain)
    if len(chain) != model.dim_x + 1:
        raise NotAChainError(f"{chain} is not of maximal length")
    wits = enumerate_witnesses(model, chain)
    if not wits:
        raise AssertionError(f"chain {chain} has no witnesses")
    total = 0
    for w in wits:
        if w.multiplicities is None:
            raise IncompleteModelError(
                f"witness for {chain} lacks multiplicities"
            )
        total += w.product()
    if total < 1:
        raise AssertionError(f"coefficient of {chain} must be positive")
    return total


def chain_v(model, chain) -> int:
    """Model-appropriate coefficient of a maximal chain."""
    chain = tuple(chain)
    if getattr(model, "declared_v", None) is not None and not model.supports_witnesses:
        if chain not in model.declared_v:
            raise NotAChainError(f"{chain} is not a declared maximal chain")
        return model.declared_v[chain]
    return v_from_witnesses(model, chain)


def v_coefficient(model, chain, target, within=None) -> int:
    """The coefficient v(Z)_{chain, Y} for Y = ``target`` inside Z.

    Sums multiplicity products over dimension-graded witnesses inside
    ``within`` (the whole model when None) whose final component is the
    target handle.
    """
    chain = tuple(chain)
    if not chain:
        raise NotAChainError("empty chain has no coefficient")
    if not model.supports_witnesses:
        raise IncompleteModelError("component oracle unavailable for this model")
    top_dim = (
        model.dim_x if within is None else model.component_dim(within)
    )
    total = 0

    def descend(handles, mults):
        i = len(handles)
        if i == len(chain):
            if handles[-1] == target:
                nonlocal total
                prod = 1
                for m in mults:
                    prod *= m
                total += prod
            return
        for nxt in model.bb_components(handles[-1], chain[i]):
            if model.component_dim(nxt) != top_dim - i:
                continue
            m = _section_multiplicity(model, handles[-1], nxt)
            if m is None:
                continue
            descend(handles + [nxt], mults + [m])

    for y0 in stratum_closure_components(model, chain[0], within=within):
        if model.component_dim(y0) != top_dim:
            continue
        if within is None:
            m0 = _top_multiplicity(model, y0)
            if m0 is None:
                continue
        else:
            m0 = 1
        descend([y0], [m0])
    return total


class CoefficientTable:
    """Cache of chain coefficients; entries can be overridden in tests."""

    def __init__(self, model):
        self.model = model
        self.overrides = {}
        self._cache = {}
        self.v_gamma = {
            chain: chain_v(model, chain) for chain in model.maximal_chains()
        }

    def v(self, chain, target, within=None):
        key = (tuple(chain), target, within)
        if key in self.overrides:
            return self.overrides[key]
        if key not in self._cache:
            self._cache[key] = v_coefficient(
                self.model, chain, target, within=within
            )
        return self._cache[key]


def recurrence_check(model, chain, j, target, table=None) -> bool:
    """Verify the factorization of v(X)_{chain, Y} through level j.

    Splits the witness sum at position j: summing, over codimension-j
    components of the iterated closure of the chain prefix that contain
    the target, the product of the prefix coefficient and the
    coefficient of the tail inside that component.
    """
    chain = _check_chain(model, chain)
    k = len(chain) - 1
    if not 0 <= j <= k:
        raise ValueError(f"j = {j} outside 0..{k}")
    if table is None:
        table = CoefficientTable(model)
    lhs = table.v(chain, target)
    rhs = 0
    prefix = chain[: j + 1]
    tail = chain[j:]
    for yj in iterated_closure_components(model, prefix):
        if model.component_dim(yj) != model.dim_x - j:
            continue
        if not (target <= yj):
            continue
        rhs += table.v(prefix, yj) * table.v(tail, target, within=yj)
    return lhs == rhs


def degree(model) -> int:
    """Sum of the coefficients over all maximal chains."""
    return sum(chain_v(model, chain) for chain in model.maximal_chains())


def assembling_check(model, chain, target) -> bool:
    """Verify the degree refinement across a hyperplane section.

    v_{chain, Y} deg Y must equal the sum over section components Z of
    v_{chain + (min Z), Z} deg Z.  For a zero-dimensional target the
    section is empty and the identity degenerates to a tautology.
    """
    chain = _check_chain(model, chain)
    if not model.supports_witnesses:
        raise IncompleteModelError("component oracle unavailable for this model")
    if model.component_dim(target) == 0:
        return True
    lhs = v_coefficient(model, chain, target) * model.component_degree(target)
    rhs = 0
    for comp, _mult in model.section_components(target):
        ext = chain + (model.component_min(comp),)
        rhs += v_coefficient(model, ext, comp) * model.component_degree(comp)
    return lhs == rhs
