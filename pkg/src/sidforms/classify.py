"""Classification of linear systems as Sidorenko / common, with
machine-checkable certificates.

Single equations are decided completely (zero-sum pairing of the
coefficients).  Systems go through a fixed rule ladder: translation
invariance, odd minimal induced length, uncommon shortest equations,
forest graph templates, and the ratio-gap criterion for 2 x 5 systems;
whatever no rule decides stays Unknown.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field

from .errors import (
    BadArity,
    BudgetExceeded,
    DegenerateSystem,
    HypothesisViolated,
    RetriesExhausted,
    SearchBudgetExceeded,
    TooManyColumns,
    TooManyCombinations,
    ZeroForm,
)
from .field import FieldSpec
from .linalg import (
    LinearSystem,
    induced_equations,
    is_degenerate,
    is_translation_invariant,
    matrix_rank,
    min_induced_length,
    zero_sum_pairing,
)

TEMPLATE_BUDGET = 10 ** 5
WITNESS_SPACE_LIMIT = 10 ** 5
WITNESS_DIM_LIMIT = 4


class Trilean(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class Rule(enum.Enum):
    NOT_TRANSLATION_INVARIANT = "not_translation_invariant"
    SINGLE_EQUATION = "single_equation"
    ODD_MIN_LENGTH = "odd_min_length"
    ALL_SHORTEST_UNCOMMON = "all_shortest_uncommon"
    FOREST_TEMPLATE = "forest_template"
    NONCOINCIDENTAL_SHORTEST = "noncoincidental_shortest"
    FOURIER_COMMON = "fourier_common"
    NUMERIC_WITNESS = "numeric_witness"


@dataclass
class Certificate:
    rule: Rule
    payload: dict = dc_field(default_factory=dict)


@dataclass
class Verdict:
    sidorenko: Trilean
    common: Trilean
    certificates: list
    degenerate: bool = False

    def __post_init__(self):
        if self.sidorenko is Trilean.YES and self.common is Trilean.NO:
            raise AssertionError("Sidorenko implies common; inconsistent verdict")


# ------------------------------------------------------------- single forms

def sidorenko_single(field: FieldSpec, coeffs) -> bool:
    """A single form is Sidorenko iff its nonzero coefficients admit a
    perfect pairing with each pair summing to zero."""
    values = [v for v in coeffs if v]
    return bool(values) and len(values) % 2 == 0 \
        and zero_sum_pairing(field, values) is not None


def classify_single_equation(field: FieldSpec, coeffs) -> Verdict:
    """Full classification of one linear form.

    Odd length: common but not Sidorenko.  Even length: Sidorenko and
    common iff a zero-sum pairing of the coefficients exists, otherwise
    neither.
    """
    values = [v % field.q if field.e == 1 else v for v in coeffs]
    support = [v for v in values if v]
    if not support:
        raise ZeroForm("all coefficients are zero")
    length = len(support)
    if length % 2 == 1:
        cert = Certificate(
            Rule.SINGLE_EQUATION,
            {"length": length, "pairing": None, "odd_length": True},
        )
        return Verdict(Trilean.NO, Trilean.YES, [cert])
    pairing = zero_sum_pairing(field, support)
    cert = Certificate(
        Rule.SINGLE_EQUATION,
        {"length": length, "pairing": pairing, "odd_length": False},
    )
    if pairing is not None:
        return Verdict(Trilean.YES, Trilean.YES, [cert])
    return Verdict(Trilean.NO, Trilean.NO, [cert])


def is_b_coincidental(field: FieldSpec, coeffs, b) -> bool:
    """True when for every coefficient a_i some a_j gives a ratio
    a_i * a_j^{-1} in {b, -b, 1/b, -1/b}."""
    values = [v for v in coeffs if v]
    if len(values) != 4:
        raise BadArity(f"need exactly 4 nonzero coefficients, got {len(values)}")
    b = b % field.q if field.e == 1 else b
    if b == 0:
        raise BadArity("b must be nonzero")
    ratios = {b, field.neg(b), field.inv(b), field.neg(field.inv(b))}
    for a in values:
        if not any(field.mul(a, field.inv(c)) in ratios for c in values):
            return False
    return True


# --------------------------------------------------------- graph templates

@dataclass
class TemplateGraph:
    """A partition of the variables into aligned tuples together with one
    edge per certified row: row = form(tuple_u) - form(tuple_v)."""

    tuples: list           # list of tuples of variable indices (slot order)
    edges: list            # (u, v, row_index, form) with form aligned to slots
    rows: list             # the certified basis rows (span the row space)

    def verify(self, field: FieldSpec) -> bool:
        k = len(self.rows[0])
        assigned = [v for t in self.tuples for v in t]
        if sorted(assigned) != list(range(k)):
            return False
        for u, v, ridx, form in self.edges:
            tu, tv = self.tuples[u], self.tuples[v]
            if u == v or len(tu) != len(tv) or len(form) != len(tu):
                return False
            rebuilt = [0] * k
            for c, (a, b) in zip(form, zip(tu, tv)):
                rebuilt[a] = field.add(rebuilt[a], c)
                rebuilt[b] = field.sub(rebuilt[b], c)
            if tuple(rebuilt) != tuple(self.rows[ridx]):
                return False
        return self.is_forest()

    def is_forest(self) -> bool:
        parent = list(range(len(self.tuples)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        seen_pairs = set()
        for u, v, _, _ in self.edges:
            pair = frozenset((u, v))
            if pair in seen_pairs:
                continue  # parallel edge
            seen_pairs.add(pair)
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0

    def spend(self, amount=1):
        self.used += amount
        if self.used > self.limit:
            raise SearchBudgetExceeded(f"template search exceeded {self.limit} steps")


def _row_matchings(field, row):
    """Oriented perfect matchings of the support into zero-sum pairs, up
    to a global side swap (the first pair's orientation is pinned)."""
    support = [j for j, v in enumerate(row) if v]
    if len(support) % 2:
        return []
    out = []

    def rec(remaining, pairs):
        if not remaining:
            out.append(tuple(pairs))
            return
        a, rest = remaining[0], remaining[1:]
        for i, b in enumerate(rest):
            if field.add(row[a], row[b]) == 0:
                nxt = rest[:i] + rest[i + 1:]
                pairs.append((a, b))
                rec(nxt, pairs)
                pairs.pop()
                if pairs:  # swapping the very first pair is a global flip
                    pairs.append((b, a))
                    rec(nxt, pairs)
                    pairs.pop()
        return

    rec(support, [])
    return out


def _assemble(field, rows, k, matchings):
    """Try to build a forest template from one matching per row."""
    parent_t = list(range(k))
    parent_p = list(range(k))

    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(parent, a, b):
        ra, rb = find(parent, a), find(parent, b)
        if ra != rb:
            parent[ra] = rb

    used = set()
    for matching in matchings:
        for a, b in matching:
            union(parent_p, a, b)
            used.add(a)
            used.add(b)
        us = [a for a, _ in matching]
        vs = [b for _, b in matching]
        for a in us[1:]:
            union(parent_t, us[0], a)
        for b in vs[1:]:
            union(parent_t, vs[0], b)
    # sides of each row must be distinct tuples
    sides = []
    for matching in matchings:
        ru = find(parent_t, matching[0][0])
        rv = find(parent_t, matching[0][1])
        if ru == rv:
            return None
        sides.append((ru, rv))
    # at most one variable per (tuple, position class)
    slot_of = {}
    for v in used:
        key = (find(parent_t, v), find(parent_p, v))
        if key in slot_of:
            return None
        slot_of[key] = v
    # group variables into tuples and position classes
    tuple_vars = {}
    for v in sorted(used):
        tuple_vars.setdefault(find(parent_t, v), []).append(v)
    # connected components of the tuple graph
    comp = {root: root for root in tuple_vars}

    def cfind(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for ru, rv in sides:
        a, b = cfind(ru), cfind(rv)
        if a != b:
            comp[a] = b
    comp_classes = {}
    for root, vars_ in tuple_vars.items():
        c = cfind(root)
        comp_classes.setdefault(c, set()).update(find(parent_p, v) for v in vars_)
    padding = 0
    for root, vars_ in tuple_vars.items():
        padding += len(comp_classes[cfind(root)]) - len(vars_)
    unused = sorted(set(range(k)) - used)
    if padding > len(unused):
        return None
    # explicit slot assignment: one slot per position class, deterministic
    class_slot = {}
    for c, classes in comp_classes.items():
        for i, pc in enumerate(sorted(classes, key=lambda pc: min(
                v for v in used if find(parent_p, v) == pc))):
            class_slot[(c, pc)] = i
    pad_iter = iter(unused)
    tuples = []
    tuple_index = {}
    for root in sorted(tuple_vars, key=lambda r: min(tuple_vars[r])):
        c = cfind(root)
        sigma = len(comp_classes[c])
        slots = [None] * sigma
        for v in tuple_vars[root]:
            slots[class_slot[(c, find(parent_p, v))]] = v
        for i in range(sigma):
            if slots[i] is None:
                slots[i] = next(pad_iter)
        tuple_index[root] = len(tuples)
        tuples.append(tuple(slots))
    for leftover in pad_iter:
        tuples.append((leftover,))
    edges = []
    for ridx, (matching, (ru, rv)) in enumerate(zip(matchings, sides)):
        u, v = tuple_index[ru], tuple_index[rv]
        form = tuple(rows[ridx][var] for var in tuples[u])
        edges.append((u, v, ridx, form))
    template = TemplateGraph(tuples, edges, [tuple(r) for r in rows])
    if not template.verify(field):
        return None
    return template


def detect_tree_template(system: LinearSystem, budget: int = TEMPLATE_BUDGET):
    """Search for a forest graph template over bases of the row space.

    Returns a verified TemplateGraph or None when the (sound, not
    complete) search exhausts; raises SearchBudgetExceeded when it cannot
    finish within the budget, so an absent template is never claimed by a
    truncated search.
    """
    if system.k > 12:
        raise TooManyColumns(f"k = {system.k} > 12")
    field = system.field
    eqs = induced_equations(system)
    tracker = _Budget(budget)
    match_cache = {e.coeffs: _row_matchings(field, e.coeffs) for e in eqs}
    for basis in itertools.combinations(eqs, system.m):
        tracker.spend()
        per_row = [match_cache[e.coeffs] for e in basis]
        if any(not m for m in per_row):
            continue
        rows = [e.coeffs for e in basis]
        if matrix_rank(field, rows) != system.m:
            continue
        for matchings in itertools.product(*per_row):
            tracker.spend()
            template = _assemble(field, rows, system.k, matchings)
            if template is not None:
                return template
    return None


# -------------------------------------------------------------- the ladder

def _odd_length_witness(system, max_dim=WITNESS_DIM_LIMIT):
    """Exact negative-deficit witness A = F_q^n minus the origin, for the
    smallest n where the deficit is already negative."""
    from .counting import PointSet, deficits

    q = system.field.q
    for n in range(1, max_dim + 1):
        if q ** n > WITNESS_SPACE_LIMIT:
            break
        pts = PointSet(system.field, n, encodings=range(1, q ** n))
        try:
            rep = deficits(system, pts)
        except BudgetExceeded:
            break
        if rep.sidorenko_deficit < 0:
            return {
                "n": n,
                "set": "complement_of_origin",
                "size": len(pts),
                "sidorenko_deficit": str(rep.sidorenko_deficit),
            }
    return None


def _ratio_gap_rule(system, shortest_verdicts):
    """Hypotheses of the 2 x 5 ratio-gap criterion: odd q, exactly one
    Sidorenko shortest equation of shape {1,-1,b,-b} with b != +-1, and
    some non-Sidorenko shortest equation not b-coincidental."""
    field = system.field
    if field.p == 2 or system.m != 2 or system.k != 5:
        return None
    sid_eqs = [eq for eq, v in shortest_verdicts if v.sidorenko is Trilean.YES]
    if len(sid_eqs) != 1:
        return None
    nonzero = [v for v in sid_eqs[0].coeffs if v]
    if len(nonzero) != 4:
        return None
    b_candidates = []
    for ref in nonzero:
        inv = field.inv(ref)
        scaled = sorted(field.mul(inv, v) for v in nonzero)
        if 1 not in scaled or field.neg(1) not in scaled:
            continue
        rest = list(scaled)
        rest.remove(1)
        rest.remove(field.neg(1))
        if len(rest) == 2 and field.add(rest[0], rest[1]) == 0 \
                and rest[0] not in (1, field.neg(1)):
            if rest[0] not in b_candidates:
                b_candidates.append(rest[0])
    for b in b_candidates:
        for eq, v in shortest_verdicts:
            if v.sidorenko is Trilean.YES:
                continue
            coeffs = [c for c in eq.coeffs if c]
            if len(coeffs) == 4 and not is_b_coincidental(field, coeffs, b):
                return {
                    "b": b,
                    "sidorenko_equation": list(sid_eqs[0].coeffs),
                    "witness_equation": list(eq.coeffs),
                }
    return None


def _attempt_sign_witness(system, seed, anneal_evals):
    """Build the random-sign function, round it to a set, then try a short
    anneal for an exactly negative common deficit."""
    from .counting import deficits
    from .fourier import build_sign_witness, round_to_set
    from .search import SearchConfig, anneal_search

    f = build_sign_witness(system, seed=seed)
    info = {"function_mean": f.mean, "seed": seed}
    rounded = round_to_set(f, 2, seed=seed)
    if anneal_evals <= 0:
        candidates = [rounded]
    else:
        cfg = SearchConfig(
            n=rounded.n,
            objective="common",
            strategy=("anneal", anneal_evals),
            seed=seed,
            initial=rounded,
        )
        witness = anneal_search(system, cfg)
        candidates = [witness.points]
    for pts in candidates:
        rep = deficits(system, pts)
        if rep.common_deficit < 0:
            info.update(
                n=pts.n,
                size=len(pts),
                common_deficit=str(rep.common_deficit),
                points=[list(p) for p in pts.points()],
            )
            return info
    return None


def classify_system(system: LinearSystem, seed: int = 0,
                    attempt_witness: bool = True,
                    witness_anneal_evals: int = 40_000) -> Verdict:
    """Run every classification rule in order and collect certificates.

    The first rule that decides a property fixes it; later rules only add
    certificates or decide the other property.  Unknown is an honest
    outcome: template search that ran out of budget is recorded, never
    treated as absence.
    """
    if system.m > 4:
        raise TooManyCombinations(f"m = {system.m} > 4")
    if system.k > 12:
        raise TooManyColumns(f"k = {system.k} > 12")
    if is_degenerate(system):
        raise DegenerateSystem(
            "degenerate systems (forcing x_i = x_j) are out of classification scope"
        )
    sid = common = Trilean.UNKNOWN
    certs = []

    def decide_sid(value):
        nonlocal sid
        if sid is Trilean.UNKNOWN:
            sid = value

    def decide_common(value):
        nonlocal common
        if common is Trilean.UNKNOWN:
            common = value

    # rule 1: translation invariance is necessary for Sidorenko
    if not is_translation_invariant(system):
        certs.append(Certificate(Rule.NOT_TRANSLATION_INVARIANT))
        decide_sid(Trilean.NO)

    # rule 2: single equations are fully characterised
    if system.m == 1:
        verdict = classify_single_equation(system.field, system.rref[0])
        certs.extend(verdict.certificates)
        decide_sid(verdict.sidorenko)
        decide_common(verdict.common)

    s, shortest = min_induced_length(system)

    # rule 3: odd minimal induced length forbids Sidorenko
    if s % 2 == 1:
        certs.append(Certificate(Rule.ODD_MIN_LENGTH, {"s": s}))
        witness = _odd_length_witness(system)
        if witness is not None:
            certs.append(Certificate(Rule.NUMERIC_WITNESS, witness))
        decide_sid(Trilean.NO)

    shortest_verdicts = [
        (eq, classify_single_equation(system.field, eq.coeffs)) for eq in shortest
    ]

    # rule 4: even s with every shortest equation uncommon
    if s % 2 == 0 and system.m >= 2 and all(
            v.common is Trilean.NO for _, v in shortest_verdicts):
        certs.append(
            Certificate(
                Rule.ALL_SHORTEST_UNCOMMON,
                {
                    "s": s,
                    "shortest": [list(eq.coeffs) for eq, _ in shortest_verdicts],
                },
            )
        )
        decide_common(Trilean.NO)
        decide_sid(Trilean.NO)

    # rule 5: a forest template certifies Sidorenko (hence common)
    template = None
    try:
        template = detect_tree_template(system)
    except SearchBudgetExceeded:
        certs.append(
            Certificate(Rule.FOREST_TEMPLATE, {"search": "budget_exceeded"})
        )
    if template is not None:
        certs.append(
            Certificate(
                Rule.FOREST_TEMPLATE,
                {
                    "tuples": [list(t) for t in template.tuples],
                    "edges": [
                        {"u": u, "v": v, "row": r, "form": list(fm)}
                        for u, v, r, fm in template.edges
                    ],
                    "rows": [list(r) for r in template.rows],
                },
            )
        )
        decide_sid(Trilean.YES)
        decide_common(Trilean.YES)

    # rule 6: ratio-gap criterion for 2 x 5 systems with s = 4
    if sid is Trilean.UNKNOWN and s == 4 and s % 2 == 0:
        gap = _ratio_gap_rule(system, shortest_verdicts)
        if gap is not None:
            certs.append(Certificate(Rule.NONCOINCIDENTAL_SHORTEST, gap))
            decide_sid(Trilean.NO)
            if attempt_witness:
                try:
                    info = _attempt_sign_witness(
                        system, seed, witness_anneal_evals)
                except (HypothesisViolated, RetriesExhausted, BudgetExceeded):
                    info = None
                if info is not None:
                    certs.append(Certificate(Rule.NUMERIC_WITNESS, info))
                    decide_common(Trilean.NO)

    # stored results for systems whose classification is known
    from .knownsystems import lookup

    known = lookup(system)
    if known is not None:
        if known.common and common is not Trilean.NO:
            certs.append(Certificate(Rule.FOURIER_COMMON, known.common_payload))
            decide_common(Trilean.YES)
        if known.witness is not None:
            from .counting import PointSet, deficits

            pts = PointSet(system.field, known.witness_dim,
                           encodings=known.witness)
            rep = deficits(system, pts)
            if rep.sidorenko_deficit < 0:
                certs.append(
                    Certificate(
                        Rule.NUMERIC_WITNESS,
                        {
                            "n": pts.n,
                            "size": len(pts),
                            "points": [list(p) for p in pts.points()],
                            "sidorenko_deficit": str(rep.sidorenko_deficit),
                        },
                    )
                )
                decide_sid(Trilean.NO)

    return Verdict(sid, common, certs)
