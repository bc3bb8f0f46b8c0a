"""Built-in systems with established classifications, plus stored
counterexample sets for results that no structural rule reproduces.

Integer coefficient matrices are reduced into whichever field they are
instantiated over; registry entries carry a predicate saying for which
fields the stored facts apply.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import FieldSpec, make_field
from .linalg import LinearSystem, normalize

# 2 x 5 system, s = 4, three Sidorenko shortest equations.  Common over
# every prime field with more than 3 elements (the shortest-equation tau
# sum is dominated by its square terms via Cauchy-Schwarz), yet an
# explicit 8-point subset of F_5^2 beats the Sidorenko benchmark.
MIXED_25_ROWS = [[1, 0, -1, 2, -2], [0, 1, 2, -1, -2]]
MIXED_25_WITNESS_F5 = [(0, 0), (0, 3), (1, 2), (3, 0), (3, 3), (4, 0), (4, 1), (4, 2)]

# 2 x 5 system, s = 4, containing the additive quadruple x1-x2+x3-x4.
# Common over every prime power whose characteristic is not 2 or 3: the
# per-frequency part of the tau sum factors into squares.
QUADRUPLE_25_ROWS = [[1, -1, 1, -1, 0], [1, 2, -1, 0, -2]]

# Four-term arithmetic progression as a 2 x 4 system; s = 3.
FOUR_AP_ROWS = [[-1, 1, -1, 1], [-1, 3, 1, -3]]

# A 2 x 5 instance over F_11 meeting the ratio-gap hypotheses: exactly one
# Sidorenko shortest equation, of shape {1,-1,2,-2}, and a shortest
# equation {1,1,1,8} with no coefficient ratio in {2,-2,1/2,-1/2}.
RATIO_GAP_25_F11_ROWS = [[0, 1, -1, 2, -2], [1, 0, 1, 1, 8]]
RATIO_GAP_25_F11_Q = 11


@dataclass(frozen=True)
class KnownEntry:
    name: str
    rows: tuple
    common: bool
    common_payload: dict
    field_applies: object            # predicate FieldSpec -> bool
    witness: tuple | None = None     # encodings over the witness field
    witness_dim: int = 0
    witness_field: tuple | None = None  # (p, e) the witness lives over


def _encode_points(q, pts):
    return tuple(a * q + b for a, b in pts)


_REGISTRY = (
    KnownEntry(
        name="mixed-2x5",
        rows=tuple(tuple(r) for r in MIXED_25_ROWS),
        common=True,
        common_payload={
            "argument": "cauchy_schwarz",
            "detail": "cross term bounded by the square terms of the "
                      "shortest-equation tau sum",
            "fields": "prime q > 3",
        },
        field_applies=lambda f: f.e == 1 and f.p > 3,
        witness=_encode_points(5, MIXED_25_WITNESS_F5),
        witness_dim=2,
        witness_field=(5, 1),
    ),
    KnownEntry(
        name="quadruple-2x5",
        rows=tuple(tuple(r) for r in QUADRUPLE_25_ROWS),
        common=True,
        common_payload={
            "argument": "square_factorisation",
            "detail": "per-frequency part of the shortest-equation tau sum "
                      "is a sum of squares",
            "fields": "characteristic not 2 or 3",
        },
        field_applies=lambda f: f.p not in (2, 3),
    ),
)


@dataclass(frozen=True)
class KnownFacts:
    name: str
    common: bool
    common_payload: dict
    witness: tuple | None
    witness_dim: int


def lookup(system: LinearSystem):
    """Stored facts applying to this system over its field, or None."""
    for entry in _REGISTRY:
        if not entry.field_applies(system.field):
            continue
        try:
            ref, _ = normalize(system.field, [list(r) for r in entry.rows])
        except Exception:
            continue
        if ref.canonical_key() != system.canonical_key():
            continue
        witness = None
        dim = 0
        if entry.witness is not None and entry.witness_field == (
                system.field.p, system.field.e):
            witness = entry.witness
            dim = entry.witness_dim
        return KnownFacts(entry.name, entry.common, dict(entry.common_payload),
                          witness, dim)
    return None


def mixed_25(field: FieldSpec | None = None) -> LinearSystem:
    field = field or make_field(5)
    return normalize(field, MIXED_25_ROWS)[0]


def quadruple_25(field: FieldSpec | None = None) -> LinearSystem:
    field = field or make_field(5)
    return normalize(field, QUADRUPLE_25_ROWS)[0]


def four_ap(field: FieldSpec | None = None) -> LinearSystem:
    field = field or make_field(5)
    return normalize(field, FOUR_AP_ROWS)[0]


def ratio_gap_25_f11() -> LinearSystem:
    return normalize(make_field(RATIO_GAP_25_F11_Q), RATIO_GAP_25_F11_ROWS)[0]
