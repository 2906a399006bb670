"""The directed Pauli graph and its orbit taxonomy.

Vertices are the N^2 - 1 nonzero Pauli indices; an ordered pair of
distinct vertices is an edge when the two Paulis commute and a non-edge
when they anticommute.  Writing the pair ((a,b),(c,d)) as a 2x2 field
matrix, commutation is Tr(det) = Tr(ad + bc) = 0, and the graph is
strongly regular with parameters

    (N^2 - 1,  N^2/2 - 2,  N^2/4 - 3,  N^2/4 - 1).

Edges split into type 1 (det = 0: both vertices in the same maximal
commutative subgroup) and type 2 (det != 0 with trace 0).  Under the
diagonal right action of SL(2, 2^m) the complete orbit invariant is the
determinant for non-edges and type-2 edges, and the row ratio for
type-1 edges; the orbit census is closed-form:

    N/2        non-edge orbits, size (N^2-1)N   (trace-1 determinants)
    (N-2)/2    type-2 orbits,   size (N^2-1)N   (nonzero trace-0 dets)
    N-2        type-1 orbits,   size  N^2-1     (ratios in F \ {0,1})

``census`` verifies all of this by exhaustive enumeration for m <= 6
and reports the closed forms alone beyond that.
"""

from __future__ import annotations

import enum
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from .gf2m import FieldContext
from .pauli import PairLike, PauliIndex

__all__ = [
    "EdgeKind",
    "PauliPair",
    "OrbitInvariant",
    "classify_pair",
    "pair_determinant",
    "orbit_invariant",
    "classify_vec",
    "orbit_invariant_vec",
    "srg_parameters",
    "srg_check",
    "orbit_states",
    "edge_states",
    "orbit_representative",
    "closed_form_counts",
    "CensusReport",
    "census",
    "parse_census",
    "CENSUS_MAX_M",
]

CENSUS_MAX_M = 6


class EdgeKind(enum.IntEnum):
    NON_EDGE = 0
    TYPE1 = 1
    TYPE2 = 2


class PauliPair(NamedTuple):
    """Ordered pair of distinct nonzero Pauli indices (a 2x2 field matrix)."""

    first: PauliIndex
    second: PauliIndex


class OrbitInvariant(NamedTuple):
    """Complete invariant of the diagonal SL(2) right action on pairs."""

    kind: EdgeKind
    value: int


def _validate(pair: PauliPair) -> Tuple[int, int, int, int]:
    (a, b), (c, d) = pair
    if (a == 0 and b == 0) or (c == 0 and d == 0):
        raise ValueError("pair entries must be nonzero Pauli indices")
    if (a, b) == (c, d):
        raise ValueError("pair entries must be distinct")
    return a, b, c, d


def pair_determinant(ctx: FieldContext, pair: PauliPair) -> int:
    """det(a b; c d) = ad + bc, the field-valued commutation witness."""
    a, b, c, d = _validate(pair)
    return ctx.mul(a, d) ^ ctx.mul(b, c)


def classify_pair(ctx: FieldContext, pair: PauliPair) -> EdgeKind:
    det = pair_determinant(ctx, pair)
    if ctx.trace(det) == 1:
        return EdgeKind.NON_EDGE
    return EdgeKind.TYPE1 if det == 0 else EdgeKind.TYPE2


def orbit_invariant(ctx: FieldContext, pair: PauliPair) -> OrbitInvariant:
    """(kind, det) for non-edges and type-2 edges; (TYPE1, a/c or b/d) else."""
    a, b, c, d = _validate(pair)
    det = ctx.mul(a, d) ^ ctx.mul(b, c)
    if ctx.trace(det) == 1:
        return OrbitInvariant(EdgeKind.NON_EDGE, det)
    if det != 0:
        return OrbitInvariant(EdgeKind.TYPE2, det)
    ratio = ctx.div(a, c) if c != 0 else ctx.div(b, d)
    return OrbitInvariant(EdgeKind.TYPE1, ratio)


def classify_vec(ctx: FieldContext, a, b, c, d):
    """Vectorized (kind, value) arrays for pair components a, b, c, d."""
    mul = ctx.np_table("mul")
    tr = ctx.np_table("trace")
    div = ctx.np_table("div")
    det = mul[a, d] ^ mul[b, c]
    anti = tr[det] == 1
    type1 = (det == 0) & ~anti
    kind = np.where(anti, int(EdgeKind.NON_EDGE),
                    np.where(type1, int(EdgeKind.TYPE1), int(EdgeKind.TYPE2)))
    c_nz = c != 0
    ratio = np.where(c_nz, div[a, np.where(c_nz, c, 1)],
                     div[b, np.where(c_nz, 1, d)])
    value = np.where(type1, ratio, det)
    return kind.astype(np.uint8), value.astype(np.uint16)


def orbit_invariant_vec(ctx: FieldContext, a, b, c, d):
    """Single packed uint32 key kind * 2^16 + value per pair component set."""
    kind, value = classify_vec(ctx, a, b, c, d)
    return kind.astype(np.uint32) * 65536 + value


def srg_parameters(m: int) -> Tuple[int, int, int, int]:
    """(n, t, lambda, mu) = (N^2-1, N^2/2-2, N^2/4-3, N^2/4-1)."""
    if m < 2:
        raise ValueError("m must be at least 2")
    nsq = 1 << (2 * m)
    return (nsq - 1, nsq // 2 - 2, nsq // 4 - 3, nsq // 4 - 1)


def srg_check(ctx: FieldContext) -> Tuple[int, int, int, int]:
    """Strong-regularity parameters measured on the explicit adjacency matrix.

    Raises if the graph is not strongly regular (non-constant degree or
    common-neighbour counts).
    """
    if ctx.m > CENSUS_MAX_M:
        raise ValueError(f"exhaustive graph construction capped at m = {CENSUS_MAX_M}")
    n = ctx.order
    v = np.arange(1, n * n, dtype=np.uint32)
    a, b = (v & (n - 1)).astype(np.uint16), (v >> ctx.m).astype(np.uint16)
    mul = ctx.np_table("mul")
    tr = ctx.np_table("trace")
    det = mul[a[:, None], b[None, :]] ^ mul[b[:, None], a[None, :]]
    adj = tr[det] == 0
    np.fill_diagonal(adj, False)
    degrees = adj.sum(axis=1)
    if degrees.min() != degrees.max():
        raise ValueError("graph is not regular")
    common = (adj.astype(np.int32) @ adj.astype(np.int32))
    np.fill_diagonal(common, -1)
    lam_set = np.unique(common[adj])
    mu_set = np.unique(common[~adj & (common >= 0)])
    if len(lam_set) != 1 or len(mu_set) != 1:
        raise ValueError("graph is not strongly regular")
    return (len(v), int(degrees[0]), int(lam_set[0]), int(mu_set[0]))


# --- canonical orbit state orderings ---


def orbit_states(ctx: FieldContext, kind: EdgeKind) -> List[OrbitInvariant]:
    """Orbit invariants of one kind, ordered by discrete log of the value."""
    if kind == EdgeKind.NON_EDGE:
        vals = [x for x in ctx.nonzero() if ctx.trace(x) == 1]
    elif kind == EdgeKind.TYPE2:
        vals = [x for x in ctx.nonzero() if x != 0 and ctx.trace(x) == 0]
    else:
        vals = [x for x in ctx.elements() if x not in (0, 1)]
    vals.sort(key=ctx.log)
    return [OrbitInvariant(kind, v) for v in vals]


def edge_states(ctx: FieldContext) -> List[OrbitInvariant]:
    """Edge-chain state order: the N-2 type-1 orbits, then the (N-2)/2 type-2."""
    return orbit_states(ctx, EdgeKind.TYPE1) + orbit_states(ctx, EdgeKind.TYPE2)


def orbit_representative(ctx: FieldContext, inv: OrbitInvariant) -> PauliPair:
    """One explicit pair with the given invariant."""
    kind, v = inv
    if kind == EdgeKind.TYPE1:
        if v in (0, 1):
            raise ValueError("type-1 ratio must avoid 0 and 1")
        return PauliPair(PauliIndex(v, 0), PauliIndex(1, 0))
    if kind == EdgeKind.NON_EDGE and ctx.trace(v) != 1:
        raise ValueError("non-edge determinant must have trace 1")
    if kind == EdgeKind.TYPE2 and (v == 0 or ctx.trace(v) != 0):
        raise ValueError("type-2 determinant must be nonzero with trace 0")
    return PauliPair(PauliIndex(1, 0), PauliIndex(0, v))


# --- census ---


def closed_form_counts(m: int) -> Dict[str, int]:
    n = 1 << m
    nsq = n * n
    return {
        "vertices": nsq - 1,
        "directed_edges": (nsq - 1) * (nsq - 4) // 2,
        "type1_edges": (nsq - 1) * (n - 2),
        "type2_edges": n * (nsq - 1) * (n - 2) // 2,
        "non_edges": (nsq - 1) * nsq // 2,
        "non_edge_orbits": n // 2,
        "non_edge_orbit_size": (nsq - 1) * n,
        "type2_orbits": (n - 2) // 2,
        "type2_orbit_size": (nsq - 1) * n,
        "type1_orbits": n - 2,
        "type1_orbit_size": nsq - 1,
    }


@dataclass
class CensusReport:
    m: int
    exhaustive: bool
    closed_form: Dict[str, int]
    srg: Tuple[int, int, int, int]
    enumerated: Optional[Dict[str, int]] = None
    orbit_sizes: Optional[Dict[OrbitInvariant, int]] = None

    _KIND_NAMES = {EdgeKind.NON_EDGE: "non_edge", EdgeKind.TYPE1: "type1",
                   EdgeKind.TYPE2: "type2"}

    def matches_closed_form(self) -> bool:
        """True when every enumerated count equals its closed-form value."""
        if not self.exhaustive:
            return False
        for key, expected in self.closed_form.items():
            if key.endswith("_orbits") or key.endswith("_orbit_size"):
                continue
            if self.enumerated.get(key) != expected:
                return False
        for kind, name in self._KIND_NAMES.items():
            sizes = [s for inv, s in self.orbit_sizes.items() if inv.kind == kind]
            if len(sizes) != self.closed_form[f"{name}_orbits"]:
                return False
            if set(sizes) != {self.closed_form[f"{name}_orbit_size"]}:
                return False
        return True

    def to_text(self) -> str:
        """Documented key-value format: one `key = value` line per datum.

        Keys: `m`, `exhaustive`, `srg` (comma-separated 4-tuple),
        `closed_form.<count>`, `enumerated.<count>` (exhaustive mode) and
        `orbit_size.<kind>.<hex value>` (exhaustive mode).  Lines starting
        with `#` are comments.
        """
        lines = ["# pauli graph census",
                 f"m = {self.m}",
                 f"exhaustive = {'true' if self.exhaustive else 'false'}",
                 "srg = " + ",".join(str(x) for x in self.srg)]
        for key in sorted(self.closed_form):
            lines.append(f"closed_form.{key} = {self.closed_form[key]}")
        if self.exhaustive:
            for key in sorted(self.enumerated):
                lines.append(f"enumerated.{key} = {self.enumerated[key]}")
            for inv in sorted(self.orbit_sizes, key=lambda i: (i.kind, i.value)):
                name = self._KIND_NAMES[inv.kind]
                lines.append(f"orbit_size.{name}.{inv.value:#x} = {self.orbit_sizes[inv]}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "m": self.m,
            "exhaustive": self.exhaustive,
            "srg": list(self.srg),
            "closed_form": self.closed_form,
        }
        if self.exhaustive:
            payload["enumerated"] = self.enumerated
            payload["orbit_sizes"] = {
                f"{self._KIND_NAMES[inv.kind]}.{inv.value:#x}": size
                for inv, size in sorted(self.orbit_sizes.items())
            }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


_NAME_KINDS = {"non_edge": EdgeKind.NON_EDGE, "type1": EdgeKind.TYPE1,
               "type2": EdgeKind.TYPE2}


def parse_census(text: str) -> CensusReport:
    """Inverse of CensusReport.to_text()."""
    fields: Dict[str, str] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    m = int(fields.pop("m"))
    exhaustive = fields.pop("exhaustive") == "true"
    srg = tuple(int(x) for x in fields.pop("srg").split(","))
    closed_form: Dict[str, int] = {}
    enumerated: Dict[str, int] = {}
    orbit_sizes: Dict[OrbitInvariant, int] = {}
    for key, value in fields.items():
        if key.startswith("closed_form."):
            closed_form[key[len("closed_form."):]] = int(value)
        elif key.startswith("enumerated."):
            enumerated[key[len("enumerated."):]] = int(value)
        elif key.startswith("orbit_size."):
            _, name, hexval = key.split(".")
            orbit_sizes[OrbitInvariant(_NAME_KINDS[name], int(hexval, 16))] = int(value)
        else:
            raise ValueError(f"unrecognized census key: {key}")
    return CensusReport(m=m, exhaustive=exhaustive, closed_form=closed_form,
                        srg=srg, enumerated=enumerated or None,
                        orbit_sizes=orbit_sizes or None)


def _census_chunk(ctx: FieldContext, lo: int, hi: int) -> np.ndarray:
    """Histogram of packed orbit keys over first vertices in [lo, hi)."""
    n = ctx.order
    first = np.arange(lo, hi, dtype=np.uint32)
    second = np.arange(1, n * n, dtype=np.uint32)
    a = (first & (n - 1)).astype(np.uint16)[:, None]
    b = (first >> ctx.m).astype(np.uint16)[:, None]
    c = (second & (n - 1)).astype(np.uint16)[None, :]
    d = (second >> ctx.m).astype(np.uint16)[None, :]
    keys = orbit_invariant_vec(ctx, a, b, c, d)
    keys[first[:, None] == second[None, :]] = 3 * 65536  # drop diagonal
    return np.bincount(keys.ravel(), minlength=3 * 65536 + 1)


def census(ctx: FieldContext, exhaustive: Optional[bool] = None,
           threads: int = 1) -> CensusReport:
    """Count edges, non-edges and orbit sizes; enumerate when m <= 6.

    With ``exhaustive=None`` enumeration is performed exactly when the
    state space is within the cap; requesting it explicitly beyond the
    cap raises.
    """
    if exhaustive is None:
        exhaustive = ctx.m <= CENSUS_MAX_M
    elif exhaustive and ctx.m > CENSUS_MAX_M:
        raise ValueError(
            f"exhaustive census capped at m = {CENSUS_MAX_M}; "
            f"use exhaustive=False for the formula-only report")
    report = CensusReport(m=ctx.m, exhaustive=exhaustive,
                          closed_form=closed_form_counts(ctx.m),
                          srg=srg_parameters(ctx.m))
    if not exhaustive:
        return report

    n = ctx.order
    chunk = max(1, (1 << 21) // (n * n))
    ranges = [(lo, min(lo + chunk, n * n)) for lo in range(1, n * n, chunk)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hists = list(pool.map(lambda r: _census_chunk(ctx, *r), ranges))
        hist = np.sum(hists, axis=0)
    else:
        hist = np.zeros(3 * 65536 + 1, dtype=np.int64)
        for lo, hi in ranges:
            hist += _census_chunk(ctx, lo, hi)

    orbit_sizes: Dict[OrbitInvariant, int] = {}
    per_kind = {k: 0 for k in EdgeKind}
    for kind in EdgeKind:
        block = hist[int(kind) * 65536:(int(kind) + 1) * 65536]
        for value in np.nonzero(block)[0]:
            orbit_sizes[OrbitInvariant(kind, int(value))] = int(block[value])
            per_kind[kind] += int(block[value])
    report.enumerated = {
        "vertices": n * n - 1,
        "directed_edges": per_kind[EdgeKind.TYPE1] + per_kind[EdgeKind.TYPE2],
        "type1_edges": per_kind[EdgeKind.TYPE1],
        "type2_edges": per_kind[EdgeKind.TYPE2],
        "non_edges": per_kind[EdgeKind.NON_EDGE],
    }
    report.orbit_sizes = orbit_sizes
    return report
