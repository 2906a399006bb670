"""Orbit-level Markov chains of the random-transvection walk.

One step applies a uniformly random nonzero transvection Z_h to both
members of an ordered Pauli pair.  Z_h is symplectic, so commutation is
preserved and the walk splits into an edge chain and a non-edge chain.
Because the step is followed (conceptually) by a uniform PSL element,
which randomizes within each orbit, the walk projects exactly onto the
orbit invariants; the projected transition matrices are

    Q1 = [(N^2-4) I + 6N J] / (4(N^2-1))              (non-edge orbits)

    Q0 = [ (N^2-4) I_{M1}        N R^T             ]
         [ R                     (N^2-4) I + 6N J  ] / (4(N^2-1))

with M1 = N-2 type-1 states first, M2 = (N-2)/2 type-2 states after,
R row sums 6N and column sums 3N.  All matrices are held as integer
numerators over the single denominator 4(N^2-1); every claimed identity
is checked in exact integer arithmetic, with floating point entering
only through the eigensolver.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .gf2m import FieldContext
from .graph import (EdgeKind, OrbitInvariant, PauliPair, edge_states,
                    orbit_invariant_vec, orbit_representative, orbit_states)
from .pauli import PauliIndex, transvection_apply_vec

__all__ = [
    "TransitionMatrix",
    "parse_csv_probs",
    "SpectralReport",
    "SingularReport",
    "Q0StructureReport",
    "q1_closed_form",
    "transvection_counts",
    "q_empirical",
    "extract_r",
    "q0_structure_check",
    "stationary_weights",
    "stationary_check",
    "w2_eigenvector_check",
    "lambda_q1_closed",
    "lambda_q0_bound",
    "spectral_report",
    "singular_check_R",
    "mixing_time_bound",
    "mixing_time_report",
    "tv_curve",
    "tv_curve_exact",
    "full_chain",
    "lump_chain",
    "FULL_CHAIN_MAX_M",
    "EMPIRICAL_MAX_M",
]

FULL_CHAIN_MAX_M = 3
EMPIRICAL_MAX_M = 8

State = Union[OrbitInvariant, PauliPair]


@dataclass
class TransitionMatrix:
    """Row-stochastic matrix as integer numerators over one denominator."""

    states: List[State]
    numerators: np.ndarray
    denominator: int

    def __post_init__(self) -> None:
        self.numerators = np.asarray(self.numerators, dtype=np.int64)
        k = len(self.states)
        if self.numerators.shape != (k, k):
            raise ValueError("numerator matrix shape does not match states")
        if (self.numerators < 0).any():
            raise ValueError("negative transition numerator")
        sums = self.numerators.sum(axis=1)
        if not (sums == self.denominator).all():
            raise ValueError(f"rows must sum to {self.denominator}, got {sums}")

    @property
    def probs(self) -> np.ndarray:
        """Floating-point view."""
        return self.numerators / float(self.denominator)

    def state_index(self) -> Dict[State, int]:
        return {s: i for i, s in enumerate(self.states)}

    # -- serialization --

    @staticmethod
    def _state_obj(state: State):
        if isinstance(state, OrbitInvariant):
            return {"kind": state.kind.name, "value": format(state.value, "#x")}
        (a, b), (c, d) = state
        return [[format(a, "#x"), format(b, "#x")], [format(c, "#x"), format(d, "#x")]]

    @staticmethod
    def _state_from_obj(obj) -> State:
        if isinstance(obj, dict):
            return OrbitInvariant(EdgeKind[obj["kind"]], int(obj["value"], 16))
        (a, b), (c, d) = obj
        return PauliPair(PauliIndex(int(a, 16), int(b, 16)),
                         PauliIndex(int(c, 16), int(d, 16)))

    def to_json(self) -> str:
        return json.dumps({
            "denominator": self.denominator,
            "states": [self._state_obj(s) for s in self.states],
            "numerators": self.numerators.tolist(),
        }, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "TransitionMatrix":
        obj = json.loads(text)
        return cls(states=[cls._state_from_obj(s) for s in obj["states"]],
                   numerators=np.asarray(obj["numerators"], dtype=np.int64),
                   denominator=int(obj["denominator"]))

    def to_csv(self) -> str:
        """Floating view with one header row of state names."""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([_state_name(s) for s in self.states])
        for row in self.probs:
            writer.writerow([repr(float(x)) for x in row])
        return out.getvalue()


def _state_name(state: State) -> str:
    if isinstance(state, OrbitInvariant):
        return f"{state.kind.name}:{state.value:#x}"
    (a, b), (c, d) = state
    return f"pair:{a:#x},{b:#x};{c:#x},{d:#x}"


def parse_csv_probs(text: str) -> Tuple[List[str], np.ndarray]:
    """Inverse of TransitionMatrix.to_csv up to the floating view."""
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], np.array([[float(x) for x in row] for row in rows[1:]])


# --- closed forms ---


def q1_closed_form(ctx: FieldContext) -> TransitionMatrix:
    """Non-edge orbit chain: [(N^2-4) I + 6N J] / (4(N^2-1))."""
    n = ctx.order
    k = n // 2
    numerators = (n * n - 4) * np.eye(k, dtype=np.int64) + 6 * n * np.ones((k, k), dtype=np.int64)
    return TransitionMatrix(states=orbit_states(ctx, EdgeKind.NON_EDGE),
                            numerators=numerators,
                            denominator=4 * (n * n - 1))


def lambda_q1_closed(m: int) -> float:
    """Second eigenvalue of Q1: (N^2-4)/(4(N^2-1)), multiplicity N/2 - 1."""
    nsq = 1 << (2 * m)
    return (nsq - 4) / (4 * (nsq - 1))


def lambda_q0_bound(m: int) -> float:
    """Analytic upper bound on the second eigenvalue of Q0:
    (N^2 - 4 + 3N sqrt(2N)) / (4(N^2-1))."""
    n = 1 << m
    return (n * n - 4 + 3 * n * math.sqrt(2 * n)) / (4 * (n * n - 1))


# --- empirical chains by transvection enumeration ---


def _chain_states(ctx: FieldContext, chain: str) -> List[OrbitInvariant]:
    if chain == "nonedges":
        return orbit_states(ctx, EdgeKind.NON_EDGE)
    if chain == "edges":
        return edge_states(ctx)
    raise ValueError(f"chain must be 'edges' or 'nonedges', got {chain!r}")


def _row_counts(ctx: FieldContext, pair: PauliPair,
                key_to_col: Dict[int, int]) -> np.ndarray:
    """Counts of the N^2-1 transvection images of one pair, by orbit column."""
    n = ctx.order
    h = np.arange(1, n * n, dtype=np.uint32)
    h1, h2 = (h & (n - 1)).astype(np.uint16), (h >> ctx.m).astype(np.uint16)
    (a, b), (c, d) = pair
    ia, ib = transvection_apply_vec(ctx, h1, h2, np.uint16(a), np.uint16(b))
    ic, id_ = transvection_apply_vec(ctx, h1, h2, np.uint16(c), np.uint16(d))
    keys = orbit_invariant_vec(ctx, ia, ib, ic, id_)
    counts = np.bincount(keys, minlength=3 * 65536)
    row = np.zeros(len(key_to_col), dtype=np.int64)
    for key in np.nonzero(counts)[0]:
        row[key_to_col[int(key)]] = counts[key]
    return row


def _state_key(inv: OrbitInvariant) -> int:
    return int(inv.kind) * 65536 + inv.value


def transvection_counts(ctx: FieldContext, chain: str,
                        representatives: Optional[Sequence[PauliPair]] = None
                        ) -> Tuple[List[OrbitInvariant], np.ndarray]:
    """Raw per-orbit transvection image counts; each row sums to N^2 - 1.

    ``representatives`` overrides the default orbit representatives (used
    to verify that the reduction to orbits is representative-independent).
    """
    if ctx.m > EMPIRICAL_MAX_M:
        raise ValueError(f"orbit chain enumeration capped at m = {EMPIRICAL_MAX_M}")
    states = _chain_states(ctx, chain)
    key_to_col = {_state_key(s): i for i, s in enumerate(states)}
    if representatives is None:
        representatives = [orbit_representative(ctx, s) for s in states]
    counts = np.stack([_row_counts(ctx, rep, key_to_col) for rep in representatives])
    return states, counts


def q_empirical(ctx: FieldContext, chain: str) -> TransitionMatrix:
    """Orbit chain built by enumerating all N^2 - 1 transvections."""
    states, counts = transvection_counts(ctx, chain)
    return TransitionMatrix(states=states, numerators=4 * counts,
                            denominator=4 * (ctx.order ** 2 - 1))


# --- Q0 structure ---


def extract_r(tm: TransitionMatrix) -> np.ndarray:
    """The R block: numerators of the type-2 -> type-1 transitions."""
    m1 = sum(1 for s in tm.states if s.kind == EdgeKind.TYPE1)
    return tm.numerators[m1:, :m1].copy()


@dataclass
class Q0StructureReport:
    m: int
    r_matrix: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    failures: List[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> str:
        return json.dumps({
            "m": self.m,
            "ok": self.ok,
            "r_matrix": self.r_matrix.tolist(),
            "row_sums": self.row_sums.tolist(),
            "col_sums": self.col_sums.tolist(),
            "failures": self.failures,
        }, sort_keys=True) + "\n"


def q0_structure_check(tm: TransitionMatrix) -> Q0StructureReport:
    """Verify the block anatomy of an empirical edge chain."""
    kinds = [s.kind for s in tm.states]
    m1 = kinds.count(EdgeKind.TYPE1)
    m2 = kinds.count(EdgeKind.TYPE2)
    n = 2 * m2 + 2
    failures: List[str] = []
    if kinds != [EdgeKind.TYPE1] * m1 + [EdgeKind.TYPE2] * m2:
        failures.append("states are not ordered type-1 block then type-2 block")
    if m1 != n - 2 or tm.denominator != 4 * (n * n - 1):
        failures.append(f"state counts ({m1}, {m2}) do not fit any field size")
    q = tm.numerators
    r = q[m1:, :m1]
    upper_left = q[:m1, :m1]
    if not np.array_equal(upper_left, (n * n - 4) * np.eye(m1, dtype=np.int64)):
        failures.append(f"upper-left block is not (N^2-4) I: {upper_left.tolist()}")
    expected_lr = (n * n - 4) * np.eye(m2, dtype=np.int64) + 6 * n * np.ones((m2, m2), dtype=np.int64)
    if not np.array_equal(q[m1:, m1:], expected_lr):
        failures.append(f"lower-right block is not (N^2-4) I + 6N J: {q[m1:, m1:].tolist()}")
    if not np.array_equal(q[:m1, m1:], n * r.T):
        failures.append("upper-right block is not N R^T")
    row_sums = r.sum(axis=1)
    col_sums = r.sum(axis=0)
    if not (row_sums == 6 * n).all():
        failures.append(f"R row sums are not 6N: {row_sums.tolist()}")
    if not (col_sums == 3 * n).all():
        failures.append(f"R column sums are not 3N: {col_sums.tolist()}")
    return Q0StructureReport(m=tm_field_degree(tm), r_matrix=r,
                             row_sums=row_sums, col_sums=col_sums,
                             failures=failures)


def tm_field_degree(tm: TransitionMatrix) -> int:
    """Recover m from the denominator 4(N^2-1)."""
    nsq = tm.denominator // 4 + 1
    return nsq.bit_length() // 2


# --- exact stationary / eigenvector identities ---


def stationary_weights(tm: TransitionMatrix) -> np.ndarray:
    """Integer left fixed vector: orbit sizes up to scale.

    Non-edge chain: all ones.  Edge chain: 1 per type-1 state, N per
    type-2 state (type-2 orbits are N times larger).
    """
    n = int(math.isqrt(tm.denominator // 4 + 1))
    w = np.array([1 if getattr(s, "kind", None) != EdgeKind.TYPE2 else n
                  for s in tm.states], dtype=np.int64)
    return w


def stationary_check(tm: TransitionMatrix) -> bool:
    """w Q = w exactly in integers for the stationary weight vector."""
    w = stationary_weights(tm)
    return bool(np.array_equal(w @ tm.numerators, tm.denominator * w))


def w2_eigenvector_check(tm: TransitionMatrix) -> bool:
    """[1,..,1,-2,..,-2] Q0 = ((N^2-6N-4)/(4(N^2-1))) [1,..,1,-2,..,-2] exactly."""
    kinds = [s.kind for s in tm.states]
    m1 = kinds.count(EdgeKind.TYPE1)
    m2 = kinds.count(EdgeKind.TYPE2)
    n = 2 * m2 + 2
    w2 = np.array([1] * m1 + [-2] * m2, dtype=np.int64)
    return bool(np.array_equal(w2 @ tm.numerators, (n * n - 6 * n - 4) * w2))


# --- spectra ---


@dataclass
class SpectralReport:
    eigenvalues: np.ndarray  # sorted descending by real part
    lambda2: float
    lambda_min: float
    gap: float
    stationary: np.ndarray

    def to_json(self) -> str:
        return json.dumps({
            "eigenvalues_real": [float(x.real) for x in self.eigenvalues],
            "eigenvalues_imag": [float(x.imag) for x in self.eigenvalues],
            "lambda2": self.lambda2,
            "lambda_min": self.lambda_min,
            "gap": self.gap,
            "stationary": self.stationary.tolist(),
        }, sort_keys=True) + "\n"


def spectral_report(tm: TransitionMatrix, tol: float = 1e-10) -> SpectralReport:
    q = tm.probs
    try:
        eigvals, left = np.linalg.eig(q.T)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"eigensolver failed on {q.shape} matrix: {exc}") from exc
    order = np.argsort(-eigvals.real)
    eigvals = eigvals[order]
    left = left[:, order]
    if abs(eigvals[0] - 1.0) > math.sqrt(tol):
        raise ValueError(f"leading eigenvalue {eigvals[0]} is not 1")
    pi = left[:, 0].real
    pi = pi / pi.sum()
    if pi.min() < -tol:
        raise ValueError(f"stationary distribution has negative mass: {pi}")
    pi = np.clip(pi, 0.0, None)
    pi = pi / pi.sum()
    residual = float(np.abs(pi @ q - pi).max())
    if residual > math.sqrt(tol):
        raise ValueError(f"stationary residual {residual} too large")
    lambda2 = float(eigvals[1].real) if len(eigvals) > 1 else float("-inf")
    lambda_min = float(eigvals[-1].real)
    return SpectralReport(eigenvalues=eigvals,
                          lambda2=lambda2,
                          lambda_min=lambda_min,
                          gap=min(1.0 - lambda2, 1.0 + lambda_min),
                          stationary=pi)


@dataclass
class SingularReport:
    sigma_max: float
    bound: float
    equality: bool

    @property
    def ok(self) -> bool:
        return self.sigma_max <= self.bound + 1e-9


def singular_check_R(r: np.ndarray, m: int) -> SingularReport:
    """sigma_max(R) <= 3 sqrt(2) N, with equality flagged when attained."""
    n = 1 << m
    sigma = float(np.linalg.svd(r.astype(float), compute_uv=False)[0])
    bound = 3 * math.sqrt(2) * n
    return SingularReport(sigma_max=sigma, bound=bound,
                          equality=abs(sigma - bound) <= 1e-9)


# --- mixing time ---


def mixing_time_bound(m: int, eps: float) -> int:
    """ceil((1/Delta) ln(N^3 (N^2-4) / (2 eps))) with the analytic Delta.

    Delta = 1 - lambda_q0_bound(m); the ln argument folds the worst-case
    start through the minimum stationary mass 2/(N^2-4) at accuracy
    eps/N^3.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    n = 1 << m
    delta = 1.0 - lambda_q0_bound(m)
    return math.ceil(math.log(n ** 3 * (n * n - 4) / (2 * eps)) / delta)


def mixing_time_report(m: int, eps: float) -> Dict[str, float]:
    """The bound plus its ingredients and the large-N simplified variant.

    ``approx_variant`` replaces 1/Delta by 4/3 (the large-N limit of the
    analytic gap); it is reported for comparison, not used anywhere.
    """
    n = 1 << m
    log_term = math.log(n ** 3 * (n * n - 4) / (2 * eps))
    delta = 1.0 - lambda_q0_bound(m)
    return {
        "m": m,
        "eps": eps,
        "lambda_q0_bound": lambda_q0_bound(m),
        "delta": delta,
        "pi_star": 2.0 / (n * n - 4),
        "log_term": log_term,
        "bound": mixing_time_bound(m, eps),
        "approx_variant": math.ceil(log_term * 4.0 / 3.0),
    }


def tv_curve(tm: TransitionMatrix, start: Sequence[float], t_max: int) -> np.ndarray:
    """Total-variation distances 0.5 |s Q^t - pi|_1 for t = 0..t_max."""
    q = tm.probs
    s = np.asarray(start, dtype=float)
    if s.shape != (len(tm.states),) or abs(s.sum() - 1.0) > 1e-12 or s.min() < 0:
        raise ValueError("start must be a probability vector over the states")
    pi = spectral_report(tm).stationary
    out = np.empty(t_max + 1)
    for t in range(t_max + 1):
        out[t] = 0.5 * np.abs(s - pi).sum()
        s = s @ q
    return out


def tv_curve_exact(tm: TransitionMatrix, start_index: int, t_max: int) -> List[Fraction]:
    """Exact-rational TV curve from a point mass.

    Float propagation bottoms out near 1e-15 long before the true curve
    does (at m=3 the true TV is ~1e-24 by step 38), so per-step decay
    ratios are only meaningful in exact arithmetic.
    """
    k = len(tm.states)
    num = tm.numerators.tolist()
    den = tm.denominator
    w = stationary_weights(tm)
    total = int(w.sum())
    pi = [Fraction(int(x), total) for x in w]
    s = [Fraction(1 if j == start_index else 0) for j in range(k)]
    out = []
    for _ in range(t_max + 1):
        out.append(sum(abs(s[j] - pi[j]) for j in range(k)) / 2)
        s = [sum(s[i] * num[i][j] for i in range(k)) / den for j in range(k)]
    return out


# --- full pair-level chains and exact lumping ---


def _class_pairs(ctx: FieldContext, chain: str) -> Tuple[np.ndarray, np.ndarray]:
    """All ordered pairs (as packed uint32 v, w) of the requested class."""
    n = ctx.order
    v = np.arange(1, n * n, dtype=np.uint32)
    a, b = (v & (n - 1)).astype(np.uint16), (v >> ctx.m).astype(np.uint16)
    mul, tr = ctx.np_table("mul"), ctx.np_table("trace")
    det = mul[a[:, None], b[None, :]] ^ mul[b[:, None], a[None, :]]
    commuting = tr[det] == 0
    np.fill_diagonal(commuting, False)
    if chain == "edges":
        mask = commuting
    else:
        mask = tr[det] == 1
    vv, ww = np.nonzero(mask)
    return v[vv], v[ww]


def full_chain(ctx: FieldContext, chain: str) -> TransitionMatrix:
    """The transvection walk on all ordered pairs of one class (m <= 3)."""
    if ctx.m > FULL_CHAIN_MAX_M:
        raise ValueError(f"full chain capped at m = {FULL_CHAIN_MAX_M}")
    n = ctx.order
    vs, ws = _class_pairs(ctx, chain)
    k = len(vs)
    pair_code = vs.astype(np.int64) * (n * n) + ws
    code_to_idx = np.full(n ** 4, -1, dtype=np.int64)
    code_to_idx[pair_code] = np.arange(k)

    h = np.arange(1, n * n, dtype=np.uint32)
    h1, h2 = (h & (n - 1)).astype(np.uint16), (h >> ctx.m).astype(np.uint16)
    a, b = (vs & (n - 1)).astype(np.uint16), (vs >> ctx.m).astype(np.uint16)
    c, d = (ws & (n - 1)).astype(np.uint16), (ws >> ctx.m).astype(np.uint16)

    counts = np.zeros((k, k), dtype=np.int64)
    rows = np.repeat(np.arange(k), len(h))
    ia, ib = transvection_apply_vec(ctx, h1[None, :], h2[None, :], a[:, None], b[:, None])
    ic, id_ = transvection_apply_vec(ctx, h1[None, :], h2[None, :], c[:, None], d[:, None])
    img_code = ((ia.astype(np.int64) | (ib.astype(np.int64) << ctx.m)) * (n * n)
                + (ic.astype(np.int64) | (id_.astype(np.int64) << ctx.m)))
    cols = code_to_idx[img_code.ravel()]
    if (cols < 0).any():
        raise AssertionError("transvection image left the pair class")
    np.add.at(counts, (rows, cols), 1)

    states = [PauliPair(PauliIndex(int(v) & (n - 1), int(v) >> ctx.m),
                        PauliIndex(int(w) & (n - 1), int(w) >> ctx.m))
              for v, w in zip(vs, ws)]
    return TransitionMatrix(states=states, numerators=4 * counts,
                            denominator=4 * (n * n - 1))


def lump_chain(ctx: FieldContext, full: TransitionMatrix) -> TransitionMatrix:
    """Project a full pair chain onto orbit invariants; exact or raises.

    Every state of one orbit must send identical total mass to each
    orbit — that is what makes the projection a Markov chain at all —
    and the identity of those row sums is checked exactly.
    """
    from .graph import orbit_invariant

    invariants = [orbit_invariant(ctx, pair) for pair in full.states]
    chain = "edges" if invariants[0].kind != EdgeKind.NON_EDGE else "nonedges"
    states = _chain_states(ctx, chain)
    col_of = {s: j for j, s in enumerate(states)}
    member_cols = np.array([col_of[inv] for inv in invariants])
    lumped = np.zeros((len(full.states), len(states)), dtype=np.int64)
    for j in range(len(states)):
        lumped[:, j] = full.numerators[:, member_cols == j].sum(axis=1)
    numerators = np.zeros((len(states), len(states)), dtype=np.int64)
    for i, s in enumerate(states):
        member_rows = lumped[member_cols == i]
        if not (member_rows == member_rows[0]).all():
            raise ValueError(f"chain is not lumpable over orbit {s}")
        numerators[i] = member_rows[0]
    return TransitionMatrix(states=states, numerators=numerators,
                            denominator=full.denominator)
