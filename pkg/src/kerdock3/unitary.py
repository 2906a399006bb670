"""Dense-unitary realization of the symplectic layer, for small m.

Index convention: computational basis vectors |v> are labelled by the m
low bits of an integer, bit j of the label being coordinate j of the row
vector v; numpy ``kron(A, B)`` therefore puts A on the high label bits.

The Pauli operator for an index pair (a, b) is real monomial

    D(a, b) |v> = (-1)^(v . |b|)  |v + [a]>

with [a] the standard coordinates of a and |b| the dual coordinates of
b, and E(a, b) = i^Tr(ab) D(a, b) is its Hermitian form (E^2 = I).
Conjugation by the generator unitaries moves index pairs by exactly the
corresponding binary-symplectic generator matrices; ``conjugation_check``
verifies that relation entrywise, tracking the +-1, +-i phase freedom.

Frame potentials are computed by chunked Gram products on flattened
unitaries; the Haar baseline is the number of standard Young tableaux
pairs with at most ``dim`` rows.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .gf2m import FieldContext
from .graph import EdgeKind
from .kerdock import PslElement, psl_elements, psl_factors, psl_to_symplectic
from .markov import q_empirical
from .pauli import PauliIndex, SymplecticMatrix, apply_symplectic
from .sampler import DesignSample

__all__ = [
    "pauli_unitary",
    "hermitian_pauli",
    "transvection_unitary",
    "hadamard_unitary",
    "partial_hadamard_unitary",
    "basis_unitary",
    "phase_unitary",
    "psl_unitary",
    "sample_unitary",
    "ensemble_from_samples",
    "conjugation_check",
    "ConjugationFailure",
    "frame_potential",
    "frame_potential_estimate",
    "haar_frame_potential",
    "collision_frame_potential_3",
    "delta_frame_potential_3",
    "estimator_margin",
    "single_qubit_clifford_group",
    "kerdock_unitaries",
]


def pauli_unitary(ctx: FieldContext, p: Tuple[int, int]) -> np.ndarray:
    """The real monomial D(a, b); a permutation with +-1 signs."""
    a, b = p
    n = ctx.order
    db = ctx.dual_coords(b)
    v = np.arange(n)
    signs = 1.0 - 2.0 * (_popcount(v & db) & 1)
    mat = np.zeros((n, n), dtype=np.complex128)
    mat[v ^ a, v] = signs
    return mat


def _popcount(v: np.ndarray) -> np.ndarray:
    out = np.zeros_like(v)
    w = v.copy()
    while w.any():
        out += w & 1
        w >>= 1
    return out


def hermitian_pauli(ctx: FieldContext, p: Tuple[int, int]) -> np.ndarray:
    """E(a, b) = i^Tr(ab) D(a, b); Hermitian with E^2 = I."""
    a, b = p
    return (1j ** ctx.trace(ctx.mul(a, b))) * pauli_unitary(ctx, p)


def transvection_unitary(ctx: FieldContext, h: Tuple[int, int]) -> np.ndarray:
    """(I + i E(h)) / sqrt(2); realizes the transvection Z_h."""
    e = hermitian_pauli(ctx, h)
    return (np.eye(e.shape[0]) + 1j * e) / math.sqrt(2.0)


_H2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def hadamard_unitary(m: int) -> np.ndarray:
    out = np.array([[1.0]])
    for _ in range(m):
        out = np.kron(out, _H2)
    return out.astype(np.complex128)


def partial_hadamard_unitary(m: int, t: int) -> np.ndarray:
    """Hadamard on coordinates 0..t-1 (the low label bits)."""
    if not 0 <= t <= m:
        raise ValueError(f"t={t} out of range [0, {m}]")
    return np.kron(np.eye(1 << (m - t)), hadamard_unitary(t)).astype(np.complex128)


def basis_unitary(m: int, q: np.ndarray) -> np.ndarray:
    """Permutation e_v -> e_{vQ} for invertible binary Q."""
    q = np.asarray(q) % 2
    n = 1 << m
    v = np.arange(n)
    vbits = (v[:, None] >> np.arange(m)) & 1
    img_bits = (vbits @ q) % 2
    img = (img_bits << np.arange(m)).sum(axis=1)
    if len(set(img.tolist())) != n:
        raise ValueError("Q is not invertible")
    mat = np.zeros((n, n), dtype=np.complex128)
    mat[img, v] = 1.0
    return mat


def phase_unitary(m: int, p: np.ndarray) -> np.ndarray:
    """diag(i^(v P v^T mod 4)) for symmetric binary P."""
    p = np.asarray(p) % 2
    if not np.array_equal(p, p.T):
        raise ValueError("P must be symmetric over GF(2)")
    n = 1 << m
    vbits = (np.arange(n)[:, None] >> np.arange(m)) & 1
    quad = np.einsum("vi,ij,vj->v", vbits, p, vbits) % 4
    return np.diag(1j ** quad)


_GENERATORS = {
    "phase": lambda m, arg: phase_unitary(m, arg),
    "basis": lambda m, arg: basis_unitary(m, arg),
    "hadamard": lambda m: hadamard_unitary(m),
}


def psl_unitary(ctx: FieldContext, g: PslElement) -> np.ndarray:
    """Unitary whose conjugation action is theta(g).

    The factor list multiplies in right-action order, so the unitary
    product runs over the factors reversed (the first factor acts first
    under conjugation, hence sits innermost).
    """
    out = np.eye(ctx.order, dtype=np.complex128)
    for factor in reversed(psl_factors(ctx, g)):
        out = out @ _GENERATORS[factor[0]](ctx.m, *factor[1:])
    return out


def sample_unitary(ctx: FieldContext, s: DesignSample) -> np.ndarray:
    """E(pauli) . U(psl) . U(h_t) ... U(h_1): conjugation acts h_1 first,
    matching the sample's ``composed`` symplectic matrix."""
    out = psl_unitary(ctx, s.psl)
    for h in reversed(s.transvections):
        out = out @ transvection_unitary(ctx, h)
    return hermitian_pauli(ctx, s.pauli) @ out


def ensemble_from_samples(ctx: FieldContext,
                          samples: Iterable[DesignSample]) -> List[np.ndarray]:
    return [sample_unitary(ctx, s) for s in samples]


class ConjugationFailure(Exception):
    """First Pauli index where U D(x) U+ deviates from a phase times D(xF)."""

    def __init__(self, index: PauliIndex, error: float):
        self.index = index
        self.error = error
        super().__init__(f"conjugation mismatch at index {tuple(index)}: "
                         f"residual {error:.3e}")


def conjugation_check(ctx: FieldContext, u: np.ndarray, f: SymplecticMatrix,
                      tol: float = 1e-8) -> None:
    """Assert U D(x) U+ = phase * D(x . F) for every nonzero index x.

    The phase must be a fourth root of unity within ``tol``; raises
    ConjugationFailure at the first offending index.
    """
    n = ctx.order
    uh = u.conj().T
    for a in range(n):
        for b in range(n):
            if a == 0 and b == 0:
                continue
            x = PauliIndex(a, b)
            got = u @ pauli_unitary(ctx, x) @ uh
            want = pauli_unitary(ctx, apply_symplectic(ctx, f, x))
            k = np.argmax(np.abs(want))
            phase = got.flat[k] / want.flat[k]
            err = float(np.abs(got - phase * want).max())
            if err > tol or abs(abs(phase) - 1.0) > tol or \
                    abs(phase ** 4 - 1.0) > 8 * tol:
                raise ConjugationFailure(x, max(err, abs(phase ** 4 - 1.0)))


# --- frame potentials ---


def _gram_rows(unitaries: Sequence[np.ndarray]) -> np.ndarray:
    mats = np.stack([np.asarray(u, dtype=np.complex128) for u in unitaries])
    s, n, _ = mats.shape
    return mats.reshape(s, n * n)


def frame_potential(unitaries: Sequence[np.ndarray], k: int,
                    weights: Optional[np.ndarray] = None,
                    chunk: int = 1024) -> float:
    """Sum_ij w_i w_j |tr(U_i+ U_j)|^(2k), uniform weights by default."""
    vecs = _gram_rows(unitaries)
    s = vecs.shape[0]
    w = np.full(s, 1.0 / s) if weights is None else np.asarray(weights, float)
    total = 0.0
    for lo in range(0, s, chunk):
        hi = min(lo + chunk, s)
        g = vecs[lo:hi] @ vecs.conj().T
        total += float((np.abs(g) ** (2 * k) @ w) @ w[lo:hi])
    return total


def frame_potential_estimate(unitaries: Sequence[np.ndarray], k: int,
                             chunk: int = 1024) -> Tuple[float, float]:
    """(F_hat, sigma_hat) for the uniform empirical frame potential.

    sigma_hat is the first-order (projection) standard error of the
    pair average: with h_i the mean of |tr(U_i+ U_j)|^(2k) over j,
    sigma^2 = 4 Var(h) / S.
    """
    vecs = _gram_rows(unitaries)
    s = vecs.shape[0]
    row_means = np.empty(s)
    total = 0.0
    for lo in range(0, s, chunk):
        hi = min(lo + chunk, s)
        g = np.abs(vecs[lo:hi] @ vecs.conj().T) ** (2 * k)
        row_means[lo:hi] = g.mean(axis=1)
        total += float(g.sum())
    fhat = total / (s * s)
    var_h = float(((row_means - fhat) ** 2).sum()) / max(s - 1, 1)
    return fhat, 2.0 * math.sqrt(var_h / s)


def _partitions(k: int, max_part: int) -> Iterable[Tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    for first in range(min(k, max_part), 0, -1):
        for rest in _partitions(k - first, first):
            yield (first,) + rest


def _tableaux_count(shape: Tuple[int, ...]) -> int:
    k = sum(shape)
    hooks = 1
    for i, row in enumerate(shape):
        for j in range(row):
            arm = row - j - 1
            leg = sum(1 for r in shape[i + 1:] if r > j)
            hooks *= arm + leg + 1
    return math.factorial(k) // hooks


def haar_frame_potential(dim: int, k: int) -> int:
    """Moment of |tr U|^(2k) over the Haar measure: the number of pairs
    of standard Young tableaux on k boxes with at most ``dim`` rows."""
    return sum(_tableaux_count(shape) ** 2
               for shape in _partitions(k, k) if len(shape) <= dim)


# --- closed-form third frame potential of the walk ensemble ---


def _ordered_orbit_sizes(ctx: FieldContext, chain: str) -> Dict[object, int]:
    n = ctx.order
    size = {EdgeKind.TYPE1: n * n - 1, EdgeKind.TYPE2: (n * n - 1) * n,
            EdgeKind.NON_EDGE: (n * n - 1) * n}
    tm = q_empirical(ctx, chain)
    return {s: size[s.kind] for s in tm.states}


def collision_frame_potential_3(ctx: FieldContext, t: int) -> float:
    """Exact F_3 of the step-t ensemble (t transvections, then a uniform
    PSL element, then a uniform Pauli index).

    F_3 = E |Fix(G F^-1)|^2 over independent ensemble draws F, G of the
    symplectic part.  The fixed-vector count expands into per-vertex and
    per-ordered-pair collision probabilities; the vertex marginal is
    exactly uniform (PSL is transitive on nonzero index pairs), and pair
    image distributions are uniform on each diagonal-action orbit with
    orbit weights given by the lumped walk, so

        F_3(t) = 4 + sum_chains sum_start |start orbit| *
                     sum_orbit g_t(orbit)^2 / |orbit|

    with g_t the t-step lumped distribution out of the start orbit.
    """
    total = 4.0
    for chain in ("edges", "nonedges"):
        tm = q_empirical(ctx, chain)
        sizes = np.array([_ordered_orbit_sizes(ctx, chain)[s] for s in tm.states],
                         dtype=float)
        pt = np.linalg.matrix_power(tm.probs, t)
        total += float((sizes @ (pt ** 2 / sizes[None, :])).sum())
    return total


def delta_frame_potential_3(ctx: FieldContext, t: int) -> float:
    """F_3(t) - 6: the ensemble's exact excess over the 3-design value."""
    return collision_frame_potential_3(ctx, t) - 6.0


def estimator_margin(m: int, t: int, samples: int, sigma_hat: float,
                     ctx: Optional[FieldContext] = None) -> float:
    """Upper margin for the S-sample empirical F_3 above the value 6:
    diagonal inflation (N^6 - 6)/S, plus the exact ensemble excess at
    step t, plus 4 sigma_hat of estimator noise."""
    ctx = ctx or FieldContext(m)
    n = 1 << m
    return (float(n) ** 6 - 6.0) / samples \
        + max(0.0, delta_frame_potential_3(ctx, t)) + 4.0 * sigma_hat


# --- small reference ensembles ---


def single_qubit_clifford_group() -> List[np.ndarray]:
    """All 24 single-qubit Clifford unitaries, phase-canonicalized."""
    s_gate = np.diag([1.0, 1j])
    seen: Dict[tuple, np.ndarray] = {}

    def canon(u: np.ndarray) -> np.ndarray:
        k = np.argmax(np.abs(u) > 1e-9)
        u = u / (u.flat[k] / abs(u.flat[k]))
        return u

    def key(u: np.ndarray) -> tuple:
        return tuple(np.round(canon(u).ravel(), 9).tolist())

    frontier = [np.eye(2, dtype=np.complex128)]
    seen[key(frontier[0])] = frontier[0]
    while frontier:
        nxt = []
        for u in frontier:
            for g in (_H2, s_gate):
                v = g @ u
                k = key(v)
                if k not in seen:
                    seen[k] = canon(v)
                    nxt.append(v)
        frontier = nxt
    return list(seen.values())


def kerdock_unitaries(ctx: FieldContext,
                      include_paulis: bool = True) -> List[np.ndarray]:
    """The exact step-0 ensemble: every PSL unitary, optionally left-
    multiplied by every Hermitian Pauli (identity included)."""
    psl_us = [psl_unitary(ctx, g) for g in psl_elements(ctx)]
    if not include_paulis:
        return psl_us
    n = ctx.order
    paulis = [hermitian_pauli(ctx, (a, b)) for a in range(n) for b in range(n)]
    return [d @ u for u in psl_us for d in paulis]
