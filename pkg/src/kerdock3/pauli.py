"""Pauli indices and the binary-symplectic group, packed into machine words.

A Hermitian Pauli on N = 2^m qubits-worth of space is indexed (up to
sign) by a pair of field elements ``(a, b)``; its binary row vector is
``[ [a] | |b| ]`` - primal coordinates of ``a`` in the low m bits, dual
coordinates of ``b`` in the high m bits.  Two Paulis commute iff the
symplectic inner product ``Tr(ad + bc)`` vanishes.

Symplectic matrices act on the right of packed row vectors; a matrix is
stored as 2m row words, so applying it is a bit-select XOR of rows and
composition is word-wise GF(2) row reduction.  The generators mirror
the standard Clifford dictionary:

    omega_matrix        block swap            <-> full Hadamard H_N
    basis_change_matrix [[Q,0],[0,Q^-T]]      <-> e_v -> e_{vQ}
    phase_matrix        [[I,P],[0,I]], P=P^T  <-> diag(i^{v P v^T mod 4})
    partial_hadamard_matrix                   <-> H_{2^t} (x) I_{2^{m-t}}

Transvections ``Z_h = I + Omega h^T h`` are the self-inverse walk moves:
``x Z_h = x + <x, h> h``, in field form
``(a, b) -> (a, b) + Tr(a h2 + b h1) (h1, h2)``.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional, Tuple, Union

import numpy as np

from .gf2m import (
    FieldContext,
    f2_mat_inv,
    f2_mat_mul,
    f2_numpy_to_rows,
    f2_rows_to_numpy,
    parity,
)

__all__ = [
    "PauliIndex",
    "Transvection",
    "SymplecticMatrix",
    "pack_index",
    "unpack_index",
    "symplectic_inner",
    "commutes",
    "apply_symplectic",
    "omega_matrix",
    "basis_change_matrix",
    "phase_matrix",
    "partial_hadamard_matrix",
    "transvection_matrix",
    "apply_transvection",
    "conjugate_transvection",
    "sample_transvection",
    "transvection_apply_vec",
]


class PauliIndex(NamedTuple):
    """Field-element pair indexing a Hermitian Pauli operator."""

    a: int
    b: int


class Transvection(NamedTuple):
    """Field-element pair (h1, h2) defining the transvection Z_h."""

    h1: int
    h2: int


PairLike = Union[PauliIndex, Tuple[int, int]]


class SymplecticMatrix:
    """2m x 2m GF(2) matrix as packed row words, acting on the right.

    Rows are ints whose bit j is column j.  ``F @ G`` composes in
    right-action order: applying F then G equals applying F @ G.
    """

    __slots__ = ("m", "rows")

    def __init__(self, m: int, rows: Iterable[int]) -> None:
        self.m = m
        self.rows = tuple(rows)
        if len(self.rows) != 2 * m:
            raise ValueError(f"expected {2 * m} rows, got {len(self.rows)}")

    @classmethod
    def identity(cls, m: int) -> "SymplecticMatrix":
        return cls(m, tuple(1 << i for i in range(2 * m)))

    @classmethod
    def from_numpy(cls, mat: np.ndarray) -> "SymplecticMatrix":
        mat = np.asarray(mat) % 2
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] % 2:
            raise ValueError("expected a square 2m x 2m matrix")
        return cls(mat.shape[0] // 2, f2_numpy_to_rows(mat))

    def to_numpy(self) -> np.ndarray:
        return f2_rows_to_numpy(self.rows, 2 * self.m)

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        if self.m != other.m:
            raise ValueError("dimension mismatch")
        return SymplecticMatrix(self.m, f2_mat_mul(self.rows, other.rows))

    def apply(self, v: int) -> int:
        """Image of the packed row vector ``v`` under right action."""
        acc = 0
        k = 0
        while v:
            if v & 1:
                acc ^= self.rows[k]
            v >>= 1
            k += 1
        return acc

    def transpose(self) -> "SymplecticMatrix":
        n = 2 * self.m
        return SymplecticMatrix(
            self.m,
            tuple(
                sum(((self.rows[i] >> j) & 1) << i for i in range(n))
                for j in range(n)
            ),
        )

    def inverse(self) -> "SymplecticMatrix":
        """Inverse via the symplectic block identity F^-1 = [[D^T,B^T],[C^T,A^T]]."""
        m = self.m
        mask = (1 << m) - 1
        a = [r & mask for r in self.rows[:m]]
        b = [r >> m for r in self.rows[:m]]
        c = [r & mask for r in self.rows[m:]]
        d = [r >> m for r in self.rows[m:]]

        def tr(rows):
            return [sum(((rows[i] >> j) & 1) << i for i in range(m)) for j in range(m)]

        at, bt, ct, dt = tr(a), tr(b), tr(c), tr(d)
        rows = [dt[i] | (bt[i] << m) for i in range(m)]
        rows += [ct[i] | (at[i] << m) for i in range(m)]
        return SymplecticMatrix(m, rows)

    def is_symplectic(self) -> bool:
        """Check F Omega F^T = Omega, i.e. the action preserves the inner product."""
        m = self.m
        mask = (1 << m) - 1
        for i, ri in enumerate(self.rows):
            si = ((ri & mask) << m) | (ri >> m)
            for j, rj in enumerate(self.rows):
                want = 1 if (j == i + m or j == i - m) else 0
                if parity(si & rj) != want:
                    return False
        return True

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SymplecticMatrix)
            and self.m == other.m
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((self.m, self.rows))

    def __repr__(self) -> str:
        return f"SymplecticMatrix(m={self.m}, rows={[f'{r:#x}' for r in self.rows]})"


# --- packing and the symplectic form ---


def pack_index(ctx: FieldContext, p: PairLike) -> int:
    """Packed row vector [ [a] | |b| ] of a Pauli index."""
    a, b = p
    return a | (ctx.dual_coords(b) << ctx.m)


def unpack_index(ctx: FieldContext, v: int) -> PauliIndex:
    mask = ctx.order - 1
    return PauliIndex(v & mask, ctx.dual_decode(v >> ctx.m))


def symplectic_inner(ctx: FieldContext, p: PairLike, q: PairLike) -> int:
    """Tr(ad + bc) for p = (a, b), q = (c, d); 0 means the Paulis commute."""
    a, b = p
    c, d = q
    return ctx.trace(ctx.mul(a, d) ^ ctx.mul(b, c))


def commutes(ctx: FieldContext, p: PairLike, q: PairLike) -> bool:
    return symplectic_inner(ctx, p, q) == 0


def apply_symplectic(ctx: FieldContext, f: SymplecticMatrix, p: PairLike) -> PauliIndex:
    """Right action of a symplectic matrix on a Pauli index."""
    return unpack_index(ctx, f.apply(pack_index(ctx, p)))


# --- generators ---


def omega_matrix(m: int) -> SymplecticMatrix:
    """Block swap [[0, I], [I, 0]]; the symplectic form itself."""
    rows = [1 << (m + i) for i in range(m)] + [1 << i for i in range(m)]
    return SymplecticMatrix(m, rows)


def basis_change_matrix(m: int, q: np.ndarray) -> SymplecticMatrix:
    """[[Q, 0], [0, Q^-T]] for invertible Q; relabels basis states by vQ."""
    q_rows = f2_numpy_to_rows(q)
    if len(q_rows) != m:
        raise ValueError("Q must be m x m")
    qinv = f2_mat_inv(q_rows, m)
    qinv_t = [sum(((qinv[i] >> j) & 1) << i for i in range(m)) for j in range(m)]
    rows = list(q_rows) + [r << m for r in qinv_t]
    return SymplecticMatrix(m, rows)


def phase_matrix(m: int, p: np.ndarray) -> SymplecticMatrix:
    """[[I, P], [0, I]] for symmetric P; the diagonal-phase generator."""
    p = np.asarray(p) % 2
    if not np.array_equal(p, p.T):
        raise ValueError("P must be symmetric over GF(2)")
    p_rows = f2_numpy_to_rows(p)
    rows = [(1 << i) | (p_rows[i] << m) for i in range(m)]
    rows += [1 << (m + i) for i in range(m)]
    return SymplecticMatrix(m, rows)


def partial_hadamard_matrix(m: int, t: int) -> SymplecticMatrix:
    """Generator of H_{2^t} (x) I on the first t coordinates; t = m gives omega."""
    if not 0 <= t <= m:
        raise ValueError(f"t={t} out of range [0, {m}]")
    rows = [1 << (m + i) if i < t else 1 << i for i in range(m)]
    rows += [1 << i if i < t else 1 << (m + i) for i in range(m)]
    return SymplecticMatrix(m, rows)


# --- transvections ---


def transvection_matrix(ctx: FieldContext, h: PairLike) -> SymplecticMatrix:
    """Z_h = I + Omega h^T h; self-inverse, fixes exactly the centralizer of h."""
    h = Transvection(*h)
    if h == (0, 0):
        raise ValueError("transvection requires a nonzero index pair")
    m = ctx.m
    hv = pack_index(ctx, h)
    sh = ((hv & (ctx.order - 1)) << m) | (hv >> m)  # Omega h^T as a column selector
    rows = [(1 << i) ^ (hv if (sh >> i) & 1 else 0) for i in range(2 * m)]
    return SymplecticMatrix(m, rows)


def apply_transvection(ctx: FieldContext, h: PairLike, p: PairLike) -> PauliIndex:
    """(a, b) + Tr(a h2 + b h1) (h1, h2): field form of the Z_h action."""
    h1, h2 = h
    a, b = p
    if ctx.trace(ctx.mul(a, h2) ^ ctx.mul(b, h1)):
        return PauliIndex(a ^ h1, b ^ h2)
    return PauliIndex(a, b)


def conjugate_transvection(
    ctx: FieldContext, f: SymplecticMatrix, h: PairLike
) -> Transvection:
    """The transvection with F^-1 Z_h F = Z_{hF}."""
    return Transvection(*unpack_index(ctx, f.apply(pack_index(ctx, Transvection(*h)))))


def sample_transvection(
    ctx: FieldContext, rng: np.random.Generator, size: Optional[int] = None
):
    """Uniform nonzero transvection index pair(s).

    With ``size=None`` returns a single Transvection; otherwise a pair of
    numpy arrays (h1, h2) of that length.
    """
    if size is None:
        k = int(rng.integers(1, ctx.order * ctx.order))
        return Transvection(k & (ctx.order - 1), k >> ctx.m)
    k = rng.integers(1, ctx.order * ctx.order, size=size, dtype=np.uint32)
    return (k & (ctx.order - 1)).astype(np.uint16), (k >> ctx.m).astype(np.uint16)


def transvection_apply_vec(ctx, h1, h2, a, b):
    """Vectorized Z_h action on arrays of field pairs (a, b)."""
    mul = ctx.np_table("mul")
    tr = ctx.np_table("trace")
    t = tr[mul[a, h2] ^ mul[b, h1]]
    return a ^ (h1 * t), b ^ (h2 * t)
