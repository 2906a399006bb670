"""Kerdock commutative structure and the projective-line symmetry group.

The N^2 - 1 nonzero Pauli indices split into N + 1 maximal commutative
subgroups, one per point of the projective line over GF(2^m): the pairs
(a, az) for each finite slope z, plus the pairs (0, b) at infinity.
Each subgroup is the row space of [I | P] for a Kerdock matrix
``P_z = A_z^2 W`` (P at infinity is the flipped block [0 | I]); any two
distinct Kerdock matrices differ by a nonsingular matrix, which is what
makes the family extremal.

SL(2, 2^m) = PSL(2, 2^m) acts on Pauli pairs by right multiplication of
the row (a b) by the 2x2 field matrix g, and on slopes by the Moebius
map z -> (beta + delta z) / (alpha + gamma z).  ``psl_to_symplectic``
embeds that action into the binary-symplectic group:

    theta(g) = [[A_alpha, A_beta W], [W^-1 A_gamma, A_delta^T]]

a genuine homomorphism for the right action, satisfying

    classify_subgroup(p . theta(g)) = moebius(g, classify_subgroup(p)).

Together with the Pauli group, the image of theta is an exact unitary
2-design; the sampler upgrades it to an approximate 3-design.
"""

from __future__ import annotations

from typing import Iterator, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from .gf2m import FieldContext, f2_mat_mul, f2_rows_to_numpy
from .pauli import PairLike, PauliIndex, SymplecticMatrix, omega_matrix

__all__ = [
    "INFINITY",
    "SubgroupLabel",
    "PslElement",
    "kerdock_matrix",
    "classify_subgroup",
    "subgroup_members",
    "label_to_text",
    "label_from_text",
    "mobius_action",
    "psl_to_symplectic",
    "psl_factors",
    "pair_action",
    "psl_identity",
    "psl_product",
    "psl_inverse",
    "psl_order",
    "psl_elements",
    "sample_psl",
    "sample_psl_vec",
]


class _Infinity:
    """Dedicated tag for the point at infinity on the projective line."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()

SubgroupLabel = Union[int, _Infinity]


class PslElement(NamedTuple):
    """2x2 field matrix (alpha beta; gamma delta) with determinant 1."""

    alpha: int
    beta: int
    gamma: int
    delta: int


def psl_identity(ctx: FieldContext) -> PslElement:
    return PslElement(1, 0, 0, 1)


def _check_det(ctx: FieldContext, g: PslElement) -> None:
    det = ctx.mul(g.alpha, g.delta) ^ ctx.mul(g.beta, g.gamma)
    if det != 1:
        raise ValueError(f"determinant {det} != 1, not an SL(2) element: {g}")


# --- Kerdock matrices and subgroup classification ---


def _mul_w_rows(ctx: FieldContext, x: int) -> Tuple[int, ...]:
    # rows of A_x W, i.e. |alpha^i x| stacked; symmetric for every x
    return tuple(ctx.dual_coords(ctx.mul(1 << i, x)) for i in range(ctx.m))


def kerdock_matrix(ctx: FieldContext, z: int) -> np.ndarray:
    """P_z = A_z^2 W; symmetric, and P_x + P_z is nonsingular for x != z."""
    return f2_rows_to_numpy(_mul_w_rows(ctx, ctx.mul(z, z)), ctx.m)


def classify_subgroup(ctx: FieldContext, p: PairLike) -> SubgroupLabel:
    """Slope b/a of the commutative subgroup containing p; INFINITY if a = 0."""
    a, b = p
    if a == 0 and b == 0:
        raise ValueError("the zero index belongs to every subgroup")
    if a == 0:
        return INFINITY
    return ctx.div(b, a)


def subgroup_members(ctx: FieldContext, label: SubgroupLabel) -> List[PauliIndex]:
    """The N - 1 nonzero Pauli indices of one maximal commutative subgroup."""
    if label is INFINITY:
        return [PauliIndex(0, b) for b in ctx.nonzero()]
    return [PauliIndex(a, ctx.mul(a, label)) for a in ctx.nonzero()]


def label_to_text(label: SubgroupLabel) -> str:
    """Serialize a subgroup label as a hex word, or the literal ``inf``."""
    if label is INFINITY:
        return "inf"
    return format(label, "#x")


def label_from_text(text: str) -> SubgroupLabel:
    if text == "inf":
        return INFINITY
    return int(text, 16)


def mobius_action(ctx: FieldContext, g: PslElement, z: SubgroupLabel) -> SubgroupLabel:
    """f(z) = (beta + delta z) / (alpha + gamma z) on GF(2^m) u {INFINITY}."""
    if z is INFINITY:
        if g.gamma == 0:
            return INFINITY
        return ctx.div(g.delta, g.gamma)
    num = g.beta ^ ctx.mul(g.delta, z)
    den = g.alpha ^ ctx.mul(g.gamma, z)
    if den == 0:
        return INFINITY
    return ctx.div(num, den)


# --- the symplectic embedding ---


def pair_action(ctx: FieldContext, g: PslElement, p: PairLike) -> PauliIndex:
    """Right multiplication of the row (a b) by g over the field."""
    a, b = p
    return PauliIndex(
        ctx.mul(a, g.alpha) ^ ctx.mul(b, g.gamma),
        ctx.mul(a, g.beta) ^ ctx.mul(b, g.delta),
    )


def psl_to_symplectic(ctx: FieldContext, g: PslElement) -> SymplecticMatrix:
    """theta(g) = [[A_alpha, A_beta W], [W^-1 A_gamma, A_delta^T]].

    Row i (i < m) is the packed image of the basis index (alpha^i, 0);
    row m + j is the packed image of (0, beta_j) for the dual basis
    element beta_j.  theta is a right-action homomorphism and its image
    together with the Paulis is the Kerdock 2-design.
    """
    _check_det(ctx, g)
    m = ctx.m
    rows = []
    for i in range(m):
        q = pair_action(ctx, g, (1 << i, 0))
        rows.append(q.a | (ctx.dual_coords(q.b) << m))
    for j in range(m):
        q = pair_action(ctx, g, (0, ctx.dual_decode(1 << j)))
        rows.append(q.a | (ctx.dual_coords(q.b) << m))
    return SymplecticMatrix(m, rows)


def psl_factors(ctx: FieldContext, g: PslElement):
    """Generator factorization of theta(g), in right-action order.

    gamma != 0:  T_{A_{alpha/gamma} W} . L_{A_{1/gamma}} . Omega . L_{W^-1} . T_{A_{delta/gamma} W}
    gamma == 0:  L_{A_alpha} . T_{A_{beta delta} W}

    Returned as ("phase", P) / ("basis", Q) / ("hadamard",) descriptors
    with numpy matrix parameters, consumable by the symplectic generator
    constructors and by the unitary synthesis (in reversed order there).
    """
    _check_det(ctx, g)
    mvw = lambda x: f2_rows_to_numpy(_mul_w_rows(ctx, x), ctx.m)
    if g.gamma == 0:
        return [
            ("basis", f2_rows_to_numpy(ctx.mul_matrix_rows(g.alpha), ctx.m)),
            ("phase", mvw(ctx.mul(g.beta, g.delta))),
        ]
    inv_gamma = ctx.inv(g.gamma)
    return [
        ("phase", mvw(ctx.mul(g.alpha, inv_gamma))),
        ("basis", f2_rows_to_numpy(ctx.mul_matrix_rows(inv_gamma), ctx.m)),
        ("hadamard",),
        ("basis", f2_rows_to_numpy(ctx.w_inv_rows, ctx.m)),
        ("phase", mvw(ctx.mul(g.delta, inv_gamma))),
    ]


# --- group operations, enumeration, sampling ---


def psl_product(ctx: FieldContext, g1: PslElement, g2: PslElement) -> PslElement:
    return PslElement(
        ctx.mul(g1.alpha, g2.alpha) ^ ctx.mul(g1.beta, g2.gamma),
        ctx.mul(g1.alpha, g2.beta) ^ ctx.mul(g1.beta, g2.delta),
        ctx.mul(g1.gamma, g2.alpha) ^ ctx.mul(g1.delta, g2.gamma),
        ctx.mul(g1.gamma, g2.beta) ^ ctx.mul(g1.delta, g2.delta),
    )


def psl_inverse(ctx: FieldContext, g: PslElement) -> PslElement:
    # det = 1 and char 2: (alpha beta; gamma delta)^-1 = (delta beta; gamma alpha)
    return PslElement(g.delta, g.beta, g.gamma, g.alpha)


def psl_order(ctx: FieldContext) -> int:
    n = ctx.order
    return (n + 1) * n * (n - 1)


def psl_elements(ctx: FieldContext) -> Iterator[PslElement]:
    """All (N+1)N(N-1) elements: (alpha, gamma) != 0, then the N unit-det fills."""
    n = ctx.order
    for k in range(1, n * n):
        alpha, gamma = k & (n - 1), k >> ctx.m
        if alpha != 0:
            for beta in range(n):
                delta = ctx.div(1 ^ ctx.mul(beta, gamma), alpha)
                yield PslElement(alpha, beta, gamma, delta)
        else:
            beta = ctx.inv(gamma)
            for delta in range(n):
                yield PslElement(alpha, beta, gamma, delta)


def sample_psl(ctx: FieldContext, rng: np.random.Generator) -> PslElement:
    """Uniform SL(2, 2^m) element.

    Draw (alpha, gamma) != (0, 0) uniformly, then one of the N solutions
    (beta, delta) of alpha delta + beta gamma = 1 uniformly.
    """
    n = ctx.order
    k = int(rng.integers(1, n * n))
    alpha, gamma = k & (n - 1), k >> ctx.m
    j = int(rng.integers(0, n))
    if alpha != 0:
        beta = j
        delta = ctx.div(1 ^ ctx.mul(beta, gamma), alpha)
    else:
        beta = ctx.inv(gamma)
        delta = j
    return PslElement(alpha, beta, gamma, delta)


def sample_psl_vec(ctx: FieldContext, rng: np.random.Generator, size: int):
    """Vectorized uniform SL(2) draw; returns arrays (alpha, beta, gamma, delta)."""
    n = ctx.order
    mul = ctx.np_table("mul")
    div = ctx.np_table("div")
    invt = ctx.np_table("inv")
    k = rng.integers(1, n * n, size=size, dtype=np.uint32)
    alpha = (k & (n - 1)).astype(np.uint16)
    gamma = (k >> ctx.m).astype(np.uint16)
    j = rng.integers(0, n, size=size, dtype=np.uint16)
    fin = alpha != 0
    beta = np.where(fin, j, invt[gamma])
    delta = np.where(fin, div[1 ^ mul[beta, gamma], np.where(fin, alpha, 1)], j)
    return alpha, beta.astype(np.uint16), gamma, delta.astype(np.uint16)
