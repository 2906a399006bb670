"""Kerdock matrix set, subgroup labels, PSL(2, 2^m) symplectic embedding."""

import numpy as np
import pytest

from kerdock3.gf2m import FieldContext, f2_mat_mul
from kerdock3.kerdock import (INFINITY, PslElement, classify_subgroup,
                              kerdock_matrix, label_from_text, label_to_text,
                              mobius_action, pair_action, psl_elements,
                              psl_factors, psl_identity, psl_inverse,
                              psl_order, psl_product, psl_to_symplectic,
                              sample_psl, sample_psl_vec, subgroup_members)
from kerdock3.pauli import (PauliIndex, SymplecticMatrix, apply_symplectic,
                            basis_change_matrix, omega_matrix, pack_index,
                            partial_hadamard_matrix, phase_matrix)


def _all_psl(ctx):
    return list(psl_elements(ctx))


def test_kerdock_set_properties():
    """Symmetric matrices, pairwise differences nonsingular, z=0 gives 0."""
    for m in (2, 3, 4):
        ctx = FieldContext(m)
        n = ctx.order
        mats = {z: kerdock_matrix(ctx, z) for z in range(n)}
        assert (mats[0] == 0).all()
        for z, pz in mats.items():
            assert (pz == pz.T).all()
        for z1 in range(n):
            for z2 in range(z1 + 1, n):
                diff = (mats[z1] + mats[z2]) % 2
                # nonsingular difference: full rank over GF(2)
                rows = tuple(int((diff[i] << np.arange(m)).sum())
                             for i in range(m))
                from kerdock3.gf2m import f2_mat_inv
                f2_mat_inv(rows, m)  # raises if singular


def test_kerdock_matrix_rowspace_slope():
    """The rowspace of [I | P_z] consists of pairs (a, b) with b = a z^2."""
    for m in (2, 3):
        ctx = FieldContext(m)
        for z in range(ctx.order):
            pz = kerdock_matrix(ctx, z)
            zz = ctx.mul(z, z)
            for a in range(1, ctx.order):
                bits = np.array([(a >> i) & 1 for i in range(m)])
                dual_b = int(((bits @ pz) % 2 << np.arange(m)).sum())
                b = ctx.dual_decode(dual_b)
                assert b == ctx.mul(a, zz)


def test_classify_subgroup_and_members():
    for m in (2, 3):
        ctx = FieldContext(m)
        n = ctx.order
        seen = {}
        for v in range(1, n * n):
            p = PauliIndex(v & (n - 1), v >> m)
            label = classify_subgroup(ctx, p)
            if p.a == 0:
                assert label is INFINITY
            else:
                assert label == ctx.div(p.b, p.a)
            seen.setdefault(label_to_text(label), set()).add(p)
        # N + 1 subgroup labels, each with N - 1 nonzero members, partitioning
        assert len(seen) == n + 1
        assert all(len(v) == n - 1 for v in seen.values())
        for label_text, members in seen.items():
            label = label_from_text(label_text)
            assert set(subgroup_members(ctx, label)) == members
        with pytest.raises(ValueError):
            classify_subgroup(ctx, (0, 0))


def test_label_text_round_trip():
    ctx = FieldContext(3)
    for label in [INFINITY] + list(range(8)):
        assert label_from_text(label_to_text(label)) == label
    assert label_to_text(INFINITY) == "inf"


def test_psl_group_axioms_m2():
    ctx = FieldContext(2)
    gs = _all_psl(ctx)
    assert len(gs) == psl_order(ctx) == 60
    assert len(set(gs)) == 60
    ident = psl_identity(ctx)
    for g in gs:
        assert psl_product(ctx, g, psl_inverse(ctx, g)) == ident
        assert psl_product(ctx, psl_inverse(ctx, g), g) == ident
    # determinant one for every enumerated element
    for g in gs:
        det = ctx.mul(g.alpha, g.delta) ^ ctx.mul(g.beta, g.gamma)
        assert det == 1


def test_psl_order_formula():
    for m in (2, 3, 4):
        n = 1 << m
        ctx = FieldContext(m)
        assert psl_order(ctx) == (n + 1) * n * (n - 1)
        if m <= 3:
            assert len(_all_psl(ctx)) == psl_order(ctx)


def test_theta_is_homomorphism_m2():
    ctx = FieldContext(2)
    gs = _all_psl(ctx)
    theta = {g: psl_to_symplectic(ctx, g) for g in gs}
    for g1 in gs:
        for g2 in gs:
            assert theta[g1] @ theta[g2] == theta[psl_product(ctx, g1, g2)]


def test_theta_examples():
    for m in (2, 3):
        ctx = FieldContext(m)
        assert psl_to_symplectic(ctx, psl_identity(ctx)) == \
            SymplecticMatrix.identity(m)
        # the swap element maps to the W-twisted block swap [[0, W], [W^-1, 0]]
        swap = PslElement(0, 1, 1, 0)
        rows = [int(r) << m for r in ctx.w_rows] + list(ctx.w_inv_rows)
        assert psl_to_symplectic(ctx, swap) == SymplecticMatrix(m, rows)


def test_mobius_covariance():
    """classify(p . theta(g)) = (beta + delta z) / (alpha + gamma z)."""
    for m in (2, 3):
        ctx = FieldContext(m)
        n = ctx.order
        gs = _all_psl(ctx) if m == 2 else \
            [sample_psl(ctx, np.random.default_rng(i)) for i in range(40)]
        for g in gs:
            f = psl_to_symplectic(ctx, g)
            for v in range(1, n * n):
                p = PauliIndex(v & (n - 1), v >> m)
                z = classify_subgroup(ctx, p)
                moved = apply_symplectic(ctx, f, p)
                assert classify_subgroup(ctx, moved) == mobius_action(ctx, g, z)


def test_pair_action_is_right_multiplication():
    for m in (2, 3):
        ctx = FieldContext(m)
        rng = np.random.default_rng(7)
        for _ in range(60):
            g = sample_psl(ctx, rng)
            f = psl_to_symplectic(ctx, g)
            a, b = (int(x) for x in rng.integers(0, ctx.order, 2))
            want = PauliIndex(ctx.mul(a, g.alpha) ^ ctx.mul(b, g.gamma),
                              ctx.mul(a, g.beta) ^ ctx.mul(b, g.delta))
            assert pair_action(ctx, g, (a, b)) == want
            assert apply_symplectic(ctx, f, (a, b)) == want


def test_factorization_reconstructs_theta():
    builders = {
        "phase": phase_matrix,
        "basis": basis_change_matrix,
        "hadamard": lambda m: omega_matrix(m),
    }
    for m, count in ((2, None), (3, 60), (4, 40)):
        ctx = FieldContext(m)
        if count is None:
            gs = _all_psl(ctx)
        else:
            rng = np.random.default_rng(m)
            gs = [sample_psl(ctx, rng) for _ in range(count)]
            gs += [PslElement(z, ctx.inv(z), 0, ctx.inv(z))
                   for z in range(2, 6)]  # force gamma == 0 branch coverage
        for g in gs:
            det = ctx.mul(g.alpha, g.delta) ^ ctx.mul(g.beta, g.gamma)
            assert det == 1
            product = SymplecticMatrix.identity(ctx.m)
            for factor in psl_factors(ctx, g):
                product = product @ builders[factor[0]](ctx.m, *factor[1:])
            assert product == psl_to_symplectic(ctx, g)


def test_theta_image_is_symplectic():
    for m in (2, 3):
        ctx = FieldContext(m)
        for g in _all_psl(ctx):
            assert psl_to_symplectic(ctx, g).is_symplectic()


def test_sample_psl_uniform_coverage():
    ctx = FieldContext(2)
    rng = np.random.default_rng(99)
    counts = {}
    draws = 12000
    for _ in range(draws):
        g = sample_psl(ctx, rng)
        counts[g] = counts.get(g, 0) + 1
    assert len(counts) == 60
    expected = draws / 60
    for c in counts.values():
        assert abs(c - expected) < 6 * np.sqrt(expected)


def test_sample_psl_vec_valid_group_elements():
    ctx = FieldContext(3)
    rng = np.random.default_rng(1234)
    alpha, beta, gamma, delta = sample_psl_vec(ctx, rng, 5000)
    mul = ctx.np_table("mul")
    det = mul[alpha, delta] ^ mul[beta, gamma]
    assert (det == 1).all()
    # both branches appear
    assert (alpha == 0).any() and (alpha != 0).any()


def test_invalid_psl_rejected():
    ctx = FieldContext(2)
    with pytest.raises(ValueError):
        psl_to_symplectic(ctx, PslElement(1, 1, 1, 1))  # det = 0
    with pytest.raises(ValueError):
        psl_factors(ctx, PslElement(0, 0, 0, 1))
