import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endotriv import abst
from endotriv.abst import (AbelianStructure, ExtensionDescriptor, cyclic,
                           direct_sum, from_cyclic_orders, prime_to_p_part,
                           smith_normal_form)
from endotriv.errors import DomainError


def test_snf_examples():
    assert smith_normal_form([[0, 0], [0, 0]]) == ([], 2)
    assert smith_normal_form([[2, 0], [0, 3]]) == ([1, 6], 0)
    assert smith_normal_form([[2, 4], [6, 8]]) == ([2, 4], 0)


def test_snf_divisibility_chain():
    rng = random.Random(7)
    for _ in range(200):
        m = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
        diag, _ = smith_normal_form(m)
        for a, b in zip(diag, diag[1:]):
            assert b % a == 0


def _apply_unimodular(rng, m):
    m = [row[:] for row in m]
    rows, cols = len(m), len(m[0])
    for _ in range(12):
        op = rng.randrange(4)
        if op == 0:
            i, j = rng.sample(range(rows), 2)
            c = rng.randint(-3, 3)
            for k in range(cols):
                m[i][k] += c * m[j][k]
        elif op == 1:
            i, j = rng.sample(range(cols), 2)
            c = rng.randint(-3, 3)
            for k in range(rows):
                m[k][i] += c * m[k][j]
        elif op == 2:
            i, j = rng.sample(range(rows), 2)
            m[i], m[j] = m[j], m[i]
        else:
            i = rng.randrange(rows)
            m[i] = [-x for x in m[i]]
    return m


def test_snf_invariant_under_unimodular_ops():
    rng = random.Random(99)
    for _ in range(500):
        m = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
        base = smith_normal_form(m)
        twisted = smith_normal_form(_apply_unimodular(rng, m))
        assert base == twisted


def test_direct_sum_examples():
    assert direct_sum(abst.Z, abst.TRIVIAL) == abst.Z
    assert direct_sum(cyclic(2), cyclic(3)) == cyclic(6)
    got = direct_sum(AbelianStructure(1, (2,)), cyclic(2))
    assert got == AbelianStructure(1, (2, 2))


@given(st.lists(st.integers(min_value=1, max_value=60), max_size=6),
       st.lists(st.integers(min_value=1, max_value=60), max_size=6))
@settings(max_examples=200, deadline=None)
def test_direct_sum_preserves_order(xs, ys):
    a, b = from_cyclic_orders(xs), from_cyclic_orders(ys)
    assert direct_sum(a, b).torsion_order == a.torsion_order * b.torsion_order


def test_prime_to_p_part_examples():
    assert prime_to_p_part(cyclic(6), 2) == cyclic(3)
    assert prime_to_p_part(cyclic(4), 2) == abst.TRIVIAL
    assert prime_to_p_part(from_cyclic_orders([12, 2]), 3) == \
        from_cyclic_orders([4, 2])
    with pytest.raises(DomainError):
        prime_to_p_part(abst.Z, 2)


@given(st.lists(st.integers(min_value=1, max_value=90), max_size=6),
       st.sampled_from([2, 3, 5, 7]))
@settings(max_examples=200, deadline=None)
def test_prime_to_p_part_idempotent(xs, p):
    a = from_cyclic_orders(xs)
    once = prime_to_p_part(a, p)
    assert prime_to_p_part(once, p) == once


def test_invariant_factor_canonical_form():
    a = from_cyclic_orders([2, 3, 4])
    assert a.invariant_factors == (2, 12)
    assert a.primary_decomposition() == (2, 3, 4)
    with pytest.raises(DomainError):
        AbelianStructure(0, (2, 3))  # broken chain
    with pytest.raises(DomainError):
        AbelianStructure(0, (1, 2))  # factor 1


def test_json_roundtrip():
    a = from_cyclic_orders([4, 6], free_rank=2)
    assert AbelianStructure.from_json(a.to_json()) == a


def test_extension_descriptor():
    e = ExtensionDescriptor(sub=cyclic(4), quot=cyclic(2))
    cands = e.candidates()
    assert from_cyclic_orders([8]) in cands and from_cyclic_orders([4, 2]) in cands
    e2 = ExtensionDescriptor(sub=from_cyclic_orders([2, 2]), quot=cyclic(2))
    cands2 = e2.candidates()
    assert from_cyclic_orders([2, 2, 2]) in cands2
    assert from_cyclic_orders([4, 2]) in cands2
    assert from_cyclic_orders([8]) not in cands2
    with pytest.raises(DomainError):
        ExtensionDescriptor(sub=cyclic(4), quot=cyclic(2), resolved=cyclic(4))
    ok = ExtensionDescriptor(sub=cyclic(4), quot=cyclic(2),
                             resolved=from_cyclic_orders([8]))
    assert ok.candidates() == (from_cyclic_orders([8]),)


def test_cokernel_structure():
    got = abst.cokernel_structure([[2, 0], [0, 3]])
    assert got == cyclic(6)
    assert abst.cokernel_structure([[0, 0], [0, 0]]).free_rank == 2
