import numpy as np
import pytest

from endotriv import backend, liea
from endotriv import matgrp as mg
from endotriv.errors import CapExceeded, DomainError, GroupSpecError
from endotriv.gf import field_spec, p_part


def test_compute_params_examples():
    p1 = liea.compute_params(2, 5, 3)
    assert (p1.e, p1.t, p1.d, p1.r, p1.f) == (2, 1, 8, 1, 0)
    assert p1.sylow_cyclic
    p2 = liea.compute_params(4, 3, 5, det_order=2)
    assert (p2.e, p2.t, p2.d, p2.r, p2.f) == (4, 1, 16, 1, 0)
    assert p2.sylow_cyclic
    p3 = liea.compute_params(3, 4, 3, det_order=3)
    assert (p3.e, p3.t, p3.d, p3.r, p3.f) == (1, 1, 1, 3, 0)
    assert not p3.sylow_cyclic


def test_compute_params_validation():
    with pytest.raises(DomainError):
        liea.compute_params(2, 3, 3)  # p | q
    with pytest.raises(DomainError):
        liea.compute_params(2, 5, 4)  # p not prime
    with pytest.raises(DomainError):
        liea.compute_params(2, 5, 3, det_order=3)  # 3 does not divide q-1
    with pytest.raises(DomainError):
        liea.compute_params(2, 7, 3, det_order=1, z_order=3)  # z beyond center


def test_scalar_center_order_examples():
    assert liea.scalar_center_order(2, 7, 1) == 2
    assert liea.scalar_center_order(3, 4, 3) == 3
    assert liea.scalar_center_order(3, 4, 1) == 3


def test_sylow_abelian_flag():
    assert liea.compute_params(2, 7, 3, 6).sylow_abelian  # n=2 < pe=3
    assert not liea.compute_params(3, 4, 3, 3).sylow_abelian  # n=3 = pe


def test_build_sylow_examples():
    pres, S = liea.build_sylow(liea.compute_params(2, 7, 3, 6))
    assert S.order == 9 and S.as_subgroup().is_abelian()
    pres2, S2 = liea.build_sylow(liea.compute_params(2, 5, 2, 4))
    assert S2.order == 32 and not S2.as_subgroup().is_abelian()
    assert "wr" in pres2.shape
    _, S3 = liea.build_sylow(liea.compute_params(4, 2, 3, 1))
    assert S3.order == 9


def test_build_sylow_det_filter():
    # SL(2,5): quaternion of order 8 inside the wreath Sylow of GL(2,5)
    _, S = liea.build_sylow(liea.compute_params(2, 5, 2, 1))
    assert S.order == 8
    orders = sorted(S.as_subgroup().element_orders())
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]  # generalized quaternion


def test_sylow_rejected_when_p_does_not_divide():
    with pytest.raises(DomainError):
        liea.build_sylow(liea.compute_params(2, 4, 7))  # n < e


def test_singer_relation():
    for q, e in [(3, 2), (5, 2), (4, 3), (2, 3)]:
        F = field_spec(q)
        w, g = liea.singer_block(q, e)
        wq = liea._matrix_power(F, w, q)
        gi = backend.inverse_many(g[None], F)[0][0]
        lhs = backend.mm_one(backend.mm_one(g[None], w, F), gi, F)[0]
        assert np.array_equal(lhs, wq)


def test_sylow_normalizer_block():
    assert liea.sylow_normalizer_block(1, 5, 2).order == 4  # q-1
    assert liea.sylow_normalizer_block(2, 3).order == 16
    assert liea.sylow_normalizer_block(2, 5).order == 48


def test_levi_examples():
    full = liea.levi([3], 4, det_order=1)
    assert full.order == liea.order_sl(3, 4)  # single block: the whole group
    assert liea.levi([2, 2], 3, det_order=1).order == 1152
    assert liea.levi([2, 1], 4, det_order=1).order == 180
    with pytest.raises(DomainError):
        liea.levi([2, 0], 3)


def test_levi_split():
    sp = liea.levi_split([2, 2], 4, 1, 3)
    assert sp is not None and sp.valid()
    assert liea.levi_split([2, 1], 4, 1, 3) is None  # only one block > 1
    sp2 = liea.levi_split([2, 2, 1], 5, 1, 3)  # e = 2: two blocks >= e
    assert sp2 is not None and sp2.valid()


def test_levi_normalizer_matches_ambient_scan():
    # verified against the full normalizer scan where the ambient fits
    G = liea.enumerate_group(4, 2)
    L = mg.subgroup_closure(G, [G.index_of(m)
                                for m in liea.levi_generators([2, 2], 2, 1)])
    N_true = mg.normalizer(G, L)
    N_built = liea.levi_normalizer_equal_blocks(2, 2, 2)
    built_keys = {N_built.elements[i].tobytes() for i in range(N_built.order)}
    true_keys = {G.elements[int(i)].tobytes() for i in N_true.idx}
    assert built_keys == true_keys


def test_named_matrices():
    nm = liea.named_matrices("block-swap", 4, 3, p=3, m=2)
    sigma = nm["sigma-swap"]
    neg1 = field_spec(3).neg_el(1)
    expect = np.zeros((4, 4), dtype=np.uint8)
    expect[0, 2] = expect[1, 3] = 1
    expect[2, 0] = expect[3, 1] = neg1
    assert np.array_equal(sigma, expect)
    nm2 = liea.named_matrices("char3-sylow", 3, 4, p=3)
    assert np.array_equal(nm2["Y-cycle"],
                          np.array([[0, 1, 0], [0, 0, 1], [1, 0, 0]], dtype=np.uint8))
    nm3 = liea.named_matrices("char2-n3", 3, 7, p=2)
    F7 = field_spec(7)
    assert list(np.diag(nm3["A-invol"])) == [F7.neg_el(1), F7.neg_el(1), 1]
    with pytest.raises(DomainError):
        liea.named_matrices("no-such-case", 3, 7)


def test_corner_matrices_land_in_the_right_groups():
    nm = liea.named_matrices("torus-corner", 3, 19, p=3)
    F = field_spec(19)
    x = nm["X-corner"]
    y = nm["Y-scaled-torus"]
    assert int(backend.det_many(x[None], F)[0]) == 1
    assert int(backend.det_many(y[None], F)[0]) == 1
    assert y[0, 0] == y[1, 1] != y[2, 2]  # not scalar when 9 | q-1


def test_group_spec_parsing():
    gs = liea.parse_group_spec("PGL(3,4)")
    assert (gs.n, gs.q, gs.det_order, gs.z_order) == (3, 4, 3, 3)
    gs2 = liea.parse_group_spec("PSL(2,9)")
    assert (gs2.det_order, gs2.z_order) == (1, 2)
    gs3 = liea.parse_group_spec("SL(2,7):2")
    assert gs3.det_order == 2
    for bad in ["SL(2,6)", "SP(4,3)", "SL(2,7):4", "PGL(2,7):2", "SL(x,y)"]:
        with pytest.raises(GroupSpecError):
            liea.parse_group_spec(bad)


def test_enumerate_spec_orders():
    assert liea.enumerate_spec(liea.parse_group_spec("PSL(2,5)")).order == 60
    assert liea.enumerate_spec(liea.parse_group_spec("PGL(2,3)")).order == 24
    with pytest.raises(CapExceeded):
        liea.enumerate_spec(liea.parse_group_spec("GL(4,5)"))


def test_sylow_order_matches_p_part_for_specs():
    for (n, q, p, det) in [(2, 9, 2, 8), (3, 3, 2, 2), (3, 5, 2, 1),
                           (4, 3, 2, 2), (2, 13, 3, 4), (3, 4, 3, 3)]:
        params = liea.compute_params(n, q, p, det)
        _, S = liea.build_sylow(params)
        assert S.order == p_part(liea.group_order(n, q, det), p)
