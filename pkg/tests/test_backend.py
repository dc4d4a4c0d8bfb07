import numpy as np
import pytest

from endotriv import backend
from endotriv.gf import field_spec

RNG = np.random.default_rng(42)


def batches(q, n, m=64):
    F = field_spec(q)
    # random invertible-ish matrices: rejection by determinant
    out = []
    while len(out) < m:
        cand = RNG.integers(0, q, size=(n, n)).astype(np.uint8)
        if backend.det_many(cand[None], F)[0] != 0:
            out.append(cand)
    return F, np.stack(out)


@pytest.mark.parametrize("q,n", [(2, 3), (3, 2), (4, 3), (5, 4), (9, 2)])
def test_numpy_fallback_matches_primary_backend(q, n):
    F, A = batches(q, n)
    B = A[::-1].copy()
    one = A[0]
    got = backend.mm_one(A, one, F)
    assert np.array_equal(got, backend._mm_one_np(A, one, F.mul, F.add))
    gotp = backend.mm_pairs(A, B, F)
    assert np.array_equal(gotp, backend._mm_pairs_np(A, B, F.mul, F.add))
    det_a = backend.det_many(A, F)
    out = np.empty(A.shape[0], dtype=np.int64)
    backend._det_many_np(A, F.mul, F.add, F.neg, F.inv_table, out)
    assert np.array_equal(det_a, out)
    inv_a, ok_a = backend.inverse_many(A, F)
    out_i = np.empty_like(A)
    ok_i = np.empty(A.shape[0], dtype=np.bool_)
    backend._inverse_many_np(A, F.mul, F.add, F.neg, F.inv_table, out_i, ok_i)
    assert np.array_equal(ok_a, ok_i) and np.array_equal(inv_a, out_i)
    scal = np.array(sorted(F.subgroup_values(q - 1) if q > 2 else [1]),
                    dtype=np.uint8)
    assert np.array_equal(backend.canon_min(A, scal, F),
                          backend._canon_min_np(A, scal, F.mul))


def test_inverse_roundtrip():
    F, A = batches(7, 3)
    inv, ok = backend.inverse_many(A, F)
    assert ok.all()
    prod = backend.mm_pairs(A, inv, F)
    ident = np.eye(3, dtype=np.uint8)
    assert all(np.array_equal(prod[i], ident) for i in range(A.shape[0]))


def test_backend_name():
    assert backend.backend_name() in ("numba", "numpy")
