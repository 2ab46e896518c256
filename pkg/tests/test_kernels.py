import numpy as np
import pytest

from abelslab import kernels
from abelslab.kernels import (
    KernelError,
    coded_ring,
    coset_labels,
    decode_matrix,
    encode_matrices,
    encode_matrix,
    fits_packing,
    group_closure,
    identity_vec,
    mul_batch_left,
    mul_batch_right,
    mul_pairwise,
    mul_single,
    pack_keys,
)
from abelslab.matrices import Matrix
from abelslab.rings import ZModRing, make_ring

BACKENDS = kernels.available_backends()


def unitriangular_generators(ring, n):
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(Matrix.elementary(ring, n, i, j, ring.one))
    return out


def test_coded_ring_tables():
    R = ZModRing(4)
    cr = coded_ring(R)
    assert cr.q == 4
    assert cr.add[3, 3] == 2
    assert cr.mul[3, 3] == 1
    assert cr.neg[1] == 3
    assert cr.inv[3] == 3
    assert cr.inv[2] == -1
    assert list(cr.unit_codes) == [1, 3]
    assert coded_ring(R) is cr


def test_encode_decode_roundtrip():
    R = make_ring("polyq:2:0,0,1")
    cr = coded_ring(R)
    m = Matrix.elementary(R, 3, 1, 2, (1, 1))
    vec = encode_matrix(cr, m)
    assert decode_matrix(cr, vec, 3) == m
    ident = identity_vec(cr, 3)
    assert decode_matrix(cr, ident, 3).is_identity()


def test_packing_guard():
    assert fits_packing(2, 5)
    assert fits_packing(3, 5)
    assert fits_packing(5, 5)
    assert not fits_packing(7, 5)
    assert not fits_packing(2, 8)


@pytest.mark.parametrize("backend", BACKENDS)
def test_mul_matches_exact(backend):
    R = ZModRing(5)
    cr = coded_ring(R)
    rng = np.random.default_rng(42)
    n = 3
    for _ in range(10):
        a = Matrix.from_rows(R, rng.integers(0, 5, (n, n)).tolist())
        b = Matrix.from_rows(R, rng.integers(0, 5, (n, n)).tolist())
        va, vb = encode_matrix(cr, a), encode_matrix(cr, b)
        out = mul_single(cr, va, vb, n, backend=backend)
        assert decode_matrix(cr, out, n) == a.mul(b)


@pytest.mark.parametrize("backend", BACKENDS)
def test_batch_muls(backend):
    R = ZModRing(3)
    cr = coded_ring(R)
    rng = np.random.default_rng(7)
    n = 3
    mats = [
        Matrix.from_rows(R, rng.integers(0, 3, (n, n)).tolist()) for _ in range(6)
    ]
    fixed = Matrix.from_rows(R, rng.integers(0, 3, (n, n)).tolist())
    As = encode_matrices(cr, mats)
    vf = encode_matrix(cr, fixed)
    right = mul_batch_right(cr, As, vf, n, backend=backend)
    left = mul_batch_left(cr, vf, As, n, backend=backend)
    pair = mul_pairwise(cr, As, As[::-1].copy(), n, backend=backend)
    for idx, m in enumerate(mats):
        assert decode_matrix(cr, right[idx], n) == m.mul(fixed)
        assert decode_matrix(cr, left[idx], n) == fixed.mul(m)
        assert decode_matrix(cr, pair[idx], n) == m.mul(mats[len(mats) - 1 - idx])


@pytest.mark.parametrize("backend", BACKENDS)
def test_closure_unitriangular_order(backend):
    R = ZModRing(3)
    cr = coded_ring(R)
    n = 4
    gens = encode_matrices(cr, unitriangular_generators(R, n))
    status, elems, keys = group_closure(cr, gens, n, backend=backend)
    assert status == "complete"
    assert elems.shape[0] == 3**6
    assert (np.diff(keys) > 0).all()
    recomputed = pack_keys(cr, elems, n)
    assert (recomputed == keys).all()


def test_backends_agree_on_closure():
    if len(BACKENDS) < 2:
        pytest.skip("single backend available")
    R = ZModRing(2)
    cr = coded_ring(R)
    n = 5
    gens = encode_matrices(cr, unitriangular_generators(R, n))
    results = {}
    for b in BACKENDS:
        status, elems, keys = group_closure(cr, gens, n, backend=b)
        assert status == "complete"
        results[b] = (elems, keys)
    e0, k0 = results["numpy"]
    e1, k1 = results["numba"]
    assert (k0 == k1).all()
    assert (e0 == e1).all()
    assert e0.shape[0] == 2**10


@pytest.mark.parametrize("backend", BACKENDS)
def test_closure_overflow(backend):
    R = ZModRing(3)
    cr = coded_ring(R)
    n = 4
    gens = encode_matrices(cr, unitriangular_generators(R, n))
    status, elems, keys = group_closure(cr, gens, n, budget=50, backend=backend)
    assert status == "overflow"
    assert (np.diff(keys) > 0).all()


@pytest.mark.parametrize("backend", BACKENDS)
def test_center_mask(backend):
    R = ZModRing(3)
    cr = coded_ring(R)
    n = 3
    gen_mats = unitriangular_generators(R, n)
    gens = encode_matrices(cr, gen_mats)
    status, elems, keys = group_closure(cr, gens, n, backend=backend)
    assert status == "complete"
    mask = kernels.center_mask(cr, elems, gens, n, backend=backend)
    # center of the Heisenberg group over zmod(3) is the corner subgroup
    center = {Matrix.elementary(R, n, 1, 3, r) for r in range(3)}
    got = {decode_matrix(cr, elems[i], n) for i in np.where(mask)[0]}
    assert got == center


@pytest.mark.parametrize("backend", BACKENDS)
def test_coset_labels(backend):
    R = ZModRing(2)
    cr = coded_ring(R)
    n = 3
    gens = encode_matrices(cr, unitriangular_generators(R, n))
    status, elems, keys = group_closure(cr, gens, n, backend=backend)
    sub_mats = [Matrix.identity(R, n), Matrix.elementary(R, n, 1, 2, 1)]
    sub = encode_matrices(cr, sub_mats)
    labels, reps = coset_labels(cr, elems, keys, sub, n, backend=backend)
    assert labels.min() == 0
    assert labels.max() == len(reps) - 1
    assert len(reps) == elems.shape[0] // 2
    # same label iff same left coset; representative is minimal in key order
    counts = np.bincount(labels)
    assert (counts == 2).all()
    for c, rep_idx in enumerate(reps):
        members = np.where(labels == c)[0]
        assert members.min() == rep_idx


def test_coset_labels_escape_detected():
    R = ZModRing(2)
    cr = coded_ring(R)
    n = 3
    # element set missing most of the group: subgroup products escape
    sub_mats = [Matrix.identity(R, n), Matrix.elementary(R, n, 2, 3, 1)]
    sub = encode_matrices(cr, sub_mats)
    only = encode_matrices(cr, [Matrix.elementary(R, n, 1, 2, 1)])
    keys = pack_keys(cr, only, n)
    order = np.argsort(keys)
    with pytest.raises(KernelError):
        coset_labels(cr, only[order], keys[order], sub, n)


def test_trivial_generator_closure():
    R = ZModRing(3)
    cr = coded_ring(R)
    empty = np.empty((0, 9), np.int64)
    status, elems, keys = group_closure(cr, empty, 3)
    assert status == "complete"
    assert elems.shape[0] == 1


@pytest.mark.parametrize("backend", BACKENDS)
def test_closure_python_agrees(backend):
    R = ZModRing(3)
    n = 3
    gen_mats = unitriangular_generators(R, n)
    status, pyset = kernels.closure_python(R, gen_mats)
    assert status == "complete"
    cr = coded_ring(R)
    gens = encode_matrices(cr, gen_mats)
    _, elems, _ = group_closure(cr, gens, n, backend=backend)
    coded = {decode_matrix(cr, elems[i], n) for i in range(elems.shape[0])}
    assert coded == pyset
