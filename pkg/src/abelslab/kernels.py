"""Integer-coded bulk kernels for finite matrix groups.

A finite ring with q elements is flattened to int64 lookup tables indexed by
element codes; an n x n matrix becomes a flat length-n^2 int64 vector of
codes, and a whole group becomes a 2-d array of such vectors.  Each vector
packs into a single int64 key (row-major, base q) whenever q**(n*n) fits,
which gives sorted-array membership tests and canonical minimal coset
representatives for free.

Hot loops exist twice: numba @njit kernels and a pure-numpy fallback.  The
environment variable ABELSLAB_BACKEND ("numba" or "numpy") picks one at call
time; the default is numba when importable.  Both implementations stay
exposed so tests can assert they agree and benchmarks can race them.
"""

import os
from types import SimpleNamespace

import numpy as np

from .config import get_budget
from .matrices import Matrix
from .rings import RingError

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - mirror exercised via env flag
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


class KernelError(RuntimeError):
    pass


# -- coded rings -------------------------------------------------------

_CODED_CACHE = {}


class CodedRing:
    """Lookup-table image of a finite ring."""

    def __init__(self, ring):
        if not ring.finite:
            raise RingError(f"{ring.descriptor} is not finite")
        self.ring = ring
        q = ring.order()
        self.q = q
        elems = ring.elements()
        self.add = np.empty((q, q), np.int64)
        self.mul = np.empty((q, q), np.int64)
        self.neg = np.empty(q, np.int64)
        self.inv = np.full(q, -1, np.int64)
        enc = ring.encode
        for a in range(q):
            ea = elems[a]
            self.neg[a] = enc(ring.neg(ea))
            iv = ring.try_inverse(ea)
            if iv is not None:
                self.inv[a] = enc(iv)
            for b in range(q):
                eb = elems[b]
                self.add[a, b] = enc(ring.add(ea, eb))
                self.mul[a, b] = enc(ring.mul(ea, eb))
        self.zero = enc(ring.zero)
        self.one = enc(ring.one)
        self.unit_codes = np.array(
            [c for c in range(q) if self.inv[c] >= 0], np.int64
        )


def coded_ring(ring):
    cr = _CODED_CACHE.get(ring.descriptor)
    if cr is None:
        cr = CodedRing(ring)
        _CODED_CACHE[ring.descriptor] = cr
    return cr


def encode_matrix(cr, mat):
    enc = cr.ring.encode
    return np.array([enc(v) for row in mat.rows for v in row], np.int64)


def encode_matrices(cr, mats):
    if not mats:
        raise KernelError("empty matrix list")
    return np.stack([encode_matrix(cr, m) for m in mats])


def decode_matrix(cr, vec, n):
    dec = cr.ring.decode
    vals = [dec(int(c)) for c in vec]
    rows = [tuple(vals[i * n : (i + 1) * n]) for i in range(n)]
    return Matrix(cr.ring, rows)


def identity_vec(cr, n):
    out = np.full(n * n, cr.zero, np.int64)
    out[:: n + 1] = cr.one
    return out


def fits_packing(q, n):
    return q ** (n * n) < 2**63


def _powers(q, nn):
    pw = np.empty(nn, np.int64)
    pw[nn - 1] = 1
    for t in range(nn - 2, -1, -1):
        pw[t] = pw[t + 1] * q
    return pw


def pack_keys(cr, vecs, n):
    if not fits_packing(cr.q, n):
        raise KernelError(f"q={cr.q}, n={n} does not pack into int64")
    pw = _powers(cr.q, n * n)
    return vecs @ pw


# -- numpy backend -----------------------------------------------------


def _np_mul_single(a, b, add, mul, n):
    A = a.reshape(n, n)
    B = b.reshape(n, n)
    acc = None
    for k in range(n):
        term = mul[A[:, k][:, None], B[k, :][None, :]]
        acc = term if acc is None else add[acc, term]
    return acc.reshape(n * n)


def _np_mul_batch_right(As, b, add, mul, n):
    m = As.shape[0]
    A = As.reshape(m, n, n)
    B = b.reshape(n, n)
    acc = None
    for k in range(n):
        term = mul[A[:, :, k][:, :, None], B[k, :][None, None, :]]
        acc = term if acc is None else add[acc, term]
    return acc.reshape(m, n * n)


def _np_mul_batch_left(a, Bs, add, mul, n):
    m = Bs.shape[0]
    A = a.reshape(n, n)
    B = Bs.reshape(m, n, n)
    acc = None
    for k in range(n):
        term = mul[A[:, k][None, :, None], B[:, k, :][:, None, :]]
        acc = term if acc is None else add[acc, term]
    return acc.reshape(m, n * n)


def _np_mul_pairwise(As, Bs, add, mul, n):
    m = As.shape[0]
    A = As.reshape(m, n, n)
    B = Bs.reshape(m, n, n)
    acc = None
    for k in range(n):
        term = mul[A[:, :, k][:, :, None], B[:, k, :][:, None, :]]
        acc = term if acc is None else add[acc, term]
    return acc.reshape(m, n * n)


def _np_closure_impl(seed, gens, add, mul, n, q, budget):
    nn = n * n
    pw = _powers(q, nn)
    elems = np.unique(seed, axis=0)
    keys = elems @ pw
    order = np.argsort(keys, kind="stable")
    elems, keys = elems[order], keys[order]
    frontier = elems
    status = "complete"
    while frontier.shape[0]:
        prods = np.concatenate(
            [_np_mul_batch_right(frontier, g, add, mul, n) for g in gens]
        )
        pk = prods @ pw
        pk, first = np.unique(pk, return_index=True)
        prods = prods[first]
        pos = np.searchsorted(keys, pk)
        pos_c = np.clip(pos, 0, keys.shape[0] - 1)
        fresh = keys[pos_c] != pk
        prods, pk = prods[fresh], pk[fresh]
        if not prods.shape[0]:
            break
        if elems.shape[0] + prods.shape[0] > budget:
            status = "overflow"
            break
        keys = np.concatenate([keys, pk])
        elems = np.concatenate([elems, prods])
        order = np.argsort(keys, kind="stable")
        keys, elems = keys[order], elems[order]
        frontier = prods
    return status, elems, keys


def _np_center_mask(elems, gens, add, mul, n):
    N = elems.shape[0]
    out = np.ones(N, bool)
    chunk = 1 << 14
    for g in gens:
        for lo in range(0, N, chunk):
            part = elems[lo : lo + chunk]
            L = _np_mul_batch_right(part, g, add, mul, n)
            R = _np_mul_batch_left(g, part, add, mul, n)
            out[lo : lo + chunk] &= (L == R).all(axis=1)
    return out


def _np_coset_labels(elems, keys, sub, add, mul, n, q):
    N = elems.shape[0]
    pw = _powers(q, n * n)
    labels = np.full(N, -1, np.int64)
    reps = []
    for i in range(N):
        if labels[i] >= 0:
            continue
        members = _np_mul_batch_left(elems[i], sub, add, mul, n)
        mk = members @ pw
        pos = np.searchsorted(keys, mk)
        if (pos >= N).any() or (keys[pos.clip(max=N - 1)] != mk).any():
            raise KernelError("coset member escapes the element set")
        labels[pos] = len(reps)
        reps.append(i)
    return labels, np.array(reps, np.int64)


# -- numba backend -----------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _nb_mul_single(a, b, add, mul, n):
        out = np.empty(n * n, np.int64)
        for i in range(n):
            for j in range(n):
                acc = mul[a[i * n], b[j]]
                for k in range(1, n):
                    acc = add[acc, mul[a[i * n + k], b[k * n + j]]]
                out[i * n + j] = acc
        return out

    @njit(cache=True)
    def _nb_mul_batch_right(As, b, add, mul, n):
        m = As.shape[0]
        out = np.empty((m, n * n), np.int64)
        for r in range(m):
            a = As[r]
            for i in range(n):
                for j in range(n):
                    acc = mul[a[i * n], b[j]]
                    for k in range(1, n):
                        acc = add[acc, mul[a[i * n + k], b[k * n + j]]]
                    out[r, i * n + j] = acc
        return out

    @njit(cache=True)
    def _nb_mul_batch_left(a, Bs, add, mul, n):
        m = Bs.shape[0]
        out = np.empty((m, n * n), np.int64)
        for r in range(m):
            b = Bs[r]
            for i in range(n):
                for j in range(n):
                    acc = mul[a[i * n], b[j]]
                    for k in range(1, n):
                        acc = add[acc, mul[a[i * n + k], b[k * n + j]]]
                    out[r, i * n + j] = acc
        return out

    @njit(cache=True)
    def _nb_mul_pairwise(As, Bs, add, mul, n):
        m = As.shape[0]
        out = np.empty((m, n * n), np.int64)
        for r in range(m):
            a = As[r]
            b = Bs[r]
            for i in range(n):
                for j in range(n):
                    acc = mul[a[i * n], b[j]]
                    for k in range(1, n):
                        acc = add[acc, mul[a[i * n + k], b[k * n + j]]]
                    out[r, i * n + j] = acc
        return out

    @njit(cache=True)
    def _nb_hash_slot(key, cap_mask):
        x = key
        x ^= x >> 33
        x *= -49064778989728563
        x ^= x >> 29
        return x & cap_mask

    @njit(cache=True)
    def _nb_closure_impl(seed, gens, add, mul, n, q, budget):
        nn = n * n
        pw = np.empty(nn, np.int64)
        pw[nn - 1] = 1
        for t in range(nn - 2, -1, -1):
            pw[t] = pw[t + 1] * q
        cap = 16
        while cap < 2 * (budget + 2):
            cap <<= 1
        cap_mask = cap - 1
        slots = np.full(cap, -1, np.int64)
        cap_e = 1024
        elems = np.empty((cap_e, nn), np.int64)
        keys = np.empty(cap_e, np.int64)
        count = 0
        overflow = False
        for s in range(seed.shape[0]):
            vec = seed[s]
            key = np.int64(0)
            for t in range(nn):
                key += vec[t] * pw[t]
            h = _nb_hash_slot(key, cap_mask)
            while slots[h] != -1 and keys[slots[h]] != key:
                h = (h + 1) & cap_mask
            if slots[h] == -1:
                if count == cap_e:
                    cap_e *= 2
                    new_e = np.empty((cap_e, nn), np.int64)
                    new_e[:count] = elems[:count]
                    elems = new_e
                    new_k = np.empty(cap_e, np.int64)
                    new_k[:count] = keys[:count]
                    keys = new_k
                elems[count] = vec
                keys[count] = key
                slots[h] = count
                count += 1
        head = 0
        ngens = gens.shape[0]
        while head < count:
            base = elems[head]
            for gi in range(ngens):
                g = gens[gi]
                prod = np.empty(nn, np.int64)
                for i in range(n):
                    for j in range(n):
                        acc = mul[base[i * n], g[j]]
                        for k in range(1, n):
                            acc = add[acc, mul[base[i * n + k], g[k * n + j]]]
                        prod[i * n + j] = acc
                key = np.int64(0)
                for t in range(nn):
                    key += prod[t] * pw[t]
                h = _nb_hash_slot(key, cap_mask)
                while slots[h] != -1 and keys[slots[h]] != key:
                    h = (h + 1) & cap_mask
                if slots[h] == -1:
                    if count >= budget:
                        overflow = True
                        break
                    if count == cap_e:
                        cap_e *= 2
                        new_e = np.empty((cap_e, nn), np.int64)
                        new_e[:count] = elems[:count]
                        elems = new_e
                        new_k = np.empty(cap_e, np.int64)
                        new_k[:count] = keys[:count]
                        keys = new_k
                    elems[count] = prod
                    keys[count] = key
                    slots[h] = count
                    count += 1
            if overflow:
                break
            head += 1
        out_keys = keys[:count]
        out_elems = elems[:count]
        order = np.argsort(out_keys, kind="mergesort")
        return (not overflow), out_elems[order], out_keys[order]

    @njit(cache=True)
    def _nb_center_mask(elems, gens, add, mul, n):
        N = elems.shape[0]
        out = np.ones(N, np.bool_)
        ngens = gens.shape[0]
        for idx in range(N):
            e = elems[idx]
            ok = True
            for gi in range(ngens):
                g = gens[gi]
                for i in range(n):
                    for j in range(n):
                        acc1 = mul[e[i * n], g[j]]
                        acc2 = mul[g[i * n], e[j]]
                        for k in range(1, n):
                            acc1 = add[acc1, mul[e[i * n + k], g[k * n + j]]]
                            acc2 = add[acc2, mul[g[i * n + k], e[k * n + j]]]
                        if acc1 != acc2:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            out[idx] = ok
        return out

    @njit(cache=True)
    def _nb_coset_labels(elems, keys, sub, add, mul, n, q):
        nn = n * n
        pw = np.empty(nn, np.int64)
        pw[nn - 1] = 1
        for t in range(nn - 2, -1, -1):
            pw[t] = pw[t + 1] * q
        N = elems.shape[0]
        m = sub.shape[0]
        labels = np.full(N, -1, np.int64)
        reps = np.empty(N, np.int64)
        ncos = 0
        ok = True
        for i in range(N):
            if labels[i] >= 0:
                continue
            e = elems[i]
            for s in range(m):
                b = sub[s]
                key = np.int64(0)
                for r in range(n):
                    for c in range(n):
                        acc = mul[e[r * n], b[c]]
                        for k in range(1, n):
                            acc = add[acc, mul[e[r * n + k], b[k * n + c]]]
                        key += acc * pw[r * n + c]
                lo = 0
                hi = N
                while lo < hi:
                    mid = (lo + hi) // 2
                    if keys[mid] < key:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo >= N or keys[lo] != key:
                    ok = False
                else:
                    labels[lo] = ncos
            reps[ncos] = i
            ncos += 1
        return ok, labels, reps[:ncos]


# -- dispatch ----------------------------------------------------------


def available_backends():
    names = ["numpy"]
    if NUMBA_AVAILABLE:
        names.append("numba")
    return names


def active_backend_name(override=None):
    name = override or os.environ.get("ABELSLAB_BACKEND")
    if name is None:
        return "numba" if NUMBA_AVAILABLE else "numpy"
    name = name.strip().lower()
    if name not in ("numba", "numpy"):
        raise KernelError(f"unknown backend {name!r}")
    if name == "numba" and not NUMBA_AVAILABLE:
        raise KernelError("numba backend requested but numba is unavailable")
    return name


def mul_single(cr, a, b, n, backend=None):
    if active_backend_name(backend) == "numba":
        return _nb_mul_single(a, b, cr.add, cr.mul, n)
    return _np_mul_single(a, b, cr.add, cr.mul, n)


def mul_batch_right(cr, As, b, n, backend=None):
    if active_backend_name(backend) == "numba":
        return _nb_mul_batch_right(As, b, cr.add, cr.mul, n)
    return _np_mul_batch_right(As, b, cr.add, cr.mul, n)


def mul_batch_left(cr, a, Bs, n, backend=None):
    if active_backend_name(backend) == "numba":
        return _nb_mul_batch_left(a, Bs, cr.add, cr.mul, n)
    return _np_mul_batch_left(a, Bs, cr.add, cr.mul, n)


def mul_pairwise(cr, As, Bs, n, backend=None):
    if active_backend_name(backend) == "numba":
        return _nb_mul_pairwise(As, Bs, cr.add, cr.mul, n)
    return _np_mul_pairwise(As, Bs, cr.add, cr.mul, n)


def group_closure(cr, gens, n, budget=None, backend=None):
    """BFS closure of the generated subgroup, seeded with the identity.

    Returns (status, elems, keys) with elems sorted by packed key; status is
    "complete" or "overflow" (partial set, still sorted and deduplicated).
    """
    budget = get_budget(budget)
    if budget > 2**26:
        raise KernelError("closure budget too large for the hash table")
    if not fits_packing(cr.q, n):
        raise KernelError(f"q={cr.q}, n={n} does not pack into int64")
    if gens.ndim != 2 or gens.shape[1] != n * n:
        raise KernelError("generator array must have shape (m, n*n)")
    if gens.shape[0] == 0:
        ident = identity_vec(cr, n)[None, :]
        return "complete", ident, ident @ _powers(cr.q, n * n)
    seed = np.concatenate([identity_vec(cr, n)[None, :], gens])
    if active_backend_name(backend) == "numba":
        ok, elems, keys = _nb_closure_impl(
            seed, gens, cr.add, cr.mul, n, cr.q, budget
        )
        return ("complete" if ok else "overflow"), elems, keys
    return _np_closure_impl(seed, gens, cr.add, cr.mul, n, cr.q, budget)


def center_mask(cr, elems, gens, n, backend=None):
    if active_backend_name(backend) == "numba":
        return _nb_center_mask(elems, gens, cr.add, cr.mul, n)
    return _np_center_mask(elems, gens, cr.add, cr.mul, n)


def coset_labels(cr, elems, keys, sub, n, backend=None):
    """Left-coset labels g*H over a group sorted by packed key.

    Labels are assigned in element (key) order, so the representative of
    each coset is automatically its minimal element.  Returns (labels,
    rep_indices).
    """
    if active_backend_name(backend) == "numba":
        ok, labels, reps = _nb_coset_labels(
            elems, keys, sub, cr.add, cr.mul, n, cr.q
        )
        if not ok:
            raise KernelError("coset member escapes the element set")
        return labels, reps
    return _np_coset_labels(elems, keys, sub, cr.add, cr.mul, n, cr.q)


def closure_python(ring, gen_mats, budget=None):
    """Set-based closure over Matrix objects; no packing requirement."""
    budget = get_budget(budget)
    if not gen_mats:
        raise KernelError("empty generator list")
    n = gen_mats[0].n
    ident = Matrix.identity(ring, n)
    seen = {ident}
    frontier = [ident]
    for g in gen_mats:
        if g not in seen:
            seen.add(g)
            frontier.append(g)
    status = "complete"
    while frontier:
        nxt = []
        for x in frontier:
            for g in gen_mats:
                y = x.mul(g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > budget:
            status = "overflow"
            break
        frontier = nxt
    return status, seen
