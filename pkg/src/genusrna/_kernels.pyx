# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the linear-time loops in ``_kernels_py``.

Both modules expose the same functions with the same semantics; see the
pure-Python module for documentation.
"""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int32_t, uint32_t, uint64_t

cnp.import_array()

ctypedef cnp.int64_t i64


def plane_tree_partner(const cnp.uint8_t[::1] word):
    cdef Py_ssize_t length = word.shape[0]
    if length % 2 != 1:
        raise ValueError("word length must be odd (2n+1)")
    cdef Py_ssize_t n = (length - 1) // 2
    cdef Py_ssize_t i, k, start = 0, top = 0
    cdef i64 height = 0, lowest = 0
    cdef Py_ssize_t ups = 0
    for i in range(length):
        if word[i]:
            height += 1
            ups += 1
        else:
            height -= 1
        if height < lowest:
            lowest = height
            start = i + 1
    if ups != n:
        raise ValueError("word must contain exactly n up-steps")
    partner = np.empty(2 * n, dtype=np.int64)
    cdef i64[::1] p = partner
    cdef i64[::1] stack = np.empty(n + 1, dtype=np.int64)
    cdef Py_ssize_t lo, hi, part
    i = 0
    # the rotation starting at ``start``, minus its final down-step
    for part in range(2):
        if part == 0:
            lo, hi = start, length
        else:
            lo, hi = 0, start - 1
        for k in range(lo, hi):
            if word[k]:
                stack[top] = i
                top += 1
            else:
                top -= 1
                p[i] = stack[top]
                p[stack[top]] = i
            i += 1
    return partner


def tour_order(const i64[::1] sigma, const i64[::1] alpha, i64 root):
    cdef Py_ssize_t size = sigma.shape[0], count = 0
    order = np.empty(size, dtype=np.int64)
    if size == 0:
        return order
    cdef i64[::1] out = order
    cdef i64 h = root
    while True:
        out[count] = h
        count += 1
        h = alpha[sigma[h]]
        if h == root or count == size:
            break
    if h != root:
        raise ValueError("face permutation does not return to the root")
    return order[:count]


def cycle_ids(const i64[::1] perm):
    cdef Py_ssize_t size = perm.shape[0], i
    ids = np.full(size, -1, dtype=np.int64)
    cdef i64[::1] out = ids
    cdef i64 count = 0, h
    for i in range(size):
        if out[i] >= 0:
            continue
        h = i
        while out[h] < 0:
            out[h] = count
            h = perm[h]
        count += 1
    return ids, int(count)


def cycle_min_mask(const i64[::1] perm, const i64[::1] rank):
    cdef Py_ssize_t size = perm.shape[0], i
    mask = np.zeros(size, dtype=np.bool_)
    cdef cnp.uint8_t[::1] out = mask.view(np.uint8)
    cdef cnp.uint8_t[::1] seen = np.zeros(size, dtype=np.uint8)
    cdef i64 h, best
    for i in range(size):
        if seen[i]:
            continue
        best = i
        h = i
        while not seen[h]:
            seen[h] = 1
            if rank[h] < rank[best]:
                best = h
            h = perm[h]
        out[best] = 1
    return mask


def tree_word(Py_ssize_t n, const uint32_t[::1] randoms):
    cdef Py_ssize_t length = 2 * n + 1, i, j, pos = 0, avail = randoms.shape[0]
    cdef Py_ssize_t ones = n
    cdef uint64_t s, m
    cdef uint32_t low, t
    word = np.zeros(length, dtype=np.uint8)
    cdef cnp.uint8_t[::1] w = word
    for i in range(length):
        s = length - i
        if ones == 0:
            break
        if <uint64_t>ones == s:
            for j in range(i, length):
                w[j] = 1
            break
        if pos >= avail:
            return None, pos
        m = <uint64_t>randoms[pos] * s
        pos += 1
        low = <uint32_t>m
        if low < s:
            t = <uint32_t>((<uint64_t>0x100000000 - s) % s)
            while low < t:
                if pos >= avail:
                    return None, pos
                m = <uint64_t>randoms[pos] * s
                pos += 1
                low = <uint32_t>m
        if (m >> 32) < <uint64_t>ones:
            w[i] = 1
            ones -= 1
    return word, pos


# int32 work arrays kept between calls; the GIL is held throughout, so one set suffices
_scratch = [np.empty(0, dtype=np.int32) for _ in range(5)]


cdef int32_t[::1] _work(int slot, Py_ssize_t size):
    if _scratch[slot].shape[0] < size:
        _scratch[slot] = np.empty(size + size // 2, dtype=np.int32)
    return _scratch[slot]


cdef object _as_int64(int32_t[::1] p, Py_ssize_t size):
    out = np.empty(size, dtype=np.int64)
    cdef i64[::1] o = out
    cdef Py_ssize_t i
    for i in range(size):
        o[i] = p[i]
    return out


cdef void _tree_vertex_ids(int32_t[::1] p, int32_t[::1] vid, int32_t[::1] stack,
                           Py_ssize_t size):
    # a corner of a plane tree sits in the loop of the innermost arc around it
    cdef Py_ssize_t x, top = 0
    for x in range(size):
        vid[x] = stack[top - 1] if top else 0
        if p[x] > x:
            stack[top] = <int32_t>(x + 1)
            top += 1
        else:
            top -= 1


cdef void _walk_vertex_ids(int32_t[::1] p, int32_t[::1] vid, Py_ssize_t size):
    cdef Py_ssize_t i
    cdef int32_t h, x
    for i in range(size):
        vid[i] = -1
    for i in range(size):
        if vid[i] >= 0:
            continue
        h = <int32_t>i
        while vid[h] < 0:
            vid[h] = <int32_t>i
            x = p[h] + 1
            h = x if x < size else 0


cdef int _select_minima(int32_t[::1] p, int32_t[::1] vid, Py_ssize_t size, int mode,
                        list chosen, int32_t* out) except -1:
    """Vertex minima at sorted positions ``chosen``.

    ``mode`` 0: non-crossing input, whose minima are 0 and every half-edge
    after an opening end. 1: first occurrences of the ids in ``vid``. 2: walk
    the vertex cycles.
    """
    cdef Py_ssize_t i, nv = 0, j = 0, k = len(chosen), want = chosen[0]
    cdef int32_t h, x, v
    cdef cnp.uint8_t[::1] seen
    if mode == 1:
        seen = np.zeros((size >> 3) + 1, dtype=np.uint8)
    elif mode == 2:
        seen = np.zeros(size, dtype=np.uint8)
    for i in range(size):
        if mode == 0:
            if i and p[i - 1] < i - 1:
                continue
        elif mode == 1:
            v = vid[i]
            if seen[v >> 3] & (1 << (v & 7)):
                continue
            seen[v >> 3] |= 1 << (v & 7)
        else:
            if seen[i]:
                continue
            h = <int32_t>i
            while not seen[h]:
                seen[h] = 1
                x = p[h] + 1
                h = x if x < size else 0
        if nv == want:
            out[j] = <int32_t>i
            j += 1
            if j == k:
                return 0
            want = chosen[j]
        nv += 1
    raise ValueError("vertex index out of range")


cdef object _glue_in_place(int32_t[::1] p, int32_t[::1] q, int32_t[::1] vid,
                           int32_t[::1] vid2, Py_ssize_t size, steps, Py_ssize_t genus,
                           bint ids):
    """Run the gluing steps on ``p``; the last one writes the ``int64`` result.

    With ``ids`` set, ``vid`` holds a vertex id per half-edge; it is carried
    through each relabelling so later steps find minima without cycle walks.
    """
    cdef Py_ssize_t i, j, k, z, a, b, last, t, nseg, total, dest
    cdef int32_t cuts[64]
    cdef int32_t perm[64]
    cdef int32_t glued[64]
    cdef Py_ssize_t seg_start[65]
    cdef Py_ssize_t seg_end[65]
    cdef Py_ssize_t offset[65]
    cdef Py_ssize_t nxt[65]
    cdef int32_t w, src, r, v
    cdef Py_ssize_t step, nsteps = len(steps)
    cdef bint final, track, hit
    cdef i64[::1] o
    out = None
    if nsteps == 0:
        return _as_int64(p, size)
    for step in range(nsteps):
        chosen = [int(c) for c in steps[step]]
        k = len(chosen)
        if k < 3 or k % 2 == 0 or k > 63:
            raise ValueError("each step glues an odd number (3..63) of vertices")
        _select_minima(p, vid, size, 0 if genus == 0 else (1 if ids else 2), chosen, cuts)
        final = step == nsteps - 1
        track = ids and not final
        if track:
            for t in range(k):
                glued[t] = vid[cuts[t]]
        # sigma'(cuts[j]) = sigma(cuts[perm[j]])
        for j in range(k):
            perm[j] = <int32_t>j
        last = k - 1
        a, b = k - 3, k - 2
        while True:
            t = perm[a]
            perm[a] = perm[b]
            perm[b] = perm[last]
            perm[last] = <int32_t>t
            if a < 2:
                break
            a, b = a - 2, a - 1
        # the old tour cut after each glued half-edge: interval j ends at cuts[j]
        for j in range(k):
            seg_start[j] = cuts[j - 1] + 1 if j else 0
            seg_end[j] = cuts[j]
            nxt[j] = perm[j] + 1
        seg_start[k] = cuts[k - 1] + 1
        seg_end[k] = size - 1
        nxt[k] = 0
        nseg = k + 1
        if seg_start[k] > seg_end[k]:
            nseg = k
            for j in range(k):
                if nxt[j] == k:
                    nxt[j] = 0
        for j in range(nseg):
            offset[j] = -1
        j = 0
        total = 0
        while offset[j] < 0:
            offset[j] = total
            total += seg_end[j] - seg_start[j] + 1
            j = nxt[j]
        if j != 0 or total != size:
            raise AssertionError("gluing broke unicellularity")
        if final:
            out = np.empty(size, dtype=np.int64)
            o = out
        for j in range(nseg):
            for z in range(seg_start[j], seg_end[j] + 1):
                # a cut point continues where sigma' now sends it
                src = cuts[perm[j]] if j < k and z == seg_end[j] else <int32_t>z
                w = p[src] + 1
                if w == size:
                    w = 0
                i = 0
                for t in range(k):
                    i += w > cuts[t]
                r = <int32_t>(offset[i] + w - seg_start[i] - 1)
                if r < 0:
                    r = <int32_t>(size - 1)
                dest = offset[j] + z - seg_start[j]
                if final:
                    o[dest] = r
                else:
                    q[dest] = r
                if track:
                    v = vid[z]
                    hit = False
                    for t in range(k):
                        hit |= v == glued[t]
                    vid2[dest] = glued[0] if hit else v
        p, q = q, p
        if track:
            vid, vid2 = vid2, vid
        genus += (k - 1) // 2
    return out


def glue_partner_path(const i64[::1] partner, steps, Py_ssize_t start_genus=0):
    cdef Py_ssize_t size = partner.shape[0], i
    cdef int32_t[::1] p = _work(0, size), q = _work(1, size)
    cdef int32_t[::1] vid = _work(3, size), vid2 = _work(4, size)
    for i in range(size):
        p[i] = <int32_t>partner[i]
    cdef bint ids = len(steps) > 1
    if ids:
        if start_genus == 0:
            _tree_vertex_ids(p, vid, _work(2, size // 2 + 1), size)
        else:
            _walk_vertex_ids(p, vid, size)
    return _glue_in_place(p, q, vid, vid2, size, steps, start_genus, ids)


def tree_glue(const cnp.uint8_t[::1] word, steps):
    cdef Py_ssize_t length = word.shape[0]
    if length % 2 != 1:
        raise ValueError("word length must be odd (2n+1)")
    cdef Py_ssize_t n = (length - 1) // 2, size = length - 1
    cdef Py_ssize_t i, k, start = 0, top = 0, ups = 0, lo, hi, part
    cdef i64 height = 0, lowest = 0
    for i in range(length):
        if word[i]:
            height += 1
            ups += 1
        else:
            height -= 1
        if height < lowest:
            lowest = height
            start = i + 1
    if ups != n:
        raise ValueError("word must contain exactly n up-steps")
    cdef int32_t[::1] p = _work(0, size), q = _work(1, size), stack = _work(2, n + 1)
    cdef int32_t[::1] vid = _work(3, size), vid2 = _work(4, size)
    cdef bint ids = len(steps) > 1
    i = 0
    # the rotation starting at ``start``, minus its final down-step
    for part in range(2):
        if part == 0:
            lo, hi = start, length
        else:
            lo, hi = 0, start - 1
        for k in range(lo, hi):
            if ids:
                vid[i] = stack[top - 1] + 1 if top else 0
            if word[k]:
                stack[top] = <int32_t>i
                top += 1
            else:
                top -= 1
                p[i] = stack[top]
                p[stack[top]] = <int32_t>i
            i += 1
    return _glue_in_place(p, q, vid, vid2, size, steps, 0, ids)
