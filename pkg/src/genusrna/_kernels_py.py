"""Pure-Python reference implementation of the linear-time kernels.

Every function takes and returns numpy ``int64`` arrays so that the compiled
module ``_kernels`` can replace this one without callers noticing. Loops run
over plain lists, which is the slow but dependable path.
"""
from bisect import bisect_left

import numpy as np


def plane_tree_partner(word):
    """Turn a step word into the arc partners of a non-crossing perfect matching.

    ``word`` has length 2n+1 and contains exactly n up-steps (nonzero entries).
    By the cycle lemma exactly one rotation of it is a Dyck word followed by a
    single down-step; that rotation starts right after the first position where
    the prefix height reaches its global minimum. The Dyck word is matched with
    a stack, and ``partner[i]`` is the position paired with ``i``.
    """
    steps = [1 if w else 0 for w in np.asarray(word).tolist()]
    length = len(steps)
    if length % 2 != 1:
        raise ValueError("word length must be odd (2n+1)")
    n = (length - 1) // 2
    if sum(steps) != n:
        raise ValueError("word must contain exactly n up-steps")
    height = lowest = 0
    start = 0
    for i, s in enumerate(steps):
        height += 1 if s else -1
        if height < lowest:
            lowest = height
            start = i + 1
    partner = [0] * (2 * n)
    stack = []
    for i in range(2 * n):
        if steps[(start + i) % length]:
            stack.append(i)
        else:
            j = stack.pop()
            partner[i] = j
            partner[j] = i
    return np.array(partner, dtype=np.int64)


def tour_order(sigma, alpha, root):
    """Half-edges in the order the face permutation ``alpha o sigma`` visits them from ``root``.

    Returns only the cycle through ``root``; callers compare its length with
    the number of half-edges to detect maps with more than one face.
    """
    s = sigma.tolist()
    a = alpha.tolist()
    size = len(s)
    if size == 0:
        return np.empty(0, dtype=np.int64)
    out = []
    h = int(root)
    while True:
        out.append(h)
        h = a[s[h]]
        if h == root or len(out) == size:
            break
    if h != root:
        raise ValueError("face permutation does not return to the root")
    return np.array(out, dtype=np.int64)


def cycle_ids(perm):
    """Label each point with the index of its cycle, cycles numbered by smallest point."""
    p = perm.tolist()
    ids = [-1] * len(p)
    count = 0
    for i in range(len(p)):
        if ids[i] >= 0:
            continue
        h = i
        while ids[h] < 0:
            ids[h] = count
            h = p[h]
        count += 1
    return np.array(ids, dtype=np.int64), count


def cycle_min_mask(perm, rank):
    """Mark, in every cycle of ``perm``, the point of smallest ``rank``."""
    p = perm.tolist()
    r = rank.tolist()
    size = len(p)
    seen = [False] * size
    mask = [False] * size
    for i in range(size):
        if seen[i]:
            continue
        best = h = i
        while not seen[h]:
            seen[h] = True
            if r[h] < r[best]:
                best = h
            h = p[h]
        mask[best] = True
    return np.array(mask, dtype=bool)


def tree_word(n, randoms):
    """Uniform word of length 2n+1 with exactly n up-steps, by sequential selection.

    Position ``i`` becomes an up-step when a uniform integer below the number
    of remaining positions falls below the number of up-steps still to place.
    Uniform integers come from the 32-bit words in ``randoms`` by Lemire's
    multiply-and-reject method, so the result is exact. Returns
    ``(word, used)``, or ``(None, used)`` when ``randoms`` ran out.
    """
    r = randoms.tolist()
    avail = len(r)
    length = 2 * n + 1
    word = [0] * length
    ones = n
    pos = 0
    for i in range(length):
        s = length - i
        if ones == 0:
            break
        if ones == s:
            word[i:] = [1] * s
            break
        if pos >= avail:
            return None, pos
        m = r[pos] * s
        pos += 1
        low = m & 0xFFFFFFFF
        if low < s:
            t = (0x100000000 - s) % s
            while low < t:
                if pos >= avail:
                    return None, pos
                m = r[pos] * s
                pos += 1
                low = m & 0xFFFFFFFF
        if (m >> 32) < ones:
            word[i] = 1
            ones -= 1
    return np.array(word, dtype=np.uint8), pos


def _select_minima(p, planar, chosen):
    """Vertex minima at sorted positions ``chosen`` among all minima in tour order.

    Non-crossing input needs no cycle walk: its minima are 0 and every
    half-edge that follows the opening end of an arc.
    """
    size = len(p)
    wanted = iter(chosen)
    want = next(wanted)
    out = []
    nv = 0
    seen = None if planar else [False] * size
    for i in range(size):
        if planar:
            if i and p[i - 1] < i - 1:
                continue
        elif seen[i]:
            continue
        if nv == want:
            out.append(i)
            if len(out) == len(chosen):
                return out
            want = next(wanted)
        nv += 1
        if not planar:
            h = i
            while not seen[h]:
                seen[h] = True
                h = (p[h] + 1) % size
    raise ValueError("vertex index out of range")


def glue_partner_path(partner, steps, start_genus=0):
    """Apply successive gluings to the canonical dual map of a matching.

    ``partner`` is a 0-based partner array of a matching of genus
    ``start_genus``. Each entry of ``steps`` lists, in increasing order,
    positions into the sorted vertex minima of the current map; those
    vertices are glued (last three first, then pairs leftwards into the last
    one) and the map is relabelled by tour rank. Returns the partner array
    of the final map.

    Gluing changes sigma only at the chosen minima, so the new tour is the
    old one cut after each of them with the pieces reordered; relabelling is
    a shift per piece and every pass over the array is sequential.
    """
    p = np.asarray(partner).tolist()
    size = len(p)
    genus = start_genus
    for chosen in steps:
        chosen = [int(c) for c in chosen]
        k = len(chosen)
        if k < 3 or k % 2 == 0:
            raise ValueError("each step glues an odd number (at least 3) of vertices")
        cuts = _select_minima(p, genus == 0, chosen)
        # sigma'(cuts[j]) = sigma(cuts[perm[j]])
        perm = list(range(k))
        last = k - 1
        pairs = [(k - 3, k - 2)] + [(i - 1, i) for i in range(k - 4, -1, -2)]
        for a, b in pairs:
            perm[a], perm[b], perm[last] = perm[b], perm[last], perm[a]
        starts = [0] + [c + 1 for c in cuts]
        ends = cuts + [size - 1]
        nxt = [perm[j] + 1 for j in range(k)] + [0]
        if starts[k] > ends[k]:
            starts.pop()
            ends.pop()
            nxt = [0 if j == k else j for j in nxt[:k]]
        offset = [None] * len(starts)
        j = total = 0
        while offset[j] is None:
            offset[j] = total
            total += ends[j] - starts[j] + 1
            j = nxt[j]
        if j != 0 or total != size:
            raise AssertionError("gluing broke unicellularity")
        q = [0] * size
        for j, (lo, hi) in enumerate(zip(starts, ends)):
            shift = offset[j] - lo
            for z in range(lo, hi + 1):
                src = cuts[perm[j]] if j < k and z == hi else z
                w = (p[src] + 1) % size
                i = bisect_left(cuts, w)
                q[z + shift] = (offset[i] + w - starts[i] - 1) % size
        p = q
        genus += (k - 1) // 2
    return np.array(p, dtype=np.int64)


def tree_glue(word, steps):
    """``glue_partner_path(plane_tree_partner(word), steps)`` in one call."""
    return glue_partner_path(plane_tree_partner(word), steps)
