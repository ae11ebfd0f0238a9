"""Pure-Python reference kernels.

Every function here has a twin in ``_ckernels.pyx`` with the same signature and
the same output (canonical codes are byte-identical). Bitsets are Python ints;
bit ``v`` stands for host vertex ``v``.

Pattern vertices are passed already reordered into search order. For search
position ``i``, ``pred_red[i]`` is the mask of earlier positions ``j < i`` whose
pattern pair with ``i`` is red, ``pred_blue[i]`` likewise for blue.
"""

from __future__ import annotations

from itertools import combinations

BACKEND = "python"


def find_embedding(red, blue, allowed, must, pred_red, pred_blue):
    """Return host vertices for each search position, or None.

    ``red[v]``/``blue[v]`` are the two-coloured neighbourhoods of host vertex v.
    ``must`` (or -1) is a host vertex that the image has to include.
    """
    h = len(pred_red)
    if h == 0:
        return [] if must < 0 else None
    image = [0] * h
    must_bit = (1 << must) if must >= 0 else 0

    def rec(i, used):
        cand = allowed & ~used
        pr = pred_red[i]
        pb = pred_blue[i]
        for j in range(i):
            bit = 1 << j
            if pr & bit:
                cand &= red[image[j]]
            elif pb & bit:
                cand &= blue[image[j]]
            if not cand:
                return False
        if must_bit and not (used & must_bit) and i == h - 1:
            cand &= must_bit
        while cand:
            low = cand & -cand
            cand ^= low
            image[i] = low.bit_length() - 1
            if i + 1 == h:
                return True
            if rec(i + 1, used | low):
                return True
        return False

    if rec(0, 0):
        return list(image)
    return None


def copy_subsets(red, blue, n, pred_red, pred_blue):
    """Masks of all h-subsets of [n] that carry at least one embedding."""
    h = len(pred_red)
    out = []
    for combo in combinations(range(n), h):
        mask = 0
        for v in combo:
            mask |= 1 << v
        if find_embedding(red, blue, mask, -1, pred_red, pred_blue) is not None:
            out.append(mask)
    return out


def canonical_code(n, codes):
    """Canonical form of a vertex- and pair-coloured complete graph.

    ``codes`` is the n*n colour matrix (diagonal = vertex colour, 0 for plain
    igraphs). Returns the lexicographically least column-major code
    ``diag(j), c(0,j), ..., c(j-1,j)`` over all relabellings that sort vertices
    by an isomorphism-invariant colour-degree signature.
    """
    if n == 0:
        return b""
    sig = []
    for v in range(n):
        cnt = [0, 0, 0, 0]
        base = v * n
        for u in range(n):
            if u != v:
                cnt[codes[base + u]] += 1
        sig.append((codes[base + v], cnt[0], cnt[1], cnt[2], cnt[3]))
    ordered = sorted(sig)
    cells = [[v for v in range(n) if sig[v] == ordered[j]] for j in range(n)]

    best = [None] * n
    have_best = [False]
    less = [False] * n
    perm = [0] * n
    used = [False] * n

    def rec(j):
        for v in cells[j]:
            if used[v]:
                continue
            # re-read every iteration: a leaf below a sibling may have reset best
            parent_less = not have_best[0] or (j > 0 and less[j - 1])
            col = [codes[v * n + v]]
            for i in range(j):
                col.append(codes[perm[i] * n + v])
            if parent_less:
                less[j] = True
            else:
                b = best[j]
                if col > b:
                    continue
                less[j] = col < b
            perm[j] = v
            if j + 1 == n:
                if less[j]:
                    for k in range(n):
                        c = [codes[perm[k] * n + perm[k]]]
                        for i in range(k):
                            c.append(codes[perm[i] * n + perm[k]])
                        best[k] = c
                    have_best[0] = True
                    for k in range(n):
                        less[k] = False
                continue
            used[v] = True
            rec(j + 1)
            used[v] = False

    rec(0)
    out = bytearray()
    for col in best:
        out.extend(col)
    return bytes(out)


def scan_ifree(adj_rows, n, pred_red, pred_blue):
    """Flag each plain graph (list of adjacency masks) that is pattern-ifree."""
    full = (1 << n) - 1
    allowed = full
    flags = []
    for adj in adj_rows:
        red = list(adj)
        blue = [full & ~adj[v] & ~(1 << v) for v in range(n)]
        flags.append(find_embedding(red, blue, allowed, -1, pred_red, pred_blue) is None)
    return flags


def kex_bnb(n, pred_red, pred_blue, w_red, w_blue, w_green, lower, prefix):
    """Pair-level branch and bound for the maximum-weight pattern-free igraph.

    Pairs are coloured in column-major order (0,1),(0,2),(1,2),(0,3),...
    Weights are integers (p scaled by its denominator); ``w_green`` is the
    per-pair upper bound. ``prefix`` fixes the colours of the first pairs
    (1 red, 2 blue, 3 green). Returns ``(best, leaves, nodes, pruned)`` where
    ``leaves`` holds every colouring (tuple of codes) of weight ``best``, and
    only colourings of weight ``>= lower`` are reported.
    """
    h = len(pred_red)
    pairs = [(i, j) for j in range(n) for i in range(j)]
    npairs = len(pairs)
    red = [0] * n
    blue = [0] * n
    colours = [0] * npairs
    wt = {1: w_red, 2: w_blue, 3: w_green}
    order = [3] + ([1, 2] if w_red >= w_blue else [2, 1])
    state = {"best": lower, "leaves": [], "nodes": 0, "pruned": 0}

    def place(k, c):
        i, j = pairs[k]
        if c & 1:
            red[i] |= 1 << j
            red[j] |= 1 << i
        if c & 2:
            blue[i] |= 1 << j
            blue[j] |= 1 << i

    def unplace(k):
        i, j = pairs[k]
        red[i] &= ~(1 << j)
        red[j] &= ~(1 << i)
        blue[i] &= ~(1 << j)
        blue[j] &= ~(1 << i)

    def free_after(k):
        i, j = pairs[k]
        if i + 2 < h:
            return True
        allowed = ((1 << (i + 1)) - 1) | (1 << j)
        return find_embedding(red, blue, allowed, j, pred_red, pred_blue) is None

    def rec(k, weight):
        state["nodes"] += 1
        if k == npairs:
            if weight > state["best"]:
                state["best"] = weight
                state["leaves"] = []
            if weight == state["best"]:
                state["leaves"].append(tuple(colours))
            return
        remaining = npairs - k - 1
        choices = [prefix[k]] if k < len(prefix) else order
        for c in choices:
            w = weight + wt[c]
            if w + remaining * w_green < state["best"]:
                state["pruned"] += 1
                continue
            place(k, c)
            colours[k] = c
            if free_after(k):
                rec(k + 1, w)
            else:
                state["pruned"] += 1
            unplace(k)

    rec(0, 0)
    return state["best"], state["leaves"], state["nodes"], state["pruned"]


def partition_bnb(n, k, cost_in, cost_cross, upper):
    """Minimum-cost assignment of [n] into at most k labelled-free parts.

    ``cost_in[u][v]`` is paid when u, v share a part, ``cost_cross[u][v]``
    otherwise. Returns ``(cost, parts)`` with ``parts[v]`` the part index, or
    ``(upper, None)`` when nothing beats ``upper``. Parts are opened in order,
    which removes the k! relabelling symmetry.
    """
    assign = [-1] * n
    best = [upper, None]

    def rec(v, used, cost):
        if v == n:
            if cost < best[0]:
                best[0] = cost
                best[1] = list(assign)
            return
        # admissible bound: cheapest placement of each remaining vertex against
        # already-placed vertices only
        bound = cost
        for u in range(v, n):
            m = None
            for part in range(min(used + 1, k)):
                s = 0
                for w in range(v):
                    s += cost_in[u][w] if assign[w] == part else cost_cross[u][w]
                if m is None or s < m:
                    m = s
            bound += m
            if bound >= best[0]:
                return
        for part in range(min(used + 1, k)):
            s = 0
            for w in range(v):
                s += cost_in[v][w] if assign[w] == part else cost_cross[v][w]
            if cost + s >= best[0]:
                continue
            assign[v] = part
            rec(v + 1, max(used, part + 1), cost + s)
            assign[v] = -1

    rec(0, 0, 0)
    return best[0], best[1]
