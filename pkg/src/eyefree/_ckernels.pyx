# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as ``_kernels_py``.

Host graphs are limited to 63 vertices (one machine word per neighbourhood),
canonical forms to 32 vertices.
"""

from libc.stdint cimport uint64_t
from libc.string cimport memcpy
from cpython.mem cimport PyMem_Malloc, PyMem_Free

BACKEND = "cython"

cdef enum:
    MAXN = 63
    MAXC = 32
    MAXT = 528  # MAXC * (MAXC + 1) / 2

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline uint64_t _bit(int v) nogil:
    return (<uint64_t>1) << v


cdef uint64_t _cands(const uint64_t* red, const uint64_t* blue, uint64_t allowed,
                     uint64_t used, uint64_t must_bit, const uint64_t* pr,
                     const uint64_t* pb, int h, int i, const int* image) nogil:
    cdef uint64_t c = allowed & ~used
    cdef int j
    for j in range(i):
        if (pr[i] >> j) & 1:
            c &= red[image[j]]
        elif (pb[i] >> j) & 1:
            c &= blue[image[j]]
        if c == 0:
            return 0
    if must_bit and not (used & must_bit) and i == h - 1:
        c &= must_bit
    return c


cdef int _embed(const uint64_t* red, const uint64_t* blue, uint64_t allowed, int must,
                const uint64_t* pr, const uint64_t* pb, int h, int* image) nogil:
    cdef uint64_t cand[MAXN + 1]
    cdef uint64_t used = 0
    cdef uint64_t low
    cdef uint64_t must_bit = _bit(must) if must >= 0 else 0
    cdef int i = 0
    if h == 0:
        return 1 if must < 0 else 0
    cand[0] = _cands(red, blue, allowed, used, must_bit, pr, pb, h, 0, image)
    while i >= 0:
        if cand[i] == 0:
            i -= 1
            if i >= 0:
                used &= ~_bit(image[i])
            continue
        low = cand[i] & (~cand[i] + 1)
        cand[i] ^= low
        image[i] = __builtin_ctzll(low)
        if i + 1 == h:
            return 1
        used |= low
        i += 1
        cand[i] = _cands(red, blue, allowed, used, must_bit, pr, pb, h, i, image)
    return 0


cdef int _load(seq, uint64_t* out, int limit) except -1:
    cdef int n = len(seq)
    if n > limit:
        raise ValueError("too many vertices for the compiled kernel")
    for i in range(n):
        out[i] = <uint64_t>seq[i]
    return n


def find_embedding(red, blue, allowed, must, pred_red, pred_blue):
    cdef uint64_t r[MAXN]
    cdef uint64_t b[MAXN]
    cdef uint64_t pr[MAXN]
    cdef uint64_t pb[MAXN]
    cdef int image[MAXN + 1]
    _load(red, r, MAXN)
    _load(blue, b, MAXN)
    cdef int h = _load(pred_red, pr, MAXN)
    _load(pred_blue, pb, MAXN)
    cdef uint64_t al = <uint64_t>allowed
    cdef int m = must
    cdef int ok
    with nogil:
        ok = _embed(r, b, al, m, pr, pb, h, image)
    if not ok:
        return None
    return [image[i] for i in range(h)]


def copy_subsets(red, blue, int n, pred_red, pred_blue):
    cdef uint64_t r[MAXN]
    cdef uint64_t b[MAXN]
    cdef uint64_t pr[MAXN]
    cdef uint64_t pb[MAXN]
    cdef int image[MAXN + 1]
    cdef int idx[MAXN + 1]
    _load(red, r, MAXN)
    _load(blue, b, MAXN)
    cdef int h = _load(pred_red, pr, MAXN)
    _load(pred_blue, pb, MAXN)
    out = []
    cdef int i, j
    cdef uint64_t mask
    if h > n:
        return out
    for i in range(h):
        idx[i] = i
    while True:
        mask = 0
        for i in range(h):
            mask |= _bit(idx[i])
        if _embed(r, b, mask, -1, pr, pb, h, image):
            out.append(mask)
        # next combination in lexicographic order
        i = h - 1
        while i >= 0 and idx[i] == n - h + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, h):
            idx[j] = idx[j - 1] + 1
    return out


cdef struct CanonCtx:
    int n
    unsigned char codes[MAXC * MAXC]
    int cell_start[MAXC]
    int cell_len[MAXC]
    int cell_members[MAXC * MAXC]
    unsigned char best[MAXT]
    unsigned char col[MAXC + 1]
    int have_best
    int less[MAXC]
    int perm[MAXC]
    int used[MAXC]


cdef void _canon_rec(CanonCtx* c, int j) nogil:
    cdef int n = c.n
    cdef int t, v, i, k, off, parent_less, cmp
    off = j * (j + 1) // 2
    for t in range(c.cell_len[j]):
        v = c.cell_members[j * MAXC + t]
        if c.used[v]:
            continue
        parent_less = (not c.have_best) or (j > 0 and c.less[j - 1])
        c.col[0] = c.codes[v * n + v]
        for i in range(j):
            c.col[i + 1] = c.codes[c.perm[i] * n + v]
        if parent_less:
            c.less[j] = 1
        else:
            cmp = 0
            for i in range(j + 1):
                if c.col[i] != c.best[off + i]:
                    cmp = -1 if c.col[i] < c.best[off + i] else 1
                    break
            if cmp > 0:
                continue
            c.less[j] = 1 if cmp < 0 else 0
        c.perm[j] = v
        if j + 1 == n:
            if c.less[j]:
                for k in range(n):
                    off = k * (k + 1) // 2
                    c.best[off] = c.codes[c.perm[k] * n + c.perm[k]]
                    for i in range(k):
                        c.best[off + i + 1] = c.codes[c.perm[i] * n + c.perm[k]]
                off = j * (j + 1) // 2
                c.have_best = 1
                for k in range(n):
                    c.less[k] = 0
            continue
        c.used[v] = 1
        _canon_rec(c, j + 1)
        c.used[v] = 0


def canonical_code(int n, codes):
    if n == 0:
        return b""
    if n > MAXC:
        raise ValueError("too many vertices for the compiled canonical form")
    cdef bytes raw = bytes(codes)
    cdef CanonCtx ctx
    ctx.n = n
    cdef int v, u, j
    cdef const unsigned char* src = raw
    memcpy(ctx.codes, src, n * n)
    sig = []
    for v in range(n):
        cnt = [0, 0, 0, 0]
        for u in range(n):
            if u != v:
                cnt[ctx.codes[v * n + u]] += 1
        sig.append((ctx.codes[v * n + v], cnt[0], cnt[1], cnt[2], cnt[3]))
    ordered = sorted(sig)
    for j in range(n):
        members = [v for v in range(n) if sig[v] == ordered[j]]
        ctx.cell_len[j] = len(members)
        for u in range(len(members)):
            ctx.cell_members[j * MAXC + u] = members[u]
        ctx.less[j] = 0
        ctx.used[j] = 0
        ctx.perm[j] = 0
    ctx.have_best = 0
    with nogil:
        _canon_rec(&ctx, 0)
    return bytes([ctx.best[i] for i in range(n * (n + 1) // 2)])


def scan_ifree(const uint64_t[:, ::1] adj_rows, int n, pred_red, pred_blue):
    cdef uint64_t pr[MAXN]
    cdef uint64_t pb[MAXN]
    cdef uint64_t blue[MAXN]
    cdef int image[MAXN + 1]
    cdef int h = _load(pred_red, pr, MAXN)
    _load(pred_blue, pb, MAXN)
    if n > MAXN:
        raise ValueError("too many vertices for the compiled kernel")
    cdef Py_ssize_t count = adj_rows.shape[0]
    cdef Py_ssize_t g
    cdef int v
    cdef uint64_t full = (_bit(n) - 1)
    out = bytearray(count)
    cdef unsigned char[::1] flags = out
    with nogil:
        for g in range(count):
            for v in range(n):
                blue[v] = full & ~adj_rows[g, v] & ~_bit(v)
            flags[g] = 0 if _embed(&adj_rows[g, 0], blue, full, -1, pr, pb, h, image) else 1
    return [bool(x) for x in out]


cdef struct BnbCtx:
    int n
    int h
    int npairs
    int pi[MAXC * MAXC]
    int pj[MAXC * MAXC]
    uint64_t red[MAXN]
    uint64_t blue[MAXN]
    uint64_t pr[MAXN]
    uint64_t pb[MAXN]
    int image[MAXN + 1]
    unsigned char colours[MAXC * MAXC]
    unsigned char prefix[MAXC * MAXC]
    int nprefix
    long long wt[4]
    long long w_green
    int order[3]
    long long best
    long long nodes
    long long pruned


cdef inline void _place(BnbCtx* c, int k, int col) nogil:
    cdef int i = c.pi[k]
    cdef int j = c.pj[k]
    if col & 1:
        c.red[i] |= _bit(j)
        c.red[j] |= _bit(i)
    if col & 2:
        c.blue[i] |= _bit(j)
        c.blue[j] |= _bit(i)


cdef inline void _unplace(BnbCtx* c, int k) nogil:
    cdef int i = c.pi[k]
    cdef int j = c.pj[k]
    c.red[i] &= ~_bit(j)
    c.red[j] &= ~_bit(i)
    c.blue[i] &= ~_bit(j)
    c.blue[j] &= ~_bit(i)


cdef inline int _free_after(BnbCtx* c, int k) nogil:
    cdef int i = c.pi[k]
    cdef int j = c.pj[k]
    if i + 2 < c.h:
        return 1
    cdef uint64_t allowed = (_bit(i + 1) - 1) | _bit(j)
    return 0 if _embed(c.red, c.blue, allowed, j, c.pr, c.pb, c.h, c.image) else 1


cdef int _bnb_rec(BnbCtx* c, int k, long long weight, list leaves) except -1:
    cdef int t, col, nchoice
    cdef long long w
    cdef int remaining
    cdef int choices[3]
    c.nodes += 1
    if k == c.npairs:
        if weight > c.best:
            c.best = weight
            del leaves[:]
        if weight == c.best:
            leaves.append(tuple([c.colours[t] for t in range(c.npairs)]))
        return 0
    remaining = c.npairs - k - 1
    if k < c.nprefix:
        choices[0] = c.prefix[k]
        nchoice = 1
    else:
        choices[0] = c.order[0]
        choices[1] = c.order[1]
        choices[2] = c.order[2]
        nchoice = 3
    for t in range(nchoice):
        col = choices[t]
        w = weight + c.wt[col]
        if w + remaining * c.w_green < c.best:
            c.pruned += 1
            continue
        _place(c, k, col)
        c.colours[k] = col
        if _free_after(c, k):
            _bnb_rec(c, k + 1, w, leaves)
        else:
            c.pruned += 1
        _unplace(c, k)
    return 0


def kex_bnb(int n, pred_red, pred_blue, long long w_red, long long w_blue,
            long long w_green, long long lower, prefix):
    if n > MAXC:
        raise ValueError("too many vertices for the compiled search")
    cdef BnbCtx* c = <BnbCtx*> PyMem_Malloc(sizeof(BnbCtx))
    if c == NULL:
        raise MemoryError()
    cdef int i, j, k
    leaves = []
    try:
        c.n = n
        c.h = _load(pred_red, c.pr, MAXN)
        _load(pred_blue, c.pb, MAXN)
        k = 0
        for j in range(n):
            for i in range(j):
                c.pi[k] = i
                c.pj[k] = j
                k += 1
        c.npairs = k
        for i in range(n):
            c.red[i] = 0
            c.blue[i] = 0
        c.nprefix = len(prefix)
        for i in range(c.nprefix):
            c.prefix[i] = prefix[i]
        c.wt[0] = 0
        c.wt[1] = w_red
        c.wt[2] = w_blue
        c.wt[3] = w_green
        c.w_green = w_green
        c.order[0] = 3
        if w_red >= w_blue:
            c.order[1] = 1
            c.order[2] = 2
        else:
            c.order[1] = 2
            c.order[2] = 1
        c.best = lower
        c.nodes = 0
        c.pruned = 0
        _bnb_rec(c, 0, 0, leaves)
        return c.best, leaves, c.nodes, c.pruned
    finally:
        PyMem_Free(c)



cdef struct PartCtx:
    int n
    int k
    long long cin[MAXN * MAXN]
    long long ccross[MAXN * MAXN]
    int assign[MAXN]
    int best_assign[MAXN]
    long long best
    int found


cdef void _part_rec(PartCtx* c, int v, int used, long long cost) nogil:
    cdef int n = c.n
    cdef int u, w, part, lim
    cdef long long s, m, bound
    if v == n:
        if cost < c.best:
            c.best = cost
            c.found = 1
            for u in range(n):
                c.best_assign[u] = c.assign[u]
        return
    lim = used + 1 if used + 1 < c.k else c.k
    bound = cost
    for u in range(v, n):
        m = -1
        for part in range(lim):
            s = 0
            for w in range(v):
                if c.assign[w] == part:
                    s += c.cin[u * n + w]
                else:
                    s += c.ccross[u * n + w]
            if m < 0 or s < m:
                m = s
        bound += m
        if bound >= c.best:
            return
    for part in range(lim):
        s = 0
        for w in range(v):
            if c.assign[w] == part:
                s += c.cin[v * n + w]
            else:
                s += c.ccross[v * n + w]
        if cost + s >= c.best:
            continue
        c.assign[v] = part
        _part_rec(c, v + 1, used if used > part + 1 else part + 1, cost + s)
        c.assign[v] = -1


def partition_bnb(int n, int k, cost_in, cost_cross, long long upper):
    if n > MAXN:
        raise ValueError("too many vertices for the compiled kernel")
    cdef PartCtx* c = <PartCtx*> PyMem_Malloc(sizeof(PartCtx))
    if c == NULL:
        raise MemoryError()
    cdef int u, w
    try:
        c.n = n
        c.k = k
        for u in range(n):
            c.assign[u] = -1
            for w in range(n):
                c.cin[u * n + w] = cost_in[u][w]
                c.ccross[u * n + w] = cost_cross[u][w]
        c.best = upper
        c.found = 0
        with nogil:
            _part_rec(c, 0, 0, 0)
        if not c.found:
            return upper, None
        return c.best, [c.best_assign[u] for u in range(n)]
    finally:
        PyMem_Free(c)
