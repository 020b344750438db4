"""Exact minimum-weight perfect matching on small dense graphs.

``_max_weight_matching`` is an O(n^3) weighted blossom algorithm on integer
weights (dual variables ``lab``, blossom forest ``st``/``flower``). It is written
without recursion so the same code runs compiled or as plain Python.
Minimum-weight perfect matching on a complete graph uses ``C - w`` with
``C`` large enough that every maximum-weight matching is perfect.
"""
from __future__ import annotations

import numpy as np

from ._accel import njit
from .errors import OddDefectCount, TooManyDefects

BRUTE_FORCE_LIMIT = 12


@njit
def _e_delta(lab, gu, gv, gw, u, v):
    return lab[gu[u, v]] + lab[gv[u, v]] - 2 * gw[u, v]


@njit
def _update_slack(lab, gu, gv, gw, slack, u, x):
    if slack[x] == 0 or _e_delta(lab, gu, gv, gw, u, x) < _e_delta(lab, gu, gv, gw, slack[x], x):
        slack[x] = u


@njit
def _set_slack(n, lab, gu, gv, gw, slack, st, S, x):
    slack[x] = 0
    for u in range(1, n + 1):
        if gw[u, x] > 0 and st[u] != x and S[st[u]] == 0:
            _update_slack(lab, gu, gv, gw, slack, u, x)


@njit
def _q_push(n, flower, flen, queue, qs, x, stack):
    # qs = [head, tail]; pushes every original vertex inside blossom x
    top = 0
    stack[top] = x
    top += 1
    while top > 0:
        top -= 1
        y = stack[top]
        if y <= n:
            queue[qs[1] % queue.shape[0]] = y
            qs[1] += 1
        else:
            for k in range(flen[y] - 1, -1, -1):
                stack[top] = flower[y, k]
                top += 1


@njit
def _set_st(n, flower, flen, st, x, b, stack):
    top = 0
    stack[top] = x
    top += 1
    while top > 0:
        top -= 1
        y = stack[top]
        st[y] = b
        if y > n:
            for k in range(flen[y]):
                stack[top] = flower[y, k]
                top += 1


@njit
def _reverse(flower, b, lo, hi):
    # reverse flower[b, lo:hi]
    hi -= 1
    while lo < hi:
        t = flower[b, lo]
        flower[b, lo] = flower[b, hi]
        flower[b, hi] = t
        lo += 1
        hi -= 1


@njit
def _get_pr(flower, flen, b, xr):
    pr = 0
    while flower[b, pr] != xr:
        pr += 1
    if pr % 2 == 1:
        _reverse(flower, b, 1, flen[b])
        return flen[b] - pr
    return pr


@njit
def _set_match(n, gu, gv, match, flower, flen, flower_from, u, v, stack):
    top = 0
    stack[top, 0] = u
    stack[top, 1] = v
    top += 1
    while top > 0:
        top -= 1
        a = stack[top, 0]
        c = stack[top, 1]
        match[a] = gv[a, c]
        if a > n:
            xr = flower_from[a, gu[a, c]]
            pr = _get_pr(flower, flen, a, xr)
            for i in range(pr):
                stack[top, 0] = flower[a, i]
                stack[top, 1] = flower[a, i ^ 1]
                top += 1
            stack[top, 0] = xr
            stack[top, 1] = c
            top += 1
            # rotate flower[a] left by pr
            L = flen[a]
            tmp = flower[a, :L].copy()
            for i in range(L):
                flower[a, i] = tmp[(i + pr) % L]


@njit
def _augment(n, gu, gv, match, st, pa, flower, flen, flower_from, u, v, stack2):
    while True:
        xnv = st[match[u]]
        _set_match(n, gu, gv, match, flower, flen, flower_from, u, v, stack2)
        if xnv == 0:
            return
        _set_match(n, gu, gv, match, flower, flen, flower_from, xnv, st[pa[xnv]], stack2)
        u = st[pa[xnv]]
        v = xnv


@njit
def _get_lca(st, match, pa, vis, ctr, u, v):
    ctr[1] += 1
    t = ctr[1]
    while u != 0 or v != 0:
        if u != 0:
            if vis[u] == t:
                return u
            vis[u] = t
            u = st[match[u]]
            if u != 0:
                u = st[pa[u]]
        u, v = v, u
    return 0


@njit
def _add_blossom(n, lab, gu, gv, gw, match, slack, st, pa, S, flower, flen, flower_from,
                 queue, qs, ctr, u, lca, v, stack):
    b = n + 1
    while b <= ctr[0] and st[b] != 0:
        b += 1
    if b > ctr[0]:
        ctr[0] += 1
    n_x = ctr[0]
    lab[b] = 0
    S[b] = 0
    match[b] = match[lca]
    flen[b] = 0
    flower[b, flen[b]] = lca
    flen[b] += 1
    x = u
    while x != lca:
        flower[b, flen[b]] = x
        flen[b] += 1
        y = st[match[x]]
        flower[b, flen[b]] = y
        flen[b] += 1
        _q_push(n, flower, flen, queue, qs, y, stack)
        x = st[pa[y]]
    _reverse(flower, b, 1, flen[b])
    x = v
    while x != lca:
        flower[b, flen[b]] = x
        flen[b] += 1
        y = st[match[x]]
        flower[b, flen[b]] = y
        flen[b] += 1
        _q_push(n, flower, flen, queue, qs, y, stack)
        x = st[pa[y]]
    _set_st(n, flower, flen, st, b, b, stack)
    for x in range(1, n_x + 1):
        gw[b, x] = 0
        gw[x, b] = 0
    for x in range(1, n + 1):
        flower_from[b, x] = 0
    for i in range(flen[b]):
        xs = flower[b, i]
        for x in range(1, n_x + 1):
            if gw[b, x] == 0 or _e_delta(lab, gu, gv, gw, xs, x) < _e_delta(lab, gu, gv, gw, b, x):
                gu[b, x] = gu[xs, x]
                gv[b, x] = gv[xs, x]
                gw[b, x] = gw[xs, x]
                gu[x, b] = gu[x, xs]
                gv[x, b] = gv[x, xs]
                gw[x, b] = gw[x, xs]
        for x in range(1, n + 1):
            if flower_from[xs, x] != 0:
                flower_from[b, x] = xs
    _set_slack(n, lab, gu, gv, gw, slack, st, S, b)


@njit
def _expand_blossom(n, lab, gu, gv, gw, slack, st, pa, S, flower, flen, flower_from,
                    queue, qs, b, stack):
    for i in range(flen[b]):
        _set_st(n, flower, flen, st, flower[b, i], flower[b, i], stack)
    xr = flower_from[b, gu[b, pa[b]]]
    pr = _get_pr(flower, flen, b, xr)
    for i in range(0, pr, 2):
        xs = flower[b, i]
        xns = flower[b, i + 1]
        pa[xs] = gu[xns, xs]
        S[xs] = 1
        S[xns] = 0
        slack[xs] = 0
        _set_slack(n, lab, gu, gv, gw, slack, st, S, xns)
        _q_push(n, flower, flen, queue, qs, xns, stack)
    S[xr] = 1
    pa[xr] = pa[b]
    for i in range(pr + 1, flen[b]):
        xs = flower[b, i]
        S[xs] = -1
        _set_slack(n, lab, gu, gv, gw, slack, st, S, xs)
    st[b] = 0


@njit
def _on_found_edge(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower, flen, flower_from,
                   queue, qs, ctr, eu, ev, stack, stack2):
    u = st[eu]
    v = st[ev]
    if S[v] == -1:
        pa[v] = eu
        S[v] = 1
        nu = st[match[v]]
        slack[v] = 0
        slack[nu] = 0
        S[nu] = 0
        _q_push(n, flower, flen, queue, qs, nu, stack)
    elif S[v] == 0:
        lca = _get_lca(st, match, pa, vis, ctr, u, v)
        if lca == 0:
            _augment(n, gu, gv, match, st, pa, flower, flen, flower_from, u, v, stack2)
            _augment(n, gu, gv, match, st, pa, flower, flen, flower_from, v, u, stack2)
            return True
        _add_blossom(n, lab, gu, gv, gw, match, slack, st, pa, S, flower, flen, flower_from,
                     queue, qs, ctr, u, lca, v, stack)
    return False


@njit
def _stage(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower, flen, flower_from,
           queue, qs, ctr, stack, stack2):
    n_x = ctr[0]
    for x in range(1, n_x + 1):
        S[x] = -1
        slack[x] = 0
    qs[0] = 0
    qs[1] = 0
    for x in range(1, n_x + 1):
        if st[x] == x and match[x] == 0:
            pa[x] = 0
            S[x] = 0
            _q_push(n, flower, flen, queue, qs, x, stack)
    if qs[0] == qs[1]:
        return False
    INF = np.int64(1) << 62
    while True:
        while qs[0] < qs[1]:
            u = queue[qs[0] % queue.shape[0]]
            qs[0] += 1
            if S[st[u]] == 1:
                continue
            for v in range(1, n + 1):
                if gw[u, v] > 0 and st[u] != st[v]:
                    if _e_delta(lab, gu, gv, gw, u, v) == 0:
                        if _on_found_edge(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower,
                                          flen, flower_from, queue, qs, ctr, u, v, stack, stack2):
                            return True
                    else:
                        _update_slack(lab, gu, gv, gw, slack, u, st[v])
        n_x = ctr[0]
        d = INF
        for b in range(n + 1, n_x + 1):
            if st[b] == b and S[b] == 1:
                d = min(d, lab[b] // 2)
        for x in range(1, n_x + 1):
            if st[x] == x and slack[x] != 0:
                if S[x] == -1:
                    d = min(d, _e_delta(lab, gu, gv, gw, slack[x], x))
                elif S[x] == 0:
                    d = min(d, _e_delta(lab, gu, gv, gw, slack[x], x) // 2)
        for u in range(1, n + 1):
            if S[st[u]] == 0:
                if lab[u] <= d:
                    return False
                lab[u] -= d
            elif S[st[u]] == 1:
                lab[u] += d
        for b in range(n + 1, n_x + 1):
            if st[b] == b:
                if S[st[b]] == 0:
                    lab[b] += 2 * d
                elif S[st[b]] == 1:
                    lab[b] -= 2 * d
        qs[0] = 0
        qs[1] = 0
        for x in range(1, n_x + 1):
            if st[x] == x and slack[x] != 0 and st[slack[x]] != x \
                    and _e_delta(lab, gu, gv, gw, slack[x], x) == 0:
                if _on_found_edge(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower, flen,
                                  flower_from, queue, qs, ctr, slack[x], x, stack, stack2):
                    return True
        for b in range(n + 1, ctr[0] + 1):
            if st[b] == b and S[b] == 1 and lab[b] == 0:
                _expand_blossom(n, lab, gu, gv, gw, slack, st, pa, S, flower, flen, flower_from,
                                queue, qs, b, stack)


@njit
def _max_weight_matching(W):
    """Maximum-weight matching of the graph with integer weights ``W``
    (``W[i, j] <= 0`` means no edge). Returns partner indices, -1 if unmatched."""
    n = W.shape[0]
    M = 2 * n + 1
    gu = np.zeros((M, M), dtype=np.int64)
    gv = np.zeros((M, M), dtype=np.int64)
    gw = np.zeros((M, M), dtype=np.int64)
    w_max = 0
    for u in range(1, n + 1):
        for v in range(1, n + 1):
            gu[u, v] = u
            gv[u, v] = v
            w = W[u - 1, v - 1] if u != v else 0
            if w < 0:
                w = 0
            gw[u, v] = w
            if w > w_max:
                w_max = w
    lab = np.zeros(M, dtype=np.int64)
    match = np.zeros(M, dtype=np.int64)
    slack = np.zeros(M, dtype=np.int64)
    st = np.arange(M).astype(np.int64)
    pa = np.zeros(M, dtype=np.int64)
    S = np.zeros(M, dtype=np.int64)
    vis = np.zeros(M, dtype=np.int64)
    flower = np.zeros((M, M), dtype=np.int64)
    flen = np.zeros(M, dtype=np.int64)
    flower_from = np.zeros((M, n + 1), dtype=np.int64)
    for u in range(1, n + 1):
        flower_from[u, u] = u
        lab[u] = w_max
    queue = np.zeros(8 * M + 16, dtype=np.int64)
    qs = np.zeros(2, dtype=np.int64)
    ctr = np.zeros(2, dtype=np.int64)  # n_x, lca visit stamp
    ctr[0] = n
    stack = np.zeros(4 * M + 16, dtype=np.int64)
    stack2 = np.zeros((4 * M + 16, 2), dtype=np.int64)
    while _stage(n, lab, gu, gv, gw, match, slack, st, pa, S, vis, flower, flen, flower_from,
                 queue, qs, ctr, stack, stack2):
        pass
    out = np.full(n, -1, dtype=np.int64)
    for u in range(1, n + 1):
        if match[u] != 0:
            out[u - 1] = match[u] - 1
    return out


@njit
def _min_weight_perfect_nb(w):
    # w: symmetric nonnegative integer matrix, even size
    n = w.shape[0]
    wmax = 0
    for i in range(n):
        for j in range(n):
            if w[i, j] > wmax:
                wmax = w[i, j]
    C = n * wmax + 1
    W = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            W[i, j] = C - w[i, j]
    return _max_weight_matching(W)


def _check_square(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.int64)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("weight matrix must be square")
    if w.shape[0] % 2:
        raise OddDefectCount(f"{w.shape[0]} defects cannot be perfectly matched")
    if (w < 0).any():
        raise ValueError("weights must be nonnegative")
    return w


def matching_weight(w, pairs) -> int:
    w = np.asarray(w)
    return int(sum(w[a, b] for a, b in pairs))


def _pairs(partner) -> list[tuple[int, int]]:
    return [(i, int(j)) for i, j in enumerate(partner) if i < j]


def min_weight_perfect_matching(w, tie_break: str = "lex") -> list[tuple[int, int]]:
    """Minimum-weight perfect matching of a complete graph with integer
    weight matrix ``w``.

    With ``tie_break="lex"`` the result is the lexicographically least optimal
    pair list (sorted pairs ``(i, j)``, ``i < j``), found by fixing partners in
    index order and re-solving; ``"fast"`` returns the blossom's own choice.
    """
    w = _check_square(w)
    n = w.shape[0]
    if n == 0:
        return []
    partner = _min_weight_perfect_nb(w)
    if tie_break == "fast" or n == 2:
        return _pairs(partner)
    if tie_break != "lex":
        raise ValueError(f"unknown tie_break {tie_break!r}")
    best = matching_weight(w, _pairs(partner))
    remaining = list(range(n))
    result = []
    while remaining:
        i = remaining[0]
        rest = remaining[1:]
        for j in rest:
            if j > int(partner[i]):
                break
            others = [k for k in rest if k != j]
            sub = w[np.ix_(others, others)]
            sub_pairs = _pairs(_min_weight_perfect_nb(sub)) if others else []
            if w[i, j] + matching_weight(sub, sub_pairs) == best:
                break
        # j now is the least feasible partner (the blossom's partner is always feasible)
        result.append((i, j))
        best -= int(w[i, j])
        remaining = [k for k in rest if k != j]
        if remaining:
            sub = w[np.ix_(remaining, remaining)]
            local = _min_weight_perfect_nb(sub)
            partner = np.full(n, -1, dtype=np.int64)
            for a, b in enumerate(local):
                partner[remaining[a]] = remaining[int(b)]
    return result


def brute_force_matching(w) -> list[tuple[int, int]]:
    """Exhaustive search over all ``(n-1)!!`` pairings; the first optimum in
    lexicographic order wins."""
    w = _check_square(w)
    n = w.shape[0]
    if n > BRUTE_FORCE_LIMIT:
        raise TooManyDefects(f"{n} defects exceed the brute-force limit {BRUTE_FORCE_LIMIT}")
    best = [None, None]

    def rec(free, acc, total):
        if best[0] is not None and total > best[0]:
            return
        if not free:
            if best[0] is None or total < best[0]:
                best[0], best[1] = total, list(acc)
            return
        i = free[0]
        for k in range(1, len(free)):
            j = free[k]
            acc.append((i, j))
            rec(free[1:k] + free[k + 1:], acc, total + int(w[i, j]))
            acc.pop()

    rec(list(range(n)), [], 0)
    return best[1]
