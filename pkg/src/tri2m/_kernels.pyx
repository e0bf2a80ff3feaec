# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same signatures and results as ``_pykernels``."""

from array import array

from libc.stdlib cimport free, malloc
from libc.string cimport memset

IMPLEMENTATION = "cython"

cdef enum:
    PATH = 0
    REACH = 1
    COLLECT = 2


cdef object _longs(object xs):
    if isinstance(xs, array) and xs.typecode == "l":
        return xs
    return array("l", xs)


cdef object _bytes(object xs):
    if isinstance(xs, (bytes, bytearray)):
        return xs
    return bytes(bytearray(xs))


cdef object _search(object adj_start_o, object adj_edge_o, object eu_o, object ev_o, object mate_o,
                    object edge_ok_o, object node_ok_o, long root, long target, int mode):
    cdef const long[::1] adj_start = _longs(adj_start_o)
    cdef const long[::1] adj_edge = _longs(adj_edge_o)
    cdef const long[::1] eu = _longs(eu_o)
    cdef const long[::1] ev = _longs(ev_o)
    cdef const long[::1] mate = _longs(mate_o)
    cdef const unsigned char[::1] edge_ok = _bytes(edge_ok_o)
    cdef const unsigned char[::1] node_ok
    cdef bint use_nodes = node_ok_o is not None
    if use_nodes:
        node_ok = _bytes(node_ok_o)
    cdef Py_ssize_t n = mate.shape[0]
    cdef long *base = <long *> malloc((n + 1) * sizeof(long))
    cdef long *parent = <long *> malloc((n + 1) * sizeof(long))
    cdef long *queue = <long *> malloc((n + 1) * sizeof(long))
    cdef unsigned char *even = <unsigned char *> malloc(n + 1)
    cdef unsigned char *mark = <unsigned char *> malloc(n + 1)
    cdef unsigned char *inblossom = <unsigned char *> malloc(n + 1)
    cdef Py_ssize_t head = 0, tail = 0, i, k
    cdef long v, to, ge, a, b, lca, x, child, nxt, px
    cdef int pass_
    cdef object result = None
    if base == NULL or parent == NULL or queue == NULL or even == NULL or mark == NULL or inblossom == NULL:
        free(base); free(parent); free(queue); free(even); free(mark); free(inblossom)
        raise MemoryError()
    try:
        for k in range(n):
            base[k] = k
            parent[k] = -1
        memset(even, 0, n)
        even[root] = 1
        if mode == REACH and target == root:
            return True
        queue[tail] = root
        tail += 1
        while head < tail:
            v = queue[head]
            head += 1
            for i in range(adj_start[v], adj_start[v + 1]):
                ge = adj_edge[i]
                if not edge_ok[ge]:
                    continue
                to = eu[ge] if ev[ge] == v else ev[ge]
                if use_nodes and not node_ok[to]:
                    continue
                if base[v] == base[to] or mate[v] == to:
                    continue
                if even[to]:
                    memset(mark, 0, n)
                    a = v
                    while True:
                        a = base[a]
                        mark[a] = 1
                        if mate[a] < 0:
                            break
                        a = parent[mate[a]]
                    b = to
                    while True:
                        b = base[b]
                        if mark[b]:
                            break
                        b = parent[mate[b]]
                    lca = b
                    memset(inblossom, 0, n)
                    for pass_ in range(2):
                        if pass_ == 0:
                            x = v
                            child = to
                        else:
                            x = to
                            child = v
                        while base[x] != lca:
                            inblossom[base[x]] = 1
                            inblossom[base[mate[x]]] = 1
                            parent[x] = child
                            child = mate[x]
                            x = parent[mate[x]]
                    for k in range(n):
                        if inblossom[base[k]]:
                            base[k] = lca
                            if not even[k]:
                                even[k] = 1
                                if mode == REACH and k == target:
                                    return True
                                queue[tail] = k
                                tail += 1
                elif parent[to] < 0:
                    parent[to] = v
                    nxt = mate[to]
                    if nxt < 0:
                        if mode == PATH:
                            path = [to]
                            x = to
                            while True:
                                px = parent[x]
                                path.append(px)
                                if mate[px] < 0:
                                    break
                                x = mate[px]
                                path.append(x)
                            path.reverse()
                            return path
                        continue
                    even[nxt] = 1
                    if mode == REACH and nxt == target:
                        return True
                    queue[tail] = nxt
                    tail += 1
        if mode == PATH:
            return None
        if mode == REACH:
            return False
        result = bytearray(n)
        for k in range(n):
            result[k] = even[k]
        return result
    finally:
        free(base); free(parent); free(queue); free(even); free(mark); free(inblossom)


def find_path(adj_start, adj_edge, eu, ev, mate, edge_ok, long root):
    """Augmenting path from ``root`` as a node list, or ``None``."""
    return _search(adj_start, adj_edge, eu, ev, mate, edge_ok, None, root, -1, PATH)


def even_reachable(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, long root, long target):
    """Whether ``target`` has an even alternating path from ``root``."""
    return _search(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, root, target, REACH)


def even_set(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, long root):
    """Byte mask of nodes with an even alternating path from ``root``."""
    return _search(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, root, -1, COLLECT)


cdef inline long _slack(long deg, long rem):
    return 2 - deg if 2 - deg < rem else rem


def bnb_optimum(long n, eu_o, ev_o, tri_start_o, tri_pairs_o, long lower, long upper, long long budget):
    """Branch and bound for the maximum triangle-free 2-matching; see ``_pykernels``."""
    cdef const long[::1] eu = _longs(eu_o)
    cdef const long[::1] ev = _longs(ev_o)
    cdef const long[::1] tri_start = _longs(tri_start_o)
    cdef const long[::1] tri_pairs = _longs(tri_pairs_o)
    cdef Py_ssize_t m = eu.shape[0]
    cdef long[::1] deg = array("l", [0] * max(n, 1))
    cdef long[::1] rem = array("l", [0] * max(n, 1))
    cdef long[::1] slack = array("l", [0] * max(n, 1))
    cdef unsigned char[::1] chosen = bytearray(max(m, 1))
    cdef long[::1] stack = array("l", [0] * (m + 2))
    cdef unsigned char[::1] phase = bytearray(m + 2)
    cdef Py_ssize_t top = 0, e, k
    cdef long i, u, v, total = 0, best = lower, size = 0
    cdef long long nodes = 0
    cdef int ph
    cdef bint ok
    best_mask = None
    for e in range(m):
        rem[eu[e]] += 1
        rem[ev[e]] += 1
    for e in range(n):
        slack[e] = _slack(0, rem[e])
        total += slack[e]
    stack[0] = 0
    phase[0] = 0
    top = 1
    while top > 0:
        i = stack[top - 1]
        ph = phase[top - 1]
        if i == m:
            if size > best:
                best = size
                best_mask = bytes(chosen[:m])
                if best >= upper:
                    return best, best_mask, nodes
            top -= 1
            continue
        u = eu[i]
        v = ev[i]
        if ph == 0:
            nodes += 1
            if nodes > budget:
                return -1, best_mask, nodes
            total -= slack[u] + slack[v]
            rem[u] -= 1
            rem[v] -= 1
            phase[top - 1] = 1
            ok = deg[u] < 2 and deg[v] < 2
            if ok:
                for k in range(tri_start[i], tri_start[i + 1]):
                    if chosen[tri_pairs[2 * k]] and chosen[tri_pairs[2 * k + 1]]:
                        ok = False
                        break
            if ok:
                deg[u] += 1
                deg[v] += 1
                chosen[i] = 1
                size += 1
                slack[u] = _slack(deg[u], rem[u])
                slack[v] = _slack(deg[v], rem[v])
                total += slack[u] + slack[v]
                if size + total // 2 > best:
                    stack[top] = i + 1
                    phase[top] = 0
                    top += 1
                    continue
            else:
                slack[u] = _slack(deg[u], rem[u])
                slack[v] = _slack(deg[v], rem[v])
                total += slack[u] + slack[v]
            ph = 1
        if ph == 1:
            if chosen[i]:
                total -= slack[u] + slack[v]
                chosen[i] = 0
                size -= 1
                deg[u] -= 1
                deg[v] -= 1
                slack[u] = _slack(deg[u], rem[u])
                slack[v] = _slack(deg[v], rem[v])
                total += slack[u] + slack[v]
            phase[top - 1] = 2
            if size + total // 2 > best:
                stack[top] = i + 1
                phase[top] = 0
                top += 1
                continue
        total -= slack[u] + slack[v]
        rem[u] += 1
        rem[v] += 1
        slack[u] = _slack(deg[u], rem[u])
        slack[v] = _slack(deg[v], rem[v])
        total += slack[u] + slack[v]
        top -= 1
    return best, best_mask, nodes
