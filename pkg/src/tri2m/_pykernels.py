"""Pure-Python kernels; ``_kernels.pyx`` mirrors these signatures exactly.

All graph arguments are flat integer sequences: CSR adjacency over gadget
edges (``adj_start``, ``adj_edge``), edge endpoints (``eu``, ``ev``) and the
fixed matching as a ``mate`` array (-1 for exposed nodes).  ``edge_ok`` and
``node_ok`` are byte masks; ``node_ok`` may be ``None``.
"""

from __future__ import annotations

from collections import deque

IMPLEMENTATION = "python"


_PATH, _REACH, _COLLECT = 0, 1, 2


def _search(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, root, target, mode):
    n = len(mate)
    base = list(range(n))
    parent = [-1] * n
    even = bytearray(n)
    even[root] = 1
    if mode == _REACH and target == root:
        return True
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for i in range(adj_start[v], adj_start[v + 1]):
            ge = adj_edge[i]
            if not edge_ok[ge]:
                continue
            to = eu[ge] if ev[ge] == v else ev[ge]
            if node_ok is not None and not node_ok[to]:
                continue
            if base[v] == base[to] or mate[v] == to:
                continue
            if even[to]:
                # odd cycle: contract it onto the lowest common base
                mark = bytearray(n)
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
                inblossom = bytearray(n)
                for x, child in ((v, to), (to, v)):
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
                            if mode == _REACH and k == target:
                                return True
                            queue.append(k)
            elif parent[to] < 0:
                parent[to] = v
                nxt = mate[to]
                if nxt < 0:
                    if mode == _PATH:
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
                if mode == _REACH and nxt == target:
                    return True
                queue.append(nxt)
    if mode == _PATH:
        return None
    if mode == _REACH:
        return False
    return even


def find_path(adj_start, adj_edge, eu, ev, mate, edge_ok, root):
    """Augmenting path from ``root`` as a node list, or ``None``."""
    return _search(adj_start, adj_edge, eu, ev, mate, edge_ok, None, root, -1, _PATH)


def even_reachable(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, root, target):
    """Whether ``target`` has an even alternating path from ``root``.

    Exposed nodes other than the root are treated as dead ends.
    """
    return _search(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, root, target, _REACH)


def even_set(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, root):
    """Byte mask of nodes with an even alternating path from ``root``."""
    return _search(adj_start, adj_edge, eu, ev, mate, edge_ok, node_ok, root, -1, _COLLECT)


def bnb_optimum(n, eu, ev, tri_start, tri_pairs, lower, upper, budget):
    """Maximum triangle-free 2-matching by branch and bound over edge order.

    ``tri_pairs[2*k], tri_pairs[2*k+1]`` for ``k`` in
    ``range(tri_start[e], tri_start[e+1])`` are the other two edges of each
    triangle through edge ``e``.  ``lower`` is the size of a known solution
    (its edges are not needed), ``upper`` a proven cap for early exit.

    Returns ``(size, chosen_mask, nodes)``; ``size`` is -1 when the node
    budget ran out, and ``chosen_mask`` is ``None`` when nothing beat
    ``lower``.
    """
    m = len(eu)
    deg = [0] * n
    rem = [0] * n
    for e in range(m):
        rem[eu[e]] += 1
        rem[ev[e]] += 1
    chosen = bytearray(m)
    slack = [min(2, rem[v]) for v in range(n)]
    total = sum(slack)
    best = lower
    best_mask = None
    nodes = 0
    # explicit stack of (edge index, phase); phase 0 = try include, 1 = try exclude, 2 = undo
    size = 0
    stack = [0]
    phase = [0]
    while stack:
        i = stack[-1]
        ph = phase[-1]
        if i == m:
            if size > best:
                best = size
                best_mask = bytes(chosen)
                if best >= upper:
                    return best, best_mask, nodes
            stack.pop()
            phase.pop()
            continue
        u, v = eu[i], ev[i]
        if ph == 0:
            nodes += 1
            if nodes > budget:
                return -1, best_mask, nodes
            # edge i becomes decided
            total -= slack[u] + slack[v]
            rem[u] -= 1
            rem[v] -= 1
            phase[-1] = 1
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
                slack[u] = min(2 - deg[u], rem[u])
                slack[v] = min(2 - deg[v], rem[v])
                total += slack[u] + slack[v]
                if size + total // 2 > best:
                    stack.append(i + 1)
                    phase.append(0)
                    continue
                # include pruned: fall through to the exclude branch
            else:
                slack[u] = min(2 - deg[u], rem[u])
                slack[v] = min(2 - deg[v], rem[v])
                total += slack[u] + slack[v]
            ph = 1
        if ph == 1:
            if chosen[i]:
                total -= slack[u] + slack[v]
                chosen[i] = 0
                size -= 1
                deg[u] -= 1
                deg[v] -= 1
                slack[u] = min(2 - deg[u], rem[u])
                slack[v] = min(2 - deg[v], rem[v])
                total += slack[u] + slack[v]
            phase[-1] = 2
            if size + total // 2 > best:
                stack.append(i + 1)
                phase.append(0)
                continue
        # phase 2: restore edge i to undecided and return
        total -= slack[u] + slack[v]
        rem[u] += 1
        rem[v] += 1
        slack[u] = min(2 - deg[u], rem[u])
        slack[v] = min(2 - deg[v], rem[v])
        total += slack[u] + slack[v]
        stack.pop()
        phase.pop()
    return best, best_mask, nodes
