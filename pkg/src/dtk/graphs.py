"""Internal graph helpers shared by the equivalence and logic engines."""

from __future__ import annotations


def tarjan_cycle_states(nodes, adj) -> set:
    """States on a nontrivial cycle (or with a self-loop) of the graph.

    Iterative Tarjan; ``adj`` maps node -> iterable of successors and may
    omit nodes without successors.
    """
    index = {}
    low = {}
    on_stack = set()
    stack = []
    sccs = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(adj.get(root, ())))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(adj.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                scc = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    scc.append(w)
                    if w == v:
                        break
                sccs.append(scc)
    cyc = set()
    for scc in sccs:
        if len(scc) > 1:
            cyc.update(scc)
    for v in nodes:
        if v in adj.get(v, ()):
            cyc.add(v)
    return cyc


def backward_reach(targets, nodes, adj) -> set:
    """States of ``nodes`` that reach ``targets`` (inclusive) in ``adj``."""
    radj = {v: [] for v in nodes}
    for u in nodes:
        for v in adj.get(u, ()):
            if v in radj:
                radj[v].append(u)
    seen = set(targets)
    frontier = list(targets)
    while frontier:
        v = frontier.pop()
        for u in radj.get(v, ()):
            if u not in seen:
                seen.add(u)
                frontier.append(u)
    return seen
