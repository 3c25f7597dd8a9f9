"""Exact network simplex for balanced transportation problems.

Solves min sum c_ij x_ij over couplings of rational supplies and demands,
restricted to an explicit arc set. All pivots use exact rational arithmetic;
the returned basis is certified optimal by nonnegative reduced costs, which
callers can re-verify independently.

Feasibility on a restricted arc set is decided first by exact max-flow; when
infeasible, the Hall-type violated cut (a demand-side node set whose allowed
supply falls short of its demand) is returned as a witness.

Pivot rules: "bland" (entering and leaving arcs by smallest index; terminates
on degenerate instances) and "best" (most negative reduced cost, falling back
to Bland after a long run of degenerate pivots).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import gcd


@dataclass
class TransportationResult:
    status: str                      # "optimal" or "infeasible"
    flows: dict                      # (i, j) -> Fraction, positive arcs only
    u: list | None                   # duals on supply nodes, u_i + v_j <= c_ij
    v: list | None                   # duals on demand nodes
    objective: Fraction | None
    pivots: int = 0
    violated_cut: tuple | None = None  # (demand ids, their allowed supply ids)


class _Dinic:
    def __init__(self, n, big):
        self.n = n
        self.big = big
        self.adj = [[] for _ in range(n)]

    def add_edge(self, u, v, cap):
        self.adj[u].append([v, cap, len(self.adj[v])])
        self.adj[v].append([u, 0 * cap, len(self.adj[u]) - 1])

    def max_flow(self, s, t):
        total = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for e in self.adj[u]:
                    if e[1] > 0 and level[e[0]] < 0:
                        level[e[0]] = level[u] + 1
                        q.append(e[0])
            if level[t] < 0:
                return total
            it = [0] * self.n

            def dfs(u, f):
                if u == t:
                    return f
                while it[u] < len(self.adj[u]):
                    e = self.adj[u][it[u]]
                    if e[1] > 0 and level[e[0]] == level[u] + 1:
                        d = dfs(e[0], min(f, e[1]))
                        if d > 0:
                            e[1] -= d
                            self.adj[e[0]][e[2]][1] += d
                            return d
                    it[u] += 1
                return 0

            while True:
                f = dfs(s, self.big)
                if f <= 0:
                    break
                total += f

    def reachable(self, s):
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for e in self.adj[u]:
                if e[1] > 0 and e[0] not in seen:
                    seen.add(e[0])
                    q.append(e[0])
        return seen


def feasible_flow(supplies, demands, arcs):
    """Exact feasible coupling on the arc set, or a violated-cut witness.

    Returns (flow dict, None) when feasible, else (None, (demand_ids,
    supply_ids)) where the demand set's total exceeds the supply of every
    node allowed to serve it.
    """
    m, n = len(supplies), len(demands)
    total = sum(supplies)
    if total != sum(demands):
        raise ValueError("unbalanced transportation instance")
    # orientation source -> demand -> supply -> sink: the residual reachable
    # set then exposes the violating demand-side family directly
    src, snk = m + n, m + n + 1
    dinic = _Dinic(m + n + 2, total + 1)
    for j in range(n):
        dinic.add_edge(src, m + j, demands[j])
    arc_pos = {}
    for (i, j) in arcs:
        arc_pos[(i, j)] = len(dinic.adj[i])  # reverse edge lives at supply node
        dinic.add_edge(m + j, i, total + 1)
    for i in range(m):
        dinic.add_edge(i, snk, supplies[i])
    value = dinic.max_flow(src, snk)
    if value < total:
        reach = dinic.reachable(src)
        bad = sorted(j for j in range(n) if m + j in reach)
        bad_set = set(bad)
        neighborhood = sorted({i for (i, j) in arcs if j in bad_set})
        return None, (bad, neighborhood)
    flow = {}
    for (i, j), pos in arc_pos.items():
        sent = dinic.adj[i][pos][1]  # residual of reverse edge == flow pushed
        if sent > 0:
            flow[(i, j)] = sent
    return flow, None


def _cancel_cycles(flow, m):
    """Make the support of a feasible flow acyclic by cost-free pushes."""
    while True:
        parent = {}
        rank = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != x:
                parent[x], x = root, parent[x]
            return root

        tree = {}
        closing = None
        for arc in sorted(flow):
            a, b = arc[0], m + arc[1]
            ra, rb = find(a), find(b)
            if ra == rb:
                closing = arc
                break
            if rank.get(ra, 0) < rank.get(rb, 0):
                ra, rb = rb, ra
            parent[rb] = ra
            rank[ra] = max(rank.get(ra, 0), rank.get(rb, 0) + 1)
            tree.setdefault(a, []).append((b, arc))
            tree.setdefault(b, []).append((a, arc))
        if closing is None:
            return flow
        path = _tree_path(tree, m + closing[1], closing[0])
        # push around the cycle: closing arc forward, path arcs by traversal
        steps = [(closing, 1)]
        cur = m + closing[1]
        for node, arc in path:
            steps.append((arc, 1 if cur == arc[0] else -1))
            cur = node
        theta = min(flow[a] for a, s in steps if s == -1)
        for a, s in steps:
            flow[a] = flow.get(a, 0) + s * theta
            if flow[a] == 0:
                del flow[a]


def _tree_path(tree, start, goal):
    """Steps [(next node, arc), ...] walking from start to goal in a forest."""
    prev = {goal: None}
    q = deque([goal])
    while q:
        node = q.popleft()
        if node == start:
            break
        for other, arc in tree.get(node, ()):
            if other not in prev:
                prev[other] = (node, arc)
                q.append(other)
    if start not in prev:
        raise AssertionError("endpoints not connected in basis forest")
    out = []
    node = start
    while prev[node] is not None:
        nxt, arc = prev[node]
        out.append((nxt, arc))
        node = nxt
    return out


def solve_transportation(supplies, demands, cost, arcs, pivot="best"):
    """Minimize sum c_ij x_ij over exact couplings supported on `arcs`.

    cost is a callable (i, j) -> Fraction. Returns a TransportationResult;
    on infeasible restricted instances the violated cut is attached and no
    flows/duals are produced.

    Internally everything is scaled to integers (weights and costs by their
    common denominators), which keeps pivots exact while avoiding Fraction
    overhead; results are unscaled on the way out.
    """
    supplies = [Fraction(s) for s in supplies]
    demands = [Fraction(d) for d in demands]
    if any(s < 0 for s in supplies) or any(d < 0 for d in demands):
        raise ValueError("negative supply or demand")
    m, n = len(supplies), len(demands)
    arcs = list(dict.fromkeys(arcs))
    cost_frac = {a: Fraction(cost(a[0], a[1])) for a in arcs}
    scale_w = 1
    for x in supplies + demands:
        scale_w = scale_w * x.denominator // gcd(scale_w, x.denominator)
    scale_c = 1
    for x in cost_frac.values():
        scale_c = scale_c * x.denominator // gcd(scale_c, x.denominator)
    supplies_i = [int(s * scale_w) for s in supplies]
    demands_i = [int(d * scale_w) for d in demands]
    cost_i = {a: int(c * scale_c) for a, c in cost_frac.items()}
    result = _solve_scaled(supplies_i, demands_i, cost_i, arcs, pivot, m, n)
    if result.status == "infeasible":
        return result
    return TransportationResult(
        "optimal",
        {a: Fraction(f, scale_w) for a, f in result.flows.items()},
        [Fraction(x, scale_c) for x in result.u],
        [Fraction(x, scale_c) for x in result.v],
        Fraction(result.objective, scale_c * scale_w),
        pivots=result.pivots,
    )


def _solve_scaled(supplies, demands, cost_i, arcs, pivot, m, n):
    flow, cut = feasible_flow(supplies, demands, arcs)
    if flow is None:
        return TransportationResult("infeasible", {}, None, None, None,
                                    violated_cut=cut)
    flow = _cancel_cycles(flow, m)

    # components of the allowed-arc graph solve independently
    comp_parent = {}

    def find(x):
        root = x
        while comp_parent.get(root, root) != root:
            root = comp_parent[root]
        while comp_parent.get(x, x) != x:
            comp_parent[x], x = root, comp_parent[x]
        return root

    for (i, j) in arcs:
        ri, rj = find(i), find(m + j)
        if ri != rj:
            comp_parent[ri] = rj
    components = {}
    for node in list(range(m)) + [m + j for j in range(n)]:
        components.setdefault(find(node), []).append(node)

    u = [None] * m
    v = [None] * n
    total_pivots = 0
    out_flow = {}
    for nodes in components.values():
        node_set = set(nodes)
        comp_arcs = [a for a in arcs if a[0] in node_set]
        comp_flow = {a: f for a, f in flow.items() if a[0] in node_set}
        basis = _spanning_basis(nodes, comp_arcs, comp_flow, m)
        cu, cv, pv = _simplex(nodes, comp_arcs, comp_flow, basis, cost_i, m,
                              pivot)
        total_pivots += pv
        out_flow.update(comp_flow)
        for node in nodes:
            if node < m:
                u[node] = cu[node]
            else:
                v[node - m] = cv[node - m]
    objective = sum(cost_i[a] * f for a, f in out_flow.items())
    return TransportationResult("optimal", out_flow, u, v, objective,
                                pivots=total_pivots)


def _spanning_basis(nodes, arcs, flow, m):
    """Extend the (acyclic) support of a feasible flow to a spanning tree."""
    parent = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    basis = []
    for arc in sorted(flow):
        a, b = arc[0], m + arc[1]
        parent[find(a)] = find(b)
        basis.append(arc)
    for arc in arcs:
        a, b = arc[0], m + arc[1]
        if find(a) != find(b):
            parent[find(a)] = find(b)
            basis.append(arc)
    if len(basis) != len(nodes) - 1:
        raise AssertionError("basis is not a spanning tree of the component")
    return basis


def _simplex(nodes, arcs, flow, basis, costs, m, pivot):
    """Primal network simplex on one connected component; mutates flow.

    Default rule is largest improvement (most negative reduced cost); a long
    run of degenerate pivots switches to Bland's rule, whose termination
    guarantee then applies, until flow moves again.
    """
    basis_set = set(basis)
    root = nodes[0]
    pivots = 0
    degenerate_run = 0
    tree = {}
    for arc in basis_set:
        a, b = arc[0], m + arc[1]
        tree.setdefault(a, []).append((b, arc))
        tree.setdefault(b, []).append((a, arc))
    while True:
        u = {}
        v = {}
        _assign_duals(tree, root, u, v, costs, m)
        entering = None
        if pivot == "bland" or degenerate_run > 4 * len(nodes):
            # fixed arc order is what makes Bland's rule terminate
            for arc in arcs:
                if arc in basis_set:
                    continue
                if costs[arc] - u[arc[0]] - v[arc[1]] < 0:
                    entering = arc
                    break
        else:
            best = 0
            for arc in arcs:
                if arc in basis_set:
                    continue
                red = costs[arc] - u[arc[0]] - v[arc[1]]
                if red < best:
                    best = red
                    entering = arc
        if entering is None:
            return u, v, pivots
        path = _tree_path(tree, m + entering[1], entering[0])
        steps = [(entering, 1)]
        cur = m + entering[1]
        for node, arc in path:
            steps.append((arc, 1 if cur == arc[0] else -1))
            cur = node
        minus = [a for a, s in steps if s == -1]
        theta = min(flow.get(a, 0) for a in minus)
        leaving = min(a for a in minus if flow.get(a, 0) == theta)
        for a, s in steps:
            newval = flow.get(a, 0) + s * theta
            if newval == 0:
                flow.pop(a, None)
            else:
                flow[a] = newval
        basis_set.remove(leaving)
        basis_set.add(entering)
        la, lb = leaving[0], m + leaving[1]
        tree[la] = [(o, arc) for o, arc in tree[la] if arc != leaving]
        tree[lb] = [(o, arc) for o, arc in tree[lb] if arc != leaving]
        ea, eb = entering[0], m + entering[1]
        tree.setdefault(ea, []).append((eb, entering))
        tree.setdefault(eb, []).append((ea, entering))
        pivots += 1
        degenerate_run = degenerate_run + 1 if theta == 0 else 0


def _assign_duals(tree, root, u, v, costs, m):
    """Solve u_i + v_j = c_ij on the basis tree, anchored at the root."""
    if root < m:
        u[root] = 0
    else:
        v[root - m] = 0
    q = deque([root])
    seen = {root}
    while q:
        node = q.popleft()
        for other, arc in tree.get(node, ()):
            if other in seen:
                continue
            seen.add(other)
            if other < m:
                u[other] = costs[arc] - v[arc[1]]
            else:
                v[other - m] = costs[arc] - u[arc[0]]
            q.append(other)
