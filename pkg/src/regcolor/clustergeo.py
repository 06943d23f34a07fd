"""Deterministic cluster geometry on a colored multigraph: core peeling, the
W/U/U'/Y screening construction, free/complete vertex classification with the
resulting cluster-size bound, a density falsifier, and the cluster-size rate.

The (sigma, ell)-core is the largest induced subgraph in which every vertex
has at least ell edges into each other color class inside the subgraph; it is
computed by peeling, which is order-independent (tested, and exploited by the
random-order option).
"""

import heapq
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import GuardError, ValidationError
from . import guards
from .graphs import vertex_class_degrees


@dataclass(frozen=True)
class CoreResult:
    core: frozenset
    peel_order: tuple
    deficiency: dict  # evicted vertex -> color class that fell below ell


def sigma_ell_core(G, sigma, ell, order="canonical", rng=None):
    """Peel vertices with fewer than ell edges into some other color class
    inside the surviving set, until none remains."""
    if ell < 1:
        raise ValidationError("ell >= 1 required")
    k = sigma.k
    assign = sigma.assignment
    cnt = vertex_class_degrees(G, assign, k)  # e(v, alive cap V_i)
    adj = G.adjacency()
    alive = [True] * G.n

    def deficient_color(v):
        for i in range(k):
            if i != assign[v] and cnt[v, i] < ell:
                return i
        return None

    pending = [v for v in range(G.n) if deficient_color(v) is not None]
    if order == "random":
        if rng is None:
            raise ValidationError("random order needs an rng")
    elif order == "canonical":
        heapq.heapify(pending)  # smallest index first, lazy deletion
    else:
        raise ValidationError("order must be canonical or random")

    peel_order = []
    deficiency = {}
    while pending:
        if order == "random":
            idx = int(rng.integers(len(pending)))
            pending[idx], pending[-1] = pending[-1], pending[idx]
            v = pending.pop()
        else:
            v = heapq.heappop(pending)
        if not alive[v]:
            continue
        col = deficient_color(v)
        if col is None:
            continue
        alive[v] = False
        peel_order.append(v)
        deficiency[v] = col
        cv = assign[v]
        for u, m in adj[v].items():
            if u != v and alive[u]:
                cnt[u, cv] -= m
                if deficient_color(u) is not None:
                    if order == "random":
                        pending.append(u)
                    else:
                        heapq.heappush(pending, u)
    core = frozenset(v for v in range(G.n) if alive[v])
    return CoreResult(core, tuple(peel_order), deficiency)


@dataclass(frozen=True)
class WUYSets:
    W: dict        # (i, j) -> set, j != i
    W_union: frozenset
    U: dict        # (i, j) -> set
    U_prime: dict  # (i, j) -> set
    Y: frozenset
    thresholds: dict


def build_WUY(G, sigma, ell):
    """W_ij: vertices of color i with < 3 ell edges into V_j and < 2 ell ln k
    into every class.  U_ij: vertices of color i outside W with > ell edges
    into W_j.  U'_ij: outside W with > 2 ell ln k edges into V_j.  Y grows
    from U cup U' by repeatedly adding the smallest-index vertex with more
    than ell edges into the current Y."""
    k = sigma.k
    assign = sigma.assignment
    deg = vertex_class_degrees(G, assign, k)
    hi = 2 * ell * math.log(k)
    adj = G.adjacency()

    W = {}
    w_members = set()
    for i in range(k):
        Vi = [v for v in range(G.n) if assign[v] == i]
        row_ok = [v for v in Vi if all(deg[v, h] < hi for h in range(k))]
        for j in range(k):
            if j == i:
                continue
            W[(i, j)] = {v for v in row_ok if deg[v, j] < 3 * ell}
    for s in W.values():
        w_members |= s

    # e(v, W_j) for v outside W
    w_by_color = [set() for _ in range(k)]
    for (i, j), s in W.items():
        w_by_color[i] |= s
    U = {}
    U_prime = {}
    for i in range(k):
        for j in range(k):
            if j == i:
                continue
            U[(i, j)] = set()
            U_prime[(i, j)] = set()
    for v in range(G.n):
        if v in w_members:
            continue
        i = assign[v]
        into_w = [0] * k
        for u, m in adj[v].items():
            if u in w_members:
                into_w[assign[u]] += m if u != v else 2 * m
        for j in range(k):
            if j == i:
                continue
            if into_w[j] > ell:
                U[(i, j)].add(v)
            if deg[v, j] > hi:
                U_prime[(i, j)].add(v)

    Y = set()
    for s in U.values():
        Y |= s
    for s in U_prime.values():
        Y |= s
    into_y = np.zeros(G.n, dtype=np.int64)
    for y in Y:
        for u, m in adj[y].items():
            into_y[u] += m if u != y else 2 * m
    heap = [v for v in range(G.n) if v not in Y and into_y[v] > ell]
    heapq.heapify(heap)
    while heap:
        v = heapq.heappop(heap)
        if v in Y or into_y[v] <= ell:
            continue
        Y.add(v)
        for u, m in adj[v].items():
            if u != v:
                into_y[u] += m
                if u not in Y and into_y[u] > ell:
                    heapq.heappush(heap, u)
    return WUYSets(W, frozenset(w_members), U, U_prime, frozenset(Y),
                   {"w_low": 3 * ell, "degree_high": hi, "ell": ell})


def check_core_inclusion(G, sigma, ell):
    """Verify V minus (W cup Y) is contained in the (sigma, ell)-core.
    Returns (ok, offending vertex or None)."""
    wuy = build_WUY(G, sigma, ell)
    core = sigma_ell_core(G, sigma, ell).core
    outside = wuy.W_union | wuy.Y
    for v in range(G.n):
        if v not in outside and v not in core:
            return False, v
    return True, None


@dataclass(frozen=True)
class FreedomReport:
    free_1: frozenset
    free_2: frozenset
    complete: frozenset
    cluster_log2_upper: float
    mode: str


def freedom_report(G, sigma, ell, mode="prose"):
    """Classify vertices by how many colors have no neighbor inside the core.

    mode="prose": count colors other than sigma(v); a-free iff at least a
    such colors are core-vacant.  mode="strict": count over all k colors and
    require at least a+1, the displayed-formula reading.  The two differ only
    for vertices whose own class has no core neighbor.
    """
    if mode not in ("prose", "strict"):
        raise ValidationError("mode must be prose or strict")
    k = sigma.k
    assign = sigma.assignment
    core = sigma_ell_core(G, sigma, ell).core
    adj = G.adjacency()
    free_1 = set()
    free_2 = set()
    for v in range(G.n):
        into_core = [0] * k
        for u, m in adj[v].items():
            if u in core and u != v:
                into_core[assign[u]] += m
            elif u == v and v in core:
                into_core[assign[v]] += 2 * m
        if mode == "prose":
            vacant = sum(1 for i in range(k)
                         if i != assign[v] and into_core[i] == 0)
            one, two = vacant >= 1, vacant >= 2
        else:
            vacant = sum(1 for i in range(k) if into_core[i] == 0)
            one, two = vacant >= 2, vacant >= 3
        if one:
            free_1.add(v)
        if two:
            free_2.add(v)
    complete = frozenset(range(G.n)) - free_1
    bound = len(free_1 - free_2) * 1.0 + len(free_2) * math.log2(k)
    return FreedomReport(frozenset(free_1), frozenset(free_2), complete,
                         bound, mode)


def density_predicate(G, bound_c=5, size_cap=None, k=None):
    """Falsifier for 'no small set spans more than bound_c times its size in
    edges'.  size_cap defaults to k^(-4/3) n when k is given, else n.  Uses
    min-degree peeling (every suffix of the peel is checked) plus exhaustive
    subset search on tiny graphs.  Returns a list of witness sets; empty
    means no witness found, not a proof."""
    n = G.n
    if size_cap is None:
        size_cap = k ** (-4 / 3) * n if k else n
    violations = []

    adj = G.adjacency()
    degs = {v: sum(2 * m if u == v else m for u, m in adj[v].items())
            for v in range(n)}
    alive = set(range(n))
    m_cur = len(G.edges)

    def check(sets_size):
        if sets_size and sets_size <= size_cap and m_cur > bound_c * sets_size:
            violations.append(frozenset(alive))

    check(len(alive))
    while alive:
        v = min(alive, key=lambda u: (degs[u], u))
        alive.discard(v)
        for u, m in adj[v].items():
            if u == v:
                m_cur -= m
                continue
            if u in alive:
                m_cur -= m
                degs[u] -= m
        degs[v] = 0
        check(len(alive))

    if n <= guards.MAX_DENSITY_EXHAUSTIVE:
        for r in range(1, n + 1):
            if r > size_cap:
                break
            for S in itertools.combinations(range(n), r):
                Sset = set(S)
                spanned = sum(1 for u, v in G.edges if u in Sset and v in Sset)
                if spanned > bound_c * r:
                    violations.append(frozenset(Sset))
    # dedupe, keep deterministic order
    seen = []
    for w in violations:
        if w not in seen:
            seen.append(w)
    return seen


def cluster_size_rate(k, d):
    """(upper bound rate (ln 2)/k, balanced first-moment rate c/(2k) with
    c = (2k-1) ln k - d, margin).  Positive margin is the good-coloring
    criterion at leading order."""
    if k < 3:
        raise ValidationError("k >= 3 required")
    c = (2 * k - 1) * math.log(k) - d
    upper = math.log(2) / k
    rate = c / (2 * k)
    return upper, rate, rate - upper
