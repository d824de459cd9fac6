"""Shared brute-force oracles, kept independent of the code paths they check."""

import itertools
from functools import lru_cache

from gact import Endo, WreathElem, compose


@lru_cache(maxsize=None)
def stirling(n, r):
    """Second-kind Stirling numbers by the standard recurrence."""
    if n == r == 0:
        return 1
    if n == 0 or r == 0:
        return 0
    return r * stirling(n - 1, r) + stirling(n - 1, r - 1)


def all_endos(g, n):
    """The full endomorphism monoid by raw product enumeration."""
    out = []
    for targets in itertools.product(range(1, n + 1), repeat=n):
        for weights in itertools.product(range(g.order), repeat=n):
            out.append(Endo(g, n, targets, weights))
    return out


def monoid_tables(g, n):
    """(elements, index map, composition table C[a][b] = index of a then b)."""
    elems = all_endos(g, n)
    index = {e: i for i, e in enumerate(elems)}
    table = [
        [index[compose(a, b)] for b in elems]
        for a in elems
    ]
    return elems, index, table


def left_ideal(table, a, size):
    """Indices of S^1 * a."""
    return frozenset([a] + [table[x][a] for x in range(size)])


def right_ideal(table, a, size):
    return frozenset([a] + [table[a][x] for x in range(size)])


def two_sided_ideal(table, a, size, left_ideals):
    """Union of left ideals over the right ideal of a."""
    out = set()
    for b in right_ideal(table, a, size):
        out |= left_ideals[b]
    return frozenset(out)


def apply_pointwise(alpha, weight, point):
    """Action on one act element, straight from the defining convention."""
    return (
        alpha.group.table[weight][alpha.weights[point - 1]],
        alpha.targets[point - 1],
    )


def congruence_pairs(alpha):
    """The kernel of alpha as a set of identified act-element pairs."""
    n, m = alpha.n, alpha.group.order
    points = [(w, i) for w in range(m) for i in range(1, n + 1)]
    images = {p: apply_pointwise(alpha, *p) for p in points}
    return frozenset(
        (p, q) for p in points for q in points if images[p] == images[q]
    )


def wreath_elements(g, r):
    """All rank-r weighted permutations."""
    out = []
    for perm in itertools.permutations(range(1, r + 1)):
        for weights in itertools.product(range(g.order), repeat=r):
            out.append(WreathElem(r, perm, weights))
    return out


def def81_rising_point(phi):
    """Rising point straight from the quantified definition.

    The top value r+1 when the preimage of the top slot is twisted;
    otherwise the unique k in [1, r] admitting a position-increasing,
    trivially weighted chain onto slots k..r whose slot-(k-1) proviso
    holds.  Asserts uniqueness.
    """
    r = phi.r
    pos = [0] * (r + 1)
    wt = [0] * (r + 1)
    for j, t in enumerate(phi.perm, start=1):
        pos[t] = j
        wt[t] = phi.weights[j - 1]
    if wt[r] != 0:
        return r + 1
    candidates = []
    for k in range(1, r + 1):
        chain = [pos[t] for t in range(k, r + 1)]
        if any(wt[t] != 0 for t in range(k, r + 1)):
            continue
        if any(a >= b for a, b in zip(chain, chain[1:])):
            continue
        if k >= 2 and pos[k - 1] < pos[k] and wt[k - 1] == 0:
            continue
        candidates.append(k)
    assert len(candidates) == 1, (phi, candidates)
    return candidates[0]
