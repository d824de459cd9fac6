"""Connectivity of matrix positions and the consistency machinery.

Positions of the sandwich matrix are (row, column) index pairs.  Two
positions holding the same nonzero value are linked when they share a row
or a column; the transitive closure makes connected positions carry the
same generator in the presented group.  Values whose positions fall apart
into several components are handled by splitting off a simple form and
certifying each component against the split by an explicit singular
quadruple found in the matrix.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .endo import (
    Endo,
    WreathElem,
    wreath_identity,
    wreath_inv,
    wreath_mul,
    wreath_to_text,
)
from .errors import NotDecomposable, StepNotApplicable, WitnessNotFound
from .presentation import Presentation, _RelatorSink, value_gen_name
from .rees import SandwichMatrix, theta_kernel_index

Position = tuple[int, int]


class PositionGraph:
    """Union-find over the nonzero positions with equal-value links.

    The representative of a component is its lexicographically least
    (row, column) pair.  Edges are kept for reporting.
    """

    def __init__(self, m: SandwichMatrix):
        self.matrix = m
        self.positions: list[Position] = list(m.nonzero_positions())
        self.index = {pos: i for i, pos in enumerate(self.positions)}
        self._parent = list(range(len(self.positions)))
        self.edges: list[tuple[str, Position, Position]] = []

    def _find(self, i: int) -> int:
        parent = self._parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def _union(self, i: int, j: int):
        ri, rj = self._find(i), self._find(j)
        if ri == rj:
            return
        if ri > rj:
            ri, rj = rj, ri
        self._parent[rj] = ri  # smaller index wins, so roots stay lexicographic minima

    def link(self, kind: str, a: Position, b: Position):
        self.edges.append((kind, a, b))
        self._union(self.index[a], self.index[b])

    def find(self, pos: Position) -> Position:
        return self.positions[self._find(self.index[pos])]

    def components(self) -> dict[Position, list[Position]]:
        out: dict[Position, list[Position]] = {}
        for i, pos in enumerate(self.positions):
            out.setdefault(self.positions[self._find(i)], []).append(pos)
        return out

    def value_of(self, pos: Position) -> WreathElem:
        return self.matrix.entries[pos[1]][pos[0]]


def connectivity(m: SandwichMatrix) -> PositionGraph:
    """Close the same-row and same-column equal-value links."""
    pg = PositionGraph(m)
    nrows = len(m.kernels)
    ncols = len(m.lambdas)
    for i in range(nrows):
        first: dict[WreathElem, Position] = {}
        for l_idx in range(ncols):
            v = m.entries[l_idx][i]
            if v is None:
                continue
            pos = (i, l_idx)
            if v in first:
                pg.link("row", first[v], pos)
            else:
                first[v] = pos
    for l_idx in range(ncols):
        first = {}
        for i in range(nrows):
            v = m.entries[l_idx][i]
            if v is None:
                continue
            pos = (i, l_idx)
            if v in first:
                pg.link("column", first[v], pos)
            else:
                first[v] = pos
    return pg


def value_component_counts(pg: PositionGraph) -> dict[WreathElem, tuple[int, int]]:
    """Per value: (number of positions, number of components)."""
    pos_count: dict[WreathElem, int] = defaultdict(int)
    comps: dict[WreathElem, set[Position]] = defaultdict(set)
    for pos in pg.positions:
        v = pg.value_of(pos)
        pos_count[v] += 1
        comps[v].add(pg.find(pos))
    return {v: (pos_count[v], len(comps[v])) for v in pos_count}


# -- the three walking steps ---------------------------------------------------

def _free_set(m: SandwichMatrix, pos: Position) -> set[int]:
    i_idx, l_idx = pos
    used = set(m.districts[i_idx]) | set(m.lambdas[l_idx])
    return set(range(1, m.n + 1)) - used


def _moved_row(m: SandwichMatrix, i_idx: int, t: int, target: int, weight: int) -> int:
    """Row index of the transversal obtained by redefining position t."""
    th = m.thetas[i_idx]
    targets = list(th.targets)
    weights = list(th.weights)
    targets[t - 1] = target
    weights[t - 1] = weight
    moved = Endo(m.group, m.n, tuple(targets), tuple(weights))
    return m.kernel_pos[theta_kernel_index(moved)]


def _check_same_value(m: SandwichMatrix, old: Position, new: Position):
    if m.entries[old[1]][old[0]] != m.entries[new[1]][new[0]]:
        raise AssertionError("step changed the matrix value")


def step_d(m: SandwichMatrix, pos: Position, t: int) -> Position:
    """Pull the block minimum above t down onto t; same column, same value."""
    i_idx, l_idx = pos
    if t not in _free_set(m, pos):
        raise StepNotApplicable(f"{t} is not free at this position")
    d = m.districts[i_idx]
    slot = None
    for j in range(len(d) - 1):
        if d[j] < t < d[j + 1]:
            slot = j + 1  # 0-based index of the minimum being replaced
            break
    if slot is None:
        raise StepNotApplicable(f"{t} is not between two block minima")
    k_idx = _moved_row(m, i_idx, t, slot + 1, 0)
    new = (k_idx, l_idx)
    _check_same_value(m, pos, new)
    return new


def step_u(m: SandwichMatrix, pos: Position, t: int) -> Position:
    """Copy the column entry below t onto t and raise that column slot to t."""
    i_idx, l_idx = pos
    if t not in _free_set(m, pos):
        raise StepNotApplicable(f"{t} is not free at this position")
    lam = m.lambdas[l_idx]
    slot = None
    for j in range(len(lam) - 1, -1, -1):
        if lam[j] < t:
            slot = j
            break
    if slot is None:
        raise StepNotApplicable(f"{t} is below the whole column {lam}")
    th = m.thetas[i_idx]
    u = lam[slot]
    m_idx = _moved_row(m, i_idx, t, th.targets[u - 1], th.weights[u - 1])
    mu = lam[:slot] + (t,) + lam[slot + 1:]
    new = (m_idx, m.lambda_pos[mu])
    _check_same_value(m, pos, new)
    return new


def step_u_prime(m: SandwichMatrix, pos: Position, t: int) -> Position:
    """Copy the column entry above t onto t and lower that column slot to t."""
    i_idx, l_idx = pos
    lam = m.lambdas[l_idx]
    slot = None
    for j, u in enumerate(lam):
        if t < u:
            slot = j
            break
    if slot is None:
        raise StepNotApplicable(f"{t} is above the whole column {lam}")
    free = _free_set(m, pos)
    if any(s not in free for s in range(t, lam[slot])):
        raise StepNotApplicable(f"[{t}, {lam[slot]}) is not entirely free")
    th = m.thetas[i_idx]
    u = lam[slot]
    l2_idx = _moved_row(m, i_idx, t, th.targets[u - 1], th.weights[u - 1])
    mu = lam[:slot] + (t,) + lam[slot + 1:]
    new = (l2_idx, m.lambda_pos[mu])
    _check_same_value(m, pos, new)
    return new


# -- simple forms and the rising point -----------------------------------------

def simple_form_elem(r: int, k: int, m: int, a: int) -> WreathElem:
    """The map cycling slots k..k+m forward and closing with weight a."""
    if not (1 <= k and m >= 0 and k + m <= r):
        raise ValueError(f"window [{k}, {k + m}] outside [1, {r}]")
    perm = list(range(1, r + 1))
    weights = [0] * r
    for j in range(k, k + m):
        perm[j - 1] = j + 1
    perm[k + m - 1] = k
    weights[k + m - 1] = a
    return WreathElem(r, tuple(perm), tuple(weights))


def is_simple_form(phi: WreathElem):
    """Recognize a forward cycle on a window with one closing weight.

    Returns the parameters (start, length, weight) or None; the identity
    reports (1, 0, 0).
    """
    diffs = [
        j
        for j in range(1, phi.r + 1)
        if phi.perm[j - 1] != j or phi.weights[j - 1] != 0
    ]
    if not diffs:
        return (1, 0, 0)
    k, last = diffs[0], diffs[-1]
    for j in range(k, last):
        if phi.perm[j - 1] != j + 1 or phi.weights[j - 1] != 0:
            return None
    if phi.perm[last - 1] != k:
        return None
    return (k, last - k, phi.weights[last - 1])


def _positions_and_weights(phi: WreathElem):
    pos = [0] * (phi.r + 1)
    wt = [0] * (phi.r + 1)
    for j, t in enumerate(phi.perm, start=1):
        pos[t] = j
        wt[t] = phi.weights[j - 1]
    return pos, wt


def rising_point(phi: WreathElem) -> int:
    """Scan the top slot leftward through trivially weighted predecessors.

    r+1 when the top slot carries a twist; otherwise walk k down while
    slot k-1 is hit from strictly further left with trivial weight, and
    stop either at a twisted slot (return the current k) or when slot k-1
    is not to the left (return k).  The identity is the only rank with
    value 1.
    """
    pos, wt = _positions_and_weights(phi)
    r = phi.r
    if wt[r] != 0:
        return r + 1
    k = r
    while k >= 2 and pos[k - 1] < pos[k]:
        if wt[k - 1] != 0:
            return k
        k -= 1
    return k


def decompose(g, phi: WreathElem) -> tuple[WreathElem, WreathElem]:
    """Split phi into (remainder, simple form) lowering the rising point.

    Only defined for rising point at least 3.  The simple factor depends
    only on phi: when the top slot is twisted it is the bare insertion at
    the top; otherwise it cycles the window below the rising point far
    enough to absorb the preimage of slot k-1.
    """
    rp = rising_point(phi)
    if rp < 3:
        raise NotDecomposable(f"rising point {rp} admits no simple split")
    pos, wt = _positions_and_weights(phi)
    r = phi.r
    if rp == r + 1:
        gamma = simple_form_elem(r, r, 0, wt[r])
    else:
        k = rp
        l = pos[k - 1]
        a = wt[k - 1]
        anchor = pos[k]
        if l < anchor:
            gamma = simple_form_elem(r, k - 1, 0, a)
        else:
            chain = [anchor] + [pos[k + s] for s in range(1, r - k + 1)]
            below = sum(1 for x in chain if x < l)
            gamma = simple_form_elem(r, k - 1, below, a)
    beta = wreath_mul(g, phi, wreath_inv(g, gamma))
    if wreath_mul(g, beta, gamma) != phi or rising_point(beta) >= rp:
        raise AssertionError("decomposition failed to lower the rising point")
    return beta, gamma


# -- witness search and presentation simplification -----------------------------

def find_singular_witness(
    m: SandwichMatrix,
    phi: WreathElem,
    phi2: WreathElem,
    psi: WreathElem,
    sigma: WreathElem,
    fix_row_k: int | None = None,
    fix_col_lambda: int | None = None,
):
    """Search a 2x2 pattern [[phi, psi], [phi2, sigma]] in the matrix.

    Returns (i, k, l, mu) with entries phi at (i, l), phi2 at (i, mu),
    psi at (k, l) and sigma at (k, mu), or None.  The quadruple must
    satisfy the square condition up front.
    """
    g = m.group
    if wreath_mul(g, wreath_inv(g, phi), psi) != wreath_mul(g, wreath_inv(g, phi2), sigma):
        raise ValueError("quadruple fails the square condition")
    vp = m.value_positions()
    phi_positions = vp.get(phi, [])
    psi_positions = vp.get(psi, [])
    psi_by_col: dict[int, list[int]] = defaultdict(list)
    for k_idx, l_idx in psi_positions:
        psi_by_col[l_idx].append(k_idx)
    ncols = len(m.lambdas)
    for i_idx, l_idx in phi_positions:
        if fix_col_lambda is not None and l_idx != fix_col_lambda:
            continue
        ks = psi_by_col.get(l_idx, [])
        if fix_row_k is not None:
            ks = [k for k in ks if k == fix_row_k]
        for k_idx in ks:
            for mu in range(ncols):
                if m.entries[mu][i_idx] == phi2 and m.entries[mu][k_idx] == sigma:
                    return (i_idx, k_idx, l_idx, mu)
    return None


@dataclass
class MergeWitness:
    """Record of one certified component merge."""

    value: WreathElem
    component: Position
    simple_factor: WreathElem
    remainder: WreathElem
    square: tuple[int, int, int, int]  # rows (t, j), columns (lambda, mu)


def simplify_presentation(
    p: Presentation,
    m: SandwichMatrix,
    pg: PositionGraph,
    witness_log: list | None = None,
) -> Presentation:
    """Collapse the position-indexed presentation onto value generators.

    Identity-valued generators are erased, connected positions are merged,
    and each remaining component of a value is tied to the others through
    a decomposition square found in the matrix; the witness is recorded
    and the corresponding product relator added, so every identification
    is a consequence of the input relators and the presented group is
    unchanged.
    """
    if p.gen_keys is None:
        raise ValueError("needs the position-keyed presentation")
    g = m.group
    identity = wreath_identity(m.r)
    vp = m.value_positions()

    merged_root: dict[Position, Position] = {}  # second-level union over component roots

    def final_root(pos: Position) -> Position:
        root = pg.find(pos)
        while root in merged_root:
            root = merged_root[root]
        return root

    roots_by_value: dict[WreathElem, list[Position]] = defaultdict(list)
    for root in sorted(pg.components()):
        v = pg.value_of(root)
        if v != identity:
            roots_by_value[v].append(root)

    pending: list[tuple[WreathElem, WreathElem, WreathElem]] = []

    def single_class(value: WreathElem) -> Position | None:
        if value == identity:
            return None
        positions = vp.get(value)
        if not positions:
            raise WitnessNotFound(f"value {wreath_to_text(value)} does not occur")
        roots = {final_root(pos) for pos in positions}
        if len(roots) != 1:
            raise WitnessNotFound(
                f"value {wreath_to_text(value)} is split across {len(roots)} classes"
            )
        return roots.pop()

    multi = [v for v, roots in roots_by_value.items() if len(roots) > 1]
    multi.sort(key=lambda v: (rising_point(v), wreath_to_text(v)))
    for value in multi:
        if rising_point(value) < 3:
            raise WitnessNotFound(
                f"value {wreath_to_text(value)} has several components "
                "but no simple split is available"
            )
        beta, gamma = decompose(g, value)
        single_class(beta)  # certified single before use
        single_class(gamma)
        roots = roots_by_value[value]
        for root in roots:
            j_idx, l_idx = root
            witness = find_singular_witness(
                m, beta, identity, value, gamma, fix_row_k=j_idx, fix_col_lambda=l_idx
            )
            if witness is None:
                raise WitnessNotFound(
                    f"no certifying square for value {wreath_to_text(value)} "
                    f"at component {root}"
                )
            if witness_log is not None:
                witness_log.append(MergeWitness(value, root, gamma, beta, witness))
        anchor = min(roots)
        for root in roots:
            if root != anchor:
                merged_root[root] = anchor
        pending.append((value, gamma, beta))

    # after merging, each nonidentity value must sit in exactly one class
    class_of_value: dict[WreathElem, Position] = {}
    for value in vp:
        if value == identity:
            continue
        class_of_value[value] = single_class(value)
    values = sorted(class_of_value.keys(), key=wreath_to_text)
    gen_of_value = {v: gi + 1 for gi, v in enumerate(values)}
    names = [value_gen_name(v) for v in values]

    gen_letter: list[int] = []  # old generator -> signed new letter, 0 to erase
    for pos in p.gen_keys:
        v = pg.value_of(pos)
        gen_letter.append(0 if v == identity else gen_of_value[v])

    sink = _RelatorSink(len(p.relators) + len(pending) + 1)
    for word, tag in zip(p.relators, p.tags):
        out = []
        for letter in word:
            new = gen_letter[abs(letter) - 1]
            if new:
                out.append(new if letter > 0 else -new)
        sink.add(tuple(out), tag)
    for value, gamma, beta in pending:
        word = (gen_of_value[value],)
        word += (-gen_of_value[beta],) if beta != identity else ()
        word += (-gen_of_value[gamma],)
        sink.add(word, "merge")
    return Presentation(names, sink.words, sink.tags, gen_keys=values)
