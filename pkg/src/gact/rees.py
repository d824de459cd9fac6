"""The rank-r slice of the endomorphism monoid as a Rees matrix structure.

Columns are indexed by the possible images (strictly increasing r-tuples in
[1, n], lexicographic).  Rows are indexed by the possible kernels: a set
partition of [1, n] into r blocks together with a weight vector over the
non-minimal positions.  Each row has a canonical transversal endomorphism
that sends each block minimum to its block index with trivial weight; the
matrix entry at (column, row) is the rank-r composite of the column's
diagonal embedding with that transversal, or zero when the composite drops
rank.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .endo import Endo, WreathElem, kernel, wreath_identity
from .errors import BadRank, ResourceLimit
from .groups import Group

DEFAULT_MAX_ENTRIES = 10_000_000


def lambda_list(n: int, r: int) -> list[tuple[int, ...]]:
    """All strictly increasing r-tuples in [1, n], lexicographically sorted."""
    if not 1 <= r <= n:
        raise BadRank(f"rank {r} outside [1, {n}]")
    return list(itertools.combinations(range(1, n + 1), r))


def set_partitions(n: int, r: int) -> list[tuple[tuple[int, ...], ...]]:
    """All partitions of [1, n] into exactly r blocks.

    Blocks are min-sorted tuples; the list is sorted by (block minima,
    block contents) so downstream orderings are byte-reproducible.
    """
    if not 1 <= r <= n:
        raise BadRank(f"rank {r} outside [1, {n}]")
    out: list[tuple[tuple[int, ...], ...]] = []

    def place(k: int, blocks: list[list[int]]):
        if n - k + 1 < r - len(blocks):
            return  # not enough elements left to open the remaining blocks
        if k > n:
            if len(blocks) == r:
                out.append(tuple(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(k)
            place(k + 1, blocks)
            b.pop()
        if len(blocks) < r:
            blocks.append([k])
            place(k + 1, blocks)
            blocks.pop()

    place(1, [])
    out.sort(key=lambda blocks: (tuple(b[0] for b in blocks), blocks))
    return out


@dataclass(frozen=True)
class KernelIndex:
    """A row index: block partition plus weights at non-minimal positions.

    weightvec lists group elements for the positions of [1, n] outside the
    block minima, in increasing position order.
    """

    partition: tuple[tuple[int, ...], ...]
    weightvec: tuple[int, ...]

    def mins(self) -> tuple[int, ...]:
        return tuple(b[0] for b in self.partition)


def district(ki: KernelIndex) -> tuple[int, ...]:
    """The sorted tuple of block minima; the first entry is always 1."""
    return ki.mins()


def kernel_list(g: Group, n: int, r: int) -> list[KernelIndex]:
    """All row indices, partitions outermost, weight vectors in mixed radix."""
    parts = set_partitions(n, r)
    out = []
    for p in parts:
        for wv in itertools.product(range(g.order), repeat=n - r):
            out.append(KernelIndex(p, wv))
    return out


def theta(g: Group, n: int, r: int, ki: KernelIndex) -> Endo:
    """The canonical transversal endomorphism of the row ki.

    Sends every member of block j to generator j; block minima carry the
    identity weight, the other positions carry ki.weightvec in position
    order.
    """
    if not 1 <= r <= n:
        raise BadRank(f"rank {r} outside [1, {n}]")
    targets = [0] * n
    weights = [0] * n
    mins = set(ki.mins())
    for j, block in enumerate(ki.partition, start=1):
        for k in block:
            targets[k - 1] = j
    nonmins = [k for k in range(1, n + 1) if k not in mins]
    for w, k in zip(ki.weightvec, nonmins):
        weights[k - 1] = w
    return Endo(g, n, tuple(targets), tuple(weights))


def q_of(g: Group, n: int, r: int, lam: tuple[int, ...]) -> Endo:
    """The column map: generator k goes to the k-th member of lam, the tail to its first."""
    if not 1 <= r <= n:
        raise BadRank(f"rank {r} outside [1, {n}]")
    targets = tuple(lam) + (lam[0],) * (n - r)
    return Endo(g, n, targets, (0,) * n)


def kernel_index_of(alpha: Endo) -> KernelIndex:
    """The row index of any endomorphism: its kernel, weight-normalized."""
    kd = kernel(alpha)
    mins = set(kd.mins)
    weightvec = tuple(
        kd.normweights[k - 1] for k in range(1, alpha.n + 1) if k not in mins
    )
    return KernelIndex(kd.blocks, weightvec)


def theta_kernel_index(alpha: Endo) -> KernelIndex:
    """Recover the row index of a transversal endomorphism.

    alpha must already be in transversal form: block minima map with
    identity weight to their block index.
    """
    by_target: dict[int, list[int]] = {}
    for j, t in enumerate(alpha.targets, start=1):
        by_target.setdefault(t, []).append(j)
    blocks = sorted(by_target.values(), key=lambda b: b[0])
    mins = set()
    for j, block in enumerate(blocks, start=1):
        if by_target[j] != block:
            raise ValueError("not in transversal form: block order disagrees with targets")
        if alpha.weights[block[0] - 1] != 0:
            raise ValueError("not in transversal form: nontrivial weight at a block minimum")
        mins.add(block[0])
    weightvec = tuple(
        alpha.weights[k - 1] for k in range(1, alpha.n + 1) if k not in mins
    )
    return KernelIndex(tuple(tuple(b) for b in blocks), weightvec)


class SandwichMatrix:
    """Immutable bundle of the rank-r structure over one group.

    entries[column][row] is a WreathElem or None (the adjoined zero).
    """

    def __init__(self, g: Group, n: int, r: int, max_entries: int = DEFAULT_MAX_ENTRIES):
        if not 1 <= r <= n:
            raise BadRank(f"rank {r} outside [1, {n}]")
        self.group = g
        self.n = n
        self.r = r
        self.lambdas = lambda_list(n, r)
        self.kernels = kernel_list(g, n, r)
        total = len(self.lambdas) * len(self.kernels)
        if total > max_entries:
            raise ResourceLimit("sandwich matrix entries", max_entries)
        self.lambda_pos = {lam: i for i, lam in enumerate(self.lambdas)}
        self.kernel_pos = {ki: i for i, ki in enumerate(self.kernels)}
        self.thetas = [theta(g, n, r, ki) for ki in self.kernels]
        self.districts = [ki.mins() for ki in self.kernels]
        self.omega = list(self.districts)
        identity = wreath_identity(r)
        rng = range(len(self.kernels))
        entries: list[list[WreathElem | None]] = []
        for lam in self.lambdas:
            row: list[WreathElem | None] = []
            for i in rng:
                th = self.thetas[i]
                perm = tuple(th.targets[u - 1] for u in lam)
                if len(set(perm)) != r:
                    row.append(None)
                else:
                    row.append(WreathElem(r, perm, tuple(th.weights[u - 1] for u in lam)))
            entries.append(row)
        self.entries = entries
        for i in rng:
            if entries[self.lambda_pos[self.omega[i]]][i] != identity:
                raise AssertionError("district column does not give the identity entry")
        for l_idx, per_lambda in enumerate(entries):
            if all(v is None for v in per_lambda):
                raise AssertionError(f"image column {self.lambdas[l_idx]} is entirely zero")
        # every kernel row is nonzero at its own district column, checked above
        self._value_positions: dict[WreathElem, list[tuple[int, int]]] | None = None

    def entry(self, l_idx: int, i_idx: int) -> WreathElem | None:
        return self.entries[l_idx][i_idx]

    def nonzero_positions(self):
        """Positions as (row index, column index) pairs in lexicographic order."""
        for i in range(len(self.kernels)):
            for l_idx in range(len(self.lambdas)):
                if self.entries[l_idx][i] is not None:
                    yield (i, l_idx)

    def value_positions(self) -> dict[WreathElem, list[tuple[int, int]]]:
        """Map each nonzero value to its positions, computed once."""
        if self._value_positions is None:
            vp: dict[WreathElem, list[tuple[int, int]]] = {}
            for pos in self.nonzero_positions():
                vp.setdefault(self.entries[pos[1]][pos[0]], []).append(pos)
            self._value_positions = vp
        return self._value_positions


def build_sandwich(g: Group, n: int, r: int, max_entries: int = DEFAULT_MAX_ENTRIES) -> SandwichMatrix:
    return SandwichMatrix(g, n, r, max_entries)


def sandwich_entry(m: SandwichMatrix, lam: tuple[int, ...], ki: KernelIndex) -> WreathElem | None:
    return m.entries[m.lambda_pos[lam]][m.kernel_pos[ki]]


def occurrences(m: SandwichMatrix, phi: WreathElem) -> list[tuple[int, int]]:
    """All (row, column) positions holding phi.

    Rows are pre-filtered by the positional constraints a district must
    satisfy against each column (block minimum of the image slot at or
    below the column entry, strictly below for a twisted weight) before
    the stored entry is compared.
    """
    res = []
    r = m.r
    perm = phi.perm
    weights = phi.weights
    for i, d in enumerate(m.districts):
        row_ok = [
            l_idx
            for l_idx, lam in enumerate(m.lambdas)
            if all(
                d[perm[j] - 1] < lam[j] or (d[perm[j] - 1] == lam[j] and weights[j] == 0)
                for j in range(r)
            )
        ]
        for l_idx in row_ok:
            if m.entries[l_idx][i] == phi:
                res.append((i, l_idx))
    return res


def matrix_to_text(m: SandwichMatrix) -> str:
    """One record per nonzero entry, zero entries omitted."""
    lines = [
        f"sandwich n={m.n} r={m.r} group-order={m.group.order} "
        f"lambdas={len(m.lambdas)} kernels={len(m.kernels)}"
    ]
    for i, l_idx in m.nonzero_positions():
        v = m.entries[l_idx][i]
        lam = ".".join(str(u) for u in m.lambdas[l_idx])
        perm = ",".join(str(t) for t in v.perm)
        ws = ",".join(str(w) for w in v.weights)
        lines.append(f"lambda={lam} kernel={i} perm={perm} weights={ws}")
    return "\n".join(lines) + "\n"
