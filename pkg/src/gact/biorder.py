"""Idempotents, E-squares, and the rectangular-band singularity test."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .endo import (
    Endo,
    WreathElem,
    compose,
    from_wreath,
    green_test,
    is_idempotent,
    wreath_inv,
    wreath_mul,
)
from .errors import ResourceLimit, ZeroEntry
from .groups import Group
from .rees import SandwichMatrix, build_sandwich, q_of

DEFAULT_MAX_IDEMPOTENTS = 1_000_000


def count_idempotents(g: Group, n: int, restrict_rank: int | None = None) -> int:
    ranks = [restrict_rank] if restrict_rank is not None else range(1, n + 1)
    return sum(comb(n, r) * (r * g.order) ** (n - r) for r in ranks)


def enumerate_idempotents(
    g: Group,
    n: int,
    restrict_rank: int | None = None,
    max_count: int = DEFAULT_MAX_IDEMPOTENTS,
) -> list[Endo]:
    """All idempotent endomorphisms, in a fixed order.

    An endomorphism is idempotent exactly when its target map fixes its
    image pointwise and its weights are trivial at the image points; so we
    enumerate image sets, then target assignments and weights off the
    image.  Order: rank ascending, image set lexicographic, then targets
    and weights in product order.
    """
    total = count_idempotents(g, n, restrict_rank)
    if total > max_count:
        raise ResourceLimit("idempotent enumeration", max_count)
    ranks = [restrict_rank] if restrict_rank is not None else range(1, n + 1)
    out: list[Endo] = []
    for r in ranks:
        if not 1 <= r <= n:
            raise ValueError(f"rank {r} outside [1, {n}]")
        for img in itertools.combinations(range(1, n + 1), r):
            img_set = set(img)
            rest = [k for k in range(1, n + 1) if k not in img_set]
            for assign in itertools.product(img, repeat=len(rest)):
                base_targets = [0] * n
                for t in img:
                    base_targets[t - 1] = t
                for k, t in zip(rest, assign):
                    base_targets[k - 1] = t
                targets = tuple(base_targets)
                for wv in itertools.product(range(g.order), repeat=len(rest)):
                    weights = [0] * n
                    for k, w in zip(rest, wv):
                        weights[k - 1] = w
                    out.append(Endo(g, n, targets, tuple(weights)))
    return out


@dataclass(frozen=True)
class ESquare:
    """Four idempotents (e, f, g, h) with e R f L g R h L e."""

    e: Endo
    f: Endo
    g: Endo
    h: Endo

    def __post_init__(self):
        for x in (self.e, self.f, self.g, self.h):
            if not is_idempotent(x):
                raise ValueError("all four corners must be idempotent")
        if not (
            green_test(self.e, self.f, "R")
            and green_test(self.f, self.g, "L")
            and green_test(self.g, self.h, "R")
            and green_test(self.h, self.e, "L")
        ):
            raise ValueError("corners must satisfy e R f L g R h L e")


def is_rectangular_band(sq: ESquare) -> bool:
    """One corner equality decides all four."""
    return compose(sq.e, sq.g) == sq.f


def is_singular(sq: ESquare) -> bool:
    """For this idempotent structure, singular means rectangular band.

    The exhaustive idempotent search is kept separately in
    singular_witness as a cross-check.
    """
    return is_rectangular_band(sq)


def singular_witness(
    sq: ESquare,
    candidates: list[Endo] | None = None,
    kind: str = "any",
    max_count: int = DEFAULT_MAX_IDEMPOTENTS,
) -> Endo | None:
    """Brute-force search for an idempotent that singularizes the square.

    kind selects "updown", "leftright" or "any".  Returns the first
    witness in enumeration order, or None.
    """
    e, f, g, h = sq.e, sq.f, sq.g, sq.h
    if candidates is None:
        candidates = enumerate_idempotents(e.group, e.n, max_count=max_count)
    for k in candidates:
        if kind in ("any", "updown"):
            if (
                compose(e, k) == e
                and compose(f, k) == f
                and compose(k, e) == h
                and compose(k, f) == g
            ):
                return k
        if kind in ("any", "leftright"):
            if (
                compose(k, e) == e
                and compose(k, h) == h
                and compose(e, k) == f
                and compose(h, k) == g
            ):
                return k
    return None


def square_condition(m: SandwichMatrix, i_idx: int, k_idx: int, l_idx: int, m_idx: int) -> bool:
    """Entry test for a singular square on rows i, k and columns l, m."""
    g = m.group
    p_li = m.entries[l_idx][i_idx]
    p_lk = m.entries[l_idx][k_idx]
    p_mi = m.entries[m_idx][i_idx]
    p_mk = m.entries[m_idx][k_idx]
    if p_li is None or p_lk is None or p_mi is None or p_mk is None:
        raise ZeroEntry("all four entries must be nonzero")
    return wreath_mul(g, wreath_inv(g, p_li), p_lk) == wreath_mul(g, wreath_inv(g, p_mi), p_mk)


def rees_element(m: SandwichMatrix, i_idx: int, w: WreathElem, l_idx: int) -> Endo:
    """The endomorphism with kernel row i, image column l and coordinate w."""
    th = m.thetas[i_idx]
    mid = from_wreath(m.group, w, m.n)
    return compose(compose(th, mid), q_of(m.group, m.n, m.r, m.lambdas[l_idx]))


def idempotent_at(m: SandwichMatrix, i_idx: int, l_idx: int) -> Endo:
    """The unique idempotent in the group H-class at (row i, column l)."""
    p = m.entries[l_idx][i_idx]
    if p is None:
        raise ZeroEntry(f"H-class at row {i_idx}, column {m.lambdas[l_idx]} is not a group")
    return rees_element(m, i_idx, wreath_inv(m.group, p), l_idx)


def esquare_at(m: SandwichMatrix, i_idx: int, k_idx: int, l_idx: int, m_idx: int) -> ESquare:
    """The square of idempotents on rows i, k and columns l, m."""
    return ESquare(
        idempotent_at(m, i_idx, l_idx),
        idempotent_at(m, i_idx, m_idx),
        idempotent_at(m, k_idx, m_idx),
        idempotent_at(m, k_idx, l_idx),
    )


def squares_report(g: Group, n: int, max_entries: int = 10_000_000) -> list[dict]:
    """Per-rank counts of idempotents, nondegenerate E-squares and singular ones."""
    report = []
    for r in range(1, n + 1):
        m = build_sandwich(g, n, r, max_entries)
        n_idem = sum(1 for _ in m.nonzero_positions())
        n_squares = 0
        n_singular = 0
        nrows = len(m.kernels)
        ncols = len(m.lambdas)
        for i in range(nrows):
            for k in range(i + 1, nrows):
                for l_idx in range(ncols):
                    if m.entries[l_idx][i] is None or m.entries[l_idx][k] is None:
                        continue
                    for m_idx in range(l_idx + 1, ncols):
                        if m.entries[m_idx][i] is None or m.entries[m_idx][k] is None:
                            continue
                        n_squares += 1
                        if square_condition(m, i, k, l_idx, m_idx):
                            n_singular += 1
        report.append(
            {"rank": r, "idempotents": n_idem, "squares": n_squares, "singular": n_singular}
        )
    return report
