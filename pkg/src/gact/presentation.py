"""Schreier system and the three presentations of the maximal subgroup.

Words are tuples of signed 1-based generator indices.  Every builder
free-reduces and deduplicates its relators and emits them in a fixed
order, so identical inputs give byte-identical presentations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .endo import Endo, WreathElem, wreath_identity, wreath_inv, wreath_mul, wreath_to_text
from .errors import BadRank, ParseError, ResourceLimit
from .groups import Group
from .rees import KernelIndex, SandwichMatrix, kernel_index_of, lambda_list

DEFAULT_MAX_RELATORS = 5_000_000


@dataclass
class Presentation:
    generators: list[str]
    relators: list[tuple[int, ...]]
    tags: list[str]
    gen_keys: list | None = None  # builder-specific key per generator

    def tag_count(self, tag: str) -> int:
        return sum(1 for t in self.tags if t == tag)


def free_reduce(word) -> tuple[int, ...]:
    out = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def validate_presentation(p: Presentation) -> None:
    n = len(p.generators)
    if len(p.relators) != len(p.tags):
        raise ValueError("relators and tags must run in parallel")
    if len(set(p.generators)) != n:
        raise ValueError("duplicate generator names")
    for w in p.relators:
        if any(g == 0 or abs(g) > n for g in w):
            raise ValueError(f"relator {w} references an undeclared generator")
        if free_reduce(w) != tuple(w):
            raise ValueError(f"relator {w} is not freely reduced")


class _RelatorSink:
    """Collects freely reduced, deduplicated relators under a size cap."""

    def __init__(self, max_relators):
        self.words: list[tuple[int, ...]] = []
        self.tags: list[str] = []
        self.seen: set[tuple[int, ...]] = set()
        self.max_relators = max_relators

    def add(self, word, tag):
        word = free_reduce(word)
        if not word or word in self.seen:
            return
        if len(self.words) >= self.max_relators:
            raise ResourceLimit("relators", self.max_relators)
        self.seen.add(word)
        self.words.append(word)
        self.tags.append(tag)

    def add_reduced_unique(self, word, tag):
        # fast path for words the caller guarantees reduced and fresh
        if len(self.words) >= self.max_relators:
            raise ResourceLimit("relators", self.max_relators)
        self.words.append(word)
        self.tags.append(tag)


# -- Schreier system ----------------------------------------------------------

@dataclass
class SchreierSystem:
    """Prefix-closed words of idempotents translating between image columns.

    The root column (1..r) carries the empty word.  Every other column is
    reached from its parent (decrement the last decrementable slot) by one
    idempotent letter whose image is the column itself; attach records that
    letter's kernel row.
    """

    n: int
    r: int
    lambdas: list[tuple[int, ...]]
    parent: dict[tuple[int, ...], tuple[int, ...]]
    letter: dict[tuple[int, ...], Endo]
    attach: dict[tuple[int, ...], KernelIndex]
    words: dict[tuple[int, ...], tuple[Endo, ...]]


def _schreier_letter(g: Group, n: int, lam: tuple[int, ...]) -> Endo:
    # position k goes to the least member of lam at or above k, the tail to the last
    targets = []
    for k in range(1, n + 1):
        for u in lam:
            if k <= u:
                targets.append(u)
                break
        else:
            targets.append(lam[-1])
    return Endo(g, n, tuple(targets), (0,) * n)


def schreier_build(g: Group, n: int, r: int) -> SchreierSystem:
    lambdas = lambda_list(n, r)
    root = lambdas[0]
    parent: dict = {}
    letter: dict = {}
    attach: dict = {}
    words: dict = {root: ()}
    for lam in lambdas[1:]:
        prev = 0
        pick = None
        for idx, u in enumerate(lam):
            if u - prev > 1:
                pick = idx
            prev = u
        if pick is None:
            raise BadRank(f"column {lam} has no decrementable slot")
        par = lam[:pick] + (lam[pick] - 1,) + lam[pick + 1:]
        alpha = _schreier_letter(g, n, lam)
        parent[lam] = par
        letter[lam] = alpha
        attach[lam] = kernel_index_of(alpha)
        words[lam] = words[par] + (alpha,)
    return SchreierSystem(n, r, lambdas, parent, letter, attach, words)


# -- the position-indexed presentation ----------------------------------------

def position_gen_name(m: SandwichMatrix, i_idx: int, l_idx: int) -> str:
    lam = ".".join(str(u) for u in m.lambdas[l_idx])
    return f"f_{i_idx}_{lam}"


def _value_alphabet(m: SandwichMatrix):
    """Intern the occurring values and tabulate their pairwise quotients.

    Returns (values, per-row column id vectors, quotient table) where the
    id vectors hold -1 at zero entries and the quotient table gives an
    arbitrary-but-fixed id for each inv(a)*b over the occurring values.
    """
    g = m.group
    values = sorted(m.value_positions().keys(), key=wreath_to_text)
    vid = {v: idx for idx, v in enumerate(values)}
    ncols = len(m.lambdas)
    col_ids = [
        [
            -1 if m.entries[l_idx][i] is None else vid[m.entries[l_idx][i]]
            for l_idx in range(ncols)
        ]
        for i in range(len(m.kernels))
    ]
    quotients: dict[WreathElem, int] = {}
    qtab = []
    for a in values:
        inv_a = wreath_inv(g, a)
        row = []
        for b in values:
            q = wreath_mul(g, inv_a, b)
            row.append(quotients.setdefault(q, len(quotients)))
        qtab.append(row)
    return values, col_ids, qtab


def _emit_square_chains(nrows, ncols, col_ids, qtab, emit):
    """Scan each unordered row pair, chaining columns with equal quotients.

    emit(i, k, previous column, current column) is called once per chain
    link, with columns ascending.
    """
    for i in range(nrows):
        ids_i = col_ids[i]
        for k in range(i + 1, nrows):
            ids_k = col_ids[k]
            last_col: dict[int, int] = {}
            for l_idx in range(ncols):
                a = ids_i[l_idx]
                if a < 0:
                    continue
                b = ids_k[l_idx]
                if b < 0:
                    continue
                q = qtab[a][b]
                prev = last_col.get(q)
                if prev is not None:
                    emit(i, k, prev, l_idx)
                last_col[q] = l_idx


def build_gr_presentation(
    m: SandwichMatrix,
    s: SchreierSystem,
    max_relators: int = DEFAULT_MAX_RELATORS,
) -> Presentation:
    """Generators at the nonzero positions; relators of the three families.

    R1 runs along the Schreier tree edges: for each non-root column, its
    letter's kernel row links the parent column to the column itself.  R2
    kills each row's district generator.  R3 emits, per unordered row
    pair, one chain of square relators through each class of columns with
    a common quotient value.
    """
    if (m.n, m.r) != (s.n, s.r):
        raise ValueError("matrix and Schreier system disagree on (n, r)")
    npos = list(m.nonzero_positions())
    gen_of = {pos: gi + 1 for gi, pos in enumerate(npos)}
    nrows = len(m.kernels)
    ncols = len(m.lambdas)
    gen2d = [[0] * ncols for _ in range(nrows)]
    for (i, l_idx), gen in gen_of.items():
        gen2d[i][l_idx] = gen
    names = [position_gen_name(m, i, l) for i, l in npos]
    sink = _RelatorSink(max_relators)
    # R1 along tree edges, only when the parent-side position is nonzero
    for lam in s.lambdas[1:]:
        i_idx = m.kernel_pos[s.attach[lam]]
        l_idx = m.lambda_pos[lam]
        par_idx = m.lambda_pos[s.parent[lam]]
        if m.entries[par_idx][i_idx] is not None:
            sink.add((gen2d[i_idx][par_idx], -gen2d[i_idx][l_idx]), "R1")
    # R2 at each row's district column
    for i_idx in range(nrows):
        sink.add((gen2d[i_idx][m.lambda_pos[m.omega[i_idx]]],), "R2")
    # R3 chains per row pair and quotient value; the four letters name four
    # distinct positions, so each word arrives reduced and unseen
    _, col_ids, qtab = _value_alphabet(m)
    add_fast = sink.add_reduced_unique

    def emit(i, k, la, lb):
        add_fast(
            (-gen2d[i][la], gen2d[i][lb], -gen2d[k][lb], gen2d[k][la]),
            "R3",
        )

    _emit_square_chains(nrows, ncols, col_ids, qtab, emit)
    return Presentation(names, sink.words, sink.tags, gen_keys=npos)


# -- the value-indexed presentation -------------------------------------------

def value_gen_name(v: WreathElem) -> str:
    return f"f[{wreath_to_text(v)}]"


def build_quotient_presentation(
    m: SandwichMatrix, max_relators: int = DEFAULT_MAX_RELATORS
) -> Presentation:
    """One generator per distinct nonzero value; chained square relators.

    The relators identify quotient expressions across every pair of rows
    exactly as in the position-indexed presentation, but written on the
    value generators, plus the relator killing the identity value.
    """
    values, col_ids, qtab = _value_alphabet(m)
    names = [value_gen_name(v) for v in values]
    sink = _RelatorSink(max_relators)
    nrows = len(m.kernels)
    ncols = len(m.lambdas)

    def emit(i, k, la, lb):
        ids_i, ids_k = col_ids[i], col_ids[k]
        sink.add(
            (
                -ids_i[la] - 1,
                ids_i[lb] + 1,
                -ids_k[lb] - 1,
                ids_k[la] + 1,
            ),
            "P1",
        )

    _emit_square_chains(nrows, ncols, col_ids, qtab, emit)
    sink.add((values.index(wreath_identity(m.r)) + 1,), "P2")
    return Presentation(names, sink.words, sink.tags, gen_keys=values)


# -- the wreath-product presentation ------------------------------------------

def lavers_presentation(g: Group, r: int) -> Presentation:
    """Standard presentation of the weighted permutation group of rank r.

    Generators are the adjacent transpositions and one diagonal insertion
    per nontrivial weight and slot; insertions of the identity weight are
    omitted (they fall out of the product relation), so relators mention
    them as empty words.
    """
    if r < 1:
        raise BadRank("rank must be at least 1")
    names = [f"t{i}" for i in range(1, r)]
    gen_of = {}
    for i in range(1, r):
        gen_of[("t", i)] = i
    nid = len(names)
    for a in range(1, g.order):
        for j in range(1, r + 1):
            nid += 1
            names.append(f"i{a}_{j}")
            gen_of[("i", a, j)] = nid

    def t(i):
        return gen_of[("t", i)]

    def ins(a, j):
        # identity insertions are the empty word
        return () if a == 0 else (gen_of[("i", a, j)],)

    def ins_inv(a, j):
        return () if a == 0 else (-gen_of[("i", a, j)],)

    sink = _RelatorSink(DEFAULT_MAX_RELATORS)
    for i in range(1, r):
        sink.add((t(i), t(i)), "W1")
    for i in range(1, r):
        for j in range(i + 2, r):
            sink.add((t(i), t(j), -t(i), -t(j)), "W2")
    for i in range(1, r - 1):
        sink.add((t(i), t(i + 1), t(i), -t(i + 1), -t(i), -t(i + 1)), "W3")
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            for a in range(1, g.order):
                for b in range(1, g.order):
                    sink.add(
                        ins(a, i) + ins(b, j) + ins_inv(a, i) + ins_inv(b, j), "W4"
                    )
    for i in range(1, r + 1):
        for a in range(1, g.order):
            for b in range(1, g.order):
                ab = g.table[a][b]
                sink.add(ins(a, i) + ins(b, i) + ins_inv(ab, i), "W5")
    for j in range(1, r):
        for i in range(1, r + 1):
            if i == j or i == j + 1:
                continue
            for a in range(1, g.order):
                sink.add(ins(a, i) + (t(j),) + ins_inv(a, i) + (-t(j),), "W6")
    for i in range(1, r):
        for a in range(1, g.order):
            sink.add(ins(a, i) + (t(i),) + ins_inv(a, i + 1) + (-t(i),), "W7")
    return Presentation(names, sink.words, sink.tags)


def lavers_assignment(g: Group, r: int, p: Presentation) -> list[WreathElem]:
    """The tautological wreath element for each generator, by name."""
    out = []
    for name in p.generators:
        if name.startswith("t"):
            i = int(name[1:])
            perm = list(range(1, r + 1))
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
            out.append(WreathElem(r, tuple(perm), (0,) * r))
        else:
            a, j = name[1:].split("_")
            weights = [0] * r
            weights[int(j) - 1] = int(a)
            out.append(WreathElem(r, tuple(range(1, r + 1)), tuple(weights)))
    return out


def evaluate_word(g: Group, assignment: list[WreathElem], r: int, word) -> WreathElem:
    """Evaluate a relator word under a generator assignment."""
    acc = wreath_identity(r)
    for letter in word:
        v = assignment[abs(letter) - 1]
        if letter < 0:
            v = wreath_inv(g, v)
        acc = wreath_mul(g, acc, v)
    return acc


# -- text form ----------------------------------------------------------------

def presentation_to_text(p: Presentation) -> str:
    lines = [f"generators {len(p.generators)}"]
    lines.extend(f"gen {name}" for name in p.generators)
    for word in p.relators:
        letters = " ".join(
            p.generators[g - 1] if g > 0 else p.generators[-g - 1] + "'" for g in word
        )
        lines.append(f"rel {letters}")
    return "\n".join(lines) + "\n"


def presentation_from_text(text: str) -> Presentation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("generators "):
        raise ParseError("expected a 'generators k' header")
    try:
        count = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise ParseError(f"bad header {lines[0]!r}") from None
    names = []
    idx = 1
    while idx < len(lines) and lines[idx].startswith("gen "):
        names.append(lines[idx][4:].strip())
        idx += 1
    if len(names) != count:
        raise ParseError(f"header promises {count} generators, found {len(names)}")
    index = {name: gi + 1 for gi, name in enumerate(names)}
    if len(index) != len(names):
        raise ParseError("duplicate generator names")
    relators = []
    tags = []
    for ln in lines[idx:]:
        if not ln.startswith("rel "):
            raise ParseError(f"unexpected line {ln!r}")
        word = []
        for tok in ln[4:].split():
            inv = tok.endswith("'")
            name = tok[:-1] if inv else tok
            if name not in index:
                raise ParseError(f"unknown generator {name!r} in relator")
            word.append(-index[name] if inv else index[name])
        relators.append(tuple(word))
        tags.append("rel")
    return Presentation(names, relators, tags)
