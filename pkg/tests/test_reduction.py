import random

import pytest

from gact import (
    NotDecomposable,
    StepNotApplicable,
    WitnessNotFound,
    WreathElem,
    build_gr_presentation,
    build_sandwich,
    connectivity,
    cyclic_group,
    decompose,
    find_singular_witness,
    is_simple_form,
    parse_wreath,
    rising_point,
    schreier_build,
    simple_form_elem,
    simplify_presentation,
    step_d,
    step_u,
    step_u_prime,
    todd_coxeter,
    trivial_group,
    value_component_counts,
    wreath_identity,
    wreath_mul,
)
from gact.reduction import _free_set

from helpers import def81_rising_point, wreath_elements

Z2 = cyclic_group(2)
Z3 = cyclic_group(3)
T = trivial_group()


# -- connectivity ----------------------------------------------------------------

def test_connectivity_single_components_when_roomy():
    m = build_sandwich(Z2, 5, 2)
    counts = value_component_counts(connectivity(m))
    for value, (npos, ncomp) in counts.items():
        assert ncomp == 1, value


def test_connectivity_counterexample():
    m = build_sandwich(Z2, 4, 2)
    counts = value_component_counts(connectivity(m))
    diag = parse_wreath(Z2, 2, "1:1;2:1")
    assert counts[diag] == (2, 2)


def test_connectivity_singleton_value():
    m = build_sandwich(Z2, 6, 4)
    phi = parse_wreath(Z2, 4, "3:0;2:1;4:0;1:0")
    counts = value_component_counts(connectivity(m))
    assert counts[phi] == (1, 1)


def test_connectivity_components_carry_one_value():
    m = build_sandwich(Z2, 4, 2)
    pg = connectivity(m)
    for root, members in pg.components().items():
        values = {pg.value_of(p) for p in members}
        assert len(values) == 1
        assert root == min(members)


# -- the walking steps -------------------------------------------------------------

def kernel_row(m, targets, weights):
    from gact import Endo
    from gact.rees import theta_kernel_index

    return m.kernel_pos[theta_kernel_index(Endo(m.group, m.n, targets, weights))]


def test_step_u_example():
    m = build_sandwich(Z2, 5, 2)
    i = kernel_row(m, (1, 2, 1, 2, 1), (0, 0, 1, 1, 0))  # district (1, 2)
    pos = (i, m.lambda_pos[(3, 4)])
    new = step_u(m, pos, 5)
    assert m.lambdas[new[1]] == (3, 5)
    assert m.entries[new[1]][new[0]] == m.entries[pos[1]][pos[0]]
    assert m.districts[new[0]] == (1, 2)


def test_step_d_example():
    m = build_sandwich(Z2, 5, 2)
    i = kernel_row(m, (1, 1, 2, 1, 2), (0, 1, 0, 1, 0))  # district (1, 3)
    pos = (i, m.lambda_pos[(4, 5)])
    new = step_d(m, pos, 2)
    assert m.districts[new[0]] == (1, 2)
    assert m.lambdas[new[1]] == (4, 5)
    assert m.entries[new[1]][new[0]] == m.entries[pos[1]][pos[0]]


def test_step_u_prime_example():
    m = build_sandwich(Z2, 5, 2)
    i = kernel_row(m, (1, 2, 1, 2, 1), (0, 0, 1, 1, 0))  # district (1, 2)
    pos = (i, m.lambda_pos[(4, 5)])
    new = step_u_prime(m, pos, 3)
    assert m.lambdas[new[1]] == (3, 5)
    assert m.entries[new[1]][new[0]] == m.entries[pos[1]][pos[0]]


def test_step_rejects_used_point():
    m = build_sandwich(Z2, 5, 2)
    i = kernel_row(m, (1, 2, 1, 2, 1), (0, 0, 1, 1, 0))
    pos = (i, m.lambda_pos[(3, 4)])
    for t in (1, 2, 3, 4):
        with pytest.raises(StepNotApplicable):
            step_u(m, pos, t)
        with pytest.raises(StepNotApplicable):
            step_d(m, pos, t)


def test_steps_preserve_value_exhaustively():
    for g, n, r in ((Z2, 4, 2), (T, 5, 2), (Z2, 5, 2), (T, 5, 3)):
        m = build_sandwich(g, n, r)
        for pos in m.nonzero_positions():
            for t in sorted(_free_set(m, pos)):
                for step in (step_d, step_u, step_u_prime):
                    try:
                        new = step(m, pos, t)
                    except StepNotApplicable:
                        continue
                    assert m.entries[new[1]][new[0]] == m.entries[pos[1]][pos[0]]


# -- simple forms and rising point ---------------------------------------------------

def test_is_simple_form_examples():
    assert is_simple_form(wreath_identity(3)) == (1, 0, 0)
    insertion = parse_wreath(Z2, 3, "1:0;2:1;3:0")
    assert is_simple_form(insertion) == (2, 0, 1)
    cycle = parse_wreath(Z2, 4, "1:0;3:0;4:0;2:0")
    assert is_simple_form(cycle) == (2, 2, 0)
    twisted = parse_wreath(Z2, 4, "2:0;3:0;1:1;4:0")
    assert is_simple_form(twisted) == (1, 2, 1)
    reversal = parse_wreath(T, 3, "3:0;2:0;1:0")
    assert is_simple_form(reversal) is None
    shifted_weight = parse_wreath(Z2, 3, "2:1;3:0;1:0")
    assert is_simple_form(shifted_weight) is None


def test_simple_form_elem_round_trip():
    for r in range(1, 5):
        for k in range(1, r + 1):
            for m_len in range(0, r - k + 1):
                for a in range(3):
                    if m_len == 0 and a == 0:
                        continue
                    phi = simple_form_elem(r, k, m_len, a)
                    assert is_simple_form(phi) == (k, m_len, a)


def test_rising_point_identity_and_insertions():
    assert rising_point(wreath_identity(4)) == 1
    assert rising_point(parse_wreath(Z2, 4, "1:1;2:0;3:0;4:0")) == 2  # twist at slot 1
    assert rising_point(parse_wreath(Z2, 4, "2:0;3:0;1:1;4:0")) == 2  # wrapped cycle
    assert rising_point(parse_wreath(Z2, 4, "1:0;2:0;3:0;4:1")) == 5  # twisted top


def test_rising_point_worked_example():
    phi = parse_wreath(Z2, 4, "3:0;2:1;4:0;1:0")
    assert rising_point(phi) == 3


def test_rising_point_matches_quantified_oracle():
    for g in (T, Z2, Z3):
        for r in range(1, 5):
            for phi in wreath_elements(g, r):
                assert rising_point(phi) == def81_rising_point(phi)


def test_rising_point_one_only_identity():
    for phi in wreath_elements(Z2, 3):
        assert (rising_point(phi) == 1) == (phi == wreath_identity(3))


# -- decomposition ---------------------------------------------------------------------

def test_decompose_top_twist_case():
    phi = parse_wreath(Z2, 3, "1:0;2:0;3:1")
    beta, gamma = decompose(Z2, phi)
    assert gamma == phi
    assert beta == wreath_identity(3)
    assert rising_point(beta) == 1


def test_decompose_worked_example():
    phi = parse_wreath(Z2, 4, "3:0;2:1;4:0;1:0")
    beta, gamma = decompose(Z2, phi)
    assert gamma == parse_wreath(Z2, 4, "1:0;3:0;2:1;4:0")
    assert beta == parse_wreath(Z2, 4, "2:0;3:0;4:0;1:0")
    assert rising_point(beta) == 2
    assert wreath_mul(Z2, beta, gamma) == phi


def test_decompose_rejects_low_rising_point():
    with pytest.raises(NotDecomposable):
        decompose(Z2, wreath_identity(3))
    with pytest.raises(NotDecomposable):
        decompose(Z2, parse_wreath(Z2, 3, "1:1;2:0;3:0"))


def test_decompose_exhaustive_small_ranks():
    for g in (T, Z2, Z3):
        for r in range(1, 4):
            for phi in wreath_elements(g, r):
                if rising_point(phi) < 3:
                    continue
                beta, gamma = decompose(g, phi)
                assert wreath_mul(g, beta, gamma) == phi
                assert is_simple_form(gamma) is not None
                assert rising_point(beta) < rising_point(phi)


def test_decompose_random_rank_four():
    rng = random.Random(8)
    for _ in range(2000):
        perm = list(range(1, 5))
        rng.shuffle(perm)
        phi = WreathElem(4, tuple(perm), tuple(rng.randrange(3) for _ in range(4)))
        if rising_point(phi) < 3:
            continue
        beta, gamma = decompose(Z3, phi)
        assert wreath_mul(Z3, beta, gamma) == phi
        assert is_simple_form(gamma) is not None
        assert rising_point(beta) < rising_point(phi)


# -- witness search ---------------------------------------------------------------------

def test_witness_for_identity_quadruple():
    m = build_sandwich(Z2, 4, 2)
    e = wreath_identity(2)
    found = find_singular_witness(m, e, e, e, e)
    assert found is not None
    i, k, l_idx, m_idx = found
    assert m.entries[l_idx][i] == e
    assert m.entries[m_idx][k] == e


def test_witness_for_simple_split():
    # a window cycle with closing twist splits as insertion times cycle
    m = build_sandwich(Z2, 4, 2)
    alpha = parse_wreath(Z2, 2, "2:0;1:1")
    gamma = parse_wreath(Z2, 2, "2:0;1:0")
    beta = parse_wreath(Z2, 2, "1:0;2:1")
    assert wreath_mul(Z2, beta, gamma) == alpha
    found = find_singular_witness(m, beta, wreath_identity(2), alpha, gamma)
    assert found is not None
    i, k, l_idx, m_idx = found
    assert m.entries[l_idx][i] == beta
    assert m.entries[m_idx][i] == wreath_identity(2)
    assert m.entries[l_idx][k] == alpha
    assert m.entries[m_idx][k] == gamma


def test_witness_precondition():
    m = build_sandwich(Z2, 4, 2)
    e = wreath_identity(2)
    tw = parse_wreath(Z2, 2, "1:1;2:0")
    with pytest.raises(ValueError):
        find_singular_witness(m, e, e, e, tw)


# -- simplification ----------------------------------------------------------------------

def simplified(g, n, r, log=None):
    m = build_sandwich(g, n, r)
    p = build_gr_presentation(m, schreier_build(g, n, r))
    pg = connectivity(m)
    return p, simplify_presentation(p, m, pg, log)


def test_simplify_collapses_to_value_generators():
    _, q = simplified(T, 5, 2)
    assert q.generators == ["f[2:0;1:0]"]


def test_simplify_records_witnesses_for_split_values():
    log = []
    _, q = simplified(Z2, 4, 2, log)
    diag = parse_wreath(Z2, 2, "1:1;2:1")
    merged = [w for w in log if w.value == diag]
    assert len(merged) == 2  # one certificate per component
    for w in merged:
        i, k, l_idx, m_idx = w.square
        m = build_sandwich(Z2, 4, 2)
        assert m.entries[l_idx][k] == diag
        assert m.entries[m_idx][i] == wreath_identity(2)


def test_simplify_preserves_enumerated_order():
    for g, n, r in ((T, 4, 2), (Z2, 4, 2), (Z2, 4, 1), (T, 5, 3), (T, 6, 4)):
        p, q = simplified(g, n, r)
        assert todd_coxeter(p).order == todd_coxeter(q).order


def test_simplify_surfaces_missing_witness():
    # an unclosed graph leaves low-rising-point values split, and no
    # decomposition square can certify those: the failure must surface
    from gact import PositionGraph

    m = build_sandwich(Z2, 4, 2)
    p = build_gr_presentation(m, schreier_build(Z2, 4, 2))
    unclosed = PositionGraph(m)
    with pytest.raises(WitnessNotFound):
        simplify_presentation(p, m, unclosed)


def test_rank_top_slices_need_no_merging():
    # one free point is enough to connect every repeated value
    for g, n in ((Z2, 5), (T, 5), (Z3, 4)):
        m = build_sandwich(g, n, n - 1)
        counts = value_component_counts(connectivity(m))
        assert all(c == 1 for _, c in counts.values())


def test_equal_values_equal_generators_in_presented_group():
    # consistency at desk scale: any two positions carrying the same value
    # name the same element of the group presented before simplification
    m = build_sandwich(Z2, 4, 2)
    p = build_gr_presentation(m, schreier_build(Z2, 4, 2))
    table = todd_coxeter(p)
    gen = {pos: gi + 1 for gi, pos in enumerate(p.gen_keys)}
    from gact import word_equal

    for positions in m.value_positions().values():
        first = positions[0]
        for other in positions[1:]:
            assert word_equal(table, (gen[first],), (gen[other],))


def mutually_bad(district_a, district_b):
    # a point is mutually bad when it is a block minimum of both rows but
    # at different slots, so no single row can agree with both there
    slots_a = {u: m for m, u in enumerate(district_a)}
    slots_b = {u: m for m, u in enumerate(district_b)}
    return sorted(
        u for u, ma in slots_a.items() if u in slots_b and slots_b[u] != ma
    )


def test_mutually_bad_points_worked_example():
    assert mutually_bad((1, 3, 4, 6), (1, 4, 6, 7)) == [4, 6]
    assert mutually_bad((1, 2, 3), (1, 2, 3)) == []
    assert mutually_bad((1, 2, 5), (1, 3, 5)) == []


def test_same_row_and_column_positions_are_linked():
    # the two link kinds of the closure, checked against raw equalities
    m = build_sandwich(Z2, 4, 2)
    pg = connectivity(m)
    for positions in m.value_positions().values():
        for a in positions:
            for b in positions:
                if a != b and (a[0] == b[0] or a[1] == b[1]):
                    assert pg.find(a) == pg.find(b)


def test_step_u_prime_replaces_a_shared_minimum():
    # when the lowered column slot is itself a block minimum, the district
    # picks up the new point in its place
    m = build_sandwich(Z2, 5, 2)
    i = kernel_row(m, (1, 1, 2, 1, 2), (0, 1, 0, 1, 1))  # district (1, 3)
    pos = (i, m.lambda_pos[(3, 4)])  # first column slot is the minimum 3
    new = step_u_prime(m, pos, 2)
    assert m.lambdas[new[1]] == (2, 4)
    assert m.districts[new[0]] == (1, 2)
    assert m.entries[new[1]][new[0]] == m.entries[pos[1]][pos[0]]


def test_full_pipeline_on_extra_instances():
    # beyond the standard grid: a nonabelian weight group, a larger act,
    # and a split-heavy slice
    from math import factorial

    from gact import make_group
    from gact.cli import DEFAULT_CAPS, run_verify

    for n, spec, r in ((4, "S3", 2), (5, "Z3", 3), (7, "trivial", 5), (6, "Z2", 4)):
        g = make_group(spec)
        report = run_verify(g, n, r, DEFAULT_CAPS)
        assert report["ok"]
        assert report["computed_order"] == g.order ** r * factorial(r)


def test_merge_witnesses_certify_their_squares():
    # replay every recorded certificate against the matrix entries
    from gact import build_sandwich, make_group

    g = make_group("S3")
    m = build_sandwich(g, 4, 2)
    p = build_gr_presentation(m, schreier_build(g, 4, 2))
    log = []
    simplify_presentation(p, m, connectivity(m), log)
    assert log
    for w in log:
        t_idx, j_idx, l_idx, mu_idx = w.square
        assert m.entries[l_idx][t_idx] == w.remainder
        assert m.entries[mu_idx][t_idx] == wreath_identity(m.r)
        assert m.entries[l_idx][j_idx] == w.value
        assert m.entries[mu_idx][j_idx] == w.simple_factor
        assert (j_idx, l_idx) == w.component
        assert wreath_mul(g, w.remainder, w.simple_factor) == w.value
