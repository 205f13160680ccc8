"""Howell-form linear algebra checked against brute-force span oracles."""

import random
from itertools import product

import pytest

from soclecoh.errors import DimensionMismatch
from soclecoh.zmodlin import (
    LinearSolver,
    RingConfig,
    ZMat,
    contains,
    coords_in_basis,
    enumerate_span,
    full_basis,
    howell_form,
    howell_form_rows,
    kernel,
    lex_min_in_coset,
    quotient_orders,
    quotient_presentation,
    solve,
    sum_spans,
    zero_basis,
)

Z4 = RingConfig(2, 2)
Z2 = RingConfig(2, 1)
Z9 = RingConfig(3, 2)
Z8 = RingConfig(2, 3)


def brute_span(rows, amb, ring):
    """Closure of the rows under addition: the full span as a set of tuples."""
    q = ring.modulus
    span = {tuple([0] * amb)}
    frontier = [tuple([0] * amb)]
    while frontier:
        v = frontier.pop()
        for r in rows:
            w = tuple((a + b) % q for a, b in zip(v, r))
            if w not in span:
                span.add(w)
                frontier.append(w)
    return span


def mat(rows, ring):
    return ZMat.from_rows(rows, len(rows[0]) if rows else 0, ring)


# -- howell_form ------------------------------------------------------------


def test_howell_example_z4():
    h = howell_form(mat([(2, 2), (0, 2)], Z4))
    assert h.rows == ((2, 0), (0, 2))
    assert brute_span([(2, 2), (0, 2)], 2, Z4) == set(enumerate_span(h))


def test_howell_identity_is_fixed():
    h = howell_form(mat([(1, 0, 0), (0, 1, 0), (0, 0, 1)], Z4))
    assert h.rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_howell_zero_matrix():
    h = howell_form(ZMat.from_rows([(0, 0), (0, 0)], 2, Z4))
    assert h.rows == ()


def test_howell_idempotent_random():
    rng = random.Random(11)
    for ring in (Z4, Z9, Z8):
        for _ in range(60):
            amb = rng.randint(1, 3)
            rows = [
                tuple(rng.randrange(ring.modulus) for _ in range(amb))
                for _ in range(rng.randint(0, 3))
            ]
            h = howell_form_rows(rows, amb, ring)
            again = howell_form_rows(list(h.rows), amb, ring)
            assert again == h


def test_span_preservation_oracle():
    rng = random.Random(5)
    for ring in (Z4, Z9):
        for _ in range(100):
            amb = rng.randint(1, 3)
            rows = [
                tuple(rng.randrange(ring.modulus) for _ in range(amb))
                for _ in range(rng.randint(1, 3))
            ]
            h = howell_form_rows(rows, amb, ring)
            want = brute_span(rows, amb, ring)
            got = {v for v in product(range(ring.modulus), repeat=amb) if contains(h, v)}
            assert want == got
            assert h.span_size() == len(want)


def test_howell_canonical_across_generating_sets():
    # Same submodule from different generators yields identical bases.
    h1 = howell_form(mat([(2, 2), (0, 2)], Z4))
    h2 = howell_form(mat([(2, 0), (2, 2)], Z4))
    assert h1 == h2


def test_dict_and_bit_engines_agree_mod2():
    rng = random.Random(7)
    for _ in range(50):
        amb = rng.randint(1, 6)
        rows = [
            tuple(rng.randrange(2) for _ in range(amb)) for _ in range(rng.randint(0, 4))
        ]
        via_bits = howell_form_rows(rows, amb, Z2)
        # Z/2 inside Z/4 spans differ, so instead force the generic engine by
        # scaling into 2*(Z/4): multiplication by 2 is a module iso F2 -> 2Z/4.
        scaled = [tuple(2 * v for v in r) for r in rows]
        via_dicts = howell_form_rows(scaled, amb, Z4)
        assert tuple(tuple(v // 2 for v in r) for r in via_dicts.rows) == via_bits.rows


# -- solve -------------------------------------------------------------------


def test_solve_examples():
    a = mat([(2,)], Z4)
    assert solve(a, (2,)) == (1,)
    assert solve(a, (1,)) is None
    ident = mat([(1, 0), (0, 1)], Z4)
    assert solve(ident, (3, 2)) == (3, 2)


def test_solve_brute_force_oracle():
    rng = random.Random(23)
    for ring in (Z4, Z9):
        q = ring.modulus
        for _ in range(80):
            nr, nc = rng.randint(1, 3), rng.randint(1, 3)
            rows = [tuple(rng.randrange(q) for _ in range(nc)) for _ in range(nr)]
            a = mat(rows, ring)
            b = tuple(rng.randrange(q) for _ in range(nc))
            sols = []
            for x in product(range(q), repeat=nr):
                y = [0] * nc
                for xi, row in zip(x, rows):
                    for j, v in enumerate(row):
                        y[j] = (y[j] + xi * v) % q
                if tuple(y) == b:
                    sols.append(x)
            got = solve(a, b)
            if sols:
                assert got == min(sols)  # canonical: lexicographically least
            else:
                assert got is None


def test_solve_contains_consistency():
    rng = random.Random(31)
    for ring in (Z4, Z9):
        q = ring.modulus
        for _ in range(60):
            nr, nc = rng.randint(1, 3), rng.randint(1, 3)
            rows = [tuple(rng.randrange(q) for _ in range(nc)) for _ in range(nr)]
            b = tuple(rng.randrange(q) for _ in range(nc))
            image = howell_form_rows(rows, nc, ring)
            assert (solve(mat(rows, ring), b) is not None) == contains(image, b)


def test_solve_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve(mat([(1, 2)], Z4), (1, 2, 3))


# -- kernel ------------------------------------------------------------------


def test_kernel_examples():
    assert kernel(mat([(2,)], Z4)).rows == ((2,),)
    assert kernel(mat([(1,)], Z4)).rows == ()
    assert kernel(mat([(0,)], Z4)).rows == ((1,),)


def test_kernel_brute_force_oracle():
    rng = random.Random(41)
    for ring in (Z4, Z9, Z2):
        q = ring.modulus
        for _ in range(60):
            nr, nc = rng.randint(1, 3), rng.randint(1, 3)
            rows = [tuple(rng.randrange(q) for _ in range(nc)) for _ in range(nr)]
            k = kernel(mat(rows, ring))
            want = set()
            for x in product(range(q), repeat=nr):
                y = [0] * nc
                for xi, row in zip(x, rows):
                    for j, v in enumerate(row):
                        y[j] = (y[j] + xi * v) % q
                if not any(y):
                    want.add(x)
            assert set(enumerate_span(k)) == want


# -- contains ----------------------------------------------------------------


def test_contains_examples():
    h = howell_form(mat([(2, 0), (0, 2)], Z4))
    assert contains(h, (2, 2))
    assert contains(h, (0, 0))
    assert not contains(howell_form(mat([(2,)], Z4)), (1,))


def test_coords_in_basis_roundtrip():
    rng = random.Random(3)
    for ring in (Z4, Z9):
        for _ in range(40):
            amb = rng.randint(1, 3)
            rows = [
                tuple(rng.randrange(ring.modulus) for _ in range(amb))
                for _ in range(rng.randint(1, 3))
            ]
            h = howell_form_rows(rows, amb, ring)
            seen = set()
            for v in enumerate_span(h):
                cs = coords_in_basis(h, v)
                assert cs is not None
                assert cs not in seen  # coordinates are unique
                seen.add(cs)
                q = ring.modulus
                re = [0] * amb
                for c, row in zip(cs, h.rows):
                    for j, w in enumerate(row):
                        re[j] = (re[j] + c * w) % q
                assert tuple(re) == v


# -- quotient_presentation ----------------------------------------------------


def test_quotient_zero_submodule():
    qp = quotient_presentation(zero_basis(2, Z4))
    assert qp.orders == (4, 4)
    assert qp.project_vec((1, 2)) == (1, 2)
    assert qp.section_vec((1, 2)) == (1, 2)


def test_quotient_example_2_4():
    sub = howell_form(mat([(2, 0)], Z4))
    qp = quotient_presentation(sub)
    assert qp.orders == (2, 4)
    # brute-force coset count
    cosets = set()
    span = set(enumerate_span(sub))
    for v in product(range(4), repeat=2):
        cos = frozenset(tuple((a + b) % 4 for a, b in zip(v, s)) for s in span)
        cosets.add(cos)
    assert len(cosets) == 8 == 2 * 4


def test_quotient_full_module():
    qp = quotient_presentation(full_basis(3, Z4))
    assert qp.orders == ()


def test_quotient_nonsplit_coordinates():
    # span{(2,1)} in (Z/4)^2 has a Z/4 quotient, not Z/2 x Z/2.
    sub = howell_form(mat([(2, 1)], Z4))
    qp = quotient_presentation(sub)
    assert tuple(sorted(qp.orders)) == (4,)


def test_quotient_presentation_properties_random():
    rng = random.Random(17)
    for ring in (Z4, Z9, Z8):
        q = ring.modulus
        for _ in range(60):
            amb = rng.randint(1, 3)
            rows = [
                tuple(rng.randrange(q) for _ in range(amb))
                for _ in range(rng.randint(0, 3))
            ]
            sub = howell_form_rows(rows, amb, ring)
            qp = quotient_presentation(sub)
            size = 1
            for o in qp.orders:
                size *= o
            assert size * sub.span_size() == q**amb
            # projection kills the submodule
            for r in sub.rows:
                assert qp.project_vec(r) == tuple([0] * len(qp.orders))
            # proj . section = identity on the quotient
            for _ in range(5):
                y = tuple(rng.randrange(o) for o in qp.orders)
                assert qp.project_vec(qp.section_vec(y)) == y
            # section . proj lands in the same coset
            v = tuple(rng.randrange(q) for _ in range(amb))
            w = qp.section_vec(qp.project_vec(v))
            assert contains(sub, tuple((a - b) % q for a, b in zip(v, w)))


def test_quotient_orders_counting():
    u = full_basis(2, Z4)
    v = howell_form(mat([(2, 1)], Z4))
    assert quotient_orders(u, v) == (4,)
    v2 = howell_form(mat([(2, 0)], Z4))
    assert tuple(sorted(quotient_orders(u, v2), reverse=True)) == (4, 2)
    assert quotient_orders(u, u) == ()


# -- misc helpers --------------------------------------------------------------


def test_sum_spans():
    a = howell_form(mat([(2, 0)], Z4))
    b = howell_form(mat([(0, 2)], Z4))
    assert sum_spans(a, b) == howell_form(mat([(2, 0), (0, 2)], Z4))


def test_lex_min_in_coset():
    basis = howell_form(mat([(2, 0)], Z4))
    assert lex_min_in_coset((3, 1), basis) == (1, 1)
    assert lex_min_in_coset((0, 0), basis) == (0, 0)


def test_linear_solver_kernel_matches_kernel():
    rows = [(2, 2), (0, 2), (1, 3)]
    s = LinearSolver(rows, 2, Z4)
    assert s.kernel_row_tuples() == kernel(mat(rows, Z4)).rows
    assert s.image_row_tuples() == howell_form(mat(rows, Z4)).rows


def test_ring_config_validation():
    with pytest.raises(ValueError):
        RingConfig(4, 1)
    with pytest.raises(ValueError):
        RingConfig(2, 0)
    with pytest.raises(ValueError):
        RingConfig(2, 64)
