"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside pytest's own output.
"""

import cmath
import math
import random
from fractions import Fraction as F

import carleman as cl
from carleman.convergence import DIVERGENT, FINITE_EXACT, entry_series_probe
from carleman.linalg import KERNEL_CERTIFIED, NO_OBSTRUCTION
from oracles import elimination_det, mat_eq, mat_mul, rand_isotropy_coeffs, rand_fraction


def criterion(number, description):
    def decorate(fn):
        def wrapper():
            try:
                fn()
            except BaseException:
                print(f"ACCEPTANCE {number:2d}: FAIL - {description}")
                raise
            print(f"ACCEPTANCE {number:2d}: PASS - {description}")

        wrapper.__name__ = fn.__name__
        return wrapper

    return decorate


@criterion(1, "golden matrices reproduced entry-for-entry in exact rationals")
def test_c01_golden_matrices():
    results = {r.name: r for r in cl.verify_goldens()}
    assert all(r.ok for r in results.values())
    geometric = cl.carleman_embed(cl.builtin_series("geometric", 6), 7)
    assert geometric.rows[4] == (F(1), F(-4), F(10), F(-20), F(35), F(-56), F(84))
    h = cl.carleman_embed(cl.builtin_series("h", 6), 7)
    assert h.rows[3] == (F(0), F(0), F(0), F(-1), F(3), F(-6), F(10))
    ln = cl.carleman_embed(cl.builtin_series("ln1p", 4), 5)
    assert ln.rows[1] == (F(0), F(1), F(-1, 2), F(1, 3), F(-1, 4))
    assert ln.rows[2][4] == F(11, 12)
    assert ln.rows[3][4] == F(-3, 2)
    exp0 = cl.carleman_embed(cl.builtin_series("expm1", 4), 5)
    assert exp0.rows[3][4] == F(3, 2)
    # oracle-corrected entry: (e^z - 1)^2 = sum (2^k - 2)/k! z^k gives 7/12
    assert exp0.rows[2][4] == F(2 ** 4 - 2, math.factorial(4)) == F(7, 12)
    exp_fixture = next(f for f in cl.FIXTURES if f.name == "exp0")
    assert exp_fixture.expected[2][4] == F(7, 12)
    assert "4/3" in exp_fixture.note  # printed discrepancy is flagged


@criterion(2, "factorization M_tau x M_h = M_g exactly at truncation 12")
def test_c02_factorization():
    t = cl.translation_matrix(F(1), 12)
    mh = cl.carleman_embed(cl.builtin_series("h", 11), 12)
    mg = cl.carleman_embed(cl.builtin_series("geometric", 11), 12)
    product = cl.truncated_multiply(t, mh, 12)
    assert product.truncation_exact
    assert product.rows == mg.rows


@criterion(3, "embedding is a homomorphism on 100 random isotropy pairs at order 12")
def test_c03_homomorphism():
    rng = random.Random(2024)
    for _ in range(100):
        g1 = cl.make_series(F(0), rand_isotropy_coeffs(rng, 12, -5, 5))
        g2 = cl.make_series(F(0), rand_isotropy_coeffs(rng, 12, -5, 5))
        composed = cl.carleman_embed(cl.compose(g1, g2, 12), 12)
        multiplied = cl.truncated_multiply(
            cl.carleman_embed(g1, 12), cl.carleman_embed(g2, 12), 12
        )
        assert composed.rows == multiplied.rows


@criterion(4, "inversion round-trips through order 12; the alternating series is its own inverse")
def test_c04_inversion():
    rng = random.Random(77)
    for _ in range(100):
        p = rand_fraction(rng)
        a1 = F(0)
        while a1 == 0:
            a1 = rand_fraction(rng)
        coeffs = [rand_fraction(rng), a1] + [rand_fraction(rng) for _ in range(11)]
        g = cl.make_series(p, coeffs)
        inv = cl.invert(g, 12)
        assert cl.compose(inv, g, 12).coeffs == cl.identity_at(p, 12).coeffs
    h = cl.builtin_series("h", 12)
    assert cl.invert(h, 12).coeffs == h.coeffs


@criterion(5, "latent product diverges at entry (2,1); performed junctions are finite-exact")
def test_c05_divergence():
    mh = cl.builtin_carleman_handle("h")
    t_inv = cl.translation_handle(F(-1))
    report = entry_series_probe(mh, t_inv, 2, 1, 64)
    assert report.classification == DIVERGENT
    terms = [t for _, t, _ in report.terms]
    assert len(terms) == 64
    # the k = 1 summand vanishes (row 2 of the embedding starts with 0);
    # every further term equals 1 exactly
    assert terms[0] == 0
    assert all(t == 1 for t in terms[1:])
    # lower x upper and general x upper probe finite-exact everywhere
    t1 = cl.translation_handle(F(1))
    e0 = cl.builtin_carleman_handle("expm1")
    mg = cl.builtin_carleman_handle("geometric")
    for left, right in ((t1, e0), (mg, e0)):
        for i in range(1, 7):
            for j in range(1, 7):
                assert entry_series_probe(left, right, i, j).classification == FINITE_EXACT


@criterion(6, "PLU reconstructs 100 random invertible rational matrices; permuted instances force P != id")
def test_c06_plu():
    rng = random.Random(555)
    done = 0
    while done < 100:
        n = rng.randint(1, 10)
        rows = [[rand_fraction(rng, -9, 9, 6) for _ in range(n)] for _ in range(n)]
        if elimination_det(rows) == 0:
            continue
        done += 1
        a = cl.matrix_from_rows(rows)
        p, l, u = cl.plu_decompose(a)
        rebuilt = mat_mul(
            [list(r) for r in p.matrix(n).rows],
            mat_mul([list(r) for r in l.rows], [list(r) for r in u.rows]),
        )
        assert mat_eq(rebuilt, rows)
        assert all(l.rows[i][i] == 1 for i in range(n)) and l.is_lower_triangular()
        assert all(u.rows[i][i] != 0 for i in range(n)) and u.is_upper_triangular()
    pascal = cl.translation_matrix(F(1), 6)
    variants = [
        [[row[1], row[0], *row[2:]] for row in pascal.rows],   # swap first columns
        [list(reversed(row)) for row in pascal.rows],          # reverse columns
        [[*row[1:], row[0]] for row in pascal.rows],           # rotate columns left
    ]
    for rows in variants:
        assert rows[0][0] == 0  # known zero leading minor
        a = cl.matrix_from_rows(rows)
        p, l, u = cl.plu_decompose(a)
        assert not p.is_identity
        rebuilt = mat_mul(
            [list(r) for r in p.matrix(6).rows],
            mat_mul([list(r) for r in l.rows], [list(r) for r in u.rows]),
        )
        assert mat_eq(rebuilt, rows)


@criterion(7, "pivot search makes all leading minors nonzero; triangular minors = diagonal products")
def test_c07_sigma_consistency():
    def zero_top(i, j):
        return F(0) if i == 1 else F(i) ** j

    handles = [
        cl.from_function(zero_top),
        cl.from_function(lambda i, j: F(1) if i >= 2 and j == i - 1 else F(0),
                         col_rows=lambda j: (j + 1,)),
    ]
    for handle in handles:
        spec = cl.find_pivot_rows(handle, 4, 12)
        minors = cl.sigma_determinants(handle, pi1=spec, count=4)
        assert all(d != 0 for d in minors)
    for handle in (
        cl.translation_handle(F(1)),
        cl.translation_handle(F(3, 2)),
        cl.builtin_carleman_handle("h"),
        cl.builtin_carleman_handle("expm1"),
    ):
        dets = cl.sigma_determinants(handle, count=8)
        partial = F(1)
        for i in range(1, 9):
            partial *= handle.entry(i, i)
            assert dets[i - 1] == partial


@criterion(8, "deformed addition law holds exactly at n = 10; kernel verdicts match the parameter")
def test_c08_adjoint():
    chk = cl.adjoint_mu_check(10)
    assert chk.ok and chk.residual.is_zero
    verdict = cl.gamma_probe(cl.adjoint_handle(F(1)), 10, 40)
    assert verdict.verdict == KERNEL_CERTIFIED
    assert verdict.vector.to_json() == {"1": "1"}
    samples = [F(k, 7) for k in range(-9, 12) if F(k, 7) != 1]
    assert len(samples) == 20
    for t in samples:
        assert cl.gamma_probe(cl.adjoint_handle(t), 8, 32).verdict == NO_OBSTRUCTION


@criterion(9, "certified circle route matches the scaling diagonal; cover extends past a full turn")
def test_c09_circle():
    for y in (0.3, 0.5, 1.0):
        m = cl.circle_generator_matrix(y, 8, 1e-9)
        dev = max(
            abs(complex(m.rows[i][j]) - (cmath.exp(1j * y * i) if i == j else 0))
            for i in range(8)
            for j in range(8)
        )
        assert dev < 1e-9
        comp = cl.circle_composite_series(y, 7, 1e-12)
        eiy = cmath.exp(1j * y)
        assert abs(comp[0] - (eiy - 1)) < 1e-9
        assert abs(comp[1] - eiy) < 1e-9
        assert all(abs(c) < 1e-9 for c in comp[2:])
    steps = [0.8] * 8
    assert all(abs(y) < math.pi / 3 for y in steps)
    total = sum(steps)
    assert total > 2 * math.pi
    cov = cl.circle_cover_extend(steps, 8, 1e-9)
    dev = max(
        abs(complex(cov.rows[i][j]) - (cmath.exp(1j * total * i) if i == j else 0))
        for i in range(8)
        for j in range(8)
    )
    assert dev < 1e-8


@criterion(10, "triangle bracketings split sheets 1 vs 0; identity and inverse axioms hold")
def test_c10_olver():
    from carleman import localgroup as lg

    rep = cl.associativity_demo()
    assert math.hypot(*rep.left.z) <= 1e-12
    assert math.hypot(*rep.right.z) <= 1e-12
    assert rep.sheet_left == 1
    assert rep.sheet_right == 0
    e = lg.identity_element()
    for base in ((-2.0, 1.0), (0.0, -2.0), (2.0, 1.0), (1.5, -0.5)):
        x = lg.lift_segment(e, base)
        assert lg.local_product(e, x) == x
        assert lg.local_product(x, e) == x
        y = lg.local_inverse(x)
        rt = lg.local_product(y, x)
        assert math.hypot(*rt.z) < 1e-9 and abs(rt.theta) < 1e-9
