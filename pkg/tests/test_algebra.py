import numpy as np
import pytest

from mubforge.algebra import (
    are_orthogonal_latin,
    gauss_sum_modulus,
    gf_construct,
    gr_construct,
    mols_generate,
    prime_power_decomposition,
)
from mubforge.core import InputError, UnsupportedError


def test_prime_power_decomposition():
    assert prime_power_decomposition(9) == (3, 2)
    assert prime_power_decomposition(16) == (2, 4)
    assert prime_power_decomposition(7) == (7, 1)
    assert prime_power_decomposition(6) is None
    assert prime_power_decomposition(12) is None


def test_gf_trivial_prime_field():
    gf = gf_construct(3, 1)
    # primitive polynomial x + c with -c a primitive root mod 3
    assert len(gf.poly) == 2 and gf.poly[1] == 1
    assert (-gf.poly[0]) % 3 == 2  # 2 is the primitive root mod 3
    assert gf.mul(2, 2) == 1


def test_gf4_unique_irreducible_quadratic():
    gf = gf_construct(2, 2)
    assert gf.poly == [1, 1, 1]  # x^2 + x + 1
    # Tr(alpha) = alpha + alpha^2 = 1 for alpha = x (encoded 2)
    assert gf.trace(2) == 1


def test_gf9_generator_order():
    gf = gf_construct(3, 2)
    g = gf.generator()
    seen = set()
    e = 1
    for _ in range(8):
        e = gf.mul(e, g)
        seen.add(e)
    assert len(seen) == 8 and 1 in seen


def test_gf_not_prime():
    with pytest.raises(InputError):
        gf_construct(6, 1)


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (2, 4), (3, 4), (2, 6)])
def test_trace_basics(p, n):
    gf = gf_construct(p, n)
    assert gf.trace(0) == 0
    assert gf.trace(1) == n % p
    # additivity on a sample
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = rng.integers(0, gf.q, 2)
        assert gf.trace(gf.add(int(a), int(b))) == (gf.trace(int(a)) + gf.trace(int(b))) % p


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (2, 4), (2, 6), (3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (7, 1), (7, 2)])
def test_frobenius_fixes_trace(p, n):
    gf = gf_construct(p, n)
    for x in gf.elements():
        assert gf.trace(gf.pow(x, p)) == gf.trace(x)


def test_gauss_sum_p3():
    gf = gf_construct(3, 1)
    assert gauss_sum_modulus(gf, 1, 0) == pytest.approx(np.sqrt(3), abs=1e-10)


def test_gauss_sum_p5_all():
    gf = gf_construct(5, 1)
    for b in range(1, 5):
        for v in range(5):
            assert gauss_sum_modulus(gf, b, v) == pytest.approx(np.sqrt(5), abs=1e-10)


def test_gauss_sum_gf9():
    gf = gf_construct(3, 2)
    rng = np.random.default_rng(2)
    for _ in range(5):
        b = int(rng.integers(1, 9))
        v = int(rng.integers(0, 9))
        assert gauss_sum_modulus(gf, b, v) == pytest.approx(3.0, abs=1e-10)


@pytest.mark.parametrize("p,n", [(3, 1), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2), (7, 1), (7, 2)])
def test_gauss_sum_independent_of_b_v(p, n):
    gf = gf_construct(p, n)
    vals = [gauss_sum_modulus(gf, b, v) for b in range(1, gf.q) for v in range(gf.q)]
    assert max(vals) / min(vals) == pytest.approx(1.0, abs=1e-10)


def test_gauss_sum_p2_unsupported():
    gf = gf_construct(2, 2)
    with pytest.raises(UnsupportedError):
        gauss_sum_modulus(gf, 1, 0)


def test_gr41_is_z4():
    gr = gr_construct(1)
    assert gr.teichmuller == [(0,), (1,)]
    assert gr.trace((3,)) == 3


def test_gr42_exponential_sum_cases():
    gr = gr_construct(2)
    # generic r: sqrt(2^n) = 2; r = 0: 2^n = 4
    assert gr.exponential_sum_modulus(gr.one()) == pytest.approx(2.0, abs=1e-10)
    assert gr.exponential_sum_modulus(gr.zero()) == pytest.approx(4.0, abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gr4n_exponential_sums_exhaustive(n):
    from itertools import product

    gr = gr_construct(n)
    two_t = {gr.scale(2, b) for b in gr.teichmuller}
    for r in product(range(4), repeat=n):
        m = gr.exponential_sum_modulus(r)
        if all(c == 0 for c in r):
            expect = 2.0**n
        elif r in two_t:
            expect = 0.0
        else:
            expect = np.sqrt(2.0**n)
        assert m == pytest.approx(expect, abs=1e-10)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gr4n_unique_decomposition(n):
    gr = gr_construct(n)
    assert len(gr.teichmuller) == 2**n
    assert len(gr._dec) == 4**n


def test_mols_d3_matches_cyclic_squares():
    mols, rows, cols = mols_generate(3)
    assert len(mols) == 2
    L = mols[0].as_array()
    assert sorted(L[0]) == [0, 1, 2]
    assert are_orthogonal_latin(mols[0], mols[1])
    assert rows.as_array()[1, 2] == 1 and cols.as_array()[1, 2] == 2


def test_mols_d2():
    mols, rows, cols = mols_generate(2)
    assert len(mols) == 1  # the single order-2 Latin square; no orthogonal pair exists
    assert rows.as_array().tolist() == [[0, 0], [1, 1]]


def test_mols_d4_all_pairs():
    mols, _, _ = mols_generate(4)
    assert len(mols) == 3
    for i in range(3):
        for j in range(i + 1, 3):
            assert are_orthogonal_latin(mols[i], mols[j])


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 13, 16])
def test_mols_counts_and_orthogonality(q):
    mols, rows, cols = mols_generate(q)
    assert len(mols) == q - 1
    for i in range(len(mols)):
        for j in range(i + 1, len(mols)):
            assert are_orthogonal_latin(mols[i], mols[j])


def test_mols_non_prime_power():
    with pytest.raises(UnsupportedError):
        mols_generate(6)


def test_latin_self_not_orthogonal():
    mols, _, _ = mols_generate(3)
    assert not are_orthogonal_latin(mols[0], mols[0])


def test_orthogonal_latin_order_mismatch():
    a, _, _ = mols_generate(3)
    b, _, _ = mols_generate(4)
    with pytest.raises(InputError):
        are_orthogonal_latin(a[0], b[0])


def test_row_cyclic_vs_column_cyclic_order4():
    # direct exhaustive oracle on two handmade order-4 squares
    import numpy as np

    from mubforge.algebra import _square_from_array

    row_cyc = _square_from_array([[(i + j) % 4 for j in range(4)] for i in range(4)])
    col_cyc = _square_from_array([[(i + 3 * j) % 4 for j in range(4)] for i in range(4)])
    pairs = {(row_cyc.cells[i][j], col_cyc.cells[i][j]) for i in range(4) for j in range(4)}
    assert are_orthogonal_latin(row_cyc, col_cyc) == (len(pairs) == 16)
