import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

from lgqpd import (ResourceLimitError, build_jtable, erf_real, hermite_psi,
                   j_block, j_diag, j_diag_row, j_offdiag, j_row)

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def quad_oracle(m, n, lo, hi):
    """Independent oracle: adaptive quadrature of psi_m psi_n."""
    val, _ = quad(lambda x: hermite_psi(m, x) * hermite_psi(n, x), lo, hi,
                  limit=400, epsabs=1e-13, epsrel=1e-13)
    return val


class TestOffDiagonal:
    def test_orthogonality_full_line(self):
        assert j_offdiag(0, 1, -math.inf, math.inf) == pytest.approx(0.0, abs=1e-14)

    def test_half_line_exact_value(self):
        assert j_offdiag(0, 1, 0.0, math.inf) == pytest.approx(INV_SQRT_2PI, abs=1e-13)

    def test_quadrature_oracle(self):
        got = j_offdiag(3, 7, -0.8, math.inf)
        expected = quad_oracle(3, 7, -0.8, 35.0)
        assert got == pytest.approx(expected, abs=1e-10)

    def test_finite_interval_oracle(self):
        got = j_offdiag(2, 5, -0.4, 1.7)
        assert got == pytest.approx(quad_oracle(2, 5, -0.4, 1.7), abs=1e-10)

    def test_symmetry(self):
        assert j_offdiag(4, 9, 0.3, math.inf) == pytest.approx(
            j_offdiag(9, 4, 0.3, math.inf), abs=1e-14)

    def test_diagonal_rejected(self):
        with pytest.raises(ValueError):
            j_offdiag(3, 3, 0.0, math.inf)


class TestDiagonal:
    def test_ground_state_closed_form(self):
        assert j_diag(0, 0.3) == pytest.approx(0.5 * (1 - erf_real(0.3)), abs=1e-14)

    def test_half_at_origin(self):
        for n in (0, 1, 4, 17, 60):
            assert j_diag(n, 0.0) == pytest.approx(0.5, abs=1e-12)

    def test_quadrature_oracle(self):
        got = j_diag(4, 1.1)
        expected = quad(lambda x: hermite_psi(4, x) ** 2, 1.1, 40.0,
                        limit=400, epsabs=1e-13)[0]
        assert got == pytest.approx(expected, abs=1e-10)

    def test_limits_and_monotonicity(self):
        assert j_diag(3, -math.inf) == 1.0
        assert j_diag(3, math.inf) == 0.0
        xs = np.linspace(-6, 6, 41)
        vals = [j_diag(6, x) for x in xs]
        assert all(0.0 <= v <= 1.0 for v in vals)
        assert all(b <= a + 1e-13 for a, b in zip(vals, vals[1:]))

    def test_row_consistency(self):
        row = j_diag_row(0.7, 30)
        for n in (0, 5, 30):
            assert row[n] == pytest.approx(j_diag(n, 0.7), abs=1e-13)


class TestComplementAndCompleteness:
    def test_complement_rule(self):
        for m, n in ((0, 1), (2, 6), (5, 11)):
            for a in (-1.2, 0.0, 0.9):
                total = j_offdiag(m, n, -math.inf, a) + j_offdiag(m, n, a, math.inf)
                assert abs(total) < 1e-12  # delta_mn = 0 off the diagonal
        for n in (0, 3, 9):
            a = 0.4
            lower = quad(lambda x: hermite_psi(n, x) ** 2, -40.0, a, limit=400)[0]
            assert lower + j_diag(n, a) == pytest.approx(1.0, abs=1e-10)

    def test_projector_idempotence_in_truncated_basis(self):
        # The indicator's jump makes the Fock coefficients decay like
        # k^(-3/4), so the truncated completeness sum converges as K^(-1/2);
        # check the value at K = 300 and that quadrupling K halves the error.
        a = 0.6
        target = j_block(a, 10, 10)

        def error(k_max):
            rect = j_block(a, 10, k_max)
            return np.max(np.abs(rect @ rect.T - target))

        err_300 = error(300)
        err_1200 = error(1200)
        assert err_300 < 1e-2
        assert err_1200 < 0.65 * err_300


class TestJTable:
    def test_low_order_entries(self):
        table = build_jtable(0.0, 2)
        assert table[0, 0] == pytest.approx(0.5, abs=1e-12)
        assert table[0, 1] == pytest.approx(INV_SQRT_2PI, abs=1e-12)
        assert table[1, 1] == pytest.approx(0.5, abs=1e-12)
        assert table[0, 2] == pytest.approx(j_offdiag(0, 2, 0.0, math.inf), abs=1e-14)

    def test_symmetry_invariant(self):
        table = build_jtable(-0.7, 40)
        assert np.max(np.abs(table.entries - table.entries.T)) < 1e-12

    def test_sentinel_identity(self):
        table = build_jtable(-math.inf, 3)
        assert np.array_equal(table.entries, np.eye(4))

    def test_row_matches_pointwise(self):
        cut = 1.03
        row = j_row(cut, 12)
        table = build_jtable(cut, 12)
        assert np.max(np.abs(table.entries[0] - row)) < 1e-12

    def test_build_performance(self):
        start = time.perf_counter()
        table = build_jtable(1.03, 500)
        elapsed = time.perf_counter() - start
        assert table.entries.shape == (501, 501)
        assert elapsed < 10.0
        assert table.entries.nbytes < 50e6

    def test_cache_returns_same_object(self):
        assert build_jtable(0.25, 20) is build_jtable(0.25, 20)

    def test_resource_cap(self):
        with pytest.raises(ResourceLimitError):
            build_jtable(0.0, 100_000)


class TestRowHelper:
    def test_row_against_scalar_elements(self):
        cut = -0.35
        row = j_row(cut, 9)
        assert row[0] == pytest.approx(0.5 * (1 - erf_real(cut)), abs=1e-14)
        for n in range(1, 10):
            assert row[n] == pytest.approx(j_offdiag(0, n, cut, math.inf), abs=1e-13)

    def test_row_vectorized_over_cuts(self):
        cuts = np.array([-1.0, 0.0, 0.8])
        rows = j_row(cuts, 6)
        for k, c in enumerate(cuts):
            assert np.max(np.abs(rows[:, k] - j_row(float(c), 6))) < 1e-14
