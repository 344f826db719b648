import math

import numpy as np
import pytest

from qudit_rabi.coherent_ops import (
    _u_row_ge,
    _u_row_le,
    _v_row_ge,
    _v_row_le,
    _w_row_ge,
    _w_row_le,
    coherent_parameter,
    kappa_su2,
    kappa_su11,
    matelem,
    matelem_u,
    matelem_v,
    matelem_w,
    oracle_check,
)
from qudit_rabi.fock_algebra import displacement_numeric, oscillator, su2, su11

Z_GRID = [0.3, 0.8j, 0.7 + 0.2j, 1.5]


class TestKappaMaps:
    def test_values(self):
        z = 0.5
        assert kappa_su11(z) == pytest.approx(math.sinh(0.5), rel=1e-15)
        assert kappa_su2(z) == pytest.approx(math.sin(0.5), rel=1e-15)

    def test_small_z_limit(self):
        z = 1e-8 * (0.6 + 0.8j)
        for fn in (kappa_su11, kappa_su2):
            assert abs(fn(z) - z) <= 1e-7 * abs(z)

    def test_series_branch_matches_ratio_branch(self):
        # just above and below the series cutoff
        for z in (9.9e-7, 1.1e-6):
            assert kappa_su11(z) == pytest.approx(math.sinh(z), rel=1e-12)
            assert kappa_su2(z) == pytest.approx(math.sin(z), rel=1e-12)

    def test_parameter_dispatch(self):
        z = 0.4 + 0.1j
        assert coherent_parameter(oscillator(), z).kappa == z
        assert coherent_parameter(su11(1.0), z).kappa == kappa_su11(z)
        assert coherent_parameter(su2(2), z).kappa == kappa_su2(z)


class TestOscillatorElements:
    def test_vacuum_element(self):
        assert matelem_u(0, 0, 1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)

    def test_identity_at_zero(self):
        for n in range(4):
            for m in range(4):
                assert matelem_u(n, m, 0.0) == (1.0 if n == m else 0.0)

    def test_against_numeric_displacement(self):
        z = 0.7 + 0.2j
        numeric = displacement_numeric(oscillator(), 192, z)
        assert matelem_u(3, 1, z) == pytest.approx(complex(numeric[3, 1]), abs=1e-12)

    def test_negative_index_rejected(self):
        with pytest.raises(ValueError):
            matelem_u(-1, 0, 0.3)


class TestSu11Elements:
    def test_identity_at_zero(self):
        # log-space prefactors leave last-bit noise on the diagonal
        for n in range(3):
            for m in range(3):
                assert matelem_v(0.75, n, m, 0.0) == pytest.approx(
                    1.0 if n == m else 0.0, abs=1e-13
                )

    def test_vacuum_element_quarter(self):
        # (1 + sinh^2 |z|)^(-K) = cosh(|z|)^(-1/2) at K = 1/4
        got = matelem_v(0.25, 0, 0, 0.5)
        assert got == pytest.approx(math.cosh(0.5) ** -0.5, rel=1e-14)
        numeric = displacement_numeric(su11(0.25), 256, 0.5)
        assert got == pytest.approx(complex(numeric[0, 0]), abs=1e-12)

    def test_against_numeric_displacement(self):
        z = 0.3j
        numeric = displacement_numeric(su11(1.0), 256, z)
        assert matelem_v(1.0, 2, 1, z) == pytest.approx(complex(numeric[2, 1]), abs=1e-11)

    def test_bad_k_rejected(self):
        with pytest.raises(ValueError):
            matelem_v(0.0, 0, 0, 0.5)


class TestSu2Elements:
    def test_spin_half_diagonal_is_cosine(self):
        for z in (0.2, 0.9, 1.4):
            assert matelem_w(1, 0, 0, z) == pytest.approx(math.cos(z), rel=1e-14)

    def test_identity_at_zero(self):
        for n in range(3):
            for m in range(3):
                assert matelem_w(4, n, m, 0.0) == pytest.approx(
                    1.0 if n == m else 0.0, abs=1e-13
                )

    def test_against_exact_numeric(self):
        z = 0.4 - 0.1j
        numeric = displacement_numeric(su2(4), 5, z)
        assert matelem_w(4, 3, 1, z) == pytest.approx(complex(numeric[3, 1]), abs=1e-13)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            matelem_w(2, 3, 0, 0.4)


class TestDispatch:
    def test_matches_specific_forms(self):
        z = 0.6 - 0.3j
        assert matelem(oscillator(), 2, 4, z) == matelem_u(2, 4, z)
        assert matelem(su11(0.75), 2, 4, z) == matelem_v(0.75, 2, 4, z)
        assert matelem(su2(5), 2, 4, z) == matelem_w(5, 2, 4, z)


ALGEBRAS = [oscillator(), su11(0.25), su11(1.5), su2(6)]


class TestOperatorIdentities:
    @pytest.mark.parametrize("algebra", ALGEBRAS)
    @pytest.mark.parametrize("z", Z_GRID)
    def test_adjoint_symmetry(self, algebra, z):
        top = algebra.spin_2j if algebra.kind == "su2" else 6
        for n in range(top + 1):
            for m in range(top + 1):
                lhs = matelem(algebra, n, m, z)
                rhs = np.conj(matelem(algebra, m, n, -z))
                assert abs(lhs - rhs) <= 1e-10

    def test_column_sum_su2_exact(self):
        algebra = su2(5)
        for m in range(6):
            total = sum(abs(matelem(algebra, n, m, 0.9j)) ** 2 for n in range(6))
            assert total == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("algebra", [oscillator(), su11(0.75)])
    def test_column_sum_truncated(self, algebra):
        z = 0.8
        for m in range(4):
            total = 0.0
            for n in range(400):
                term = abs(matelem(algebra, n, m, z)) ** 2
                total += term
                if n > m and term < 1e-16:
                    break
            assert total == pytest.approx(1.0, abs=1e-8)

    def test_branch_agreement_on_diagonal(self):
        z = 0.45 + 0.3j
        for n in (0, 1, 3, 6):
            a, b = _u_row_le(n, n, z), _u_row_ge(n, n, z)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))
            kap = kappa_su11(z)
            a, b = _v_row_le(0.75, n, n, kap), _v_row_ge(0.75, n, n, kap)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))
            kap = kappa_su2(z)
            a, b = _w_row_le(7, n, n, kap), _w_row_ge(7, n, n, kap)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


class TestOracleCheck:
    def test_su2_is_exact(self):
        report = oracle_check(su2(4), 0.7 + 0.2j, 4, 5)
        assert report.max_deviation <= 1e-10
        assert report.converged
        assert report.dim == report.dim_refined == 5

    def test_zero_displacement(self):
        report = oracle_check(oscillator(), 0.0, 4, 32)
        assert report.max_deviation <= 1e-14
        assert report.converged

    def test_su11_converged_block(self):
        report = oracle_check(su11(1.0), 0.8, 6, 256)
        assert report.max_deviation <= 1e-8
        assert report.converged
        assert report.dim_refined == 512

    def test_rejects_small_dim(self):
        with pytest.raises(ValueError):
            oracle_check(oscillator(), 0.3, 8, 8)
