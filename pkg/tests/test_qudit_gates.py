import math

import numpy as np
import pytest

from conftest import make_config
from qudit_rabi.fock_algebra import is_unitary, max_abs, su2
from qudit_rabi.qudit_gates import (
    compose_sequence,
    controlled_shift_target,
    elementary_count,
    elementary_unitary,
    embed_block,
    fidelity,
    synthesize,
)
from qudit_rabi.rwa_dynamics import RabiChannel, channel_enumerate, rabi_channel, resonance_solve


def make_channel(n=2, m=0, r=1, j=0, j_prime=1, rabi=0.05 + 0.02j):
    return RabiChannel(m=m, r=r, j=j, j_prime=j_prime, rabi=rabi, resonance_residual=0.0)


def solved_channels(n, m, r, g=0.3, spin=4):
    base = make_config(n, 1.0, g, 0.0, 0.0, su2(spin), spin + 1)
    out = []
    for j_prime, j in channel_enumerate(n, m, r):
        solution = resonance_solve(base, m, r, j, j_prime)
        if solution is None:
            continue
        cfg = make_config(n, 1.0, g, solution.delta_abs, 0.0, su2(spin), spin + 1)
        out.append(rabi_channel(cfg, m, r, j, j_prime))
    return out


class TestElementaryUnitary:
    def test_identity_at_t_zero(self):
        u = elementary_unitary(3, make_channel(n=3, j=1, j_prime=0), 0.0)
        assert max_abs(u.matrix - np.eye(6)) <= 1e-15

    def test_quarter_period_swaps(self):
        ch = make_channel(rabi=0.1)
        t = math.pi / abs(ch.rabi)
        u = elementary_unitary(2, ch, t).matrix
        # cos(pi/2) = 0 on the block diagonal, pure phase swap off it
        assert abs(u[0, 0]) <= 1e-15
        assert abs(u[3, 3]) <= 1e-15
        assert abs(abs(u[0, 3]) - 1.0) <= 1e-14
        assert abs(abs(u[3, 0]) - 1.0) <= 1e-14

    def test_phase_form(self):
        # R = r e^{i theta} gives the [[cos, -i e^{-i theta} sin], ...] block
        r, th = 0.2, 0.9
        ch = make_channel(rabi=r * np.exp(1j * th))
        t = 3.7
        u = elementary_unitary(2, ch, t).matrix
        half = r * t / 2
        assert u[0, 3] == pytest.approx(-1j * np.exp(-1j * th) * math.sin(half), abs=1e-14)
        assert u[3, 0] == pytest.approx(-1j * np.exp(1j * th) * math.sin(half), abs=1e-14)
        assert u[0, 0] == pytest.approx(math.cos(half), abs=1e-14)

    def test_zero_rabi_gives_identity(self):
        u = elementary_unitary(2, make_channel(rabi=0.0), 5.0)
        assert np.array_equal(u.matrix, np.eye(4, dtype=complex))

    def test_unitary(self):
        for t in (0.3, 2.0, 11.0):
            u = elementary_unitary(4, make_channel(n=4, j=2, j_prime=1, rabi=0.3 - 0.1j), t)
            assert is_unitary(u.matrix, 1e-12)


class TestEmbedBlock:
    def test_identity_embeds_to_identity(self):
        u = elementary_unitary(3, make_channel(n=3), 0.0)
        assert max_abs(embed_block(3, 0, 2, u) - np.eye(9)) <= 1e-15

    def test_n2_hand_layout(self):
        ch = make_channel(rabi=0.1)
        t = 1.0
        u = elementary_unitary(2, ch, t)
        big = embed_block(2, 0, 1, u)
        half = abs(ch.rabi) * t / 2
        c = math.cos(half)
        expected = np.eye(4, dtype=complex)
        expected[0, 0] = c
        expected[3, 3] = c
        expected[0, 3] = u.matrix[0, 3]
        expected[3, 0] = u.matrix[3, 0]
        assert max_abs(big - expected) <= 1e-15

    def test_unitarity_preserved(self):
        u = elementary_unitary(3, make_channel(n=3, j=2, j_prime=0, rabi=0.2j), 4.0)
        assert is_unitary(embed_block(3, 1, 2, u), 1e-12)

    def test_disjoint_embeddings_commute(self):
        u1 = elementary_unitary(4, make_channel(n=4, j=0, j_prime=1, rabi=0.3), 2.0)
        u2 = elementary_unitary(4, make_channel(n=4, j=3, j_prime=2, rabi=0.1j), 5.0)
        a = embed_block(4, 0, 1, u1)
        b = embed_block(4, 2, 3, u2)
        assert max_abs(a @ b - b @ a) <= 1e-12

    def test_bad_block_indices(self):
        u = elementary_unitary(3, make_channel(n=3), 1.0)
        with pytest.raises(ValueError):
            embed_block(3, 2, 2, u)


class TestCounting:
    def test_values(self):
        assert elementary_count(2) == 2
        assert elementary_count(3) == 9
        assert elementary_count(1) == 0

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_enumerated_generators_match_count(self, n):
        seen = set()
        for k in range(n):
            for l in range(k + 1, n):
                for j_prime, j in channel_enumerate(n, k, l):
                    seen.add((k, l, j, j_prime))
        assert len(seen) == elementary_count(n)


class TestControlledShift:
    def test_n2_reverse_cnot(self):
        gate = controlled_shift_target(2)
        # |a,b> -> |a XOR b, b>: basis order 00, 01, 10, 11
        expected = np.zeros((4, 4))
        expected[0, 0] = 1  # 00 -> 00
        expected[3, 1] = 1  # 01 -> 11
        expected[2, 2] = 1  # 10 -> 10
        expected[1, 3] = 1  # 11 -> 01
        assert np.array_equal(gate, expected)

    def test_control_zero_block_is_identity(self):
        n = 4
        gate = controlled_shift_target(n)
        for a in range(n):
            src = a * n + 0
            assert gate[a * n + 0, src] == 1.0

    def test_permutation_entries(self):
        gate = controlled_shift_target(3)
        assert set(np.unique(gate)) == {0.0, 1.0}
        assert np.array_equal(gate.sum(axis=0), np.ones(9))
        assert np.array_equal(gate.sum(axis=1), np.ones(9))

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_cycle_order(self, n):
        gate = controlled_shift_target(n)
        assert max_abs(np.linalg.matrix_power(gate, n) - np.eye(n * n)) <= 1e-12

    def test_convention_flag_swaps_registers(self):
        n = 3
        swap = np.zeros((9, 9))
        for a in range(3):
            for b in range(3):
                swap[b * 3 + a, a * 3 + b] = 1.0
        default = controlled_shift_target(n, control_on_atom=True)
        flipped = controlled_shift_target(n, control_on_atom=False)
        assert np.array_equal(flipped, swap @ default @ swap)


class TestFidelity:
    def test_self_fidelity(self):
        u = controlled_shift_target(3)
        assert fidelity(u, u) == pytest.approx(1.0, abs=1e-15)

    def test_single_sign_flip(self):
        d = 6
        v = np.diag([1.0] * (d - 1) + [-1.0])
        assert fidelity(np.eye(d), v) == pytest.approx((d - 2) / d, abs=1e-15)

    def test_global_phase_invariance(self):
        u = controlled_shift_target(2)
        assert fidelity(u, np.exp(0.7j) * u) == pytest.approx(1.0, abs=1e-14)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(np.eye(2), np.eye(3))


class TestSequences:
    def test_length_64_product_stays_unitary(self):
        channels = solved_channels(3, 0, 1, spin=4)
        steps = [(channels[i % len(channels)], 0.7 + 0.1 * i) for i in range(64)]
        seq = compose_sequence(3, steps)
        assert is_unitary(seq.product, 1e-10)
        assert len(seq.steps) == 64


class TestSynthesize:
    # both n = 2 selection channels, distinct Rabi phases
    TWO_CHANNELS = [
        make_channel(j=0, j_prime=1, rabi=0.7),
        make_channel(j=1, j_prime=0, rabi=0.45 * np.exp(0.6j)),
    ]

    def test_recovers_single_generator(self):
        channels = self.TWO_CHANNELS
        durations = [0.8, 1.7]
        target = compose_sequence(2, [(channels[0], 1.7)]).product
        result = synthesize(target, [(ch, durations) for ch in channels], max_depth=1)
        assert result.fidelity >= 1.0 - 1e-12
        assert result.sequence.steps == ((channels[0], 1.7),)

    def test_recovers_planted_depth_two_product(self):
        channels = self.TWO_CHANNELS
        durations = [0.6, 1.1, 2.3]
        planted = [(channels[0], 1.1), (channels[1], 2.3)]
        target = compose_sequence(2, planted).product
        result = synthesize(target, [(ch, durations) for ch in channels], max_depth=2)
        assert result.fidelity >= 0.999

    def test_depth_one_equals_exhaustive_scan(self):
        channels = self.TWO_CHANNELS
        durations = [0.5, 1.0, 1.5, 2.0]
        rng = np.random.default_rng(3)
        gauss = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        target, _ = np.linalg.qr(gauss)
        result = synthesize(target, [(ch, durations) for ch in channels], max_depth=1)
        best = max(
            fidelity(target, embed_block(2, 0, 1, elementary_unitary(2, ch, t)))
            for ch in channels
            for t in durations
        )
        # empty sequence is also a candidate
        best = max(best, fidelity(target, np.eye(4)))
        assert result.fidelity == pytest.approx(best, abs=1e-12)

    def test_seed_reproducible(self):
        channels = self.TWO_CHANNELS
        durations = [0.5, 1.0]
        target = controlled_shift_target(2).astype(complex)
        a = synthesize(target, [(ch, durations) for ch in channels], 3, seed=42)
        b = synthesize(target, [(ch, durations) for ch in channels], 3, seed=42)
        assert a.fidelity == b.fidelity
        assert a.sequence.steps == b.sequence.steps
