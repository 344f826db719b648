"""Elementary two-qudit unitaries generated by resonant channels.

Driving one resonant channel (m, j) <-> (r, j') for a time t enacts a
2n x 2n unitary on the amplitudes (a_{m,0..n-1}, a_{r,0..n-1}): the
identity everywhere except a cos/sin block with the Rabi phase R/|R|.
Amplitudes a_{k,j} are identified with |k> x |j> (level index first),
so for a full level set these blocks embed into U(n^2), giving
n * C(n,2) = n^2 (n-1) / 2 elementary generators.

``synthesize`` is a deterministic beam search over a discrete gate set;
it makes no completeness claim and simply reports the best sequence
found (low fidelity is an outcome, not an error).
"""

import math
from dataclasses import dataclass

import numpy as np

from .rwa_dynamics import RabiChannel

__all__ = [
    "ElementaryUnitary",
    "elementary_unitary",
    "embed_block",
    "elementary_count",
    "controlled_shift_target",
    "fidelity",
    "GateSequence",
    "compose_sequence",
    "SynthesisResult",
    "synthesize",
]


@dataclass(frozen=True)
class ElementaryUnitary:
    """2n x 2n rotation in the (m, j) / (r, j') amplitude plane."""

    n: int
    channel: RabiChannel
    t: float
    matrix: np.ndarray


def elementary_unitary(n: int, channel: RabiChannel, t: float) -> ElementaryUnitary:
    """Unitary of driving ``channel`` for time t on the 2n amplitudes.

    Identity except the 2x2 block on rows (j, n + j'); a vanishing Rabi
    frequency gives the identity.
    """
    mat = np.eye(2 * n, dtype=complex)
    rabi = channel.rabi
    if rabi != 0:
        mod = abs(rabi)
        half = 0.5 * mod * t
        c, s = math.cos(half), math.sin(half)
        row, col = channel.j, n + channel.j_prime
        mat[row, row] = c
        mat[col, col] = c
        mat[row, col] = -1j * (np.conj(rabi) / mod) * s
        mat[col, row] = -1j * (rabi / mod) * s
    return ElementaryUnitary(n, channel, t, mat)


def embed_block(n: int, level_index_k: int, level_index_l: int, u: ElementaryUnitary) -> np.ndarray:
    """Place u's four n x n blocks at level blocks (k, l) of U(n^2).

    All other diagonal blocks stay identity, off-diagonal blocks zero.
    """
    if not 0 <= level_index_k < level_index_l < n:
        raise ValueError("need 0 <= k < l < n")
    big = np.eye(n * n, dtype=complex)
    k0 = level_index_k * n
    l0 = level_index_l * n
    m = u.matrix
    big[k0 : k0 + n, k0 : k0 + n] = m[:n, :n]
    big[k0 : k0 + n, l0 : l0 + n] = m[:n, n:]
    big[l0 : l0 + n, k0 : k0 + n] = m[n:, :n]
    big[l0 : l0 + n, l0 : l0 + n] = m[n:, n:]
    return big


def elementary_count(n: int) -> int:
    """n * C(n,2) = n^2 (n-1) / 2 elementary generators on 2 qudits."""
    return n * math.comb(n, 2)


def controlled_shift_target(n: int, control_on_atom: bool = True) -> np.ndarray:
    """Permutation matrix of the (reverse) controlled-shift gate.

    Default convention (control on the second, atom-index register):
    |a> x |b>  ->  (Sigma_1^b |a>) x |b>.  With ``control_on_atom``
    False the roles swap: |a> x |b> -> |a> x (Sigma_1^a |b>).
    """
    gate = np.zeros((n * n, n * n))
    for a in range(n):
        for b in range(n):
            src = a * n + b
            if control_on_atom:
                dst = ((a + b) % n) * n + b
            else:
                dst = a * n + ((a + b) % n)
            gate[dst, src] = 1.0
    return gate


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|trace(u+ v)| / dim, insensitive to a global phase of either."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("fidelity needs two square matrices of equal shape")
    return float(abs(np.trace(u.conj().T @ v)) / u.shape[0])


@dataclass(frozen=True)
class GateSequence:
    """Ordered gate steps and their accumulated product.

    ``steps`` holds (channel, duration) pairs applied left to right, so
    ``product`` is steps[-1] ... steps[0] as matrices.
    """

    n: int
    steps: tuple
    product: np.ndarray


def compose_sequence(n: int, steps) -> GateSequence:
    """Build the embedded product of (channel, t) steps on U(n^2)."""
    product = np.eye(n * n, dtype=complex)
    frozen = []
    for channel, t in steps:
        u = elementary_unitary(n, channel, t)
        product = embed_block(n, channel.m, channel.r, u) @ product
        frozen.append((channel, float(t)))
    return GateSequence(n, tuple(frozen), product)


@dataclass(frozen=True)
class SynthesisResult:
    sequence: GateSequence
    fidelity: float


def synthesize(
    target: np.ndarray,
    gate_set,
    max_depth: int,
    beam_width: int = 8,
    seed: int = 0,
) -> SynthesisResult:
    """Greedy beam search for a gate sequence approximating ``target``.

    ``gate_set`` is a list of (channel, durations) pairs; every
    (channel, t) combination is a candidate step.  Ties in fidelity are
    broken by a seed-determined ranking, so results are reproducible
    for a fixed seed.  Returns the best sequence of length <= max_depth
    (possibly empty) and its fidelity.
    """
    target = np.asarray(target, dtype=complex)
    n = int(round(math.sqrt(target.shape[0])))
    if n * n != target.shape[0]:
        raise ValueError("target must act on an n^2-dimensional space")
    candidates = []
    for channel, durations in gate_set:
        for t in durations:
            u = elementary_unitary(n, channel, float(t))
            candidates.append(((channel, float(t)), embed_block(n, channel.m, channel.r, u)))
    rng = np.random.default_rng(seed)

    identity = np.eye(n * n, dtype=complex)
    beam = [((), identity, fidelity(target, identity))]
    best_steps, best_fid = (), beam[0][2]
    for _ in range(max_depth):
        expanded = []
        for steps, product, _ in beam:
            for step, gate in candidates:
                expanded.append((steps + (step,), gate @ product))
        tie_rank = rng.permutation(len(expanded))
        scored = [
            (fidelity(target, product), int(tie_rank[i]), steps, product)
            for i, (steps, product) in enumerate(expanded)
        ]
        scored.sort(key=lambda item: (-item[0], item[1]))
        beam = [(steps, product, fid) for fid, _, steps, product in scored[:beam_width]]
        if beam and beam[0][2] > best_fid:
            best_steps, best_fid = beam[0][0], beam[0][2]
        if best_fid >= 1.0 - 1e-12:
            break
    return SynthesisResult(compose_sequence(n, best_steps), best_fid)
