"""n-level atom coupled to one radiation mode: operators and spectrum.

The atom side lives on the clock/shift pair Sigma_1 (cyclic shift) and
Sigma_3 (diagonal of n-th roots of unity), diagonalized by the
generalized Walsh-Hadamard matrix W.  The full Hamiltonian is

    H = omega 1_n x L3 + conj(Delta)/2 Sigma_3 x 1 + Delta/2 Sigma_3+ x 1
        + g (Sigma_1 x L+ + Sigma_1+ x L-)

with tensor order atom x field (fixed, not configurable).  In the
strong-coupling split the g-dressed part H0 is diagonalized exactly by
displaced number states |sigma^j> x D(-z_j/2)|m> whose displacement
parameters z_j = C sigma^j and dressed frequency Omega are in closed
form per algebra; ``key_formula_check`` verifies that identity
numerically.  ``multi_cat_states`` builds the W-rotated combinations in
which the level-splitting perturbation becomes diagonal.

Roots of unity are always evaluated per entry as cos/sin of 2 pi k / n,
never by repeated multiplication, so phases do not drift with n.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fock_algebra import (
    OSCILLATOR,
    SU11,
    SU2,
    AlgebraSpec,
    build_ladder,
    displacement_numeric,
    expm,
    kron,
    max_abs,
)

__all__ = [
    "root_of_unity",
    "sigma1",
    "sigma3",
    "hadamard_w",
    "diagonalization_check",
    "atom_eigenstate",
    "StrongCouplingWarning",
    "ModelConfig",
    "dressed_constants",
    "SpectralData",
    "spectral_data",
    "build_hamiltonian",
    "KeyFormulaReport",
    "key_formula_check",
    "multi_cat_states",
    "multi_cat_orthonormality",
    "hopping_diagonality",
]


def root_of_unity(n: int, k: int) -> complex:
    """sigma^k with sigma = exp(2 pi i / n), evaluated as cos/sin."""
    k = k % n
    theta = 2.0 * math.pi * k / n
    return complex(math.cos(theta), math.sin(theta))


def sigma1(n: int) -> np.ndarray:
    """Cyclic shift: ones on the subdiagonal and the top-right corner."""
    if n < 2:
        raise ValueError("n must be >= 2")
    s = np.zeros((n, n), dtype=complex)
    for i in range(1, n):
        s[i, i - 1] = 1.0
    s[0, n - 1] = 1.0
    return s


def sigma3(n: int) -> np.ndarray:
    """diag(1, sigma, sigma^2, ..., sigma^(n-1))."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return np.diag([root_of_unity(n, k) for k in range(n)])


def _scaled_root(n: int, k: int, sqrt_n: float) -> complex:
    # componentwise scaling keeps the entry bit-reproducible: complex
    # division rounds differently between scalar and array paths
    val = root_of_unity(n, k)
    return complex(val.real / sqrt_n, val.imag / sqrt_n)


def hadamard_w(n: int) -> np.ndarray:
    """Generalized Walsh-Hadamard matrix.

    Row r, column c holds sigma^((n-r) c) / sqrt(n); row 0 is all ones
    and row n-1 runs through ascending powers.  Unitary, and conjugates
    Sigma_3 into Sigma_1.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    sqrt_n = math.sqrt(n)
    w = np.empty((n, n), dtype=complex)
    for r in range(n):
        for c in range(n):
            w[r, c] = _scaled_root(n, (n - r) * c, sqrt_n)
    return w


def diagonalization_check(n: int) -> float:
    """Max-entry deviation of W Sigma_3 W+ from Sigma_1."""
    w = hadamard_w(n)
    return max_abs(w @ sigma3(n) @ w.conj().T - sigma1(n))


def atom_eigenstate(n: int, j: int) -> np.ndarray:
    """Eigenvector of Sigma_1 with eigenvalue sigma^j.

    Components (1, sigma^((n-1)j), ..., sigma^j) / sqrt(n); this is the
    j-th column of the Walsh-Hadamard matrix.
    """
    if not 0 <= j < n:
        raise ValueError(f"j must lie in [0, {n}), got {j}")
    sqrt_n = math.sqrt(n)
    return np.array([_scaled_root(n, (n - i) * j, sqrt_n) for i in range(n)])


class StrongCouplingWarning(UserWarning):
    """The level splitting is not small against the coupling."""


@dataclass(frozen=True)
class ModelConfig:
    """Full model parameters.

    The level splitting is kept in polar form, Delta = delta_abs *
    exp(i delta_phase), because the resonance solver is linear in
    delta_abs at fixed phase.  ``trunc_dim`` is the field-space
    dimension for the truncated algebras and is forced to spin_2j + 1
    for su(2).
    """

    n: int
    omega: float
    g: float
    delta_abs: float
    delta_phase: float
    algebra: AlgebraSpec
    trunc_dim: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if not self.g > 0:
            raise ValueError("g must be positive")
        if self.delta_abs < 0:
            raise ValueError("delta_abs must be nonnegative")
        object.__setattr__(self, "delta_phase", self.delta_phase % (2.0 * math.pi))
        if self.algebra.kind == SU2:
            object.__setattr__(self, "trunc_dim", self.algebra.spin_2j + 1)
        if self.trunc_dim < 2:
            raise ValueError("trunc_dim must be >= 2")
        if not self.strong_coupling_ok:
            warnings.warn(
                f"delta_abs = {self.delta_abs:g} is not small against "
                f"g = {self.g:g}; the strong-coupling treatment is "
                "formal here",
                StrongCouplingWarning,
                stacklevel=2,
            )

    @property
    def delta(self) -> complex:
        return self.delta_abs * complex(
            math.cos(self.delta_phase), math.sin(self.delta_phase)
        )

    @property
    def coupling_ratio(self) -> float:
        """2 g / omega, the argument of the dressing maps."""
        return 2.0 * self.g / self.omega

    @property
    def strong_coupling_ok(self) -> bool:
        return self.delta_abs <= 0.1 * self.g

    @property
    def spectral_ok(self) -> bool:
        """False for su(1,1) with 2g/omega >= 1, where atanh is undefined."""
        if self.algebra.kind == SU11:
            return self.coupling_ratio < 1.0
        return True


def dressed_constants(cfg: ModelConfig) -> tuple[float, float, float]:
    """(Omega, C, shift) of the g-dressing for cfg's algebra.

    Omega is the dressed level spacing, C the displacement radius
    (|z_j| = C), and shift the constant offset in Omega (L3 + shift).
    su(1,1) requires 2g/omega < 1.
    """
    x = cfg.coupling_ratio
    if cfg.algebra.kind == OSCILLATOR:
        return cfg.omega, x, -((cfg.g / cfg.omega) ** 2)
    if cfg.algebra.kind == SU11:
        if not cfg.spectral_ok:
            raise ValueError(
                f"su11 dressing needs 2g/omega < 1, got {x:g} (atanh domain)"
            )
        return cfg.omega * math.sqrt(1.0 - x * x), math.atanh(x), 0.0
    return cfg.omega * math.sqrt(1.0 + x * x), math.atan(x), 0.0


@dataclass(frozen=True)
class SpectralData:
    """Exact eigendata of the g-dressed Hamiltonian.

    Level m of displaced branch j has energy ``energies[m]`` (n-fold
    degenerate across j) and eigenvector |sigma^j> x D(-z_j/2)|m>,
    materialized by :meth:`eigenvector`.
    """

    config: ModelConfig
    Omega: float
    C: float
    shift: float
    z: np.ndarray
    energies: np.ndarray
    displacements: tuple

    def eigenvector(self, j: int, m: int) -> np.ndarray:
        # the branch index is cyclic (j - 1 means the previous branch)
        j = j % self.config.n
        if not 0 <= m < self.config.trunc_dim:
            raise ValueError(f"m must lie in [0, {self.config.trunc_dim})")
        atom = atom_eigenstate(self.config.n, j)
        return kron(atom, self.displacements[j][:, m])

    def energy(self, m: int) -> float:
        return float(self.energies[m])


def spectral_data(cfg: ModelConfig) -> SpectralData:
    """Closed-form Omega, displacement parameters and eigensystem of H0."""
    omega_dressed, c_radius, shift = dressed_constants(cfg)
    z = np.array([c_radius * root_of_unity(cfg.n, j) for j in range(cfg.n)])
    lt = build_ladder(cfg.algebra, cfg.trunc_dim)
    l3_diag = np.real(np.diag(lt.l_3))
    energies = omega_dressed * (l3_diag + shift)
    disp = tuple(
        displacement_numeric(cfg.algebra, cfg.trunc_dim, -z[j] / 2.0)
        for j in range(cfg.n)
    )
    return SpectralData(cfg, omega_dressed, c_radius, shift, z, energies, disp)


def build_hamiltonian(cfg: ModelConfig) -> np.ndarray:
    """Dense Hamiltonian on the n * trunc_dim product space.

    Assembled as the omega term plus X + X-dagger, so hermiticity is
    exact by construction.
    """
    lt = build_ladder(cfg.algebra, cfg.trunc_dim)
    eye_field = np.eye(cfg.trunc_dim, dtype=complex)
    x = (np.conj(cfg.delta) / 2.0) * kron(sigma3(cfg.n), eye_field)
    x += cfg.g * kron(sigma1(cfg.n), lt.l_plus)
    h = cfg.omega * kron(np.eye(cfg.n, dtype=complex), lt.l_3)
    return h + x + x.conj().T


@dataclass(frozen=True)
class KeyFormulaReport:
    """Deviation of the dressing identity on the leading half block."""

    deviation: float
    deviation_refined: float
    dim: int
    dim_refined: int
    converged: bool


def _key_formula_deviation(cfg: ModelConfig, j: int, dim: int) -> float:
    omega_dressed, c_radius, shift = dressed_constants(cfg)
    sig = root_of_unity(cfg.n, j)
    z_j = c_radius * sig
    lt = build_ladder(cfg.algebra, dim)
    gen = expm(0.5 * (z_j * lt.l_plus - np.conj(z_j) * lt.l_minus))
    dressed = cfg.omega * lt.l_3 + cfg.g * (sig * lt.l_plus + np.conj(sig) * lt.l_minus)
    conjugated = gen @ dressed @ gen.conj().T
    target = omega_dressed * (lt.l_3 + shift * np.eye(dim))
    half = dim // 2
    return max_abs(conjugated[:half, :half] - target[:half, :half])


def key_formula_check(cfg: ModelConfig, j: int) -> KeyFormulaReport:
    """Verify the dressing identity for displaced branch j.

    Conjugating omega L3 + g (sigma^j L+ + h.c.) with the half
    displacement exp((z_j L+ - h.c.)/2) must give Omega (L3 + shift) on
    the leading half block.  Truncated algebras rerun at doubled
    dimension to confirm convergence.
    """
    if not 0 <= j < cfg.n:
        raise ValueError(f"j must lie in [0, {cfg.n}), got {j}")
    dim = cfg.trunc_dim
    dev1 = _key_formula_deviation(cfg, j, dim)
    if cfg.algebra.kind == SU2:
        dim2, dev2 = dim, dev1
    else:
        dim2 = 2 * dim
        dev2 = _key_formula_deviation(cfg, j, dim2)
    top = max(dev1, dev2)
    converged = top <= 1e-12 or abs(dev2 - dev1) <= 0.10 * top
    return KeyFormulaReport(dev1, dev2, dim, dim2, converged)


def multi_cat_states(cfg: ModelConfig, m: int, data: SpectralData | None = None) -> list:
    """The n W-rotated combinations of the displaced level-m states.

    Entry j is sum_k W[k, j] |sigma^k, m>; these are orthonormal and
    diagonalize the atom-hopping part of the perturbation.
    """
    if data is None:
        data = spectral_data(cfg)
    w = hadamard_w(cfg.n)
    branches = [data.eigenvector(k, m) for k in range(cfg.n)]
    return [
        sum(w[k, j] * branches[k] for k in range(cfg.n)) for j in range(cfg.n)
    ]


def multi_cat_orthonormality(cfg: ModelConfig, m: int, data: SpectralData | None = None) -> float:
    """Max-entry deviation of the cat-state Gram matrix from identity."""
    cats = multi_cat_states(cfg, m, data)
    gram = np.array([[np.vdot(a, b) for b in cats] for a in cats])
    return max_abs(gram - np.eye(cfg.n))


def hopping_diagonality(cfg: ModelConfig, m: int, data: SpectralData | None = None) -> float:
    """Check that the branch-hopping operator is diagonal on cat states.

    Compares sum_j |sigma^j, m><sigma^(j-1), m| against
    sum_j sigma^j |cat_j><cat_j| in the full product space.
    """
    if data is None:
        data = spectral_data(cfg)
    branches = [data.eigenvector(j, m) for j in range(cfg.n)]
    hop = sum(
        np.outer(branches[j], branches[j - 1].conj()) for j in range(cfg.n)
    )
    cats = multi_cat_states(cfg, m, data)
    diag = sum(
        root_of_unity(cfg.n, j) * np.outer(cats[j], cats[j].conj())
        for j in range(cfg.n)
    )
    return max_abs(hop - diag)
