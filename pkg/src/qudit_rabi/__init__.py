"""n-level atom coupled to a single radiation mode, strong coupling.

Layers, bottom up:

- ``special_functions``: Laguerre / Pochhammer / auxiliary F sums.
- ``fock_algebra``: dense ladder matrices and the expm oracle.
- ``coherent_ops``: closed-form coherent-operator matrix elements.
- ``nlevel_model``: clock/shift matrices, Hamiltonian, dressed spectrum,
  multi-cat states.
- ``rwa_dynamics``: Rabi channels, resonance solver, integrators.
- ``qudit_gates``: elementary two-qudit unitaries and gate search.
- ``cli``: the ``qudit-rabi`` batch command.
"""

from .fock_algebra import AlgebraSpec, oscillator, su11, su2
from .nlevel_model import ModelConfig

__all__ = ["AlgebraSpec", "oscillator", "su11", "su2", "ModelConfig"]
__version__ = "0.1.0"
