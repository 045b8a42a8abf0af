"""dotqubit: simulator of charge qubits in stacked quantum-dot molecules."""

from .model import (
    DotGeometry,
    DriveField,
    ElectrodeState,
    GateGeometry,
    Material,
    MoleculeGeometry,
    default_cn_gate,
    default_material,
    default_qubit,
    potential_at,
)
from .eigensolver import (
    EigenResult,
    Grid3D,
    Wavefunction,
    discretize,
    localization,
    solve_1d,
    solve_lowest,
)
from .basis import QubitBasis, build_basis, resonance_frequency

__version__ = "0.1.0"

__all__ = [
    "DotGeometry", "DriveField", "ElectrodeState", "GateGeometry",
    "Material", "MoleculeGeometry", "default_cn_gate", "default_material",
    "default_qubit", "potential_at",
    "EigenResult", "Grid3D", "Wavefunction", "discretize", "localization",
    "solve_1d", "solve_lowest",
    "QubitBasis", "build_basis", "resonance_frequency",
    "__version__",
]
