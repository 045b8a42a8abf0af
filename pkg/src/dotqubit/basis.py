"""Computational basis of one qubit: level energies and dipole moments.

|0> is the molecule's ground state and |1> its first excited state.
The drive couples to the electron position along the stacking axis, so
the matrix elements z_ij = <i| z |j> (z measured from the midpoint of
the inter-dot gap) fix both the Rabi rate (z01) and the static
polarization of each basis state (z00, z11).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import PLANCK_MEV_PER_THZ
from .eigensolver import Grid3D, Wavefunction, discretize, solve_lowest
from .model import Material, MoleculeGeometry, default_material

MIN_SPLITTING_MEV = 0.1


class DegenerateSplittingError(ValueError):
    """Level splitting too small for the states to be addressable."""


@dataclass(frozen=True)
class QubitBasis:
    """Energies (meV), basis states, and dipole matrix elements (nm).

    psi0/psi1 are None for synthetic bases used in design studies; all
    dynamics depends only on (e1 - e0, z00, z01, z11).
    """

    e0: float
    e1: float
    z00: float
    z01: float
    z11: float
    resonance_thz: float
    psi0: Wavefunction | None = None
    psi1: Wavefunction | None = None

    def __post_init__(self):
        if not self.e1 > self.e0:
            raise ValueError(f"need e1 > e0, got {self.e0}, {self.e1}")
        if self.z01 == 0:
            raise ValueError("z01 must be nonzero for the drive to couple the states")

    @property
    def splitting_mev(self) -> float:
        return self.e1 - self.e0

    @classmethod
    def synthetic(cls, splitting_mev: float, z01: float,
                  z00: float = 0.0, z11: float = 0.0) -> "QubitBasis":
        return cls(e0=0.0, e1=splitting_mev, z00=z00, z01=z01, z11=z11,
                   resonance_thz=resonance_frequency(0.0, splitting_mev))


def resonance_frequency(e0: float, e1: float) -> float:
    """Transition frequency (THz) of a splitting e1 - e0 (meV)."""
    if not e1 > e0:
        raise ValueError(f"need e1 > e0, got {e0}, {e1}")
    return (e1 - e0) / PLANCK_MEV_PER_THZ


def dipole_matrix_element(psi_i: Wavefunction, psi_j: Wavefunction,
                          origin_z: float = 0.0) -> float:
    """<i| (z - origin_z) |j> by grid quadrature, nm."""
    if psi_i.grid != psi_j.grid:
        raise ValueError("states must share a grid")
    z = psi_i.grid.axis(2) - origin_z
    overlap_xy = np.sum(psi_i.values * psi_j.values, axis=(0, 1))
    return float(np.sum(overlap_xy * z)) * psi_i.grid.cell_volume


def build_basis(geom: MoleculeGeometry, grid: Grid3D | None = None,
                material: Material | None = None, seed: int = 0,
                tol: float = 1e-6) -> QubitBasis:
    """Solve the molecule and package the two lowest states as a qubit.

    States are phase-fixed so z01 > 0.  Raises DegenerateSplittingError
    if e1 - e0 < 0.1 meV.
    """
    material = material or default_material()
    grid = grid or Grid3D.for_molecule(geom)
    op = discretize(geom, grid, material)
    result = solve_lowest(op, k=2, tol=tol, seed=seed)
    e0, e1 = result.energies[:2]
    if e1 - e0 < MIN_SPLITTING_MEV:
        raise DegenerateSplittingError(
            f"splitting {e1 - e0:.4f} meV < {MIN_SPLITTING_MEV} meV; "
            f"states not separately addressable")
    psi0, psi1 = result.states[:2]
    origin = geom.midpoint_z
    z01 = dipole_matrix_element(psi0, psi1, origin)
    if z01 < 0:
        psi1 = Wavefunction(psi1.grid, -psi1.values)
        z01 = -z01
    return QubitBasis(
        e0=e0, e1=e1,
        z00=dipole_matrix_element(psi0, psi0, origin),
        z01=z01,
        z11=dipole_matrix_element(psi1, psi1, origin),
        resonance_thz=resonance_frequency(e0, e1),
        psi0=psi0, psi1=psi1,
    )
