"""Inter-qubit Coulomb coupling and the electrode on/off switch.

The two molecules of a gate sit side by side; their electrons interact
electrostatically.  Because the orbitals do not overlap, the coupling
reduces to a classical density-density (Hartree) integral between the
charge densities of the occupied states, screened by the host
dielectric.  Conditional level shifts follow from the 2x2 table of
state-pair interaction energies; off-diagonal (flip-flop) Coulomb
terms are dropped, matching a purely diagonal level-shift picture.

Grounding the electrode planes between the qubits is modeled by the
leading term of the grounded-parallel-plate image series: a charge
between planes with gap g seen at lateral distance s is attenuated by
exp(-pi s / g), which switches the coupling off exponentially fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .basis import QubitBasis, resonance_frequency
from .constants import COULOMB_MEV_NM
from .eigensolver import Grid3D, Wavefunction
from .model import ElectrodeState, GateGeometry

COUPLING_OFF_THRESHOLD_MEV = 1e-7  # the "switched off" target (1e-10 eV)


class OverlappingSupportError(ValueError):
    """Charge densities overlap; the bare 1/r double sum would include
    unhandled self-energy terms."""


@dataclass(frozen=True)
class ChargeDensity:
    """Normalized charge density sampled on a grid (total charge 1)."""

    grid: Grid3D
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != self.grid.points:
            raise ValueError("density shape does not match grid")

    @classmethod
    def from_wavefunction(cls, psi: Wavefunction) -> "ChargeDensity":
        rho = psi.density()
        total = float(np.sum(rho)) * psi.grid.cell_volume
        return cls(psi.grid, rho / total)

    def shifted(self, offset: tuple[float, float, float]) -> "ChargeDensity":
        return replace(self, grid=self.grid.shifted(offset))

    def point_cloud(self, threshold: float = 1e-14,
                    max_points: int | None = 6000):
        """(positions (n,3), charges (n,)) of the significant cells.

        Cells below `threshold` total charge are dropped; if more than
        `max_points` cells remain, blocks of cells are merged into point
        charges at their charge-weighted centroids (downsampling error
        is O((block size / separation)^2) and is validated against the
        full sum by the brute-force equivalence tests).
        """
        q = self.values * self.grid.cell_volume
        x, y, z = self.grid.axes()
        factor = 1
        if max_points is not None:
            while q.size / factor ** 3 > max_points:
                factor += 1
        if factor > 1:
            pos, charge = _merge_blocks(q, x, y, z, factor)
        else:
            X, Y, Z = np.meshgrid(x, y, z, indexing="ij")
            pos = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
            charge = q.ravel()
        keep = charge > threshold
        return pos[keep], charge[keep]

    def support_box(self, threshold: float = 1e-12):
        """Axis-aligned bounding box of cells with charge > threshold."""
        q = self.values * self.grid.cell_volume
        mask = q > threshold
        if not mask.any():
            raise ValueError("density has no support above threshold")
        x, y, z = self.grid.axes()
        ix, iy, iz = np.nonzero(mask)
        return ((x[ix.min()], x[ix.max()]),
                (y[iy.min()], y[iy.max()]),
                (z[iz.min()], z[iz.max()]))

    def centroid(self) -> np.ndarray:
        pos, charge = self.point_cloud(threshold=0.0, max_points=None)
        return (pos * charge[:, None]).sum(axis=0) / charge.sum()


def _merge_blocks(q, x, y, z, f):
    """Merge f^3 blocks of cells into charge-weighted point charges."""
    nx, ny, nz = q.shape
    px = -nx % f
    py = -ny % f
    pz = -nz % f
    qp = np.pad(q, ((0, px), (0, py), (0, pz)))
    # charge-weighted coordinates, padded with zeros
    def pad_axis(c, n, p):
        return np.pad(c, (0, p), constant_values=c[-1] if p else 0.0)
    xp, yp, zp = pad_axis(x, nx, px), pad_axis(y, ny, py), pad_axis(z, nz, pz)
    X, Y, Z = np.meshgrid(xp, yp, zp, indexing="ij")
    shape = (qp.shape[0] // f, f, qp.shape[1] // f, f, qp.shape[2] // f, f)
    qb = qp.reshape(shape)
    charge = qb.sum(axis=(1, 3, 5)).ravel()
    pos = np.empty((charge.size, 3))
    with np.errstate(invalid="ignore"):
        for i, C in enumerate((X, Y, Z)):
            moment = (qb * C.reshape(shape)).sum(axis=(1, 3, 5)).ravel()
            pos[:, i] = np.where(charge > 0, moment / np.maximum(charge, 1e-300), 0.0)
    return pos, charge


def _boxes_disjoint(a, b) -> bool:
    return any(a[i][1] < b[i][0] or b[i][1] < a[i][0] for i in range(3))


def coulomb_integral(rho_a: ChargeDensity, rho_b: ChargeDensity,
                     eps_r: float, max_points: int | None = 6000) -> float:
    """Screened density-density interaction energy (meV).

    Direct double sum (k / eps_r) * sum_ab q_a q_b / |r_a - r_b| over the
    significant grid cells of the two densities.  The supports must be
    disjoint (inter-qubit interaction only); overlapping supports raise
    OverlappingSupportError since the 1/r kernel has no self-energy
    handling here.
    """
    if eps_r <= 0:
        raise ValueError("eps_r must be positive")
    if not _boxes_disjoint(rho_a.support_box(), rho_b.support_box()):
        raise OverlappingSupportError(
            "densities overlap; inter-qubit integral requires disjoint supports")
    # canonical orientation makes coulomb_integral(a, b) == (b, a) exactly
    ca, cb = tuple(rho_a.centroid()), tuple(rho_b.centroid())
    if cb < ca:
        rho_a, rho_b = rho_b, rho_a
    pos_a, q_a = rho_a.point_cloud(max_points=max_points)
    pos_b, q_b = rho_b.point_cloud(max_points=max_points)
    total = 0.0
    chunk = max(1, int(2e7) // max(1, pos_b.shape[0]))
    for i in range(0, pos_a.shape[0], chunk):
        d = np.linalg.norm(pos_a[i:i + chunk, None, :] - pos_b[None, :, :], axis=2)
        total += float(np.sum((q_a[i:i + chunk, None] / d) * q_b[None, :]))
    return COULOMB_MEV_NM / eps_r * total


def point_charge_estimate(rho_a: ChargeDensity, rho_b: ChargeDensity,
                          eps_r: float) -> float:
    """Monopole shortcut: unit charges at the density centroids (meV)."""
    d = float(np.linalg.norm(rho_a.centroid() - rho_b.centroid()))
    return COULOMB_MEV_NM / (eps_r * d)


@dataclass(frozen=True)
class CoulombTable:
    """u[c][t]: interaction (meV) between the control electron in state c
    and the target electron in state t (state 0 occupies the lower dot,
    state 1 the upper dot)."""

    u: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", np.asarray(self.u, dtype=float))
        if self.u.shape != (2, 2):
            raise ValueError("coupling table must be 2x2")
        if (self.u < 0).any():
            raise ValueError("coupling energies must be >= 0")

    @property
    def conditional_shift(self) -> float:
        """Extra detuning of the target transition when the control is in
        |1> instead of |0> (meV)."""
        u = self.u
        return (u[1, 1] - u[1, 0]) - (u[0, 1] - u[0, 0])

    def scaled(self, factor: float) -> "CoulombTable":
        return CoulombTable(self.u * factor)

    @classmethod
    def zero(cls) -> "CoulombTable":
        return cls(np.zeros((2, 2)))

    @classmethod
    def from_shift(cls, shift_mev: float) -> "CoulombTable":
        """Minimal table realizing a given conditional shift."""
        u = np.zeros((2, 2))
        u[1, 1] = shift_mev
        return cls(u)


def coupling_table(basis_c: QubitBasis, basis_t: QubitBasis,
                   gate: GateGeometry, eps_r: float,
                   max_points: int | None = 6000) -> CoulombTable:
    """Compute the 2x2 interaction table from the solved eigenstates of
    both molecules, offsetting the target by the gate separation."""
    if basis_c.psi0 is None or basis_t.psi0 is None:
        raise ValueError("coupling_table needs bases with wavefunctions")
    dens_c = [ChargeDensity.from_wavefunction(p) for p in (basis_c.psi0, basis_c.psi1)]
    dens_t = [ChargeDensity.from_wavefunction(p).shifted(gate.target_offset)
              for p in (basis_t.psi0, basis_t.psi1)]
    u = np.empty((2, 2))
    for c in range(2):
        for t in range(2):
            u[c, t] = coulomb_integral(dens_c[c], dens_t[t], eps_r,
                                       max_points=max_points)
    return CoulombTable(u)


def screening_factor(lateral_separation: float, plane_gap: float) -> float:
    """Leading image-series attenuation between grounded planes."""
    return math.exp(-math.pi * lateral_separation / plane_gap)


def required_separation_ratio(u_mev: float,
                              threshold: float = COUPLING_OFF_THRESHOLD_MEV) -> float:
    """Minimum s/g ratio that attenuates u below the off threshold."""
    return math.log(u_mev / threshold) / math.pi


def screened_interaction(gate: GateGeometry, table: CoulombTable) -> CoulombTable:
    """Apply the electrode switch: identity when floating, the
    parallel-plate attenuation when grounded."""
    if gate.electrode_state is ElectrodeState.FLOATING:
        return table
    return table.scaled(
        screening_factor(gate.lateral_separation, gate.electrode_plane_gap))


@dataclass(frozen=True)
class ConditionalResonances:
    """Transition frequencies (THz) of each qubit conditioned on the
    other qubit's state: *_plus when the spectator is |1>, *_minus
    when it is |0>."""

    target_plus: float
    target_minus: float
    control_plus: float
    control_minus: float


def conditional_resonances(basis_c: QubitBasis, basis_t: QubitBasis,
                           table: CoulombTable) -> ConditionalResonances:
    """Level scheme of the coupled pair from the diagonal energies
    E(c,t) = e_c + e_t + u[c][t]."""
    u = table.u

    def freq(delta: float) -> float:
        return resonance_frequency(0.0, delta)

    return ConditionalResonances(
        target_plus=freq(basis_t.splitting_mev + (u[1, 1] - u[1, 0])),
        target_minus=freq(basis_t.splitting_mev + (u[0, 1] - u[0, 0])),
        control_plus=freq(basis_c.splitting_mev + (u[1, 1] - u[0, 1])),
        control_minus=freq(basis_c.splitting_mev + (u[1, 0] - u[0, 0])),
    )
