"""Geometry, material constants and the box confinement potential.

A qubit is an "artificial molecule": two vertically stacked, tunnel
coupled box-shaped quantum dots sharing a single electron.  The lower
dot is larger than the upper one, which localizes the two lowest
eigenstates in opposite dots and makes them usable as computational
basis states.

The confinement potential is piecewise constant with three values:

    0            inside either dot box,
    v_vertical   wherever z falls outside both dots' vertical ranges
                 (the inter-dot barrier and the vertical cladding),
    v_lateral    otherwise (lateral escape at a z that is inside some
                 dot's vertical range).

The precedence above resolves the corner regions where both the
lateral and the vertical condition hold: the vertical test wins only
when z is outside both dots, which keeps the barrier value continuous
across the gap between the dots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np


class ElectrodeState(Enum):
    """Switch state of the inter-qubit coupling electrodes."""

    FLOATING = "floating"   # coupling on
    GROUNDED = "grounded"   # coupling screened off


@dataclass(frozen=True)
class Material:
    """Bulk host-material constants.

    effective_mass_ratio and dielectric_constant are dimensionless;
    deformation_potential is in eV (its sign is irrelevant, only the
    square enters scattering rates); mass_density is kg/m^3 and
    sound_velocity m/s, i.e. in the units material tables quote them.
    """

    effective_mass_ratio: float
    dielectric_constant: float
    deformation_potential: float
    mass_density: float
    sound_velocity: float

    def __post_init__(self):
        for name in ("effective_mass_ratio", "dielectric_constant",
                     "mass_density", "sound_velocity"):
            value = getattr(self, name)
            if value <= 0:
                raise ValueError(f"{name} must be strictly positive, got {value}")


# GaAs-like defaults.  The conduction-band effective mass of GaAs is
# 0.067 m0; PAPER_MASS_RATIO keeps the alternative 0.67 m0 sometimes
# quoted for these structures selectable in configs.
GAAS_MASS_RATIO = 0.067
PAPER_MASS_RATIO = 0.67


def default_material(mass_ratio: float = GAAS_MASS_RATIO) -> Material:
    """GaAs-like host: eps_r = 10, D = -6.8 eV, rho = 5.4e3 kg/m^3, Us = 3.4e3 m/s."""
    return Material(
        effective_mass_ratio=mass_ratio,
        dielectric_constant=10.0,
        deformation_potential=-6.8,
        mass_density=5.4e3,
        sound_velocity=3.4e3,
    )


@dataclass(frozen=True)
class DotGeometry:
    """One box-shaped dot: square cross-section of side `width` (x and y),
    vertical extent `height` (z), centered at `center` (nm)."""

    width: float
    height: float
    center: tuple[float, float, float]

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError(f"dot width must be positive, got {self.width}")
        if self.height <= 0:
            raise ValueError(f"dot height must be positive, got {self.height}")

    @property
    def z_bottom(self) -> float:
        return self.center[2] - self.height / 2.0

    @property
    def z_top(self) -> float:
        return self.center[2] + self.height / 2.0

    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        """((xmin,xmax),(ymin,ymax),(zmin,zmax)) of the dot box."""
        x0, y0, z0 = self.center
        w2, h2 = self.width / 2.0, self.height / 2.0
        return ((x0 - w2, x0 + w2), (y0 - w2, y0 + w2), (z0 - h2, z0 + h2))

    def translated(self, offset: tuple[float, float, float]) -> "DotGeometry":
        cx, cy, cz = self.center
        dx, dy, dz = offset
        return replace(self, center=(cx + dx, cy + dy, cz + dz))


@dataclass(frozen=True)
class MoleculeGeometry:
    """Two stacked dots sharing a vertical axis.

    dot_lower is the larger dot, dot_upper the smaller one; their
    vertical extents are disjoint and separated by `barrier_gap` nm.
    v_lateral and v_vertical (meV) are the barrier heights for lateral
    and vertical escape; v_lateral > v_vertical > 0.
    """

    dot_lower: DotGeometry
    dot_upper: DotGeometry
    barrier_gap: float
    v_lateral: float
    v_vertical: float

    def __post_init__(self):
        lo, up = self.dot_lower, self.dot_upper
        if not (math.isclose(lo.center[0], up.center[0], abs_tol=1e-9)
                and math.isclose(lo.center[1], up.center[1], abs_tol=1e-9)):
            raise ValueError("dots must share a common vertical axis")
        if not lo.width > up.width:
            raise ValueError(
                f"lower dot must be wider than upper dot "
                f"({lo.width} !> {up.width})")
        if not (self.v_lateral > self.v_vertical > 0):
            raise ValueError(
                f"need v_lateral > v_vertical > 0, got "
                f"{self.v_lateral}, {self.v_vertical}")
        if self.barrier_gap <= 0:
            raise ValueError(f"barrier gap must be positive, got {self.barrier_gap}")
        gap = up.z_bottom - lo.z_top
        if gap <= 0:
            raise ValueError("dot vertical extents must be disjoint (upper above lower)")
        if not math.isclose(gap, self.barrier_gap, rel_tol=0, abs_tol=1e-9):
            raise ValueError(
                f"barrier_gap={self.barrier_gap} inconsistent with dot "
                f"centers (actual gap {gap})")

    @classmethod
    def stacked(cls, lower_width: float, lower_height: float,
                upper_width: float, upper_height: float,
                barrier_gap: float, v_lateral: float, v_vertical: float,
                axis_xy: tuple[float, float] = (0.0, 0.0)) -> "MoleculeGeometry":
        """Build a molecule with the barrier gap centered on z = 0."""
        x0, y0 = axis_xy
        z_lo = -(barrier_gap / 2.0 + lower_height / 2.0)
        z_up = +(barrier_gap / 2.0 + upper_height / 2.0)
        return cls(
            dot_lower=DotGeometry(lower_width, lower_height, (x0, y0, z_lo)),
            dot_upper=DotGeometry(upper_width, upper_height, (x0, y0, z_up)),
            barrier_gap=barrier_gap,
            v_lateral=v_lateral,
            v_vertical=v_vertical,
        )

    @property
    def dots(self) -> tuple[DotGeometry, DotGeometry]:
        return (self.dot_lower, self.dot_upper)

    @property
    def midpoint_z(self) -> float:
        """Center of the inter-dot gap; dipole origin of the qubit."""
        return 0.5 * (self.dot_lower.z_top + self.dot_upper.z_bottom)

    @property
    def axis_xy(self) -> tuple[float, float]:
        return (self.dot_lower.center[0], self.dot_lower.center[1])

    def bounding_box(self) -> tuple[tuple[float, float], ...]:
        boxes = [d.bounding_box() for d in self.dots]
        return tuple(
            (min(b[i][0] for b in boxes), max(b[i][1] for b in boxes))
            for i in range(3)
        )

    def translated(self, offset: tuple[float, float, float]) -> "MoleculeGeometry":
        return replace(
            self,
            dot_lower=self.dot_lower.translated(offset),
            dot_upper=self.dot_upper.translated(offset),
        )


@dataclass(frozen=True)
class GateGeometry:
    """Two side-by-side molecules forming a controlled-NOT gate.

    The target molecule sits `lateral_separation` nm away from the
    control along x (center to center).  electrode_plane_gap is the
    spacing of the grounded planes used by the screening model when the
    coupling electrodes are grounded.
    """

    control: MoleculeGeometry
    target: MoleculeGeometry
    lateral_separation: float
    electrode_state: ElectrodeState = ElectrodeState.FLOATING
    electrode_plane_gap: float = 5.0

    def __post_init__(self):
        widest = max(d.width for m in (self.control, self.target) for d in m.dots)
        if not self.lateral_separation > widest:
            raise ValueError(
                f"lateral_separation={self.lateral_separation} must exceed "
                f"the widest dot ({widest})")
        if self.electrode_plane_gap <= 0:
            raise ValueError("electrode_plane_gap must be positive")

    @property
    def target_offset(self) -> tuple[float, float, float]:
        return (self.lateral_separation, 0.0, 0.0)

    def with_electrodes(self, state: ElectrodeState) -> "GateGeometry":
        return replace(self, electrode_state=state)


@dataclass(frozen=True)
class DriveField:
    """Monochromatic drive E(t) = amplitude * cos(2*pi*frequency*t + phase),
    polarized along z.  Amplitude in mV/nm, frequency in THz."""

    amplitude: float
    frequency: float
    phase: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"amplitude must be >= 0, got {self.amplitude}")
        if self.frequency < 0:
            raise ValueError(f"frequency must be >= 0, got {self.frequency}")

    @property
    def omega(self) -> float:
        """Angular frequency, rad/ps."""
        return 2.0 * math.pi * self.frequency

    @property
    def period_ps(self) -> float:
        return math.inf if self.frequency == 0 else 1.0 / self.frequency

    def field_at(self, t):
        """Instantaneous field (mV/nm); t may be a scalar or array (ps)."""
        return self.amplitude * np.cos(self.omega * np.asarray(t) + self.phase)


def potential_at(geom: MoleculeGeometry, r):
    """Confinement potential (meV) at point(s) r.

    r is either a length-3 sequence (x, y, z) of scalars/arrays or an
    ndarray whose last axis has length 3.  Broadcasts over array input.
    Total function: every point maps to one of {0, v_vertical, v_lateral}.
    """
    if isinstance(r, np.ndarray) and r.shape[-1] == 3 and r.ndim > 1:
        x, y, z = r[..., 0], r[..., 1], r[..., 2]
    else:
        x, y, z = (np.asarray(c, dtype=float) for c in r)

    inside_any = np.zeros(np.broadcast(x, y, z).shape, dtype=bool)
    z_in_any = np.zeros_like(inside_any)
    for dot in geom.dots:
        (xmin, xmax), (ymin, ymax), (zmin, zmax) = dot.bounding_box()
        z_in = (z >= zmin) & (z <= zmax)
        lateral_in = (x >= xmin) & (x <= xmax) & (y >= ymin) & (y <= ymax)
        inside_any |= z_in & lateral_in
        z_in_any |= z_in

    v = np.where(inside_any, 0.0,
                 np.where(z_in_any, geom.v_lateral, geom.v_vertical))
    if v.ndim == 0:
        return float(v)
    return v


def default_qubit() -> MoleculeGeometry:
    """Reference single qubit: 24x20 nm lower dot, 22x15 nm upper dot,
    7 nm gap, 1000/240 meV lateral/vertical barriers."""
    return MoleculeGeometry.stacked(
        lower_width=24.0, lower_height=20.0,
        upper_width=22.0, upper_height=15.0,
        barrier_gap=7.0, v_lateral=1000.0, v_vertical=240.0,
    )


def default_cn_gate(lateral_separation: float = 30.0,
                    electrode_plane_gap: float = 5.0) -> GateGeometry:
    """Reference two-qubit gate: control = default_qubit, target dots
    29x20 and 27x15 nm (same gap and barriers), 30 nm apart, coupling on."""
    target = MoleculeGeometry.stacked(
        lower_width=29.0, lower_height=20.0,
        upper_width=27.0, upper_height=15.0,
        barrier_gap=7.0, v_lateral=1000.0, v_vertical=240.0,
    )
    return GateGeometry(
        control=default_qubit(),
        target=target,
        lateral_separation=lateral_separation,
        electrode_state=ElectrodeState.FLOATING,
        electrode_plane_gap=electrode_plane_gap,
    )
