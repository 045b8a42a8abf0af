"""Internal unit system and physical constants.

All bulk quantities inside the package are expressed in a single unit
system chosen so that everything relevant to nanometre-scale charge
qubits is O(1)-O(1e3):

    length          nm
    time            ps
    energy          meV
    charge          units of +e (the electron charge Q == 1)
    temperature     K
    electric field  mV/nm   (so Q * z[nm] * E[mV/nm] is directly meV)

With Q == 1 an electric potential in mV and a potential energy in meV
are numerically identical, which the readout module relies on.
"""

from __future__ import annotations

# Reduced Planck constant, meV*ps.
HBAR_MEV_PS = 0.6582120

# Planck constant expressed as meV per THz: a transition of energy
# E meV is resonant with a drive of frequency E / PLANCK_MEV_PER_THZ THz.
PLANCK_MEV_PER_THZ = 4.135667

# hbar^2 / (2 m0) for the free electron mass, meV*nm^2.  Divide by the
# effective-mass ratio to get the kinetic prefactor of a band electron.
HBAR2_OVER_2M0_MEV_NM2 = 38.0998

# Coulomb constant e^2 / (4 pi eps0), meV*nm (vacuum; divide by eps_r).
COULOMB_MEV_NM = 1439.96

# Boltzmann constant, meV/K.
KB_MEV_PER_K = 0.0861733

# 1 J/m^3 in meV/nm^3 (used to convert mass_density * sound_velocity^2).
JOULE_PER_M3_TO_MEV_PER_NM3 = 6.241509074e-6

# 1 m/s in nm/ps.
M_PER_S_TO_NM_PER_PS = 1e-3

# 1/ps in 1/s.
PER_PS_TO_PER_S = 1e12


def kinetic_prefactor(mass_ratio: float) -> float:
    """hbar^2/(2 m* ) in meV*nm^2 for effective mass m* = mass_ratio * m0."""
    if mass_ratio <= 0:
        raise ValueError(f"mass ratio must be positive, got {mass_ratio}")
    return HBAR2_OVER_2M0_MEV_NM2 / mass_ratio


# Conversion factors internal-unit -> SI for the quantities the package
# traffics in.  Round-tripping through these is exact multiplication or
# division by the same factor, so values survive to machine precision.
_SI_FACTORS = {
    "length": 1e-9,              # nm -> m
    "time": 1e-12,               # ps -> s
    "energy": 1.602176634e-22,   # meV -> J
    "rate": 1e12,                # 1/ps -> 1/s
    "frequency": 1e12,           # THz -> Hz
    "electric_field": 1e6,       # mV/nm -> V/m
    "temperature": 1.0,          # K -> K
}


def to_si(value: float, quantity: str) -> float:
    """Convert an internal-unit value to SI."""
    try:
        return value * _SI_FACTORS[quantity]
    except KeyError:
        raise ValueError(f"unknown quantity kind {quantity!r}") from None


def from_si(value: float, quantity: str) -> float:
    """Convert an SI value to internal units."""
    try:
        return value / _SI_FACTORS[quantity]
    except KeyError:
        raise ValueError(f"unknown quantity kind {quantity!r}") from None
