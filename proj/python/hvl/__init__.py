"""Radial bound states with hypervirial and Feynman-Hellmann checks."""

from ._hvl import (
    BoundaryCondition,
    CoulombSign,
    Eigenstate,
    HvlError,
    Potential,
    Problem,
    classify,
    default_boundary_condition,
    derivative_at_origin,
    expectation,
    fh,
    hydrogen_state,
    hypervirial_power,
    inverse_square_state,
    kg_massless,
    kp_matching_tau,
    massless_state,
    oscillator_state,
    recurrence,
    run,
    solve,
    virial,
)

__all__ = [
    "BoundaryCondition",
    "CoulombSign",
    "Eigenstate",
    "HvlError",
    "Potential",
    "Problem",
    "classify",
    "default_boundary_condition",
    "derivative_at_origin",
    "expectation",
    "fh",
    "hydrogen_state",
    "hypervirial_power",
    "inverse_square_state",
    "kg_massless",
    "kp_matching_tau",
    "massless_state",
    "oscillator_state",
    "recurrence",
    "run",
    "solve",
    "virial",
]
