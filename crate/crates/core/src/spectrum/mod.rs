//! Periodic orbits, the marked length spectrum, Mather's beta/alpha
//! functions and rotation numbers.

mod beta;
mod orbit;
mod rotation;

pub use beta::{
    alpha, beta, beta_expansion_check, beta_with, convexity_violation, farey_half, marked_length_spectrum,
    marked_length_spectrum_with, spectrum_csv, AlphaValue, BetaGrid, BetaSample, ExpansionReport, SpectrumEntry,
};
pub use orbit::{
    circle_orbit_length, find_periodic_orbit, find_periodic_orbit_with, find_periodic_orbits, OrbitSearch,
    PeriodicOrbit,
};
pub use rotation::{rotation_number, weighted_birkhoff_average, RotationEstimate};
