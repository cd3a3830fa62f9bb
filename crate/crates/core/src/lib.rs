//! Simulation and optimization engines for strongly driven quantum and
//! classical rotors.
//!
//! The crate covers four engines and three strategy layers:
//!
//! - [`quantum2d`]: exact planar-rotor evolution under free flight and
//!   delta-kicks in the angular-momentum basis.
//! - [`classical2d`]: Monte-Carlo and branch-sum dynamics of the classical
//!   kicked rotor (equivalently, atoms in a pulsed optical lattice).
//! - [`classical3d`]: rigid-rotor ensembles on the sphere with conserved
//!   azimuthal momentum.
//! - [`quantum3d`]: linear-molecule propagation in the `|J,0>` basis under
//!   the polarization (`cos^2 theta`) interaction.
//! - [`squeeze`]: the accumulative squeezing scheduler plus its
//!   parabolic-limit recurrence.
//! - [`pulse_opt`]: fixed-budget optimization of inter-kick delays.
//! - [`focal`]: focusing-time prediction from the linearized small-angle
//!   equation.
//!
//! All times are dimensionless (`tau = t hbar / I`), all angles are in
//! radians, and every stochastic operation takes an explicit seed.

pub mod bessel;
pub mod classical2d;
pub mod classical3d;
pub mod export;
pub mod focal;
pub mod nelder_mead;
pub mod pulse;
pub mod pulse_opt;
pub mod quantum2d;
pub mod quantum3d;
pub mod squeeze;
pub mod thermal;
