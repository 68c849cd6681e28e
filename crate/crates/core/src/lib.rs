//! Exact and gate-level simulation of the t-J-U model as realized with
//! state-dependent shifts of fermionic atoms in an optical lattice.
//!
//! * [`fockspace`]: occupation bases and fermionic mode operators
//! * [`hamiltonian`]: Hubbard, hopping, spin-coupling and t-J-U operators
//! * [`propagator`]: matrix exponentials and exact evolution
//! * [`protocol`]: collision gates, spin flips, rotations, Trotter products
//! * [`collision`]: physical parameters of the shift-and-collide scheme
//! * [`analysis`]: anti-fidelity bounds and parameter sweeps

pub mod analysis;
pub mod collision;
pub mod error;
pub mod fockspace;
pub mod hamiltonian;
pub mod linalg;
pub mod operator;
pub mod propagator;
pub mod protocol;

pub use error::{Error, Result};
pub use fockspace::{Basis, FockState, ModeOp, Sector, Spin};
pub use hamiltonian::{Axis, Boundary, Chain, ModelParams};
pub use operator::Operator;
pub use protocol::{CollisionPhase, ProtocolSchedule, TrotterOrder};
