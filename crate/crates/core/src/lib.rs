//! Exact and modular arithmetic for checking congruences of Apéry and
//! Franel numbers, the finite-sum identities behind them, and the
//! Bernoulli-polynomial correction terms that appear on the right-hand
//! sides.
//!
//! The crate is organized as two evaluation paths that must agree:
//!
//! * an *exact* path over big integers and big rationals ([`exact`],
//!   the oracle), and
//! * a *fast* path over `u64` residues in `Z/p^e` ([`modular`]), used
//!   for prime sweeps.
//!
//! [`claims`] holds the congruence catalog, [`identities`] the exact
//! finite-sum identity catalog, and [`sequences`] the generators both
//! paths share.

pub mod claims;
pub mod exact;
pub mod identities;
pub mod modular;
pub mod sequences;

pub use claims::{ClaimId, ClaimResult, ClaimSpec, Side};
pub use exact::FactorialTable;
pub use identities::{IdentityId, IdentityRanges, IdentityReport};
pub use modular::{ModError, PAdicUnit, PrimePowerModulus, Residue};
pub use sequences::FranelMethod;
