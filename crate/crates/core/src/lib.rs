//! Exact decomposition data for the flag permutation module of `GL₃` over a
//! finite local principal ideal ring, together with a brute-force verification
//! engine for the group theory underneath it.
//!
//! The library has two halves that check each other:
//!
//! * **Closed forms** ([`cone`], [`closed_forms`]): the cone
//!   `C = {c ∈ N₀³ : c₁, c₂ ≤ c₃ ≤ c₁ + c₂}` indexing the summands `V_c` of
//!   `C[GL₃(O/π^ℓ)/B]`, the invariants `λ, κ, μ`, the equivalence relation on
//!   summands, and polynomial dimension/multiplicity/zeta data in the residue
//!   cardinality `q`.
//! * **Brute force** ([`ring`], [`twisted`], [`chars`], [`spectral`],
//!   [`gl3`]): finite local rings `O_m` in two backends, the twisted Heisenberg
//!   groups `B^δ_m` and `E^δ`, a generic character engine (conjugacy classes,
//!   induction, Mackey double cosets), the orbit/stabilizer analysis of the
//!   spectral decomposition, and a matrix oracle inside `GL₃(Z/p^ℓ)` that ties
//!   the twisted groups back to congruence subgroups.
//!
//! Everything is exact: character values are floating-point roots of unity, but
//! every integer-valued aggregate (inner product, Hom dimension, multiplicity)
//! must round to an integer within `1e-6` or the operation fails loudly.

pub mod chars;
pub mod closed_forms;
pub mod cone;
pub mod gl3;
pub mod poly;
pub mod report;
pub mod ring;
pub mod spectral;
pub mod twisted;

pub use cone::ConePoint;
pub use poly::Poly;
pub use report::{Report, Status};
pub use ring::{Backend, Elem, RingCtx};

/// Library-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("enumeration size {needed} exceeds bound {bound} (override with PSDEC_BOUND)")]
    BoundExceeded { needed: u64, bound: u64 },
    #[error("ring context mismatch: operands come from different rings")]
    ContextMismatch,
    #[error("group operation is not commutative")]
    NotAbelian,
    #[error("element set is not closed under the group operation")]
    NotClosed,
    #[error("aggregate {0} does not round to an integer within 1e-6")]
    NonIntegral(f64),
    #[error("({0},{1},{2}) is not a point of the cone C")]
    InvalidConePoint(u32, u32, u32),
    #[error("integer overflow in numeric evaluation")]
    Overflow,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Hard cap on conjugacy-class computations; groups larger than this are
/// refused rather than silently ground through.
pub const CLASS_BOUND: usize = 30_000;

/// Enumeration bound for ring/group element counts.
///
/// Defaults to `10^6`; override with the `PSDEC_BOUND` environment variable.
pub fn enumeration_bound() -> u64 {
    std::env::var("PSDEC_BOUND")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1_000_000)
}

pub(crate) fn check_bound(needed: u64) -> Result<()> {
    let bound = enumeration_bound();
    if needed > bound {
        Err(Error::BoundExceeded { needed, bound })
    } else {
        Ok(())
    }
}
