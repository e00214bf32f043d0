//! Quadratic resonance phases, the symbol families of the normal-form and
//! energy arguments, bilinear and trilinear pseudoproducts, frequency
//! interaction sets, and brute-force measurements of the phase and multiplier bounds.

pub mod bounds;
pub mod error;
pub mod phase;
pub mod pseudo;
pub mod scan;
pub mod sets;
pub mod symbols;

pub use bounds::{
    multiplier_bound_measure, random_suite, trilinear_bound_measure, trilinear_log2_factor, BoundKind, BoundReport,
    Exponents,
};
pub use error::ResonanceError;
pub use phase::{cubic_phase, phase, phase_inverse, SignPair, SignTriple, RESONANCE_FLOOR};
pub use pseudo::{
    bilinear_apply, bilinear_direct, bilinear_fast, bilinear_with, trilinear_apply, trilinear_with, Path, Pseudo,
    FAST_ABOVE, TRILINEAR_DIRECT_LIMIT,
};
pub use scan::{phase_bound_scan, PhaseScan};
pub use sets::{in_x, in_y, interaction_sets};
pub use symbols::{
    family_a, family_b, family_energy, family_energy_low, family_phase_a, family_phase_quartic, family_quartic,
    quartic_orders, quartic_value, regularity, AFactor, ASymbol, BilinearSymbol, Family, SingularPolicy,
    TrilinearSymbol, ANGLE_SCALE,
};

pub type Bilinear64 = BilinearSymbol<f64>;
pub type Trilinear64 = TrilinearSymbol<f64>;
