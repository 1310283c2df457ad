//! Numeric containers shared by every other module: the fixed design,
//! dense hat operators, random design generators and seed handling.

mod design;
mod hat;
mod rng;

pub use design::{
    sample_ar_design, sample_uniform_design, ARDesignSpec, DesignMatrix, UniformDesignSpec,
};
pub use hat::{trace, HatOperator};
pub use rng::{derive_seed, rng_from_seed, BoostRng, RNG_ALGORITHM};
