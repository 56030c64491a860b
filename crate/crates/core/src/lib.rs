pub mod branch;
pub mod decider;
pub mod forms;
pub mod json;
pub mod poly;
pub mod ring;
pub mod semigroup;
pub mod series;
pub mod strata;
pub mod valueset;
