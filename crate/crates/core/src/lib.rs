//! Numerical and exact verification of the objects in a converse theorem for `GL(2)` over `Q`
//! with root numbers left free: Hecke coefficient sequences, twisted completed L-functions whose
//! root numbers are recovered from the data, Ramanujan-sum twists, and the slash-operator
//! machinery on `Γ_0(N)`.

pub mod arith;
pub mod chargroup;
pub mod coeffs;
pub mod cyclo;
pub mod datasets;
pub mod lfun;
pub mod modular;
pub mod report;
pub mod special;
