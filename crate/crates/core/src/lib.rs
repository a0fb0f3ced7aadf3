//! Exact computations with the generalized graded Hecke algebra of `G(r,1,n)`.

pub mod cherednik;
pub mod criterion;
pub mod cyclo;
pub mod ggha;
pub mod gha_a;
pub mod linalg;
pub mod poly;
pub mod psmod;
pub mod refl_group;
pub mod simplicity;
