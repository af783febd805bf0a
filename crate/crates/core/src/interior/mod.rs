//! Interior symbol calculus.

mod engine;
mod index;
mod scalar;

pub use engine::{interior_densities, InteriorEngine, InteriorError};
pub use scalar::{form_contractions, scalar_like};
pub use index::{
    frak_c, frak_c_hat, index_multisets, index_sets, multiset_orderings, ConstantSigns, FrakC, IndexComposition,
};
