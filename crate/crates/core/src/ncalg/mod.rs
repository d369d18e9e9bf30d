//! Free algebras over `Q(q)`, presentations of quantum matrix algebras and the ideal
//! membership oracle that decides identities modulo defining relations.

mod ideal;
mod matrix;
mod parse;
mod poly;
mod present;

pub use ideal::{CentralityCheck, IdealOracle, OracleConfig, Reduction};
pub use matrix::{copies_product, f_copies, scalar_matrix, NCMatrix};
pub use parse::parse_nc;
pub use poly::{Alphabet, NCPolynomial, Word};
pub use present::{
    coproduct, dedup_relations, defining_relations, present, same_span, tensor_elements, tensor_square, Presentation,
    PresentationJson, Source, System,
};
