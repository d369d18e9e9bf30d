//! Sparse matrices over `Q(q)` and operators on tensor powers `V^{⊗p}`.

pub mod echelon;
mod matrix;
mod operator;

pub use echelon::Echelon;
pub use matrix::Matrix;
pub use operator::{
    partial_trace, place, rank_kernel, ContravariantTensor, CovariantTensor, RankKernel, TensorOperator,
};
