//! Finitely generated abelian groups, homomorphisms and chain complexes.

mod complex;
mod groups;
mod matrix;
mod snf;
mod sparse;

pub use complex::{ChainComplexFg, Homology};
pub use groups::{AbHom, FgAbGroup, PresentedGroup};
pub use matrix::{Int, IntMatrix};
pub use snf::{invariant_factors, smith_normal_form, ColumnLattice, SmithForm};
pub use sparse::{FreeChainComplex, FreeHomology, SparseMatrix, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AbError {
    #[error("matrix has shape {got:?}, expected {expected:?}")]
    Shape {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("relation {relation} of the source is not sent into the target's relations")]
    IllDefined { relation: usize },
    #[error("maps are not composable")]
    NotComposable,
    #[error("boundary composite into degree {degree} is nonzero")]
    NotAComplex { degree: usize },
    #[error("{groups} groups need {} boundaries, got {boundaries}", groups.saturating_sub(1))]
    Length { groups: usize, boundaries: usize },
}
