use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("structure constants violate antisymmetry at c[{k}][{i}][{j}]")]
    AntisymmetryViolation { k: usize, i: usize, j: usize },

    #[error("Jacobi identity fails for basis triple ({i}, {j}, {l})")]
    JacobiViolation { i: usize, j: usize, l: usize },

    #[error("Killing form is degenerate; kernel vector supported on basis indices {witness:?}")]
    DegenerateKillingForm { witness: Vec<usize> },

    #[error("unsupported parameter n = {n} for family {family}")]
    UnsupportedParameter { family: String, n: usize },

    #[error("structure constant index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis vectors are linearly dependent")]
    LinearDependence,

    #[error("subspace is not closed under the bracket (basis pair {i}, {j})")]
    NotClosed { i: usize, j: usize },

    #[error("invalid declared Levi split: {0}")]
    InvalidSplit(String),

    #[error(
        "could not split off a rational Levi complement ({0}); \
         supply levi_basis and unipotent_radical_basis explicitly"
    )]
    NotAlgebraicSubalgebra(String),

    #[error("element is not semisimple: ad has a repeated root in its minimal polynomial")]
    NotSemisimple,

    #[error("ad has an irrational eigenvalue (irreducible factor of degree {factor_degree})")]
    IrrationalEigenvalue { factor_degree: usize },

    #[error("torus elements {i} and {j} do not commute")]
    NonCommutingTorus { i: usize, j: usize },

    #[error("acting subalgebra is not reductive")]
    NonReductiveActingAlgebra,

    #[error("input subalgebra is not reductive")]
    NotReductiveInput,

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("cannot parse rational number {text:?}")]
    RationalParse { text: String },

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}
