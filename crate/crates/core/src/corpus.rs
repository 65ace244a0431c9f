//! Ready-made algebras: an n-homogeneous algebra together with its dual and the
//! graded algebras modules are built over.

use std::sync::Arc;

use crate::algebra::{build_dual, build_slices, AlgebraSlices, GradedAlgebra, Presentation};
use crate::error::Result;
use crate::linalg::{Field, DEFAULT_MODULUS};
use crate::quiver::{PathElement, Quiver};

/// Λ, Λ^! and the algebras derived from them, each computed through a common window.
#[derive(Debug, Clone)]
pub struct AlgebraBundle {
    pub pres: Presentation,
    pub dual_pres: Presentation,
    pub lambda_slices: Arc<AlgebraSlices>,
    pub dual_slices: Arc<AlgebraSlices>,
    /// Λ as a graded algebra generated by arrows.
    pub lambda: Arc<GradedAlgebra>,
    /// Λ^!.
    pub dual: Arc<GradedAlgebra>,
    /// Λ^!_U.
    pub u: Arc<GradedAlgebra>,
    /// E, the dual regraded by δ.
    pub e: Arc<GradedAlgebra>,
}

impl AlgebraBundle {
    /// Slices of both algebras through degree `window` (at least `n`).
    pub fn new(pres: Presentation, window: usize) -> Result<Self> {
        let window = window.max(pres.n());
        let lambda_slices = Arc::new(build_slices(&pres, window)?);
        let (dual_pres, dual_slices) = build_dual(&pres, window)?;
        let dual_slices = Arc::new(dual_slices);
        Ok(AlgebraBundle {
            lambda: Arc::new(GradedAlgebra::path(lambda_slices.clone())),
            dual: Arc::new(GradedAlgebra::path(dual_slices.clone())),
            u: Arc::new(GradedAlgebra::u_support(dual_slices.clone())),
            e: Arc::new(GradedAlgebra::yoneda(dual_slices.clone())),
            pres,
            dual_pres,
            lambda_slices,
            dual_slices,
        })
    }

    /// The same construction for the opposite algebra `Λ^op`; graded duals of modules
    /// over this bundle's algebras live over the opposite bundle's.
    pub fn opposite(&self) -> Result<Self> {
        Self::new(self.pres.opposite(), self.lambda_slices.top())
    }

    pub fn n(&self) -> usize {
        self.pres.n()
    }

    pub fn field(&self) -> Field {
        self.pres.field()
    }
}

pub fn default_field() -> Field {
    Field::new(DEFAULT_MODULUS).expect("prime")
}

/// `KQ / <Q_n>` for the quiver with one vertex and `loops` loops.
pub fn truncated_loops(field: Field, loops: usize, n: usize) -> Result<Presentation> {
    let names = ["a", "b", "c", "d"];
    let names: Vec<String> = if loops == 1 {
        vec!["a".into()]
    } else if loops == 2 {
        vec!["x".into(), "y".into()]
    } else {
        names.iter().take(loops).map(|s| s.to_string()).collect()
    };
    let triples: Vec<(&str, usize, usize)> = names.iter().map(|s| (s.as_str(), 0, 0)).collect();
    Presentation::truncated(field, Quiver::from_triples(1, &triples)?, n)
}

/// `K<x, y> / (xy - yx)`.
pub fn commutative_two_loop(field: Field) -> Result<Presentation> {
    let q = Quiver::from_triples(1, &[("x", 0, 0), ("y", 0, 0)])?;
    let rel = PathElement::from_terms(field, 2, [(q.parse_path("x.y")?, 1), (q.parse_path("y.x")?, -1)])?;
    Presentation::new(field, q, 2, vec![rel], None)
}
