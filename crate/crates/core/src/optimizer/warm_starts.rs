//! Starting configurations worth trying before random restarts.

use crate::measurement::{computational_basis, eigenbasis, OrthonormalBasis, ProductMeasurement};
use crate::qstate::{BipartiteState, Subsystem};

/// Computational pair and the eigenbases of both marginals.
pub fn generic(state: &BipartiteState) -> Vec<ProductMeasurement> {
    let (na, nb) = state.dims();
    vec![
        ProductMeasurement::computational(na, nb),
        ProductMeasurement::new(
            eigenbasis(&state.partial_trace(Subsystem::A)),
            eigenbasis(&state.partial_trace(Subsystem::B)),
        ),
    ]
}

/// Generic starts restricted to one side.
pub fn generic_one_sided(state: &BipartiteState, side: Subsystem) -> Vec<OrthonormalBasis> {
    vec![
        computational_basis(state.dim(side)),
        eigenbasis(&state.partial_trace(side)),
    ]
}

/// Identical bases on both sides, which the Werner family favours: the computational
/// pair and one seeded Haar pair `(U, U)`.
pub fn werner(m: usize, seed: u64) -> Vec<ProductMeasurement> {
    let u = OrthonormalBasis::random(m, seed);
    vec![
        ProductMeasurement::computational(m, m),
        ProductMeasurement::new(u.clone(), u),
    ]
}

/// Conjugate bases `(U, Ū)`, which the isotropic family favours.
pub fn isotropic(m: usize, seed: u64) -> Vec<ProductMeasurement> {
    let u = OrthonormalBasis::random(m, seed);
    vec![
        ProductMeasurement::computational(m, m),
        ProductMeasurement::new(u.clone(), u.conjugate()),
    ]
}
