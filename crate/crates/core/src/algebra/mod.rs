//! Exact arithmetic: rationals, sparse multivariate polynomials, univariate
//! polynomials in `s`, gcds and rational roots.

pub mod gcd;
pub mod linalg;
pub mod mpoly;
pub mod rat;
pub mod roots;
pub mod upoly;

pub use gcd::{gcd, squarefree_decomposition, squarefree_part};
pub use mpoly::{monomials_up_to, MPoly, Mono};
pub use rat::{q, ParseRatError, Rat};
pub use roots::{rational_roots, RootSplit};
pub use upoly::{SPoly, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("valuation of the zero polynomial is infinite")]
    ZeroValuation,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("cannot divide out a constant")]
    ConstantDivisor,
    #[error("polynomial does not divide exactly")]
    NotDivisible,
}

/// Substitute polynomials for variables by name.
///
/// `names` lists the variables of `p` in order; every one of them must have
/// an image in `assignment`.
pub fn substitute(p: &MPoly, names: &[&str], assignment: &[(&str, MPoly)]) -> Option<MPoly> {
    let images: Option<Vec<MPoly>> = names
        .iter()
        .map(|n| assignment.iter().find(|(k, _)| k == n).map(|(_, v)| v.clone()))
        .collect();
    Some(p.substitute(&images?))
}

/// Exact single division, reporting failure.
pub fn div_exact(p: &MPoly, q: &MPoly) -> Result<MPoly, AlgebraError> {
    if q.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    p.div_exact(q).ok_or(AlgebraError::NotDivisible)
}
