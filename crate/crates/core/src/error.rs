use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vector is not in isotropic space: <X, p> = {0:e}")]
    NotIsotropic(f64),

    #[error("matrix does not fix p (defect {0:e})")]
    NotParabolic(f64),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("z = {re} + {im}i is within pole tolerance of h")]
    Pole { re: f64, im: f64 },

    #[error("metric degenerate at ({u}, {v}): conformal factor {factor:e}")]
    DegenerateMetric { u: f64, v: f64, factor: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("{0} is identically zero; axial direction undefined")]
    IdenticallyZero(&'static str),
}
