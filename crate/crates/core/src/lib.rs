pub mod galerkin;
pub mod linalg;
pub mod moments;
pub mod poly;
pub mod quadrature;
pub mod scalar;
pub mod weight;
