pub mod cli;
pub mod coords;
pub mod error;
pub mod eval;
pub mod heun;
pub mod mathieu;
pub mod matching;
pub mod poly;
pub mod quadrature;
pub mod record;
pub mod roots;
pub mod scalar;
pub mod scan;
pub mod separation;
pub mod symmetric;
pub mod tridiag;
