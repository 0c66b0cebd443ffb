pub mod linear;
pub mod model;
pub mod quadrature;
pub mod ode;
pub mod energy;
pub mod fit;
pub mod spectral;
pub mod scenario;
