pub mod analytic;
pub mod chain;
pub mod chord;
pub mod complexes;
pub mod f2;
pub mod report;
pub mod rng;
pub mod simplicial;
pub mod svd;
pub mod trig;
