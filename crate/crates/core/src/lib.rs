pub mod bicovariant;
pub mod braiding;
pub mod error;
pub mod group;
pub mod hopf;
pub mod instances;
pub mod linalg;
pub mod metric;
pub mod report;
pub mod scalar;
pub mod structure;
pub mod suite;
pub mod twist;

pub use bicovariant::{build_bimodule, BicovBimodule, BimElement, TensorSqElement, YdModule};
pub use braiding::{construct_braiding, verify_braiding, Braiding};
pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use hopf::{convolution, convolution_inverse, verify_hopf, Element, Functional2, HopfAlgebra};
pub use instances::{builtin, load, Instance, InstanceSpec, BUILTINS};
pub use linalg::{contract, Matrix, Tensor, Tensor3};
pub use metric::{check_metric, enumerate_biinvariant, BiinvariantSpace, Metric};
pub use report::{Check, Report, Status};
pub use scalar::{Cyclotomic, Rational};
pub use structure::{BicovStructure, RightBicovModule};
pub use suite::{run, Command, Options};
pub use twist::{twist_algebra, twist_bimodule, verify_cocycle, Cocycle, Xi};
