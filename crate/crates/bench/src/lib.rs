//! Shared setup for the criterion benches.

use bicotwist::{build_bimodule, builtin, verify_cocycle, BicovBimodule, Cocycle, Instance};

/// A fixture with its bimodule and verified cocycle already built.
pub struct Prepared {
    pub inst: Instance,
    pub module: BicovBimodule,
    pub cocycle: Cocycle,
}

pub fn prepare(name: &str) -> Prepared {
    let inst = builtin(name).and_then(|s| s.build()).expect("builtin fixture builds");
    let module = build_bimodule(&inst.yd).expect("fixture is Yetter-Drinfeld");
    let cocycle = verify_cocycle(&inst.host, &inst.gamma).expect("fixture cocycle verifies");
    Prepared { inst, module, cocycle }
}
