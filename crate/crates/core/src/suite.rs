//! Verification suites run by the command-line tool. Each suite builds what
//! it needs from an [`Instance`] and records checks in a fixed order, so the
//! report does not depend on how the work was scheduled.

use std::str::FromStr;
use std::time::Instant;

use crate::bicovariant::{build_bimodule, BicovBimodule};
use crate::braiding::{construct_braiding, verify_braiding, Braiding};
use crate::error::{Error, Result};
use crate::hopf::verify_hopf;
use crate::instances::Instance;
use crate::metric::{
    beggs_majid_flags, check_bi_invariant, check_gs_identity, check_left_invariant, check_metric, check_right_invariant,
    enumerate_biinvariant, ev_coev_check, Metric,
};
use crate::report::{ensure, Outcome, Report, Status};
use crate::twist::{
    check_solution_spaces, check_twisted_bimodule, check_twisted_flip, check_vg_module, check_vg_twist, check_xi,
    check_xi_lemma, cocycle_report, deform_metric, metric_closed_form, metric_twist, sigma_twist, twist_bimodule, untwist,
    untwist_roundtrip, verify_cocycle, xi,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Braiding,
    Metrics,
    Twist,
    All,
}

impl Command {
    pub const SUITES: [Command; 4] = [Command::Verify, Command::Braiding, Command::Metrics, Command::Twist];

    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Braiding => "braiding",
            Command::Metrics => "metrics",
            Command::Twist => "twist",
            Command::All => "all",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verify" => Ok(Command::Verify),
            "braiding" => Ok(Command::Braiding),
            "metrics" => Ok(Command::Metrics),
            "twist" => Ok(Command::Twist),
            "all" => Ok(Command::All),
            other => Err(Error::validation("command", format!("unknown command {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub parallel: bool,
    pub timings: bool,
    /// shuffles the candidate order of the bi-invariant metric search
    pub seed: Option<u64>,
}

/// Runs a command on an instance. `all` runs the suites listed in the
/// instance's task list, in registry order.
pub fn run(cmd: Command, inst: &Instance, opts: Options) -> Report {
    let suites: Vec<Command> = match cmd {
        Command::All => Command::SUITES
            .into_iter()
            .filter(|c| inst.spec.has_task(c.name()))
            .collect(),
        c => vec![c],
    };
    let parts: Vec<Report> = if opts.parallel {
        use rayon::prelude::*;
        suites.par_iter().map(|c| run_one(*c, inst, opts)).collect()
    } else {
        suites.iter().map(|c| run_one(*c, inst, opts)).collect()
    };
    let mut r = Report::new(inst.spec.name.clone());
    for p in parts {
        r.absorb("", p);
    }
    r
}

fn run_one(cmd: Command, inst: &Instance, opts: Options) -> Report {
    let mut rec = Recorder::new(&inst.spec.name, opts.timings);
    match cmd {
        Command::Verify => verify_suite(&mut rec, inst),
        Command::Braiding => braiding_suite(&mut rec, inst),
        Command::Metrics => metrics_suite(&mut rec, inst, opts.seed),
        Command::Twist => twist_suite(&mut rec, inst),
        Command::All => unreachable!("expanded by run"),
    }
    rec.report
}

struct Recorder {
    report: Report,
    timings: bool,
}

impl Recorder {
    fn new(instance: &str, timings: bool) -> Self {
        Recorder {
            report: Report::new(instance),
            timings,
        }
    }

    fn check(&mut self, id: &str, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = self.timings.then(|| start.elapsed());
        self.report.record_timed(id, outcome, elapsed);
    }

    /// Records the checks of a sub-report under `prefix`.
    fn absorb(&mut self, prefix: &str, f: impl FnOnce() -> Report) {
        let start = Instant::now();
        let mut sub = f();
        if self.timings {
            // the whole sub-report is timed as one unit, on its last check
            if let Some(last) = sub.checks.last_mut() {
                last.micros = Some(start.elapsed().as_micros() as u64);
            }
        }
        self.report.absorb(prefix, sub);
    }

    fn fail(&mut self, id: &str, e: &Error) {
        self.report.record(id, Err(e.to_string()));
    }

    fn finding(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.report.finding(key, value);
    }
}

fn module_and_braiding(rec: &mut Recorder, inst: &Instance, prefix: &str) -> Option<(BicovBimodule, Braiding)> {
    let m = match build_bimodule(&inst.yd) {
        Ok(m) => m,
        Err(e) => {
            rec.fail(&format!("{prefix}.bimodule"), &e);
            return None;
        }
    };
    match construct_braiding(&m) {
        Ok(b) => Some((m, b)),
        Err(e) => {
            rec.fail(&format!("{prefix}.braiding"), &e);
            None
        }
    }
}

fn verify_suite(rec: &mut Recorder, inst: &Instance) {
    rec.absorb("hopf", || verify_hopf(&inst.host));
    rec.absorb("", || inst.yd.verify());
    match build_bimodule(&inst.yd) {
        Ok(m) => rec.absorb("bimodule", || m.verify()),
        Err(e) => rec.fail("bimodule.build", &e),
    }
    rec.absorb("", || cocycle_report(&inst.host, &inst.gamma).0);
}

fn braiding_suite(rec: &mut Recorder, inst: &Instance) {
    let m = match build_bimodule(&inst.yd) {
        Ok(m) => m,
        Err(e) => return rec.fail("braiding.bimodule", &e),
    };
    let b = match construct_braiding(&m) {
        Ok(b) => b,
        Err(e) => return rec.fail("braiding.construct", &e),
    };
    rec.absorb("", || verify_braiding(&b));
    rec.finding("sigma squared is identity", b.squared_is_identity());
}

fn metrics_suite(rec: &mut Recorder, inst: &Instance, seed: Option<u64>) {
    let Some((_, b)) = module_and_braiding(rec, inst, "metric") else {
        return;
    };
    if let Some(gm) = &inst.metric {
        match Metric::new(&b, gm.clone()) {
            Ok(g) => metric_checks(rec, &g),
            Err(e) => rec.fail("metric.shape", &e),
        }
    } else {
        rec.finding("metric", "none given");
    }
    match enumerate_biinvariant(&b, seed) {
        Ok(space) => {
            rec.check("metric.enumeration.basis_solves_constraints", || {
                for (k, m) in space.basis.iter().enumerate() {
                    let g = Metric::from_scalars(&b, m).map_err(|e| e.to_string())?;
                    let symmetric = check_metric(&g).check("metric.symmetric").map(|c| c.status == Status::Pass);
                    if !check_bi_invariant(&g) || symmetric != Some(true) {
                        return Err(format!("basis element {}", k + 1));
                    }
                }
                Ok(())
            });
            rec.finding("biinvariant space dimension", space.basis.len());
            match &space.representative {
                Some((coeffs, g)) => {
                    rec.finding("nondegenerate representative coefficients", coeffs.clone());
                    rec.finding("nondegenerate representative", crate::instances::matrix_to_json(g));
                }
                None => rec.finding("nondegenerate representative", "none found"),
            }
        }
        Err(e) => rec.fail("metric.enumerate_biinvariant", &e),
    }
}

fn metric_checks(rec: &mut Recorder, g: &Metric) {
    rec.absorb("", || check_metric(g));
    let left = check_left_invariant(g);
    let right = check_right_invariant(g);
    rec.check("metric.invariance_characterizations_agree", || match (&left, &right) {
        (Ok(_), Ok(_)) => Ok(()),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    });
    let bi = check_bi_invariant(g);
    rec.finding("left-invariant", *left.as_ref().unwrap_or(&false));
    rec.finding("right-invariant", *right.as_ref().unwrap_or(&false));
    rec.finding("bi-invariant", bi);
    rec.check("metric.bi_invariance_criterion", || {
        let both = matches!((&left, &right), (Ok(true), Ok(true)));
        ensure(both == bi, || format!("left and right invariance is {both}, the R-criterion says {bi}"))
    });
    rec.check("metric.beggs_majid", || match beggs_majid_flags(g) {
        Ok((w, s)) => ensure(w == s, || format!("wedge(h) = 0 is {w}, g o sigma = g is {s}")),
        Err(e) => Err(e.to_string()),
    });
    if bi {
        rec.check("metric.gs_identity", || check_gs_identity(g));
        match check_vg_module(g) {
            Ok(r) => rec.absorb("", || r),
            Err(e) => rec.fail("vg", &e),
        }
    }
    if g.scalar_matrix().is_some() && check_metric(g).passed() {
        match ev_coev_check(g) {
            Ok(r) => rec.absorb("", || r),
            Err(e) => rec.fail("ev_coev", &e),
        }
    }
}

fn twist_suite(rec: &mut Recorder, inst: &Instance) {
    let c = match verify_cocycle(&inst.host, &inst.gamma) {
        Ok(c) => c,
        Err(e) => return rec.fail("twist.cocycle", &e),
    };
    let ag = match c.twisted_host() {
        Ok(h) => h,
        Err(e) => return rec.fail("twist.algebra", &e),
    };
    rec.absorb("twist.hopf", || verify_hopf(&ag));
    rec.finding("twisted algebra commutative", ag.is_commutative());
    rec.finding("twisted algebra equals host", *ag == *inst.host);
    let Some((m, b)) = module_and_braiding(rec, inst, "twist") else {
        return;
    };
    let mg = match twist_bimodule(&m, &c) {
        Ok(x) => x,
        Err(e) => return rec.fail("twist.bimodule", &e),
    };
    rec.absorb("", || check_twisted_bimodule(&m, &mg));
    let x = match xi(&m, &mg, &c) {
        Ok(x) => x,
        Err(e) => return rec.fail("twist.xi", &e),
    };
    rec.absorb("twist", || check_xi(&m, &mg, &c, &x));
    rec.check("twist.xi.lemma", || check_xi_lemma(&m, &mg, &c, &x));
    let bg = match construct_braiding(&mg) {
        Ok(bg) => bg,
        Err(e) => return rec.fail("twist.braiding", &e),
    };
    let sg = sigma_twist(&b, &x);
    rec.check("sigma_twist == braiding(twist_bimodule)", || {
        let d2 = sg.cols();
        match (0..d2).find(|&j| sg.column(j) != bg.full().column(j)) {
            None => Ok(()),
            Some(j) => Err(format!("column {j}")),
        }
    });
    rec.check("twist.sigma.flip", || check_twisted_flip(&mg, &sg));
    rec.check("twist.sigma.square", || {
        ensure(!b.squared_is_identity() || bg.squared_is_identity(), || "sigma^2 = 1 but sigma_gamma^2 != 1".into())
    });
    rec.finding("twisted sigma squared is identity", bg.squared_is_identity());
    let u = match untwist(&m, &mg, &c) {
        Ok(u) => u,
        Err(e) => return rec.fail("twist.untwist", &e),
    };
    rec.check("twist.double.algebra", || {
        ensure(*u.module.host().as_ref() == *m.host().as_ref(), || "algebra differs".into())
    });
    rec.check("twist.double.bimodule", || {
        ensure(u.module == m && u.module.presentation() == m.presentation(), || "bimodule differs".into())
    });
    rec.check("twist.double.braiding", || ensure(u.braiding.full() == b.full(), || "braiding differs".into()));
    rec.check("twist.metric.solution_spaces", || match check_solution_spaces(&b, &bg, &x, &u) {
        Ok(o) => o,
        Err(e) => Err(e.to_string()),
    });
    let Some(gm) = &inst.metric else {
        rec.finding("twisted metric", "no metric given");
        return;
    };
    let g = match Metric::new(&b, gm.clone()) {
        Ok(g) => g,
        Err(e) => return rec.fail("twist.metric", &e),
    };
    let gg = match metric_twist(&g, &x, &bg) {
        Ok(gg) => gg,
        Err(e) => return rec.fail("twist.metric", &e),
    };
    rec.check("twist.metric.closed_form", || {
        ensure(metric_closed_form(&g, &c) == gg.gmat(), || "closed form differs from g o xi".into())
    });
    if let Some(s) = gg.scalar_matrix() {
        rec.finding("twisted metric", crate::instances::matrix_to_json(&s));
    }
    let mut inner = check_metric(&gg);
    for c in inner.checks.iter_mut() {
        c.id = format!("twist.{}", c.id);
    }
    rec.absorb("", || inner);
    rec.check("twist.metric.bi_invariant", || {
        ensure(check_bi_invariant(&gg), || "g_gamma is not bi-invariant".into())
    });
    rec.check("twist.metric.invariance", || match (check_left_invariant(&gg), check_right_invariant(&gg)) {
        (Ok(true), Ok(true)) => Ok(()),
        (Ok(l), Ok(r)) => Err(format!("left {l}, right {r}")),
        (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
    });
    rec.check("twist.metric.vg_remark", || match check_vg_twist(&g, &gg, &c) {
        Ok(o) => o,
        Err(e) => Err(e.to_string()),
    });
    rec.check("twist.metric.round_trip", || match untwist_roundtrip(&gg, &u, &x, &bg) {
        Ok(down) => ensure(down.gmat() == g.gmat(), || "untwisting g_gamma does not give g".into()),
        Err(e) => Err(e.to_string()),
    });
    rec.check("twist.double.metric", || match deform_metric(&gg, &u.xi, &u.braiding) {
        Ok(back) => ensure(back.gmat() == g.gmat(), || "metric differs".into()),
        Err(e) => Err(e.to_string()),
    });
}

/// Whether every check of `r` with id starting with `prefix` passed.
pub fn section_passed(r: &Report, prefix: &str) -> bool {
    r.checks
        .iter()
        .filter(|c| c.id.starts_with(prefix))
        .all(|c| c.status == Status::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{builtin, BUILTINS};

    #[test]
    fn all_fixtures_pass_everything() {
        for name in BUILTINS {
            let inst = builtin(name).unwrap().build().unwrap();
            let r = run(Command::All, &inst, Options::default());
            assert!(r.passed(), "{name}\n{}", r.to_text());
        }
    }

    #[test]
    fn parallel_matches_serial() {
        let inst = builtin("FIX-Z4").unwrap().build().unwrap();
        let a = run(Command::All, &inst, Options::default());
        let b = run(
            Command::All,
            &inst,
            Options {
                parallel: true,
                ..Default::default()
            },
        );
        assert_eq!(a, b);
        assert!(a.to_text().contains("sigma_twist == braiding(twist_bimodule): pass"));
    }

    #[test]
    fn no_metric_is_a_finding() {
        let inst = builtin("FIX-Z4-1dim").unwrap().build().unwrap();
        let r = run(Command::Metrics, &inst, Options::default());
        assert!(r.passed());
        assert!(r.to_text().contains("biinvariant space dimension: 0"));
    }
}
