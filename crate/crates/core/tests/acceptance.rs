//! Acceptance suite: one line per criterion, exact equality throughout.
//! Runs without the libtest harness so the lines are always printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bicotwist::braiding::braiding_oracle;
use bicotwist::hopf::elem;
use bicotwist::metric::{
    beggs_majid_flags, check_bi_invariant, check_left_invariant, check_right_invariant, dual_basis, ev_coev_check,
    metric_inverse,
};
use bicotwist::twist::{
    check_solution_spaces, check_twisted_bimodule, check_vg_twist, check_xi, check_xi_lemma, deform_metric,
    metric_closed_form, metric_twist, sigma_twist, untwist, untwist_roundtrip, xi,
};
use bicotwist::{
    build_bimodule, builtin, check_metric, construct_braiding, enumerate_biinvariant, twist_bimodule, verify_braiding,
    verify_cocycle, verify_hopf, BicovBimodule, Braiding, Cocycle, Cyclotomic, Element, FiniteGroup, Functional2,
    HopfAlgebra, Instance, Matrix, Metric, BUILTINS,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Fixture {
    name: &'static str,
    inst: Instance,
    module: BicovBimodule,
    braiding: Braiding,
}

fn fixture(name: &'static str) -> Fixture {
    let inst = builtin(name).unwrap().build().unwrap();
    let module = build_bimodule(&inst.yd).unwrap();
    let braiding = construct_braiding(&module).unwrap();
    Fixture {
        name,
        inst,
        module,
        braiding,
    }
}

fn fixtures() -> Vec<Fixture> {
    BUILTINS.iter().map(|n| fixture(n)).collect()
}

fn metric_of(f: &Fixture) -> Option<Metric> {
    f.inst
        .metric
        .as_ref()
        .map(|gm| Metric::new(&f.braiding, gm.clone()).unwrap())
}

/// The fixture's own cocycle and the trivial one.
fn cocycles(f: &Fixture) -> Vec<(&'static str, Cocycle)> {
    let h = &f.inst.host;
    vec![
        ("fixture", verify_cocycle(h, &f.inst.gamma).unwrap()),
        ("trivial", verify_cocycle(h, &Functional2::counit(h)).unwrap()),
    ]
}

fn random_scalar(rng: &mut ChaCha8Rng, order: u32) -> Cyclotomic {
    let k = rng.gen_range(-2i64..=2);
    if k == 0 {
        return Cyclotomic::zero();
    }
    let root = Cyclotomic::root_of_unity(order, rng.gen_range(0..order as i64)).unwrap();
    &Cyclotomic::from_int(k) * &root
}

fn random_element(rng: &mut ChaCha8Rng, h: &HopfAlgebra) -> Element {
    (0..h.dim()).map(|_| random_scalar(rng, h.order())).collect()
}

/// Random right-linear `g`: scalar entries when `scalar`, arbitrary ones otherwise.
fn random_gmat(rng: &mut ChaCha8Rng, f: &Fixture, scalar: bool) -> Vec<Vec<Element>> {
    let h = f.module.host();
    let d = f.module.rank();
    (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if scalar {
                        h.scalar(&random_scalar(rng, h.order()))
                    } else {
                        random_element(rng, h)
                    }
                })
                .collect()
        })
        .collect()
}

/// A basis of right-linear `g` with `g o sigma = g`, as `gmat`s, found by
/// solving the symmetry condition on all `d^2 n` coordinates.
fn symmetric_gmats(f: &Fixture) -> Vec<Vec<Vec<Element>>> {
    let h = f.module.host();
    let (n, d) = (h.dim(), f.module.rank());
    let unknowns = d * d * n;
    let unit_gmat = |u: usize| -> Vec<Vec<Element>> {
        let (ij, k) = (u / n, u % n);
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i * d + j == ij { h.basis(k) } else { h.zero() })
                    .collect()
            })
            .collect()
    };
    let mut cols = Vec::with_capacity(unknowns);
    for u in 0..unknowns {
        let g = Metric::new(&f.braiding, unit_gmat(u)).unwrap();
        let gm = g.map();
        let defect = gm.matmul(f.braiding.full()).unwrap().sub(&gm).unwrap();
        cols.push(defect.entries().to_vec());
    }
    let rows = cols[0].len();
    let system = Matrix::from_columns(rows, &cols).unwrap();
    let kernel = system.kernel();
    (0..kernel.cols())
        .map(|c| {
            (0..d)
                .map(|i| (0..d).map(|j| (0..n).map(|k| kernel.get((i * d + j) * n + k, c).clone()).collect()).collect())
                .collect()
        })
        .collect()
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn c1() -> Result<(), String> {
    let mut algebras: Vec<HopfAlgebra> = Vec::new();
    for name in ["Z2", "Z4", "Z2xZ2", "S3"] {
        let g = FiniteGroup::named(name).map_err(|e| e.to_string())?;
        algebras.push(HopfAlgebra::group_algebra(&g, 1).map_err(|e| e.to_string())?);
        algebras.push(HopfAlgebra::function_algebra(&g, 1).map_err(|e| e.to_string())?);
    }
    for name in BUILTINS {
        let inst = builtin(name).unwrap().build().unwrap();
        let c = verify_cocycle(&inst.host, &inst.gamma).map_err(|e| format!("{name}: {e}"))?;
        algebras.push((*c.twisted_host().map_err(|e| e.to_string())?).clone());
    }
    for a in &algebras {
        let r = verify_hopf(a);
        check(r.checks.len() >= 7, || format!("{}: only {} checks", a.name(), r.checks.len()))?;
        if let Some(c) = r.first_failure() {
            return Err(format!("{}: {} [{:?}]", a.name(), c.id, c.witness));
        }
    }
    Ok(())
}

fn c2() -> Result<(), String> {
    for f in fixtures() {
        let r = verify_braiding(&f.braiding);
        for id in [
            "braiding.defining_property",
            "braiding.left_linear",
            "braiding.right_linear",
            "braiding.left_covariant",
            "braiding.right_covariant",
            "braiding.invertible",
            "braiding.braid_equation",
            "braiding.uniqueness",
        ] {
            let c = r.check(id).ok_or_else(|| format!("{}: {id} missing", f.name))?;
            check(c.witness.is_none(), || format!("{}: {id} [{:?}]", f.name, c.witness))?;
        }
        let (dim, _) = braiding_oracle(&f.module).map_err(|e| e.to_string())?;
        check(dim == 0, || format!("{}: solution space dimension {dim}", f.name))?;
    }
    Ok(())
}

fn c3() -> Result<(), String> {
    let f = fixture("FIX-Z4");
    let g = Metric::from_scalars(&f.braiding, &Matrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap()).unwrap();
    let r = check_metric(&g);
    for id in ["metric.nondegenerate", "metric.nondegenerate_left_slot"] {
        let c = r.check(id).ok_or_else(|| format!("{id} missing"))?;
        check(c.witness.is_none(), || format!("{id} [{:?}]", c.witness))?;
    }
    check(g.vg_values().kernel().cols() == 0, || "V_g has a kernel".into())?;
    let gs = g.scalar_matrix().ok_or("g_ij not scalar")?;
    check(gs.rank() == 2, || "(g_ij) singular".into())?;
    let inv = metric_inverse(&g).map_err(|e| e.to_string())?;
    check(inv == Matrix::from_ints(&[&[0, 1], &[1, 0]]).unwrap(), || "g^ij".into())?;
    check(gs.matmul(&inv).unwrap().is_identity(), || "g g^-1 != 1".into())?;
    let db = dual_basis(&f.module);
    db.check_duality()?;
    db.check_reconstruction()?;
    Ok(())
}

fn c4() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut yes, mut no) = (0, 0);
    for f in fixtures() {
        for k in 0..50 {
            let scalar = k % 2 == 0;
            let g = Metric::new(&f.braiding, random_gmat(&mut rng, &f, scalar)).unwrap();
            // both characterizations are evaluated; disagreement is an error
            let verdict = check_left_invariant(&g).map_err(|e| format!("{} sample {k}: {e}", f.name))?;
            check_right_invariant(&g).map_err(|e| format!("{} sample {k}: {e}", f.name))?;
            if scalar {
                check(verdict, || format!("{}: scalar g not left-invariant", f.name))?;
            }
            if verdict {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    check(yes > 0 && no > 0, || format!("degenerate sample: {yes} invariant, {no} not"))
}

fn c5() -> Result<(), String> {
    let z4 = fixture("FIX-Z4");
    let space = enumerate_biinvariant(&z4.braiding, None).map_err(|e| e.to_string())?;
    check(space.basis.len() == 1, || format!("FIX-Z4 dimension {}", space.basis.len()))?;
    let b = &space.basis[0];
    check(
        b.get(0, 0).is_zero() && b.get(1, 1).is_zero() && !b.get(0, 1).is_zero() && b.get(0, 1) == b.get(1, 0),
        || format!("FIX-Z4 basis {:?}", b.to_strings()),
    )?;
    check(space.representative.is_some(), || "no nondegenerate representative".into())?;
    let one = fixture("FIX-Z4-1dim");
    let space = enumerate_biinvariant(&one.braiding, None).map_err(|e| e.to_string())?;
    check(space.basis.is_empty(), || format!("FIX-Z4-1dim dimension {}", space.basis.len()))?;
    check(space.representative.is_none(), || "representative in the zero space".into())
}

fn c6() -> Result<(), String> {
    let mut seen = 0;
    for f in fixtures() {
        let Some(g) = metric_of(&f) else { continue };
        let r = ev_coev_check(&g).map_err(|e| format!("{}: {e}", f.name))?;
        for prefix in ["snake.left", "snake.right", "ev.left_covariant", "ev.right_covariant", "coev.left_covariant", "coev.right_covariant"] {
            let c = r.check(prefix).ok_or_else(|| format!("{}: {prefix} missing", f.name))?;
            check(c.witness.is_none(), || format!("{}: {prefix} [{:?}]", f.name, c.witness))?;
        }
        if let Some(c) = r.first_failure() {
            return Err(format!("{}: {} [{:?}]", f.name, c.id, c.witness));
        }
        seen += 1;
    }
    check(seen == 5, || format!("{seen} fixture metrics"))
}

fn c7() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fs = fixtures();
    let symmetric: Vec<_> = fs.iter().map(symmetric_gmats).collect();
    let (mut both_true, mut both_false, mut nonscalar) = (0, 0, 0);
    for k in 0..100 {
        let idx = k % fs.len();
        let f = &fs[idx];
        let h = f.module.host();
        let gmat = match (k / fs.len()) % 3 {
            0 => random_gmat(&mut rng, f, true),
            1 => random_gmat(&mut rng, f, false),
            _ => {
                // random combination of symmetric solutions
                let d = f.module.rank();
                let mut g = vec![vec![h.zero(); d]; d];
                for basis in &symmetric[idx] {
                    let s = random_scalar(&mut rng, h.order());
                    for i in 0..d {
                        for j in 0..d {
                            elem::add_scaled(&mut g[i][j], &s, &basis[i][j]);
                        }
                    }
                }
                g
            }
        };
        let g = Metric::new(&f.braiding, gmat).unwrap();
        if g.scalar_matrix().is_none() {
            nonscalar += 1;
        }
        let (wedge_zero, symmetric) = beggs_majid_flags(&g).map_err(|e| e.to_string())?;
        check(wedge_zero == symmetric, || {
            format!("{} sample {k}: wedge(h) = 0 is {wedge_zero}, g o sigma = g is {symmetric}", f.name)
        })?;
        if wedge_zero {
            both_true += 1;
        } else {
            both_false += 1;
        }
    }
    check(both_true > 0 && both_false > 0 && nonscalar > 0, || {
        format!("sample lacks variety: {both_true} true, {both_false} false, {nonscalar} non-scalar")
    })
}

fn c8() -> Result<(), String> {
    for f in fixtures() {
        for (which, c) in cocycles(&f) {
            let tag = format!("{} ({which} cocycle)", f.name);
            let (m, b) = (&f.module, &f.braiding);
            let mg = twist_bimodule(m, &c).map_err(|e| format!("{tag}: {e}"))?;
            let tb = check_twisted_bimodule(m, &mg);
            if let Some(x) = tb.first_failure() {
                return Err(format!("{tag}: {} [{:?}]", x.id, x.witness));
            }
            let x = xi(m, &mg, &c).map_err(|e| format!("{tag}: {e}"))?;
            if let Some(ch) = check_xi(m, &mg, &c, &x).first_failure() {
                return Err(format!("{tag}: {} [{:?}]", ch.id, ch.witness));
            }
            let bg = construct_braiding(&mg).map_err(|e| format!("{tag}: {e}"))?;
            // (a)
            let sg = sigma_twist(b, &x);
            check(&sg == bg.full(), || format!("{tag}: (a) sigma_twist differs from the braiding of M_gamma"))?;
            check(verify_braiding(&bg).passed(), || format!("{tag}: (a) twisted braiding fails verification"))?;
            // (b)
            if b.squared_is_identity() {
                let sq = sg.matmul(&sg).unwrap();
                check(sq.is_identity(), || format!("{tag}: (b) sigma^2 = 1 but sigma_gamma^2 != 1"))?;
            }
            let u = untwist(m, &mg, &c).map_err(|e| format!("{tag}: (e) {e}"))?;
            // (e) double twist on structure tensors
            check(**u.module.host() == **m.host(), || format!("{tag}: (e) algebra"))?;
            check(u.module.presentation() == m.presentation(), || format!("{tag}: (e) bimodule"))?;
            check(u.braiding.full() == b.full(), || format!("{tag}: (e) braiding"))?;
            // (f)
            match check_solution_spaces(b, &bg, &x, &u).map_err(|e| e.to_string())? {
                Ok(()) => {}
                Err(w) => return Err(format!("{tag}: (f) {w}")),
            }
            let Some(g) = metric_of(&f) else { continue };
            // (c)
            let gg = metric_twist(&g, &x, &bg).map_err(|e| format!("{tag}: (c) {e}"))?;
            let r = check_metric(&gg);
            if let Some(ch) = r.first_failure() {
                return Err(format!("{tag}: (c) {} [{:?}]", ch.id, ch.witness));
            }
            check(check_bi_invariant(&gg), || format!("{tag}: (c) not bi-invariant"))?;
            let l = check_left_invariant(&gg).map_err(|e| e.to_string())?;
            let rr = check_right_invariant(&gg).map_err(|e| e.to_string())?;
            check(l && rr, || format!("{tag}: (c) invariance {l} {rr}"))?;
            // (d)
            match check_vg_twist(&g, &gg, &c).map_err(|e| e.to_string())? {
                Ok(()) => {}
                Err(w) => return Err(format!("{tag}: (d) {w}")),
            }
            // (e) metric round trips
            let down = untwist_roundtrip(&gg, &u, &x, &bg).map_err(|e| format!("{tag}: (e) {e}"))?;
            check(down.gmat() == g.gmat(), || format!("{tag}: (e) untwisted metric differs"))?;
            let back = deform_metric(&gg, &u.xi, &u.braiding).map_err(|e| e.to_string())?;
            let again = deform_metric(&back, &x, &bg).map_err(|e| e.to_string())?;
            check(again.gmat() == gg.gmat(), || format!("{tag}: (e) ((g')_gammabar)_gamma != g'"))?;
            if c.is_trivial() {
                check(gg.gmat() == g.gmat() && mg == *m, || format!("{tag}: trivial cocycle changed something"))?;
            }
        }
    }
    Ok(())
}

fn c9() -> Result<(), String> {
    let f = fixture("FIX-Z4");
    let c = verify_cocycle(&f.inst.host, &f.inst.gamma).map_err(|e| e.to_string())?;
    let g = metric_of(&f).unwrap();
    let h = f.module.host().clone();
    let z = Cyclotomic::root_of_unity(4, 1).unwrap();
    let expect: Vec<Vec<Element>> = vec![vec![h.zero(), h.scalar(&z)], vec![h.scalar(&z), h.zero()]];
    let closed = metric_closed_form(&g, &c);
    check(closed == expect, || "closed form".into())?;
    let mg = twist_bimodule(&f.module, &c).map_err(|e| e.to_string())?;
    let x = xi(&f.module, &mg, &c).map_err(|e| e.to_string())?;
    let bg = construct_braiding(&mg).map_err(|e| e.to_string())?;
    let composed = deform_metric(&g, &x, &bg).map_err(|e| e.to_string())?;
    check(composed.gmat() == expect.as_slice(), || "g o xi".into())?;
    check(!z.is_one() && (&z * &z) == Cyclotomic::from_int(-1), || "zeta_4".into())
}

fn c10() -> Result<(), String> {
    for f in fixtures() {
        for (which, c) in cocycles(&f) {
            let mg = twist_bimodule(&f.module, &c).map_err(|e| e.to_string())?;
            let x = xi(&f.module, &mg, &c).map_err(|e| e.to_string())?;
            check_xi_lemma(&f.module, &mg, &c, &x).map_err(|w| format!("{} ({which}): {w}", f.name))?;
        }
    }
    Ok(())
}

type Criterion = (&'static str, fn() -> Result<(), String>, Option<Duration>);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 Hopf axioms on group, function and twisted algebras", c1, Some(Duration::from_secs(5))),
        ("2 braiding: flip property, bimodule map, bicovariance, braid equation, uniqueness", c2, Some(Duration::from_secs(30))),
        ("3 metric axioms on FIX-Z4", c3, Some(Duration::from_secs(1))),
        ("4 left invariance: definition agrees with covariance", c4, None),
        ("5 bi-invariant metric spaces", c5, None),
        ("6 snake identities and bicovariance of ev, coev", c6, None),
        ("7 wedge(h) = 0 iff g o sigma = g", c7, None),
        ("8 twist theorems (a)-(f)", c8, Some(Duration::from_secs(60))),
        ("9 g_gamma on FIX-Z4 two ways", c9, None),
        ("10 xi inverse on invariant pairs", c10, None),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (label, f, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(()), Some(l)) if elapsed > l => Err(format!("took {:.2?}, limit {:.0?}", elapsed, l)),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("criterion {label}: pass ({:.2?})", elapsed),
            Err(w) => {
                failed += 1;
                println!("criterion {label}: FAIL [{w}] ({:.2?})", elapsed);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
