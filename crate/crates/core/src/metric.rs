//! Metrics on a bicovariant bimodule: right-linear maps `g: M (x)_A M -> A`
//! fixed by `g_ij = g(w_i (x) w_j)`, with symmetry, nondegeneracy,
//! invariance, duality and two-forms.

use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bicovariant::BicovBimodule;
use crate::braiding::Braiding;
use crate::error::{Error, Result};
use crate::hopf::{elem, Element, HopfAlgebra};
use crate::linalg::Matrix;
use crate::report::{Outcome, Report};
use crate::scalar::Cyclotomic;
use crate::structure::{check_covariant_map, regular, Covariance, Linearity};

#[derive(Clone, Debug)]
pub struct Metric {
    braiding: Braiding,
    gmat: Vec<Vec<Element>>,
}

impl Metric {
    pub fn new(braiding: &Braiding, gmat: Vec<Vec<Element>>) -> Result<Self> {
        let m = braiding.module();
        let (n, d) = (m.host().dim(), m.rank());
        if gmat.len() != d || gmat.iter().any(|r| r.len() != d || r.iter().any(|x| x.len() != n)) {
            return Err(Error::ShapeMismatch(format!("metric must be {d}x{d} over an algebra of dimension {n}")));
        }
        Ok(Metric {
            braiding: braiding.clone(),
            gmat,
        })
    }

    pub fn from_scalars(braiding: &Braiding, g: &Matrix) -> Result<Self> {
        let h = braiding.module().host().clone();
        let gmat = (0..g.rows())
            .map(|i| (0..g.cols()).map(|j| h.scalar(g.get(i, j))).collect())
            .collect();
        Self::new(braiding, gmat)
    }

    pub fn braiding(&self) -> &Braiding {
        &self.braiding
    }

    pub fn module(&self) -> &BicovBimodule {
        self.braiding.module()
    }

    fn host(&self) -> &HopfAlgebra {
        self.module().host()
    }

    pub fn gmat(&self) -> &[Vec<Element>] {
        &self.gmat
    }

    /// The scalar matrix `(g_ij)`, if every entry is a scalar.
    pub fn scalar_matrix(&self) -> Option<Matrix> {
        let h = self.host();
        let d = self.gmat.len();
        let mut out = Matrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, h.as_scalar(&self.gmat[i][j])?);
            }
        }
        Some(out)
    }

    /// `n x (d^2 n)`, column `(i*d + j)*n + a` is `g_ij e_a`.
    pub fn map(&self) -> Matrix {
        let h = self.host();
        let (n, d) = (h.dim(), self.gmat.len());
        let mut out = Matrix::zeros(n, d * d * n);
        for i in 0..d {
            for j in 0..d {
                for a in 0..n {
                    let x = h.mul(&self.gmat[i][j], &h.basis(a));
                    for (k, c) in x.into_iter().enumerate() {
                        out.set(k, (i * d + j) * n + a, c);
                    }
                }
            }
        }
        out
    }

    /// `g(X)` for `X` in right coordinates of the tensor square.
    pub fn eval(&self, x: &[Cyclotomic]) -> Element {
        self.map().apply(x).expect("dimension")
    }

    /// `e -> (g(e (x) w_k))_k` on right coordinates, `dn x dn`.
    pub fn vg_values(&self) -> Matrix {
        let m = self.module();
        let (n, d) = (m.host().dim(), m.rank());
        let g = self.map();
        let dim = m.dim();
        let mut out = Matrix::zeros(d * n, dim);
        for p in 0..dim {
            let e = elem::basis(dim, p);
            for k in 0..d {
                let v = g.apply(&m.tensor2(&e, &m.omega_rc(k))).expect("dimension");
                for (a, c) in v.into_iter().enumerate() {
                    out.set(k * n + a, p, c);
                }
            }
        }
        out
    }

    /// `f -> (g(w_k (x) f))_k` on right coordinates.
    pub fn vg_values_left_slot(&self) -> Matrix {
        let m = self.module();
        let (n, d) = (m.host().dim(), m.rank());
        let g = self.map();
        let dim = m.dim();
        let mut out = Matrix::zeros(d * n, dim);
        for p in 0..dim {
            let f = elem::basis(dim, p);
            for k in 0..d {
                let v = g.apply(&m.tensor2(&m.omega_rc(k), &f)).expect("dimension");
                for (a, c) in v.into_iter().enumerate() {
                    out.set(k * n + a, p, c);
                }
            }
        }
        out
    }

    /// `V_g(w_i)(w_j)`.
    pub fn vg_eval(&self, i: usize, j: usize) -> Element {
        let m = self.module();
        self.eval(&m.tensor2(&m.omega_rc(i), &m.omega_rc(j)))
    }
}

/// `sum_i w_i a_i` as text, e.g. `w2` or `w1*(u) + w2*(2*e)`.
pub fn format_bim(m: &BicovBimodule, rc: &[Cyclotomic]) -> String {
    let h = m.host();
    let terms: Vec<String> = m
        .coeffs_from_rc(rc)
        .iter()
        .enumerate()
        .filter(|(_, a)| !elem::is_zero(a))
        .map(|(i, a)| {
            if *a == h.one() {
                format!("w{}", i + 1)
            } else {
                format!("w{}*({})", i + 1, h.format(a))
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Right linearity, symmetry under the braiding and nondegeneracy.
pub fn check_metric(g: &Metric) -> Report {
    let m = g.module();
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let mut r = Report::new(h.name());
    let gm = g.map();
    let p2 = m.tensor_power(2);
    r.record("metric.right_linear", {
        let mut out = Ok(());
        for b in 0..n {
            let lhs = gm.matmul(&p2.right_act()[b]).expect("dimension");
            let rmul = Matrix::from_fn(n, n, |k, a| h.mul_basis(a, b)[k].clone());
            if lhs != rmul.matmul(&gm).expect("dimension") {
                out = Err(format!("g(X e_{}) != g(X) e_{}", h.labels()[b], h.labels()[b]));
                break;
            }
        }
        out
    });
    r.record("metric.symmetric", {
        let gs = gm.matmul(g.braiding().full()).expect("dimension");
        match (0..d * d).find(|&c| (0..n).any(|a| gs.column(c * n + a) != gm.column(c * n + a))) {
            None => Ok(()),
            Some(c) => Err(format!("g(sigma(w{} (x) w{})) != g(w{} (x) w{})", c / d + 1, c % d + 1, c / d + 1, c % d + 1)),
        }
    });
    r.record("metric.nondegenerate", kernel_witness(m, &g.vg_values()));
    r.record("metric.nondegenerate_left_slot", kernel_witness(m, &g.vg_values_left_slot()));
    r
}

fn kernel_witness(m: &BicovBimodule, v: &Matrix) -> Outcome {
    let k = v.kernel();
    if k.cols() == 0 {
        Ok(())
    } else {
        Err(format_bim(m, &k.column(0)))
    }
}

/// Both characterizations of left invariance; they must agree.
pub fn check_left_invariant(g: &Metric) -> Result<bool> {
    let m = g.module();
    let h = m.host();
    let n = h.dim();
    let gm = g.map();
    let p2 = m.tensor_power(2);
    let dim2 = p2.dim();
    let eps_g: Vec<Cyclotomic> = (0..dim2).map(|q| h.eps(&gm.column(q))).collect();
    let lco = p2.left_coact();
    // (id (x) eps g) Delta_{M(x)M}
    let mut def = Matrix::zeros(n, dim2);
    for p in 0..dim2 {
        for a in 0..n {
            for q in 0..dim2 {
                let c = lco.get(a * dim2 + q, p);
                if !c.is_zero() && !eps_g[q].is_zero() {
                    *def.entry_mut(a, p) += &(c * &eps_g[q]);
                }
            }
        }
    }
    let by_def = def == gm;
    let lhs = comul_matrix(h).matmul(&gm)?;
    let rhs = Matrix::identity(n).kron(&gm).matmul(lco)?;
    let by_cov = lhs == rhs;
    if by_def != by_cov {
        return Err(Error::Internal(format!(
            "left invariance: definition says {by_def}, covariance says {by_cov}"
        )));
    }
    Ok(by_def)
}

pub fn check_right_invariant(g: &Metric) -> Result<bool> {
    let m = g.module();
    let h = m.host();
    let n = h.dim();
    let gm = g.map();
    let p2 = m.tensor_power(2);
    let dim2 = p2.dim();
    let eps_g: Vec<Cyclotomic> = (0..dim2).map(|q| h.eps(&gm.column(q))).collect();
    let rco = p2.right_coact();
    let mut def = Matrix::zeros(n, dim2);
    for p in 0..dim2 {
        for q in 0..dim2 {
            if eps_g[q].is_zero() {
                continue;
            }
            for a in 0..n {
                let c = rco.get(q * n + a, p);
                if !c.is_zero() {
                    *def.entry_mut(a, p) += &(c * &eps_g[q]);
                }
            }
        }
    }
    let by_def = def == gm;
    let lhs = comul_matrix(h).matmul(&gm)?;
    let rhs = gm.kron(&Matrix::identity(n)).matmul(rco)?;
    let by_cov = lhs == rhs;
    if by_def != by_cov {
        return Err(Error::Internal(format!(
            "right invariance: definition says {by_def}, covariance says {by_cov}"
        )));
    }
    Ok(by_def)
}

fn comul_matrix(h: &HopfAlgebra) -> Matrix {
    let n = h.dim();
    Matrix::from_fn(n * n, n, |row, a| h.comul(&h.basis(a))[row].clone())
}

/// Scalar entries with `g_ij = sum_kl g_kl R_ki R_lj`.
pub fn check_bi_invariant(g: &Metric) -> bool {
    g.scalar_matrix().is_some() && r_identity(g.module(), g.gmat())
}

fn r_identity(m: &BicovBimodule, gmat: &[Vec<Element>]) -> bool {
    let h = m.host();
    let d = m.rank();
    (0..d).all(|i| {
        (0..d).all(|j| {
            let mut acc = h.zero();
            for k in 0..d {
                for l in 0..d {
                    if elem::is_zero(&gmat[k][l]) {
                        continue;
                    }
                    let x = h.mul(&h.mul(&gmat[k][l], m.r(k, i)), m.r(l, j));
                    elem::add_scaled(&mut acc, &Cyclotomic::one(), &x);
                }
            }
            acc == gmat[i][j]
        })
    })
}

/// `sum_j g_ij S(R_jm) = sum_j g_jm R_ji` for all `i, m`.
pub fn check_gs_identity(g: &Metric) -> Outcome {
    let m = g.module();
    let h = m.host();
    let d = m.rank();
    for i in 0..d {
        for mm in 0..d {
            let mut lhs = h.zero();
            let mut rhs = h.zero();
            for j in 0..d {
                elem::add_scaled(&mut lhs, &Cyclotomic::one(), &h.mul(&g.gmat[i][j], &h.antipode(m.r(j, mm))));
                elem::add_scaled(&mut rhs, &Cyclotomic::one(), &h.mul(&g.gmat[j][mm], m.r(j, i)));
            }
            if lhs != rhs {
                return Err(format!("(i,m) = ({},{})", i + 1, mm + 1));
            }
        }
    }
    Ok(())
}

/// `(g^ij)`, the inverse of a scalar metric matrix.
pub fn metric_inverse(g: &Metric) -> Result<Matrix> {
    let s = g
        .scalar_matrix()
        .ok_or_else(|| Error::Precondition("metric entries are not scalars".into()))?;
    s.inverse().map_err(|_| Error::DegenerateMetric)
}

/// The functionals `w*_i` with `w*_i(w_j a) = delta_ij a`.
#[derive(Clone, Debug)]
pub struct DualBasis<'a> {
    module: &'a BicovBimodule,
}

pub fn dual_basis(m: &BicovBimodule) -> DualBasis<'_> {
    DualBasis { module: m }
}

impl DualBasis<'_> {
    pub fn eval(&self, i: usize, e: &[Cyclotomic]) -> Element {
        let n = self.module.host().dim();
        e[i * n..(i + 1) * n].to_vec()
    }

    /// `e = sum_i w_i w*_i(e)` on every basis vector.
    pub fn check_reconstruction(&self) -> Outcome {
        let m = self.module;
        let dim = m.dim();
        for p in 0..dim {
            let e = elem::basis(dim, p);
            let mut acc = elem::zero(dim);
            for i in 0..m.rank() {
                elem::add_scaled(&mut acc, &Cyclotomic::one(), &m.coords().right(&m.omega_rc(i), &self.eval(i, &e)));
            }
            if acc != e {
                return Err(format!("right coordinate {p}"));
            }
        }
        Ok(())
    }

    /// `w*_i(w_j) = delta_ij`.
    pub fn check_duality(&self) -> Outcome {
        let m = self.module;
        let h = m.host();
        for i in 0..m.rank() {
            for j in 0..m.rank() {
                let expect = if i == j { h.one() } else { h.zero() };
                if self.eval(i, &m.omega_rc(j)) != expect {
                    return Err(format!("(i,j) = ({},{})", i + 1, j + 1));
                }
            }
        }
        Ok(())
    }
}

/// `coev(1) = sum_ik H_ik w_i (x) w_k` with `H = (g_ij)^-1`, in right
/// coordinates of the tensor square.
pub fn coev_element(g: &Metric) -> Result<Vec<Cyclotomic>> {
    let hinv = ev_coev_precondition(g)?;
    let m = g.module();
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let mut out = elem::zero(d * d * n);
    for i in 0..d {
        for k in 0..d {
            let c = hinv.get(i, k);
            for (u, x) in h.unit().iter().enumerate() {
                if !x.is_zero() {
                    out[(i * d + k) * n + u] = c * x;
                }
            }
        }
    }
    Ok(out)
}

fn ev_coev_precondition(g: &Metric) -> Result<Matrix> {
    let s = g
        .scalar_matrix()
        .ok_or_else(|| Error::Precondition("ev/coev need scalar metric entries".into()))?;
    let nondegenerate = g.vg_values().kernel().cols() == 0;
    match s.inverse() {
        Ok(inv) if nondegenerate => Ok(inv),
        _ => Err(Error::Precondition("ev/coev need a nondegenerate metric".into())),
    }
}

/// Both snake identities on a basis of `M`, and bicovariance of `ev` and `coev`.
pub fn ev_coev_check(g: &Metric) -> Result<Report> {
    let coev = coev_element(g)?;
    let gs = g.scalar_matrix().expect("checked by the precondition");
    let m = g.module();
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let dim = m.dim();
    let mut r = Report::new(h.name());

    // (ev (x) id)(e (x) coev(1))
    r.record("snake.left", {
        let mut out = Ok(());
        for p in 0..dim {
            let e = elem::basis(dim, p);
            let x = m.mul_tensor(&e, 1, &coev, 2);
            let mut acc = elem::zero(dim);
            for (idx, c) in x.chunks(n).enumerate() {
                if elem::is_zero(c) {
                    continue;
                }
                let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
                let s = gs.get(i, j);
                if !s.is_zero() {
                    elem::add_scaled(&mut acc[k * n..(k + 1) * n], s, c);
                }
            }
            if acc != e {
                out = Err(format!("e = {}", format_bim(m, &e)));
                break;
            }
        }
        out
    });
    // (id (x) ev)(coev(1) (x) e)
    r.record("snake.right", {
        let mut out = Ok(());
        for p in 0..dim {
            let e = elem::basis(dim, p);
            let x = m.mul_tensor(&coev, 2, &e, 1);
            let mut acc = elem::zero(dim);
            for (idx, c) in x.chunks(n).enumerate() {
                if elem::is_zero(c) {
                    continue;
                }
                let (i, j, k) = (idx / (d * d), (idx / d) % d, idx % d);
                let s = gs.get(j, k);
                if !s.is_zero() {
                    elem::add_scaled(&mut acc[i * n..(i + 1) * n], s, c);
                }
            }
            if acc != e {
                out = Err(format!("e = {}", format_bim(m, &e)));
                break;
            }
        }
        out
    });
    let p2 = m.tensor_power(2);
    let reg = regular(h);
    let ev = check_covariant_map(&g.map(), p2, &reg, Covariance::Bi, Linearity { left: false, right: true })?;
    for c in &ev.checks {
        r.record(
            format!("ev.{}", c.id),
            match &c.witness {
                None => Ok(()),
                Some(w) => Err(w.clone()),
            },
        );
    }
    // coev: A -> M (x) M, a -> coev(1) a
    let coev_map = {
        let mut cols = Vec::with_capacity(n);
        for a in 0..n {
            cols.push(p2.right(&coev, &h.basis(a)));
        }
        Matrix::from_columns(p2.dim(), &cols)?
    };
    let cv = check_covariant_map(&coev_map, &reg, p2, Covariance::Bi, Linearity { left: true, right: true })?;
    for c in &cv.checks {
        r.record(
            format!("coev.{}", c.id),
            match &c.witness {
                None => Ok(()),
                Some(w) => Err(w.clone()),
            },
        );
    }
    Ok(r)
}

/// `Ker(sigma - 1)` and a projection onto a complement.
#[derive(Clone, Debug)]
pub struct TwoForms {
    /// dimension of the quotient over the base field
    pub dim: usize,
    /// dimension of the quotient of the invariant square
    pub invariant_dim: usize,
    /// rows: coordinates of the quotient
    pub wedge: Matrix,
}

pub fn two_forms(b: &Braiding) -> Result<TwoForms> {
    let full = b.full();
    let total = full.rows();
    let kernel = full.sub(&Matrix::identity(total))?.kernel();
    let wedge = complement_projection(&kernel, total)?;
    let d2 = b.coeffs().rows();
    let inv_kernel = b.coeffs().sub(&Matrix::identity(d2))?.kernel().cols();
    Ok(TwoForms {
        dim: total - kernel.cols(),
        invariant_dim: d2 - inv_kernel,
        wedge,
    })
}

/// Extends the columns of `k` by standard basis vectors (in order) to a
/// basis and returns the rows of the inverse belonging to the added vectors.
fn complement_projection(k: &Matrix, total: usize) -> Result<Matrix> {
    let mut cols: Vec<Vec<Cyclotomic>> = (0..k.cols()).map(|j| k.column(j)).collect();
    let mut rank = cols.len();
    for s in 0..total {
        if rank == total {
            break;
        }
        let mut trial = cols.clone();
        trial.push(elem::basis(total, s));
        let r = Matrix::from_columns(total, &trial)?.rank();
        if r > rank {
            cols = trial;
            rank = r;
        }
    }
    let basis = Matrix::from_columns(total, &cols)?;
    let inv = basis.inverse()?;
    let kc = k.cols();
    Ok(Matrix::from_fn(total - kc, total, |i, j| inv.get(kc + i, j).clone()))
}

/// `h = sum_ij g_ij . (w_i (x) w_j)` in right coordinates.
pub fn beggs_majid_element(g: &Metric) -> Vec<Cyclotomic> {
    let m = g.module();
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let p2 = m.tensor_power(2);
    let mut out = elem::zero(d * d * n);
    for i in 0..d {
        for j in 0..d {
            let mut basis = elem::zero(d * d * n);
            for (u, x) in h.unit().iter().enumerate() {
                basis[(i * d + j) * n + u] = x.clone();
            }
            elem::add_scaled(&mut out, &Cyclotomic::one(), &p2.left(&g.gmat[i][j], &basis));
        }
    }
    out
}

/// `([wedge(h) = 0], [g o sigma = g])`.
pub fn beggs_majid_flags(g: &Metric) -> Result<(bool, bool)> {
    let forms = two_forms(g.braiding())?;
    let hvec = beggs_majid_element(g);
    let wedge_zero = elem::is_zero(&forms.wedge.apply(&hvec)?);
    let gm = g.map();
    let symmetric = gm.matmul(g.braiding().full())? == gm;
    Ok((wedge_zero, symmetric))
}

/// `[wedge(h) = 0]`, after asserting it agrees with `[g o sigma = g]`.
pub fn beggs_majid_check(g: &Metric) -> Result<bool> {
    let (w, s) = beggs_majid_flags(g)?;
    if w != s {
        return Err(Error::Internal(format!(
            "wedge(h) = 0 is {w} but g o sigma = g is {s}"
        )));
    }
    Ok(w)
}

/// The space of scalar bi-invariant symmetric metrics.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiinvariantSpace {
    pub basis: Vec<Matrix>,
    /// first nondegenerate combination found, with its coefficients
    pub representative: Option<(Vec<i64>, Matrix)>,
    pub candidates_tried: usize,
}

const CANDIDATE_LIMIT: usize = 20_000;

/// Solves `g_ij = sum_kl g_kl R_ki R_lj` and `g o sigma = g` on scalar
/// matrices, then searches small integer combinations of the solution basis
/// for a nondegenerate one. `seed` shuffles the candidate order.
pub fn enumerate_biinvariant(b: &Braiding, seed: Option<u64>) -> Result<BiinvariantSpace> {
    let m = b.module();
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let unknowns = d * d;
    let mut rows: Vec<Vec<Cyclotomic>> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            let mut block = vec![elem::zero(unknowns); n];
            for k in 0..d {
                for l in 0..d {
                    let x = h.mul(m.r(k, i), m.r(l, j));
                    for (a, c) in x.into_iter().enumerate() {
                        block[a][k * d + l] += &c;
                    }
                }
            }
            for (a, u) in h.unit().iter().enumerate() {
                block[a][i * d + j] -= u;
            }
            rows.extend(block);
            let mut sym = elem::zero(unknowns);
            for kl in 0..unknowns {
                sym[kl] = b.coeffs().get(kl, i * d + j).clone();
            }
            sym[i * d + j] -= &Cyclotomic::one();
            rows.push(sym);
        }
    }
    let system = Matrix::from_rows(rows)?;
    let kernel = system.kernel();
    let basis: Vec<Matrix> = (0..kernel.cols())
        .map(|c| Matrix::from_fn(d, d, |i, j| kernel.get(i * d + j, c).clone()))
        .collect();

    let mut candidates = small_combinations(basis.len(), CANDIDATE_LIMIT);
    if let Some(s) = seed {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
    }
    let mut tried = 0;
    let mut representative = None;
    for coeffs in candidates {
        tried += 1;
        let mut gm = Matrix::zeros(d, d);
        for (c, bm) in coeffs.iter().zip(&basis) {
            if *c != 0 {
                gm = gm.add(&bm.scale(&Cyclotomic::from_int(*c)))?;
            }
        }
        if gm.rank() < d {
            continue;
        }
        let metric = Metric::from_scalars(b, &gm)?;
        if metric.vg_values().kernel().cols() == 0 {
            representative = Some((coeffs, gm));
            break;
        }
    }
    Ok(BiinvariantSpace {
        basis,
        representative,
        candidates_tried: tried,
    })
}

/// Nonzero vectors in `{-2..2}^k`, by max-norm, then lexicographically with
/// digits ordered `0, 1, -1, 2, -2`.
fn small_combinations(k: usize, limit: usize) -> Vec<Vec<i64>> {
    const DIGITS: [i64; 5] = [0, 1, -1, 2, -2];
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for norm in 1..=2i64 {
        let base = 2 * norm as usize + 1;
        let mut cur = vec![0usize; k];
        loop {
            let v: Vec<i64> = cur.iter().map(|&i| DIGITS[i]).collect();
            if v.iter().any(|x| x.abs() == norm) {
                out.push(v);
                if out.len() >= limit {
                    return out;
                }
            }
            let mut pos = k;
            while pos > 0 && cur[pos - 1] == base - 1 {
                cur[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            cur[pos - 1] += 1;
        }
    }
    out
}


#[cfg(test)]
mod fixture_tests {
    use super::*;
    use crate::bicovariant::build_bimodule;
    use crate::braiding::construct_braiding;
    use crate::instances::{builtin, BUILTINS};

    #[test]
    fn fixture_metrics() {
        for name in BUILTINS {
            let inst = builtin(name).unwrap().build().unwrap();
            let m = build_bimodule(&inst.yd).unwrap();
            let b = construct_braiding(&m).unwrap();
            let space = enumerate_biinvariant(&b, None).unwrap();
            eprintln!("{name}: space dim {}, rep {:?}", space.basis.len(), space.representative.as_ref().map(|r| r.0.clone()));
            if let Some(gm) = &inst.metric {
                let g = Metric::new(&b, gm.clone()).unwrap();
                let r = check_metric(&g);
                assert!(r.passed(), "{name}\n{}", r.to_text());
                assert!(check_left_invariant(&g).unwrap());
                assert!(check_right_invariant(&g).unwrap());
                assert!(check_bi_invariant(&g));
                check_gs_identity(&g).unwrap();
                let r = ev_coev_check(&g).unwrap();
                assert!(r.passed(), "{name}\n{}", r.to_text());
                assert!(beggs_majid_check(&g).unwrap());
                let tf = two_forms(&b).unwrap();
                eprintln!("{name}: two-forms {} / invariant {}", tf.dim, tf.invariant_dim);
            }
        }
    }
}
