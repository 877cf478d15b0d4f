//! Yetter-Drinfeld data, the bicovariant bimodules they generate, invariant
//! bases, the coaction matrix `R`, normal forms and tensor powers.
//!
//! A bimodule keeps two coordinate systems: the presentation it was built in
//! and right coordinates, where index `i*n + a` stands for `w_i . e_a`.
//! Tensor powers live in right coordinates only: index `I*n + a` for
//! `w_{i1} (x) .. (x) w_{ik} . e_a` with the multi-index `I` written in base
//! `d`, first factor most significant.

use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hopf::{elem, Element, HopfAlgebra};
use crate::linalg::{Matrix, Tensor};
use crate::report::{ensure, Outcome, Report};
use crate::scalar::Cyclotomic;
use crate::structure::{coproduct3, BicovStructure};

/// A right-right Yetter-Drinfeld module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YdModule {
    host: Arc<HopfAlgebra>,
    dim: usize,
    /// `action[a]` has column `i` equal to `v_i <| e_a`.
    action: Vec<Matrix>,
    /// `(d*n) x d`, column `i` is `rho(v_i)`, row `j*n + a` for `v_j (x) e_a`.
    coaction: Matrix,
}

impl YdModule {
    pub fn new(host: Arc<HopfAlgebra>, action: Vec<Matrix>, coaction: Matrix) -> Result<Self> {
        let n = host.dim();
        let dim = coaction.cols();
        let ok = action.len() == n
            && action.iter().all(|m| m.rows() == dim && m.cols() == dim)
            && coaction.rows() == dim * n;
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "Yetter-Drinfeld data of dimension {dim} over algebra of dimension {n}"
            )));
        }
        Ok(YdModule {
            host,
            dim,
            action,
            coaction,
        })
    }

    /// From tensors `action[a][i][j]` and `coaction[i][j][a]`.
    pub fn from_tensors(host: Arc<HopfAlgebra>, action: &Tensor, coaction: &Tensor) -> Result<Self> {
        let n = host.dim();
        let (sa, sc) = (action.shape(), coaction.shape());
        if sa.len() != 3 || sc.len() != 3 || sa[0] != n || sc[2] != n || sa[1] != sa[2] || sc[0] != sc[1] || sa[1] != sc[0] {
            return Err(Error::ShapeMismatch(format!("action {sa:?}, coaction {sc:?}")));
        }
        let d = sa[1];
        let act = (0..n)
            .map(|a| Matrix::from_fn(d, d, |j, i| action.get(&[a, i, j]).clone()))
            .collect();
        let co = Matrix::from_fn(d * n, d, |row, i| coaction.get(&[i, row / n, row % n]).clone());
        Self::new(host, act, co)
    }

    /// `v_i <| a = eps(a) v_i` and `rho(v_i) = v_i (x) degrees[i]`.
    pub fn graded_trivial(host: Arc<HopfAlgebra>, degrees: &[Element]) -> Result<Self> {
        let d = degrees.len();
        let n = host.dim();
        let act = (0..n)
            .map(|a| Matrix::identity(d).scale(&host.counit()[a]))
            .collect();
        Self::new(host, act, diagonal_coaction(n, degrees)?)
    }

    /// Group algebra data: `v_i <| g = v_{perm[g][i]}`, `rho(v_i) = v_i (x) degrees[i]`.
    pub fn graded_permutation(host: Arc<HopfAlgebra>, degrees: &[Element], perm: &[Vec<usize>]) -> Result<Self> {
        let d = degrees.len();
        let n = host.dim();
        if perm.len() != n || perm.iter().any(|p| p.len() != d || p.iter().any(|&j| j >= d)) {
            return Err(Error::ShapeMismatch("permutation action".into()));
        }
        let act = perm
            .iter()
            .map(|p| Matrix::from_fn(d, d, |j, i| if p[i] == j { Cyclotomic::one() } else { Cyclotomic::zero() }))
            .collect();
        Self::new(host, act, diagonal_coaction(n, degrees)?)
    }

    pub fn host(&self) -> &Arc<HopfAlgebra> {
        &self.host
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action_matrix(&self, a: usize) -> &Matrix {
        &self.action[a]
    }

    pub fn coaction_matrix(&self) -> &Matrix {
        &self.coaction
    }

    pub fn action_tensor(&self) -> Tensor {
        let (n, d) = (self.host.dim(), self.dim);
        let mut t = Tensor::zeros(&[n, d, d]);
        for a in 0..n {
            for i in 0..d {
                for j in 0..d {
                    t.set(&[a, i, j], self.action[a].get(j, i).clone());
                }
            }
        }
        t
    }

    pub fn coaction_tensor(&self) -> Tensor {
        let (n, d) = (self.host.dim(), self.dim);
        let mut t = Tensor::zeros(&[d, d, n]);
        for i in 0..d {
            for j in 0..d {
                for a in 0..n {
                    t.set(&[i, j, a], self.coaction.get(j * n + a, i).clone());
                }
            }
        }
        t
    }

    /// `v <| x` for `x` in the host.
    pub fn act(&self, v: &[Cyclotomic], x: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let mut out = elem::zero(self.dim);
        for (a, c) in x.iter().enumerate() {
            if !c.is_zero() {
                elem::add_scaled(&mut out, c, &self.action[a].apply(v).expect("dimension"));
            }
        }
        out
    }

    /// The element `R_ji` with `rho(v_i) = sum_j v_j (x) R_ji`.
    pub fn coaction_entry(&self, j: usize, i: usize) -> Element {
        let n = self.host.dim();
        (0..n).map(|a| self.coaction.get(j * n + a, i).clone()).collect()
    }

    pub fn verify(&self) -> Report {
        let mut r = Report::new(self.host.name());
        r.record("yd.action", self.check_action());
        r.record("yd.coaction", self.check_coaction());
        r.record("yd.compatibility", self.check_compatibility());
        r
    }

    fn check_action(&self) -> Outcome {
        let h = &self.host;
        let n = h.dim();
        let unit = combine(&self.action, h.unit(), self.dim);
        if !unit.is_identity() {
            return Err("v <| 1 != v".into());
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = &self.action[b] * &self.action[a];
                let rhs = combine(&self.action, &h.mul_basis(a, b), self.dim);
                if lhs != rhs {
                    return Err(format!("(v <| a) <| b != v <| ab at (a,b) = ({},{})", h.labels()[a], h.labels()[b]));
                }
            }
        }
        Ok(())
    }

    fn check_coaction(&self) -> Outcome {
        let h = &self.host;
        let (n, d) = (h.dim(), self.dim);
        for i in 0..d {
            let co = self.coaction.column(i);
            let mut lhs = elem::zero(d * n * n);
            let mut rhs = elem::zero(d * n * n);
            let mut counit = elem::zero(d);
            for j in 0..d {
                for a in 0..n {
                    let c = &co[j * n + a];
                    if c.is_zero() {
                        continue;
                    }
                    let inner = self.coaction.column(j);
                    for (k, x) in inner.iter().enumerate() {
                        if !x.is_zero() {
                            lhs[k * n + a] += &(c * x);
                        }
                    }
                    for (a1, a2, y) in h.coproduct_terms(a) {
                        rhs[(j * n + a1) * n + a2] += &(c * y);
                    }
                    counit[j] += &(c * &h.counit()[a]);
                }
            }
            if lhs != rhs {
                return Err(format!("coassociativity fails on v{}", i + 1));
            }
            if counit != elem::basis(d, i) {
                return Err(format!("counit fails on v{}", i + 1));
            }
        }
        Ok(())
    }

    fn check_compatibility(&self) -> Outcome {
        let h = &self.host;
        let (n, d) = (h.dim(), self.dim);
        for a in 0..n {
            let legs = coproduct3(h, a);
            for i in 0..d {
                let lhs = self.coaction.apply(&self.action[a].column(i)).expect("dimension");
                // v0 <| a2 (x) S(a1) v1 a3
                let mut rhs = elem::zero(d * n);
                let co = self.coaction.column(i);
                for j in 0..d {
                    let rj = self.coaction_entry(j, i);
                    if elem::is_zero(&rj) || (0..n).all(|x| co[j * n + x].is_zero()) {
                        continue;
                    }
                    for (a1, a2, a3, c) in &legs {
                        let v = self.action[*a2].column(j);
                        let x = h.mul(&h.mul(&h.antipode(&h.basis(*a1)), &rj), &h.basis(*a3));
                        for (k, vk) in v.iter().enumerate() {
                            if vk.is_zero() {
                                continue;
                            }
                            let s = c * vk;
                            for (b, xb) in x.iter().enumerate() {
                                if !xb.is_zero() {
                                    rhs[k * n + b] += &(&s * xb);
                                }
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return Err(format!("(a, v) = ({}, v{})", h.labels()[a], i + 1));
                }
            }
        }
        Ok(())
    }
}

fn diagonal_coaction(n: usize, degrees: &[Element]) -> Result<Matrix> {
    let d = degrees.len();
    if degrees.iter().any(|g| g.len() != n) {
        return Err(Error::ShapeMismatch("degree is not an element of the host".into()));
    }
    Ok(Matrix::from_fn(d * n, d, |row, i| {
        if row / n == i {
            degrees[i][row % n].clone()
        } else {
            Cyclotomic::zero()
        }
    }))
}

fn combine(acts: &[Matrix], x: &[Cyclotomic], dim: usize) -> Matrix {
    let mut out = Matrix::zeros(dim, dim);
    for (a, c) in x.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&acts[a].scale(c)).expect("dimension");
        }
    }
    out
}

/// The bicovariant bimodule `A (x) V` generated by a Yetter-Drinfeld module,
/// in the presentation `a (x) v_i` at index `a*d + i`.
pub fn build_bimodule(yd: &YdModule) -> Result<BicovBimodule> {
    let yd_report = yd.verify();
    if let Some(c) = yd_report.first_failure() {
        return Err(Error::YetterDrinfeld(format!(
            "{}: {}",
            c.id,
            c.witness.clone().unwrap_or_default()
        )));
    }
    let h = yd.host();
    let (n, d) = (h.dim(), yd.dim());
    let dd = n * d;
    let idx = |a: usize, i: usize| a * d + i;
    let left: Vec<Matrix> = (0..n)
        .map(|b| {
            let mut m = Matrix::zeros(dd, dd);
            for a in 0..n {
                for (k, c) in h.product_terms(b, a) {
                    for i in 0..d {
                        *m.entry_mut(idx(*k, i), idx(a, i)) += c;
                    }
                }
            }
            m
        })
        .collect();
    // (a (x) v) . b = a b1 (x) v <| b2
    let right: Vec<Matrix> = (0..n)
        .map(|b| {
            let mut m = Matrix::zeros(dd, dd);
            for a in 0..n {
                for (b1, b2, c) in h.coproduct_terms(b) {
                    let act = yd.action_matrix(*b2);
                    for (k, x) in h.product_terms(a, *b1) {
                        let cx = c * x;
                        for i in 0..d {
                            for j in 0..d {
                                let y = act.get(j, i);
                                if !y.is_zero() {
                                    *m.entry_mut(idx(*k, j), idx(a, i)) += &(&cx * y);
                                }
                            }
                        }
                    }
                }
            }
            m
        })
        .collect();
    // Delta_M(a (x) v) = a1 (x) (a2 (x) v)
    let mut lco = Matrix::zeros(n * dd, dd);
    for a in 0..n {
        for (a1, a2, c) in h.coproduct_terms(a) {
            for i in 0..d {
                *lco.entry_mut(a1 * dd + idx(*a2, i), idx(a, i)) += c;
            }
        }
    }
    // mDelta(a (x) v) = (a1 (x) v0) (x) a2 v1
    let mut rco = Matrix::zeros(dd * n, dd);
    for a in 0..n {
        for (a1, a2, c) in h.coproduct_terms(a) {
            for i in 0..d {
                for j in 0..d {
                    let rji = yd.coaction_entry(j, i);
                    if elem::is_zero(&rji) {
                        continue;
                    }
                    let x = h.mul(&h.basis(*a2), &rji);
                    for (y, xy) in x.iter().enumerate() {
                        if !xy.is_zero() {
                            *rco.entry_mut(idx(*a1, j) * n + y, idx(a, i)) += &(c * xy);
                        }
                    }
                }
            }
        }
    }
    let structure = BicovStructure::new(n, Some(left), right, lco, rco)?;
    let omega = (0..d)
        .map(|i| {
            let mut v = elem::zero(dd);
            for a in 0..n {
                v[idx(a, i)] = h.unit()[a].clone();
            }
            v
        })
        .collect();
    BicovBimodule::from_parts(h.clone(), structure, omega)
}

/// A bicovariant bimodule, free as a right module on a left-invariant basis.
#[derive(Clone, Debug)]
pub struct BicovBimodule {
    host: Arc<HopfAlgebra>,
    presentation: BicovStructure,
    omega: Vec<Vec<Cyclotomic>>,
    d: usize,
    /// presentation -> right coordinates
    to_right: Matrix,
    /// right coordinates -> presentation (columns `w_i . e_a`)
    from_right: Matrix,
    coords: BicovStructure,
    /// `r[j][i] = R_ji`
    r: Vec<Vec<Element>>,
    /// `exchange[i][k]`: column `a` is `C_ik(e_a)`, where `e_a . w_i = sum_k w_k . C_ik(e_a)`
    exchange: Vec<Vec<Matrix>>,
    yd: YdModule,
    powers: Arc<[OnceLock<BicovStructure>; 3]>,
    pairs: Arc<OnceLock<Vec<Vec<Cyclotomic>>>>,
}

impl PartialEq for BicovBimodule {
    fn eq(&self, other: &Self) -> bool {
        *self.host == *other.host && self.coords == other.coords && self.r == other.r
    }
}

impl BicovBimodule {
    /// Assembles a bimodule from a materialized structure and the
    /// presentation vectors of a left-invariant right basis.
    pub fn from_parts(host: Arc<HopfAlgebra>, presentation: BicovStructure, omega: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let n = host.dim();
        let d = omega.len();
        let dd = presentation.dim();
        if presentation.host_dim() != n || !presentation.has_left_action() || d * n != dd || omega.iter().any(|w| w.len() != dd) {
            return Err(Error::ShapeMismatch(format!(
                "{d} basis vectors for a bimodule of dimension {dd} over algebra of dimension {n}"
            )));
        }
        for (i, w) in omega.iter().enumerate() {
            let expected = crate::hopf::tensor_product(host.unit(), w);
            if presentation.lco(w) != expected {
                return Err(Error::Precondition(format!("w{} is not left-invariant", i + 1)));
            }
        }
        let mut cols = Vec::with_capacity(dd);
        for w in &omega {
            for a in 0..n {
                cols.push(presentation.right(w, &host.basis(a)));
            }
        }
        let from_right = Matrix::from_columns(dd, &cols)?;
        let to_right = from_right
            .inverse()
            .map_err(|_| Error::Precondition("the invariant basis does not freely generate the right module".into()))?;
        let coords = conjugate(&presentation, &to_right, &from_right)?;

        let unit_rc = |i: usize| {
            let mut v = elem::zero(dd);
            for a in 0..n {
                v[i * n + a] = host.unit()[a].clone();
            }
            v
        };
        // R from the right coaction of the invariant basis
        let u0 = host
            .unit()
            .iter()
            .position(|c| !c.is_zero())
            .ok_or_else(|| Error::Internal("zero unit".into()))?;
        let u0_inv = host.unit()[u0].inv()?;
        let mut r = vec![vec![host.zero(); d]; d];
        for i in 0..d {
            let co = coords.rco(&unit_rc(i));
            for j in 0..d {
                let s: Element = (0..n).map(|c| &co[(j * n + u0) * n + c] * &u0_inv).collect();
                for b in 0..n {
                    for c in 0..n {
                        if co[(j * n + b) * n + c] != &host.unit()[b] * &s[c] {
                            return Err(Error::Internal(format!(
                                "right coaction of w{} has a non-invariant leg",
                                i + 1
                            )));
                        }
                    }
                }
                r[j][i] = s;
            }
        }
        let exchange = (0..d)
            .map(|i| {
                let w = unit_rc(i);
                let images: Vec<Vec<Cyclotomic>> = (0..n).map(|a| coords.left(&host.basis(a), &w)).collect();
                (0..d)
                    .map(|k| Matrix::from_fn(n, n, |b, a| images[a][k * n + b].clone()))
                    .collect()
            })
            .collect();

        let mut m = BicovBimodule {
            host: host.clone(),
            presentation,
            omega,
            d,
            to_right,
            from_right,
            coords,
            r,
            exchange,
            yd: YdModule::new(host.clone(), vec![Matrix::identity(d); n], Matrix::zeros(d * n, d))?,
            powers: Arc::new([OnceLock::new(), OnceLock::new(), OnceLock::new()]),
            pairs: Arc::new(OnceLock::new()),
        };
        m.yd = m.extract_yd()?;
        Ok(m)
    }

    /// `v_i <| b = S(b1) . w_i . b2` and `rho(v_i) = sum_j v_j (x) R_ji`.
    fn extract_yd(&self) -> Result<YdModule> {
        let h = &self.host;
        let (n, d) = (h.dim(), self.d);
        let mut action = Vec::with_capacity(n);
        for b in 0..n {
            let mut m = Matrix::zeros(d, d);
            for i in 0..d {
                let w = self.omega_rc(i);
                let mut acc = elem::zero(d * n);
                for (b1, b2, c) in h.coproduct_terms(b) {
                    let x = self.coords.left(&h.antipode(&h.basis(*b1)), &self.coords.right(&w, &h.basis(*b2)));
                    elem::add_scaled(&mut acc, c, &x);
                }
                for j in 0..d {
                    let coeff = &acc[j * n..(j + 1) * n];
                    let s = h.as_scalar(coeff).ok_or_else(|| {
                        Error::Internal(format!("adjoint action of {} on w{} is not invariant", h.labels()[b], i + 1))
                    })?;
                    m.set(j, i, s);
                }
            }
            action.push(m);
        }
        let coaction = Matrix::from_fn(d * n, d, |row, i| self.r[row / n][i][row % n].clone());
        YdModule::new(h.clone(), action, coaction)
    }

    pub fn host(&self) -> &Arc<HopfAlgebra> {
        &self.host
    }

    /// Rank `d` of the free right module.
    pub fn rank(&self) -> usize {
        self.d
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> usize {
        self.d * self.host.dim()
    }

    pub fn presentation(&self) -> &BicovStructure {
        &self.presentation
    }

    /// The structure maps in right coordinates.
    pub fn coords(&self) -> &BicovStructure {
        &self.coords
    }

    pub fn omega(&self) -> &[Vec<Cyclotomic>] {
        &self.omega
    }

    pub fn to_right(&self) -> &Matrix {
        &self.to_right
    }

    pub fn from_right(&self) -> &Matrix {
        &self.from_right
    }

    /// `R_ji`, with `mDelta(w_i) = sum_j w_j (x) R_ji`.
    pub fn r(&self, j: usize, i: usize) -> &Element {
        &self.r[j][i]
    }

    pub fn r_matrix(&self) -> &[Vec<Element>] {
        &self.r
    }

    pub fn exchange(&self, i: usize, k: usize) -> &Matrix {
        &self.exchange[i][k]
    }

    /// The Yetter-Drinfeld data read off from the invariant basis.
    pub fn yd(&self) -> &YdModule {
        &self.yd
    }

    /// `w_i` in right coordinates.
    pub fn omega_rc(&self, i: usize) -> Vec<Cyclotomic> {
        self.rc_from_coeffs(&{
            let mut c = vec![self.host.zero(); self.d];
            c[i] = self.host.one();
            c
        })
    }

    /// `sum_i w_i a_i` in right coordinates.
    pub fn rc_from_coeffs(&self, coeffs: &[Element]) -> Vec<Cyclotomic> {
        coeffs.iter().flat_map(|a| a.iter().cloned()).collect()
    }

    pub fn coeffs_from_rc(&self, v: &[Cyclotomic]) -> Vec<Element> {
        v.chunks(self.host.dim()).map(|c| c.to_vec()).collect()
    }

    /// Right normal form of a presentation vector.
    pub fn normal_form(&self, v: &[Cyclotomic]) -> Result<BimElement> {
        let rc = self.to_right.apply(v)?;
        Ok(BimElement {
            coeffs: self.coeffs_from_rc(&rc),
        })
    }

    pub fn to_presentation(&self, x: &BimElement) -> Vec<Cyclotomic> {
        self.from_right.apply(&self.rc_from_coeffs(&x.coeffs)).expect("dimension")
    }

    /// Columns `e_a . w_i` at index `i*n + a`, in right coordinates.
    pub fn left_basis_matrix(&self) -> Matrix {
        let n = self.host.dim();
        let mut cols = Vec::with_capacity(self.dim());
        for i in 0..self.d {
            let w = self.omega_rc(i);
            for a in 0..n {
                cols.push(self.coords.left(&self.host.basis(a), &w));
            }
        }
        Matrix::from_columns(self.dim(), &cols).expect("shape")
    }

    /// `(b_i)` with `x = sum_i b_i . w_i`.
    pub fn left_coeffs(&self, x: &BimElement) -> Result<Vec<Element>> {
        let l = self.left_basis_matrix();
        let rhs = Matrix::from_columns(self.dim(), &[self.rc_from_coeffs(&x.coeffs)])?;
        let sol = l
            .solve(&rhs)?
            .ok_or_else(|| Error::Internal("invariant basis is not a left basis".into()))?;
        Ok(self.coeffs_from_rc(&sol.column(0)))
    }

    /// `sum_i b_i . w_i` in right normal form.
    pub fn from_left_coeffs(&self, b: &[Element]) -> BimElement {
        let mut acc = elem::zero(self.dim());
        for (i, bi) in b.iter().enumerate() {
            elem::add_scaled(&mut acc, &Cyclotomic::one(), &self.coords.left(bi, &self.omega_rc(i)));
        }
        BimElement {
            coeffs: self.coeffs_from_rc(&acc),
        }
    }

    /// `eta_k = sum_j w_j S(R_jk)`, in right coordinates.
    pub fn right_invariants(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.d)
            .map(|k| {
                let coeffs: Vec<Element> = (0..self.d).map(|j| self.host.antipode(&self.r[j][k])).collect();
                self.rc_from_coeffs(&coeffs)
            })
            .collect()
    }

    pub fn left_invariants(&self) -> Vec<Vec<Cyclotomic>> {
        (0..self.d).map(|i| self.omega_rc(i)).collect()
    }

    /// Matrix of `m -> mDelta(m) - m (x) 1` on right coordinates.
    fn right_invariance_operator(&self, s: &BicovStructure) -> Matrix {
        let n = self.host.dim();
        let dim = s.dim();
        let mut m = s.right_coact().clone();
        for p in 0..dim {
            for (u, c) in self.host.unit().iter().enumerate() {
                if !c.is_zero() {
                    *m.entry_mut(p * n + u, p) -= c;
                }
            }
        }
        m
    }

    fn left_invariance_operator(&self, s: &BicovStructure) -> Matrix {
        let dim = s.dim();
        let mut m = s.left_coact().clone();
        for p in 0..dim {
            for (u, c) in self.host.unit().iter().enumerate() {
                if !c.is_zero() {
                    *m.entry_mut(u * dim + p, p) -= c;
                }
            }
        }
        m
    }

    /// A basis of the right-invariant subspace computed as a kernel,
    /// independently of `R`.
    pub fn right_invariant_kernel(&self) -> Matrix {
        self.right_invariance_operator(&self.coords).kernel()
    }

    pub fn left_invariant_kernel(&self) -> Matrix {
        self.left_invariance_operator(&self.coords).kernel()
    }

    /// Bimodule axioms, invariance of the bases and the identities for `R`.
    pub fn verify(&self) -> Report {
        let h = &self.host;
        let (n, d) = (h.dim(), self.d);
        let mut r = self.presentation.verify(h);
        r.instance = h.name().to_string();
        r.absorb("", self.yd.verify());
        r.record("left_invariant_basis", {
            let lk = self.left_invariant_kernel();
            ensure(lk.cols() == d, || format!("left-invariant subspace has dimension {}", lk.cols()))
        });
        r.record("r.comatrix", {
            let mut out = Ok(());
            'outer: for i in 0..d {
                for j in 0..d {
                    let lhs = h.comul(&self.r[i][j]);
                    let mut rhs = elem::zero(n * n);
                    for k in 0..d {
                        elem::add_scaled(
                            &mut rhs,
                            &Cyclotomic::one(),
                            &crate::hopf::tensor_product(&self.r[i][k], &self.r[k][j]),
                        );
                    }
                    if lhs != rhs {
                        out = Err(format!("Delta(R_{}{}) (i,j) = ({},{})", i + 1, j + 1, i + 1, j + 1));
                        break 'outer;
                    }
                    let e = h.eps(&self.r[i][j]);
                    let delta = if i == j { Cyclotomic::one() } else { Cyclotomic::zero() };
                    if e != delta {
                        out = Err(format!("eps(R_{}{}) != delta", i + 1, j + 1));
                        break 'outer;
                    }
                }
            }
            out
        });
        r.record("r.antipode", {
            let mut out = Ok(());
            'outer2: for i in 0..d {
                for j in 0..d {
                    let mut a = h.zero();
                    let mut b = h.zero();
                    for k in 0..d {
                        elem::add_scaled(&mut a, &Cyclotomic::one(), &h.mul(&h.antipode(&self.r[i][k]), &self.r[k][j]));
                        elem::add_scaled(&mut b, &Cyclotomic::one(), &h.mul(&self.r[i][k], &h.antipode(&self.r[k][j])));
                    }
                    let expected = if i == j { h.one() } else { h.zero() };
                    if a != expected || b != expected {
                        out = Err(format!("(i,j) = ({},{})", i + 1, j + 1));
                        break 'outer2;
                    }
                }
            }
            out
        });
        r.record("right_invariants", {
            let op = self.right_invariance_operator(&self.coords);
            let etas = self.right_invariants();
            let all_invariant = etas.iter().all(|e| elem::is_zero(&op.apply(e).expect("dimension")));
            let span = Matrix::from_columns(self.dim(), &etas).expect("shape").rank();
            let kernel = op.kernel().cols();
            if !all_invariant {
                Err("eta_k is not right-invariant".into())
            } else if span != d || kernel != d {
                Err(format!("rank {span}, invariant subspace dimension {kernel}"))
            } else {
                Ok(())
            }
        });
        r.record("normal_form.round_trip", {
            let mut out = Ok(());
            for p in 0..self.dim() {
                let x = BimElement {
                    coeffs: self.coeffs_from_rc(&elem::basis(self.dim(), p)),
                };
                match self.left_coeffs(&x) {
                    Ok(b) if self.from_left_coeffs(&b) == x => {}
                    _ => {
                        out = Err(format!("right coordinate {p}"));
                        break;
                    }
                }
            }
            out
        });
        r
    }

    /// The `k`-th tensor power over the host, in right coordinates.
    pub fn tensor_power(&self, k: usize) -> &BicovStructure {
        assert!((1..=3).contains(&k), "tensor powers 1..=3 are supported");
        self.powers[k - 1].get_or_init(|| self.build_power(k))
    }

    fn build_power(&self, k: usize) -> BicovStructure {
        if k == 1 {
            return self.coords.clone();
        }
        let h = &self.host;
        let (n, d) = (h.dim(), self.d);
        let dk = d.pow(k as u32);
        let dim = dk * n;
        let right: Vec<Matrix> = (0..n)
            .map(|b| {
                let mut m = Matrix::zeros(dim, dim);
                for idx in 0..dk {
                    for a in 0..n {
                        for (c, x) in h.product_terms(a, b) {
                            *m.entry_mut(idx * n + c, idx * n + a) += x;
                        }
                    }
                }
                m
            })
            .collect();
        let left: Vec<Matrix> = (0..n)
            .map(|b| {
                let mut m = Matrix::zeros(dim, dim);
                for idx in 0..dk {
                    let pushed = self.push(&h.basis(b), idx, k);
                    for (j, y) in pushed.iter().enumerate() {
                        if elem::is_zero(y) {
                            continue;
                        }
                        for a in 0..n {
                            let ya = h.mul(y, &h.basis(a));
                            for (c, z) in ya.iter().enumerate() {
                                if !z.is_zero() {
                                    *m.entry_mut(j * n + c, idx * n + a) += z;
                                }
                            }
                        }
                    }
                }
                m
            })
            .collect();
        let mut lco = Matrix::zeros(n * dim, dim);
        for idx in 0..dk {
            for a in 0..n {
                for (a1, a2, c) in h.coproduct_terms(a) {
                    *lco.entry_mut(a1 * dim + idx * n + a2, idx * n + a) += c;
                }
            }
        }
        // w_I a -> sum_J w_J a1 (x) R_JI a2
        let rprod = |jj: usize, ii: usize| -> Element {
            let js = digits(jj, d, k);
            let is = digits(ii, d, k);
            js.iter()
                .zip(&is)
                .fold(h.one(), |acc, (&j, &i)| h.mul(&acc, &self.r[j][i]))
        };
        let mut rco = Matrix::zeros(dim * n, dim);
        for ii in 0..dk {
            for jj in 0..dk {
                let rj = rprod(jj, ii);
                if elem::is_zero(&rj) {
                    continue;
                }
                for a in 0..n {
                    for (a1, a2, c) in h.coproduct_terms(a) {
                        let x = h.mul(&rj, &h.basis(*a2));
                        for (y, xy) in x.iter().enumerate() {
                            if !xy.is_zero() {
                                *rco.entry_mut((jj * n + a1) * n + y, ii * n + a) += &(c * xy);
                            }
                        }
                    }
                }
            }
        }
        BicovStructure::new(n, Some(left), right, lco, rco).expect("tensor power shapes")
    }

    /// `x . w_I = sum_J w_J . y_J`, returned as `(y_J)` over multi-indices of length `k`.
    pub fn push(&self, x: &[Cyclotomic], idx: usize, k: usize) -> Vec<Element> {
        let h = &self.host;
        let (n, d) = (h.dim(), self.d);
        let is = digits(idx, d, k);
        let mut cur: Vec<(usize, Element)> = vec![(0, x.to_vec())];
        for &i in &is {
            let mut next = Vec::new();
            for (prefix, y) in cur {
                for kk in 0..d {
                    let c = self.exchange[i][kk].apply(&y).expect("dimension");
                    if !elem::is_zero(&c) {
                        next.push((prefix * d + kk, c));
                    }
                }
            }
            cur = next;
        }
        let mut out = vec![elem::zero(n); d.pow(k as u32)];
        for (j, y) in cur {
            elem::add_scaled(&mut out[j], &Cyclotomic::one(), &y);
        }
        out
    }

    /// `X (x)_A Y` for `X` in power `p` and `Y` in power `q`, both in right coordinates.
    pub fn mul_tensor(&self, x: &[Cyclotomic], p: usize, y: &[Cyclotomic], q: usize) -> Vec<Cyclotomic> {
        let h = &self.host;
        let (n, d) = (h.dim(), self.d);
        let dq = d.pow(q as u32);
        let mut out = elem::zero(d.pow((p + q) as u32) * n);
        for (ii, xi) in x.chunks(n).enumerate() {
            if elem::is_zero(xi) {
                continue;
            }
            let mut pushed_total = elem::zero(dq * n);
            for (jj, yj) in y.chunks(n).enumerate() {
                if elem::is_zero(yj) {
                    continue;
                }
                let pushed = self.push(xi, jj, q);
                for (kk, z) in pushed.iter().enumerate() {
                    if elem::is_zero(z) {
                        continue;
                    }
                    let zy = h.mul(z, yj);
                    elem::add_scaled(&mut pushed_total[kk * n..(kk + 1) * n], &Cyclotomic::one(), &zy);
                }
            }
            elem::add_scaled(&mut out[ii * dq * n..(ii + 1) * dq * n], &Cyclotomic::one(), &pushed_total);
        }
        out
    }

    /// `x (x)_A y` for `x, y` in right coordinates of `M`, through a cached
    /// table on basis pairs.
    pub fn tensor2(&self, x: &[Cyclotomic], y: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let dim = self.dim();
        let table = self.pairs.get_or_init(|| {
            let mut t = Vec::with_capacity(dim * dim);
            for p in 0..dim {
                for q in 0..dim {
                    t.push(self.mul_tensor(&elem::basis(dim, p), 1, &elem::basis(dim, q), 1));
                }
            }
            t
        });
        let mut out = elem::zero(dim * self.d);
        for (p, xp) in x.iter().enumerate() {
            if xp.is_zero() {
                continue;
            }
            for (q, yq) in y.iter().enumerate() {
                if !yq.is_zero() {
                    elem::add_scaled(&mut out, &(xp * yq), &table[p * dim + q]);
                }
            }
        }
        out
    }

    /// `tensor2` for presentation vectors.
    pub fn tensor2_presented(&self, x: &[Cyclotomic], y: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let xr = self.to_right.apply(x).expect("dimension");
        let yr = self.to_right.apply(y).expect("dimension");
        self.tensor2(&xr, &yr)
    }

    /// Right multiplication by `a` on power `k`.
    pub fn right_mul_matrix(&self, a: &[Cyclotomic], k: usize) -> Matrix {
        let s = self.tensor_power(k);
        let mut out = Matrix::zeros(s.dim(), s.dim());
        for (b, c) in a.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&s.right_act()[b].scale(c)).expect("dimension");
            }
        }
        out
    }
}

/// Multi-index digits in base `d`, first most significant.
pub fn digits(mut idx: usize, d: usize, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

fn conjugate(s: &BicovStructure, t: &Matrix, tinv: &Matrix) -> Result<BicovStructure> {
    let n = s.host_dim();
    let left = match s.left_act() {
        Some(l) => Some(l.iter().map(|m| t.matmul(m)?.matmul(tinv)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let right = s
        .right_act()
        .iter()
        .map(|m| t.matmul(m)?.matmul(tinv))
        .collect::<Result<Vec<_>>>()?;
    let lco = Matrix::identity(n).kron(t).matmul(s.left_coact())?.matmul(tinv)?;
    let rco = t.kron(&Matrix::identity(n)).matmul(s.right_coact())?.matmul(tinv)?;
    BicovStructure::new(n, left, right, lco, rco)
}

/// `sum_i w_i a_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimElement {
    pub coeffs: Vec<Element>,
}

/// `sum_{i,j} w_i (x) w_j a_ij`, `coeffs[i][j] = a_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorSqElement {
    pub coeffs: Vec<Vec<Element>>,
}

impl TensorSqElement {
    pub fn from_rc(v: &[Cyclotomic], d: usize, n: usize) -> Self {
        let coeffs = (0..d)
            .map(|i| (0..d).map(|j| v[(i * d + j) * n..(i * d + j + 1) * n].to_vec()).collect())
            .collect();
        TensorSqElement { coeffs }
    }

    pub fn to_rc(&self) -> Vec<Cyclotomic> {
        self.coeffs.iter().flatten().flat_map(|a| a.iter().cloned()).collect()
    }
}
