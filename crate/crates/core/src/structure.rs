//! Bicovariant (bi)module structures on a finite-dimensional space,
//! materialized as exact matrices, and the checks that go with them.

use num_traits::One;

use crate::error::{Error, Result};
use crate::hopf::{elem, Functional2, HopfAlgebra};
use crate::linalg::Matrix;
use crate::report::{Outcome, Report};
use crate::scalar::Cyclotomic;

/// Nonzero `(a, m, b, c)` with `m_(-1) (x) m_(0) (x) m_(1) = sum c e_a (x) m (x) e_b`.
pub type TwoSided = Vec<(usize, usize, usize, Cyclotomic)>;

/// A space of dimension `dim` over a Hopf algebra of dimension `n` with
/// - `left_act[a]`: `m -> e_a . m` (absent for right modules),
/// - `right_act[a]`: `m -> m . e_a`,
/// - `left_coact`: `(n*dim) x dim`, row `a*dim + m'` for `e_a (x) m'`,
/// - `right_coact`: `(dim*n) x dim`, row `m'*n + a` for `m' (x) e_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BicovStructure {
    dim: usize,
    n: usize,
    left_act: Option<Vec<Matrix>>,
    right_act: Vec<Matrix>,
    left_coact: Matrix,
    right_coact: Matrix,
}

/// A bicovariant right module: the same data without a left action.
pub type RightBicovModule = BicovStructure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Covariance {
    Left,
    Right,
    Bi,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Linearity {
    pub left: bool,
    pub right: bool,
}

impl BicovStructure {
    pub fn new(
        n: usize,
        left_act: Option<Vec<Matrix>>,
        right_act: Vec<Matrix>,
        left_coact: Matrix,
        right_coact: Matrix,
    ) -> Result<Self> {
        let dim = left_coact.cols();
        let square = |m: &Matrix| m.rows() == dim && m.cols() == dim;
        let ok = right_act.len() == n
            && right_act.iter().all(square)
            && left_act.as_ref().map_or(true, |l| l.len() == n && l.iter().all(square))
            && left_coact.rows() == n * dim
            && right_coact.rows() == dim * n
            && right_coact.cols() == dim;
        if !ok {
            return Err(Error::ShapeMismatch(format!(
                "bicovariant structure of dimension {dim} over algebra of dimension {n}"
            )));
        }
        Ok(BicovStructure {
            dim,
            n,
            left_act,
            right_act,
            left_coact,
            right_coact,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn host_dim(&self) -> usize {
        self.n
    }

    pub fn has_left_action(&self) -> bool {
        self.left_act.is_some()
    }

    pub fn left_act(&self) -> Option<&[Matrix]> {
        self.left_act.as_deref()
    }

    pub fn right_act(&self) -> &[Matrix] {
        &self.right_act
    }

    pub fn left_coact(&self) -> &Matrix {
        &self.left_coact
    }

    pub fn right_coact(&self) -> &Matrix {
        &self.right_coact
    }

    /// Drops the left action.
    pub fn to_right_module(&self) -> RightBicovModule {
        let mut s = self.clone();
        s.left_act = None;
        s
    }

    pub fn basis(&self, m: usize) -> Vec<Cyclotomic> {
        elem::basis(self.dim, m)
    }

    /// `x . v` for `x` in the host.
    pub fn left(&self, x: &[Cyclotomic], v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let acts = self.left_act.as_ref().expect("structure has a left action");
        combine(acts, x, v, self.dim)
    }

    /// `v . x` for `x` in the host.
    pub fn right(&self, v: &[Cyclotomic], x: &[Cyclotomic]) -> Vec<Cyclotomic> {
        combine(&self.right_act, x, v, self.dim)
    }

    pub fn lco(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        self.left_coact.apply(v).expect("dimension")
    }

    pub fn rco(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        self.right_coact.apply(v).expect("dimension")
    }

    /// `(id (x) right coaction)(left coaction)(e_m)`, sparse.
    pub fn two_sided(&self, m: usize) -> TwoSided {
        let (n, dd) = (self.n, self.dim);
        let mut out = Vec::new();
        for a in 0..n {
            for mp in 0..dd {
                let c = self.left_coact.get(a * dd + mp, m);
                if c.is_zero() {
                    continue;
                }
                for mq in 0..dd {
                    for b in 0..n {
                        let d = self.right_coact.get(mq * n + b, mp);
                        if !d.is_zero() {
                            out.push((a, mq, b, c * d));
                        }
                    }
                }
            }
        }
        out
    }

    /// Module, comodule, covariance and coaction-compatibility axioms.
    pub fn verify(&self, host: &HopfAlgebra) -> Report {
        let mut r = Report::new(host.name());
        if host.dim() != self.n {
            r.record("host", Err("host dimension mismatch".into()));
            return r;
        }
        if self.left_act.is_some() {
            r.record("left_module", self.check_left_module(host));
            r.record("bimodule", self.check_bimodule());
        }
        r.record("right_module", self.check_right_module(host));
        r.record("left_comodule", self.check_left_comodule(host));
        r.record("right_comodule", self.check_right_comodule(host));
        r.record("left_covariance", self.check_left_covariance(host));
        r.record("right_covariance", self.check_right_covariance(host));
        r.record("coactions_commute", self.check_coactions_commute());
        r
    }

    fn check_left_module(&self, host: &HopfAlgebra) -> Outcome {
        let acts = self.left_act.as_ref().expect("checked");
        let n = self.n;
        let unit = combine_mats(acts, host.unit(), self.dim);
        if !unit.is_identity() {
            return Err("1 . m != m".into());
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = &acts[a] * &acts[b];
                let rhs = combine_mats(acts, &host.mul_basis(a, b), self.dim);
                if lhs != rhs {
                    return Err(format!("a.(b.m) != (ab).m at (a,b) = ({a},{b})"));
                }
            }
        }
        Ok(())
    }

    fn check_right_module(&self, host: &HopfAlgebra) -> Outcome {
        let n = self.n;
        let unit = combine_mats(&self.right_act, host.unit(), self.dim);
        if !unit.is_identity() {
            return Err("m . 1 != m".into());
        }
        for a in 0..n {
            for b in 0..n {
                let lhs = &self.right_act[b] * &self.right_act[a];
                let rhs = combine_mats(&self.right_act, &host.mul_basis(a, b), self.dim);
                if lhs != rhs {
                    return Err(format!("(m.a).b != m.(ab) at (a,b) = ({a},{b})"));
                }
            }
        }
        Ok(())
    }

    fn check_bimodule(&self) -> Outcome {
        let acts = self.left_act.as_ref().expect("checked");
        for a in 0..self.n {
            for b in 0..self.n {
                if &acts[a] * &self.right_act[b] != &self.right_act[b] * &acts[a] {
                    return Err(format!("(a.m).b != a.(m.b) at (a,b) = ({a},{b})"));
                }
            }
        }
        Ok(())
    }

    fn check_left_comodule(&self, host: &HopfAlgebra) -> Outcome {
        let (n, dd) = (self.n, self.dim);
        for m in 0..dd {
            let co = self.left_coact.column(m);
            let mut lhs = elem::zero(n * n * dd);
            let mut rhs = elem::zero(n * n * dd);
            let mut counit = elem::zero(dd);
            for a in 0..n {
                for mp in 0..dd {
                    let c = &co[a * dd + mp];
                    if c.is_zero() {
                        continue;
                    }
                    let inner = self.left_coact.column(mp);
                    for (k, x) in inner.iter().enumerate() {
                        if !x.is_zero() {
                            lhs[a * n * dd + k] += &(c * x);
                        }
                    }
                    for (a1, a2, y) in host.coproduct_terms(a) {
                        rhs[(a1 * n + a2) * dd + mp] += &(c * y);
                    }
                    let e = &host.counit()[a];
                    if !e.is_zero() {
                        counit[mp] += &(c * e);
                    }
                }
            }
            if lhs != rhs {
                return Err(format!("coassociativity of the left coaction fails on basis vector {m}"));
            }
            if counit != self.basis(m) {
                return Err(format!("counit of the left coaction fails on basis vector {m}"));
            }
        }
        Ok(())
    }

    fn check_right_comodule(&self, host: &HopfAlgebra) -> Outcome {
        let (n, dd) = (self.n, self.dim);
        for m in 0..dd {
            let co = self.right_coact.column(m);
            let mut lhs = elem::zero(dd * n * n);
            let mut rhs = elem::zero(dd * n * n);
            let mut counit = elem::zero(dd);
            for mp in 0..dd {
                for a in 0..n {
                    let c = &co[mp * n + a];
                    if c.is_zero() {
                        continue;
                    }
                    let inner = self.right_coact.column(mp);
                    for mq in 0..dd {
                        for b in 0..n {
                            let x = &inner[mq * n + b];
                            if !x.is_zero() {
                                lhs[(mq * n + b) * n + a] += &(c * x);
                            }
                        }
                    }
                    for (a1, a2, y) in host.coproduct_terms(a) {
                        rhs[(mp * n + a1) * n + a2] += &(c * y);
                    }
                    let e = &host.counit()[a];
                    if !e.is_zero() {
                        counit[mp] += &(c * e);
                    }
                }
            }
            if lhs != rhs {
                return Err(format!("coassociativity of the right coaction fails on basis vector {m}"));
            }
            if counit != self.basis(m) {
                return Err(format!("counit of the right coaction fails on basis vector {m}"));
            }
        }
        Ok(())
    }

    fn check_left_covariance(&self, host: &HopfAlgebra) -> Outcome {
        let (n, dd) = (self.n, self.dim);
        for m in 0..dd {
            let co = self.left_coact.column(m);
            for b in 0..n {
                // Delta_M(m . b) = Delta_M(m) Delta(b)
                let lhs = self.lco(&self.right_act[b].column(m));
                let mut rhs = elem::zero(n * dd);
                for a in 0..n {
                    for mp in 0..dd {
                        let c = &co[a * dd + mp];
                        if c.is_zero() {
                            continue;
                        }
                        for (b1, b2, y) in host.coproduct_terms(b) {
                            let cy = c * y;
                            let mv = self.right_act[*b2].column(mp);
                            for (k, x) in host.product_terms(a, *b1) {
                                let s = &cy * x;
                                for (q, z) in mv.iter().enumerate() {
                                    if !z.is_zero() {
                                        rhs[k * dd + q] += &(&s * z);
                                    }
                                }
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return Err(format!(
                        "left coaction is not right-covariant at (basis vector, a) = ({m},{})",
                        host.labels()[b]
                    ));
                }
                let Some(acts) = &self.left_act else { continue };
                // Delta_M(b . m) = Delta(b) Delta_M(m)
                let lhs = self.lco(&acts[b].column(m));
                let mut rhs = elem::zero(n * dd);
                for a in 0..n {
                    for mp in 0..dd {
                        let c = &co[a * dd + mp];
                        if c.is_zero() {
                            continue;
                        }
                        for (b1, b2, y) in host.coproduct_terms(b) {
                            let cy = c * y;
                            let mv = acts[*b2].column(mp);
                            for (k, x) in host.product_terms(*b1, a) {
                                let s = &cy * x;
                                for (q, z) in mv.iter().enumerate() {
                                    if !z.is_zero() {
                                        rhs[k * dd + q] += &(&s * z);
                                    }
                                }
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return Err(format!(
                        "left coaction is not left-covariant at (a, basis vector) = ({},{m})",
                        host.labels()[b]
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_right_covariance(&self, host: &HopfAlgebra) -> Outcome {
        let (n, dd) = (self.n, self.dim);
        for m in 0..dd {
            let co = self.right_coact.column(m);
            for b in 0..n {
                let lhs = self.rco(&self.right_act[b].column(m));
                let mut rhs = elem::zero(dd * n);
                for mp in 0..dd {
                    for a in 0..n {
                        let c = &co[mp * n + a];
                        if c.is_zero() {
                            continue;
                        }
                        for (b1, b2, y) in host.coproduct_terms(b) {
                            let cy = c * y;
                            let mv = self.right_act[*b1].column(mp);
                            for (k, x) in host.product_terms(a, *b2) {
                                let s = &cy * x;
                                for (q, z) in mv.iter().enumerate() {
                                    if !z.is_zero() {
                                        rhs[q * n + k] += &(&s * z);
                                    }
                                }
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return Err(format!(
                        "right coaction is not right-covariant at (basis vector, a) = ({m},{})",
                        host.labels()[b]
                    ));
                }
                let Some(acts) = &self.left_act else { continue };
                let lhs = self.rco(&acts[b].column(m));
                let mut rhs = elem::zero(dd * n);
                for mp in 0..dd {
                    for a in 0..n {
                        let c = &co[mp * n + a];
                        if c.is_zero() {
                            continue;
                        }
                        for (b1, b2, y) in host.coproduct_terms(b) {
                            let cy = c * y;
                            let mv = acts[*b1].column(mp);
                            for (k, x) in host.product_terms(*b2, a) {
                                let s = &cy * x;
                                for (q, z) in mv.iter().enumerate() {
                                    if !z.is_zero() {
                                        rhs[q * n + k] += &(&s * z);
                                    }
                                }
                            }
                        }
                    }
                }
                if lhs != rhs {
                    return Err(format!(
                        "right coaction is not left-covariant at (a, basis vector) = ({},{m})",
                        host.labels()[b]
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_coactions_commute(&self) -> Outcome {
        let (n, dd) = (self.n, self.dim);
        for m in 0..dd {
            let mut lhs = elem::zero(n * dd * n);
            for (a, mq, b, c) in self.two_sided(m) {
                lhs[(a * dd + mq) * n + b] += &c;
            }
            let mut rhs = elem::zero(n * dd * n);
            let co = self.right_coact.column(m);
            for mp in 0..dd {
                for b in 0..n {
                    let c = &co[mp * n + b];
                    if c.is_zero() {
                        continue;
                    }
                    let l = self.left_coact.column(mp);
                    for a in 0..n {
                        for mq in 0..dd {
                            let x = &l[a * dd + mq];
                            if !x.is_zero() {
                                rhs[(a * dd + mq) * n + b] += &(c * x);
                            }
                        }
                    }
                }
            }
            if lhs != rhs {
                return Err(format!("the two coactions do not commute on basis vector {m}"));
            }
        }
        Ok(())
    }

    /// Cocycle deformation of the actions; coactions are kept.
    ///
    /// `m * a = gamma(m_(-1) (x) a_(1)) m_(0) . a_(2) gammabar(m_(1) (x) a_(3))`
    /// and symmetrically for the left action.
    pub fn twist(&self, host: &HopfAlgebra, gamma: &Functional2, gammabar: &Functional2) -> Result<Self> {
        if host.dim() != self.n || gamma.dim() != self.n || gammabar.dim() != self.n {
            return Err(Error::HostMismatch("twist of a structure over a different algebra".into()));
        }
        let (n, dd) = (self.n, self.dim);
        let legs: Vec<TwoSided> = (0..dd).map(|m| self.two_sided(m)).collect();
        let threes: Vec<Vec<(usize, usize, usize, Cyclotomic)>> =
            (0..n).map(|a| coproduct3(host, a)).collect();
        let mut right_act = vec![Matrix::zeros(dd, dd); n];
        let mut left_act = self.left_act.as_ref().map(|_| vec![Matrix::zeros(dd, dd); n]);
        for m in 0..dd {
            for (p, mp, q, c) in &legs[m] {
                for a in 0..n {
                    for (a1, a2, a3, t) in &threes[a] {
                        let ct = c * t;
                        let rg = gamma.at(*p, *a1);
                        let rb = gammabar.at(*q, *a3);
                        if !rg.is_zero() && !rb.is_zero() {
                            let s = &ct * &(rg * rb);
                            let col = self.right_act[*a2].column(*mp);
                            add_column(&mut right_act[a], m, &s, &col);
                        }
                        if let (Some(out), Some(acts)) = (left_act.as_mut(), self.left_act.as_ref()) {
                            let lg = gamma.at(*a1, *p);
                            let lb = gammabar.at(*a3, *q);
                            if !lg.is_zero() && !lb.is_zero() {
                                let s = &ct * &(lg * lb);
                                let col = acts[*a2].column(*mp);
                                add_column(&mut out[a], m, &s, &col);
                            }
                        }
                    }
                }
            }
        }
        Self::new(n, left_act, right_act, self.left_coact.clone(), self.right_coact.clone())
    }
}

/// `(Delta (x) id) Delta(e_a)` as nonzero `(a1, a2, a3, c)`.
pub fn coproduct3(host: &HopfAlgebra, a: usize) -> Vec<(usize, usize, usize, Cyclotomic)> {
    let n = host.dim();
    let mut acc = elem::zero(n * n * n);
    for (j, k, c) in host.coproduct_terms(a) {
        for (p, q, d) in host.coproduct_terms(*j) {
            acc[(p * n + q) * n + k] += &(c * d);
        }
    }
    acc.into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i / (n * n), (i / n) % n, i % n, c))
        .collect()
}

fn add_column(m: &mut Matrix, col: usize, s: &Cyclotomic, v: &[Cyclotomic]) {
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            *m.entry_mut(i, col) += &(s * x);
        }
    }
}

fn combine(acts: &[Matrix], x: &[Cyclotomic], v: &[Cyclotomic], dim: usize) -> Vec<Cyclotomic> {
    let mut out = elem::zero(dim);
    for (a, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let w = acts[a].apply(v).expect("dimension");
        elem::add_scaled(&mut out, c, &w);
    }
    out
}

fn combine_mats(acts: &[Matrix], x: &[Cyclotomic], dim: usize) -> Matrix {
    let mut out = Matrix::zeros(dim, dim);
    for (a, c) in x.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&acts[a].scale(c)).expect("dimension");
        }
    }
    out
}

/// Checks that `t: src -> tgt` intertwines the requested coactions and,
/// optionally, actions. All checks are exact matrix identities.
pub fn check_covariant_map(
    t: &Matrix,
    src: &BicovStructure,
    tgt: &BicovStructure,
    which: Covariance,
    linearity: Linearity,
) -> Result<Report> {
    if t.cols() != src.dim || t.rows() != tgt.dim || src.n != tgt.n {
        return Err(Error::ShapeMismatch(format!(
            "map {}x{} between spaces of dimension {} and {}",
            t.rows(),
            t.cols(),
            src.dim,
            tgt.dim
        )));
    }
    let n = src.n;
    let mut r = Report::new("map");
    if matches!(which, Covariance::Left | Covariance::Bi) {
        let lhs = Matrix::identity(n).kron(t).matmul(&src.left_coact)?;
        let rhs = tgt.left_coact.matmul(t)?;
        r.record("left_covariant", first_col_diff(&lhs, &rhs));
    }
    if matches!(which, Covariance::Right | Covariance::Bi) {
        let lhs = t.kron(&Matrix::identity(n)).matmul(&src.right_coact)?;
        let rhs = tgt.right_coact.matmul(t)?;
        r.record("right_covariant", first_col_diff(&lhs, &rhs));
    }
    if linearity.right {
        r.record("right_linear", {
            let mut out = Ok(());
            for a in 0..n {
                if t.matmul(&src.right_act[a])? != tgt.right_act[a].matmul(t)? {
                    out = Err(format!("T(m.e_{a}) != T(m).e_{a}"));
                    break;
                }
            }
            out
        });
    }
    if linearity.left {
        r.record("left_linear", {
            match (&src.left_act, &tgt.left_act) {
                (Some(sl), Some(tl)) => {
                    let mut out = Ok(());
                    for a in 0..n {
                        if t.matmul(&sl[a])? != tl[a].matmul(t)? {
                            out = Err(format!("T(e_{a}.m) != e_{a}.T(m)"));
                            break;
                        }
                    }
                    out
                }
                _ => Err("left linearity requested on a structure without left action".into()),
            }
        });
    }
    Ok(r)
}

fn first_col_diff(a: &Matrix, b: &Matrix) -> Outcome {
    for j in 0..a.cols() {
        if a.column(j) != b.column(j) {
            return Err(format!("differs on basis vector {j}"));
        }
    }
    Ok(())
}

/// The host algebra viewed as a bicovariant bimodule over itself.
pub fn regular(host: &HopfAlgebra) -> BicovStructure {
    let n = host.dim();
    let left: Vec<Matrix> = (0..n)
        .map(|a| Matrix::from_fn(n, n, |k, b| host.mul_basis(a, b)[k].clone()))
        .collect();
    let right: Vec<Matrix> = (0..n)
        .map(|a| Matrix::from_fn(n, n, |k, b| host.mul_basis(b, a)[k].clone()))
        .collect();
    let co = Matrix::from_fn(n * n, n, |row, b| {
        let d = host.comul(&host.basis(b));
        d[row].clone()
    });
    BicovStructure::new(n, Some(left), right, co.clone(), co).expect("regular shapes")
}

/// Whether `a` is a scalar multiple of the identity matrix.
pub fn scalar_identity(a: &Matrix) -> Option<Cyclotomic> {
    let s = if a.rows() == 0 { Cyclotomic::one() } else { a.get(0, 0).clone() };
    if *a == Matrix::identity(a.rows()).scale(&s) {
        Some(s)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn regular_bimodule_is_bicovariant() {
        for name in ["Z4", "S3"] {
            let g = FiniteGroup::named(name).unwrap();
            let a = HopfAlgebra::group_algebra(&g, 1).unwrap();
            let r = regular(&a).verify(&a);
            assert!(r.passed(), "{}", r.to_text());
            let f = HopfAlgebra::function_algebra(&g, 1).unwrap();
            let r = regular(&f).verify(&f);
            assert!(r.passed(), "{}", r.to_text());
        }
    }

    #[test]
    fn identity_map_is_bicovariant_and_bilinear() {
        let a = HopfAlgebra::group_algebra(&FiniteGroup::symmetric3(), 1).unwrap();
        let s = regular(&a);
        let r = check_covariant_map(
            &Matrix::identity(6),
            &s,
            &s,
            Covariance::Bi,
            Linearity { left: true, right: true },
        )
        .unwrap();
        assert!(r.passed());
        assert!(check_covariant_map(&Matrix::identity(5), &s, &s, Covariance::Bi, Linearity::default()).is_err());
    }
}
