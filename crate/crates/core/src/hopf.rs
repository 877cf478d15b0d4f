//! Finite-dimensional Hopf algebras as structure tensors, and bilinear
//! functionals on `A (x) A` with their convolution product.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::linalg::{contract, Matrix, Tensor, Tensor3};
use crate::report::{ensure, Report};
use crate::scalar::Cyclotomic;

/// Coordinates in the basis `e_0 .. e_{n-1}`.
pub type Element = Vec<Cyclotomic>;

pub mod elem {
    use super::*;

    pub fn zero(n: usize) -> Element {
        vec![Cyclotomic::zero(); n]
    }

    pub fn basis(n: usize, i: usize) -> Element {
        let mut v = zero(n);
        v[i] = Cyclotomic::one();
        v
    }

    pub fn add(a: &[Cyclotomic], b: &[Cyclotomic]) -> Element {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(a: &[Cyclotomic], b: &[Cyclotomic]) -> Element {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn add_scaled(acc: &mut [Cyclotomic], s: &Cyclotomic, b: &[Cyclotomic]) {
        if s.is_zero() {
            return;
        }
        for (x, y) in acc.iter_mut().zip(b) {
            if !y.is_zero() {
                *x += &(s * y);
            }
        }
    }

    pub fn scale(s: &Cyclotomic, a: &[Cyclotomic]) -> Element {
        a.iter().map(|x| s * x).collect()
    }

    pub fn is_zero(a: &[Cyclotomic]) -> bool {
        a.iter().all(Cyclotomic::is_zero)
    }
}

type Sparse2 = Vec<(usize, Cyclotomic)>;
type Sparse3 = Vec<(usize, usize, Cyclotomic)>;

#[derive(Clone, Debug)]
pub struct HopfAlgebra {
    name: String,
    labels: Vec<String>,
    order: u32,
    mult: Tensor3,
    unit: Element,
    comult: Tensor3,
    counit: Element,
    antipode: Matrix,
    // nonzero structure constants: products[i*n+j], coproducts[i], antipodes[i]
    products: Vec<Sparse2>,
    coproducts: Vec<Sparse3>,
    antipodes: Vec<Sparse2>,
}

impl PartialEq for HopfAlgebra {
    /// Structure tensors only; names and labels are cosmetic.
    fn eq(&self, other: &Self) -> bool {
        self.mult == other.mult
            && self.unit == other.unit
            && self.comult == other.comult
            && self.counit == other.counit
            && self.antipode == other.antipode
    }
}

impl Eq for HopfAlgebra {}

impl HopfAlgebra {
    /// Packages structure tensors after a shape check. The axioms are not
    /// checked here; see [`verify_hopf`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        labels: Vec<String>,
        order: u32,
        mult: Tensor3,
        unit: Element,
        comult: Tensor3,
        counit: Element,
        antipode: Matrix,
    ) -> Result<Self> {
        let n = labels.len();
        let shape_ok = mult.shape() == [n, n, n]
            && comult.shape() == [n, n, n]
            && unit.len() == n
            && counit.len() == n
            && antipode.rows() == n
            && antipode.cols() == n;
        if !shape_ok {
            return Err(Error::ShapeMismatch(format!(
                "Hopf algebra {name:?} structure tensors do not match dimension {n}"
            )));
        }
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let mut products = vec![Vec::new(); n * n];
        for (idx, v) in mult.nonzeros() {
            products[idx[0] * n + idx[1]].push((idx[2], v));
        }
        let mut coproducts = vec![Vec::new(); n];
        for (idx, v) in comult.nonzeros() {
            coproducts[idx[0]].push((idx[1], idx[2], v));
        }
        let antipodes = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| !antipode.get(j, i).is_zero())
                    .map(|j| (j, antipode.get(j, i).clone()))
                    .collect()
            })
            .collect();
        Ok(HopfAlgebra {
            name: name.to_string(),
            labels,
            order,
            mult,
            unit,
            comult,
            counit,
            antipode,
            products,
            coproducts,
            antipodes,
        })
    }

    /// `C[G]`: group-like basis, `S(g) = g^-1`.
    pub fn group_algebra(g: &FiniteGroup, order: u32) -> Result<Self> {
        let n = g.order();
        let mut mult = Tensor::zeros(&[n, n, n]);
        let mut comult = Tensor::zeros(&[n, n, n]);
        let mut antipode = Matrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                mult.set(&[a, b, g.mul(a, b)], Cyclotomic::one());
            }
            comult.set(&[a, a, a], Cyclotomic::one());
            antipode.set(g.inv(a), a, Cyclotomic::one());
        }
        Self::new(
            &format!("C[{}]", g.name()),
            g.labels().to_vec(),
            order,
            mult,
            elem::basis(n, g.identity()),
            comult,
            vec![Cyclotomic::one(); n],
            antipode,
        )
    }

    /// `Fun(G)` in the basis of delta functions.
    pub fn function_algebra(g: &FiniteGroup, order: u32) -> Result<Self> {
        let n = g.order();
        let mut mult = Tensor::zeros(&[n, n, n]);
        let mut comult = Tensor::zeros(&[n, n, n]);
        let mut antipode = Matrix::zeros(n, n);
        for a in 0..n {
            mult.set(&[a, a, a], Cyclotomic::one());
            for b in 0..n {
                comult.set(&[g.mul(a, b), a, b], Cyclotomic::one());
            }
            antipode.set(g.inv(a), a, Cyclotomic::one());
        }
        Self::new(
            &format!("Fun({})", g.name()),
            g.labels().iter().map(|l| format!("d_{l}")).collect(),
            order,
            mult,
            vec![Cyclotomic::one(); n],
            comult,
            elem::basis(n, g.identity()),
            antipode,
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn mult_tensor(&self) -> &Tensor3 {
        &self.mult
    }

    pub fn comult_tensor(&self) -> &Tensor3 {
        &self.comult
    }

    pub fn unit(&self) -> &Element {
        &self.unit
    }

    pub fn counit(&self) -> &Element {
        &self.counit
    }

    pub fn antipode_matrix(&self) -> &Matrix {
        &self.antipode
    }

    pub fn one(&self) -> Element {
        self.unit.clone()
    }

    pub fn zero(&self) -> Element {
        elem::zero(self.dim())
    }

    pub fn basis(&self, i: usize) -> Element {
        elem::basis(self.dim(), i)
    }

    /// Nonzero `(k, c)` with `e_i e_j = sum c e_k`.
    pub fn product_terms(&self, i: usize, j: usize) -> &[(usize, Cyclotomic)] {
        &self.products[i * self.dim() + j]
    }

    /// Nonzero `(j, k, c)` with `Delta(e_i) = sum c e_j (x) e_k`.
    pub fn coproduct_terms(&self, i: usize) -> &[(usize, usize, Cyclotomic)] {
        &self.coproducts[i]
    }

    /// Nonzero `(j, c)` with `S(e_i) = sum c e_j`.
    pub fn antipode_terms(&self, i: usize) -> &[(usize, Cyclotomic)] {
        &self.antipodes[i]
    }

    pub fn mul(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Element {
        let n = self.dim();
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in &self.products[i * n + j] {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> Element {
        let mut out = self.zero();
        for (k, c) in self.product_terms(i, j) {
            out[*k] += c;
        }
        out
    }

    /// `Delta(a)` as a vector indexed by `j*n + k`.
    pub fn comul(&self, a: &[Cyclotomic]) -> Element {
        let n = self.dim();
        let mut out = elem::zero(n * n);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, k, c) in &self.coproducts[i] {
                out[j * n + k] += &(x * c);
            }
        }
        out
    }

    pub fn eps(&self, a: &[Cyclotomic]) -> Cyclotomic {
        let mut s = Cyclotomic::zero();
        for (x, e) in a.iter().zip(&self.counit) {
            if !x.is_zero() && !e.is_zero() {
                s += &(x * e);
            }
        }
        s
    }

    pub fn antipode(&self, a: &[Cyclotomic]) -> Element {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, c) in &self.antipodes[i] {
                out[*j] += &(x * c);
            }
        }
        out
    }

    pub fn scalar(&self, s: &Cyclotomic) -> Element {
        elem::scale(s, &self.unit)
    }

    /// The scalar `s` with `a = s * 1`, if any.
    pub fn as_scalar(&self, a: &[Cyclotomic]) -> Option<Cyclotomic> {
        let s = self.eps(a);
        if elem::sub(a, &self.scalar(&s)).iter().all(Cyclotomic::is_zero) {
            Some(s)
        } else {
            None
        }
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.mul_basis(i, j) == self.mul_basis(j, i)))
    }

    pub fn is_cocommutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            let d = self.comul(&self.basis(i));
            (0..n).all(|j| (0..n).all(|k| d[j * n + k] == d[k * n + j]))
        })
    }

    /// `c1*label1 + c2*label2`, coefficients of 1 omitted.
    pub fn format(&self, a: &[Cyclotomic]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let l = &self.labels[i];
                if c.is_one() {
                    l.clone()
                } else if c.to_rational().is_some() && !c.to_string().contains(' ') {
                    format!("{c}*{l}")
                } else {
                    format!("({c})*{l}")
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Same structure constants, new display name.
    pub fn renamed(&self, name: &str) -> Self {
        let mut h = self.clone();
        h.name = name.to_string();
        h
    }

    fn fmt_idx(&self, idx: &[usize]) -> String {
        let parts: Vec<&str> = idx.iter().map(|&i| self.labels[i].as_str()).collect();
        format!("({})", parts.join(","))
    }
}

/// The seven Hopf algebra axioms, each checked exactly on basis elements.
pub fn verify_hopf(a: &HopfAlgebra) -> Report {
    let mut r = Report::new(a.name());
    let n = a.dim();

    r.record("associativity", {
        let lhs = contract("ijp,pkl->ijkl", &[&a.mult, &a.mult]);
        let rhs = contract("jkp,ipl->ijkl", &[&a.mult, &a.mult]);
        match (lhs, rhs) {
            (Ok(l), Ok(rt)) => first_diff4(&l, &rt, n, |i, j, k, _| a.fmt_idx(&[i, j, k])),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        }
    });

    r.record("unit", {
        let mut out = Ok(());
        'u: for j in 0..n {
            let b = a.basis(j);
            if a.mul(&a.unit, &b) != b || a.mul(&b, &a.unit) != b {
                out = Err(format!("1*{0} or {0}*1 differs from {0}", a.labels[j]));
                break 'u;
            }
        }
        out
    });

    r.record("coassociativity", {
        let lhs = contract("ipl,pjk->ijkl", &[&a.comult, &a.comult]);
        let rhs = contract("ijp,pkl->ijkl", &[&a.comult, &a.comult]);
        match (lhs, rhs) {
            (Ok(l), Ok(rt)) => first_diff4(&l, &rt, n, |i, _, _, _| a.fmt_idx(&[i])),
            (Err(e), _) | (_, Err(e)) => Err(e.to_string()),
        }
    });

    r.record("counit", {
        let mut out = Ok(());
        for i in 0..n {
            let d = a.comul(&a.basis(i));
            let mut left = a.zero();
            let mut right = a.zero();
            for j in 0..n {
                for k in 0..n {
                    let c = &d[j * n + k];
                    if !c.is_zero() {
                        left[k] += &(&a.counit[j] * c);
                        right[j] += &(&a.counit[k] * c);
                    }
                }
            }
            if left != a.basis(i) || right != a.basis(i) {
                out = Err(format!("counit fails on {}", a.labels[i]));
                break;
            }
        }
        out
    });

    r.record("comult_multiplicative", {
        let mut out = Ok(());
        let one_one = tensor_product(&a.unit, &a.unit);
        if a.comul(&a.unit) != one_one {
            out = Err("Delta(1) != 1 (x) 1".to_string());
        }
        'm: for i in 0..n {
            if out.is_err() {
                break;
            }
            for j in 0..n {
                let lhs = a.comul(&a.mul_basis(i, j));
                let rhs = comul_product(a, i, j);
                if lhs != rhs {
                    out = Err(format!("Delta(ab) != Delta(a)Delta(b) at {}", a.fmt_idx(&[i, j])));
                    break 'm;
                }
            }
        }
        out
    });

    r.record("counit_multiplicative", {
        let mut out = ensure(a.eps(&a.unit).is_one(), || "eps(1) != 1".to_string());
        'e: for i in 0..n {
            if out.is_err() {
                break;
            }
            for j in 0..n {
                if a.eps(&a.mul_basis(i, j)) != &a.counit[i] * &a.counit[j] {
                    out = Err(format!("eps(ab) != eps(a)eps(b) at {}", a.fmt_idx(&[i, j])));
                    break 'e;
                }
            }
        }
        out
    });

    r.record("antipode", {
        let mut out = Ok(());
        for i in 0..n {
            let mut left = a.zero();
            let mut right = a.zero();
            for (j, k, c) in a.coproduct_terms(i) {
                let sj = a.antipode(&a.basis(*j));
                let sk = a.antipode(&a.basis(*k));
                elem::add_scaled(&mut left, c, &a.mul(&sj, &a.basis(*k)));
                elem::add_scaled(&mut right, c, &a.mul(&a.basis(*j), &sk));
            }
            let expect = a.scalar(&a.counit[i]);
            if left != expect {
                out = Err(format!("m(S (x) id)Delta fails on {}", a.labels[i]));
                break;
            }
            if right != expect {
                out = Err(format!("m(id (x) S)Delta fails on {}", a.labels[i]));
                break;
            }
        }
        if out.is_ok() && a.antipode.rank() < n {
            out = Err("antipode matrix is not invertible".to_string());
        }
        out
    });

    r
}

fn first_diff4(
    l: &Tensor,
    r: &Tensor,
    n: usize,
    fmt: impl Fn(usize, usize, usize, usize) -> String,
) -> Result<(), String> {
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for m in 0..n {
                    if l.get(&[i, j, k, m]) != r.get(&[i, j, k, m]) {
                        return Err(fmt(i, j, k, m));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `a (x) b` as a vector indexed by `i*n + j`.
pub fn tensor_product(a: &[Cyclotomic], b: &[Cyclotomic]) -> Element {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(if x.is_zero() || y.is_zero() {
                Cyclotomic::zero()
            } else {
                x * y
            });
        }
    }
    out
}

/// `Delta(e_i) Delta(e_j)` in `A (x) A`.
fn comul_product(a: &HopfAlgebra, i: usize, j: usize) -> Element {
    let n = a.dim();
    let mut out = elem::zero(n * n);
    for (p, q, c) in a.coproduct_terms(i) {
        for (s, t, d) in a.coproduct_terms(j) {
            let cd = c * d;
            for (u, x) in a.product_terms(*p, *s) {
                for (v, y) in a.product_terms(*q, *t) {
                    out[u * n + v] += &(&cd * &(x * y));
                }
            }
        }
    }
    out
}

/// A bilinear functional on `A (x) A`, `values[(i, j)] = phi(e_i (x) e_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functional2 {
    values: Matrix,
}

impl Functional2 {
    pub fn new(host: &HopfAlgebra, values: Matrix) -> Result<Self> {
        let n = host.dim();
        if values.rows() != n || values.cols() != n {
            return Err(Error::ShapeMismatch(format!(
                "functional is {}x{}, host has dimension {n}",
                values.rows(),
                values.cols()
            )));
        }
        Ok(Functional2 { values })
    }

    /// `eps (x) eps`, the unit for convolution.
    pub fn counit(host: &HopfAlgebra) -> Self {
        let e = host.counit();
        Functional2 {
            values: Matrix::from_fn(host.dim(), host.dim(), |i, j| &e[i] * &e[j]),
        }
    }

    pub fn values(&self) -> &Matrix {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.rows()
    }

    pub fn at(&self, i: usize, j: usize) -> &Cyclotomic {
        self.values.get(i, j)
    }

    pub fn eval(&self, a: &[Cyclotomic], b: &[Cyclotomic]) -> Cyclotomic {
        let mut s = Cyclotomic::zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let v = self.values.get(i, j);
                if !v.is_zero() {
                    s += &(&(x * y) * v);
                }
            }
        }
        s
    }

    fn check_host(&self, host: &HopfAlgebra) -> Result<()> {
        if self.dim() != host.dim() {
            return Err(Error::HostMismatch(format!(
                "functional of dimension {} on algebra of dimension {}",
                self.dim(),
                host.dim()
            )));
        }
        Ok(())
    }
}

/// `(phi * psi)(a (x) b) = phi(a1 (x) b1) psi(a2 (x) b2)`.
pub fn convolution(host: &HopfAlgebra, phi: &Functional2, psi: &Functional2) -> Result<Functional2> {
    phi.check_host(host)?;
    psi.check_host(host)?;
    let n = host.dim();
    let mut out = Matrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut s = Cyclotomic::zero();
            for (a1, a2, c) in host.coproduct_terms(a) {
                for (b1, b2, d) in host.coproduct_terms(b) {
                    let x = phi.at(*a1, *b1);
                    let y = psi.at(*a2, *b2);
                    if !x.is_zero() && !y.is_zero() {
                        s += &(&(c * d) * &(x * y));
                    }
                }
            }
            out.set(a, b, s);
        }
    }
    Ok(Functional2 { values: out })
}

/// Solves `phi * psi = eps (x) eps` exactly and checks `psi * phi` too.
pub fn convolution_inverse(host: &HopfAlgebra, phi: &Functional2) -> Result<Functional2> {
    phi.check_host(host)?;
    let n = host.dim();
    let nn = n * n;
    // unknown psi(e_k (x) e_m) sits at column k*n+m
    let mut sys = Matrix::zeros(nn, nn);
    let mut rhs = Matrix::zeros(nn, 1);
    for a in 0..n {
        for b in 0..n {
            let row = a * n + b;
            for (a1, a2, c) in host.coproduct_terms(a) {
                for (b1, b2, d) in host.coproduct_terms(b) {
                    let x = phi.at(*a1, *b1);
                    if !x.is_zero() {
                        *sys.entry_mut(row, a2 * n + b2) += &(&(c * d) * x);
                    }
                }
            }
            rhs.set(row, 0, &host.counit()[a] * &host.counit()[b]);
        }
    }
    let sol = sys.solve(&rhs)?.ok_or(Error::NotConvolutionInvertible)?;
    let psi = Functional2 {
        values: Matrix::from_fn(n, n, |k, m| sol.get(k * n + m, 0).clone()),
    };
    let unit = Functional2::counit(host);
    if convolution(host, phi, &psi)? != unit || convolution(host, &psi, phi)? != unit {
        return Err(Error::NotConvolutionInvertible);
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k).unwrap()
    }

    #[test]
    fn group_algebras_verify() {
        for name in ["Z2", "Z4", "Z2xZ2", "S3"] {
            let g = FiniteGroup::named(name).unwrap();
            let a = HopfAlgebra::group_algebra(&g, 1).unwrap();
            let r = verify_hopf(&a);
            assert!(r.passed(), "{}", r.to_text());
            assert_eq!(r.checks.len(), 7);
            assert!(a.is_cocommutative());
            let f = HopfAlgebra::function_algebra(&g, 1).unwrap();
            assert!(verify_hopf(&f).passed(), "{}", verify_hopf(&f).to_text());
            assert!(f.is_commutative());
        }
    }

    #[test]
    fn s3_shapes() {
        let s3 = FiniteGroup::symmetric3();
        let a = HopfAlgebra::group_algebra(&s3, 1).unwrap();
        assert!(!a.is_commutative());
        let f = HopfAlgebra::function_algebra(&s3, 1).unwrap();
        assert!(!f.is_cocommutative());
        assert_eq!(f.one(), vec![Cyclotomic::one(); 6]);
    }

    #[test]
    fn antipode_of_z2_and_z4() {
        let a = HopfAlgebra::group_algebra(&FiniteGroup::cyclic(2).unwrap(), 1).unwrap();
        assert!(a.antipode_matrix().is_identity());
        let b = HopfAlgebra::group_algebra(&FiniteGroup::cyclic(4).unwrap(), 4).unwrap();
        assert_eq!(b.antipode(&b.basis(1)), b.basis(3));
    }

    #[test]
    fn tampered_table_fails_with_witness() {
        let a = HopfAlgebra::group_algebra(&FiniteGroup::cyclic(4).unwrap(), 1).unwrap();
        let mut m = a.mult_tensor().clone();
        m.set(&[1, 1, 2], Cyclotomic::zero());
        m.set(&[1, 1, 1], Cyclotomic::one());
        let t = HopfAlgebra::new(
            "tampered",
            a.labels().to_vec(),
            1,
            m,
            a.unit().clone(),
            a.comult_tensor().clone(),
            a.counit().clone(),
            a.antipode_matrix().clone(),
        )
        .unwrap();
        let r = verify_hopf(&t);
        let assoc = r.check("associativity").unwrap();
        assert!(assoc.witness.as_deref().unwrap().starts_with('('));
    }

    #[test]
    fn convolution_inverse_cases() {
        let a = HopfAlgebra::group_algebra(&FiniteGroup::cyclic(4).unwrap(), 4).unwrap();
        let unit = Functional2::counit(&a);
        assert_eq!(convolution_inverse(&a, &unit).unwrap(), unit);

        let gamma = Functional2::new(&a, Matrix::from_fn(4, 4, |i, j| z(4, (i * j) as i64))).unwrap();
        let bar = convolution_inverse(&a, &gamma).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(*bar.at(i, j), z(4, -((i * j) as i64)));
            }
        }

        let f = HopfAlgebra::function_algebra(&FiniteGroup::cyclic(2).unwrap(), 1).unwrap();
        let deg = Functional2::new(&f, Matrix::from_ints(&[&[1, 1], &[0, 0]]).unwrap()).unwrap();
        assert_eq!(convolution_inverse(&f, &deg), Err(Error::NotConvolutionInvertible));
    }
}
