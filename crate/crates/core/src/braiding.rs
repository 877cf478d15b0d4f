//! The braiding of a bicovariant bimodule: the bimodule map on `M (x)_A M`
//! exchanging left-invariant and right-invariant factors.

use num_traits::One;

use crate::bicovariant::{BicovBimodule, TensorSqElement};
use crate::error::{Error, Result};
use crate::hopf::elem;
use crate::linalg::Matrix;
use crate::report::{ensure, Report, Status};
use crate::scalar::Cyclotomic;
use crate::structure::{check_covariant_map, Covariance, Linearity};

/// `coeffs` is `d^2 x d^2` with column `i*d + j` holding `sigma(w_i (x) w_j)`
/// in the basis `w_k (x) w_l` (row `k*d + l`). `full` is the induced map on
/// right coordinates of the second tensor power.
#[derive(Clone, Debug)]
pub struct Braiding {
    module: BicovBimodule,
    coeffs: Matrix,
    full: Matrix,
}

/// Builds the braiding by writing `w_j = sum_k eta_k R_kj` and sending
/// `w_i (x) eta_k` to `eta_k (x) w_i`.
pub fn construct_braiding(m: &BicovBimodule) -> Result<Braiding> {
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let etas = m.right_invariants();
    let mut coeffs = Matrix::zeros(d * d, d * d);
    for i in 0..d {
        let wi = m.omega_rc(i);
        for j in 0..d {
            let mut image = elem::zero(d * d * n);
            for (k, eta) in etas.iter().enumerate() {
                let rkj = m.r(k, j);
                if elem::is_zero(rkj) {
                    continue;
                }
                let wr = m.coords().right(&wi, rkj);
                elem::add_scaled(&mut image, &Cyclotomic::one(), &m.mul_tensor(eta, 1, &wr, 1));
            }
            for kl in 0..d * d {
                let s = h.as_scalar(&image[kl * n..(kl + 1) * n]).ok_or_else(|| {
                    Error::Internal(format!(
                        "braiding coefficient at (k,l,i,j) = ({},{},{},{}) is not a scalar",
                        kl / d + 1,
                        kl % d + 1,
                        i + 1,
                        j + 1
                    ))
                })?;
                coeffs.set(kl, i * d + j, s);
            }
        }
    }
    let full = coeffs.kron(&Matrix::identity(n));
    Ok(Braiding {
        module: m.clone(),
        coeffs,
        full,
    })
}

impl Braiding {
    pub fn module(&self) -> &BicovBimodule {
        &self.module
    }

    pub fn coeffs(&self) -> &Matrix {
        &self.coeffs
    }

    pub fn full(&self) -> &Matrix {
        &self.full
    }

    /// `sigma^{kl}_{ij}`, zero-based.
    pub fn coefficient(&self, k: usize, l: usize, i: usize, j: usize) -> &Cyclotomic {
        let d = self.module.rank();
        self.coeffs.get(k * d + l, i * d + j)
    }

    pub fn apply(&self, x: &TensorSqElement) -> Result<TensorSqElement> {
        let d = self.module.rank();
        let n = self.module.host().dim();
        if x.coeffs.len() != d || x.coeffs.iter().any(|r| r.len() != d || r.iter().any(|a| a.len() != n)) {
            return Err(Error::HostMismatch("element of a different tensor square".into()));
        }
        let v = self.full.apply(&x.to_rc())?;
        Ok(TensorSqElement::from_rc(&v, d, n))
    }

    /// `(i, j)` with `sigma^2(w_i (x) w_j) != w_i (x) w_j`, if any.
    pub fn square_witness(&self) -> Option<(usize, usize)> {
        let d = self.module.rank();
        let sq = &self.coeffs * &self.coeffs;
        (0..d * d)
            .find(|&c| sq.column(c) != elem::basis(d * d, c))
            .map(|c| (c / d, c % d))
    }

    pub fn squared_is_identity(&self) -> bool {
        self.square_witness().is_none()
    }

    /// The braid relation on `w_i (x) w_j (x) w_k`; right linearity extends
    /// it to the whole third tensor power.
    pub fn braid_witness(&self) -> Option<(usize, usize, usize)> {
        let d = self.module.rank();
        let s1 = self.coeffs.kron(&Matrix::identity(d));
        let s2 = Matrix::identity(d).kron(&self.coeffs);
        let lhs = &(&s2 * &s1) * &s2;
        let rhs = &(&s1 * &s2) * &s1;
        (0..d * d * d)
            .find(|&c| lhs.column(c) != rhs.column(c))
            .map(|c| (c / (d * d), (c / d) % d, c % d))
    }
}

pub fn apply_braiding(b: &Braiding, x: &TensorSqElement) -> Result<TensorSqElement> {
    b.apply(x)
}

pub fn braiding_squared_is_identity(b: &Braiding) -> bool {
    b.squared_is_identity()
}

/// Solves for `sigma` from right linearity and the defining property alone,
/// using right-invariant elements found as a kernel. Returns the dimension
/// of the homogeneous solution space and a particular solution on the
/// basis `w_i (x) w_j` (columns `i*d + j`, right coordinates of the square).
pub fn braiding_oracle(m: &BicovBimodule) -> Result<(usize, Option<Matrix>)> {
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let q = m.right_invariant_kernel();
    if q.cols() != d {
        return Err(Error::Internal(format!("right-invariant subspace has dimension {}", q.cols())));
    }
    let etas: Vec<Vec<Cyclotomic>> = (0..d).map(|k| q.column(k)).collect();
    let p2 = d * d * n;
    let mut b = Matrix::zeros(d * p2, d * p2);
    for k in 0..d {
        for j in 0..d {
            let qjk = &etas[k][j * n..(j + 1) * n];
            let blk = m.right_mul_matrix(qjk, 2);
            for r in 0..p2 {
                for c in 0..p2 {
                    let v = blk.get(r, c);
                    if !v.is_zero() {
                        b.set(k * p2 + r, j * p2 + c, v.clone());
                    }
                }
            }
        }
    }
    let kernel_dim = b.cols() - b.rank();
    let mut targets = Matrix::zeros(d * p2, d);
    for i in 0..d {
        let wi = m.omega_rc(i);
        for (k, eta) in etas.iter().enumerate() {
            let t = m.tensor2(eta, &wi);
            for (r, v) in t.into_iter().enumerate() {
                targets.set(k * p2 + r, i, v);
            }
        }
    }
    let Some(sol) = b.solve(&targets)? else {
        return Ok((kernel_dim, None));
    };
    let mut out = Matrix::zeros(p2, d * d);
    for i in 0..d {
        for j in 0..d {
            for r in 0..p2 {
                out.set(r, i * d + j, sol.get(j * p2 + r, i).clone());
            }
        }
    }
    Ok((kernel_dim, Some(out)))
}

/// Bimodule map, bicovariance, invertibility, braid relation, defining
/// property and uniqueness.
pub fn verify_braiding(b: &Braiding) -> Report {
    let m = &b.module;
    let h = m.host();
    let (n, d) = (h.dim(), m.rank());
    let mut r = Report::new(h.name());
    let p2 = m.tensor_power(2);
    match check_covariant_map(&b.full, p2, p2, Covariance::Bi, Linearity { left: true, right: true }) {
        Ok(rep) => {
            for id in ["left_linear", "right_linear", "left_covariant", "right_covariant"] {
                let c = rep.check(id).expect("requested");
                r.record(
                    format!("braiding.{id}"),
                    match c.status {
                        Status::Pass => Ok(()),
                        Status::Fail => Err(c.witness.clone().unwrap_or_default()),
                    },
                );
            }
        }
        Err(e) => r.record("braiding.shape", Err(e.to_string())),
    }
    r.record(
        "braiding.invertible",
        ensure(b.coeffs.rank() == d * d, || format!("rank {} < {}", b.coeffs.rank(), d * d)),
    );
    r.record(
        "braiding.braid_equation",
        match b.braid_witness() {
            None => Ok(()),
            Some((i, j, k)) => Err(format!("(i,j,k) = ({},{},{})", i + 1, j + 1, k + 1)),
        },
    );
    r.record("braiding.defining_property", {
        let etas = m.right_invariants();
        let mut out = Ok(());
        'outer: for i in 0..d {
            let wi = m.omega_rc(i);
            for (k, eta) in etas.iter().enumerate() {
                let lhs = b.full.apply(&m.tensor2(&wi, eta)).expect("dimension");
                if lhs != m.tensor2(eta, &wi) {
                    out = Err(format!("(w{}, eta{})", i + 1, k + 1));
                    break 'outer;
                }
            }
        }
        out
    });
    r.record("braiding.uniqueness", match braiding_oracle(m) {
        Ok((0, Some(sol))) => {
            let mut out = Ok(());
            for c in 0..d * d {
                let mut basis = elem::zero(d * d * n);
                for (u, x) in h.unit().iter().enumerate() {
                    basis[c * n + u] = x.clone();
                }
                if b.full.apply(&basis).expect("dimension") != sol.column(c) {
                    out = Err(format!("differs from the solved map at (i,j) = ({},{})", c / d + 1, c % d + 1));
                    break;
                }
            }
            out
        }
        Ok((k, Some(_))) => Err(format!("solution space dimension {k}")),
        Ok((_, None)) => Err("defining system is inconsistent".into()),
        Err(e) => Err(e.to_string()),
    });
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicovariant::{build_bimodule, YdModule};
    use num_traits::Zero;
    use crate::group::FiniteGroup;
    use crate::hopf::HopfAlgebra;
    use std::sync::Arc;

    #[test]
    fn z4_braiding_is_the_flip() {
        let h = Arc::new(HopfAlgebra::group_algebra(&FiniteGroup::cyclic(4).unwrap(), 4).unwrap());
        let yd = YdModule::graded_trivial(h.clone(), &[h.basis(1), h.basis(3)]).unwrap();
        let m = build_bimodule(&yd).unwrap();
        let b = construct_braiding(&m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expect = if k == j && l == i { Cyclotomic::one() } else { Cyclotomic::zero() };
                        assert_eq!(b.coefficient(k, l, i, j), &expect);
                    }
                }
            }
        }
        assert!(b.squared_is_identity());
        let rep = verify_braiding(&b);
        assert!(rep.passed(), "{}", rep.to_text());
    }
}
