//! Exact arithmetic in cyclotomic fields `Q(zeta_N)`.
//!
//! A value is stored as a polynomial in `zeta_N` of degree below `phi(N)`,
//! i.e. reduced modulo the `N`-th cyclotomic polynomial. Within one order
//! this representation is canonical. Values of different orders are
//! combined in `Q(zeta_lcm)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Orders up to this bound have their cyclotomic polynomial tabulated once.
const TABLE_LIMIT: u32 = 64;

#[derive(Debug)]
struct Field {
    phi: usize,
    /// Coefficients of `Phi_N`, lowest degree first, monic.
    poly: Vec<i64>,
}

fn field_table() -> &'static [Field] {
    static TABLE: OnceLock<Vec<Field>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut polys: Vec<Vec<i64>> = vec![Vec::new()];
        for n in 1..=TABLE_LIMIT as usize {
            let p = cyclotomic_poly_from(n, &polys);
            polys.push(p);
        }
        polys
            .into_iter()
            .skip(1)
            .map(|poly| Field {
                phi: poly.len() - 1,
                poly,
            })
            .collect()
    })
}

/// `Phi_n` given `Phi_d` for every `d < n` in `known` (index `d`).
fn cyclotomic_poly_from(n: usize, known: &[Vec<i64>]) -> Vec<i64> {
    let mut num = vec![0i64; n + 1];
    num[0] = -1;
    num[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &known[d]);
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        q[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    if n <= TABLE_LIMIT {
        return field_table()[n as usize - 1].poly.clone();
    }
    let mut polys: Vec<Vec<i64>> = vec![Vec::new(); n as usize + 1];
    let n = n as usize;
    for d in 1..=n {
        if n % d == 0 {
            polys[d] = cyclotomic_poly_from(d, &polys);
        }
    }
    polys.swap_remove(n)
}

fn with_field<R>(order: u32, f: impl FnOnce(usize, &[i64]) -> R) -> R {
    if order <= TABLE_LIMIT {
        let fd = &field_table()[order as usize - 1];
        f(fd.phi, &fd.poly)
    } else {
        let poly = cyclotomic_poly(order);
        f(poly.len() - 1, &poly)
    }
}

/// Euler's totient `phi(n)`, the degree of `Q(zeta_n)` over `Q`.
pub fn totient(n: u32) -> usize {
    with_field(n, |phi, _| phi)
}

fn reduce(mut p: Vec<Rational>, phi: usize, poly: &[i64]) -> Vec<Rational> {
    if p.len() > phi {
        for k in (phi..p.len()).rev() {
            if p[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut p[k], Rational::zero());
            for (j, &pj) in poly.iter().enumerate().take(phi) {
                if pj != 0 {
                    p[k - phi + j] -= &c * Rational::from_integer(BigInt::from(pj));
                }
            }
        }
    }
    p.resize(phi, Rational::zero());
    p
}

/// An exact element of `Q(zeta_N)`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Cyclotomic {
    /// Builds `sum_k coeffs[k] * zeta_N^k`; any length is accepted and reduced.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let coeffs = with_field(order, |phi, poly| reduce(coeffs, phi, poly));
        Ok(Cyclotomic { order, coeffs })
    }

    pub fn rational(q: Rational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::rational(Rational::new(num.into(), den.into())))
    }

    pub fn from_int(v: i64) -> Self {
        Self::rational(Rational::from_integer(v.into()))
    }

    /// `zeta_N^k`.
    pub fn root_of_unity(order: u32, k: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        let e = k.rem_euclid(order as i64) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        Self::from_coeffs(order, c)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Coefficients in the power basis `1, zeta, .., zeta^(phi-1)`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Image under `Q(zeta_N) -> Q(zeta_M)`, `zeta_N -> zeta_M^(M/N)`.
    pub fn embed(&self, target: u32) -> Result<Self> {
        if target == 0 {
            return Err(Error::InvalidOrder(0));
        }
        if target % self.order != 0 {
            return Err(Error::ShapeMismatch(format!(
                "cannot embed order {} into order {}",
                self.order, target
            )));
        }
        if target == self.order {
            return Ok(self.clone());
        }
        let step = (target / self.order) as usize;
        let mut p = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            p[k * step] = c.clone();
        }
        Self::from_coeffs(target, p)
    }

    fn common(&self, other: &Self) -> (u32, Self, Self) {
        if self.order == other.order {
            return (self.order, self.clone(), other.clone());
        }
        let l = (self.order as u64).lcm(&(other.order as u64));
        let l = u32::try_from(l).expect("cyclotomic order overflow");
        (
            l,
            self.embed(l).expect("divides lcm"),
            other.embed(l).expect("divides lcm"),
        )
    }

    fn add_same(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Cyclotomic {
            order: self.order,
            coeffs,
        }
    }

    fn mul_same(&self, other: &Self) -> Self {
        let phi = self.coeffs.len();
        if phi == 1 {
            return Cyclotomic {
                order: self.order,
                coeffs: vec![&self.coeffs[0] * &other.coeffs[0]],
            };
        }
        let mut p = vec![Rational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    p[i + j] += a * b;
                }
            }
        }
        let coeffs = with_field(self.order, |phi, poly| reduce(p, phi, poly));
        Cyclotomic {
            order: self.order,
            coeffs,
        }
    }

    fn binary(&self, other: &Self, f: impl Fn(&Self, &Self) -> Self) -> Self {
        if self.order == other.order {
            return f(self, other);
        }
        // Rationals embed into any order without reduction.
        if other.order == 1 {
            return f(self, &other.lift_rational(self.order));
        }
        if self.order == 1 {
            return f(&self.lift_rational(other.order), other);
        }
        let (_, a, b) = self.common(other);
        f(&a, &b)
    }

    fn lift_rational(&self, order: u32) -> Self {
        let phi = totient(order);
        let mut coeffs = vec![Rational::zero(); phi];
        coeffs[0] = self.coeffs[0].clone();
        Cyclotomic { order, coeffs }
    }

    /// Multiplicative inverse; zero is reported, never a panic.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = self.coeffs.len();
        if phi == 1 {
            return Ok(Cyclotomic {
                order: self.order,
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        // Solve (self * y) = 1 through the multiplication-by-self matrix.
        let mut cols = Vec::with_capacity(phi);
        for k in 0..phi {
            let z = Self::root_of_unity(self.order, k as i64)?;
            cols.push(self.mul_same(&z).coeffs);
        }
        let mut aug: Vec<Vec<Rational>> = (0..phi)
            .map(|r| {
                let mut row: Vec<Rational> = (0..phi).map(|c| cols[c][r].clone()).collect();
                row.push(if r == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        let y = solve_rational(&mut aug, phi).ok_or(Error::DivisionByZero)?;
        Ok(Cyclotomic {
            order: self.order,
            coeffs: y,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Cyclotomic::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

/// Gauss-Jordan on a square augmented rational system.
fn solve_rational(aug: &mut [Vec<Rational>], n: usize) -> Option<Vec<Rational>> {
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let inv = aug[col][col].recip();
        for v in aug[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c in col..=n {
                    let t = &f * &aug[col][c];
                    aug[r][c] -= t;
                }
            }
        }
    }
    Some(aug.iter().map(|row| row[n].clone()).collect())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        (self - other).is_zero()
    }
}

impl Eq for Cyclotomic {}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Self::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Self::rational(Rational::one())
    }
}

impl Default for Cyclotomic {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<Rational> for Cyclotomic {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        self.binary(rhs, Cyclotomic::add_same)
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.is_zero() || rhs.is_zero() {
            return Cyclotomic::zero();
        }
        self.binary(rhs, Cyclotomic::mul_same)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !b.is_zero() {
                    *a += b;
                }
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        if self.order == rhs.order {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                if !b.is_zero() {
                    *a -= b;
                }
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl fmt::Display for Cyclotomic {
    /// `0`, `-1/2`, `z4`, `1 - 2*z3`, `z8^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let z = match k {
                0 => String::new(),
                1 => format!("z{}", self.order),
                _ => format!("z{}^{}", self.order, k),
            };
            if z.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{z}")?;
            } else {
                write!(f, "{mag}*{z}")?;
            }
        }
        Ok(())
    }
}

/// Parses `p/q` or `p` with no decimal point.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(Error::Parse(format!("{s:?} is not a p/q rational")));
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("{s:?}: zero denominator")));
        }
        Ok(Rational::new(p, q))
    } else {
        BigInt::from_str(t)
            .map(Rational::from_integer)
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
