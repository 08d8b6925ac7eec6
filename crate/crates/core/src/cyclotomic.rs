//! Exact arithmetic in the cyclotomic field `Q(i)(ω)`, `ω = e^{2πi/M}`.
//!
//! The rotation subgroup is sampled at the M-th roots of unity when an
//! isotypic component is computed by averaging. For M > 4 those roots are not
//! Gaussian rationals, so the exact averaging path runs here: elements are
//! polynomials in ω with Gaussian-rational coefficients, kept reduced modulo
//! the cyclotomic polynomial Φ_M. Reduction is canonical, so equality and
//! zero tests are exact.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{ExactScalar, Scalar};

/// Integer coefficients of Φ_M, lowest degree first.
pub fn cyclotomic_polynomial(order: usize) -> Vec<BigInt> {
    assert!(order >= 1, "cyclotomic order must be positive");
    // x^M - 1
    let mut num = vec![BigInt::zero(); order + 1];
    num[0] = BigInt::from(-1);
    num[order] = BigInt::one();
    for d in (1..order).filter(|d| order % d == 0) {
        num = divide_monic(&num, &cyclotomic_polynomial(d));
    }
    num
}

fn divide_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k - dd + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

#[derive(Debug)]
struct Field {
    order: usize,
    phi: Vec<BigInt>,
}

/// Element of `Q(i)(ω_M)`; constants carry no field and combine with any order.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    field: Option<Arc<Field>>,
    coeffs: Vec<ExactScalar>,
}

impl Cyclotomic {
    /// The primitive root `ω^j`, `ω = e^{2πi/order}`.
    pub fn root(order: usize, j: usize) -> Self {
        let field = Arc::new(Field {
            order,
            phi: cyclotomic_polynomial(order),
        });
        let mut coeffs = vec![<ExactScalar as Scalar>::zero(); order];
        coeffs[j % order] = <ExactScalar as Scalar>::one();
        Self::reduced(Some(field), coeffs)
    }

    pub fn constant(c: ExactScalar) -> Self {
        Cyclotomic {
            field: None,
            coeffs: vec![c],
        }
    }

    /// The value as a Gaussian rational, if it lies in `Q(i)`.
    pub fn to_exact(&self) -> Option<ExactScalar> {
        if self.coeffs.iter().skip(1).all(Scalar::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_else(<ExactScalar as Scalar>::zero))
        } else {
            None
        }
    }

    fn reduced(field: Option<Arc<Field>>, mut coeffs: Vec<ExactScalar>) -> Self {
        if let Some(f) = &field {
            let deg = f.phi.len() - 1;
            for k in (deg..coeffs.len()).rev() {
                let c = std::mem::replace(&mut coeffs[k], <ExactScalar as Scalar>::zero());
                if Scalar::is_zero(&c) {
                    continue;
                }
                for (j, pj) in f.phi.iter().enumerate().take(deg) {
                    let p = BigRational::from_integer(pj.clone());
                    coeffs[k - deg + j] = coeffs[k - deg + j].clone() - c.clone() * Complex::new(p, BigRational::zero());
                }
            }
            coeffs.truncate(deg.max(1));
        }
        if coeffs.is_empty() {
            coeffs.push(<ExactScalar as Scalar>::zero());
        }
        Cyclotomic { field, coeffs }
    }

    fn join(&self, other: &Self) -> Option<Arc<Field>> {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => {
                assert_eq!(a.order, b.order, "mixing cyclotomic fields of different order");
                Some(a.clone())
            }
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (None, None) => None,
        }
    }

    fn zip_with(self, rhs: Self, f: impl Fn(ExactScalar, ExactScalar) -> ExactScalar) -> Self {
        let field = self.join(&rhs);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[ExactScalar], k: usize| v.get(k).cloned().unwrap_or_else(<ExactScalar as Scalar>::zero);
        let coeffs = (0..len).map(|k| f(get(&self.coeffs, k), get(&rhs.coeffs, k))).collect();
        Self::reduced(field, coeffs)
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).is_zero()
    }
}

impl Add for Cyclotomic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for Cyclotomic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for Cyclotomic {
    type Output = Self;
    fn neg(self) -> Self {
        Cyclotomic {
            field: self.field,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for Cyclotomic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let field = self.join(&rhs);
        let mut coeffs = vec![<ExactScalar as Scalar>::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if Scalar::is_zero(a) {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !Scalar::is_zero(b) {
                    coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self::reduced(field, coeffs)
    }
}

impl Scalar for Cyclotomic {
    type Real = BigRational;

    fn zero() -> Self {
        Self::constant(<ExactScalar as Scalar>::zero())
    }
    fn one() -> Self {
        Self::constant(<ExactScalar as Scalar>::one())
    }
    fn from_real(r: &BigRational) -> Self {
        Self::constant(ExactScalar::from_real(r))
    }
    fn from_gaussian(re: i64, im: i64) -> Self {
        Self::constant(ExactScalar::from_gaussian(re, im))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(ExactScalar::from_ratio(num, den))
    }

    /// Complex conjugation sends ω to ω^{-1} = ω^{M-1}.
    fn conj(&self) -> Self {
        match &self.field {
            None => Self::constant(self.coeffs[0].conj()),
            Some(f) => {
                let m = f.order;
                let mut coeffs = vec![<ExactScalar as Scalar>::zero(); m];
                for (k, c) in self.coeffs.iter().enumerate() {
                    coeffs[(m - k % m) % m] = c.conj();
                }
                Self::reduced(Some(f.clone()), coeffs)
            }
        }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    fn to_c64(&self) -> Complex64 {
        let order = self.field.as_ref().map_or(1, |f| f.order) as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.to_c64() * Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / order))
            .sum()
    }
}
