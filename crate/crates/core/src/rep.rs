//! The representation `π_ξ` and its derived representation.
//!
//! `(π_ξ(a, b) F)(z) = e^{iξ Re(b z̄)} F(a^{-1} z)` on `L²(T)`, realized two
//! independent ways on truncated windows:
//!
//! * [`apply_grid`] rotates the coefficients, samples on the circle,
//!   multiplies by the plane-wave factor pointwise and transforms back;
//! * [`apply_matrix`] uses the matrix coefficients
//!   `⟨e_m, π_ξ(g) e_n⟩ = i^{m-n} J_{m-n}(ξ|b|) e^{-i(m-n) arg b} a^{-n}`
//!   obtained from the Jacobi–Anger expansion.
//!
//! Both truncate the translation multiplier at `K = band_estimate(|ξ||b|, tol)`
//! and return a vector on the window grown by `K`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Num;

use crate::error::{Error, Result};
use crate::fourier::{default_grid_size, from_grid, to_grid, FourierVector, Window};
use crate::group::{ComplexLieBasisElement, GroupElement, LieVector};
use crate::operators::{add, scale, BandedOperator, ValidRange};
use crate::scalar::Scalar;
use crate::specfun::{band_estimate, bessel_row, BesselRow};

/// The nonzero parameter `ξ` labelling `π_ξ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RepParameter<R = f64> {
    xi: R,
}

impl<R: Num + Clone> RepParameter<R> {
    /// Rejects zero and (for floating point) non-finite values.
    pub fn new(xi: R) -> Result<Self> {
        // x - x vanishes exactly for finite values only.
        if !(xi.clone() - xi.clone()).is_zero() {
            return Err(Error::Contract("xi must be finite".into()));
        }
        if xi.is_zero() {
            return Err(Error::Contract(
                "xi must be nonzero; xi = 0 collapses onto the characters".into(),
            ));
        }
        Ok(RepParameter { xi })
    }

    pub fn value(&self) -> &R {
        &self.xi
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Contract(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    Ok(())
}

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Translation part of the matrix coefficients: `i^k J_k(ξ|b|) e^{-ik arg b}`
/// for `|k| ≤ band`.
struct TranslationProfile {
    band: i64,
    xi_sign: f64,
    row: BesselRow,
    arg: f64,
}

impl TranslationProfile {
    fn new(xi: f64, b: Complex64, band: usize) -> Result<Self> {
        Ok(TranslationProfile {
            band: band as i64,
            xi_sign: xi.signum(),
            row: bessel_row(xi.abs() * b.norm(), band)?,
            arg: b.arg(),
        })
    }

    fn coeff(&self, k: i64) -> Complex64 {
        if k.abs() > self.band {
            return Complex64::new(0.0, 0.0);
        }
        // J_k(-x) = (-1)^k J_k(x)
        let sign = if self.xi_sign < 0.0 && k % 2 != 0 { -1.0 } else { 1.0 };
        i_pow(k) * (sign * self.row.get(k)) * Complex64::from_polar(1.0, -(k as f64) * self.arg)
    }
}

/// `⟨e_m, π_ξ(g) e_n⟩`.
pub fn matrix_coeff(xi: &RepParameter<f64>, g: &GroupElement, m: i64, n: i64) -> Result<Complex64> {
    let rot = g.a().unit_pow(-n);
    if g.is_rotation() {
        return Ok(if m == n { rot } else { Complex64::new(0.0, 0.0) });
    }
    let k = m - n;
    let profile = TranslationProfile::new(*xi.value(), *g.b(), k.unsigned_abs() as usize)?;
    Ok(profile.coeff(k) * rot)
}

/// `π_ξ(g) F` through the pointwise multiplier on a grid.
pub fn apply_grid(xi: &RepParameter<f64>, g: &GroupElement, f: &FourierVector, tol: f64) -> Result<FourierVector> {
    check_tol(tol)?;
    let xi = *xi.value();
    let (a, b) = (*g.a(), *g.b());
    let band = band_estimate(xi.abs() * b.norm(), tol)?;
    let n = f.window().half_width();
    let m = default_grid_size(n, band);

    let mut rotated = f.clone();
    for (k, c) in f.iter() {
        rotated.set(k, c * a.unit_pow(-k))?;
    }
    let mut values = to_grid(&rotated, m)?;
    for (j, v) in values.iter_mut().enumerate() {
        let z = Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
        *v *= Complex64::from_polar(1.0, xi * (b * z.conj()).re);
    }
    from_grid(&values, n + band)
}

/// `π_ξ(g) F` through the banded Bessel matrix.
pub fn apply_matrix(xi: &RepParameter<f64>, g: &GroupElement, f: &FourierVector, tol: f64) -> Result<FourierVector> {
    check_tol(tol)?;
    let a = *g.a();
    let band = band_estimate(xi.value().abs() * g.b().norm(), tol)?;
    let profile = TranslationProfile::new(*xi.value(), *g.b(), band)?;
    let phases: Vec<Complex64> = (-profile.band..=profile.band).map(|k| profile.coeff(k)).collect();
    let out_window = f.window().grow(band);
    let n = f.window().n();
    let kb = band as i64;
    let rotated: Vec<Complex64> = f.iter().map(|(k, c)| c * a.unit_pow(-k)).collect();
    let coeffs = out_window
        .indices()
        .map(|m| {
            let lo = (-n).max(m - kb);
            let hi = n.min(m + kb);
            (lo..=hi)
                .map(|col| phases[(m - col + kb) as usize] * rotated[(col + n) as usize])
                .sum()
        })
        .collect();
    FourierVector::new(out_window, coeffs)
}

/// `π_ξ(g)` as a banded operator of band `band` on `window`.
pub fn rep_operator(
    xi: &RepParameter<f64>,
    g: &GroupElement,
    band: usize,
    window: Window,
) -> Result<BandedOperator<Complex64>> {
    let a = *g.a();
    let valid = ValidRange::full(window);
    if g.is_rotation() {
        return BandedOperator::from_fn(window, valid, [0], |_, q| a.unit_pow(-q));
    }
    let profile = TranslationProfile::new(*xi.value(), *g.b(), band)?;
    let b = band as i64;
    BandedOperator::from_fn(window, valid, -b..=b, |d, q| profile.coeff(d) * a.unit_pow(-q))
}

/// `dπ_ξ(X)` on the window, acting on basis vectors by
///
/// ```text
/// dπ(L)   e_n = -i n e_n
/// dπ(M_x) e_n = (iξ/2)(e_{n+1} + e_{n-1})
/// dπ(M_y) e_n = (ξ/2)(e_{n+1} - e_{n-1})
/// dπ(M)   e_n = -ξ e_{n-1}
/// dπ(M̄)   e_n =  ξ e_{n+1}
/// ```
pub fn d_rep<S: Scalar>(xi: &RepParameter<S::Real>, x: ComplexLieBasisElement, window: Window) -> BandedOperator<S> {
    let xi = S::from_real(xi.value());
    let half_xi = xi.clone() * S::from_ratio(1, 2);
    let i = S::imag_unit();
    let valid = ValidRange::full(window);
    let constant = |v: S| vec![v; valid.len()];
    let diagonals: BTreeMap<i64, Vec<S>> = match x {
        ComplexLieBasisElement::L => [(0, valid.iter().map(|q| S::from_gaussian(0, -q)).collect())].into(),
        ComplexLieBasisElement::Mx => {
            let c = i * half_xi;
            [(-1, constant(c.clone())), (1, constant(c))].into()
        }
        ComplexLieBasisElement::My => [(-1, constant(-half_xi.clone())), (1, constant(half_xi))].into(),
        ComplexLieBasisElement::M => [(-1, constant(-xi))].into(),
        ComplexLieBasisElement::Mbar => [(1, constant(xi))].into(),
    };
    BandedOperator::from_diagonals(window, valid, diagonals).expect("diagonals sized to the window")
}

/// Real-linear extension `l dπ(L) + x dπ(M_x) + y dπ(M_y)`.
pub fn d_rep_linear<S: Scalar>(
    xi: &RepParameter<S::Real>,
    v: &LieVector<S::Real>,
    window: Window,
) -> BandedOperator<S> {
    let parts = [
        (&v.l, ComplexLieBasisElement::L),
        (&v.x, ComplexLieBasisElement::Mx),
        (&v.y, ComplexLieBasisElement::My),
    ];
    parts.into_iter().fold(BandedOperator::zero(window), |acc, (coef, basis)| {
        let term = scale(&S::from_real(coef), &d_rep(xi, basis, window));
        add(&acc, &term).expect("same window")
    })
}
