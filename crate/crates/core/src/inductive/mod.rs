//! Finite-window checks of the classification of inductive algebras.
//!
//! An operator in the isotypic component of degree `m` acts by
//! `T e_n = c_{m+n} e_{m+n}`; [`DiagonalCoefficients`] stores that sequence
//! `c`, indexed by the output index. The functions here compute the
//! commutators `T_X = [T, dπ_ξ(X)]` in closed form, the double commutators
//! that force `A_0 = ℂI`, the arithmetic-progression solutions behind
//! `A_m = ℂS^m`, and diagnostics for membership in, and normalization of,
//! the multiplication algebra.

mod suite;

pub use suite::{run_verification_suite, Defect, SuiteConfig, VerificationReport};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::One;

use crate::error::{Error, Result};
use crate::fourier::Window;
use crate::group::{ComplexLieBasisElement, GroupElement};
use crate::operators::{commutator, conjugate, BandedOperator, ValidRange};
use crate::rep::{d_rep, RepParameter};
use crate::scalar::Scalar;

/// The coefficients `c_n`, `n ∈ [start, start + len)`, of a degree-`m` operator.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalCoefficients<S> {
    degree: i64,
    start: i64,
    values: Vec<S>,
}

impl<S: Scalar> DiagonalCoefficients<S> {
    pub fn new(degree: i64, start: i64, values: Vec<S>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Range("coefficient sequence is empty".into()));
        }
        Ok(DiagonalCoefficients { degree, start, values })
    }

    /// Coefficients `c_n = f(n)` over the window `[-N, N]`.
    pub fn from_fn(degree: i64, window: Window, f: impl FnMut(i64) -> S) -> Self {
        DiagonalCoefficients {
            degree,
            start: -window.n(),
            values: window.indices().map(f).collect(),
        }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, n: i64) -> Option<&S> {
        if n < self.start {
            return None;
        }
        self.values.get((n - self.start) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &S)> {
        (self.start..).zip(self.values.iter())
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|p| p[0] == p[1])
    }

    /// The operator `e_q ↦ c_{m+q} e_{m+q}` on the smallest symmetric window
    /// holding both its columns and its outputs; the valid range is exactly
    /// the columns where `c` is defined.
    pub fn to_operator(&self) -> Result<BandedOperator<S>> {
        let (lo, hi) = (self.start - self.degree, self.end() - self.degree);
        let n = [lo, hi, self.start, self.end()]
            .iter()
            .map(|v| v.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
            .max(1);
        let window = Window::new(n)?;
        let valid = ValidRange::new(lo, hi)?;
        BandedOperator::from_diagonals(window, valid, [(self.degree, self.values.clone())].into())
    }

    /// Reads diagonal `degree` of an operator over its valid range.
    pub fn from_operator(op: &BandedOperator<S>, degree: i64) -> Self {
        let valid = op.valid();
        DiagonalCoefficients {
            degree,
            start: valid.lo + degree,
            values: valid.iter().map(|q| op.entry(degree, q)).collect(),
        }
    }
}

/// `T_X = [T, dπ_ξ(X)]` for `X ∈ {L, M, M̄}` in closed form:
///
/// * `X = M`: degree `m - 1`, `c'_n = ξ (c_{n+1} - c_n)`;
/// * `X = M̄`: degree `m + 1`, `c'_n = ξ (c_n - c_{n-1})`;
/// * `X = L`: degree `m`, `c'_n = i m c_n`.
pub fn commutant_step<S: Scalar>(
    c: &DiagonalCoefficients<S>,
    x: ComplexLieBasisElement,
    xi: &RepParameter<S::Real>,
) -> Result<DiagonalCoefficients<S>> {
    let xi = S::from_real(xi.value());
    let v = &c.values;
    let too_small = || Error::Range(format!("a {}-term sequence is too short to difference", v.len()));
    match x {
        ComplexLieBasisElement::L => {
            let f = S::imag_unit() * S::from_gaussian(c.degree, 0);
            Ok(DiagonalCoefficients {
                degree: c.degree,
                start: c.start,
                values: v.iter().map(|x| f.clone() * x.clone()).collect(),
            })
        }
        ComplexLieBasisElement::M | ComplexLieBasisElement::Mbar => {
            if v.len() < 2 {
                return Err(too_small());
            }
            let diffs = v.windows(2).map(|p| xi.clone() * (p[1].clone() - p[0].clone())).collect();
            let (degree, start) = if x == ComplexLieBasisElement::M {
                (c.degree - 1, c.start)
            } else {
                (c.degree + 1, c.start + 1)
            };
            Ok(DiagonalCoefficients {
                degree,
                start,
                values: diffs,
            })
        }
        other => Err(Error::Precondition(format!(
            "commutant_step is defined for L, M and M̄, not {other:?}"
        ))),
    }
}

/// `[T, dπ_ξ(X)]` through the general operator commutator, read back as a
/// coefficient sequence of the expected degree. Fails if anything lands
/// off that diagonal.
pub fn commutant_step_generic<S: Scalar>(
    c: &DiagonalCoefficients<S>,
    x: ComplexLieBasisElement,
    xi: &RepParameter<S::Real>,
) -> Result<DiagonalCoefficients<S>> {
    let t = c.to_operator()?;
    let comm = commutator(&t, &d_rep(xi, x, t.window()))?;
    let degree = match x {
        ComplexLieBasisElement::M => c.degree - 1,
        ComplexLieBasisElement::Mbar => c.degree + 1,
        _ => c.degree,
    };
    single_diagonal(&comm, degree)
}

fn single_diagonal<S: Scalar>(op: &BandedOperator<S>, degree: i64) -> Result<DiagonalCoefficients<S>> {
    if let Some(d) = op.offsets().into_iter().find(|&d| d != degree) {
        return Err(Error::Precondition(format!(
            "expected a single diagonal at {degree}, found diagonal {d}"
        )));
    }
    Ok(DiagonalCoefficients::from_operator(op, degree))
}

/// Double commutators of a diagonal operator `T e_n = c_n e_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma2Defect<S> {
    /// `[T, T_M̄] e_n = ξ (c_{n+1} - c_n)² e_{n+1}`, degree +1.
    pub via_mbar: DiagonalCoefficients<S>,
    /// `[T, T_M] e_n = -ξ (c_n - c_{n-1})² e_{n-1}`, degree -1.
    pub via_m: DiagonalCoefficients<S>,
}

impl<S: Scalar> Lemma2Defect<S> {
    pub fn vanishes(&self) -> bool {
        self.via_mbar.is_zero() && self.via_m.is_zero()
    }
}

/// `[T, [T, dπ(M̄)]]` and `[T, [T, dπ(M)]]` by general commutators.
pub fn lemma2_defect<S: Scalar>(c: &DiagonalCoefficients<S>, xi: &RepParameter<S::Real>) -> Result<Lemma2Defect<S>> {
    if c.degree != 0 {
        return Err(Error::Precondition(format!(
            "the double commutator defect needs a degree-0 sequence, got degree {}",
            c.degree
        )));
    }
    let t = c.to_operator()?;
    let double = |x: ComplexLieBasisElement, degree: i64| -> Result<DiagonalCoefficients<S>> {
        let inner = commutator(&t, &d_rep(xi, x, t.window()))?;
        single_diagonal(&commutator(&t, &inner)?, degree)
    };
    Ok(Lemma2Defect {
        via_mbar: double(ComplexLieBasisElement::Mbar, 1)?,
        via_m: double(ComplexLieBasisElement::M, -1)?,
    })
}

/// The arithmetic progression `c_n = a + (k/ξ) n` on `[-N, N]`, the general
/// solution of `ξ (c_{n+1} - c_n) = k`.
pub fn lemma3_solve<S: Scalar>(
    m: i64,
    k: &S,
    a: &S,
    xi: &RepParameter<S::Real>,
    window: Window,
) -> DiagonalCoefficients<S> {
    let inv_xi = S::Real::one() / xi.value().clone();
    let step = k.clone() * S::from_real(&inv_xi);
    DiagonalCoefficients::from_fn(m, window, |n| a.clone() + step.clone() * S::from_gaussian(n, 0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S> {
    /// Mean of the diagonal: the best constant `a` in `T ≈ a S^m`.
    pub a: S,
    /// `max_n |c_n - a|`.
    pub defect: f64,
    pub certified: bool,
}

/// Fits a single-diagonal operator of degree `m` by `a S^m`.
pub fn classify_isotypic<S: Scalar>(t: &BandedOperator<S>, m: i64, tol: f64) -> Result<Classification<S>> {
    if let Some(d) = t.offsets().into_iter().find(|&d| d != m) {
        return Err(Error::Precondition(format!(
            "operator has a nonzero diagonal at {d}, not a single diagonal of degree {m}"
        )));
    }
    let valid = t.valid();
    let values: Vec<S> = valid.iter().map(|q| t.entry(m, q)).collect();
    let sum = values.iter().cloned().fold(S::zero(), |acc, v| acc + v);
    let a = sum * S::from_ratio(1, values.len() as i64);
    let defect = values
        .iter()
        .map(|v| (v.clone() - a.clone()).magnitude())
        .fold(0.0, f64::max);
    Ok(Classification {
        a,
        defect,
        certified: defect <= tol,
    })
}

/// `max_d max_q |c^{(d)}_q - mean_d|`: zero exactly for Laurent operators,
/// i.e. truncated multiplication operators.
pub fn laurent_defect<S: Scalar>(t: &BandedOperator<S>) -> f64 {
    let valid = t.valid();
    let scale_by = S::from_ratio(1, valid.len() as i64);
    t.diagonals()
        .values()
        .map(|v| {
            let mean = v.iter().cloned().fold(S::zero(), |acc, x| acc + x) * scale_by.clone();
            v.iter().map(|x| (x.clone() - mean.clone()).magnitude()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// Largest relative least-squares residual of `κ(g) T` against the span of
/// `gens`, over every generator `T` and sample `g`, measured on the columns
/// valid for all conjugated generators.
pub fn normalization_defect(
    gens: &[BandedOperator<Complex64>],
    xi: &RepParameter<f64>,
    samples: &[GroupElement],
    tol: f64,
) -> Result<f64> {
    let first = gens
        .first()
        .ok_or_else(|| Error::Contract("normalization_defect needs at least one generator".into()))?;
    if gens.iter().any(|t| t.window() != first.window()) {
        return Err(Error::Contract("generators live on different windows".into()));
    }
    let mut worst: f64 = 0.0;
    for g in samples {
        let images = gens
            .iter()
            .map(|t| conjugate(xi, g, t, tol))
            .collect::<Result<Vec<_>>>()?;
        let range = images
            .iter()
            .chain(gens)
            .try_fold(first.valid(), |r, t| r.intersect(&t.valid()))?;
        let mut offsets: Vec<i64> = images.iter().chain(gens).flat_map(|t| t.offsets()).collect();
        offsets.sort_unstable();
        offsets.dedup();
        let coords: Vec<(i64, i64)> = offsets
            .iter()
            .flat_map(|&d| range.iter().map(move |q| (d, q)))
            .collect();
        let basis = DMatrix::from_fn(coords.len(), gens.len(), |r, j| {
            let (d, q) = coords[r];
            gens[j].entry(d, q)
        });
        let svd = basis.clone().svd(true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        for img in &images {
            let target = DVector::from_iterator(coords.len(), coords.iter().map(|&(d, q)| img.entry(d, q)));
            let norm = target.norm();
            if norm == 0.0 {
                continue;
            }
            let coef = svd
                .solve(&target, cutoff)
                .map_err(|e| Error::Contract(format!("least squares failed: {e}")))?;
            let residual = (&basis * coef - &target).norm();
            worst = worst.max(residual / norm);
        }
    }
    Ok(worst)
}

/// Classification defect of the progression `c_n = a + (k/ξ) n` on each
/// window: linear growth in `N` is the finite shadow of unboundedness.
pub fn progression_growth<S: Scalar>(
    m: i64,
    k: &S,
    a: &S,
    xi: &RepParameter<S::Real>,
    windows: &[usize],
) -> Result<Vec<(usize, f64)>> {
    windows
        .iter()
        .map(|&n| {
            let c = lemma3_solve(m, k, a, xi, Window::new(n)?);
            let fit = classify_isotypic(&c.to_operator()?, m, 0.0)?;
            Ok((n, fit.defect))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{conjugate_rotation, mult_operator, shift_power};
    use crate::scalar::ExactScalar;
    use num_rational::BigRational;
    use proptest::prelude::*;
    use std::collections::BTreeMap;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ex(re: i64, im: i64) -> ExactScalar {
        ExactScalar::from_gaussian(re, im)
    }

    fn xi32() -> RepParameter<BigRational> {
        RepParameter::new(q(3, 2)).unwrap()
    }

    fn w(n: usize) -> Window {
        Window::new(n).unwrap()
    }

    fn arb_gauss() -> impl Strategy<Value = ExactScalar> {
        (-16i64..=16, 1i64..=16, -16i64..=16, 1i64..=16)
            .prop_map(|(a, b, c, d)| ExactScalar::new(q(a, b), q(c, d)))
    }

    fn arb_coeffs(m: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = DiagonalCoefficients<ExactScalar>> {
        (m, -6i64..=2, proptest::collection::vec(arb_gauss(), 3..10))
            .prop_map(|(deg, start, v)| DiagonalCoefficients::new(deg, start, v).unwrap())
    }

    #[test]
    fn commutant_step_examples() {
        let xi = xi32();
        let xs = ExactScalar::from_real(xi.value());
        let constant = DiagonalCoefficients::from_fn(0, w(5), |_| ex(7, -2));
        assert!(commutant_step(&constant, ComplexLieBasisElement::M, &xi).unwrap().is_zero());

        let c = DiagonalCoefficients::from_fn(2, w(5), |n| ex(n * n, n));
        let tm = commutant_step(&c, ComplexLieBasisElement::M, &xi).unwrap();
        assert_eq!(tm.degree(), 1);
        for (n, v) in tm.iter() {
            let expect = xs.clone() * (c.get(n + 1).unwrap().clone() - c.get(n).unwrap().clone());
            assert_eq!(v, &expect);
        }
        let tl = commutant_step(&c, ComplexLieBasisElement::L, &xi).unwrap();
        for (n, v) in tl.iter() {
            assert_eq!(v, &(ex(0, 2) * c.get(n).unwrap().clone()));
        }
        assert!(commutant_step(&c, ComplexLieBasisElement::Mx, &xi).is_err());
        let short = DiagonalCoefficients::new(0, 0, vec![ex(1, 0)]).unwrap();
        assert!(matches!(
            commutant_step(&short, ComplexLieBasisElement::M, &xi),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn lemma2_examples() {
        let xi = xi32();
        let constant = DiagonalCoefficients::from_fn(0, w(6), |_| ex(3, 1));
        assert!(lemma2_defect(&constant, &xi).unwrap().vanishes());

        let ramp = DiagonalCoefficients::from_fn(0, w(6), |n| ex(n, 0));
        let d = lemma2_defect(&ramp, &xi).unwrap();
        let xs = ExactScalar::from_real(xi.value());
        assert!(d.via_mbar.values().iter().all(|v| *v == xs));
        assert!(d.via_m.values().iter().all(|v| *v == -xs.clone()));
        assert_eq!(d.via_mbar.len_hint(), 12);
        assert!(lemma2_defect(&DiagonalCoefficients::from_fn(1, w(3), |_| ex(1, 0)), &xi).is_err());
    }

    impl<S: Scalar> DiagonalCoefficients<S> {
        fn len_hint(&self) -> usize {
            self.values.len()
        }
    }

    #[test]
    fn lemma3_examples() {
        let xi = xi32();
        let a = ex(2, -1);
        let flat = lemma3_solve(3, &ex(0, 0), &a, &xi, w(8));
        assert!(flat.values().iter().all(|v| *v == a));

        let xs = ExactScalar::from_real(xi.value());
        let ramp = lemma3_solve(0, &xs, &ex(0, 0), &xi, w(8));
        assert!(ramp.iter().all(|(n, v)| *v == ex(n, 0)));

        let k = ex(3, 0);
        let c = lemma3_solve(1, &k, &ex(2, 0), &xi, w(10));
        let sup = c.values().iter().map(|v| v.magnitude()).fold(0.0, f64::max);
        assert!((sup - (2.0 + 2.0 * 10.0)).abs() < 1e-12);
        let step = commutant_step(&c, ComplexLieBasisElement::M, &xi).unwrap();
        assert!(step.values().iter().all(|v| *v == k));
    }

    #[test]
    fn classification_examples() {
        let win = w(6);
        let t = crate::operators::scale(&ex(3, 0), &shift_power::<ExactScalar>(2, win));
        let fit = classify_isotypic(&t, 2, 0.0).unwrap();
        assert_eq!(fit.a, ex(3, 0));
        assert_eq!(fit.defect, 0.0);
        assert!(fit.certified);

        let eps = 1e-3;
        let base: BandedOperator<Complex64> = shift_power(1, win);
        let mut diag = base.diagonal(1).unwrap().to_vec();
        diag[4] += eps;
        let bumped = BandedOperator::from_diagonals(win, base.valid(), [(1, diag)].into()).unwrap();
        let fit = classify_isotypic(&bumped, 1, 1e-6).unwrap();
        let width = base.valid().len() as f64;
        assert!(fit.defect >= eps * (1.0 - 1.0 / width) - 1e-15);
        assert!(!fit.certified);

        let xi = xi32();
        let c = lemma3_solve(0, &ex(1, 0), &ex(5, 0), &xi, w(16));
        let fit = classify_isotypic(&c.to_operator().unwrap(), 0, 1e-9).unwrap();
        assert!((fit.defect - 16.0 * 2.0 / 3.0).abs() < 1e-12);

        assert!(matches!(
            classify_isotypic(&shift_power::<ExactScalar>(1, win), 2, 0.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn laurent_defect_examples() {
        let win = w(5);
        let phi: BTreeMap<i64, ExactScalar> = [(-1, ex(1, 1)), (3, ex(0, -2))].into();
        assert_eq!(laurent_defect(&mult_operator(&phi, win).unwrap()), 0.0);
        assert_eq!(laurent_defect(&shift_power::<ExactScalar>(-2, win)), 0.0);
        let spike = BandedOperator::from_fn(win, ValidRange::full(win), [1], |_, q| {
            if q == 0 { ex(1, 0) } else { ex(0, 0) }
        })
        .unwrap();
        assert!(laurent_defect(&spike) >= 0.5);
    }

    #[test]
    fn laurent_defect_is_rotation_invariant() {
        let win = w(6);
        let t = BandedOperator::from_fn(win, ValidRange::full(win), [-2, 0, 1], |d, q| {
            Complex64::new((d * q) as f64 * 0.1, (q * q) as f64 * 0.01)
        })
        .unwrap();
        let base = laurent_defect(&t);
        for theta in [0.3, 1.7, -2.9] {
            let rotated = conjugate_rotation(&Complex64::from_polar(1.0, theta), &t);
            assert!((laurent_defect(&rotated) - base).abs() < 1e-12);
        }
    }

    #[test]
    fn normalization_defect_examples() {
        let win = w(40);
        let xi = RepParameter::new(1.5).unwrap();
        let samples = [
            GroupElement::new(Complex64::from_polar(1.0, 0.5), Complex64::new(1.0, -0.5)).unwrap(),
            GroupElement::rotation(Complex64::from_polar(1.0, 2.0)).unwrap(),
        ];
        let shifts: Vec<_> = (-2..=2).map(|m| shift_power::<Complex64>(m, win)).collect();
        assert!(normalization_defect(&shifts, &xi, &samples, 1e-12).unwrap() <= 1e-8);

        let id = [BandedOperator::<Complex64>::identity(win)];
        assert!(normalization_defect(&id, &xi, &samples, 1e-12).unwrap() <= 1e-10);

        let p0 = BandedOperator::from_fn(win, ValidRange::full(win), [0], |_, q| {
            Complex64::new(if q == 0 { 1.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let gens = [BandedOperator::identity(win), p0];
        let translate = [GroupElement::translation(Complex64::from_polar(2.0 / 1.5, 0.7)).unwrap()];
        assert!(normalization_defect(&gens, &xi, &translate, 1e-12).unwrap() > 0.1);

        assert!(normalization_defect(&[], &xi, &samples, 1e-12).is_err());
    }

    #[test]
    fn growth_is_linear() {
        let xi = xi32();
        let rows = progression_growth(2, &ex(1, 1), &ex(0, 3), &xi, &[16, 32, 64]).unwrap();
        let slope = ex(1, 1).magnitude() / 1.5;
        for (n, d) in rows {
            assert!((d / n as f64 - slope).abs() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closed_form_matches_generic_commutator(c in arb_coeffs(-4..=4), x in 0usize..3) {
            let x = [ComplexLieBasisElement::L, ComplexLieBasisElement::M, ComplexLieBasisElement::Mbar][x];
            let xi = xi32();
            let closed = commutant_step(&c, x, &xi).unwrap();
            let generic = commutant_step_generic(&c, x, &xi).unwrap();
            prop_assert_eq!(closed, generic);
        }

        #[test]
        fn lemma2_defect_is_squared_difference(v in proptest::collection::vec(arb_gauss(), 2..10)) {
            let xi = xi32();
            let xs = ExactScalar::from_real(xi.value());
            let c = DiagonalCoefficients::new(0, -3, v).unwrap();
            let d = lemma2_defect(&c, &xi).unwrap();
            for (n, got) in d.via_mbar.iter() {
                let diff = c.get(n).unwrap().clone() - c.get(n - 1).unwrap().clone();
                prop_assert_eq!(got, &(xs.clone() * diff.clone() * diff));
            }
            for (n, got) in d.via_m.iter() {
                let diff = c.get(n + 1).unwrap().clone() - c.get(n).unwrap().clone();
                prop_assert_eq!(got, &(-(xs.clone() * diff.clone() * diff)));
            }
            prop_assert_eq!(d.vanishes(), c.is_constant());
        }

        #[test]
        fn progression_is_the_unique_solution(k in arb_gauss(), a in arb_gauss(), m in -3i64..=3) {
            let xi = xi32();
            let c = lemma3_solve(m, &k, &a, &xi, w(6));
            prop_assert_eq!(c.get(0).unwrap(), &a);
            let step = commutant_step(&c, ComplexLieBasisElement::M, &xi).unwrap();
            prop_assert!(step.values().iter().all(|v| *v == k));
            // Forward substitution from c_0 = a reproduces every term.
            let inv = ExactScalar::from_real(&(BigRational::one() / xi.value().clone()));
            let mut run = a.clone();
            for n in 1..=6 {
                run = run + k.clone() * inv.clone();
                prop_assert_eq!(c.get(n).unwrap(), &run);
            }
        }
    }
}
