use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{
    commutant_step, commutant_step_generic, lemma2_defect, lemma3_solve, normalization_defect, progression_growth,
    DiagonalCoefficients,
};
use crate::error::{Error, Mode, Result};
use crate::fourier::{FourierVector, Window};
use crate::group::{bracket, exp, ComplexLieBasisElement, GroupElement, LieVector};
use crate::operators::{
    commutator, conjugate, isotypic_project, isotypic_project_quadrature, mult_operator, reconstruct,
    shift_power, sub, BandedOperator, ValidRange,
};
use crate::rep::{apply_grid, apply_matrix, d_rep, d_rep_linear, RepParameter};
use crate::scalar::{exact_sup_norm, format_rational, ExactScalar, Scalar};
use crate::specfun::{band_estimate, bessel_row};

/// Band tolerance for checks whose own tolerance is tighter than `tol`.
const FINE_BAND_TOL: f64 = 1e-15;
/// Band tolerance for the representation contracts.
const REP_BAND_TOL: f64 = 1e-14;
const FD_STEPS: [f64; 2] = [1e-3, 1e-4];
const FD_MIN_ORDER: f64 = 1.9;
const GROWTH_WINDOWS: [usize; 4] = [16, 32, 64, 128];
const GROWTH_TOL: f64 = 0.02;
const MAX_XI_B: f64 = 8.0;

/// A defect magnitude: a float in numeric mode, an exact rational string in
/// exact mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Defect {
    Float(f64),
    Exact(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub mode: Mode,
    pub params: BTreeMap<String, Value>,
    pub defect: Defect,
    pub tolerance: f64,
    pub pass: bool,
}

/// Inputs shared by every check.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub xi: RepParameter<f64>,
    pub window: Window,
    pub seed: u64,
    pub tol: f64,
}

impl SuiteConfig {
    pub fn new(xi: f64, n: usize, seed: u64, tol: f64) -> Result<Self> {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(Error::Contract(format!("tolerance {tol} not in (0, 1)")));
        }
        Ok(SuiteConfig {
            xi: RepParameter::new(xi)?,
            window: Window::new(n)?,
            seed,
            tol,
        })
    }

    fn exact_xi(&self) -> RepParameter<BigRational> {
        let v = BigRational::from_f64(*self.xi.value()).expect("finite by construction");
        RepParameter::new(v).expect("nonzero by construction")
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn base_params(&self) -> BTreeMap<String, Value> {
        [
            ("N".to_string(), json!(self.window.half_width())),
            ("xi".to_string(), json!(self.xi.value())),
            ("seed".to_string(), json!(self.seed)),
        ]
        .into()
    }

    fn numeric(&self, check: &str, defect: f64, tolerance: f64, extra: &[(&str, Value)]) -> VerificationReport {
        self.report(check, Mode::Numeric, Defect::Float(defect), defect <= tolerance, tolerance, extra)
    }

    fn exact(&self, check: &str, defect: &BigRational, extra: &[(&str, Value)]) -> VerificationReport {
        let pass = defect.is_zero();
        self.report(check, Mode::Exact, Defect::Exact(format_rational(defect)), pass, 0.0, extra)
    }

    fn report(
        &self,
        check: &str,
        mode: Mode,
        defect: Defect,
        pass: bool,
        tolerance: f64,
        extra: &[(&str, Value)],
    ) -> VerificationReport {
        let mut params = self.base_params();
        params.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
        VerificationReport {
            check: check.into(),
            mode,
            params,
            defect,
            tolerance,
            pass,
        }
    }
}

/// Runs every check; the result is sorted by check name and depends only on
/// the arguments.
pub fn run_verification_suite(xi: f64, n: usize, seed: u64, tol: f64) -> Result<Vec<VerificationReport>> {
    let cfg = SuiteConfig::new(xi, n, seed, tol)?;
    let checks: [fn(&SuiteConfig) -> Result<VerificationReport>; 20] = [
        bessel_normalization,
        group_axioms,
        exp_one_parameter,
        rep_unitarity,
        rep_homomorphism,
        rep_cross_path,
        d_rep_finite_difference,
        d_rep_formulas,
        d_rep_bracket,
        isotypic_algebra,
        isotypic_quadrature_numeric,
        isotypic_quadrature_exact,
        reconstruction,
        lemma2,
        lemma3_recurrence,
        lemma3_growth,
        commutant_step_closed_form,
        b_stability,
        b_rotation_symbol,
        b_translation_fixed,
    ];
    let mut reports = checks.iter().map(|f| f(&cfg)).collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(reports)
}

fn random_unit(rng: &mut impl Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Random element with `|ξ||b| ≤ reach`.
fn random_element(rng: &mut impl Rng, xi: f64, reach: f64) -> GroupElement {
    let r = rng.gen_range(0.0..reach) / xi.abs();
    let b = Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
    GroupElement::new(random_unit(rng), b).expect("unit rotation part")
}

fn random_vector(rng: &mut impl Rng, window: Window, radius: i64) -> FourierVector {
    let coeffs = window
        .indices()
        .map(|n| {
            if n.abs() <= radius {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .collect();
    FourierVector::new(window, coeffs).expect("sized to the window")
}

fn random_gauss(rng: &mut impl Rng) -> ExactScalar {
    let mut part = || BigRational::new(rng.gen_range(-16i64..=16).into(), rng.gen_range(1i64..=16).into());
    ExactScalar::new(part(), part())
}

fn random_exact_op(rng: &mut impl Rng, window: Window, band: i64) -> BandedOperator<ExactScalar> {
    BandedOperator::from_fn(window, ValidRange::full(window), -band..=band, |_, _| random_gauss(rng))
        .expect("offsets within the window")
}

fn max_rational(acc: BigRational, v: BigRational) -> BigRational {
    if v > acc {
        v
    } else {
        acc
    }
}

fn exact_diff(a: &BandedOperator<ExactScalar>, b: &BandedOperator<ExactScalar>) -> Result<BigRational> {
    Ok(sub(a, b)?
        .diagonals()
        .values()
        .flatten()
        .map(exact_sup_norm)
        .fold(BigRational::zero(), max_rational))
}

fn exact_seq_diff(a: &DiagonalCoefficients<ExactScalar>, b: &DiagonalCoefficients<ExactScalar>) -> BigRational {
    if a.degree() != b.degree() || a.start() != b.start() || a.values().len() != b.values().len() {
        return BigRational::from_integer(1.into());
    }
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| exact_sup_norm(&(x.clone() - y.clone())))
        .fold(BigRational::zero(), max_rational)
}

fn bessel_normalization(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let xi = cfg.xi.value().abs();
    let mut worst: f64 = 0.0;
    for r in [0.25, 1.0, 2.0, 4.0, 8.0] {
        let x = (xi * r).min(crate::specfun::MAX_ARGUMENT);
        let k = band_estimate(x, FINE_BAND_TOL)?;
        worst = worst.max((bessel_row(x, k)?.normalization() - 1.0).abs());
    }
    Ok(cfg.numeric("bessel_normalization", worst, 1e-12, &[]))
}

fn group_axioms(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(1);
    let xi = *cfg.xi.value();
    let dist = |p: &GroupElement, q: &GroupElement| (p.a() - q.a()).norm().max((p.b() - q.b()).norm());
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (g, h, k) = (
            random_element(&mut rng, xi, MAX_XI_B),
            random_element(&mut rng, xi, MAX_XI_B),
            random_element(&mut rng, xi, MAX_XI_B),
        );
        worst = worst
            .max(dist(&g.mul(&h).mul(&k), &g.mul(&h.mul(&k))))
            .max(dist(&g.mul(&g.inv()), &GroupElement::identity()))
            .max(dist(&GroupElement::identity().mul(&g), &g));
    }
    Ok(cfg.numeric("group_axioms", worst, 1e-12, &[("samples", json!(50))]))
}

fn exp_one_parameter(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(2);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let x = LieVector::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (s, t) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let lhs = exp(&x, s)?.mul(&exp(&x, t)?);
        let rhs = exp(&x, s + t)?;
        worst = worst.max((lhs.a() - rhs.a()).norm()).max((lhs.b() - rhs.b()).norm());
    }
    Ok(cfg.numeric("exp_one_parameter", worst, 1e-12, &[("samples", json!(20))]))
}

fn rep_unitarity(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(3);
    let xi = *cfg.xi.value();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let g = random_element(&mut rng, xi, MAX_XI_B);
        let f = random_vector(&mut rng, cfg.window, cfg.window.n());
        let out = apply_matrix(&cfg.xi, &g, &f, REP_BAND_TOL)?;
        worst = worst.max((out.norm() - f.norm()).abs() / f.norm());
    }
    Ok(cfg.numeric("rep_unitarity", worst, cfg.tol, &[("samples", json!(20)), ("band_tol", json!(REP_BAND_TOL))]))
}

fn rep_homomorphism(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(4);
    let xi = *cfg.xi.value();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let g = random_element(&mut rng, xi, MAX_XI_B / 2.0);
        let h = random_element(&mut rng, xi, MAX_XI_B / 2.0);
        let f = random_vector(&mut rng, cfg.window, cfg.window.n());
        let two_step = apply_matrix(&cfg.xi, &g, &apply_matrix(&cfg.xi, &h, &f, REP_BAND_TOL)?, REP_BAND_TOL)?;
        let one_step = apply_matrix(&cfg.xi, &g.mul(&h), &f, REP_BAND_TOL)?;
        worst = worst.max(two_step.sub(&one_step).norm() / f.norm());
    }
    Ok(cfg.numeric(
        "rep_homomorphism",
        worst,
        cfg.tol,
        &[("samples", json!(20)), ("band_tol", json!(REP_BAND_TOL))],
    ))
}

fn rep_cross_path(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(5);
    let xi = *cfg.xi.value();
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let g = random_element(&mut rng, xi, MAX_XI_B);
        let f = random_vector(&mut rng, cfg.window, cfg.window.n());
        let grid = apply_grid(&cfg.xi, &g, &f, REP_BAND_TOL)?;
        let matrix = apply_matrix(&cfg.xi, &g, &f, REP_BAND_TOL)?;
        worst = worst.max(grid.max_abs_diff(&matrix));
    }
    Ok(cfg.numeric("rep_cross_path", worst, cfg.tol, &[("samples", json!(20)), ("band_tol", json!(REP_BAND_TOL))]))
}

/// Observed order of the central difference quotient of `t ↦ π(exp(tX))F`
/// against `dπ(X)F`, minimized over the basis.
pub(crate) fn finite_difference_order(
    xi: &RepParameter<f64>,
    x: &LieVector<f64>,
    f: &FourierVector,
) -> Result<(f64, [f64; 2])> {
    let d = d_rep_linear::<Complex64>(xi, x, f.window());
    let exact = d.apply(f)?;
    let mut errs = [0.0; 2];
    for (err, t) in errs.iter_mut().zip(FD_STEPS) {
        let fwd = apply_matrix(xi, &exp(x, t)?, f, FINE_BAND_TOL)?;
        let bwd = apply_matrix(xi, &exp(x, -t)?, f, FINE_BAND_TOL)?;
        let quotient = fwd.sub(&bwd).scale(Complex64::new(0.5 / t, 0.0));
        *err = quotient.sub(&exact).norm();
    }
    let order = (errs[0] / errs[1]).log10() / (FD_STEPS[0] / FD_STEPS[1]).log10();
    Ok((order, errs))
}

fn d_rep_finite_difference(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(6);
    let radius = (cfg.window.n() / 4).clamp(1, 16);
    let f = random_vector(&mut rng, cfg.window, radius);
    let mut worst = f64::INFINITY;
    for x in [LieVector::L, LieVector::MX, LieVector::MY] {
        worst = worst.min(finite_difference_order(&cfg.xi, &x, &f)?.0);
    }
    let defect = (FD_MIN_ORDER - worst).max(0.0);
    Ok(cfg.numeric(
        "d_rep_finite_difference",
        defect,
        0.0,
        &[
            ("min_order", json!(worst)),
            ("required_order", json!(FD_MIN_ORDER)),
            ("steps", json!(FD_STEPS)),
        ],
    ))
}

/// Entry of `dπ_ξ(X)` at `(n + d, n)` read off the basis-vector formulas.
fn formula_entry(x: ComplexLieBasisElement, xi: &BigRational, d: i64, n: i64) -> ExactScalar {
    let r = |v: BigRational| ExactScalar::new(v, BigRational::zero());
    let i = |v: BigRational| ExactScalar::new(BigRational::zero(), v);
    let half = xi / BigRational::from_integer(2.into());
    let zero = <ExactScalar as Scalar>::zero();
    match (x, d) {
        (ComplexLieBasisElement::L, 0) => i(BigRational::from_integer((-n).into())),
        (ComplexLieBasisElement::Mx, 1 | -1) => i(half),
        (ComplexLieBasisElement::My, 1) => r(half),
        (ComplexLieBasisElement::My, -1) => r(-half),
        (ComplexLieBasisElement::M, -1) => r(-xi.clone()),
        (ComplexLieBasisElement::Mbar, 1) => r(xi.clone()),
        _ => zero,
    }
}

fn d_rep_formulas(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let xi = cfg.exact_xi();
    let w = cfg.window;
    let mut worst = BigRational::zero();
    for x in ComplexLieBasisElement::ALL {
        let op = d_rep::<ExactScalar>(&xi, x, w);
        for d in -2..=2 {
            for n in w.indices() {
                let diff = op.entry(d, n) - formula_entry(x, xi.value(), d, n);
                worst = max_rational(worst, exact_sup_norm(&diff));
            }
        }
    }
    Ok(cfg.exact("d_rep_formulas", &worst, &[]))
}

fn d_rep_bracket(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let xi = cfg.exact_xi();
    let w = cfg.window;
    let one = || BigRational::from_integer(1.into());
    let zero = BigRational::zero;
    let basis = [
        LieVector::new(one(), zero(), zero()),
        LieVector::new(zero(), one(), zero()),
        LieVector::new(zero(), zero(), one()),
    ];
    let mut worst = BigRational::zero();
    for x in &basis {
        for y in &basis {
            let lhs = commutator(
                &d_rep_linear::<ExactScalar>(&xi, x, w),
                &d_rep_linear::<ExactScalar>(&xi, y, w),
            )?;
            let rhs = d_rep_linear::<ExactScalar>(&xi, &bracket(x, y), w);
            worst = max_rational(worst, exact_diff(&lhs, &rhs)?);
        }
    }
    let dl = d_rep::<ExactScalar>(&xi, ComplexLieBasisElement::L, w);
    let dm = d_rep::<ExactScalar>(&xi, ComplexLieBasisElement::M, w);
    let dmbar = d_rep::<ExactScalar>(&xi, ComplexLieBasisElement::Mbar, w);
    let i_dm = crate::operators::scale(&ExactScalar::imag_unit(), &dm);
    worst = max_rational(worst, exact_diff(&commutator(&dl, &dm)?, &i_dm)?);
    let flat = commutator(&dm, &dmbar)?;
    worst = max_rational(worst, exact_diff(&flat, &BandedOperator::zero(w))?);
    Ok(cfg.exact("d_rep_bracket", &worst, &[]))
}

fn isotypic_algebra(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(7);
    let t = random_exact_op(&mut rng, cfg.window, 3);
    let mut worst = BigRational::zero();
    for m in -4..=4 {
        let p = isotypic_project(&t, m);
        worst = max_rational(worst, exact_diff(&isotypic_project(&p, m), &p)?);
        for k in (-4..=4).filter(|&k| k != m) {
            let cross = isotypic_project(&p, k);
            worst = max_rational(worst, exact_diff(&cross, &BandedOperator::zero(cfg.window))?);
        }
        if p.offsets().iter().any(|&d| d != m) {
            worst = max_rational(worst, BigRational::from_integer(1.into()));
        }
    }
    Ok(cfg.exact("isotypic_algebra", &worst, &[("band", json!(3))]))
}

fn reconstruction(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(8);
    let t = random_exact_op(&mut rng, cfg.window, 3);
    let defect = exact_diff(&reconstruct(&t), &t)?;
    Ok(cfg.exact("reconstruction", &defect, &[("band", json!(3))]))
}

fn isotypic_quadrature_numeric(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(9);
    let t = BandedOperator::from_fn(cfg.window, ValidRange::full(cfg.window), -3..=3, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })?;
    let mut worst: f64 = 0.0;
    for m in -5..=5 {
        let quad = isotypic_project_quadrature(&t, m)?;
        worst = worst.max(quad.max_abs_diff(&isotypic_project(&t, m))?);
    }
    Ok(cfg.numeric("isotypic_quadrature_numeric", worst, 1e-13, &[("band", json!(3))]))
}

fn isotypic_quadrature_exact(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(10);
    let w = Window::new(cfg.window.half_width().min(16))?;
    let t = random_exact_op(&mut rng, w, 2);
    let mut worst = BigRational::zero();
    for m in -3..=3 {
        let quad = isotypic_project_quadrature(&t, m)?;
        worst = max_rational(worst, exact_diff(&quad, &isotypic_project(&t, m))?);
    }
    Ok(cfg.exact(
        "isotypic_quadrature_exact",
        &worst,
        &[("band", json!(2)), ("quadrature_N", json!(w.half_width()))],
    ))
}

fn lemma2(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(11);
    let xi = cfg.exact_xi();
    let xs = ExactScalar::from_real(xi.value());
    let w = cfg.window;
    let samples = 8;
    let mut worst = BigRational::zero();
    for s in 0..samples {
        let c = if s == 0 {
            let a = random_gauss(&mut rng);
            DiagonalCoefficients::from_fn(0, w, |_| a.clone())
        } else {
            DiagonalCoefficients::from_fn(0, w, |_| random_gauss(&mut rng))
        };
        let d = lemma2_defect(&c, &xi)?;
        let sq = |n: i64| {
            let diff = c.get(n + 1).expect("in range").clone() - c.get(n).expect("in range").clone();
            xs.clone() * diff.clone() * diff
        };
        let expect_mbar = DiagonalCoefficients::new(1, -w.n() + 1, (-w.n()..w.n()).map(sq).collect())?;
        worst = max_rational(worst, exact_seq_diff(&d.via_mbar, &expect_mbar));
        for (n, v) in d.via_m.iter() {
            let diff = -(v.clone()) - sq(n);
            worst = max_rational(worst, exact_sup_norm(&diff));
        }
        if d.vanishes() != c.is_constant() {
            worst = max_rational(worst, BigRational::from_integer(1.into()));
        }
    }
    Ok(cfg.exact("lemma2_defect", &worst, &[("samples", json!(samples))]))
}

fn lemma3_recurrence(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(12);
    let xi = cfg.exact_xi();
    let samples = 8;
    let mut worst = BigRational::zero();
    for _ in 0..samples {
        let (k, a) = (random_gauss(&mut rng), random_gauss(&mut rng));
        let m = rng.gen_range(-4i64..=4);
        let c = lemma3_solve(m, &k, &a, &xi, cfg.window);
        let step = commutant_step(&c, ComplexLieBasisElement::M, &xi)?;
        for v in step.values() {
            worst = max_rational(worst, exact_sup_norm(&(v.clone() - k.clone())));
        }
        worst = max_rational(worst, exact_sup_norm(&(c.get(0).expect("0 in window").clone() - a)));
    }
    Ok(cfg.exact("lemma3_recurrence", &worst, &[("samples", json!(samples))]))
}

/// Largest relative deviation of `defect(N) / N` from its value at the
/// smallest window.
pub(crate) fn growth_deviation(rows: &[(usize, f64)]) -> f64 {
    let (n0, d0) = rows[0];
    let slope = d0 / n0 as f64;
    rows.iter()
        .map(|&(n, d)| ((d / n as f64) / slope - 1.0).abs())
        .fold(0.0, f64::max)
}

fn lemma3_growth(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(13);
    let xi = cfg.exact_xi();
    let mut k = random_gauss(&mut rng);
    if Scalar::is_zero(&k) {
        k = <ExactScalar as Scalar>::one();
    }
    let a = random_gauss(&mut rng);
    let rows = progression_growth(1, &k, &a, &xi, &GROWTH_WINDOWS)?;
    let dev = growth_deviation(&rows);
    Ok(cfg.numeric(
        "lemma3_growth",
        dev,
        GROWTH_TOL,
        &[
            ("windows", json!(GROWTH_WINDOWS)),
            ("defects", json!(rows.iter().map(|r| r.1).collect::<Vec<_>>())),
        ],
    ))
}

fn commutant_step_closed_form(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(14);
    let xi = cfg.exact_xi();
    let w = Window::new(cfg.window.half_width().min(32))?;
    let mut worst = BigRational::zero();
    for m in -4..=4 {
        let c = DiagonalCoefficients::from_fn(m, w, |_| random_gauss(&mut rng));
        for x in [ComplexLieBasisElement::L, ComplexLieBasisElement::M, ComplexLieBasisElement::Mbar] {
            let closed = commutant_step(&c, x, &xi)?;
            let generic = commutant_step_generic(&c, x, &xi)?;
            worst = max_rational(worst, exact_seq_diff(&closed, &generic));
        }
    }
    Ok(cfg.exact("commutant_step_closed_form", &worst, &[("sequence_N", json!(w.half_width()))]))
}

const SYMBOL_BAND: i64 = 2;

/// Window on which conjugating band-`SYMBOL_BAND` operators by elements with
/// `|ξ||b| ≤ MAX_XI_B` still leaves `[-N, N]` valid.
fn conjugation_window(cfg: &SuiteConfig) -> Result<Window> {
    let k = band_estimate(MAX_XI_B, FINE_BAND_TOL)?;
    Ok(cfg.window.grow(2 * k + SYMBOL_BAND as usize))
}

fn b_stability(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(15);
    let xi = *cfg.xi.value();
    let w = conjugation_window(cfg)?;
    let gens: Vec<_> = (-SYMBOL_BAND..=SYMBOL_BAND)
        .map(|m| shift_power::<Complex64>(m, w))
        .collect();
    let samples: Vec<_> = (0..20).map(|_| random_element(&mut rng, xi, MAX_XI_B)).collect();
    let defect = normalization_defect(&gens, &cfg.xi, &samples, FINE_BAND_TOL)?;
    Ok(cfg.numeric(
        "b_stability",
        defect,
        1e-8,
        &[("samples", json!(20)), ("symbol_band", json!(SYMBOL_BAND))],
    ))
}

fn random_symbol(rng: &mut impl Rng) -> BTreeMap<i64, Complex64> {
    (-SYMBOL_BAND..=SYMBOL_BAND)
        .map(|d| (d, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
        .collect()
}

fn b_rotation_symbol(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(16);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let phi = random_symbol(&mut rng);
        let w = random_unit(&mut rng);
        let m_phi = mult_operator(&phi, cfg.window)?;
        let rotated: BTreeMap<i64, Complex64> = phi.iter().map(|(&d, &c)| (d, c * w.unit_pow(-d))).collect();
        let got = conjugate(&cfg.xi, &GroupElement::rotation(w)?, &m_phi, cfg.tol)?;
        worst = worst.max(got.max_abs_diff(&mult_operator(&rotated, cfg.window)?)?);
    }
    Ok(cfg.numeric("b_rotation_symbol", worst, 1e-10, &[("samples", json!(10))]))
}

fn b_translation_fixed(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let mut rng = cfg.rng(17);
    let xi = *cfg.xi.value();
    let w = conjugation_window(cfg)?;
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let phi = random_symbol(&mut rng);
        let r = rng.gen_range(0.0..MAX_XI_B) / xi.abs();
        let g = GroupElement::translation(Complex64::from_polar(r, rng.gen_range(-3.0..3.0)))?;
        let m_phi = mult_operator(&phi, w)?;
        let got = conjugate(&cfg.xi, &g, &m_phi, FINE_BAND_TOL)?;
        worst = worst.max(got.max_abs_diff(&m_phi)?);
    }
    Ok(cfg.numeric(
        "b_translation_fixed",
        worst,
        1e-12,
        &[("samples", json!(10)), ("band_tol", json!(FINE_BAND_TOL))],
    ))
}
