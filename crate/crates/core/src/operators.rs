//! Banded operators on a Fourier window.
//!
//! An operator is stored by diagonals: `T e_q = Σ_d c^{(d)}_q e_{q+d}`. The
//! coefficients of every diagonal are kept for the columns `q` in the
//! operator's *valid range*, the sub-window on which the truncated operator
//! agrees with the operator on all of `L²(T)`. Constructors start with the
//! full window; products, commutators and conjugations shrink the range by
//! exactly the amount of truncation they incur. Output indices `q + d` may
//! leave the window.
//!
//! The isotypic component of degree `m` is the diagonal `d = m`, i.e. the
//! operators with `T e_n ∝ e_{n+m}`. Conjugating by a rotation `(w, 0)`
//! multiplies that diagonal by `w^{-m}`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::fourier::{FourierVector, Window};
use crate::group::GroupElement;
use crate::rep::{rep_operator, RepParameter};
use crate::scalar::{ExactScalar, ModeScalar, Scalar};
use crate::specfun::band_estimate;

/// Inclusive range of column indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ValidRange {
    pub lo: i64,
    pub hi: i64,
}

impl ValidRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Range(format!("empty valid range [{lo}, {hi}]")));
        }
        Ok(ValidRange { lo, hi })
    }

    pub fn full(window: Window) -> Self {
        ValidRange {
            lo: -window.n(),
            hi: window.n(),
        }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, q: i64) -> bool {
        self.lo <= q && q <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        Self::new(self.lo.max(other.lo), self.hi.min(other.hi))
    }

    pub fn within(&self, window: Window) -> bool {
        window.contains(self.lo) && window.contains(self.hi)
    }
}

impl fmt::Display for ValidRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Clone, Debug)]
pub struct BandedOperator<S> {
    window: Window,
    valid: ValidRange,
    diagonals: BTreeMap<i64, Vec<S>>,
}

impl<S: Scalar> PartialEq for BandedOperator<S> {
    /// Same window, same valid range, same entries (absent diagonals count as zero).
    fn eq(&self, other: &Self) -> bool {
        if self.window != other.window || self.valid != other.valid {
            return false;
        }
        let offsets: std::collections::BTreeSet<i64> =
            self.diagonals.keys().chain(other.diagonals.keys()).copied().collect();
        offsets
            .into_iter()
            .all(|d| self.valid.iter().all(|q| self.entry(d, q) == other.entry(d, q)))
    }
}

impl<S: Scalar> BandedOperator<S> {
    pub fn from_diagonals(window: Window, valid: ValidRange, diagonals: BTreeMap<i64, Vec<S>>) -> Result<Self> {
        if !valid.within(window) {
            return Err(Error::Range(format!(
                "valid range {valid} exceeds window N={}",
                window.n()
            )));
        }
        if let Some((d, v)) = diagonals.iter().find(|(_, v)| v.len() != valid.len()) {
            return Err(Error::Contract(format!(
                "diagonal {d} has {} coefficients, valid range {valid} needs {}",
                v.len(),
                valid.len()
            )));
        }
        Ok(BandedOperator {
            window,
            valid,
            diagonals,
        })
    }

    /// Builds the diagonals `offsets` entrywise from `f(d, q)`.
    pub fn from_fn(
        window: Window,
        valid: ValidRange,
        offsets: impl IntoIterator<Item = i64>,
        mut f: impl FnMut(i64, i64) -> S,
    ) -> Result<Self> {
        let diagonals = offsets
            .into_iter()
            .map(|d| (d, valid.iter().map(|q| f(d, q)).collect()))
            .collect();
        Self::from_diagonals(window, valid, diagonals)
    }

    pub fn zero(window: Window) -> Self {
        BandedOperator {
            window,
            valid: ValidRange::full(window),
            diagonals: BTreeMap::new(),
        }
    }

    pub fn identity(window: Window) -> Self {
        shift_power(0, window)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn valid(&self) -> ValidRange {
        self.valid
    }

    pub fn diagonals(&self) -> &BTreeMap<i64, Vec<S>> {
        &self.diagonals
    }

    pub fn diagonal(&self, d: i64) -> Option<&[S]> {
        self.diagonals.get(&d).map(Vec::as_slice)
    }

    /// `c^{(d)}_q`; zero off the stored band or outside the valid range.
    pub fn entry(&self, d: i64, q: i64) -> S {
        match self.diagonals.get(&d) {
            Some(v) if self.valid.contains(q) => v[(q - self.valid.lo) as usize].clone(),
            _ => S::zero(),
        }
    }

    /// Offsets of the diagonals carrying at least one nonzero coefficient.
    pub fn offsets(&self) -> Vec<i64> {
        self.diagonals
            .iter()
            .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
            .map(|(d, _)| *d)
            .collect()
    }

    /// Largest `|d|` over nonzero diagonals.
    pub fn band(&self) -> usize {
        self.offsets().iter().map(|d| d.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.offsets().is_empty()
    }

    /// Drops diagonals whose coefficients are all zero.
    pub fn pruned(&self) -> Self {
        let diagonals = self
            .diagonals
            .iter()
            .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
            .map(|(d, v)| (*d, v.clone()))
            .collect();
        BandedOperator {
            diagonals,
            ..self.clone()
        }
    }

    /// Restricts to a sub-range of the current valid range.
    pub fn restrict(&self, valid: ValidRange) -> Result<Self> {
        if valid.lo < self.valid.lo || valid.hi > self.valid.hi {
            return Err(Error::Range(format!(
                "cannot widen valid range {} to {valid}",
                self.valid
            )));
        }
        let start = (valid.lo - self.valid.lo) as usize;
        let diagonals = self
            .diagonals
            .iter()
            .map(|(d, v)| (*d, v[start..start + valid.len()].to_vec()))
            .collect();
        Ok(BandedOperator {
            window: self.window,
            valid,
            diagonals,
        })
    }

    /// Re-homes the operator in another ambient window containing its valid range.
    pub fn with_window(&self, window: Window) -> Result<Self> {
        Self::from_diagonals(window, self.valid, self.diagonals.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BandedOperator<T> {
        BandedOperator {
            window: self.window,
            valid: self.valid,
            diagonals: self
                .diagonals
                .iter()
                .map(|(d, v)| (*d, v.iter().map(&f).collect()))
                .collect(),
        }
    }

    /// `max |c - c'|` over the common valid range.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_windows(self, other)?;
        let range = self.valid.intersect(&other.valid)?;
        let offsets: std::collections::BTreeSet<i64> =
            self.diagonals.keys().chain(other.diagonals.keys()).copied().collect();
        Ok(offsets
            .into_iter()
            .flat_map(|d| range.iter().map(move |q| (d, q)))
            .map(|(d, q)| (self.entry(d, q) - other.entry(d, q)).magnitude())
            .fold(0.0, f64::max))
    }

    pub fn sup_norm(&self) -> f64 {
        self.diagonals
            .values()
            .flatten()
            .map(Scalar::magnitude)
            .fold(0.0, f64::max)
    }

    /// Dense block: rows over the window, columns over the valid range.
    pub fn dense(&self) -> Vec<Vec<S>> {
        self.window
            .indices()
            .map(|r| self.valid.iter().map(|q| self.entry(r - q, q)).collect())
            .collect()
    }
}

impl BandedOperator<Complex64> {
    /// Applies the operator to a vector supported inside the valid range. The
    /// output window grows by the band.
    pub fn apply(&self, f: &FourierVector) -> Result<FourierVector> {
        let radius = f.support_radius() as i64;
        if !self.valid.contains(-radius) || !self.valid.contains(radius) {
            return Err(Error::Range(format!(
                "vector support [-{radius}, {radius}] exceeds valid range {}",
                self.valid
            )));
        }
        let out_window = f.window().grow(self.band());
        let mut out = FourierVector::zeros(out_window);
        for (d, coeffs) in &self.diagonals {
            for (q, fq) in f.iter() {
                if !self.valid.contains(q) || !out_window.contains(q + d) {
                    continue;
                }
                let c = coeffs[(q - self.valid.lo) as usize];
                out.set(q + d, out.get(q + d) + c * fq)?;
            }
        }
        Ok(out)
    }
}

fn check_windows<S>(t: &BandedOperator<S>, u: &BandedOperator<S>) -> Result<()> {
    if t.window != u.window {
        return Err(Error::Contract(format!(
            "operators live on windows N={} and N={}",
            t.window.n(),
            u.window.n()
        )));
    }
    Ok(())
}

/// `S^m`: `e_n ↦ e_{n+m}`.
pub fn shift_power<S: Scalar>(m: i64, window: Window) -> BandedOperator<S> {
    let valid = ValidRange::full(window);
    let mut diagonals = BTreeMap::new();
    diagonals.insert(m, vec![S::one(); valid.len()]);
    BandedOperator {
        window,
        valid,
        diagonals,
    }
}

/// Multiplication by `φ = Σ_d φ̂(d) z^d`: the Laurent operator whose diagonal
/// `d` is constant, equal to `φ̂(d)`. The symbol's support must satisfy `|d| ≤ 2N`.
pub fn mult_operator<S: Scalar>(symbol: &BTreeMap<i64, S>, window: Window) -> Result<BandedOperator<S>> {
    let limit = 2 * window.n();
    if let Some(d) = symbol.keys().find(|d| d.abs() > limit) {
        return Err(Error::Range(format!(
            "symbol coefficient at {d} is beyond the band limit {limit} of window N={}",
            window.n()
        )));
    }
    let valid = ValidRange::full(window);
    let diagonals = symbol
        .iter()
        .map(|(d, c)| (*d, vec![c.clone(); valid.len()]))
        .collect();
    BandedOperator::from_diagonals(window, valid, diagonals)
}

/// `T ∘ U`. A column `q` stays valid when it is valid for `U` and every
/// output `q + d` of `U` is a valid column of `T`.
pub fn compose<S: Scalar>(t: &BandedOperator<S>, u: &BandedOperator<S>) -> Result<BandedOperator<S>> {
    check_windows(t, u)?;
    let u_offsets = u.offsets();
    let t_offsets = t.offsets();
    let mut lo = u.valid.lo;
    let mut hi = u.valid.hi;
    for d in &u_offsets {
        lo = lo.max(t.valid.lo - d);
        hi = hi.min(t.valid.hi - d);
    }
    let valid = ValidRange::new(lo, hi).map_err(|_| {
        Error::Range(format!(
            "composition exhausts the valid range (T valid {}, U valid {}, U offsets {:?})",
            t.valid, u.valid, u_offsets
        ))
    })?;
    let mut diagonals: BTreeMap<i64, Vec<S>> = BTreeMap::new();
    for du in &u_offsets {
        let uc = &u.diagonals[du];
        for dt in &t_offsets {
            let tc = &t.diagonals[dt];
            let out = diagonals
                .entry(dt + du)
                .or_insert_with(|| vec![S::zero(); valid.len()]);
            for (slot, q) in valid.iter().enumerate() {
                let a = &tc[(q + du - t.valid.lo) as usize];
                let b = &uc[(q - u.valid.lo) as usize];
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                out[slot] = out[slot].clone() + a.clone() * b.clone();
            }
        }
    }
    Ok(BandedOperator {
        window: t.window,
        valid,
        diagonals,
    })
}

fn combine<S: Scalar>(
    t: &BandedOperator<S>,
    u: &BandedOperator<S>,
    f: impl Fn(S, S) -> S,
) -> Result<BandedOperator<S>> {
    check_windows(t, u)?;
    let valid = t.valid.intersect(&u.valid)?;
    let offsets: std::collections::BTreeSet<i64> =
        t.diagonals.keys().chain(u.diagonals.keys()).copied().collect();
    let diagonals = offsets
        .into_iter()
        .map(|d| (d, valid.iter().map(|q| f(t.entry(d, q), u.entry(d, q))).collect()))
        .collect();
    Ok(BandedOperator {
        window: t.window,
        valid,
        diagonals,
    })
}

pub fn add<S: Scalar>(t: &BandedOperator<S>, u: &BandedOperator<S>) -> Result<BandedOperator<S>> {
    combine(t, u, |a, b| a + b)
}

pub fn sub<S: Scalar>(t: &BandedOperator<S>, u: &BandedOperator<S>) -> Result<BandedOperator<S>> {
    combine(t, u, |a, b| a - b)
}

pub fn scale<S: Scalar>(lambda: &S, t: &BandedOperator<S>) -> BandedOperator<S> {
    t.map(|c| lambda.clone() * c.clone())
}

/// `(T*)^{(-d)}_q = conj(c^{(d)}_{q-d})`, valid where every `q - d` is a valid column of `T`.
pub fn adjoint<S: Scalar>(t: &BandedOperator<S>) -> Result<BandedOperator<S>> {
    let offsets = t.offsets();
    let (mut lo, mut hi) = (-t.window.n(), t.window.n());
    if offsets.is_empty() {
        lo = t.valid.lo;
        hi = t.valid.hi;
    }
    for d in &offsets {
        lo = lo.max(t.valid.lo + d);
        hi = hi.min(t.valid.hi + d);
    }
    let valid = ValidRange::new(lo, hi)?;
    BandedOperator::from_fn(t.window, valid, offsets.iter().map(|d| -d), |nd, q| {
        t.entry(-nd, q + nd).conj()
    })
}

/// `[T, U] = TU − UT`.
pub fn commutator<S: Scalar>(t: &BandedOperator<S>, u: &BandedOperator<S>) -> Result<BandedOperator<S>> {
    sub(&compose(t, u)?, &compose(u, t)?)
}

/// `κ((w, 0)) T`: diagonal `d` is multiplied by `w^{-d}`. Exact in either mode.
pub fn conjugate_rotation<S: Scalar>(w: &S, t: &BandedOperator<S>) -> BandedOperator<S> {
    BandedOperator {
        window: t.window,
        valid: t.valid,
        diagonals: t
            .diagonals
            .iter()
            .map(|(d, v)| {
                let factor = w.unit_pow(-d);
                (*d, v.iter().map(|c| factor.clone() * c.clone()).collect())
            })
            .collect(),
    }
}

/// `κ(g) T = π_ξ(g) T π_ξ(g)^{-1}`.
///
/// Rotations are handled exactly by diagonal scaling. General elements need
/// the Bessel matrix coefficients and are only available in numeric mode;
/// the band of `π_ξ(g)` is `band_estimate(|ξ||b|, tol)`, so the valid range
/// shrinks by twice that band plus the band of `T`.
pub fn conjugate<S: ModeScalar>(
    xi: &RepParameter<S::Real>,
    g: &GroupElement<S>,
    t: &BandedOperator<S>,
    tol: f64,
) -> Result<BandedOperator<S>> {
    if !(tol > 0.0) {
        return Err(Error::Contract(format!("tolerance must be positive, got {tol}")));
    }
    if g.is_rotation() {
        return Ok(conjugate_rotation(g.a(), t));
    }
    S::conjugate_translation(xi, g, t, tol)
}

pub(crate) fn conjugate_numeric(
    xi: &RepParameter<f64>,
    g: &GroupElement<Complex64>,
    t: &BandedOperator<Complex64>,
    tol: f64,
) -> Result<BandedOperator<Complex64>> {
    if g.is_rotation() {
        return Ok(conjugate_rotation(g.a(), t));
    }
    let band = band_estimate(xi.value().abs() * g.b().norm(), tol)?;
    let forward = rep_operator(xi, g, band, t.window)?;
    let backward = rep_operator(xi, &g.inv(), band, t.window)?;
    compose(&forward, &compose(t, &backward)?)
}

/// Isotypic component of shift degree `m`: the diagonal `d = m`, everything else zeroed.
pub fn isotypic_project<S: Scalar>(t: &BandedOperator<S>, m: i64) -> BandedOperator<S> {
    let diagonals = t
        .diagonals
        .get(&m)
        .map(|v| (m, v.clone()))
        .into_iter()
        .collect();
    BandedOperator {
        window: t.window,
        valid: t.valid,
        diagonals,
    }
}

/// `Σ_{|m| ≤ band(T)} Π_m(T)`.
pub fn reconstruct<S: Scalar>(t: &BandedOperator<S>) -> BandedOperator<S> {
    let b = t.band() as i64;
    (-b..=b).fold(
        BandedOperator {
            window: t.window,
            valid: t.valid,
            diagonals: BTreeMap::new(),
        },
        |acc, m| add(&acc, &isotypic_project(t, m)).expect("same window and valid range"),
    )
}

/// Scalar fields in which the rotation subgroup can be sampled at roots of unity.
pub trait RotationAverage: ModeScalar {
    /// A field containing the M-th roots of unity.
    type Field: Scalar;

    fn lift(&self) -> Self::Field;
    /// `e^{2πij/order}`.
    fn root_of_unity(order: usize, j: usize) -> Self::Field;
    fn lower(v: &Self::Field) -> Result<Self>;
}

impl RotationAverage for Complex64 {
    type Field = Complex64;

    fn lift(&self) -> Complex64 {
        *self
    }
    fn root_of_unity(order: usize, j: usize) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / order as f64)
    }
    fn lower(v: &Complex64) -> Result<Complex64> {
        Ok(*v)
    }
}

impl RotationAverage for ExactScalar {
    type Field = Cyclotomic;

    fn lift(&self) -> Cyclotomic {
        Cyclotomic::constant(self.clone())
    }
    fn root_of_unity(order: usize, j: usize) -> Cyclotomic {
        Cyclotomic::root(order, j)
    }
    fn lower(v: &Cyclotomic) -> Result<ExactScalar> {
        v.to_exact()
            .ok_or_else(|| Error::Contract(format!("rotation average {v:?} left Q(i)")))
    }
}

/// `Π_m` by averaging over the rotation subgroup:
/// `(1/M) Σ_j π(k_j) T π(k_j)^{-1} · w_j^{m}` with `k_j = (w_j, 0)`,
/// `w_j = e^{2πij/M}` and `M = 2B + 3`, `B = max(band(T), |m|)`.
///
/// The weight `w^m` is the conjugate of the character by which the computed
/// rotation action scales the degree-`m` diagonal. With this many sample
/// points the average is exact for band-`B` operators.
pub fn isotypic_project_quadrature<S: RotationAverage>(
    t: &BandedOperator<S>,
    m: i64,
) -> Result<BandedOperator<S>> {
    let band = t.band().max(m.unsigned_abs() as usize);
    let order = 2 * band + 3;
    let roomy = t.window.grow(band);
    let lifted = t.map(S::lift).with_window(roomy)?;
    let full = ValidRange::full(roomy);
    let power = |j: usize, e: i64| S::root_of_unity(order, (j as i64 * e).rem_euclid(order as i64) as usize);

    let mut acc: Option<BandedOperator<S::Field>> = None;
    for j in 0..order {
        let rot = BandedOperator::from_fn(roomy, full, [0], |_, q| power(j, -q))?;
        let rot_inv = BandedOperator::from_fn(roomy, full, [0], |_, q| power(j, q))?;
        let term = scale(&power(j, m), &compose(&rot, &compose(&lifted, &rot_inv)?)?);
        acc = Some(match acc {
            None => term,
            Some(a) => add(&a, &term)?,
        });
    }
    let avg = scale(
        &S::Field::from_ratio(1, order as i64),
        &acc.expect("at least one sample"),
    );
    let mut diagonals = BTreeMap::new();
    for (d, v) in &avg.diagonals {
        let lowered = v.iter().map(S::lower).collect::<Result<Vec<_>>>()?;
        diagonals.insert(*d, lowered);
    }
    BandedOperator::from_diagonals(t.window, avg.valid, diagonals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type Op = BandedOperator<Complex64>;
    type ExactOp = BandedOperator<ExactScalar>;

    fn w(n: usize) -> Window {
        Window::new(n).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ex(re: i64, im: i64) -> ExactScalar {
        ExactScalar::from_gaussian(re, im)
    }

    fn half() -> ExactScalar {
        ExactScalar::from_ratio(1, 2)
    }

    fn dense_matmul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
        (0..a.len())
            .map(|i| {
                (0..b[0].len())
                    .map(|j| (0..b.len()).fold(S::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
                    .collect()
            })
            .collect()
    }

    /// Full square matrix on the window (valid range must be the whole window).
    fn square<S: Scalar>(t: &BandedOperator<S>) -> Vec<Vec<S>> {
        assert_eq!(t.valid(), ValidRange::full(t.window()));
        t.dense()
    }

    fn random_exact(window: Window, band: i64, seed: u64) -> ExactOp {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        BandedOperator::from_fn(window, ValidRange::full(window), -band..=band, |_, _| {
            let re = BigRational::new(rng.gen_range(-16i64..=16).into(), rng.gen_range(1i64..=16).into());
            let im = BigRational::new(rng.gen_range(-16i64..=16).into(), rng.gen_range(1i64..=16).into());
            ExactScalar::new(re, im)
        })
        .unwrap()
    }

    fn random_numeric(window: Window, band: i64, seed: u64) -> Op {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        BandedOperator::from_fn(window, ValidRange::full(window), -band..=band, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
        .unwrap()
    }

    #[test]
    fn shift_examples() {
        let win = w(6);
        let s1: Op = shift_power(1, win);
        let e0 = FourierVector::basis(win, 0).unwrap();
        let out = s1.apply(&e0).unwrap();
        assert_eq!(out.get(1), c(1.0, 0.0));
        assert!(out.sub(&FourierVector::basis(win, 1).unwrap()).norm() == 0.0);
        assert_eq!(shift_power::<Complex64>(0, win), BandedOperator::identity(win));
        let s_m2: Op = shift_power(-2, win);
        let out = s_m2.apply(&FourierVector::basis(win, 5).unwrap()).unwrap();
        assert_eq!(out.get(3), c(1.0, 0.0));
        assert_eq!(out.norm(), 1.0);
    }

    #[test]
    fn shift_powers_compose() {
        let win = w(8);
        for (m, k) in [(1, 2), (-3, 1), (2, -2), (0, 4)] {
            let prod = compose(&shift_power::<ExactScalar>(m, win), &shift_power(k, win)).unwrap();
            let direct = shift_power::<ExactScalar>(m + k, win).restrict(prod.valid()).unwrap();
            assert_eq!(prod, direct);
        }
    }

    #[test]
    fn multiplication_operators() {
        let win = w(5);
        let one: BTreeMap<i64, ExactScalar> = [(0, ex(1, 0))].into();
        assert_eq!(mult_operator(&one, win).unwrap(), BandedOperator::identity(win));

        // Fourier coefficients of Re z = (z + 1/z)/2.
        let re_z: BTreeMap<i64, ExactScalar> = [(-1, half()), (1, half())].into();
        let op = mult_operator(&re_z, win).unwrap();
        assert_eq!(op.offsets(), vec![-1, 1]);
        assert!(op.valid().iter().all(|q| op.entry(1, q) == half() && op.entry(-1, q) == half()));

        let zm: BTreeMap<i64, ExactScalar> = [(3, ex(1, 0))].into();
        assert_eq!(mult_operator(&zm, win).unwrap(), shift_power(3, win));

        let too_wide: BTreeMap<i64, ExactScalar> = [(11, ex(1, 0))].into();
        assert!(mult_operator(&too_wide, win).is_err());
    }

    #[test]
    fn laurent_products_convolve_symbols() {
        let win = w(10);
        let phi: BTreeMap<i64, ExactScalar> = [(-1, ex(2, 1)), (0, ex(0, 3)), (2, half())].into();
        let psi: BTreeMap<i64, ExactScalar> = [(1, ex(1, -1)), (-2, ex(5, 0))].into();
        let mut conv: BTreeMap<i64, ExactScalar> = BTreeMap::new();
        for (a, x) in &phi {
            for (b, y) in &psi {
                let e = conv.entry(a + b).or_insert_with(ExactScalar::zero);
                *e = e.clone() + x.clone() * y.clone();
            }
        }
        let prod = compose(&mult_operator(&phi, win).unwrap(), &mult_operator(&psi, win).unwrap()).unwrap();
        let direct = mult_operator(&conv, win).unwrap().restrict(prod.valid()).unwrap();
        assert_eq!(prod, direct);
        assert_eq!(prod.valid(), ValidRange::new(-8, 9).unwrap());
    }

    #[test]
    fn composition_matches_dense_product_on_valid_columns() {
        let win = w(7);
        let t = random_exact(win, 2, 1);
        let u = random_exact(win, 1, 2);
        let tu = compose(&t, &u).unwrap();
        assert!(tu.band() <= 3);
        assert_eq!(tu.valid(), ValidRange::new(-6, 6).unwrap());
        let full = dense_matmul(&square(&t), &square(&u));
        for q in tu.valid().iter() {
            for r in win.indices() {
                let col = (q + 7) as usize;
                assert_eq!(tu.entry(r - q, q), full[(r + 7) as usize][col], "r={r} q={q}");
            }
        }
    }

    #[test]
    fn adjoint_examples() {
        let win = w(6);
        let s: Op = shift_power(1, win);
        let sa = adjoint(&s).unwrap();
        let sinv: Op = shift_power(-1, win);
        assert_eq!(sa, sinv.restrict(sa.valid()).unwrap());
        let id = compose(&s, &shift_power(-1, win)).unwrap();
        assert_eq!(id, Op::identity(win).restrict(id.valid()).unwrap());

        // Dense oracle: conjugate transpose of a small Laurent operator.
        let phi: BTreeMap<i64, ExactScalar> = [(-2, ex(1, 2)), (1, ex(0, -3)), (0, half())].into();
        let m_phi = mult_operator(&phi, win).unwrap();
        let adj = adjoint(&m_phi).unwrap();
        let dense = square(&m_phi);
        for q in adj.valid().iter() {
            for r in win.indices() {
                let expect = dense[(q + 6) as usize][(r + 6) as usize].conj();
                assert_eq!(adj.entry(r - q, q), expect);
            }
        }
        let conj_symbol: BTreeMap<i64, ExactScalar> = phi.iter().map(|(d, v)| (-d, v.conj())).collect();
        let expect = mult_operator(&conj_symbol, win).unwrap().restrict(adj.valid()).unwrap();
        assert_eq!(adj, expect);
    }

    #[test]
    fn commutator_examples() {
        let win = w(6);
        let t = random_exact(win, 2, 9);
        assert!(commutator(&ExactOp::identity(win), &t).unwrap().is_zero());

        let xi = RepParameter::new(BigRational::new(3.into(), 2.into())).unwrap();
        let dm = crate::rep::d_rep::<ExactScalar>(&xi, crate::group::ComplexLieBasisElement::M, win);
        let dmb = crate::rep::d_rep::<ExactScalar>(&xi, crate::group::ComplexLieBasisElement::Mbar, win);
        assert!(commutator(&dm, &dmb).unwrap().is_zero());

        // Diagonal T: [T, dπ(M)] has ξ(c_n − c_{n−1}) on diagonal −1.
        let diag = BandedOperator::from_fn(win, ValidRange::full(win), [0], |_, q| ex(q * q, 1 - q)).unwrap();
        let comm = commutator(&diag, &dm).unwrap();
        assert_eq!(comm.offsets(), vec![-1]);
        let xi_s = ExactScalar::from_real(xi.value());
        for q in comm.valid().iter() {
            let expect = xi_s.clone() * (diag.entry(0, q) - diag.entry(0, q - 1));
            assert_eq!(comm.entry(-1, q), expect);
        }
    }

    #[test]
    fn windows_must_match() {
        let a: Op = shift_power(1, w(3));
        let b: Op = shift_power(1, w(4));
        assert!(matches!(compose(&a, &b), Err(Error::Contract(_))));
        assert!(add(&a, &b).is_err());
    }

    #[test]
    fn conjugation_examples() {
        let win = w(12);
        let xi = RepParameter::new(1.5).unwrap();
        let t = random_numeric(win, 2, 3);
        let id = GroupElement::identity();
        assert_eq!(conjugate(&xi, &id, &t, 1e-12).unwrap(), t);

        // κ((w,0)) S = w^{-1} S
        let wr = Complex64::from_polar(1.0, 0.9);
        let s: Op = shift_power(1, win);
        let ks = conjugate(&xi, &GroupElement::rotation(wr).unwrap(), &s, 1e-12).unwrap();
        assert!(ks.max_abs_diff(&scale(&wr.conj(), &s)).unwrap() < 1e-15);

        let xe = RepParameter::new(BigRational::from_integer(2.into())).unwrap();
        let i = ExactScalar::imag_unit();
        let se: ExactOp = shift_power(1, win);
        let kse = conjugate(&xe, &GroupElement::rotation(i.clone()).unwrap(), &se, 1e-12).unwrap();
        assert_eq!(kse, scale(&ex(0, -1), &se));

        let translate = GroupElement::new(ExactScalar::one(), ex(1, 0)).unwrap();
        assert!(matches!(
            conjugate(&xe, &translate, &se, 1e-12),
            Err(Error::UnsupportedMode { .. })
        ));
        assert!(conjugate(&xi, &id, &t, 0.0).is_err());
    }

    #[test]
    fn translations_fix_multiplication_operators() {
        let win = w(40);
        let xi = RepParameter::new(1.5).unwrap();
        let phi: BTreeMap<i64, Complex64> = [(-2, c(0.3, -0.1)), (0, c(1.0, 0.0)), (1, c(0.0, 0.7))].into();
        let m_phi = mult_operator(&phi, win).unwrap();
        let g = GroupElement::translation(c(0.8, -0.6)).unwrap();
        let k = conjugate(&xi, &g, &m_phi, 1e-15).unwrap();
        assert!(k.valid().len() < m_phi.valid().len());
        assert!(k.max_abs_diff(&m_phi).unwrap() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let win = w(5);
        let s2: ExactOp = shift_power(2, win);
        assert_eq!(isotypic_project(&s2, 2), s2);
        assert!(isotypic_project(&s2, 1).is_zero());
        let t = random_exact(win, 2, 4);
        let p0 = isotypic_project(&t, 0);
        assert_eq!(p0.offsets(), vec![0]);
        assert_eq!(p0.diagonal(0), t.diagonal(0));

        let re_z: BTreeMap<i64, ExactScalar> = [(-1, half()), (1, half())].into();
        let m = mult_operator(&re_z, win).unwrap();
        for sign in [-1, 1] {
            let expect = scale(&half(), &shift_power(sign, win));
            assert_eq!(isotypic_project(&m, sign), expect);
            assert_eq!(isotypic_project_quadrature(&m, sign).unwrap(), expect);
        }
    }

    #[test]
    fn quadrature_matches_diagonal_extraction() {
        let win = w(5);
        let t = random_exact(win, 2, 17);
        for m in -3..=3 {
            assert_eq!(isotypic_project_quadrature(&t, m).unwrap(), isotypic_project(&t, m), "m={m}");
        }
        let tn = random_numeric(w(10), 3, 5);
        for m in -4..=4 {
            let q = isotypic_project_quadrature(&tn, m).unwrap();
            assert!(q.max_abs_diff(&isotypic_project(&tn, m)).unwrap() < 1e-13);
        }
    }

    #[test]
    fn reconstruction_examples() {
        let win = w(6);
        let t = random_exact(win, 3, 21);
        assert_eq!(reconstruct(&t), t);
        let zero = ExactOp::zero(win);
        assert!(reconstruct(&zero).is_zero());
        let phi: BTreeMap<i64, ExactScalar> = [(-1, ex(1, 1)), (2, ex(-3, 0))].into();
        let m = mult_operator(&phi, win).unwrap();
        let sum = phi
            .iter()
            .map(|(d, v)| scale(v, &shift_power(*d, win)))
            .fold(ExactOp::zero(win), |a, b| add(&a, &b).unwrap());
        assert_eq!(reconstruct(&m), sum);
    }

    fn arb_exact_op(n: usize, band: i64) -> impl Strategy<Value = ExactOp> {
        any::<u64>().prop_map(move |seed| random_exact(w(n), band, seed))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn projections_are_orthogonal_idempotents(t in arb_exact_op(5, 3), m in -4i64..=4, k in -4i64..=4) {
            let pm = isotypic_project(&t, m);
            prop_assert_eq!(isotypic_project(&pm, m), pm.clone());
            if m != k {
                prop_assert!(isotypic_project(&pm, k).is_zero());
            }
            prop_assert_eq!(reconstruct(&t), t);
        }

        #[test]
        fn rotation_scales_diagonals(t in arb_exact_op(4, 2), e in 0u32..4) {
            let wr = ExactScalar::imag_unit().pow_u(e as u64);
            let k = conjugate_rotation(&wr, &t);
            for d in -2i64..=2 {
                let f = wr.unit_pow(-d);
                for q in t.valid().iter() {
                    prop_assert_eq!(k.entry(d, q), f.clone() * t.entry(d, q));
                }
            }
        }

        #[test]
        fn exact_and_numeric_agree(t in arb_exact_op(5, 2), u in arb_exact_op(5, 1)) {
            let exact = commutator(&t, &u).unwrap();
            let tn = t.map(Scalar::to_c64);
            let un = u.map(Scalar::to_c64);
            let numeric = commutator(&tn, &un).unwrap();
            prop_assert!(exact.map(Scalar::to_c64).max_abs_diff(&numeric).unwrap() < 1e-12);
        }
    }

    #[test]
    fn conjugation_is_an_automorphism() {
        let win = w(48);
        let xi = RepParameter::new(-0.8).unwrap();
        let tol = 1e-13;
        let t = random_numeric(win, 2, 31);
        let u = random_numeric(win, 1, 32);
        let g = GroupElement::new(Complex64::from_polar(1.0, 0.4), c(1.2, -0.9)).unwrap();
        let h = GroupElement::new(Complex64::from_polar(1.0, -2.0), c(-0.5, 0.3)).unwrap();

        let lhs = conjugate(&xi, &g, &compose(&t, &u).unwrap(), tol).unwrap();
        let rhs = compose(
            &conjugate(&xi, &g, &t, tol).unwrap(),
            &conjugate(&xi, &g, &u, tol).unwrap(),
        )
        .unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() < 10.0 * tol);

        let twice = conjugate(&xi, &g, &conjugate(&xi, &h, &t, tol).unwrap(), tol).unwrap();
        let once = conjugate(&xi, &g.mul(&h), &t, tol).unwrap();
        assert!(twice.max_abs_diff(&once).unwrap() < 10.0 * tol);
    }
}
