//! Integer-order Bessel functions of the first kind.
//!
//! Rows `J_0(x), …, J_{n_max}(x)` come from one backward (Miller) recurrence
//! pass, normalized with `J_0 + 2 Σ_{k≥1} J_{2k} = 1`. Arguments below
//! [`SERIES_CUTOFF`] use the power series directly. The start order is
//! [`start_order`]; both are fixed so that results are reproducible bit for
//! bit on a given build.

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 512;
pub const MAX_ARGUMENT: f64 = 128.0;
pub const SERIES_CUTOFF: f64 = 2.0;

/// Extra band added on top of the tail criterion in [`band_estimate`].
pub const BAND_MARGIN: usize = 2;

const RESCALE_ABOVE: f64 = 1e250;

#[derive(Clone, Debug, PartialEq)]
pub struct BesselRow {
    x: f64,
    values: Vec<f64>,
}

impl BesselRow {
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `J_n(x)` for any `|n| ≤ n_max`, using `J_{-n} = (-1)^n J_n`.
    pub fn get(&self, n: i64) -> f64 {
        let v = self.values[n.unsigned_abs() as usize];
        if n < 0 && n % 2 != 0 {
            -v
        } else {
            v
        }
    }

    /// `J_0² + 2 Σ_{k≥1} J_k²`, which tends to 1 as the row covers the tail.
    pub fn normalization(&self) -> f64 {
        let tail: f64 = self.values[1..].iter().map(|v| v * v).sum();
        self.values[0] * self.values[0] + 2.0 * tail
    }
}

fn check_argument(x: f64) -> Result<()> {
    if !(0.0..=MAX_ARGUMENT).contains(&x) {
        return Err(Error::Range(format!(
            "Bessel argument {x} outside [0, {MAX_ARGUMENT}]"
        )));
    }
    Ok(())
}

/// `J_n(x)` for `|n| ≤ 512`, `0 ≤ x ≤ 128`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    let order = n.unsigned_abs() as usize;
    if order > MAX_ORDER {
        return Err(Error::Range(format!("Bessel order {n} exceeds {MAX_ORDER}")));
    }
    Ok(bessel_row(x, order)?.get(n))
}

pub fn bessel_row(x: f64, n_max: usize) -> Result<BesselRow> {
    check_argument(x)?;
    if n_max > MAX_ORDER {
        return Err(Error::Range(format!("n_max {n_max} exceeds {MAX_ORDER}")));
    }
    let values = if x == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else if x < SERIES_CUTOFF {
        series_row(x, n_max)
    } else {
        miller_row(x, n_max)
    };
    Ok(BesselRow { x, values })
}

/// Start order of the backward recurrence: the larger of `n_max` and `⌈x⌉`,
/// plus `16 + ⌈√(60·that)⌉`, rounded up to an even number.
pub fn start_order(x: f64, n_max: usize) -> usize {
    let base = n_max.max(x.ceil() as usize).max(1);
    let start = base + 16 + (60.0 * base as f64).sqrt().ceil() as usize;
    start + (start & 1)
}

fn series_row(x: f64, n_max: usize) -> Vec<f64> {
    let half = 0.5 * x;
    let q = -half * half;
    let mut lead = 1.0; // (x/2)^n / n!
    (0..=n_max)
        .map(|n| {
            if n > 0 {
                lead *= half / n as f64;
            }
            let mut term = lead;
            let mut sum = lead;
            let mut k = 0usize;
            while term != 0.0 && term.abs() > 1e-18 * sum.abs() && k < 200 {
                k += 1;
                term *= q / (k as f64 * (k + n) as f64);
                sum += term;
            }
            sum
        })
        .collect()
}

fn miller_row(x: f64, n_max: usize) -> Vec<f64> {
    let start = start_order(x, n_max);
    let mut out = vec![0.0; n_max + 1];
    let two_over_x = 2.0 / x;
    let (mut above, mut here) = (0.0f64, 1e-30f64); // f_{k+1}, f_k at k = start
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        if k <= n_max {
            out[k] = here;
        }
        if k % 2 == 0 {
            norm += 2.0 * here;
        }
        let below = k as f64 * two_over_x * here - above;
        above = here;
        here = below;
        if here.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            here *= s;
            above *= s;
            norm *= s;
            let top = n_max.min(start);
            for v in out[k.min(top + 1)..=top].iter_mut() {
                *v *= s;
            }
        }
    }
    out[0] = here;
    norm += here;
    for v in &mut out {
        *v /= norm;
    }
    out
}

fn tail_cap(x: f64) -> usize {
    let cap = x.ceil() as usize + 24 + (20.0 * x.max(1.0).cbrt()).ceil() as usize;
    cap.min(MAX_ORDER)
}

/// Smallest band `K ≥ ⌈x⌉` with `Σ_{|k|>K} J_k(x)² < tol²`, plus [`BAND_MARGIN`].
pub fn band_estimate(x: f64, tol: f64) -> Result<usize> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Contract(format!("band tolerance {tol} not in (0, 1)")));
    }
    check_argument(x)?;
    let cap = tail_cap(x);
    let row = bessel_row(x, cap)?;
    let target = tol * tol;
    // tail[k] = 2 Σ_{j>k} J_j²
    let mut tail = 0.0;
    let mut k = cap;
    let floor = x.ceil() as usize;
    while k > floor {
        let v = row.values[k];
        let next = tail + 2.0 * v * v;
        if next >= target {
            break;
        }
        tail = next;
        k -= 1;
    }
    Ok((k + BAND_MARGIN).min(MAX_ORDER))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, ToPrimitive, Zero};

    /// Power series evaluated in exact rational arithmetic, x = p/q.
    fn series_oracle(n: u32, p: i64, q: i64) -> f64 {
        let half = BigRational::new(BigInt::from(p), BigInt::from(2 * q));
        let half_sq = &half * &half;
        let mut lead = BigRational::one();
        for j in 1..=n {
            lead = lead * &half / BigRational::from_integer(j.into());
        }
        let mut term = lead.clone();
        let mut sum = lead;
        let eps = BigRational::new(1.into(), BigInt::from(10).pow(40));
        let mut k: u32 = 0;
        loop {
            k += 1;
            term = -term * &half_sq / BigRational::from_integer((k * (k + n)).into());
            sum += &term;
            let mag = if term < BigRational::zero() { -term.clone() } else { term.clone() };
            if k > 10 && mag < eps {
                break;
            }
        }
        sum.to_f64().unwrap()
    }

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(5, 0.0).unwrap(), 0.0);
        for x in [0.3, 2.5, 17.0] {
            assert_eq!(bessel_j(-3, x).unwrap(), -bessel_j(3, x).unwrap());
            assert_eq!(bessel_j(-4, x).unwrap(), bessel_j(4, x).unwrap());
        }
        let row = bessel_row(0.0, 4).unwrap();
        assert_eq!(row.values(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn j1_at_two() {
        let oracle = series_oracle(1, 2, 1);
        assert!((oracle - 0.576_724_807_756_873_4).abs() < 1e-15);
        assert!((bessel_j(1, 2.0).unwrap() - oracle).abs() < 1e-12);
    }

    #[test]
    fn range_errors() {
        assert!(bessel_j(513, 1.0).is_err());
        assert!(bessel_j(0, 128.5).is_err());
        assert!(bessel_j(0, -1.0).is_err());
        assert!(bessel_row(1.0, 513).is_err());
        assert!(band_estimate(1.0, 0.0).is_err());
        assert!(band_estimate(1.0, 1.0).is_err());
    }

    #[test]
    fn agrees_with_exact_series_on_grid() {
        let grid: [(i64, i64); 7] = [(1, 10), (1, 2), (1, 1), (2, 1), (5, 1), (10, 1), (20, 1)];
        for (p, q) in grid {
            let x = p as f64 / q as f64;
            let row = bessel_row(x, 40).unwrap();
            for n in 0..=40u32 {
                let oracle = series_oracle(n, p, q);
                let err = (row.get(n as i64) - oracle).abs();
                assert!(err <= 1e-13, "x={x} n={n} err={err:e}");
                assert!((bessel_j(n as i64, x).unwrap() - oracle).abs() <= 1e-13);
            }
        }
    }

    #[test]
    fn large_arguments_against_exact_series() {
        for (n, x) in [(0u32, 64i64), (7, 64), (70, 64), (3, 100), (128, 128)] {
            let oracle = series_oracle(n, x, 1);
            let got = bessel_j(n as i64, x as f64).unwrap();
            assert!((got - oracle).abs() <= 1e-13, "n={n} x={x}: {got} vs {oracle}");
        }
    }

    #[test]
    fn recurrence_residual() {
        for x in [0.7, 3.0, 9.5, 40.0, 127.0] {
            let n_max = 200;
            let row = bessel_row(x, n_max).unwrap();
            for n in 1..n_max {
                let j = row.values();
                let resid = j[n - 1] + j[n + 1] - 2.0 * n as f64 / x * j[n];
                assert!(resid.abs() <= 1e-10 * j[n].abs().max(1.0), "x={x} n={n}");
            }
        }
    }

    #[test]
    fn super_exponential_decay() {
        let oracle = series_oracle(30, 10, 1);
        assert!(oracle.abs() < 1e-10);
        let got = bessel_j(30, 10.0).unwrap();
        assert!(got.abs() < 1e-10);
        assert!((got - oracle).abs() <= 1e-20_f64.max(oracle.abs() * 1e-10));
    }

    #[test]
    fn normalization_identity() {
        for x in [0.0, 0.5, 1.9, 2.0, 8.0, 33.3, 64.0] {
            let k = band_estimate(x, 1e-15).unwrap();
            let norm = bessel_row(x, k).unwrap().normalization();
            assert!((norm - 1.0).abs() <= 1e-12, "x={x} norm-1={:e}", norm - 1.0);
        }
    }

    #[test]
    fn generating_function() {
        use num_complex::Complex64;
        for (x, theta) in [(0.4, 0.3), (3.0, 2.1), (12.5, -1.0), (50.0, 0.77)] {
            let k = band_estimate(x, 1e-16).unwrap();
            let row = bessel_row(x, k).unwrap();
            let sum: Complex64 = (-(k as i64)..=k as i64)
                .map(|n| {
                    Complex64::new(0.0, 1.0).powi(n as i32)
                        * row.get(n)
                        * Complex64::from_polar(1.0, n as f64 * theta)
                })
                .sum();
            let expect = Complex64::from_polar(1.0, x * f64::cos(theta));
            assert!((sum - expect).norm() < 1e-11, "x={x}");
        }
    }

    #[test]
    fn band_estimate_examples() {
        let k0 = band_estimate(0.0, 1e-12).unwrap();
        assert!(k0 <= BAND_MARGIN);

        let k8 = band_estimate(8.0, 1e-12).unwrap();
        assert!(k8 >= 8);
        let row = bessel_row(8.0, 200).unwrap();
        let tail: f64 = 2.0 * row.values()[k8 + 1..].iter().map(|v| v * v).sum::<f64>();
        assert!(tail < 1e-24, "tail {tail:e}");
        // Without the margin the criterion is tight: one band less fails.
        let below = k8 - BAND_MARGIN;
        let tail_below: f64 = 2.0 * row.values()[below..].iter().map(|v| v * v).sum::<f64>();
        assert!(tail_below >= 1e-24);

        for x in [0.0, 1.0, 8.0, 30.0, 100.0] {
            let loose = band_estimate(x, 0.5).unwrap();
            let tight = band_estimate(x, 1e-12).unwrap();
            assert!(loose <= tight);
            assert!(loose >= x.ceil() as usize);
        }
    }

    #[test]
    fn band_estimate_is_monotone() {
        let tols = [0.9, 0.5, 1e-2, 1e-4, 1e-8, 1e-12, 1e-15];
        for x in [0.05, 1.5, 4.0, 16.0, 64.0, 128.0] {
            let ks: Vec<usize> = tols.iter().map(|&t| band_estimate(x, t).unwrap()).collect();
            assert!(ks.windows(2).all(|w| w[0] <= w[1]), "x={x} {ks:?}");
        }
    }
}
