//! Truncated Fourier model of `L²(T)`.
//!
//! Vectors hold coefficients on `e_n(z) = z^n` for `n ∈ [-N, N]`, stored in
//! ascending index order. Grid values live at `z_j = e^{2πij/M}`.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    half_width: usize,
}

impl Window {
    pub fn new(half_width: usize) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::Contract("window half-width must be at least 1".into()));
        }
        Ok(Window { half_width })
    }

    /// `N`; indices run over `[-N, N]`.
    pub fn half_width(&self) -> usize {
        self.half_width
    }

    pub fn n(&self) -> i64 {
        self.half_width as i64
    }

    pub fn dim(&self) -> usize {
        2 * self.half_width + 1
    }

    pub fn contains(&self, n: i64) -> bool {
        n.unsigned_abs() as usize <= self.half_width
    }

    pub fn indices(&self) -> impl Iterator<Item = i64> {
        -self.n()..=self.n()
    }

    pub fn grow(&self, by: usize) -> Self {
        Window {
            half_width: self.half_width + by,
        }
    }

    /// Storage slot of index `n`.
    pub fn slot(&self, n: i64) -> usize {
        debug_assert!(self.contains(n));
        (n + self.n()) as usize
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierVector {
    window: Window,
    coeffs: Vec<Complex64>,
}

impl FourierVector {
    pub fn new(window: Window, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != window.dim() {
            return Err(Error::Contract(format!(
                "window N={} needs {} coefficients, got {}",
                window.n(),
                window.dim(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Contract("Fourier coefficients must be finite".into()));
        }
        Ok(FourierVector { window, coeffs })
    }

    pub fn zeros(window: Window) -> Self {
        FourierVector {
            window,
            coeffs: vec![Complex64::new(0.0, 0.0); window.dim()],
        }
    }

    /// The basis vector `e_n`.
    pub fn basis(window: Window, n: i64) -> Result<Self> {
        if !window.contains(n) {
            return Err(Error::Range(format!("e_{n} outside window N={}", window.n())));
        }
        let mut v = Self::zeros(window);
        v.coeffs[window.slot(n)] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `e_n`; zero outside the window.
    pub fn get(&self, n: i64) -> Complex64 {
        if self.window.contains(n) {
            self.coeffs[self.window.slot(n)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, n: i64, value: Complex64) -> Result<()> {
        if !self.window.contains(n) {
            return Err(Error::Range(format!("index {n} outside window N={}", self.window.n())));
        }
        let slot = self.window.slot(n);
        self.coeffs[slot] = value;
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.window.indices().zip(self.coeffs.iter().copied())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Re-expresses the vector on another window, padding with zeros or
    /// cropping entries that fall outside.
    pub fn resize(&self, window: Window) -> Self {
        let mut out = Self::zeros(window);
        for n in window.indices() {
            out.coeffs[window.slot(n)] = self.get(n);
        }
        out
    }

    /// Largest index carrying a nonzero coefficient, in absolute value.
    pub fn support_radius(&self) -> usize {
        self.iter()
            .filter(|(_, c)| c.norm_sqr() > 0.0)
            .map(|(n, _)| n.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// `max_n |f_n - g_n|` over the union of both windows.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let n = self.window.half_width().max(other.window.half_width()) as i64;
        (-n..=n).map(|k| (self.get(k) - other.get(k)).norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        FourierVector {
            window: self.window,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self - other` on the larger of the two windows.
    pub fn sub(&self, other: &Self) -> Self {
        let w = if self.window.half_width() >= other.window.half_width() {
            self.window
        } else {
            other.window
        };
        let coeffs = w.indices().map(|n| self.get(n) - other.get(n)).collect();
        FourierVector { window: w, coeffs }
    }
}

/// `⟨F, G⟩ = Σ f_n conj(g_n)`.
pub fn inner(f: &FourierVector, g: &FourierVector) -> Result<Complex64> {
    if f.window != g.window {
        return Err(Error::Contract(format!(
            "inner product of windows N={} and N={}",
            f.window.n(),
            g.window.n()
        )));
    }
    Ok(f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| a * b.conj()).sum())
}

fn check_grid(m: usize, window: Window) -> Result<()> {
    if m < window.dim() {
        return Err(Error::Range(format!(
            "grid of {m} points cannot resolve window N={} (needs at least {})",
            window.n(),
            window.dim()
        )));
    }
    Ok(())
}

/// Samples `F(z_j) = Σ f_n z_j^n` on `m` equispaced points of the circle.
pub fn to_grid(f: &FourierVector, m: usize) -> Result<Vec<Complex64>> {
    check_grid(m, f.window)?;
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (n, c) in f.iter() {
        buf[n.rem_euclid(m as i64) as usize] = c;
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
    Ok(buf)
}

/// Inverse of [`to_grid`] on band-limited data: `f_n = (1/M) Σ_j v_j z_j^{-n}`.
pub fn from_grid(values: &[Complex64], half_width: usize) -> Result<FourierVector> {
    let window = Window::new(half_width)?;
    let m = values.len();
    check_grid(m, window)?;
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    let coeffs = window
        .indices()
        .map(|n| buf[n.rem_euclid(m as i64) as usize] * scale)
        .collect();
    FourierVector::new(window, coeffs)
}

/// Grid size used when a multiplier of band `k` acts on window `N`: the next
/// power of two at least `2(N + k) + 1`.
pub fn default_grid_size(half_width: usize, band: usize) -> usize {
    (2 * (half_width + band) + 1).next_power_of_two()
}
