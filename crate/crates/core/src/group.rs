//! The motion group of the plane and its Lie algebra.
//!
//! An element `(a, b)` with `|a| = 1` stands for the affine map `z ↦ a z + b`,
//! i.e. the matrix `[[a, b], [0, 1]]`. The Lie algebra is spanned over the
//! reals by
//!
//! ```text
//! L   = [[i, 0], [0, 0]]     (rotation)
//! M_x = [[0, 1], [0, 0]]     (translation along x)
//! M_y = [[0, i], [0, 0]]     (translation along y)
//! ```
//!
//! and its complexification contains `M = M_y + i M_x`, `M̄ = M_y - i M_x`.

use num_complex::Complex64;
use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ModeScalar;

/// Tolerance on `| |a| - 1 |` for floating-point group elements.
pub const UNIT_TOL: f64 = 1e-12;

/// Threshold on `|l t|` below which [`exp`] uses the series branch.
pub const EXP_SERIES_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement<S = Complex64> {
    a: S,
    b: S,
}

impl<S: ModeScalar> GroupElement<S> {
    pub fn new(a: S, b: S) -> Result<Self> {
        if !a.is_admissible_rotation(UNIT_TOL) {
            return Err(Error::Contract(format!(
                "rotation part {a:?} is not an admissible unit-modulus scalar in {} mode",
                S::MODE
            )));
        }
        if !b.to_c64().re.is_finite() || !b.to_c64().im.is_finite() {
            return Err(Error::Contract("translation part must be finite".into()));
        }
        Ok(GroupElement { a, b })
    }

    pub fn identity() -> Self {
        GroupElement {
            a: S::one(),
            b: S::zero(),
        }
    }

    pub fn rotation(w: S) -> Result<Self> {
        Self::new(w, S::zero())
    }

    pub fn translation(b: S) -> Result<Self> {
        Self::new(S::one(), b)
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    /// True for elements of the rotation subgroup K (b = 0).
    pub fn is_rotation(&self) -> bool {
        self.b.is_zero()
    }

    /// Group product `self · h`.
    pub fn mul(&self, h: &Self) -> Self {
        let a = (self.a.clone() * h.a.clone()).renormalize_unit();
        let b = self.a.clone() * h.b.clone() + self.b.clone();
        GroupElement { a, b }
    }

    pub fn inv(&self) -> Self {
        let a_inv = self.a.conj();
        let b = -(a_inv.clone() * self.b.clone());
        GroupElement { a: a_inv, b }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "a": self.a.encode(), "b": self.b.encode() })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("group element is missing {k:?}")))
                .and_then(S::decode)
        };
        Self::new(field("a")?, field("b")?)
    }
}

/// The character `ρ_n(a, b) = a^n`.
pub fn character<S: ModeScalar>(n: i64, g: &GroupElement<S>) -> S {
    g.a.unit_pow(n)
}

/// Real coordinates on the basis `L, M_x, M_y`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LieVector<R = f64> {
    pub l: R,
    pub x: R,
    pub y: R,
}

impl<R> LieVector<R> {
    pub const fn new(l: R, x: R, y: R) -> Self {
        LieVector { l, x, y }
    }
}

impl LieVector<f64> {
    pub const L: Self = LieVector::new(1.0, 0.0, 0.0);
    pub const MX: Self = LieVector::new(0.0, 1.0, 0.0);
    pub const MY: Self = LieVector::new(0.0, 0.0, 1.0);

    pub fn is_finite(&self) -> bool {
        self.l.is_finite() && self.x.is_finite() && self.y.is_finite()
    }
}

/// Basis of the complexified Lie algebra used by the derived representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComplexLieBasisElement {
    L,
    Mx,
    My,
    /// `M_y + i M_x`
    M,
    /// `M_y - i M_x`
    Mbar,
}

impl ComplexLieBasisElement {
    pub const ALL: [Self; 5] = [Self::L, Self::Mx, Self::My, Self::M, Self::Mbar];
}

/// Lie bracket, written out from the matrix commutator: with `β = x + i y`,
/// `[X, Y]` has no rotation part and translation part `i (l_X β_Y − l_Y β_X)`.
pub fn bracket<R>(x: &LieVector<R>, y: &LieVector<R>) -> LieVector<R>
where
    R: Num + Clone,
{
    let cross = |p: &R, q: &R, r: &R, s: &R| p.clone() * q.clone() - r.clone() * s.clone();
    LieVector {
        l: R::zero(),
        x: cross(&y.l, &x.y, &x.l, &y.y),
        y: cross(&x.l, &y.x, &y.l, &x.x),
    }
}

/// One-parameter subgroup `t ↦ exp(t X)`.
pub fn exp(x: &LieVector<f64>, t: f64) -> Result<GroupElement<Complex64>> {
    if !t.is_finite() || !x.is_finite() {
        return Err(Error::Contract("exp needs finite arguments".into()));
    }
    let theta = x.l * t;
    let a = Complex64::from_polar(1.0, theta);
    let beta = Complex64::new(x.x, x.y);
    // (e^{iθ} - 1) / (iθ), scaled by t.
    let profile = if theta.abs() < EXP_SERIES_THRESHOLD {
        let it = Complex64::new(0.0, theta);
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..=6 {
            term = term * it / k as f64;
            sum += term;
        }
        sum * t
    } else {
        (a - 1.0) / Complex64::new(0.0, x.l)
    };
    GroupElement::new(a, beta * profile)
}
