//! Real scalar abstraction for complex character values.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type used for character values: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Values below this modulus count as zero; integer rounding fails beyond it.
    fn zero_tol() -> Self;
    /// Tolerance for row and column orthogonality of character tables.
    fn ortho_tol() -> Self;

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits a float")
    }
}

impl Real for f64 {
    fn zero_tol() -> Self {
        1e-6
    }
    fn ortho_tol() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn zero_tol() -> Self {
        1e-3
    }
    fn ortho_tol() -> Self {
        1e-4
    }
}

/// `exp(2πi·k/n)`, exact at quarter turns.
pub fn root_of_unity<S: Real>(k: u64, n: u64) -> Complex<S> {
    assert!(n > 0, "root of unity of order zero");
    let k = k % n;
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => Complex::new(S::one(), S::zero()),
            1 => Complex::new(S::zero(), S::one()),
            2 => Complex::new(-S::one(), S::zero()),
            _ => Complex::new(S::zero(), -S::one()),
        };
    }
    // Angle in f64 first: k/n loses less there than in f32.
    let angle = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64);
    let angle = S::from_f64(angle).expect("angle fits");
    Complex::new(angle.cos(), angle.sin())
}

/// Failure to read a complex value as an integer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NotIntegral {
    pub re: f64,
    pub im: f64,
}

impl Display for NotIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} + {}i is not within tolerance of an integer", self.re, self.im)
    }
}

/// Round `z` to the nearest integer, failing if the imaginary part or the
/// rounding deviation exceeds `tol`.
pub fn round_integer<S: Real>(z: Complex<S>, tol: S) -> Result<i64, NotIntegral> {
    let r = z.re.round();
    if z.im.abs() > tol || (z.re - r).abs() > tol {
        return Err(NotIntegral {
            re: z.re.to_f64().unwrap_or(f64::NAN),
            im: z.im.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(r.to_i64().expect("rounded value fits i64"))
}

/// Round to 12 significant digits for stable JSON output; tiny values snap to zero.
pub fn round_sig12(x: f64) -> f64 {
    if !x.is_finite() || x.abs() < 1e-12 {
        return 0.0;
    }
    let s = format!("{:.11e}", x);
    let v: f64 = s.parse().expect("formatted float parses");
    if v == 0.0 {
        0.0
    } else {
        v
    }
}
