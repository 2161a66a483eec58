//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate meets `max(abs, rel·|I|)`. Works for any value type that forms a
//! vector space over `f64` (real and complex integrands).

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub trait QuadValue: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn norm(self) -> f64;
}

impl QuadValue for f64 {
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn norm(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance {
            rel,
            abs: 0.0,
            max_intervals: 4000,
        }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    err: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk15<T: QuadValue, F: FnMut(f64) -> Result<T>>(f: &mut F, a: f64, b: f64) -> Result<Segment<T>> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let sum = f(c - dx)? + f(c + dx)?;
        kronrod = kronrod + sum * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + sum * WG[i / 2];
        }
    }
    let value = kronrod * h;
    let err = (kronrod - gauss).norm() * h.abs();
    Ok(Segment { a, b, value, err })
}

/// Integrate a fallible integrand over `[a, b]`.
pub fn try_integrate<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    if a == b {
        return Ok(T::default());
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::numeric(
            "quadrature",
            format!("interval [{a}, {b}] must be finite"),
        ));
    }
    let first = gk15(&mut f, a, b)?;
    let mut total = first.value;
    let mut total_err = first.err;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    while total_err > tol.abs.max(tol.rel * total.norm()) {
        if heap.len() >= tol.max_intervals {
            return Err(Error::numeric(
                format!("quadrature on [{a}, {b}]"),
                format!(
                    "no convergence after {} intervals (estimate {:e}, error {:e})",
                    heap.len(),
                    total.norm(),
                    total_err
                ),
            ));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval at machine resolution; accept its contribution as is
            total_err -= worst.err;
            heap.push(Segment { err: 0.0, ..worst });
            if heap.iter().all(|s| s.err == 0.0) {
                break;
            }
            continue;
        }
        let left = gk15(&mut f, worst.a, mid)?;
        let right = gk15(&mut f, mid, worst.b)?;
        total = total - worst.value + left.value + right.value;
        total_err = total_err - worst.err + left.err + right.err;
        heap.push(left);
        heap.push(right);
    }
    // resum to shed accumulated cancellation from the running updates
    let total = heap.iter().fold(T::default(), |acc, s| acc + s.value);
    Ok(total)
}

pub fn integrate<T, F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> T,
{
    try_integrate(|x| Ok(f(x)), a, b, tol)
}

/// Integrate over consecutive breakpoints `[p0, p1], [p1, p2], ...`, splitting
/// the absolute budget evenly. Breakpoints must be sorted.
pub fn try_integrate_pieces<T, F>(mut f: F, points: &[f64], tol: Tolerance) -> Result<T>
where
    T: QuadValue,
    F: FnMut(f64) -> Result<T>,
{
    let pieces = points.len().saturating_sub(1).max(1) as f64;
    let piece_tol = Tolerance {
        abs: tol.abs / pieces,
        ..tol
    };
    let mut total = T::default();
    for w in points.windows(2) {
        if w[1] > w[0] {
            total = total + try_integrate(&mut f, w[0], w[1], piece_tol)?;
        }
    }
    Ok(total)
}

/// Smallest `x >= start` with `g(x) >= target`, for nondecreasing `g`.
pub fn find_crossing<G: FnMut(f64) -> f64>(mut g: G, start: f64, target: f64) -> f64 {
    if g(start) >= target {
        return start;
    }
    let mut lo = start;
    let mut step = start.abs().max(1.0);
    let mut hi = start + step;
    while g(hi) < target {
        lo = hi;
        step *= 2.0;
        hi += step;
        if !hi.is_finite() {
            return f64::INFINITY;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let v: f64 = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, Tolerance::rel(1e-12)).unwrap();
        assert_relative_eq!(v, 63.0 / 6.0 - 9.0 + 0.0, max_relative = 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        // ∫_0^1 1/(1e-4 + x^2) dx = atan(100)/1e-2
        let v: f64 = integrate(|x| 1.0 / (1e-4 + x * x), 0.0, 1.0, Tolerance::rel(1e-10)).unwrap();
        assert_relative_eq!(v, 100f64.atan() * 100.0, max_relative = 1e-10);
    }

    #[test]
    fn jump_is_handled() {
        let v: f64 = integrate(|x| if x < 0.3 { 1.0 } else { 2.0 }, 0.0, 1.0, Tolerance::rel(1e-9)).unwrap();
        assert_relative_eq!(v, 1.7, max_relative = 1e-8);
    }

    #[test]
    fn complex_integrand() {
        let v: Complex64 = integrate(
            |x| Complex64::new(0.0, x).exp(),
            0.0,
            std::f64::consts::PI,
            Tolerance::rel(1e-12),
        )
        .unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn nonconvergence_reports_interval() {
        let tol = Tolerance {
            rel: 1e-14,
            abs: 0.0,
            max_intervals: 5,
        };
        let err = integrate::<f64, _>(|x| (1.0 / x).sin(), 1e-6, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::NumericFailure { .. }));
    }

    #[test]
    fn crossing() {
        let x = find_crossing(|x| x * x, 0.0, 30.0);
        assert_relative_eq!(x, 30f64.sqrt(), max_relative = 1e-12);
    }
}
