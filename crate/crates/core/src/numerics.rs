//! Quadrature and root-finding primitives with explicit error estimates.
//!
//! [`integrate_complex`] is a globally adaptive Gauss-Kronrod (7, 15) rule:
//! the segment with the largest local error is bisected until the summed
//! error meets the requested tolerance. Infinite ranges are not handled here;
//! callers substitute a finite variable first.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use thiserror::Error;

use crate::ComplexValue;

/// Tolerances and refinement limits for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Relative tolerance on the integral.
    pub rel_tol: f64,
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    /// Maximum number of bisections applied to any one initial panel.
    pub max_depth: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-14,
            max_depth: 60,
        }
    }
}

impl QuadratureSettings {
    /// Settings with the given relative tolerance and default everything else.
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), NumericsError> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0 && self.max_depth >= 1) {
            return Err(NumericsError::InvalidSettings);
        }
        Ok(())
    }
}

/// Failures of the numerical primitives.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum NumericsError {
    /// Refinement hit the depth cap; the best estimate so far is attached.
    #[error("quadrature did not converge: estimate {estimate} with error {error:e}")]
    MaxDepthExceeded {
        /// Best available estimate of the integral.
        estimate: ComplexValue,
        /// Its estimated absolute error.
        error: f64,
    },
    /// The integrand returned a non-finite value.
    #[error("integrand is not finite at x = {0}")]
    NonFiniteIntegrand(f64),
    /// Integration limits are not finite or not ordered.
    #[error("invalid integration interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    /// Tolerances must be positive and the depth at least one.
    #[error("invalid quadrature settings")]
    InvalidSettings,
    /// The bracket passed to the root finder does not straddle a root.
    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange {
        /// Lower end of the bracket.
        lo: f64,
        /// Upper end of the bracket.
        hi: f64,
    },
}

// Kronrod abscissae (non-negative half) and weights; odd indices carry the
// embedded 7-point Gauss rule.
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
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Hard cap on live segments, independent of depth.
const MAX_SEGMENTS: usize = 500_000;

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: ComplexValue,
    error: f64,
    // Part of `error` above the roundoff floor; bisection cannot reduce the rest.
    excess: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    // Largest reducible error first; ties broken by position so the order is total.
    fn cmp(&self, other: &Self) -> Ordering {
        self.excess
            .total_cmp(&other.excess)
            .then_with(|| self.error.total_cmp(&other.error))
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64, depth: u32) -> Result<Segment, NumericsError>
where
    F: FnMut(f64) -> ComplexValue,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let mut eval = |x: f64| -> Result<ComplexValue, NumericsError> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(NumericsError::NonFiniteIntegrand(x))
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.norm() * WGK[7];

    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        kronrod += (f1 + f2) * w;
        abs_sum += (f1.norm() + f2.norm()) * w;
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }

    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let raw = ((kronrod - gauss) * half).norm();
    let floor = 50.0 * f64::EPSILON * abs_sum;
    let error = raw.max(floor);

    Ok(Segment {
        a,
        b,
        value,
        error,
        excess: (raw - floor).max(0.0),
        depth,
    })
}

/// Integrates a complex-valued function over `[a, b]`.
///
/// Returns the estimate and an estimated absolute error.
pub fn integrate_complex<F>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<(ComplexValue, f64), NumericsError>
where
    F: FnMut(f64) -> ComplexValue,
{
    integrate_complex_panels(f, &[a, b], settings)
}

/// Like [`integrate_complex`], but the range is pre-split at the given
/// strictly increasing breakpoints (first and last are the limits).
///
/// Depth is counted per initial panel, so a fine pre-split of an oscillatory
/// integrand does not eat into the refinement budget.
pub fn integrate_complex_panels<F>(
    mut f: F,
    breakpoints: &[f64],
    settings: &QuadratureSettings,
) -> Result<(ComplexValue, f64), NumericsError>
where
    F: FnMut(f64) -> ComplexValue,
{
    settings.validate()?;
    if breakpoints.len() < 2 {
        return Err(NumericsError::InvalidInterval(f64::NAN, f64::NAN));
    }
    for w in breakpoints.windows(2) {
        if !(w[0].is_finite() && w[1].is_finite() && w[0] < w[1]) {
            return Err(NumericsError::InvalidInterval(w[0], w[1]));
        }
    }

    let mut heap = BinaryHeap::with_capacity(2 * breakpoints.len());
    let mut total = ComplexValue::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut total_excess = 0.0;
    for w in breakpoints.windows(2) {
        let seg = gauss_kronrod(&mut f, w[0], w[1], 0)?;
        total += seg.value;
        total_err += seg.error;
        total_excess += seg.excess;
        heap.push(seg);
    }

    loop {
        let tolerance = settings.abs_tol.max(settings.rel_tol * total.norm());
        if total_err <= tolerance || total_excess <= tolerance {
            break;
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => break,
        };
        if worst.depth >= settings.max_depth || heap.len() + 2 > MAX_SEGMENTS {
            heap.push(worst);
            let (estimate, error) = resum(&heap);
            return Err(NumericsError::MaxDepthExceeded { estimate, error });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gauss_kronrod(&mut f, worst.a, mid, worst.depth + 1)?;
        let right = gauss_kronrod(&mut f, mid, worst.b, worst.depth + 1)?;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        total_excess += left.excess + right.excess - worst.excess;
        heap.push(left);
        heap.push(right);
    }

    Ok(resum(&heap))
}

// Sums in left-to-right order so the result does not depend on refinement
// history beyond the final partition.
fn resum(heap: &BinaryHeap<Segment>) -> (ComplexValue, f64) {
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = ComplexValue::new(0.0, 0.0);
    let mut error = 0.0;
    for s in segs {
        value += s.value;
        error += s.error;
    }
    (value, error)
}

/// Adaptive Simpson integration of a real function to absolute tolerance `tol`.
///
/// A subinterval is also accepted once its refinement changes the estimate by
/// no more than rounding, so tolerances below the roundoff floor terminate.
pub fn integrate_simpson<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(NumericsError::InvalidInterval(a, b));
    }
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&mut f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !(flm.is_finite() && frm.is_finite()) {
        return Err(NumericsError::NonFiniteIntegrand(lm));
    }
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol || delta.abs() <= 64.0 * f64::EPSILON * (left.abs() + right.abs()) {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(NumericsError::MaxDepthExceeded {
            estimate: ComplexValue::new(left + right, 0.0),
            error: delta.abs(),
        });
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Finds the root of a monotone function bracketed by `[lo, hi]` by bisection,
/// stopping once the bracket is narrower than `tol`.
pub fn find_root_monotone<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64, NumericsError>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo * f_hi < 0.0) {
        return Err(NumericsError::NoSignChange { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
