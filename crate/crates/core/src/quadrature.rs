//! Adaptive Gauss-Kronrod (7/15) integration over piecewise-smooth
//! integrands.
//!
//! Every known jump or kink is passed as a breakpoint; the initial panels are
//! the intervals between consecutive breakpoints and no panel ever straddles
//! one. Refinement then bisects the panel with the largest error estimate
//! until the summed estimate meets `max(abs, rel * |value|)`.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

// Kronrod abscissae (positive half, descending) and weights, QUADPACK qk15.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
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
// Gauss weights for the 7-point rule (nodes are XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Upper bound on the number of panels kept at once.
    pub max_panels: usize,
}

impl Tolerance {
    pub const fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            max_panels: 2000,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::new(1e-10, 1e-8)
    }
}

/// Outcome of [`integrate`]. A non-converged result still carries the best
/// value reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl Integral {
    pub fn zero() -> Self {
        Integral {
            value: 0.0,
            error: 0.0,
            converged: true,
            evaluations: 0,
        }
    }

    /// Turns a non-converged result into [`Error::NotConverged`].
    pub fn require_converged(self) -> Result<f64> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::NotConverged {
                value: self.value,
                error_estimate: self.error,
            })
        }
    }
}

/// A real integrand on a bounded interval together with the interior points
/// where it is allowed to jump or kink.
pub struct PiecewiseIntegrand<F> {
    f: F,
    lower: f64,
    upper: f64,
    breakpoints: Vec<f64>,
}

impl<F: Fn(f64) -> f64> PiecewiseIntegrand<F> {
    /// Breakpoints are sorted and deduplicated; those outside the open
    /// support are dropped. Unbounded or reversed support is rejected.
    pub fn new(f: F, support: (f64, f64), breakpoints: impl IntoIterator<Item = f64>) -> Result<Self> {
        let (lower, upper) = support;
        if !lower.is_finite() || !upper.is_finite() {
            return Err(Error::Precondition(alloc::format!(
                "integration support must be bounded, got [{lower}, {upper}]"
            )));
        }
        if lower > upper {
            return Err(Error::Precondition(alloc::format!(
                "integration support reversed: [{lower}, {upper}]"
            )));
        }
        let mut breakpoints: Vec<f64> = breakpoints
            .into_iter()
            .filter(|b| b.is_finite() && *b > lower && *b < upper)
            .collect();
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        Ok(PiecewiseIntegrand {
            f,
            lower,
            upper,
            breakpoints,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    // max-heap on error; ties broken by position so the order is total
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 15-point Kronrod panel with its embedded 7-point Gauss estimate.
/// Returns `(value, error_estimate)`.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, x) in XGK.iter().take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (f_center - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = libm::pow(200.0 * err / res_asc, 1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrates `f` over its support.
///
/// Deterministic: the refinement sequence depends only on the integrand, so
/// a tighter tolerance continues the same sequence further. The reported
/// pair is the one with the smallest total error estimate seen, which makes
/// the error estimate nonincreasing as tolerances tighten.
pub fn integrate<F: Fn(f64) -> f64>(f: &PiecewiseIntegrand<F>, tol: Tolerance) -> Result<Integral> {
    if !(tol.abs > 0.0 && tol.rel > 0.0) {
        return Err(Error::Precondition(alloc::format!(
            "tolerances must be positive (abs {}, rel {})",
            tol.abs, tol.rel
        )));
    }
    if f.lower == f.upper {
        return Ok(Integral::zero());
    }
    let eval = |x: f64| f.eval(x);
    let mut heap = BinaryHeap::new();
    let mut edges = Vec::with_capacity(f.breakpoints.len() + 2);
    edges.push(f.lower);
    edges.extend_from_slice(&f.breakpoints);
    edges.push(f.upper);
    let mut evaluations = 0;
    for w in edges.windows(2) {
        let (value, error) = gauss_kronrod_15(&eval, w[0], w[1]);
        evaluations += 15;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }

    let totals = |heap: &BinaryHeap<Panel>| {
        let mut panels: Vec<&Panel> = heap.iter().collect();
        panels.sort_by(|p, q| p.a.total_cmp(&q.a));
        panels
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
    };

    let (mut value, mut error) = totals(&heap);
    let mut best = (value, error);
    loop {
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Integral {
                value,
                error,
                converged: true,
                evaluations,
            });
        }
        if heap.len() >= tol.max_panels {
            break;
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // panel at floating-point resolution; cannot refine further
            heap.push(worst);
            break;
        }
        let (v1, e1) = gauss_kronrod_15(&eval, worst.a, mid);
        let (v2, e2) = gauss_kronrod_15(&eval, mid, worst.b);
        evaluations += 30;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        let t = totals(&heap);
        value = t.0;
        error = t.1;
        if error < best.1 {
            best = (value, error);
        }
    }
    Ok(Integral {
        value: best.0,
        error: best.1,
        converged: best.1 <= tol.abs.max(tol.rel * best.0.abs()),
        evaluations,
    })
}

/// Convenience wrapper: integrate `f` on `[a, b]` split at `breakpoints`.
pub fn integrate_fn<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: impl IntoIterator<Item = f64>,
    tol: Tolerance,
) -> Result<Integral> {
    integrate(&PiecewiseIntegrand::new(f, (a, b), breakpoints)?, tol)
}
