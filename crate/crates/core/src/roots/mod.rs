//! Root finding for the star-graph secular problem.
//!
//! * [`scan_real_roots`] brackets sign changes of the reduced secular
//!   function on the real axis and bisects them, with a local search for
//!   roots that touch the axis without crossing it.
//! * [`locate_complex_roots`] counts zeros of the secular determinant inside
//!   rectangles by the argument principle, subdivides, and polishes each
//!   isolated zero with Newton.
//! * [`find_exceptional_point`] locates the coupling at which two real
//!   roots merge.

mod contour;
mod exceptional;
mod oracle;
mod real;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::stargraph::StarGraphSpec;

pub use contour::{count_complex_roots, locate_complex_roots, winding_number, ContourOptions, Rect};
pub use exceptional::{
    coalescing_pair_gap, find_exceptional_point, gap_exponent, EpMethod, EpOptions, ExceptionalPoint, GapFit,
};
pub use oracle::{closed_form_roots, compare_closed_form, determinant_roots, RootAgreement};
pub use real::{count_real_roots, scan_real_roots, ScanOptions};

/// Central-difference step used for derivatives in `k`.
pub(crate) fn fd_step(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// A closed real interval `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Argument(format!("empty or invalid interval ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    /// Like [`Interval::new`] but accepts the endpoints in either order.
    pub fn sorted(a: f64, b: f64) -> Result<Self> {
        Self::new(a.min(b), a.max(b))
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Default real window in `k`, in units of `1 / L`.
pub fn default_window(spec: &StarGraphSpec) -> Interval {
    Interval {
        lo: 0.05 / spec.length(),
        hi: 2.0 / spec.length(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RealRoot {
    pub k: f64,
    /// `|det M(k)|` at the refined root.
    pub residual: f64,
    /// Found by the touching-root search rather than a sign change.
    pub tangential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexRoot {
    pub k: Complex64,
    /// `|det M(k)|` at the refined root.
    pub residual: f64,
    pub multiplicity: usize,
}

/// Real and complex roots of one star graph in a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub q: usize,
    pub alpha: f64,
    pub window: Interval,
    pub real_roots: Vec<RealRoot>,
    /// Upper half plane only; conjugates are implied.
    pub complex_roots: Vec<ComplexRoot>,
}

/// Real scan plus, when `rect` is given, the complex roots inside it.
pub fn root_report(
    spec: &StarGraphSpec,
    window: Interval,
    scan: &ScanOptions,
    rect: Option<(Rect, &ContourOptions)>,
) -> Result<RootReport> {
    let real_roots = scan_real_roots(spec, window, scan)?;
    let complex_roots = match rect {
        Some((r, opts)) => locate_complex_roots(spec, r, opts)?,
        None => Vec::new(),
    };
    Ok(RootReport {
        q: spec.q(),
        alpha: spec.alpha(),
        window,
        real_roots,
        complex_roots,
    })
}
