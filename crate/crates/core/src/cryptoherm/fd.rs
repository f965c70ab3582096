//! Finite-difference discretization of the continuous star graph.
//!
//! Each arm carries `n` grid points measured from its tip (`x = i h`,
//! `i = 0..n`), and all arms share one center point at `x = L`. Interior
//! rows are the second-difference stencil `(-1, 2, -1) / h^2 = E`. The tip
//! row imposes `psi'(0) = c_j psi(0)` and the center row imposes the
//! Kirchhoff sum, both with second-order one-sided differences and no `E`.
//! The result is a pencil `A - E B` with a singular diagonal `B`.
//!
//! At the sizes used for convergence studies the dense matrix would not fit
//! a dense eigensolver, so eigenvalues are refined as zeros of the pencil
//! determinant, evaluated arm by arm with a three-term recurrence.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, DenseMatrix, Lu, EIGEN_DIM_CAP};
use crate::roots::Interval;
use crate::stargraph::StarGraphSpec;

pub const FD_MIN_POINTS: usize = 8;

/// Relative secant step at which [`FdStarOperator::refine_eigenvalue`] stops.
/// The recurrence loses about `n eps` relative accuracy, and the
/// discretization error is far larger at any useful `n`.
pub const REFINE_TOL: f64 = 1e-10;

/// Relative center amplitude below which [`FdStarOperator::mode`] treats a
/// mode as vanishing at the center.
pub const CENTER_NODE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
struct Row {
    entries: Vec<(usize, Complex64)>,
    /// Carries `E` on the diagonal.
    mass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdStarOperator {
    spec: StarGraphSpec,
    n: usize,
    h: f64,
    rows: Vec<Row>,
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl FdStarOperator {
    pub fn new(spec: &StarGraphSpec, n: usize) -> Result<Self> {
        if n < FD_MIN_POINTS {
            return Err(Error::Argument(format!("need at least {FD_MIN_POINTS} points per arm, got {n}")));
        }
        let q = spec.q();
        let h = spec.length() / n as f64;
        let center = q * n;
        let idx = |j: usize, i: usize| if i == n { center } else { j * n + i };
        let mut rows = vec![
            Row {
                entries: Vec::new(),
                mass: false,
            };
            q * n + 1
        ];
        let inv_h2 = 1.0 / (h * h);
        let inv_2h = 0.5 / h;
        for j in 0..q {
            let c = spec.tip_coupling(j);
            rows[idx(j, 0)].entries = vec![
                (idx(j, 0), re(-3.0 * inv_2h) - c),
                (idx(j, 1), re(4.0 * inv_2h)),
                (idx(j, 2), re(-inv_2h)),
            ];
            for i in 1..n {
                rows[idx(j, i)] = Row {
                    entries: vec![
                        (idx(j, i - 1), re(-inv_h2)),
                        (idx(j, i), re(2.0 * inv_h2)),
                        (idx(j, i + 1), re(-inv_h2)),
                    ],
                    mass: true,
                };
            }
        }
        let mut kirchhoff = vec![(center, re(3.0 * q as f64 * inv_2h))];
        for j in 0..q {
            kirchhoff.push((idx(j, n - 1), re(-4.0 * inv_2h)));
            kirchhoff.push((idx(j, n - 2), re(inv_2h)));
        }
        rows[center].entries = kirchhoff;
        Ok(Self {
            spec: *spec,
            n,
            h,
            rows,
        })
    }

    pub fn spec(&self) -> &StarGraphSpec {
        &self.spec
    }

    pub fn points_per_arm(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    /// `q n + 1` unknowns.
    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    /// Unknown index of grid point `i` on arm `j`; `i = n` is the center.
    pub fn index(&self, arm: usize, i: usize) -> usize {
        if i == self.n {
            self.center_index()
        } else {
            arm * self.n + i
        }
    }

    pub fn center_index(&self) -> usize {
        self.spec.q() * self.n
    }

    /// `(A - E B) u`.
    pub fn apply(&self, e: Complex64, u: &[Complex64]) -> Result<Vec<Complex64>> {
        if u.len() != self.dimension() {
            return Err(Error::Dimension(format!("vector of length {} for {} unknowns", u.len(), self.dimension())));
        }
        Ok(self
            .rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let s: Complex64 = row.entries.iter().map(|(c, v)| v * u[*c]).sum();
                if row.mass {
                    s - e * u[r]
                } else {
                    s
                }
            })
            .collect())
    }

    /// Dense `A` and the diagonal of `B`.
    pub fn to_dense(&self) -> Result<(DenseMatrix, Vec<bool>)> {
        let d = self.dimension();
        if d > EIGEN_DIM_CAP {
            return Err(Error::Argument(format!("dense export capped at {EIGEN_DIM_CAP} unknowns, got {d}")));
        }
        let mut a = DenseMatrix::zeros(d, d);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in &row.entries {
                a[(r, *c)] += v;
            }
        }
        Ok((a, self.rows.iter().map(|r| r.mass).collect()))
    }

    /// Eigenvalues `E` of the pencil by eliminating the constraint unknowns
    /// (tips and center) and diagonalizing the Schur complement. Small `n` only.
    pub fn dense_eigenvalues(&self) -> Result<Vec<Complex64>> {
        let (a, mass) = self.to_dense()?;
        let free: Vec<usize> = (0..mass.len()).filter(|&i| mass[i]).collect();
        let fixed: Vec<usize> = (0..mass.len()).filter(|&i| !mass[i]).collect();
        let block = |rows: &[usize], cols: &[usize]| DenseMatrix::from_fn(rows.len(), cols.len(), |i, j| a[(rows[i], cols[j])]);
        let a_ff = block(&free, &free);
        let a_fc = block(&free, &fixed);
        let a_cf = block(&fixed, &free);
        let lu = Lu::new(&block(&fixed, &fixed))?;
        let mut x = DenseMatrix::zeros(fixed.len(), free.len());
        for j in 0..free.len() {
            for (i, v) in lu.solve(&a_cf.column(j)).into_iter().enumerate() {
                x[(i, j)] = v;
            }
        }
        eigenvalues(&a_ff.try_sub(&a_fc.try_mul(&x)?)?)
    }

    /// Arm values `(u_n, 3 u_n - 4 u_{n-1} + u_{n-2})` for `u_0 = 1`.
    fn arm_end(&self, j: usize, e: Complex64) -> (Complex64, Complex64) {
        let h = self.h;
        let two_hc = 2.0 * h * self.spec.tip_coupling(j);
        let eh2 = e * h * h;
        let mut prev = re(1.0);
        let mut cur = (re(2.0) + two_hc) / (re(2.0) + eh2);
        // u_2 from the tip row; the first interior row fixed u_1 above
        let mut next = 4.0 * cur - re(3.0) - two_hc;
        let mut hist = [prev, cur, next];
        for _ in 2..self.n {
            prev = cur;
            cur = next;
            next = (re(2.0) - eh2) * cur - prev;
            hist = [prev, cur, next];
        }
        let [um2, um1, un] = hist;
        (un, 3.0 * un - 4.0 * um1 + um2)
    }

    /// Mode at an eigenvalue `e`, normalized to a unit center value. `None`
    /// when some arm vanishes at the center (center-node modes).
    pub fn mode(&self, e: Complex64) -> Option<Vec<Complex64>> {
        let mut u = vec![re(0.0); self.dimension()];
        u[self.center_index()] = re(1.0);
        let eh2 = e * self.h * self.h;
        for j in 0..self.spec.q() {
            let two_hc = 2.0 * self.h * self.spec.tip_coupling(j);
            let mut v = Vec::with_capacity(self.n + 1);
            v.push(re(1.0));
            v.push((re(2.0) + two_hc) / (re(2.0) + eh2));
            v.push(4.0 * v[1] - re(3.0) - two_hc);
            for i in 2..self.n {
                let next = (re(2.0) - eh2) * v[i] - v[i - 1];
                v.push(next);
            }
            let end = v[self.n];
            // the recurrence carries about n eps of noise, so a center value
            // this small is indistinguishable from zero
            if end.norm() <= CENTER_NODE_TOL * v.iter().map(|z| z.norm()).fold(0.0, f64::max) {
                return None;
            }
            for (i, x) in v.iter().enumerate().take(self.n) {
                u[self.index(j, i)] = x / end;
            }
        }
        Some(u)
    }

    /// Determinant of the pencil at `E` up to a nonzero factor:
    /// `sum_j D_j prod_{i != j} U_i`.
    pub fn characteristic(&self, e: Complex64) -> Complex64 {
        let ends: Vec<(Complex64, Complex64)> = (0..self.spec.q()).map(|j| self.arm_end(j, e)).collect();
        let mut total = re(0.0);
        for (j, (_, dj)) in ends.iter().enumerate() {
            let mut term = *dj;
            for (i, (ui, _)) in ends.iter().enumerate() {
                if i != j {
                    term *= ui;
                }
            }
            total += term;
        }
        total
    }

    /// Secant refinement of a pencil eigenvalue from the guess `e0`.
    pub fn refine_eigenvalue(&self, e0: Complex64) -> Result<Complex64> {
        let mut x0 = e0;
        let mut x1 = e0 * (1.0 + 1e-4) + re(1e-6);
        let mut f0 = self.characteristic(x0);
        let mut f1 = self.characteristic(x1);
        for _ in 0..100 {
            if f1 == re(0.0) {
                return Ok(x1);
            }
            let denom = f1 - f0;
            if denom == re(0.0) {
                break;
            }
            let x2 = x1 - f1 * (x1 - x0) / denom;
            if !(x2.re.is_finite() && x2.im.is_finite()) {
                break;
            }
            if (x2 - x1).norm() <= REFINE_TOL * x2.norm().max(1.0) {
                return Ok(x2);
            }
            (x0, f0) = (x1, f1);
            x1 = x2;
            f1 = self.characteristic(x1);
        }
        Err(Error::NoConvergence {
            size: self.dimension(),
            residual: f1.norm(),
        })
    }

    /// Discrete momentum `sqrt(E)` near the continuum momentum `k0`.
    pub fn momentum_near(&self, k0: Complex64) -> Result<Complex64> {
        let e = self.refine_eigenvalue(k0 * k0)?;
        let k = e.sqrt();
        // keep the branch of the guess
        Ok(if (k - k0).norm() <= (k + k0).norm() { k } else { -k })
    }

    /// Real momenta in `window` where the characteristic function changes
    /// sign. Needs real tip couplings (`alpha = 0`). Roots of even
    /// multiplicity are not seen.
    pub fn real_momenta(&self, window: Interval, samples: usize) -> Result<Vec<f64>> {
        if self.spec.alpha() != 0.0 {
            return Err(Error::Argument("real-axis FD scan needs alpha = 0".into()));
        }
        if samples < 2 {
            return Err(Error::Argument("need at least two samples".into()));
        }
        let f = |k: f64| self.characteristic(re(k * k)).re;
        let ks: Vec<f64> = (0..samples)
            .map(|i| window.lo + window.width() * i as f64 / (samples - 1) as f64)
            .collect();
        let vals: Vec<f64> = ks.iter().map(|&k| f(k)).collect();
        let mut out = Vec::new();
        for i in 0..samples - 1 {
            let (mut a, mut b, mut fa) = (ks[i], ks[i + 1], vals[i]);
            if fa == 0.0 {
                out.push(a);
                continue;
            }
            if fa.signum() == vals[i + 1].signum() {
                continue;
            }
            while b - a > 1e-14 * b.max(1.0) {
                let m = 0.5 * (a + b);
                let fm = f(m);
                if fm.signum() == fa.signum() {
                    (a, fa) = (m, fm);
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        Ok(out)
    }
}

/// FD momenta for each grid size and the fitted order of convergence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetConvergence {
    pub target: f64,
    pub momenta: Vec<Complex64>,
    pub errors: Vec<f64>,
    /// Slope of `log error` against `log h`.
    pub order: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub points_per_arm: Vec<usize>,
    pub targets: Vec<TargetConvergence>,
    pub min_order: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Refines the FD eigenvalue nearest each continuum root `targets[i]` for
/// every grid size and fits the convergence order.
pub fn convergence_study(spec: &StarGraphSpec, ns: &[usize], targets: &[f64]) -> Result<ConvergenceStudy> {
    if ns.len() < 2 {
        return Err(Error::Argument("need at least two grid sizes".into()));
    }
    let ops: Vec<FdStarOperator> = ns.iter().map(|&n| FdStarOperator::new(spec, n)).collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(targets.len());
    for &t in targets {
        let momenta: Vec<Complex64> = ops.iter().map(|op| op.momentum_near(re(t))).collect::<Result<_>>()?;
        let errors: Vec<f64> = momenta.iter().map(|k| (k - t).norm()).collect();
        let log_h: Vec<f64> = ops.iter().map(|op| op.step().ln()).collect();
        let log_e: Vec<f64> = errors.iter().map(|e| e.max(f64::MIN_POSITIVE).ln()).collect();
        rows.push(TargetConvergence {
            target: t,
            momenta,
            errors,
            order: slope(&log_h, &log_e),
        });
    }
    let min_order = rows.iter().map(|r| r.order).fold(f64::INFINITY, f64::min);
    Ok(ConvergenceStudy {
        points_per_arm: ns.to_vec(),
        targets: rows,
        min_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn star(alpha: f64) -> StarGraphSpec {
        StarGraphSpec::new(6, alpha).unwrap()
    }

    #[test]
    fn too_few_points() {
        assert!(FdStarOperator::new(&star(0.7), 7).is_err());
        let op = FdStarOperator::new(&star(0.7), 8).unwrap();
        assert_eq!(op.dimension(), 49);
        assert_eq!(op.index(3, 8), op.center_index());
    }

    #[test]
    fn row_structure() {
        let op = FdStarOperator::new(&star(0.7), 10).unwrap();
        let (a, mass) = op.to_dense().unwrap();
        let h2 = op.step() * op.step();
        let r = op.index(2, 5);
        assert!(mass[r]);
        assert!((a[(r, r)].re * h2 - 2.0).abs() < 1e-12);
        assert!((a[(r, r + 1)].re * h2 + 1.0).abs() < 1e-12);
        assert!(!mass[op.index(2, 0)] && !mass[op.center_index()]);
        // Kirchhoff row sums to zero on constants
        let ones = vec![re(1.0); op.dimension()];
        let out = op.apply(re(0.0), &ones).unwrap();
        assert!(out[op.center_index()].norm() < 1e-10);
    }

    #[test]
    fn constant_mode_in_neumann_case() {
        let op = FdStarOperator::new(&star(0.0), 20).unwrap();
        assert!(op.characteristic(re(0.0)).norm() < 1e-12);
        let ones = vec![re(1.0); op.dimension()];
        assert!(op.apply(re(0.0), &ones).unwrap().iter().all(|z| z.norm() < 1e-9));
    }

    #[test]
    fn recurrence_matches_dense_pencil() {
        let op = FdStarOperator::new(&star(0.7), 12).unwrap();
        let dense = op.dense_eigenvalues().unwrap();
        for k0 in [0.378_666_476_051_489_5, 1.102_337_194_243_114_9, FRAC_PI_2, 1.807_326_093_005_283_7] {
            let e = op.refine_eigenvalue(re(k0 * k0)).unwrap();
            let nearest = dense.iter().map(|d| (d - e).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-8 * e.norm().max(1.0), "{k0}: {e} off by {nearest}");
        }
    }

    #[test]
    fn refined_eigenvalue_has_a_null_vector() {
        let op = FdStarOperator::new(&star(0.7), 50).unwrap();
        let e = op.refine_eigenvalue(re(1.1 * 1.1)).unwrap();
        let u = op.mode(e).unwrap();
        let r = op.apply(e, &u).unwrap();
        let (a, _) = op.to_dense().unwrap();
        let rel = r.iter().map(|z| z.norm()).fold(0.0, f64::max) / (a.max_abs() * u.iter().map(|z| z.norm()).fold(0.0, f64::max));
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn neumann_star_converges_to_pi() {
        let op = FdStarOperator::new(&star(0.0), 800).unwrap();
        let k = op.momentum_near(re(PI)).unwrap();
        assert!((k - PI).norm() < 1e-3, "{k}");
        assert!(k.im.abs() < 1e-12);
    }

    #[test]
    fn center_node_modes_below_pi() {
        // Neumann arms with psi(center) = 0 give k = pi/2, (q-1)-fold
        let op = FdStarOperator::new(&star(0.0), 200).unwrap();
        let ks = op.real_momenta(Interval::new(0.05, 3.5).unwrap(), 2000).unwrap();
        assert_eq!(ks.len(), 2, "{ks:?}");
        assert!((ks[0] - FRAC_PI_2).abs() < 1e-4);
        assert!((ks[1] - PI).abs() < 1e-4);
        assert!(op.mode(re(ks[0] * ks[0])).is_none());
        assert!(op.mode(re(ks[1] * ks[1])).is_some());
        assert!(FdStarOperator::new(&star(0.7), 20).unwrap().real_momenta(Interval::new(0.1, 1.0).unwrap(), 10).is_err());
    }

    #[test]
    fn second_order_convergence() {
        let roots = [0.378_666_476_051_489_5, 1.102_337_194_243_114_9, FRAC_PI_2, 1.807_326_093_005_283_7];
        let study = convergence_study(&star(0.7), &[100, 200, 400], &roots).unwrap();
        assert!(study.min_order > 1.8, "{study:?}");
        for t in &study.targets {
            assert!(t.errors.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn complex_pair_at_strong_coupling() {
        let k0 = Complex64::new(0.779_919_161_977_762_7, 0.619_636_183_638_486_2);
        let op = FdStarOperator::new(&star(1.0), 400).unwrap();
        let e = op.refine_eigenvalue(k0 * k0).unwrap();
        assert!(e.im.abs() > 0.1);
        assert!((e - k0 * k0).norm() < 1e-2 * (k0 * k0).norm(), "{e} vs {}", k0 * k0);
        // the conjugate is an eigenvalue as well
        let ec = op.refine_eigenvalue((k0 * k0).conj()).unwrap();
        assert!((ec - e.conj()).norm() < 1e-9);
    }
}
