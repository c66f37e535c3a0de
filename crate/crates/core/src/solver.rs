//! Numerical construction of n-knots.
//!
//! For a target chirality matrix `P` every pair contributes one signed
//! residual
//!
//! ```text
//! r_ij = P_ij (h_i + h_j) - c * w.(v_i - v_j)
//! ```
//!
//! with `w` the *unit* common normal `n_i x n_j / |n_i x n_j|`, `h` the
//! support half-widths along `w` and `c` the chirality orientation constant.
//! Dividing by `|n_i x n_j|` keeps the trivial solution where all axes
//! become parallel out of reach. Without a target the absolute-value form
//! `|w.(v_i - v_j)| - (h_i + h_j)` is used, smoothed at the origin.
//!
//! The system is solved by Levenberg-Marquardt with an analytic Jacobian
//! and random restarts. Cylinder 0 is pinned to the `z` axis through the
//! origin; the length scale is fixed by the first semi-axis.

use nalgebra::{DMatrix, DVector, Matrix3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    normalized_gap, spherical_rotation, Configuration, EllipticCylinder, OrientedLine, Vec3, CHIRALITY_SIGN,
    PARALLEL_TOL,
};
use crate::invariants::{dof, InvariantReport, Profile};
use crate::topomatrix::{chirality_matrix, chirality_raw, ring_matrix, RingMatrix, SeidelMatrix};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
/// Residual assigned to a pair whose axes are parallel during iteration.
pub const DEGENERATE_PENALTY: f64 = 1e6;
pub const SMOOTHING_EPS: f64 = 1e-12;
/// Smallest `|n_i x n_j|` accepted in a solution.
pub const MIN_CROSS: f64 = 1e-6;
/// Floor on every free semi-axis, in units of the gauge length. Below it a
/// one-sided penalty applies; without it targeted searches slide into
/// limits where a cylinder shrinks to its axis and two axes meet.
pub const MIN_SEMI_AXIS: f64 = 1e-3;
/// Gap tolerance of [`validate`], relative to the largest semi-axis.
pub const GAP_TOL: f64 = 1e-8;
/// Normalized sub-determinants below this count as vanishing.
pub const MINOR_TOL: f64 = 1e-8;

const RESTART_BATCH: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveProblem {
    pub n: usize,
    /// `None` solves for tangency with whatever chirality comes out.
    pub target: Option<SeidelMatrix>,
    pub profile: Profile,
    /// Fixed `b / a` for elliptic profiles.
    pub aspect_ratio: Option<f64>,
    pub seed: u64,
    pub max_restarts: usize,
    pub tolerance: f64,
    pub max_iterations: usize,
    pub warm_start: Option<Configuration>,
    /// Uniform noise added to the warm start on restarts after the first.
    pub warm_jitter: f64,
}

impl SolveProblem {
    pub fn new(n: usize, profile: Profile) -> Self {
        Self {
            n,
            target: None,
            profile,
            aspect_ratio: None,
            seed: 0,
            max_restarts: 100,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: 500,
            warm_start: None,
            warm_jitter: 1e-3,
        }
    }

    pub fn with_target(mut self, target: SeidelMatrix) -> Self {
        self.target = Some(target);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.max_restarts = restarts;
        self
    }

    pub fn with_warm_start(mut self, config: Configuration) -> Self {
        self.warm_start = Some(config);
        self
    }

    pub fn with_aspect_ratio(mut self, ratio: f64) -> Self {
        self.aspect_ratio = Some(ratio);
        self
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewCylinders(self.n));
        }
        if let Some(t) = &self.target {
            if t.order() != self.n {
                return Err(Error::OrderMismatch(t.order(), self.n));
            }
            let d = dof(self.n, self.profile);
            if d < 0 {
                return Err(Error::InfeasibleDof { n: self.n, dof: d });
            }
        }
        if let Some(w) = &self.warm_start {
            if w.len() != self.n {
                return Err(Error::OrderMismatch(w.len(), self.n));
            }
        }
        if let Some(k) = self.aspect_ratio {
            if !(k > 0.0 && k <= 1.0) {
                return Err(Error::InvalidSemiAxes { a: 1.0, b: k });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub config: Configuration,
    pub residual_norm: f64,
    pub realized_p: SeidelMatrix,
    pub realized_r: RingMatrix,
    /// `None` when `I - R` is singular.
    pub report: Option<InvariantReport>,
    pub gauge: String,
    pub restart: usize,
    pub iterations: usize,
}

/// A parameter slot: a fixed value, or `params[idx] + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Slot {
    Fixed(f64),
    Free(usize, f64),
}

const T: usize = 0;
const P: usize = 1;
const X: usize = 2;
const Y: usize = 3;
const OMEGA: usize = 4;
const LOG_A: usize = 5;
const LOG_B: usize = 6;

/// Maps the unknown vector onto per-cylinder `(t, p, x, y, omega, ln a, ln b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    slots: Vec<[Slot; 7]>,
    n_params: usize,
}

impl Layout {
    /// Layout for `problem`. Fixed slots and the initial unknowns are read
    /// from `start`, which should already satisfy the gauge and the profile
    /// (see [`conform`]).
    fn build(problem: &SolveProblem, start: &Configuration) -> (Self, Vec<f64>) {
        let mut init = Vec::new();
        let free = |v: f64, init: &mut Vec<f64>| {
            init.push(v);
            Slot::Free(init.len() - 1, 0.0)
        };
        let log_k = problem.aspect_ratio.map(f64::ln);
        let mut slots = Vec::with_capacity(problem.n);
        let mut shared: Option<Slot> = None;
        for (i, c) in start.cylinders.iter().enumerate() {
            let l = c.line;
            let (la, lb) = (c.a.ln(), c.b.ln());
            let mut s = [
                Slot::Fixed(l.t),
                Slot::Fixed(l.p),
                Slot::Fixed(l.x),
                Slot::Fixed(l.y),
                Slot::Fixed(c.omega),
                Slot::Fixed(la),
                Slot::Fixed(lb),
            ];
            if i > 0 {
                s[T] = free(l.t, &mut init);
                s[P] = free(l.p, &mut init);
                s[X] = free(l.x, &mut init);
                s[Y] = free(l.y, &mut init);
            }
            match problem.profile {
                Profile::EqualRound => s[LOG_B] = Slot::Fixed(la),
                Profile::FreeRound => {
                    s[LOG_A] = if i == 0 { Slot::Fixed(la) } else { free(la, &mut init) };
                    s[LOG_B] = s[LOG_A];
                }
                Profile::EqualElliptic => {
                    s[OMEGA] = free(c.omega, &mut init);
                    // ln b = ln a + shared ln(b / a)
                    s[LOG_B] = match log_k {
                        Some(k) => Slot::Fixed(la + k),
                        None => {
                            let Slot::Free(idx, _) = *shared.get_or_insert_with(|| free(lb - la, &mut init)) else {
                                unreachable!()
                            };
                            Slot::Free(idx, la)
                        }
                    };
                }
                Profile::FreeElliptic => {
                    s[OMEGA] = free(c.omega, &mut init);
                    if i > 0 {
                        s[LOG_A] = free(la, &mut init);
                    }
                    s[LOG_B] = match (log_k, s[LOG_A]) {
                        (Some(k), Slot::Fixed(v)) => Slot::Fixed(v + k),
                        (Some(k), Slot::Free(idx, _)) => Slot::Free(idx, k),
                        (None, _) => free(lb, &mut init),
                    };
                }
            }
            slots.push(s);
        }
        let n_params = init.len();
        (Self { slots, n_params }, init)
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    fn value(&self, params: &[f64], i: usize, k: usize) -> f64 {
        match self.slots[i][k] {
            Slot::Fixed(v) => v,
            Slot::Free(idx, off) => params[idx] + off,
        }
    }

    fn index(&self, i: usize, k: usize) -> Option<usize> {
        match self.slots[i][k] {
            Slot::Fixed(_) => None,
            Slot::Free(idx, _) => Some(idx),
        }
    }

    /// Cylinders described by `params`; semi-axes may come out in either
    /// order and are normalized here.
    pub fn config(&self, params: &[f64], label: &str) -> Result<Configuration> {
        let cyls = (0..self.slots.len())
            .map(|i| {
                let v = |k| self.value(params, i, k);
                let line = OrientedLine::new(v(T), v(P), v(X), v(Y));
                EllipticCylinder::with_any_axes(line, v(OMEGA), v(LOG_A).exp(), v(LOG_B).exp())
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(cyls, label)
    }
}

/// Per-cylinder quantities and their parameter derivatives.
struct CylEval {
    n: Vec3,
    dn: [Vec3; 2],
    v: Vec3,
    na: Vec3,
    nb: Vec3,
    dna: [Vec3; 2],
    dnb: [Vec3; 2],
    a: f64,
    b: f64,
}

fn rotation_derivatives(t: f64, p: f64) -> (Matrix3<f64>, Matrix3<f64>) {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = p.sin_cos();
    let rz = Matrix3::new(cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0);
    let ry = Matrix3::new(ct, 0.0, st, 0.0, 1.0, 0.0, -st, 0.0, ct);
    let drz = Matrix3::new(-sp, -cp, 0.0, cp, -sp, 0.0, 0.0, 0.0, 0.0);
    let dry = Matrix3::new(-st, 0.0, ct, 0.0, 0.0, 0.0, -ct, 0.0, -st);
    (rz * dry, drz * ry)
}

fn eval_cylinder(layout: &Layout, params: &[f64], i: usize) -> CylEval {
    let v = |k| layout.value(params, i, k);
    let (t, p, om) = (v(T), v(P), v(OMEGA));
    let rot = spherical_rotation(t, p);
    let (drot_t, drot_p) = rotation_derivatives(t, p);
    let (so, co) = om.sin_cos();
    let ea = Vec3::new(co, so, 0.0);
    let eb = Vec3::new(-so, co, 0.0);
    let ez = Vec3::z();
    CylEval {
        n: rot * ez,
        dn: [drot_t * ez, drot_p * ez],
        v: Vec3::new(v(X), v(Y), 0.0),
        na: rot * ea,
        nb: rot * eb,
        dna: [drot_t * ea, drot_p * ea],
        dnb: [drot_t * eb, drot_p * eb],
        a: v(LOG_A).exp(),
        b: v(LOG_B).exp(),
    }
}

/// Half-width along unit `w` and its partial derivatives with respect to
/// `w`, `t`, `p`, `omega`, `ln a`, `ln b` (the `t`/`p` terms only through
/// the section axes).
struct HalfWidth {
    h: f64,
    dw: Vec3,
    dtp: [f64; 2],
    domega: f64,
    dla: f64,
    dlb: f64,
}

fn half_width_eval(c: &CylEval, w: &Vec3) -> HalfWidth {
    let (ca, cb) = (c.na.dot(w), c.nb.dot(w));
    let (a2, b2) = (c.a * c.a, c.b * c.b);
    let h = (a2 * ca * ca + b2 * cb * cb).sqrt();
    if h <= f64::MIN_POSITIVE {
        return HalfWidth { h, dw: Vec3::zeros(), dtp: [0.0; 2], domega: 0.0, dla: 0.0, dlb: 0.0 };
    }
    let dtp = [0, 1].map(|k| (a2 * ca * c.dna[k].dot(w) + b2 * cb * c.dnb[k].dot(w)) / h);
    HalfWidth {
        h,
        dw: (c.na * (a2 * ca) + c.nb * (b2 * cb)) / h,
        dtp,
        domega: ca * cb * (a2 - b2) / h,
        dla: a2 * ca * ca / h,
        dlb: b2 * cb * cb / h,
    }
}

/// Residuals (and optionally the Jacobian) at `params`.
fn evaluate(
    layout: &Layout,
    target: Option<&SeidelMatrix>,
    params: &[f64],
    want_jacobian: bool,
) -> (DVector<f64>, Option<DMatrix<f64>>) {
    let n = layout.slots.len();
    let cyls: Vec<CylEval> = (0..n).map(|i| eval_cylinder(layout, params, i)).collect();
    let m = n * (n - 1) / 2;
    let mut r = DVector::zeros(m + 2 * n);
    let mut jac = want_jacobian.then(|| DMatrix::zeros(m + 2 * n, layout.n_params));
    let mut row = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (ci, cj) = (&cyls[i], &cyls[j]);
            let w_raw = ci.n.cross(&cj.n);
            let norm = w_raw.norm();
            if norm <= PARALLEL_TOL {
                r[row] = DEGENERATE_PENALTY;
                row += 1;
                continue;
            }
            let w = w_raw / norm;
            let d = ci.v - cj.v;
            let u = w.dot(&d);
            let hi = half_width_eval(ci, &w);
            let hj = half_width_eval(cj, &w);
            // r = coef_h (h_i + h_j) + f(u)
            let (coef_h, fu, dfu) = match target {
                Some(t) => (t.get(i, j) as f64, -CHIRALITY_SIGN * u, -CHIRALITY_SIGN),
                None => {
                    let su = (u * u + SMOOTHING_EPS * SMOOTHING_EPS).sqrt();
                    (-1.0, su, u / su)
                }
            };
            r[row] = coef_h * (hi.h + hj.h) + fu;

            if let Some(jac) = jac.as_mut() {
                let g = (hi.dw + hj.dw) * coef_h + d * dfu;
                // derivative through the unnormalized normal
                let gw = (g - w * w.dot(&g)) / norm;
                let mut add = |cyl: usize, k: usize, val: f64| {
                    if let Some(idx) = layout.index(cyl, k) {
                        jac[(row, idx)] += val;
                    }
                };
                for k in 0..2 {
                    add(i, k, gw.dot(&ci.dn[k].cross(&cj.n)) + coef_h * hi.dtp[k]);
                    add(j, k, gw.dot(&ci.n.cross(&cj.dn[k])) + coef_h * hj.dtp[k]);
                }
                add(i, X, dfu * w.x);
                add(i, Y, dfu * w.y);
                add(j, X, -dfu * w.x);
                add(j, Y, -dfu * w.y);
                for (cyl, hw) in [(i, &hi), (j, &hj)] {
                    add(cyl, OMEGA, coef_h * hw.domega);
                    add(cyl, LOG_A, coef_h * hw.dla);
                    add(cyl, LOG_B, coef_h * hw.dlb);
                }
            }
            row += 1;
        }
    }
    let floor = MIN_SEMI_AXIS.ln();
    for i in 0..n {
        for k in [LOG_A, LOG_B] {
            let v = layout.value(params, i, k);
            if let (Some(idx), true) = (layout.index(i, k), v < floor) {
                r[row] = floor - v;
                if let Some(jac) = jac.as_mut() {
                    jac[(row, idx)] -= 1.0;
                }
            }
            row += 1;
        }
    }
    (r, jac)
}

/// Rigid motion and scaling that put cylinder 0 on the `z` axis through the
/// origin and fix the length scale required by `profile`.
pub fn regauge(config: &Configuration, profile: Profile) -> Result<Configuration> {
    let c0 = &config.cylinders[0];
    let rot = spherical_rotation(c0.line.t, c0.line.p).transpose();
    let shift = -(rot * c0.point());
    let mut out = config.transformed(&rot, &shift)?;
    // the pinned axis comes back as t = 0 up to rounding; make it exact
    let roll = out.cylinders[0].line.p;
    let l0 = &mut out.cylinders[0];
    l0.line = OrientedLine::new(0.0, 0.0, 0.0, 0.0);
    l0.omega += roll;
    let k = match profile {
        Profile::EqualRound | Profile::FreeRound | Profile::EqualElliptic => 1.0 / out.cylinders[0].a,
        Profile::FreeElliptic => 1.0,
    };
    Ok(scaled(&out, k))
}

/// Central dilation by `k` about the origin.
pub fn scaled(config: &Configuration, k: f64) -> Configuration {
    let mut out = config.clone();
    for c in &mut out.cylinders {
        c.line.x *= k;
        c.line.y *= k;
        c.a *= k;
        c.b *= k;
    }
    out
}

/// Make semi-axes consistent with the profile: equal profiles copy the
/// first cylinder's axes, round profiles set `b = a`, a fixed aspect ratio
/// sets `b = k a`.
pub fn conform(config: &Configuration, profile: Profile, aspect_ratio: Option<f64>) -> Configuration {
    let mut out = config.clone();
    let (a0, b0) = (config.cylinders[0].a, config.cylinders[0].b);
    for c in &mut out.cylinders {
        match profile {
            Profile::EqualRound => (c.a, c.b) = (a0, a0),
            Profile::FreeRound => c.b = c.a,
            Profile::EqualElliptic => (c.a, c.b) = (a0, aspect_ratio.map_or(b0, |k| k * a0)),
            Profile::FreeElliptic => {
                if let Some(k) = aspect_ratio {
                    c.b = k * c.a;
                }
            }
        }
    }
    out
}

fn gauge_description(profile: Profile) -> String {
    let scale = match profile {
        Profile::EqualRound | Profile::EqualElliptic => "a_0 = 1",
        Profile::FreeRound => "r_0 = 1",
        Profile::FreeElliptic => "a_0 held at its start value",
    };
    format!("cylinder 0 at t = p = x = y = 0; {scale}")
}

/// Residual vector of `config` for `problem`, one entry per pair in
/// lexicographic order. Every parameter is taken from `config`; only the
/// profile's ties between semi-axes are imposed.
pub fn residual_vector(problem: &SolveProblem, config: &Configuration) -> Result<Vec<f64>> {
    problem.check()?;
    if config.len() != problem.n {
        return Err(Error::OrderMismatch(config.len(), problem.n));
    }
    let (layout, params) = Layout::build(problem, config);
    let pairs = problem.n * (problem.n - 1) / 2;
    Ok(evaluate(&layout, problem.target.as_ref(), &params, false).0.as_slice()[..pairs].to_vec())
}

/// Analytic Jacobian and a central-difference estimate at the start point of
/// `config`, for checking.
pub fn jacobian_check(problem: &SolveProblem, config: &Configuration, h: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let (layout, params) = Layout::build(problem, config);
    let target = problem.target.as_ref();
    let analytic = evaluate(&layout, target, &params, true).1.expect("jacobian");
    let mut numeric = DMatrix::zeros(analytic.nrows(), analytic.ncols());
    for k in 0..params.len() {
        let mut plus = params.clone();
        let mut minus = params.clone();
        plus[k] += h;
        minus[k] -= h;
        let rp = evaluate(&layout, target, &plus, false).0;
        let rm = evaluate(&layout, target, &minus, false).0;
        numeric.set_column(k, &((rp - rm) / (2.0 * h)));
    }
    (analytic, numeric)
}

struct Attempt {
    params: Vec<f64>,
    residual: f64,
    iterations: usize,
}

fn levenberg_marquardt(
    layout: &Layout,
    target: Option<&SeidelMatrix>,
    mut x: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Attempt {
    let np = x.len();
    let (mut r, mut jac) = evaluate(layout, target, &x, true);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut stall = 0;
    let mut it = 0;
    while it < max_iter && cost.sqrt() >= tol && np > 0 {
        it += 1;
        let j = jac.as_ref().expect("jacobian");
        let jt = j.transpose();
        let a = &jt * j;
        let g = &jt * &r;
        let mut accepted = false;
        while lambda < 1e16 {
            let mut damped = a.clone();
            for k in 0..np {
                damped[(k, k)] += lambda * a[(k, k)].max(1e-9);
            }
            let Some(chol) = damped.cholesky() else {
                lambda *= 3.0;
                continue;
            };
            let step = chol.solve(&(-&g));
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let (rt, _) = evaluate(layout, target, &trial, false);
            let ct = rt.norm_squared();
            if ct.is_finite() && ct < cost {
                let rel = (cost - ct) / cost;
                stall = if rel < 1e-10 { stall + 1 } else { 0 };
                x = trial;
                let (r2, j2) = evaluate(layout, target, &x, true);
                r = r2;
                jac = j2;
                cost = ct;
                lambda = (lambda / 3.0).max(1e-15);
                accepted = true;
                break;
            }
            lambda *= 3.0;
        }
        if !accepted || stall > 20 {
            break;
        }
    }
    Attempt { params: x, residual: cost.sqrt(), iterations: it }
}

/// Random gauged start: cylinder 0 on the `z` axis with unit first
/// semi-axis, the rest with directions uniform on the sphere and crossing
/// points uniform in a square of half-side `spread`.
fn random_start(problem: &SolveProblem, rng: &mut ChaCha8Rng) -> Configuration {
    let spread = 1.0 + problem.n as f64 * 0.25;
    let cyls = (0..problem.n)
        .map(|i| {
            let line = if i == 0 {
                OrientedLine::new(0.0, 0.0, 0.0, 0.0)
            } else {
                let z: f64 = rng.random_range(-1.0..1.0);
                let p = rng.random_range(0.0..std::f64::consts::TAU);
                OrientedLine::new(z.acos(), p, rng.random_range(-spread..spread), rng.random_range(-spread..spread))
            };
            let omega = rng.random_range(0.0..std::f64::consts::PI);
            let (a, b) = match problem.profile {
                Profile::EqualRound => (1.0, 1.0),
                Profile::FreeRound => {
                    let r = if i == 0 { 1.0 } else { rng.random_range(0.5..1.5) };
                    (r, r)
                }
                Profile::EqualElliptic => (1.0, problem.aspect_ratio.unwrap_or(0.6)),
                Profile::FreeElliptic => {
                    let a = if i == 0 { 1.0 } else { rng.random_range(0.5..1.5) };
                    (a, a * problem.aspect_ratio.unwrap_or_else(|| rng.random_range(0.3..1.0)))
                }
            };
            EllipticCylinder::new(line, omega, a, b).expect("positive axes")
        })
        .collect();
    Configuration::new(cyls, "start").expect("n >= 2")
}

fn restart_rng(seed: u64, k: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    rng
}

fn start_params(problem: &SolveProblem, k: usize) -> Result<(Layout, Vec<f64>)> {
    let mut rng = restart_rng(problem.seed, k);
    let start = match &problem.warm_start {
        Some(w) => conform(&regauge(w, problem.profile)?, problem.profile, problem.aspect_ratio),
        None => random_start(problem, &mut rng),
    };
    let (layout, mut x) = Layout::build(problem, &start);
    if problem.warm_start.is_some() && k > 0 {
        for v in &mut x {
            *v += rng.random_range(-1.0..1.0) * problem.warm_jitter;
        }
    }
    Ok((layout, x))
}

/// Accept an attempt when it meets the tolerance and yields a usable
/// configuration with the requested chirality.
fn finish(problem: &SolveProblem, layout: &Layout, att: &Attempt, k: usize) -> Option<SolveResult> {
    let config = layout.config(&att.params, &format!("solve seed {} restart {k}", problem.seed)).ok()?;
    let dirs: Vec<Vec3> = config.cylinders.iter().map(|c| c.direction()).collect();
    let min_cross = (0..dirs.len())
        .flat_map(|i| (i + 1..dirs.len()).map(move |j| (i, j)))
        .map(|(i, j)| dirs[i].cross(&dirs[j]).norm())
        .fold(f64::INFINITY, f64::min);
    if min_cross <= MIN_CROSS {
        return None;
    }
    let realized_p = chirality_matrix(&config).ok()?;
    if problem.target.as_ref().is_some_and(|t| *t != realized_p) {
        return None;
    }
    let realized_r = ring_matrix(&config).ok()?;
    let report = InvariantReport::compute(&realized_p, &realized_r).ok();
    Some(SolveResult {
        config,
        residual_norm: att.residual,
        realized_p,
        realized_r,
        report,
        gauge: gauge_description(problem.profile),
        restart: k,
        iterations: att.iterations,
    })
}

/// Solve `problem`, running restarts in parallel batches. The result is the
/// converged attempt with the lowest restart index, so it depends only on
/// the seed and the restart budget.
pub fn solve(problem: &SolveProblem) -> Result<SolveResult> {
    solve_until(problem, |_| true)
}

/// Like [`solve`], but converged attempts rejected by `accept` count as
/// failed restarts.
pub fn solve_until(problem: &SolveProblem, accept: impl Fn(&SolveResult) -> bool + Sync) -> Result<SolveResult> {
    problem.check()?;
    let target = problem.target.as_ref();
    let mut best: Option<(f64, usize, Layout, Attempt)> = None;
    let mut k0 = 0;
    while k0 < problem.max_restarts {
        let k1 = (k0 + RESTART_BATCH).min(problem.max_restarts);
        let attempts = (k0..k1)
            .into_par_iter()
            .map(|k| {
                let (layout, x) = start_params(problem, k)?;
                let att = levenberg_marquardt(&layout, target, x, problem.tolerance, problem.max_iterations);
                let done = (att.residual < problem.tolerance)
                    .then(|| finish(problem, &layout, &att, k))
                    .flatten()
                    .filter(|r| accept(r));
                Ok((k, layout, att, done))
            })
            .collect::<Result<Vec<_>>>()?;
        for (k, layout, att, done) in attempts {
            if let Some(res) = done {
                return Ok(res);
            }
            if best.as_ref().is_none_or(|b| att.residual < b.0) {
                best = Some((att.residual, k, layout, att));
            }
        }
        k0 = k1;
    }
    let (best_residual, best) = match best {
        Some((res, k, layout, att)) => (res, finish(problem, &layout, &att, k).map(Box::new)),
        None => (f64::INFINITY, None),
    };
    Err(Error::NoConvergence { restarts: problem.max_restarts, best_residual, best })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub max_gap: f64,
    pub gaps: Vec<((usize, usize), f64)>,
    pub min_cross: f64,
    pub report: Option<InvariantReport>,
}

/// Re-check every pair of `config` for tangency within `gap_tol` times the
/// largest semi-axis, and for axes kept apart from parallel.
pub fn validate_config(config: &Configuration, gap_tol: f64) -> Result<ValidationReport> {
    let n = config.len();
    let scale = config.scale();
    let mut gaps = Vec::with_capacity(n * (n - 1) / 2);
    let mut bad = Vec::new();
    let mut min_cross = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let (ci, cj) = (&config.cylinders[i], &config.cylinders[j]);
            let cross = ci.direction().cross(&cj.direction()).norm();
            min_cross = min_cross.min(cross);
            if cross <= MIN_CROSS {
                bad.push((i, j));
                continue;
            }
            let g = normalized_gap(ci, cj).map_err(|e| e.at(i, j))?;
            if g.abs() >= gap_tol * scale {
                bad.push((i, j));
            }
            gaps.push(((i, j), g));
        }
    }
    if let Some(c) = config.cylinders.iter().find(|c| c.validate().is_err()) {
        return Err(Error::InvalidSemiAxes { a: c.a, b: c.b });
    }
    if !bad.is_empty() {
        return Err(Error::ValidationFailure {
            pairs: bad,
            reason: format!("gap above {gap_tol:e} x scale or near-parallel axes"),
        });
    }
    let max_gap = gaps.iter().map(|g| g.1.abs()).fold(0.0, f64::max);
    let report = chirality_matrix(config)
        .and_then(|p| Ok((p, ring_matrix(config)?)))
        .and_then(|(p, r)| InvariantReport::compute(&p, &r))
        .ok();
    Ok(ValidationReport { max_gap, gaps, min_cross, report })
}

pub fn validate(result: &SolveResult) -> Result<ValidationReport> {
    validate_config(&result.config, GAP_TOL)
}

/// All principal minors of order `7..=n` of the non-normalized chirality
/// matrix, each divided by the `k`-th power of the largest entry magnitude.
/// Any line configuration makes them vanish.
pub fn plucker_rank_check(config: &Configuration) -> Result<Vec<(Vec<usize>, f64)>> {
    use itertools::Itertools;
    let raw = chirality_raw(config)?;
    let n = config.len();
    let max = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut out = Vec::new();
    for k in 7..=n {
        for subset in (0..n).combinations(k) {
            let sub = DMatrix::from_fn(k, k, |a, b| raw[(subset[a], subset[b])] / max);
            out.push((subset, sub.determinant().abs()));
        }
    }
    Ok(out)
}
