//! Oriented lines, elliptic cylinders and the metric formulas for their
//! tangency.
//!
//! A line is stored as two spherical angles `(t, p)` for its unit direction
//! and the point `(x, y, 0)` where it pierces the `xy` plane. An elliptic
//! cylinder adds a roll angle `omega` and semi-axes `a >= b > 0`. The
//! cross-section boundary is
//!
//! ```text
//! rho(alpha) = a * N_a * cos(alpha) + b * N_b * sin(alpha)
//! ```
//!
//! where `N_a = Rz(p) Ry(t) (cos omega, sin omega, 0)` and
//! `N_b = Rz(p) Ry(t) (-sin omega, cos omega, 0)`.

use nalgebra::{Matrix3, Matrix3x2, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Pairs with `|n_i x n_j|` at or below this are treated as parallel.
pub const PARALLEL_TOL: f64 = 1e-9;

/// Orientation constant of the chirality product:
/// `chirality_product(i, j) = CHIRALITY_SIGN * (n_i x n_j) . (v_i - v_j)`.
///
/// Calibrated on the published 10-knot parameter table: with `-1` the
/// table reproduces the published determinant and direct/mirror invariant
/// assignment; with `+1` the two invariants come out swapped.
pub const CHIRALITY_SIGN: f64 = -1.0;

/// Least-squares residual above which two cylinders are declared not tangent
/// when locating their contact point.
pub const CONTACT_TOL: f64 = 1e-4;

pub fn direction_vector(t: f64, p: f64) -> Vec3 {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = p.sin_cos();
    Vec3::new(st * cp, st * sp, ct)
}

/// `Rz(p) * Ry(t)`; maps the `z` axis onto `direction_vector(t, p)`.
pub fn spherical_rotation(t: f64, p: f64) -> Matrix3<f64> {
    let (st, ct) = t.sin_cos();
    let (sp, cp) = p.sin_cos();
    let rz = Matrix3::new(cp, -sp, 0.0, sp, cp, 0.0, 0.0, 0.0, 1.0);
    let ry = Matrix3::new(ct, 0.0, st, 0.0, 1.0, 0.0, -st, 0.0, ct);
    rz * ry
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedLine {
    pub t: f64,
    pub p: f64,
    pub x: f64,
    pub y: f64,
}

impl OrientedLine {
    pub fn new(t: f64, p: f64, x: f64, y: f64) -> Self {
        Self { t, p, x, y }
    }

    pub fn direction(&self) -> Vec3 {
        direction_vector(self.t, self.p)
    }

    /// The point where the line crosses `z = 0`.
    pub fn point(&self) -> Vec3 {
        Vec3::new(self.x, self.y, 0.0)
    }

    /// Same line, opposite orientation.
    pub fn reversed(&self) -> Self {
        Self { t: std::f64::consts::PI - self.t, p: self.p + std::f64::consts::PI, ..*self }
    }

    /// Line through `point` along `dir`. Lines parallel to the `xy` plane
    /// have no crossing point and are rejected unless they lie in it.
    pub fn through(point: &Vec3, dir: &Vec3) -> Result<Self> {
        let d = dir.normalize();
        let t = d.z.clamp(-1.0, 1.0).acos();
        let p = d.y.atan2(d.x);
        let v = if d.z.abs() > 1e-12 {
            point - d * (point.z / d.z)
        } else if point.z.abs() <= 1e-12 {
            *point
        } else {
            return Err(Error::DegenerateParams(format!("line parallel to the xy plane at height {}", point.z)));
        };
        Ok(Self { t, p, x: v.x, y: v.y })
    }

    /// Point on the line at signed arc length `s` from `point()`.
    pub fn at(&self, s: f64) -> Vec3 {
        self.point() + self.direction() * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticCylinder {
    #[serde(flatten)]
    pub line: OrientedLine,
    pub omega: f64,
    pub a: f64,
    pub b: f64,
}

impl EllipticCylinder {
    pub fn new(line: OrientedLine, omega: f64, a: f64, b: f64) -> Result<Self> {
        let cyl = Self { line, omega, a, b };
        cyl.validate()?;
        Ok(cyl)
    }

    pub fn round(line: OrientedLine, r: f64) -> Result<Self> {
        Self::new(line, 0.0, r, r)
    }

    /// Accepts semi-axes in either order; when `b > a` the roles swap and
    /// the roll angle advances by a quarter turn, which describes the same
    /// cylinder.
    pub fn with_any_axes(line: OrientedLine, omega: f64, a: f64, b: f64) -> Result<Self> {
        if b > a {
            Self::new(line, omega + std::f64::consts::FRAC_PI_2, b, a)
        } else {
            Self::new(line, omega, a, b)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.a >= self.b && self.a.is_finite()) {
            return Err(Error::InvalidSemiAxes { a: self.a, b: self.b });
        }
        Ok(())
    }

    pub fn is_round(&self) -> bool {
        self.a == self.b
    }

    pub fn direction(&self) -> Vec3 {
        self.line.direction()
    }

    pub fn point(&self) -> Vec3 {
        self.line.point()
    }

    /// Surface point at section angle `alpha`, relative to the axis.
    pub fn rho(&self, alpha: f64) -> Vec3 {
        let (na, nb) = section_frame(self);
        na * (self.a * alpha.cos()) + nb * (self.b * alpha.sin())
    }

    /// `d rho / d alpha`.
    pub fn rho_tangent(&self, alpha: f64) -> Vec3 {
        let (na, nb) = section_frame(self);
        na * (-self.a * alpha.sin()) + nb * (self.b * alpha.cos())
    }

    /// Whether `q` lies on the lateral surface within `tol`.
    ///
    /// Uses the implicit ellipse equation in the section frame, scaled so the
    /// tolerance is a length.
    pub fn surface_offset(&self, q: &Vec3) -> f64 {
        let (na, nb) = section_frame(self);
        let d = q - self.point();
        let u = d.dot(&na) / self.a;
        let v = d.dot(&nb) / self.b;
        (u.hypot(v) - 1.0) * self.b
    }

    /// Rebuild the cylinder after applying a rigid rotation then translation.
    pub fn transformed(&self, rot: &Matrix3<f64>, shift: &Vec3) -> Result<Self> {
        let (na, _) = section_frame(self);
        let dir = rot * self.direction();
        let point = rot * self.point() + shift;
        let line = OrientedLine::through(&point, &dir)?;
        let na_new = rot * na;
        let frame = spherical_rotation(line.t, line.p);
        let ex = frame * Vec3::x();
        let ey = frame * Vec3::y();
        let omega = na_new.dot(&ey).atan2(na_new.dot(&ex));
        Self::new(line, omega, self.a, self.b)
    }
}

/// `(N_a, N_b)`: unit major and minor section axes in world coordinates.
pub fn section_frame(cyl: &EllipticCylinder) -> (Vec3, Vec3) {
    let rot = spherical_rotation(cyl.line.t, cyl.line.p);
    let (so, co) = cyl.omega.sin_cos();
    (rot * Vec3::new(co, so, 0.0), rot * Vec3::new(-so, co, 0.0))
}

fn checked_cross(ni: &Vec3, nj: &Vec3) -> Result<Vec3> {
    let w = ni.cross(nj);
    if w.norm() <= PARALLEL_TOL {
        return Err(Error::DegenerateParallel { pair: None });
    }
    Ok(w)
}

/// Entry of the non-normalized chirality matrix for two oriented lines.
/// Symmetric in its arguments.
pub fn chirality_product(li: &OrientedLine, lj: &OrientedLine) -> Result<f64> {
    let w = checked_cross(&li.direction(), &lj.direction())?;
    Ok(CHIRALITY_SIGN * w.dot(&(li.point() - lj.point())))
}

/// Support half-width of the cross-section along `w`:
/// `max_alpha |w . rho(alpha)| = sqrt(a^2 (N_a.w)^2 + b^2 (N_b.w)^2)`.
pub fn half_width(cyl: &EllipticCylinder, w: &Vec3) -> f64 {
    let (na, nb) = section_frame(cyl);
    (cyl.a * na.dot(w)).hypot(cyl.b * nb.dot(w))
}

/// Section angle of the boundary point that maximizes `w . rho(alpha)`.
/// The opposite tangency point sits at `alpha + pi`.
pub fn contact_alpha(cyl: &EllipticCylinder, w: &Vec3) -> Result<f64> {
    let (na, nb) = section_frame(cyl);
    let ca = cyl.a * na.dot(w);
    let cb = cyl.b * nb.dot(w);
    let scale = w.norm() * cyl.a;
    if ca.abs() <= 1e-15 * scale && cb.abs() <= 1e-15 * scale {
        return Err(Error::IndeterminateContact);
    }
    Ok(cb.atan2(ca))
}

/// Signed separation of two cylinders along `w = n_i x n_j`: positive when
/// apart, zero when tangent, negative when overlapping.
pub fn tangency_gap(ci: &EllipticCylinder, cj: &EllipticCylinder) -> Result<f64> {
    let w = checked_cross(&ci.direction(), &cj.direction())?;
    let dist = w.dot(&(ci.point() - cj.point())).abs();
    Ok(dist - (half_width(ci, &w) + half_width(cj, &w)))
}

/// Tangency gap divided by `|n_i x n_j|`, i.e. in length units.
pub fn normalized_gap(ci: &EllipticCylinder, cj: &EllipticCylinder) -> Result<f64> {
    let w = checked_cross(&ci.direction(), &cj.direction())?;
    Ok(tangency_gap(ci, cj)? / w.norm())
}

/// `target * (hw_i + hw_j) - chirality_product(i, j)`; zero iff the pair is
/// tangent with chirality `target`.
pub fn signed_tangency_residual(ci: &EllipticCylinder, cj: &EllipticCylinder, target: i8) -> Result<f64> {
    let w = checked_cross(&ci.direction(), &cj.direction())?;
    let chi = CHIRALITY_SIGN * w.dot(&(ci.point() - cj.point()));
    Ok(f64::from(target) * (half_width(ci, &w) + half_width(cj, &w)) - chi)
}

/// The common point of two tangent cylinders.
///
/// Each cylinder contributes the boundary point facing the other one; the
/// axial offsets are fitted in least squares and the midpoint of the two
/// surface points is returned.
pub fn contact_point(ci: &EllipticCylinder, cj: &EllipticCylinder) -> Result<Vec3> {
    let (point, residual) = contact_fit(ci, cj)?;
    if residual > CONTACT_TOL {
        return Err(Error::NotTangent { residual });
    }
    Ok(point)
}

/// Contact point together with the least-squares mismatch of the two
/// surface points.
pub fn contact_fit(ci: &EllipticCylinder, cj: &EllipticCylinder) -> Result<(Vec3, f64)> {
    let ni = ci.direction();
    let nj = cj.direction();
    let w = checked_cross(&ni, &nj)?;
    let toward_j = if w.dot(&(cj.point() - ci.point())) >= 0.0 { w } else { -w };
    let ai = contact_alpha(ci, &toward_j)?;
    let aj = contact_alpha(cj, &(-toward_j))?;
    let base_i = ci.point() + ci.rho(ai);
    let base_j = cj.point() + cj.rho(aj);
    // base_i + s_i n_i = base_j + s_j n_j
    let a = Matrix3x2::from_columns(&[ni, -nj]);
    let rhs = base_j - base_i;
    let ata = a.transpose() * a;
    let s: Vector2<f64> = ata.try_inverse().ok_or(Error::DegenerateParallel { pair: None })? * (a.transpose() * rhs);
    let pi = base_i + ni * s[0];
    let pj = base_j + nj * s[1];
    Ok(((pi + pj) * 0.5, (pi - pj).norm()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub cylinders: Vec<EllipticCylinder>,
    #[serde(default)]
    pub label: String,
}

impl Configuration {
    pub fn new(cylinders: Vec<EllipticCylinder>, label: impl Into<String>) -> Result<Self> {
        if cylinders.len() < 2 {
            return Err(Error::TooFewCylinders(cylinders.len()));
        }
        for c in &cylinders {
            c.validate()?;
        }
        Ok(Self { cylinders, label: label.into() })
    }

    /// Round cylinders of common radius `r` on the given axes.
    pub fn from_lines(lines: &[OrientedLine], r: f64, label: impl Into<String>) -> Result<Self> {
        let cyls = lines.iter().map(|l| EllipticCylinder::round(*l, r)).collect::<Result<Vec<_>>>()?;
        Self::new(cyls, label)
    }

    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn lines(&self) -> Vec<OrientedLine> {
        self.cylinders.iter().map(|c| c.line).collect()
    }

    /// Pairs whose axes are parallel within `PARALLEL_TOL`.
    pub fn degenerate_pairs(&self) -> Vec<(usize, usize)> {
        let dirs: Vec<Vec3> = self.cylinders.iter().map(EllipticCylinder::direction).collect();
        let mut out = Vec::new();
        for i in 0..dirs.len() {
            for j in i + 1..dirs.len() {
                if dirs[i].cross(&dirs[j]).norm() <= PARALLEL_TOL {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn check_nondegenerate(&self) -> Result<()> {
        match self.degenerate_pairs().first() {
            Some(&(i, j)) => Err(Error::DegenerateParallel { pair: Some((i, j)) }),
            None => Ok(()),
        }
    }

    pub fn subset(&self, idx: &[usize]) -> Self {
        Self { cylinders: idx.iter().map(|&i| self.cylinders[i]).collect(), label: format!("{} {:?}", self.label, idx) }
    }

    /// Reverse the orientation of cylinder `k`.
    pub fn with_reversed(&self, k: usize) -> Self {
        let mut out = self.clone();
        let c = &mut out.cylinders[k];
        c.line = c.line.reversed();
        out
    }

    /// Largest semi-axis; the natural length scale of the configuration.
    pub fn scale(&self) -> f64 {
        self.cylinders.iter().map(|c| c.a).fold(0.0, f64::max)
    }

    pub fn transformed(&self, rot: &Matrix3<f64>, shift: &Vec3) -> Result<Self> {
        let cylinders = self.cylinders.iter().map(|c| c.transformed(rot, shift)).collect::<Result<_>>()?;
        Ok(Self { cylinders, label: self.label.clone() })
    }
}

/// Mirror image: every crossing point `v` goes to `-v`, orientations kept.
pub fn mirror(config: &Configuration) -> Configuration {
    let mut out = config.clone();
    for c in &mut out.cylinders {
        c.line.x = -c.line.x;
        c.line.y = -c.line.y;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn round(t: f64, p: f64, x: f64, y: f64, r: f64) -> EllipticCylinder {
        EllipticCylinder::round(OrientedLine::new(t, p, x, y), r).unwrap()
    }

    fn random_cyl(rng: &mut ChaCha8Rng) -> EllipticCylinder {
        let a = rng.random_range(0.1..3.0);
        let b = a * rng.random_range(0.01..1.0);
        EllipticCylinder::new(
            OrientedLine::new(
                rng.random_range(0.0..PI),
                rng.random_range(-PI..PI),
                rng.random_range(-3.0..3.0),
                rng.random_range(-3.0..3.0),
            ),
            rng.random_range(-PI..PI),
            a,
            b,
        )
        .unwrap()
    }

    #[test]
    fn direction_examples() {
        assert_abs_diff_eq!(direction_vector(0.0, 0.0), Vec3::z(), epsilon = 1e-15);
        assert_abs_diff_eq!(direction_vector(FRAC_PI_2, 0.0), Vec3::x(), epsilon = 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let n = direction_vector(rng.random_range(-7.0..7.0), rng.random_range(-7.0..7.0));
            assert!((n.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn section_frame_examples() {
        let c = EllipticCylinder::new(OrientedLine::new(0.0, 0.0, 0.0, 0.0), 0.0, 2.0, 1.0).unwrap();
        let (na, nb) = section_frame(&c);
        assert_abs_diff_eq!(na, Vec3::x(), epsilon = 1e-15);
        assert_abs_diff_eq!(nb, Vec3::y(), epsilon = 1e-15);
        let c = EllipticCylinder { omega: FRAC_PI_2, ..c };
        let (na, nb) = section_frame(&c);
        assert_abs_diff_eq!(na, Vec3::y(), epsilon = 1e-15);
        assert_abs_diff_eq!(nb, -Vec3::x(), epsilon = 1e-15);
    }

    #[test]
    fn section_frame_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let c = random_cyl(&mut rng);
            let (na, nb) = section_frame(&c);
            let n = c.direction();
            assert!(na.dot(&nb).abs() < 1e-12);
            assert!(na.dot(&n).abs() < 1e-12);
            assert!(nb.dot(&n).abs() < 1e-12);
            assert!((na.norm() - 1.0).abs() < 1e-12 && (nb.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chirality_product_examples() {
        let zi = OrientedLine::new(0.0, 0.0, 0.0, 0.0);
        let xj = OrientedLine::new(FRAC_PI_2, 0.0, 0.0, 1.0);
        // (n_i x n_j).(v_i - v_j) = (0,1,0).(0,-1,0) = -1, times the orientation constant.
        assert_abs_diff_eq!(chirality_product(&zi, &xj).unwrap(), -CHIRALITY_SIGN, epsilon = 1e-15);
        assert_abs_diff_eq!(chirality_product(&xj, &zi).unwrap(), -CHIRALITY_SIGN, epsilon = 1e-15);
        let through_origin = OrientedLine::new(FRAC_PI_2, 0.3, 0.0, 0.0);
        assert_abs_diff_eq!(chirality_product(&zi, &through_origin).unwrap(), 0.0, epsilon = 1e-15);
        let parallel = OrientedLine::new(0.0, 0.0, 1.0, 1.0);
        assert!(matches!(chirality_product(&zi, &parallel), Err(Error::DegenerateParallel { .. })));
    }

    #[test]
    fn half_width_examples() {
        let c = round(0.4, 1.1, 0.0, 0.0, 0.7);
        let n = c.direction();
        let w = n.cross(&Vec3::new(0.3, -1.0, 2.0));
        assert_abs_diff_eq!(half_width(&c, &w), 0.7 * w.norm(), epsilon = 1e-12);
        let e = EllipticCylinder::new(OrientedLine::new(0.0, 0.0, 0.0, 0.0), 0.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(half_width(&e, &Vec3::x()), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn half_width_matches_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..3 {
            let c = random_cyl(&mut rng);
            let w = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let (na, nb) = section_frame(&c);
            let (wa, wb) = (c.a * na.dot(&w), c.b * nb.dot(&w));
            let steps = 1_000_000;
            let coarse = (0..steps)
                .map(|k| {
                    let al = 2.0 * PI * k as f64 / steps as f64;
                    (wa * al.cos() + wb * al.sin()).abs()
                })
                .enumerate()
                .fold((0, 0.0), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
            // refine the best grid cell by golden-section search
            let h = 2.0 * PI / steps as f64;
            let f = |al: f64| (wa * al.cos() + wb * al.sin()).abs();
            let (mut lo, mut hi) = (coarse.0 as f64 * h - h, coarse.0 as f64 * h + h);
            let g = (5f64.sqrt() - 1.0) / 2.0;
            for _ in 0..100 {
                let m1 = hi - g * (hi - lo);
                let m2 = lo + g * (hi - lo);
                if f(m1) < f(m2) {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            let best = f(0.5 * (lo + hi));
            assert!((half_width(&c, &w) - best).abs() < 1e-9, "{} vs {}", half_width(&c, &w), best);
        }
    }

    #[test]
    fn contact_alpha_examples() {
        let circle = round(0.0, 0.0, 0.0, 0.0, 1.0);
        assert_abs_diff_eq!(contact_alpha(&circle, &Vec3::x()).unwrap(), 0.0, epsilon = 1e-15);
        let e = EllipticCylinder::new(OrientedLine::new(0.0, 0.0, 0.0, 0.0), 0.0, 2.0, 1.0).unwrap();
        assert_abs_diff_eq!(contact_alpha(&e, &Vec3::y()).unwrap(), FRAC_PI_2, epsilon = 1e-15);
        assert!(matches!(contact_alpha(&e, &Vec3::z()), Err(Error::IndeterminateContact)));
    }

    #[test]
    fn contact_alpha_is_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = 1e-6;
        for _ in 0..1000 {
            let c = random_cyl(&mut rng);
            let w = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let al = contact_alpha(&c, &w).unwrap();
            assert!(c.rho_tangent(al).dot(&w).abs() < 1e-10 * (1.0 + c.a));
            let fd = (c.rho(al + h) - c.rho(al - h)).dot(&w) / (2.0 * h);
            assert!(fd.abs() < 1e-8 * (1.0 + c.a), "fd {fd}");
            // maximizing branch
            assert!(c.rho(al).dot(&w) >= c.rho(al + PI).dot(&w));
        }
    }

    #[test]
    fn tangency_gap_examples() {
        let ci = round(0.0, 0.0, 0.0, 0.0, 0.5);
        let cj = round(FRAC_PI_2, 0.0, 0.0, 1.0, 0.5);
        assert_abs_diff_eq!(tangency_gap(&ci, &cj).unwrap(), 0.0, epsilon = 1e-15);
        let far = round(FRAC_PI_2, 0.0, 0.0, 2.0, 0.5);
        assert_abs_diff_eq!(tangency_gap(&ci, &far).unwrap(), 1.0, epsilon = 1e-15);
        let near = round(FRAC_PI_2, 0.0, 0.0, 0.5, 0.5);
        assert!(tangency_gap(&ci, &near).unwrap() < 0.0);
    }

    #[test]
    fn round_gap_reduces_to_radius_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let mut c = [random_cyl(&mut rng), random_cyl(&mut rng)];
            for x in &mut c {
                x.b = x.a;
            }
            let w = c[0].direction().cross(&c[1].direction());
            let expected = w.dot(&(c[0].point() - c[1].point())).abs() - (c[0].a + c[1].a) * w.norm();
            assert!((tangency_gap(&c[0], &c[1]).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn signed_residual_examples() {
        let ci = round(0.0, 0.0, 0.0, 0.0, 0.5);
        let cj = round(FRAC_PI_2, 0.0, 0.0, 1.0, 0.5);
        let chi = chirality_product(&ci.line, &cj.line).unwrap();
        let s = chi.signum() as i8;
        assert_abs_diff_eq!(signed_tangency_residual(&ci, &cj, s).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(signed_tangency_residual(&ci, &cj, -s).unwrap(), -2.0 * chi, epsilon = 1e-15);
    }

    #[test]
    fn contact_point_examples() {
        let ci = round(0.0, 0.0, 0.0, 0.0, 0.5);
        let cj = round(FRAC_PI_2, 0.0, 0.0, 1.0, 0.5);
        assert_abs_diff_eq!(contact_point(&ci, &cj).unwrap(), Vec3::new(0.0, 0.5, 0.0), epsilon = 1e-15);
        let far = round(FRAC_PI_2, 0.0, 0.0, 2.0, 0.5);
        assert!(matches!(contact_point(&ci, &far), Err(Error::NotTangent { .. })));
    }

    #[test]
    fn contact_point_on_both_surfaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..500 {
            let ci = random_cyl(&mut rng);
            let mut cj = random_cyl(&mut rng);
            // slide cj along w until tangent
            let w = ci.direction().cross(&cj.direction());
            let gap = tangency_gap(&ci, &cj).unwrap();
            let sign = w.dot(&(cj.point() - ci.point())).signum();
            let shift = -sign * gap / w.norm_squared() * w;
            let moved = cj.point() + shift;
            cj.line = OrientedLine::through(&moved, &cj.direction()).unwrap();
            assert!(tangency_gap(&ci, &cj).unwrap().abs() < 1e-9);
            let q = contact_point(&ci, &cj).unwrap();
            assert!(ci.surface_offset(&q).abs() < 1e-6, "{}", ci.surface_offset(&q));
            assert!(cj.surface_offset(&q).abs() < 1e-6, "{}", cj.surface_offset(&q));
        }
    }

    #[test]
    fn mirror_examples() {
        let cfg = Configuration::from_lines(
            &[OrientedLine::new(0.1, 0.2, 0.0, 0.0), OrientedLine::new(1.1, 2.2, 0.0, 0.0)],
            1.0,
            "origin",
        )
        .unwrap();
        assert_eq!(mirror(&cfg), cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let cyls: Vec<_> = (0..5).map(|_| random_cyl(&mut rng)).collect();
        let cfg = Configuration::new(cyls, "r").unwrap();
        assert_eq!(mirror(&mirror(&cfg)), cfg);
    }

    #[test]
    fn reversed_line_negates_direction() {
        let l = OrientedLine::new(0.7, -2.0, 1.0, 3.0);
        assert_abs_diff_eq!(l.reversed().direction(), -l.direction(), epsilon = 1e-15);
        assert_eq!(l.reversed().point(), l.point());
    }

    #[test]
    fn through_recovers_line() {
        let l = OrientedLine::new(0.7, -2.0, 1.0, 3.0);
        let q = l.at(2.5);
        let back = OrientedLine::through(&q, &l.direction()).unwrap();
        assert_abs_diff_eq!(back.point(), l.point(), epsilon = 1e-12);
        assert_abs_diff_eq!(back.direction(), l.direction(), epsilon = 1e-12);
    }

    #[test]
    fn invalid_axes_rejected() {
        let l = OrientedLine::new(0.0, 0.0, 0.0, 0.0);
        assert!(EllipticCylinder::new(l, 0.0, 1.0, 2.0).is_err());
        assert!(EllipticCylinder::new(l, 0.0, 1.0, 0.0).is_err());
        let swapped = EllipticCylinder::with_any_axes(l, 0.0, 1.0, 2.0).unwrap();
        let (na, _) = section_frame(&swapped);
        assert_abs_diff_eq!(na, Vec3::y(), epsilon = 1e-15);
    }

    #[test]
    fn degenerate_configuration_flagged() {
        let cfg = Configuration::from_lines(
            &[OrientedLine::new(0.3, 0.2, 0.0, 0.0), OrientedLine::new(0.3, 0.2, 1.0, 0.0)],
            1.0,
            "",
        )
        .unwrap();
        assert_eq!(cfg.degenerate_pairs(), vec![(0, 1)]);
        assert!(cfg.check_nondegenerate().is_err());
    }
}
