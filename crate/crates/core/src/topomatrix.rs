//! The characteristic matrices of a line configuration: normalized and raw
//! chirality, the ring matrix, and spirality.

use std::fmt;
use std::ops::Deref;

use itertools::Itertools;
use nalgebra::{DMatrix, Vector2};

use crate::error::{Error, Result};
use crate::geometry::{chirality_product, Configuration, Vec3};
use crate::invariants::max_rings;
use crate::matrix::IntegerMatrix;

/// Raw chirality entries below this magnitude mean the axes intersect.
pub const ZERO_CHIRALITY_TOL: f64 = 1e-12;

/// Tolerance for ring-matrix projections: parallel projected lines, the
/// viewpoint landing on a projected line, and concurrent projected triples.
pub const PROJECTION_TOL: f64 = 1e-9;

/// Symmetric, zero diagonal, off-diagonal entries in `{+1, -1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SeidelMatrix(IntegerMatrix);

impl SeidelMatrix {
    pub fn new(m: IntegerMatrix) -> Result<Self> {
        let n = m.order();
        for i in 0..n {
            if m.get(i, i) != 0 {
                return Err(Error::NotSeidel(format!("diagonal entry ({i},{i}) is {}", m.get(i, i))));
            }
            for j in 0..n {
                if i != j && m.get(i, j).abs() != 1 {
                    return Err(Error::NotSeidel(format!("entry ({i},{j}) is {}", m.get(i, j))));
                }
                if m.get(i, j) != m.get(j, i) {
                    return Err(Error::NotSeidel(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(IntegerMatrix::from_rows(rows)?)
    }

    /// The all-`+1` off-diagonal matrix (`J - I`).
    pub fn complete(n: usize) -> Self {
        Self(IntegerMatrix::from_fn(n, |i, j| i64::from(i != j)))
    }

    pub fn from_fn(n: usize, mut sign: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = IntegerMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                let v = if sign(i, j) { 1 } else { -1 };
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        Self(m)
    }

    pub fn as_matrix(&self) -> &IntegerMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> IntegerMatrix {
        self.0
    }

    /// `-P`: the chirality matrix of the mirror configuration.
    pub fn mirrored(&self) -> Self {
        Self(-&self.0)
    }

    /// `D P D` for a diagonal sign vector `d`.
    pub fn switched(&self, d: &[i64]) -> Self {
        Self(IntegerMatrix::from_fn(self.order(), |i, j| d[i] * self.0.get(i, j) * d[j]))
    }

    pub fn submatrix(&self, idx: &[usize]) -> Self {
        Self(self.0.submatrix(idx))
    }

    /// Simultaneous row/column permutation: entry `(i, j)` of the result is
    /// entry `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.submatrix(perm)
    }
}

impl Deref for SeidelMatrix {
    type Target = IntegerMatrix;
    fn deref(&self) -> &IntegerMatrix {
        &self.0
    }
}

impl fmt::Debug for SeidelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Seidel{:?}", self.0)
    }
}

impl fmt::Display for SeidelMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Non-negative integers with zero diagonal; every row sum is a multiple of
/// three (three entries per enclosing triangle).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix(IntegerMatrix);

impl RingMatrix {
    pub fn new(m: IntegerMatrix) -> Result<Self> {
        let n = m.order();
        for i in 0..n {
            if m.get(i, i) != 0 {
                return Err(Error::NotRing(format!("diagonal entry ({i},{i}) is {}", m.get(i, i))));
            }
            if let Some(j) = (0..n).find(|&j| m.get(i, j) < 0) {
                return Err(Error::NotRing(format!("entry ({i},{j}) is negative")));
            }
            let s = m.row_sum(i);
            if s % 3 != 0 {
                return Err(Error::NotRing(format!("row {i} sums to {s}, not a multiple of 3")));
            }
            if n >= 3 && s / 3 > max_rings(n) as i64 {
                return Err(Error::NotRing(format!("row {i} has {} rings, more than {}", s / 3, max_rings(n))));
            }
        }
        Ok(Self(m))
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::new(IntegerMatrix::from_rows(rows)?)
    }

    /// Wrap without validation; for algebraic checks on matrices that no
    /// line configuration can produce.
    pub fn new_unchecked(m: IntegerMatrix) -> Self {
        Self(m)
    }

    pub fn as_matrix(&self) -> &IntegerMatrix {
        &self.0
    }

    /// Number of rings (enclosing triangles) around each line.
    pub fn rings_per_line(&self) -> Vec<u32> {
        (0..self.order()).map(|i| (self.0.row_sum(i) / 3) as u32).collect()
    }

    /// Lines with a nonzero row, i.e. encaged by at least one triangle.
    pub fn entangled_lines(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.0.row_sum(i) > 0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.rows().all(|r| r.iter().all(|&v| v == 0))
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(self.0.submatrix(perm))
    }
}

impl Deref for RingMatrix {
    type Target = IntegerMatrix;
    fn deref(&self) -> &IntegerMatrix {
        &self.0
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring{:?}", self.0)
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Orientation-independent `±1` matrix `S_ij = -P_ij sign(n_i . n_j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpiralityMatrix(IntegerMatrix);

impl SpiralityMatrix {
    pub fn as_matrix(&self) -> &IntegerMatrix {
        &self.0
    }
}

impl Deref for SpiralityMatrix {
    type Target = IntegerMatrix;
    fn deref(&self) -> &IntegerMatrix {
        &self.0
    }
}

impl fmt::Debug for SpiralityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Spirality{:?}", self.0)
    }
}

impl fmt::Display for SpiralityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Raw chirality products `(n_i x n_j).(v_i - v_j)` (with the orientation
/// constant applied); symmetric with zero diagonal.
pub fn chirality_raw(config: &Configuration) -> Result<DMatrix<f64>> {
    let n = config.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = chirality_product(&config.cylinders[i].line, &config.cylinders[j].line).map_err(|e| e.at(i, j))?;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    Ok(m)
}

pub fn chirality_matrix(config: &Configuration) -> Result<SeidelMatrix> {
    let raw = chirality_raw(config)?;
    let n = config.len();
    let mut m = IntegerMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = raw[(i, j)];
            if v.abs() < ZERO_CHIRALITY_TOL {
                return Err(Error::ZeroChirality { pair: Some((i, j)) });
            }
            let s = if v > 0.0 { 1 } else { -1 };
            m.set(i, j, s);
            m.set(j, i, s);
        }
    }
    SeidelMatrix::new(m)
}

/// A line seen along the viewpoint axis: a point and a unit direction in the
/// projection plane.
#[derive(Clone, Copy)]
struct ProjectedLine {
    q: Vector2<f64>,
    d: Vector2<f64>,
}

impl ProjectedLine {
    /// Signed distance of `pt` from the line.
    fn side(&self, pt: &Vector2<f64>) -> f64 {
        let r = pt - self.q;
        self.d.x * r.y - self.d.y * r.x
    }

    fn intersect(&self, other: &Self) -> Vector2<f64> {
        // q1 + s d1 = q2 + u d2
        let den = self.d.x * other.d.y - self.d.y * other.d.x;
        let r = other.q - self.q;
        let s = (r.x * other.d.y - r.y * other.d.x) / den;
        self.q + self.d * s
    }
}

/// Orthonormal basis of the plane orthogonal to `n`.
fn plane_basis(n: &Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = n.cross(&helper).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// Row `k` of the ring matrix: for each other line `i`, the number of
/// triangles with side `i` that strictly contain the projection of line `k`
/// when viewed along line `k`.
pub fn ring_row(config: &Configuration, k: usize) -> Result<Vec<i64>> {
    let n = config.len();
    let nk = config.cylinders[k].direction();
    let vk = config.cylinders[k].point();
    let (e1, e2) = plane_basis(&nk);

    let mut proj: Vec<Option<ProjectedLine>> = vec![None; n];
    for (i, c) in config.cylinders.iter().enumerate() {
        if i == k {
            continue;
        }
        let q = c.point() - vk;
        let d = Vector2::new(c.direction().dot(&e1), c.direction().dot(&e2));
        let len = d.norm();
        if len <= PROJECTION_TOL {
            return Err(Error::DegenerateProjection {
                viewpoint: k,
                lines: vec![i],
                detail: "line parallel to the viewpoint axis",
            });
        }
        let pl = ProjectedLine { q: Vector2::new(q.dot(&e1), q.dot(&e2)), d: d / len };
        if pl.side(&Vector2::zeros()).abs() <= PROJECTION_TOL {
            return Err(Error::DegenerateProjection {
                viewpoint: k,
                lines: vec![i],
                detail: "viewpoint lies on a projected line",
            });
        }
        proj[i] = Some(pl);
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != k).collect();
    for (&i, &j) in others.iter().tuple_combinations() {
        let (a, b) = (proj[i].unwrap(), proj[j].unwrap());
        if (a.d.x * b.d.y - a.d.y * b.d.x).abs() <= PROJECTION_TOL {
            return Err(Error::DegenerateProjection {
                viewpoint: k,
                lines: vec![i, j],
                detail: "projected lines are parallel",
            });
        }
    }

    let origin = Vector2::zeros();
    let mut row = vec![0i64; n];
    for (&i, &j, &l) in others.iter().tuple_combinations() {
        let tri = [proj[i].unwrap(), proj[j].unwrap(), proj[l].unwrap()];
        let heights: Vec<(f64, f64)> = (0..3)
            .map(|s| {
                let opposite = tri[(s + 1) % 3].intersect(&tri[(s + 2) % 3]);
                (tri[s].side(&origin), tri[s].side(&opposite))
            })
            .collect();
        // concurrent projections bound no area and so contain nothing
        if heights.iter().any(|h| h.1.abs() <= PROJECTION_TOL) {
            continue;
        }
        let inside = heights.iter().all(|h| h.0 * h.1 > 0.0);
        if inside {
            row[i] += 1;
            row[j] += 1;
            row[l] += 1;
        }
    }
    Ok(row)
}

pub fn ring_matrix(config: &Configuration) -> Result<RingMatrix> {
    config.check_nondegenerate()?;
    let n = config.len();
    let rows = (0..n).map(|k| ring_row(config, k)).collect::<Result<Vec<_>>>()?;
    RingMatrix::from_rows(&rows)
}

pub fn spirality_matrix(config: &Configuration) -> Result<SpiralityMatrix> {
    let p = chirality_matrix(config)?;
    let n = config.len();
    let dirs: Vec<Vec3> = config.cylinders.iter().map(|c| c.direction()).collect();
    let mut m = IntegerMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let dot = dirs[i].dot(&dirs[j]);
            if dot.abs() < ZERO_CHIRALITY_TOL {
                return Err(Error::OrthogonalPair { pair: Some((i, j)) });
            }
            let s = -p.get(i, j) * if dot > 0.0 { 1 } else { -1 };
            m.set(i, j, s);
            m.set(j, i, s);
        }
    }
    Ok(SpiralityMatrix(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{mirror, OrientedLine};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn random_lines(n: usize, rng: &mut ChaCha8Rng) -> Configuration {
        let lines: Vec<_> = (0..n)
            .map(|_| {
                OrientedLine::new(
                    rng.random_range(0.0f64..1.0).acos(),
                    rng.random_range(0.0..2.0 * PI),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                )
            })
            .collect();
        Configuration::from_lines(&lines, 1.0, "random").unwrap()
    }

    #[test]
    fn seidel_validation() {
        assert!(SeidelMatrix::from_rows(&[[0, 1], [1, 0]]).is_ok());
        assert!(SeidelMatrix::from_rows(&[[0, 1], [-1, 0]]).is_err());
        assert!(SeidelMatrix::from_rows(&[[1, 1], [1, 0]]).is_err());
        assert!(SeidelMatrix::from_rows(&[[0, 2], [2, 0]]).is_err());
    }

    #[test]
    fn ring_validation() {
        assert!(RingMatrix::from_rows(&[[0, 1, 1, 1], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]).is_ok());
        assert!(RingMatrix::from_rows(&[[0, 1, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]).is_err());
        // two rings around a line of a 4-cross exceed the maximum of one
        assert!(RingMatrix::from_rows(&[[0, 2, 2, 2], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]).is_err());
    }

    #[test]
    fn two_skew_lines() {
        let cfg = Configuration::from_lines(
            &[OrientedLine::new(0.0, 0.0, 0.0, 0.0), OrientedLine::new(FRAC_PI_2, 0.0, 0.0, 1.0)],
            0.5,
            "pair",
        )
        .unwrap();
        let p = chirality_matrix(&cfg).unwrap();
        assert_eq!(p.get(0, 1).abs(), 1);
        assert_eq!(p.get(0, 1), p.get(1, 0));
        let r = ring_matrix(&cfg).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn intersecting_pair_is_zero_chirality() {
        let cfg = Configuration::from_lines(
            &[OrientedLine::new(0.0, 0.0, 0.0, 0.0), OrientedLine::new(FRAC_PI_2, 0.4, 0.0, 0.0)],
            0.5,
            "",
        )
        .unwrap();
        assert_eq!(chirality_raw(&cfg).unwrap()[(0, 1)], 0.0);
        assert!(matches!(chirality_matrix(&cfg), Err(Error::ZeroChirality { pair: Some((0, 1)) })));
    }

    #[test]
    fn single_enclosing_triangle() {
        // Line 0 is the z axis; lines 1..3 are horizontal at heights 1, 2, 3
        // and their projections bound a triangle around the origin.
        let mk = |h: f64, phi: f64| {
            let foot = Vec3::new(phi.cos(), phi.sin(), h);
            let dir = Vec3::new(-phi.sin(), phi.cos(), 0.3);
            OrientedLine::through(&foot, &dir).unwrap()
        };
        let lines =
            [OrientedLine::new(0.0, 0.0, 0.0, 0.0), mk(1.0, 0.0), mk(2.0, 2.0 * PI / 3.0), mk(3.0, 4.0 * PI / 3.0)];
        let cfg = Configuration::from_lines(&lines, 0.1, "").unwrap();
        let r = ring_matrix(&cfg).unwrap();
        assert_eq!(r.row(0), &[0, 1, 1, 1]);
        for k in 1..4 {
            assert_eq!(r.row_sum(k), 0);
        }
    }

    #[test]
    fn viewpoint_on_projected_line_is_degenerate() {
        let lines = [
            OrientedLine::new(0.0, 0.0, 0.0, 0.0),
            OrientedLine::new(1.0, 0.0, 0.0, 0.0),
            OrientedLine::new(1.0, 2.0, 1.0, 0.0),
            OrientedLine::new(1.0, 4.0, 0.0, 1.0),
        ];
        let cfg = Configuration::from_lines(&lines, 0.1, "").unwrap();
        assert!(matches!(ring_matrix(&cfg), Err(Error::DegenerateProjection { viewpoint: 0, .. })));
    }

    #[test]
    fn concurrent_projections_enclose_nothing() {
        // three lines passing over the vertical line through (1, 0)
        let mut lines = vec![OrientedLine::new(0.0, 0.0, 0.0, 0.0)];
        for (a, h) in [(0.3f64, -1.0), (1.5, 0.5), (2.4, 2.0)] {
            let dir = Vec3::new(a.cos(), a.sin(), 0.4);
            lines.push(OrientedLine::through(&Vec3::new(1.0, 0.0, h), &dir).unwrap());
        }
        let cfg = Configuration::from_lines(&lines, 0.1, "").unwrap();
        assert_eq!(ring_row(&cfg, 0).unwrap(), vec![0, 0, 0, 0]);
    }

    #[test]
    fn random_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let cfg = random_lines(6, &mut rng);
            let p = chirality_matrix(&cfg).unwrap();
            assert!(p.is_symmetric());
            let r = ring_matrix(&cfg).unwrap();
            for k in 0..6 {
                assert_eq!(r.row_sum(k) % 3, 0);
            }
            let m = mirror(&cfg);
            assert_eq!(chirality_matrix(&m).unwrap(), p.mirrored());
            assert_eq!(ring_matrix(&m).unwrap(), r);
        }
    }

    #[test]
    fn reversing_a_line_switches_p_and_keeps_r_and_s() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..50 {
            let cfg = random_lines(5, &mut rng);
            let k = rng.random_range(0..5);
            let flipped = cfg.with_reversed(k);
            let mut d = vec![1; 5];
            d[k] = -1;
            assert_eq!(chirality_matrix(&flipped).unwrap(), chirality_matrix(&cfg).unwrap().switched(&d));
            assert_eq!(ring_matrix(&flipped).unwrap(), ring_matrix(&cfg).unwrap());
            assert_eq!(spirality_matrix(&flipped).unwrap(), spirality_matrix(&cfg).unwrap());
        }
    }

    #[test]
    fn spirality_reference_panels() {
        // Lower line along +x through the origin, upper line one unit above,
        // turned clockwise (seen from +z) and oriented at an obtuse angle:
        // chirality +1 and spirality +1. Its mirror image reads -1 for both.
        let lower = OrientedLine::through(&Vec3::zeros(), &Vec3::new(1.0, 0.0, 0.2)).unwrap();
        let upper =
            OrientedLine::through(&Vec3::new(0.0, 0.0, 1.0), &-Vec3::new(0.5f64.cos(), -(0.5f64.sin()), -0.2)).unwrap();
        let left = Configuration::from_lines(&[lower, upper], 0.1, "left").unwrap();
        assert_eq!(chirality_matrix(&left).unwrap().get(0, 1), 1);
        assert_eq!(spirality_matrix(&left).unwrap().get(0, 1), 1);
        let right = mirror(&left);
        assert_eq!(chirality_matrix(&right).unwrap().get(0, 1), -1);
        assert_eq!(spirality_matrix(&right).unwrap().get(0, 1), -1);
        // orientation of either line does not matter
        assert_eq!(spirality_matrix(&left.with_reversed(1)).unwrap().get(0, 1), 1);
        let ortho = Configuration::from_lines(
            &[OrientedLine::new(0.0, 0.0, 0.0, 0.0), OrientedLine::new(FRAC_PI_2, 0.0, 0.0, 1.0)],
            0.1,
            "",
        )
        .unwrap();
        assert!(matches!(spirality_matrix(&ortho), Err(Error::OrthogonalPair { .. })));
    }

    #[test]
    fn ring_matrix_is_basis_independent() {
        // rotate the whole configuration: rows must not change
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let cfg = random_lines(6, &mut rng);
            let axis = nalgebra::Unit::new_normalize(Vec3::new(rng.random(), rng.random(), rng.random()));
            let rot = nalgebra::Rotation3::from_axis_angle(&axis, rng.random_range(0.0..PI)).into_inner();
            let moved = cfg.transformed(&rot, &Vec3::new(0.3, -0.2, 0.7)).unwrap();
            assert_eq!(ring_matrix(&moved).unwrap(), ring_matrix(&cfg).unwrap());
            assert_eq!(chirality_matrix(&moved).unwrap(), chirality_matrix(&cfg).unwrap());
        }
    }
}
