//! Random n-crosses, rotationally symmetric constructions and the census of
//! 6-crosses by invariant class.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{knottability_filter, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{mirror, Configuration, EllipticCylinder, OrientedLine, Vec3, CHIRALITY_SIGN, PARALLEL_TOL};
use crate::invariants::{det_i64, invariant, invariant_n};
use crate::topomatrix::{chirality_matrix, ring_matrix, ZERO_CHIRALITY_TOL};

/// Nominal radius given to sampled lines; only the axes matter for the
/// topology.
pub const SAMPLE_RADIUS: f64 = 0.05;
const MAX_DRAW_ATTEMPTS: usize = 100;
/// Invariants are keyed at this resolution.
pub const KEY_SCALE: f64 = 1e5;

/// Raw draw: per line `(cos t, phi, x, y)`, direction uniform on the
/// sphere folded onto the upper hemisphere.
fn draw_raw(n: usize, rng: &mut ChaCha8Rng, h: f64) -> Vec<[f64; 4]> {
    (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(-1.0f64..1.0).abs();
            let p = rng.random_range(0.0..std::f64::consts::TAU);
            [z, p, rng.random_range(-h..h), rng.random_range(-h..h)]
        })
        .collect()
}

fn to_lines(raw: &[[f64; 4]]) -> Vec<OrientedLine> {
    raw.iter().map(|&[z, p, x, y]| OrientedLine::new(z.acos(), p, x, y)).collect()
}

fn draw_lines(n: usize, rng: &mut ChaCha8Rng, h: f64) -> Vec<OrientedLine> {
    to_lines(&draw_raw(n, rng, h))
}

/// `n` random lines: directions uniform on the upper hemisphere, crossing
/// points uniform in `[-h, h]^2`. Draws with parallel or intersecting axes
/// are redrawn.
pub fn random_config(n: usize, seed: u64, h: f64) -> Result<Configuration> {
    if n < 2 {
        return Err(Error::TooFewCylinders(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAW_ATTEMPTS {
        let cfg = Configuration::from_lines(&draw_lines(n, &mut rng, h), SAMPLE_RADIUS, "random")?;
        if chirality_matrix(&cfg).is_ok() {
            return Ok(Configuration { label: format!("random n={n} seed={seed}"), ..cfg });
        }
    }
    Err(Error::SamplingFailed(MAX_DRAW_ATTEMPTS))
}

/// Seed of draw `k` in a census run.
fn draw_seed(seed: u64, k: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusParams {
    pub n: usize,
    /// Number of accepted samples.
    pub trials: usize,
    pub det_target: i64,
    pub seed: u64,
    pub half_side: f64,
}

impl Default for CensusParams {
    fn default() -> Self {
        Self { n: 6, trials: 50_000, det_target: -125, seed: 1, half_side: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub invariant: f64,
    pub invariant_n: f64,
    pub invariant_n_mirror: f64,
    pub count: usize,
    pub knottable: bool,
    pub verdict: Verdict,
    pub exemplar: Configuration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub params: CensusParams,
    /// Random draws made, accepted or not.
    pub draws: usize,
    pub accepted: usize,
    /// Accepted draws skipped because the ring projection or `I - R` was
    /// degenerate.
    pub skipped: usize,
    /// Most frequent class first.
    pub records: Vec<CensusRecord>,
}

struct Sample {
    key: (i64, i64, i64),
    values: (f64, f64, f64),
    config: Configuration,
}

fn key(v: f64) -> i64 {
    (v * KEY_SCALE).round() as i64
}

enum Outcome {
    Rejected,
    Skipped,
    Accepted(Box<Sample>),
}

/// Determinant of the chirality sign matrix of the lines `(dir, x, y)` by
/// floating-point elimination, or `None` for a degenerate pair. Exact for
/// the small orders sampled here once rounded.
fn quick_det(lines: &[(Vec3, f64, f64)]) -> Option<f64> {
    let n = lines.len();
    let mut a = vec![0.0f64; n * n];
    for (i, (di, xi, yi)) in lines.iter().enumerate() {
        for (j, (dj, xj, yj)) in lines.iter().enumerate().skip(i + 1) {
            let w = di.cross(dj);
            let v = CHIRALITY_SIGN * (w.x * (xi - xj) + w.y * (yi - yj));
            if w.norm() < PARALLEL_TOL || v.abs() < ZERO_CHIRALITY_TOL {
                return None;
            }
            a[i * n + j] = v.signum();
            a[j * n + i] = v.signum();
        }
    }
    let mut det = 1.0;
    for k in 0..n {
        let piv = (k..n).max_by(|&x, &y| a[x * n + k].abs().total_cmp(&a[y * n + k].abs()))?;
        if a[piv * n + k] == 0.0 {
            return Some(0.0);
        }
        if piv != k {
            for c in 0..n {
                a.swap(k * n + c, piv * n + c);
            }
            det = -det;
        }
        det *= a[k * n + k];
        for r in k + 1..n {
            let f = a[r * n + k] / a[k * n + k];
            for c in k..n {
                a[r * n + c] -= f * a[k * n + c];
            }
        }
    }
    Some(det)
}

fn examine(params: &CensusParams, k: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(draw_seed(params.seed, k));
    let raw = draw_raw(params.n, &mut rng, params.half_side);
    let quick: Vec<(Vec3, f64, f64)> = raw
        .iter()
        .map(|&[z, p, x, y]| {
            let st = (1.0 - z * z).max(0.0).sqrt();
            let (sp, cp) = p.sin_cos();
            (Vec3::new(st * cp, st * sp, z), x, y)
        })
        .collect();
    match quick_det(&quick) {
        Some(d) if (d.abs() - params.det_target.abs() as f64).abs() < 0.5 => {}
        _ => return Outcome::Rejected,
    }
    let Ok(cfg) = Configuration::from_lines(&to_lines(&raw), SAMPLE_RADIUS, format!("census draw {k}")) else {
        return Outcome::Rejected;
    };
    let Ok(p) = chirality_matrix(&cfg) else {
        return Outcome::Rejected;
    };
    let det = det_i64(&p);
    let (p, cfg) = if det == params.det_target {
        (p, cfg)
    } else if det == -params.det_target {
        (p.mirrored(), mirror(&cfg))
    } else {
        return Outcome::Rejected;
    };
    let Ok(r) = ring_matrix(&cfg) else {
        return Outcome::Skipped;
    };
    let vals = (|| Ok::<_, Error>((invariant(&p, &r)?, invariant_n(&p, &r)?, invariant_n(&p.mirrored(), &r)?)))();
    match vals {
        Ok(values) => {
            let (a, b) = (key(values.1), key(values.2));
            Outcome::Accepted(Box::new(Sample { key: (key(values.0), a.min(b), a.max(b)), values, config: cfg }))
        }
        Err(_) => Outcome::Skipped,
    }
}

struct Class {
    values: (f64, f64, f64),
    count: usize,
    exemplar: Configuration,
}

/// Sample until `trials` configurations with `det P = det_target` (mirrors
/// included) have been accepted, and group them by `invariant` and then
/// `invariant_n`, both rounded to five decimals. A configuration and its
/// mirror image form one class, reported with the values of whichever was
/// drawn first.
///
/// Draws are processed in index order in parallel chunks, so the result
/// depends only on the parameters. Knottability is evaluated once per class
/// on its first exemplar.
pub fn census_run(params: &CensusParams) -> Result<Census> {
    if params.n < 2 {
        return Err(Error::TooFewCylinders(params.n));
    }
    const CHUNK: u64 = 4096;
    let mut classes: BTreeMap<(i64, i64, i64), Class> = BTreeMap::new();
    let (mut draws, mut accepted, mut skipped) = (0usize, 0usize, 0usize);
    let mut next = 0u64;
    while accepted < params.trials {
        let outcomes: Vec<Outcome> = (next..next + CHUNK).into_par_iter().map(|k| examine(params, k)).collect();
        next += CHUNK;
        for o in outcomes {
            if accepted >= params.trials {
                break;
            }
            draws += 1;
            match o {
                Outcome::Rejected => {}
                Outcome::Skipped => skipped += 1,
                Outcome::Accepted(s) => {
                    accepted += 1;
                    classes.entry(s.key).and_modify(|c| c.count += 1).or_insert(Class {
                        values: s.values,
                        count: 1,
                        exemplar: s.config,
                    });
                }
            }
        }
        if draws > 0 && next > 1000 * (params.trials as u64 + 1) * CHUNK {
            return Err(Error::SamplingFailed(draws));
        }
    }
    let mut records = classes
        .into_values()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|c| {
            let verdict = knottability_filter(&c.exemplar)?;
            Ok(CensusRecord {
                invariant: c.values.0,
                invariant_n: c.values.1,
                invariant_n_mirror: c.values.2,
                count: c.count,
                knottable: verdict.is_possible(),
                verdict,
                exemplar: c.exemplar,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        b.count.cmp(&a.count).then(a.invariant.total_cmp(&b.invariant)).then(a.invariant_n.total_cmp(&b.invariant_n))
    });
    Ok(Census { params: params.clone(), draws, accepted, skipped, records })
}

impl Census {
    /// Tab-separated table: invariant, frequency, knottable flag, `invariant_n`,
    /// its mirror value and their sum.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("invariant\tcount\tknottable\tinvariant_n\tinvariant_n_mirror\tsum\n");
        for r in &self.records {
            out.push_str(&format!(
                "{:.5}\t{}\t{}\t{:.5}\t{:.5}\t{:.5}\n",
                r.invariant,
                r.count,
                u8::from(r.knottable),
                r.invariant_n,
                r.invariant_n_mirror,
                r.invariant_n + r.invariant_n_mirror
            ));
        }
        out
    }

    /// Distinct invariant values (rounded keys) in the table.
    pub fn invariant_values(&self) -> Vec<f64> {
        let mut keys: Vec<i64> = self.records.iter().map(|r| key(r.invariant)).collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter().map(|k| k as f64 / KEY_SCALE).collect()
    }

    /// Total count per rounded invariant, most frequent first.
    pub fn invariant_frequencies(&self) -> Vec<(f64, usize)> {
        let mut by: BTreeMap<i64, usize> = BTreeMap::new();
        for r in &self.records {
            *by.entry(key(r.invariant)).or_default() += r.count;
        }
        let mut v: Vec<(f64, usize)> = by.into_iter().map(|(k, c)| (k as f64 / KEY_SCALE, c)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.total_cmp(&b.0)));
        v
    }
}

/// One layer of a rotationally symmetric sandwich: `copies` lines tangent
/// to a horizontal circle of radius `radius` at height `height`, tilted by
/// `tilt` out of the horizontal plane, the first one at azimuth `phase`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wreath {
    pub radius: f64,
    pub height: f64,
    pub tilt: f64,
    pub phase: f64,
}

impl Wreath {
    fn line(&self, m: usize, copies: usize) -> Result<OrientedLine> {
        let phi = self.phase + std::f64::consts::TAU * m as f64 / copies as f64;
        let (s, c) = phi.sin_cos();
        let foot = Vec3::new(self.radius * c, self.radius * s, self.height);
        let dir = Vec3::new(-s * self.tilt.cos(), c * self.tilt.cos(), self.tilt.sin());
        OrientedLine::through(&foot, &dir)
    }
}

/// Two wreaths with a common vertical symmetry axis; lower-wreath lines get
/// the even indices, upper-wreath lines the odd ones, so that rotation by
/// one step maps line `i` to line `i + 2`.
pub fn two_wreaths(lower: Wreath, upper: Wreath, copies: usize, radius: f64, label: &str) -> Result<Configuration> {
    if !(lower.tilt.sin().abs() > 1e-6 && upper.tilt.sin().abs() > 1e-6) {
        return Err(Error::DegenerateParams("wreath tilt must be away from 0 and pi".into()));
    }
    let mut cyls = Vec::with_capacity(2 * copies);
    for m in 0..copies {
        for w in [&lower, &upper] {
            let line = w.line(m, copies)?;
            cyls.push(EllipticCylinder::round(line, radius)?);
        }
    }
    let cfg = Configuration::new(cyls, label)?;
    cfg.check_nondegenerate().map_err(|e| Error::DegenerateParams(e.to_string()))?;
    chirality_matrix(&cfg).map_err(|e| Error::DegenerateParams(e.to_string()))?;
    Ok(cfg)
}

/// C3-symmetric 6-cross of two triangular wreaths turning in opposite
/// senses, separated vertically by `gap`; `twist` is the azimuthal offset
/// of the upper wreath.
pub fn build_c3_sixcross(
    tilt_upper: f64,
    tilt_lower: f64,
    radius_upper: f64,
    radius_lower: f64,
    twist: f64,
    gap: f64,
) -> Result<Configuration> {
    let lower = Wreath { radius: radius_lower, height: -gap / 2.0, tilt: -tilt_lower, phase: 0.0 };
    let upper = Wreath { radius: radius_upper, height: gap / 2.0, tilt: tilt_upper, phase: twist };
    two_wreaths(lower, upper, 3, SAMPLE_RADIUS, "C3 6-cross")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C3Params {
    pub tilt_upper: f64,
    pub tilt_lower: f64,
    pub radius_upper: f64,
    pub radius_lower: f64,
    pub twist: f64,
    pub gap: f64,
}

impl C3Params {
    const fn new(p: [f64; 6]) -> Self {
        Self { tilt_upper: p[0], tilt_lower: p[1], radius_upper: p[2], radius_lower: p[3], twist: p[4], gap: p[5] }
    }

    pub fn build(&self) -> Result<Configuration> {
        build_c3_sixcross(self.tilt_upper, self.tilt_lower, self.radius_upper, self.radius_lower, self.twist, self.gap)
    }
}

/// Ring matrix with encaged lower wreath; the more frequent of the two
/// invariant 9.66667 classes.
pub const C3_KNOT_A: C3Params = C3Params::new([0.9, 0.7, 1.15, 1.0, 4.0, 1.5]);
/// Same wreaths as [`C3_KNOT_A`] with a different twist: the second 9.66667
/// class.
pub const C3_KNOT_B: C3Params = C3Params::new([0.9, 0.7, 1.15, 1.0, 5.1, 1.5]);
/// Every line inside one ring; invariant 5.89286.
pub const C3_ALL_RINGED: C3Params = C3Params::new([-0.15, -0.25, 0.55, 0.8, 1.45, 1.55]);

/// One setting per invariant class of C3-symmetric 6-crosses with
/// `det P = -125`, with its invariant to five decimals.
pub const C3_CLASSES: [(f64, C3Params); 8] = [
    (7.33333, C3Params::new([0.7, 0.05, 1.3, 0.65, 1.8, 0.5])),
    (10.2, C3Params::new([1.0, 0.65, 1.35, 0.25, 1.15, 0.15])),
    (9.66667, C3_KNOT_A),
    (9.66667, C3_KNOT_B),
    (5.89286, C3_ALL_RINGED),
    (11.68421, C3Params::new([1.05, 0.65, 0.85, 0.55, 2.15, 1.15])),
    (3.67925, C3Params::new([0.6, 0.65, 1.3, 0.85, 1.2, 0.8])),
    (5.21754, C3Params::new([0.15, 0.1, 1.55, 1.3, 5.1, 1.45])),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C4Params {
    pub tilt_upper: f64,
    pub tilt_lower: f64,
    pub radius_upper: f64,
    pub radius_lower: f64,
    pub twist: f64,
    pub gap: f64,
}

/// Setting whose four 6-subcrosses with `det P = -125` all have invariant
/// 9.66667.
pub const C4_SCHEME_A: C4Params =
    C4Params { tilt_upper: -0.6, tilt_lower: -0.6, radius_upper: 0.55, radius_lower: 1.6, twist: 1.25, gap: 1.1 };

/// C4-symmetric 8-cross of two square wreaths turning in opposite senses.
pub fn build_c4_eightcross(params: &C4Params) -> Result<Configuration> {
    let lower = Wreath { radius: params.radius_lower, height: -params.gap / 2.0, tilt: -params.tilt_lower, phase: 0.0 };
    let upper =
        Wreath { radius: params.radius_upper, height: params.gap / 2.0, tilt: params.tilt_upper, phase: params.twist };
    two_wreaths(lower, upper, 4, SAMPLE_RADIUS, "C4 8-cross")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{max_rings, q_matrix};
    use crate::matrix::IntegerMatrix;

    #[test]
    fn random_config_is_deterministic() {
        assert_eq!(random_config(6, 42, 1.0).unwrap(), random_config(6, 42, 1.0).unwrap());
        assert_ne!(random_config(6, 42, 1.0).unwrap(), random_config(6, 43, 1.0).unwrap());
        let two = random_config(2, 1, 1.0).unwrap();
        assert_eq!(two.len(), 2);
        assert!(random_config(1, 1, 1.0).is_err());
    }

    #[test]
    fn random_config_upper_hemisphere() {
        for seed in 0..50 {
            let c = random_config(5, seed, 2.0).unwrap();
            for cyl in &c.cylinders {
                assert!(cyl.direction().z >= 0.0);
                assert!(cyl.line.x.abs() <= 2.0 && cyl.line.y.abs() <= 2.0);
            }
        }
    }

    #[test]
    fn det_pm125_classes_occur() {
        let dets: Vec<i64> = (0..10_000)
            .into_par_iter()
            .map(|s| det_i64(&chirality_matrix(&random_config(6, s, 1.0).unwrap()).unwrap()))
            .collect();
        assert!(dets.contains(&-125));
        // a Seidel determinant is 1 - n modulo 4
        assert!(dets.iter().all(|d| d.rem_euclid(4) == 3));
    }

    #[test]
    fn quick_det_matches_exact() {
        for seed in 0..2000 {
            let cfg = random_config(7, seed, 1.0).unwrap();
            let exact = det_i64(&chirality_matrix(&cfg).unwrap());
            let lines: Vec<_> = cfg.lines().iter().map(|l| (l.direction(), l.x, l.y)).collect();
            assert_eq!(quick_det(&lines).unwrap().round() as i64, exact);
        }
    }

    #[test]
    fn small_census_records_are_consistent() {
        let params = CensusParams { trials: 300, seed: 7, ..CensusParams::default() };
        let c = census_run(&params).unwrap();
        assert_eq!(c.accepted, 300);
        assert_eq!(c.records.iter().map(|r| r.count).sum::<usize>(), 300);
        let trivial_q = IntegerMatrix::from_fn(6, |i, j| if i == j { 5 } else { 1 });
        for r in &c.records {
            let p = chirality_matrix(&r.exemplar).unwrap();
            assert_eq!(det_i64(&p), -125);
            assert_eq!(q_matrix(&p), trivial_q);
            let ring = ring_matrix(&r.exemplar).unwrap();
            assert!(ring.rings_per_line().iter().all(|&k| k as usize <= max_rings(6)));
        }
        assert_eq!(census_run(&params).unwrap(), c);
    }

    #[test]
    fn wreaths_are_symmetric() {
        let cfg = build_c3_sixcross(0.6, 0.5, 1.0, 1.2, 0.3, 0.8).unwrap();
        let rot = nalgebra::Rotation3::from_axis_angle(&Vec3::z_axis(), std::f64::consts::TAU / 3.0).into_inner();
        let turned = cfg.transformed(&rot, &Vec3::zeros()).unwrap();
        for i in 0..6 {
            let j = (i + 2) % 6;
            let (a, b) = (&turned.cylinders[i], &cfg.cylinders[j]);
            assert!((a.direction() - b.direction()).norm() < 1e-12);
            assert!((a.point() - b.point()).norm() < 1e-9);
        }
        assert!(build_c3_sixcross(0.0, 0.5, 1.0, 1.0, 0.0, 1.0).is_err());
    }

    fn classify(cfg: &Configuration) -> (i64, f64, f64, f64, IntegerMatrix) {
        let p = chirality_matrix(cfg).unwrap();
        let r = ring_matrix(cfg).unwrap();
        (
            det_i64(&p),
            invariant(&p, &r).unwrap(),
            invariant_n(&p, &r).unwrap(),
            invariant_n(&p.mirrored(), &r).unwrap(),
            r.as_matrix().clone(),
        )
    }

    #[test]
    fn c3_settings_reach_every_class() {
        for (value, params) in C3_CLASSES {
            let (det, inv, _, _, _) = classify(&params.build().unwrap());
            assert_eq!(det, -125);
            assert!((inv - value).abs() < 1e-5, "{params:?}: {inv} vs {value}");
        }
    }

    #[test]
    fn c3_knots_share_ring_matrix() {
        let r6a = crate::catalog::lookup("R6a").unwrap().matrix;
        let (_, _, na, ma, ra) = classify(&C3_KNOT_A.build().unwrap());
        let (_, _, nb, mb, rb) = classify(&C3_KNOT_B.build().unwrap());
        assert_eq!(ra, r6a);
        assert_eq!(rb, r6a);
        assert!((na + 0.32718).abs() < 1e-5 && (ma + 0.73902).abs() < 1e-5);
        assert!((nb + 0.51938).abs() < 1e-5 && (mb + 0.54683).abs() < 1e-5);
        assert!((na + ma + 1.06621).abs() < 1e-5 && (nb + mb + 1.06621).abs() < 1e-5);
        let (_, _, n, m, r) = classify(&C3_ALL_RINGED.build().unwrap());
        assert_eq!(r, crate::catalog::lookup("R6b").unwrap().matrix);
        assert!((n - m).abs() < 1e-12);
    }

    #[test]
    fn c4_scheme_a() {
        let cfg = build_c4_eightcross(&C4_SCHEME_A).unwrap();
        let (det, inv, _, _, r) = classify(&cfg);
        assert_eq!(det, 1625);
        assert_eq!(r, crate::catalog::lookup("R8").unwrap().matrix);
        assert!((inv - 23.304029304).abs() < 1e-6);
        let p = chirality_matrix(&cfg).unwrap();
        assert!((invariant(&p.mirrored(), &ring_matrix(&cfg).unwrap()).unwrap() - 25.7509157509).abs() < 1e-6);
        assert!(build_c4_eightcross(&C4Params { tilt_upper: 0.0, ..C4_SCHEME_A }).is_err());
    }
}
