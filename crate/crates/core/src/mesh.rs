//! Triangle meshes of truncated cylinders in Wavefront OBJ form.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::geometry::Configuration;

pub const MIN_SEGMENTS: usize = 3;

/// Side surface of every cylinder, cut to `length` centred on the foot of
/// the perpendicular from the origin to its axis, with the cross-section
/// sampled at `segments` angles. Each cylinder is its own `g` group.
pub fn to_obj(config: &Configuration, length: f64, segments: usize) -> Result<String> {
    if segments < MIN_SEGMENTS {
        return Err(Error::InvalidArgument(format!("segments must be at least {MIN_SEGMENTS}, got {segments}")));
    }
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidArgument(format!("length must be positive, got {length}")));
    }
    let mut out = String::new();
    writeln!(out, "# {}", config.label).unwrap();
    let mut base = 1;
    for (i, cyl) in config.cylinders.iter().enumerate() {
        writeln!(out, "g cylinder_{i}").unwrap();
        let n = cyl.direction();
        let v = cyl.point();
        let centre = v - n * n.dot(&v);
        for s in [-0.5, 0.5] {
            for k in 0..segments {
                let alpha = std::f64::consts::TAU * k as f64 / segments as f64;
                let q = centre + n * (s * length) + cyl.rho(alpha);
                writeln!(out, "v {:.9} {:.9} {:.9}", q.x, q.y, q.z).unwrap();
            }
        }
        for k in 0..segments {
            let (a0, a1) = (base + k, base + (k + 1) % segments);
            let (b0, b1) = (a0 + segments, a1 + segments);
            writeln!(out, "f {a0} {a1} {b1}").unwrap();
            writeln!(out, "f {a0} {b1} {b0}").unwrap();
        }
        base += 2 * segments;
    }
    Ok(out)
}
