use crate::error::{Error, Result};
use crate::grid::{Quantity, ResponseMap};

/// One dispersion point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    /// Field (T).
    pub b: f64,
    /// Frequency (Hz).
    pub f: f64,
    pub weight: f64,
}

/// Dispersion points with weights normalized to mean 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakList {
    points: Vec<Peak>,
    pub source: String,
}

impl PeakList {
    pub fn new(points: Vec<Peak>, source: impl Into<String>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if !(p.b > 0.0 && p.f > 0.0 && p.weight > 0.0)
                || !(p.b.is_finite() && p.f.is_finite() && p.weight.is_finite())
            {
                return Err(Error::param(
                    "peaks",
                    format!("point {i} needs B > 0, f > 0, weight > 0: {p:?}"),
                ));
            }
        }
        let mut points = points;
        if !points.is_empty() {
            let mean = points.iter().map(|p| p.weight).sum::<f64>() / points.len() as f64;
            // already normalized lists are left untouched so re-reading a file is exact
            if (mean - 1.0).abs() > 1e-12 {
                for p in &mut points {
                    p.weight /= mean;
                }
            }
        }
        Ok(Self {
            points,
            source: source.into(),
        })
    }

    pub fn points(&self) -> &[Peak] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Vertex offset (in samples, within ±½) of the parabola through three
/// equally spaced points.
pub fn parabolic_offset(left: f64, mid: f64, right: f64) -> f64 {
    let denom = left - 2.0 * mid + right;
    if denom == 0.0 {
        0.0
    } else {
        (0.5 * (left - right) / denom).clamp(-0.5, 0.5)
    }
}

/// Prominence of the local minimum at `i`: height above it of the lower of the
/// two highest points reached before the signal drops below it on each side.
fn dip_prominence(row: &[f64], i: usize) -> f64 {
    let v = row[i];
    let mut left = v;
    for &x in row[..i].iter().rev() {
        if x < v {
            break;
        }
        left = left.max(x);
    }
    let mut right = v;
    for &x in &row[i + 1..] {
        if x < v {
            break;
        }
        right = right.max(x);
    }
    left.min(right) - v
}

/// Local minima per B row with depth 1 − T ≥ `threshold` and prominence ≥
/// `min_prominence`, refined by 3-point parabolic interpolation. The two
/// deepest per row are kept; weight = depth.
pub fn extract_peaks(map: &ResponseMap, threshold: f64, min_prominence: f64) -> Result<PeakList> {
    if map.quantity != Quantity::Transmission {
        return Err(Error::param("map", "peak extraction needs a transmission map"));
    }
    if let Some(v) = map.grid.values().iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::param("map", format!("transmission value {v} outside [0, 1]")));
    }
    let b_axis = map.b_axis();
    let f_axis = map.f_axis();
    let df = f_axis.step();
    let mut points = Vec::new();
    for (ib, row) in map.grid.rows().enumerate() {
        let b = b_axis.sample(ib);
        if b <= 0.0 {
            continue;
        }
        let mut found: Vec<(f64, f64)> = Vec::new();
        for i in 1..row.len().saturating_sub(1) {
            if !(row[i] < row[i - 1] && row[i] <= row[i + 1]) {
                continue;
            }
            let depth = 1.0 - row[i];
            if depth < threshold || dip_prominence(row, i) < min_prominence {
                continue;
            }
            let f = f_axis.sample(i) + parabolic_offset(row[i - 1], row[i], row[i + 1]) * df;
            found.push((f, depth));
        }
        found.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.total_cmp(&b.0)));
        found.truncate(2);
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        points.extend(found.into_iter().map(|(f, depth)| Peak { b, f, weight: depth }));
    }
    PeakList::new(points, "extract_peaks")
}
