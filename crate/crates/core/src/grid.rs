//! Uniform axes and (B × f) value grids.

use crate::error::{Error, Result};

/// Uniform axis: sample_i = start + i·(stop − start)/(count − 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    start: f64,
    stop: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(format!("count must be >= 2, got {count}")));
        }
        if !(start.is_finite() && stop.is_finite()) || start >= stop {
            return Err(Error::InvalidGrid(format!(
                "need start < stop, got {start}..{stop}"
            )));
        }
        Ok(Self { start, stop, count })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn sample(&self, i: usize) -> f64 {
        debug_assert!(i < self.count);
        if i + 1 == self.count {
            return self.stop;
        }
        self.start + i as f64 * (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn samples(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(move |i| self.sample(i))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.samples().collect()
    }

    /// Index of the sample closest to `x` (clamped to the axis).
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.start) / self.step()).round();
        t.clamp(0.0, (self.count - 1) as f64) as usize
    }
}

/// Row-major (B-axis × f-axis) buffer: value(iB, if) = values[iB·count_f + if].
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    b_axis: Grid1D,
    f_axis: Grid1D,
    values: Vec<f64>,
}

impl Grid2D {
    /// Zero-filled grid.
    pub fn new(b_axis: Grid1D, f_axis: Grid1D) -> Self {
        Self {
            b_axis,
            f_axis,
            values: vec![0.0; b_axis.count() * f_axis.count()],
        }
    }

    pub fn from_values(b_axis: Grid1D, f_axis: Grid1D, values: Vec<f64>) -> Result<Self> {
        let expected = b_axis.count() * f_axis.count();
        if values.len() != expected {
            return Err(Error::CountMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self {
            b_axis,
            f_axis,
            values,
        })
    }

    pub fn b_axis(&self) -> &Grid1D {
        &self.b_axis
    }

    pub fn f_axis(&self) -> &Grid1D {
        &self.f_axis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, ib: usize, jf: usize) -> f64 {
        self.values[ib * self.f_axis.count() + jf]
    }

    /// All frequency samples at one field.
    pub fn row(&self, ib: usize) -> &[f64] {
        let n = self.f_axis.count();
        &self.values[ib * n..(ib + 1) * n]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.f_axis.count())
    }
}

/// What a map's values mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// Power transmission, dimensionless in [0, 1].
    Transmission,
    /// Δρ_xx per unit normalized irradiation power (Ω).
    Photoresponse,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::Transmission => "transmission",
            Quantity::Photoresponse => "photoresponse",
        }
    }

    pub fn units(&self) -> &'static str {
        match self {
            Quantity::Transmission => "dimensionless",
            Quantity::Photoresponse => "ohm per unit normalized power",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "transmission" => Some(Quantity::Transmission),
            "photoresponse" => Some(Quantity::Photoresponse),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMap {
    pub grid: Grid2D,
    pub quantity: Quantity,
}

impl ResponseMap {
    pub fn b_axis(&self) -> &Grid1D {
        self.grid.b_axis()
    }

    pub fn f_axis(&self) -> &Grid1D {
        self.grid.f_axis()
    }
}
