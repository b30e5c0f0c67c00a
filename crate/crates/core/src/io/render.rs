use crate::error::{Error, Result};
use crate::grid::{Quantity, ResponseMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scaling {
    /// [v_min, v_max] of the data onto [0, 255].
    Linear,
    /// Symmetric [−a, a] with a = max|v|, so 0 lands on 128.
    Diverging,
}

impl Scaling {
    pub fn name(&self) -> &'static str {
        match self {
            Scaling::Linear => "linear",
            Scaling::Diverging => "diverging",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        match s {
            "linear" => Some(Scaling::Linear),
            "diverging" => Some(Scaling::Diverging),
            _ => None,
        }
    }
}

/// 8-bit grayscale image of a map. Row 0 is the highest field, column 0 the
/// lowest frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderedImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub v_min: f64,
    pub v_max: f64,
    pub scaling: Scaling,
}

fn to_pixel(v: f64, v_min: f64, v_max: f64, scaling: Scaling) -> u8 {
    let span = v_max - v_min;
    if !(span > 0.0) {
        return match scaling {
            Scaling::Linear => 0,
            Scaling::Diverging => 128,
        };
    }
    (255.0 * (v - v_min) / span).round().clamp(0.0, 255.0) as u8
}

pub fn render_map(map: &ResponseMap) -> RenderedImage {
    let scaling = match map.quantity {
        Quantity::Transmission => Scaling::Linear,
        Quantity::Photoresponse => Scaling::Diverging,
    };
    let values = map.grid.values();
    let (v_min, v_max) = match scaling {
        Scaling::Linear => values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v))),
        Scaling::Diverging => {
            let a = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            (-a, a)
        }
    };
    let (width, height) = (map.f_axis().count(), map.b_axis().count());
    let mut pixels = Vec::with_capacity(width * height);
    for row in map.grid.rows().rev() {
        pixels.extend(row.iter().map(|&v| to_pixel(v, v_min, v_max, scaling)));
    }
    RenderedImage {
        width,
        height,
        pixels,
        v_min,
        v_max,
        scaling,
    }
}

impl RenderedImage {
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    /// Text record of the value-to-pixel mapping.
    pub fn sidecar(&self) -> String {
        format!(
            "# render-v1\nwidth={}\nheight={}\nscaling={}\nv_min={:.16e}\nv_max={:.16e}\n\
             pixel=round(255*(v-v_min)/(v_max-v_min))\nrows=b_descending\ncolumns=f_ascending\n",
            self.width,
            self.height,
            self.scaling.name(),
            self.v_min,
            self.v_max
        )
    }
}

fn pgm_error(reason: &str) -> Error {
    Error::MalformedRow {
        line: 1,
        reason: format!("PGM: {reason}"),
    }
}

/// Read back a P5 image and its sidecar.
pub fn parse_pgm(pgm: &[u8], sidecar: &str) -> Result<RenderedImage> {
    // P5 header: magic, width, height, maxval separated by single whitespace runs
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < pgm.len() && pgm[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < pgm.len() && !pgm[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(pgm_error("truncated header"));
        }
        fields.push(std::str::from_utf8(&pgm[start..pos]).map_err(|_| pgm_error("non-ASCII header"))?);
    }
    if fields[0] != "P5" {
        return Err(Error::WrongHeader {
            expected: "P5",
            found: fields[0].to_string(),
        });
    }
    let dim = |s: &str| s.parse::<usize>().map_err(|_| pgm_error("bad dimension"));
    let (width, height) = (dim(fields[1])?, dim(fields[2])?);
    if fields[3] != "255" {
        return Err(pgm_error("maxval must be 255"));
    }
    let pixels = pgm.get(pos + 1..).ok_or_else(|| pgm_error("missing raster"))?.to_vec();
    if pixels.len() != width * height {
        return Err(Error::CountMismatch {
            expected: width * height,
            actual: pixels.len(),
        });
    }

    let mut lines = super::numbered_lines(sidecar);
    super::expect_header(lines.next(), "# render-v1")?;
    let (mut scaling, mut v_min, mut v_max) = (None, None, None);
    for (n, l) in lines {
        let Some((k, v)) = l.split_once('=') else {
            return Err(Error::MalformedRow { line: n, reason: "expected key=value".into() });
        };
        match k {
            "width" if dim(v)? != width => return Err(pgm_error("sidecar width differs")),
            "height" if dim(v)? != height => return Err(pgm_error("sidecar height differs")),
            "scaling" => {
                scaling = Some(Scaling::from_name(v).ok_or_else(|| Error::MalformedRow {
                    line: n,
                    reason: format!("unknown scaling `{v}`"),
                })?)
            }
            "v_min" => v_min = Some(super::parse_f64(v, n, "v_min")?),
            "v_max" => v_max = Some(super::parse_f64(v, n, "v_max")?),
            _ => {}
        }
    }
    Ok(RenderedImage {
        width,
        height,
        pixels,
        v_min: v_min.ok_or(Error::MissingMetadata("v_min"))?,
        v_max: v_max.ok_or(Error::MissingMetadata("v_max"))?,
        scaling: scaling.ok_or(Error::MissingMetadata("scaling"))?,
    })
}
