//! Reading and writing polygons, seeds, configs and grey rasters.
//!
//! Polygons and seeds are YAML documents (`vertices: [[x, y], ...]`,
//! `seeds: [[x, y], ...]`). Rasters are portable graymaps (plain or binary,
//! 8 or 16 bit); other formats are read through the `image` crate.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::imaging::ScalarField;
use crate::pipeline::Config;
use crate::raster::LabelImage;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonFile {
    vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeedFile {
    seeds: Vec<[f64; 2]>,
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn points(raw: Vec<[f64; 2]>, path: &Path) -> Result<Vec<Point>> {
    if raw.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::parse(path, "coordinates must be finite"));
    }
    Ok(raw.into_iter().map(Point::from).collect())
}

pub fn read_polygon(path: &Path) -> Result<Vec<Point>> {
    let doc: PolygonFile = serde_yaml::from_str(&read_text(path)?).map_err(|e| Error::parse(path, e))?;
    points(doc.vertices, path)
}

pub fn read_seeds(path: &Path) -> Result<Vec<Point>> {
    let doc: SeedFile = serde_yaml::from_str(&read_text(path)?).map_err(|e| Error::parse(path, e))?;
    points(doc.seeds, path)
}

pub fn write_polygon(path: &Path, vertices: &[Point]) -> Result<()> {
    let doc = PolygonFile {
        vertices: vertices.iter().map(|p| p.to_array()).collect(),
    };
    let text = serde_yaml::to_string(&doc).map_err(|e| Error::parse(path, e))?;
    write_bytes(path, text.as_bytes())
}

pub fn write_seeds(path: &Path, seeds: &[Point]) -> Result<()> {
    let doc = SeedFile {
        seeds: seeds.iter().map(|p| p.to_array()).collect(),
    };
    let text = serde_yaml::to_string(&doc).map_err(|e| Error::parse(path, e))?;
    write_bytes(path, text.as_bytes())
}

/// Reads and validates a config; missing keys take their defaults.
pub fn read_config(path: &Path) -> Result<Config> {
    let text = read_text(path)?;
    let config: Config = if text.trim().is_empty() {
        Config::default()
    } else {
        serde_yaml::from_str(&text).map_err(|e| Error::parse(path, e))?
    };
    config.validate()?;
    Ok(config)
}

/// Single-channel raster of raw grey levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub max_value: u16,
    pub data: Vec<u16>,
}

impl GrayImage {
    pub fn intensity(&self) -> Result<ScalarField> {
        let raw: Vec<f64> = self.data.iter().map(|&v| f64::from(v)).collect();
        ScalarField::from_raw(self.width, self.height, &raw)
    }

    pub fn labels(&self) -> LabelImage {
        LabelImage {
            width: self.width,
            height: self.height,
            origin_x: 0,
            origin_y: 0,
            data: self.data.iter().map(|&v| u32::from(v)).collect(),
        }
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn number(&mut self) -> Option<u64> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).ok()?.parse().ok()
    }
}

/// Parses a plain (`P2`) or binary (`P5`) graymap.
pub fn parse_pgm(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let binary = match bytes.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err("not a portable graymap".into()),
    };
    let mut h = Header { bytes, pos: 2 };
    let width = h.number().ok_or("missing width")? as usize;
    let height = h.number().ok_or("missing height")? as usize;
    let max = h.number().ok_or("missing maximum value")?;
    if width == 0 || height == 0 {
        return Err("empty raster".into());
    }
    if max == 0 || max > 65535 {
        return Err(format!("maximum value {max} out of range"));
    }
    let n = width * height;
    let data: Vec<u16> = if binary {
        let start = h.pos + 1;
        let wide = max > 255;
        let need = if wide { 2 * n } else { n };
        let body = bytes
            .get(start..start + need)
            .ok_or_else(|| format!("expected {need} bytes of pixel data"))?;
        if wide {
            body.chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]])).collect()
        } else {
            body.iter().map(|&b| u16::from(b)).collect()
        }
    } else {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(h.number().ok_or("truncated pixel data")? as u16);
        }
        v
    };
    if data.iter().any(|&v| u64::from(v) > max) {
        return Err("pixel value above the declared maximum".into());
    }
    Ok(GrayImage {
        width,
        height,
        max_value: max as u16,
        data,
    })
}

/// Binary graymap bytes; 16-bit when `max_value` exceeds 255.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n{}\n", img.width, img.height, img.max_value).into_bytes();
    if img.max_value > 255 {
        for v in &img.data {
            out.extend_from_slice(&v.to_be_bytes());
        }
    } else {
        out.extend(img.data.iter().map(|&v| v as u8));
    }
    out
}

/// Reads a grey raster: graymaps natively, anything else via `image`.
pub fn read_gray(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"P2") || bytes.starts_with(b"P5") {
        return parse_pgm(&bytes).map_err(|m| Error::parse(path, m));
    }
    let decoded = image::load_from_memory(&bytes).map_err(|e| Error::parse(path, e))?;
    let sixteen = matches!(
        decoded.color(),
        image::ColorType::L16 | image::ColorType::La16 | image::ColorType::Rgb16 | image::ColorType::Rgba16
    );
    let (width, height) = (decoded.width() as usize, decoded.height() as usize);
    let (max_value, data) = if sixteen {
        (65535, decoded.into_luma16().into_raw())
    } else {
        (255, decoded.into_luma8().into_raw().into_iter().map(u16::from).collect())
    };
    Ok(GrayImage {
        width,
        height,
        max_value,
        data,
    })
}

pub fn write_gray8(path: &Path, width: usize, height: usize, data: &[u8]) -> Result<()> {
    let img = GrayImage {
        width,
        height,
        max_value: 255,
        data: data.iter().map(|&v| u16::from(v)).collect(),
    };
    write_bytes(path, &encode_pgm(&img))
}

pub fn read_labels(path: &Path) -> Result<LabelImage> {
    Ok(read_gray(path)?.labels())
}

/// Writes labels as a 16-bit graymap.
pub fn write_labels(path: &Path, labels: &LabelImage) -> Result<()> {
    let max = labels.data.iter().copied().max().unwrap_or(0);
    if max > u32::from(u16::MAX) {
        return Err(Error::ShapeMismatch(format!("label {max} does not fit 16 bits")));
    }
    let img = GrayImage {
        width: labels.width,
        height: labels.height,
        max_value: u16::MAX,
        data: labels.data.iter().map(|&v| v as u16).collect(),
    };
    write_bytes(path, &encode_pgm(&img))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_graymap_with_comments() {
        let g = parse_pgm(b"P2\n# a comment\n3 2\n# another\n10\n0 1 2\n3 4 10\n").unwrap();
        assert_eq!((g.width, g.height, g.max_value), (3, 2, 10));
        assert_eq!(g.data, vec![0, 1, 2, 3, 4, 10]);
    }

    #[test]
    fn binary_round_trips() {
        for max in [255u16, 65535] {
            let g = GrayImage {
                width: 3,
                height: 1,
                max_value: max,
                data: vec![0, 7, max],
            };
            assert_eq!(parse_pgm(&encode_pgm(&g)).unwrap(), g);
        }
    }

    #[test]
    fn malformed_graymaps() {
        assert!(parse_pgm(b"P6\n1 1\n255\n").is_err());
        assert!(parse_pgm(b"P5\n2 2\n255\n\x01").is_err());
        assert!(parse_pgm(b"P2\n1 1\n5\n9\n").is_err());
    }

    #[test]
    fn yaml_documents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("poly.yaml");
        let poly = vec![Point::new(0.5, 1.0), Point::new(3.0, 2.25)];
        write_polygon(&p, &poly).unwrap();
        assert_eq!(read_polygon(&p).unwrap(), poly);
        let s = dir.path().join("seeds.yaml");
        fs::write(&s, "seeds:\n  - [1, 2]\n  - [3.5, 4]\n").unwrap();
        assert_eq!(read_seeds(&s).unwrap(), vec![Point::new(1.0, 2.0), Point::new(3.5, 4.0)]);
        fs::write(&s, "points: []\n").unwrap();
        assert!(matches!(read_seeds(&s), Err(Error::Parse { .. })));
    }

    #[test]
    fn config_files() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.yaml");
        fs::write(&p, "R_max: 30\n").unwrap();
        assert_eq!(read_config(&p).unwrap().r_max, 30.0);
        fs::write(&p, "bogus: 1\n").unwrap();
        assert!(matches!(read_config(&p), Err(Error::Parse { .. })));
        fs::write(&p, "Theta_min: 200\n").unwrap();
        assert!(matches!(read_config(&p), Err(Error::Config(_))));
    }

    #[test]
    fn png_input() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("g.png");
        image::GrayImage::from_raw(2, 1, vec![10, 200]).unwrap().save(&p).unwrap();
        let g = read_gray(&p).unwrap();
        assert_eq!((g.max_value, g.data.clone()), (255, vec![10, 200]));
    }

    #[test]
    fn labels_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("l.pgm");
        let l = LabelImage::from_vec(2, 2, vec![0, 1, 300, 2]).unwrap();
        write_labels(&p, &l).unwrap();
        assert_eq!(read_labels(&p).unwrap(), l);
    }
}
