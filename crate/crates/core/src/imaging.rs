//! Laplacian edge detection through a pluggable multiplier, plus PGM I/O and
//! PSNR scoring.
//!
//! Pixels are centred to `p - 128` before multiplication so that every
//! product fits a signed 8-bit operand pair. The centring offset contributes
//! `128 * sum(k)` per output pixel, which is added back exactly.
//!
//! Small kernel coefficients would leave most of each product inside the
//! truncated low columns of an approximate multiplier, so [`edge_detect`]
//! scales the kernel by `2^shift` (see [`Kernel3x3::max_shift`]) and shifts
//! the accumulated sum back down. Zero taps are skipped.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::with_threads;
use crate::multiplier::{Multiplier, MultiplierConfig};

/// Row-major 8-bit grayscale raster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Pgm("image must be at least 1x1".into()));
        }
        if pixels.len() != width * height {
            return Err(Error::Pgm(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }
}

/// Splits a PGM header into tokens, skipping `#` comments. Returns the tokens
/// and the offset just past the single whitespace byte after the last one.
fn header_tokens(bytes: &[u8], count: usize) -> Result<(Vec<String>, usize)> {
    let mut tokens = Vec::with_capacity(count);
    let mut pos = 0;
    while tokens.len() < count {
        while pos < bytes.len() {
            match bytes[pos] {
                b'#' => {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => pos += 1,
                _ => break,
            }
        }
        if pos >= bytes.len() {
            return Err(Error::Pgm("truncated header".into()));
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() && bytes[pos] != b'#' {
            pos += 1;
        }
        tokens.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::Pgm("missing whitespace after header".into()));
    }
    Ok((tokens, pos + 1))
}

fn header_number(token: &str, what: &str) -> Result<usize> {
    token
        .parse::<usize>()
        .map_err(|_| Error::Pgm(format!("bad {what} `{token}`")))
}

/// Parses a binary (P5) or ASCII (P2) PGM with maxval 255.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let (tokens, offset) = header_tokens(bytes, 4)?;
    let magic = tokens[0].as_str();
    if magic != "P5" && magic != "P2" {
        return Err(Error::Pgm(format!(
            "unsupported magic `{magic}` (expected P5 or P2)"
        )));
    }
    let width = header_number(&tokens[1], "width")?;
    let height = header_number(&tokens[2], "height")?;
    let maxval = header_number(&tokens[3], "maxval")?;
    if maxval != 255 {
        return Err(Error::Pgm(format!(
            "maxval {maxval} not supported (expected 255)"
        )));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pgm("image dimensions overflow".into()))?;
    let body = &bytes[offset..];
    let pixels = if magic == "P5" {
        if body.len() < count {
            return Err(Error::Pgm(format!(
                "truncated payload: expected {count} bytes, got {}",
                body.len()
            )));
        }
        body[..count].to_vec()
    } else {
        let text =
            std::str::from_utf8(body).map_err(|_| Error::Pgm("non-ASCII P2 payload".into()))?;
        let values = text
            .split_ascii_whitespace()
            .take(count)
            .map(|t| {
                t.parse::<u8>()
                    .map_err(|_| Error::Pgm(format!("bad pixel value `{t}`")))
            })
            .collect::<Result<Vec<u8>>>()?;
        if values.len() < count {
            return Err(Error::Pgm(format!(
                "truncated payload: expected {count} values, got {}",
                values.len()
            )));
        }
        values
    };
    GrayImage::new(width, height, pixels)
}

/// Serializes as binary P5.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.pixels);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Kernel3x3(pub [[i64; 3]; 3]);

impl Kernel3x3 {
    /// 4-neighbour Laplacian.
    pub fn laplacian() -> Self {
        Self([[0, -1, 0], [-1, 4, -1], [0, -1, 0]])
    }

    pub fn identity() -> Self {
        Self([[0, 0, 0], [0, 1, 0], [0, 0, 0]])
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().flatten().sum()
    }

    /// Largest `shift` such that every coefficient times `2^shift` still fits
    /// a signed `width`-bit operand.
    pub fn max_shift(&self, width: u32) -> u32 {
        let hi = (1i64 << (width - 1)) - 1;
        let peak = self.0.iter().flatten().map(|k| k.abs()).max().unwrap_or(0);
        if peak == 0 {
            return 0;
        }
        let mut shift = 0;
        while (peak << (shift + 1)) <= hi {
            shift += 1;
        }
        shift
    }

    /// Checks every coefficient fits a signed `width`-bit operand.
    pub fn check_width(&self, width: u32) -> Result<()> {
        let (lo, hi) = (-(1i64 << (width - 1)), (1i64 << (width - 1)) - 1);
        match self.0.iter().flatten().find(|&&k| k < lo || k > hi) {
            Some(&k) => Err(Error::OperandRange { value: k, width }),
            None => Ok(()),
        }
    }
}

const CENTRE: i64 = 128;

/// Zero-padded 3x3 convolution. `mul` receives a centred pixel in
/// `[-128, 127]` and a kernel coefficient.
pub fn convolve3x3<F>(img: &GrayImage, k: &Kernel3x3, mul: F) -> GrayImage
where
    F: Fn(i64, i64) -> i64 + Sync,
{
    convolve3x3_scaled(img, k, 0, mul)
}

/// As [`convolve3x3`], but `mul` receives coefficients times `2^shift` and
/// the accumulated sum is rounded back down by `shift` bits.
pub fn convolve3x3_scaled<F>(img: &GrayImage, k: &Kernel3x3, shift: u32, mul: F) -> GrayImage
where
    F: Fn(i64, i64) -> i64 + Sync,
{
    let (w, h) = (img.width, img.height);
    let offset = (CENTRE * k.sum()) << shift;
    let round = if shift == 0 { 0 } else { 1i64 << (shift - 1) };
    let rows: Vec<Vec<u8>> = (0..h)
        .into_par_iter()
        .map(|y| {
            (0..w)
                .map(|x| {
                    let mut acc: i64 = offset;
                    for (dy, krow) in k.0.iter().enumerate() {
                        for (dx, &coef) in krow.iter().enumerate() {
                            if coef == 0 {
                                continue;
                            }
                            let (sx, sy) = (x + dx, y + dy);
                            // Padding pixels are 0, i.e. -128 once centred.
                            let p = if sx == 0 || sy == 0 || sx > w || sy > h {
                                0
                            } else {
                                i64::from(img.get(sx - 1, sy - 1))
                            };
                            acc += mul(p - CENTRE, coef << shift);
                        }
                    }
                    ((acc + round) >> shift).clamp(0, 255) as u8
                })
                .collect()
        })
        .collect();
    GrayImage {
        width: w,
        height: h,
        pixels: rows.concat(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Psnr {
    Infinite,
    Db(f64),
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Infinite => f.write_str("INF"),
            Psnr::Db(db) => write!(f, "{db:.2}"),
        }
    }
}

pub fn psnr(reference: &GrayImage, test: &GrayImage) -> Result<Psnr> {
    if (reference.width, reference.height) != (test.width, test.height) {
        return Err(Error::Dimensions(
            reference.width,
            reference.height,
            test.width,
            test.height,
        ));
    }
    let sse: u64 = reference
        .pixels
        .iter()
        .zip(&test.pixels)
        .map(|(&a, &b)| {
            let d = u64::from(a.abs_diff(b));
            d * d
        })
        .sum();
    if sse == 0 {
        return Ok(Psnr::Infinite);
    }
    let mse = sse as f64 / reference.pixels.len() as f64;
    Ok(Psnr::Db(10.0 * (255.0f64 * 255.0 / mse).log10()))
}

/// Laplacian edge map through `cfg`'s multiplier and its PSNR against the
/// exact multiplier's map.
pub fn edge_detect(
    img: &GrayImage,
    cfg: &MultiplierConfig,
    threads: Option<usize>,
) -> Result<(GrayImage, Psnr)> {
    let k = Kernel3x3::laplacian();
    k.check_width(cfg.width)?;
    if cfg.width < 8 {
        return Err(Error::Config(format!(
            "edge detection needs width 8 or more to hold centred pixels, got {}",
            cfg.width
        )));
    }
    let shift = k.max_shift(cfg.width);
    let approx = Multiplier::new(*cfg)?;
    let exact = Multiplier::new(MultiplierConfig::exact(cfg.width)?)?;
    with_threads(threads, || {
        let edges = convolve3x3_scaled(img, &k, shift, |p, c| approx.multiply(p, c));
        let reference = convolve3x3_scaled(img, &k, shift, |p, c| exact.multiply(p, c));
        let score = psnr(&reference, &edges)?;
        Ok((edges, score))
    })
}
