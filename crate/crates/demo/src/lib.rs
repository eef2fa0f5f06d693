//! Browser bindings for the multiplier explorer page in `www/`.

use signfocus::imaging::{edge_detect, GrayImage, Psnr};
use signfocus::metrics::exhaustive_report;
use signfocus::multiplier::{static_error_bound, Multiplier, MultiplierConfig, Variant};
use wasm_bindgen::prelude::*;

fn config(design: &str, width: u32) -> Result<MultiplierConfig, JsError> {
    let v: Variant = design.parse().map_err(|e| JsError::new(&format!("{e}")))?;
    MultiplierConfig::preset(v, width).map_err(|e| JsError::new(&e.to_string()))
}

fn build(design: &str, width: u32) -> Result<Multiplier, JsError> {
    Multiplier::new(config(design, width)?).map_err(|e| JsError::new(&e.to_string()))
}

/// Names accepted by every `design` argument.
#[wasm_bindgen]
pub fn designs() -> Vec<String> {
    Variant::PRESETS
        .iter()
        .map(|v| v.name().to_string())
        .collect()
}

#[wasm_bindgen]
pub struct Product {
    pub approx: i64,
    pub exact: i64,
    pub stages: usize,
    pub bound: u64,
}

/// One product through `design` at `width` bits.
#[wasm_bindgen]
pub fn multiply(design: &str, width: u32, a: i64, b: i64) -> Result<Product, JsError> {
    let m = build(design, width)?;
    let (lo, hi) = (-(1i64 << (width - 1)), (1i64 << (width - 1)) - 1);
    if !(lo..=hi).contains(&a) || !(lo..=hi).contains(&b) {
        return Err(JsError::new(&format!("operands must lie in {lo}..={hi}")));
    }
    Ok(Product {
        approx: m.multiply(a, b),
        exact: a * b,
        stages: m.trace().stage_count(),
        bound: static_error_bound(m.config()),
    })
}

/// Signed error `approx - exact` for every 8-bit operand pair, row-major by `a`.
#[wasm_bindgen]
pub fn error_map(design: &str) -> Result<Vec<i32>, JsError> {
    let m = build(design, 8)?;
    let mut out = Vec::with_capacity(1 << 16);
    for a in -128..128i64 {
        for b in -128..128i64 {
            out.push((m.multiply(a, b) - a * b) as i32);
        }
    }
    Ok(out)
}

/// Exhaustive 8-bit error metrics as JSON.
#[wasm_bindgen]
pub fn report(design: &str) -> Result<String, JsError> {
    let r = exhaustive_report(&config(design, 8)?).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(r.to_json())
}

#[wasm_bindgen]
pub struct Edges {
    pixels: Vec<u8>,
    psnr: f64,
}

#[wasm_bindgen]
impl Edges {
    #[wasm_bindgen(getter)]
    pub fn pixels(&self) -> Vec<u8> {
        self.pixels.clone()
    }

    /// Infinity when the map matches the exact one.
    #[wasm_bindgen(getter)]
    pub fn psnr(&self) -> f64 {
        self.psnr
    }
}

/// Laplacian edge map of a grayscale image through `design`.
#[wasm_bindgen]
pub fn edges(design: &str, width: usize, height: usize, pixels: Vec<u8>) -> Result<Edges, JsError> {
    let img = GrayImage::new(width, height, pixels).map_err(|e| JsError::new(&e.to_string()))?;
    let (out, score) =
        edge_detect(&img, &config(design, 8)?, None).map_err(|e| JsError::new(&e.to_string()))?;
    Ok(Edges {
        pixels: out.pixels().to_vec(),
        psnr: match score {
            Psnr::Infinite => f64::INFINITY,
            Psnr::Db(d) => d,
        },
    })
}
