use signfocus::multiplier::{Multiplier, MultiplierConfig};
use signfocus_demo::{designs, edges, error_map, multiply, report};

#[test]
fn multiply_reports_exact_and_bound() {
    let p = multiply("proposed", 8, 117, -93).ok().unwrap();
    assert_eq!(p.exact, -10881);
    assert_eq!(p.stages, 3);
    assert_eq!(p.bound, 1473);
    assert!((p.approx - p.exact).unsigned_abs() <= p.bound);
    let e = multiply("exact", 8, -128, -128).ok().unwrap();
    assert_eq!(e.approx, 16384);
}

#[test]
fn error_map_matches_multiplier() {
    let map = error_map("ac3").ok().unwrap();
    assert_eq!(map.len(), 65536);
    let m = Multiplier::new(MultiplierConfig::preset("ac3".parse().unwrap(), 8).unwrap()).unwrap();
    assert_eq!(map[0], (m.multiply(-128, -128) - 16384) as i32);
    assert_eq!(map[255 * 256 + 255], (m.multiply(127, 127) - 16129) as i32);
    assert!(error_map("exact").ok().unwrap().iter().all(|&e| e == 0));
}

#[test]
fn every_design_has_a_report() {
    for d in designs() {
        let json = report(&d).ok().unwrap();
        assert!(json.contains("\"pairs\":65536"), "{d}");
    }
}

#[test]
fn edges_on_a_step() {
    let px: Vec<u8> = (0..16 * 16)
        .map(|i| if i % 16 < 8 { 40 } else { 200 })
        .collect();
    let exact = edges("exact", 16, 16, px.clone()).ok().unwrap();
    assert!(exact.psnr().is_infinite());
    assert_eq!(exact.pixels().len(), 256);
    assert!(edges("ac1", 16, 16, px).ok().unwrap().psnr().is_finite());
}
