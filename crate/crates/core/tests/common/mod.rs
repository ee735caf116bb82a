#![allow(dead_code)]

use std::path::PathBuf;

use borcherds::{parse_vvform, VVForm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_json(name: &str) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn fixture(name: &str) -> VVForm {
    parse_vvform(&fixture_json(name)).unwrap()
}

/// Random integral input on hermitian-d3 with `d_min` in {-1, -2/3, -1/3}.
///
/// The (0,0) component has integral exponents, the (1,0) and (-1,0)
/// components share exponents in 2/3 + Z.  Each support has at most six
/// exponents, all at most `PRECISION`.
pub fn synthetic(seed: u64) -> VVForm {
    parse_vvform(&synthetic_json(seed)).unwrap()
}

pub const PRECISION: i64 = 120;

pub fn synthetic_json(seed: u64) -> serde_json::Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (d_num, d_den) = [(-1, 1), (-2, 3), (-1, 3)][rng.gen_range(0..3)];
    // exponents e > d_min; zero-class e = n, unit classes e = n + 2/3
    let zero_lo = 0;
    let unit_lo = if d_num * 3 < -d_den { -1 } else { 0 };
    let terms = |lo: i64, frac: &str, rng: &mut ChaCha8Rng| -> Vec<serde_json::Value> {
        let n = rng.gen_range(0..=6);
        let mut exps: Vec<i64> = (0..n).map(|_| lo + rng.gen_range(0..6)).collect();
        exps.sort();
        exps.dedup();
        exps.into_iter()
            .map(|e| {
                let coeff = if rng.gen_bool(0.5) { 1 } else { -1 };
                let exp = if frac.is_empty() { e.to_string() } else { format!("{}", 3 * e + 2) + frac };
                serde_json::json!({"exp": exp, "coeff": coeff})
            })
            .collect()
    };
    let t0 = terms(zero_lo, "", &mut rng);
    let t1 = terms(unit_lo, "/3", &mut rng);
    serde_json::json!({
        "D": -3,
        "weight": "-1",
        "d_min": format!("{d_num}/{d_den}"),
        "precision": PRECISION.to_string(),
        "components": [
            {"key": [0, 0], "terms": t0},
            {"key": [1, 0], "terms": t1.clone()},
            {"key": [-1, 0], "terms": t1},
        ]
    })
}
