//! Replays the checked-in fuzz corpus through the decoders.

use std::fs;
use std::path::PathBuf;

use gzsys::decomp::RegularDecompositionData;
use gzsys::io::{decode_cover_point, decode_decomposition, decode_gz_value, decode_matrix, decode_zd_element, to_json};
use gzsys::Tolerances;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, String::from_utf8_lossy(&fs::read(&p).unwrap()).into_owned())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "empty corpus for {target}");
    out
}

#[test]
fn matrix_seeds() {
    for (name, s) in seeds("decode_matrix") {
        let r = decode_matrix(&s);
        assert_eq!(r.is_ok(), name != "short_rows", "{name}");
        if let Ok(m) = r {
            assert_eq!(decode_matrix(&to_json(&m)).unwrap(), m);
        }
    }
}

#[test]
fn gz_value_seeds() {
    for (name, s) in seeds("decode_gz_value") {
        let c = decode_gz_value(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        let _ = gzsys::hessenberg::phi_inverse(&c);
    }
}

#[test]
fn decomposition_seeds() {
    for (name, s) in seeds("decode_decomposition") {
        let r = decode_decomposition(&s);
        assert_eq!(r.is_ok(), name != "unsorted", "{name}");
    }
}

#[test]
fn cover_point_seeds() {
    let tols = Tolerances::default();
    for (name, s) in seeds("decode_cover_point") {
        let r = decode_cover_point(&s, &tols);
        assert_eq!(r.is_ok(), name != "bad_levels", "{name}");
        if let Ok(p) = r {
            assert!(gzsys::cover::lift_span_check(&p, tols.rank).unwrap().passed);
        }
    }
}

#[test]
fn zd_element_seeds() {
    for (name, s) in seeds("decode_zd_element") {
        let k = decode_zd_element(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        let _ = k.inverse();
        let _ = k.compose(&k);
    }
}

#[test]
fn stratum_seeds() {
    for (name, s) in seeds("parse_stratum") {
        let r = s.parse::<RegularDecompositionData>();
        assert_eq!(r.is_ok(), name != "empty_level", "{name}");
        if let Ok(d) = r {
            assert_eq!(d.to_string(), s.trim());
        }
    }
}

#[test]
fn garbage_never_panics() {
    let tols = Tolerances::default();
    let inputs = ["", "{", "null", "[]", "{\"dim\":-1}", "{\"x\":1,\"z\":2}", "{\"levels\":[{\"s\":[[1e999,0]],\"t\":[]}]}", "0/0", "1/2/3/4/5/6/7/8/9"];
    for s in inputs {
        let _ = decode_matrix(s);
        let _ = decode_gz_value(s);
        let _ = decode_decomposition(s);
        let _ = decode_cover_point(s, &tols);
        let _ = decode_zd_element(s);
        let _ = s.parse::<RegularDecompositionData>();
    }
}

fn all_seeds() -> Vec<String> {
    ["decode_matrix", "decode_gz_value", "decode_decomposition", "decode_cover_point", "decode_zd_element", "parse_stratum"]
        .iter()
        .flat_map(|t| seeds(t).into_iter().map(|(_, s)| s))
        .collect()
}

fn feed(s: &str) {
    let tols = Tolerances::default();
    let _ = decode_matrix(s);
    if let Ok(c) = decode_gz_value(s) {
        if c.n() <= 8 {
            let _ = gzsys::hessenberg::phi_inverse(&c);
        }
    }
    let _ = decode_decomposition(s);
    if let Ok(p) = decode_cover_point(s, &tols) {
        let _ = gzsys::cover::lift_span_check(&p, tols.rank);
    }
    if let Ok(k) = decode_zd_element(s) {
        let _ = k.inverse();
    }
    let _ = s.parse::<RegularDecompositionData>();
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig {
        cases: 512,
        rng_seed: proptest::test_runner::RngSeed::Fixed(17),
        failure_persistence: None,
        ..Default::default()
    })]

    #[test]
    fn mutated_seeds_never_panic(pick: usize, edits in proptest::collection::vec((0usize..4096, 0u8..128, 0u8..3), 1..6)) {
        let seeds = all_seeds();
        let mut bytes = seeds[pick % seeds.len()].clone().into_bytes();
        for (pos, byte, op) in edits {
            let at = if bytes.is_empty() { 0 } else { pos % bytes.len() };
            match op {
                0 if !bytes.is_empty() => bytes[at] = byte,
                1 => bytes.insert(at, byte),
                _ if !bytes.is_empty() => {
                    bytes.remove(at);
                }
                _ => {}
            }
        }
        feed(&String::from_utf8_lossy(&bytes));
    }

    #[test]
    fn arbitrary_strings_never_panic(s in "\\PC{0,80}") {
        feed(&s);
    }
}
