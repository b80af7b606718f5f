#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(d) = gzsys::io::decode_decomposition(data) {
        let text = d.to_string();
        assert_eq!(text.parse::<gzsys::decomp::RegularDecompositionData>().ok(), Some(d));
    }
});
