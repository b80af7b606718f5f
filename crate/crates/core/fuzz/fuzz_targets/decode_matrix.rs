#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(m) = gzsys::io::decode_matrix(data) {
        let back = gzsys::io::decode_matrix(&gzsys::io::to_json(&m)).expect("encoded matrix decodes");
        assert_eq!(back, m);
    }
});
