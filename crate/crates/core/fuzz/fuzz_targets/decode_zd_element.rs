#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(k) = gzsys::io::decode_zd_element(data) {
        let _ = k.inverse();
        let _ = k.compose(&k);
    }
});
