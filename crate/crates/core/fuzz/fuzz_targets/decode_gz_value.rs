#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(c) = gzsys::io::decode_gz_value(data) {
        if c.n() <= 8 {
            let _ = gzsys::hessenberg::phi_inverse(&c);
        }
    }
});
