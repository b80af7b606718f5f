#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let tols = gzsys::Tolerances::default();
    if let Ok(p) = gzsys::io::decode_cover_point(data, &tols) {
        let _ = gzsys::cover::lift_span_check(&p, tols.rank);
    }
});
