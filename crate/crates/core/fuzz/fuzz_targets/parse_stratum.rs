#![no_main]
use gzsys::decomp::RegularDecompositionData;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(d) = data.parse::<RegularDecompositionData>() {
        assert_eq!(d.to_string().parse::<RegularDecompositionData>().ok(), Some(d));
    }
});
