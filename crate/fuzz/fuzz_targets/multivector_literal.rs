#![no_main]

use gacf::{compile_frame, format_mv, parse_mv, FrameSpec};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 512 {
        return;
    }
    let frame = compile_frame(&FrameSpec::euclidean(4)).unwrap();
    let Ok(x) = parse_mv(text, &frame) else { return };
    if x.iter().all(|t| t.coef.is_finite()) {
        let back = parse_mv(&format_mv(&x), &frame).expect("canonical text parses");
        assert_eq!(back, x);
    }
});
