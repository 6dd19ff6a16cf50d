#![no_main]

use gacf::{classify_ipm, compile_frame, parse_frame_file};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = parse_frame_file(text) else { return };
    if spec.n > 6 {
        return;
    }
    if let Ok(frame) = compile_frame(&spec) {
        let _ = classify_ipm(frame.ipm());
    }
});
