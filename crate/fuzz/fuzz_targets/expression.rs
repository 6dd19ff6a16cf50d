#![no_main]

use std::sync::{Arc, OnceLock};

use gacf::{compile_frame, eval, parse_expression, Frame, FrameSpec, Matrix};
use libfuzzer_sys::fuzz_target;

fn frames() -> &'static [Arc<Frame>] {
    static F: OnceLock<Vec<Arc<Frame>>> = OnceLock::new();
    F.get_or_init(|| {
        let swap = Matrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        [FrameSpec::euclidean(3), FrameSpec::diagonal(&[1.0, -1.0, 0.0]), FrameSpec::matrix(swap)]
            .iter()
            .map(|s| compile_frame(s).unwrap())
            .collect()
    })
}

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 512 {
        return;
    }
    let Ok(expr) = parse_expression(text) else { return };
    let printed = expr.to_string();
    let again = parse_expression(&printed).expect("printed expression parses");
    assert_eq!(again, expr, "{printed}");
    for f in frames() {
        let _ = eval(&expr, f);
    }
});
