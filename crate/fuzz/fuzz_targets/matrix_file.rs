#![no_main]

use gacf::parse_matrix_file;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(m) = parse_matrix_file(text) else { return };
    assert!(m.rows() >= 1 && m.cols() >= 1);
    if m.is_square() {
        let _ = m.determinant();
        let _ = m.inverse();
    }
});
