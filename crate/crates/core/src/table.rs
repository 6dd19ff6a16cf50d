//! Product tables as CSV.

use std::io::Write;
use std::sync::Arc;

use crate::blades::{BladeId, ProductKind};
use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::multivector::Multivector;
use crate::products;

/// Writes the table of `F_r ⋆ F_s` for every pair of basis blades, in
/// ascending id order. The header row and column hold blade names; a cell
/// holds the canonical text of the product, or nothing when it is zero.
/// Returns the number of rows and columns written, headers included.
pub fn emit_table<W: Write>(frame: &Arc<Frame>, kind: ProductKind, out: W) -> Result<(usize, usize)> {
    if kind == ProductKind::Rp && !frame.is_non_degenerate() {
        return Err(Error::domain("regressive product table needs a non-degenerate frame"));
    }
    let size = 1usize << frame.dimension();
    let blades = (0..size).map(|id| Multivector::blade(frame, BladeId(id as u32), 1.0)).collect::<Result<Vec<_>>>()?;
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Necessary)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let mut header = vec![String::new()];
    header.extend((0..size).map(|id| BladeId(id as u32).to_string()));
    w.write_record(&header).map_err(csv_error)?;
    for (r, x) in blades.iter().enumerate() {
        let mut row = Vec::with_capacity(size + 1);
        row.push(BladeId(r as u32).to_string());
        for y in &blades {
            let p = products::product(kind, x, y)?;
            row.push(if p.is_zero() { String::new() } else { p.to_string() });
        }
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok((size + 1, size + 1))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
