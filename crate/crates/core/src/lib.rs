//! Geometric algebra over coordinate frames.
//!
//! Basis blades are integer bitmaps ([`BladeId`]), multivectors are sparse
//! maps from blade ids to coefficients bound to a compiled [`Frame`], and
//! every bilinear product is evaluated from the blade bitmaps and the
//! frame's metric. Non-orthogonal metrics are diagonalized once at frame
//! compilation; products then run in the orthogonal eigenbasis.
//!
//! ```
//! use gacf::{compile_frame, parse_mv, FrameSpec};
//!
//! let frame = compile_frame(&FrameSpec::euclidean(5)).unwrap();
//! let x = parse_mv("(e0^e2^e3)*(e0^e1^e3)", &frame).unwrap();
//! assert_eq!(x.to_string(), "1*e1^e2");
//! ```

pub mod blades;
pub mod error;
pub mod expr;
pub mod files;
pub mod frames;
pub mod linalg;
pub mod maps;
pub mod multivector;
pub mod products;
pub mod random;
pub mod selftest;
pub mod table;

pub use blades::{BladeId, ProductKind, Term};
pub use error::{Error, ParseError, Result};
pub use expr::{eval, parse_expression, Expr};
pub use files::{load_frame, parse_frame_file, parse_matrix_file};
pub use frames::{classify_ipm, compile_frame, reciprocal_frame, Frame, FrameKind, FrameSpec, Metric};
pub use linalg::Matrix;
pub use maps::{Outermorphism, Representation, Versor};
pub use multivector::{format_mv, linear_combine, parse_mv, Multivector, Parity};
pub use table::emit_table;
