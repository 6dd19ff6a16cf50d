//! Metric frames: compile a metric description into the context the
//! product kernel computes in.
//!
//! Orthogonal metrics (every diagonal kind) keep their diagonal so basis
//! blade products reduce to a sign and a product of diagonal entries.
//! Non-orthogonal metrics are diagonalized; the frame then stores an
//! orthogonal base frame plus the outermorphism pair that moves coordinates
//! between the two, and every metric product is evaluated in the base.

use std::fmt;
use std::sync::Arc;

use crate::blades::{BladeId, MAX_DIMENSION};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Matrix};
use crate::maps::GradeMatrices;
use crate::multivector::{Multivector, Terms};
use crate::products;

/// Maximum accepted asymmetry of a metric matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Entries closer than this to 0 (or ±1) classify as 0 (or ±1).
pub const CLASSIFY_TOL: f64 = 1e-10;

/// Largest dimension for which a non-orthogonal frame is compiled; the
/// change-of-basis outermorphisms are dense per grade.
pub const MAX_NON_ORTHOGONAL_DIMENSION: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum Metric {
    Euclidean,
    Diagonal(Vec<f64>),
    /// `p` entries of +1, then `q` of -1, then `r` of 0.
    Signature {
        p: usize,
        q: usize,
        r: usize,
    },
    Matrix(Matrix),
    /// Basis `f_i = Σ_j cbm[i][j]·e_j` over an orthogonal base frame.
    Derived {
        base: Box<FrameSpec>,
        cbm: Matrix,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameSpec {
    pub n: usize,
    pub metric: Metric,
}

impl FrameSpec {
    pub fn euclidean(n: usize) -> Self {
        FrameSpec { n, metric: Metric::Euclidean }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        FrameSpec { n: d.len(), metric: Metric::Diagonal(d.to_vec()) }
    }

    pub fn signature(p: usize, q: usize, r: usize) -> Self {
        FrameSpec { n: p + q + r, metric: Metric::Signature { p, q, r } }
    }

    pub fn matrix(a: Matrix) -> Self {
        FrameSpec { n: a.rows(), metric: Metric::Matrix(a) }
    }

    pub fn derived(base: FrameSpec, cbm: Matrix) -> Self {
        FrameSpec { n: base.n, metric: Metric::Derived { base: Box::new(base), cbm } }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FrameKind {
    Euclidean,
    Orthonormal,
    Orthogonal,
    Degenerate,
    NonOrthogonal,
}

impl FrameKind {
    pub fn is_orthogonal(self) -> bool {
        self != FrameKind::NonOrthogonal
    }
}

impl fmt::Display for FrameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameKind::Euclidean => "Euclidean",
            FrameKind::Orthonormal => "Orthonormal",
            FrameKind::Orthogonal => "Orthogonal",
            FrameKind::Degenerate => "Degenerate",
            FrameKind::NonOrthogonal => "NonOrthogonal",
        })
    }
}

/// Orthogonal frame a non-orthogonal frame is derived from.
#[derive(Clone, Debug)]
pub struct BaseFrame {
    frame: Arc<Frame>,
    cbm: Matrix,
    /// Coordinates in the base frame → coordinates in the derived frame.
    from_base: GradeMatrices,
    /// Coordinates in the derived frame → coordinates in the base frame.
    to_base: GradeMatrices,
}

impl BaseFrame {
    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    /// Change-of-basis matrix `C` with `f_i = Σ_j C[i][j]·e_j`.
    pub fn cbm(&self) -> &Matrix {
        &self.cbm
    }

    pub fn from_base(&self) -> &GradeMatrices {
        &self.from_base
    }

    pub fn to_base(&self) -> &GradeMatrices {
        &self.to_base
    }
}

#[derive(Clone, Debug)]
pub struct Frame {
    n: usize,
    ipm: Matrix,
    kind: FrameKind,
    diag: Option<Vec<f64>>,
    base: Option<BaseFrame>,
}

impl Frame {
    pub fn dimension(&self) -> usize {
        self.n
    }

    /// Inner product matrix `[f_i · f_j]`.
    pub fn ipm(&self) -> &Matrix {
        &self.ipm
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    /// Diagonal entries `f_i · f_i`; present for every orthogonal kind.
    pub fn diag(&self) -> Option<&[f64]> {
        self.diag.as_deref()
    }

    pub fn base(&self) -> Option<&BaseFrame> {
        self.base.as_ref()
    }

    /// No basis direction squares to zero (the IPM is invertible).
    pub fn is_non_degenerate(&self) -> bool {
        match &self.diag {
            Some(d) => d.iter().all(|&x| x != 0.0),
            None => self.ipm.inverse().is_ok(),
        }
    }

    /// Coordinates of a multivector of this frame re-expressed in the
    /// orthogonal base frame. Identity for orthogonal frames.
    pub fn to_base_terms(&self, terms: &Terms) -> Terms {
        match &self.base {
            Some(b) => b.to_base.apply(terms),
            None => terms.clone(),
        }
    }

    pub fn from_base_terms(&self, terms: &Terms) -> Terms {
        match &self.base {
            Some(b) => b.from_base.apply(terms),
            None => terms.clone(),
        }
    }

    /// Metric-dependent part of `F_r F_s` on orthogonal frames: the product
    /// of `d_i` over the vectors shared by both blades.
    pub(crate) fn diag_factor(diag: &[f64], r: BladeId, s: BladeId) -> f64 {
        (r & s).vector_indices().map(|i| diag[i]).product()
    }

    fn cache_key(&self) -> (usize, FrameKind, Vec<i64>) {
        let ipm = (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| (self.ipm[(i, j)] * 1e12).round() as i64)
            .collect();
        (self.n, self.kind, ipm)
    }
}

impl PartialEq for Frame {
    /// Dimension, kind and IPM rounded to 12 decimals.
    fn eq(&self, other: &Self) -> bool {
        self.cache_key() == other.cache_key()
    }
}

pub fn classify_ipm(a: &Matrix) -> Result<FrameKind> {
    if !a.is_square() || !a.is_symmetric(SYMMETRY_TOL) {
        return Err(Error::domain(format!(
            "inner product matrix is not symmetric (max asymmetry {})",
            a.max_asymmetry()
        )));
    }
    if !a.is_diagonal(CLASSIFY_TOL) {
        return Ok(FrameKind::NonOrthogonal);
    }
    Ok(classify_diagonal(&a.diagonal()))
}

fn classify_diagonal(d: &[f64]) -> FrameKind {
    let near = |x: f64, v: f64| (x - v).abs() < CLASSIFY_TOL;
    if d.iter().all(|&x| near(x, 1.0)) {
        FrameKind::Euclidean
    } else if d.iter().all(|&x| near(x, 1.0) || near(x, -1.0)) {
        FrameKind::Orthonormal
    } else if d.iter().any(|&x| near(x, 0.0)) {
        FrameKind::Degenerate
    } else {
        FrameKind::Orthogonal
    }
}

/// `C·A_E·Cᵀ`.
pub fn derived_ipm(base_ipm: &Matrix, cbm: &Matrix) -> Result<Matrix> {
    cbm.try_mul(base_ipm)?.try_mul(&cbm.transpose())
}

fn check_dimension(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("frame dimension must be positive"));
    }
    if n > MAX_DIMENSION {
        return Err(Error::domain(format!("frame dimension {n} exceeds the supported maximum {MAX_DIMENSION}")));
    }
    Ok(())
}

pub fn compile_frame(spec: &FrameSpec) -> Result<Arc<Frame>> {
    check_dimension(spec.n)?;
    let n = spec.n;
    match &spec.metric {
        Metric::Euclidean => Ok(orthogonal_frame(vec![1.0; n])),
        Metric::Diagonal(d) => {
            if d.len() != n {
                return Err(Error::domain(format!("diagonal metric has {} entries, dimension is {n}", d.len())));
            }
            if d.iter().any(|x| !x.is_finite()) {
                return Err(Error::domain("metric entries must be finite"));
            }
            Ok(orthogonal_frame(d.clone()))
        }
        Metric::Signature { p, q, r } => {
            if p + q + r != n {
                return Err(Error::domain(format!("signature ({p}, {q}, {r}) does not add up to dimension {n}")));
            }
            let mut d = vec![1.0; *p];
            d.extend(std::iter::repeat_n(-1.0, *q));
            d.extend(std::iter::repeat_n(0.0, *r));
            Ok(orthogonal_frame(d))
        }
        Metric::Matrix(a) => compile_matrix(n, a),
        Metric::Derived { base, cbm } => compile_derived(n, base, cbm),
    }
}

fn orthogonal_frame(mut d: Vec<f64>) -> Arc<Frame> {
    for x in d.iter_mut() {
        for v in [0.0, 1.0, -1.0] {
            if (*x - v).abs() < CLASSIFY_TOL {
                *x = v;
            }
        }
    }
    let kind = classify_diagonal(&d);
    Arc::new(Frame { n: d.len(), ipm: Matrix::from_diagonal(&d), kind, diag: Some(d), base: None })
}

fn compile_matrix(n: usize, a: &Matrix) -> Result<Arc<Frame>> {
    if a.rows() != n || a.cols() != n {
        return Err(Error::domain(format!("metric matrix is {}x{}, dimension is {n}", a.rows(), a.cols())));
    }
    if (0..n).any(|i| a.row(i).iter().any(|x| !x.is_finite())) {
        return Err(Error::domain("metric entries must be finite"));
    }
    if classify_ipm(a)? != FrameKind::NonOrthogonal {
        return Ok(orthogonal_frame(a.diagonal()));
    }
    if n > MAX_NON_ORTHOGONAL_DIMENSION {
        return Err(Error::domain(format!(
            "non-orthogonal frames are limited to dimension {MAX_NON_ORTHOGONAL_DIMENSION}"
        )));
    }
    let (values, q) = sym_eigen(a)?;
    // A = Q·D·Qᵀ, so f_i = Σ_j Q[i][j]·e_j over a base with IPM D.
    let base = orthogonal_frame(values);
    Ok(non_orthogonal(a.clone(), base, q))
}

/// `cbm` must be orthogonal here, so its inverse transpose is itself.
fn non_orthogonal(ipm: Matrix, base: Arc<Frame>, cbm: Matrix) -> Arc<Frame> {
    let to_base = GradeMatrices::from_vector_matrix(&cbm.transpose());
    let from_base = GradeMatrices::from_vector_matrix(&cbm);
    let n = ipm.rows();
    Arc::new(Frame {
        n,
        ipm,
        kind: FrameKind::NonOrthogonal,
        diag: None,
        base: Some(BaseFrame { frame: base, cbm, from_base, to_base }),
    })
}

fn compile_derived(n: usize, base: &FrameSpec, cbm: &Matrix) -> Result<Arc<Frame>> {
    if base.n != n {
        return Err(Error::domain("derived frame and its base have different dimensions"));
    }
    let base = compile_frame(base)?;
    if !base.kind.is_orthogonal() {
        return Err(Error::domain("the base of a derived frame must be orthogonal"));
    }
    if cbm.rows() != n || cbm.cols() != n {
        return Err(Error::domain(format!("change-of-basis matrix must be {n}x{n}")));
    }
    if cbm.inverse().is_err() {
        return Err(Error::domain("change-of-basis matrix is not invertible"));
    }
    let a = derived_ipm(&base.ipm, cbm)?;
    let a = Matrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    if a.is_diagonal(CLASSIFY_TOL) {
        return Ok(orthogonal_frame(a.diagonal()));
    }
    if cbm.is_orthogonal(1e-10) {
        if n > MAX_NON_ORTHOGONAL_DIMENSION {
            return Err(Error::domain(format!(
                "non-orthogonal frames are limited to dimension {MAX_NON_ORTHOGONAL_DIMENSION}"
            )));
        }
        Ok(non_orthogonal(a, base, cbm.clone()))
    } else {
        compile_matrix(n, &a)
    }
}

/// `∏ d_i` over the basis vectors shared by `F_r` and `F_s`.
pub fn metric_factor(frame: &Frame, r: BladeId, s: BladeId) -> Result<f64> {
    match &frame.diag {
        Some(d) => Ok(Frame::diag_factor(d, r, s)),
        None => Err(Error::domain(
            "metric factor is only defined on orthogonal frames; non-orthogonal products go through the base frame",
        )),
    }
}

/// The reciprocal frame (IPM inverted) together with the reciprocal vectors
/// `c_i`, expressed in the input frame, satisfying `c_i · f_j = δ_ij`.
pub fn reciprocal_frame(frame: &Arc<Frame>) -> Result<(Arc<Frame>, Vec<Multivector>)> {
    let n = frame.n;
    let inv = frame.ipm.inverse().map_err(|_| Error::domain("degenerate frame has no reciprocal frame"))?;
    if let Some(d) = &frame.diag {
        let recip: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
        let vectors =
            (0..n).map(|i| Ok(Multivector::basis_vector(frame, i)?.scale(recip[i]))).collect::<Result<Vec<_>>>()?;
        return Ok((orthogonal_frame(recip), vectors));
    }
    // c_i = (-1)^i (f_0 ∧ … f̂_i … ∧ f_{n-1}) ⌋ I⁻¹
    let i_inv = products::blade_inverse(&Multivector::pseudo_scalar(frame))?;
    let mut vectors = Vec::with_capacity(n);
    for i in 0..n {
        let id = BladeId::pseudo_scalar(n) ^ BladeId::vector(i);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let rest = Multivector::blade(frame, id, sign)?;
        vectors.push(products::contract_left(&rest, &i_inv)?);
    }
    let sym = Matrix::from_fn(n, n, |i, j| 0.5 * (inv[(i, j)] + inv[(j, i)]));
    Ok((compile_matrix(n, &sym)?, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::products::gp;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn classification() {
        assert_eq!(classify_ipm(&Matrix::identity(4)).unwrap(), FrameKind::Euclidean);
        assert_eq!(classify_ipm(&Matrix::from_diagonal(&[1.0, 1.0, 1.0, 1.0, -1.0])).unwrap(), FrameKind::Orthonormal);
        assert_eq!(classify_ipm(&m(&[&[0.0, 1.0], &[1.0, 0.0]])).unwrap(), FrameKind::NonOrthogonal);
        assert_eq!(classify_ipm(&Matrix::from_diagonal(&[1.0, 1.0, 0.0])).unwrap(), FrameKind::Degenerate);
        assert_eq!(classify_ipm(&Matrix::from_diagonal(&[2.0, 3.0])).unwrap(), FrameKind::Orthogonal);
        assert!(classify_ipm(&m(&[&[0.0, 1.0], &[0.9, 0.0]])).is_err());
    }

    #[test]
    fn compile_signature_and_euclidean() {
        let f = compile_frame(&FrameSpec::signature(4, 1, 0)).unwrap();
        assert_eq!(f.diag().unwrap(), &[1.0, 1.0, 1.0, 1.0, -1.0]);
        assert_eq!(f.kind(), FrameKind::Orthonormal);
        let e = compile_frame(&FrameSpec::euclidean(3)).unwrap();
        assert_eq!(e.kind(), FrameKind::Euclidean);
        assert_eq!(e.diag().unwrap(), &[1.0, 1.0, 1.0]);
        assert!(compile_frame(&FrameSpec::euclidean(0)).is_err());
        assert!(compile_frame(&FrameSpec { n: 3, metric: Metric::Signature { p: 1, q: 1, r: 0 } }).is_err());
    }

    #[test]
    fn compile_swap_metric() {
        let f = compile_frame(&FrameSpec::matrix(m(&[&[0.0, 1.0], &[1.0, 0.0]]))).unwrap();
        assert_eq!(f.kind(), FrameKind::NonOrthogonal);
        let base = f.base().unwrap();
        assert_eq!(base.frame().diag().unwrap(), &[1.0, -1.0]);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = base.cbm();
        // rows (1,1)/√2 and (1,-1)/√2 up to sign
        assert!((c[(0, 0)].abs() - h).abs() < 1e-12 && (c[(0, 1)].abs() - h).abs() < 1e-12);
        assert!((c[(1, 0)].abs() - h).abs() < 1e-12 && (c[(1, 1)].abs() - h).abs() < 1e-12);
        let rebuilt = derived_ipm(base.frame().ipm(), c).unwrap();
        assert!(rebuilt.max_abs_diff(f.ipm()) < 1e-9);
        assert!(compile_frame(&FrameSpec::matrix(m(&[&[0.0, 1.0], &[0.5, 0.0]]))).is_err());
    }

    #[test]
    fn derived_ipm_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = m(&[&[h, h], &[h, -h]]);
        let a = derived_ipm(&Matrix::from_diagonal(&[1.0, -1.0]), &c).unwrap();
        assert!(a.max_abs_diff(&m(&[&[0.0, 1.0], &[1.0, 0.0]])) < 1e-15);
        let i = Matrix::identity(3);
        assert_eq!(derived_ipm(&i, &i).unwrap(), i);
        let s = m(&[&[2.0, 1.0], &[1.0, 3.0]]);
        assert_eq!(derived_ipm(&s, &Matrix::identity(2)).unwrap(), s);
    }

    #[test]
    fn derived_frames() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = m(&[&[h, h], &[h, -h]]);
        let f = compile_frame(&FrameSpec::derived(FrameSpec::diagonal(&[1.0, -1.0]), c)).unwrap();
        assert_eq!(f.kind(), FrameKind::NonOrthogonal);
        assert!(f.ipm().max_abs_diff(&m(&[&[0.0, 1.0], &[1.0, 0.0]])) < 1e-12);
        // a rotation of a Euclidean base stays Euclidean
        let rot = m(&[&[0.6, 0.8], &[-0.8, 0.6]]);
        let g = compile_frame(&FrameSpec::derived(FrameSpec::euclidean(2), rot)).unwrap();
        assert_eq!(g.kind(), FrameKind::Euclidean);
        // non-orthogonal cbm recompiles through the eigen path
        let shear = m(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let k = compile_frame(&FrameSpec::derived(FrameSpec::euclidean(2), shear)).unwrap();
        assert!(k.ipm().max_abs_diff(&m(&[&[2.0, 1.0], &[1.0, 1.0]])) < 1e-12);
        let singular = m(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(compile_frame(&FrameSpec::derived(FrameSpec::euclidean(2), singular)).is_err());
    }

    #[test]
    fn metric_factors() {
        let f = compile_frame(&FrameSpec::diagonal(&[1.0, 1.0, 1.0, 1.0, -1.0])).unwrap();
        assert_eq!(metric_factor(&f, BladeId(16), BladeId(16)).unwrap(), -1.0);
        assert_eq!(metric_factor(&f, BladeId(7), BladeId(0)).unwrap(), 1.0);
        let g = compile_frame(&FrameSpec::diagonal(&[2.0, 3.0])).unwrap();
        assert_eq!(metric_factor(&g, BladeId(3), BladeId(3)).unwrap(), 6.0);
        let b = Multivector::blade(&g, BladeId(3), 1.0).unwrap();
        assert_eq!(gp(&b, &b).unwrap(), Multivector::scalar(&g, -6.0));
        let k = compile_frame(&FrameSpec::matrix(m(&[&[0.0, 1.0], &[1.0, 0.0]]))).unwrap();
        assert!(metric_factor(&k, BladeId(1), BladeId(1)).is_err());
    }

    #[test]
    fn reciprocal_examples() {
        let e = compile_frame(&FrameSpec::euclidean(3)).unwrap();
        let (r, c) = reciprocal_frame(&e).unwrap();
        assert_eq!(r.ipm(), e.ipm());
        for (i, ci) in c.iter().enumerate() {
            assert_eq!(*ci, Multivector::basis_vector(&e, i).unwrap());
        }

        let d = compile_frame(&FrameSpec::diagonal(&[2.0, -1.0])).unwrap();
        let (r, c) = reciprocal_frame(&d).unwrap();
        assert_eq!(r.diag().unwrap(), &[0.5, -1.0]);
        assert_eq!(c[0], Multivector::basis_vector(&d, 0).unwrap().scale(0.5));
        assert_eq!(c[1], Multivector::basis_vector(&d, 1).unwrap().scale(-1.0));

        let k = compile_frame(&FrameSpec::matrix(m(&[&[0.0, 1.0], &[1.0, 0.0]]))).unwrap();
        let (r, c) = reciprocal_frame(&k).unwrap();
        assert!(r.ipm().max_abs_diff(k.ipm()) < 1e-9);
        let e0 = Multivector::basis_vector(&k, 0).unwrap();
        let e1 = Multivector::basis_vector(&k, 1).unwrap();
        assert!(c[0].max_abs_diff(&e1).unwrap() < 1e-9);
        assert!(c[1].max_abs_diff(&e0).unwrap() < 1e-9);

        let deg = compile_frame(&FrameSpec::diagonal(&[1.0, 0.0])).unwrap();
        assert!(reciprocal_frame(&deg).is_err());
    }
}
