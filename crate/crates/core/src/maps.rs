//! Linear maps on multivectors: full matrices, outermorphisms stored as one
//! matrix per grade, versors, reflections and projections.

use std::sync::Arc;

use crate::blades::{self, BladeId};
use crate::error::{Error, Result};
use crate::frames::{compile_frame, Frame, FrameKind, FrameSpec};
use crate::linalg::{Matrix, SINGULAR_PIVOT};
use crate::multivector::{accumulate, normalize, outer_terms, Multivector, Parity, Terms};
use crate::products::{self, blade_inverse, contract_left, gp};

/// Threshold on `|v·v|` below which a vector counts as null.
pub const NULL_VECTOR_TOL: f64 = 1e-10;

/// Per-grade matrices `M^0 … M^K` of the outermorphism of a vector map.
///
/// Column `k` of `M^g` holds the grade-`g` coordinates of the image of the
/// `k`-th grade-`g` basis blade. Metric-free.
#[derive(Clone, Debug, PartialEq)]
pub struct GradeMatrices {
    source_dim: usize,
    target_dim: usize,
    grades: Vec<Matrix>,
    target_ids: Vec<Vec<BladeId>>,
}

impl GradeMatrices {
    /// Algorithm 2: images of grade-`g` blades are built as
    /// `f[e_low] ∧ f[rest]` from the images of grade `g-1`.
    pub fn from_vector_matrix(m1: &Matrix) -> Self {
        let (m, n) = (m1.rows(), m1.cols());
        let top = m.min(n);
        let mut grades = vec![Matrix::identity(1)];
        let mut prev: Vec<Terms> = vec![Terms::from([(BladeId::SCALAR, 1.0)])];
        let vectors: Vec<Terms> =
            (0..n).map(|k| normalize((0..m).map(|i| (BladeId::vector(i), m1[(i, k)])).collect())).collect();
        for g in 1..=top {
            let cols = blades::binomial(n, g);
            let rows = blades::binomial(m, g);
            let mut mat = Matrix::zeros(rows, cols);
            let mut images = Vec::with_capacity(cols);
            for (k, id) in blades::ids_of_grade(g, n).into_iter().enumerate() {
                let image = if g == 1 {
                    vectors[k].clone()
                } else {
                    let low = BladeId(id.bits() & id.bits().wrapping_neg());
                    let rest = id ^ low;
                    outer_terms(&vectors[low.index()], &prev[rest.index()], m)
                };
                for (&bid, &c) in &image {
                    mat[(bid.index(), k)] = c;
                }
                images.push(image);
            }
            grades.push(mat);
            prev = images;
        }
        Self::from_grades(n, m, grades)
    }

    fn from_grades(source_dim: usize, target_dim: usize, grades: Vec<Matrix>) -> Self {
        let target_ids = (0..grades.len()).map(|g| blades::ids_of_grade(g, target_dim)).collect();
        GradeMatrices { source_dim, target_dim, grades, target_ids }
    }

    pub fn source_dimension(&self) -> usize {
        self.source_dim
    }

    pub fn target_dimension(&self) -> usize {
        self.target_dim
    }

    /// `M^0 … M^K`.
    pub fn grades(&self) -> &[Matrix] {
        &self.grades
    }

    pub fn grade(&self, g: usize) -> Option<&Matrix> {
        self.grades.get(g)
    }

    pub fn vector_matrix(&self) -> Matrix {
        match self.grades.get(1) {
            Some(m) => m.clone(),
            None => Matrix::zeros(self.target_dim, self.source_dim),
        }
    }

    /// Drops the trailing grade matrices above the rank of `M^1`; they are
    /// identically zero.
    pub fn trimmed(mut self) -> Self {
        let rank = self.vector_matrix().rank();
        self.grades.truncate(rank + 1);
        self.target_ids.truncate(rank + 1);
        self
    }

    /// Applies the map to source-frame coordinates. Grades above `K` map to 0.
    pub fn apply(&self, terms: &Terms) -> Terms {
        let mut out = Terms::new();
        for (&id, &c) in terms {
            let Some(mat) = self.grades.get(id.grade()) else { continue };
            let col = id.index();
            for (row, &tid) in self.target_ids[id.grade()].iter().enumerate() {
                let v = mat[(row, col)];
                if v != 0.0 {
                    accumulate(&mut out, tid, v * c);
                }
            }
        }
        normalize(out)
    }
}

/// `[T[A]] = M [A]` with a dense `2^m × 2^n` matrix over blade ids.
pub fn apply_full_matrix(m: &Matrix, a: &Multivector, target: &Arc<Frame>) -> Result<Multivector> {
    let (rows, cols) = (1usize << target.dimension(), 1usize << a.dimension());
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::domain(format!("full map must be {rows}x{cols}, got {}x{}", m.rows(), m.cols())));
    }
    let mut out = Terms::new();
    for (&id, &c) in a.terms() {
        for row in 0..rows {
            let v = m[(row, id.bits() as usize)];
            if v != 0.0 {
                accumulate(&mut out, BladeId(row as u32), v * c);
            }
        }
    }
    Ok(Multivector::from_terms(target, normalize(out)))
}

fn same_frame(a: &Arc<Frame>, b: &Arc<Frame>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// The outermorphism `f̄` of a linear vector map `f` between two frames.
#[derive(Clone, Debug)]
pub struct Outermorphism {
    source: Arc<Frame>,
    target: Arc<Frame>,
    map: GradeMatrices,
}

impl Outermorphism {
    pub fn from_vector_matrix(m: &Matrix, source: &Arc<Frame>, target: &Arc<Frame>) -> Result<Self> {
        if m.rows() != target.dimension() || m.cols() != source.dimension() {
            return Err(Error::domain(format!(
                "vector map is {}x{} but the frames need {}x{}",
                m.rows(),
                m.cols(),
                target.dimension(),
                source.dimension()
            )));
        }
        Ok(Outermorphism { source: source.clone(), target: target.clone(), map: GradeMatrices::from_vector_matrix(m) })
    }

    /// Identity on one frame.
    pub fn identity(frame: &Arc<Frame>) -> Self {
        Self::from_vector_matrix(&Matrix::identity(frame.dimension()), frame, frame).expect("square identity")
    }

    pub fn source(&self) -> &Arc<Frame> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Frame> {
        &self.target
    }

    pub fn grade_matrices(&self) -> &GradeMatrices {
        &self.map
    }

    pub fn grade(&self, g: usize) -> Option<&Matrix> {
        self.map.grade(g)
    }

    pub fn vector_matrix(&self) -> Matrix {
        self.map.vector_matrix()
    }

    pub fn apply(&self, a: &Multivector) -> Result<Multivector> {
        if !same_frame(a.frame(), &self.source) {
            return Err(Error::domain("multivector is not in the source frame of the map"));
        }
        Ok(Multivector::from_terms(&self.target, self.map.apply(a.terms())))
    }

    fn require_square(&self, what: &str) -> Result<usize> {
        let n = self.source.dimension();
        if n != self.target.dimension() {
            return Err(Error::domain(format!("{what} needs a square map")));
        }
        Ok(n)
    }

    /// `f̄[I] = det(f)·I`: the single entry of `M^n`.
    pub fn det(&self) -> Result<f64> {
        let n = self.require_square("determinant")?;
        Ok(self.map.grades[n][(0, 0)])
    }

    /// `f̄ᵀ` with `f̄[A]∗B = A∗f̄ᵀ[B]` on a single frame.
    pub fn adjoint(&self) -> Result<Self> {
        if !same_frame(&self.source, &self.target) {
            return Err(Error::domain("adjoint needs a map from a frame to itself"));
        }
        let frame = &self.source;
        if frame.kind() == FrameKind::Euclidean {
            let grades = self.map.grades.iter().map(Matrix::transpose).collect();
            let n = frame.dimension();
            return Ok(Outermorphism {
                source: frame.clone(),
                target: frame.clone(),
                map: GradeMatrices::from_grades(n, n, grades),
            });
        }
        // (M x)ᵀ A y = xᵀ A (M' y)  ⇒  M' = A⁻¹ Mᵀ A
        let a = frame.ipm();
        let a_inv = a.inverse().map_err(|_| Error::domain("adjoint is undefined on a degenerate frame"))?;
        let m = a_inv.try_mul(&self.vector_matrix().transpose())?.try_mul(a)?;
        Self::from_vector_matrix(&m, frame, frame)
    }

    /// Rebuilt from `M^1⁻¹`; maps target back to source.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square("inverse")?;
        let inv = self.vector_matrix().inverse().map_err(|_| Error::domain("map is singular and has no inverse"))?;
        Self::from_vector_matrix(&inv, &self.target, &self.source)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Outermorphism) -> Result<Self> {
        if !same_frame(&first.target, &self.source) {
            return Err(Error::domain("cannot compose: frames do not chain"));
        }
        let k = self.map.grades.len().min(first.map.grades.len());
        let grades = (0..k).map(|g| self.map.grades[g].try_mul(&first.map.grades[g])).collect::<Result<Vec<_>>>()?;
        Ok(Outermorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map: GradeMatrices::from_grades(first.source.dimension(), self.target.dimension(), grades),
        })
    }

    /// Outermorphism of `a·f + b·g`.
    pub fn linear_combine(a: f64, f: &Outermorphism, b: f64, g: &Outermorphism) -> Result<Self> {
        if !same_frame(&f.source, &g.source) || !same_frame(&f.target, &g.target) {
            return Err(Error::domain("cannot combine maps between different frames"));
        }
        let m = f.vector_matrix().combine(a, &g.vector_matrix(), b)?;
        Self::from_vector_matrix(&m, &f.source, &f.target)
    }

    /// `f̄⁻¹[A] = f̄ᵀ[A⌋I⁻¹]⌋I / det f`, evaluated with a Euclidean metric.
    pub fn inverse_via_duality(&self, a: &Multivector) -> Result<Multivector> {
        let n = self.require_square("inverse via duality")?;
        if !same_frame(a.frame(), &self.target) {
            return Err(Error::domain("multivector is not in the target frame of the map"));
        }
        let det = self.det()?;
        if det.abs() < SINGULAR_PIVOT {
            return Err(Error::domain(format!("map is singular (determinant {det})")));
        }
        let e = compile_frame(&FrameSpec::euclidean(n))?;
        let i = Multivector::pseudo_scalar(&e);
        let i_inv = blade_inverse(&i)?;
        let adj = Outermorphism::from_vector_matrix(&self.vector_matrix(), &e, &e)?.adjoint()?;
        let inner = contract_left(&a.with_frame(&e)?, &i_inv)?;
        let out = contract_left(&adj.apply(&inner)?, &i)?.scale(1.0 / det);
        out.with_frame(&self.source)
    }
}

/// An invertible multivector of definite parity.
#[derive(Clone, Debug)]
pub struct Versor {
    value: Multivector,
    parity: Parity,
    inverse: Multivector,
}

impl Versor {
    pub fn new(value: Multivector) -> Result<Self> {
        let parity = value.grade_parity().ok_or_else(|| Error::domain("a versor must be purely even or purely odd"))?;
        let inverse = blade_inverse(&value)?;
        Ok(Versor { value, parity, inverse })
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn inverse(&self) -> &Multivector {
        &self.inverse
    }

    pub fn frame(&self) -> &Arc<Frame> {
        self.value.frame()
    }

    /// `V⟨X⟩₊V⁻¹ + (−1)^k V⟨X⟩₋V⁻¹`.
    pub fn apply(&self, x: &Multivector) -> Result<Multivector> {
        self.value.check_frame(x)?;
        let sandwich = |p: &Multivector| gp(&gp(&self.value, p)?, &self.inverse);
        let even = sandwich(&x.even_part())?;
        let odd = sandwich(&x.odd_part())?.scale(self.parity.sign());
        even.add(&odd)
    }

    /// Columns are the images of the basis vectors.
    pub fn vector_matrix(&self) -> Result<Matrix> {
        let frame = self.frame();
        let n = frame.dimension();
        let mut m = Matrix::zeros(n, n);
        for j in 0..n {
            let img = self.apply(&Multivector::basis_vector(frame, j)?)?;
            let scale = img.max_abs().max(1.0);
            if img.iter().any(|t| t.id.grade() != 1 && t.coef.abs() > 1e-8 * scale) {
                return Err(Error::Numeric(format!("versor image of f{j} is not a vector")));
            }
            for (i, c) in img.vector_coords().into_iter().enumerate() {
                m[(i, j)] = c;
            }
        }
        Ok(m)
    }
}

/// `V = v_k ⋯ v_2 v_1`; the empty list gives the scalar 1.
pub fn versor_from_vectors(frame: &Arc<Frame>, vs: &[Multivector]) -> Result<Versor> {
    let mut acc = Multivector::scalar(frame, 1.0);
    for v in vs {
        if v.homogeneous_grade() != Some(1) {
            return Err(Error::domain("versor factors must be vectors"));
        }
        if products::norm(v)?.abs() <= NULL_VECTOR_TOL {
            return Err(Error::domain("null vector cannot be a versor factor"));
        }
        acc = gp(v, &acc)?;
    }
    Versor::new(acc)
}

/// Householder factorization of an orthogonal matrix on a Euclidean frame.
pub fn matrix_to_versor(m: &Matrix, frame: &Arc<Frame>) -> Result<Versor> {
    let n = frame.dimension();
    if frame.kind() != FrameKind::Euclidean {
        return Err(Error::domain("versor recovery needs a Euclidean frame"));
    }
    if m.rows() != n || m.cols() != n {
        return Err(Error::domain(format!("matrix must be {n}x{n}")));
    }
    if !m.is_orthogonal(1e-8) {
        return Err(Error::domain("matrix is not orthogonal"));
    }
    let mut residual = m.clone();
    let mut normals: Vec<Vec<f64>> = Vec::new();
    for i in 0..n {
        let mut v = residual.column(i);
        v[i] -= 1.0;
        if v.iter().all(|x| x.abs() <= 1e-9) {
            continue;
        }
        let vv: f64 = v.iter().map(|x| x * x).sum();
        let h = Matrix::from_fn(n, n, |r, c| {
            let id = if r == c { 1.0 } else { 0.0 };
            id - 2.0 * v[r] * v[c] / vv
        });
        residual = h.try_mul(&residual)?;
        normals.push(v);
    }
    // H_k ⋯ H_1 M = I, so M = H_1 ⋯ H_k and V = v_1 ⋯ v_k
    let factors = normals.iter().rev().map(|v| Multivector::vector(frame, v)).collect::<Result<Vec<_>>>()?;
    versor_from_vectors(frame, &factors)
}

/// How a blade encodes its subspace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    /// The blade spans the subspace.
    Direct,
    /// The blade is the dual of the subspace.
    Dual,
}

impl Representation {
    pub fn from_token(s: &str) -> Option<Self> {
        match s {
            "u" => Some(Representation::Direct),
            "d" => Some(Representation::Dual),
            _ => None,
        }
    }
}

/// `(−1)^s A X A⁻¹`, with `s` chosen from the representations of `A` and `X`.
pub fn reflect(a: &Multivector, x: &Multivector, rep_a: Representation, rep_x: Representation) -> Result<Multivector> {
    a.check_frame(x)?;
    let ga = a.homogeneous_grade().ok_or_else(|| Error::domain("reflection needs a non-zero blade"))?;
    let a_inv = blade_inverse(a)?;
    let n = a.dimension();
    let mut out = Multivector::zero(a.frame());
    for gx in x.grades() {
        let s = match (rep_a, rep_x) {
            (Representation::Direct, Representation::Direct) => gx * (ga + 1),
            (Representation::Direct, Representation::Dual) => (gx + 1) * (ga + 1) + n - 1,
            (Representation::Dual, Representation::Direct) => gx * ga,
            (Representation::Dual, Representation::Dual) => (gx + 1) * ga,
        };
        let part = gp(&gp(a, &x.grade_part(gx)?)?, &a_inv)?;
        out = if s % 2 == 0 { out.add(&part)? } else { out.sub(&part)? };
    }
    Ok(out)
}

/// `P_A[X] = (X⌋A) A⁻¹`.
pub fn project(a: &Multivector, x: &Multivector) -> Result<Multivector> {
    a.check_frame(x)?;
    if a.homogeneous_grade().is_none() {
        return Err(Error::domain("projection needs a non-zero blade"));
    }
    let a_inv = blade_inverse(a)?;
    gp(&contract_left(x, a)?, &a_inv)
}
