//! Sparse multivectors bound to a frame.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::blades::{self, BladeId, Term};
use crate::error::{Error, Result};
use crate::frames::Frame;

/// Sparse coordinates: blade id → coefficient, ascending by id.
pub type Terms = BTreeMap<BladeId, f64>;

pub(crate) fn accumulate(terms: &mut Terms, id: BladeId, coef: f64) {
    *terms.entry(id).or_insert(0.0) += coef;
}

pub(crate) fn normalize(mut terms: Terms) -> Terms {
    terms.retain(|_, c| *c != 0.0);
    terms
}

/// Metric-free outer product of two coordinate maps.
pub(crate) fn outer_terms(x: &Terms, y: &Terms, n: usize) -> Terms {
    let mut out = Terms::new();
    for (&r, &a) in x {
        for (&s, &b) in y {
            if (r & s).bits() == 0 {
                accumulate(&mut out, r ^ s, blades::egp_sign(r, s, n) as f64 * a * b);
            }
        }
    }
    normalize(out)
}

/// Grade parity of a multivector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_len(k: usize) -> Self {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

#[derive(Clone)]
pub struct Multivector {
    frame: Arc<Frame>,
    terms: Terms,
}

impl Multivector {
    /// Builds a multivector from terms, summing duplicate ids and dropping
    /// exact zeros.
    pub fn new(frame: &Arc<Frame>, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let n = frame.dimension();
        let mut map = Terms::new();
        for t in terms {
            if !t.id.is_valid_in(n) {
                return Err(Error::domain(format!("basis blade id {} is out of range for dimension {n}", t.id.bits())));
            }
            accumulate(&mut map, t.id, t.coef);
        }
        Ok(Multivector { frame: frame.clone(), terms: normalize(map) })
    }

    pub fn zero(frame: &Arc<Frame>) -> Self {
        Multivector { frame: frame.clone(), terms: Terms::new() }
    }

    pub fn scalar(frame: &Arc<Frame>, value: f64) -> Self {
        Self::from_terms(frame, Terms::from([(BladeId::SCALAR, value)]))
    }

    /// Weighted basis blade `coef·F_id`.
    pub fn blade(frame: &Arc<Frame>, id: BladeId, coef: f64) -> Result<Self> {
        Self::new(frame, [Term::new(coef, id)])
    }

    /// The basis vector `f_i`.
    pub fn basis_vector(frame: &Arc<Frame>, i: usize) -> Result<Self> {
        if i >= frame.dimension() {
            return Err(Error::domain(format!("basis vector e{i} does not exist in dimension {}", frame.dimension())));
        }
        Self::blade(frame, BladeId::vector(i), 1.0)
    }

    /// Grade-1 multivector from coordinates `Σ c_i f_i`.
    pub fn vector(frame: &Arc<Frame>, coords: &[f64]) -> Result<Self> {
        if coords.len() != frame.dimension() {
            return Err(Error::domain(format!(
                "vector has {} coordinates, frame has dimension {}",
                coords.len(),
                frame.dimension()
            )));
        }
        Self::new(frame, coords.iter().enumerate().map(|(i, &c)| Term::new(c, BladeId::vector(i))))
    }

    /// The unit pseudo-scalar `f_0 ∧ … ∧ f_{n-1}`.
    pub fn pseudo_scalar(frame: &Arc<Frame>) -> Self {
        Self::from_terms(frame, Terms::from([(BladeId::pseudo_scalar(frame.dimension()), 1.0)]))
    }

    pub(crate) fn from_terms(frame: &Arc<Frame>, terms: Terms) -> Self {
        Multivector { frame: frame.clone(), terms: normalize(terms) }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn dimension(&self) -> usize {
        self.frame.dimension()
    }

    pub fn terms(&self) -> &Terms {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = Term> + '_ {
        self.terms.iter().map(|(&id, &coef)| Term::new(coef, id))
    }

    /// Coefficient of `F_id` (zero when absent).
    pub fn get(&self, id: BladeId) -> f64 {
        self.terms.get(&id).copied().unwrap_or(0.0)
    }

    pub fn scalar_part(&self) -> f64 {
        self.get(BladeId::SCALAR)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Sum of squared coefficients.
    pub(crate) fn coef_norm_sq(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }

    /// Same coefficients, reinterpreted in another frame of equal dimension.
    pub fn with_frame(&self, frame: &Arc<Frame>) -> Result<Self> {
        if frame.dimension() != self.dimension() {
            return Err(Error::domain("frames have different dimensions"));
        }
        Ok(Multivector { frame: frame.clone(), terms: self.terms.clone() })
    }

    /// Distinct grades present, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|id| id.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The single grade of a homogeneous multivector (`None` when mixed or zero).
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [g] => Some(*g),
            _ => None,
        }
    }

    pub(crate) fn check_frame(&self, other: &Multivector) -> Result<()> {
        if Arc::ptr_eq(&self.frame, &other.frame) || *self.frame == *other.frame {
            Ok(())
        } else {
            Err(Error::domain("multivectors belong to different frames"))
        }
    }

    pub fn scale(&self, a: f64) -> Self {
        Self::from_terms(&self.frame, self.terms.iter().map(|(&id, &c)| (id, a * c)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn add(&self, other: &Multivector) -> Result<Self> {
        linear_combine(1.0, self, 1.0, other)
    }

    pub fn sub(&self, other: &Multivector) -> Result<Self> {
        linear_combine(1.0, self, -1.0, other)
    }

    fn map_signs(&self, sign: impl Fn(BladeId) -> i32) -> Self {
        Self::from_terms(&self.frame, self.terms.iter().map(|(&id, &c)| (id, sign(id) as f64 * c)).collect())
    }

    fn filter(&self, keep: impl Fn(BladeId) -> bool) -> Self {
        Self::from_terms(&self.frame, self.terms.iter().filter(|(&id, _)| keep(id)).map(|(&id, &c)| (id, c)).collect())
    }

    /// `⟨A⟩_k`.
    pub fn grade_part(&self, k: usize) -> Result<Self> {
        if k > self.dimension() {
            return Err(Error::domain(format!("grade {k} exceeds dimension {}", self.dimension())));
        }
        Ok(self.filter(|id| id.grade() == k))
    }

    pub fn even_part(&self) -> Self {
        self.filter(|id| id.grade() % 2 == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|id| id.grade() % 2 == 1)
    }

    /// `None` for mixed parity. The zero multivector is even.
    pub fn grade_parity(&self) -> Option<Parity> {
        let odd = self.terms.keys().filter(|id| id.grade() % 2 == 1).count();
        if odd == 0 {
            Some(Parity::Even)
        } else if odd == self.terms.len() {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    pub fn reverse(&self) -> Self {
        self.map_signs(blades::reverse_sign)
    }

    pub fn grade_involution(&self) -> Self {
        self.map_signs(blades::involution_sign)
    }

    /// Dense coordinates of grade `g`, indexed by blade index.
    pub fn grade_coords(&self, g: usize) -> Vec<f64> {
        let mut v = vec![0.0; blades::binomial(self.dimension(), g)];
        for (&id, &c) in &self.terms {
            if id.grade() == g {
                v[id.index()] = c;
            }
        }
        v
    }

    /// Coordinates of the grade-1 part as a dense vector.
    pub fn vector_coords(&self) -> Vec<f64> {
        self.grade_coords(1)
    }

    /// Max over all ids of `|a - b|`.
    pub fn max_abs_diff(&self, other: &Multivector) -> Result<f64> {
        self.check_frame(other)?;
        Ok(max_diff(&self.terms, &other.terms))
    }
}

pub(crate) fn max_diff(a: &Terms, b: &Terms) -> f64 {
    let mut worst: f64 = 0.0;
    for (id, x) in a {
        worst = worst.max((x - b.get(id).copied().unwrap_or(0.0)).abs());
    }
    for (id, y) in b {
        if !a.contains_key(id) {
            worst = worst.max(y.abs());
        }
    }
    worst
}

pub fn mv(frame: &Arc<Frame>, terms: impl IntoIterator<Item = Term>) -> Result<Multivector> {
    Multivector::new(frame, terms)
}

/// `a·X + b·Y`.
pub fn linear_combine(a: f64, x: &Multivector, b: f64, y: &Multivector) -> Result<Multivector> {
    x.check_frame(y)?;
    let mut out = Terms::new();
    for (&id, &c) in &x.terms {
        accumulate(&mut out, id, a * c);
    }
    for (&id, &c) in &y.terms {
        accumulate(&mut out, id, b * c);
    }
    Ok(Multivector::from_terms(&x.frame, out))
}

/// True iff every coefficient differs by at most `tol`.
pub fn approx_equal(a: &Multivector, b: &Multivector, tol: f64) -> Result<bool> {
    Ok(a.max_abs_diff(b)? <= tol)
}

/// Shortest round-trip decimal text for a coefficient.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if x != 0.0 && x.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// Canonical text: ascending ids, `coef*e0^e2` per term, bare number for
/// the scalar term, joined by ` + `.
pub fn format_mv(a: &Multivector) -> String {
    a.to_string()
}

/// Parses a multivector literal (any expression over numbers and basis
/// atoms) in the given frame.
pub fn parse_mv(text: &str, frame: &Arc<Frame>) -> Result<Multivector> {
    let expr = crate::expr::parse_expression(text)?;
    crate::expr::eval(&expr, frame)
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (&id, &c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if id == BladeId::SCALAR {
                f.write_str(&format_real(c))?;
            } else {
                write!(f, "{}*{}", format_real(c), id)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector({self})")
    }
}

impl PartialEq for Multivector {
    /// Exact coefficient equality in the same frame.
    fn eq(&self, other: &Self) -> bool {
        self.check_frame(other).is_ok() && self.terms == other.terms
    }
}
