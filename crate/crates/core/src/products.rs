//! Bilinear products, norms, inverses and duals.
//!
//! On orthogonal frames the product of two basis blades is either zero or
//! the single term `sign·λ·F_{r xor s}`, so every product except the outer
//! and regressive products is the geometric product filtered by a bit
//! selector. Non-orthogonal frames move both operands into their orthogonal
//! base frame, multiply there and move the result back.

use std::sync::Arc;

use crate::blades::{self, BladeId, ProductKind, Selector};
use crate::error::{Error, Result};
use crate::frames::{Frame, FrameKind};
use crate::multivector::{accumulate, normalize, outer_terms, Multivector, Terms};

/// Relative threshold below which `V·Ṽ` counts as zero.
pub const NULL_TOL: f64 = 1e-10;

/// Non-scalar parts of `V·Ṽ` must stay below this fraction of its scalar part.
pub const VERSOR_TOL: f64 = 1e-8;

fn orthogonal_product(frame: &Frame, x: &Terms, y: &Terms, sel: Option<Selector>) -> Terms {
    let diag = frame.diag().expect("orthogonal frame has a diagonal");
    let n = frame.dimension();
    let mut out = Terms::new();
    for (&r, &a) in x {
        for (&s, &b) in y {
            if let Some(sel) = sel {
                if !sel(r, s) {
                    continue;
                }
            }
            let m = Frame::diag_factor(diag, r, s);
            if m == 0.0 {
                continue;
            }
            accumulate(&mut out, r ^ s, blades::egp_sign(r, s, n) as f64 * m * a * b);
        }
    }
    normalize(out)
}

/// Evaluates a GP-derived product, routing through the base frame when the
/// metric is not diagonal.
fn metric_product(x: &Multivector, y: &Multivector, sel: Option<Selector>) -> Result<Multivector> {
    x.check_frame(y)?;
    let frame = x.frame();
    let terms = match frame.base() {
        None => orthogonal_product(frame, x.terms(), y.terms(), sel),
        Some(_) if is_scalar(x) || is_scalar(y) => scalar_times(x.terms(), y.terms(), sel),
        Some(base) => {
            let bx = frame.to_base_terms(x.terms());
            let by = frame.to_base_terms(y.terms());
            let prod = orthogonal_product(base.frame(), &bx, &by, sel);
            normalize(frame.from_base_terms(&prod))
        }
    };
    Ok(Multivector::from_terms(frame, terms))
}

fn is_scalar(x: &Multivector) -> bool {
    x.terms().keys().all(|id| id.bits() == 0)
}

/// Product with a scalar operand; exact in any frame.
fn scalar_times(x: &Terms, y: &Terms, sel: Option<Selector>) -> Terms {
    let mut out = Terms::new();
    for (&r, &a) in x {
        for (&s, &b) in y {
            if sel.is_none_or(|sel| sel(r, s)) {
                accumulate(&mut out, r ^ s, a * b);
            }
        }
    }
    normalize(out)
}

fn selected(kind: ProductKind, x: &Multivector, y: &Multivector) -> Result<Multivector> {
    metric_product(x, y, blades::selector(kind))
}

pub fn gp(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    metric_product(x, y, None)
}

/// Metric-independent; identical in every frame of the same dimension.
pub fn outer(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    x.check_frame(y)?;
    Ok(Multivector::from_terms(x.frame(), outer_terms(x.terms(), y.terms(), x.dimension())))
}

pub fn contract_left(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    selected(ProductKind::LeftContraction, x, y)
}

pub fn contract_right(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    selected(ProductKind::RightContraction, x, y)
}

pub fn scalar_product(x: &Multivector, y: &Multivector) -> Result<f64> {
    Ok(selected(ProductKind::Sp, x, y)?.scalar_part())
}

pub fn fat_dot(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    selected(ProductKind::FatDot, x, y)
}

pub fn hestenes(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    selected(ProductKind::Hip, x, y)
}

/// `½(XY − YX)`.
pub fn commutator(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    commutation(ProductKind::Cp, x, y, -1.0)
}

/// `½(XY + YX)`.
pub fn anti_commutator(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    commutation(ProductKind::Acp, x, y, 1.0)
}

fn commutation(kind: ProductKind, x: &Multivector, y: &Multivector, sign: f64) -> Result<Multivector> {
    x.check_frame(y)?;
    if x.frame().kind().is_orthogonal() {
        selected(kind, x, y)
    } else {
        // basis-blade products are not single terms here, so no selector
        let xy = gp(x, y)?;
        let yx = gp(y, x)?;
        crate::multivector::linear_combine(0.5, &xy, 0.5 * sign, &yx)
    }
}

/// `X ∨ Y = (X I⁻¹ ∧ Y I⁻¹) I`.
pub fn regressive(x: &Multivector, y: &Multivector) -> Result<Multivector> {
    x.check_frame(y)?;
    let i = Multivector::pseudo_scalar(x.frame());
    let i_inv = pseudo_scalar_inverse(x.frame())?;
    let xd = gp(x, &i_inv)?;
    let yd = gp(y, &i_inv)?;
    gp(&outer(&xd, &yd)?, &i)
}

/// Any product by kind. The scalar product comes back as a grade-0 multivector.
pub fn product(kind: ProductKind, x: &Multivector, y: &Multivector) -> Result<Multivector> {
    match kind {
        ProductKind::Gp => gp(x, y),
        ProductKind::Outer => outer(x, y),
        ProductKind::Cp => commutator(x, y),
        ProductKind::Acp => anti_commutator(x, y),
        ProductKind::Rp => regressive(x, y),
        _ => selected(kind, x, y),
    }
}

/// `‖A‖ = A ∗ Ã`; may be negative or zero.
pub fn norm(a: &Multivector) -> Result<f64> {
    scalar_product(a, &a.reverse())
}

/// `|A| = √(A ∗ Ã)`.
pub fn magnitude(a: &Multivector) -> Result<f64> {
    let n = norm(a)?;
    if n < 0.0 {
        return Err(Error::domain(format!("magnitude undefined for negative norm {n}")));
    }
    Ok(n.sqrt())
}

/// Inverse of a blade or versor, `Ṽ / (V Ṽ)`.
pub fn blade_inverse(a: &Multivector) -> Result<Multivector> {
    let rev = a.reverse();
    let vv = gp(a, &rev)?;
    let s = vv.scalar_part();
    if s.abs() <= NULL_TOL * a.coef_norm_sq() || a.is_zero() {
        return Err(Error::domain("null blade has no inverse"));
    }
    if vv.iter().any(|t| t.id != BladeId::SCALAR && t.coef.abs() >= VERSOR_TOL * s.abs()) {
        return Err(Error::domain("not a versor/blade: V·reverse(V) is not a scalar"));
    }
    Ok(rev.scale(1.0 / s))
}

fn pseudo_scalar_inverse(frame: &Arc<Frame>) -> Result<Multivector> {
    if !frame.is_non_degenerate() {
        return Err(Error::domain("degenerate frame: the pseudo-scalar has no inverse"));
    }
    blade_inverse(&Multivector::pseudo_scalar(frame))
        .map_err(|_| Error::domain("degenerate frame: the pseudo-scalar has no inverse"))
}

/// `A⌋X⁻¹`, with `X` defaulting to the pseudo-scalar.
pub fn dual(a: &Multivector, x: Option<&Multivector>) -> Result<Multivector> {
    let x_inv = match x {
        Some(x) => {
            a.check_frame(x)?;
            blade_inverse(x)?
        }
        None => pseudo_scalar_inverse(a.frame())?,
    };
    contract_left(a, &x_inv)
}

/// `A⌋X`, with `X` defaulting to the pseudo-scalar.
pub fn undual(a: &Multivector, x: Option<&Multivector>) -> Result<Multivector> {
    match x {
        Some(x) => contract_left(a, x),
        None => {
            pseudo_scalar_inverse(a.frame())?;
            contract_left(a, &Multivector::pseudo_scalar(a.frame()))
        }
    }
}

fn require_vector(v: &Multivector, what: &str) -> Result<()> {
    if v.is_zero() || v.homogeneous_grade() == Some(1) {
        Ok(())
    } else {
        Err(Error::domain(format!("{what} must be a vector (grade 1)")))
    }
}

/// `u × v = (u ∧ v)*` in Euclidean 3D.
pub fn cross3(u: &Multivector, v: &Multivector) -> Result<Multivector> {
    u.check_frame(v)?;
    if u.frame().kind() != FrameKind::Euclidean || u.dimension() != 3 {
        return Err(Error::domain("cross product needs a Euclidean frame of dimension 3"));
    }
    require_vector(u, "cross product operand")?;
    require_vector(v, "cross product operand")?;
    dual(&outer(u, v)?, None)
}

/// Angle between two same-grade Euclidean blades, in `[0, π]`.
pub fn euclidean_blade_angle(a: &Multivector, b: &Multivector) -> Result<f64> {
    a.check_frame(b)?;
    if a.frame().kind() != FrameKind::Euclidean {
        return Err(Error::domain("blade angle needs a Euclidean frame"));
    }
    if a.homogeneous_grade().is_none() || a.homogeneous_grade() != b.homogeneous_grade() {
        return Err(Error::domain("blade angle needs two non-zero blades of the same grade"));
    }
    let (ma, mb) = (magnitude(a)?, magnitude(b)?);
    if ma == 0.0 || mb == 0.0 {
        return Err(Error::domain("blade angle of a null blade"));
    }
    let cos = scalar_product(a, &b.reverse())? / (ma * mb);
    Ok(cos.clamp(-1.0, 1.0).acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blades::Term;
    use crate::frames::{compile_frame, FrameSpec};
    use crate::linalg::Matrix;
    use std::f64::consts::FRAC_PI_2;

    fn euclid(n: usize) -> Arc<Frame> {
        compile_frame(&FrameSpec::euclidean(n)).unwrap()
    }

    fn swap2() -> Arc<Frame> {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        compile_frame(&FrameSpec::matrix(a)).unwrap()
    }

    fn b(f: &Arc<Frame>, id: u32, c: f64) -> Multivector {
        Multivector::blade(f, BladeId(id), c).unwrap()
    }

    fn close(a: &Multivector, b: &Multivector, tol: f64) -> bool {
        a.max_abs_diff(b).unwrap() <= tol
    }

    #[test]
    fn gp_examples() {
        let f = euclid(5);
        assert_eq!(gp(&b(&f, 13, 1.0), &b(&f, 11, 1.0)).unwrap(), b(&f, 6, 1.0));
        assert_eq!(gp(&b(&f, 1, 1.0), &b(&f, 1, 1.0)).unwrap(), Multivector::scalar(&f, 1.0));
    }

    #[test]
    fn gp_on_swap_metric() {
        // base diag(1,-1), f = C e; by hand f0 f1 = f0·f1 + f0∧f1 = 1 + f0∧f1
        let k = swap2();
        let f0 = b(&k, 1, 1.0);
        let f1 = b(&k, 2, 1.0);
        let expect = Multivector::new(&k, [Term::new(1.0, BladeId(0)), Term::new(1.0, BladeId(3))]).unwrap();
        assert!(close(&gp(&f0, &f1).unwrap(), &expect, 1e-12));
        assert!(gp(&f0, &f0).unwrap().max_abs() < 1e-12);
        let sym = gp(&f0, &f1).unwrap().add(&gp(&f1, &f0).unwrap()).unwrap();
        assert!(close(&sym, &Multivector::scalar(&k, 2.0), 1e-12));
    }

    #[test]
    fn outer_examples() {
        let f = euclid(4);
        assert!(outer(&b(&f, 1, 1.0), &b(&f, 1, 1.0)).unwrap().is_zero());
        assert_eq!(outer(&b(&f, 1, 1.0), &b(&f, 2, 1.0)).unwrap(), b(&f, 3, 1.0));
        assert_eq!(outer(&b(&f, 3, 1.0), &b(&f, 12, 1.0)).unwrap(), b(&f, 15, 1.0));
    }

    #[test]
    fn contraction_examples() {
        let f = euclid(3);
        assert_eq!(contract_left(&b(&f, 1, 1.0), &b(&f, 3, 1.0)).unwrap(), b(&f, 2, 1.0));
        let a = Multivector::new(&f, [Term::new(2.0, BladeId(1)), Term::new(-1.0, BladeId(6))]).unwrap();
        assert_eq!(contract_left(&Multivector::scalar(&f, 3.0), &a).unwrap(), a.scale(3.0));
        assert!(contract_left(&b(&f, 3, 1.0), &b(&f, 1, 1.0)).unwrap().is_zero());
        assert_eq!(scalar_product(&b(&f, 3, 1.0), &b(&f, 3, 1.0)).unwrap(), -1.0);
        assert_eq!(contract_right(&b(&f, 3, 1.0), &b(&f, 2, 1.0)).unwrap(), b(&f, 1, 1.0));
    }

    #[test]
    fn selected_products() {
        let f = euclid(3);
        let x = Multivector::new(&f, [Term::new(1.0, BladeId(1)), Term::new(2.0, BladeId(6))]).unwrap();
        assert!(commutator(&x, &x).unwrap().is_zero());
        assert!(anti_commutator(&b(&f, 1, 1.0), &b(&f, 2, 1.0)).unwrap().is_zero());
        assert!(hestenes(&Multivector::scalar(&f, 2.0), &b(&f, 1, 1.0)).unwrap().is_zero());
        assert_eq!(fat_dot(&b(&f, 1, 1.0), &b(&f, 3, 1.0)).unwrap(), b(&f, 2, 1.0));
        let k = swap2();
        let y = Multivector::new(&k, [Term::new(1.0, BladeId(1)), Term::new(0.5, BladeId(3))]).unwrap();
        assert!(commutator(&y, &y).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn regressive_examples() {
        let f = euclid(3);
        // (e0^e1) v (e1^e2) = -e1, evaluated by hand from (X I⁻¹ ∧ Y I⁻¹) I
        assert_eq!(regressive(&b(&f, 3, 1.0), &b(&f, 6, 1.0)).unwrap(), b(&f, 2, -1.0));
        let x = Multivector::new(&f, [Term::new(1.0, BladeId(1)), Term::new(2.0, BladeId(5))]).unwrap();
        assert_eq!(regressive(&x, &b(&f, 7, 1.0)).unwrap(), x);
        assert!(regressive(&b(&f, 1, 1.0), &b(&f, 2, 1.0)).unwrap().is_zero());
        let d = compile_frame(&FrameSpec::diagonal(&[1.0, 1.0, 0.0])).unwrap();
        assert!(regressive(&b(&d, 1, 1.0), &b(&d, 2, 1.0)).is_err());
    }

    #[test]
    fn norms() {
        let f = euclid(2);
        assert_eq!(norm(&b(&f, 3, 1.0)).unwrap(), 1.0);
        let k = swap2();
        assert!(norm(&b(&k, 1, 1.0)).unwrap().abs() < 1e-12);
        assert_eq!(magnitude(&Multivector::scalar(&f, -2.0)).unwrap(), 2.0);
        let m = compile_frame(&FrameSpec::diagonal(&[1.0, -1.0])).unwrap();
        let err = magnitude(&b(&m, 2, 1.0)).unwrap_err();
        assert!(err.to_string().contains("-1"));
    }

    #[test]
    fn inverses() {
        let f = euclid(3);
        assert_eq!(blade_inverse(&b(&f, 1, 1.0)).unwrap(), b(&f, 1, 1.0));
        assert_eq!(blade_inverse(&b(&f, 7, 1.0)).unwrap(), b(&f, 7, -1.0));
        let k = swap2();
        let err = blade_inverse(&b(&k, 1, 1.0)).unwrap_err();
        assert_eq!(err.to_string(), "null blade has no inverse");
        let mixed = Multivector::new(&f, [Term::new(1.0, BladeId(0)), Term::new(1.0, BladeId(1))]).unwrap();
        assert!(blade_inverse(&mixed).unwrap_err().to_string().contains("not a versor"));
        let v = b(&f, 1, 2.0);
        assert!(close(&gp(&v, &blade_inverse(&v).unwrap()).unwrap(), &Multivector::scalar(&f, 1.0), 1e-12));
    }

    #[test]
    fn duals() {
        let f = euclid(3);
        assert_eq!(dual(&Multivector::scalar(&f, 1.0), None).unwrap(), b(&f, 7, -1.0));
        assert_eq!(dual(&b(&f, 1, 1.0), None).unwrap(), b(&f, 6, -1.0));
        let a = b(&f, 3, 1.0);
        assert_eq!(undual(&dual(&a, None).unwrap(), None).unwrap(), a);
        let d = compile_frame(&FrameSpec::diagonal(&[1.0, 0.0])).unwrap();
        assert!(dual(&b(&d, 1, 1.0), None).is_err());
    }

    #[test]
    fn cross_products() {
        let f = euclid(3);
        let (e0, e1) = (b(&f, 1, 1.0), b(&f, 2, 1.0));
        assert_eq!(cross3(&e0, &e1).unwrap(), b(&f, 4, 1.0));
        assert!(cross3(&e0, &e0).unwrap().is_zero());
        assert_eq!(cross3(&e1, &e0).unwrap(), cross3(&e0, &e1).unwrap().neg());
        assert!(cross3(&b(&euclid(4), 1, 1.0), &b(&euclid(4), 2, 1.0)).is_err());
        assert!(cross3(&b(&f, 3, 1.0), &e0).is_err());
    }

    #[test]
    fn blade_angles() {
        let f = euclid(3);
        assert_eq!(euclidean_blade_angle(&b(&f, 1, 1.0), &b(&f, 1, 1.0)).unwrap(), 0.0);
        assert!((euclidean_blade_angle(&b(&f, 1, 1.0), &b(&f, 2, 1.0)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((euclidean_blade_angle(&b(&f, 3, 1.0), &b(&f, 5, 1.0)).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!(euclidean_blade_angle(&b(&f, 1, 1.0), &Multivector::zero(&f)).is_err());
    }
}
