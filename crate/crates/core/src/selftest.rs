//! Built-in verification suites: exhaustive blade checks against a
//! list-sorting oracle plus randomized algebraic identities over several
//! frames per dimension.

use std::fmt;
use std::sync::Arc;

use crate::blades::{self, BladeId, MAX_DIMENSION};
use crate::error::Result;
use crate::frames::{compile_frame, Frame, FrameSpec, MAX_NON_ORTHOGONAL_DIMENSION};
use crate::linalg::Matrix;
use crate::maps::{self, Outermorphism, Representation};
use crate::multivector::{linear_combine, Multivector};
use crate::products::{self, gp, outer};
use crate::random::Sampler;

/// Exhaustive pair checks stop at this dimension.
pub const EXHAUSTIVE_DIMENSION: usize = 8;

const SAMPLES: usize = 20;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.passed == self.total
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.ok() { "ok" } else { "FAILED" };
        write!(f, "{:<22} {}/{} {status}", self.name, self.passed, self.total)?;
        if let Some(msg) = &self.first_failure {
            write!(f, " ({msg})")?;
        }
        Ok(())
    }
}

struct Suite(SuiteReport);

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite(SuiteReport { name, passed: 0, total: 0, first_failure: None })
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.0.total += 1;
        if ok {
            self.0.passed += 1;
        } else if self.0.first_failure.is_none() {
            self.0.first_failure = Some(what());
        }
    }

    fn check_result(&mut self, r: Result<bool>, what: impl FnOnce() -> String) {
        match r {
            Ok(ok) => self.check(ok, what),
            Err(e) => self.check(false, || format!("{}: {e}", what())),
        }
    }
}

/// `F_r F_s` on a diagonal metric by concatenating index lists, bubble
/// sorting (one sign flip per swap) and contracting equal neighbours.
pub fn list_product(r: BladeId, s: BladeId, diag: &[f64]) -> (f64, BladeId) {
    let mut v: Vec<usize> = r.vector_indices().chain(s.vector_indices()).collect();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len().saturating_sub(i + 1) {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    let mut out = 0u32;
    let mut k = 0;
    while k < v.len() {
        if k + 1 < v.len() && v[k] == v[k + 1] {
            sign *= diag[v[k]];
            k += 2;
        } else {
            out |= 1 << v[k];
            k += 1;
        }
    }
    (sign, BladeId(out))
}

fn close(a: &Multivector, b: &Multivector, tol: f64) -> Result<bool> {
    let scale = a.max_abs().max(b.max_abs()).max(1.0);
    Ok(a.max_abs_diff(b)? <= tol * scale)
}

fn close_real(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Frames exercised at dimension `n`: Euclidean, a mixed signature, a
/// general diagonal metric and (for n ≥ 2) a non-orthogonal metric.
pub fn test_frames(n: usize, sampler: &mut Sampler) -> Result<Vec<Arc<Frame>>> {
    let mut frames = vec![compile_frame(&FrameSpec::euclidean(n))?];
    if n >= 2 {
        frames.push(compile_frame(&FrameSpec::signature(n - 1, 1, 0))?);
    }
    let diag: Vec<f64> = (0..n).map(|i| [2.0, -0.5, 3.0, -1.5][i % 4]).collect();
    frames.push(compile_frame(&FrameSpec::diagonal(&diag))?);
    if (2..=MAX_NON_ORTHOGONAL_DIMENSION).contains(&n) {
        let m = sampler.invertible_matrix(n);
        let d: Vec<f64> = (0..n).map(|i| if i + 1 == n { -1.0 } else { 1.0 }).collect();
        let a = m.try_mul(&Matrix::from_diagonal(&d))?.try_mul(&m.transpose())?;
        let a = Matrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
        frames.push(compile_frame(&FrameSpec::matrix(a))?);
    }
    Ok(frames)
}

/// Runs every suite for dimensions `1..=max_dim` with a fixed seed.
pub fn run(max_dim: usize, seed: u64) -> Vec<SuiteReport> {
    let max_dim = max_dim.clamp(1, MAX_DIMENSION);
    let mut sampler = Sampler::new(seed);
    let mut ids = Suite::new("blade ids");
    let mut signs = Suite::new("sign table");
    let mut orth = Suite::new("orthogonal gp");
    let mut axioms = Suite::new("gp axioms");
    let mut nonorth = Suite::new("non-orthogonal frames");
    let mut prods = Suite::new("derived products");
    let mut oms = Suite::new("outermorphisms");
    let mut versors = Suite::new("versors");
    let mut refl = Suite::new("reflections");

    for n in 1..=max_dim {
        blade_id_checks(&mut ids, n);
        if n <= EXHAUSTIVE_DIMENSION {
            sign_checks(&mut signs, n);
        }
        let frames = match test_frames(n, &mut sampler) {
            Ok(f) => f,
            Err(e) => {
                axioms.check(false, || format!("n={n}: frame construction failed: {e}"));
                continue;
            }
        };
        for frame in &frames {
            if let Some(diag) = frame.diag() {
                if n <= EXHAUSTIVE_DIMENSION.min(6) {
                    orthogonal_checks(&mut orth, frame, diag);
                }
            } else {
                non_orthogonal_checks(&mut nonorth, frame, &mut sampler);
            }
            axiom_checks(&mut axioms, frame, &mut sampler);
            product_checks(&mut prods, frame, &mut sampler);
            outermorphism_checks(&mut oms, frame, &mut sampler);
            versor_checks(&mut versors, frame, &mut sampler);
            reflection_checks(&mut refl, frame, &mut sampler);
        }
    }
    [ids, signs, orth, axioms, nonorth, prods, oms, versors, refl].into_iter().map(|s| s.0).collect()
}

fn blade_id_checks(s: &mut Suite, n: usize) {
    for g in 0..=n {
        for k in 0..blades::binomial(n, g) {
            let ok = blades::id_from_grade_index(g, k, n)
                .is_ok_and(|id| id.grade() == g && id.index() == k && id.is_valid_in(n));
            s.check(ok, || format!("n={n}: grade {g} index {k} does not round-trip"));
        }
    }
}

fn sign_checks(s: &mut Suite, n: usize) {
    let ones = vec![1.0; n];
    for r in 0..(1u32 << n) {
        for t in 0..(1u32 << n) {
            let (r, t) = (BladeId(r), BladeId(t));
            let (sign, id) = list_product(r, t, &ones);
            let term = blades::egp(r, t, n);
            s.check(term.id == id && term.coef == sign, || format!("n={n}: sign of {r} * {t}"));
        }
    }
}

fn orthogonal_checks(s: &mut Suite, frame: &Arc<Frame>, diag: &[f64]) {
    let n = frame.dimension();
    for r in 0..(1u32 << n) {
        for t in 0..(1u32 << n) {
            let (r, t) = (BladeId(r), BladeId(t));
            let (coef, id) = list_product(r, t, diag);
            let ok = (|| {
                let p = gp(&Multivector::blade(frame, r, 1.0)?, &Multivector::blade(frame, t, 1.0)?)?;
                let want = Multivector::blade(frame, id, coef)?;
                Ok(p == want)
            })();
            s.check_result(ok, || format!("{} frame n={n}: {r} * {t}", frame.kind()));
        }
    }
}

fn axiom_checks(s: &mut Suite, frame: &Arc<Frame>, rng: &mut Sampler) {
    let n = frame.dimension();
    for _ in 0..SAMPLES {
        let (a, b, c) = (rng.multivector(frame), rng.multivector(frame), rng.multivector(frame));
        let assoc = (|| close(&gp(&gp(&a, &b)?, &c)?, &gp(&a, &gp(&b, &c)?)?, 1e-9))();
        s.check_result(assoc, || format!("{} n={n}: associativity", frame.kind()));
        let dist = (|| close(&gp(&a, &b.add(&c)?)?, &gp(&a, &b)?.add(&gp(&a, &c)?)?, 1e-9))();
        s.check_result(dist, || format!("{} n={n}: distributivity", frame.kind()));
        let unit = (|| close(&gp(&Multivector::scalar(frame, 1.0), &a)?, &a, 1e-9))();
        s.check_result(unit, || format!("{} n={n}: scalar identity", frame.kind()));
    }
    let ipm = frame.ipm();
    for i in 0..n {
        for j in 0..n {
            let ok = (|| {
                let (fi, fj) = (Multivector::basis_vector(frame, i)?, Multivector::basis_vector(frame, j)?);
                let sym = linear_combine(0.5, &gp(&fi, &fj)?, 0.5, &gp(&fj, &fi)?)?;
                close(&sym, &Multivector::scalar(frame, ipm[(i, j)]), 1e-9)
            })();
            s.check_result(ok, || format!("{} n={n}: f{i}·f{j} differs from the metric", frame.kind()));
        }
    }
}

fn non_orthogonal_checks(s: &mut Suite, frame: &Arc<Frame>, rng: &mut Sampler) {
    let n = frame.dimension();
    let base = frame.base().expect("non-orthogonal frame has a base");
    let c = base.cbm();
    let rebuilt = c.try_mul(base.frame().ipm()).and_then(|m| m.try_mul(&c.transpose()));
    s.check(
        rebuilt.is_ok_and(|m| {
            m.max_abs_diff(frame.ipm()) <= 1e-9 * frame.ipm().max_abs_diff(&Matrix::zeros(n, n)).max(1.0)
        }),
        || format!("n={n}: C·D·Cᵀ does not reproduce the metric"),
    );
    for _ in 0..SAMPLES {
        let x = rng.multivector(frame);
        let back = Multivector::from_terms(frame, frame.from_base_terms(&frame.to_base_terms(x.terms())));
        s.check_result(close(&back, &x, 1e-9), || format!("n={n}: base round trip is not the identity"));
    }
}

fn product_checks(s: &mut Suite, frame: &Arc<Frame>, rng: &mut Sampler) {
    let n = frame.dimension();
    let k = frame.kind();
    for _ in 0..SAMPLES {
        let v = rng.vector(frame);
        let x = rng.multivector(frame);
        let (y, z) = (rng.multivector(frame), rng.multivector(frame));
        // v∧X = ½(vX + X̂v), v⌋X = ½(vX − X̂v)
        let vx = gp(&v, &x);
        let xv = gp(&x.grade_involution(), &v);
        let ok = (|| close(&outer(&v, &x)?, &linear_combine(0.5, &vx.clone()?, 0.5, &xv.clone()?)?, 1e-9))();
        s.check_result(ok, || format!("{k} n={n}: v^X"));
        let ok = (|| {
            close(&products::contract_left(&v, &x)?, &linear_combine(0.5, &vx.clone()?, -0.5, &xv.clone()?)?, 1e-9)
        })();
        s.check_result(ok, || format!("{k} n={n}: v<|X"));
        let ok = (|| close(&outer(&outer(&x, &y)?, &z)?, &outer(&x, &outer(&y, &z)?)?, 1e-9))();
        s.check_result(ok, || format!("{k} n={n}: outer associativity"));
        let ok = (|| Ok(close_real(products::scalar_product(&x, &y)?, products::scalar_product(&y, &x)?, 1e-9)))();
        s.check_result(ok, || format!("{k} n={n}: scalar product symmetry"));
        // (X∧Y)⌋Z = X⌋(Y⌋Z)
        let ok = (|| {
            let lhs = products::contract_left(&outer(&x, &y)?, &z)?;
            let rhs = products::contract_left(&x, &products::contract_left(&y, &z)?)?;
            close(&lhs, &rhs, 1e-9)
        })();
        s.check_result(ok, || format!("{k} n={n}: contraction duality"));
        let ok = (|| {
            let sum = products::commutator(&x, &y)?.add(&products::anti_commutator(&x, &y)?)?;
            close(&sum, &gp(&x, &y)?, 1e-9)
        })();
        s.check_result(ok, || format!("{k} n={n}: cp + acp = gp"));
    }
}

fn outermorphism_checks(s: &mut Suite, frame: &Arc<Frame>, rng: &mut Sampler) {
    let n = frame.dimension();
    let k = frame.kind();
    for _ in 0..SAMPLES.min(10) {
        let m = rng.invertible_matrix(n);
        let Ok(f) = Outermorphism::from_vector_matrix(&m, frame, frame) else {
            s.check(false, || format!("{k} n={n}: outermorphism construction"));
            continue;
        };
        let (ga, gb) = (rng.index(n + 1), rng.index(n + 1));
        let (x, y) = (rng.blade(frame, ga), rng.blade(frame, gb));
        let ok = (|| close(&f.apply(&outer(&x, &y)?)?, &outer(&f.apply(&x)?, &f.apply(&y)?)?, 1e-9))();
        s.check_result(ok, || format!("{k} n={n}: outermorphism law"));
        let ok = (|| Ok(close_real(f.det()?, m.determinant()?, 1e-9)))();
        s.check_result(ok, || format!("{k} n={n}: determinant"));
        let ok = (|| {
            let g = Outermorphism::from_vector_matrix(&rng.invertible_matrix(n), frame, frame)?;
            Ok(close_real(g.compose(&f)?.det()?, g.det()? * f.det()?, 1e-8))
        })();
        s.check_result(ok, || format!("{k} n={n}: determinant multiplicativity"));
        let a = rng.multivector(frame);
        let ok = (|| close(&f.inverse()?.apply(&f.apply(&a)?)?, &a, 1e-8))();
        s.check_result(ok, || format!("{k} n={n}: inverse"));
        let ok = (|| close(&f.inverse_via_duality(&a)?, &f.inverse()?.apply(&a)?, 1e-7))();
        s.check_result(ok, || format!("{k} n={n}: inverse via duality"));
        if frame.is_non_degenerate() {
            let b = rng.multivector(frame);
            let ok = (|| {
                let lhs = products::scalar_product(&f.apply(&a)?, &b)?;
                let rhs = products::scalar_product(&a, &f.adjoint()?.apply(&b)?)?;
                Ok(close_real(lhs, rhs, 1e-8))
            })();
            s.check_result(ok, || format!("{k} n={n}: adjoint identity"));
        }
    }
}

fn versor_checks(s: &mut Suite, frame: &Arc<Frame>, rng: &mut Sampler) {
    let n = frame.dimension();
    let k = frame.kind();
    if !frame.is_non_degenerate() {
        return;
    }
    for i in 0..SAMPLES.min(10) {
        let (v, w) = match (rng.versor(frame, 1 + i % 3), rng.versor(frame, 1 + i % 2)) {
            (Ok(v), Ok(w)) => (v, w),
            _ => {
                s.check(false, || format!("{k} n={n}: versor construction"));
                continue;
            }
        };
        let (x, y) = (rng.multivector(frame), rng.multivector(frame));
        for (name, op) in [
            ("gp", gp as fn(&Multivector, &Multivector) -> Result<Multivector>),
            ("op", outer),
            ("lcont", products::contract_left),
        ] {
            let ok = (|| close(&v.apply(&op(&x, &y)?)?, &op(&v.apply(&x)?, &v.apply(&y)?)?, 1e-8))();
            s.check_result(ok, || format!("{k} n={n}: versor preserves {name}"));
        }
        let ok = (|| {
            let vw = maps::Versor::new(gp(v.value(), w.value())?)?;
            close(&vw.apply(&x)?, &v.apply(&w.apply(&x)?)?, 1e-9)
        })();
        s.check_result(ok, || format!("{k} n={n}: versor composition"));
        let ok = (|| {
            let det = v.vector_matrix()?.determinant()?;
            Ok(close_real(det, v.parity().sign(), 1e-8))
        })();
        s.check_result(ok, || format!("{k} n={n}: versor determinant matches parity"));
    }
}

fn reflection_checks(s: &mut Suite, frame: &Arc<Frame>, rng: &mut Sampler) {
    let n = frame.dimension();
    let k = frame.kind();
    if !frame.is_non_degenerate() {
        return;
    }
    use Representation::{Direct, Dual};
    for _ in 0..SAMPLES.min(10) {
        let a = rng.non_null_vector(frame);
        let g = rng.index(n + 1);
        let x = rng.blade(frame, g);
        for (ra, rx) in [(Direct, Direct), (Direct, Dual), (Dual, Direct), (Dual, Dual)] {
            let ok = (|| close(&maps::reflect(&a, &maps::reflect(&a, &x, ra, rx)?, ra, rx)?, &x, 1e-9))();
            s.check_result(ok, || format!("{k} n={n}: reflect {ra:?}/{rx:?} is not an involution"));
        }
    }
}
