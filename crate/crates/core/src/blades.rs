//! Metric-independent combinatorics of basis blades.
//!
//! A basis blade is named by an integer whose set bits select the basis
//! vectors `f_0 … f_{n-1}` taking part in the outer product, in ascending
//! order. Everything in this module depends only on those bits: grade,
//! index among same-grade blades, reversion and involution signs, the
//! Euclidean geometric-product sign, and the bit tests that decide whether
//! a bilinear product of two basis blades vanishes structurally.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Largest supported vector-space dimension.
pub const MAX_DIMENSION: usize = 16;

/// Default largest dimension for which a full sign table is memoized.
pub const DEFAULT_SIGN_TABLE_CAP: usize = 12;

static SIGN_TABLE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SIGN_TABLE_CAP);

/// Bit pattern naming a basis blade; bit `i` set means `f_i` participates.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BladeId(pub u32);

impl BladeId {
    pub const SCALAR: BladeId = BladeId(0);

    /// The grade-1 blade `f_i`.
    pub fn vector(i: usize) -> Self {
        BladeId(1 << i)
    }

    /// The pseudo-scalar `f_0 ∧ … ∧ f_{n-1}`.
    pub fn pseudo_scalar(n: usize) -> Self {
        BladeId(((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> usize {
        grade(self)
    }

    pub fn index(self) -> usize {
        index(self)
    }

    /// Basis-vector indices in ascending order.
    pub fn vector_indices(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Smallest dimension whose blades include this one.
    pub fn min_dimension(self) -> usize {
        (u32::BITS - self.0.leading_zeros()) as usize
    }

    pub fn is_valid_in(self, n: usize) -> bool {
        self.min_dimension() <= n
    }
}

impl fmt::Display for BladeId {
    /// `1` for the scalar blade, otherwise `e0^e2^e3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        for (k, i) in self.vector_indices().enumerate() {
            if k > 0 {
                f.write_str("^")?;
            }
            write!(f, "e{i}")?;
        }
        Ok(())
    }
}

impl BitXor for BladeId {
    type Output = BladeId;
    fn bitxor(self, rhs: Self) -> Self {
        BladeId(self.0 ^ rhs.0)
    }
}

impl BitAnd for BladeId {
    type Output = BladeId;
    fn bitand(self, rhs: Self) -> Self {
        BladeId(self.0 & rhs.0)
    }
}

impl BitOr for BladeId {
    type Output = BladeId;
    fn bitor(self, rhs: Self) -> Self {
        BladeId(self.0 | rhs.0)
    }
}

impl Not for BladeId {
    type Output = BladeId;
    fn not(self) -> Self {
        BladeId(!self.0)
    }
}

/// A weighted basis blade.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub id: BladeId,
}

impl Term {
    pub fn new(coef: f64, id: BladeId) -> Self {
        Term { coef, id }
    }
}

/// The bilinear products the kernel knows how to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductKind {
    /// Geometric product.
    Gp,
    Outer,
    /// Scalar product.
    Sp,
    LeftContraction,
    RightContraction,
    FatDot,
    /// Hestenes inner product.
    Hip,
    /// Commutator product.
    Cp,
    /// Anti-commutator product.
    Acp,
    /// Regressive product.
    Rp,
}

impl ProductKind {
    pub const ALL: [ProductKind; 10] = [
        ProductKind::Gp,
        ProductKind::Outer,
        ProductKind::Sp,
        ProductKind::LeftContraction,
        ProductKind::RightContraction,
        ProductKind::FatDot,
        ProductKind::Hip,
        ProductKind::Cp,
        ProductKind::Acp,
        ProductKind::Rp,
    ];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ProductKind::Gp => "gp",
            ProductKind::Outer => "op",
            ProductKind::Sp => "sp",
            ProductKind::LeftContraction => "lcont",
            ProductKind::RightContraction => "rcont",
            ProductKind::FatDot => "fatdot",
            ProductKind::Hip => "hip",
            ProductKind::Cp => "cp",
            ProductKind::Acp => "acp",
            ProductKind::Rp => "rp",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        ProductKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

pub fn grade(id: BladeId) -> usize {
    id.0.count_ones() as usize
}

/// Position of `id` among the ids of the same grade in ascending order.
pub fn index(id: BladeId) -> usize {
    // combinatorial number system: sum of C(p_j, j) over set-bit positions
    id.vector_indices().enumerate().map(|(j, p)| binomial(p, j + 1)).sum()
}

/// Inverse of `(grade, index)` in an `n`-dimensional frame.
pub fn id_from_grade_index(g: usize, k: usize, n: usize) -> Result<BladeId> {
    if n > MAX_DIMENSION || g > n || k >= binomial(n, g) {
        return Err(Error::domain(format!("no basis blade with grade {g} and index {k} in dimension {n}")));
    }
    let mut bits = 0u32;
    let mut rest = k;
    for j in (1..=g).rev() {
        // largest p with C(p, j) <= rest
        let mut p = j - 1;
        while binomial(p + 1, j) <= rest {
            p += 1;
        }
        rest -= binomial(p, j);
        bits |= 1 << p;
    }
    Ok(BladeId(bits))
}

/// All ids of grade `g` in dimension `n`, in index order.
pub fn ids_of_grade(g: usize, n: usize) -> Vec<BladeId> {
    (0..binomial(n, g)).map(|k| id_from_grade_index(g, k, n).expect("k in range")).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(-1)^(g(g-1)/2)`.
pub fn reverse_sign(id: BladeId) -> i32 {
    let g = grade(id);
    if (g * g.saturating_sub(1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(-1)^g`.
pub fn involution_sign(id: BladeId) -> i32 {
    if grade(id).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of `E_r E_s` relative to `E_{r xor s}` for Euclidean basis blades,
/// evaluated bit by bit: each vector of `s` is moved left past every higher
/// vector still present in the running product, then merged.
pub fn egp_sign_direct(r: BladeId, s: BladeId, n: usize) -> i32 {
    let mut sign = 1;
    let mut id_r = r.0;
    for i in 0..n {
        if s.0 >> i & 1 == 1 {
            let above = if i + 1 >= 32 { 0 } else { id_r >> (i + 1) };
            if above.count_ones() % 2 == 1 {
                sign = -sign;
            }
            id_r ^= 1 << i;
        }
    }
    sign
}

/// Sets the largest dimension for which `egp_sign` builds a memo table.
/// Tables already built stay in place.
pub fn set_sign_table_cap(n: usize) {
    SIGN_TABLE_CAP.store(n.min(MAX_DIMENSION), Ordering::Relaxed);
}

pub fn sign_table_cap() -> usize {
    SIGN_TABLE_CAP.load(Ordering::Relaxed)
}

fn sign_table(n: usize) -> &'static [i8] {
    static TABLES: [OnceLock<Vec<i8>>; MAX_DIMENSION + 1] = [const { OnceLock::new() }; MAX_DIMENSION + 1];
    TABLES[n].get_or_init(|| {
        let size = 1usize << n;
        let mut table = Vec::with_capacity(size * size);
        for r in 0..size as u32 {
            for s in 0..size as u32 {
                table.push(egp_sign_direct(BladeId(r), BladeId(s), n) as i8);
            }
        }
        table
    })
}

/// Sign of the Euclidean geometric product of basis blades `r` and `s`.
/// Memoized per dimension up to [`sign_table_cap`].
pub fn egp_sign(r: BladeId, s: BladeId, n: usize) -> i32 {
    debug_assert!(r.is_valid_in(n) && s.is_valid_in(n));
    if n <= sign_table_cap() {
        let size = 1usize << n;
        sign_table(n)[r.0 as usize * size + s.0 as usize] as i32
    } else {
        egp_sign_direct(r, s, n)
    }
}

/// Euclidean geometric product of two basis blades.
pub fn egp(r: BladeId, s: BladeId, n: usize) -> Term {
    Term::new(egp_sign(r, s, n) as f64, r ^ s)
}

/// Bit-level zero test for the product of `F_r` and `F_s`.
///
/// Only meaningful for products whose basis-blade value is either zero or
/// the geometric product itself; GP and RP have no selector.
pub fn product_nonzero(kind: ProductKind, r: BladeId, s: BladeId) -> Result<bool> {
    selector(kind)
        .map(|sel| sel(r, s))
        .ok_or_else(|| Error::domain(format!("product `{}` has no bit selector", kind.name())))
}

pub(crate) type Selector = fn(BladeId, BladeId) -> bool;

pub(crate) fn selector(kind: ProductKind) -> Option<Selector> {
    Some(match kind {
        ProductKind::Gp | ProductKind::Rp => return None,
        ProductKind::Outer => |r, s| (r & s).0 == 0,
        ProductKind::Sp => |r, s| (r ^ s).0 == 0,
        ProductKind::LeftContraction => |r, s| (r & !s).0 == 0,
        ProductKind::RightContraction => |r, s| (s & !r).0 == 0,
        ProductKind::FatDot => fat_dot_nonzero,
        ProductKind::Hip => |r, s| grade(r) * grade(s) > 0 && fat_dot_nonzero(r, s),
        ProductKind::Cp => |r, s| !signs_commute(r, s),
        ProductKind::Acp => signs_commute,
    })
}

fn fat_dot_nonzero(r: BladeId, s: BladeId) -> bool {
    let (a, b) = (grade(r), grade(s));
    match a.cmp(&b) {
        std::cmp::Ordering::Equal => (r ^ s).0 == 0,
        std::cmp::Ordering::Less => (r & !s).0 == 0,
        std::cmp::Ordering::Greater => (s & !r).0 == 0,
    }
}

fn signs_commute(r: BladeId, s: BladeId) -> bool {
    let n = r.min_dimension().max(s.min_dimension());
    egp_sign(r, s, n) == egp_sign(s, r, n)
}
