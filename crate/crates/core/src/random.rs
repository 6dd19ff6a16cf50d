//! Seeded random multivectors, blades, versors and matrices.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blades::BladeId;
use crate::error::Result;
use crate::frames::Frame;
use crate::linalg::Matrix;
use crate::maps::{versor_from_vectors, Versor};
use crate::multivector::{Multivector, Terms};
use crate::products;

/// Reproducible sampler; the same seed yields the same sequence.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Uniform in `[-1, 1]`.
    pub fn real(&mut self) -> f64 {
        self.rng.random_range(-1.0..=1.0)
    }

    pub fn index(&mut self, below: usize) -> usize {
        self.rng.random_range(0..below)
    }

    /// Each basis blade present with probability ½, coefficients in `[-1, 1]`.
    pub fn multivector(&mut self, frame: &Arc<Frame>) -> Multivector {
        let mut terms = Terms::new();
        for id in 0..(1u32 << frame.dimension()) {
            if self.rng.random_bool(0.5) {
                terms.insert(BladeId(id), self.real());
            }
        }
        terms.retain(|_, c| *c != 0.0);
        Multivector::from_terms(frame, terms)
    }

    pub fn vector(&mut self, frame: &Arc<Frame>) -> Multivector {
        let coords: Vec<f64> = (0..frame.dimension()).map(|_| self.real()).collect();
        Multivector::vector(frame, &coords).expect("dimension matches")
    }

    /// Outer product of `grade` random vectors.
    pub fn blade(&mut self, frame: &Arc<Frame>, grade: usize) -> Multivector {
        let mut acc = Multivector::scalar(frame, 1.0);
        for _ in 0..grade {
            let v = self.vector(frame);
            acc = products::outer(&acc, &v).expect("same frame");
        }
        acc
    }

    /// A vector with `|v·v|` comfortably away from zero. Gives up after a
    /// bounded number of draws (fully degenerate frames have no such vector).
    pub fn non_null_vector(&mut self, frame: &Arc<Frame>) -> Multivector {
        let mut v = self.vector(frame);
        for _ in 0..1000 {
            if products::norm(&v).is_ok_and(|n| n.abs() > 0.05) {
                break;
            }
            v = self.vector(frame);
        }
        v
    }

    /// Geometric product of `k` non-null vectors.
    pub fn versor(&mut self, frame: &Arc<Frame>, k: usize) -> Result<Versor> {
        let vs: Vec<Multivector> = (0..k).map(|_| self.non_null_vector(frame)).collect();
        versor_from_vectors(frame, &vs)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.real())
    }

    /// Random square matrix with `|det| ≥ 0.1`.
    pub fn invertible_matrix(&mut self, n: usize) -> Matrix {
        loop {
            let m = self.matrix(n, n);
            if m.determinant().is_ok_and(|d| d.abs() >= 0.1) {
                return m;
            }
        }
    }

    pub fn symmetric_matrix(&mut self, n: usize) -> Matrix {
        let m = self.matrix(n, n);
        Matrix::from_fn(n, n, |i, j| m[(i.min(j), i.max(j))])
    }

    /// Orthonormalized random matrix (Gram-Schmidt on the columns).
    pub fn orthogonal_matrix(&mut self, n: usize) -> Matrix {
        let m = self.invertible_matrix(n);
        let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
        for j in 0..n {
            let mut c = m.column(j);
            for _ in 0..2 {
                for q in &cols {
                    let dot: f64 = c.iter().zip(q).map(|(a, b)| a * b).sum();
                    c.iter_mut().zip(q).for_each(|(a, b)| *a -= dot * b);
                }
            }
            let len = c.iter().map(|a| a * a).sum::<f64>().sqrt();
            c.iter_mut().for_each(|a| *a /= len);
            cols.push(c);
        }
        Matrix::from_fn(n, n, |i, j| cols[j][i])
    }

    /// Orthogonal matrix with determinant +1.
    pub fn rotation_matrix(&mut self, n: usize) -> Matrix {
        let mut m = self.orthogonal_matrix(n);
        if m.determinant().is_ok_and(|d| d < 0.0) {
            for i in 0..n {
                m[(i, 0)] = -m[(i, 0)];
            }
        }
        m
    }
}
