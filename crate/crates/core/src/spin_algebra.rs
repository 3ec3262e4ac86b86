//! Angular-momentum matrices in the maximal multiplet `J = N/2`.
//!
//! Basis order is ascending in `M`: index 0 is `|J, −J⟩`. `J_y` is imaginary in
//! this basis, so only the real matrix `J_y² = −(J_+ − J_−)²/4` is provided.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// The `(N, J = N/2, d = N + 1)` representation all matrices live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Multiplet {
    n_particles: u32,
}

impl Multiplet {
    pub fn new(n_particles: u32) -> Result<Self> {
        if n_particles == 0 {
            return Err(Error::InvalidInput(
                "number of particles must be at least 1".into(),
            ));
        }
        Ok(Self { n_particles })
    }

    pub fn n_particles(&self) -> u32 {
        self.n_particles
    }

    /// Twice the spin, `2J = N`, kept integral so half-integer spins stay exact.
    pub fn twice_j(&self) -> u32 {
        self.n_particles
    }

    pub fn j(&self) -> f64 {
        f64::from(self.n_particles) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.n_particles as usize + 1
    }

    /// `J(J+1) = N(N+2)/4`.
    pub fn casimir(&self) -> f64 {
        let n = f64::from(self.n_particles);
        n * (n + 2.0) / 4.0
    }

    /// `M` of basis vector `index` (0 ↦ −J).
    pub fn m_of(&self, index: usize) -> f64 {
        (2.0 * index as f64 - f64::from(self.n_particles)) / 2.0
    }

    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |k| self.m_of(k))
    }
}

/// Dense real square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out[(i, i)] = 1.0;
        }
        out
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut out = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            out[(i, i)] = d;
        }
        out
    }

    /// Builds from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|x| x * factor).collect(),
        }
    }

    /// Largest `|a_ij − a_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    /// Bit-identical transposed entries.
    pub fn is_exactly_symmetric(&self) -> bool {
        (0..self.dim).all(|i| {
            ((i + 1)..self.dim).all(|j| self[(i, j)].to_bits() == self[(j, i)].to_bits())
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self, other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dims(self, other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn check_dims(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

impl std::ops::Index<(usize, usize)> for OperatorMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.dim + j]
    }
}

// Operator sugar for same-multiplet arithmetic; panics on mismatched dimensions.
impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| format!("{:>10.6}", self[(i, j)]))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ladder {
    Raise,
    Lower,
}

pub fn build_jz(m: Multiplet) -> OperatorMatrix {
    let diag: Vec<f64> = m.m_values().collect();
    OperatorMatrix::from_diagonal(&diag)
}

/// `J_+|M⟩ = √(J(J+1) − M(M+1)) |M+1⟩`; `J_−` is the transpose.
pub fn build_ladder(m: Multiplet, sign: Ladder) -> OperatorMatrix {
    let dim = m.dim();
    let casimir = m.casimir();
    let mut raise = OperatorMatrix::zeros(dim);
    for k in 0..dim.saturating_sub(1) {
        let mq = m.m_of(k);
        raise[(k + 1, k)] = (casimir - mq * (mq + 1.0)).sqrt();
    }
    match sign {
        Ladder::Raise => raise,
        Ladder::Lower => raise.transpose(),
    }
}

pub fn build_jx(m: Multiplet) -> OperatorMatrix {
    let raise = build_ladder(m, Ladder::Raise);
    let lower = build_ladder(m, Ladder::Lower);
    (&raise + &lower).scale(0.5)
}

/// `J_y² = −(J_+ − J_−)²/4`, real and symmetric.
pub fn build_jy_squared(m: Multiplet) -> OperatorMatrix {
    let raise = build_ladder(m, Ladder::Raise);
    let lower = build_ladder(m, Ladder::Lower);
    let diff = &raise - &lower;
    (&diff * &diff).scale(-0.25)
}

pub fn build_j2(m: Multiplet) -> OperatorMatrix {
    OperatorMatrix::identity(m.dim()).scale(m.casimir())
}

/// `ab − ba`.
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mult(n: u32) -> Multiplet {
        Multiplet::new(n).unwrap()
    }

    fn superdiag_of_raise(op: &OperatorMatrix) -> Vec<f64> {
        (0..op.dim() - 1).map(|k| op[(k + 1, k)]).collect()
    }

    #[test]
    fn multiplet_rejects_zero_particles() {
        assert!(matches!(Multiplet::new(0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn multiplet_counts() {
        for n in 1..=64 {
            let m = mult(n);
            assert_eq!(m.dim() as f64, 2.0 * m.j() + 1.0);
            let nf = f64::from(n);
            assert_eq!(m.j() * (m.j() + 1.0), nf * (nf + 2.0) / 4.0);
        }
    }

    #[test]
    fn jz_examples() {
        assert_eq!(build_jz(mult(2)).diagonal(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(build_jz(mult(1)).diagonal(), vec![-0.5, 0.5]);
        assert_eq!(build_jz(mult(4)).diagonal(), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn ladder_examples() {
        let s2 = 2f64.sqrt();
        assert_eq!(superdiag_of_raise(&build_ladder(mult(2), Ladder::Raise)), vec![s2, s2]);
        assert_eq!(superdiag_of_raise(&build_ladder(mult(1), Ladder::Raise)), vec![1.0]);
        let s6 = 6f64.sqrt();
        let got = superdiag_of_raise(&build_ladder(mult(4), Ladder::Raise));
        for (g, e) in got.iter().zip([2.0, s6, s6, 2.0]) {
            assert!((g - e).abs() < 1e-15, "{got:?}");
        }
        let lower = build_ladder(mult(4), Ladder::Lower);
        assert_eq!(lower, build_ladder(mult(4), Ladder::Raise).transpose());
    }

    #[test]
    fn jx_examples() {
        let jx1 = build_jx(mult(1));
        assert_eq!(jx1[(0, 1)], 0.5);
        assert_eq!(jx1[(1, 0)], 0.5);
        let jx2 = build_jx(mult(2));
        let h = 2f64.sqrt() / 2.0;
        assert!((jx2[(0, 1)] - h).abs() < 1e-15);
        assert!((jx2[(1, 2)] - h).abs() < 1e-15);
        assert_eq!(jx2[(0, 2)], 0.0);
        for n in 1..=20 {
            assert_eq!(build_jx(mult(n)).trace(), 0.0);
        }
    }

    #[test]
    fn j2_examples() {
        assert_eq!(build_j2(mult(2)), OperatorMatrix::identity(3).scale(2.0));
        assert_eq!(build_j2(mult(4)), OperatorMatrix::identity(5).scale(6.0));
        assert_eq!(build_j2(mult(1)), OperatorMatrix::identity(2).scale(0.75));
    }

    #[test]
    fn commutator_rejects_mismatch() {
        let a = build_jz(mult(2));
        let b = build_jz(mult(3));
        assert!(matches!(
            commutator(&a, &b),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn casimir_commutes_with_jz() {
        let m = mult(6);
        let c = commutator(&build_j2(m), &build_jz(m)).unwrap();
        assert_eq!(c.frobenius_norm(), 0.0);
    }

    #[test]
    fn su2_algebra_for_all_sizes() {
        for n in 1..=64 {
            let m = mult(n);
            let jz = build_jz(m);
            let jp = build_ladder(m, Ladder::Raise);
            let jm = build_ladder(m, Ladder::Lower);
            let tol = 1e-12;
            assert!(commutator(&jz, &jp).unwrap().max_abs_diff(&jp).unwrap() < tol);
            assert!(commutator(&jz, &jm).unwrap().max_abs_diff(&jm.scale(-1.0)).unwrap() < tol);
            let pm = commutator(&jp, &jm).unwrap();
            // ladder entries grow like N, so products carry ~N² rounding
            let scale = m.casimir().max(1.0);
            assert!(pm.max_abs_diff(&jz.scale(2.0)).unwrap() < tol * scale, "N={n}");

            let jx = build_jx(m);
            let sum = &(&(&jx * &jx) + &build_jy_squared(m)) + &(&jz * &jz);
            assert!(sum.max_abs_diff(&build_j2(m)).unwrap() < tol * scale, "N={n}");
        }
    }

    #[test]
    fn hermitian_real_matrices_are_bitwise_symmetric() {
        for n in 1..=40 {
            let m = mult(n);
            for op in [build_jz(m), build_jx(m), build_j2(m), build_jy_squared(m)] {
                assert!(op.is_exactly_symmetric(), "N={n}");
            }
            if n > 0 {
                assert!(!build_ladder(m, Ladder::Raise).is_exactly_symmetric());
            }
        }
    }
}
