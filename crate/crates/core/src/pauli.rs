//! Phase-tracked Pauli strings in symplectic form.
//!
//! A string over `n <= 64` spins is stored as `i^phase * prod_j X_j^{x_j} Z_j^{z_j}`
//! with the `X` factor to the left of the `Z` factor on every site. A `Y` on
//! site `j` is therefore `i * X_j Z_j`, and its `i` lives in `phase`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{i_pow, Real, C};

pub const MAX_SPINS: usize = 64;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn label(self) -> char {
        match self {
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    n: u8,
    x_mask: u64,
    z_mask: u64,
    phase: u8,
}

fn width_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Result<Self> {
        if n > MAX_SPINS {
            return Err(Error::TooManySpins(n, MAX_SPINS));
        }
        Ok(Self { n: n as u8, x_mask: 0, z_mask: 0, phase: 0 })
    }

    /// Builds a string from raw masks; bits beyond `n` are rejected.
    pub fn from_masks(n: usize, x_mask: u64, z_mask: u64, phase: u8) -> Result<Self> {
        let id = Self::identity(n)?;
        let outside = !width_mask(n);
        if (x_mask | z_mask) & outside != 0 {
            let site = ((x_mask | z_mask) & outside).trailing_zeros() as usize;
            return Err(Error::SiteOutOfRange { site, n });
        }
        Ok(Self { x_mask, z_mask, phase: phase & 3, ..id })
    }

    /// Weight-one Hermitian string `sigma^axis` on `site`.
    pub fn single(n: usize, site: usize, axis: Axis) -> Result<Self> {
        let id = Self::identity(n)?;
        if site >= n {
            return Err(Error::SiteOutOfRange { site, n });
        }
        let bit = 1u64 << site;
        Ok(match axis {
            Axis::X => Self { x_mask: bit, ..id },
            Axis::Z => Self { z_mask: bit, ..id },
            Axis::Y => Self { x_mask: bit, z_mask: bit, phase: 1, ..id },
        })
    }

    /// Hermitian product of single-site Paulis, e.g. `[(0, X), (3, Y)]`.
    /// Sites must be distinct.
    pub fn from_sites(n: usize, sites: &[(usize, Axis)]) -> Result<Self> {
        let mut p = Self::identity(n)?;
        for &(site, axis) in sites {
            p = p.multiply(&Self::single(n, site, axis)?)?;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn support(&self) -> u64 {
        self.x_mask | self.z_mask
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    /// True if the operator is the identity up to its global phase.
    pub fn is_scalar(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + (self.x_mask & self.z_mask).count_ones()) % 2 == 0
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Multiplies the string by `i^k`.
    pub fn times_i_pow(mut self, k: u8) -> Self {
        self.phase = (self.phase + k) & 3;
        self
    }

    /// Axis acting on `site`, if any.
    pub fn axis_at(&self, site: usize) -> Option<Axis> {
        let bit = 1u64 << site;
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => None,
            (true, false) => Some(Axis::X),
            (false, true) => Some(Axis::Z),
            (true, true) => Some(Axis::Y),
        }
    }

    /// Exact product `self * other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SpinCountMismatch(self.n(), other.n()));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        // Z^a X^b = (-1)^{ab} X^b Z^a on each site.
        let swaps = (self.z_mask & other.x_mask).count_ones() as u8;
        Self {
            n: self.n,
            x_mask: self.x_mask ^ other.x_mask,
            z_mask: self.z_mask ^ other.z_mask,
            phase: (self.phase + other.phase + 2 * (swaps & 1)) & 3,
        }
    }

    /// `+1` if the strings commute, `-1` if they anticommute.
    pub fn commutation_phase(&self, other: &Self) -> Result<i8> {
        if self.n != other.n {
            return Err(Error::SpinCountMismatch(self.n(), other.n()));
        }
        Ok(self.commutation_unchecked(other))
    }

    pub(crate) fn commutation_unchecked(&self, other: &Self) -> i8 {
        let k = (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.commutation_unchecked(other) == 1
    }

    /// Action on the computational basis state `basis`: returns the image
    /// state and the phase as an exponent of `i`.
    #[inline]
    pub fn apply_exp(&self, basis: u64) -> (u64, u8) {
        let sign = ((self.z_mask & basis).count_ones() & 1) as u8;
        (basis ^ self.x_mask, (self.phase + 2 * sign) & 3)
    }

    /// Action on a basis state with a complex phase.
    #[inline]
    pub fn apply<T: Real>(&self, basis: u64) -> (u64, C<T>) {
        let (out, k) = self.apply_exp(basis);
        (out, i_pow(k))
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> Self {
        let overlap = (self.x_mask & self.z_mask).count_ones() as u8;
        Self {
            phase: ((4 - self.phase) + 2 * (overlap & 1)) & 3,
            ..*self
        }
    }

    /// Global phase in front of the literal `X/Y/Z` product.
    pub fn visible_phase(&self) -> u8 {
        let ys = (self.x_mask & self.z_mask).count_ones() as u8;
        (self.phase + 4 - (ys & 3)) & 3
    }

    /// Dense `2^n x 2^n` matrix, column-major in the sense `m[row][col]`.
    /// Used as an oracle for small `n`.
    pub fn to_dense<T: Real>(&self) -> Vec<Vec<C<T>>> {
        let dim = 1usize << self.n;
        let mut m = vec![vec![C::new(T::zero(), T::zero()); dim]; dim];
        for col in 0..dim {
            let (row, ph) = self.apply::<T>(col as u64);
            m[row as usize][col] = ph;
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{} ·", self.visible_phase())?;
        if self.is_scalar() {
            return write!(f, " I");
        }
        for site in 0..self.n() {
            if let Some(axis) = self.axis_at(site) {
                write!(f, " {}{}", axis.label(), site)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Vec<Vec<C<f64>>>;

    fn matmul(a: &M, b: &M) -> M {
        let d = a.len();
        let mut out = vec![vec![C::new(0.0, 0.0); d]; d];
        for i in 0..d {
            for k in 0..d {
                if a[i][k].norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    fn kron_site(n: usize, site: usize, m: [[C<f64>; 2]; 2]) -> M {
        // basis bit `site` is the local spin; |0> = up
        let d = 1 << n;
        let mut out = vec![vec![C::new(0.0, 0.0); d]; d];
        for col in 0..d {
            let b = (col >> site) & 1;
            for a in 0..2 {
                let row = (col & !(1 << site)) | (a << site);
                out[row][col] = m[a][b];
            }
        }
        out
    }

    fn pauli_matrix(axis: Axis) -> [[C<f64>; 2]; 2] {
        let (o, z, i) = (C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 1.0));
        match axis {
            Axis::X => [[z, o], [o, z]],
            Axis::Y => [[z, -i], [i, z]],
            Axis::Z => [[o, z], [z, -o]],
        }
    }

    #[test]
    fn single_site_encoding() {
        let y = PauliString::single(4, 2, Axis::Y).unwrap();
        assert_eq!((y.x_mask(), y.z_mask(), y.phase_exp()), (0b100, 0b100, 1));
        let x = PauliString::single(4, 0, Axis::X).unwrap();
        assert_eq!((x.x_mask(), x.z_mask(), x.phase_exp()), (1, 0, 0));
        assert_eq!(
            PauliString::single(4, 5, Axis::Z),
            Err(Error::SiteOutOfRange { site: 5, n: 4 })
        );
    }

    #[test]
    fn y_times_z_is_i_x() {
        let y = PauliString::single(3, 1, Axis::Y).unwrap();
        let z = PauliString::single(3, 1, Axis::Z).unwrap();
        let x = PauliString::single(3, 1, Axis::X).unwrap();
        assert_eq!(y.multiply(&z).unwrap(), x.times_i_pow(1));
    }

    #[test]
    fn i_x_squared_is_minus_one() {
        let ix = PauliString::single(3, 1, Axis::X).unwrap().times_i_pow(1);
        let sq = ix.multiply(&ix).unwrap();
        assert!(sq.is_scalar());
        assert_eq!(sq.phase_exp(), 2);
    }

    #[test]
    fn identity_law_and_mismatch() {
        let p = PauliString::from_sites(5, &[(0, Axis::X), (3, Axis::Y), (4, Axis::Z)]).unwrap();
        let id = PauliString::identity(5).unwrap();
        assert_eq!(p.multiply(&id).unwrap(), p);
        assert_eq!(id.multiply(&p).unwrap(), p);
        let q = PauliString::identity(4).unwrap();
        assert_eq!(p.multiply(&q), Err(Error::SpinCountMismatch(5, 4)));
        assert!(p.commutation_phase(&q).is_err());
    }

    #[test]
    fn commutation_examples() {
        let x = PauliString::single(2, 0, Axis::X).unwrap();
        let z = PauliString::single(2, 0, Axis::Z).unwrap();
        let z1 = PauliString::single(2, 1, Axis::Z).unwrap();
        assert_eq!(x.commutation_phase(&z).unwrap(), -1);
        assert_eq!(x.commutation_phase(&z1).unwrap(), 1);
        // a y-string crossing a z-string at one shared site
        let ys = PauliString::from_sites(6, &[(1, Axis::Y), (2, Axis::Y), (3, Axis::Y)]).unwrap();
        let zs = PauliString::from_sites(6, &[(3, Axis::Z), (4, Axis::Z)]).unwrap();
        assert_eq!(ys.commutation_phase(&zs).unwrap(), -1);
    }

    #[test]
    fn apply_examples() {
        let x0 = PauliString::single(3, 0, Axis::X).unwrap();
        assert_eq!(x0.apply::<f64>(0b000), (0b001, C::new(1.0, 0.0)));
        let z0 = PauliString::single(3, 0, Axis::Z).unwrap();
        assert_eq!(z0.apply::<f64>(0b001), (0b001, C::new(-1.0, 0.0)));
        let y0 = PauliString::single(3, 0, Axis::Y).unwrap();
        assert_eq!(y0.apply::<f64>(0b000), (0b001, C::new(0.0, 1.0)));
    }

    #[test]
    fn display_format() {
        let p = PauliString::from_sites(6, &[(0, Axis::X), (3, Axis::Y), (5, Axis::Z)]).unwrap();
        assert_eq!(p.to_string(), "i^0 · X0 Y3 Z5");
        let q = p.times_i_pow(1);
        assert_eq!(q.to_string(), "i^1 · X0 Y3 Z5");
        assert_eq!(PauliString::identity(2).unwrap().to_string(), "i^0 · I");
    }

    #[test]
    fn dense_oracle_all_pairs_n2() {
        // every string on 2 spins with every phase: products and actions
        // match explicit Kronecker-built matrices entrywise
        let n = 2;
        let mut all = Vec::new();
        for x in 0..4u64 {
            for z in 0..4u64 {
                for ph in 0..4u8 {
                    all.push(PauliString::from_masks(n, x, z, ph).unwrap());
                }
            }
        }
        let explicit = |p: &PauliString| -> M {
            let mut m = kron_site(n, 0, [[C::new(1.0, 0.0), C::new(0.0, 0.0)], [C::new(0.0, 0.0), C::new(1.0, 0.0)]]);
            for site in 0..n {
                if let Some(axis) = p.axis_at(site) {
                    m = matmul(&m, &kron_site(n, site, pauli_matrix(axis)));
                }
            }
            let ph: C<f64> = i_pow(p.visible_phase());
            m.iter().map(|r| r.iter().map(|v| v * ph).collect()).collect()
        };
        for a in &all {
            assert_eq!(a.to_dense::<f64>(), explicit(a), "{a}");
            for b in all.iter().step_by(3) {
                let prod = a.multiply(b).unwrap();
                assert_eq!(prod.to_dense::<f64>(), matmul(&explicit(a), &explicit(b)));
            }
        }
    }

    #[test]
    fn adjoint_and_hermiticity() {
        let y = PauliString::single(1, 0, Axis::Y).unwrap();
        assert!(y.is_hermitian());
        assert_eq!(y.adjoint(), y);
        let iy = y.times_i_pow(1);
        assert!(!iy.is_hermitian());
        assert_eq!(iy.adjoint(), y.times_i_pow(3));
    }
}
