use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::quad::{int, QuadNumber};
use crate::error::Result;

/// 2×2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMatrix2 {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub const fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1])
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.a, self.c, self.b, self.d)
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.a, -self.b, -self.c, -self.d)
    }

    /// Inverse over ℤ; `None` unless `|det| = 1`.
    pub fn inverse(&self) -> Option<Self> {
        match self.det() {
            1 => Some(Self::new(self.d, -self.b, -self.c, self.a)),
            -1 => Some(Self::new(-self.d, self.b, self.c, -self.a)),
            _ => None,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    /// `self^n` with unbounded integer entries.
    pub fn pow_big(&self, n: u32) -> [[BigInt; 2]; 2] {
        let m = [
            [BigInt::from(self.a), BigInt::from(self.b)],
            [BigInt::from(self.c), BigInt::from(self.d)],
        ];
        let mut acc = [
            [BigInt::one(), BigInt::zero()],
            [BigInt::zero(), BigInt::one()],
        ];
        for _ in 0..n {
            acc = mul_big(&acc, &m);
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.a >= 0 && self.b >= 0 && self.c >= 0 && self.d >= 0
    }

    pub fn is_nonpositive(&self) -> bool {
        self.a <= 0 && self.b <= 0 && self.c <= 0 && self.d <= 0
    }

    pub fn to_square(&self) -> SquareMatrix<i64> {
        SquareMatrix::from_rows(vec![vec![self.a, self.b], vec![self.c, self.d]])
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn mul_big(x: &[[BigInt; 2]; 2], y: &[[BigInt; 2]; 2]) -> [[BigInt; 2]; 2] {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

/// Exact eigen data of an integer 2×2 matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eigen2 {
    /// `(tr + √Δ)/2`
    pub lambda1: QuadNumber,
    /// `(tr − √Δ)/2`
    pub lambda2: QuadNumber,
    /// Eigenvector of `lambda1`, first nonzero coordinate 1.
    pub v1: [QuadNumber; 2],
    /// Eigenvector of `lambda2`; equals `v1` when the eigenspace is a line.
    pub v2: [QuadNumber; 2],
    pub repeated: bool,
    /// `max |λᵢ|`; for complex pairs this is `√det`.
    pub spectral_radius: QuadNumber,
}

impl Eigen2 {
    pub fn is_real(&self) -> bool {
        self.lambda1.is_real()
    }

    /// `ρ > 1`, decided on `ρ²`.
    pub fn expanding(&self) -> bool {
        self.spectral_radius.modulus_cmp_one() == std::cmp::Ordering::Greater
    }
}

pub fn eigen2(m: &IntMatrix2) -> Result<Eigen2> {
    let t = m.trace();
    let disc = t * t - 4 * m.det();
    let s = QuadNumber::sqrt_rational(&int(disc))?;
    let half = QuadNumber::from_ratio(1, 2);
    let tq = QuadNumber::from_int(t);
    let l1 = (&tq + &s) * &half;
    let l2 = (&tq - &s) * &half;
    let v1 = eigenvector(m, &l1);
    let v2 = eigenvector(m, &l2);
    let rho = if disc >= 0 {
        let a1 = l1.abs_real()?;
        let a2 = l2.abs_real()?;
        if a1.cmp_real(&a2) == Some(std::cmp::Ordering::Less) {
            a2
        } else {
            a1
        }
    } else {
        QuadNumber::sqrt_rational(&int(m.det()))?
    };
    Ok(Eigen2 {
        repeated: disc == 0,
        lambda1: l1,
        lambda2: l2,
        v1,
        v2,
        spectral_radius: rho,
    })
}

fn eigenvector(m: &IntMatrix2, l: &QuadNumber) -> [QuadNumber; 2] {
    let q = QuadNumber::from_int;
    if m.b != 0 {
        // (a − λ)·1 + b·y = 0
        return [QuadNumber::one(), (l - q(m.a)) / q(m.b)];
    }
    // lower triangular: eigenvalues a and d
    let da = l - q(m.a);
    if da.is_zero() {
        if m.c == 0 {
            [QuadNumber::one(), QuadNumber::zero()]
        } else if m.a == m.d {
            [QuadNumber::zero(), QuadNumber::one()]
        } else {
            // c·1 + (d − a)·y = 0
            [QuadNumber::one(), q(m.c) / q(m.a - m.d)]
        }
    } else {
        [QuadNumber::zero(), QuadNumber::one()]
    }
}

/// Dense square matrix over any commutative ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T> SquareMatrix<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        SquareMatrix {
            n,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        SquareMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> SquareMatrix<U> {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n);
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = T::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k).clone() * o.get(k, j).clone();
                }
                data.push(acc);
            }
        }
        SquareMatrix { n, data }
    }

    pub fn sub(&self, o: &Self) -> Self {
        SquareMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_scalar(&self) -> Option<T> {
        let c = self.get(0, 0).clone();
        let scaled = SquareMatrix {
            n: self.n,
            data: Self::identity(self.n)
                .data
                .into_iter()
                .map(|x| x * c.clone())
                .collect(),
        };
        (scaled == *self).then_some(c)
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    /// Kronecker product `self ⊗ o`.
    pub fn kron(&self, o: &Self) -> Self {
        let n = self.n * o.n;
        let mut data = vec![T::zero(); n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..o.n {
                    for l in 0..o.n {
                        data[(i * o.n + k) * n + j * o.n + l] =
                            self.get(i, j).clone() * o.get(k, l).clone();
                    }
                }
            }
        }
        SquareMatrix { n, data }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum MatrixOrder {
    Finite { order: u32, phi: u64 },
    Infinite,
}

/// Smallest `n ≤ bound` with `Nⁿ = Id`.
pub fn matrix_order<T>(m: &SquareMatrix<T>, bound: u32) -> MatrixOrder
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let mut acc = m.clone();
    for k in 1..=bound {
        if acc.is_identity() {
            return MatrixOrder::Finite {
                order: k,
                phi: euler_phi(k as u64),
            };
        }
        acc = acc.mul(m);
    }
    MatrixOrder::Infinite
}

pub fn euler_phi(n: u64) -> u64 {
    let mut result = n;
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}
