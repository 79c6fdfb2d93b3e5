//! Determinants of upper Hessenberg matrices by the leading-minor recursion
//!
//! ```text
//! det(H_0) = 1
//! det(H_n) = m[n,n] det(H_{n-1})
//!          + sum_{r=1}^{n-1} (-1)^{n-r} m[r,n] det(H_{r-1}) prod_{j=r}^{n-1} m[j+1,j]
//! ```
//!
//! which costs `O(n^2)` scalar operations.

use crate::{GofError, Result};

use super::fixed::Fixed;

/// Minimal ring interface the recursion needs.
pub(crate) trait DetScalar: Clone {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn is_one(&self) -> bool;
}

impl DetScalar for f64 {
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn is_one(&self) -> bool {
        *self == 1.0
    }
}

impl DetScalar for Fixed {
    fn add(&self, other: &Self) -> Self {
        Fixed::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Fixed::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Fixed::mul(self, other)
    }
    fn is_one(&self) -> bool {
        Fixed::is_one(self)
    }
}

/// Supplies the nonzero part of an upper Hessenberg matrix column by column,
/// so large matrices never need to be materialized.
pub(crate) trait HessenbergSource<T> {
    fn order(&self) -> usize;
    /// Entries `m[1..=j, j]` (1-based `j`).
    fn column(&mut self, j: usize) -> Vec<T>;
    /// Subdiagonal entry `m[j+1, j]`.
    fn subdiagonal(&mut self, j: usize) -> T;
}

/// Run the recursion; returns `det(H_n)` for the full order.
pub(crate) fn leading_minor_recursion<T: DetScalar, S: HessenbergSource<T>>(source: &mut S, one: T) -> T {
    let order = source.order();
    let mut minors: Vec<T> = Vec::with_capacity(order + 1);
    minors.push(one.clone());
    let mut subdiagonal: Vec<T> = Vec::with_capacity(order);
    for n in 1..=order {
        let column = source.column(n);
        if n >= 2 {
            subdiagonal.push(source.subdiagonal(n - 1));
        }
        let mut acc = column[n - 1].mul(&minors[n - 1]);
        let mut prod = one.clone();
        let mut prod_is_one = true;
        for r in (1..n).rev() {
            // prod = m[r+1,r] * ... * m[n,n-1]
            let sub = &subdiagonal[r - 1];
            if !sub.is_one() {
                prod = if prod_is_one { sub.clone() } else { prod.mul(sub) };
                prod_is_one = false;
            }
            let mut term = column[r - 1].mul(&minors[r - 1]);
            if !prod_is_one {
                term = term.mul(&prod);
            }
            acc = if (n - r) % 2 == 1 { acc.sub(&term) } else { acc.add(&term) };
        }
        minors.push(acc);
    }
    minors.pop().expect("at least det(H_0)")
}

/// A dense upper Hessenberg matrix: `m[i,j] = 0` whenever `i > j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HessenbergMatrix {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl HessenbergMatrix {
    /// Validate squareness and the Hessenberg zero pattern.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(GofError::Input("matrix must have at least one row".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GofError::Input(format!(
                    "row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if i > j + 1 && v != 0.0 {
                    return Err(GofError::Input(format!(
                        "entry ({}, {}) = {v} lies below the subdiagonal",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(HessenbergMatrix { n, rows })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// 1-based entry access.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i - 1][j - 1]
    }
}

impl HessenbergSource<f64> for &HessenbergMatrix {
    fn order(&self) -> usize {
        self.n
    }
    fn column(&mut self, j: usize) -> Vec<f64> {
        (1..=j).map(|i| self.get(i, j)).collect()
    }
    fn subdiagonal(&mut self, j: usize) -> f64 {
        self.get(j + 1, j)
    }
}

/// Determinant of an upper Hessenberg matrix in double precision.
pub fn hessenberg_det(m: &HessenbergMatrix) -> f64 {
    let mut source = m;
    leading_minor_recursion(&mut source, 1.0)
}
