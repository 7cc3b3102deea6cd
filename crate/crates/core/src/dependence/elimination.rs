//! Fraction-free row echelon form and kernel vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalars::{CyclotomicScalar as Scalar, Rational};

/// Exact integral-domain operations needed by Bareiss elimination.
trait Domain: Clone {
    fn is_zero(&self) -> bool;
    fn one() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn exact_div(&self, other: &Self) -> Self;
    fn to_scalar(&self) -> Scalar;
}

impl Domain for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one() -> Self {
        One::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        debug_assert!(Zero::is_zero(&r), "Bareiss division must be exact");
        q
    }
    fn to_scalar(&self) -> Scalar {
        Scalar::from_rational(Rational::from_integer(self.clone()))
    }
}

impl Domain for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, other: &Self) -> Self {
        self.checked_div(other).expect("nonzero Bareiss pivot")
    }
    fn to_scalar(&self) -> Scalar {
        self.clone()
    }
}

/// Row echelon form: pivot column of each nonzero row, plus the rows.
struct Echelon {
    pivots: Vec<usize>,
    rows: Vec<Vec<Scalar>>,
    ncols: usize,
}

fn bareiss<T: Domain>(mut m: Vec<Vec<T>>, ncols: usize) -> Echelon {
    let mut prev = T::one();
    let mut pivots = Vec::new();
    let mut k = 0;
    for c in 0..ncols {
        if k == m.len() {
            break;
        }
        let Some(r) = (k..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(k, r);
        let (head, tail) = m.split_at_mut(k + 1);
        let pivot_row = &head[k];
        let p = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..ncols {
                row[j] = p.mul(&row[j]).sub(&factor.mul(&pivot_row[j])).exact_div(&prev);
            }
            row[c] = T::one().sub(&T::one());
        }
        prev = p;
        pivots.push(c);
        k += 1;
    }
    m.truncate(k);
    Echelon {
        pivots,
        rows: m.iter().map(|r| r.iter().map(T::to_scalar).collect()).collect(),
        ncols,
    }
}

impl Echelon {
    fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// The kernel vector with `x_free = 1` and every other free variable 0.
    fn kernel_vector(&self, free: usize) -> Vec<Scalar> {
        let mut x = vec![Scalar::zero(); self.ncols];
        x[free] = Scalar::one();
        for (r, &p) in self.pivots.iter().enumerate().rev() {
            if p > free {
                continue;
            }
            let row = &self.rows[r];
            let mut acc = Scalar::zero();
            for j in (p + 1)..=free {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc = &acc + &(&row[j] * &x[j]);
                }
            }
            x[p] = -&acc.checked_div(&row[p]).expect("nonzero pivot");
        }
        x
    }
}

/// Kernel basis of `m` (rows of equal length `ncols`), one vector per free
/// column in ascending column order. The vector for free column `j` is
/// supported on columns `≤ j`, so the first one has the least possible
/// largest column among all kernel vectors.
pub(crate) fn kernel_by_free_column(m: &[Vec<Scalar>], ncols: usize) -> Vec<(usize, Vec<Scalar>)> {
    let rational: Option<Vec<Vec<&Rational>>> =
        m.iter().map(|row| row.iter().map(Scalar::as_rational).collect()).collect();
    let echelon = match rational {
        Some(rows) => {
            // clear denominators row by row and eliminate over the integers
            let ints = rows
                .iter()
                .map(|row| {
                    let den = row.iter().fold(<BigInt as One>::one(), |acc, q| acc.lcm(q.denom()));
                    row.iter().map(|q| q.numer() * (&den / q.denom())).collect()
                })
                .collect();
            bareiss::<BigInt>(ints, ncols)
        }
        None => bareiss::<Scalar>(m.to_vec(), ncols),
    };
    echelon
        .free_columns()
        .into_iter()
        .map(|c| (c, echelon.kernel_vector(c)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::primitive_root;

    fn row(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    fn times(m: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
        m.iter()
            .map(|r| r.iter().zip(x).fold(Scalar::zero(), |acc, (a, b)| &acc + &(a * b)))
            .collect()
    }

    #[test]
    fn integer_kernel() {
        let m = vec![row(&[1, 2, 3, 4]), row(&[2, 4, 7, 9]), row(&[3, 6, 10, 13])];
        let ker = kernel_by_free_column(&m, 4);
        assert_eq!(ker.iter().map(|(c, _)| *c).collect::<Vec<_>>(), vec![1, 3]);
        for (_, v) in &ker {
            assert!(times(&m, v).iter().all(Scalar::is_zero));
        }
        assert_eq!(ker[0].1, row(&[-2, 1, 0, 0]));
    }

    #[test]
    fn full_rank_has_no_kernel() {
        let m = vec![row(&[2, 1]), row(&[1, 3]), row(&[5, 5])];
        assert!(kernel_by_free_column(&m, 2).is_empty());
    }

    #[test]
    fn rational_and_cyclotomic_entries() {
        let h = Scalar::from_ratio(1, 2);
        let z = primitive_root(3).unwrap();
        let m = vec![vec![h.clone(), Scalar::one(), z.clone()], vec![Scalar::one(), Scalar::from_int(2), &z * &Scalar::from_int(2)]];
        let ker = kernel_by_free_column(&m, 3);
        assert_eq!(ker.len(), 2);
        for (_, v) in &ker {
            assert!(times(&m, v).iter().all(Scalar::is_zero));
        }
    }
}
