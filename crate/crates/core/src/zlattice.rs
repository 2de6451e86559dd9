//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers: normal forms,
//! saturated kernels, Diophantine systems and the invariant factors of
//! finitely generated abelian groups presented by a relation matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
///
/// Zero-sized shapes are allowed so that a trivial kernel can be returned
/// as an `n x 0` basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row vectors. Panics on ragged input.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Self
    where
        T: Clone + Into<BigInt>,
    {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<T>(cols: &[Vec<T>], rows: usize) -> Self
    where
        T: Clone + Into<BigInt>,
    {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Dimension(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] += factor * row[src]
    fn add_row_multiple(&mut self, target: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * factor;
            self.data[target * self.cols + j] += v;
        }
    }

    /// col[target] += factor * col[src]
    fn add_col_multiple(&mut self, target: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * factor;
            self.data[i * self.cols + target] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Converts a slice of machine integers into big integers.
pub fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Smith normal form `u * m * v = d` with unimodular `u`, `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

/// Position of the smallest nonzero absolute value in the lower-right block
/// starting at `(t, t)`; ties go to the lowest row, then the lowest column.
fn min_pivot(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..m.rows() {
        for j in t..m.cols() {
            let a = m.get(i, j);
            if a.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if m.get(bi, bj).abs() <= a.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = min_pivot(&d, t) else {
                return SnfResult { d, u, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let pivot = d.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }

            // divisibility: pull an offending row into the pivot row
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { d, u, v }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
///
/// Zero rows are dropped; pivots are positive and entries above a pivot lie
/// in `[0, pivot)`.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut k = 0;
    for c in 0..cols {
        if k == rows {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in k..rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                if best.is_none_or(|b| a.get(i, c).abs() < a.get(b, c).abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            a.swap_rows(k, p);
            let pivot = a.get(k, c).clone();
            let mut done = true;
            for i in k + 1..rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = -a.get(i, c).div_floor(&pivot);
                a.add_row_multiple(i, k, &q);
                done &= a.get(i, c).is_zero();
            }
            if done {
                break;
            }
        }
        if a.get(k, c).is_zero() {
            continue;
        }
        if a.get(k, c).is_negative() {
            a.negate_row(k);
        }
        let pivot = a.get(k, c).clone();
        for i in 0..k {
            let q = -a.get(i, c).div_floor(&pivot);
            a.add_row_multiple(i, k, &q);
        }
        k += 1;
    }
    let mut out = IntMatrix::zeros(k, cols);
    for i in 0..k {
        for j in 0..cols {
            out.set(i, j, a.get(i, j).clone());
        }
    }
    out
}

/// Saturated basis of the integer kernel `{x : m x = 0}`, as columns in
/// Hermite normal form.
pub fn kernel_lattice(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let rank = snf.rank();
    let n = m.cols();
    let kernel_rows: Vec<Vec<BigInt>> = (rank..n).map(|j| snf.v.column(j)).collect();
    if kernel_rows.is_empty() {
        return IntMatrix::zeros(n, 0);
    }
    hermite_normal_form(&IntMatrix::from_rows(&kernel_rows)).transpose()
}

/// Some integer solution of `m x = t`, or `None` when there is none.
pub fn solve_diophantine(m: &IntMatrix, t: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if t.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} rows",
            t.len(),
            m.rows()
        )));
    }
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    let ut = snf.u.mul_vec(t)?;
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, c) in ut.iter().enumerate() {
        match factors.get(i) {
            Some(f) => {
                if !c.is_multiple_of(f) {
                    return Ok(None);
                }
                y[i] = c / f;
            }
            None => {
                if !c.is_zero() {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(snf.v.mul_vec(&y)?))
}

/// Invariant factors of `Z^rows / colspan(m)`: one `0` per free factor,
/// followed by the torsion factors `n_1, n_2, ...` with `n_{i+1} | n_i`.
/// Trivial factors are omitted, so the trivial group gives an empty list.
pub fn cokernel_structure(m: &IntMatrix) -> Vec<BigInt> {
    let snf = smith_normal_form(m);
    let factors = snf.invariant_factors();
    let free = m.rows() - factors.len();
    let mut out = vec![BigInt::zero(); free];
    out.extend(factors.into_iter().rev().filter(|f| !f.is_one()));
    out
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    if m.rows() != m.cols() {
        return Err(Error::Dimension(format!(
            "{}x{} matrix has no inverse",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::one();
        match solve_diophantine(m, &e)? {
            Some(x) => cols.push(x),
            None => return Err(Error::Dimension("matrix is not unimodular".into())),
        }
    }
    Ok(IntMatrix::from_columns(&cols, n))
}

pub fn is_primitive(v: &[BigInt]) -> Result<bool> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(g.is_one())
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        big_vec(v)
    }

    fn example_p() -> IntMatrix {
        m(&[
            &[1, 1, 1, 0, -1],
            &[0, 3, 0, 1, -2],
            &[0, 0, 2, 1, -2],
            &[0, 0, 0, 2, -2],
        ])
    }

    fn check_snf(a: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.d.is_diagonal());
        assert_eq!(s.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(s.v.determinant().unwrap().abs(), BigInt::one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn snf_of_coprime_diagonal() {
        let s = check_snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.invariant_factors(), ints(&[1, 6]));
    }

    #[test]
    fn snf_of_identity() {
        let s = check_snf(&IntMatrix::identity(4));
        assert_eq!(s.invariant_factors(), ints(&[1, 1, 1, 1]));
    }

    #[test]
    fn snf_of_example_generator_matrix() {
        // maximal minors are (12, -12, 6, -4, 2): torsion of order 2 in Z x Z/2
        let s = check_snf(&example_p());
        assert_eq!(s.invariant_factors(), ints(&[1, 1, 1, 2]));
    }

    #[test]
    fn snf_handles_zero_and_degenerate_shapes() {
        let s = check_snf(&IntMatrix::zeros(2, 3));
        assert!(s.invariant_factors().is_empty());
        check_snf(&m(&[&[0, 4, 6]]));
        check_snf(&m(&[&[6], &[10], &[15]]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_lattice(&m(&[&[1, -1]])), m(&[&[1], &[1]]));
        assert_eq!(kernel_lattice(&m(&[&[0]])), m(&[&[1]]));
        assert_eq!(kernel_lattice(&IntMatrix::identity(2)).cols(), 0);
    }

    #[test]
    fn kernel_of_example_degree_matrix_lift() {
        // rows (1,2,3,6,6) and (0,0,1,0,1 | 2): the relation column carries Z/2
        let q = m(&[&[1, 2, 3, 6, 6, 0], &[0, 0, 1, 0, 1, 2]]);
        let k = kernel_lattice(&q);
        assert_eq!(k.cols(), 4);
        // the four rows of the printed P, each lifted by a relation coefficient
        let p = example_p();
        for i in 0..4 {
            let mut target: Vec<BigInt> = p.row(i).to_vec();
            let torsion: BigInt = target[2].clone() + &target[4];
            target.push(-torsion.div_floor(&BigInt::from(2)));
            assert!(q.mul_vec(&target).unwrap().iter().all(Zero::is_zero));
            let coeffs = solve_diophantine(&k, &target).unwrap();
            assert!(coeffs.is_some(), "row {i} of P not in the kernel lattice");
        }
    }

    #[test]
    fn diophantine_examples() {
        let two = m(&[&[2]]);
        assert_eq!(
            solve_diophantine(&two, &ints(&[4])).unwrap(),
            Some(ints(&[2]))
        );
        assert_eq!(solve_diophantine(&two, &ints(&[3])).unwrap(), None);
        assert!(solve_diophantine(&two, &ints(&[1, 2])).is_err());
    }

    #[test]
    fn diophantine_gorenstein_split_of_example() {
        // columns q3, q4 of the example plus the Z/2 relation; target q1 + q2 + q5
        let a = m(&[&[3, 6, 0], &[1, 0, 2]]);
        let t = ints(&[1 + 2 + 6, 1]);
        let x = solve_diophantine(&a, &t).unwrap().expect("solvable");
        assert_eq!(a.mul_vec(&x).unwrap(), t);
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel_structure(&IntMatrix::identity(2)).is_empty());
        assert_eq!(cokernel_structure(&m(&[&[2, 0], &[0, 3]])), ints(&[6]));
        assert_eq!(cokernel_structure(&example_p().transpose()), ints(&[0, 2]));
    }

    #[test]
    fn primitivity() {
        assert!(!is_primitive(&ints(&[2, 4])).unwrap());
        assert!(is_primitive(&ints(&[-1, -2, -2, -2])).unwrap());
        assert!(is_primitive(&ints(&[1, 0, 0, 0])).unwrap());
        assert_eq!(is_primitive(&ints(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn hnf_is_canonical_for_a_lattice() {
        let a = m(&[&[2, 4, 6], &[1, 1, 1]]);
        let b = m(&[&[3, 5, 7], &[1, 1, 1]]);
        assert_eq!(hermite_normal_form(&a), hermite_normal_form(&b));
        assert_eq!(hermite_normal_form(&a), m(&[&[1, 1, 1], &[0, 2, 4]]));
    }

    #[test]
    fn determinant_small() {
        assert_eq!(
            m(&[&[2, 0], &[0, 3]]).determinant().unwrap(),
            BigInt::from(6)
        );
        assert_eq!(
            m(&[&[0, 1], &[1, 0]]).determinant().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            m(&[&[1, 2], &[2, 4]]).determinant().unwrap(),
            BigInt::zero()
        );
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let a = m(&[&[2, 1, 0], &[1, 1, 0], &[3, 5, 1]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), IntMatrix::identity(3));
        assert!(unimodular_inverse(&m(&[&[2, 0], &[0, 1]])).is_err());
        assert!(unimodular_inverse(&m(&[&[1, 0]])).is_err());
    }
}
