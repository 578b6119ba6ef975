//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Everything downstream (fan validation, cohomology, isomorphism searches)
//! reduces to normal forms of integer matrices, so this module provides
//! Hermite and Smith normal forms with transformation matrices, determinants,
//! kernels, and cokernel structure, all computed exactly.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An integer vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector {
    entries: Vec<BigInt>,
}

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector { entries }
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector {
            entries: entries.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn zeros(len: usize) -> Self {
        IntVector {
            entries: vec![BigInt::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &BigInt {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// True iff the gcd of the entries is 1. The zero vector is not primitive.
    pub fn is_primitive(&self) -> bool {
        let mut g = BigInt::zero();
        for x in &self.entries {
            g = g.gcd(x);
        }
        g.is_one()
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        assert_eq!(self.len(), other.len(), "dot of mismatched lengths");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &IntVector) -> IntVector {
        assert_eq!(self.len(), other.len());
        IntVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn neg(&self) -> IntVector {
        IntVector::new(self.entries.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// A dense integer matrix in row-major layout. Zero-sized shapes are allowed.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in &rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_rows_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[&IntVector], dim: usize) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, v) in cols.iter().enumerate() {
            assert_eq!(v.len(), dim, "column of wrong length");
            for i in 0..dim {
                m.set(i, j, v.get(i).clone());
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> IntVector {
        IntVector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let v = out.get(r, c) + a * b;
                        out.set(r, c, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            out.push(
                self.row(r)
                    .iter()
                    .zip(v.entries())
                    .map(|(a, b)| a * b)
                    .sum(),
            );
        }
        Ok(IntVector::new(out))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c);
            self.set(r, c, v);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(dst, c) + q * self.get(src, c);
            self.set(dst, c, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.entries.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, dst) + q * self.get(r, src);
            self.set(r, dst, v);
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination. Errors on
    /// non-square input. The determinant of the empty matrix is 1.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let pivot = (k + 1..n).find(|&r| !m.get(r, k).is_zero());
                match pivot {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    /// True iff the determinant is +1 or -1. Errors on non-square input.
    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.det()?.abs().is_one())
    }

    /// Classical adjugate, satisfying `A * adj(A) = det(A) * I`.
    pub fn adjugate(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(IntMatrix::zeros(0, 0));
        }
        let mut adj = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let mut cof = minor.det()?;
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                adj.set(j, i, cof);
            }
        }
        Ok(adj)
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows - 1, self.cols - 1);
        let mut rr = 0;
        for r in 0..self.rows {
            if r == skip_r {
                continue;
            }
            let mut cc = 0;
            for c in 0..self.cols {
                if c == skip_c {
                    continue;
                }
                out.set(rr, cc, self.get(r, c).clone());
                cc += 1;
            }
            rr += 1;
        }
        out
    }

    /// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
    /// `U * A = H`. Pivots are positive, entries above each pivot are reduced
    /// into `[0, pivot)`, and rows below a pivot are zero in its column. This
    /// shape is canonical for the row lattice of `A`, and `hnf(H) == H`.
    pub fn hermite_normal_form(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            // Gcd the column below pivot_row down to a single nonzero entry.
            loop {
                let mut best: Option<usize> = None;
                for r in pivot_row..self.rows {
                    if !h.get(r, col).is_zero() {
                        best = match best {
                            None => Some(r),
                            Some(b) if h.get(r, col).abs() < h.get(b, col).abs() => Some(r),
                            keep => keep,
                        };
                    }
                }
                let Some(r) = best else { break };
                h.swap_rows(pivot_row, r);
                u.swap_rows(pivot_row, r);
                let mut done = true;
                for r2 in pivot_row + 1..self.rows {
                    if !h.get(r2, col).is_zero() {
                        let q = -(h.get(r2, col) / h.get(pivot_row, col));
                        h.add_row_multiple(r2, pivot_row, &q);
                        u.add_row_multiple(r2, pivot_row, &q);
                        if !h.get(r2, col).is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if h.get(pivot_row, col).is_zero() {
                continue;
            }
            if h.get(pivot_row, col).is_negative() {
                h.negate_row(pivot_row);
                u.negate_row(pivot_row);
            }
            let pivot = h.get(pivot_row, col).clone();
            for r in 0..pivot_row {
                let q = -h.get(r, col).div_floor(&pivot);
                h.add_row_multiple(r, pivot_row, &q);
                u.add_row_multiple(r, pivot_row, &q);
            }
            pivot_row += 1;
        }
        (h, u)
    }

    /// Smith normal form with transformations.
    pub fn smith_normal_form(&self) -> SmithDecomposition {
        let mut d = self.clone();
        let mut u = IntMatrix::identity(self.rows);
        let mut v = IntMatrix::identity(self.cols);
        let steps = self.rows.min(self.cols);

        for t in 0..steps {
            // Pivot: the entry of smallest absolute value in the remaining block.
            let mut pivot: Option<(usize, usize)> = None;
            for r in t..self.rows {
                for c in t..self.cols {
                    if !d.get(r, c).is_zero() {
                        pivot = match pivot {
                            None => Some((r, c)),
                            Some((pr, pc)) if d.get(r, c).abs() < d.get(pr, pc).abs() => {
                                Some((r, c))
                            }
                            keep => keep,
                        };
                    }
                }
            }
            let Some((pr, pc)) = pivot else { break };
            d.swap_rows(t, pr);
            u.swap_rows(t, pr);
            d.swap_cols(t, pc);
            v.swap_cols(t, pc);

            'clear: loop {
                // Clear column t.
                for r in t + 1..self.rows {
                    while !d.get(r, t).is_zero() {
                        let q = -(d.get(r, t) / d.get(t, t));
                        d.add_row_multiple(r, t, &q);
                        u.add_row_multiple(r, t, &q);
                        if !d.get(r, t).is_zero() {
                            // Remainder is smaller than the pivot; swap it up.
                            d.swap_rows(t, r);
                            u.swap_rows(t, r);
                        }
                    }
                }
                // Clear row t.
                for c in t + 1..self.cols {
                    while !d.get(t, c).is_zero() {
                        let q = -(d.get(t, c) / d.get(t, t));
                        d.add_col_multiple(c, t, &q);
                        v.add_col_multiple(c, t, &q);
                        if !d.get(t, c).is_zero() {
                            d.swap_cols(t, c);
                            v.swap_cols(t, c);
                        }
                    }
                }
                // Column clearing can refill the row and vice versa.
                if (t + 1..self.rows).any(|r| !d.get(r, t).is_zero()) {
                    continue 'clear;
                }
                // Pivot must divide every remaining entry so that the
                // diagonal forms a divisibility chain.
                for r in t + 1..self.rows {
                    for c in t + 1..self.cols {
                        if !d.get(r, c).mod_floor(&d.get(t, t).abs()).is_zero() {
                            let one = BigInt::one();
                            d.add_row_multiple(t, r, &one);
                            u.add_row_multiple(t, r, &one);
                            continue 'clear;
                        }
                    }
                }
                break;
            }
            if d.get(t, t).is_negative() {
                d.negate_row(t);
                u.negate_row(t);
            }
        }

        #[cfg(debug_assertions)]
        {
            if self.rows * self.cols <= 40_000 {
                let lhs = u.mul(self).unwrap().mul(&v).unwrap();
                debug_assert_eq!(lhs, d, "smith decomposition does not reconstruct");
            }
        }
        SmithDecomposition { d, u, v }
    }

    /// Structure of `Z^rows / column-span(A)` as `(free rank, torsion factors > 1)`.
    pub fn cokernel_structure(&self) -> (usize, Vec<BigInt>) {
        let snf = self.smith_normal_form();
        let diag = snf.diagonal();
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion = diag
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        (self.rows - rank, torsion)
    }

    /// Basis of the right integer kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<IntVector> {
        let snf = self.smith_normal_form();
        let diag = snf.diagonal();
        let mut basis = Vec::new();
        for j in 0..self.cols {
            let free = j >= diag.len() || diag[j].is_zero();
            if free {
                basis.push(snf.v.col(j));
            }
        }
        basis
    }

    /// One integer solution of `A x = b`, if any exists.
    pub fn solve(&self, b: &IntVector) -> Option<IntVector> {
        assert_eq!(b.len(), self.rows, "rhs of wrong length");
        let snf = self.smith_normal_form();
        let ub = snf.u.mul_vec(b).expect("shape");
        let diag = snf.diagonal();
        let mut z = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            let rhs = ub.get(i);
            if i < diag.len() && !diag[i].is_zero() {
                let (q, r) = rhs.div_rem(&diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !rhs.is_zero() {
                return None;
            }
        }
        Some(snf.v.mul_vec(&IntVector::new(z)).expect("shape"))
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal whose
/// nonnegative entries form a divisibility chain.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }
}

fn bigint_to_number<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    let n = serde_json::Number::from_str(&x.to_string())
        .map_err(|e| serde::ser::Error::custom(e.to_string()))?;
    n.serialize(s)
}

pub(crate) fn number_to_bigint(n: &serde_json::Number) -> Result<BigInt> {
    let text = n.to_string();
    if text.contains(['.', 'e', 'E']) {
        return Err(Error::NotAnInteger(text));
    }
    BigInt::from_str(&text).map_err(|_| Error::NotAnInteger(text))
}

impl Serialize for IntVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for x in &self.entries {
            seq.serialize_element(&SerBig(x))?;
        }
        seq.end()
    }
}

struct SerBig<'a>(&'a BigInt);
impl Serialize for SerBig<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        bigint_to_number(self.0, s)
    }
}

impl<'de> Deserialize<'de> for IntVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let nums = Vec::<serde_json::Number>::deserialize(d)?;
        let entries = nums
            .iter()
            .map(|n| number_to_bigint(n).map_err(|e| D::Error::custom(e.to_string())))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntVector::new(entries))
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for r in 0..self.rows {
            seq.serialize_element(&IntVector::new(self.row(r).to_vec()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<IntVector>::deserialize(d)?;
        let vecs: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.entries).collect();
        IntMatrix::from_rows(vecs).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows_i64(rows)
    }

    #[test]
    fn hnf_identity() {
        let a = IntMatrix::identity(2);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        // Row lattice of [[2,4],[1,3]]; the fully reduced form is [[1,1],[0,2]].
        let a = m(&[&[2, 4], &[1, 3]]);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
        assert_eq!(u.mul(&a).unwrap(), h);
        assert!(u.is_unimodular().unwrap());
        let (h2, _) = h.hermite_normal_form();
        assert_eq!(h2, h, "hnf must be idempotent");
    }

    #[test]
    fn hnf_zero_matrix() {
        let a = IntMatrix::zeros(2, 2);
        let (h, u) = a.hermite_normal_form();
        assert_eq!(h, IntMatrix::zeros(2, 2));
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn snf_diag_2_3() {
        let a = m(&[&[2, 0], &[0, 3]]);
        let snf = a.smith_normal_form();
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(snf.u.mul(&a).unwrap().mul(&snf.v).unwrap(), snf.d);
        assert!(snf.u.is_unimodular().unwrap());
        assert!(snf.v.is_unimodular().unwrap());
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(3);
        let snf = a.smith_normal_form();
        assert_eq!(snf.d, IntMatrix::identity(3));
    }

    #[test]
    fn snf_triangular() {
        let a = m(&[&[1, 0], &[1, 2]]);
        let snf = a.smith_normal_form();
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(2)]);
    }

    #[test]
    fn snf_empty_shapes() {
        let a = IntMatrix::zeros(3, 0);
        let snf = a.smith_normal_form();
        assert_eq!(snf.diagonal(), Vec::<BigInt>::new());
        assert_eq!(a.cokernel_structure(), (3, vec![]));
    }

    #[test]
    fn unimodularity() {
        assert!(IntMatrix::identity(2).is_unimodular().unwrap());
        assert!(!m(&[&[1, 0], &[1, 2]]).is_unimodular().unwrap());
        assert!(m(&[&[0, 1], &[1, 0]]).is_unimodular().unwrap());
        assert!(matches!(
            IntMatrix::zeros(2, 3).is_unimodular(),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn primitivity() {
        assert!(IntVector::from_i64(&[1, 0]).is_primitive());
        assert!(!IntVector::from_i64(&[2, 4]).is_primitive());
        assert!(!IntVector::from_i64(&[0, 0]).is_primitive());
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(IntMatrix::identity(2).cokernel_structure(), (0, vec![]));
        let a = m(&[&[2, 0], &[0, 0]]);
        assert_eq!(a.cokernel_structure(), (1, vec![BigInt::from(2)]));
    }

    #[test]
    fn det_and_adjugate() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(a.det().unwrap(), BigInt::from(-2));
        let adj = a.adjugate().unwrap();
        let prod = a.mul(&adj).unwrap();
        let mut expected = IntMatrix::identity(2);
        for i in 0..2 {
            expected.set(i, i, BigInt::from(-2));
        }
        assert_eq!(prod, expected);

        let b = m(&[&[2, 0, 1], &[0, 1, 0], &[1, 1, 1]]);
        assert_eq!(b.det().unwrap(), BigInt::from(1));
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 0, -1], &[0, 1, -1]]);
        let ker = a.kernel();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).unwrap().is_zero());
        assert!(ker[0].is_primitive());

        let b = IntVector::from_i64(&[3, 5]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x).unwrap(), b);

        // 2x = 1 has no integer solution.
        let c = m(&[&[2]]);
        assert!(c.solve(&IntVector::from_i64(&[1])).is_none());
        assert!(c.solve(&IntVector::from_i64(&[4])).is_some());
    }

    #[test]
    fn vector_json_roundtrip_is_exact() {
        let v = IntVector::new(vec![
            BigInt::from_str("123456789012345678901234567890").unwrap(),
            BigInt::from(-7),
        ]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, "[123456789012345678901234567890,-7]");
        let back: IntVector = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
