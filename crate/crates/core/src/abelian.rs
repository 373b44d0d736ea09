//! Exact integer linear algebra: abelianization, Smith normal form and the
//! abelian lower bound on the rank of a presented group.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::presentation::Presentation;

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics if `entries.len() != rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        IntMatrix { rows, cols, entries }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&v| BigInt::from(v)));
        }
        IntMatrix::from_vec(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
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

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// Panics on a shape mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Fraction-free (Bareiss) determinant. Panics if not square.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&r| !m.get(r, k).is_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
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
        sign * m.get(n - 1, n - 1)
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
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

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(src, c) * factor;
            self.entries[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, src) * factor;
            self.entries[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let idx = r * self.cols + c;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal with `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal entries greater than one, in order.
    pub invariant_factors: Vec<BigInt>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithDecomposition {
    /// Free rank of `Z^cols / rowspace(A)`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.d.cols() - self.rank
    }
}

/// Exponent-sum matrix: one row per relator, one column per generator.
pub fn abelianization_matrix(p: &Presentation) -> IntMatrix {
    let n = p.num_generators();
    let mut m = IntMatrix::zeros(p.num_relators(), n);
    for (i, r) in p.relators().iter().enumerate() {
        for l in r.letters() {
            let idx = i * n + l.generator;
            m.entries[idx] += l.sign();
        }
    }
    m
}

/// Smith normal form with the pivot chosen as the entry of smallest nonzero
/// absolute value in the active block, ties broken row-major.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = smallest_entry(&d, t) else {
            break;
        };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);

        let mut dirty = false;
        for r in t + 1..rows {
            if d.get(r, t).is_zero() {
                continue;
            }
            let q = d.get(r, t).div_floor(d.get(t, t));
            let neg = -q;
            d.add_row_multiple(r, t, &neg);
            u.add_row_multiple(r, t, &neg);
            dirty |= !d.get(r, t).is_zero();
        }
        for c in t + 1..cols {
            if d.get(t, c).is_zero() {
                continue;
            }
            let q = d.get(t, c).div_floor(d.get(t, t));
            let neg = -q;
            d.add_col_multiple(c, t, &neg);
            v.add_col_multiple(c, t, &neg);
            dirty |= !d.get(t, c).is_zero();
        }
        if dirty {
            // A remainder is now smaller than the pivot; pick again.
            continue;
        }

        let pivot = d.get(t, t).clone();
        let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !d.get(r, c).is_multiple_of(&pivot)));
        if let Some(r) = offender {
            let one = BigInt::one();
            d.add_row_multiple(t, r, &one);
            u.add_row_multiple(t, r, &one);
            continue;
        }

        if pivot.is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let diag = d.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    let invariant_factors = diag.into_iter().filter(|x| *x > BigInt::one()).collect();
    SmithDecomposition {
        d,
        u,
        v,
        invariant_factors,
        rank,
    }
}

fn smallest_entry(m: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in t..m.rows() {
        for c in t..m.cols() {
            let x = m.get(r, c);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((r, c, ax));
            }
        }
    }
    best.map(|(r, c, _)| (r, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// The abelianization alone needs `|X|` generators, so `rk(G) = |X|`.
    Proven,
    /// `rk(G) = |X|` is not established.
    Conditional,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proven => "PROVEN",
            Status::Conditional => "CONDITIONAL",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "PROVEN" => Some(Status::Proven),
            "CONDITIONAL" => Some(Status::Conditional),
            _ => None,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bounds on the rank of the presented group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RankReport {
    pub presentation_rank: usize,
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
    /// Minimal generator count of the abelianization.
    pub abelian_lower_bound: usize,
    pub status: Status,
}

pub fn rank_report(p: &Presentation) -> RankReport {
    let snf = smith_normal_form(&abelianization_matrix(p));
    let free_rank = snf.cokernel_free_rank();
    let abelian_lower_bound = snf.invariant_factors.len() + free_rank;
    let n = p.num_generators();
    RankReport {
        presentation_rank: n,
        invariant_factors: snf.invariant_factors,
        free_rank,
        abelian_lower_bound,
        status: if abelian_lower_bound == n {
            Status::Proven
        } else {
            Status::Conditional
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::parse_presentation;

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "U A V != D for {a}");
        assert!(s.d.is_diagonal());
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        let diag = s.d.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn abelianization_examples() {
        let p = parse_presentation("<x,y,z | x^3 y^-2, [y,z]>").unwrap();
        assert_eq!(
            abelianization_matrix(&p),
            IntMatrix::from_i64_rows(&[vec![3, -2, 0], vec![0, 0, 0]])
        );
        let p = parse_presentation("<x | x^7>").unwrap();
        assert_eq!(abelianization_matrix(&p), IntMatrix::from_i64_rows(&[vec![7]]));
        let p = parse_presentation("<x, y | >").unwrap();
        let m = abelianization_matrix(&p);
        assert_eq!((m.rows(), m.cols()), (0, 2));
    }

    #[test]
    fn snf_examples() {
        let s = check(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        assert!(s.invariant_factors.is_empty());

        let s = check(&IntMatrix::from_i64_rows(&[vec![3, -2, 0], vec![0, 0, 0]]));
        assert_eq!(s.d, IntMatrix::from_i64_rows(&[vec![1, 0, 0], vec![0, 0, 0]]));

        let s = check(&IntMatrix::from_i64_rows(&[vec![2, 0], vec![0, 4]]));
        assert_eq!(s.d.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);

        // diag(4, 6) -> diag(2, 12) needs the divisibility fix-up
        let s = check(&IntMatrix::from_i64_rows(&[vec![4, 0], vec![0, 6]]));
        assert_eq!(s.d.diagonal(), vec![BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn snf_degenerate_shapes() {
        check(&IntMatrix::zeros(0, 0));
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(2, 0));
        let s = check(&IntMatrix::zeros(2, 2));
        assert_eq!(s.rank, 0);
        let s = check(&IntMatrix::from_i64_rows(&[vec![-5]]));
        assert_eq!(s.d, IntMatrix::from_i64_rows(&[vec![5]]));
    }

    #[test]
    fn snf_handles_large_entries() {
        let big = BigInt::from(u64::MAX) * BigInt::from(u64::MAX);
        let a = IntMatrix::from_vec(2, 2, vec![big.clone(), BigInt::from(3), BigInt::from(7), big + 1]);
        check(&a);
    }

    #[test]
    fn rank_examples() {
        let r = rank_report(&parse_presentation("<x | x^2>").unwrap());
        assert_eq!(r.abelian_lower_bound, 1);
        assert_eq!(r.status, Status::Proven);
        assert_eq!(r.invariant_factors, vec![BigInt::from(2)]);

        let r = rank_report(&parse_presentation("<x,y,z | x^3 y^-2, [y,z]>").unwrap());
        assert_eq!(r.abelian_lower_bound, 2);
        assert_eq!(r.free_rank, 2);
        assert_eq!(r.status, Status::Conditional);

        let r = rank_report(&parse_presentation("<x | x>").unwrap());
        assert_eq!(r.abelian_lower_bound, 0);
        assert_eq!(r.status, Status::Conditional);

        let r = rank_report(&parse_presentation("< | >").unwrap());
        assert_eq!(r.abelian_lower_bound, 0);
        assert_eq!(r.status, Status::Proven);
    }

    #[test]
    fn determinant_small() {
        let m = IntMatrix::from_i64_rows(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 1]]);
        // expansion along row 1: -1 * (2*1 - 1*1) = -1
        assert_eq!(m.determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }
}
