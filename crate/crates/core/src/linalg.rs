//! Exact linear algebra over `Q` via fraction-free Gauss–Jordan elimination on
//! arbitrary-precision integer rows.
//!
//! Rows are kept primitive (content 1, positive pivot) after every update. The
//! pivot in each column is the first nonzero entry in row order, so results do
//! not depend on anything but the input order.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

/// `(column, value)` pairs sorted by column, no explicit zeros.
type SparseRow = Vec<(usize, BigInt)>;

/// Reduced row echelon form: nonzero rows (sorted by pivot) and the pivot column of each.
///
/// Each row's first entry sits at its pivot column, and pivot columns occur in no other row.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
    cols: usize,
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x /= &g;
    }
}

fn normalize_sparse(row: &mut SparseRow) {
    let g = row.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let g = if row[0].1.is_negative() { -g } else { g };
    if !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x /= &g;
        }
    }
}

fn entry(row: &SparseRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
}

/// `a * row - b * other`, dropping cancelled entries.
fn combine(row: &SparseRow, a: &BigInt, other: &SparseRow, b: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = other.get(j).map_or(usize::MAX, |e| e.0);
        let (col, v) = if ci < cj {
            i += 1;
            (ci, a * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(b * &other[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, a * &row[i - 1].1 - b * &other[j - 1].1)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

/// Scales a rational vector to a primitive integer vector with the same direction.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    make_primitive(&mut out);
    out
}

impl IntMatrix {
    pub fn new(cols: usize) -> Self {
        IntMatrix { rows: Vec::new(), cols }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        IntMatrix { rows, cols }
    }

    pub fn push_row(&mut self, row: Vec<BigInt>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    /// Pushes a rational row, scaled to integers; scaling does not change the row space.
    pub fn push_rational_row(&mut self, row: &[BigRational]) {
        self.push_row(clear_denominators(row));
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Gauss–Jordan elimination, one input row at a time.
    ///
    /// An incoming row is reduced against the current pivots; if anything is
    /// left, its first column becomes a new pivot and is cleared from the other
    /// rows. A new pivot is always right of the pivot of any row it touches, so
    /// the result is the reduced row echelon form, independent of row order up
    /// to the row scaling fixed by [`normalize_sparse`].
    pub fn echelon(&self) -> Echelon {
        let mut rows: Vec<SparseRow> = Vec::new();
        let mut row_of_pivot: Vec<Option<usize>> = vec![None; self.cols];
        for dense in &self.rows {
            let mut r: SparseRow =
                dense.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(c, x)| (c, x.clone())).collect();
            let hits: Vec<usize> = r.iter().filter_map(|(c, _)| row_of_pivot[*c]).collect();
            for j in hits {
                let p = rows[j][0].0;
                let Some(a) = entry(&r, p).cloned() else { continue };
                r = combine(&r, &rows[j][0].1, &rows[j], &a);
                if !r.is_empty() {
                    normalize_sparse(&mut r);
                }
            }
            if r.is_empty() {
                continue;
            }
            normalize_sparse(&mut r);
            let c = r[0].0;
            for other in rows.iter_mut() {
                if let Some(a) = entry(other, c).cloned() {
                    *other = combine(other, &r[0].1, &r, &a);
                    normalize_sparse(other);
                }
            }
            row_of_pivot[c] = Some(rows.len());
            rows.push(r);
        }
        rows.sort_by_key(|r| r[0].0);
        let pivots = rows.iter().map(|r| r[0].0).collect();
        Echelon { rows, pivots, cols: self.cols }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : A x = 0}` as primitive integer vectors, one per free column,
    /// each with a positive entry at its free column.
    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        self.echelon().nullspace()
    }

    /// Some rational `x` with `A x = b` (free variables set to zero), if one exists.
    pub fn solve(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        assert_eq!(b.len(), self.rows.len());
        let mut aug = IntMatrix::new(self.cols + 1);
        for (row, rhs) in self.rows.iter().zip(b) {
            let mut r: Vec<BigRational> = row.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            r.push(rhs.clone());
            aug.push_rational_row(&r);
        }
        let ech = aug.echelon();
        if ech.pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.cols];
        for row in &ech.rows {
            let (p, pv) = &row[0];
            if let Some(rhs) = entry(row, self.cols) {
                x[*p] = BigRational::new(rhs.clone(), pv.clone());
            }
        }
        Some(x)
    }
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn nullspace(&self) -> Vec<Vec<BigInt>> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for row in &self.rows {
                    if let Some(a) = entry(row, f) {
                        let (p, pv) = &row[0];
                        v[*p] = -BigRational::new(a.clone(), pv.clone());
                    }
                }
                clear_denominators(&v)
            })
            .collect()
    }
}

pub fn to_rationals(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}
