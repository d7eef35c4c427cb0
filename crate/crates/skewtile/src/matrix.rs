//! Label-indexed integer matrices with exact determinant and rank.
//!
//! Everything here is exact. Determinants are computed with Bareiss
//! fraction-free elimination over checked `i128` arithmetic: every
//! intermediate value in that scheme is itself a minor of the input matrix, so
//! for the matrix sizes this crate produces (Cartan matrices of algebras with
//! a few dozen simples) overflow is impossible in practice, and if an input
//! ever did overflow we panic with a clear message rather than return a wrong
//! answer. Ranks are computed over the rationals by the same elimination,
//! run rectangularly with column pivoting.

use std::fmt;

use thiserror::Error;

/// Errors building an [`IntMatrix`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    /// The entry grid is not square with one row per label.
    #[error("matrix shape mismatch: {labels} labels but {rows} rows / {cols} columns")]
    Shape { labels: usize, rows: usize, cols: usize },
    /// Two rows/columns carry the same label.
    #[error("duplicate matrix label {0:?}")]
    DuplicateLabel(String),
}

/// A square integer matrix whose rows and columns are indexed by the same
/// ordered list of string labels (vertex or idempotent names).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    labels: Vec<String>,
    entries: Vec<Vec<i64>>,
}

impl IntMatrix {
    /// Builds a matrix, checking that `entries` is `n × n` for `n` labels and
    /// that the labels are pairwise distinct.
    pub fn new(labels: Vec<String>, entries: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let n = labels.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(MatrixError::Shape {
                labels: n,
                rows: entries.len(),
                cols: entries.first().map_or(0, Vec::len),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(MatrixError::DuplicateLabel(l.clone()));
            }
        }
        Ok(IntMatrix { labels, entries })
    }

    /// Row/column labels, in index order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Matrix dimension.
    pub fn size(&self) -> usize {
        self.labels.len()
    }

    /// Entry at row `i`, column `j`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// The raw rows.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.entries
    }

    /// Column `j` as a vector (used for projective dimension vectors).
    pub fn column(&self, j: usize) -> Vec<i64> {
        self.entries.iter().map(|r| r[j]).collect()
    }

    /// Exact determinant via fraction-free elimination.
    pub fn det(&self) -> i128 {
        det_exact(&self.entries)
    }
}

impl fmt::Display for IntMatrix {
    /// Renders the matrix with aligned columns and label headers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .entries
            .iter()
            .map(|row| row.iter().map(|v| v.to_string()).collect())
            .collect();
        let mut widths: Vec<usize> = self.labels.iter().map(String::len).collect();
        for row in &cells {
            for (j, c) in row.iter().enumerate() {
                widths[j] = widths[j].max(c.len());
            }
        }
        let head = self.labels.iter().map(String::len).max().unwrap_or(0);
        write!(f, "{:head$} ", "")?;
        for (j, l) in self.labels.iter().enumerate() {
            write!(f, " {:>w$}", l, w = widths[j])?;
        }
        writeln!(f)?;
        for (i, row) in cells.iter().enumerate() {
            write!(f, "{:>head$} ", self.labels[i])?;
            for (j, c) in row.iter().enumerate() {
                write!(f, " {:>w$}", c, w = widths[j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn checked_mul(a: i128, b: i128) -> i128 {
    a.checked_mul(b).expect("integer overflow in exact elimination; matrix entries too large")
}

fn checked_sub(a: i128, b: i128) -> i128 {
    a.checked_sub(b).expect("integer overflow in exact elimination; matrix entries too large")
}

/// Exact determinant of a square integer matrix by Bareiss fraction-free
/// elimination. Every intermediate quotient is exact by construction.
pub fn det_exact(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "det_exact needs a square matrix");
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = checked_sub(checked_mul(m[i][j], m[k][k]), checked_mul(m[i][k], m[k][j]));
                debug_assert_eq!(num % prev, 0, "fraction-free elimination divided inexactly");
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Exact rank of a rectangular integer matrix over the rationals, by
/// fraction-free elimination with column skipping.
pub fn rank_exact(rows: &[Vec<i64>]) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    assert!(rows.iter().all(|r| r.len() == ncols), "rank_exact needs rectangular input");
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&v| v as i128).collect()).collect();
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let pivot = match (rank..nrows).find(|&i| m[i][col] != 0) {
            Some(i) => i,
            None => continue,
        };
        m.swap(rank, pivot);
        for i in rank + 1..nrows {
            for j in col + 1..ncols {
                let num = checked_sub(checked_mul(m[i][j], m[rank][col]), checked_mul(m[i][col], m[rank][j]));
                debug_assert_eq!(num % prev, 0, "fraction-free elimination divided inexactly");
                m[i][j] = num / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Naive Laplace-expansion determinant: the independent oracle the
    /// elimination code is checked against.
    fn det_laplace(rows: &[Vec<i64>]) -> i128 {
        let n = rows.len();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return rows[0][0] as i128;
        }
        let mut total = 0i128;
        for (j, &v) in rows[0].iter().enumerate() {
            if v == 0 {
                continue;
            }
            let minor: Vec<Vec<i64>> = rows[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let term = (v as i128) * det_laplace(&minor);
            total += if j % 2 == 0 { term } else { -term };
        }
        total
    }

    #[test]
    fn determinant_of_small_known_matrices() {
        assert_eq!(det_exact(&[]), 1);
        assert_eq!(det_exact(&[vec![7]]), 7);
        assert_eq!(det_exact(&[vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(det_exact(&[vec![2, 0, 1], vec![1, 1, 0], vec![0, 1, 1]]), 3);
        // Singular: second row is twice the first.
        assert_eq!(det_exact(&[vec![1, 2], vec![2, 4]]), 0);
        // Zero leading pivot forces a row swap.
        assert_eq!(det_exact(&[vec![0, 1], vec![1, 0]]), -1);
    }

    #[test]
    fn determinant_matches_laplace_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 0..=5 {
            for _ in 0..60 {
                let rows: Vec<Vec<i64>> =
                    (0..n).map(|_| (0..n).map(|_| rng.gen_range(-6..=6)).collect()).collect();
                assert_eq!(det_exact(&rows), det_laplace(&rows), "matrix {rows:?}");
            }
        }
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(rank_exact(&[]), 0);
        assert_eq!(rank_exact(&[vec![0, 0], vec![0, 0]]), 0);
        assert_eq!(rank_exact(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_exact(&[vec![1, 0], vec![0, 1]]), 2);
        // Rectangular, rank limited by rows.
        assert_eq!(rank_exact(&[vec![1, 2, 3], vec![2, 4, 7]]), 2);
        assert_eq!(rank_exact(&[vec![1, 2, 3]]), 1);
    }

    #[test]
    fn rank_agrees_with_determinant_nonsingularity() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let n = rng.gen_range(1..=4);
            let rows: Vec<Vec<i64>> =
                (0..n).map(|_| (0..n).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let full = rank_exact(&rows) == n;
            assert_eq!(full, det_exact(&rows) != 0, "matrix {rows:?}");
        }
    }

    #[test]
    fn labelled_matrix_accessors_and_validation() {
        let m = IntMatrix::new(
            vec!["a".into(), "b".into()],
            vec![vec![1, 2], vec![3, 4]],
        )
        .unwrap();
        assert_eq!(m.size(), 2);
        assert_eq!(m.entry(0, 1), 2);
        assert_eq!(m.column(1), vec![2, 4]);
        assert_eq!(m.det(), -2);
        assert!(m.to_string().contains('a'));

        assert!(matches!(
            IntMatrix::new(vec!["a".into()], vec![vec![1, 2]]),
            Err(MatrixError::Shape { .. })
        ));
        assert!(matches!(
            IntMatrix::new(vec!["a".into(), "a".into()], vec![vec![1, 2], vec![3, 4]]),
            Err(MatrixError::DuplicateLabel(_))
        ));
    }
}
