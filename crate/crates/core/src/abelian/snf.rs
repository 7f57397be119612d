//! Smith normal form over the integers with unimodular transforms.

use super::AbelianError;

pub type IntMatrix = Vec<Vec<i64>>;

/// `left · input · right = diag(diagonal)` with `left`, `right` unimodular.
///
/// Nonzero diagonal entries are positive and each divides the next; zero
/// entries come last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub diagonal: Vec<i64>,
    pub left: IntMatrix,
    pub right: IntMatrix,
    pub rank: usize,
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mul_sub(a: i64, q: i64, b: i64) -> Result<i64, AbelianError> {
    q.checked_mul(b)
        .and_then(|qb| a.checked_sub(qb))
        .ok_or(AbelianError::Overflow)
}

/// `row[dst] -= q * row[src]`
fn row_op(m: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<(), AbelianError> {
    if q == 0 {
        return Ok(());
    }
    for j in 0..m[dst].len() {
        m[dst][j] = mul_sub(m[dst][j], q, m[src][j])?;
    }
    Ok(())
}

/// `col[dst] -= q * col[src]`
fn col_op(m: &mut IntMatrix, dst: usize, src: usize, q: i64) -> Result<(), AbelianError> {
    if q == 0 {
        return Ok(());
    }
    for row in m.iter_mut() {
        row[dst] = mul_sub(row[dst], q, row[src])?;
    }
    Ok(())
}

fn swap_cols(m: &mut IntMatrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Computes the Smith normal form of an `rows × cols` integer matrix.
pub fn smith_normal_form(input: &IntMatrix, cols: usize) -> Result<SmithForm, AbelianError> {
    let rows = input.len();
    if input.iter().any(|r| r.len() != cols) {
        return Err(AbelianError::DimensionMismatch {
            expected: cols,
            found: input.iter().map(|r| r.len()).find(|&l| l != cols).unwrap_or(0),
        });
    }
    let mut d = input.clone();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let mut rank = 0;

    'outer: for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for (i, row) in d.iter().enumerate().skip(t) {
                for (j, &v) in row.iter().enumerate().skip(t) {
                    if v != 0 && pivot.is_none_or(|(pi, pj)| v.abs() < d[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                break 'outer;
            };
            d.swap(t, pi);
            left.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut right, t, pj);

            let p = d[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = d[i][t] / p;
                row_op(&mut d, i, t, q)?;
                row_op(&mut left, i, t, q)?;
                clean &= d[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = d[t][j] / p;
                col_op(&mut d, j, t, q)?;
                col_op(&mut right, j, t, q)?;
                clean &= d[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and retry
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % p != 0));
            if let Some(i) = offending {
                row_op(&mut d, t, i, -1)?;
                row_op(&mut left, t, i, -1)?;
                continue;
            }
            break;
        }
        if d[t][t] < 0 {
            for v in d[t].iter_mut() {
                *v = -*v;
            }
            for v in left[t].iter_mut() {
                *v = -*v;
            }
        }
        rank = t + 1;
    }

    let diagonal = (0..rows.min(cols)).map(|i| d[i][i]).collect();
    Ok(SmithForm {
        diagonal,
        left,
        right,
        rank,
    })
}

/// A basis of the integer kernel `{x ∈ Z^cols : m x = 0}`.
pub fn integer_kernel(m: &IntMatrix, cols: usize) -> Result<Vec<Vec<i64>>, AbelianError> {
    let snf = smith_normal_form(m, cols)?;
    Ok((snf.rank..cols)
        .map(|j| snf.right.iter().map(|row| row[j]).collect())
        .collect())
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, b_cols: usize) -> Result<IntMatrix, AbelianError> {
    a.iter()
        .map(|row| {
            (0..b_cols)
                .map(|j| {
                    row.iter().zip(b).try_fold(0i64, |acc, (&x, brow)| {
                        x.checked_mul(brow[j])
                            .and_then(|p| acc.checked_add(p))
                            .ok_or(AbelianError::Overflow)
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: IntMatrix, cols: usize) -> SmithForm {
        let snf = smith_normal_form(&m, cols).unwrap();
        let lm = mat_mul(&snf.left, &m, cols).unwrap();
        let lmr = mat_mul(&lm, &snf.right, cols).unwrap();
        for (i, row) in lmr.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let expected = if i == j { snf.diagonal[i] } else { 0 };
                assert_eq!(v, expected, "entry ({i},{j}) of U·A·V");
            }
        }
        let nonzero: Vec<i64> = snf.diagonal.iter().copied().filter(|&d| d != 0).collect();
        for w in nonzero.windows(2) {
            assert_eq!(w[1] % w[0], 0, "divisibility chain {:?}", snf.diagonal);
        }
        snf
    }

    #[test]
    fn two_by_two() {
        let snf = check(vec![vec![2, 1], vec![1, 2]], 2);
        assert_eq!(snf.diagonal, vec![1, 3]);
    }

    #[test]
    fn needs_divisibility_fix() {
        let snf = check(vec![vec![2, 0], vec![0, 3]], 2);
        assert_eq!(snf.diagonal, vec![1, 6]);
    }

    #[test]
    fn rectangular_and_rank_deficient() {
        let snf = check(vec![vec![4, 0], vec![8, 0], vec![0, 2]], 2);
        assert_eq!(snf.diagonal, vec![2, 4]);
        let snf = check(vec![vec![1, 2, 3], vec![2, 4, 6]], 3);
        assert_eq!(snf.rank, 1);
        let ker = integer_kernel(&vec![vec![1, 2, 3], vec![2, 4, 6]], 3).unwrap();
        assert_eq!(ker.len(), 2);
    }

    #[test]
    fn overflow_is_reported() {
        let big = i64::MAX / 2 + 7;
        let m = vec![vec![big, big - 1], vec![big - 3, big]];
        // either succeeds exactly or reports overflow, never wraps
        if let Ok(snf) = smith_normal_form(&m, 2) {
            assert!(snf.diagonal.iter().all(|&d| d >= 0));
        }
    }
}
