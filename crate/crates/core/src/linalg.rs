//! Small exact linear algebra over fields of rationals.

use num_traits::Num;

/// Reduces `rows` to row-echelon form in place and returns the rank.
pub fn row_echelon<T>(rows: &mut Vec<Vec<T>>) -> usize
where
    T: Num + Clone,
{
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r == rank || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone() / p.clone();
            for c in col..ncols {
                let delta = factor.clone() * rows[rank][c].clone();
                rows[r][c] = rows[r][c].clone() - delta;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rows.len());
    rank
}

pub fn rank<T>(rows: &[Vec<T>]) -> usize
where
    T: Num + Clone,
{
    let mut m = rows.to_vec();
    row_echelon(&mut m)
}

/// Solves `Σ_j coeffs[j]·columns[j] = target` exactly. Returns `None` when
/// the target is outside the column span. Columns must be independent.
pub fn solve_in_span<T>(columns: &[Vec<T>], target: &[T]) -> Option<Vec<T>>
where
    T: Num + Clone,
{
    let n = columns.len();
    let dim = target.len();
    // augmented rows: one per coordinate
    let mut rows: Vec<Vec<T>> = (0..dim)
        .map(|i| {
            let mut row: Vec<T> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let p = (r..dim).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(r, p);
        let pv = rows[r][col].clone();
        for c in col..=n {
            rows[r][c] = rows[r][c].clone() / pv.clone();
        }
        for i in 0..dim {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in col..=n {
                    let delta = f.clone() * rows[r][c].clone();
                    rows[i][c] = rows[i][c].clone() - delta;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| rows[i][n].clone()).collect())
}

pub fn dot<T>(a: &[T], b: &[T]) -> T
where
    T: Num + Clone,
{
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Orthogonal (unnormalized) Gram-Schmidt; dependent inputs are dropped.
pub fn gram_schmidt<T>(vectors: &[Vec<T>]) -> Vec<Vec<T>>
where
    T: Num + Clone,
{
    let mut basis: Vec<Vec<T>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for b in &basis {
            let f = dot(&w, b) / dot(b, b);
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi = wi.clone() - f.clone() * bi.clone();
            }
        }
        if w.iter().any(|x| !x.is_zero()) {
            basis.push(w);
        }
    }
    basis
}
