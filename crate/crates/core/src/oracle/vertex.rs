use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// Unique solution of `rows · x = rhs`, if there is exactly one.
pub(crate) fn solve_unique(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rows.first().map_or(0, Vec::len);
    let m = rows.len();
    let mut pivots = Vec::with_capacity(n);
    let mut r = 0;
    for col in 0..n {
        let p = (r..m).find(|&i| !rows[i][col].is_zero())?;
        rows.swap(r, p);
        rhs.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        rhs[r] *= &inv;
        for i in 0..m {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let (src, dst) = if i < r {
                    let (a, b) = rows.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = rows.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d -= &f * s;
                }
                let s = rhs[r].clone();
                rhs[i] -= &f * s;
            }
        }
        pivots.push(col);
        r += 1;
    }
    // Rows beyond the rank must be consistent.
    if rhs[r..].iter().any(|b| !b.is_zero()) {
        return None;
    }
    Some(rhs.into_iter().take(n).collect())
}

/// Vertices of `{λ ≥ 0 : A λ = b}` over `cols` columns, found as the unique
/// nonnegative solutions on every column subset of size at most `rows`.
pub(crate) fn vertices(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Vec<Vec<Rational>> {
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let max = a.len().min(cols);
    let mut subset = Vec::with_capacity(max);
    fn walk(start: usize, cols: usize, max: usize, subset: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if !subset.is_empty() {
            visit(subset);
        }
        if subset.len() == max {
            return;
        }
        for c in start..cols {
            subset.push(c);
            walk(c + 1, cols, max, subset, visit);
            subset.pop();
        }
    }
    walk(0, cols, max, &mut subset, &mut |s| {
        let rows = a.iter().map(|row| s.iter().map(|&c| row[c].clone()).collect()).collect();
        if let Some(x) = solve_unique(rows, b.to_vec()) {
            if x.iter().all(|v| !v.is_negative()) && x.iter().all(|v| !v.is_zero()) {
                let mut full = vec![Rational::zero(); cols];
                for (&c, v) in s.iter().zip(x) {
                    full[c] = v;
                }
                if !out.contains(&full) {
                    out.push(full);
                }
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn unique_solution() {
        let rows = vec![vec![int(1), int(1)], vec![int(1), int(-1)], vec![int(2), int(0)]];
        let x = solve_unique(rows, vec![int(3), int(1), int(4)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
    }

    #[test]
    fn underdetermined_or_inconsistent() {
        assert!(solve_unique(vec![vec![int(1), int(1)]], vec![int(1)]).is_none());
        assert!(solve_unique(vec![vec![int(1)], vec![int(2)]], vec![int(1), int(1)]).is_none());
    }

    #[test]
    fn simplex_vertices() {
        // λ1 + λ2 + λ3 = 1: the three unit vectors.
        let v = vertices(&[vec![int(1), int(1), int(1)]], &[int(1)], 3);
        assert_eq!(v.len(), 3);
        // Adding λ1 = λ2 leaves (1/2, 1/2, 0) and (0, 0, 1).
        let a = vec![vec![int(1), int(1), int(1)], vec![int(1), int(-1), int(0)]];
        let v = vertices(&a, &[int(1), int(0)], 3);
        assert_eq!(v.len(), 2);
        assert!(v.contains(&vec![ratio(1, 2), ratio(1, 2), int(0)]));
    }
}
