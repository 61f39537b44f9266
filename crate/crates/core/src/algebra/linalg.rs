use super::rat::Rat;

/// One solution of `A x = b` over Q (free variables set to zero), or
/// `None` if the system is inconsistent. `a` is row-major with `ncols`
/// columns.
pub fn solve(a: &[Vec<Rat>], b: &[Rat], ncols: usize) -> Option<Vec<Rat>> {
    let nrows = a.len();
    assert_eq!(b.len(), nrows);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=ncols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == nrows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[ncols].is_zero()) {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][ncols].clone();
    }
    Some(x)
}
