//! Gaussian elimination over a tower level.

use crate::fieldtower::{Elem, FResult, Tower};

/// Basis of the left kernel {x : sum_i x_i * rows[i] = 0}.
pub fn left_kernel(k: &Tower, rows: &[Vec<Elem>]) -> FResult<Vec<Vec<Elem>>> {
    let m = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    // Each working row carries the combination of input rows it represents.
    let mut work: Vec<(Vec<Elem>, Vec<Elem>)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut tag = vec![k.zero(); m];
            tag[i] = k.one();
            (r.clone(), tag)
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(p) = (pivot_row..m).find(|&r| !k.is_zero(&work[r].0[col])) else {
            continue;
        };
        work.swap(pivot_row, p);
        let inv = k.inv(&work[pivot_row].0[col])?;
        let (pv, pt) = work[pivot_row].clone();
        for r in 0..m {
            if r == pivot_row || k.is_zero(&work[r].0[col]) {
                continue;
            }
            let f = k.mul(&work[r].0[col], &inv)?;
            axpy(k, &mut work[r].0, &f, &pv)?;
            axpy(k, &mut work[r].1, &f, &pt)?;
        }
        pivot_row += 1;
    }
    Ok(work.into_iter().skip(pivot_row).map(|(_, t)| t).collect())
}

pub fn rank(k: &Tower, rows: &[Vec<Elem>]) -> FResult<usize> {
    Ok(rows.len() - left_kernel(k, rows)?.len())
}

/// y += f * x.
pub fn axpy(k: &Tower, y: &mut [Elem], f: &Elem, x: &[Elem]) -> FResult<()> {
    for (a, b) in y.iter_mut().zip(x) {
        if !k.is_zero(b) {
            *a = k.add(a, &k.mul(f, b)?)?;
        }
    }
    Ok(())
}

pub fn dot(k: &Tower, x: &[Elem], y: &[Elem]) -> FResult<Elem> {
    let mut acc = k.zero();
    for (a, b) in x.iter().zip(y) {
        if !k.is_zero(a) && !k.is_zero(b) {
            acc = k.add(&acc, &k.mul(a, b)?)?;
        }
    }
    Ok(acc)
}

/// Solves sum_j a[i][j] x_j = b_i; returns one solution or `None`.
pub fn solve(k: &Tower, a: &[Vec<Elem>], b: &[Elem]) -> FResult<Option<Vec<Elem>>> {
    let n = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Elem>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut pr = 0;
    for col in 0..n {
        let Some(p) = (pr..rows.len()).find(|&r| !k.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(pr, p);
        let inv = k.inv(&rows[pr][col])?;
        let pivot: Vec<Elem> = rows[pr]
            .iter()
            .map(|x| k.mul(x, &inv))
            .collect::<FResult<_>>()?;
        rows[pr] = pivot.clone();
        for r in 0..rows.len() {
            if r != pr && !k.is_zero(&rows[r][col]) {
                let f = rows[r][col].clone();
                axpy(k, &mut rows[r], &f, &pivot)?;
            }
        }
        pivots.push(col);
        pr += 1;
    }
    if rows[pr..].iter().any(|r| !k.is_zero(&r[n])) {
        return Ok(None);
    }
    let mut x = vec![k.zero(); n];
    for (r, &col) in pivots.iter().enumerate() {
        x[col] = rows[r][n].clone();
    }
    Ok(Some(x))
}

/// Basis of the right null space {x : a x = 0}.
pub fn null_space(k: &Tower, a: &[Vec<Elem>], n: usize) -> FResult<Vec<Vec<Elem>>> {
    let cols: Vec<Vec<Elem>> = (0..n)
        .map(|j| a.iter().map(|r| r[j].clone()).collect())
        .collect();
    if a.is_empty() {
        return Ok((0..n)
            .map(|j| {
                let mut v = vec![k.zero(); n];
                v[j] = k.one();
                v
            })
            .collect());
    }
    left_kernel(k, &cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let k = Tower::laurent(1, &["t"]).unwrap();
        let t = k.t();
        let one = k.one();
        let zero = k.zero();
        let t2 = k.sqr(&t).unwrap();
        let rows = vec![
            vec![one.clone(), t.clone()],
            vec![t.clone(), t2.clone()],
            vec![zero.clone(), one.clone()],
        ];
        let ker = left_kernel(&k, &rows).unwrap();
        assert_eq!(ker.len(), 1);
        assert_eq!(rank(&k, &rows).unwrap(), 2);
        let x = solve(&k, &rows, &[t.clone(), t2.clone(), zero.clone()])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![t.clone(), zero.clone()]);
        assert!(solve(&k, &rows, &[one.clone(), one.clone(), zero])
            .unwrap()
            .is_none());
    }
}
