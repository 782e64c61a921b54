//! Dense univariate polynomials over a tower level, coefficients in
//! increasing degree with no trailing zeros.

use super::{Elem, FResult, Tower};

pub fn trim(l: &Tower, mut p: Vec<Elem>) -> Vec<Elem> {
    while p.last().is_some_and(|c| l.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn add(l: &Tower, a: &[Elem], b: &[Elem]) -> FResult<Vec<Elem>> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (i, c) in short.iter().enumerate() {
        out[i] = l.add(&out[i], c)?;
    }
    Ok(trim(l, out))
}

pub fn mul(l: &Tower, a: &[Elem], b: &[Elem]) -> FResult<Vec<Elem>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![l.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if l.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if l.is_zero(y) {
                continue;
            }
            let p = l.mul(x, y)?;
            out[i + j] = l.add(&out[i + j], &p)?;
        }
    }
    Ok(trim(l, out))
}

pub fn scale(l: &Tower, p: &[Elem], c: &Elem) -> FResult<Vec<Elem>> {
    if l.is_zero(c) {
        return Ok(Vec::new());
    }
    p.iter().map(|x| l.mul(x, c)).collect()
}

pub fn divrem(l: &Tower, a: &[Elem], b: &[Elem]) -> FResult<(Vec<Elem>, Vec<Elem>)> {
    let db = b.len() - 1;
    let lc_inv = l.inv(&b[db])?;
    let mut r = a.to_vec();
    if r.len() <= db {
        return Ok((Vec::new(), r));
    }
    let mut q = vec![l.zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = l.mul(r.last().expect("nonempty"), &lc_inv)?;
        for (j, y) in b.iter().enumerate() {
            if l.is_zero(y) {
                continue;
            }
            let p = l.mul(&c, y)?;
            r[k + j] = l.add(&r[k + j], &p)?;
        }
        q[k] = c;
        r = trim(l, r);
    }
    Ok((trim(l, q), r))
}

pub fn div_exact(l: &Tower, a: &[Elem], b: &[Elem]) -> FResult<Vec<Elem>> {
    if b.len() == 1 && l.is_one(&b[0]) {
        return Ok(a.to_vec());
    }
    let (q, r) = divrem(l, a, b)?;
    debug_assert!(r.is_empty());
    Ok(q)
}

/// Monic gcd; both inputs nonzero.
pub fn gcd(l: &Tower, a: &[Elem], b: &[Elem]) -> FResult<Vec<Elem>> {
    if a.len() == 1 || b.len() == 1 {
        return Ok(vec![l.one()]);
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    while !y.is_empty() {
        let (_, r) = divrem(l, &x, &y)?;
        x = y;
        y = r;
    }
    let lc = l.inv(x.last().expect("nonzero"))?;
    scale(l, &x, &lc)
}

/// Order of vanishing at 0 of a nonzero polynomial.
pub fn ord(l: &Tower, p: &[Elem]) -> usize {
    p.iter().position(|c| !l.is_zero(c)).expect("nonzero polynomial")
}
