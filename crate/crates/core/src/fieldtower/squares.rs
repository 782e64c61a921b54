//! Decomposition along K = sum over monomials m of m * K^2.
//!
//! Over K = F_{2^e}((t1))...((tn)) the 2^n square-free monomials in the t_i
//! form a basis of K over K^2, so every x has a unique expansion
//! x = sum_eps m_eps * f_eps^2. Index bit k-1 of eps stands for t_k.

use super::{poly, Elem, FResult, Tower};

impl Tower {
    /// The components f_eps, indexed by monomial bitmask.
    pub fn frobenius_components(&self, x: &Elem) -> FResult<Vec<Elem>> {
        let l = match self.lower() {
            None => return Ok(vec![Elem::Base(self.base().sqrt(self.base_value(x)))]),
            Some(l) => l.clone(),
        };
        let n = self.level();
        let half = 1usize << (n - 1);
        let mut out = vec![self.zero(); 2 * half];
        if self.is_zero(x) {
            return Ok(out);
        }
        // x = p/q = (p*q)/q^2 and p*q = A(t^2) + t*B(t^2).
        let f = self.frac(x);
        let pq = poly::mul(&l, f.num(), f.den())?;
        let q = Elem::Frac(std::sync::Arc::new(super::Frac {
            num: vec![l.one()],
            den: f.den().to_vec(),
        }));
        for parity in 0..2 {
            let coeffs: Vec<Elem> = pq.iter().skip(parity).step_by(2).cloned().collect();
            // Components of each coefficient at the level below.
            let mut polys: Vec<Vec<Elem>> = vec![Vec::with_capacity(coeffs.len()); half];
            for c in &coeffs {
                let comps = l.frobenius_components(c)?;
                for (eps, comp) in comps.into_iter().enumerate() {
                    polys[eps].push(comp);
                }
            }
            for (eps, p) in polys.into_iter().enumerate() {
                let p = poly::trim(&l, p);
                if p.is_empty() {
                    continue;
                }
                let num = self.make(p, vec![l.one()])?;
                out[eps | (parity << (n - 1))] = self.mul(&num, &q)?;
            }
        }
        Ok(out)
    }

    /// The square-free monomial with bitmask `eps`.
    pub fn monomial_basis(&self, eps: usize) -> Elem {
        let mut acc = self.one();
        let mut t: &Tower = self;
        let n = self.level();
        for k in (1..=n).rev() {
            if eps >> (k - 1) & 1 == 1 {
                let v = self.lift_from(k, t.t());
                acc = self.mul(&acc, &v).expect("degree 1");
            }
            if k > 1 {
                t = t.lower().expect("level >= 1");
            }
        }
        acc
    }

    pub fn sqrt(&self, x: &Elem) -> FResult<Option<Elem>> {
        let comps = self.frobenius_components(x)?;
        if comps[1..].iter().all(|c| self.is_zero(c)) {
            Ok(Some(comps[0].clone()))
        } else {
            Ok(None)
        }
    }

    pub fn is_square(&self, x: &Elem) -> FResult<bool> {
        Ok(self.sqrt(x)?.is_some())
    }
}

#[cfg(test)]
mod tests {
    use crate::fieldtower::Tower;

    #[test]
    fn components_reassemble() {
        let k = Tower::laurent(2, &["s", "t"]).unwrap();
        let s = k.var("s").unwrap();
        let t = k.var("t").unwrap();
        let g = k.generator().unwrap();
        let one = k.one();
        let num = k
            .sum(&[
                k.mul(&s, &t).unwrap(),
                g.clone(),
                k.pow(&s, 3).unwrap(),
            ])
            .unwrap();
        let den = k.add(&one, &k.mul(&g, &t).unwrap()).unwrap();
        let x = k.div(&num, &den).unwrap();
        let comps = k.frobenius_components(&x).unwrap();
        let mut acc = k.zero();
        for (eps, f) in comps.iter().enumerate() {
            let term = k.mul(&k.monomial_basis(eps), &k.sqr(f).unwrap()).unwrap();
            acc = k.add(&acc, &term).unwrap();
        }
        assert_eq!(acc, x);
    }

    #[test]
    fn squares_are_recognized() {
        let k = Tower::laurent(1, &["s", "t"]).unwrap();
        let s = k.var("s").unwrap();
        let t = k.var("t").unwrap();
        let y = k.div(&k.add(&s, &t).unwrap(), &k.add(&k.one(), &t).unwrap()).unwrap();
        let y2 = k.sqr(&y).unwrap();
        assert_eq!(k.sqrt(&y2).unwrap(), Some(y));
        assert!(!k.is_square(&s).unwrap());
        assert!(!k.is_square(&k.mul(&s, &t).unwrap()).unwrap());
    }
}
