//! The finite field F_{2^e}, elements packed into a `u64` in the polynomial
//! basis of the lexicographically smallest irreducible modulus of degree e.

use super::FieldError;

pub const MAX_EXPONENT: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf {
    e: u32,
    /// Includes the leading x^e bit.
    modulus: u64,
}

fn clmul(a: u64, b: u64) -> u64 {
    // Both operands have degree < 32, so the product fits in 64 bits.
    let mut r = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    r
}

fn reduce(mut p: u64, modulus: u64, e: u32) -> u64 {
    for i in (e..64).rev() {
        if p >> i & 1 == 1 {
            p ^= modulus << (i - e);
        }
    }
    p
}

fn poly_deg(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = poly_deg(b);
        while a != 0 && poly_deg(a) >= db {
            a ^= b << (poly_deg(a) - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: f of degree e is irreducible iff x^(2^e) = x mod f and
/// gcd(x^(2^(e/p)) - x, f) = 1 for every prime p dividing e.
fn is_irreducible(f: u64, e: u32) -> bool {
    let x1 = reduce(2, f, e);
    let frob = |k: u32| {
        let mut x = x1;
        for _ in 0..k {
            x = reduce(clmul(x, x), f, e);
        }
        x
    };
    if frob(e) != x1 {
        return false;
    }
    prime_factors(e)
        .into_iter()
        .all(|p| poly_gcd(f, frob(e / p) ^ x1) == 1)
}

impl Gf {
    pub fn new(e: u32) -> Result<Self, FieldError> {
        if e == 0 || e > MAX_EXPONENT {
            return Err(FieldError::BadExponent(e));
        }
        let top = 1u64 << e;
        let modulus = (0..top)
            .map(|low| top | low)
            .filter(|f| f & 1 == 1)
            .find(|&f| is_irreducible(f, e))
            .expect("an irreducible polynomial exists in every degree");
        Ok(Gf { e, modulus })
    }

    pub fn exponent(&self) -> u32 {
        self.e
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.e
    }

    pub fn contains(&self, x: u64) -> bool {
        x < self.order()
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        reduce(clmul(a, b), self.modulus, self.e)
    }

    pub fn sqr(&self, a: u64) -> u64 {
        self.mul(a, a)
    }

    pub fn pow(&self, a: u64, mut n: u64) -> u64 {
        let mut base = a;
        let mut acc = 1u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.sqr(base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    /// The unique square root, x^(2^(e-1)).
    pub fn sqrt(&self, a: u64) -> u64 {
        let mut x = a;
        for _ in 0..self.e - 1 {
            x = self.sqr(x);
        }
        x
    }

    /// Absolute trace to F_2.
    pub fn trace(&self, a: u64) -> bool {
        let mut acc = 0u64;
        let mut x = a;
        for _ in 0..self.e {
            acc ^= x;
            x = self.sqr(x);
        }
        debug_assert!(acc <= 1);
        acc == 1
    }

    /// Smallest element of trace 1, used as the canonical Artin-Schreier
    /// constant of the unique unramified quadratic extension.
    pub fn trace_one(&self) -> u64 {
        (1..self.order())
            .find(|&x| self.trace(x))
            .expect("the trace map is surjective")
    }

    /// Solves u^2 + u = c. The map u -> u^2 + u is F_2-linear with kernel
    /// {0, 1}; we invert it on the trace-zero hyperplane by elimination.
    pub fn solve_wp(&self, c: u64) -> Option<u64> {
        if self.trace(c) {
            return None;
        }
        let e = self.e as usize;
        // Rows: (image bits, preimage bits).
        let mut rows: Vec<(u64, u64)> = (0..e)
            .map(|i| {
                let u = 1u64 << i;
                (self.sqr(u) ^ u, u)
            })
            .collect();
        let mut pivots: Vec<(u32, u64, u64)> = Vec::new();
        for (mut img, mut pre) in rows.drain(..) {
            for &(bit, pimg, ppre) in &pivots {
                if img >> bit & 1 == 1 {
                    img ^= pimg;
                    pre ^= ppre;
                }
            }
            if img != 0 {
                let bit = 63 - img.leading_zeros();
                for p in pivots.iter_mut() {
                    if p.1 >> bit & 1 == 1 {
                        p.1 ^= img;
                        p.2 ^= pre;
                    }
                }
                pivots.push((bit, img, pre));
            }
        }
        let mut target = c;
        let mut u = 0u64;
        for &(bit, pimg, ppre) in &pivots {
            if target >> bit & 1 == 1 {
                target ^= pimg;
                u ^= ppre;
            }
        }
        if target != 0 {
            return None;
        }
        debug_assert_eq!(self.sqr(u) ^ u, c);
        Some(u)
    }

    /// Root in `self` of the polynomial x^2 + x + c.
    pub fn quadratic_root(&self, c: u64) -> Option<u64> {
        self.solve_wp(c)
    }

    /// Evaluates the polynomial with F_2 coefficients encoded by `bits` at `x`.
    pub fn eval_binary_poly(&self, bits: u64, x: u64) -> u64 {
        let mut acc = 0u64;
        for i in (0..64).rev() {
            acc = self.mul(acc, x);
            if bits >> i & 1 == 1 {
                acc ^= 1;
            }
        }
        acc
    }

    /// Image of the generator of `small` under a fixed embedding
    /// small -> self, namely the first root of small's modulus found by
    /// walking the subfield of order |small| in Gray-code order.
    pub fn embedding_image(&self, small: &Gf) -> Result<u64, FieldError> {
        if !self.e.is_multiple_of(small.e) {
            return Err(FieldError::NotASubfield {
                small: small.e,
                big: self.e,
            });
        }
        if small.e == 1 {
            return Ok(1);
        }
        // Subfield = kernel of y -> y^(2^m) + y, computed over F_2.
        let m = small.e;
        let frob_m = |y: u64| {
            let mut z = y;
            for _ in 0..m {
                z = self.sqr(z);
            }
            z ^ y
        };
        let e = self.e as usize;
        let mut kernel: Vec<u64> = Vec::new();
        let mut pivots: Vec<(u32, u64, u64)> = Vec::new();
        for i in 0..e {
            let mut img = frob_m(1u64 << i);
            let mut pre = 1u64 << i;
            for &(bit, pimg, ppre) in &pivots {
                if img >> bit & 1 == 1 {
                    img ^= pimg;
                    pre ^= ppre;
                }
            }
            if img == 0 {
                kernel.push(pre);
            } else {
                let bit = 63 - img.leading_zeros();
                pivots.push((bit, img, pre));
            }
        }
        debug_assert_eq!(kernel.len(), m as usize);
        let mut y = 0u64;
        for step in 1u64..(1u64 << kernel.len()) {
            y ^= kernel[step.trailing_zeros() as usize];
            if self.eval_binary_poly(small.modulus, y) == 0 {
                return Ok(y);
            }
        }
        Err(FieldError::NotASubfield {
            small: small.e,
            big: self.e,
        })
    }

    pub fn render(&self, x: u64, gen: &str) -> String {
        if x == 0 {
            return "0".into();
        }
        let mut terms = Vec::new();
        for i in (0..self.e).rev() {
            if x >> i & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => gen.to_string(),
                    _ => format!("{gen}^{i}"),
                });
            }
        }
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_moduli() {
        assert_eq!(Gf::new(1).unwrap().modulus(), 0b11);
        assert_eq!(Gf::new(2).unwrap().modulus(), 0b111);
        assert_eq!(Gf::new(3).unwrap().modulus(), 0b1011);
        assert_eq!(Gf::new(4).unwrap().modulus(), 0b10011);
        assert_eq!(Gf::new(8).unwrap().modulus(), 0b1_0001_1011);
    }

    #[test]
    fn field_axioms_exhaustive_f16() {
        let k = Gf::new(4).unwrap();
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(k.mul(a, b), k.mul(b, a));
                for c in 0..16 {
                    assert_eq!(k.mul(a, b ^ c), k.mul(a, b) ^ k.mul(a, c));
                    assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
                }
            }
            if a != 0 {
                assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
            }
            assert_eq!(k.sqr(k.sqrt(a)), a);
        }
    }

    #[test]
    fn trace_and_wp_agree_with_brute_force() {
        for e in 1..=6 {
            let k = Gf::new(e).unwrap();
            for c in 0..k.order() {
                let brute = (0..k.order()).find(|&u| k.sqr(u) ^ u == c);
                assert_eq!(brute.is_some(), !k.trace(c));
                if let Some(u) = k.solve_wp(c) {
                    assert_eq!(k.sqr(u) ^ u, c);
                }
                assert_eq!(k.solve_wp(c).is_some(), brute.is_some());
            }
        }
    }

    #[test]
    fn embeddings_are_ring_maps() {
        for e in 1..=5 {
            let small = Gf::new(e).unwrap();
            let big = Gf::new(2 * e).unwrap();
            let g = big.embedding_image(&small).unwrap();
            let map = |x: u64| big.eval_binary_poly(x, g);
            for a in 0..small.order() {
                for b in 0..small.order() {
                    assert_eq!(map(small.mul(a, b)), big.mul(map(a), map(b)));
                    assert_eq!(map(a ^ b), map(a) ^ map(b));
                }
            }
        }
    }
}
