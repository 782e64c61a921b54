use std::sync::Arc;

use proptest::prelude::*;

use chowq::clifford::splitting_index;
use chowq::corpus;
use chowq::fieldtower::{Elem, FieldError, Tower};
use chowq::forms::{isometric, FormError, QuadraticForm};
use chowq::pfister::{make_pfister, PfisterSpec};
use chowq::witt::{decide_isotropy, witt_decompose, witt_index, WittError};

fn st() -> Arc<Tower> {
    Tower::laurent(1, &["s", "t"]).unwrap()
}

fn elem(k: &Tower, seed: u64) -> Elem {
    let mut r = corpus::rng(seed);
    let a = corpus::random_monomial(k, &mut r, 3).unwrap();
    let b = corpus::random_polynomial_unit(k, &mut r).unwrap();
    k.mul(&a, &b).unwrap()
}

fn tame(k: &Arc<Tower>, seed: u64, blocks: usize, ql: bool) -> QuadraticForm {
    corpus::random_tame_form(k, &mut corpus::rng(seed), blocks, ql).unwrap()
}

/// Drops undecided answers and degree-cap overflows; anything else fails.
fn decided<T, E: Into<WittError>>(r: Result<T, E>) -> Option<T> {
    match r.map_err(Into::into) {
        Ok(x) => Some(x),
        Err(WittError::Undecided(_)) => None,
        Err(WittError::Form(FormError::Field(FieldError::DegreeOverflow { .. }))) => None,
        Err(e) => panic!("{e}"),
    }
}

fn index(phi: &QuadraticForm) -> Option<usize> {
    decided(witt_index(phi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let k = st();
        let (x, y, z) = (elem(&k, a), elem(&k, b), elem(&k, c));
        let lhs = k.mul(&x, &k.add(&y, &z).unwrap()).unwrap();
        let rhs = k.add(&k.mul(&x, &y).unwrap(), &k.mul(&x, &z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(k.is_zero(&k.add(&x, &x).unwrap()));
        prop_assert!(k.is_one(&k.mul(&x, &k.inv(&x).unwrap()).unwrap()));
        // Frobenius is additive.
        let s = k.sqr(&k.add(&x, &y).unwrap()).unwrap();
        prop_assert_eq!(s, k.add(&k.sqr(&x).unwrap(), &k.sqr(&y).unwrap()).unwrap());
        // p(x) = x^2 + x lies in p(K).
        let w = k.add(&k.sqr(&x).unwrap(), &x).unwrap();
        prop_assert!(k.wp_member(&w).unwrap());
    }

    #[test]
    fn doubled_form_is_hyperbolic(seed in any::<u64>(), blocks in 1usize..=3) {
        let k = st();
        let q = tame(&k, seed, blocks, false);
        let qq = q.orthogonal_sum(&q).unwrap();
        if let Some(i) = index(&qq) {
            prop_assert_eq!(i, 2 * blocks);
        }
    }

    #[test]
    fn witt_cancellation(seed in any::<u64>(), blocks in 1usize..=3, ql in any::<bool>()) {
        let k = st();
        let phi = tame(&k, seed, blocks, ql);
        let h = QuadraticForm::hyperbolic(k.clone(), 1);
        if let (Some(i), Some(j)) = (index(&phi), index(&phi.orthogonal_sum(&h).unwrap())) {
            prop_assert_eq!(j, i + 1);
        }
        if let Ok(d) = witt_decompose(&phi) {
            let back = QuadraticForm::hyperbolic(k.clone(), d.witt_index)
                .orthogonal_sum(&d.kernel)
                .unwrap();
            if let Some(same) = decided(isometric(&phi, &back)) {
                prop_assert!(same);
            }
            prop_assert_eq!(index(&d.kernel), Some(0));
        }
    }

    #[test]
    fn scaling_invariance(seed in any::<u64>(), lam in any::<u64>(), blocks in 1usize..=3) {
        let k = st();
        let phi = tame(&k, seed, blocks, false);
        let scaled = phi.scale(&elem(&k, lam)).unwrap();
        prop_assert_eq!(index(&phi), index(&scaled));
        prop_assert_eq!(phi.arf().unwrap(), scaled.arf().unwrap());
    }

    #[test]
    fn isometry_invariance(seed in any::<u64>(), blocks in 1usize..=2, ql in any::<bool>()) {
        let k = st();
        let phi = tame(&k, seed, blocks, ql);
        let psi = corpus::random_isometric(&phi, &mut corpus::rng(seed ^ 1)).unwrap();
        prop_assert_eq!(phi.dim(), psi.dim());
        // A wild copy may be undecided; compare decided answers only.
        if let (Some(i), Some(j)) = (index(&phi), index(&psi)) {
            prop_assert_eq!(i, j);
        }
        if phi.is_nonsingular() {
            if let Some(arf) = decided(psi.arf()) {
                prop_assert_eq!(phi.arf().unwrap(), arf);
            }
        }
        let a = decided(decide_isotropy(&phi)).and_then(|v| v.is_isotropic());
        let b = decided(decide_isotropy(&psi)).and_then(|v| v.is_isotropic());
        if let (Some(a), Some(b)) = (a, b) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn pfister_forms(a in any::<u64>(), b in any::<u64>(), d in any::<u64>(), n in 0usize..=2) {
        let k = st();
        let slots: Vec<Elem> = [a, b].iter().take(n).map(|&x| elem(&k, x)).collect();
        let spec = PfisterSpec::new(k.clone(), slots, elem(&k, d));
        let pi = make_pfister(&spec).unwrap();
        prop_assert_eq!(pi.dim(), 1 << (n + 1));
        prop_assert!(pi.has_trivial_arf().unwrap() || n == 0);
        // Pfister forms are isotropic only when hyperbolic.
        if let Some(i) = index(&pi) {
            prop_assert!(i == 0 || 2 * i == pi.dim());
        }
    }

    #[test]
    fn splitting_index_identity(seed in any::<u64>(), blocks in 1usize..=3, ql in any::<bool>()) {
        let k = st();
        let phi = tame(&k, seed, blocks, ql);
        let r = splitting_index(&phi).unwrap();
        prop_assert_eq!(r.bound, (phi.dim() - 1) / 2);
        if let (Some(s), Some(ind)) = (r.s, r.ind) {
            prop_assert!(ind.is_power_of_two());
            prop_assert_eq!(s + ind.trailing_zeros() as usize, r.bound);
        }
        prop_assert!(r.s_interval.0 <= r.s_interval.1 && r.s_interval.1 <= r.bound);
    }
}

#[test]
fn hyperbolic_splitting_index() {
    let k = st();
    for n in 1..=4 {
        let h = QuadraticForm::hyperbolic(k.clone(), n);
        let r = splitting_index(&h).unwrap();
        assert_eq!(r.s, Some(n - 1));
        assert_eq!(r.ind, Some(1));
    }
}
