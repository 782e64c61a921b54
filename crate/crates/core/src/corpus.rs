//! Seeded random forms for tests and batch corpora.
//!
//! "Tame" forms have blocks [a, u/a] where a is a monomial times an
//! optional polynomial unit and the Arf element u has nonnegative valuation
//! at every level, so the residue recursion never meets a wild block.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fieldtower::{Elem, FResult, Tower};
use crate::forms::{normal_form, FormResult, GramInput, QuadraticForm};

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn base_unit(k: &Tower, rng: &mut CorpusRng) -> Elem {
    let size = k.base().order();
    k.from_base(rng.gen_range(1..size))
}

/// c * t1^i1 ... tn^in with exponents in [-range, range].
pub fn random_monomial(k: &Tower, rng: &mut CorpusRng, range: i64) -> FResult<Elem> {
    let mut x = base_unit(k, rng);
    for v in &k.descriptor().variables {
        let e = rng.gen_range(-range..=range);
        x = k.mul(&x, &k.pow(&k.var(v)?, e)?)?;
    }
    Ok(x)
}

/// A unit with nonnegative valuations everywhere: 1 + (sum of a few
/// positive monomials), or a nonzero constant.
pub fn random_polynomial_unit(k: &Tower, rng: &mut CorpusRng) -> FResult<Elem> {
    let mut x = base_unit(k, rng);
    let vars = &k.descriptor().variables;
    if vars.is_empty() {
        return Ok(x);
    }
    for _ in 0..rng.gen_range(0..=2) {
        let v = vars.choose(rng).expect("nonempty");
        let e = rng.gen_range(1..=2);
        x = k.add(&x, &k.pow(&k.var(v)?, e)?)?;
    }
    Ok(x)
}

/// Arf element with nonnegative valuation at every level.
pub fn random_tame_arf(k: &Tower, rng: &mut CorpusRng) -> FResult<Elem> {
    let vars = &k.descriptor().variables;
    Ok(match rng.gen_range(0..6) {
        0 => k.zero(),
        1 | 2 => k.one(),
        3 => base_unit(k, rng),
        _ if vars.is_empty() => k.one(),
        _ => {
            let mut x = k.from_bit(rng.gen_bool(0.5));
            let v = vars.choose(rng).expect("nonempty");
            x = k.add(&x, &k.pow(&k.var(v)?, rng.gen_range(1..=2))?)?;
            x
        }
    })
}

pub fn random_tame_block(k: &Tower, rng: &mut CorpusRng) -> FResult<(Elem, Elem)> {
    let mut a = random_monomial(k, rng, 2)?;
    if rng.gen_bool(0.3) {
        a = k.mul(&a, &random_polynomial_unit(k, rng)?)?;
    }
    let u = random_tame_arf(k, rng)?;
    let b = k.div(&u, &a)?;
    Ok((a, b))
}

/// A nondegenerate tame form with the given number of blocks and at most
/// one quasilinear entry.
pub fn random_tame_form(
    k: &Arc<Tower>,
    rng: &mut CorpusRng,
    blocks: usize,
    quasilinear: bool,
) -> FormResult<QuadraticForm> {
    let mut bs = Vec::with_capacity(blocks);
    for _ in 0..blocks {
        bs.push(random_tame_block(k, rng)?);
    }
    let ql = if quasilinear {
        vec![random_monomial(k, rng, 2)?]
    } else {
        vec![]
    };
    QuadraticForm::new(k.clone(), bs, ql)
}

/// Forms with 1..=max_blocks blocks, a quasilinear entry with probability
/// `odd`.
pub fn tame_corpus(
    k: &Arc<Tower>,
    seed: u64,
    count: usize,
    max_blocks: usize,
    odd: f64,
) -> FormResult<Vec<QuadraticForm>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let nb = r.gen_range(1..=max_blocks);
            let q = r.gen_bool(odd);
            random_tame_form(k, &mut r, nb, q)
        })
        .collect()
}

/// Random invertible change of basis with small polynomial entries,
/// followed by normalization. The result is isometric to φ.
pub fn random_isometric(phi: &QuadraticForm, rng: &mut CorpusRng) -> FormResult<QuadraticForm> {
    let k = phi.field();
    let n = phi.dim();
    let g = phi.gram();
    loop {
        // Unipotent upper-triangular times a permutation keeps invertibility.
        let mut m = vec![vec![k.zero(); n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = k.one();
            for entry in row.iter_mut().skip(i + 1) {
                if rng.gen_bool(0.5) {
                    *entry = random_polynomial_unit(k, rng)?;
                }
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(rng);
        let rows: Vec<Vec<Elem>> = perm.iter().map(|&p| m[p].clone()).collect();
        // New Gram matrix: entry (i,j) for i<j is the polar value of rows
        // i and j, diagonal entries are the values.
        let mut gm = vec![vec![k.zero(); n]; n];
        for i in 0..n {
            gm[i][i] = g.eval(&rows[i])?;
            for j in i + 1..n {
                gm[i][j] = g.polar(&rows[i], &rows[j])?;
            }
        }
        let input = GramInput::new(k.clone(), gm)?;
        if let Ok(nf) = normal_form(&input) {
            return Ok(nf.form);
        }
    }
}
