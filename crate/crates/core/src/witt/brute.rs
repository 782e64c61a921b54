//! Exhaustive search for isotropic vectors with monomial entries.
//!
//! Each coordinate ranges over 0 and c * t1^i1 ... tn^in with c in
//! F_{2^e}^* and i1 + ... + in <= bound. The form is scaled by a common
//! denominator so that every value is a polynomial in the variables, and the
//! coordinates are split in two halves at a block boundary: a vector is
//! isotropic iff both halves take the same value (characteristic 2). The
//! search is run for increasing maximal entry degree and returns the
//! lexicographically first hit at the first degree that has one.

use std::collections::{BTreeMap, HashMap};

use crate::fieldtower::{gf::Gf, Elem, Tower};
use crate::forms::QuadraticForm;

use super::{check_witness, WittError, WittResult};

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub degree_bound: u32,
    /// Maximum number of half-vectors evaluated.
    pub budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            degree_bound: 6,
            budget: DEFAULT_BUDGET,
        }
    }
}

type Mono = [i32; 4];

/// Sparse polynomial over F_{2^e} in at most four variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
struct Sparse(BTreeMap<Mono, u64>);

impl Sparse {
    fn constant(c: u64) -> Sparse {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert([0; 4], c);
        }
        Sparse(m)
    }

    fn add_assign(&mut self, other: &Sparse) {
        for (mono, c) in &other.0 {
            let e = self.0.entry(*mono).or_insert(0);
            *e ^= c;
            if *e == 0 {
                self.0.remove(mono);
            }
        }
    }

    fn mul(&self, other: &Sparse, gf: &Gf) -> Sparse {
        let mut out = Sparse::default();
        for (m1, c1) in &self.0 {
            let mut term = BTreeMap::new();
            for (m2, c2) in &other.0 {
                term.insert(add_mono(m1, m2), gf.mul(*c1, *c2));
            }
            out.add_assign(&Sparse(term));
        }
        out
    }

    fn mul_term(&self, c: u64, mono: &Mono, gf: &Gf) -> Sparse {
        Sparse(
            self.0
                .iter()
                .map(|(m, a)| (add_mono(m, mono), gf.mul(*a, c)))
                .collect(),
        )
    }

    fn shift(&self, level: usize, k: i32) -> Sparse {
        Sparse(
            self.0
                .iter()
                .map(|(m, a)| {
                    let mut m = *m;
                    m[level] += k;
                    (m, *a)
                })
                .collect(),
        )
    }
}

fn add_mono(a: &Mono, b: &Mono) -> Mono {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

/// (numerator, denominator) with polynomial entries.
fn to_sparse(k: &Tower, x: &Elem) -> (Sparse, Sparse) {
    match k.lower() {
        None => (Sparse::constant(k.base_value(x)), Sparse::constant(1)),
        Some(l) => {
            let f = k.frac(x);
            let level = k.level() - 1;
            let parts: Vec<(Sparse, Sparse)> = f
                .num()
                .iter()
                .chain(f.den())
                .map(|c| to_sparse(l, c))
                .collect();
            let mut dens: Vec<Sparse> = Vec::new();
            for (_, d) in &parts {
                if !dens.contains(d) {
                    dens.push(d.clone());
                }
            }
            let gf = k.base();
            let cofactor = |d: &Sparse| {
                dens.iter()
                    .filter(|e| *e != d)
                    .fold(Sparse::constant(1), |acc, e| acc.mul(e, gf))
            };
            let assemble = |range: std::ops::Range<usize>| {
                let mut acc = Sparse::default();
                for (deg, i) in range.clone().enumerate() {
                    let (n, d) = &parts[i];
                    let term = n.mul(&cofactor(d), gf).shift(level, deg as i32);
                    acc.add_assign(&term);
                }
                acc
            };
            let nn = f.num().len();
            (assemble(0..nn), assemble(nn..parts.len()))
        }
    }
}

fn product(items: &[Sparse], gf: &Gf) -> Sparse {
    items
        .iter()
        .fold(Sparse::constant(1), |acc, e| acc.mul(e, gf))
}

/// One orthogonal summand: a block (two coordinates) or a quasilinear
/// coordinate, with polynomial coefficients.
enum Unit {
    Block { a: Sparse, x: Sparse, b: Sparse },
    Quasilinear { c: Sparse },
}

#[derive(Clone)]
struct Candidate {
    coeff: u64,
    mono: Mono,
    degree: u32,
}

fn candidates(k: &Tower, bound: u32) -> Vec<Option<Candidate>> {
    let n = k.level();
    let gf = k.base();
    let mut monos: Vec<(u32, Mono)> = Vec::new();
    let mut cur = [0i32; 4];
    fn rec(i: usize, n: usize, left: u32, cur: &mut Mono, out: &mut Vec<(u32, Mono)>) {
        if i == n {
            let d: i32 = cur.iter().sum();
            out.push((d as u32, *cur));
            return;
        }
        for e in 0..=left {
            cur[i] = e as i32;
            rec(i + 1, n, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, n, bound, &mut cur, &mut monos);
    monos.sort();
    let mut out = vec![None];
    for (degree, mono) in monos {
        for coeff in 1..gf.order() {
            out.push(Some(Candidate {
                coeff,
                mono,
                degree,
            }));
        }
    }
    out
}

/// Searches for an isotropic vector; `Ok(None)` proves nothing.
pub fn brute_force_search(
    phi: &QuadraticForm,
    config: SearchConfig,
) -> WittResult<Option<Vec<Elem>>> {
    let k = phi.field().clone();
    if phi.dim() == 0 {
        return Ok(None);
    }
    let gf = k.base().clone();
    // Clear denominators.
    let one = k.one();
    let mut coeffs: Vec<(Sparse, Sparse)> = Vec::new();
    for (a, b) in phi.blocks() {
        coeffs.push(to_sparse(&k, a));
        coeffs.push(to_sparse(&k, &one));
        coeffs.push(to_sparse(&k, b));
    }
    for c in phi.quasilinear() {
        coeffs.push(to_sparse(&k, c));
    }
    let mut dens: Vec<Sparse> = Vec::new();
    for (_, d) in &coeffs {
        if !dens.contains(d) {
            dens.push(d.clone());
        }
    }
    let scaled: Vec<Sparse> = coeffs
        .iter()
        .map(|(n, d)| {
            let others: Vec<Sparse> = dens.iter().filter(|e| *e != d).cloned().collect();
            n.mul(&product(&others, &gf), &gf)
        })
        .collect();
    let mut units = Vec::new();
    let mut it = scaled.into_iter();
    for _ in phi.blocks() {
        let a = it.next().expect("coefficient");
        let x = it.next().expect("coefficient");
        let b = it.next().expect("coefficient");
        units.push(Unit::Block { a, x, b });
    }
    for c in it {
        units.push(Unit::Quasilinear { c });
    }

    let cands = candidates(&k, config.degree_bound);
    let levels: Vec<u32> = if k.level() == 0 {
        vec![0]
    } else {
        (0..=config.degree_bound).collect()
    };
    let mut spent = 0u64;
    for &level in &levels {
        let count = cands
            .iter()
            .take_while(|c| c.as_ref().is_none_or(|c| c.degree <= level))
            .count();
        if let Some(choice) = search_level(&units, &cands[..count], &gf, config.budget, &mut spent)? {
            let v = realize(&k, &choice, &cands)?;
            check_witness(phi, &v)?;
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Coordinate choices (candidate indices) of the first isotropic vector.
fn search_level(
    units: &[Unit],
    cands: &[Option<Candidate>],
    gf: &Gf,
    budget: u64,
    spent: &mut u64,
) -> WittResult<Option<Vec<usize>>> {
    let nc = cands.len();
    let combos = |u: &Unit| -> u64 {
        match u {
            Unit::Block { .. } => (nc * nc) as u64,
            Unit::Quasilinear { .. } => nc as u64,
        }
    };
    // Balance the two halves by the number of combinations.
    let total: f64 = units.iter().map(|u| (combos(u) as f64).ln()).sum();
    let mut split = 0;
    let mut acc = 0.0;
    for (i, u) in units.iter().enumerate() {
        if acc >= total / 2.0 {
            break;
        }
        acc += (combos(u) as f64).ln();
        split = i + 1;
    }
    if units.len() > 1 && split == units.len() {
        split -= 1;
    }
    let (left, right) = units.split_at(split);
    let tables_l: Vec<Vec<Sparse>> = left.iter().map(|u| unit_values(u, cands, gf)).collect();
    let tables_r: Vec<Vec<Sparse>> = right.iter().map(|u| unit_values(u, cands, gf)).collect();

    // Right half: value -> (first choice, first nonzero choice).
    let mut table: HashMap<Sparse, (Vec<usize>, Option<Vec<usize>>)> = HashMap::new();
    let mut path = Vec::new();
    let mut overflow = false;
    enumerate(&tables_r, 0, Sparse::default(), &mut path, &mut |val, choice| {
        *spent += 1;
        if *spent > budget {
            overflow = true;
            return false;
        }
        let nonzero = choice.iter().any(|&c| c != 0);
        let entry = table
            .entry(val.clone())
            .or_insert_with(|| (choice.to_vec(), None));
        if nonzero && entry.1.is_none() {
            entry.1 = Some(choice.to_vec());
        }
        true
    });
    if overflow {
        return Err(WittError::BudgetExceeded { budget });
    }
    let mut found = None;
    let mut path = Vec::new();
    enumerate(&tables_l, 0, Sparse::default(), &mut path, &mut |val, choice| {
        *spent += 1;
        if *spent > budget {
            overflow = true;
            return false;
        }
        if let Some((first, first_nonzero)) = table.get(val) {
            let left_zero = choice.iter().all(|&c| c == 0);
            let right = if left_zero {
                first_nonzero.clone()
            } else {
                Some(first.clone())
            };
            if let Some(r) = right {
                let mut full = choice.to_vec();
                full.extend(r);
                found = Some(full);
                return false;
            }
        }
        true
    });
    if overflow {
        return Err(WittError::BudgetExceeded { budget });
    }
    // Unit combinations back to per-coordinate candidate indices.
    Ok(found.map(|combo| {
        let mut coords = Vec::new();
        for (u, c) in units.iter().zip(combo) {
            match u {
                Unit::Block { .. } => {
                    coords.push(c / nc);
                    coords.push(c % nc);
                }
                Unit::Quasilinear { .. } => coords.push(c),
            }
        }
        coords
    }))
}

/// Values of one unit for every combination of its coordinates in
/// lexicographic order; a block's combination (i, j) sits at i * nc + j.
fn unit_values(u: &Unit, cands: &[Option<Candidate>], gf: &Gf) -> Vec<Sparse> {
    let sq = |c: &Option<Candidate>| c.as_ref().map(|c| (gf.sqr(c.coeff), mono_scale(&c.mono, 2)));
    match u {
        Unit::Quasilinear { c } => cands
            .iter()
            .map(|z| match sq(z) {
                None => Sparse::default(),
                Some((cc, m)) => c.mul_term(cc, &m, gf),
            })
            .collect(),
        Unit::Block { a, x, b } => {
            let mut out = Vec::with_capacity(cands.len() * cands.len());
            for cx in cands {
                for cy in cands {
                    let mut v = Sparse::default();
                    if let Some((c, m)) = sq(cx) {
                        v.add_assign(&a.mul_term(c, &m, gf));
                    }
                    if let Some((c, m)) = sq(cy) {
                        v.add_assign(&b.mul_term(c, &m, gf));
                    }
                    if let (Some(p), Some(q)) = (cx, cy) {
                        let m = add_mono(&p.mono, &q.mono);
                        v.add_assign(&x.mul_term(gf.mul(p.coeff, q.coeff), &m, gf));
                    }
                    out.push(v);
                }
            }
            out
        }
    }
}

fn mono_scale(m: &Mono, k: i32) -> Mono {
    [m[0] * k, m[1] * k, m[2] * k, m[3] * k]
}

/// Depth-first walk over all combinations; the callback returns false to
/// stop.
fn enumerate(
    tables: &[Vec<Sparse>],
    depth: usize,
    acc: Sparse,
    path: &mut Vec<usize>,
    f: &mut dyn FnMut(&Sparse, &[usize]) -> bool,
) -> bool {
    if depth == tables.len() {
        return f(&acc, path);
    }
    for (i, val) in tables[depth].iter().enumerate() {
        let mut next = acc.clone();
        next.add_assign(val);
        path.push(i);
        let go_on = enumerate(tables, depth + 1, next, path, f);
        path.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn realize(k: &Tower, coords: &[usize], cands: &[Option<Candidate>]) -> WittResult<Vec<Elem>> {
    coords
        .iter()
        .map(|&i| match &cands[i] {
            None => Ok(k.zero()),
            Some(c) => {
                let mut x = k.from_base(c.coeff);
                for (lvl, &e) in c.mono.iter().enumerate().take(k.level()) {
                    let name = k.descriptor().variables[lvl].clone();
                    x = k.mul(&x, &k.pow(&k.var(&name)?, e as i64)?)?;
                }
                Ok(x)
            }
        })
        .collect()
}
