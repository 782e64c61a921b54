//! Structure constants of C(φ) on the monomial basis.
//!
//! Generators follow the coordinates of the form: block i contributes
//! e_{2i}, e_{2i+1}, quasilinear entries come last. A basis monomial is a
//! bitmask, read as the increasing product of its generators.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fieldtower::{Elem, FResult, Tower};
use crate::forms::QuadraticForm;
use crate::linalg;

use super::{CliffordError, CliffordResult};

pub const DIMENSION_CAP: usize = 8;
pub const DEFAULT_SEED: u64 = 0x00c1_1ff0;
/// Random basis triples checked when the exhaustive check is too large.
const RANDOM_TRIPLES: usize = 96;

type Sparse = Vec<(u32, Elem)>;

#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    field: Arc<Tower>,
    form: QuadraticForm,
    generators: usize,
    even_only: bool,
    basis: Vec<u32>,
    position: Vec<Option<usize>>,
    /// `table[a][b]` is the product of monomials a and b.
    table: Vec<Vec<Sparse>>,
}

impl CliffordAlgebra {
    pub fn field(&self) -> &Arc<Tower> {
        &self.field
    }

    pub fn form(&self) -> &QuadraticForm {
        &self.form
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn is_even(&self) -> bool {
        self.even_only
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[u32] {
        &self.basis
    }

    /// Grading bit of a basis monomial.
    pub fn grade(mask: u32) -> u32 {
        mask.count_ones() % 2
    }

    pub fn basis_product(&self, a: u32, b: u32) -> &[(u32, Elem)] {
        &self.table[a as usize][b as usize]
    }

    /// Coordinate vector of a basis monomial.
    pub fn monomial(&self, mask: u32) -> Vec<Elem> {
        let k = &self.field;
        let mut v = vec![k.zero(); self.dim()];
        if let Some(p) = self.position[mask as usize] {
            v[p] = k.one();
        }
        v
    }

    pub fn one(&self) -> Vec<Elem> {
        self.monomial(0)
    }

    pub fn mul(&self, x: &[Elem], y: &[Elem]) -> FResult<Vec<Elem>> {
        let k = &self.field;
        let mut out = vec![k.zero(); self.dim()];
        for (i, xa) in x.iter().enumerate() {
            if k.is_zero(xa) {
                continue;
            }
            for (j, yb) in y.iter().enumerate() {
                if k.is_zero(yb) {
                    continue;
                }
                let c = k.mul(xa, yb)?;
                for (m, e) in self.basis_product(self.basis[i], self.basis[j]) {
                    let p = self.position[*m as usize].expect("product left the subalgebra");
                    out[p] = k.add(&out[p], &k.mul(&c, e)?)?;
                }
            }
        }
        Ok(out)
    }

    /// Basis of the center, found as the common centralizer of a generating
    /// set.
    pub fn center(&self) -> FResult<Vec<Vec<Elem>>> {
        let k = &self.field;
        let n = self.generators;
        let gens: Vec<u32> = if self.even_only {
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (1 << i) | (1 << j)))
                .collect()
        } else {
            (0..n).map(|i| 1 << i).collect()
        };
        let d = self.dim();
        let mut rows = Vec::new();
        for &g in &gens {
            // Row per output monomial: sum_A z_A (A g + g A) = 0.
            let mut block: BTreeMap<u32, Vec<Elem>> = BTreeMap::new();
            for (col, &a) in self.basis.iter().enumerate() {
                for part in [self.basis_product(a, g), self.basis_product(g, a)] {
                    for (m, e) in part {
                        let row = block.entry(*m).or_insert_with(|| vec![k.zero(); d]);
                        row[col] = k.add(&row[col], e)?;
                    }
                }
            }
            rows.extend(block.into_values());
        }
        linalg::null_space(k, &rows, d)
    }

    fn check_associativity(&self, seed: u64) -> CliffordResult<()> {
        let d = self.basis.len();
        let triple_ok = |a: u32, b: u32, c: u32| -> FResult<bool> {
            let (x, y, z) = (self.monomial(a), self.monomial(b), self.monomial(c));
            Ok(self.mul(&self.mul(&x, &y)?, &z)? == self.mul(&x, &self.mul(&y, &z)?)?)
        };
        if self.generators <= 4 {
            for &a in &self.basis {
                for &b in &self.basis {
                    for &c in &self.basis {
                        if !triple_ok(a, b, c)? {
                            return Err(CliffordError::NotAssociative);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..RANDOM_TRIPLES {
                let a = self.basis[rng.gen_range(0..d)];
                let b = self.basis[rng.gen_range(0..d)];
                let c = self.basis[rng.gen_range(0..d)];
                if !triple_ok(a, b, c)? {
                    return Err(CliffordError::NotAssociative);
                }
            }
        }
        Ok(())
    }
}

/// Values q(e_i) and polar values b(e_i, e_j) of the coordinate basis.
fn basis_data(phi: &QuadraticForm) -> (Vec<Elem>, Vec<Vec<Elem>>) {
    let k = phi.field();
    let n = phi.dim();
    let mut q = Vec::with_capacity(n);
    let mut b = vec![vec![k.zero(); n]; n];
    for (i, (x, y)) in phi.blocks().iter().enumerate() {
        q.push(x.clone());
        q.push(y.clone());
        b[2 * i][2 * i + 1] = k.one();
        b[2 * i + 1][2 * i] = k.one();
    }
    q.extend(phi.quasilinear().iter().cloned());
    (q, b)
}

fn add_into(k: &Tower, acc: &mut BTreeMap<u32, Elem>, m: u32, c: &Elem) -> FResult<()> {
    let e = acc.entry(m).or_insert_with(|| k.zero());
    *e = k.add(e, c)?;
    Ok(())
}

fn collect(acc: BTreeMap<u32, Elem>, k: &Tower) -> Sparse {
    acc.into_iter().filter(|(_, c)| !k.is_zero(c)).collect()
}

pub fn build_clifford(phi: &QuadraticForm, even_only: bool) -> CliffordResult<CliffordAlgebra> {
    build_clifford_seeded(phi, even_only, DEFAULT_SEED)
}

/// As `build_clifford`, with the seed of the randomized associativity check.
pub fn build_clifford_seeded(
    phi: &QuadraticForm,
    even_only: bool,
    seed: u64,
) -> CliffordResult<CliffordAlgebra> {
    let n = phi.dim();
    if n > DIMENSION_CAP {
        return Err(CliffordError::DimensionCap {
            dim: n,
            cap: DIMENSION_CAP,
        });
    }
    let k = phi.field();
    let (q, b) = basis_data(phi);
    let size = 1usize << n;

    // right[a][j] = a * e_j
    let mut right: Vec<Vec<Sparse>> = Vec::with_capacity(size);
    for a in 0..size as u32 {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let prod = if a == 0 {
                vec![(1 << j, k.one())]
            } else {
                let last = 31 - a.leading_zeros();
                let rest = a & !(1 << last);
                let j32 = j as u32;
                if last < j32 {
                    vec![(a | (1 << j), k.one())]
                } else if last == j32 {
                    if k.is_zero(&q[j]) {
                        Vec::new()
                    } else {
                        vec![(rest, q[j].clone())]
                    }
                } else {
                    // a e_j = (rest e_j) e_last + b(e_last, e_j) rest
                    let mut acc = BTreeMap::new();
                    for (m, c) in &right[rest as usize][j] {
                        add_into(k, &mut acc, m | (1 << last), c)?;
                    }
                    add_into(k, &mut acc, rest, &b[last as usize][j])?;
                    collect(acc, k)
                }
            };
            row.push(prod);
        }
        right.push(row);
    }

    let mut table: Vec<Vec<Sparse>> = vec![Vec::with_capacity(size); size];
    for (a, row) in table.iter_mut().enumerate() {
        row.push(vec![(a as u32, k.one())]);
        for bm in 1..size as u32 {
            let last = 31 - bm.leading_zeros();
            let rest = bm & !(1 << last);
            let mut acc = BTreeMap::new();
            for (m, c) in &row[rest as usize] {
                for (m2, c2) in &right[*m as usize][last as usize] {
                    add_into(k, &mut acc, *m2, &k.mul(c, c2)?)?;
                }
            }
            row.push(collect(acc, k));
        }
    }

    let basis: Vec<u32> = (0..size as u32)
        .filter(|m| !even_only || CliffordAlgebra::grade(*m) == 0)
        .collect();
    let mut position = vec![None; size];
    for (i, &m) in basis.iter().enumerate() {
        position[m as usize] = Some(i);
    }
    let alg = CliffordAlgebra {
        field: k.clone(),
        form: phi.clone(),
        generators: n,
        even_only,
        basis,
        position,
        table,
    };
    let expected = if even_only && n > 0 { size / 2 } else { size };
    if alg.dim() != expected {
        return Err(CliffordError::BadDimension);
    }
    for &x in &alg.basis {
        for &y in &alg.basis {
            if alg
                .basis_product(x, y)
                .iter()
                .any(|(m, _)| alg.position[*m as usize].is_none())
            {
                return Err(CliffordError::NotClosed);
            }
        }
    }
    alg.check_associativity(seed)?;
    Ok(alg)
}
