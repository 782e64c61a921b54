//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines reach the console; the
//! process exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use chowq::chow::{chow2_torsion, chow3_torsion, split_chow_structure, Torsion};
use chowq::clifford::{albert_index, splitting_index};
use chowq::corpus;
use chowq::dsl::parse_form;
use chowq::fieldtower::Tower;
use chowq::forms::{isometric, QuadraticForm};
use chowq::witt::{
    brute_force_search, decide_isotropy, springer_residues, witt_decompose, witt_index,
    IsotropyVerdict, SearchConfig, WittError,
};
use chowq_cli::{parse_job, render_json, run_job};

/// Wall-clock limit for the residue law run.
const RESIDUE_LAW_LIMIT: Duration = Duration::from_secs(60);
const RESIDUE_LAW_MIN_FORMS: usize = 200;
const ORACLE_CORPUS: usize = 500;
const ORACLE_DEGREE_BOUND: u32 = 6;
/// Nodes per brute-force search; exhausting it counts as "no witness".
const ORACLE_BUDGET: u64 = 20_000;
const WITT_SUITE_MIN_FORMS: usize = 500;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn tower(vars: &[&str]) -> Arc<Tower> {
    Tower::laurent(1, vars).expect("tower")
}

fn form(k: &Arc<Tower>, text: &str) -> QuadraticForm {
    parse_form(k, text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn is_anisotropic(phi: &QuadraticForm) -> Result<Option<bool>, String> {
    match decide_isotropy(phi) {
        Ok(v) => Ok(v.is_isotropic().map(|b| !b)),
        Err(e) => Err(format!("{phi}: {e}")),
    }
}

/// Mixed corpus used by the CH and splitting-index criteria: tame forms
/// over two- and three-variable towers, with and without hyperbolic planes,
/// and large Pfister subforms over three variables.
fn mixed_corpus() -> Vec<QuadraticForm> {
    let mut out = Vec::new();
    for (vars, seed) in [(&["s", "t"][..], 101), (&["r", "s", "t"][..], 202)] {
        let k = tower(vars);
        let mut r = corpus::rng(seed);
        for _ in 0..150 {
            let blocks = r.gen_range(1..=6);
            let ql = r.gen_bool(0.4);
            let mut phi = corpus::random_tame_form(&k, &mut r, blocks, ql).expect("form");
            if r.gen_bool(0.25) {
                phi = QuadraticForm::hyperbolic(k.clone(), 1).orthogonal_sum(&phi).expect("sum");
            }
            if phi.dim() >= 3 {
                out.push(phi);
            }
        }
    }
    out.extend(pfister_subforms(&tower(&["r", "s", "t"]), 3, 7, 303, 80));
    out
}

/// Random sums m*[1,1] over distinct square-free monomials m, sometimes
/// with a quasilinear monomial entry. Without the quasilinear entry these
/// are subforms of the anisotropic Pfister form <<x1,...,xn;1]].
fn pfister_subforms(k: &Arc<Tower>, min_blocks: usize, max_blocks: usize, seed: u64, count: usize) -> Vec<QuadraticForm> {
    let vars = &k.descriptor().variables;
    let monomials: Vec<String> = (0u32..1 << vars.len())
        .map(|m| {
            let factors: Vec<&str> = (0..vars.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| vars[i].as_str())
                .collect();
            if factors.is_empty() {
                "1".into()
            } else {
                factors.join("*")
            }
        })
        .collect();
    let mut r = corpus::rng(seed);
    (0..count)
        .map(|_| {
            let mut picks = monomials.clone();
            picks.shuffle(&mut r);
            let blocks = r.gen_range(min_blocks..=max_blocks);
            let mut text: Vec<String> = picks[..blocks].iter().map(|m| format!("({m})*[1,1]")).collect();
            if r.gen_bool(0.5) {
                text.push(format!("<{}>", picks[blocks]));
            }
            form(k, &text.join(" + "))
        })
        .collect()
}

fn residue_law() -> Outcome {
    let start = Instant::now();
    let k = tower(&["s", "t"]);
    let mut r = corpus::rng(1);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < RESIDUE_LAW_MIN_FORMS {
        attempts += 1;
        ensure(attempts < 20 * RESIDUE_LAW_MIN_FORMS, || format!("only {checked} anisotropic forms found"))?;
        let blocks = r.gen_range(1..=4);
        let phi = corpus::random_tame_form(&k, &mut r, blocks, false).map_err(|e| e.to_string())?;
        if is_anisotropic(&phi)? != Some(true) {
            continue;
        }
        let res = springer_residues(&phi).map_err(|e| format!("{phi}: {e}"))?;
        ensure(res.hyperbolic == 0, || format!("{phi}: anisotropic form with a hyperbolic block"))?;
        ensure(phi.dim() == res.residue0.dim() + res.residue1.dim(), || {
            format!("{phi}: {} != {} + {}", phi.dim(), res.residue0.dim(), res.residue1.dim())
        })?;
        checked += 1;
    }
    let took = start.elapsed();
    ensure(took < RESIDUE_LAW_LIMIT, || format!("took {took:?}"))?;
    Ok(format!("{checked} anisotropic forms, {took:.2?}"))
}

fn oracle_agreement() -> Outcome {
    let cfg = SearchConfig {
        degree_bound: ORACLE_DEGREE_BOUND,
        budget: ORACLE_BUDGET,
    };
    let mut forms = Vec::new();
    for (vars, seed) in [(&["t"][..], 5), (&["s", "t"][..], 6)] {
        let k = tower(vars);
        forms.extend(corpus::tame_corpus(&k, seed, ORACLE_CORPUS / 2, 2, 0.4).map_err(|e| e.to_string())?);
    }
    let (mut aniso, mut iso, mut exhausted) = (0, 0, 0);
    for phi in &forms {
        let v = decide_isotropy(phi).map_err(|e| format!("{phi}: {e}"))?;
        match &v {
            IsotropyVerdict::Isotropic { witness, .. } => {
                iso += 1;
                if let Some(w) = witness {
                    let val = phi.eval(w).map_err(|e| e.to_string())?;
                    ensure(!phi.is_zero_vector(w) && phi.field().is_zero(&val), || {
                        format!("{phi}: witness does not vanish")
                    })?;
                }
            }
            IsotropyVerdict::Anisotropic { certificate } => {
                aniso += 1;
                ensure(certificate.verify(), || format!("{phi}: certificate fails replay"))?;
                match brute_force_search(phi, cfg) {
                    Ok(None) => {}
                    Ok(Some(_)) => return Err(format!("{phi}: brute force finds a witness")),
                    Err(WittError::BudgetExceeded { .. }) => exhausted += 1,
                    Err(e) => return Err(format!("{phi}: {e}")),
                }
            }
            IsotropyVerdict::Unknown { .. } => {}
        }
    }
    Ok(format!(
        "{} forms: {aniso} anisotropic, {iso} isotropic, {exhausted} searches hit the budget",
        forms.len()
    ))
}

fn witt_identities() -> Outcome {
    let mut r = corpus::rng(3);
    let mut checked = 0;
    let mut undecided = 0;
    let fields = [tower(&["t"]), tower(&["s", "t"])];
    while checked < WITT_SUITE_MIN_FORMS {
        let k = &fields[checked % 2];
        let (nq, npsi) = (r.gen_range(1..=3), r.gen_range(1..=2));
        let q = corpus::random_tame_form(k, &mut r, nq, false).map_err(|e| e.to_string())?;
        let psi = corpus::random_tame_form(k, &mut r, npsi, false).map_err(|e| e.to_string())?;
        let qq = q.orthogonal_sum(&q).map_err(|e| e.to_string())?;
        let sum = q.orthogonal_sum(&psi).and_then(|x| x.orthogonal_sum(&psi)).map_err(|e| e.to_string())?;
        let (dq, dsum) = match (witt_decompose(&q), witt_decompose(&sum)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(WittError::Undecided(_)), _) | (_, Err(WittError::Undecided(_))) => {
                undecided += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.to_string()),
        };
        let i = witt_index(&qq).map_err(|e| format!("{qq}: {e}"))?;
        ensure(2 * i == qq.dim(), || format!("{q}: q + q has Witt index {i}"))?;
        ensure(dsum.witt_index == dq.witt_index + psi.dim(), || format!("{sum}: Witt index {}", dsum.witt_index))?;
        let same = isometric(&dsum.kernel, &dq.kernel).map_err(|e| e.to_string())?;
        ensure(same, || format!("{sum}: kernel differs from the kernel of {q}"))?;
        checked += 1;
    }
    Ok(format!("{checked} forms, {undecided} skipped as undecided"))
}

fn splitting_identity(corpus: &[QuadraticForm]) -> Outcome {
    let mut resolved = 0;
    for phi in corpus {
        let si = splitting_index(phi).map_err(|e| format!("{phi}: {e}"))?;
        ensure(si.bound == (phi.dim() - 1) / 2, || format!("{phi}: bound"))?;
        if let (Some(s), Some(ind)) = (si.s, si.ind) {
            ensure(ind.is_power_of_two() && s + ind.trailing_zeros() as usize == si.bound, || {
                format!("{phi}: s = {s}, ind = {ind}")
            })?;
            resolved += 1;
        }
    }
    let mut hyperbolic = 0;
    for k in [tower(&["s", "t"]), tower(&["r", "s", "t"])] {
        let mut r = corpus::rng(4);
        for n in 1..=5 {
            let h = QuadraticForm::hyperbolic(k.clone(), n);
            let q = corpus::random_tame_form(&k, &mut r, n, false).map_err(|e| e.to_string())?;
            for phi in [h, q.orthogonal_sum(&q).map_err(|e| e.to_string())?] {
                let iw = witt_index(&phi).map_err(|e| e.to_string())?;
                let si = splitting_index(&phi).map_err(|e| e.to_string())?;
                ensure(si.s == Some(iw - 1), || format!("{phi}: s = {:?}, i_W = {iw}", si.s))?;
                hyperbolic += 1;
            }
        }
    }
    Ok(format!("{resolved}/{} resolved, {hyperbolic} hyperbolic forms", corpus.len()))
}

fn albert_table() -> Outcome {
    let k2 = tower(&["s", "t"]);
    let k3 = tower(&["r", "s", "t"]);
    let rows: [(usize, u64, Vec<QuadraticForm>); 3] = [
        (
            0,
            4,
            vec![
                form(&k3, "[1,r^-1] + s*[1,1] + t*[1,r^-1+1]"),
                form(&k3, "t*([1,r^-1] + s*[1,1] + t*[1,r^-1+1])"),
            ],
        ),
        (1, 2, vec![form(&k2, "[1,1] + s*[1,1] + H"), form(&k3, "r*[1,1] + t*[1,1] + H")]),
        (3, 1, vec![form(&k2, "H + H + H"), form(&k2, "[1,1] + [1,1] + H")]),
    ];
    let mut n = 0;
    for (iw, ind, forms) in &rows {
        for phi in forms {
            let d = witt_decompose(phi).map_err(|e| format!("{phi}: {e}"))?;
            ensure(d.certificate.verify(), || format!("{phi}: certificate fails replay"))?;
            ensure(d.witt_index == *iw, || format!("{phi}: i_W = {}", d.witt_index))?;
            let got = albert_index(phi).map_err(|e| format!("{phi}: {e}"))?;
            ensure(got == *ind, || format!("{phi}: ind = {got}, want {ind}"))?;
            n += 1;
        }
    }
    Ok(format!("0/1/3 -> 4/2/1 on {n} forms"))
}

fn chow2_results(corpus: &[QuadraticForm]) -> Outcome {
    let k = tower(&["s", "t"]);
    let pf = chow2_torsion(&form(&k, "pf(s,t;1)")).map_err(|e| e.to_string())?;
    ensure(pf.torsion == Torsion::z2() && pf.rules == ["Thm-CH2-PN"], || format!("pf(s,t;1): {pf:?}"))?;
    let nb = form(&k, "[1,1] + s*[1,1] + <t>");
    let r = chow2_torsion(&nb).map_err(|e| e.to_string())?;
    let s = splitting_index(&nb).map_err(|e| e.to_string())?.s;
    ensure(r.torsion == Torsion::z2() && s == Some(1), || format!("neighbor: {r:?}, s = {s:?}"))?;
    let (mut isotropic, mut big) = (0, 0);
    for phi in corpus {
        let iso = is_anisotropic(phi)? == Some(false);
        if !iso && phi.dim() < 9 {
            continue;
        }
        let r = chow2_torsion(phi).map_err(|e| format!("{phi}: {e}"))?;
        ensure(r.torsion == Torsion::zero(), || format!("{phi}: {:?}", r.torsion))?;
        if iso {
            isotropic += 1;
        } else {
            big += 1;
        }
    }
    Ok(format!("pf(s,t;1) and its neighbor give Z/2; {isotropic} isotropic and {big} further dim >= 9 forms give 0"))
}

fn chow3_bound(corpus: &[QuadraticForm]) -> Outcome {
    let (mut exact, mut bounded) = (0, 0);
    for phi in corpus {
        let r = chow3_torsion(phi).map_err(|e| format!("{phi}: {e}"))?;
        ensure(r.torsion.order <= 2, || format!("{phi}: order {}", r.torsion.order))?;
        if r.torsion.is_exact() {
            exact += 1;
        } else {
            bounded += 1;
        }
    }
    Ok(format!("{} forms, {exact} exact, {bounded} bounded by 2", corpus.len()))
}

fn chow3_high_dimension() -> Outcome {
    let k = tower(&["q", "r", "s", "t"]);
    let mut checked = 0;
    for phi in pfister_subforms(&k, 6, 8, 8, 40) {
        if phi.dim() < 13 || is_anisotropic(&phi)? != Some(true) {
            continue;
        }
        let rep = chow3_torsion(&phi).map_err(|e| e.to_string())?;
        ensure(rep.torsion == Torsion::zero(), || format!("{phi}: {:?}", rep.torsion))?;
        checked += 1;
    }
    ensure(checked > 0, || "no anisotropic forms of dimension >= 13".into())?;
    let k3 = tower(&["r", "s", "t"]);
    let phi = form(&k3, "[1,1] + r*[1,1] + s*[1,1] + (r*s)*[1,1] + t*[1,1] + <r*t>");
    ensure(is_anisotropic(&phi)? == Some(true), || "dim-11 instance not certified anisotropic".into())?;
    let ind = splitting_index(&phi).map_err(|e| e.to_string())?.ind;
    ensure(ind.is_some_and(|i| i >= 2), || format!("dim-11 instance has ind {ind:?}"))?;
    let rep = chow3_torsion(&phi).map_err(|e| e.to_string())?;
    ensure(
        rep.torsion == Torsion::zero() && rep.rules == ["CH3-Dim11-IndexAtLeast2"],
        || format!("dim-11 instance: {rep:?}"),
    )?;
    Ok(format!("{checked} anisotropic forms of dim >= 13 give 0; dim-11 instance with ind {} gives 0", ind.unwrap()))
}

fn split_table() -> Outcome {
    let mut rows = 0;
    for d in 1..=12u32 {
        let mut rank = 0;
        for p in 0..=d {
            let row = split_chow_structure(d, p).map_err(|e| e.to_string())?;
            rank += row.generators.len();
            let want_gens: Vec<String> = if 2 * p < d {
                vec![format!("h^{p}")]
            } else if 2 * p > d {
                vec![format!("l_{}", d - p)]
            } else {
                vec![format!("h^{p}"), format!("l_{p}")]
            };
            ensure(row.generators == want_gens, || format!("({d},{p}): {:?}", row.generators))?;
            if 2 * p > d {
                let rel = format!("h^{p} = 2*l_{}", d - p);
                ensure(row.relation.as_deref() == Some(rel.as_str()), || format!("({d},{p}): {:?}", row.relation))?;
            }
            if 2 * p == d {
                let alt = vec![format!("l_{p}"), format!("l'_{p}")];
                ensure(row.alt_generators.as_ref() == Some(&alt), || format!("({d},{p}): {:?}", row.alt_generators))?;
            }
            rows += 1;
        }
        // Total rank of CH*: d + 1, plus one in even dimension.
        let want = d as usize + 1 + usize::from(d % 2 == 0);
        ensure(rank == want, || format!("d = {d}: total rank {rank}"))?;
        ensure(split_chow_structure(d, d + 1).is_err(), || format!("d = {d}: p = d + 1 accepted"))?;
    }
    Ok(format!("{rows} rows for d <= 12"))
}

fn determinism() -> Outcome {
    let text = include_str!("data/corpus.job");
    let job = parse_job(text).map_err(|e| e.to_string())?;
    let a = render_json(&run_job(&job, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let b = render_json(&run_job(&job, 1).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let c = render_json(&run_job(&job, 8).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    ensure(a == b, || "two runs differ".into())?;
    ensure(a == c, || "1 and 8 workers differ".into())?;
    let lines = a.lines().count();
    ensure(lines == job.forms.len(), || format!("{lines} reports for {} forms", job.forms.len()))?;
    Ok(format!("{lines} reports, {} bytes, identical", a.len()))
}

fn main() -> ExitCode {
    let corpus = mixed_corpus();
    let criteria: Vec<(&str, Check)> = vec![
        ("residue dimension law", Box::new(residue_law)),
        ("brute-force oracle agreement", Box::new(oracle_agreement)),
        ("q + q hyperbolic and Witt cancellation", Box::new(witt_identities)),
        ("splitting index identity", Box::new(|| splitting_identity(&corpus))),
        ("Albert index table", Box::new(albert_table)),
        ("CH^2 torsion values", Box::new(|| chow2_results(&corpus))),
        ("CH^3 torsion order at most 2", Box::new(|| chow3_bound(&corpus))),
        ("CH^3 vanishing in high dimension", Box::new(chow3_high_dimension)),
        ("split quadric Chow table", Box::new(split_table)),
        ("deterministic JSON output", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
            .unwrap_or_else(|p| {
                let msg = p
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                Err(format!("panic: {msg}"))
            });
        let took = start.elapsed();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
