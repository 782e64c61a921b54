use std::sync::Arc;

use chowq::corpus;
use chowq::dsl::parse_form;
use chowq::fieldtower::{ExtensionResult, Tower};
use chowq::forms::{isometric, subform_test, QuadraticForm};
use chowq::witt::{
    brute_force_search, decide_isotropy, springer_residues, witt_decompose, witt_index,
    witt_index_over_ext, IsotropyVerdict, SearchConfig, WittError,
};

fn tower(vars: &[&str]) -> Arc<Tower> {
    Tower::laurent(1, vars).unwrap()
}

fn form(k: &Arc<Tower>, text: &str) -> QuadraticForm {
    parse_form(k, text).unwrap()
}

fn verdict(phi: &QuadraticForm) -> Option<bool> {
    decide_isotropy(phi).unwrap().is_isotropic()
}

#[test]
fn isotropy_examples() {
    let t1 = tower(&["t"]);
    assert_eq!(verdict(&form(&t1, "[1,1] + t*[1,1]")), Some(false));
    match decide_isotropy(&form(&t1, "[1,t]")).unwrap() {
        IsotropyVerdict::Isotropic { .. } => {}
        v => panic!("{v:?}"),
    }
    let st = tower(&["s", "t"]);
    assert_eq!(verdict(&form(&st, "<1,s,t,s*t>")), Some(false));
    assert_eq!(verdict(&form(&st, "<1,s,t,s*t,s+t>")), Some(true));
    // Wild binary forms are decided through p(K) membership.
    assert_eq!(verdict(&form(&st, "[1,s*t^-2]")), Some(false));
    assert_eq!(verdict(&form(&st, "[1,s^2*t^-2 + s*t^-1]")), Some(true));
}

#[test]
fn witnesses_are_exact() {
    let st = tower(&["s", "t"]);
    for text in [
        "H",
        "[1,1] + [1,1]",
        "[1,1] + s*[1,1] + <1>",
        "[s,t] + [1,s*t] + <s*t>",
        "[1,1] + s*[1,1] + t*[1,1] + (s*t)*[1,1] + <1>",
    ] {
        let phi = form(&st, text);
        if let Some(w) = decide_isotropy(&phi).unwrap().witness() {
            assert!(!phi.is_zero_vector(w));
            assert!(st.is_zero(&phi.eval(w).unwrap()), "{text}");
        }
    }
}

#[test]
fn decompositions() {
    let st = tower(&["s", "t"]);
    let d = witt_decompose(&form(&st, "H + H + H")).unwrap();
    assert_eq!((d.witt_index, d.kernel.dim()), (3, 0));
    let f2 = tower(&[]);
    assert_eq!(witt_index(&form(&f2, "[1,1] + [1,1]")).unwrap(), 2);
    // An Albert form with one hyperbolic plane.
    let albert = form(&st, "[1,1] + s*[1,1] + H");
    assert!(albert.has_trivial_arf().unwrap());
    let d = witt_decompose(&albert).unwrap();
    assert_eq!((d.witt_index, d.kernel.dim()), (1, 4));
    assert!(d.certificate.verify());
}

#[test]
fn residues() {
    let st = tower(&["s", "t"]);
    let r = springer_residues(&form(&st, "[1,1] + t*[s,1]")).unwrap();
    assert_eq!(r.residue0.render(), "[1,1]");
    assert_eq!(r.residue1.render(), "[s,1]");
    let r = springer_residues(&form(&st, "[t,s]")).unwrap();
    assert_eq!(r.residue0.dim() + r.residue1.dim(), 2);
    assert!(matches!(
        springer_residues(&form(&st, "[1,s*t^-2]")),
        Err(WittError::NotNormalizable { .. })
    ));
}

#[test]
fn extensions() {
    let t1 = tower(&["t"]);
    let one = form(&t1, "[1,1]");
    let ext = t1.quad_extend(&t1.one()).unwrap();
    assert!(matches!(ext, ExtensionResult::Unramified(_)));
    assert_eq!(witt_index_over_ext(&one, &ext).unwrap(), 1);
    let s1 = tower(&["s"]);
    let pf = form(&s1, "pf(s;1)");
    let ext = s1.quad_extend(&s1.one()).unwrap();
    assert_eq!(witt_index(&pf).unwrap(), 0);
    assert_eq!(witt_index_over_ext(&pf, &ext).unwrap(), 2);
}

#[test]
fn brute_force_examples() {
    let t1 = tower(&["t"]);
    let cfg = SearchConfig::default();
    let w = brute_force_search(&form(&t1, "H"), cfg).unwrap().unwrap();
    assert_eq!(w.len(), 2);
    let cfg8 = SearchConfig {
        degree_bound: 8,
        ..cfg
    };
    assert!(brute_force_search(&form(&t1, "[1,1] + t*[1,1]"), cfg8)
        .unwrap()
        .is_none());
}

#[test]
fn relations() {
    let st = tower(&["s", "t"]);
    let pi = form(&st, "pf(s,t;1)");
    let nb = form(&st, "[1,1] + s*[1,1] + <t>");
    assert!(subform_test(&nb, &pi).unwrap());
    assert!(subform_test(&form(&st, "[1,1] + s*[1,1]"), &pi).unwrap());
    assert!(!subform_test(&form(&st, "[1,1] + [1,1]"), &pi).unwrap());
    assert!(isometric(&form(&st, "[1,1] + [1,1]"), &form(&st, "H + H")).unwrap());
    assert!(!isometric(&form(&st, "[1,1]"), &form(&st, "H")).unwrap());
    let mut r = corpus::rng(7);
    let psi = corpus::random_isometric(&nb, &mut r).unwrap();
    assert!(isometric(&nb, &psi).unwrap());
}

/// Engine verdicts against the brute-force oracle on small tame forms over
/// F2((t)) and F2((s))((t)).
#[test]
fn oracle_agreement_small() {
    let cfg = SearchConfig {
        degree_bound: 4,
        budget: 200_000,
    };
    for vars in [&["t"][..], &["s", "t"][..]] {
        let k = tower(vars);
        for phi in corpus::tame_corpus(&k, 11, 40, 2, 0.4).unwrap() {
            let v = decide_isotropy(&phi).unwrap();
            if let Some(w) = v.witness() {
                assert!(k.is_zero(&phi.eval(w).unwrap()));
            }
            if v.is_isotropic() == Some(false) {
                match brute_force_search(&phi, cfg) {
                    Ok(found) => assert!(found.is_none(), "oracle refutes {phi}"),
                    Err(WittError::BudgetExceeded { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}
