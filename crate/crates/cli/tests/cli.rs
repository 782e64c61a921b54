use std::process::Command;

use chowq_cli::{
    parse_job, render_json, run_job, Computation, Format, Outcome, Status,
};

const ST: &str = "field F2((s))((t))";

fn chowq(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_chowq"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn parse_examples() {
    let job = parse_job("field F2((s))((t)); form pf(s,t;1); run chow2").unwrap();
    assert_eq!(job.forms.len(), 1);
    assert_eq!(job.forms[0].form.dim(), 8);
    assert_eq!(job.runs, vec![Computation::Chow2]);

    let job = parse_job(&format!("{ST}\nform [1,1]+s*[1,1]+<t>")).unwrap();
    let phi = &job.forms[0].form;
    assert_eq!((phi.dim(), phi.blocks().len(), phi.quasilinear().len()), (5, 2, 1));

    let e = parse_job(&format!("{ST}\nform [1,1,1]")).unwrap_err();
    assert_eq!((e.line, e.column), (2, 10));
    assert!(e.expected.contains(&"`]`".to_string()), "{:?}", e.expected);
}

#[test]
fn parse_errors_are_positioned() {
    let e = parse_job("field F2((s))((t))\nfrom H").unwrap_err();
    assert_eq!((e.line, e.column), (2, 1));
    assert_eq!(e.found, "from");
    let e = parse_job("form H").unwrap_err();
    assert!(e.message.unwrap().contains("field"));
    let e = parse_job(&format!("{ST}; run witt, chow9")).unwrap_err();
    assert_eq!(e.found, "chow9");
    assert_eq!(e.column, 31);
    let e = parse_job(&format!("{ST}; budget 0")).unwrap_err();
    assert!(e.expected.contains(&"a positive integer".to_string()));
    let e = parse_job("field F2((s))((s))").unwrap_err();
    assert!(e.message.is_some());
}

#[test]
fn render_round_trip() {
    let text = "max-degree 48\nfield F2^2((t)); form g*[1,t] + <t^-1> # c\nfield F2((s))((t))\nform pf(s;t) + H\nrun witt,chow3; format json; budget 1000; seed 9";
    let job = parse_job(text).unwrap();
    let again = parse_job(&job.render()).unwrap();
    assert_eq!(job.forms.len(), again.forms.len());
    for (a, b) in job.forms.iter().zip(&again.forms) {
        assert_eq!(a.form, b.form);
    }
    assert_eq!(job.runs, again.runs);
    assert_eq!(job.format, Format::Json);
    assert_eq!(job.limits, again.limits);
    assert_eq!(job.seed, again.seed);
    assert_eq!(job.render(), again.render());
}

#[test]
fn chow2_report_for_pfister_form() {
    let job = parse_job(&format!("{ST}; form pf(s,t;1); run chow2")).unwrap();
    let reports = run_job(&job, 1).unwrap();
    let json: serde_json::Value = serde_json::from_str(render_json(&reports).unwrap().trim()).unwrap();
    let chow2 = &json["reports"]["chow2"];
    assert_eq!(chow2["torsion"]["kind"], "Exactly");
    assert_eq!(chow2["torsion"]["group"], "Z/2");
    assert_eq!(chow2["rules"], serde_json::json!(["Thm-CH2-PN"]));
    assert_eq!(json["schema_version"], 1);
    assert_eq!(chow2["schema_version"], 1);
}

#[test]
fn witt_report_for_hyperbolic_space() {
    let job = parse_job(&format!("{ST}; form H + H + H; run witt")).unwrap();
    let r = &run_job(&job, 1).unwrap()[0];
    match r.reports.witt.as_ref().unwrap() {
        Outcome::Ok(w) => {
            assert_eq!(w.witt_index, Some(3));
            assert_eq!(w.kernel_dim, Some(0));
        }
        Outcome::Err(e) => panic!("{}", e.error),
    }
}

#[test]
fn batch_preserves_order() {
    let forms = ["H", "[1,1] + s*[1,1]", "pf(s,t;1)", "[1,1] + s*[1,1] + <t>", "[1,s] + <t>", "H + H"];
    let mut text = format!("{ST}\nrun invariants\n");
    for f in forms {
        text.push_str(&format!("form {f}\n"));
    }
    let job = parse_job(&text).unwrap();
    let reports = run_job(&job, 4).unwrap();
    assert_eq!(reports.len(), forms.len());
    for (i, (r, f)) in reports.iter().zip(forms).enumerate() {
        assert_eq!(r.index, i);
        assert_eq!(r.input, f);
    }
}

#[test]
fn exit_codes() {
    let ok = chowq(&["--field", "F2((s))((t))", "--form", "pf(s,t;1)", "--run", "chow2", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = chowq(&["--field", "F2((s))((t))", "--form", "[1,1,1]"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("1:5"));

    // The index of this form is not resolved by the tame method.
    let field = "F2((r))((s))((t))";
    let form = "[1,r^-1] + s*[1,1] + t*[1,r^-1+1] + (s*t)*[1,1] + (r*s)*[1,1] + <r>";
    let lax = chowq(&["--field", field, "--form", form, "--run", "clifford"]);
    assert_eq!(lax.status.code(), Some(0));
    let strict = chowq(&["--field", field, "--form", form, "--run", "clifford", "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("chowq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("chowq.toml");
    std::fs::write(&cfg, "field = \"F2((s))((t))\"\nrun = \"witt\"\njson = true\n").unwrap();
    let c = cfg.to_str().unwrap();
    let out = chowq(&["--config", c, "--form", "H"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["reports"]["witt"].is_object());
    assert!(v["reports"].get("chow2").is_none());
    let out = chowq(&["--config", c, "--form", "H", "--run", "chow2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["reports"].get("witt").is_none());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn error_reports_do_not_stop_the_batch() {
    let job = parse_job(&format!("{ST}; run chow2; form [1,s] + <s> + <t>; form H + [1,1]")).unwrap();
    let reports = run_job(&job, 2).unwrap();
    assert_eq!(reports[0].status, Status::Error);
    assert_eq!(reports[1].status, Status::Ok);
}
