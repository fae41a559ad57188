mod common;

use heightbound::analytic::ErrReal;
use heightbound::arith::rat;
use heightbound::curve::{minimal_model, torsion_points, WeierstrassCurve};
use heightbound::harness::*;
use heightbound::heights::canonical_height;
use heightbound::lattice::{build_lattice, form_value};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use std::io::Cursor;
use std::path::PathBuf;

fn corpus_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus.jsonl")
}

fn entry(line: &str) -> CorpusEntry {
    ingest_jsonl(Cursor::new(line)).unwrap().remove(0)
}

fn value(b: &DecimalBall) -> f64 {
    b.value_f64().unwrap()
}

fn err(b: &DecimalBall) -> f64 {
    b.err.as_ref().unwrap().parse().unwrap()
}

#[test]
fn rank_one_example() {
    let e = entry(r#"{"label":"37a1","ainvs":["0","0","1","-1","0"],"generators":[["0","0"]],"rank":1}"#);
    let r = run_pipeline(&e, &Config::default());
    assert_eq!(r.height_conductor.status, StageStatus::Pass);
    let slack = value(&r.height_conductor.slack);
    let expect = value(&r.hf_plus) - 37f64.ln() / 12.0;
    assert!((slack - expect).abs() < 1e-12, "{slack} {expect}");
    assert_eq!(r.rank_bound.status, StageStatus::Pass);
    assert!((value(&r.rank_bound_value) - 4407.4).abs() < 0.1);
    assert_eq!(r.rank, Some(1));
    assert_eq!(r.zariski_dense, Some(true));
    assert_eq!(r.ls_minimizer.as_ref().map(|v| v[0].abs()), Some(1));
}

#[test]
fn square_lattice_example() {
    let e = entry(r#"{"label":"x3-x","ainvs":["0","0","0","-1","0"],"rank":0}"#);
    let r = run_pipeline(&e, &Config::default());
    assert_eq!(value(&r.reg_l), 1.0);
    assert_eq!(r.reg_l.err.as_deref(), Some("0"));
    assert_eq!(r.minkowski.status, StageStatus::Pass);
    assert_eq!(r.height_conductor.status, StageStatus::Pass);
    let slack = value(&r.height_conductor.slack);
    assert!((slack - (0.5273441404978 - 2f64.ln() / 12.0)).abs() < 1e-12);
    assert_eq!(r.ls_scan.status, StageStatus::Skipped);
    assert_eq!(r.zariski_dense, Some(false));
}

#[test]
fn dependent_generators_only_fail_the_lattice() {
    let e = entry(r#"{"label":"37a1-dep","ainvs":["0","0","1","-1","0"],"generators":[["0","0"],["1","0"]],"rank":1}"#);
    // (1, 0) = -2 (0, 0) on this curve
    let r = run_pipeline(&e, &Config::default());
    assert_eq!(r.lattice.status, StageStatus::Errored);
    assert!(r.lattice.detail.as_ref().unwrap().contains("dependent"));
    for s in [&r.minkowski, &r.hadamard, &r.ls_scan] {
        assert_eq!(s.status, StageStatus::Errored);
    }
    assert_eq!(r.height_conductor.status, StageStatus::Pass);
    assert_eq!(r.matrix_lemma.status, StageStatus::Pass);
    assert_eq!(r.rank_bound.status, StageStatus::Pass);
}

#[test]
fn unknown_rank_skips_rank_bound() {
    let e = entry(r#"{"label":"11a1","ainvs":["0","-1","1","-10","-20"]}"#);
    let r = run_pipeline(&e, &Config::default());
    assert_eq!(r.rank_bound.status, StageStatus::Skipped);
    assert_eq!(r.lattice.status, StageStatus::Skipped);
    assert_eq!(r.height_conductor.status, StageStatus::Pass);
}

#[test]
fn corpus_theorems_hold_within_tolerance() {
    let entries = ingest(&corpus_path(), Format::Jsonl).unwrap();
    assert!(entries.len() >= 20);
    let cfg = Config::default();
    for r in run_corpus(&entries, &cfg, 4).unwrap() {
        for s in [
            Stage::HeightConductor,
            Stage::MatrixLemma,
            Stage::RankBound,
            Stage::Minkowski,
            Stage::Hadamard,
        ] {
            assert_eq!(r.stage(s).status, StageStatus::Pass, "{} {}", r.label, s.name());
        }
        // generators re-validated as non-torsion and independent
        assert_eq!(r.lattice.status, StageStatus::Ok, "{}", r.label);
        for b in [&r.hf_plus, &r.tau_im, &r.log_n0] {
            assert!(err(b) <= cfg.tol, "{}", r.label);
        }
    }
}

#[test]
fn jsonl_and_csv_corpora_agree() {
    let entries = ingest(&corpus_path(), Format::Jsonl).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for fmt in [Format::Jsonl, Format::Csv] {
        let path = dir.path().join("corpus");
        let mut f = std::fs::File::create(&path).unwrap();
        write_corpus(&entries, &mut f, fmt).unwrap();
        drop(f);
        assert_eq!(ingest(&path, fmt).unwrap(), entries);
    }
}

#[test]
fn malformed_rational_reports_line() {
    let text = concat!(
        r#"{"label":"a","ainvs":["0","0","1","-1","0"]}"#,
        "\n",
        r#"{"label":"b","ainvs":["0","0","1","-1","0"]}"#,
        "\n",
        r#"{"label":"c","ainvs":["0","0","1","1/0","0"]}"#,
        "\n"
    );
    match ingest_jsonl(Cursor::new(text)) {
        Err(HarnessError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    let csv = "label,a1,a2,a3,a4,a6,generators,rank\nc,0,0,1,1/0,0,,\n";
    match ingest_csv(Cursor::new(csv)) {
        Err(HarnessError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn off_curve_generator_is_rejected() {
    let text = r#"{"label":"a","ainvs":["0","0","1","-1","0"],"generators":[["1","1"]]}"#;
    assert!(matches!(
        ingest_jsonl(Cursor::new(text)),
        Err(HarnessError::Parse { line: 1, .. })
    ));
}

#[test]
fn reports_round_trip_in_both_formats() {
    let entries = ingest(&corpus_path(), Format::Jsonl).unwrap();
    let reports = run_corpus(&entries[..8], &Config::default(), 2).unwrap();
    let mut jsonl = Vec::new();
    emit(&reports, &mut jsonl, Format::Jsonl).unwrap();
    let back: Vec<CurveReport> = String::from_utf8(jsonl.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(back, reports);

    let mut csv_out = Vec::new();
    emit(&reports, &mut csv_out, Format::Csv).unwrap();
    let mut rdr = csv::Reader::from_reader(csv_out.as_slice());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    for (row, r) in rdr.records().zip(&reports) {
        let flat = flatten(&serde_json::to_value(r).unwrap());
        assert_eq!(flat.iter().map(|(k, _)| k.clone()).collect::<Vec<_>>(), header);
        assert_eq!(
            flat.iter().map(|(_, v)| v.as_str()).collect::<Vec<_>>(),
            row.unwrap().iter().collect::<Vec<_>>()
        );
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let entries = ingest(&corpus_path(), Format::Jsonl).unwrap();
    let cfg = Config::default();
    let mut a = Vec::new();
    let mut b = Vec::new();
    emit(&run_corpus(&entries, &cfg, 1).unwrap(), &mut a, Format::Jsonl).unwrap();
    emit(&run_corpus(&entries, &cfg, 8).unwrap(), &mut b, Format::Jsonl).unwrap();
    assert_eq!(a, b);
}

#[test]
fn scan_minimum_matches_shuffled_enumeration() {
    let mut rng = StdRng::seed_from_u64(11);
    for (label, min, gens, _) in common::corpus() {
        if gens.is_empty() {
            continue;
        }
        let lat = build_lattice(&min, &gens, 1e-20).unwrap();
        let b = if gens.len() >= 3 { 3 } else { 5 };
        let (lo, arg) = box_minimum(&lat.gram, b).unwrap();
        let m = gens.len() as u32;
        let side = 2 * b as i64 + 1;
        let mut all: Vec<Vec<i64>> = (0..side.pow(m))
            .map(|mut k| {
                (0..m)
                    .map(|_| {
                        let c = k % side - b as i64;
                        k /= side;
                        c
                    })
                    .collect()
            })
            .filter(|n: &Vec<i64>| n.iter().any(|&c| c != 0))
            .collect();
        all.shuffle(&mut rng);
        let mut best: Option<ErrReal> = None;
        for n in &all {
            let v = form_value(&lat.gram, n);
            best = Some(match best {
                Some(x) if x.mid_f64() <= v.mid_f64() => x,
                _ => v,
            });
        }
        let best = best.unwrap();
        assert!(lo.overlaps(&best), "{label}");
        assert!(form_value(&lat.gram, &arg).overlaps(&best), "{label}");
    }
}

#[test]
fn scan_over_torsion_cosets() {
    // 65a1 has rank one and a point of order two
    let e = WeierstrassCurve::from_ints([1, 0, 0, -1, 0]).unwrap();
    let min = minimal_model(&e).unwrap();
    let tors = torsion_points(&min);
    assert_eq!(tors.len(), 2);
    let p = min.curve.point(rat(1, 1), rat(0, 1)).unwrap();
    assert!(!tors.contains(&p));
    let lat = build_lattice(&min, std::slice::from_ref(&p), 1e-20).unwrap();
    let hf = ErrReal::from_f64(0.5, 128);
    let s = ls_scan(&lat, &hf, 5).unwrap();
    let mut best = f64::INFINITY;
    for n in -5..=5i64 {
        for t in &tors {
            let q = min.curve.add(&min.curve.mul(n, &p), t);
            if n == 0 {
                continue;
            }
            let h = canonical_height(&min, &q, 1e-20).unwrap().value;
            best = best.min(h.mid_f64());
        }
    }
    assert!((s.min_height.mid_f64() - best).abs() < 1e-15);
    assert_eq!(s.minimizer[0].abs(), 1);
}

#[test]
fn cli_writes_reports_and_constants() {
    let exe = env!("CARGO_BIN_EXE_heightbound");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let st = std::process::Command::new(exe)
        .args([
            "--corpus",
            corpus_path().to_str().unwrap(),
            "--corpus-format",
            "jsonl",
            "--format",
            "csv",
            "--jobs",
            "2",
        ])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(st.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("label,curve.status,"));
    assert_eq!(text.lines().count(), 28);

    let c = std::process::Command::new(exe)
        .args(["--constants", "g=1"])
        .output()
        .unwrap();
    let s = String::from_utf8(c.stdout).unwrap();
    let first = s.lines().next().unwrap();
    assert!(first.starts_with("c ") && first.ends_with("^-1"), "{first}");

    let bad = std::process::Command::new(exe)
        .args(["--corpus", "/nonexistent", "--checks", "nope"])
        .status()
        .unwrap();
    assert!(!bad.success());
}
