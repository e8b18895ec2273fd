use std::path::{Path, PathBuf};
use std::sync::Arc;

use gcat::cli::{run_command, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
use gcat::fincat::{chain, poset_from_generators, FinCat, FinFunctor};
use gcat::gaction::tensor;
use gcat::group::{coset_gset, FinGroup};
use gcat::io::{
    decode_category, decode_gaction, decode_ogdiagram, decode_sset, encode_category, encode_functor, encode_gaction, encode_group,
    encode_ogdiagram, encode_sset, read_manifest, to_json, write_manifest, Manifest,
};
use gcat::sset::{standard_complex, StandardKind};
use tempfile::TempDir;

fn run(args: &[&str]) -> i32 {
    let mut argv = vec!["gcat"];
    argv.extend_from_slice(args);
    run_command(argv)
}

fn put(dir: &TempDir, name: &str, m: &Manifest) -> PathBuf {
    let p = dir.path().join(name);
    write_manifest(&p, m).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn reencoded(p: &Path, kind: &str) -> (String, String) {
    let m = read_manifest(p).unwrap();
    let again = match kind {
        "category" => encode_category(&decode_category(&m).unwrap()),
        "sset" => encode_sset(&decode_sset(&m).unwrap()),
        "gaction" => encode_gaction(&decode_gaction(&m).unwrap()),
        "ogdiagram" => encode_ogdiagram(&decode_ogdiagram(&m).unwrap()),
        _ => unreachable!(),
    };
    (std::fs::read_to_string(p).unwrap(), to_json(&again))
}

#[test]
fn orbit_category_of_s3_has_six_objects() {
    let dir = TempDir::new().unwrap();
    let g = put(&dir, "s3.json", &encode_group(&FinGroup::symmetric3()));
    let out = dir.path().join("og.json");
    assert_eq!(run(&["orbit-cat", "--group", s(&g), "--out", s(&out)]), EXIT_OK);
    let og = decode_category(&read_manifest(&out).unwrap()).unwrap();
    assert_eq!(og.num_objects(), 6);
}

#[test]
fn fixed_points_phi_lambda_round_trip() {
    let dir = TempDir::new().unwrap();
    let g = Arc::new(FinGroup::cyclic(2));
    let x = tensor(&coset_gset(&g, &g.trivial_subgroup()).unwrap(), &chain(1));
    let act = put(&dir, "act.json", &encode_gaction(&x));
    let fx = dir.path().join("fx.json");
    assert_eq!(run(&["fixed-points", "--action", s(&act), "--subgroup", "H1", "--out", s(&fx)]), EXIT_OK);
    assert_eq!(decode_category(&read_manifest(&fx).unwrap()).unwrap().num_objects(), 0);
    let ph = dir.path().join("phi.json");
    assert_eq!(run(&["phi", "--action", s(&act), "--out", s(&ph)]), EXIT_OK);
    let (a, b) = reencoded(&ph, "ogdiagram");
    assert_eq!(a, b);
    let la = dir.path().join("lambda.json");
    assert_eq!(run(&["lambda", "--diagram", s(&ph), "--out", s(&la)]), EXIT_OK);
    let back = decode_gaction(&read_manifest(&la).unwrap()).unwrap();
    assert_eq!(**back.base(), **x.base());
    let (a, b) = reencoded(&la, "gaction");
    assert_eq!(a, b);
}

#[test]
fn simplicial_writers_round_trip() {
    let dir = TempDir::new().unwrap();
    let c = put(&dir, "c.json", &encode_category(&chain(2)));
    let n = dir.path().join("n.json");
    assert_eq!(run(&["nerve", "--category", s(&c), "--max-dim", "2", "--out", s(&n)]), EXIT_OK);
    assert_eq!(decode_sset(&read_manifest(&n).unwrap()).unwrap().counts(), vec![3, 3, 1]);
    let sdp = dir.path().join("sd.json");
    assert_eq!(run(&["sd", "--sset", s(&n), "--out", s(&sdp)]), EXIT_OK);
    let cat = dir.path().join("cat.json");
    assert_eq!(run(&["categorify", "--sset", s(&n), "--out", s(&cat)]), EXIT_OK);
    assert_eq!(decode_category(&read_manifest(&cat).unwrap()).unwrap().num_morphisms(), 6);
    let exp = dir.path().join("ex.json");
    let d1 = put(&dir, "d1.json", &encode_sset(&standard_complex(StandardKind::Delta, 1, None).unwrap()));
    assert_eq!(run(&["ex", "--sset", s(&d1), "--max-dim", "1", "--out", s(&exp)]), EXIT_OK);
    for (p, kind) in [(&n, "sset"), (&sdp, "sset"), (&cat, "category"), (&exp, "sset")] {
        let (a, b) = reencoded(p, kind);
        assert_eq!(a, b, "{}", p.display());
    }
}

#[test]
fn homology_report_on_a_circle() {
    let dir = TempDir::new().unwrap();
    let x = put(&dir, "b2.json", &encode_sset(&standard_complex(StandardKind::Boundary, 2, None).unwrap()));
    let out = dir.path().join("h.json");
    assert_eq!(run(&["homology", "--sset", s(&x), "--max-dim", "3", "--out", s(&out)]), EXIT_OK);
    let rep = read_manifest(&out).unwrap();
    assert_eq!(rep.kind, "report");
    let betti: Vec<u64> = rep.payload["groups"].as_array().unwrap().iter().map(|g| g["betti"].as_u64().unwrap()).collect();
    assert_eq!(betti[..2], [1, 1]);
}

#[test]
fn pushout_commands_agree_on_the_basic_cell() {
    let dir = TempDir::new().unwrap();
    let a = Arc::new(FinCat::discrete(&["a"]).unwrap());
    let b = Arc::new(poset_from_generators(&["a", "b"], &[(0, 1)]).unwrap());
    let i = FinFunctor::inclusion(a.clone(), b).unwrap();
    let f = FinFunctor::constant(a, Arc::new(FinCat::terminal()), 0);
    let ip = put(&dir, "i.json", &encode_functor(&i));
    let fp = put(&dir, "f.json", &encode_functor(&f));
    let (d, o) = (dir.path().join("d.json"), dir.path().join("o.json"));
    assert_eq!(run(&["pushout", "--i", s(&ip), "--f", s(&fp), "--out", s(&d)]), EXIT_OK);
    assert_eq!(run(&["pushout-oracle", "--i", s(&ip), "--f", s(&fp), "--out", s(&o)]), EXIT_OK);
    let d = decode_category(&read_manifest(&d).unwrap()).unwrap();
    let o = decode_category(&read_manifest(&o).unwrap()).unwrap();
    assert_eq!((d.num_objects(), d.num_morphisms()), (2, 3));
    assert_eq!((o.num_objects(), o.num_morphisms()), (2, 3));
    let w = dir.path().join("w.json");
    assert_eq!(run(&["dwyer-check", "--functor", s(&ip), "--out", s(&w)]), EXIT_OK);
    let w = read_manifest(&w).unwrap();
    assert_eq!(w.payload["dwyer"], true);
    assert_eq!(w.payload["retraction"]["b"], "a");
}

#[test]
fn colimit_pullback_and_checks() {
    let dir = TempDir::new().unwrap();
    let (c0, c1, c2) = (Arc::new(chain(0)), Arc::new(chain(1)), Arc::new(chain(2)));
    let f0 = put(&dir, "f0.json", &encode_functor(&FinFunctor::inclusion(c0, c1.clone()).unwrap()));
    let f1 = put(&dir, "f1.json", &encode_functor(&FinFunctor::inclusion(c1.clone(), c2.clone()).unwrap()));
    let out = dir.path().join("colim.json");
    assert_eq!(run(&["seq-colim", "--maps", s(&f0), s(&f1), "--out", s(&out)]), EXIT_OK);
    assert_eq!(decode_category(&read_manifest(&out).unwrap()).unwrap(), *c2);
    let pb = dir.path().join("pb.json");
    assert_eq!(run(&["pullback", "--f", s(&f1), "--g", s(&f1), "--out", s(&pb)]), EXIT_OK);
    assert_eq!(decode_category(&read_manifest(&pb).unwrap()).unwrap().num_objects(), 2);
    let cp = put(&dir, "c1.json", &encode_category(&c1));
    let sv = dir.path().join("sieve.json");
    assert_eq!(run(&["sieve-check", "--category", s(&cp), "--objects", "0", "--out", s(&sv)]), EXIT_OK);
    assert!(std::fs::read_to_string(&sv).unwrap().contains("true"));
    assert_eq!(run(&["sieve-check", "--category", s(&cp), "--objects", "1", "--out", s(&sv)]), EXIT_OK);
    assert!(std::fs::read_to_string(&sv).unwrap().contains("false"));
    let cmp = dir.path().join("cmp.json");
    assert_eq!(run(&["compare-homology", "--functor", s(&f1), "--out", s(&cmp)]), EXIT_OK);
    assert_eq!(read_manifest(&cmp).unwrap().payload["equal"], true);
}

#[test]
fn gen_cell_and_tensor() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("cell.json");
    assert_eq!(run(&["gen-cell", "--m", "1", "--out", s(&out)]), EXIT_OK);
    let m = read_manifest(&out).unwrap();
    assert_eq!(m.kind, "functor");
    assert_eq!(m.payload["target"]["objects"].as_array().unwrap().len(), 5);
    assert_eq!(run(&["gen-cell", "--m", "2", "--horn", "3"]), EXIT_USAGE);
    let g = put(&dir, "g.json", &encode_group(&FinGroup::symmetric3()));
    let a = put(&dir, "a.json", &encode_category(&chain(1)));
    let t = dir.path().join("t.json");
    assert_eq!(run(&["tensor", "--group", s(&g), "--subgroup", "H1", "--category", s(&a), "--out", s(&t)]), EXIT_OK);
    let x = decode_gaction(&read_manifest(&t).unwrap()).unwrap();
    assert_eq!(x.base().num_objects(), 6);
}

#[test]
fn validation_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"schema_version": 1, "kind": "category", "payload": {"objects": ["x", "y", "z"],
            "morphisms": [{"id": "f", "src": "x", "tgt": "y"}, {"id": "g", "src": "y", "tgt": "z"}], "compose": []}}"#,
    )
    .unwrap();
    assert_eq!(run(&["validate", "--input", s(&bad)]), EXIT_INVALID);
    let good = put(&dir, "good.json", &encode_category(&chain(2)));
    assert_eq!(run(&["validate", "--input", s(&good)]), EXIT_OK);
    assert_eq!(run(&["validate", "--input", s(&dir.path().join("missing.json"))]), EXIT_INVALID);
    assert_eq!(run(&["frobnicate"]), EXIT_USAGE);
}

#[test]
fn verify_suites_exit_codes_and_determinism() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert_eq!(run(&["verify", "pushout-explicit", "--seed", "42", "--cases", "20", "--jobs", "1", "--out", s(&a)]), EXIT_OK);
    assert_eq!(run(&["verify", "pushout-explicit", "--seed", "42", "--cases", "20", "--jobs", "4", "--out", s(&b)]), EXIT_OK);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(read_manifest(&a).unwrap().payload["passed"], 20);
    assert_eq!(run(&["verify", "adjunction", "--seed", "7", "--cases", "10", "--out", s(&a)]), EXIT_OK);
    assert_eq!(run(&["verify", "pushout-fixed", "--seed", "1", "--cases", "0", "--out", s(&a)]), EXIT_OK);
    assert_eq!(read_manifest(&a).unwrap().payload["cases"], 0);
    assert_eq!(run(&["verify", "unknown-suite"]), EXIT_USAGE);
}
