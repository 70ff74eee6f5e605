use algwass::io::{parse_doc, to_toml, Loader, ModuleDoc, MorphismDoc, ZigzagDoc};
use algwass::{decompose, PersistenceModule};
use std::fs;
use std::path::{Path, PathBuf};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn all_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            all_files(&p, out);
        } else if p.extension().is_some_and(|x| x == "toml") {
            out.push(p);
        }
    }
}

fn reparses<T>(text: &str) -> bool
where
    T: serde::Serialize + for<'de> serde::Deserialize<'de> + PartialEq,
{
    match parse_doc::<T>(text) {
        Ok(doc) => parse_doc::<T>(&to_toml(&doc).unwrap()).unwrap() == doc,
        Err(_) => false,
    }
}

#[test]
fn every_fixture_parses_and_reserializes() {
    let mut files = Vec::new();
    all_files(&root(), &mut files);
    assert!(files.len() > 30);
    let mut loader = Loader::new(None);
    for f in files {
        let text = fs::read_to_string(&f).unwrap();
        let loaded = if reparses::<ModuleDoc>(&text) {
            loader.module(&f).map(|_| ())
        } else if reparses::<MorphismDoc>(&text) {
            loader.morphism(&f).map(|_| ())
        } else if reparses::<ZigzagDoc>(&text) {
            loader.zigzag(&f).map(|_| ())
        } else {
            panic!("{} is not a known document", f.display());
        };
        loaded.unwrap_or_else(|e| panic!("{}: {e}", f.display()));
    }
}

fn rank_invariant(m: &PersistenceModule) -> Vec<(usize, usize, usize)> {
    let n = m.poset().len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if let Some(map) = m.map_between(a, b) {
                out.push((a, b, map.rank()));
            }
        }
    }
    out
}

#[test]
fn raw_dumps_match_their_sources() {
    let mut loader = Loader::new(None);
    for (src, raw) in [
        ("ex1/x.toml", "ex1/x_raw.toml"),
        ("ex1/y.toml", "ex1/y_raw.toml"),
        ("ex2/t_half/m_1.toml", "ex2/t_half/m_1_raw.toml"),
        ("zigzag/m_plus_n.toml", "zigzag/m_plus_n_raw.toml"),
        ("zigzag/l.toml", "zigzag/l_raw.toml"),
    ] {
        let a = loader.module(&root().join(src)).unwrap();
        let b = loader.module(&root().join(raw)).unwrap();
        assert_eq!(a.measure, b.measure, "{src}");
        assert_eq!(rank_invariant(&a.module), rank_invariant(&b.module), "{src}");
    }
    let l = loader.module(&root().join("zigzag/l_raw.toml")).unwrap();
    assert_eq!(decompose(&l.module).unwrap().to_string(), loader.module(&root().join("zigzag/l.toml")).unwrap().barcode.unwrap().to_string());
}

#[test]
fn second_example_splits_into_its_parts() {
    let mut loader = Loader::new(None);
    for dir in ["ex2/t0", "ex2/t_half"] {
        let whole = loader.module(&root().join(dir).join("m_1.toml")).unwrap();
        let a = loader.module(&root().join(dir).join("part_a.toml")).unwrap();
        let b = loader.module(&root().join(dir).join("part_b.toml")).unwrap();
        algwass::wasserstein::check_parts(&whole.module, &[a.module, b.module]).unwrap();
        // X_1 includes into X_t, so the induced map is a monomorphism.
        let f = loader.morphism(&root().join(dir).join("inclusion.toml")).unwrap();
        assert!(f.is_mono());
    }
}
