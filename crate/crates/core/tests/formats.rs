use wp_curvature::tensor::{compute_block, manifest_path, persist_partial, BlockFailure, TensorCache, TensorComputer};
use wp_curvature::wedge::{assemble_matrix, OperatorMatrix};
use wp_curvature::WpError;

fn block(n: u32) -> TensorCache {
    let mut c = TensorCache::new(n as usize);
    compute_block(n, &mut c, &TensorComputer::default(), 0).unwrap();
    c
}

#[test]
fn cache_round_trip_is_exact() {
    let c = block(4);
    let text = c.to_jsonl().unwrap();
    let back = TensorCache::from_jsonl(&text, "mem").unwrap();
    assert_eq!(back.to_jsonl().unwrap(), text);
    for e in c.entries() {
        assert_eq!(back.get(e.indices).unwrap().to_bits(), e.value.to_bits());
    }
}

#[test]
fn cache_rejects_foreign_files() {
    assert!(matches!(TensorCache::from_jsonl("", "x"), Err(WpError::Format { .. })));
    let wrong = "{\"format\":\"other\",\"version\":1,\"truncation\":2}\n";
    assert!(matches!(TensorCache::from_jsonl(wrong, "x"), Err(WpError::Format { .. })));
    let c = block(1).to_jsonl().unwrap() + "{not json}\n";
    assert!(matches!(TensorCache::from_jsonl(&c, "x"), Err(WpError::Format { .. })));
}

#[test]
fn operator_csv_round_trip_keeps_every_bit() {
    let m = assemble_matrix(3, &block(3)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("op.csv");
    m.save(&path, None).unwrap();
    let back = OperatorMatrix::load(&path).unwrap();
    assert_eq!(back.n, 3);
    for (a, b) in m.matrix.iter().zip(back.matrix.iter()) {
        assert_eq!(a.to_bits(), b.to_bits());
    }
    let first = std::fs::read_to_string(&path).unwrap();
    let cell = first.split(',').next().unwrap();
    // 17 significant digits
    assert_eq!(cell.trim_start_matches('-').split('e').next().unwrap().replace('.', "").len(), 17);
}

#[test]
fn partial_cache_writes_manifest() {
    let c = block(2);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tensor-N3.jsonl");
    let failure = BlockFailure { missing: vec![[1, 2, 3, 2]], first_error: WpError::Domain("stopped".into()) };
    persist_partial(&c, &failure, &path).unwrap();
    assert_eq!(TensorCache::load(&path).unwrap().len(), c.len());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_path(&path)).unwrap()).unwrap();
    assert_eq!(manifest["missing"][0], serde_json::json!([1, 2, 3, 2]));
}
