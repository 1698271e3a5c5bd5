use std::path::Path;

use orbitkit::golden::{run_golden, Bundle};
use orbitkit::io::Document;
use orbitkit::Execution;

#[test]
fn bundled_files_round_trip() {
    for name in Bundle::file_names() {
        let doc = Document::from_json(Bundle::raw(name).unwrap()).unwrap();
        let text = doc.to_json_pretty();
        let again = Document::from_json(&text).unwrap();
        assert_eq!(again, doc, "{name}");
        assert_eq!(again.to_json_pretty(), text, "{name}");
    }
}

#[test]
fn data_directory_matches_embedded_copies() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let from_disk = Bundle::from_dir(&dir).unwrap();
    assert_eq!(from_disk.documents(), Bundle::embedded().documents());
}

#[test]
fn golden_tables_are_deterministic() {
    let bundle = Bundle::embedded();
    let a = run_golden(&bundle, Execution::Parallel);
    let b = run_golden(&bundle, Execution::Sequential);
    assert!(a.all_passed(), "{}", a.table());
    assert_eq!(a.table(), b.table());
}
