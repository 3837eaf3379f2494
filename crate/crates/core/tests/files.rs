use gsnmf::matrix_io::{read_labels, LabeledMatrix};
use gsnmf::opinion::{read_messages, read_word_list, Lexicon};
use gsnmf::synthetic::{generate, PlantedConfig};
use gsnmf::Error;
use tempfile::TempDir;

#[test]
fn planted_instance_roundtrips_through_csv() {
    let dir = TempDir::new().unwrap();
    let inst = generate(&PlantedConfig {
        n: 30,
        m: 10,
        seed: 9,
        ..PlantedConfig::default()
    })
    .unwrap();
    inst.write_dir(dir.path()).unwrap();

    let x = LabeledMatrix::read_csv(dir.path().join("X.csv")).unwrap();
    assert_eq!(x.values, inst.x);
    assert_eq!(x.col_names, inst.user_ids());
    assert_eq!(x.row_names, inst.expression_ids());

    let w = LabeledMatrix::read_csv(dir.path().join("W.csv")).unwrap();
    assert_eq!(w.values, inst.w);

    let labels = read_labels(dir.path().join("labels.csv")).unwrap();
    let ids: Vec<usize> = labels.iter().map(|(_, l)| l.parse().unwrap()).collect();
    assert_eq!(ids, inst.labels);
}

#[test]
fn aligned_square_follows_requested_order() {
    let w =
        LabeledMatrix::read_from("user_id,a,b,c\na,0,1,2\nb,1,0,3\nc,2,3,0\n".as_bytes()).unwrap();
    let order = ["c".to_string(), "a".to_string(), "b".to_string()];
    let out = w.aligned_square(&order).unwrap();
    assert_eq!(out[[0, 1]], 2.0);
    assert_eq!(out[[0, 2]], 3.0);
    assert_eq!(out[[1, 2]], 1.0);
    assert!(w.aligned_square(&["zz".to_string()]).is_err());
}

#[test]
fn missing_files_report_their_path() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.tsv");
    match Lexicon::read_tsv(&missing) {
        Err(Error::Io { path, .. }) => assert!(path.ends_with("absent.tsv")),
        other => panic!("unexpected {other:?}"),
    }
    assert!(read_messages(dir.path().join("none.jsonl")).is_err());
    assert!(read_word_list(dir.path().join("none.txt")).is_err());
}

#[test]
fn word_lists_are_folded_and_trimmed() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("stop.txt");
    std::fs::write(&path, "  RT \n\nAmp\nvia\n").unwrap();
    let words = read_word_list(&path).unwrap();
    assert_eq!(words.len(), 3);
    assert!(words.contains("rt") && words.contains("amp"));
}
