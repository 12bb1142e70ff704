use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use evidential::io::{read_epm_file, read_pfm_file, write_epm_file, write_pfm_file};
use evidential::{decode, DisparityMap, EvidentialMap, NigParams};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evidential")).args(args).output().unwrap()
}

fn path(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sample_map() -> EvidentialMap {
    let pixels: Vec<NigParams> = (0..12)
        .map(|i| NigParams::new(i as f64 * 1.5, 0.5 + i as f64, 1.5 + 0.1 * i as f64, 0.25 * (i + 1) as f64).unwrap())
        .collect();
    EvidentialMap::from_params(4, 3, &pixels).unwrap()
}

#[test]
fn inter_fusion_of_a_map_with_itself_keeps_disparity() {
    let dir = tempfile::tempdir().unwrap();
    let (a, out, d) = (path(dir.path(), "a.epm"), path(dir.path(), "out.epm"), path(dir.path(), "d.pfm"));
    write_epm_file(&sample_map(), &a).unwrap();
    assert!(run(&["fuse", "inter", s(&a), s(&a), "-o", s(&out)]).status.success());
    let (al, ep) = (path(dir.path(), "al.pfm"), path(dir.path(), "ep.pfm"));
    let status = run(&["decode", s(&out), "--disparity", s(&d), "--aleatoric", s(&al), "--epistemic", s(&ep)]).status;
    assert!(status.success());
    let expected = decode(&read_epm_file(&a).unwrap()).disparity;
    assert_eq!(read_pfm_file(&d).unwrap(), expected);
}

#[test]
fn metrics_of_identical_maps_are_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (p, r) = (path(dir.path(), "p.pfm"), path(dir.path(), "r.csv"));
    write_pfm_file(&DisparityMap::from_fn(5, 4, |x, y| (x * y) as f64 * 0.75), &p).unwrap();
    assert!(run(&["metrics", s(&p), s(&p), "--report", s(&r)]).status.success());
    let report = std::fs::read_to_string(&r).unwrap();
    for line in report.lines().skip(1) {
        let (name, value) = line.split_once(',').unwrap();
        if name == "epe" || name.starts_with("d1_") || name == "err_3px" {
            assert_eq!(value.parse::<f64>().unwrap(), 0.0, "{line}");
        }
    }
}

#[test]
fn validate_reports_first_bad_pixel() {
    let dir = tempfile::tempdir().unwrap();
    let file = path(dir.path(), "bad.epm");
    write_epm_file(&sample_map(), &file).unwrap();
    // Overwrite α of pixel (2, 1) with 0.5; the α plane starts after the header and two planes.
    let mut bytes = std::fs::read(&file).unwrap();
    let offset = 12 + 2 * 12 * 4 + (4 + 2) * 4;
    bytes[offset..offset + 4].copy_from_slice(&0.5f32.to_le_bytes());
    std::fs::write(&file, bytes).unwrap();

    let out = run(&["validate", s(&file)]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error:"), "{stderr}");
    assert!(stderr.contains("(2, 1)") && stderr.contains("alpha"), "{stderr}");

    write_epm_file(&sample_map(), &file).unwrap();
    assert_eq!(run(&["validate", s(&file)]).status.code(), Some(0));
}

#[test]
fn exit_codes_by_error_class() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["fuse"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));

    let missing = path(dir.path(), "missing.epm");
    assert_eq!(run(&["validate", s(&missing)]).status.code(), Some(2));

    let junk = path(dir.path(), "junk.epm");
    std::fs::write(&junk, b"nope").unwrap();
    let out = run(&["validate", s(&junk)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));

    let curves = path(dir.path(), "c.csv");
    let diverge = run(&["train-toy", "--samples", "64", "--epochs", "50", "--lr", "1e300", "--curves", s(&curves)]);
    assert_eq!(diverge.status.code(), Some(3));
}

#[test]
fn outputs_are_readable_by_the_library() {
    let dir = tempfile::tempdir().unwrap();
    let files: Vec<PathBuf> = ["a", "b", "c", "intra"].iter().map(|n| path(dir.path(), &format!("{n}.epm"))).collect();
    for f in &files[..3] {
        write_epm_file(&sample_map(), f).unwrap();
    }
    let status = run(&["fuse", "intra", s(&files[0]), s(&files[1]), s(&files[2]), "-o", s(&files[3])]).status;
    assert!(status.success());
    let fused = read_epm_file(&files[3]).unwrap();
    assert_eq!(fused.dims(), (4, 3));
    assert_eq!(fused.get(1, 1).alpha as f32, (3.0 * sample_map().get(1, 1).alpha + 1.0) as f32);

    let (curves, table) = (path(dir.path(), "curves.csv"), path(dir.path(), "t.csv"));
    let out = run(&[
        "train-toy", "--kind", "two-region", "--samples", "1000", "--epochs", "300", "--tau", "0.5", "--seed",
        "7", "--curves", s(&curves), "--fusion-table", s(&table),
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_path(&table).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["expert1_epe", "expert2_epe", "avg_epe", "monig_epe"]);
    let row: Vec<f64> = reader.records().next().unwrap().unwrap().iter().map(|v| v.parse().unwrap()).collect();
    assert!(row[3] <= row[2]);
    let epochs = csv::Reader::from_path(&curves).unwrap().records().count();
    assert_eq!(epochs, 300);
}
