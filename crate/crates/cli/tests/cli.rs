use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gacf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gacf")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Sign and id of the Euclidean product of two blade bitmaps, by adjacent swaps.
fn swap_oracle(r: u32, s: u32) -> (i32, u32) {
    let mut v: Vec<u32> = (0..32).filter(|i| r >> i & 1 == 1).chain((0..32).filter(|i| s >> i & 1 == 1)).collect();
    let mut sign = 1;
    for end in (1..v.len()).rev() {
        for i in 0..end {
            if v[i] > v[i + 1] {
                v.swap(i, i + 1);
                sign = -sign;
            }
        }
    }
    let mut id = 0;
    let mut i = 0;
    while i < v.len() {
        if i + 1 < v.len() && v[i] == v[i + 1] {
            i += 2;
        } else {
            id |= 1 << v[i];
            i += 1;
        }
    }
    (sign, id)
}

fn blade_id(name: &str) -> u32 {
    if name == "1" {
        return 0;
    }
    name.split('^').map(|e| 1 << e[1..].parse::<u32>().unwrap()).sum()
}

#[test]
fn golden_table_matches_swap_oracle() {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/euclidean3_gp.csv")).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').skip(1).collect();
    assert_eq!(header.len(), 8);
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let r = blade_id(cells[0]);
        for (cell, col) in cells[1..].iter().zip(&header) {
            let (sign, id) = swap_oracle(r, blade_id(col));
            let want = match id {
                0 => format!("{sign}"),
                _ => format!("{sign}*{}", col_name(id)),
            };
            assert_eq!(*cell, want, "row {} col {col}", cells[0]);
        }
    }
}

fn col_name(id: u32) -> String {
    (0..32).filter(|i| id >> i & 1 == 1).map(|i| format!("e{i}")).collect::<Vec<_>>().join("^")
}

#[test]
fn table_reproduces_golden_file() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e3.frame", "dimension 3\nmetric euclidean\n");
    let out = dir.path().join("gp.csv");
    let o = gacf(&["table", "--frame", s(&f), "--product", "gp", "--out", s(&out)]);
    assert!(o.status.success());
    let golden = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/euclidean3_gp.csv")).unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap(), golden);
}

#[test]
fn table_has_empty_cells_for_zero_products() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e2.frame", "dimension 2\nmetric euclidean\n");
    let out = dir.path().join("op.csv");
    assert!(gacf(&["table", "--frame", s(&f), "--product", "op", "--out", s(&out)]).status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().nth(2).unwrap(), "e0,1*e0,,1*e0^e1,");
}

#[test]
fn classify_and_eval() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "swap.frame", "# hyperbolic plane\ndimension 2\nmetric matrix\n0 1\n1 0\n");
    let o = gacf(&["classify", "--frame", s(&f)]);
    assert_eq!(stdout(&o), "NonOrthogonal\n");
    let o = gacf(&["eval", "--frame", s(&f), "e0*e1 + e1*e0"]);
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 2.0).abs() < 1e-12);
    let e5 = write(&dir, "e5.frame", "dimension 5\nmetric euclidean\n");
    let o = gacf(&["eval", "--frame", s(&e5), "(e0^e2^e3)*(e0^e1^e3)"]);
    assert_eq!(stdout(&o), "1*e1^e2\n");
    let m = write(&dir, "mink.frame", "dimension 4\nmetric signature 3 1 0\n");
    assert_eq!(stdout(&gacf(&["classify", "--frame", s(&m)])), "Orthonormal\n");
}

#[test]
fn reciprocal_output() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "d.frame", "dimension 2\nmetric diagonal 2 -1\n");
    let o = gacf(&["reciprocal", "--frame", s(&f)]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "0.5 0\n0 -1\nc0 = 0.5*e0\nc1 = -1*e1\n");
}

#[test]
fn outermorphism_subcommands() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e2.frame", "dimension 2\nmetric euclidean\n");
    let m = write(&dir, "m.txt", "rows 2 cols 2\n2 1\n0 3\n");
    assert_eq!(stdout(&gacf(&["om", "--frame", s(&f), "--matrix", s(&m), "det"])), "6\n");
    assert_eq!(stdout(&gacf(&["om", "--frame", s(&f), "--matrix", s(&m), "apply", "e0^e1"])), "6*e0^e1\n");
    assert_eq!(stdout(&gacf(&["om", "--frame", s(&f), "--matrix", s(&m), "apply", "e0"])), "2*e0\n");
    let grades = stdout(&gacf(&["om", "--frame", s(&f), "--matrix", s(&m), "grades"]));
    assert_eq!(grades, "grade 0\n1\ngrade 1\n2 1\n0 3\ngrade 2\n6\n");
}

#[test]
fn selftest_passes() {
    let o = gacf(&["selftest", "--dim", "3"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 9);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "e2.frame", "dimension 2\nmetric euclidean\n");
    let bad = write(&dir, "bad.frame", "dimension 2\nmetrik euclidean\n");
    let missing = dir.path().join("missing.frame");

    let o = gacf(&["eval", "--frame", s(&f), "foo(e0)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown function"));

    let o = gacf(&["eval", "--frame", s(&f), "e0 +"]);
    assert_eq!(o.status.code(), Some(1));

    let o = gacf(&["eval", "--frame", s(&f), "inv(e0 + e0^e1 - e0^e1 - e0)"]);
    assert_eq!(o.status.code(), Some(1));

    let o = gacf(&["classify", "--frame", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = gacf(&["classify", "--frame", s(&missing)]);
    assert_eq!(o.status.code(), Some(2));

    let out = dir.path().join("no/such/dir/t.csv");
    let o = gacf(&["table", "--frame", s(&f), "--product", "gp", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(gacf(&["bogus"]).status.code(), Some(1));
    assert_eq!(gacf(&["table", "--frame", s(&f), "--product", "nope", "--out", "x"]).status.code(), Some(1));
    assert_eq!(gacf(&["--help"]).status.code(), Some(0));

    let m = write(&dir, "m.txt", "rows 3 cols 3\n1 0 0\n0 1 0\n0 0 1\n");
    assert_eq!(gacf(&["om", "--frame", s(&f), "--matrix", s(&m), "det"]).status.code(), Some(1));
}
