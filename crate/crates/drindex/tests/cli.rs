use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use drindex::corpus::{self, EditMix};
use drindex::script::render;
use drindex_core::oracle::apply_edit;

fn drindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drindex")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

struct Fixture {
    dir: tempfile::TempDir,
}

impl Fixture {
    fn new(text: &[u8]) -> Self {
        let f = Fixture { dir: tempfile::tempdir().unwrap() };
        fs::write(f.path("t.txt"), text).unwrap();
        let o = drindex(&["build", "--input", &f.arg("t.txt"), "--index", &f.arg("t.drix")]);
        assert!(o.status.success(), "{o:?}");
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).into_os_string().into_string().unwrap()
    }

    fn script(&self, name: &str, body: &str) -> String {
        fs::write(self.path(name), body).unwrap();
        self.arg(name)
    }
}

#[test]
fn build_reports_sizes() {
    let f = tempfile::tempdir().unwrap();
    let input = f.path().join("t.txt");
    let out = f.path().join("t.drix");
    fs::write(&input, b"bbabba").unwrap();
    let o = drindex(&["build", "--input", input.to_str().unwrap(), "--index", out.to_str().unwrap()]);
    assert_eq!(stdout(&o), "n=7 r=4 n/r=1.75\n");
    fs::write(&input, b"").unwrap();
    let o = drindex(&["build", "--input", input.to_str().unwrap(), "--index", out.to_str().unwrap(), "--block-size", "1"]);
    assert_eq!(stdout(&o), "n=1 r=1 n/r=1.00\n");
    fs::write(&input, b"ab\0c").unwrap();
    let o = drindex(&["build", "--input", input.to_str().unwrap(), "--index", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sentinel"));
}

#[test]
fn count_and_locate() {
    let f = Fixture::new(b"bbabba");
    let o = drindex(&["count", "--index", &f.arg("t.drix"), "ab", "zz", "bb"]);
    assert_eq!(stdout(&o), "1 1\n2 0\n3 2\n");
    fs::write(f.path("pats"), "ab\nbb\n").unwrap();
    let o = drindex(&["locate", "--index", &f.arg("t.drix"), "--patterns", &f.arg("pats"), "zz"]);
    assert_eq!(stdout(&o), "1 3\n2 1 4\n3 \n");
}

#[test]
fn edit_stats_and_round_trip() {
    let f = Fixture::new(b"bbabba");
    let o = drindex(&["edit", "--index", &f.arg("t.drix"), "--script", &f.script("s1", "I 6 \"b\"\n")]);
    assert!(stdout(&o).starts_with("I 6 \"b\" K=3 iters=5 micros="), "{}", stdout(&o));
    let o = drindex(&["edit", "--index", &f.arg("t.drix"), "--script", &f.script("s2", "D 6 1\n")]);
    assert!(o.status.success());
    let o = drindex(&["verify", "--index", &f.arg("t.drix"), "--input", &f.arg("t.txt")]);
    assert_eq!(stdout(&o), "ok n=7 r=4\n");
    assert_eq!(fs::read(f.path("t.drix")).unwrap(), {
        let g = Fixture::new(b"bbabba");
        fs::read(g.path("t.drix")).unwrap()
    });
}

#[test]
fn failing_op_keeps_earlier_ops() {
    let f = Fixture::new(b"bbabba");
    let o = drindex(&["edit", "--index", &f.arg("t.drix"), "--script", &f.script("s", "I 1 \"a\"\nD 9 1\nI 1 \"b\"\n")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = drindex(&["verify", "--index", &f.arg("t.drix"), "--input", &f.arg("t.txt"), "--script", &f.script("v", "I 1 \"a\"\n")]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn malformed_script_names_the_line() {
    let f = Fixture::new(b"bbabba");
    let before = fs::read(f.path("t.drix")).unwrap();
    let o = drindex(&["edit", "--index", &f.arg("t.drix"), "--script", &f.script("s", "# ok\nI 1 \"a\"\nQ 1 1\n")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert_eq!(fs::read(f.path("t.drix")).unwrap(), before);
}

#[test]
fn verify_locates_a_corrupted_sample() {
    let f = Fixture::new(b"bbabba");
    let path = f.path("t.drix");
    let mut bytes = fs::read(&path).unwrap();
    // Header 22, s1 8+4, s2 8+32, s3 8+32, s4 8+40, then sa_s length: the
    // first start sample (7) lives at byte 170. Flip it to 5, fix the CRC.
    assert_eq!(bytes[170], 7);
    bytes[170] ^= 0b10;
    let body = bytes.len() - 4;
    let crc = crc32(&bytes[..body]);
    bytes[body..].copy_from_slice(&crc.to_le_bytes());
    fs::write(&path, &bytes).unwrap();
    let o = drindex(&["verify", "--index", &f.arg("t.drix"), "--input", &f.arg("t.txt")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("diff: sa_s"), "{}", stdout(&o));

    // Without fixing the CRC the file is refused outright.
    bytes[171] ^= 1;
    fs::write(&path, &bytes).unwrap();
    let o = drindex(&["count", "--index", &f.arg("t.drix"), "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("checksum"));
}

fn crc32(bytes: &[u8]) -> u32 {
    // Bitwise CRC-32 (IEEE), independent of the crate the tool uses.
    let mut crc = !0u32;
    for &b in bytes {
        crc ^= b as u32;
        for _ in 0..8 {
            crc = if crc & 1 == 1 { (crc >> 1) ^ 0xEDB8_8320 } else { crc >> 1 };
        }
    }
    !crc
}

#[test]
fn thousand_random_edits_verify_clean() {
    let mut rng = corpus::rng(5);
    let body = corpus::random_text(&mut rng, 300, 4);
    let f = Fixture::new(&body);
    let mix = EditMix { sigma: 4, max_len: 8, min_body: 100, max_body: 500 };
    let mut text = body.clone();
    text.push(0);
    let mut script = String::new();
    for _ in 0..1000 {
        let op = corpus::random_edit(&mut rng, text.len(), &mix);
        apply_edit(&mut text, &op).unwrap();
        script += &render(&op);
        script.push('\n');
    }
    let s = &f.script("s", &script);
    let o = drindex(&["edit", "--index", &f.arg("t.drix"), "--script", s]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 1000);
    let o = drindex(&["verify", "--index", &f.arg("t.drix"), "--input", &f.arg("t.txt"), "--script", s]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn debug_trace_mode_checks_edits() {
    let f = Fixture::new(b"abaababaab");
    let o = Command::new(env!("CARGO_BIN_EXE_drindex"))
        .args(["edit", "--index", &f.arg("t.drix"), "--script", &f.script("s", "I 4 \"bba\"\nD 2 5\nI 1 \"b\"\n")])
        .env("DRINDEX_DEBUG_TRACE", "1")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn stats_rows() {
    let f = Fixture::new(b"bbabba");
    let o = drindex(&["stats", "--input", &f.arg("t.txt")]);
    assert_eq!(stdout(&o), "sigma n r L_avg L_max n/r\n2 7 4 1.00 3 1.75\n");
    fs::write(f.path("e.txt"), b"").unwrap();
    let o = drindex(&["stats", "--input", &f.arg("e.txt")]);
    assert_eq!(stdout(&o).lines().nth(1), Some("0 1 1 0.00 0 1.00"));
    let o = drindex(&["stats", "--input", &f.arg("t.txt"), "--oracle-cap", "5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_runs() {
    let f = Fixture::new(&corpus::repetitive_corpus(1, 16, 256, 0.02));
    let o = drindex(&["bench", "--index", &f.arg("t.drix"), "--ops", "50", "--queries", "10", "--query-len", "20", "--seed", "3"]);
    let out = stdout(&o);
    assert!(out.contains("insert:") && out.contains("over 50"), "{out}");
    assert!(out.contains("locate:") && out.contains("over 10"), "{out}");
    let o = drindex(&["bench", "--index", &f.arg("t.drix"), "--ops", "0", "--queries", "0"]);
    assert!(stdout(&o).contains("insert: 0.00 ± 0.00 us over 0"));
}

