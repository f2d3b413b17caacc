//! The subcommands, written against `io::Write` so tests can capture output.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use drindex_core::oracle::{
    apply_edit, bootstrap_index, build_snapshot, diff_index, lcp_stats, replay_iterations, TraceChecker, DEBUG_CAP,
};
use drindex_core::{DynamicRIndex, EditOp, SENTINEL};
use rand::Rng;

use crate::corpus;
use crate::format::{read_index, write_index};
use crate::script::{parse_script, render};

pub const DEFAULT_BLOCK: usize = 4096;
pub const DEFAULT_ORACLE_CAP: usize = 100_000;

/// Environment variable that turns on replay cross-checking in `edit`.
pub const DEBUG_TRACE_VAR: &str = "DRINDEX_DEBUG_TRACE";

fn read_body(path: &Path) -> Result<Vec<u8>> {
    let body = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    if let Some(k) = body.iter().position(|&b| b == SENTINEL) {
        bail!("{}: byte {} is 0x00, which is reserved for the sentinel", path.display(), k + 1);
    }
    Ok(body)
}

fn with_sentinel(mut body: Vec<u8>) -> Vec<u8> {
    body.push(SENTINEL);
    body
}

pub fn build(input: &Path, index: &Path, block: usize, bootstrap: bool, oracle_cap: usize, out: &mut dyn Write) -> Result<()> {
    let body = read_body(input)?;
    let ix = if bootstrap && body.len() < oracle_cap {
        bootstrap_index(&body)?
    } else {
        DynamicRIndex::from_text(&body, block)?
    };
    write_index(index, &ix).with_context(|| format!("writing {}", index.display()))?;
    let (n, r) = (ix.len(), ix.run_count());
    writeln!(out, "n={n} r={r} n/r={:.2}", n as f64 / r as f64)?;
    Ok(())
}

/// Patterns from a file (one per line) or from the command line.
pub fn load_patterns(file: Option<&Path>, literals: &[String]) -> Result<Vec<Vec<u8>>> {
    let mut pats: Vec<Vec<u8>> = Vec::new();
    if let Some(f) = file {
        let raw = fs::read(f).with_context(|| format!("reading {}", f.display()))?;
        pats.extend(raw.split(|&b| b == b'\n').map(|l| l.strip_suffix(b"\r").unwrap_or(l).to_vec()));
        if pats.last().is_some_and(|l| l.is_empty()) {
            pats.pop();
        }
    }
    pats.extend(literals.iter().map(|s| s.as_bytes().to_vec()));
    if pats.is_empty() {
        bail!("no patterns given");
    }
    Ok(pats)
}

/// One `<pattern-id> <count>` line per pattern; ids are 1-based. An empty
/// pattern is reported as an error line and does not stop the run.
pub fn count(index: &Path, patterns: &[Vec<u8>], out: &mut dyn Write) -> Result<()> {
    let ix = read_index(index)?;
    for (k, p) in patterns.iter().enumerate() {
        match ix.count(p) {
            Ok(c) => writeln!(out, "{} {c}", k + 1)?,
            Err(e) => writeln!(out, "{} error: {e}", k + 1)?,
        }
    }
    Ok(())
}

/// One `<pattern-id> <positions>` line per pattern, positions sorted.
pub fn locate(index: &Path, patterns: &[Vec<u8>], out: &mut dyn Write) -> Result<()> {
    let ix = read_index(index)?;
    for (k, p) in patterns.iter().enumerate() {
        match ix.locate(p) {
            Ok(occ) => {
                let list: Vec<String> = occ.iter().map(|v| v.to_string()).collect();
                writeln!(out, "{} {}", k + 1, list.join(" "))?;
            }
            Err(e) => writeln!(out, "{} error: {e}", k + 1)?,
        }
    }
    Ok(())
}

/// Applies one op with the replay checker attached; only for small texts.
fn apply_traced(ix: &mut DynamicRIndex, op: &EditOp) -> Result<drindex_core::UpdateStats> {
    let text = ix.text()?;
    let trace = replay_iterations(&text, op)?;
    let mut chk = TraceChecker::new(trace);
    let st = ix.apply_observed(op, &mut chk)?;
    chk.check_all_iterations();
    if let Err(errors) = chk.into_result() {
        bail!("trace check failed:\n  {}", errors.join("\n  "));
    }
    Ok(st)
}

/// Applies a script to an index file. Each op is validated before it runs,
/// and the file is rewritten after every op, so a failure (or a kill) leaves
/// the result of a prefix of the script.
pub fn edit(index: &Path, script: &Path, out: &mut dyn Write) -> Result<()> {
    let src = fs::read_to_string(script).with_context(|| format!("reading {}", script.display()))?;
    let lines = parse_script(&src)?;
    let mut ix = read_index(index)?;
    let traced = std::env::var(DEBUG_TRACE_VAR).is_ok_and(|v| v == "1");
    for sl in &lines {
        sl.op.validate(ix.len()).with_context(|| format!("line {}: {}", sl.line, render(&sl.op)))?;
        let st = if traced && ix.len() <= DEBUG_CAP {
            apply_traced(&mut ix, &sl.op).with_context(|| format!("line {}", sl.line))?
        } else {
            ix.apply(&sl.op).with_context(|| format!("line {}", sl.line))?
        };
        write_index(index, &ix)?;
        let micros = st.elapsed.unwrap_or_default().as_micros();
        writeln!(out, "{} K={} iters={} micros={micros}", render(&sl.op), st.k, st.iterations)?;
    }
    Ok(())
}

/// Compares an index with the oracle snapshot of `text` after `script`.
/// Returns whether they agree; differences are printed.
pub fn verify(index: &Path, text: &Path, script: Option<&Path>, oracle_cap: usize, out: &mut dyn Write) -> Result<bool> {
    let mut t = with_sentinel(read_body(text)?);
    if let Some(s) = script {
        let src = fs::read_to_string(s).with_context(|| format!("reading {}", s.display()))?;
        for sl in parse_script(&src)? {
            apply_edit(&mut t, &sl.op).with_context(|| format!("line {}", sl.line))?;
            if t.len() > oracle_cap {
                bail!("text grows to {} bytes at line {}, above the oracle cap {oracle_cap}", t.len(), sl.line);
            }
        }
    }
    if t.len() > oracle_cap {
        bail!("text has {} bytes, above the oracle cap {oracle_cap}", t.len());
    }
    let ix = read_index(index)?;
    let diff = diff_index(&ix, &t)?;
    if diff.is_empty() {
        writeln!(out, "ok n={} r={}", ix.len(), ix.run_count())?;
        return Ok(true);
    }
    for d in &diff {
        writeln!(out, "diff: {d}")?;
    }
    Ok(false)
}

/// Prints `sigma n r L_avg L_max n/r` for a text file.
pub fn stats(input: &Path, oracle_cap: usize, out: &mut dyn Write) -> Result<()> {
    let t = with_sentinel(read_body(input)?);
    if t.len() > oracle_cap {
        bail!("text has {} bytes, above the oracle cap {oracle_cap}", t.len());
    }
    let snap = build_snapshot(&t)?;
    let st = lcp_stats(&snap);
    let mut seen = [false; 256];
    t[..t.len() - 1].iter().for_each(|&b| seen[b as usize] = true);
    let sigma = seen.iter().filter(|&&s| s).count();
    writeln!(out, "sigma n r L_avg L_max n/r")?;
    writeln!(out, "{sigma} {} {} {:.2} {} {:.2}", t.len(), st.runs, st.avg(), st.max, t.len() as f64 / st.runs as f64)?;
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub struct BenchSpec {
    pub ops: usize,
    pub queries: usize,
    pub query_len: usize,
    pub seed: u64,
}

fn mean_sd(xs: &[Duration]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let us: Vec<f64> = xs.iter().map(|d| d.as_secs_f64() * 1e6).collect();
    let mean = us.iter().sum::<f64>() / us.len() as f64;
    let var = us.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / us.len() as f64;
    (mean, var.sqrt())
}

/// Random character insertions, then backward search and locate on
/// patterns cut from the edited text. The index file is not modified.
pub fn bench(index: &Path, spec: &BenchSpec, out: &mut dyn Write) -> Result<()> {
    let mut ix = read_index(index)?;
    let mut rng = corpus::rng(spec.seed);
    let alphabet: Vec<u8> = {
        let t = ix.text()?;
        let mut seen = [false; 256];
        t.iter().for_each(|&b| seen[b as usize] = true);
        (1..=255u8).filter(|&b| seen[b as usize]).collect()
    };
    let alphabet = if alphabet.is_empty() { vec![b'a'] } else { alphabet };
    let mut insert = Vec::with_capacity(spec.ops);
    for _ in 0..spec.ops {
        let i = rng.gen_range(1..=ix.len());
        let ch = alphabet[rng.gen_range(0..alphabet.len())];
        let t0 = Instant::now();
        ix.insert_char(i, ch)?;
        insert.push(t0.elapsed());
    }
    let text = ix.text()?;
    let body = &text[..text.len() - 1];
    let (mut search, mut occ) = (Vec::new(), Vec::new());
    if body.len() >= spec.query_len && spec.query_len > 0 {
        for _ in 0..spec.queries {
            let s = rng.gen_range(0..=body.len() - spec.query_len);
            let p = &body[s..s + spec.query_len];
            let t0 = Instant::now();
            let iv = ix.backward_search(p)?;
            search.push(t0.elapsed());
            let t1 = Instant::now();
            std::hint::black_box(ix.locate(p)?);
            occ.push(t1.elapsed());
            std::hint::black_box(iv);
        }
    }
    for (name, xs) in [("insert", &insert), ("backward_search", &search), ("locate", &occ)] {
        let (m, sd) = mean_sd(xs);
        writeln!(out, "{name}: {m:.2} ± {sd:.2} us over {}", xs.len())?;
    }
    Ok(())
}
