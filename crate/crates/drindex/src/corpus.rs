//! Seeded generators for texts, edits and patterns.

use drindex_core::EditOp;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform text over the first `sigma` lowercase letters (`1 <= sigma <= 26`).
pub fn random_text<R: Rng>(rng: &mut R, len: usize, sigma: u8) -> Vec<u8> {
    (0..len).map(|_| b'a' + rng.gen_range(0..sigma)).collect()
}

/// `copies` copies of one random `unit`-byte DNA seed, each copy with its
/// own point substitutions at rate `rate`.
pub fn repetitive_corpus(seed: u64, copies: usize, unit: usize, rate: f64) -> Vec<u8> {
    const DNA: &[u8; 4] = b"ACGT";
    let mut rng = rng(seed);
    let base: Vec<u8> = (0..unit).map(|_| DNA[rng.gen_range(0..4)]).collect();
    let mut out = Vec::with_capacity(copies * unit);
    for _ in 0..copies {
        for &b in &base {
            out.push(if rng.gen_bool(rate) { DNA[rng.gen_range(0..4)] } else { b });
        }
    }
    out
}

/// Which edits [`random_edit`] may draw.
#[derive(Clone, Copy, Debug)]
pub struct EditMix {
    pub sigma: u8,
    /// Longest inserted string and longest deletion.
    pub max_len: usize,
    /// Body length (sentinel excluded) to stay within; the draw favours
    /// deletions above it and never deletes below `min_body`.
    pub min_body: usize,
    pub max_body: usize,
}

/// A random edit valid for a text of length `n` (sentinel included).
pub fn random_edit<R: Rng>(rng: &mut R, n: usize, mix: &EditMix) -> EditOp {
    let body = n - 1;
    let can_delete = body > mix.min_body;
    let want_delete = can_delete && (body >= mix.max_body || rng.gen_bool(1.0 / 3.0));
    if want_delete {
        let i = rng.gen_range(1..n);
        let m = rng.gen_range(1..=mix.max_len.min(n - i).min(body - mix.min_body));
        return EditOp::DeleteSubstring { i, m };
    }
    let i = rng.gen_range(1..=n);
    if rng.gen_bool(0.5) {
        EditOp::InsertChar { i, ch: b'a' + rng.gen_range(0..mix.sigma) }
    } else {
        let len = rng.gen_range(2..=mix.max_len.max(2));
        EditOp::InsertString { i, p: random_text(rng, len, mix.sigma) }
    }
}

/// Patterns drawn half from substrings of `text` and half uniformly at
/// random over `sigma` letters, with lengths in `1..=max_len`.
pub fn patterns<R: Rng>(rng: &mut R, text: &[u8], count: usize, max_len: usize, sigma: u8) -> Vec<Vec<u8>> {
    (0..count)
        .map(|k| {
            let len = rng.gen_range(1..=max_len);
            if k % 2 == 0 && text.len() >= len {
                let start = rng.gen_range(0..=text.len() - len);
                text[start..start + len].to_vec()
            } else {
                random_text(rng, len, sigma)
            }
        })
        .collect()
}
