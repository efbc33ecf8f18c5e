//! Plain-text file formats for codebooks, channels, and generator rows.
//!
//! Codebook files:
//! ```text
//! n=<n> N=<N> origin=<tag>
//! <word>
//! ...
//! ```
//! with origin tags `random-with-seed:<seed>`, `linear-from-generator`, or
//! `explicit`. Channel files:
//! ```text
//! n=<n> K=<K>
//! dist <k>: <word>:<prob> <word>:<prob> ...
//! x=<word> -> <k>
//! default -> <k>
//! ```
//! Probabilities are written with 17 significant digits so values
//! round-trip exactly. Generator files hold one row per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use oblivch_core::{Channel, Codebook, ErrorDistribution, Origin, Word};

use crate::{CliError, CliResult};

fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_word(s: &str) -> CliResult<Word> {
    s.parse::<Word>().map_err(CliError::Core)
}

/// Key-value pairs from a header line like `n=8 N=16 origin=explicit`.
fn header_fields(line: &str) -> BTreeMap<&str, &str> {
    line.split_whitespace()
        .filter_map(|tok| tok.split_once('='))
        .collect()
}

pub fn codebook_to_string(cb: &Codebook) -> String {
    let tag = match cb.origin() {
        Origin::Random { seed } => format!("random-with-seed:{seed}"),
        Origin::Linear => "linear-from-generator".to_string(),
        Origin::Explicit => "explicit".to_string(),
    };
    let mut out = format!("n={} N={} origin={}\n", cb.n(), cb.num_words(), tag);
    for w in cb.words() {
        let _ = writeln!(out, "{w}");
    }
    out
}

pub fn codebook_from_str(text: &str) -> CliResult<Codebook> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| parse_err("empty codebook file"))?;
    let fields = header_fields(header);
    let n: u32 = fields
        .get("n")
        .ok_or_else(|| parse_err("codebook header missing n"))?
        .parse()
        .map_err(|_| parse_err("bad n in codebook header"))?;
    let num: usize = fields
        .get("N")
        .ok_or_else(|| parse_err("codebook header missing N"))?
        .parse()
        .map_err(|_| parse_err("bad N in codebook header"))?;
    let origin = match *fields
        .get("origin")
        .ok_or_else(|| parse_err("codebook header missing origin"))?
    {
        "linear-from-generator" => Origin::Linear,
        "explicit" => Origin::Explicit,
        tag => match tag.strip_prefix("random-with-seed:") {
            Some(seed) => Origin::Random {
                seed: seed
                    .parse()
                    .map_err(|_| parse_err("bad seed in origin tag"))?,
            },
            None => return Err(parse_err(format!("unknown origin tag `{tag}`"))),
        },
    };
    let words: Vec<Word> = lines.map(parse_word).collect::<CliResult<_>>()?;
    if words.len() != num {
        return Err(parse_err(format!(
            "codebook header says N={num} but file has {} words",
            words.len()
        )));
    }
    if words.iter().any(|w: &Word| w.len() != n) {
        return Err(parse_err("codeword length differs from header n"));
    }
    Ok(Codebook::from_parts(n, words, origin))
}

pub fn read_codebook(path: &Path) -> CliResult<Codebook> {
    codebook_from_str(&std::fs::read_to_string(path)?)
}

pub fn write_codebook(path: &Path, cb: &Codebook) -> CliResult<()> {
    std::fs::write(path, codebook_to_string(cb))?;
    Ok(())
}

pub fn channel_to_string(ch: &Channel) -> String {
    let mut out = format!("n={} K={}\n", ch.n(), ch.family_size());
    for (k, dist) in ch.family().iter().enumerate() {
        let _ = write!(out, "dist {k}:");
        for &(w, p) in dist.support() {
            let _ = write!(out, " {w}:{p:.16e}");
        }
        out.push('\n');
    }
    for (x, k) in ch.assignments() {
        let _ = writeln!(out, "x={x} -> {k}");
    }
    let _ = writeln!(out, "default -> {}", ch.default_index());
    out
}

pub fn channel_from_str(text: &str) -> CliResult<Channel> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| parse_err("empty channel file"))?;
    let fields = header_fields(header);
    let n: u32 = fields
        .get("n")
        .ok_or_else(|| parse_err("channel header missing n"))?
        .parse()
        .map_err(|_| parse_err("bad n in channel header"))?;
    let k: usize = fields
        .get("K")
        .ok_or_else(|| parse_err("channel header missing K"))?
        .parse()
        .map_err(|_| parse_err("bad K in channel header"))?;

    let mut family: Vec<ErrorDistribution> = Vec::with_capacity(k);
    let mut assign: BTreeMap<Word, usize> = BTreeMap::new();
    let mut default_index: Option<usize> = None;
    for line in lines {
        let line = line.trim();
        if let Some(rest) = line.strip_prefix("dist ") {
            let (idx, body) = rest
                .split_once(':')
                .ok_or_else(|| parse_err("malformed dist line"))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| parse_err("bad dist index"))?;
            if idx != family.len() {
                return Err(parse_err("dist lines must appear in index order"));
            }
            let mut support = Vec::new();
            for tok in body.split_whitespace() {
                let (w, p) = tok
                    .split_once(':')
                    .ok_or_else(|| parse_err("malformed support entry"))?;
                support.push((
                    parse_word(w)?,
                    p.parse::<f64>().map_err(|_| parse_err("bad probability"))?,
                ));
            }
            family.push(ErrorDistribution::new(n, support)?);
        } else if let Some(rest) = line.strip_prefix("default ->") {
            default_index = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| parse_err("bad default index"))?,
            );
        } else if let Some(rest) = line.strip_prefix("x=") {
            let (w, idx) = rest
                .split_once("->")
                .ok_or_else(|| parse_err("malformed assignment line"))?;
            assign.insert(
                parse_word(w.trim())?,
                idx.trim()
                    .parse()
                    .map_err(|_| parse_err("bad assignment index"))?,
            );
        } else {
            return Err(parse_err(format!("unrecognized channel line `{line}`")));
        }
    }
    if family.len() != k {
        return Err(parse_err(format!(
            "channel header says K={k} but file defines {} distributions",
            family.len()
        )));
    }
    let default_index =
        default_index.ok_or_else(|| parse_err("channel file missing default assignment"))?;
    Ok(Channel::new(n, family, assign, default_index)?)
}

pub fn read_channel(path: &Path) -> CliResult<Channel> {
    channel_from_str(&std::fs::read_to_string(path)?)
}

pub fn write_channel(path: &Path, ch: &Channel) -> CliResult<()> {
    std::fs::write(path, channel_to_string(ch))?;
    Ok(())
}

/// Generator rows: one word per line, blank lines and `#` comments ignored.
pub fn rows_from_str(text: &str) -> CliResult<Vec<Word>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_word)
        .collect()
}

pub fn read_rows(path: &Path) -> CliResult<Vec<Word>> {
    rows_from_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use oblivch_core::truncated_bsc;

    #[test]
    fn codebook_round_trips_exactly() {
        for cb in [
            Codebook::sample_random(9, 12, 341),
            Codebook::from_generator_matrix(5, &["10010".parse().unwrap()]),
            Codebook::explicit(3, vec!["101".parse().unwrap(), "101".parse().unwrap()]),
        ] {
            let text = codebook_to_string(&cb);
            let back = codebook_from_str(&text).unwrap();
            assert_eq!(back, cb);
            assert_eq!(codebook_to_string(&back), text);
        }
    }

    #[test]
    fn channel_round_trips_exactly() {
        let cb = Codebook::sample_random(8, 10, 7);
        let out = oblivch_core::greedy_oblivious_adversary(
            &cb,
            0.25,
            3,
            oblivch_core::CandidateMode::Exhaustive {
                max_candidates: 256,
            },
        )
        .unwrap();
        for ch in [out.channel, Channel::constant(truncated_bsc(8, 0.21))] {
            let text = channel_to_string(&ch);
            let back = channel_from_str(&text).unwrap();
            assert_eq!(channel_to_string(&back), text);
            assert_eq!(back.family_size(), ch.family_size());
            assert_eq!(back.default_index(), ch.default_index());
            // Distributions survive bit-for-bit.
            for (a, b) in ch.family().iter().zip(back.family().iter()) {
                for (&(wa, pa), &(wb, pb)) in a.support().iter().zip(b.support()) {
                    assert_eq!(wa, wb);
                    assert_eq!(pa.to_bits(), pb.to_bits());
                }
            }
        }
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        assert!(codebook_from_str("").is_err());
        assert!(codebook_from_str("n=3 N=2 origin=explicit\n101\n").is_err());
        assert!(codebook_from_str("n=3 N=1 origin=mystery\n101\n").is_err());
        assert!(channel_from_str("n=3 K=1\ndist 0: 000:1.0\n").is_err()); // no default
    }

    #[test]
    fn generator_rows_ignore_comments() {
        let rows = rows_from_str("# header\n1010\n\n0101\n").unwrap();
        assert_eq!(rows.len(), 2);
    }
}
