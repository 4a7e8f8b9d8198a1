//! Input parsing, synthetic data and atomic output files.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::usage_err;
use crate::Mode;

/// Reads a token file. Unreadable or malformed input is a usage error.
pub fn read_tokens(path: &Path, mode: Mode) -> Result<Vec<i64>> {
    let raw = fs::read(path).map_err(|e| usage_err(format!("cannot read {}: {e}", path.display())))?;
    match mode {
        Mode::Bytes => Ok(raw.into_iter().map(i64::from).collect()),
        Mode::Ints => {
            let text = String::from_utf8(raw)
                .map_err(|_| usage_err(format!("{} is not valid UTF-8", path.display())))?;
            text.split_whitespace()
                .enumerate()
                .map(|(i, word)| {
                    word.parse::<i64>().map_err(|_| {
                        usage_err(format!(
                            "{}: token {} ({word:?}) is not a decimal integer",
                            path.display(),
                            i + 1
                        ))
                    })
                })
                .collect()
        }
    }
}

pub fn default_alphabet(mode: Mode) -> u64 {
    match mode {
        Mode::Bytes => 4,
        Mode::Ints => 1000,
    }
}

/// `n` uniform symbols from `0..alphabet`, determined by `seed` alone.
pub fn random_symbols(n: usize, alphabet: u64, seed: u64) -> Vec<i64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(0..alphabet) as i64).collect()
}

/// File contents for `symbols` in the given mode. Bytes mode writes the
/// letters `a, b, …`, ints mode one integer per line.
pub fn render(symbols: &[i64], mode: Mode) -> Vec<u8> {
    match mode {
        Mode::Bytes => symbols.iter().map(|&s| b'a' + s as u8).collect(),
        Mode::Ints => {
            let mut out = String::with_capacity(symbols.len() * 4);
            for s in symbols {
                out.push_str(&s.to_string());
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}

/// Writes `contents` to `path` through a temporary sibling and a rename, so
/// a failed run never leaves a partial file behind. `None` means stdout.
pub fn write_output(path: Option<&Path>, contents: &[u8]) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        stdout.write_all(contents).context("writing to stdout")?;
        return stdout.flush().context("writing to stdout");
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| usage_err(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    let written = fs::write(&tmp, contents).and_then(|()| fs::rename(&tmp, path));
    if let Err(e) = written {
        let _ = fs::remove_file(&tmp);
        return Err(usage_err(format!("cannot write {}: {e}", path.display())));
    }
    Ok(())
}

/// Profile rows as CSV. Floats use the shortest representation that parses
/// back to the same value.
pub fn profile_csv(estimates: &[f64], exact: Option<&[f64]>) -> String {
    let mut out = String::with_capacity(estimates.len() * 24);
    out.push_str(if exact.is_some() {
        "position,estimate,exact,rel_error\n"
    } else {
        "position,estimate\n"
    });
    for (pos, &est) in estimates.iter().enumerate() {
        match exact {
            Some(x) => {
                let x = x[pos];
                out.push_str(&format!("{pos},{est},{x},{}\n", rel_error(est, x)));
            }
            None => out.push_str(&format!("{pos},{est}\n")),
        }
    }
    out
}

pub fn rel_error(est: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        if est == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (est - exact).abs() / exact
    }
}
