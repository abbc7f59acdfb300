//! Number formatting and artifact destinations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Serialize, Serializer};

use crate::Failure;

/// Significant digits kept in every emitted float.
pub const DIGITS: usize = 12;

/// `x` rounded to [`DIGITS`] significant digits.
pub fn round(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x)
}

/// CSV rendering: plain decimals for moderate magnitudes, exponent form
/// otherwise.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let r = round(x);
    if r == 0.0 {
        return "0".into();
    }
    if (1e-4..1e12).contains(&r.abs()) {
        return format!("{r}");
    }
    let s = format!("{:.*e}", DIGITS - 1, r);
    let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
    let mantissa = if mantissa.contains('.') { mantissa.trim_end_matches('0').trim_end_matches('.') } else { mantissa };
    format!("{mantissa}e{exp}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// A float serialized at [`DIGITS`] significant digits; non-finite values
/// become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(round(self.0) + 0.0)
        } else {
            s.serialize_none()
        }
    }
}

pub fn nums<const N: usize>(x: [f64; N]) -> [Num; N] {
    x.map(Num)
}

/// `--out` if given, else `<dir>/<stem>.<ext>` if an output directory is
/// configured, else `None` for stdout.
pub fn destination(out: Option<&Path>, dir: Option<&Path>, stem: &str, ext: &str) -> Option<PathBuf> {
    out.map(Path::to_path_buf).or_else(|| dir.map(|d| d.join(format!("{stem}.{ext}"))))
}

pub fn write_artifact(dest: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match dest {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, bytes)?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut v = serde_json::to_vec_pretty(value).map_err(anyhow::Error::from)?;
    v.push(b'\n');
    Ok(v)
}
