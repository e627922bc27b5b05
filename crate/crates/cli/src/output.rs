//! Config loading and report writing shared by all subcommands.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Args;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON file with parameters; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory for report files (created if missing).
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

impl Common {
    /// Parsed config file, or the all-empty partial config.
    pub fn load<T: DeserializeOwned + Default>(&self) -> CliResult<T> {
        let Some(path) = &self.config else {
            return Ok(T::default());
        };
        let text =
            fs::read_to_string(path).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config("config", format!("{}: {e}", path.display())))
    }

    pub fn path(&self, name: &str) -> CliResult<PathBuf> {
        fs::create_dir_all(&self.out).map_err(|e| CliError::Io(format!("{}: {e}", self.out.display())))?;
        Ok(self.out.join(name))
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        let path = self.path(name)?;
        write_json(&path, value)?;
        Ok(path)
    }

    pub fn csv(&self, name: &str) -> CliResult<csv::Writer<fs::File>> {
        Ok(csv::Writer::from_path(self.path(name)?)?)
    }
}

/// Pretty JSON with every float written to 17 significant digits.
struct SigFormatter<'a>(PrettyFormatter<'a>);

impl Formatter for SigFormatter<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(num(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// A float in `d.dddddddddddddddde±x` form; round-trips exactly.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json_string<T: Serialize>(value: &T) -> CliResult<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFormatter(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| CliError::Io(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| CliError::Io(e.to_string()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    fs::write(path, to_json_string(value)?).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Thread count: flag, then `SATOLAB_THREADS`, then the runtime default.
pub fn resolve_threads(flag: Option<usize>) -> CliResult<Option<usize>> {
    let threads = match flag {
        Some(t) => Some(t),
        None => match std::env::var("SATOLAB_THREADS") {
            Ok(s) if !s.trim().is_empty() => Some(
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::config("SATOLAB_THREADS", format!("{s:?} is not a positive integer")))?,
            ),
            _ => None,
        },
    };
    if threads == Some(0) {
        return Err(CliError::config("threads", "must be at least 1"));
    }
    Ok(threads)
}

/// `[a, b]` from a flag pair, converting degrees when asked.
pub fn interval_from_flag(v: &Option<Vec<f64>>, degrees: bool) -> Option<[f64; 2]> {
    v.as_ref().map(|v| {
        let k = if degrees { std::f64::consts::PI / 180.0 } else { 1.0 };
        [v[0] * k, v[1] * k]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_seventeen_digits() {
        let s = to_json_string(&serde_json::json!({"a": 0.1, "b": [1.0 / 3.0, -2.5e-300], "n": 7})).unwrap();
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"][0].as_f64().unwrap(), 1.0 / 3.0);
        assert_eq!(back["b"][1].as_f64().unwrap(), -2.5e-300);
        assert_eq!(back["n"].as_u64().unwrap(), 7);
    }

    #[test]
    fn non_finite_becomes_null() {
        let s = to_json_string(&vec![f64::NAN]).unwrap();
        assert!(s.contains("null"));
    }
}
