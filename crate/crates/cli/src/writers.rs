//! Bit-exact result serialization. Every numeric CSV field is printed with
//! `{:.16e}` — 17 significant digits, enough to round-trip any f64 — so two
//! runs of the same binary on the same config produce byte-identical files
//! no matter how many worker threads carried the sweep. Each file is built
//! in memory and written by a single `fs::write` call.

use std::path::Path;

use pme_core::trace::InterfaceSample;

use crate::error::{CliError, Result};

/// 17-significant-digit decimal for a finite float; non-finite values print
/// as lowercase `nan` / `inf` / `-inf` so the CSVs stay language-neutral.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_string(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    std::fs::write(path, text).map_err(CliError::io(path))
}

/// `t,a,b` rows of an interface trace.
pub fn interface_csv(samples: &[InterfaceSample]) -> String {
    let mut text = String::with_capacity(64 * (samples.len() + 1));
    text.push_str("t,a,b\n");
    for s in samples {
        text.push_str(&g17(s.t));
        text.push(',');
        text.push_str(&g17(s.a));
        text.push(',');
        text.push_str(&g17(s.b));
        text.push('\n');
    }
    text
}

/// `r,U,V` rows of one radial profile (density and pressure on the grid).
pub fn profile_csv(points: impl IntoIterator<Item = (f64, f64, f64)>) -> String {
    let mut text = String::from("r,U,V\n");
    for (r, u, v) in points {
        text.push_str(&g17(r));
        text.push(',');
        text.push_str(&g17(u));
        text.push(',');
        text.push_str(&g17(v));
        text.push('\n');
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_g17_has_seventeen_significant_digits_and_round_trips() {
        let cases = [1.0, -0.1, std::f64::consts::PI, 2.0f64.powi(-53), 1.0 / 3.0];
        for &x in &cases {
            let s = g17(x);
            let mantissa: String =
                s.chars().take_while(|&c| c != 'e').filter(|c| c.is_ascii_digit()).collect();
            assert_eq!(mantissa.len(), 17, "{s} must carry 17 digits");
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s} must round-trip bit-exactly");
        }
    }

    #[test]
    fn test_g17_non_finite_spellings() {
        assert_eq!(g17(f64::NAN), "nan");
        assert_eq!(g17(f64::INFINITY), "inf");
        assert_eq!(g17(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn test_interface_csv_schema() {
        let rows = vec![InterfaceSample { t: -0.5, a: 0.25, b: 1.75 }];
        let text = interface_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,a,b"));
        let row = lines.next().unwrap();
        assert_eq!(row.split(',').count(), 3);
        assert!(row.starts_with("-5.0000000000000000e-1"), "row = {row}");
    }
}
