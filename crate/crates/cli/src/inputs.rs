//! Parsing of gate names, complex literals, matrix files and lambda ranges.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use qnogo_core::algebra::{is_unitary, DenseOperator};
use qnogo_core::fidelity::lambda_range;
use qnogo_core::gates::{
    cnot_computational, hadamard, hadamard_equatorial, hadamard_polar, unequal_gate, UnequalAmplitudes,
};
use qnogo_core::verifier::{TargetKind, TargetTransform};

use crate::CliError;

/// Matrices read from files must be unitary to this tolerance.
const MATRIX_UNITARY_TOL: f64 = 1e-6;

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("invalid complex number '{text}'");
    if s.is_empty() {
        return Err(bad());
    }
    // Split at a sign that is not the leading one and not an exponent sign.
    let bytes = s.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let part = |p: &str| -> Result<Complex64, String> {
        if let Some(body) = p.strip_suffix('i') {
            let v = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                _ => body.parse::<f64>().map_err(|_| bad())?,
            };
            Ok(Complex64::new(0.0, v))
        } else {
            Ok(Complex64::new(p.parse::<f64>().map_err(|_| bad())?, 0.0))
        }
    };
    let z = match split {
        Some(i) => {
            let (re, im) = (part(&s[..i])?, part(&s[i..])?);
            if re.im != 0.0 || im.re != 0.0 || !s.ends_with('i') {
                return Err(bad());
            }
            re + im
        }
        None => part(&s)?,
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(bad())
    }
}

/// `H`, `HP`, `HE`, `CNOT`, `UG(a,b)` or a matrix file.
pub fn parse_gate(spec: &str) -> Result<(String, DenseOperator), CliError> {
    let upper = spec.trim().to_ascii_uppercase();
    let named = match upper.as_str() {
        "H" => Some(hadamard()),
        "HP" => Some(hadamard_polar()),
        "HE" => Some(hadamard_equatorial()),
        "CNOT" => Some(cnot_computational()),
        _ => None,
    };
    if let Some(op) = named {
        return Ok((upper, op));
    }
    if upper.starts_with("UG(") && upper.ends_with(')') {
        // Slice the original text: uppercasing would turn `i` into `I`.
        let trimmed = spec.trim();
        let (a, b) = trimmed[3..trimmed.len() - 1]
            .split_once(',')
            .ok_or_else(|| CliError::Usage(format!("expected UG(a,b), found '{spec}'")))?;
        let amps = amplitudes(a, b)?;
        let op = unequal_gate(amps).map_err(|e| CliError::Usage(e.to_string()))?;
        return Ok((format!("UG({},{})", a.trim(), b.trim()), op));
    }
    let path = Path::new(spec);
    if path.exists() {
        return Ok((spec.to_string(), read_matrix(path)?));
    }
    Err(CliError::Usage(format!(
        "unknown gate '{spec}' (expected H, HP, HE, CNOT, UG(a,b) or a matrix file)"
    )))
}

pub fn amplitudes(a: &str, b: &str) -> Result<UnequalAmplitudes, CliError> {
    let a = parse_complex(a).map_err(CliError::Usage)?;
    let b = parse_complex(b).map_err(CliError::Usage)?;
    UnequalAmplitudes::new(a, b).map_err(|e| CliError::Usage(e.to_string()))
}

/// Gate targets by name; `unequal` needs its amplitudes.
pub fn parse_target(name: &str, a: Option<&str>, b: Option<&str>) -> Result<TargetTransform, CliError> {
    let kind = match name.trim().to_ascii_lowercase().as_str() {
        "hadamard9" => TargetKind::Hadamard9,
        "hadamard10" => TargetKind::Hadamard10,
        "cnot23" | "cnot" => TargetKind::Cnot23,
        "unequal" => match (a, b) {
            (Some(a), Some(b)) => TargetKind::Unequal(amplitudes(a, b)?),
            _ => return Err(CliError::Usage("target unequal needs --a and --b".into())),
        },
        other => {
            return Err(CliError::Usage(format!(
                "unknown target '{other}' (expected hadamard9, hadamard10, unequal or cnot23)"
            )))
        }
    };
    if !matches!(kind, TargetKind::Unequal(_)) && (a.is_some() || b.is_some()) {
        return Err(CliError::Usage("--a and --b only apply to the unequal target".into()));
    }
    Ok(TargetTransform::new(kind))
}

/// Two or four lines, each a row of whitespace-separated `re,im` pairs.
/// Blank lines and lines starting with `#` are ignored.
pub fn read_matrix(path: &Path) -> Result<DenseOperator, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_matrix(text: &str) -> Result<DenseOperator, String> {
    let mut rows = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|pair| {
                let (re, im) = pair
                    .split_once(',')
                    .ok_or_else(|| format!("line {}: expected re,im but found '{pair}'", n + 1))?;
                let re: f64 = re.parse().map_err(|_| format!("line {}: bad real part '{re}'", n + 1))?;
                let im: f64 = im.parse().map_err(|_| format!("line {}: bad imaginary part '{im}'", n + 1))?;
                Ok(Complex64::new(re, im))
            })
            .collect::<Result<Vec<_>, String>>()?;
        rows.push(row);
    }
    if rows.len() != 2 && rows.len() != 4 {
        return Err(format!("expected 2 or 4 rows, found {}", rows.len()));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != rows.len()) {
        return Err(format!("expected {} entries per row, found {}", rows.len(), r.len()));
    }
    let op = DenseOperator::from_rows(&rows).map_err(|e| e.to_string())?;
    if !is_unitary(&op, MATRIX_UNITARY_TOL) {
        return Err(format!("matrix is not unitary (residual {:.3e})", op.unitarity_residual()));
    }
    Ok(op)
}

/// A single value or `start:end:step`.
pub fn parse_lambdas(spec: &str) -> Result<Vec<f64>, CliError> {
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("invalid lambda '{spec}'")))
    };
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [v] => vec![num(v)?],
        [a, b, step] => lambda_range(num(a)?, num(b)?, num(step)?).map_err(|e| CliError::Usage(e.to_string()))?,
        _ => return Err(CliError::Usage(format!("invalid lambda '{spec}' (expected x or a:b:step)"))),
    };
    if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(CliError::Usage(format!("lambda {v} outside [0, 1]")));
    }
    Ok(values)
}
