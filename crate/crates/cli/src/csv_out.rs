use crate::error::CliError;

/// A CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

/// `printf("%.17g")`: 17 significant digits, trailing zeros removed,
/// exponent form for exponents below −4 or above 16.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Header row plus records, LF line endings.
pub fn emit_csv(header: &[String], rows: &[Vec<Cell>]) -> Result<Vec<u8>, CliError> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header)?;
    for row in rows {
        writer.write_record(row.iter().map(|c| match c {
            Cell::Int(i) => i.to_string(),
            Cell::Float(f) => format_float(*f),
        }))?;
    }
    writer.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g17() {
        assert_eq!(format_float(0.25), "0.25");
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(-2.5), "-2.5");
        assert_eq!(format_float(0.1), "0.10000000000000001");
        assert_eq!(format_float(1e-5), "1.0000000000000001e-05");
        assert_eq!(format_float(1.5e20), "1.5e+20");
        assert_eq!(format_float(123456789.0), "123456789");
        assert_eq!(format_float(0.0001), "0.0001");
        assert_eq!(format_float(1e16), "10000000000000000");
        assert_eq!(format_float(1e17), "1e+17");
    }

    #[test]
    fn floats_round_trip() {
        let mut x = 0.123_456_789_f64;
        for _ in 0..2000 {
            x = (x * 7919.0 + 0.5).fract() * 10f64.powi((x * 40.0) as i32 - 20);
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
            assert_eq!(format_float(-x).parse::<f64>().unwrap(), -x);
        }
    }

    #[test]
    fn header_only_when_empty() {
        let out = emit_csv(&["a".into(), "b".into()], &[]).unwrap();
        assert_eq!(out, b"a,b\n");
    }
}
