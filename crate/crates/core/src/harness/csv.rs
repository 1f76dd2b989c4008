//! CSV output.

use std::io::{self, Write};

use super::TrialRecord;

pub const HEADER: &str =
    "snr_db,antennas,algorithm,trial,rate1,rate2,sum_rate,iterations,converged";

/// `x` with 10 significant digits, formatted like C's `%.10g`.
pub fn fmt_g10(x: f64) -> String {
    const PREC: i32 = 10;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    let sci = format!("{:.*e}", (PREC - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if !(-4..PREC).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (PREC - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_row<W: Write>(out: &mut W, r: &TrialRecord) -> io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{}",
        fmt_g10(r.snr_db),
        r.antennas,
        r.algorithm,
        r.trial,
        fmt_g10(r.r1),
        fmt_g10(r.r2),
        fmt_g10(r.sum_rate),
        r.iterations,
        u8::from(r.converged)
    )
}

pub fn write_csv<W: Write>(out: &mut W, records: &[TrialRecord]) -> io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for r in records {
        write_row(out, r)?;
    }
    Ok(())
}
