//! Deterministic CSV serialization: 12 significant digits, `%g`-style,
//! locale-independent, rows sorted before emission.

use std::io::{self, Write};

use crate::config::AlphaSpec;

pub const CSV_HEADER: &str = "f,T,alpha,omega,p,tau,L,R,negativity,mixedness,purity";

/// Formats with 12 significant digits the way C's `%.12g` would: fixed
/// notation for exponents in [-4, 11], scientific otherwise, trailing zeros
/// trimmed. Pure function of the bits, so output is byte-stable across runs
/// and thread counts.
pub fn fmt_sig12(x: f64) -> String {
    const SIG: usize = 12;
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIG - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponential format");
    let exponent: i32 = exponent.parse().expect("numeric exponent");
    if exponent < -4 || exponent >= SIG as i32 {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exponent}")
    } else {
        let decimals = (SIG as i32 - 1 - exponent).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        if fixed.contains('.') {
            fixed
                .trim_end_matches('0')
                .trim_end_matches('.')
                .to_string()
        } else {
            fixed
        }
    }
}

/// One sweep record; `alpha` keeps its Bunch-Davies sentinel through to
/// serialization.
#[derive(Clone, Debug)]
pub struct ResultRow {
    pub f: f64,
    pub temperature: f64,
    pub alpha: AlphaSpec,
    pub omega: f64,
    pub p: f64,
    pub tau: f64,
    pub l: f64,
    pub r: f64,
    pub negativity: f64,
    pub mixedness: f64,
    pub purity: f64,
}

impl ResultRow {
    pub fn csv_line(&self) -> String {
        [
            fmt_sig12(self.f),
            fmt_sig12(self.temperature),
            self.alpha.csv_label(),
            fmt_sig12(self.omega),
            fmt_sig12(self.p),
            fmt_sig12(self.tau),
            fmt_sig12(self.l),
            fmt_sig12(self.r),
            fmt_sig12(self.negativity),
            fmt_sig12(self.mixedness),
            fmt_sig12(self.purity),
        ]
        .join(",")
    }
}

/// Lexicographic order on (f, T, alpha, omega, p, tau); Bunch-Davies sorts
/// as alpha = -infinity. Workers may produce rows in any order, this runs
/// before every emission.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        a.f.total_cmp(&b.f)
            .then(a.temperature.total_cmp(&b.temperature))
            .then(a.alpha.sort_key().total_cmp(&b.alpha.sort_key()))
            .then(a.omega.total_cmp(&b.omega))
            .then(a.p.total_cmp(&b.p))
            .then(a.tau.total_cmp(&b.tau))
    });
}

pub fn emit_csv(rows: &[ResultRow], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}
