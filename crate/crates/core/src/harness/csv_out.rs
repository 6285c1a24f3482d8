//! CSV emission of metrics tables.

use std::io::Write;

use crate::harness::MetricsTable;

pub const CSV_HEADER: [&str; 10] = [
    "scenario",
    "engine",
    "attack_model",
    "attack_rate",
    "policy",
    "strategy",
    "iteration",
    "mean_distance_m",
    "r_md",
    "r_fa",
];

/// `printf("%.{sig}g")`: `sig` significant digits, trailing zeros removed,
/// scientific notation when the decimal exponent is below -4 or at least `sig`.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if x.is_nan() {
        return "nan".to_owned();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_owned();
    }
    let sig = sig.max(1);
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_fraction(mantissa), sign, exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_csv<W: Write>(table: &MetricsTable, out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    let s = &table.scenario;
    let rate = format_sig(s.attack.rate, 6);
    let policy = table.policy_label();
    let strategy = s.strategy.name();
    for m in &table.rows {
        w.write_record([
            s.name.as_str(),
            s.engine.name(),
            s.attack.model.name(),
            &rate,
            policy,
            &strategy,
            &m.t.to_string(),
            &format_sig(m.mean_honest_distance, 6),
            &format_sig(m.r_md, 6),
            &format_sig(m.r_fa, 6),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn to_csv_string(table: &MetricsTable) -> String {
    let mut buf = Vec::new();
    write_csv(table, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}
