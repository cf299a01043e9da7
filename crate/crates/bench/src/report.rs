use std::io::Write;

use num_bigint::BigUint;

use crate::experiments::{breakeven, EpsilonRow, SizeRow, TimingRow};
use crate::BenchError;

pub const SIZE_HEADER: [&str; 4] = ["l", "g_naive", "g_conj", "g_full"];
pub const EPSILON_HEADER: [&str; 6] = ["epsilon", "h_naive", "h_simpl", "g_naive", "g_conj", "g_full"];
pub const TIMING_HEADER: [&str; 8] = [
    "l",
    "t_build_naive",
    "t_build_conj",
    "t_build_full",
    "t_choose_naive",
    "t_choose_conj",
    "t_choose_full",
    "breakeven_n",
];

/// Written in place of a value whose computation ran out of budget.
pub const TIMEOUT: &str = "timeout";

/// Exact mean of naturals: an integer when the division is exact, otherwise
/// rounded to three decimals.
pub fn mean_natural<'a>(values: impl IntoIterator<Item = &'a BigUint>) -> String {
    let mut sum = BigUint::from(0u32);
    let mut n = 0u32;
    for v in values {
        sum += v;
        n += 1;
    }
    assert!(n > 0, "mean of no values");
    let n = BigUint::from(n);
    if (&sum % &n) == BigUint::from(0u32) {
        return (sum / n).to_string();
    }
    // round half up at the third decimal
    let scaled = (sum * 2000u32 + &n) / (n * 2u32);
    let thousand = BigUint::from(1000u32);
    format!("{}.{:03}", &scaled / &thousand, (&scaled % &thousand).to_string().parse::<u32>().expect("below 1000"))
}

/// Mean of optional naturals, or the timeout marker if any is missing.
pub fn mean_optional(values: impl IntoIterator<Item = Option<usize>>) -> String {
    let collected: Option<Vec<BigUint>> = values.into_iter().map(|v| v.map(BigUint::from)).collect();
    match collected {
        Some(v) => mean_natural(&v),
        None => TIMEOUT.to_string(),
    }
}

fn mean_seconds(values: impl IntoIterator<Item = Option<f64>>) -> Option<f64> {
    let collected: Option<Vec<f64>> = values.into_iter().collect();
    collected.filter(|v| !v.is_empty()).map(|v| v.iter().sum::<f64>() / v.len() as f64)
}

fn seconds(v: Option<f64>) -> String {
    v.map_or_else(|| TIMEOUT.to_string(), |s| format!("{s:.6}"))
}

pub fn size_records(rows: &[SizeRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.l.to_string(),
                mean_natural(r.samples.iter().map(|s| &s.g_naive)),
                mean_natural(r.samples.iter().map(|s| &s.g_conj)),
                mean_optional(r.samples.iter().map(|s| s.g_full)),
            ]
        })
        .collect()
}

pub fn epsilon_records(rows: &[EpsilonRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let h_naive: Vec<BigUint> = r.samples.iter().map(|s| BigUint::from(s.h_naive)).collect();
            let h_simpl: Vec<BigUint> = r.samples.iter().map(|s| BigUint::from(s.h_simpl)).collect();
            vec![
                format!("{:.2}", r.epsilon),
                mean_natural(&h_naive),
                mean_natural(&h_simpl),
                mean_natural(r.samples.iter().map(|s| &s.g_naive)),
                mean_natural(r.samples.iter().map(|s| &s.g_conj)),
                mean_optional(r.samples.iter().map(|s| s.g_full)),
            ]
        })
        .collect()
}

pub fn timing_records(rows: &[TimingRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            let build: Vec<Option<f64>> = (0..3).map(|i| mean_seconds(r.samples.iter().map(|s| s.build[i]))).collect();
            let choose: Vec<Option<f64>> = (0..3).map(|i| mean_seconds(r.samples.iter().map(|s| s.choose[i]))).collect();
            let n = match (build[1], build[2], choose[1], choose[2]) {
                (Some(bc), Some(bf), Some(cc), Some(cf)) => breakeven(bc, bf, cc, cf).map(|n| format!("{n:.3}")).unwrap_or_default(),
                _ => String::new(),
            };
            let mut rec = vec![r.l.to_string()];
            rec.extend(build.into_iter().map(seconds));
            rec.extend(choose.into_iter().map(seconds));
            rec.push(n);
            rec
        })
        .collect()
}

/// Writes a header row followed by the records.
pub fn write_csv<W: Write>(out: W, header: &[&str], records: &[Vec<String>]) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in records {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}
