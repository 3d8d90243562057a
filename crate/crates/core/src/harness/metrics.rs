use std::io::Write;

use crate::receivers::FrameFormat;
use crate::{CMat, Error, Result};

/// `‖H − Ĥ‖²_F / ‖H‖²_F`.
pub fn nmse(h: &CMat, h_hat: &CMat) -> Result<f64> {
    if h.shape() != h_hat.shape() {
        return Err(Error::Dimension(format!("H {:?} vs estimate {:?}", h.shape(), h_hat.shape())));
    }
    let p = h.norm_squared();
    if p == 0.0 {
        return Err(Error::ZeroNorm);
    }
    Ok((h - h_hat).norm_squared() / p)
}

/// Gray-labelled bit error rate over the data columns.
pub fn ber(frame: &FrameFormat, d: &[CMat], d_hat: &[CMat]) -> Result<f64> {
    if d.len() != d_hat.len() || d.iter().zip(d_hat).any(|(a, b)| a.shape() != b.shape()) {
        return Err(Error::Dimension("symbol frames differ in shape".into()));
    }
    let (errors, bits) = frame.bit_errors(d, d_hat);
    if bits == 0 {
        return Err(Error::Degenerate("no data bits in frame".into()));
    }
    Ok(errors as f64 / bits as f64)
}

pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Averages for one `(variant, SNR)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub scheme: String,
    pub variant: String,
    pub snr_db: f64,
    pub nmse: f64,
    pub nmse_db: f64,
    pub ber: f64,
    pub avg_iters: f64,
    pub trials: usize,
    pub seed: u64,
}

pub const CSV_HEADER: [&str; 8] = ["scheme", "variant", "snr_db", "nmse_db", "ber", "avg_iters", "trials", "seed"];

impl MetricsRow {
    fn record(&self) -> [String; 8] {
        [
            self.scheme.clone(),
            self.variant.clone(),
            format!("{}", self.snr_db),
            format!("{:.6}", self.nmse_db),
            format!("{:.6e}", self.ber),
            format!("{:.4}", self.avg_iters),
            self.trials.to_string(),
            self.seed.to_string(),
        ]
    }
}

pub fn write_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record(r.record()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(rows: &[MetricsRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Degenerate(e.to_string()))
}

/// Reads rows back from CSV text; `nmse` is recomputed from `nmse_db`.
pub fn read_csv(text: &str) -> Result<Vec<MetricsRow>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_err)?;
            let bad = |what: &str| Error::ConfigLine { line: i + 2, msg: format!("bad {what}") };
            let num = |k: usize, what: &str| rec[k].parse::<f64>().map_err(|_| bad(what));
            let nmse_db = num(3, "nmse_db")?;
            Ok(MetricsRow {
                scheme: rec[0].to_string(),
                variant: rec[1].to_string(),
                snr_db: num(2, "snr_db")?,
                nmse: 10f64.powf(nmse_db / 10.0),
                nmse_db,
                ber: num(4, "ber")?,
                avg_iters: num(5, "avg_iters")?,
                trials: rec[6].parse().map_err(|_| bad("trials"))?,
                seed: rec[7].parse().map_err(|_| bad("seed"))?,
            })
        })
        .collect()
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}
