use std::path::{Path, PathBuf};

use flexmc_core::harness::MetricsRow;
use flexmc_core::{Error, Result};
use plotters::prelude::*;

const COLORS: [RGBColor; 6] = [BLUE, RED, GREEN, MAGENTA, CYAN, BLACK];

fn plot_err<E: std::fmt::Display>(e: E) -> Error {
    Error::Io(std::io::Error::other(e.to_string()))
}

/// Curves per variant, in first-seen order.
fn curves(rows: &[MetricsRow], metric: impl Fn(&MetricsRow) -> f64) -> Vec<(String, Vec<(f64, f64)>)> {
    let mut out: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for r in rows {
        let y = metric(r);
        if !y.is_finite() || !r.snr_db.is_finite() {
            continue;
        }
        match out.iter_mut().find(|(v, _)| *v == r.variant) {
            Some((_, pts)) => pts.push((r.snr_db, y)),
            None => out.push((r.variant.clone(), vec![(r.snr_db, y)])),
        }
    }
    out
}

fn draw(path: &Path, title: &str, ylabel: &str, series: &[(String, Vec<(f64, f64)>)]) -> Result<()> {
    let pts = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        return Err(Error::Degenerate(format!("nothing to plot for {title}")));
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    let pad = ((y1 - y0) * 0.05).max(0.5);
    let root = SVGBackend::new(path, (720, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(plot_err)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 20))
        .margin(12)
        .x_label_area_size(36)
        .y_label_area_size(52)
        .build_cartesian_2d(x0..x1, (y0 - pad)..(y1 + pad))
        .map_err(plot_err)?;
    chart.configure_mesh().x_desc("SNR (dB)").y_desc(ylabel).draw().map_err(plot_err)?;
    for (i, (name, p)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        chart
            .draw_series(LineSeries::new(p.iter().copied(), color.stroke_width(2)))
            .map_err(plot_err)?
            .label(name.as_str())
            .legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color));
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(plot_err)?;
    root.present().map_err(plot_err)?;
    Ok(())
}

/// Writes `<stem>_nmse.svg` and `<stem>_ber.svg` beside `csv`.
pub fn write_plots(rows: &[MetricsRow], csv: &Path) -> Result<Vec<PathBuf>> {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("campaign");
    let dir = csv.parent().unwrap_or(Path::new("."));
    let scheme = rows.first().map_or("", |r| r.scheme.as_str());
    let nmse_path = dir.join(format!("{stem}_nmse.svg"));
    let ber_path = dir.join(format!("{stem}_ber.svg"));
    draw(&nmse_path, &format!("{scheme} channel NMSE"), "NMSE (dB)", &curves(rows, |r| r.nmse_db))?;
    draw(&ber_path, &format!("{scheme} BER"), "log10 BER", &curves(rows, |r| if r.ber > 0.0 { r.ber.log10() } else { f64::NAN }))?;
    Ok(vec![nmse_path, ber_path])
}
