use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use skyport_core::queue::DemandProfile;
use skyport_core::{HubSolution, ZoneId};

/// Writes via a sibling temp file and rename so readers never see partial output.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    fs::write(&tmp, contents).with_context(|| format!("writing {}", path.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

pub fn hub_list(hubs: &[ZoneId]) -> String {
    if hubs.is_empty() {
        "-".into()
    } else {
        hubs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

pub fn pct_decrease(objective: f64, baseline: Option<f64>, p: usize) -> String {
    match baseline {
        Some(b) if p > 0 && b > 0.0 => format!("{:.2}", 100.0 * (b - objective) / b),
        _ => "-".into(),
    }
}

pub const TABLE_HEADER: &str = "p\tobjective(M)\t%decrease\titerations\ttime(s)\tdirect\thubs";

pub fn table_row(sol: &HubSolution, baseline: Option<f64>) -> String {
    let p = sol.hubs.len();
    let dash = |s: String| if p == 0 { "-".to_string() } else { s };
    format!(
        "{}\t{:.2}\t{}\t{}\t{}\t{}\t{}",
        p,
        sol.objective_millions(),
        pct_decrease(sol.objective, baseline, p),
        dash(sol.meta.iterations.to_string()),
        dash(format!("{:.2}", sol.meta.wall_time_s)),
        sol.direct_count,
        hub_list(&sol.hubs)
    )
}

/// Columns: hub, hour_0 .. hour_23, peak.
pub fn profiles_csv(profiles: &[DemandProfile]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["hub".to_string()];
    header.extend((0..24).map(|h| format!("hour_{h}")));
    header.push("peak".into());
    w.write_record(&header)?;
    for p in profiles {
        let mut row = vec![p.hub.to_string()];
        row.extend(p.hourly.iter().map(|v| format!("{v:.4}")));
        row.push(format!("{:.4}", p.peak));
        w.write_record(&row)?;
    }
    Ok(w.into_inner()?)
}
