//! CSV readers and writers and atomic file output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use cubesat_preflight_core::consts::kelvin_to_celsius;
use cubesat_preflight_core::structural::ModalResult;
use cubesat_preflight_core::thermal::TemperatureHistory;
use cubesat_preflight_core::vib::{MagSpectrum, Psd, PsdProfile, TimeSeries};

use crate::report::ThermalSummary;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> IoError + '_ {
    move |source| IoError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(path: &Path, message: impl Into<String>) -> IoError {
    IoError::Format {
        path: path.display().to_string(),
        message: message.into(),
    }
}

/// Writes through a temporary sibling and renames it into place, so readers
/// never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), IoError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp: PathBuf = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io_err(path))
}

/// One row per node with the orbit's temperature range, shaped for min/max
/// bar charts across scenarios.
pub fn ranges_csv(summary: &ThermalSummary) -> String {
    let mut out = String::from("case,surface,mode,power,node,min_C,max_C,mean_C\n");
    for n in &summary.nodes {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.4},{:.4},{:.4}",
            summary.case, summary.surface, summary.mode, summary.power, n.node, n.min_c, n.max_c, n.mean_c
        );
    }
    out
}

pub fn ensure_dir(path: &Path) -> Result<(), IoError> {
    fs::create_dir_all(path).map_err(io_err(path))
}

/// Long-format temperature history, one row per node and instant.
pub fn history_csv(histories: &[TemperatureHistory]) -> String {
    let mut s =
        String::from("time_s,node,temp_C,q_solar_W,q_ir_W,q_albedo_W,q_internal_W,q_space_W,p_elec_W,in_eclipse\n");
    for h in histories {
        for x in &h.samples {
            let f = &x.flux;
            let _ = writeln!(
                s,
                "{:.3},{},{:.4},{:.5},{:.5},{:.5},{:.5},{:.5},{:.5},{}",
                x.time,
                h.node,
                kelvin_to_celsius(x.temperature),
                f.q_solar,
                f.q_ir,
                f.q_albedo,
                f.q_internal,
                f.q_space,
                f.p_electric,
                u8::from(x.in_eclipse)
            );
        }
    }
    s
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

/// Breakpoint table with columns `freq_hz,psd_g2hz`.
pub fn read_profile(path: &Path) -> Result<PsdProfile, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_profile(&text).map_err(|m| format_err(path, m))
}

pub fn parse_profile(text: &str) -> Result<PsdProfile, String> {
    let mut rdr = csv_reader(text);
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    if headers.len() != 2 || &headers[0] != "freq_hz" || &headers[1] != "psd_g2hz" {
        return Err("expected header `freq_hz,psd_g2hz`".into());
    }
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let num = |k: usize| {
            rec[k]
                .parse::<f64>()
                .map_err(|e| format!("row {}: `{}`: {e}", i + 2, &rec[k]))
        };
        points.push((num(0)?, num(1)?));
    }
    PsdProfile::new(points).map_err(|e| e.to_string())
}

/// Acceleration channels. Either the first column is `time_s` on a uniform
/// grid, or the first line is `sample_rate_hz,<value>` followed by a header
/// of channel names.
pub fn read_time_series(path: &Path) -> Result<Vec<TimeSeries>, IoError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_time_series(&text).map_err(|m| format_err(path, m))
}

pub fn parse_time_series(text: &str) -> Result<Vec<TimeSeries>, String> {
    let mut body = text;
    let mut declared = None;
    if let Some(first) = text.lines().next() {
        if let Some(rest) = first.trim().strip_prefix("sample_rate_hz,") {
            let fs: f64 = rest.trim().parse().map_err(|e| format!("sample_rate_hz: {e}"))?;
            declared = Some(fs);
            body = text[first.len()..].trim_start_matches(['\r', '\n']);
        }
    }
    let mut rdr = csv_reader(body);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| e.to_string())?
        .iter()
        .map(str::to_owned)
        .collect();
    let timed = headers.first().is_some_and(|h| h == "time_s");
    if !timed && declared.is_none() {
        return Err("need a `time_s` column or a leading `sample_rate_hz,<value>` line".into());
    }
    let first_channel = usize::from(timed);
    if headers.len() <= first_channel {
        return Err("no channel columns".into());
    }
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() != headers.len() {
            return Err(format!("row {}: expected {} fields", i + 2, headers.len()));
        }
        for (c, v) in rec.iter().enumerate() {
            columns[c].push(v.parse().map_err(|e| format!("row {}: `{v}`: {e}", i + 2))?);
        }
    }
    let fs = match declared {
        Some(fs) => fs,
        None => {
            let t = &columns[0];
            if t.len() < 2 {
                return Err("need at least two samples".into());
            }
            let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
            let uniform = t.windows(2).all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-6 * dt.abs());
            if !(dt > 0.0) || !uniform {
                return Err("time_s must increase on a uniform grid".into());
            }
            1.0 / dt
        }
    };
    headers
        .iter()
        .zip(columns)
        .skip(first_channel)
        .map(|(name, samples)| TimeSeries::new(name.clone(), fs, samples).map_err(|e| e.to_string()))
        .collect()
}

/// One frequency column, then one density column per channel.
pub fn psd_csv(psds: &[Psd]) -> String {
    let mut s = String::from("freq_hz");
    for p in psds {
        let _ = write!(s, ",{}", p.channel);
    }
    s.push('\n');
    if let Some(first) = psds.first() {
        for (k, f) in first.frequencies.iter().enumerate() {
            let _ = write!(s, "{f:.6}");
            for p in psds {
                let _ = write!(s, ",{:.6e}", p.density[k]);
            }
            s.push('\n');
        }
    }
    s
}

/// Magnification per channel; masked bins are left empty.
pub fn mag_csv(mags: &[MagSpectrum]) -> String {
    let mut s = String::from("freq_hz");
    for m in mags {
        let _ = write!(s, ",{}", m.channel);
    }
    s.push('\n');
    if let Some(first) = mags.first() {
        for (k, f) in first.frequencies.iter().enumerate() {
            let _ = write!(s, "{f:.6}");
            for m in mags {
                match m.magnification[k] {
                    Some(v) => {
                        let _ = write!(s, ",{v:.6}");
                    }
                    None => s.push(','),
                }
            }
            s.push('\n');
        }
    }
    s
}

pub fn mode_shapes_csv(modal: &ModalResult) -> String {
    let mut s = String::from("x_m");
    for (i, f) in modal.frequencies.iter().enumerate() {
        let _ = write!(s, ",mode{}_{:.3}Hz", i + 1, f);
    }
    s.push('\n');
    for (k, x) in modal.positions.iter().enumerate() {
        let _ = write!(s, "{x:.6}");
        for shape in &modal.shapes {
            let _ = write!(s, ",{:.6}", shape[k]);
        }
        s.push('\n');
    }
    s
}
