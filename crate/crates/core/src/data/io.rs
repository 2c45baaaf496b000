//! On-disk formats.
//!
//! A recording is one directory per night: `meta.json`, `upper.csv`,
//! `lower.csv` (header `t,s0,...,s{N-1}`, timestamps at 3 decimal places,
//! row-major counts) and `log.csv` (`start,end,label` rows plus one
//! `biocal,<t>` row). Labeled datasets are `dataset.csv`
//! (`patient,t,label,s0..s{N-1}`) with a `dataset.json` geometry sidecar.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    check_monotone, AnnotationLog, DaqStream, LabeledDataset, LabeledSample, NightRecording,
    PoseInterval, PoseLabel, PressureFrame, RawFrame, Section, SensorGeometry,
};
use crate::error::{Error, Result};

pub const RECORDING_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct RecordingMeta {
    format_version: u32,
    patient_id: String,
    geometry: SensorGeometry,
    upper_rate_hz: f64,
    lower_rate_hz: f64,
}

fn expected_header(prefix: &str, n: usize) -> String {
    let mut h = String::from(prefix);
    for i in 0..n {
        let _ = write!(h, ",s{i}");
    }
    h
}

fn fmt_ts(t: f64) -> String {
    format!("{t:.3}")
}

/// Writes a night recording as a directory (`meta.json`, `upper.csv`,
/// `lower.csv`, `log.csv`). Timestamps carry 3 decimal places.
pub fn write_recording(rec: &NightRecording, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let meta = RecordingMeta {
        format_version: RECORDING_FORMAT_VERSION,
        patient_id: rec.patient_id.clone(),
        geometry: rec.geometry,
        upper_rate_hz: rec.upper.sample_rate_hz,
        lower_rate_hz: rec.lower.sample_rate_hz,
    };
    let meta_path = dir.join("meta.json");
    let body = serde_json::to_string_pretty(&meta).map_err(|e| Error::json(&meta_path, e))?;
    fs::write(&meta_path, body).map_err(|e| Error::io(&meta_path, e))?;

    for (stream, name) in [(&rec.upper, "upper.csv"), (&rec.lower, "lower.csv")] {
        let path = dir.join(name);
        let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut w = BufWriter::new(file);
        let n = rec.geometry.section().sensels();
        writeln!(w, "{}", expected_header("t", n)).map_err(|e| Error::io(&path, e))?;
        for frame in &stream.frames {
            let mut line = fmt_ts(frame.timestamp);
            for v in &frame.values {
                let _ = write!(line, ",{v}");
            }
            writeln!(w, "{line}").map_err(|e| Error::io(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;
    }

    let log_path = dir.join("log.csv");
    let file = fs::File::create(&log_path).map_err(|e| Error::io(&log_path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "start,end,label").map_err(|e| Error::io(&log_path, e))?;
    writeln!(w, "biocal,{}", fmt_ts(rec.log.biocal_time_s)).map_err(|e| Error::io(&log_path, e))?;
    for iv in &rec.log.intervals {
        writeln!(
            w,
            "{},{},{}",
            fmt_ts(iv.start_s),
            fmt_ts(iv.end_s),
            iv.label.name()
        )
        .map_err(|e| Error::io(&log_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&log_path, e))?;
    Ok(())
}

fn parse_f64(path: &Path, line: usize, s: &str) -> Result<f64> {
    s.parse::<f64>().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        line,
        message: format!("invalid number {s:?}"),
    })
}

fn read_stream_csv(path: &Path, section: Section, rate: f64, sensels: usize) -> Result<DaqStream> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();

    let header = match lines.next() {
        Some((_, Ok(h))) => h,
        Some((_, Err(e))) => return Err(Error::io(path, e)),
        None => String::new(),
    };
    let expected = expected_header("t", sensels);
    if header != expected {
        return Err(Error::MalformedHeader {
            path: path.to_path_buf(),
            expected,
            got: header,
        });
    }

    let mut frames = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let mut fields = line.split(',');
        let t = parse_f64(path, lineno, fields.next().unwrap_or(""))?;
        let mut values = Vec::with_capacity(sensels);
        for field in fields {
            let v = field.parse::<i32>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: lineno,
                message: format!("invalid count {field:?}"),
            })?;
            values.push(v);
        }
        if values.len() != sensels {
            return Err(Error::ValueCount {
                path: path.to_path_buf(),
                line: lineno,
                expected: sensels,
                got: values.len(),
            });
        }
        frames.push(RawFrame::new(t, values));
    }
    check_monotone(frames.iter().map(|f| f.timestamp))?;
    DaqStream::new(section, rate, frames)
}

fn read_log_csv(path: &Path) -> Result<AnnotationLog> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let header = match lines.next() {
        Some((_, Ok(h))) => h,
        Some((_, Err(e))) => return Err(Error::io(path, e)),
        None => String::new(),
    };
    if header != "start,end,label" {
        return Err(Error::MalformedHeader {
            path: path.to_path_buf(),
            expected: "start,end,label".into(),
            got: header,
        });
    }
    let mut intervals = Vec::new();
    let mut biocal: Option<f64> = None;
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.first() == Some(&"biocal") {
            if fields.len() != 2 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: lineno,
                    message: "biocal row must be biocal,<t>".into(),
                });
            }
            biocal = Some(parse_f64(path, lineno, fields[1])?);
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::ValueCount {
                path: path.to_path_buf(),
                line: lineno,
                expected: 3,
                got: fields.len(),
            });
        }
        let label = PoseLabel::parse(fields[2]).ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            message: format!("unknown label {:?}", fields[2]),
        })?;
        intervals.push(PoseInterval {
            start_s: parse_f64(path, lineno, fields[0])?,
            end_s: parse_f64(path, lineno, fields[1])?,
            label,
        });
    }
    let biocal = biocal.ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: "missing biocal,<t> row".into(),
    })?;
    AnnotationLog::new(intervals, biocal)
}

/// Reads a recording directory written by [`write_recording`].
pub fn read_recording(dir: &Path) -> Result<NightRecording> {
    let meta_path = dir.join("meta.json");
    let body = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta: RecordingMeta =
        serde_json::from_str(&body).map_err(|e| Error::json(&meta_path, e))?;
    if meta.format_version != RECORDING_FORMAT_VERSION {
        return Err(Error::Checkpoint(format!(
            "{}: unsupported recording format version {}",
            meta_path.display(),
            meta.format_version
        )));
    }
    meta.geometry.validate()?;
    let sensels = meta.geometry.section().sensels();
    let upper = read_stream_csv(
        &dir.join("upper.csv"),
        Section::Upper,
        meta.upper_rate_hz,
        sensels,
    )?;
    let lower = read_stream_csv(
        &dir.join("lower.csv"),
        Section::Lower,
        meta.lower_rate_hz,
        sensels,
    )?;
    let log = read_log_csv(&dir.join("log.csv"))?;
    NightRecording::new(meta.patient_id, meta.geometry, upper, lower, log)
}

#[derive(Debug, Serialize, Deserialize)]
struct DatasetSidecar {
    format_version: u32,
    geometry: SensorGeometry,
}

/// Writes a labeled dataset as `dataset.csv` plus a `dataset.json` sidecar.
/// Values use the shortest round-trip float representation.
pub fn write_dataset(ds: &LabeledDataset, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let sidecar = DatasetSidecar {
        format_version: RECORDING_FORMAT_VERSION,
        geometry: ds.geometry,
    };
    let sidecar_path = dir.join("dataset.json");
    let body =
        serde_json::to_string_pretty(&sidecar).map_err(|e| Error::json(&sidecar_path, e))?;
    fs::write(&sidecar_path, body).map_err(|e| Error::io(&sidecar_path, e))?;

    let path = dir.join("dataset.csv");
    let file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "{}", expected_header("patient,t,label", ds.geometry.sensels()))
        .map_err(|e| Error::io(&path, e))?;
    for s in &ds.samples {
        let mut line = format!("{},{},{}", s.patient_id, s.frame.timestamp, s.label.name());
        for v in &s.frame.values {
            let _ = write!(line, ",{v}");
        }
        writeln!(w, "{line}").map_err(|e| Error::io(&path, e))?;
    }
    w.flush().map_err(|e| Error::io(&path, e))?;
    Ok(())
}

/// Reads a dataset directory written by [`write_dataset`].
pub fn read_dataset(dir: &Path) -> Result<LabeledDataset> {
    let sidecar_path = dir.join("dataset.json");
    let body = fs::read_to_string(&sidecar_path).map_err(|e| Error::io(&sidecar_path, e))?;
    let sidecar: DatasetSidecar =
        serde_json::from_str(&body).map_err(|e| Error::json(&sidecar_path, e))?;
    sidecar.geometry.validate()?;
    let sensels = sidecar.geometry.sensels();

    let path = dir.join("dataset.csv");
    let file = fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let header = match lines.next() {
        Some((_, Ok(h))) => h,
        Some((_, Err(e))) => return Err(Error::io(&path, e)),
        None => String::new(),
    };
    let expected = expected_header("patient,t,label", sensels);
    if header != expected {
        return Err(Error::MalformedHeader {
            path,
            expected,
            got: header,
        });
    }
    let mut samples = Vec::new();
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::io(&path, e))?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != sensels + 3 {
            return Err(Error::ValueCount {
                path: path.clone(),
                line: lineno,
                expected: sensels + 3,
                got: fields.len(),
            });
        }
        let label = PoseLabel::parse(fields[2]).ok_or_else(|| Error::Parse {
            path: path.clone(),
            line: lineno,
            message: format!("unknown label {:?}", fields[2]),
        })?;
        let t = parse_f64(&path, lineno, fields[1])?;
        let mut values = Vec::with_capacity(sensels);
        for field in &fields[3..] {
            values.push(parse_f64(&path, lineno, field)?);
        }
        samples.push(LabeledSample {
            frame: PressureFrame::new(t, values),
            label,
            patient_id: fields[0].to_string(),
        });
    }
    LabeledDataset::new(samples, sidecar.geometry)
}

/// Layout of an external pressure-map dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExternalLayout {
    /// Each data line holds one full frame, row-major, whitespace-separated.
    FramePerLine,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExternalManifest {
    /// Raw count corresponding to full scale; frames are divided by this.
    pub full_scale: f64,
    pub files: Vec<ExternalFileEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExternalFileEntry {
    pub path: String,
    pub subject: String,
    pub label: PoseLabel,
}

/// Reads an external high-resolution dataset: frame-per-line text files plus
/// a `manifest.json` mapping files to subjects, labels and the full-scale
/// value used for max normalization.
pub fn read_external_dataset(
    dir: &Path,
    geometry: SensorGeometry,
    layout: ExternalLayout,
) -> Result<LabeledDataset> {
    let ExternalLayout::FramePerLine = layout;
    geometry.validate()?;
    let manifest_path = dir.join("manifest.json");
    let body = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let manifest: ExternalManifest =
        serde_json::from_str(&body).map_err(|e| Error::json(&manifest_path, e))?;
    if manifest.full_scale <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "manifest full_scale must be > 0, got {}",
            manifest.full_scale
        )));
    }
    if manifest.files.is_empty() {
        return Err(Error::MissingManifestEntry("no files listed".into()));
    }

    let sensels = geometry.sensels();
    let mut samples = Vec::new();
    for entry in &manifest.files {
        let path = dir.join(&entry.path);
        let file = fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
        for (idx, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|e| Error::io(&path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let mut values = Vec::with_capacity(sensels);
            for field in line.split_whitespace() {
                let raw = parse_f64(&path, lineno, field)?;
                values.push((raw / manifest.full_scale).clamp(0.0, 1.0));
            }
            if values.len() != sensels {
                return Err(Error::ValueCount {
                    path: path.clone(),
                    line: lineno,
                    expected: sensels,
                    got: values.len(),
                });
            }
            samples.push(LabeledSample {
                frame: PressureFrame::new(idx as f64, values),
                label: entry.label,
                patient_id: entry.subject.clone(),
            });
        }
    }
    LabeledDataset::new(samples, geometry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::quantize_ms;

    fn sample_recording() -> NightRecording {
        let geometry = SensorGeometry::new(4, 2, 2).unwrap();
        let mk = |base: i32| {
            (0..5)
                .map(|i| {
                    RawFrame::new(
                        quantize_ms(i as f64 * 0.1),
                        vec![base + i, base + i + 1, base, base + 2],
                    )
                })
                .collect::<Vec<_>>()
        };
        let upper = DaqStream::new(Section::Upper, 10.0, mk(10)).unwrap();
        let lower = DaqStream::new(Section::Lower, 10.0, mk(700)).unwrap();
        let log = AnnotationLog::new(
            vec![PoseInterval {
                start_s: 0.0,
                end_s: 0.4,
                label: PoseLabel::Supine,
            }],
            0.2,
        )
        .unwrap();
        NightRecording::new("p000".into(), geometry, upper, lower, log).unwrap()
    }

    #[test]
    fn recording_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let rec = sample_recording();
        write_recording(&rec, dir.path()).unwrap();
        let back = read_recording(dir.path()).unwrap();
        assert_eq!(rec, back);
    }

    #[test]
    fn recording_rejects_wrong_value_count() {
        let dir = tempfile::tempdir().unwrap();
        let rec = sample_recording();
        write_recording(&rec, dir.path()).unwrap();
        // Corrupt one data line: drop the last value.
        let path = dir.path().join("upper.csv");
        let body = fs::read_to_string(&path).unwrap();
        let mut lines: Vec<&str> = body.lines().collect();
        let truncated = lines[1].rsplit_once(',').unwrap().0.to_string();
        lines[1] = &truncated;
        fs::write(&path, lines.join("\n")).unwrap();
        assert!(matches!(
            read_recording(dir.path()),
            Err(Error::ValueCount { .. })
        ));
    }

    #[test]
    fn recording_rejects_non_monotone_timestamps() {
        let dir = tempfile::tempdir().unwrap();
        let rec = sample_recording();
        write_recording(&rec, dir.path()).unwrap();
        let path = dir.path().join("lower.csv");
        let body = fs::read_to_string(&path).unwrap();
        let mut lines: Vec<String> = body.lines().map(String::from).collect();
        lines[2] = lines[1].clone();
        fs::write(&path, lines.join("\n")).unwrap();
        assert!(matches!(
            read_recording(dir.path()),
            Err(Error::NonMonotoneTimestamps { .. })
        ));
    }

    #[test]
    fn recording_rejects_malformed_header() {
        let dir = tempfile::tempdir().unwrap();
        let rec = sample_recording();
        write_recording(&rec, dir.path()).unwrap();
        let path = dir.path().join("upper.csv");
        let body = fs::read_to_string(&path).unwrap();
        fs::write(&path, body.replacen("t,s0", "time,s0", 1)).unwrap();
        assert!(matches!(
            read_recording(dir.path()),
            Err(Error::MalformedHeader { .. })
        ));
    }

    #[test]
    fn dataset_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let geometry = SensorGeometry::new(2, 2, 1).unwrap();
        let ds = LabeledDataset::new(
            vec![
                LabeledSample {
                    frame: PressureFrame::new(1.25, vec![0.0, 0.5, 1.0 / 3.0, 1.0]),
                    label: PoseLabel::Left,
                    patient_id: "a".into(),
                },
                LabeledSample {
                    frame: PressureFrame::new(2.5, vec![0.1, 0.2, 0.3, 0.4]),
                    label: PoseLabel::Prone,
                    patient_id: "b".into(),
                },
            ],
            geometry,
        )
        .unwrap();
        write_dataset(&ds, dir.path()).unwrap();
        let back = read_dataset(dir.path()).unwrap();
        assert_eq!(ds, back);
    }

    #[test]
    fn external_dataset_reads_and_normalizes() {
        let dir = tempfile::tempdir().unwrap();
        let geometry = SensorGeometry::new(2, 3, 1).unwrap();
        fs::write(dir.path().join("s1.txt"), "0 10 20 30 40 50\n0 0 0 0 0 0\n").unwrap();
        let manifest = serde_json::json!({
            "full_scale": 50.0,
            "files": [{"path": "s1.txt", "subject": "s1", "label": "Supine"}],
        });
        fs::write(
            dir.path().join("manifest.json"),
            serde_json::to_string(&manifest).unwrap(),
        )
        .unwrap();
        let ds = read_external_dataset(dir.path(), geometry, ExternalLayout::FramePerLine).unwrap();
        assert_eq!(ds.samples.len(), 2);
        assert_eq!(ds.samples[0].frame.values, vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0]);
        assert!(ds.samples[1].frame.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn external_dataset_rejects_wrong_value_count() {
        let dir = tempfile::tempdir().unwrap();
        let geometry = SensorGeometry::new(2, 3, 1).unwrap();
        fs::write(dir.path().join("s1.txt"), "0 10 20 30 40\n").unwrap();
        let manifest = serde_json::json!({
            "full_scale": 50.0,
            "files": [{"path": "s1.txt", "subject": "s1", "label": "Supine"}],
        });
        fs::write(
            dir.path().join("manifest.json"),
            serde_json::to_string(&manifest).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            read_external_dataset(dir.path(), geometry, ExternalLayout::FramePerLine),
            Err(Error::ValueCount { .. })
        ));
    }
}
