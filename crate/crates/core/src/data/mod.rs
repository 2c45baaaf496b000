//! Domain types for pressure-mat recordings and labeled datasets.
//!
//! The sensor model: a bed section is a grid of sensels sampled at a nominal
//! 10 Hz, each reporting an integer count in `[0, 2046]`. Two sections (upper
//! and lower body) are driven by independent acquisition units whose clocks
//! drift relative to each other, so raw timestamps live on per-stream clocks
//! until the sync stage aligns them.

mod io;

pub use io::{
    read_dataset, read_external_dataset, read_recording, write_dataset, write_recording,
    ExternalLayout,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Full-scale sensel count; counts are normalized by this value.
pub const FULL_SCALE_COUNT: i32 = 2046;

/// Grid dimensions of a sensel array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SensorGeometry {
    pub rows: usize,
    pub cols: usize,
    /// Rows contributed by each DAQ section (three stacked 3x8 mats -> 9).
    pub section_rows: usize,
}

impl SensorGeometry {
    /// Composite clinical geometry: two 9x8 sections stacked into 18x8.
    pub fn clinical_composite() -> Self {
        SensorGeometry {
            rows: 18,
            cols: 8,
            section_rows: 9,
        }
    }

    pub fn new(rows: usize, cols: usize, section_rows: usize) -> Result<Self> {
        let g = SensorGeometry {
            rows,
            cols,
            section_rows,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 || self.section_rows == 0 {
            return Err(Error::InvalidGeometry(format!(
                "rows, cols, section_rows must be >= 1 (got {}x{}, section_rows {})",
                self.rows, self.cols, self.section_rows
            )));
        }
        Ok(())
    }

    /// Geometry of a single DAQ section.
    pub fn section(&self) -> SensorGeometry {
        SensorGeometry {
            rows: self.section_rows,
            cols: self.cols,
            section_rows: self.section_rows,
        }
    }

    pub fn sensels(&self) -> usize {
        self.rows * self.cols
    }

    /// True when this is a dual-DAQ composite (upper + lower stacked).
    pub fn is_composite(&self) -> bool {
        self.rows == 2 * self.section_rows
    }
}

/// One timestamped grid of raw integer counts on the owning stream's clock.
#[derive(Debug, Clone, PartialEq)]
pub struct RawFrame {
    /// Seconds on the owning stream's clock.
    pub timestamp: f64,
    /// Row-major counts, `rows * cols` long.
    pub values: Vec<i32>,
}

impl RawFrame {
    pub fn new(timestamp: f64, values: Vec<i32>) -> Self {
        RawFrame { timestamp, values }
    }
}

/// Normalization behaviour for raw counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormalizeMode {
    /// Reject counts outside `[0, 2046]`.
    #[default]
    Strict,
    /// Clamp counts into `[0, 2046]` before dividing.
    Lenient,
}

/// One timestamped grid of normalized pressures in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PressureFrame {
    /// Seconds on the aligned clock.
    pub timestamp: f64,
    /// Row-major values, `rows * cols` long.
    pub values: Vec<f64>,
}

impl PressureFrame {
    /// Constructs a frame, asserting the `[0, 1]` bound in debug builds.
    pub fn new(timestamp: f64, values: Vec<f64>) -> Self {
        debug_assert!(
            values.iter().all(|v| (0.0..=1.0).contains(v)),
            "pressure value outside [0, 1]"
        );
        PressureFrame { timestamp, values }
    }

    pub fn get(&self, row: usize, col: usize, cols: usize) -> f64 {
        self.values[row * cols + col]
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Normalizes raw counts to `[0, 1]` by dividing by the 2046 full scale.
/// `cols` locates out-of-range counts as (row, col) in strict-mode errors.
pub fn normalize_frame(raw: &RawFrame, cols: usize, mode: NormalizeMode) -> Result<PressureFrame> {
    let mut out = Vec::with_capacity(raw.values.len());
    for (i, &count) in raw.values.iter().enumerate() {
        let count = match mode {
            NormalizeMode::Strict => {
                if !(0..=FULL_SCALE_COUNT).contains(&count) {
                    let (row, col) = if cols > 0 { (i / cols, i % cols) } else { (0, i) };
                    return Err(Error::CountOutOfRange {
                        row,
                        col,
                        value: count,
                    });
                }
                count
            }
            NormalizeMode::Lenient => count.clamp(0, FULL_SCALE_COUNT),
        };
        out.push(count as f64 / FULL_SCALE_COUNT as f64);
    }
    Ok(PressureFrame::new(raw.timestamp, out))
}

/// Which bed section a DAQ stream covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Section {
    Upper,
    Lower,
}

impl Section {
    pub fn name(&self) -> &'static str {
        match self {
            Section::Upper => "upper",
            Section::Lower => "lower",
        }
    }
}

/// A time-sorted sequence of raw frames from one DAQ.
#[derive(Debug, Clone, PartialEq)]
pub struct DaqStream {
    pub section: Section,
    pub sample_rate_hz: f64,
    pub frames: Vec<RawFrame>,
}

impl DaqStream {
    pub fn new(section: Section, sample_rate_hz: f64, frames: Vec<RawFrame>) -> Result<Self> {
        if sample_rate_hz <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "sample_rate_hz must be > 0, got {sample_rate_hz}"
            )));
        }
        check_monotone(frames.iter().map(|f| f.timestamp))?;
        Ok(DaqStream {
            section,
            sample_rate_hz,
            frames,
        })
    }
}

pub(crate) fn check_monotone(timestamps: impl Iterator<Item = f64>) -> Result<()> {
    let mut prev: Option<f64> = None;
    for (i, t) in timestamps.enumerate() {
        if let Some(p) = prev {
            if t <= p {
                return Err(Error::NonMonotoneTimestamps {
                    index: i,
                    prev: p,
                    next: t,
                });
            }
        }
        prev = Some(t);
    }
    Ok(())
}

/// Sleep pose classes. `Transient` marks pose changes and never reaches a
/// labeled dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PoseLabel {
    Left,
    Right,
    Supine,
    Prone,
    Transient,
}

impl PoseLabel {
    pub const CLASSES: [PoseLabel; 4] = [
        PoseLabel::Left,
        PoseLabel::Right,
        PoseLabel::Supine,
        PoseLabel::Prone,
    ];

    /// Class index for the 4-way task. `Transient` has no index.
    pub fn class_index(&self) -> Option<usize> {
        match self {
            PoseLabel::Left => Some(0),
            PoseLabel::Right => Some(1),
            PoseLabel::Supine => Some(2),
            PoseLabel::Prone => Some(3),
            PoseLabel::Transient => None,
        }
    }

    pub fn from_class_index(index: usize) -> Option<PoseLabel> {
        PoseLabel::CLASSES.get(index).copied()
    }

    pub fn name(&self) -> &'static str {
        match self {
            PoseLabel::Left => "Left",
            PoseLabel::Right => "Right",
            PoseLabel::Supine => "Supine",
            PoseLabel::Prone => "Prone",
            PoseLabel::Transient => "Transient",
        }
    }

    pub fn parse(s: &str) -> Option<PoseLabel> {
        match s {
            "Left" => Some(PoseLabel::Left),
            "Right" => Some(PoseLabel::Right),
            "Supine" => Some(PoseLabel::Supine),
            "Prone" => Some(PoseLabel::Prone),
            "Transient" => Some(PoseLabel::Transient),
            _ => None,
        }
    }
}

/// A labeled interval on the technician's clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseInterval {
    pub start_s: f64,
    pub end_s: f64,
    pub label: PoseLabel,
}

impl PoseInterval {
    pub fn duration(&self) -> f64 {
        self.end_s - self.start_s
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start_s && t < self.end_s
    }
}

/// Technician annotations: pose intervals plus the biocalibration timestamp,
/// all on the technician's clock until aligned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationLog {
    pub intervals: Vec<PoseInterval>,
    pub biocal_time_s: f64,
}

impl AnnotationLog {
    pub fn new(intervals: Vec<PoseInterval>, biocal_time_s: f64) -> Result<Self> {
        for (i, iv) in intervals.iter().enumerate() {
            if iv.start_s >= iv.end_s {
                return Err(Error::InvalidConfig(format!(
                    "interval {i} has start {} >= end {}",
                    iv.start_s, iv.end_s
                )));
            }
            if i > 0 && iv.start_s < intervals[i - 1].end_s {
                return Err(Error::InvalidConfig(format!(
                    "interval {i} overlaps previous (starts {} before previous end {})",
                    iv.start_s,
                    intervals[i - 1].end_s
                )));
            }
        }
        Ok(AnnotationLog {
            intervals,
            biocal_time_s,
        })
    }

    /// The label covering `t`, if any.
    pub fn label_at(&self, t: f64) -> Option<PoseLabel> {
        self.intervals
            .iter()
            .find(|iv| iv.contains(t))
            .map(|iv| iv.label)
    }
}

/// One patient's night: two raw DAQ streams plus the annotation log.
#[derive(Debug, Clone, PartialEq)]
pub struct NightRecording {
    pub patient_id: String,
    pub geometry: SensorGeometry,
    pub upper: DaqStream,
    pub lower: DaqStream,
    pub log: AnnotationLog,
}

impl NightRecording {
    pub fn new(
        patient_id: String,
        geometry: SensorGeometry,
        upper: DaqStream,
        lower: DaqStream,
        log: AnnotationLog,
    ) -> Result<Self> {
        geometry.validate()?;
        let section_len = geometry.section().sensels();
        for (stream, name) in [(&upper, "upper"), (&lower, "lower")] {
            for (i, frame) in stream.frames.iter().enumerate() {
                if frame.values.len() != section_len {
                    return Err(Error::InvalidGeometry(format!(
                        "{name} frame {i} has {} values, expected {section_len}",
                        frame.values.len()
                    )));
                }
            }
        }
        Ok(NightRecording {
            patient_id,
            geometry,
            upper,
            lower,
            log,
        })
    }
}

/// One labeled training sample.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub frame: PressureFrame,
    pub label: PoseLabel,
    pub patient_id: String,
}

/// Aligned (frame, pose, patient) triples sharing one geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub samples: Vec<LabeledSample>,
    pub geometry: SensorGeometry,
}

impl LabeledDataset {
    pub fn new(samples: Vec<LabeledSample>, geometry: SensorGeometry) -> Result<Self> {
        geometry.validate()?;
        let n = geometry.sensels();
        for (i, s) in samples.iter().enumerate() {
            if s.label == PoseLabel::Transient {
                return Err(Error::TransientLabel);
            }
            if s.frame.values.len() != n {
                return Err(Error::InvalidGeometry(format!(
                    "sample {i} has {} values, expected {n}",
                    s.frame.values.len()
                )));
            }
        }
        Ok(LabeledDataset { samples, geometry })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Unique patient ids in first-appearance order.
    pub fn patient_ids(&self) -> Vec<String> {
        let mut ids = Vec::new();
        for s in &self.samples {
            if !ids.contains(&s.patient_id) {
                ids.push(s.patient_id.clone());
            }
        }
        ids
    }

    /// Subset containing only the given patients, preserving sample order.
    pub fn restrict_to_patients(&self, patients: &[String]) -> LabeledDataset {
        LabeledDataset {
            samples: self
                .samples
                .iter()
                .filter(|s| patients.contains(&s.patient_id))
                .cloned()
                .collect(),
            geometry: self.geometry,
        }
    }
}

/// Rounds to whole milliseconds; the on-disk timestamp precision.
pub fn quantize_ms(t: f64) -> f64 {
    (t * 1000.0).round() / 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_full_scale_is_one() {
        let raw = RawFrame::new(0.0, vec![2046]);
        let f = normalize_frame(&raw, 1, NormalizeMode::Strict).unwrap();
        assert_eq!(f.values[0], 1.0);
    }

    #[test]
    fn normalize_zero_is_zero() {
        let raw = RawFrame::new(0.0, vec![0]);
        let f = normalize_frame(&raw, 1, NormalizeMode::Strict).unwrap();
        assert_eq!(f.values[0], 0.0);
    }

    #[test]
    fn normalize_midpoint() {
        let raw = RawFrame::new(0.0, vec![1023]);
        let f = normalize_frame(&raw, 1, NormalizeMode::Strict).unwrap();
        assert_eq!(f.values[0], 0.5);
    }

    #[test]
    fn normalize_strict_rejects_out_of_range() {
        let raw = RawFrame::new(0.0, vec![0, 0, 0, 2047]);
        let err = normalize_frame(&raw, 2, NormalizeMode::Strict).unwrap_err();
        match err {
            Error::CountOutOfRange { row, col, value } => {
                assert_eq!((row, col, value), (1, 1, 2047));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn normalize_lenient_clamps() {
        let raw = RawFrame::new(1.5, vec![-5, 3000]);
        let f = normalize_frame(&raw, 2, NormalizeMode::Lenient).unwrap();
        assert_eq!(f.values, vec![0.0, 1.0]);
        assert_eq!(f.timestamp, 1.5);
    }

    #[test]
    fn stream_rejects_non_monotone() {
        let frames = vec![RawFrame::new(1.0, vec![0]), RawFrame::new(1.0, vec![0])];
        let err = DaqStream::new(Section::Upper, 10.0, frames).unwrap_err();
        assert!(matches!(err, Error::NonMonotoneTimestamps { .. }));
    }

    #[test]
    fn log_rejects_overlap() {
        let intervals = vec![
            PoseInterval {
                start_s: 0.0,
                end_s: 10.0,
                label: PoseLabel::Supine,
            },
            PoseInterval {
                start_s: 5.0,
                end_s: 15.0,
                label: PoseLabel::Left,
            },
        ];
        assert!(AnnotationLog::new(intervals, 1.0).is_err());
    }

    #[test]
    fn dataset_rejects_transient() {
        let g = SensorGeometry::new(1, 1, 1).unwrap();
        let s = LabeledSample {
            frame: PressureFrame::new(0.0, vec![0.0]),
            label: PoseLabel::Transient,
            patient_id: "p".into(),
        };
        assert!(matches!(
            LabeledDataset::new(vec![s], g),
            Err(Error::TransientLabel)
        ));
    }

    #[test]
    fn class_indices_are_stable() {
        assert_eq!(PoseLabel::Left.class_index(), Some(0));
        assert_eq!(PoseLabel::Right.class_index(), Some(1));
        assert_eq!(PoseLabel::Supine.class_index(), Some(2));
        assert_eq!(PoseLabel::Prone.class_index(), Some(3));
        assert_eq!(PoseLabel::Transient.class_index(), None);
    }

    #[test]
    fn normalize_is_monotone() {
        let raw = RawFrame::new(0.0, (0..=2046).collect());
        let f = normalize_frame(&raw, 1, NormalizeMode::Strict).unwrap();
        for w in f.values.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }
}
