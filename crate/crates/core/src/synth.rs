//! Deterministic synthetic night generator.
//!
//! Emits the two drifting DAQ streams, a technician-style annotation log on
//! its own shifted clock, and the hidden ground truth, so sync, preprocessing
//! and classification claims are all testable without clinical data. Bodies
//! are modelled as Gaussian pressure blobs; poses differ in blob placement,
//! spread and peak so that Left/Right separate cleanly while Supine/Prone
//! stay deliberately confusable.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{
    quantize_ms, AnnotationLog, DaqStream, NightRecording, PoseInterval, PoseLabel, PressureFrame,
    RawFrame, Section, SensorGeometry, FULL_SCALE_COUNT,
};
use crate::error::{Error, Result};

/// Gaussian-blob body model parameters, as fractions of the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyParams {
    /// Peak normalized pressure of the supine template.
    pub peak: f64,
    pub shoulder_row_frac: f64,
    pub hip_row_frac: f64,
    pub row_sigma_frac: f64,
    pub col_sigma_frac: f64,
    /// Lateral poses shift blob centers by this fraction of the column span.
    pub lateral_shift_frac: f64,
    /// Lateral poses narrow column spread by this factor.
    pub lateral_col_narrow: f64,
    pub prone_peak_factor: f64,
    pub prone_spread_factor: f64,
}

impl Default for BodyParams {
    fn default() -> Self {
        BodyParams {
            peak: 0.8,
            shoulder_row_frac: 0.30,
            hip_row_frac: 0.65,
            row_sigma_frac: 0.10,
            col_sigma_frac: 0.18,
            lateral_shift_frac: 0.25,
            lateral_col_narrow: 0.6,
            prone_peak_factor: 0.8,
            prone_spread_factor: 1.25,
        }
    }
}

/// Breathing modulation applied to the occupied-bed template.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Breathing {
    pub rate_hz: f64,
    /// Amplitude as a fraction of the template value.
    pub amplitude: f64,
}

impl Default for Breathing {
    fn default() -> Self {
        Breathing {
            rate_hz: 0.25,
            amplitude: 0.03,
        }
    }
}

/// Scripted deep-breathing maneuver visible in both streams and the log.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Biocal {
    /// Center of the maneuver, on the true (Upper) clock.
    pub time_s: f64,
    /// Breathing amplitude during the maneuver.
    pub amplitude: f64,
    pub duration_s: f64,
}

impl Default for Biocal {
    fn default() -> Self {
        Biocal {
            time_s: 900.0,
            amplitude: 0.15,
            duration_s: 60.0,
        }
    }
}

/// Pose sequence for the occupancy window.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum PoseSchedule {
    /// Explicit (duration_s, pose) dwells; the last pose extends to exit.
    Fixed(Vec<(f64, PoseLabel)>),
    /// Random dwells with the given mean, poses drawn without repeats.
    Random { mean_dwell_s: f64 },
}

impl Default for PoseSchedule {
    fn default() -> Self {
        PoseSchedule::Random {
            mean_dwell_s: 1800.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_patients: usize,
    pub night_duration_s: f64,
    pub sample_rate_hz: f64,
    pub geometry: SensorGeometry,
    /// Lower-clock lead over the Upper clock; `None` draws from [-5, +5] s.
    pub drift_s: Option<f64>,
    pub entry_time_s: f64,
    pub exit_time_s: f64,
    pub pose_schedule: PoseSchedule,
    pub transition_duration_s: f64,
    pub breathing: Breathing,
    pub biocal: Biocal,
    pub noise_sigma: f64,
    pub body: BodyParams,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            seed: 0,
            n_patients: 1,
            night_duration_s: 28_800.0,
            sample_rate_hz: 10.0,
            geometry: SensorGeometry::clinical_composite(),
            drift_s: None,
            entry_time_s: 600.0,
            exit_time_s: 28_200.0,
            pose_schedule: PoseSchedule::default(),
            transition_duration_s: 8.0,
            breathing: Breathing::default(),
            biocal: Biocal::default(),
            noise_sigma: 0.01,
            body: BodyParams::default(),
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        if !self.geometry.is_composite() {
            return Err(Error::InvalidGeometry(format!(
                "synthetic nights need a dual-DAQ composite geometry (rows = 2 * section_rows), got {}x{} with section_rows {}",
                self.geometry.rows, self.geometry.cols, self.geometry.section_rows
            )));
        }
        if self.n_patients == 0 {
            return Err(Error::InvalidConfig("n_patients must be >= 1".into()));
        }
        if self.sample_rate_hz <= 0.0 {
            return Err(Error::InvalidConfig("sample_rate_hz must be > 0".into()));
        }
        if !(self.entry_time_s < self.biocal.time_s
            && self.biocal.time_s < self.exit_time_s
            && self.exit_time_s <= self.night_duration_s)
        {
            return Err(Error::InvalidConfig(format!(
                "need entry ({}) < biocal ({}) < exit ({}) <= night duration ({})",
                self.entry_time_s, self.biocal.time_s, self.exit_time_s, self.night_duration_s
            )));
        }
        for (name, a) in [
            ("breathing.amplitude", self.breathing.amplitude),
            ("biocal.amplitude", self.biocal.amplitude),
        ] {
            if !(0.0 < a && a < 1.0) {
                return Err(Error::InvalidConfig(format!("{name} must be in (0, 1), got {a}")));
            }
        }
        if self.transition_duration_s <= 0.0 {
            return Err(Error::InvalidConfig(
                "transition_duration_s must be > 0".into(),
            ));
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::InvalidConfig("noise_sigma must be >= 0".into()));
        }
        Ok(())
    }
}

/// Hidden truth backing a generated night, on the Upper (true) clock.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub true_drift_s: f64,
    pub true_entry_s: f64,
    pub true_exit_s: f64,
    pub true_biocal_s: f64,
    /// Shift applied to the annotation log's clock relative to Upper.
    pub log_shift_s: f64,
    /// Non-transient pose spans.
    pub pose_intervals: Vec<PoseInterval>,
    /// Cross-fade windows around pose boundaries.
    pub transition_windows: Vec<(f64, f64)>,
}

/// Renders the static pressure pattern for one pose.
///
/// The template is a superposition of two Gaussian blobs (shoulders and
/// hips) normalized so its maximum equals the pose's peak pressure:
/// Supine and Prone are column-symmetric, Prone at 0.8x peak and 1.25x
/// spread; Left/Right shift blob centers by +-25% of the column span and
/// narrow column spread by 0.6x.
pub fn pose_template(
    pose: PoseLabel,
    geometry: SensorGeometry,
    body: &BodyParams,
) -> Result<PressureFrame> {
    if pose == PoseLabel::Transient {
        return Err(Error::TransientLabel);
    }
    geometry.validate()?;
    let rows = geometry.rows as f64;
    let cols = geometry.cols as f64;
    let center_col = (cols - 1.0) / 2.0;

    let (col_shift, col_narrow, spread, peak) = match pose {
        PoseLabel::Supine => (0.0, 1.0, 1.0, body.peak),
        PoseLabel::Prone => (
            0.0,
            1.0,
            body.prone_spread_factor,
            body.peak * body.prone_peak_factor,
        ),
        PoseLabel::Left => (
            -body.lateral_shift_frac * (cols - 1.0),
            body.lateral_col_narrow,
            1.0,
            body.peak,
        ),
        PoseLabel::Right => (
            body.lateral_shift_frac * (cols - 1.0),
            body.lateral_col_narrow,
            1.0,
            body.peak,
        ),
        PoseLabel::Transient => unreachable!(),
    };

    let sigma_r = body.row_sigma_frac * rows * spread;
    let sigma_c = body.col_sigma_frac * cols * spread * col_narrow;
    let blobs = [
        (body.shoulder_row_frac * (rows - 1.0), center_col + col_shift),
        (body.hip_row_frac * (rows - 1.0), center_col + col_shift),
    ];

    let mut values = vec![0.0; geometry.sensels()];
    let mut max = 0.0f64;
    for r in 0..geometry.rows {
        for c in 0..geometry.cols {
            let mut v = 0.0;
            for &(br, bc) in &blobs {
                let dr = (r as f64 - br) / sigma_r;
                let dc = (c as f64 - bc) / sigma_c;
                v += (-0.5 * (dr * dr + dc * dc)).exp();
            }
            values[r * geometry.cols + c] = v;
            max = max.max(v);
        }
    }
    for v in &mut values {
        *v *= peak / max;
    }
    Ok(PressureFrame::new(0.0, values))
}

/// One occupied pose segment on the true clock.
#[derive(Debug, Clone)]
struct Segment {
    start_s: f64,
    end_s: f64,
    pose: PoseLabel,
}

fn build_schedule(cfg: &SynthConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Segment>> {
    let window = cfg.exit_time_s - cfg.entry_time_s;
    let mut segments = Vec::new();
    match &cfg.pose_schedule {
        PoseSchedule::Fixed(dwells) => {
            if dwells.is_empty() {
                return Err(Error::InvalidConfig("empty pose schedule".into()));
            }
            let total: f64 = dwells.iter().map(|(d, _)| d).sum();
            if total > window + 1e-9 {
                return Err(Error::InfeasibleSchedule {
                    total_s: total,
                    window_s: window,
                });
            }
            let mut t = cfg.entry_time_s;
            for &(dwell, pose) in dwells {
                if pose == PoseLabel::Transient {
                    return Err(Error::TransientLabel);
                }
                segments.push(Segment {
                    start_s: t,
                    end_s: t + dwell,
                    pose,
                });
                t += dwell;
            }
            // The final pose holds until the patient leaves the bed.
            segments.last_mut().expect("non-empty").end_s = cfg.exit_time_s;
        }
        PoseSchedule::Random { mean_dwell_s } => {
            if *mean_dwell_s <= 0.0 {
                return Err(Error::InvalidConfig("mean_dwell_s must be > 0".into()));
            }
            let mut t = cfg.entry_time_s;
            let mut prev: Option<PoseLabel> = None;
            while t < cfg.exit_time_s - 1e-9 {
                let dwell = rng.gen_range(0.5..1.5) * mean_dwell_s;
                let pose = draw_pose(rng, prev);
                let end = (t + dwell).min(cfg.exit_time_s);
                segments.push(Segment {
                    start_s: t,
                    end_s: end,
                    pose,
                });
                prev = Some(pose);
                t = end;
            }
        }
    }
    Ok(segments)
}

fn draw_pose(rng: &mut ChaCha8Rng, prev: Option<PoseLabel>) -> PoseLabel {
    match prev {
        None => PoseLabel::CLASSES[rng.gen_range(0..4)],
        Some(p) => {
            let prev_idx = p.class_index().expect("non-transient");
            let k = rng.gen_range(0..3);
            let idx = if k >= prev_idx { k + 1 } else { k };
            PoseLabel::CLASSES[idx]
        }
    }
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 over (seed, index) so per-patient streams are independent.
    let mut z = seed
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Generates the night for patient index 0. Pure in `cfg`: identical configs
/// give bit-identical output.
pub fn generate_night(cfg: &SynthConfig) -> Result<(NightRecording, GroundTruth)> {
    generate_night_indexed(cfg, 0)
}

/// Generates all `cfg.n_patients` nights, ids `p000`, `p001`, ...
pub fn generate_cohort(cfg: &SynthConfig) -> Result<Vec<(NightRecording, GroundTruth)>> {
    (0..cfg.n_patients)
        .map(|i| generate_night_indexed(cfg, i))
        .collect()
}

/// Generates one night for the given patient index.
pub fn generate_night_indexed(
    cfg: &SynthConfig,
    patient_index: usize,
) -> Result<(NightRecording, GroundTruth)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(cfg.seed, patient_index as u64));

    let drift = match cfg.drift_s {
        Some(d) => d,
        None => rng.gen_range(-5.0..=5.0),
    };
    let log_shift = rng.gen_range(-30.0..=30.0);
    let segments = build_schedule(cfg, &mut rng)?;

    let templates: Vec<PressureFrame> = PoseLabel::CLASSES
        .iter()
        .map(|&p| pose_template(p, cfg.geometry, &cfg.body))
        .collect::<Result<_>>()?;
    let template = |pose: PoseLabel| -> &[f64] {
        &templates[pose.class_index().expect("non-transient")].values
    };

    let half_fade = cfg.transition_duration_s / 2.0;
    let half_biocal = cfg.biocal.duration_s / 2.0;
    let sensels = cfg.geometry.sensels();
    let section_sensels = cfg.geometry.section().sensels();
    let n_frames = (cfg.night_duration_s * cfg.sample_rate_hz).floor() as usize;
    let noise = Normal::new(0.0, cfg.noise_sigma).map_err(|e| {
        Error::InvalidConfig(format!("noise sigma: {e}"))
    })?;

    let mut upper_frames = Vec::with_capacity(n_frames);
    let mut lower_frames = Vec::with_capacity(n_frames);
    let mut base = vec![0.0f64; sensels];
    let mut seg_cursor = 0usize;

    for i in 0..n_frames {
        let t = i as f64 / cfg.sample_rate_hz;
        let occupied = t >= cfg.entry_time_s && t < cfg.exit_time_s;

        let breathing_amp = if (t - cfg.biocal.time_s).abs() <= half_biocal {
            cfg.biocal.amplitude
        } else {
            cfg.breathing.amplitude
        };
        let breath = 1.0 + breathing_amp * (std::f64::consts::TAU * cfg.breathing.rate_hz * t).sin();

        let has_body = if occupied {
            while seg_cursor + 1 < segments.len() && t >= segments[seg_cursor].end_s {
                seg_cursor += 1;
            }
            let seg = &segments[seg_cursor];
            let fade_in = seg_cursor > 0 && t < seg.start_s + half_fade;
            let fade_out = seg_cursor + 1 < segments.len() && t >= seg.end_s - half_fade;
            if fade_in {
                let alpha = 0.5 + (t - seg.start_s) / cfg.transition_duration_s;
                let prev = template(segments[seg_cursor - 1].pose);
                let cur = template(seg.pose);
                for (b, (p, c)) in base.iter_mut().zip(prev.iter().zip(cur)) {
                    *b = (1.0 - alpha) * p + alpha * c;
                }
            } else if fade_out {
                let alpha = (t - (seg.end_s - half_fade)) / cfg.transition_duration_s;
                let cur = template(seg.pose);
                let next = template(segments[seg_cursor + 1].pose);
                for (b, (c, nx)) in base.iter_mut().zip(cur.iter().zip(next)) {
                    *b = (1.0 - alpha) * c + alpha * nx;
                }
            } else {
                base.copy_from_slice(template(seg.pose));
            }
            true
        } else {
            false
        };

        let mut upper_vals = Vec::with_capacity(section_sensels);
        let mut lower_vals = Vec::with_capacity(section_sensels);
        for s in 0..sensels {
            let clean = if has_body { base[s] * breath } else { 0.0 };
            let v = clean + noise.sample(&mut rng);
            let count = ((v * FULL_SCALE_COUNT as f64).round() as i64)
                .clamp(0, FULL_SCALE_COUNT as i64) as i32;
            if s < section_sensels {
                upper_vals.push(count);
            } else {
                lower_vals.push(count);
            }
        }
        upper_frames.push(RawFrame::new(quantize_ms(t), upper_vals));
        lower_frames.push(RawFrame::new(quantize_ms(t + drift), lower_vals));
    }

    let upper = DaqStream::new(Section::Upper, cfg.sample_rate_hz, upper_frames)?;
    let lower = DaqStream::new(Section::Lower, cfg.sample_rate_hz, lower_frames)?;

    // Pose intervals exclude the cross-fades; the log labels fades Transient.
    let mut pose_intervals = Vec::new();
    let mut transition_windows = Vec::new();
    for (i, seg) in segments.iter().enumerate() {
        let start = if i == 0 { seg.start_s } else { seg.start_s + half_fade };
        let end = if i + 1 == segments.len() {
            seg.end_s
        } else {
            seg.end_s - half_fade
        };
        pose_intervals.push(PoseInterval {
            start_s: start,
            end_s: end,
            label: seg.pose,
        });
        if i + 1 < segments.len() {
            transition_windows.push((seg.end_s - half_fade, seg.end_s + half_fade));
        }
    }

    let mut log_intervals = Vec::new();
    for (i, iv) in pose_intervals.iter().enumerate() {
        log_intervals.push(PoseInterval {
            start_s: quantize_ms(iv.start_s + log_shift),
            end_s: quantize_ms(iv.end_s + log_shift),
            label: iv.label,
        });
        if let Some(&(ws, we)) = transition_windows.get(i) {
            log_intervals.push(PoseInterval {
                start_s: quantize_ms(ws + log_shift),
                end_s: quantize_ms(we + log_shift),
                label: PoseLabel::Transient,
            });
        }
    }
    let log = AnnotationLog::new(log_intervals, quantize_ms(cfg.biocal.time_s + log_shift))?;

    let truth = GroundTruth {
        true_drift_s: drift,
        true_entry_s: cfg.entry_time_s,
        true_exit_s: cfg.exit_time_s,
        true_biocal_s: cfg.biocal.time_s,
        log_shift_s: log_shift,
        pose_intervals,
        transition_windows,
    };
    let rec = NightRecording::new(
        format!("p{patient_index:03}"),
        cfg.geometry,
        upper,
        lower,
        log,
    )?;
    Ok((rec, truth))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short_cfg() -> SynthConfig {
        SynthConfig {
            seed: 42,
            night_duration_s: 300.0,
            entry_time_s: 30.0,
            exit_time_s: 280.0,
            biocal: Biocal {
                time_s: 60.0,
                ..Biocal::default()
            },
            pose_schedule: PoseSchedule::Fixed(vec![
                (60.0, PoseLabel::Supine),
                (60.0, PoseLabel::Left),
                (60.0, PoseLabel::Right),
            ]),
            ..SynthConfig::default()
        }
    }

    #[test]
    fn supine_template_is_column_symmetric() {
        let g = SensorGeometry::clinical_composite();
        let f = pose_template(PoseLabel::Supine, g, &BodyParams::default()).unwrap();
        for r in 0..g.rows {
            for c in 0..g.cols {
                let a = f.values[r * g.cols + c];
                let b = f.values[r * g.cols + (g.cols - 1 - c)];
                assert!((a - b).abs() < 1e-9, "asymmetry at ({r},{c}): {a} vs {b}");
            }
        }
    }

    fn column_centroid(f: &PressureFrame, cols: usize) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, v) in f.values.iter().enumerate() {
            num += (i % cols) as f64 * v;
            den += v;
        }
        num / den
    }

    #[test]
    fn lateral_centroids_are_ordered() {
        let g = SensorGeometry::clinical_composite();
        let b = BodyParams::default();
        let left = pose_template(PoseLabel::Left, g, &b).unwrap();
        let right = pose_template(PoseLabel::Right, g, &b).unwrap();
        let supine = pose_template(PoseLabel::Supine, g, &b).unwrap();
        let cl = column_centroid(&left, g.cols);
        let cs = column_centroid(&supine, g.cols);
        let cr = column_centroid(&right, g.cols);
        assert!(cl < cs && cs < cr, "centroids {cl} {cs} {cr}");
    }

    #[test]
    fn prone_peak_below_supine_peak() {
        let g = SensorGeometry::clinical_composite();
        let b = BodyParams::default();
        let supine = pose_template(PoseLabel::Supine, g, &b).unwrap();
        let prone = pose_template(PoseLabel::Prone, g, &b).unwrap();
        let max = |f: &PressureFrame| f.values.iter().cloned().fold(0.0f64, f64::max);
        assert!(max(&prone) < max(&supine));
    }

    #[test]
    fn template_rejects_transient() {
        let g = SensorGeometry::clinical_composite();
        assert!(pose_template(PoseLabel::Transient, g, &BodyParams::default()).is_err());
    }

    #[test]
    fn injected_drift_appears_in_truth_and_streams() {
        let cfg = SynthConfig {
            drift_s: Some(3.0),
            ..short_cfg()
        };
        let (rec, truth) = generate_night(&cfg).unwrap();
        assert_eq!(truth.true_drift_s, 3.0);
        let dt = rec.lower.frames[0].timestamp - rec.upper.frames[0].timestamp;
        assert!((dt - 3.0).abs() <= 0.1 + 1e-9, "dt = {dt}");
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let cfg = short_cfg();
        let (a, ta) = generate_night(&cfg).unwrap();
        let (b, tb) = generate_night(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta.true_drift_s, tb.true_drift_s);
        assert_eq!(ta.log_shift_s, tb.log_shift_s);
    }

    #[test]
    fn pre_entry_frames_are_noise_only() {
        // Oracle: direct statistics of the generator's noise model over the
        // pre-entry frames (>= 1000 of them at 10 Hz with entry at 120 s).
        let cfg = SynthConfig {
            night_duration_s: 200.0,
            entry_time_s: 120.0,
            exit_time_s: 190.0,
            biocal: Biocal {
                time_s: 150.0,
                ..Biocal::default()
            },
            pose_schedule: PoseSchedule::Fixed(vec![(50.0, PoseLabel::Supine)]),
            ..short_cfg()
        };
        let (rec, _) = generate_night(&cfg).unwrap();
        let pre: Vec<&RawFrame> = rec
            .upper
            .frames
            .iter()
            .filter(|f| f.timestamp < 120.0)
            .collect();
        assert!(pre.len() >= 1000);
        let bound = 3.0 * cfg.noise_sigma * FULL_SCALE_COUNT as f64;
        for f in pre {
            let mean = f.values.iter().map(|&v| v as f64).sum::<f64>() / f.values.len() as f64;
            assert!(mean < bound, "pre-entry mean {mean} >= {bound}");
        }
    }

    #[test]
    fn infeasible_schedule_is_rejected() {
        let cfg = SynthConfig {
            pose_schedule: PoseSchedule::Fixed(vec![(400.0, PoseLabel::Supine)]),
            ..short_cfg()
        };
        assert!(matches!(
            generate_night(&cfg),
            Err(Error::InfeasibleSchedule { .. })
        ));
    }

    #[test]
    fn emitted_frames_satisfy_raw_invariants() {
        let (rec, _) = generate_night(&short_cfg()).unwrap();
        for f in rec.upper.frames.iter().chain(&rec.lower.frames) {
            assert!(f.values.iter().all(|&v| (0..=FULL_SCALE_COUNT).contains(&v)));
        }
    }

    #[test]
    fn log_matches_truth_up_to_shift() {
        let (rec, truth) = generate_night(&short_cfg()).unwrap();
        let logged: Vec<&PoseInterval> = rec
            .log
            .intervals
            .iter()
            .filter(|iv| iv.label != PoseLabel::Transient)
            .collect();
        assert_eq!(logged.len(), truth.pose_intervals.len());
        for (l, t) in logged.iter().zip(&truth.pose_intervals) {
            assert!((l.start_s - (t.start_s + truth.log_shift_s)).abs() < 2e-3);
            assert!((l.end_s - (t.end_s + truth.log_shift_s)).abs() < 2e-3);
            assert_eq!(l.label, t.label);
        }
        assert!(
            (rec.log.biocal_time_s - (truth.true_biocal_s + truth.log_shift_s)).abs() < 2e-3
        );
    }
}
