//! Recordings on disk and the seeded synthetic stand-in dataset.
//!
//! A recording CSV holds one column per channel and one row per sample, with
//! an optional `ch1,...,chC` header. A manifest JSON binds recording files to
//! action labels:
//!
//! ```json
//! {
//!   "labels": ["Typing", "Rest", "Lifting", "Pushups"],
//!   "entries": [{ "path": "typing_00.csv", "action": "Typing", "subject": "s1" }]
//! }
//! ```
//!
//! Entry paths are resolved relative to the manifest's directory.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{fft, seed};

/// The four actions of the reference armband dataset.
pub const DEFAULT_ACTIONS: [&str; 4] = ["Typing", "Rest", "Lifting", "Pushups"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ActionLabel {
    pub name: String,
    pub index: usize,
}

/// Ordered, closed set of action names for one dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabelSet {
    names: Vec<String>,
}

impl LabelSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Config("label set is empty".into()));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::Config(format!("duplicate label {n:?}")));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn get(&self, name: &str) -> Option<ActionLabel> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|index| ActionLabel {
                name: name.to_string(),
                index,
            })
    }

    pub fn label(&self, index: usize) -> Option<ActionLabel> {
        self.names.get(index).map(|name| ActionLabel {
            name: name.clone(),
            index,
        })
    }
}

/// One labeled multi-channel recording. Channels are stored channel-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recording {
    pub id: String,
    pub action: ActionLabel,
    pub channels: Vec<Vec<f64>>,
    pub sample_rate_hz: f64,
}

impl Recording {
    pub fn new(
        id: impl Into<String>,
        action: ActionLabel,
        channels: Vec<Vec<f64>>,
        sample_rate_hz: f64,
    ) -> Result<Self> {
        let r = Self {
            id: id.into(),
            action,
            channels,
            sample_rate_hz,
        };
        r.validate()?;
        Ok(r)
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn sample_count(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    pub fn validate(&self) -> Result<()> {
        if self.channels.len() < 2 {
            return Err(Error::Config(format!(
                "recording {} has {} channel(s); at least 2 are required",
                self.id,
                self.channels.len()
            )));
        }
        let n = self.sample_count();
        if n == 0 {
            return Err(Error::TooShort { len: 0, required: 1 });
        }
        for (c, ch) in self.channels.iter().enumerate() {
            if ch.len() != n {
                return Err(Error::Dim {
                    expected: n,
                    found: ch.len(),
                });
            }
            if ch.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!(
                    "recording {} channel {}",
                    self.id,
                    c + 1
                )));
            }
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(Error::Config(format!(
                "recording {} has invalid sample rate {}",
                self.id, self.sample_rate_hz
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadOptions {
    pub expected_channels: usize,
    /// Recordings shorter than this (normally the window length) are rejected.
    pub min_samples: usize,
    pub sample_rate_hz: f64,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            expected_channels: 8,
            min_samples: 1000,
            sample_rate_hz: 1000.0,
        }
    }
}

/// Parse a recording CSV into channel-major sample vectors.
pub fn read_channels(path: &Path, opts: &LoadOptions) -> Result<Vec<Vec<f64>>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let width = opts.expected_channels;
    let mut channels: Vec<Vec<f64>> = vec![Vec::new(); width];
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if i == 0 && record.iter().all(|cell| cell.parse::<f64>().is_err()) {
            if record.len() != width {
                return Err(Error::Format {
                    row,
                    expected: width,
                    found: record.len(),
                });
            }
            continue;
        }
        if record.len() != width {
            return Err(Error::Format {
                row,
                expected: width,
                found: record.len(),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| Error::Parse {
                row,
                column: c + 1,
                value: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    row,
                    column: c + 1,
                    value: cell.to_string(),
                });
            }
            channels[c].push(value);
        }
    }

    let len = channels[0].len();
    if len < opts.min_samples.max(1) {
        return Err(Error::TooShort {
            len,
            required: opts.min_samples.max(1),
        });
    }
    Ok(channels)
}

pub fn load_recording(
    path: &Path,
    id: impl Into<String>,
    action: ActionLabel,
    opts: &LoadOptions,
) -> Result<Recording> {
    let channels = read_channels(path, opts)?;
    Recording::new(id, action, channels, opts.sample_rate_hz)
}

/// Write a recording as CSV with a `ch1..chC` header. Values use the shortest
/// representation that round-trips exactly.
pub fn write_recording(path: &Path, recording: &Recording) -> Result<()> {
    let mut out = String::new();
    let header: Vec<String> = (1..=recording.channel_count())
        .map(|c| format!("ch{c}"))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for n in 0..recording.sample_count() {
        for (c, ch) in recording.channels.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            out.push_str(&ch[n].to_string());
        }
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(out.as_bytes())
        .map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub path: String,
    pub action: String,
    pub subject: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub labels: Vec<String>,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn validate(&self) -> Result<LabelSet> {
        let labels = LabelSet::new(self.labels.iter().cloned())?;
        let mut paths = HashSet::new();
        for e in &self.entries {
            if labels.get(&e.action).is_none() {
                return Err(Error::Config(format!(
                    "entry {:?} has action {:?} outside the label set",
                    e.path, e.action
                )));
            }
            if !paths.insert(e.path.as_str()) {
                return Err(Error::Config(format!("duplicate manifest path {:?}", e.path)));
            }
        }
        Ok(labels)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let manifest: Self = serde_json::from_str(&text)?;
        manifest.validate()?;
        Ok(manifest)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| Error::io(path, e))
    }
}

/// Recording id derived from a manifest path: the path without extension.
pub fn recording_id(entry_path: &str) -> String {
    let p = Path::new(entry_path);
    p.with_extension("").to_string_lossy().replace('\\', "/")
}

/// Load every recording listed in a manifest, in manifest order.
pub fn load_dataset(manifest_path: &Path, opts: &LoadOptions) -> Result<(LabelSet, Vec<Recording>)> {
    let manifest = DatasetManifest::read(manifest_path)?;
    let labels = manifest.validate()?;
    let base = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."));
    let recordings = manifest
        .entries
        .par_iter()
        .map(|e| {
            let action = labels.get(&e.action).expect("validated");
            load_recording(&base.join(&e.path), recording_id(&e.path), action, opts)
                .map_err(|err| match err {
                    Error::Io { .. } => err,
                    other => Error::Config(format!("{}: {other}", e.path)),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((labels, recordings))
}

/// Generative parameters for one synthetic action class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub name: String,
    /// Variance of the band-limited noise on each channel.
    pub noise_power: Vec<f64>,
    /// Pass band of the noise, in Hz.
    pub noise_band_hz: (f64, f64),
    /// Fraction of noise variance drawn from a source shared by all channels.
    pub shared_fraction: f64,
    /// Mean rate of activation bursts, in bursts per second.
    pub burst_rate_hz: f64,
    pub burst_duration_s: f64,
    /// Relative gain of a burst over the resting level; 0 disables bursts.
    pub burst_depth: f64,
    /// One or two carrier frequencies, in Hz.
    pub carriers_hz: Vec<f64>,
    /// Amplitude of the additive carrier tones, relative to the channel noise std.
    pub carrier_amplitude: f64,
    /// Depth of the amplitude modulation the carriers impose on the noise.
    pub modulation_depth: f64,
}

impl ClassSpec {
    fn same_generator(&self, other: &ClassSpec) -> bool {
        let mut a = self.clone();
        a.name.clone_from(&other.name);
        a == *other
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SynthSpec {
    pub channels: usize,
    pub samples: usize,
    pub min_samples: usize,
    pub recordings_per_class: usize,
    pub sample_rate_hz: f64,
    /// Per-recording multiplicative jitter on channel gains (uniform ±fraction).
    pub gain_jitter: f64,
    pub classes: Vec<ClassSpec>,
}

impl Default for SynthSpec {
    /// Four classes named after the reference dataset's actions, 8 channels,
    /// 10000 samples per recording and four recordings per class (52
    /// windows per class at the default windowing).
    fn default() -> Self {
        let class = |name: &str,
                     noise_power: [f64; 8],
                     band: (f64, f64),
                     shared: f64,
                     burst_rate: f64,
                     burst_dur: f64,
                     burst_depth: f64,
                     carriers: &[f64],
                     carrier_amp: f64,
                     mod_depth: f64| ClassSpec {
            name: name.to_string(),
            noise_power: noise_power.to_vec(),
            noise_band_hz: band,
            shared_fraction: shared,
            burst_rate_hz: burst_rate,
            burst_duration_s: burst_dur,
            burst_depth,
            carriers_hz: carriers.to_vec(),
            carrier_amplitude: carrier_amp,
            modulation_depth: mod_depth,
        };
        Self {
            channels: 8,
            samples: 10_000,
            min_samples: 1000,
            recordings_per_class: 4,
            sample_rate_hz: 1000.0,
            gain_jitter: 0.35,
            classes: vec![
                class(
                    "Typing",
                    [1.0, 1.3, 0.9, 0.7, 0.6, 0.8, 1.1, 1.0],
                    (30.0, 250.0),
                    0.25,
                    4.0,
                    0.08,
                    1.5,
                    &[12.0],
                    0.3,
                    0.3,
                ),
                class(
                    "Rest",
                    [0.15, 0.12, 0.18, 0.14, 0.16, 0.13, 0.15, 0.17],
                    (20.0, 400.0),
                    0.05,
                    0.2,
                    0.3,
                    0.3,
                    &[50.0],
                    0.5,
                    0.1,
                ),
                class(
                    "Lifting",
                    [2.0, 1.6, 1.2, 1.0, 1.4, 1.8, 1.5, 1.1],
                    (20.0, 200.0),
                    0.6,
                    0.5,
                    1.0,
                    1.0,
                    &[8.0, 25.0],
                    0.2,
                    0.4,
                ),
                class(
                    "Pushups",
                    [1.8, 1.2, 1.5, 1.9, 1.0, 1.3, 1.6, 1.4],
                    (40.0, 300.0),
                    0.45,
                    0.8,
                    0.6,
                    1.8,
                    &[30.0],
                    0.2,
                    0.5,
                ),
            ],
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::DegenerateSpec(msg));
        if self.classes.len() < 2 {
            return bad(format!("{} class(es); at least 2 required", self.classes.len()));
        }
        if self.channels < 2 {
            return bad("at least 2 channels required".into());
        }
        if self.samples < self.min_samples.max(2) {
            return bad(format!(
                "samples {} below min_samples {}",
                self.samples, self.min_samples
            ));
        }
        if self.recordings_per_class == 0 {
            return bad("recordings_per_class must be positive".into());
        }
        if !(self.sample_rate_hz > 0.0) {
            return bad("sample rate must be positive".into());
        }
        if !(0.0..1.0).contains(&self.gain_jitter) {
            return bad("gain_jitter must lie in [0, 1)".into());
        }
        let nyquist = self.sample_rate_hz / 2.0;
        let mut names = HashSet::new();
        for c in &self.classes {
            if !names.insert(c.name.as_str()) {
                return bad(format!("duplicate class name {:?}", c.name));
            }
            if c.noise_power.len() != self.channels {
                return bad(format!(
                    "class {:?} lists {} noise powers for {} channels",
                    c.name,
                    c.noise_power.len(),
                    self.channels
                ));
            }
            if c.noise_power.iter().any(|p| !(*p >= 0.0 && p.is_finite())) {
                return bad(format!("class {:?} has invalid noise power", c.name));
            }
            let (lo, hi) = c.noise_band_hz;
            if !(lo >= 0.0 && lo < hi && hi <= nyquist) {
                return bad(format!("class {:?} has invalid noise band", c.name));
            }
            if !(1..=2).contains(&c.carriers_hz.len()) {
                return bad(format!("class {:?} needs one or two carriers", c.name));
            }
            if c.carriers_hz.iter().any(|f| !(*f > 0.0 && *f < nyquist)) {
                return bad(format!("class {:?} carrier outside (0, Nyquist)", c.name));
            }
            if !(0.0..=1.0).contains(&c.shared_fraction)
                || !(0.0..=1.0).contains(&c.modulation_depth)
                || c.burst_depth < 0.0
                || c.burst_rate_hz < 0.0
                || c.burst_duration_s <= 0.0
                || c.carrier_amplitude < 0.0
            {
                return bad(format!("class {:?} has out-of-range parameters", c.name));
            }
        }
        for (i, a) in self.classes.iter().enumerate() {
            for b in &self.classes[i + 1..] {
                if a.same_generator(b) {
                    return bad(format!(
                        "classes {:?} and {:?} have identical generative parameters",
                        a.name, b.name
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn label_set(&self) -> Result<LabelSet> {
        LabelSet::new(self.classes.iter().map(|c| c.name.clone()))
    }
}

/// Unit-variance Gaussian noise restricted to `[lo, hi]` Hz by zeroing DFT bins.
fn band_limited_noise(rng: &mut ChaCha8Rng, len: usize, fs: f64, (lo, hi): (f64, f64)) -> Vec<f64> {
    let white: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
    let mut spec = fft::forward_real(&white, len);
    for (k, bin) in spec.iter_mut().enumerate() {
        let kk = k.min(len - k);
        let f = kk as f64 * fs / len as f64;
        if f < lo || f > hi {
            *bin = Complex64::new(0.0, 0.0);
        }
    }
    fft::inverse(&mut spec);
    let out: Vec<f64> = spec.iter().map(|c| c.re).collect();
    let var = out.iter().map(|v| v * v).sum::<f64>() / len as f64;
    if var > 0.0 {
        let s = var.sqrt().recip();
        out.into_iter().map(|v| v * s).collect()
    } else {
        out
    }
}

/// Smooth activation envelope: 1 at rest, rising by `depth` during Hann-shaped
/// bursts whose onsets follow a Poisson process.
fn burst_envelope(rng: &mut ChaCha8Rng, len: usize, fs: f64, class: &ClassSpec) -> Vec<f64> {
    let mut env = vec![1.0; len];
    if class.burst_depth == 0.0 || class.burst_rate_hz == 0.0 {
        return env;
    }
    let width = ((class.burst_duration_s * fs).round() as usize).max(2);
    let mut t = 0.0f64;
    loop {
        let u: f64 = rng.random::<f64>();
        t += -(1.0 - u).ln() / class.burst_rate_hz;
        let start = (t * fs) as isize - width as isize / 2;
        if start >= len as isize {
            break;
        }
        for j in 0..width {
            let n = start + j as isize;
            if n >= 0 && (n as usize) < len {
                let w = 0.5 - 0.5 * (2.0 * std::f64::consts::PI * j as f64 / (width - 1) as f64).cos();
                env[n as usize] += class.burst_depth * w;
            }
        }
    }
    env
}

fn synth_recording(spec: &SynthSpec, class_index: usize, rec_index: usize, seed: u64) -> Recording {
    let class = &spec.classes[class_index];
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive_seed(
        seed,
        "synth",
        (class_index as u64) << 32 | rec_index as u64,
    ));
    let len = spec.samples;
    let fs = spec.sample_rate_hz;
    let two_pi = 2.0 * std::f64::consts::PI;

    let shared = band_limited_noise(&mut rng, len, fs, class.noise_band_hz);
    let bursts = burst_envelope(&mut rng, len, fs, class);
    let phases: Vec<f64> = class.carriers_hz.iter().map(|_| rng.random::<f64>() * two_pi).collect();
    let modulation: Vec<f64> = (0..len)
        .map(|n| {
            let t = n as f64 / fs;
            let m: f64 = class
                .carriers_hz
                .iter()
                .zip(&phases)
                .map(|(f, p)| (two_pi * f * t + p).sin())
                .sum::<f64>()
                / class.carriers_hz.len() as f64;
            1.0 + class.modulation_depth * m
        })
        .collect();

    let rho = class.shared_fraction;
    let channels = (0..spec.channels)
        .map(|m| {
            let own = band_limited_noise(&mut rng, len, fs, class.noise_band_hz);
            let jitter = 1.0 + spec.gain_jitter * (2.0 * rng.random::<f64>() - 1.0);
            let std = class.noise_power[m].sqrt() * jitter;
            let tone_phase: Vec<f64> = class.carriers_hz.iter().map(|_| rng.random::<f64>() * two_pi).collect();
            (0..len)
                .map(|n| {
                    let t = n as f64 / fs;
                    let noise = rho.sqrt() * shared[n] + (1.0 - rho).sqrt() * own[n];
                    let tones: f64 = class
                        .carriers_hz
                        .iter()
                        .zip(&tone_phase)
                        .map(|(f, p)| (two_pi * f * t + p).sin())
                        .sum();
                    std * (bursts[n] * modulation[n] * noise + class.carrier_amplitude * tones)
                })
                .collect()
        })
        .collect();

    Recording {
        id: format!("{}_{:03}", class.name.to_lowercase(), rec_index),
        action: ActionLabel {
            name: class.name.clone(),
            index: class_index,
        },
        channels,
        sample_rate_hz: fs,
    }
}

/// Generate `recordings_per_class` recordings for every class. The output is
/// ordered class-major and depends only on `(spec, seed)`.
pub fn generate_synthetic_dataset(spec: &SynthSpec, seed: u64) -> Result<Vec<Recording>> {
    spec.validate()?;
    let jobs: Vec<(usize, usize)> = (0..spec.classes.len())
        .flat_map(|c| (0..spec.recordings_per_class).map(move |r| (c, r)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(c, r)| synth_recording(spec, c, r, seed))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn opts(channels: usize, min: usize) -> LoadOptions {
        LoadOptions {
            expected_channels: channels,
            min_samples: min,
            sample_rate_hz: 1000.0,
        }
    }

    #[test]
    fn parses_eight_column_csv() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::from("ch1,ch2,ch3,ch4,ch5,ch6,ch7,ch8\n");
        for n in 0..10_000 {
            let row: Vec<String> = (0..8).map(|c| format!("{}", (n * 8 + c) as f64 * 0.5)).collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
        let p = write(dir.path(), "r.csv", &text);
        let label = LabelSet::new(DEFAULT_ACTIONS).unwrap().get("Rest").unwrap();
        let r = load_recording(&p, "r", label, &opts(8, 1000)).unwrap();
        assert_eq!(r.channel_count(), 8);
        assert_eq!(r.sample_count(), 10_000);
        assert_eq!(r.channels[3][2], (2 * 8 + 3) as f64 * 0.5);
    }

    #[test]
    fn ragged_row_names_its_line() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::new();
        for n in 0..10 {
            let cells = if n == 4 { 7 } else { 8 };
            let row: Vec<String> = (0..cells).map(|c| c.to_string()).collect();
            text.push_str(&row.join(","));
            text.push('\n');
        }
        let p = write(dir.path(), "r.csv", &text);
        match read_channels(&p, &opts(8, 1)) {
            Err(Error::Format { row, expected, found }) => {
                assert_eq!((row, expected, found), (5, 8, 7));
            }
            other => panic!("expected format error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_cell_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "r.csv", "1,2\n3,abc\n");
        assert!(matches!(
            read_channels(&p, &opts(2, 1)),
            Err(Error::Parse { row: 2, column: 2, .. })
        ));
    }

    #[test]
    fn short_recording_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let text: String = (0..500).map(|_| "0,0,0,0,0,0,0,0\n").collect();
        let p = write(dir.path(), "r.csv", &text);
        assert!(matches!(
            read_channels(&p, &opts(8, 1000)),
            Err(Error::TooShort { len: 500, required: 1000 })
        ));
    }

    #[test]
    fn manifest_rejects_unknown_action_and_duplicate_paths() {
        let m = DatasetManifest {
            labels: vec!["A".into(), "B".into()],
            entries: vec![ManifestEntry {
                path: "a.csv".into(),
                action: "C".into(),
                subject: "s".into(),
            }],
        };
        assert!(matches!(m.validate(), Err(Error::Config(_))));
        let m = DatasetManifest {
            labels: vec!["A".into()],
            entries: vec![
                ManifestEntry { path: "a.csv".into(), action: "A".into(), subject: "s".into() },
                ManifestEntry { path: "a.csv".into(), action: "A".into(), subject: "t".into() },
            ],
        };
        assert!(matches!(m.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn synthetic_generation_is_deterministic() {
        let spec = SynthSpec::default();
        let a = generate_synthetic_dataset(&spec, 7).unwrap();
        let b = generate_synthetic_dataset(&spec, 7).unwrap();
        assert_eq!(a.len(), 16);
        assert_eq!(a[0].channel_count(), 8);
        assert_eq!(a[0].sample_count(), 10_000);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.id, y.id);
            for (cx, cy) in x.channels.iter().zip(&y.channels) {
                assert!(cx.iter().zip(cy).all(|(p, q)| p.to_bits() == q.to_bits()));
            }
        }
        let c = generate_synthetic_dataset(&spec, 8).unwrap();
        assert_ne!(a[0].channels[0], c[0].channels[0]);
    }

    #[test]
    fn identical_classes_are_degenerate() {
        let mut spec = SynthSpec::default();
        spec.classes.truncate(2);
        let mut twin = spec.classes[0].clone();
        twin.name = "Twin".into();
        spec.classes[1] = twin;
        assert!(matches!(
            generate_synthetic_dataset(&spec, 1),
            Err(Error::DegenerateSpec(_))
        ));
    }

    #[test]
    fn single_class_is_degenerate() {
        let mut spec = SynthSpec::default();
        spec.classes.truncate(1);
        assert!(matches!(spec.validate(), Err(Error::DegenerateSpec(_))));
    }
}
