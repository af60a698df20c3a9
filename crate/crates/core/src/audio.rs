//! Classical digital audio: signed samples, the two's-complement codec, and
//! plain DSP reference implementations ("oracles") for every signal
//! operation the quantum circuits perform.
//!
//! Bit 0 of every [`BitString`] is the most significant bit, and sample
//! index 0 is time 0.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Read};
use std::path::Path;
use std::str::FromStr;

use crate::error::{FrqaError, Result};

/// Largest supported amplitude resolution.
pub const MAX_RESOLUTION: u32 = 32;

/// Ordered bits, most significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    pub fn zeros(width: usize) -> Self {
        BitString {
            bits: vec![false; width],
        }
    }

    /// `width`-bit big-endian form of `value` (high bits beyond `width` are dropped).
    pub fn from_u64(value: u64, width: usize) -> Self {
        let bits = (0..width)
            .map(|i| {
                let shift = width - 1 - i;
                shift < 64 && (value >> shift) & 1 == 1
            })
            .collect();
        BitString { bits }
    }

    /// Unsigned big-endian reading. Panics above 64 bits.
    pub fn to_u64(&self) -> u64 {
        assert!(self.bits.len() <= 64, "bit string too wide for u64");
        self.bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits[i] = value;
    }

    pub fn flip(&mut self, i: usize) {
        self.bits[i] = !self.bits[i];
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = FrqaError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(FrqaError::Parse(format!(
                    "unexpected character {other:?} in bit string {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::new)
    }
}

fn check_resolution(q: u32) -> Result<()> {
    if q == 0 || q > MAX_RESOLUTION {
        return Err(FrqaError::range("q", q as i64, 1, MAX_RESOLUTION as i64));
    }
    Ok(())
}

/// Smallest and largest amplitude representable at resolution `q`.
pub fn amplitude_bounds(q: u32) -> (i64, i64) {
    let half = 1i64 << (q - 1);
    (-half, half - 1)
}

/// Number of time qubits for `len` samples: `ceil(log2 len)`, but at least 1.
pub fn time_bits(len: usize) -> u32 {
    if len <= 2 {
        1
    } else {
        usize::BITS - (len - 1).leading_zeros()
    }
}

/// q-bit two's-complement pattern of `value`.
pub fn encode_twos_complement(value: i64, q: u32) -> Result<BitString> {
    check_resolution(q)?;
    let (min, max) = amplitude_bounds(q);
    if value < min || value > max {
        return Err(FrqaError::range("amplitude", value, min, max));
    }
    let mask = if q == 64 { u64::MAX } else { (1u64 << q) - 1 };
    Ok(BitString::from_u64(value as u64 & mask, q as usize))
}

pub fn decode_twos_complement(bits: &BitString) -> Result<i64> {
    let q = bits.width();
    if q == 0 {
        return Err(FrqaError::InvalidWidth("empty bit string".into()));
    }
    if q > 63 {
        return Err(FrqaError::InvalidWidth(format!("{q} bits exceed i64")));
    }
    let raw = bits.to_u64() as i64;
    Ok(if bits.get(0) { raw - (1i64 << q) } else { raw })
}

/// Signed amplitude carried by the unsigned resolution value `r`: `r - 2^(q-1)`.
pub fn resolution_to_amplitude(r: u64, q: u32) -> Result<i64> {
    check_resolution(q)?;
    let max = (1u64 << q) - 1;
    if r > max {
        return Err(FrqaError::range("resolution", r as i64, 0, max as i64));
    }
    Ok(r as i64 - (1i64 << (q - 1)))
}

/// Inverse of [`resolution_to_amplitude`].
pub fn amplitude_to_resolution(value: i64, q: u32) -> Result<u64> {
    check_resolution(q)?;
    let (min, max) = amplitude_bounds(q);
    if value < min || value > max {
        return Err(FrqaError::range("amplitude", value, min, max));
    }
    Ok((value - min) as u64)
}

/// A mono digital audio signal of signed samples at resolution `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AudioSignal {
    samples: Vec<i64>,
    q: u32,
}

impl AudioSignal {
    pub fn new(samples: Vec<i64>, q: u32) -> Result<Self> {
        check_resolution(q)?;
        if samples.is_empty() {
            return Err(FrqaError::Shape("audio signal needs at least one sample".into()));
        }
        let (min, max) = amplitude_bounds(q);
        if let Some(&bad) = samples.iter().find(|&&s| s < min || s > max) {
            return Err(FrqaError::range("amplitude", bad, min, max));
        }
        Ok(AudioSignal { samples, q })
    }

    /// Picks the smallest resolution that fits every sample.
    pub fn with_inferred_resolution(samples: Vec<i64>) -> Result<Self> {
        let q = infer_resolution(&samples);
        AudioSignal::new(samples, q)
    }

    pub fn zeros(len: usize, q: u32) -> Result<Self> {
        AudioSignal::new(vec![0; len], q)
    }

    pub fn samples(&self) -> &[i64] {
        &self.samples
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time resolution `l` for the current length.
    pub fn l(&self) -> u32 {
        time_bits(self.samples.len())
    }

    /// True when the length is exactly `2^l`.
    pub fn is_padded(&self) -> bool {
        self.samples.len() == 1usize << self.l()
    }

    /// Same samples at a wider resolution.
    pub fn widen(&self, q: u32) -> Result<Self> {
        if q < self.q {
            return Err(FrqaError::Shape(format!(
                "cannot narrow resolution {} to {q}",
                self.q
            )));
        }
        AudioSignal::new(self.samples.clone(), q)
    }

    /// Unsigned resolution value `B_t` of each sample.
    pub fn resolutions(&self) -> Vec<u64> {
        self.samples
            .iter()
            .map(|&s| (s - amplitude_bounds(self.q).0) as u64)
            .collect()
    }

    fn require_padded(&self, op: &str) -> Result<()> {
        if !self.is_padded() {
            return Err(FrqaError::Shape(format!(
                "{op} needs a signal padded to 2^l samples, got {}",
                self.len()
            )));
        }
        Ok(())
    }
}

/// Smallest `q >= 1` with every sample inside the q-bit two's-complement range.
pub fn infer_resolution(samples: &[i64]) -> u32 {
    (1..=MAX_RESOLUTION)
        .find(|&q| {
            let (min, max) = amplitude_bounds(q);
            samples.iter().all(|&s| s >= min && s <= max)
        })
        .unwrap_or(MAX_RESOLUTION)
}

/// Appends zero samples up to `2^l`.
pub fn pad_to_power_of_two(signal: &AudioSignal) -> AudioSignal {
    let target = 1usize << signal.l();
    let mut samples = signal.samples.clone();
    samples.resize(target, 0);
    AudioSignal {
        samples,
        q: signal.q,
    }
}

/// Partial assignment of time-register bits, keyed by bit position (0 = MSB).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TimeRestriction {
    fixed: BTreeMap<usize, bool>,
}

impl TimeRestriction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fix(mut self, position: usize, value: bool) -> Self {
        self.fixed.insert(position, value);
        self
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, bool)>) -> Self {
        TimeRestriction {
            fixed: pairs.into_iter().collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.fixed.iter().map(|(&p, &v)| (p, v))
    }

    pub fn len(&self) -> usize {
        self.fixed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed.is_empty()
    }

    pub fn is_fixed(&self, position: usize) -> bool {
        self.fixed.contains_key(&position)
    }

    pub fn check(&self, l: u32) -> Result<()> {
        if let Some((&p, _)) = self.fixed.iter().find(|(&p, _)| p >= l as usize) {
            return Err(FrqaError::range("fixed time bit", p as i64, 0, l as i64 - 1));
        }
        Ok(())
    }

    /// Whether time index `t` (an `l`-bit value) matches every fixed bit.
    pub fn matches(&self, t: usize, l: u32) -> bool {
        self.fixed
            .iter()
            .all(|(&p, &v)| ((t >> (l as usize - 1 - p)) & 1 == 1) == v)
    }

    /// Parses `"0=1,2=0"` (position=value pairs). An empty string is the empty restriction.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut out = TimeRestriction::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (pos, val) = part
                .split_once('=')
                .ok_or_else(|| FrqaError::Parse(format!("expected position=value, got {part:?}")))?;
            let pos = pos.trim().trim_start_matches('t');
            let pos: usize = pos
                .parse()
                .map_err(|_| FrqaError::Parse(format!("bad bit position {pos:?}")))?;
            let val = match val.trim() {
                "0" => false,
                "1" => true,
                other => return Err(FrqaError::Parse(format!("bad bit value {other:?}"))),
            };
            out.fixed.insert(pos, val);
        }
        Ok(out)
    }
}

impl fmt::Display for TimeRestriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .fixed
            .iter()
            .map(|(p, v)| format!("{p}={}", u8::from(*v)))
            .collect();
        f.write_str(&parts.join(","))
    }
}

/// Per-index sum at resolution `q + 1`.
pub fn oracle_add(x: &AudioSignal, y: &AudioSignal) -> Result<AudioSignal> {
    if x.q != y.q {
        return Err(FrqaError::Shape(format!(
            "resolution mismatch: {} vs {}",
            x.q, y.q
        )));
    }
    if x.len() != y.len() {
        return Err(FrqaError::Shape(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let samples = x
        .samples
        .iter()
        .zip(&y.samples)
        .map(|(a, b)| a + b)
        .collect();
    AudioSignal::new(samples, x.q + 1)
}

/// Two's-complement negation modulo `2^q`; `-2^(q-1)` maps to itself.
pub fn oracle_invert(x: &AudioSignal) -> AudioSignal {
    let (min, _) = amplitude_bounds(x.q);
    let samples = x
        .samples
        .iter()
        .map(|&s| if s == min { min } else { -s })
        .collect();
    AudioSignal { samples, q: x.q }
}

/// Shift right by `dt` with zero fill; the last `dt` samples fall off the end.
pub fn oracle_delay(x: &AudioSignal, dt: usize) -> Result<AudioSignal> {
    x.require_padded("delay")?;
    let n = x.len();
    if dt >= n {
        return Err(FrqaError::range("delay", dt as i64, 0, n as i64 - 1));
    }
    let samples = (0..n)
        .map(|t| if t < dt { 0 } else { x.samples[t - dt] })
        .collect();
    Ok(AudioSignal { samples, q: x.q })
}

pub fn oracle_reverse(x: &AudioSignal) -> Result<AudioSignal> {
    x.require_padded("reversal")?;
    let mut samples = x.samples.clone();
    samples.reverse();
    Ok(AudioSignal { samples, q: x.q })
}

/// Complements the unfixed time bits of every index that matches `fixed`.
pub fn oracle_reverse_restricted(
    x: &AudioSignal,
    fixed: &TimeRestriction,
) -> Result<AudioSignal> {
    x.require_padded("restricted reversal")?;
    let l = x.l();
    fixed.check(l)?;
    let free_mask = (0..l as usize)
        .filter(|&p| !fixed.is_fixed(p))
        .fold(0usize, |m, p| m | 1 << (l as usize - 1 - p));
    let samples = (0..x.len())
        .map(|t| {
            if fixed.matches(t, l) {
                x.samples[t ^ free_mask]
            } else {
                x.samples[t]
            }
        })
        .collect();
    Ok(AudioSignal { samples, q: x.q })
}

/// Reads one signed integer per line, with an optional leading `q=<int>` header.
pub fn read_csv<R: BufRead>(reader: R, q_override: Option<u32>) -> Result<AudioSignal> {
    let mut header_q = None;
    let mut samples = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("q=") {
            if n > 0 || !samples.is_empty() {
                return Err(FrqaError::Parse(format!(
                    "line {}: header must come first",
                    n + 1
                )));
            }
            header_q = Some(
                rest.trim()
                    .parse::<u32>()
                    .map_err(|_| FrqaError::Parse(format!("bad header {line:?}")))?,
            );
            continue;
        }
        let value = line
            .parse::<i64>()
            .map_err(|_| FrqaError::Parse(format!("line {}: not an integer: {line:?}", n + 1)))?;
        samples.push(value);
    }
    if samples.is_empty() {
        return Err(FrqaError::Shape("sample file contains no samples".into()));
    }
    match q_override.or(header_q) {
        Some(q) => {
            check_resolution(q)?;
            let (min, max) = amplitude_bounds(q);
            let bad: Vec<usize> = samples
                .iter()
                .enumerate()
                .filter(|(_, &s)| s < min || s > max)
                .map(|(i, _)| i)
                .collect();
            if !bad.is_empty() {
                return Err(FrqaError::Shape(format!(
                    "samples at indices {bad:?} fall outside [{min}, {max}] for q={q}"
                )));
            }
            AudioSignal::new(samples, q)
        }
        None => AudioSignal::with_inferred_resolution(samples),
    }
}

pub fn write_csv(signal: &AudioSignal) -> String {
    let mut out = format!("q={}\n", signal.q);
    for s in &signal.samples {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

/// Decodes unsigned 8-bit mono PCM; each byte `r` becomes `r - 128` (q = 8).
pub fn read_wav<R: Read>(reader: R) -> Result<AudioSignal> {
    let mut wav = hound::WavReader::new(reader)
        .map_err(|e| FrqaError::Parse(format!("wav: {e}")))?;
    let spec = wav.spec();
    if spec.channels != 1
        || spec.bits_per_sample != 8
        || spec.sample_format != hound::SampleFormat::Int
    {
        return Err(FrqaError::Parse(format!(
            "only 8-bit unsigned PCM mono WAV is supported (got {} channel(s), {} bits)",
            spec.channels, spec.bits_per_sample
        )));
    }
    // hound hands 8-bit data back already shifted by -128
    let samples = wav
        .samples::<i8>()
        .map(|s| {
            let s = s.map_err(|e| FrqaError::Parse(format!("wav: {e}")))?;
            resolution_to_amplitude((i16::from(s) + 128) as u64, 8)
        })
        .collect::<Result<Vec<_>>>()?;
    AudioSignal::new(samples, 8)
}

/// Loads a `.wav` or CSV sample file.
pub fn load_signal(path: &Path, q_override: Option<u32>) -> Result<AudioSignal> {
    let is_wav = path
        .extension()
        .map(|e| e.eq_ignore_ascii_case("wav"))
        .unwrap_or(false);
    let file = std::fs::File::open(path)?;
    if is_wav {
        let signal = read_wav(std::io::BufReader::new(file))?;
        match q_override {
            Some(q) if q != 8 => Err(FrqaError::Shape(format!(
                "WAV input is fixed at q=8, --q {q} requested"
            ))),
            _ => Ok(signal),
        }
    } else {
        read_csv(std::io::BufReader::new(file), q_override)
    }
}
