//! Suite configuration: flat `key = value` text, `#` comments, repeated
//! keys forming lists.
//!
//! ```text
//! seed = 7
//! dim = 2, 4
//! dim = 8
//! n = 0.5, 1, 2
//! z = -i
//! z = 1+i
//! tol.cross_path = 1e-9
//! state = 0.5, 0.3, 0.2 @ 11     # eigenvalues, optional unitary seed
//! markov_setups = 20
//! counterexample.power = 3       # or counterexample.k = 0, 1, 8, ...
//! counterexample.components = 64
//! counterexample.from = 10
//! counterexample.to = 40
//! output = report.json
//! format = json
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use anagen_core::continuation::DiscCounterexample;
use anagen_core::{c64, Tolerances, C64};

use crate::error::{CliError, ParseError};
use crate::spec::{parse_complex, parse_index, parse_list, parse_real, split_items};

pub const MAX_DIM: usize = 64;
pub const MAX_IM_Z: f64 = 4.0;
/// Largest dimension accepted for a configured state; the modular operator
/// acts on `d²` dimensions.
pub const MAX_STATE_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(format!("unknown format '{other}' (expected json or csv)")),
        }
    }
}

/// A faithful state given by its spectrum and an optional seed for a random
/// unitary conjugation.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub eigenvalues: Vec<f64>,
    pub unitary_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Schedule {
    /// `k_m = m^p`.
    Power(u32),
    Explicit(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleConfig {
    pub schedule: Schedule,
    /// Number of components `N` (ignored for an explicit schedule).
    pub components: usize,
    pub from: usize,
    pub to: usize,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self { schedule: Schedule::Power(3), components: 64, from: 10, to: 40 }
    }
}

impl CounterexampleConfig {
    pub fn build(&self) -> Result<DiscCounterexample, CliError> {
        let f = match &self.schedule {
            Schedule::Power(p) => {
                let n = self.components as u64;
                if n.checked_pow(*p).is_none() {
                    return Err(CliError::ConfigInvalid(format!("k_m = m^{p} overflows for N = {n}")));
                }
                DiscCounterexample::power_schedule(self.components, *p)
            }
            Schedule::Explicit(k) => DiscCounterexample::new(k.clone()),
        };
        f.map_err(|e| CliError::ConfigInvalid(e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.from == 0 || self.from > self.to {
            return Err(CliError::ConfigInvalid(format!("counterexample range {}..{} is empty or starts at 0", self.from, self.to)));
        }
        if matches!(self.schedule, Schedule::Power(_)) && self.components == 0 {
            return Err(CliError::ConfigInvalid("counterexample needs at least one component".into()));
        }
        self.build().map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub n_values: Vec<f64>,
    pub z_values: Vec<C64>,
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub states: Vec<StateSpec>,
    pub markov_setups: usize,
    pub counterexample: CounterexampleConfig,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 20240229,
            dims: vec![2, 3, 4, 8],
            n_values: vec![0.5, 1.0, 2.0],
            z_values: vec![c64(0.0, -1.0), c64(0.5, -0.5), c64(1.0, 1.0), c64(-0.3, 1.5)],
            tolerances: BTreeMap::new(),
            output: None,
            format: Format::Json,
            states: Vec::new(),
            markov_setups: 20,
            counterexample: CounterexampleConfig::default(),
        }
    }
}

fn parse_u64(s: &str) -> Result<u64, ParseError> {
    let start = s.len() - s.trim_start().len();
    s.trim().parse().map_err(|_| ParseError::at(start, "expected a non-negative integer"))
}

fn parse_state(s: &str) -> Result<StateSpec, ParseError> {
    let (eigs, seed) = match s.find('@') {
        Some(i) => (&s[..i], Some(parse_u64(&s[i + 1..]).map_err(|e| e.shift(i + 1))?)),
        None => (s, None),
    };
    Ok(StateSpec { eigenvalues: parse_list(eigs, ',', parse_real)?, unitary_seed: seed })
}

/// Values of list keys, one entry per comma item; an empty value gives an
/// empty list.
fn list_items<T>(value: &str, item: impl Fn(&str) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_items(value, ',').into_iter().map(|(off, piece)| item(piece).map_err(|e| e.shift(off))).collect()
}

impl SuiteConfig {
    /// Parses config text. `source_name` labels parse errors.
    pub fn parse(text: &str, source_name: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.find('#').map_or(raw, |i| &raw[..i]);
            if line.trim().is_empty() {
                continue;
            }
            let Some(eq) = line.find('=') else {
                let col = line.len() - line.trim_start().len();
                return Err(ParseError::at(col, "expected 'key = value'").relocate(source_name, line_no, 0).into());
            };
            let key = line[..eq].trim();
            let key_col = line.len() - line.trim_start().len();
            let value = &line[eq + 1..];
            let at = |e: ParseError| e.relocate(source_name, line_no, eq + 1);
            let first = !seen.contains(&key);
            let repeated_scalar = || {
                ParseError::at(key_col, format!("duplicate key '{key}'")).relocate(source_name, line_no, 0)
            };
            match key {
                "dim" | "n" | "z" | "state" => {
                    if first {
                        match key {
                            "dim" => cfg.dims.clear(),
                            "n" => cfg.n_values.clear(),
                            "z" => cfg.z_values.clear(),
                            _ => cfg.states.clear(),
                        }
                    }
                    match key {
                        "dim" => cfg.dims.extend(list_items(value, parse_index).map_err(at)?),
                        "n" => cfg.n_values.extend(list_items(value, parse_real).map_err(at)?),
                        "z" => cfg.z_values.extend(list_items(value, parse_complex).map_err(at)?),
                        _ => cfg.states.push(parse_state(value).map_err(at)?),
                    }
                }
                _ if !first => return Err(repeated_scalar().into()),
                "seed" => cfg.seed = parse_u64(value).map_err(at)?,
                "output" => {
                    let v = value.trim();
                    cfg.output = if v.is_empty() { None } else { Some(PathBuf::from(v)) };
                }
                "format" => {
                    cfg.format = value.parse().map_err(|m: String| at(ParseError::at(0, m)))?;
                }
                "markov_setups" => cfg.markov_setups = parse_index(value).map_err(at)?,
                "counterexample.power" => {
                    let p = parse_index(value).map_err(at)?;
                    let p = u32::try_from(p).map_err(|_| at(ParseError::at(0, "power too large")))?;
                    cfg.counterexample.schedule = Schedule::Power(p);
                }
                "counterexample.k" => {
                    cfg.counterexample.schedule = Schedule::Explicit(parse_list(value, ',', parse_u64).map_err(at)?);
                }
                "counterexample.components" => cfg.counterexample.components = parse_index(value).map_err(at)?,
                "counterexample.from" => cfg.counterexample.from = parse_index(value).map_err(at)?,
                "counterexample.to" => cfg.counterexample.to = parse_index(value).map_err(at)?,
                _ if key.starts_with("tol.") => {
                    let name = &key[4..];
                    if Tolerances::default().get(name).is_none() {
                        return Err(ParseError::at(key_col + 4, format!("unknown tolerance '{name}'"))
                            .relocate(source_name, line_no, 0)
                            .into());
                    }
                    cfg.tolerances.insert(name.to_string(), parse_real(value).map_err(at)?);
                }
                _ => {
                    return Err(ParseError::at(key_col, format!("unknown key '{key}'")).relocate(source_name, line_no, 0).into())
                }
            }
            seen.push(key);
        }
        Ok(cfg)
    }

    /// Reads and parses a config file.
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Applies a `NAME=VALUE` tolerance override.
    pub fn override_tolerance(&mut self, spec: &str) -> Result<(), CliError> {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| CliError::ConfigInvalid(format!("tolerance override '{spec}' is not NAME=VALUE")))?;
        let name = name.trim();
        if Tolerances::default().get(name).is_none() {
            return Err(CliError::ConfigInvalid(format!(
                "unknown tolerance '{name}' (known: {})",
                Tolerances::NAMES.join(", ")
            )));
        }
        let v = parse_real(value).map_err(|e| e.relocate("--tol", 1, name.len() + 1))?;
        self.tolerances.insert(name.to_string(), v);
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::ConfigInvalid(m));
        if self.dims.is_empty() {
            return bad("dims list is empty".into());
        }
        if let Some(d) = self.dims.iter().find(|&&d| d == 0 || d > MAX_DIM) {
            return bad(format!("dimension {d} outside 1..={MAX_DIM}"));
        }
        if self.n_values.is_empty() {
            return bad("n list is empty".into());
        }
        if let Some(n) = self.n_values.iter().find(|&&n| !(n > 0.0)) {
            return bad(format!("smearing parameter {n} must be positive"));
        }
        if self.z_values.is_empty() {
            return bad("z list is empty".into());
        }
        if let Some(z) = self.z_values.iter().find(|z| !(z.im.abs() <= MAX_IM_Z) || !z.re.is_finite()) {
            return bad(format!("z = {z} has |Im z| > {MAX_IM_Z}"));
        }
        for (name, v) in &self.tolerances {
            if !(*v >= 0.0) || !v.is_finite() {
                return bad(format!("tolerance {name} = {v} must be finite and non-negative"));
            }
        }
        for s in &self.states {
            if s.eigenvalues.len() > MAX_STATE_DIM {
                return bad(format!("state dimension {} exceeds {MAX_STATE_DIM}", s.eigenvalues.len()));
            }
            if s.eigenvalues.iter().any(|&p| !(p > 0.0)) {
                return bad(format!("state eigenvalues {:?} must be positive", s.eigenvalues));
            }
        }
        if self.markov_setups == 0 {
            return bad("markov_setups must be positive".into());
        }
        self.counterexample.validate()
    }

    /// Default tolerances with the overrides applied.
    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        for (name, v) in &self.tolerances {
            t.set(name, *v);
        }
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repeated_keys_form_lists() {
        let cfg = SuiteConfig::parse("dim = 2, 3\ndim = 5 # five\nz = -i\nz = 1+i\nseed = 9\n", "t").unwrap();
        assert_eq!(cfg.dims, vec![2, 3, 5]);
        assert_eq!(cfg.z_values, vec![c64(0.0, -1.0), c64(1.0, 1.0)]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.n_values, SuiteConfig::default().n_values);
    }

    #[test]
    fn errors_point_at_the_offending_text() {
        let e = SuiteConfig::parse("seed = 1\nz = 1 + 2q\n", "cfg").unwrap_err();
        let CliError::Parse(p) = e else { panic!("{e}") };
        assert_eq!((p.line, p.column), (2, 10));
        let CliError::Parse(p) = SuiteConfig::parse("bogus = 1", "cfg").unwrap_err() else { panic!() };
        assert_eq!((p.line, p.column), (1, 1));
        let CliError::Parse(p) = SuiteConfig::parse("seed = 1\nseed = 2", "cfg").unwrap_err() else { panic!() };
        assert_eq!(p.line, 2);
        assert!(matches!(SuiteConfig::parse("tol.nope = 1", "cfg"), Err(CliError::Parse(_))));
    }

    #[test]
    fn validation() {
        let cfg = SuiteConfig::parse("dim =\n", "t").unwrap();
        assert!(matches!(cfg.validate(), Err(CliError::ConfigInvalid(_))));
        let cfg = SuiteConfig::parse("dim = 65\n", "t").unwrap();
        assert!(cfg.validate().is_err());
        let cfg = SuiteConfig::parse("z = 4.5i\n", "t").unwrap();
        assert!(cfg.validate().is_err());
        let cfg = SuiteConfig::parse("z = 1-4i\nstate = 2, 1 @ 3\n", "t").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.states[0].unitary_seed, Some(3));
        SuiteConfig::default().validate().unwrap();
    }

    #[test]
    fn tolerance_overrides() {
        let mut cfg = SuiteConfig::default();
        cfg.override_tolerance("algebra=1e-30").unwrap();
        assert_eq!(cfg.tolerances().algebra, 1e-30);
        assert!(cfg.override_tolerance("nope=1").is_err());
        assert!(cfg.override_tolerance("algebra").is_err());
    }
}
