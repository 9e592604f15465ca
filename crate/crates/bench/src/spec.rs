//! What to run, as parsed from the command line.

use std::fmt;
use std::path::PathBuf;

use gpr_core::ledger::CostModel;
use gpr_core::matmul::ChildShape;
use serde::{Deserialize, Serialize};

use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Verify,
    Bench,
    Slices,
    Fp,
    Cfg,
    Apsp,
    Triangle,
    Classify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Uniform,
    #[default]
    Wordram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentSpec {
    pub command: Command,
    pub sizes: Vec<usize>,
    pub bmax: u64,
    pub trials: u64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub k: Vec<u32>,
    pub n0: usize,
    pub child_shape: ChildShape,
    pub model: ModelChoice,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grammar: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub words: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub alphas: Option<String>,
    pub c: u32,
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
}

impl ExperimentSpec {
    /// Defaults that make each command meaningful without flags.
    pub fn new(command: Command) -> Self {
        let sizes = match command {
            Command::Verify => vec![2, 4, 8, 16],
            Command::Bench => vec![16, 32, 64, 128],
            Command::Slices | Command::Fp => vec![8, 16],
            Command::Apsp | Command::Triangle => vec![8, 16, 32],
            Command::Cfg | Command::Classify => Vec::new(),
        };
        ExperimentSpec {
            command,
            sizes,
            bmax: 1,
            trials: if command == Command::Bench { 1 } else { 20 },
            seed: 0,
            k: if command == Command::Slices { vec![2, 3, 4] } else { Vec::new() },
            n0: 1,
            child_shape: ChildShape::Panel,
            model: ModelChoice::Wordram,
            w: None,
            precision: None,
            grammar: None,
            words: Vec::new(),
            graph: None,
            alphas: None,
            c: 0,
            out_path: None,
            format: Format::Json,
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::InvalidSpec(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if let Some(&n) = self.sizes.iter().find(|&&n| n < 2) {
            return bad(format!("size {n} is below 2"));
        }
        if self.command == Command::Bench && self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return bad("bench sizes must be strictly ascending".into());
        }
        if self.bmax == 0 {
            return bad("Bmax must be at least 1".into());
        }
        if self.k.iter().any(|&k| k < 2) {
            return bad("slice counts must be at least 2".into());
        }
        if self.n0 == 0 || !self.n0.is_power_of_two() {
            return bad(format!("n0 = {} is not a power of two", self.n0));
        }
        if self.command == Command::Classify && self.alphas.is_none() {
            return bad("classify needs --alphas".into());
        }
        if self.command == Command::Cfg && self.grammar.is_some() && self.words.is_empty() {
            return bad("cfg with a grammar needs at least one --word".into());
        }
        Ok(())
    }

    pub fn cost_model(&self, n: usize) -> CostModel {
        match (self.model, self.w) {
            (ModelChoice::Uniform, _) => CostModel::UniformBit,
            (ModelChoice::Wordram, Some(w)) => CostModel::WordRam { w },
            (ModelChoice::Wordram, None) => CostModel::word_ram_for(n as u64, self.bmax),
        }
    }

    /// `--out`, else `<dir>/<command>.<ext>` with `dir` from `out_dir` or `reports`.
    pub fn resolve_out(&self, out_dir: Option<PathBuf>) -> PathBuf {
        self.out_path.clone().unwrap_or_else(|| {
            out_dir
                .unwrap_or_else(|| PathBuf::from("reports"))
                .join(format!("{}.{}", self.command, self.format.extension()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for c in [
            Command::Verify,
            Command::Bench,
            Command::Slices,
            Command::Fp,
            Command::Cfg,
            Command::Apsp,
            Command::Triangle,
        ] {
            ExperimentSpec::new(c).validate().unwrap();
        }
        assert!(ExperimentSpec::new(Command::Classify).validate().is_err());
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = ExperimentSpec::new(Command::Verify);
        s.sizes = vec![1];
        assert!(s.validate().is_err());
        let mut s = ExperimentSpec::new(Command::Bench);
        s.sizes = vec![32, 16];
        assert!(s.validate().is_err());
        let mut s = ExperimentSpec::new(Command::Verify);
        s.trials = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn output_path() {
        let mut s = ExperimentSpec::new(Command::Bench);
        s.format = Format::Csv;
        assert_eq!(s.resolve_out(None), PathBuf::from("reports/bench.csv"));
        assert_eq!(s.resolve_out(Some("/tmp/x".into())), PathBuf::from("/tmp/x/bench.csv"));
        s.out_path = Some("a.csv".into());
        assert_eq!(s.resolve_out(Some("/tmp/x".into())), PathBuf::from("a.csv"));
    }
}
