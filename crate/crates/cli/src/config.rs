use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Deserialize;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classify,
    Domain,
    Symbolic,
    Concrete,
    Compare,
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BatteryChoice {
    Primary,
    Permuted,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResolutionChoice {
    ZeroMap,
    Iso,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttachmentChoice {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Homology of PGL2 over affine elliptic coordinate rings of curves over
/// finite fields.
#[derive(Debug, Parser)]
#[command(name = "pgl2a", version)]
pub struct Args {
    /// Mode, as an alternative to --mode.
    #[arg(value_enum)]
    pub mode_arg: Option<Mode>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Field characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree.
    #[arg(long)]
    pub k: Option<u32>,
    /// a1,a2,a3,a4,a6 as integers, or as c0:c1:.. vectors when k > 1.
    #[arg(long, allow_hyphen_values = true)]
    pub curve: Option<String>,
    /// A classification summary (JSON) to use instead of a curve.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long)]
    pub q_max: Option<usize>,
    /// Cusp truncation depth.
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long, value_enum)]
    pub battery: Option<BatteryChoice>,
    /// Realization of the unconstrained e(p) edge map in symbolic mode.
    #[arg(long, value_enum)]
    pub resolution: Option<ResolutionChoice>,
    #[arg(long, value_enum)]
    pub attachment: Option<AttachmentChoice>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lift the group-homology ceilings.
    #[arg(long)]
    pub allow_large: bool,
    /// JSON file with defaults for any of the above.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Evaluate without the thread pool.
    #[arg(long)]
    pub sequential: bool,
    /// Seed for the selftest batteries.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    mode: Option<Mode>,
    p: Option<u32>,
    k: Option<u32>,
    curve: Option<String>,
    summary: Option<PathBuf>,
    q_max: Option<usize>,
    depth: Option<usize>,
    battery: Option<BatteryChoice>,
    resolution: Option<ResolutionChoice>,
    attachment: Option<AttachmentChoice>,
    format: Option<Format>,
    out: Option<PathBuf>,
    allow_large: Option<bool>,
    sequential: Option<bool>,
    seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub mode: Mode,
    pub field: Option<(u32, u32)>,
    pub curve: Option<String>,
    pub summary: Option<PathBuf>,
    pub q_max: usize,
    pub depth: usize,
    pub battery: BatteryChoice,
    pub resolution: ResolutionChoice,
    pub attachment: AttachmentChoice,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub allow_large: bool,
    pub sequential: bool,
    pub seed: u64,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

impl RunConfig {
    /// Flags first, then the config file, then per-mode defaults.
    pub fn resolve(args: Args) -> Result<Self, Failure> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .map_err(|e| Failure::Input(format!("bad config {}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let mode = match (args.mode_arg, args.mode) {
            (Some(a), Some(b)) if a != b => {
                return Err(Failure::Input(format!("conflicting modes {a:?} and {b:?}")))
            }
            (a, b) => a.or(b).or(file.mode),
        }
        .ok_or_else(|| Failure::Input("no mode given".into()))?;

        let p = args.p.or(file.p);
        let k = args.k.or(file.k);
        let field = match (p, k) {
            (Some(p), k) => Some((p, k.unwrap_or(1))),
            (None, Some(_)) => return Err(Failure::Input("--k given without --p".into())),
            (None, None) => None,
        };
        let curve = args.curve.or(file.curve);
        let summary = args.summary.or(file.summary);
        let (default_q, default_format) = match mode {
            Mode::Concrete | Mode::Compare => (2, Format::Json),
            Mode::Domain => (0, Format::Text),
            Mode::Selftest => (0, Format::Text),
            _ => (5, Format::Json),
        };
        let cfg = RunConfig {
            mode,
            field,
            curve,
            summary,
            q_max: args.q_max.or(file.q_max).unwrap_or(default_q),
            depth: args.depth.or(file.depth).unwrap_or(2),
            battery: args.battery.or(file.battery).unwrap_or(BatteryChoice::Both),
            resolution: args.resolution.or(file.resolution).unwrap_or(ResolutionChoice::ZeroMap),
            attachment: args.attachment.or(file.attachment).unwrap_or(AttachmentChoice::First),
            format: args.format.or(file.format).unwrap_or(default_format),
            out: args.out.or(file.out),
            allow_large: args.allow_large || file.allow_large.unwrap_or(false),
            sequential: args.sequential || file.sequential.unwrap_or(false),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), Failure> {
        let needs_curve = matches!(
            self.mode,
            Mode::Classify | Mode::Domain | Mode::Concrete | Mode::Compare
        ) || (self.mode == Mode::Symbolic && self.summary.is_none());
        if needs_curve && (self.field.is_none() || self.curve.is_none()) {
            return Err(Failure::Input(format!(
                "{:?} mode needs --p and --curve",
                self.mode
            )));
        }
        if self.summary.is_some() && self.curve.is_some() {
            return Err(Failure::Input("give either --curve or --summary, not both".into()));
        }
        if matches!(self.mode, Mode::Symbolic | Mode::Concrete | Mode::Compare) && self.q_max == 0 {
            return Err(Failure::Input("--q-max must be at least 1".into()));
        }
        if self.depth == 0 {
            return Err(Failure::Input("--depth must be at least 1".into()));
        }
        Ok(())
    }
}
