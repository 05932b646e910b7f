//! Flag and config-file parsing.
//!
//! Configuration is resolved per key as: command-line flag, then config-file
//! entry, then built-in default. Config files are line-oriented `key = value`
//! text; `#` starts a comment. Unknown keys are rejected in both sources.

use crate::error::CliError;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    MachZehnder,
    Eraser,
    Cat,
    Spam,
    PartialRecord,
    PointerSieve,
    InfoCurve,
    MpFit,
    Emergence,
    Selftest,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::MachZehnder => "mach-zehnder",
            CommandKind::Eraser => "eraser",
            CommandKind::Cat => "cat",
            CommandKind::Spam => "spam",
            CommandKind::PartialRecord => "partial-record",
            CommandKind::PointerSieve => "pointer-sieve",
            CommandKind::InfoCurve => "info-curve",
            CommandKind::MpFit => "mp-fit",
            CommandKind::Emergence => "emergence",
            CommandKind::Selftest => "selftest",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "mach-zehnder" => CommandKind::MachZehnder,
            "eraser" => CommandKind::Eraser,
            "cat" => CommandKind::Cat,
            "spam" => CommandKind::Spam,
            "partial-record" => CommandKind::PartialRecord,
            "pointer-sieve" => CommandKind::PointerSieve,
            "info-curve" => CommandKind::InfoCurve,
            "mp-fit" => CommandKind::MpFit,
            "emergence" => CommandKind::Emergence,
            "selftest" => CommandKind::Selftest,
            _ => return None,
        })
    }

    /// Keys this command accepts, beyond the globals.
    fn allowed_keys(&self) -> &'static [&'static str] {
        match self {
            CommandKind::MachZehnder => &["gamma", "gamma-grid", "detector", "emit-plot"],
            CommandKind::Eraser => &["outcome"],
            CommandKind::Cat => &["n", "gamma"],
            CommandKind::Spam => &["n", "alpha"],
            CommandKind::PartialRecord => &["n", "theta", "theta-grid"],
            CommandKind::PointerSieve => &["model", "n", "theta", "depth", "resolution"],
            CommandKind::InfoCurve => &["n", "alpha", "delta", "subset-cap", "emit-plot"],
            CommandKind::MpFit => &["model", "n", "fragment", "theta", "depth", "resolution"],
            CommandKind::Emergence => {
                &["n-min", "n-max", "seeds", "depth", "resolution", "detail", "emit-plot"]
            }
            CommandKind::Selftest => &["quick"],
        }
    }

    /// Whether this command draws random numbers and therefore requires a seed.
    fn seed_required(&self, model: ModelKind) -> bool {
        match self {
            CommandKind::Emergence | CommandKind::InfoCurve => true,
            CommandKind::PointerSieve | CommandKind::MpFit => model == ModelKind::Random,
            _ => false,
        }
    }
}

const GLOBAL_KEYS: &[&str] = &["seed", "output", "budget-qubits", "threads", "config"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Spam,
    PartialRecord,
    Random,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Spam => "spam",
            ModelKind::PartialRecord => "partial-record",
            ModelKind::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EraserChoice {
    Plus,
    Minus,
    Both,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub gamma: f64,
    pub gamma_grid: Option<usize>,
    pub detector_on: bool,
    pub outcome: EraserChoice,
    pub n: usize,
    pub alpha: f64,
    pub theta: f64,
    pub theta_grid: Option<usize>,
    pub depth: usize,
    pub delta: f64,
    pub resolution: usize,
    pub model: ModelKind,
    pub fragment: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub seeds: usize,
    pub subset_cap: usize,
    pub detail: bool,
    pub quick: bool,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub emit_plot: Option<PathBuf>,
    pub budget_qubits: usize,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::Selftest,
            gamma: 0.0,
            gamma_grid: None,
            detector_on: true,
            outcome: EraserChoice::Both,
            n: 4,
            alpha: std::f64::consts::FRAC_1_SQRT_2,
            theta: std::f64::consts::PI,
            theta_grid: None,
            depth: 2,
            delta: 0.1,
            resolution: 64,
            model: ModelKind::Spam,
            fragment: 1,
            n_min: 1,
            n_max: 4,
            seeds: 20,
            subset_cap: 200,
            detail: false,
            quick: false,
            seed: None,
            output: None,
            emit_plot: None,
            budget_qubits: 12,
            threads: 0,
        }
    }
}

/// Keys that are flags without values on the command line.
const BARE_FLAGS: &[&str] = &["detail", "quick"];

fn parse_key_values_from_args(
    args: &[String],
    allowed: &dyn Fn(&str) -> bool,
) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    let mut i = 0;
    while i < args.len() {
        let arg = &args[i];
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| CliError::config(format!("expected a --flag, found `{arg}`")))?;
        if !allowed(key) {
            return Err(CliError::config(format!("unknown key `{key}`")));
        }
        let value = if BARE_FLAGS.contains(&key) {
            "true".to_string()
        } else {
            i += 1;
            args.get(i)
                .cloned()
                .ok_or_else(|| CliError::config(format!("missing value for --{key}")))?
        };
        if map.insert(key.to_string(), value).is_some() {
            return Err(CliError::config(format!("duplicate key `{key}`")));
        }
        i += 1;
    }
    Ok(map)
}

fn parse_key_values_from_file(
    path: &std::path::Path,
    allowed: &dyn Fn(&str) -> bool,
) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read config file {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim();
        if key == "config" {
            return Err(CliError::config("config files cannot nest".into()));
        }
        if !allowed(key) {
            return Err(CliError::config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(map)
}

struct Resolver {
    flags: BTreeMap<String, String>,
    file: BTreeMap<String, String>,
}

impl Resolver {
    fn get(&self, key: &str) -> Option<&str> {
        self.flags
            .get(key)
            .or_else(|| self.file.get(key))
            .map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|_| CliError::config(format!("malformed value `{raw}` for `{key}`"))),
        }
    }
}

/// Parse the command line (and optional `--config` file) into a validated
/// [`RunConfig`]. Flags override file values.
pub fn parse_config(args: &[String]) -> Result<RunConfig, CliError> {
    let (command_name, rest) = args
        .split_first()
        .ok_or_else(|| CliError::config("missing command".into()))?;
    let command = CommandKind::from_name(command_name)
        .ok_or_else(|| CliError::config(format!("unknown command `{command_name}`")))?;

    let allowed = move |key: &str| -> bool {
        GLOBAL_KEYS.contains(&key) || command.allowed_keys().contains(&key)
    };
    let flags = parse_key_values_from_args(rest, &allowed)?;
    let file = match flags.get("config") {
        Some(path) => parse_key_values_from_file(std::path::Path::new(path), &allowed)?,
        None => BTreeMap::new(),
    };
    let resolver = Resolver { flags, file };

    let mut config = RunConfig { command, ..RunConfig::default() };
    if let Some(v) = resolver.parse::<f64>("gamma")? {
        config.gamma = v;
    }
    if let Some(v) = resolver.parse::<usize>("gamma-grid")? {
        config.gamma_grid = Some(v);
    }
    if let Some(v) = resolver.get("detector") {
        config.detector_on = match v {
            "on" => true,
            "off" => false,
            other => {
                return Err(CliError::config(format!(
                    "malformed value `{other}` for `detector` (expected on|off)"
                )))
            }
        };
    }
    if let Some(v) = resolver.get("outcome") {
        config.outcome = match v {
            "plus" => EraserChoice::Plus,
            "minus" => EraserChoice::Minus,
            "both" => EraserChoice::Both,
            other => {
                return Err(CliError::config(format!(
                    "malformed value `{other}` for `outcome` (expected plus|minus|both)"
                )))
            }
        };
    }
    if let Some(v) = resolver.get("model") {
        config.model = match v {
            "spam" => ModelKind::Spam,
            "partial-record" => ModelKind::PartialRecord,
            "random" => ModelKind::Random,
            other => {
                return Err(CliError::config(format!(
                    "malformed value `{other}` for `model` (expected spam|partial-record|random)"
                )))
            }
        };
    }
    if let Some(v) = resolver.parse::<usize>("n")? {
        config.n = v;
    }
    if let Some(v) = resolver.parse::<f64>("alpha")? {
        config.alpha = v;
    }
    if let Some(v) = resolver.parse::<f64>("theta")? {
        config.theta = v;
    }
    if let Some(v) = resolver.parse::<usize>("theta-grid")? {
        config.theta_grid = Some(v);
    }
    if let Some(v) = resolver.parse::<usize>("depth")? {
        config.depth = v;
    }
    if let Some(v) = resolver.parse::<f64>("delta")? {
        config.delta = v;
    }
    if let Some(v) = resolver.parse::<usize>("resolution")? {
        config.resolution = v;
    }
    if let Some(v) = resolver.parse::<usize>("fragment")? {
        config.fragment = v;
    }
    if let Some(v) = resolver.parse::<usize>("n-min")? {
        config.n_min = v;
    }
    if let Some(v) = resolver.parse::<usize>("n-max")? {
        config.n_max = v;
    }
    if let Some(v) = resolver.parse::<usize>("seeds")? {
        config.seeds = v;
    }
    if let Some(v) = resolver.parse::<usize>("subset-cap")? {
        config.subset_cap = v;
    }
    if let Some(v) = resolver.parse::<bool>("detail")? {
        config.detail = v;
    }
    if let Some(v) = resolver.parse::<bool>("quick")? {
        config.quick = v;
    }
    if let Some(v) = resolver.parse::<u64>("seed")? {
        config.seed = Some(v);
    }
    if let Some(v) = resolver.get("output") {
        config.output = Some(PathBuf::from(v));
    }
    if let Some(v) = resolver.get("emit-plot") {
        config.emit_plot = Some(PathBuf::from(v));
    }
    if let Some(v) = resolver.parse::<usize>("budget-qubits")? {
        config.budget_qubits = v;
    }
    if let Some(v) = resolver.parse::<usize>("threads")? {
        config.threads = v;
    }

    validate(&config)?;
    Ok(config)
}

fn validate(config: &RunConfig) -> Result<(), CliError> {
    let range = |ok: bool, msg: String| if ok { Ok(()) } else { Err(CliError::config(msg)) };
    range(
        (0.0..=1.0).contains(&config.gamma),
        format!("gamma {} outside [0, 1]", config.gamma),
    )?;
    range(
        (0.0..=std::f64::consts::PI).contains(&config.theta),
        format!("theta {} outside [0, pi]", config.theta),
    )?;
    range(
        (0.0..=1.0).contains(&config.alpha),
        format!("alpha {} outside [0, 1]", config.alpha),
    )?;
    range(config.delta > 0.0 && config.delta < 1.0, format!("delta {} outside (0, 1)", config.delta))?;
    if let Some(k) = config.gamma_grid {
        range(k >= 2, format!("gamma-grid {k} needs at least 2 points"))?;
    }
    if let Some(k) = config.theta_grid {
        range(k >= 2, format!("theta-grid {k} needs at least 2 points"))?;
    }
    range(config.depth >= 1, "depth must be >= 1".into())?;
    range(config.resolution >= 8, format!("resolution {} below 8", config.resolution))?;
    range(config.seeds >= 1, "seeds must be >= 1".into())?;
    range(config.subset_cap >= 1, "subset-cap must be >= 1".into())?;
    match config.command {
        CommandKind::Cat => {} // n = 0 is meaningful: no environment.
        CommandKind::Spam
        | CommandKind::PartialRecord
        | CommandKind::PointerSieve
        | CommandKind::InfoCurve
        | CommandKind::MpFit => {
            range(config.n >= 1, "n must be >= 1".into())?;
        }
        CommandKind::Emergence => {
            range(config.n_min >= 1, "n-min must be >= 1".into())?;
            range(
                config.n_max >= config.n_min,
                format!("n-max {} below n-min {}", config.n_max, config.n_min),
            )?;
        }
        _ => {}
    }
    if config.command == CommandKind::MpFit {
        range(
            (1..=config.n).contains(&config.fragment),
            format!("fragment {} outside 1..={}", config.fragment, config.n),
        )?;
    }
    if config.command == CommandKind::InfoCurve {
        range(
            config.alpha > 0.0 && config.alpha < 1.0,
            "info-curve needs 0 < alpha < 1 (otherwise the system carries no information)".into(),
        )?;
    }
    if config.command.seed_required(config.model) && config.seed.is_none() {
        return Err(CliError::config(format!(
            "`{}` is stochastic here and requires --seed",
            config.command.name()
        )));
    }
    if config.emit_plot.is_some() && config.output.is_none() {
        return Err(CliError::config(
            "--emit-plot needs --output so the script can locate the CSV".into(),
        ));
    }
    Ok(())
}

/// One-line echo of the fully resolved configuration (written to stderr).
pub fn describe(config: &RunConfig) -> String {
    let mut parts = vec![format!("command={}", config.command.name())];
    let keys = config.command.allowed_keys();
    let has = |k: &str| keys.contains(&k);
    if has("detector") {
        parts.push(format!("detector={}", if config.detector_on { "on" } else { "off" }));
    }
    if has("gamma") {
        parts.push(format!("gamma={}", config.gamma));
    }
    if has("gamma-grid") {
        if let Some(k) = config.gamma_grid {
            parts.push(format!("gamma-grid={k}"));
        }
    }
    if has("outcome") {
        let name = match config.outcome {
            EraserChoice::Plus => "plus",
            EraserChoice::Minus => "minus",
            EraserChoice::Both => "both",
        };
        parts.push(format!("outcome={name}"));
    }
    if has("model") {
        parts.push(format!("model={}", config.model.name()));
    }
    if has("n") {
        parts.push(format!("n={}", config.n));
    }
    if has("alpha") {
        parts.push(format!("alpha={}", config.alpha));
    }
    if has("theta") {
        parts.push(format!("theta={}", config.theta));
    }
    if has("theta-grid") {
        if let Some(k) = config.theta_grid {
            parts.push(format!("theta-grid={k}"));
        }
    }
    if has("fragment") {
        parts.push(format!("fragment={}", config.fragment));
    }
    if has("depth") {
        parts.push(format!("depth={}", config.depth));
    }
    if has("delta") {
        parts.push(format!("delta={}", config.delta));
    }
    if has("resolution") {
        parts.push(format!("resolution={}", config.resolution));
    }
    if has("n-min") {
        parts.push(format!("n-min={} n-max={}", config.n_min, config.n_max));
    }
    if has("seeds") {
        parts.push(format!("seeds={}", config.seeds));
    }
    if has("subset-cap") {
        parts.push(format!("subset-cap={}", config.subset_cap));
    }
    if has("detail") {
        parts.push(format!("detail={}", config.detail));
    }
    if has("quick") {
        parts.push(format!("quick={}", config.quick));
    }
    if let Some(seed) = config.seed {
        parts.push(format!("seed={seed}"));
    }
    parts.push(format!("budget-qubits={}", config.budget_qubits));
    parts.push(format!("threads={}", config.threads));
    parts.push(format!(
        "output={}",
        config.output.as_ref().map_or("stdout".into(), |p| p.display().to_string())
    ));
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_a_simple_command() {
        let config = parse_config(&args(&["mach-zehnder", "--gamma", "0"])).unwrap();
        assert_eq!(config.command, CommandKind::MachZehnder);
        assert_eq!(config.gamma, 0.0);
        assert!(config.detector_on);
    }

    #[test]
    fn rejects_out_of_range_and_unknown() {
        assert!(parse_config(&args(&["mach-zehnder", "--gamma", "1.5"])).is_err());
        assert!(parse_config(&args(&["mach-zehnder", "--frobnicate", "1"])).is_err());
        assert!(parse_config(&args(&["mach-zehnder", "--n", "4"])).is_err());
        assert!(parse_config(&args(&["no-such-command"])).is_err());
        assert!(parse_config(&args(&["spam", "--n"])).is_err());
    }

    #[test]
    fn flags_override_file_values() {
        let dir = std::env::temp_dir().join(format!("qdarwin-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "n = 4\nalpha = 0.6\n").unwrap();
        let config = parse_config(&args(&[
            "spam",
            "--config",
            path.to_str().unwrap(),
            "--n",
            "6",
        ]))
        .unwrap();
        assert_eq!(config.n, 6);
        assert_eq!(config.alpha, 0.6);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn file_with_unknown_key_is_rejected() {
        let dir = std::env::temp_dir().join(format!("qdarwin-config-bad-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "bogus = 1\n").unwrap();
        assert!(parse_config(&args(&["spam", "--config", path.to_str().unwrap()])).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn stochastic_commands_require_a_seed() {
        assert!(parse_config(&args(&["emergence", "--n-max", "3"])).is_err());
        assert!(parse_config(&args(&["emergence", "--n-max", "3", "--seed", "42"])).is_ok());
        assert!(parse_config(&args(&["info-curve", "--n", "4"])).is_err());
        assert!(parse_config(&args(&["mp-fit", "--model", "random"])).is_err());
        assert!(parse_config(&args(&["mp-fit", "--model", "spam"])).is_ok());
    }

    #[test]
    fn describe_mentions_resolved_values() {
        let config = parse_config(&args(&["spam", "--n", "6"])).unwrap();
        let line = describe(&config);
        assert!(line.contains("command=spam"));
        assert!(line.contains("n=6"));
        assert!(line.contains("output=stdout"));
    }
}
