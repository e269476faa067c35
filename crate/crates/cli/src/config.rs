//! Experiment configuration: defaults, named presets, key=value config
//! files, and flag overrides. Angles are degrees at this boundary and
//! radians everywhere inside the library.

use spinsim_core::floquet::FloquetParams;
use spinsim_core::marginals::Observable;
use spinsim_core::SpinMagnitude;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Ci,
    Paper,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub s: SpinMagnitude,
    pub l: SpinMagnitude,
    pub params: FloquetParams,
    pub theta_s_deg: f64,
    pub phi_s_deg: f64,
    pub theta_l_deg: f64,
    pub phi_l_deg: f64,
    pub steps: usize,
    pub ensemble: usize,
    pub seed: u64,
    pub snapshots: Option<Vec<usize>>,
    pub observable: Observable,
    pub window: Option<(usize, usize)>,
}

/// Partial configuration collected from a preset, a config file, or flags.
/// Later layers override earlier ones field by field.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub s: Option<SpinMagnitude>,
    pub l: Option<SpinMagnitude>,
    pub a: Option<f64>,
    pub r: Option<f64>,
    pub gamma: Option<f64>,
    pub theta_s: Option<f64>,
    pub phi_s: Option<f64>,
    pub theta_l: Option<f64>,
    pub phi_l: Option<f64>,
    pub steps: Option<usize>,
    pub ensemble: Option<usize>,
    pub seed: Option<u64>,
    pub snapshots: Option<Vec<usize>>,
    pub observable: Option<Observable>,
    pub window: Option<(usize, usize)>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        // CI-scale spins with the canonical initial state theta(0) =
        // (20, 40, 160, 130) degrees and the mixed-regime coupling.
        ExperimentConfig {
            s: SpinMagnitude::from_two_j(40),
            l: SpinMagnitude::from_two_j(44),
            params: FloquetParams {
                a: 5.0,
                r: 1.1,
                gamma: 1.215,
            },
            theta_s_deg: 20.0,
            phi_s_deg: 40.0,
            theta_l_deg: 160.0,
            phi_l_deg: 130.0,
            steps: 100,
            ensemble: 100_000,
            seed: 1,
            snapshots: None,
            observable: Observable::Jz,
            window: None,
        }
    }
}

impl ExperimentConfig {
    pub fn preset(p: Preset) -> Self {
        let mut cfg = ExperimentConfig::default();
        match p {
            Preset::Ci => {}
            Preset::Paper => {
                cfg.s = SpinMagnitude::from_two_j(280);
                cfg.l = SpinMagnitude::from_two_j(308);
            }
        }
        cfg
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.s {
            self.s = v;
        }
        if let Some(v) = o.l {
            self.l = v;
        }
        if let Some(v) = o.a {
            self.params.a = v;
        }
        if let Some(v) = o.r {
            self.params.r = v;
        }
        if let Some(v) = o.gamma {
            self.params.gamma = v;
        }
        if let Some(v) = o.theta_s {
            self.theta_s_deg = v;
        }
        if let Some(v) = o.phi_s {
            self.phi_s_deg = v;
        }
        if let Some(v) = o.theta_l {
            self.theta_l_deg = v;
        }
        if let Some(v) = o.phi_l {
            self.phi_l_deg = v;
        }
        if let Some(v) = o.steps {
            self.steps = v;
        }
        if let Some(v) = o.ensemble {
            self.ensemble = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = &o.snapshots {
            self.snapshots = Some(v.clone());
        }
        if let Some(v) = o.observable {
            self.observable = v;
        }
        if let Some(v) = o.window {
            self.window = Some(v);
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("theta_s", self.theta_s_deg),
            ("phi_s", self.phi_s_deg),
            ("theta_l", self.theta_l_deg),
            ("phi_l", self.phi_l_deg),
        ] {
            if !(0.0..360.0).contains(&v) {
                return Err(format!("{name} = {v} is outside [0, 360) degrees"));
            }
        }
        if self.ensemble < 1 {
            return Err("ensemble size must be at least 1".into());
        }
        if let Some((n1, n2)) = self.window {
            if n1 > n2 {
                return Err(format!("window {n1}:{n2} is reversed"));
            }
        }
        if let Some(snaps) = &self.snapshots {
            if snaps.windows(2).any(|w| w[0] >= w[1]) {
                return Err("snapshot list must be strictly increasing".into());
            }
            if snaps.last().is_some_and(|&n| n > self.steps) {
                return Err("snapshot step beyond the run length".into());
            }
        }
        Ok(())
    }

    pub fn angles_rad(&self) -> (f64, f64, f64, f64) {
        let d = std::f64::consts::PI / 180.0;
        (
            self.theta_s_deg * d,
            self.phi_s_deg * d,
            self.theta_l_deg * d,
            self.phi_l_deg * d,
        )
    }

    /// Snapshot schedule: the configured list, or {0, steps} by default.
    pub fn snapshot_steps(&self) -> Vec<usize> {
        match &self.snapshots {
            Some(v) => v.clone(),
            None => {
                if self.steps == 0 {
                    vec![0]
                } else {
                    vec![0, self.steps]
                }
            }
        }
    }

    /// Equilibrium window: configured, or the last 40% of the run.
    pub fn equilibrium_window(&self) -> (usize, usize) {
        self.window
            .unwrap_or(((self.steps as f64 * 0.6) as usize, self.steps))
    }

    /// Config echo for the CSV manifest header.
    pub fn header_lines(&self, command: &str) -> Vec<String> {
        let mut lines = vec![
            format!("# spinsim {}", env!("CARGO_PKG_VERSION")),
            format!("# command = {command}"),
            format!("# s = {}", fmt_spin(self.s)),
            format!("# l = {}", fmt_spin(self.l)),
            format!("# a = {}", self.params.a),
            format!("# r = {}", self.params.r),
            format!("# gamma = {}", self.params.gamma),
            format!("# theta_s = {}", self.theta_s_deg),
            format!("# phi_s = {}", self.phi_s_deg),
            format!("# theta_l = {}", self.theta_l_deg),
            format!("# phi_l = {}", self.phi_l_deg),
            format!("# steps = {}", self.steps),
            format!("# ensemble = {}", self.ensemble),
            format!("# seed = {}", self.seed),
            format!("# observable = {}", observable_name(self.observable)),
        ];
        if let Some((n1, n2)) = self.window {
            lines.push(format!("# window = {n1}:{n2}"));
        }
        lines
    }
}

pub fn fmt_spin(j: SpinMagnitude) -> String {
    if j.two_j().is_multiple_of(2) {
        format!("{}", j.two_j() / 2)
    } else {
        format!("{}/2", j.two_j())
    }
}

pub fn observable_name(o: Observable) -> &'static str {
    match o {
        Observable::Lz => "lz",
        Observable::Jz => "jz",
        Observable::Lx => "lx",
    }
}

pub fn parse_spin(text: &str) -> Result<SpinMagnitude, String> {
    let v: f64 = text
        .trim()
        .parse()
        .map_err(|_| format!("invalid spin quantum number: {text}"))?;
    let two_j = 2.0 * v;
    if two_j < 0.0 || two_j > u32::MAX as f64 || (two_j - two_j.round()).abs() > 1e-9 {
        return Err(format!(
            "spin must be a non-negative integer or half-integer, got {text}"
        ));
    }
    Ok(SpinMagnitude::from_two_j(two_j.round() as u32))
}

pub fn parse_observable(text: &str) -> Result<Observable, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "lz" => Ok(Observable::Lz),
        "jz" => Ok(Observable::Jz),
        "lx" => Ok(Observable::Lx),
        other => Err(format!(
            "unknown observable: {other} (expected lz, jz, or lx)"
        )),
    }
}

pub fn parse_window(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| format!("window must be n1:n2, got {text}"))?;
    let n1 = a
        .trim()
        .parse()
        .map_err(|_| format!("invalid window start: {a}"))?;
    let n2 = b
        .trim()
        .parse()
        .map_err(|_| format!("invalid window end: {b}"))?;
    Ok((n1, n2))
}

pub fn parse_snapshots(text: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        out.push(
            part.parse()
                .map_err(|_| format!("invalid snapshot step: {part}"))?,
        );
    }
    if out.is_empty() {
        return Err("empty snapshot list".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn parse_preset(text: &str) -> Result<Preset, String> {
    match text.trim().to_ascii_lowercase().as_str() {
        "ci" => Ok(Preset::Ci),
        "paper" => Ok(Preset::Paper),
        other => Err(format!("unknown preset: {other} (expected ci or paper)")),
    }
}

/// Parse a flat key=value config file ('#' starts a comment).
pub fn parse_config_file(contents: &str) -> Result<Overrides, String> {
    let mut o = Overrides::default();
    for (lineno, raw) in contents.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key=value, got '{raw}'", lineno + 1))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| format!("line {}: invalid {what}: {value}", lineno + 1);
        match key {
            "s" => o.s = Some(parse_spin(value)?),
            "l" => o.l = Some(parse_spin(value)?),
            "a" => o.a = Some(value.parse().map_err(|_| bad("a"))?),
            "r" => o.r = Some(value.parse().map_err(|_| bad("r"))?),
            "gamma" => o.gamma = Some(value.parse().map_err(|_| bad("gamma"))?),
            "theta_s" => o.theta_s = Some(value.parse().map_err(|_| bad("theta_s"))?),
            "phi_s" => o.phi_s = Some(value.parse().map_err(|_| bad("phi_s"))?),
            "theta_l" => o.theta_l = Some(value.parse().map_err(|_| bad("theta_l"))?),
            "phi_l" => o.phi_l = Some(value.parse().map_err(|_| bad("phi_l"))?),
            "steps" => o.steps = Some(value.parse().map_err(|_| bad("steps"))?),
            "ensemble" => o.ensemble = Some(value.parse().map_err(|_| bad("ensemble"))?),
            "seed" => o.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "snapshots" => o.snapshots = Some(parse_snapshots(value)?),
            "observable" => o.observable = Some(parse_observable(value)?),
            "window" => o.window = Some(parse_window(value)?),
            other => return Err(format!("line {}: unknown key: {other}", lineno + 1)),
        }
    }
    Ok(o)
}
