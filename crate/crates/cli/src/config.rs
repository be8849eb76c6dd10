//! Run configuration: flat `key = value` files with `[section]` headers, overridden by flags.

use std::path::{Path, PathBuf};

use clap::Args;
use ordo_core::classical::{HamiltonianSpec, MagneticTerm, Potential};
use ordo_core::kernels::{Grid1D, WaveFunction};
use ordo_core::opalg::{parse_symbol, PolySymbol, TauMeasure};
use ordo_core::propagator::SliceScheme;
use serde::Serialize;

use crate::error::CliError;

/// Every accepted key with the section it belongs to. Keys may also appear before any section header.
const KEYS: &[(&str, &str)] = &[
    ("model", "hbar"),
    ("model", "mass"),
    ("model", "potential"),
    ("model", "u0"),
    ("endpoints", "qa"),
    ("endpoints", "qb"),
    ("sweep", "eps"),
    ("sweep", "dt"),
    ("grid", "grid"),
    ("quantization", "symbol"),
    ("quantization", "measure"),
    ("quantization", "scheme"),
    ("propagation", "time"),
    ("propagation", "slices"),
    ("propagation", "steps"),
    ("propagation", "packet"),
    ("solver", "tol"),
    ("output", "out"),
];

/// Flags shared by every subcommand. Each overrides the matching config key.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    /// Config file (flat key = value with [section] headers)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// e.g. `harmonic:omega=1`, `linear:F=2`, `quartic:lambda=0.1`, `poly:1,0,0.5`, `gauss:V0=1,w=0.5`
    #[arg(long)]
    pub potential: Option<String>,
    /// Magnetic term, e.g. `poly:0,0.3`; `none` clears a configured one
    #[arg(long)]
    pub u0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub qa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub qb: Option<f64>,
    /// Comma list or geometric range `first:last:count`
    #[arg(long)]
    pub eps: Option<String>,
    /// `qmin,qmax,n`
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Measure spec (`uniform`, `weyl`, `tau:1/3`, `mix:1/2@1/4,1/2@3/4`); `;` separates several
    #[arg(long)]
    pub measure: Option<String>,
    /// Slice schemes, comma separated (`left,midpoint,bj`)
    #[arg(long)]
    pub scheme: Option<String>,
    /// Shooting tolerance on the endpoint miss
    #[arg(long)]
    pub tol: Option<f64>,
    /// Symbol such as `q^2p^2` or `1/2*p^2 + q^4`
    #[arg(long)]
    pub symbol: Option<String>,
    /// Propagation time
    #[arg(long)]
    pub time: Option<f64>,
    /// Slice counts for the convergence study
    #[arg(long)]
    pub slices: Option<String>,
    /// Step sizes for the phase-scaling study (list or range, strictly decreasing)
    #[arg(long)]
    pub dt: Option<String>,
    /// Chernoff step counts
    #[arg(long)]
    pub steps: Option<String>,
    /// Gaussian initial state `q0,sigma,p0`
    #[arg(long, allow_hyphen_values = true)]
    pub packet: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSpec {
    pub q_min: f64,
    pub q_max: f64,
    pub n: usize,
}

/// Fully resolved and validated configuration. Serialized form feeds the config hash.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub hbar: f64,
    pub mass: f64,
    pub potential: String,
    pub u0: Option<String>,
    pub qa: f64,
    pub qb: f64,
    pub eps: Vec<f64>,
    pub dt: Vec<f64>,
    pub grid: GridSpec,
    pub symbol: String,
    pub measure: String,
    pub scheme: String,
    pub time: f64,
    pub slices: Vec<usize>,
    pub steps: Vec<usize>,
    pub packet: [f64; 3],
    pub tol: f64,
    #[serde(skip)]
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            potential: "harmonic:omega=1".into(),
            u0: None,
            qa: 0.3,
            qb: 1.1,
            eps: geometric(1e-3, 1e-1, 12),
            dt: geometric(0.2, 0.00625, 6),
            grid: GridSpec { q_min: -8.0, q_max: 8.0, n: 512 },
            symbol: "q^2p^2".into(),
            measure: "uniform".into(),
            scheme: "left,midpoint,bj".into(),
            time: 0.5,
            slices: vec![16, 32, 64, 128, 256],
            steps: vec![8, 32, 128, 512],
            packet: [1.0, 1.0, 0.5],
            tol: 1e-13,
            out: PathBuf::from("out"),
        }
    }
}

#[derive(Debug)]
struct KeyError(String);

/// `count` geometrically spaced values from `first` to `last` inclusive.
fn geometric(first: f64, last: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![first];
    }
    let r = (last / first).ln() / (count - 1) as f64;
    (0..count).map(|i| if i == count - 1 { last } else { first * (r * i as f64).exp() }).collect()
}

fn parse_f64(key: &str, v: &str) -> Result<f64, KeyError> {
    let x: f64 = v.trim().parse().map_err(|_| KeyError(format!("{key}: '{v}' is not a number")))?;
    if !x.is_finite() {
        return Err(KeyError(format!("{key}: value must be finite")));
    }
    Ok(x)
}

fn parse_f64_list(key: &str, v: &str) -> Result<Vec<f64>, KeyError> {
    let v = v.trim();
    let parts: Vec<&str> = v.split(':').collect();
    let out = if parts.len() == 3 {
        let (a, b) = (parse_f64(key, parts[0])?, parse_f64(key, parts[1])?);
        let n: usize = parts[2].trim().parse().map_err(|_| KeyError(format!("{key}: bad count '{}'", parts[2])))?;
        if !(a > 0.0 && b > 0.0) || n == 0 {
            return Err(KeyError(format!("{key}: range needs positive endpoints and count")));
        }
        geometric(a, b, n)
    } else if parts.len() == 1 {
        v.split(',').map(|x| parse_f64(key, x)).collect::<Result<_, _>>()?
    } else {
        return Err(KeyError(format!("{key}: expected a comma list or first:last:count")));
    };
    if out.is_empty() {
        return Err(KeyError(format!("{key}: empty list")));
    }
    Ok(out)
}

fn parse_usize_list(key: &str, v: &str) -> Result<Vec<usize>, KeyError> {
    v.split(',').map(|x| x.trim().parse().map_err(|_| KeyError(format!("{key}: '{}' is not a count", x.trim())))).collect()
}

impl RunConfig {
    fn set(&mut self, key: &str, value: &str) -> Result<(), KeyError> {
        let v = value.trim();
        match key {
            "hbar" => self.hbar = parse_f64(key, v)?,
            "mass" => self.mass = parse_f64(key, v)?,
            "potential" => self.potential = v.to_string(),
            "u0" => self.u0 = if v.is_empty() || v.eq_ignore_ascii_case("none") { None } else { Some(v.to_string()) },
            "qa" => self.qa = parse_f64(key, v)?,
            "qb" => self.qb = parse_f64(key, v)?,
            "eps" => self.eps = parse_f64_list(key, v)?,
            "dt" => self.dt = parse_f64_list(key, v)?,
            "grid" => {
                let p: Vec<&str> = v.split(',').collect();
                if p.len() != 3 {
                    return Err(KeyError(format!("grid: expected qmin,qmax,n, got '{v}'")));
                }
                let n = p[2].trim().parse().map_err(|_| KeyError(format!("grid: bad point count '{}'", p[2].trim())))?;
                self.grid = GridSpec { q_min: parse_f64(key, p[0])?, q_max: parse_f64(key, p[1])?, n };
            }
            "symbol" => self.symbol = v.to_string(),
            "measure" => self.measure = v.to_string(),
            "scheme" => self.scheme = v.to_string(),
            "time" => self.time = parse_f64(key, v)?,
            "slices" => self.slices = parse_usize_list(key, v)?,
            "steps" => self.steps = parse_usize_list(key, v)?,
            "packet" => {
                let p = parse_f64_list(key, v)?;
                self.packet = p.try_into().map_err(|_| KeyError("packet: expected q0,sigma,p0".into()))?;
            }
            "tol" => self.tol = parse_f64(key, v)?,
            "out" => self.out = PathBuf::from(v),
            _ => return Err(KeyError(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies a config file's text on top of `self`. Errors carry `path:line`.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), CliError> {
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let at = |m: String| CliError::Config(format!("{origin}:{}: {m}", i + 1));
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| at("unterminated section header".into()))?.trim();
                if !KEYS.iter().any(|(s, _)| *s == name) {
                    return Err(at(format!("unknown section [{name}]")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| at(format!("expected key = value, got '{line}'")))?;
            let k = k.trim();
            let home = KEYS.iter().find(|(_, key)| *key == k).map(|(s, _)| *s).ok_or_else(|| at(format!("unknown key '{k}'")))?;
            if let Some(s) = &section {
                if s != home {
                    return Err(at(format!("key '{k}' belongs in [{home}], not [{s}]")));
                }
            }
            self.set(k, v).map_err(|e| at(e.0))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::default();
        cfg.apply_text(&text, &path.display().to_string())?;
        Ok(cfg)
    }

    /// Defaults, then the config file, then flags; validated before returning.
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let mut cfg = match &args.config {
            Some(p) => Self::from_file(p)?,
            None => Self::default(),
        };
        let flag = |cfg: &mut Self, k: &str, v: Option<String>| -> Result<(), CliError> {
            match v {
                Some(v) => cfg.set(k, &v).map_err(|e| CliError::Config(format!("--{}", e.0))),
                None => Ok(()),
            }
        };
        let num = |x: Option<f64>| x.map(|v| v.to_string());
        flag(&mut cfg, "hbar", num(args.hbar))?;
        flag(&mut cfg, "mass", num(args.mass))?;
        flag(&mut cfg, "potential", args.potential.clone())?;
        flag(&mut cfg, "u0", args.u0.clone())?;
        flag(&mut cfg, "qa", num(args.qa))?;
        flag(&mut cfg, "qb", num(args.qb))?;
        flag(&mut cfg, "eps", args.eps.clone())?;
        flag(&mut cfg, "dt", args.dt.clone())?;
        flag(&mut cfg, "grid", args.grid.clone())?;
        flag(&mut cfg, "symbol", args.symbol.clone())?;
        flag(&mut cfg, "measure", args.measure.clone())?;
        flag(&mut cfg, "scheme", args.scheme.clone())?;
        flag(&mut cfg, "time", num(args.time))?;
        flag(&mut cfg, "slices", args.slices.clone())?;
        flag(&mut cfg, "steps", args.steps.clone())?;
        flag(&mut cfg, "packet", args.packet.clone())?;
        flag(&mut cfg, "tol", num(args.tol))?;
        if let Some(o) = &args.out {
            cfg.out = o.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses every spec string once so that bad input fails before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.hbar > 0.0) || !(self.mass > 0.0) {
            return bad("hbar and mass must be positive".into());
        }
        if !(self.tol > 0.0) || !(self.time >= 0.0) {
            return bad("tol must be positive and time non-negative".into());
        }
        if self.eps.iter().any(|&e| !(e > 0.0)) || self.dt.iter().any(|&e| !(e > 0.0)) {
            return bad("eps and dt values must be positive".into());
        }
        if self.slices.iter().chain(&self.steps).any(|&n| n == 0) {
            return bad("slice and step counts must be positive".into());
        }
        if !(self.packet[1] > 0.0) {
            return bad("packet width must be positive".into());
        }
        self.hamiltonian()?;
        self.grid()?;
        self.measures()?;
        self.schemes()?;
        self.poly_symbol()?;
        Ok(())
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianSpec, CliError> {
        let v = Potential::parse(&self.potential, self.mass).map_err(|e| CliError::Config(e.to_string()))?;
        let u0 = self.u0.as_deref().map(MagneticTerm::parse).transpose().map_err(|e| CliError::Config(e.to_string()))?;
        HamiltonianSpec::with_magnetic(self.mass, u0, v).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn grid(&self) -> Result<Grid1D, CliError> {
        Grid1D::new(self.grid.q_min, self.grid.q_max, self.grid.n, self.hbar).map_err(|e| CliError::Config(format!("grid: {e}")))
    }

    pub fn measures(&self) -> Result<Vec<TauMeasure>, CliError> {
        self.measure
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| TauMeasure::parse(s).map_err(|e| CliError::Config(e.to_string())))
            .collect::<Result<Vec<_>, _>>()
            .and_then(|v| if v.is_empty() { Err(CliError::Config("no measure given".into())) } else { Ok(v) })
    }

    pub fn schemes(&self) -> Result<Vec<SliceScheme>, CliError> {
        let v = SliceScheme::parse_list(&self.scheme).map_err(|e| CliError::Config(e.to_string()))?;
        if v.is_empty() {
            return Err(CliError::Config("no slice scheme given".into()));
        }
        Ok(v)
    }

    pub fn poly_symbol(&self) -> Result<PolySymbol, CliError> {
        parse_symbol(&self.symbol).map_err(|e| CliError::Config(format!("symbol: {e}")))
    }

    pub fn packet(&self) -> Result<WaveFunction, CliError> {
        let [q0, sigma, p0] = self.packet;
        Ok(WaveFunction::gaussian(self.grid()?, q0, sigma, p0))
    }
}
