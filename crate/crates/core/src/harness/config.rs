use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::dispersion::{Modulation, NormRequest, SpaceNorm, TimeMode};
use crate::error::{Error, Result};

/// Spatial norm requested from the besov layer, written `space:s:p:r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormSpec {
    pub space: NormSpace,
    pub s: f64,
    pub p: f64,
    pub r: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormSpace {
    Lebesgue,
    Sobolev,
    Besov,
}

impl NormSpace {
    fn as_str(self) -> &'static str {
        match self {
            NormSpace::Lebesgue => "lebesgue",
            NormSpace::Sobolev => "sobolev",
            NormSpace::Besov => "besov",
        }
    }
}

fn fmt_f64(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x}")
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    match v.trim() {
        "inf" => Ok(f64::INFINITY),
        t => t.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{t}' as a number"))),
    }
}

impl NormSpec {
    pub fn id(&self) -> String {
        format!("{}:{}:{}:{}", self.space.as_str(), fmt_f64(self.s), fmt_f64(self.p), fmt_f64(self.r))
    }

    fn validate(&self) -> Result<()> {
        let ok = self.p >= 1.0
            && self.r >= 1.0
            && self.s.is_finite()
            && match self.space {
                NormSpace::Lebesgue => self.s == 0.0,
                NormSpace::Sobolev => self.p == 2.0 && self.s.abs() <= 2.0,
                NormSpace::Besov => self.s.abs() <= 2.0,
            };
        if !ok {
            return Err(Error::Config(format!("norm '{}' outside the supported range", self.id())));
        }
        Ok(())
    }
}

impl FromStr for NormSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Config(format!("norm '{s}': expected space:s:p:r")));
        }
        let space = match parts[0] {
            "lebesgue" => NormSpace::Lebesgue,
            "sobolev" => NormSpace::Sobolev,
            "besov" => NormSpace::Besov,
            other => return Err(Error::Config(format!("unknown norm space '{other}'"))),
        };
        let spec = NormSpec {
            space,
            s: parse_f64("norms", parts[1])?,
            p: parse_f64("norms", parts[2])?,
            r: parse_f64("norms", parts[3])?,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn disp_id(n: &NormRequest) -> String {
    let (space, i) = match n.norm {
        SpaceNorm::Lebesgue(r) => ("lebesgue", r),
        SpaceNorm::Anisotropic(m) => ("anisotropic", m),
    };
    let time = match n.time {
        TimeMode::Fixed => "fixed",
        TimeMode::Endpoint => "endpoint",
    };
    format!("{space}:{}:{time}", fmt_f64(i))
}

fn parse_disp(s: &str) -> Result<NormRequest> {
    let parts: Vec<&str> = s.trim().split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("disp.norms entry '{s}': expected space:index:time")));
    }
    let i = parse_f64("disp.norms", parts[1])?;
    let norm = match parts[0] {
        "lebesgue" if i >= 2.0 => SpaceNorm::Lebesgue(i),
        "anisotropic" if i > 2.0 => SpaceNorm::Anisotropic(i),
        _ => return Err(Error::Config(format!("disp.norms entry '{s}' unsupported"))),
    };
    let time = match parts[2] {
        "fixed" => TimeMode::Fixed,
        "endpoint" => TimeMode::Endpoint,
        other => return Err(Error::Config(format!("unknown time mode '{other}'"))),
    };
    Ok(NormRequest { norm, time })
}

/// Plain-text `key = value` run description.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: String,
    pub grid_n: [usize; 3],
    pub grid_box: f64,
    pub nu: f64,
    pub nu_prime: f64,
    pub eps_list: Vec<f64>,
    pub recipe: String,
    pub gamma: f64,
    pub delta: f64,
    pub k0: f64,
    pub c0: f64,
    pub strong: bool,
    pub u_amp: f64,
    pub b_amp: f64,
    pub v_amp: f64,
    pub c_amp: f64,
    pub t_end: f64,
    pub dt: f64,
    pub samples: usize,
    pub checkpoint_every: usize,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub norms: Vec<NormSpec>,
    pub d0: Option<f64>,
    pub disp_norms: Vec<NormRequest>,
    pub disp_modulation: Modulation,
    pub disp_refinement: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            experiment: "sweep".into(),
            grid_n: [32, 32, 16],
            grid_box: 2.0 * std::f64::consts::PI,
            nu: 0.05,
            nu_prime: 0.05,
            eps_list: vec![0.2, 0.1, 0.05, 0.025],
            recipe: "ill-prepared".into(),
            gamma: 0.0,
            delta: 0.1,
            k0: 1.0,
            c0: 1.0,
            strong: false,
            u_amp: 1.0,
            b_amp: 0.5,
            v_amp: 0.0,
            c_amp: 0.3,
            t_end: 1.0,
            dt: 2e-3,
            samples: 100,
            checkpoint_every: 0,
            out_dir: PathBuf::from("runs"),
            seed: 1,
            norms: vec![
                NormSpec { space: NormSpace::Lebesgue, s: 0.0, p: 2.0, r: 2.0 },
                NormSpec { space: NormSpace::Lebesgue, s: 0.0, p: 4.0, r: 2.0 },
            ],
            d0: None,
            disp_norms: vec![
                NormRequest { norm: SpaceNorm::Lebesgue(2.0), time: TimeMode::Fixed },
                NormRequest { norm: SpaceNorm::Lebesgue(f64::INFINITY), time: TimeMode::Endpoint },
                NormRequest { norm: SpaceNorm::Anisotropic(f64::INFINITY), time: TimeMode::Endpoint },
            ],
            disp_modulation: Modulation::Toroidal,
            disp_refinement: 1.0,
        }
    }
}

const KEYS: &[&str] = &[
    "experiment.kind",
    "grid.n",
    "grid.box",
    "phys.nu",
    "phys.nu_prime",
    "sweep.eps_list",
    "sweep.d0",
    "data.recipe",
    "data.gamma",
    "data.delta",
    "data.k0",
    "data.c0",
    "data.strong",
    "data.u_amp",
    "data.b_amp",
    "data.v_amp",
    "data.c_amp",
    "time.T",
    "time.dt",
    "time.samples",
    "time.checkpoint_every",
    "out.dir",
    "seed",
    "norms",
    "disp.norms",
    "disp.modulation",
    "disp.refinement",
];

fn list<T>(key: &str, v: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    v.split(',').filter(|s| !s.trim().is_empty()).map(|s| f(s.trim())).collect::<Result<_>>().map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{key}: {m}")),
        e => e,
    })
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}' as a count")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
            }
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            e => e,
        })
    }

    fn set(&mut self, key: &str, v: &str) -> Result<()> {
        let num = |v: &str| parse_f64(key, v);
        match key {
            "experiment.kind" => self.experiment = v.to_string(),
            "grid.n" => {
                let n = list(key, v, |s| parse_usize(key, s))?;
                self.grid_n = match n.as_slice() {
                    [a] => [*a, *a, *a],
                    [a, b, c] => [*a, *b, *c],
                    _ => return Err(Error::Config("grid.n: give one size or three".into())),
                };
            }
            "grid.box" => self.grid_box = num(v)?,
            "phys.nu" => self.nu = num(v)?,
            "phys.nu_prime" => self.nu_prime = num(v)?,
            "sweep.eps_list" => self.eps_list = list(key, v, num)?,
            "sweep.d0" => self.d0 = if v == "none" { None } else { Some(num(v)?) },
            "data.recipe" => self.recipe = v.to_string(),
            "data.gamma" => self.gamma = num(v)?,
            "data.delta" => self.delta = num(v)?,
            "data.k0" => self.k0 = num(v)?,
            "data.c0" => self.c0 = num(v)?,
            "data.strong" => {
                self.strong = v.parse().map_err(|_| Error::Config(format!("data.strong: '{v}' is not a boolean")))?
            }
            "data.u_amp" => self.u_amp = num(v)?,
            "data.b_amp" => self.b_amp = num(v)?,
            "data.v_amp" => self.v_amp = num(v)?,
            "data.c_amp" => self.c_amp = num(v)?,
            "time.T" => self.t_end = num(v)?,
            "time.dt" => self.dt = num(v)?,
            "time.samples" => self.samples = parse_usize(key, v)?,
            "time.checkpoint_every" => self.checkpoint_every = parse_usize(key, v)?,
            "out.dir" => self.out_dir = PathBuf::from(v),
            "seed" => self.seed = v.parse().map_err(|_| Error::Config(format!("seed: '{v}' is not a 64-bit integer")))?,
            "norms" => self.norms = list(key, v, str::parse)?,
            "disp.norms" => self.disp_norms = list(key, v, parse_disp)?,
            "disp.modulation" => {
                self.disp_modulation = match v {
                    "toroidal" => Modulation::Toroidal,
                    "poloidal" => Modulation::Poloidal,
                    _ => return Err(Error::Config(format!("disp.modulation: unknown '{v}'"))),
                }
            }
            "disp.refinement" => self.disp_refinement = num(v)?,
            _ => unreachable!(),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.eps_list.is_empty() || self.eps_list.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return bad("sweep.eps_list must hold positive values".into());
        }
        if self.eps_list.windows(2).any(|w| w[1] >= w[0]) {
            return bad("sweep.eps_list must be strictly decreasing".into());
        }
        if self.grid_n.iter().any(|&n| n < 4 || !n.is_power_of_two()) {
            return bad(format!("grid.n must be powers of two >= 4, got {:?}", self.grid_n));
        }
        if !(self.grid_box > 0.0 && self.grid_box.is_finite()) {
            return bad("grid.box must be positive".into());
        }
        if !(self.nu >= 0.0 && self.nu_prime >= 0.0) {
            return bad("phys.nu and phys.nu_prime must be nonnegative".into());
        }
        if !(self.t_end > 0.0 && self.dt > 0.0 && self.dt <= self.t_end) {
            return bad("need 0 < time.dt <= time.T".into());
        }
        if self.samples == 0 {
            return bad("time.samples must be positive".into());
        }
        if !(self.disp_refinement >= 1.0) {
            return bad("disp.refinement must be >= 1".into());
        }
        for a in [self.u_amp, self.b_amp, self.v_amp, self.c_amp, self.k0, self.c0] {
            if !(a >= 0.0 && a.is_finite()) {
                return bad("amplitudes and scaling constants must be finite and nonnegative".into());
            }
        }
        Ok(())
    }

    /// Canonical text; `parse(emit())` reproduces the value and `emit` is a fixed point.
    pub fn emit(&self) -> String {
        let join = |v: Vec<String>| v.join(",");
        let n = self.grid_n;
        let mut out = String::new();
        let mut put = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        put("experiment.kind", self.experiment.clone());
        put("grid.n", format!("{},{},{}", n[0], n[1], n[2]));
        put("grid.box", fmt_f64(self.grid_box));
        put("phys.nu", fmt_f64(self.nu));
        put("phys.nu_prime", fmt_f64(self.nu_prime));
        put("sweep.eps_list", join(self.eps_list.iter().map(|&e| fmt_f64(e)).collect()));
        put("sweep.d0", self.d0.map(fmt_f64).unwrap_or_else(|| "none".into()));
        put("data.recipe", self.recipe.clone());
        put("data.gamma", fmt_f64(self.gamma));
        put("data.delta", fmt_f64(self.delta));
        put("data.k0", fmt_f64(self.k0));
        put("data.c0", fmt_f64(self.c0));
        put("data.strong", self.strong.to_string());
        put("data.u_amp", fmt_f64(self.u_amp));
        put("data.b_amp", fmt_f64(self.b_amp));
        put("data.v_amp", fmt_f64(self.v_amp));
        put("data.c_amp", fmt_f64(self.c_amp));
        put("time.T", fmt_f64(self.t_end));
        put("time.dt", fmt_f64(self.dt));
        put("time.samples", self.samples.to_string());
        put("time.checkpoint_every", self.checkpoint_every.to_string());
        put("out.dir", self.out_dir.display().to_string());
        put("seed", self.seed.to_string());
        put("norms", join(self.norms.iter().map(NormSpec::id).collect()));
        put("disp.norms", join(self.disp_norms.iter().map(disp_id).collect()));
        put(
            "disp.modulation",
            match self.disp_modulation {
                Modulation::Toroidal => "toroidal".into(),
                Modulation::Poloidal => "poloidal".into(),
            },
        );
        put("disp.refinement", fmt_f64(self.disp_refinement));
        out
    }
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}
