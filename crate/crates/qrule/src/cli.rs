//! Configuration-driven front end.
//!
//! Configs are line-oriented `key=value` pairs under `[section]` headers:
//!
//! ```text
//! [potential] kind=biharmonic alpha=2 beta=3 gamma=5
//! [job] type=verify window=0,4
//! [numeric] n_steps=20000 n_films=4096
//! [output] csv=out.csv
//! ```
//!
//! Unknown keys are rejected with the offending key and line. Output is a
//! fixed-column CSV, byte-identical for identical configs, with every row
//! carrying the config hash.

use crate::potential::{Potential, PotentialError, RegionKind, Segment, SegmentForm};
use crate::quantize::{self, QuantizeError, VerifyOptions};
use crate::solve::{self, EigenSolution, EnergyWindow, SolveError};
use crate::specfun::SpecFunError;
use crate::tolerances::{DEFAULT_N_FILMS, DEFAULT_N_STEPS};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{section}.{key}`")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: malformed token `{token}` (expected key=value or [section])")]
    Malformed { line: usize, token: String },
    #[error("line {line}: value for `{key}` is not a number: `{value}`")]
    TypeMismatch {
        line: usize,
        key: String,
        value: String,
    },
    #[error("range violation for `{key}`: {reason}")]
    Range { key: String, reason: String },
    #[error("missing required key `{0}`")]
    Missing(&'static str),
    #[error("line {line}: unknown section `[{0}]`", .section)]
    UnknownSection { line: usize, section: String },
    #[error("invalid potential: {0}")]
    Potential(#[from] PotentialError),
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Propagate(#[from] crate::propagate::PropagateError),
    #[error(transparent)]
    Quantize(#[from] QuantizeError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("no eigenvalue in the window")]
    NoEigenvalue,
}

impl RunError {
    /// Documented process exit code for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Potential(e) => potential_exit_code(e),
            RunError::Quantize(QuantizeError::Potential(e)) => potential_exit_code(e),
            RunError::Solve(SolveError::Potential(e)) => potential_exit_code(e),
            RunError::Propagate(crate::propagate::PropagateError::Potential(e)) => {
                potential_exit_code(e)
            }
            RunError::Solve(_) | RunError::NoEigenvalue => 3,
            _ => 3,
        }
    }
}

fn potential_exit_code(e: &PotentialError) -> i32 {
    match e {
        PotentialError::Tangency { .. }
        | PotentialError::OddTurningPoints(_)
        | PotentialError::NonConfining { .. }
        | PotentialError::NoTurningPoints(_) => 4,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JobKind {
    Spectrum,
    Verify,
    Scan,
    Films,
}

impl JobKind {
    pub fn parse_str(s: &str) -> Option<Self> {
        match s {
            "spectrum" => Some(JobKind::Spectrum),
            "verify" => Some(JobKind::Verify),
            "scan" => Some(JobKind::Scan),
            "films" => Some(JobKind::Films),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum PotentialSpec {
    DoubleSquareWell {
        x_a: f64,
        x_b: f64,
        x_c: f64,
        x_d: f64,
        v_i: f64,
        v_0: f64,
        v_f: f64,
    },
    Biharmonic {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    Harmonic,
    Segments(Vec<Segment>),
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential, PotentialError> {
        match self {
            PotentialSpec::DoubleSquareWell {
                x_a,
                x_b,
                x_c,
                x_d,
                v_i,
                v_0,
                v_f,
            } => Potential::double_square_well(*x_a, *x_b, *x_c, *x_d, *v_i, *v_0, *v_f),
            PotentialSpec::Biharmonic { alpha, beta, gamma } => {
                Potential::biharmonic(*alpha, *beta, *gamma)
            }
            PotentialSpec::Harmonic => Ok(Potential::harmonic()),
            PotentialSpec::Segments(segs) => Potential::from_segments(segs.clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct JobConfig {
    pub potential: PotentialSpec,
    pub job: JobKind,
    pub window: (f64, f64),
    /// Grid points for scan-style jobs.
    pub points: usize,
    pub n_steps: usize,
    pub n_films: usize,
    pub window_grid: usize,
    pub fd_grid: usize,
    pub csv: Option<String>,
    /// First 16 hex digits of the SHA-256 of the config text.
    pub config_hash: String,
}

struct RawConfig {
    entries: Vec<(usize, String, String, String)>, // line, section, key, value
}

fn tokenize(text: &str) -> Result<RawConfig, ConfigError> {
    let mut entries = Vec::new();
    let mut section = String::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for token in line.split_whitespace() {
            if token.starts_with('[') && token.ends_with(']') {
                section = token[1..token.len() - 1].to_string();
                if !matches!(section.as_str(), "potential" | "job" | "numeric" | "output") {
                    return Err(ConfigError::UnknownSection {
                        line: lineno + 1,
                        section,
                    });
                }
            } else if let Some((k, v)) = token.split_once('=') {
                entries.push((lineno + 1, section.clone(), k.to_string(), v.to_string()));
            } else {
                return Err(ConfigError::Malformed {
                    line: lineno + 1,
                    token: token.to_string(),
                });
            }
        }
    }
    Ok(RawConfig { entries })
}

fn parse_f64(line: usize, key: &str, value: &str) -> Result<f64, ConfigError> {
    let v = match value {
        "-inf" => return Ok(f64::NEG_INFINITY),
        "inf" | "+inf" => return Ok(f64::INFINITY),
        v => v,
    };
    v.parse().map_err(|_| ConfigError::TypeMismatch {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_usize(line: usize, key: &str, value: &str) -> Result<usize, ConfigError> {
    value.parse().map_err(|_| ConfigError::TypeMismatch {
        line,
        key: key.to_string(),
        value: value.to_string(),
    })
}

fn parse_segment(line: usize, value: &str) -> Result<Segment, ConfigError> {
    let parts: Vec<&str> = value.split(',').collect();
    let need = |n: usize| -> Result<(), ConfigError> {
        if parts.len() < n {
            Err(ConfigError::TypeMismatch {
                line,
                key: "segment".into(),
                value: value.to_string(),
            })
        } else {
            Ok(())
        }
    };
    need(3)?;
    let lo = parse_f64(line, "segment.lo", parts[1])?;
    let hi = parse_f64(line, "segment.hi", parts[2])?;
    let form = match parts[0] {
        "const" => {
            need(4)?;
            SegmentForm::Constant(parse_f64(line, "segment.c", parts[3])?)
        }
        "quad" => {
            need(6)?;
            SegmentForm::Quadratic {
                a: parse_f64(line, "segment.a", parts[3])?,
                shift: parse_f64(line, "segment.s", parts[4])?,
                offset: parse_f64(line, "segment.c", parts[5])?,
            }
        }
        "poly" => {
            need(4)?;
            let coeffs = parts[3..]
                .iter()
                .map(|p| parse_f64(line, "segment.coeff", p))
                .collect::<Result<Vec<f64>, _>>()?;
            SegmentForm::Polynomial(coeffs)
        }
        other => {
            return Err(ConfigError::TypeMismatch {
                line,
                key: "segment.form".into(),
                value: other.to_string(),
            })
        }
    };
    Ok(Segment::new(lo, hi, form))
}

/// Parse and validate a config, filling defaults.
pub fn parse_config(text: &str) -> Result<JobConfig, ConfigError> {
    let raw = tokenize(text)?;

    let mut kind: Option<String> = None;
    let mut pot_vals: std::collections::BTreeMap<&'static str, f64> = Default::default();
    let mut segments: Vec<Segment> = Vec::new();
    let mut job: Option<JobKind> = None;
    let mut window: Option<(f64, f64)> = None;
    let mut points = 200usize;
    let mut n_steps = DEFAULT_N_STEPS;
    let mut n_films = DEFAULT_N_FILMS;
    let mut window_grid = 512usize;
    let mut fd_grid = 3000usize;
    let mut csv: Option<String> = None;

    const POT_KEYS: [&str; 10] = [
        "x_a", "x_b", "x_c", "x_d", "V_I", "V_0", "V_F", "alpha", "beta", "gamma",
    ];

    for (line, section, key, value) in &raw.entries {
        let (line, key, value) = (*line, key.as_str(), value.as_str());
        match (section.as_str(), key) {
            ("potential", "kind") => kind = Some(value.to_string()),
            ("potential", "segment") => segments.push(parse_segment(line, value)?),
            ("potential", k) if POT_KEYS.contains(&k) => {
                let stat = POT_KEYS.iter().find(|&&s| s == k).unwrap();
                pot_vals.insert(stat, parse_f64(line, k, value)?);
            }
            ("job", "type") => {
                job = Some(JobKind::parse_str(value).ok_or_else(|| ConfigError::TypeMismatch {
                    line,
                    key: "type".into(),
                    value: value.to_string(),
                })?)
            }
            ("job", "window") => {
                let (a, b) = value.split_once(',').ok_or_else(|| ConfigError::TypeMismatch {
                    line,
                    key: "window".into(),
                    value: value.to_string(),
                })?;
                window = Some((parse_f64(line, "window", a)?, parse_f64(line, "window", b)?));
            }
            ("job", "points") => points = parse_usize(line, key, value)?,
            ("numeric", "n_steps") => n_steps = parse_usize(line, key, value)?,
            ("numeric", "n_films") => n_films = parse_usize(line, key, value)?,
            ("numeric", "window_grid") => window_grid = parse_usize(line, key, value)?,
            ("numeric", "fd_grid") => fd_grid = parse_usize(line, key, value)?,
            ("output", "csv") => csv = Some(value.to_string()),
            (section, key) => {
                return Err(ConfigError::UnknownKey {
                    line,
                    section: section.to_string(),
                    key: key.to_string(),
                })
            }
        }
    }

    // ranges
    if n_steps < 2000 {
        return Err(ConfigError::Range {
            key: "numeric.n_steps".into(),
            reason: format!("must be >= 2000, got {n_steps}"),
        });
    }
    if n_films < 16 {
        return Err(ConfigError::Range {
            key: "numeric.n_films".into(),
            reason: format!("must be >= 16, got {n_films}"),
        });
    }
    if window_grid < 64 {
        return Err(ConfigError::Range {
            key: "numeric.window_grid".into(),
            reason: format!("must be >= 64, got {window_grid}"),
        });
    }
    if fd_grid < 2000 {
        return Err(ConfigError::Range {
            key: "numeric.fd_grid".into(),
            reason: format!("must be >= 2000, got {fd_grid}"),
        });
    }
    if points < 2 {
        return Err(ConfigError::Range {
            key: "job.points".into(),
            reason: format!("must be >= 2, got {points}"),
        });
    }

    let get = |name: &'static str| -> Result<f64, ConfigError> {
        pot_vals.get(name).copied().ok_or(ConfigError::Missing(name))
    };
    let potential = match kind.as_deref() {
        Some("double_square_well") => {
            for key in ["V_I", "V_0", "V_F"] {
                if let Some(&v) = pot_vals.get(key) {
                    if v <= 0.0 {
                        return Err(ConfigError::Range {
                            key: format!("potential.{key}"),
                            reason: format!("must be positive, got {v}"),
                        });
                    }
                }
            }
            PotentialSpec::DoubleSquareWell {
                x_a: get("x_a")?,
                x_b: get("x_b")?,
                x_c: get("x_c")?,
                x_d: get("x_d")?,
                v_i: get("V_I")?,
                v_0: get("V_0")?,
                v_f: get("V_F")?,
            }
        }
        Some("biharmonic") => PotentialSpec::Biharmonic {
            alpha: get("alpha")?,
            beta: get("beta")?,
            gamma: get("gamma")?,
        },
        Some("harmonic") => PotentialSpec::Harmonic,
        Some("segments") => PotentialSpec::Segments(segments.clone()),
        Some(other) => {
            return Err(ConfigError::Range {
                key: "potential.kind".into(),
                reason: format!("unknown kind `{other}`"),
            })
        }
        None => return Err(ConfigError::Missing("potential.kind")),
    };
    // validate buildability now so config errors surface as config errors
    potential.build()?;

    let window = window.ok_or(ConfigError::Missing("job.window"))?;
    if !(window.0 < window.1) {
        return Err(ConfigError::Range {
            key: "job.window".into(),
            reason: format!("window must be increasing, got {},{}", window.0, window.1),
        });
    }

    let mut hasher = Sha256::new();
    hasher.update(text.as_bytes());
    let digest = hasher.finalize();
    let mut config_hash = String::new();
    for b in digest.iter().take(8) {
        let _ = write!(config_hash, "{b:02x}");
    }

    Ok(JobConfig {
        potential,
        job: job.ok_or(ConfigError::Missing("job.type"))?,
        window,
        points,
        n_steps,
        n_films,
        window_grid,
        fd_grid,
        csv,
        config_hash,
    })
}

/// Everything a finished job produces.
pub struct Artifacts {
    pub csv: String,
    pub table: String,
}

/// Run a job and return its artifacts; the caller decides where they go.
pub fn run(cfg: &JobConfig) -> Result<Artifacts, RunError> {
    let p = cfg.potential.build()?;
    match cfg.job {
        JobKind::Spectrum => run_spectrum(cfg, &p),
        JobKind::Verify => run_verify(cfg, &p),
        JobKind::Scan => run_scan(cfg, &p),
        JobKind::Films => run_films(cfg, &p),
    }
}

fn window_of(cfg: &JobConfig) -> EnergyWindow {
    EnergyWindow::new(cfg.window.0, cfg.window.1, cfg.window_grid)
}

fn analytic_route(cfg: &JobConfig, w: &EnergyWindow) -> Result<Vec<EigenSolution>, SolveError> {
    match &cfg.potential {
        PotentialSpec::DoubleSquareWell {
            x_a,
            x_b,
            x_c,
            x_d,
            v_i,
            v_0,
            v_f,
        } => solve::solve_double_square_well(*x_a, *x_b, *x_c, *x_d, *v_i, *v_0, *v_f, w),
        PotentialSpec::Biharmonic { alpha, beta, gamma } => {
            solve::solve_biharmonic(*alpha, *beta, *gamma, w)
        }
        _ => Ok(Vec::new()),
    }
}

fn fmt_e(v: f64) -> String {
    format!("{v:.12e}")
}

fn run_spectrum(cfg: &JobConfig, p: &Potential) -> Result<Artifacts, RunError> {
    let w = window_of(cfg);
    let shooting = solve::solve_shooting(p, &w)?;
    if shooting.is_empty() {
        return Err(RunError::NoEigenvalue);
    }
    let analytic = analytic_route(cfg, &w)?;
    let domain = solve::fd_domain(p, cfg.window.1)?;
    let count = shooting.iter().map(|s| s.index + 1).max().unwrap_or(4).max(4);
    let oracle_all = solve::solve_fd_oracle(p, domain, cfg.fd_grid, count.min(48))?;
    let oracle: Vec<&EigenSolution> = oracle_all
        .iter()
        .filter(|s| s.energy >= cfg.window.0 && s.energy <= cfg.window.1)
        .collect();

    let mut indices: Vec<usize> = shooting
        .iter()
        .map(|s| s.index)
        .chain(analytic.iter().map(|s| s.index))
        .chain(oracle.iter().map(|s| s.index))
        .collect();
    indices.sort_unstable();
    indices.dedup();

    let mut csv = String::from("n,E_shooting,E_analytic,E_oracle,max_spread,config_hash\n");
    let mut table = format!(
        "{:>3} {:>18} {:>18} {:>18} {:>12}\n",
        "n", "E_shooting", "E_analytic", "E_oracle", "max_spread"
    );
    for n in indices {
        let es = shooting.iter().find(|s| s.index == n).map(|s| s.energy);
        let ea = analytic.iter().find(|s| s.index == n).map(|s| s.energy);
        let eo = oracle.iter().find(|s| s.index == n).map(|s| s.energy);
        let present: Vec<f64> = [es, ea, eo].iter().flatten().copied().collect();
        let spread = if present.len() > 1 {
            let lo = present.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = present.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        } else {
            0.0
        };
        let cell = |v: Option<f64>| v.map(fmt_e).unwrap_or_default();
        let _ = writeln!(
            csv,
            "{n},{},{},{},{},{}",
            cell(es),
            cell(ea),
            cell(eo),
            fmt_e(spread),
            cfg.config_hash
        );
        let tcell = |v: Option<f64>| v.map(|x| format!("{x:.9}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            table,
            "{:>3} {:>18} {:>18} {:>18} {:>12.3e}",
            n,
            tcell(es),
            tcell(ea),
            tcell(eo),
            spread
        );
    }
    Ok(Artifacts { csv, table })
}

fn run_verify(cfg: &JobConfig, p: &Potential) -> Result<Artifacts, RunError> {
    let w = window_of(cfg);
    let states = solve::solve_shooting(p, &w)?;
    if states.is_empty() {
        return Err(RunError::NoEigenvalue);
    }
    let opts = VerifyOptions {
        n_steps: cfg.n_steps,
        n_films: cfg.n_films,
    };
    let mut csv = String::from(
        "n,E,region_index,kind,value_over_pi,nearest_multiple,residual_over_pi,total_N,config_hash\n",
    );
    let mut table = format!(
        "{:>3} {:>14} {:>6} {:>9} {:>12} {:>8} {:>12} {:>7}\n",
        "n", "E", "region", "kind", "value/pi", "nearest", "resid/pi", "total_N"
    );
    let pi = std::f64::consts::PI;
    for s in &states {
        let report = quantize::verify_rule_with(p, s.energy, opts)?;
        let total_n = report
            .total_n
            .map(|n| n.to_string())
            .unwrap_or_else(|| "non-eigenstate".into());
        for (ri, reg) in report.regions.iter().enumerate() {
            let kind = match reg.kind {
                RegionKind::Allowed => "allowed",
                RegionKind::Forbidden => "forbidden",
            };
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                s.index,
                fmt_e(s.energy),
                ri,
                kind,
                fmt_e(reg.value / pi),
                reg.nearest_multiple,
                fmt_e(reg.residual / pi),
                total_n,
                cfg.config_hash
            );
            let _ = writeln!(
                table,
                "{:>3} {:>14.8} {:>6} {:>9} {:>12.6} {:>8} {:>12.3e} {:>7}",
                s.index,
                s.energy,
                ri,
                kind,
                reg.value / pi,
                reg.nearest_multiple,
                reg.residual / pi,
                total_n,
            );
        }
    }
    Ok(Artifacts { csv, table })
}

fn run_scan(cfg: &JobConfig, p: &Potential) -> Result<Artifacts, RunError> {
    let opts = VerifyOptions {
        n_steps: cfg.n_steps,
        n_films: cfg.n_films,
    };
    let mut csv = String::from("E,mismatch,residual_over_pi,config_hash\n");
    let mut table = format!("{:>14} {:>14} {:>14}\n", "E", "mismatch", "resid/pi");
    let pi = std::f64::consts::PI;
    let n = cfg.points;
    for i in 0..n {
        let e = cfg.window.0 + (cfg.window.1 - cfg.window.0) * (i as f64 + 0.5) / n as f64;
        let part = match p.partition(e) {
            Ok(part) => part,
            Err(_) => continue,
        };
        let allowed = part
            .interior()
            .iter()
            .find(|r| r.kind == RegionKind::Allowed);
        let Some(region) = allowed else { continue };
        let xm = 0.5 * (region.lo + region.hi);
        let Ok(mismatch) = crate::propagate::matching_mismatch(p, e, xm) else {
            continue;
        };
        let Ok(report) = quantize::verify_rule_with(p, e, opts) else {
            continue;
        };
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt_e(e),
            fmt_e(mismatch),
            fmt_e(report.total_residual / pi),
            cfg.config_hash
        );
        let _ = writeln!(
            table,
            "{:>14.8} {:>14.6e} {:>14.6e}",
            e,
            mismatch,
            report.total_residual / pi
        );
    }
    Ok(Artifacts { csv, table })
}

fn run_films(cfg: &JobConfig, p: &Potential) -> Result<Artifacts, RunError> {
    let e = 0.5 * (cfg.window.0 + cfg.window.1);
    let part = p.partition(e)?;
    let barrier = part
        .interior()
        .iter()
        .find(|r| r.kind == RegionKind::Forbidden)
        .copied()
        .ok_or(RunError::NoEigenvalue)?;
    let (trace, _) = crate::propagate::trace_full_line(p, e, cfg.n_steps)?;
    let phi_in = trace.phi_at(barrier.lo + 1e-9);
    let n_max = cfg.n_films.max(4096);
    let reference = crate::propagate::film_propagate(p, e, barrier.lo, barrier.hi, 16 * n_max, phi_in)?
        .phi_out;
    let mut csv = String::from("n_films,phi_out,error,config_hash\n");
    let mut table = format!("{:>8} {:>18} {:>12}\n", "n_films", "phi_out", "error");
    let mut nf = 64usize;
    while nf <= n_max {
        let f = crate::propagate::film_propagate(p, e, barrier.lo, barrier.hi, nf, phi_in)?;
        let err = (f.phi_out - reference).abs();
        let _ = writeln!(
            csv,
            "{nf},{},{},{}",
            fmt_e(f.phi_out),
            fmt_e(err),
            cfg.config_hash
        );
        let _ = writeln!(table, "{:>8} {:>18.12} {:>12.3e}", nf, f.phi_out, err);
        nf *= 2;
    }
    Ok(Artifacts { csv, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIHARM_CFG: &str = "\
[potential] kind=biharmonic alpha=2 beta=3 gamma=5
[job] type=verify window=0,4
[numeric] n_steps=20000 n_films=4096
";

    #[test]
    fn parse_minimal_config_fills_defaults() {
        let cfg = parse_config(
            "[potential] kind=biharmonic alpha=2 beta=3 gamma=5\n[job] type=spectrum window=-5,9\n",
        )
        .unwrap();
        assert_eq!(cfg.n_steps, 20_000);
        assert_eq!(cfg.n_films, 4096);
        assert_eq!(cfg.job, JobKind::Spectrum);
        assert!(matches!(cfg.potential, PotentialSpec::Biharmonic { .. }));
    }

    #[test]
    fn unknown_key_is_fatal_with_location() {
        let err = parse_config("[potential] kind=harmonic quirk=1\n[job] type=scan window=0,4\n")
            .unwrap_err();
        match err {
            ConfigError::UnknownKey { line, section, key } => {
                assert_eq!(line, 1);
                assert_eq!(section, "potential");
                assert_eq!(key, "quirk");
            }
            other => panic!("wrong error {other}"),
        }
    }

    #[test]
    fn negative_wall_is_a_range_error_naming_the_key() {
        let err = parse_config(
            "[potential] kind=double_square_well x_a=-2 x_b=-1 x_c=1 x_d=2 V_I=-1 V_0=100 V_F=101\n[job] type=spectrum window=0,100\n",
        )
        .unwrap_err();
        match err {
            ConfigError::Range { key, .. } => assert_eq!(key, "potential.V_I"),
            other => panic!("wrong error {other}"),
        }
    }

    #[test]
    fn verify_config_round_trip() {
        let cfg = parse_config(BIHARM_CFG).unwrap();
        assert_eq!(cfg.job, JobKind::Verify);
        assert_eq!(cfg.window, (0.0, 4.0));
        assert_eq!(cfg.config_hash.len(), 16);
    }

    #[test]
    fn segment_list_potential() {
        let cfg = parse_config(
            "[potential] kind=segments segment=const,-inf,0,5 segment=quad,0,inf,1,1,0\n[job] type=scan window=0.5,3\n",
        )
        .unwrap();
        let p = cfg.potential.build().unwrap();
        assert_eq!(p.eval(-1.0), 5.0);
        assert_eq!(p.eval(1.0), 0.0);
    }

    #[test]
    fn csv_is_deterministic() {
        let cfg = parse_config(
            "[potential] kind=harmonic\n[job] type=spectrum window=0.5,6\n[numeric] window_grid=64\n",
        )
        .unwrap();
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.csv, b.csv);
        assert!(a.csv.lines().count() >= 4);
        // every row carries the hash
        for row in a.csv.lines().skip(1) {
            assert!(row.ends_with(&cfg.config_hash));
        }
    }
}
