//! `key = value` sweep configuration with per-figure defaults.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::spin_algebra::Spin;

use super::state_spec::{parse_angle, ElectronSpec, ImpuritySpec};

/// Upper bound on any single axis and on the total number of grid points.
pub const MAX_GRID_POINTS: usize = 10_000_000;

pub const DEFAULT_THETA_STEPS: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Custom,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Self::Fig2a,
        Self::Fig2b,
        Self::Fig3a,
        Self::Fig3b,
        Self::Fig4,
        Self::Fig5,
        Self::Fig6,
        Self::Fig7,
        Self::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig2a => "fig2a",
            Self::Fig2b => "fig2b",
            Self::Fig3a => "fig3a",
            Self::Fig3b => "fig3b",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
            Self::Fig7 => "fig7",
            Self::Custom => "custom",
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown scenario '{s}'")))
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One sweep dimension.
#[derive(Clone, Debug, PartialEq)]
pub enum Axis {
    Values(Vec<f64>),
    /// `min + (max - min) i / steps` for `i = 1..=steps`; excludes `min`.
    Open { min: f64, max: f64, steps: usize },
    /// Same spacing for `i = 0..=steps`; includes both ends.
    Closed { min: f64, max: f64, steps: usize },
}

impl Axis {
    pub fn len(&self) -> usize {
        match self {
            Self::Values(v) => v.len(),
            Self::Open { steps, .. } => *steps,
            Self::Closed { steps, .. } => steps + 1,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn points(&self) -> Vec<f64> {
        match self {
            Self::Values(v) => v.clone(),
            Self::Open { min, max, steps } => (1..=*steps)
                .map(|i| min + (max - min) * i as f64 / *steps as f64)
                .collect(),
            Self::Closed { min, max, steps } => (0..=*steps)
                .map(|i| min + (max - min) * i as f64 / *steps as f64)
                .collect(),
        }
    }

    /// Grid spacing, or `None` for explicit value lists.
    pub fn step(&self) -> Option<f64> {
        match self {
            Self::Values(_) => None,
            Self::Open { min, max, steps } | Self::Closed { min, max, steps } => {
                Some((max - min) / *steps as f64)
            }
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.is_empty() {
            return Err(Error::Config(format!("{name} grid is empty")));
        }
        if self.len() > MAX_GRID_POINTS {
            return Err(Error::Config(format!("{name} grid exceeds {MAX_GRID_POINTS} points")));
        }
        match self {
            Self::Values(v) if v.iter().any(|x| !x.is_finite()) => {
                Err(Error::Config(format!("{name} values must be finite")))
            }
            Self::Open { min, max, .. } | Self::Closed { min, max, .. }
                if !(min.is_finite() && max.is_finite() && max > min) =>
            {
                Err(Error::Config(format!("{name} range needs finite min < max")))
            }
            _ => Ok(()),
        }
    }

    fn echo(&self, name: &str, out: &mut Vec<String>) {
        match self {
            Self::Values(v) => {
                let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                out.push(format!("{name} = {}", list.join(",")));
            }
            Self::Open { min, max, steps } | Self::Closed { min, max, steps } => {
                out.push(format!("{name}_min = {min}"));
                out.push(format!("{name}_max = {max}"));
                out.push(format!("{name}_steps = {steps}"));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyGrid {
    pub vartheta: Axis,
    pub phi: Axis,
}

impl Default for FamilyGrid {
    fn default() -> Self {
        Self {
            vartheta: Axis::Closed {
                min: 0.0,
                max: 2.0 * PI,
                steps: 80,
            },
            phi: Axis::Closed {
                min: 0.0,
                max: PI,
                steps: 40,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub theta: Axis,
    pub u: Axis,
    pub electron: ElectronSpec,
    pub impurity: ImpuritySpec,
    /// Present exactly when the impurity state is a family without fixed angles.
    pub family_grid: Option<FamilyGrid>,
    pub output: Option<PathBuf>,
}

fn full_period() -> Axis {
    Axis::Open {
        min: 0.0,
        max: 2.0 * PI,
        steps: DEFAULT_THETA_STEPS,
    }
}

impl SweepConfig {
    pub fn for_scenario(scenario: Scenario) -> Self {
        use ImpuritySpec::*;
        use Spin::{Down, Up};
        let family = |family, angles| Family { family, angles };
        let figure_couplings = Axis::Values(vec![1.0, 2.0, 10.0]);
        let (theta, u, impurity) = match scenario {
            Scenario::Fig2a | Scenario::Custom => (full_period(), figure_couplings, Product(Up, Down)),
            Scenario::Fig2b => (full_period(), figure_couplings, Product(Down, Up)),
            Scenario::Fig3a => (full_period(), figure_couplings, PsiPlus),
            Scenario::Fig3b => (full_period(), figure_couplings, PsiMinus),
            Scenario::Fig4 => (
                Axis::Values(vec![PI]),
                Axis::Values(vec![10.0]),
                family(super::Family::OneUp, None),
            ),
            Scenario::Fig5 => (
                Axis::Values(vec![PI]),
                Axis::Values(vec![2.0]),
                family(super::Family::OneUp, None),
            ),
            Scenario::Fig6 => (
                full_period(),
                figure_couplings,
                family(super::Family::Aligned, Some((PI / 4.0, 0.0))),
            ),
            Scenario::Fig7 => (
                Axis::Values(vec![PI]),
                Axis::Open {
                    min: 0.0,
                    max: 10.0,
                    steps: 1000,
                },
                Product(Down, Down),
            ),
        };
        let family_grid = match impurity {
            Family { angles: None, .. } => Some(FamilyGrid::default()),
            _ => None,
        };
        Self {
            scenario,
            theta,
            u,
            electron: ElectronSpec::Basis(Up),
            impurity,
            family_grid,
            output: None,
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        text.parse()
    }

    pub fn validate(&self) -> Result<()> {
        self.theta.validate("theta")?;
        self.u.validate("u")?;
        if self.theta.points().iter().any(|&t| t <= 0.0) {
            return Err(Error::Config("theta values must be > 0".into()));
        }
        if self.u.points().iter().any(|&u| u < 0.0) {
            return Err(Error::Config("u values must be >= 0".into()));
        }
        let mut total = self.theta.len().saturating_mul(self.u.len());
        match (&self.family_grid, self.impurity) {
            (Some(grid), ImpuritySpec::Family { angles: None, .. }) => {
                grid.vartheta.validate("vartheta")?;
                grid.phi.validate("phi")?;
                total = total
                    .saturating_mul(grid.vartheta.len())
                    .saturating_mul(grid.phi.len());
            }
            (None, ImpuritySpec::Family { angles: None, .. }) => {
                return Err(Error::Config("family state needs angles or a family grid".into()));
            }
            (Some(_), _) => {
                return Err(Error::Config(
                    "family grid keys need an impurity family without fixed angles".into(),
                ));
            }
            (None, _) => {}
        }
        if total > MAX_GRID_POINTS {
            return Err(Error::Config(format!("sweep has more than {MAX_GRID_POINTS} points")));
        }
        Ok(())
    }

    pub fn grid_points(&self) -> usize {
        let family = self
            .family_grid
            .as_ref()
            .map_or(1, |g| g.vartheta.len() * g.phi.len());
        self.theta.len() * self.u.len() * family
    }

    /// Canonical `key = value` lines; parsing them back gives the same config.
    pub fn echo(&self) -> Vec<String> {
        let mut out = vec![format!("scenario = {}", self.scenario)];
        self.theta.echo("theta", &mut out);
        self.u.echo("u", &mut out);
        out.push(format!("electron_spin = {}", self.electron));
        out.push(format!("impurity_state = {}", self.impurity));
        if let Some(grid) = &self.family_grid {
            grid.vartheta.echo("vartheta", &mut out);
            grid.phi.echo("phi", &mut out);
        }
        if let Some(path) = &self.output {
            out.push(format!("output = {}", path.display()));
        }
        out
    }
}

fn parse_list(value: &str, key: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|v| parse_angle(v).map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'"))))
        .collect()
}

fn parse_steps(value: &str, key: &str) -> Result<usize> {
    let steps: usize = value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("{key}: '{value}' is not a step count")))?;
    if steps == 0 || steps > MAX_GRID_POINTS {
        return Err(Error::Config(format!("{key} must be in 1..={MAX_GRID_POINTS}")));
    }
    Ok(steps)
}

/// Applies `name`, `name_min`, `name_max`, `name_steps` overrides to an axis.
fn override_axis(
    axis: &mut Axis,
    name: &str,
    keys: &mut BTreeMap<String, String>,
    closed: bool,
) -> Result<()> {
    let list = keys.remove(name);
    let min = keys.remove(&format!("{name}_min"));
    let max = keys.remove(&format!("{name}_max"));
    let steps = keys.remove(&format!("{name}_steps"));
    if let Some(list) = list {
        if min.is_some() || max.is_some() || steps.is_some() {
            return Err(Error::Config(format!("{name} conflicts with {name}_min/_max/_steps")));
        }
        *axis = Axis::Values(parse_list(&list, name)?);
        return Ok(());
    }
    if min.is_none() && max.is_none() && steps.is_none() {
        return Ok(());
    }
    let (d_min, d_max, d_steps) = match axis {
        Axis::Open { min, max, steps } | Axis::Closed { min, max, steps } => (*min, *max, *steps),
        Axis::Values(_) => (0.0, 2.0 * PI, DEFAULT_THETA_STEPS),
    };
    let min = min.map_or(Ok(d_min), |v| parse_angle(&v))?;
    let max = max.map_or(Ok(d_max), |v| parse_angle(&v))?;
    let steps = steps.map_or(Ok(d_steps), |v| parse_steps(&v, &format!("{name}_steps")))?;
    *axis = if closed {
        Axis::Closed { min, max, steps }
    } else {
        Axis::Open { min, max, steps }
    };
    Ok(())
}

impl FromStr for SweepConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut keys = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", n + 1)))?;
            let key = key.trim().to_string();
            if keys.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", n + 1)));
            }
        }

        let scenario = match keys.remove("scenario") {
            Some(s) => s.parse()?,
            None => Scenario::Custom,
        };
        let mut cfg = Self::for_scenario(scenario);
        match keys.remove("impurity_state") {
            Some(s) => cfg.impurity = ImpuritySpec::parse(&s)?,
            None if scenario == Scenario::Custom => {
                return Err(Error::Config("custom scenario needs impurity_state".into()));
            }
            None => {}
        }
        if let Some(s) = keys.remove("electron_spin") {
            cfg.electron = ElectronSpec::parse(&s)?;
        }
        if let Some(list) = keys.remove("u_list") {
            if keys.insert("u".into(), list).is_some() {
                return Err(Error::Config("u_list conflicts with u".into()));
            }
        }
        override_axis(&mut cfg.theta, "theta", &mut keys, false)?;
        override_axis(&mut cfg.u, "u", &mut keys, false)?;

        let needs_grid = matches!(cfg.impurity, ImpuritySpec::Family { angles: None, .. });
        let has_grid_keys = keys.keys().any(|k| k.starts_with("vartheta") || k.starts_with("phi"));
        cfg.family_grid = if needs_grid || has_grid_keys {
            let mut grid = FamilyGrid::default();
            override_axis(&mut grid.vartheta, "vartheta", &mut keys, true)?;
            override_axis(&mut grid.phi, "phi", &mut keys, true)?;
            Some(grid)
        } else {
            None
        };
        if let Some(out) = keys.remove("output") {
            cfg.output = Some(PathBuf::from(out));
        }
        if let Some(unknown) = keys.keys().next() {
            return Err(Error::Config(format!("unknown key '{unknown}'")));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_scenario_default_is_valid() {
        for sc in Scenario::ALL.into_iter().filter(|s| *s != Scenario::Custom) {
            let cfg: SweepConfig = format!("scenario = {sc}").parse().unwrap();
            assert_eq!(cfg, SweepConfig::for_scenario(sc));
        }
    }

    #[test]
    fn theta_grid_hits_multiples_of_pi() {
        let pts = full_period().points();
        assert_eq!(pts.len(), DEFAULT_THETA_STEPS);
        assert_eq!(pts[DEFAULT_THETA_STEPS / 2 - 1], PI);
        assert_eq!(*pts.last().unwrap(), 2.0 * PI);
    }

    #[test]
    fn family_grid_contains_extremal_points() {
        let g = FamilyGrid::default();
        assert!(g.vartheta.points().contains(&(PI / 4.0)));
        assert!(g.phi.points().contains(&PI));
        assert!(g.phi.points().contains(&0.0));
    }

    #[test]
    fn overrides() {
        let cfg: SweepConfig = "
            # comment
            scenario = fig3b
            theta_steps = 100
            u_list = 0.5, 5
            electron_spin = d
            output = out.csv
        "
        .parse()
        .unwrap();
        assert_eq!(cfg.theta.len(), 100);
        assert_eq!(cfg.u.points(), vec![0.5, 5.0]);
        assert_eq!(cfg.electron, ElectronSpec::Basis(Spin::Down));
        assert_eq!(cfg.output, Some(PathBuf::from("out.csv")));

        let single: SweepConfig = "scenario = custom\nimpurity_state = psi+\ntheta = pi/2, pi".parse().unwrap();
        assert_eq!(single.theta.points(), vec![PI / 2.0, PI]);
    }

    #[test]
    fn echo_round_trips() {
        for sc in Scenario::ALL.into_iter().filter(|s| *s != Scenario::Custom) {
            let mut cfg = SweepConfig::for_scenario(sc);
            cfg.output = Some(PathBuf::from("x.csv"));
            let back: SweepConfig = cfg.echo().join("\n").parse().unwrap();
            assert_eq!(back, cfg);
        }
    }

    #[test]
    fn errors() {
        for text in [
            "scenario = fig9",
            "scenario = custom",
            "scenario = fig2a\nbogus = 1",
            "scenario = fig2a\ntheta_steps = 0",
            "scenario = fig2a\ntheta_steps = 20000000",
            "scenario = fig2a\ntheta_min = 3\ntheta_max = 1",
            "scenario = fig2a\ntheta = 0",
            "scenario = fig2a\nu_list = -1",
            "scenario = fig2a\nu_list = 1\nu_list = 2",
            "scenario = fig2a\nu_list = 1\nu = 2",
            "scenario = fig2a\ntheta = pi\ntheta_min = 1",
            "scenario = fig2a\nvartheta_steps = 4",
            "scenario = fig2a\nimpurity_state = nope",
            "scenario = fig4\nvartheta_steps = 10000\nphi_steps = 10000",
            "no equals sign",
        ] {
            assert!(matches!(text.parse::<SweepConfig>(), Err(Error::Config(_))), "{text}");
        }
    }
}
