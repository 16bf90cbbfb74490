//! Spin-state mini-language used by sweep configs.
//!
//! Electron: `u`, `d`, or `polar theta=.. phi=..` (Bloch angles).
//! Impurities: product kets such as `u,d`, the named pair states `psi+` and
//! `psi-`, and the two families `family2 theta=.. phi=..`
//! (`cos t |ud> + e^{i phi} sin t |du>`) and `uu_dd theta=.. phi=..`
//! (`cos t |uu> + e^{i phi} sin t |dd>`). Family angles may be omitted when
//! the config supplies a grid over them.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::spin_algebra::{pair, Spin, C64};

/// Parses `1.25`, `pi`, `-pi/2`, `3pi/4`, `2*pi`, `0.5pi`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    let bad = || Error::Config(format!("cannot parse angle '{text}'"));
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let head = t[..pos].trim().trim_end_matches('*').trim();
    let coefficient = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let tail = t[pos + 2..].trim();
    let divisor = if tail.is_empty() {
        1.0
    } else {
        let d = tail.strip_prefix('/').ok_or_else(bad)?;
        d.trim().parse::<f64>().map_err(|_| bad())?
    };
    let value = coefficient * PI / divisor;
    if !value.is_finite() {
        return Err(bad());
    }
    Ok(value)
}

fn parse_spin(text: &str) -> Result<Spin> {
    match text.trim() {
        "u" | "up" | "+" => Ok(Spin::Up),
        "d" | "down" | "-" => Ok(Spin::Down),
        other => Err(Error::Config(format!("unknown spin '{other}'"))),
    }
}

/// Reads `theta=.. phi=..` pairs; both are optional.
fn parse_angles(words: &[&str]) -> Result<(Option<f64>, Option<f64>)> {
    let (mut theta, mut phi) = (None, None);
    for w in words {
        let (key, value) = w
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{w}'")))?;
        let slot = match key.trim() {
            "theta" => &mut theta,
            "phi" => &mut phi,
            k => return Err(Error::Config(format!("unknown state parameter '{k}'"))),
        };
        *slot = Some(parse_angle(value)?);
    }
    Ok((theta, phi))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ElectronSpec {
    Basis(Spin),
    Polar { theta: f64, phi: f64 },
}

impl ElectronSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let words: Vec<&str> = text.split_whitespace().collect();
        match words.as_slice() {
            [single] if *single != "polar" => Ok(Self::Basis(parse_spin(single)?)),
            ["polar", rest @ ..] => {
                let (theta, phi) = parse_angles(rest)?;
                let theta = theta.ok_or_else(|| Error::Config("polar spin needs theta".into()))?;
                Ok(Self::Polar {
                    theta,
                    phi: phi.unwrap_or(0.0),
                })
            }
            _ => Err(Error::Config(format!("cannot parse electron spin '{text}'"))),
        }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        match *self {
            Self::Basis(spin) => crate::spin_algebra::electron_state(spin),
            Self::Polar { theta, phi } => [
                C64::from((theta / 2.0).cos()),
                C64::from_polar((theta / 2.0).sin(), phi),
            ],
        }
    }
}

impl fmt::Display for ElectronSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Basis(Spin::Up) => write!(f, "u"),
            Self::Basis(Spin::Down) => write!(f, "d"),
            Self::Polar { theta, phi } => write!(f, "polar theta={theta} phi={phi}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `cos t |ud> + e^{i phi} sin t |du>`
    OneUp,
    /// `cos t |uu> + e^{i phi} sin t |dd>`
    Aligned,
}

impl Family {
    pub fn amplitudes(self, vartheta: f64, phi: f64) -> [C64; 4] {
        match self {
            Self::OneUp => pair::one_up_family(vartheta, phi),
            Self::Aligned => pair::aligned_family(vartheta, phi),
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Self::OneUp => "family2",
            Self::Aligned => "uu_dd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ImpuritySpec {
    Product(Spin, Spin),
    PsiPlus,
    PsiMinus,
    Family {
        family: Family,
        angles: Option<(f64, f64)>,
    },
}

impl ImpuritySpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "psi+" => return Ok(Self::PsiPlus),
            "psi-" => return Ok(Self::PsiMinus),
            _ => {}
        }
        if let Some((a, b)) = text.split_once(',') {
            return Ok(Self::Product(parse_spin(a)?, parse_spin(b)?));
        }
        if let [a, b] = text.as_bytes() {
            if let (Ok(a), Ok(b)) = (parse_spin(&(*a as char).to_string()), parse_spin(&(*b as char).to_string())) {
                return Ok(Self::Product(a, b));
            }
        }
        let words: Vec<&str> = text.split_whitespace().collect();
        let family = match words.first() {
            Some(&"family2") => Family::OneUp,
            Some(&"uu_dd") => Family::Aligned,
            _ => return Err(Error::Config(format!("cannot parse impurity state '{text}'"))),
        };
        let angles = match parse_angles(&words[1..])? {
            (None, None) => None,
            (Some(t), p) => Some((t, p.unwrap_or(0.0))),
            (None, Some(_)) => {
                return Err(Error::Config(format!("'{text}' gives phi without theta")));
            }
        };
        Ok(Self::Family { family, angles })
    }

    /// Pair amplitudes indexed `2 a + b`. Families without fixed angles
    /// need the grid point supplied by the caller.
    pub fn amplitudes(&self, grid_point: Option<(f64, f64)>) -> Result<[C64; 4]> {
        Ok(match *self {
            Self::Product(a, b) => pair::product(a, b),
            Self::PsiPlus => pair::psi_plus(),
            Self::PsiMinus => pair::psi_minus(),
            Self::Family { family, angles } => {
                let (t, p) = grid_point.or(angles).ok_or_else(|| {
                    Error::Config(format!("{} needs theta/phi or a family grid", family.keyword()))
                })?;
                family.amplitudes(t, p)
            }
        })
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            Self::Family { family, .. } => Some(*family),
            _ => None,
        }
    }
}

impl fmt::Display for ImpuritySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spin = |s: &Spin| if *s == Spin::Up { 'u' } else { 'd' };
        match self {
            Self::Product(a, b) => write!(f, "{},{}", spin(a), spin(b)),
            Self::PsiPlus => write!(f, "psi+"),
            Self::PsiMinus => write!(f, "psi-"),
            Self::Family { family, angles: None } => write!(f, "{}", family.keyword()),
            Self::Family {
                family,
                angles: Some((t, p)),
            } => write!(f, "{} theta={t} phi={p}", family.keyword()),
        }
    }
}
