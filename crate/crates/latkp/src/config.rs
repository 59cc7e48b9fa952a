//! JSON run configuration: schema types, parsing, and conversion into the
//! domain objects. Complex values are written as two-element `[re, im]`
//! arrays; bare reals and `"p/q"` rational strings are accepted on input
//! and normalized to arrays when the configuration is echoed back into a
//! report.

use fields::DeformConstants;
use lattice::{LatticeParams, LatticePoint, Window};
use numkit::{CMatrix, Scalar};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use solution::{BlockSpec, SpectralConfig};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config parse error")]
    Parse(#[from] serde_json::Error),
    #[error("invalid lattice section")]
    Lattice(#[from] lattice::LatticeError),
    #[error("invalid solution section")]
    Solution(#[from] solution::SolutionError),
    #[error("unknown check name {0:?}")]
    UnknownCheck(String),
    #[error("checks must be \"all\" or a list of names, got {0:?}")]
    BadChecksMode(String),
    #[error("points must be \"interior\" or a list of [n,m,h] triples, got {0:?}")]
    BadPointsMode(String),
    #[error("coupling must be \"identity\" or a full matrix, got {0:?}")]
    BadCoupling(String),
    #[error("coupling matrix must be {rows}x{cols} to match the spectra")]
    CouplingShape { rows: usize, cols: usize },
    #[error("point [{0}, {1}, {2}] lies outside the window")]
    PointOutsideWindow(i64, i64, i64),
    #[error("unknown field name {0:?}")]
    UnknownField(String),
    #[error("bad argument list for {name}: {detail}")]
    BadFieldArguments { name: String, detail: String },
}

/// A complex number in configuration files.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CNum(pub Scalar);

impl From<CNum> for Scalar {
    fn from(c: CNum) -> Scalar {
        c.0
    }
}

impl Serialize for CNum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CNum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Real(f64),
            Pair([f64; 2]),
            Text(String),
        }
        Ok(match Raw::deserialize(deserializer)? {
            Raw::Real(re) => CNum(Scalar::new(re, 0.0)),
            Raw::Pair([re, im]) => CNum(Scalar::new(re, im)),
            Raw::Text(text) => {
                let re = parse_real(&text).ok_or_else(|| {
                    serde::de::Error::custom(format!(
                        "expected a number, [re, im] pair, or \"p/q\" rational, got {text:?}"
                    ))
                })?;
                CNum(Scalar::new(re, 0.0))
            }
        })
    }
}

fn scalars(values: &[CNum]) -> Vec<Scalar> {
    values.iter().map(|c| c.0).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub lattice: LatticeSection,
    pub solution: SolutionSection,
    #[serde(default)]
    pub constants: ConstantsSection,
    #[serde(default)]
    pub checks: ChecksSection,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub points: PointsSection,
    #[serde(default)]
    pub outputs: OutputsSection,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_tolerance() -> f64 {
    verify::DEFAULT_TOLERANCE
}

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    pub base: [i64; 3],
    pub window: WindowSection,
    pub p: Vec<CNum>,
    pub q: Vec<CNum>,
    pub r: Vec<CNum>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowSection {
    pub n: [i64; 2],
    pub m: [i64; 2],
    pub h: [i64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionSection {
    pub k_blocks: Vec<BlockSection>,
    pub kappa_blocks: Vec<BlockSection>,
    #[serde(default, rename = "C")]
    pub coupling: CouplingSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BlockSection {
    Diagonal {
        values: Vec<CNum>,
        amplitudes: Vec<CNum>,
    },
    Jordan {
        value: CNum,
        size: usize,
        amplitude: CNum,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CouplingSection {
    Name(String),
    Matrix(Vec<Vec<CNum>>),
}

impl Default for CouplingSection {
    fn default() -> Self {
        CouplingSection::Name("identity".to_string())
    }
}

macro_rules! constant_default {
    ($fn_name:ident, $field:ident) => {
        fn $fn_name() -> CNum {
            CNum(DeformConstants::reference().$field)
        }
    };
}

constant_default!(d_x0, x0);
constant_default!(d_y0, y0);
constant_default!(d_yp0, yp0);
constant_default!(d_xi0, xi0);
constant_default!(d_eta0, eta0);
constant_default!(d_zp0, zp0);
constant_default!(d_sigma0, sigma0);
constant_default!(d_z0, z0);

/// Deformation constants; every field defaults to the reference value so a
/// config may override any subset.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSection {
    #[serde(default = "d_x0")]
    pub x0: CNum,
    #[serde(default = "d_y0")]
    pub y0: CNum,
    #[serde(default = "d_yp0")]
    pub yp0: CNum,
    #[serde(default = "d_xi0")]
    pub xi0: CNum,
    #[serde(default = "d_eta0")]
    pub eta0: CNum,
    #[serde(default = "d_zp0")]
    pub zp0: CNum,
    #[serde(default = "d_sigma0")]
    pub sigma0: CNum,
    #[serde(default = "d_z0")]
    pub z0: CNum,
}

impl Default for ConstantsSection {
    fn default() -> Self {
        ConstantsSection {
            x0: d_x0(),
            y0: d_y0(),
            yp0: d_yp0(),
            xi0: d_xi0(),
            eta0: d_eta0(),
            zp0: d_zp0(),
            sigma0: d_sigma0(),
            z0: d_z0(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChecksSection {
    Mode(String),
    List(Vec<String>),
}

impl Default for ChecksSection {
    fn default() -> Self {
        ChecksSection::Mode("all".to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointsSection {
    Mode(String),
    List(Vec<[i64; 3]>),
}

impl Default for PointsSection {
    fn default() -> Self {
        PointsSection::Mode("interior".to_string())
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    /// Where `verify`/`oracle` write their JSON report when `--out` is not
    /// given on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<RunConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        RunConfig::from_json(&text)
    }

    pub fn lattice_params(&self) -> Result<LatticeParams, ConfigError> {
        let l = &self.lattice;
        let window = Window::new(
            (l.window.n[0], l.window.n[1]),
            (l.window.m[0], l.window.m[1]),
            (l.window.h[0], l.window.h[1]),
        );
        Ok(LatticeParams::new(
            LatticePoint::new(l.base[0], l.base[1], l.base[2]),
            window,
            scalars(&l.p),
            scalars(&l.q),
            scalars(&l.r),
        )?)
    }

    pub fn spectral_config(&self) -> Result<SpectralConfig, ConfigError> {
        let blocks = |sections: &[BlockSection]| -> Vec<BlockSpec> {
            sections
                .iter()
                .map(|b| match b {
                    BlockSection::Diagonal { values, amplitudes } => BlockSpec::Diagonal {
                        values: scalars(values),
                        amplitudes: scalars(amplitudes),
                    },
                    BlockSection::Jordan {
                        value,
                        size,
                        amplitude,
                    } => BlockSpec::Jordan {
                        value: value.0,
                        size: *size,
                        amplitude: amplitude.0,
                    },
                })
                .collect()
        };
        let k_blocks = blocks(&self.solution.k_blocks);
        let kappa_blocks = blocks(&self.solution.kappa_blocks);
        let coupling = match &self.solution.coupling {
            CouplingSection::Name(name) if name == "identity" => None,
            CouplingSection::Name(other) => {
                return Err(ConfigError::BadCoupling(other.clone()));
            }
            CouplingSection::Matrix(rows) => {
                let n: usize = k_blocks.iter().map(|b| b.size()).sum();
                let n_prime: usize = kappa_blocks.iter().map(|b| b.size()).sum();
                if rows.len() != n || rows.iter().any(|row| row.len() != n_prime) {
                    return Err(ConfigError::CouplingShape {
                        rows: n,
                        cols: n_prime,
                    });
                }
                let data: Vec<Vec<Scalar>> = rows.iter().map(|row| scalars(row)).collect();
                Some(CMatrix::from_rows(&data))
            }
        };
        Ok(SpectralConfig::new(k_blocks, kappa_blocks, coupling)?)
    }

    pub fn deform_constants(&self) -> DeformConstants {
        let c = &self.constants;
        DeformConstants {
            x0: c.x0.0,
            y0: c.y0.0,
            yp0: c.yp0.0,
            xi0: c.xi0.0,
            eta0: c.eta0.0,
            zp0: c.zp0.0,
            sigma0: c.sigma0.0,
            z0: c.z0.0,
        }
    }

    /// Resolves the `points` section against the window.
    pub fn point_list(&self, params: &LatticeParams) -> Result<Vec<LatticePoint>, ConfigError> {
        match &self.points {
            PointsSection::Mode(mode) if mode == "interior" => {
                Ok(verify::interior_points(params.window()))
            }
            PointsSection::Mode(other) => Err(ConfigError::BadPointsMode(other.clone())),
            PointsSection::List(list) => {
                let mut points = Vec::with_capacity(list.len());
                for &[n, m, h] in list {
                    let point = LatticePoint::new(n, m, h);
                    if !params.window().contains(&point) {
                        return Err(ConfigError::PointOutsideWindow(n, m, h));
                    }
                    points.push(point);
                }
                Ok(points)
            }
        }
    }
}

/// Parses a real number that may be written as a decimal or a rational
/// like `1/3`.
pub fn parse_real(text: &str) -> Option<f64> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: f64 = num.trim().parse().ok()?;
        let den: f64 = den.trim().parse().ok()?;
        if den == 0.0 {
            return None;
        }
        return Some(num / den);
    }
    text.parse().ok()
}
