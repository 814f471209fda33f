//! Dielectric permittivity on the imaginary frequency axis and the
//! line-oriented material database.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::error::{invalid, CasimirError, Result};
use crate::units::ev_to_angular_frequency;

/// Built-in database: gold with the free-electron parameters used for the
/// reference force curves.
pub const DEFAULT_MATERIAL_DB: &str = "\
# Built-in material database.
material Au
  model = drude
  plasma_frequency_eV = 9.0
  relaxation_meV = 35
";

/// Which permittivity model a record uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Plasma,
    Drude,
    Tabulated,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Plasma => "plasma",
            ModelKind::Drude => "drude",
            ModelKind::Tabulated => "tabulated",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "plasma" => Ok(ModelKind::Plasma),
            "drude" => Ok(ModelKind::Drude),
            "tabulated" => Ok(ModelKind::Tabulated),
            other => Err(format!("unknown model `{other}` (expected plasma, drude or tabulated)")),
        }
    }
}

/// Sampled ε(iξ), interpolated piecewise-linearly in (ln ξ, ln(ε − 1)).
#[derive(Debug, Clone, PartialEq)]
pub struct PermittivityTable {
    xi: Vec<f64>,
    log_xi: Vec<f64>,
    log_excess: Vec<f64>,
}

impl PermittivityTable {
    /// Builds a table from `(ξ [rad/s], ε)` pairs. ξ must be strictly
    /// increasing and positive, every ε must exceed 1, and at least two
    /// samples are needed.
    pub fn new(samples: &[(f64, f64)]) -> std::result::Result<Self, String> {
        if samples.len() < 2 {
            return Err(format!("needs at least 2 samples, got {}", samples.len()));
        }
        for (i, &(xi, eps)) in samples.iter().enumerate() {
            if !(xi.is_finite() && xi > 0.0) {
                return Err(format!("sample {i}: xi must be finite and > 0, got {xi}"));
            }
            if !(eps.is_finite() && eps > 1.0) {
                return Err(format!("sample {i}: epsilon must be finite and > 1, got {eps}"));
            }
            if i > 0 && xi <= samples[i - 1].0 {
                return Err(format!("sample {i}: xi values must be strictly increasing"));
            }
        }
        Ok(Self {
            xi: samples.iter().map(|s| s.0).collect(),
            log_xi: samples.iter().map(|s| s.0.ln()).collect(),
            log_excess: samples.iter().map(|s| (s.1 - 1.0).ln()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// The stored samples as `(ξ, ε)` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xi
            .iter()
            .zip(&self.log_excess)
            .map(|(&xi, &le)| (xi, 1.0 + le.exp()))
    }

    fn eval(&self, xi: f64) -> f64 {
        let n = self.xi.len();
        let log_excess = if xi <= self.xi[0] {
            self.log_excess[0]
        } else if xi >= self.xi[n - 1] {
            self.log_excess[n - 1]
        } else {
            let hi = self.xi.partition_point(|&x| x <= xi);
            let lo = hi - 1;
            let t = (xi.ln() - self.log_xi[lo]) / (self.log_xi[hi] - self.log_xi[lo]);
            self.log_excess[lo] + t * (self.log_excess[hi] - self.log_excess[lo])
        };
        1.0 + log_excess.exp()
    }
}

/// Dielectric response of a material.
#[derive(Debug, Clone, PartialEq)]
pub enum DielectricModel {
    /// ε(iξ) = 1 + ω_p²/ξ².
    Plasma { plasma_frequency: f64 },
    /// ε(iξ) = 1 + ω_p²/(ξ(ξ + ν)).
    Drude {
        plasma_frequency: f64,
        relaxation_frequency: f64,
    },
    /// User-supplied samples; ω_p is optional and only used for the
    /// plasma-like zero-frequency limit and the skin depth.
    Tabulated {
        table: PermittivityTable,
        plasma_frequency: Option<f64>,
    },
}

/// A named metal. Frequencies are angular, in rad/s.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRecord {
    pub name: String,
    pub model: DielectricModel,
}

impl MaterialRecord {
    pub fn plasma(name: impl Into<String>, plasma_frequency: f64) -> Result<Self> {
        Self::validated(name.into(), DielectricModel::Plasma { plasma_frequency })
    }

    pub fn drude(name: impl Into<String>, plasma_frequency: f64, relaxation_frequency: f64) -> Result<Self> {
        Self::validated(
            name.into(),
            DielectricModel::Drude {
                plasma_frequency,
                relaxation_frequency,
            },
        )
    }

    pub fn tabulated(name: impl Into<String>, table: PermittivityTable, plasma_frequency: Option<f64>) -> Result<Self> {
        Self::validated(
            name.into(),
            DielectricModel::Tabulated {
                table,
                plasma_frequency,
            },
        )
    }

    /// Gold from the built-in database: ω_p = 9.0 eV, ν = 35 meV.
    pub fn gold() -> Self {
        Self::drude(
            "Au",
            ev_to_angular_frequency(9.0).expect("constant"),
            ev_to_angular_frequency(0.035).expect("constant"),
        )
        .expect("valid constants")
    }

    fn validated(name: String, model: DielectricModel) -> Result<Self> {
        let fail = |field, reason: String| CasimirError::Validation {
            record: name.clone(),
            field,
            reason,
        };
        let check_wp = |wp: f64| {
            if wp.is_finite() && wp > 0.0 {
                Ok(())
            } else {
                Err(fail("plasma_frequency", format!("must be > 0, got {wp}")))
            }
        };
        match &model {
            DielectricModel::Plasma { plasma_frequency } => check_wp(*plasma_frequency)?,
            DielectricModel::Drude {
                plasma_frequency,
                relaxation_frequency,
            } => {
                check_wp(*plasma_frequency)?;
                if !(relaxation_frequency.is_finite() && *relaxation_frequency >= 0.0) {
                    return Err(fail(
                        "relaxation_frequency",
                        format!("must be >= 0, got {relaxation_frequency}"),
                    ));
                }
            }
            DielectricModel::Tabulated {
                table,
                plasma_frequency,
            } => {
                if table.len() < 2 {
                    return Err(fail("table", "needs at least 2 samples".into()));
                }
                if let Some(wp) = plasma_frequency {
                    check_wp(*wp)?;
                }
            }
        }
        Ok(Self { name, model })
    }

    pub fn kind(&self) -> ModelKind {
        match self.model {
            DielectricModel::Plasma { .. } => ModelKind::Plasma,
            DielectricModel::Drude { .. } => ModelKind::Drude,
            DielectricModel::Tabulated { .. } => ModelKind::Tabulated,
        }
    }

    pub fn plasma_frequency(&self) -> Option<f64> {
        match self.model {
            DielectricModel::Plasma { plasma_frequency } | DielectricModel::Drude { plasma_frequency, .. } => {
                Some(plasma_frequency)
            }
            DielectricModel::Tabulated { plasma_frequency, .. } => plasma_frequency,
        }
    }

    pub fn relaxation_frequency(&self) -> Option<f64> {
        match self.model {
            DielectricModel::Drude {
                relaxation_frequency, ..
            } => Some(relaxation_frequency),
            _ => None,
        }
    }

    /// Same metal under the plasma or Drude model. Switching to plasma drops
    /// ν; switching to Drude needs a stored ν (ν = 0 when the record is
    /// plasma). Tabulated records cannot be converted.
    pub fn with_model(&self, kind: ModelKind) -> Result<Self> {
        if kind == self.kind() {
            return Ok(self.clone());
        }
        let wp = match (&self.model, kind) {
            (DielectricModel::Tabulated { .. }, _) | (_, ModelKind::Tabulated) => {
                return Err(invalid(
                    "model",
                    format!("cannot convert `{}` from {} to {kind}", self.name, self.kind()),
                ))
            }
            _ => self.plasma_frequency().expect("plasma or drude"),
        };
        match kind {
            ModelKind::Plasma => Self::plasma(self.name.clone(), wp),
            ModelKind::Drude => Self::drude(self.name.clone(), wp, self.relaxation_frequency().unwrap_or(0.0)),
            ModelKind::Tabulated => unreachable!(),
        }
    }

    /// ε(iξ) at imaginary frequency ξ > 0.
    pub fn permittivity_iw(&self, xi: f64) -> Result<f64> {
        if !(xi.is_finite() && xi > 0.0) {
            return Err(invalid("xi", format!("must be finite and > 0 rad/s, got {xi}")));
        }
        Ok(match &self.model {
            DielectricModel::Plasma { plasma_frequency } => 1.0 + (plasma_frequency / xi).powi(2),
            DielectricModel::Drude {
                plasma_frequency,
                relaxation_frequency,
            } => 1.0 + (plasma_frequency / xi) * (plasma_frequency / (xi + relaxation_frequency)),
            DielectricModel::Tabulated { table, .. } => {
                if table.is_empty() {
                    return Err(invalid("table", "tabulated material has no samples"));
                }
                table.eval(xi)
            }
        })
    }
}

#[derive(Default)]
struct PendingRecord {
    name: String,
    line: usize,
    model: Option<ModelKind>,
    plasma_ev: Option<f64>,
    relaxation_mev: Option<f64>,
    table: Option<Vec<(f64, f64)>>,
}

impl PendingRecord {
    fn finish(self) -> Result<MaterialRecord> {
        let fail = |field, reason: &str| CasimirError::Validation {
            record: self.name.clone(),
            field,
            reason: reason.to_string(),
        };
        let model = self.model.ok_or_else(|| fail("model", "is missing"))?;
        let plasma = match self.plasma_ev {
            Some(ev) if ev.is_finite() && ev > 0.0 => Some(ev_to_angular_frequency(ev)?),
            Some(_) => return Err(fail("plasma_frequency_eV", "must be > 0")),
            None => None,
        };
        match model {
            ModelKind::Plasma => {
                let wp = plasma.ok_or_else(|| fail("plasma_frequency_eV", "is missing"))?;
                MaterialRecord::plasma(self.name, wp)
            }
            ModelKind::Drude => {
                let wp = plasma.ok_or_else(|| fail("plasma_frequency_eV", "is missing"))?;
                let nu_mev = self
                    .relaxation_mev
                    .ok_or_else(|| fail("relaxation_meV", "is missing"))?;
                if !(nu_mev.is_finite() && nu_mev >= 0.0) {
                    return Err(fail("relaxation_meV", "must be >= 0"));
                }
                MaterialRecord::drude(self.name, wp, ev_to_angular_frequency(nu_mev * 1e-3)?)
            }
            ModelKind::Tabulated => {
                let samples = self.table.as_deref().unwrap_or(&[]);
                let table = PermittivityTable::new(samples).map_err(|reason| CasimirError::Validation {
                    record: self.name.clone(),
                    field: "table",
                    reason,
                })?;
                MaterialRecord::tabulated(self.name, table, plasma)
            }
        }
    }
}

fn parse_float(text: &str, line: usize, what: &str) -> Result<f64> {
    text.trim().parse::<f64>().map_err(|_| CasimirError::Parse {
        line,
        reason: format!("{what}: cannot parse `{}` as a number", text.trim()),
    })
}

/// Parses the text form of a material database.
///
/// ```text
/// material Au
///   model = drude
///   plasma_frequency_eV = 9.0
///   relaxation_meV = 35
/// ```
///
/// Tabulated records add an indented `table:` block of `<xi_rad_per_s> <epsilon>`
/// lines. `#` starts a comment.
pub fn parse_material_db(text: &str) -> Result<Vec<MaterialRecord>> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    let mut pending: Option<PendingRecord> = None;
    let mut in_table = false;

    let mut flush = |pending: Option<PendingRecord>, records: &mut Vec<MaterialRecord>| -> Result<()> {
        if let Some(p) = pending {
            let line = p.line;
            if !seen.insert(p.name.clone()) {
                return Err(CasimirError::Parse {
                    line,
                    reason: format!("duplicate material name `{}`", p.name),
                });
            }
            records.push(p.finish()?);
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        if line.trim().is_empty() {
            continue;
        }
        let indented = line.starts_with(' ') || line.starts_with('\t');
        let content = line.trim();

        if !indented {
            let mut words = content.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("material"), Some(name), None) => {
                    flush(pending.take(), &mut records)?;
                    pending = Some(PendingRecord {
                        name: name.to_string(),
                        line: line_no,
                        ..PendingRecord::default()
                    });
                    in_table = false;
                }
                _ => {
                    return Err(CasimirError::Parse {
                        line: line_no,
                        reason: format!("expected `material <name>`, found `{content}`"),
                    })
                }
            }
            continue;
        }

        let record = pending.as_mut().ok_or_else(|| CasimirError::Parse {
            line: line_no,
            reason: "indented line outside a material block".into(),
        })?;

        if content == "table:" {
            if record.table.is_some() {
                return Err(CasimirError::Parse {
                    line: line_no,
                    reason: "duplicate `table:` block".into(),
                });
            }
            record.table = Some(Vec::new());
            in_table = true;
            continue;
        }

        if let Some((key, value)) = content.split_once('=') {
            in_table = false;
            let key = key.trim();
            let dup = |set: bool| {
                if set {
                    Err(CasimirError::Parse {
                        line: line_no,
                        reason: format!("duplicate key `{key}`"),
                    })
                } else {
                    Ok(())
                }
            };
            match key {
                "model" => {
                    dup(record.model.is_some())?;
                    let kind = value
                        .trim()
                        .parse::<ModelKind>()
                        .map_err(|reason| CasimirError::Parse { line: line_no, reason })?;
                    record.model = Some(kind);
                }
                "plasma_frequency_eV" => {
                    dup(record.plasma_ev.is_some())?;
                    record.plasma_ev = Some(parse_float(value, line_no, key)?);
                }
                "relaxation_meV" => {
                    dup(record.relaxation_mev.is_some())?;
                    record.relaxation_mev = Some(parse_float(value, line_no, key)?);
                }
                other => {
                    return Err(CasimirError::Parse {
                        line: line_no,
                        reason: format!("unknown key `{other}`"),
                    })
                }
            }
            continue;
        }

        if in_table {
            let mut cols = content.split_whitespace();
            match (cols.next(), cols.next(), cols.next()) {
                (Some(xi), Some(eps), None) => {
                    let pair = (parse_float(xi, line_no, "xi")?, parse_float(eps, line_no, "epsilon")?);
                    record.table.as_mut().expect("in table").push(pair);
                }
                _ => {
                    return Err(CasimirError::Parse {
                        line: line_no,
                        reason: format!("table rows need exactly two numbers, found `{content}`"),
                    })
                }
            }
            continue;
        }

        return Err(CasimirError::Parse {
            line: line_no,
            reason: format!("expected `key = value`, found `{content}`"),
        });
    }
    flush(pending.take(), &mut records)?;
    Ok(records)
}

/// Reads and parses a material database file.
pub fn load_material_db(path: impl AsRef<Path>) -> Result<Vec<MaterialRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| CasimirError::Parse {
        line: 0,
        reason: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_material_db(&text)
}

/// The records of [`DEFAULT_MATERIAL_DB`].
pub fn default_materials() -> Vec<MaterialRecord> {
    parse_material_db(DEFAULT_MATERIAL_DB).expect("built-in database parses")
}
