//! JSON section-spec files: strict schema, parsed into validated library
//! objects.

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use sqrte::linalg::QMatrix;
use sqrte::poly::parse_poly;
use sqrte::quad::QuadSpace;
use sqrte::routes::SpinModel;
use sqrte::section::{IsoSection, TorusWeights};
use sqrte::MultiPoly;
use std::path::Path;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionSpec {
    pub base_vars: Vec<String>,
    pub form: FormSpec,
    #[serde(default = "default_orientation")]
    pub orientation: i8,
    pub components: Vec<String>,
    #[serde(default)]
    pub weights: Option<WeightSpec>,
    #[serde(default)]
    pub spin: Option<SpinSpec>,
    #[serde(default)]
    pub routes: Option<Vec<String>>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub step_budget: Option<usize>,
}

fn default_orientation() -> i8 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    /// "hyperbolic(n)", "sum_of_squares(2n)" or "eg2"
    Preset(String),
    Gram { gram: Vec<Vec<String>> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightSpec {
    pub base: Vec<i64>,
    pub fiber: Vec<i64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpinSpec {
    pub base_weights: Vec<i64>,
    pub m_plus: (i64, i64),
    pub m_minus: (i64, i64),
    pub f: Vec<String>,
    pub v: Vec<String>,
}

pub fn parse_spec(path: &Path) -> Result<SectionSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read spec file {}", path.display()))?;
    let spec: SectionSpec = serde_json::from_str(&text).map_err(|e| {
        anyhow!("schema error in {} at line {}, column {}: {}", path.display(), e.line(), e.column(), e)
    })?;
    Ok(spec)
}

fn parse_preset(name: &str) -> Result<QuadSpace> {
    if name == "eg2" {
        return Ok(QuadSpace::eg2_form());
    }
    if let Some(arg) = name.strip_prefix("hyperbolic(").and_then(|s| s.strip_suffix(')')) {
        let n: usize = arg.parse().context("hyperbolic(n) needs an integer")?;
        if n == 0 {
            bail!("hyperbolic(n) needs n >= 1");
        }
        return Ok(QuadSpace::hyperbolic(n));
    }
    if let Some(arg) = name.strip_prefix("sum_of_squares(").and_then(|s| s.strip_suffix(')')) {
        let m: usize = arg.parse().context("sum_of_squares(m) needs an integer")?;
        if m == 0 || m % 2 != 0 {
            bail!("sum_of_squares(m) needs a positive even rank");
        }
        return Ok(QuadSpace::sum_of_squares(m));
    }
    bail!("unknown form preset `{name}` (expected hyperbolic(n), sum_of_squares(2n) or eg2)")
}

fn parse_rational(text: &str) -> Result<num_rational::BigRational> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: num_bigint::BigInt = num.parse().map_err(|_| anyhow!("bad rational `{text}`"))?;
    let d: num_bigint::BigInt = den.parse().map_err(|_| anyhow!("bad rational `{text}`"))?;
    if d == 0.into() {
        bail!("zero denominator in `{text}`");
    }
    Ok(num_rational::BigRational::new(n, d))
}

impl SectionSpec {
    pub fn space(&self) -> Result<QuadSpace> {
        let base = match &self.form {
            FormSpec::Preset(name) => parse_preset(name)?,
            FormSpec::Gram { gram } => {
                let rows: Result<Vec<Vec<_>>> = gram
                    .iter()
                    .map(|row| row.iter().map(|e| parse_rational(e)).collect())
                    .collect();
                QuadSpace::from_gram(QMatrix::from_rows(rows?))
                    .map_err(|e| anyhow!("bad Gram matrix: {e}"))?
            }
        };
        Ok(match self.orientation {
            1 => base,
            -1 => base.flipped(),
            other => bail!("orientation must be 1 or -1, found {other}"),
        })
    }

    pub fn polynomials(&self) -> Result<Vec<MultiPoly>> {
        self.components
            .iter()
            .map(|s| {
                parse_poly(&self.base_vars, s).map_err(|e| anyhow!("component `{s}`: {e}"))
            })
            .collect()
    }

    pub fn section(&self) -> Result<IsoSection> {
        let space = self.space()?;
        let components = self.polynomials()?;
        let torus = self.weights.as_ref().map(|w| TorusWeights {
            base: w.base.clone(),
            fiber: w.fiber.clone(),
        });
        IsoSection::validate(&self.base_vars, space, components, torus)
            .map_err(|e| anyhow!("invalid section: {e}"))
    }

    pub fn spin_model(&self) -> Result<Option<SpinModel>> {
        let Some(spin) = &self.spin else { return Ok(None) };
        if spin.f.len() != 2 || spin.v.len() != 2 {
            bail!("spin model needs exactly two F and two v components");
        }
        let parse = |s: &String| {
            parse_poly(&self.base_vars, s).map_err(|e| anyhow!("spin component `{s}`: {e}"))
        };
        Ok(Some(SpinModel {
            base_vars: self.base_vars.clone(),
            base_weights: spin.base_weights.clone(),
            m_plus: spin.m_plus,
            m_minus: spin.m_minus,
            f: [parse(&spin.f[0])?, parse(&spin.f[1])?],
            v: [parse(&spin.v[0])?, parse(&spin.v[1])?],
        }))
    }
}
