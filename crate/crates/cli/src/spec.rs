//! System specification files.
//!
//! A spec is a TOML document (or the same schema as JSON) naming the state
//! variables, their drifts, a precondition, an optional query and run
//! options. Every polynomial is a string in the expression grammar of
//! [`odeinv_core::parse_polynomial`].

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use odeinv_core::algorithms::RadicalMode;
use odeinv_core::numeric::Rk4Config;
use odeinv_core::poly::{parse_rational, Monomial};
use odeinv_core::{parse_polynomial, ChainOptions, GbOptions, OrderKind, Polynomial, Precondition, Rational, Ring};
use odeinv_core::{Template, VectorField};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub variables: Vec<String>,
    /// Drift of every state variable. Constants need an explicit `"0"`.
    pub field: BTreeMap<String, String>,
    #[serde(default)]
    pub precondition: PreconditionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub query: Option<QuerySpec>,
    #[serde(default)]
    pub options: OptionsSpec,
    #[serde(default)]
    pub numeric: NumericSpec,
    /// Stored for reference only; corpus runs skip it.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub data_only: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreconditionSpec {
    #[serde(default)]
    pub generators: Vec<String>,
    /// Absent means: singleton when the generators pin every variable to a
    /// constant, plain generators otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSpec {
    Generators,
    Singleton,
    UserSupplied,
}

impl From<ModeSpec> for RadicalMode {
    fn from(m: ModeSpec) -> Self {
        match m {
            ModeSpec::Generators => RadicalMode::Generators,
            ModeSpec::Singleton => RadicalMode::Singleton,
            ModeSpec::UserSupplied => RadicalMode::UserSupplied,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum QuerySpec {
    Post {
        template: TemplateSpec,
        /// Report `J` as the weakest precondition of the discovered
        /// postcondition. Requires an exact precondition.
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        weakest_precondition: bool,
    },
    Pre {
        postcondition: Vec<String>,
    },
    Check {
        postcondition: Vec<String>,
    },
    Invariant {
        generators: Vec<String>,
    },
}

impl QuerySpec {
    pub fn kind(&self) -> &'static str {
        match self {
            QuerySpec::Post { .. } => "post",
            QuerySpec::Pre { .. } => "pre",
            QuerySpec::Check { .. } => "check",
            QuerySpec::Invariant { .. } => "invariant",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum TemplateSpec {
    /// One parameter per product of at most `degree` atoms. The atoms are
    /// `variables` (all state variables when absent) plus `extra_atoms`,
    /// which must be monomials.
    Complete {
        degree: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        variables: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        extra_atoms: Vec<String>,
    },
    Explicit {
        expression: String,
        parameters: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OrderSpec {
    Lex,
    Deglex,
    #[default]
    Degrevlex,
}

impl From<OrderSpec> for OrderKind {
    fn from(o: OrderSpec) -> Self {
        match o {
            OrderSpec::Lex => OrderKind::Lex,
            OrderSpec::Deglex => OrderKind::DegLex,
            OrderSpec::Degrevlex => OrderKind::DegRevLex,
        }
    }
}

impl OrderSpec {
    pub fn name(self) -> &'static str {
        match self {
            OrderSpec::Lex => "lex",
            OrderSpec::Deglex => "deglex",
            OrderSpec::Degrevlex => "degrevlex",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptionsSpec {
    pub order: OrderSpec,
    pub max_iterations: usize,
    pub pair_budget: usize,
    pub degree_cap: u32,
    /// Re-check `π[V] ⊆ J` and Lie closure after each run.
    pub verify: bool,
    /// Run the RK4 cross-check after the query.
    pub numeric_check: bool,
}

impl Default for OptionsSpec {
    fn default() -> Self {
        let chain = ChainOptions::default();
        OptionsSpec {
            order: OrderSpec::default(),
            max_iterations: chain.max_iterations,
            pair_budget: chain.gb.pair_budget,
            degree_cap: chain.gb.degree_cap,
            verify: chain.verify,
            numeric_check: false,
        }
    }
}

impl OptionsSpec {
    pub fn chain_options(&self) -> ChainOptions {
        ChainOptions {
            gb: GbOptions { pair_budget: self.pair_budget, degree_cap: self.degree_cap },
            max_iterations: self.max_iterations,
            verify: self.verify,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericSpec {
    pub samples: usize,
    pub horizon: f64,
    pub step: f64,
    pub tolerance: f64,
    /// Coordinates beyond this magnitude end a trajectory early.
    pub escape: f64,
    /// A trajectory also ends once a single step would move the state by
    /// more than this fraction of `1 + ‖x‖∞`.
    pub resolution: f64,
    pub seed: u64,
    /// Explicit initial points (rational strings in variable order). When
    /// given, they replace sampling.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Vec<String>>,
}

impl Default for NumericSpec {
    fn default() -> Self {
        let rk = Rk4Config::default();
        NumericSpec {
            samples: 5,
            horizon: rk.horizon,
            step: rk.step,
            tolerance: 1e-6,
            escape: rk.escape,
            resolution: rk.resolution,
            seed: 0,
            points: Vec::new(),
        }
    }
}

impl SystemSpec {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads a spec, choosing the syntax by extension (`.json` or TOML).
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            Self::from_json(&text)
        } else {
            Self::from_toml(&text)
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    /// Parses every expression and builds the algebraic objects.
    pub fn compile(&self) -> Result<System, CliError> {
        let ring = Ring::state(&self.variables, self.options.order.into())?;
        for name in self.field.keys() {
            if ring.index_of(name).is_none() {
                return Err(CliError::Spec(format!("drift given for undeclared variable `{name}`")));
            }
        }
        let mut drifts = Vec::with_capacity(self.variables.len());
        for v in &self.variables {
            let text = self.field.get(v).ok_or_else(|| CliError::Spec(format!("no drift for variable `{v}`")))?;
            drifts.push(parse_in(&ring, text, &format!("drift of `{v}`"))?);
        }
        let field = VectorField::new(&ring, drifts)?;
        let gens = parse_all(&ring, &self.precondition.generators, "precondition")?;
        let precondition = match self.precondition.mode {
            None => Precondition::new(&ring, gens)?,
            Some(m) => Precondition::with_mode(&ring, gens, m.into())?,
        };
        Ok(System { spec: self.clone(), ring, field, precondition, options: self.options.chain_options() })
    }
}

/// A spec with every expression parsed.
#[derive(Debug, Clone)]
pub struct System {
    pub spec: SystemSpec,
    pub ring: Arc<Ring>,
    pub field: VectorField,
    pub precondition: Precondition,
    pub options: ChainOptions,
}

impl System {
    pub fn parse(&self, text: &str, what: &str) -> Result<Polynomial, CliError> {
        parse_in(&self.ring, text, what)
    }

    pub fn parse_all(&self, texts: &[String], what: &str) -> Result<Vec<Polynomial>, CliError> {
        parse_all(&self.ring, texts, what)
    }

    pub fn template(&self, spec: &TemplateSpec) -> Result<Template, CliError> {
        match spec {
            TemplateSpec::Complete { degree, variables, extra_atoms } => {
                let n = self.ring.len();
                let mut atoms = Vec::new();
                match variables {
                    None => atoms.extend((0..n).map(|i| Monomial::var(n, i))),
                    Some(vs) => {
                        for v in vs {
                            let i = self
                                .ring
                                .index_of(v)
                                .ok_or_else(|| CliError::Spec(format!("template variable `{v}` is not declared")))?;
                            atoms.push(Monomial::var(n, i));
                        }
                    }
                }
                for a in extra_atoms {
                    let p = self.parse(a, "template atom")?;
                    match p.terms() {
                        [(m, c)] if *c == Rational::from_integer(1.into()) => atoms.push(m.clone()),
                        _ => return Err(CliError::Spec(format!("template atom `{a}` is not a monomial"))),
                    }
                }
                Ok(Template::complete_over_atoms(&self.ring, &atoms, *degree)?)
            }
            TemplateSpec::Explicit { expression, parameters } => {
                Ok(Template::parse(expression, &self.ring, parameters)
                    .map_err(|e| CliError::Spec(format!("template `{expression}`: {e}")))?)
            }
        }
    }

    /// Explicit initial points from the spec, if any.
    pub fn explicit_points(&self) -> Result<Vec<Vec<Rational>>, CliError> {
        let mut out = Vec::new();
        for p in &self.spec.numeric.points {
            if p.len() != self.ring.len() {
                return Err(CliError::Spec(format!("numeric point needs {} coordinates", self.ring.len())));
            }
            let coords = p
                .iter()
                .map(|s| parse_rational(s).map_err(|e| CliError::Spec(format!("numeric point coordinate `{s}`: {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            out.push(coords);
        }
        Ok(out)
    }
}

fn parse_in(ring: &Arc<Ring>, text: &str, what: &str) -> Result<Polynomial, CliError> {
    parse_polynomial(text, ring).map_err(|e| CliError::Spec(format!("{what}: `{text}`: {e}")))
}

fn parse_all(ring: &Arc<Ring>, texts: &[String], what: &str) -> Result<Vec<Polynomial>, CliError> {
    texts.iter().map(|t| parse_in(ring, t, what)).collect()
}
