//! Parameter parsing and backend selection.

use gnedin_fisher::{
    zeta_to_psi, GibbsWeights, GnedinFisherPsi, GnedinFisherZeta, Number, PsiRepresentation,
    Rational, Scalar,
};
use serde_json::{json, Map, Value};

use crate::args::{Backend, ModelArgs};
use crate::CliError;

/// A model in the form it was given on the command line.
#[derive(Debug, Clone)]
pub enum Form<T> {
    Psi(GnedinFisherPsi<T>),
    Zeta(GnedinFisherZeta<T>),
}

impl<T: Scalar> Form<T> {
    pub fn gibbs(&self) -> &dyn GibbsWeights<T> {
        match self {
            Form::Psi(m) => m,
            Form::Zeta(m) => m,
        }
    }

    pub fn parametrization(&self) -> &'static str {
        match self {
            Form::Psi(_) => "psi",
            Form::Zeta(_) => "zeta",
        }
    }

    /// `gamma`, `psi` or `zeta`, as strings.
    pub fn fields(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("parametrization".into(), json!(self.parametrization()));
        match self {
            Form::Psi(p) => {
                m.insert("gamma".into(), json!(p.gamma().render()));
                m.insert("psi".into(), json!(p.psi().render()));
            }
            Form::Zeta(z) => {
                m.insert("gamma".into(), json!(z.gamma().render()));
                m.insert("zeta".into(), json!(z.zeta().render()));
            }
        }
        m
    }

    /// The `(γ, ψ)` form, exact when the backend allows it.
    pub fn psi_model(&self) -> Result<PsiModel<T>, CliError> {
        match self {
            Form::Psi(p) => Ok(PsiModel::Native(p.clone())),
            Form::Zeta(z) => match zeta_to_psi(z) {
                PsiRepresentation::Exact(p) => Ok(PsiModel::Native(p)),
                PsiRepresentation::Inexact(p) => Ok(PsiModel::Float(p)),
                PsiRepresentation::NotRepresentable { discriminant, reason } => {
                    Err(CliError::Invalid(format!(
                        "model has no (gamma, psi) form: {reason} (discriminant gamma^2 - 4 zeta = {})",
                        discriminant.render()
                    )))
                }
            },
        }
    }

    pub fn psi_f64(&self) -> Result<GnedinFisherPsi<f64>, CliError> {
        Ok(match self.psi_model()? {
            PsiModel::Native(p) => p.to_f64(),
            PsiModel::Float(p) => p,
        })
    }
}

pub enum PsiModel<T> {
    Native(GnedinFisherPsi<T>),
    /// Irrational root of an exact `(γ, ζ)` model.
    Float(GnedinFisherPsi<f64>),
}

#[derive(Debug, Clone)]
pub enum Resolved {
    Exact(Form<Rational>),
    Float(Form<f64>),
}

impl Resolved {
    pub fn backend(&self) -> &'static str {
        match self {
            Resolved::Exact(_) => "exact",
            Resolved::Float(_) => "float",
        }
    }

    pub fn fields(&self) -> Map<String, Value> {
        let mut m = match self {
            Resolved::Exact(f) => f.fields(),
            Resolved::Float(f) => f.fields(),
        };
        m.insert("backend".into(), json!(self.backend()));
        m
    }

    pub fn psi_f64(&self) -> Result<GnedinFisherPsi<f64>, CliError> {
        match self {
            Resolved::Exact(f) => f.psi_f64(),
            Resolved::Float(f) => f.psi_f64(),
        }
    }
}

fn parse_float(name: &str, s: &str) -> Result<f64, CliError> {
    s.parse::<Number>()
        .map(|n| n.to_f64())
        .map_err(|_| CliError::Invalid(format!("--{name}: not a number: {s:?}")))
}

fn parse_exact(name: &str, s: &str) -> Result<Rational, CliError> {
    Number::parse_exact(s).map_err(|_| CliError::Invalid(format!("--{name}: not a number: {s:?}")))
}

fn is_exact_literal(s: &str) -> bool {
    matches!(s.parse::<Number>(), Ok(Number::Exact(_)))
}

fn build<T: Scalar>(
    args: &ModelArgs,
    parse: impl Fn(&str, &str) -> Result<T, CliError>,
) -> Result<Form<T>, CliError> {
    let gamma = parse("gamma", &args.gamma)?;
    let invalid = |e: gnedin_fisher::Error| CliError::Invalid(e.to_string());
    match (&args.psi, &args.zeta) {
        (Some(psi), None) => {
            let psi = parse("psi", psi)?;
            GnedinFisherPsi::new(gamma, psi).map(Form::Psi).map_err(invalid)
        }
        (None, Some(zeta)) => {
            let zeta = parse("zeta", zeta)?;
            GnedinFisherZeta::new(gamma, zeta).map(Form::Zeta).map_err(invalid)
        }
        _ => Err(CliError::Invalid("give exactly one of --psi and --zeta".into())),
    }
}

/// `auto` is exact when every literal is an integer or a fraction.
pub fn resolve(args: &ModelArgs, backend: Backend) -> Result<Resolved, CliError> {
    let exact = match backend {
        Backend::Exact => true,
        Backend::Float => false,
        Backend::Auto => std::iter::once(&args.gamma)
            .chain(args.psi.iter())
            .chain(args.zeta.iter())
            .all(|s| is_exact_literal(s)),
    };
    if exact {
        build(args, parse_exact).map(Resolved::Exact)
    } else {
        build(args, parse_float).map(Resolved::Float)
    }
}

/// `convert` reads decimals exactly unless the float backend is forced.
pub fn resolve_for_convert(args: &ModelArgs, backend: Backend) -> Result<Resolved, CliError> {
    match backend {
        Backend::Float => resolve(args, Backend::Float),
        _ => resolve(args, Backend::Exact),
    }
}

/// Exact `"p/q"` (or float rendering) and the float value of a result.
pub fn value_pair<T: Scalar>(v: &T) -> (Value, Value) {
    (json!(v.render()), json!(v.to_f64()))
}

pub fn parse_counts(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(|c| {
            c.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Invalid(format!("--counts: not a positive integer: {c:?}")))
        })
        .collect()
}
