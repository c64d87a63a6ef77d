use gnedin_fisher::allocation::MultistepReport;
use gnedin_fisher::laws::posterior_waring;
use gnedin_fisher::montecarlo::{derive_seed, replicate_rng};
use gnedin_fisher::{
    blocks_pmf, eppf, psi_to_zeta, sample_sequential, structural_mixture_pdf_check,
    verify_addition_rule, verify_bayes_identity, verify_mixture, verify_multistep_total,
    verify_normalization, zeta_to_psi, GnedinFisherPsi, OccupancyCounts, PsiRepresentation, Scalar,
    SetPartition, StructuralLaw, StructuralSampler, TwoStageSampler, XiPrior, ZetaValidity,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Backend, Command, DistLaw, GlobalArgs, ModelArgs, SampleKind, SampleRun, Suite};
use crate::model::{parse_counts, resolve, resolve_for_convert, value_pair, Form, PsiModel, Resolved};
use crate::output::{record, Output, Record};
use crate::CliError;

/// Result of a command and whether every check it made passed.
pub struct Outcome {
    pub output: Output,
    pub ok: bool,
}

impl From<Output> for Outcome {
    fn from(output: Output) -> Self {
        Outcome { output, ok: true }
    }
}

pub fn execute(cmd: &Command, g: &GlobalArgs) -> Result<Outcome, CliError> {
    match cmd {
        Command::Eppf { model, counts } => cmd_eppf(model, counts, g.backend).map(Into::into),
        Command::Dist { law } => cmd_dist(law, g.backend).map(Into::into),
        Command::Sample { kind } => cmd_sample(kind, g.threads).map(Into::into),
        Command::Convert { model } => cmd_convert(model, g.backend).map(Into::into),
        Command::Verify { suite } => cmd_verify(suite, g.backend, g.tolerance),
    }
}

fn lib_error(e: gnedin_fisher::Error) -> CliError {
    CliError::Invalid(e.to_string())
}

fn counts_arg(s: &str) -> Result<OccupancyCounts, CliError> {
    OccupancyCounts::new(parse_counts(s)?).map_err(lib_error)
}

fn insert_value<T: Scalar>(r: &mut Record, key: &str, v: &T) {
    let (exact, float) = value_pair(v);
    r.insert(key.into(), exact);
    r.insert(format!("{key}_float"), float);
}

fn cmd_eppf(model: &ModelArgs, counts: &str, backend: Backend) -> Result<Output, CliError> {
    let resolved = resolve(model, backend)?;
    let counts = counts_arg(counts)?;
    let mut r = record("eppf");
    r.insert("counts".into(), json!(counts.counts()));
    r.insert("n".into(), json!(counts.n()));
    r.insert("k".into(), json!(counts.k()));
    r.extend(resolved.fields());
    match &resolved {
        Resolved::Exact(f) => insert_value(&mut r, "value", &eppf(f.gibbs(), &counts).map_err(lib_error)?),
        Resolved::Float(f) => insert_value(&mut r, "value", &eppf(f.gibbs(), &counts).map_err(lib_error)?),
    }
    Ok(Output::Record(r))
}

fn header(command: &str, resolved: &Resolved) -> Record {
    let mut h = record(command);
    h.extend(resolved.fields());
    h
}

fn float_header(command: &str, model: &GnedinFisherPsi<f64>) -> Record {
    let mut h = record(command);
    let (g, p) = model.params();
    h.insert("gamma".into(), json!(g));
    h.insert("psi".into(), json!(p));
    h.insert("backend".into(), json!("float"));
    h
}

/// Rows `(index, probability)` from a list of backend values, plus their sum.
fn probability_table<T: Scalar>(index: &str, start: u64, values: &[T]) -> (Vec<Record>, Record) {
    let mut rows = Vec::with_capacity(values.len());
    let mut sum = T::zero();
    for (i, v) in values.iter().enumerate() {
        let mut r = Record::new();
        r.insert(index.into(), json!(start + i as u64));
        insert_value(&mut r, "probability", v);
        rows.push(r);
        sum = sum + v.clone();
    }
    let mut total = Record::new();
    total.insert(index.into(), json!("total"));
    insert_value(&mut total, "probability", &sum);
    (rows, total)
}

fn cmd_dist(law: &DistLaw, backend: Backend) -> Result<Output, CliError> {
    match law {
        DistLaw::Blocks { model, n } => {
            let resolved = resolve(model, backend)?;
            let (rows, total) = match &resolved {
                Resolved::Exact(f) => probability_table("k", 1, &blocks_pmf(f.gibbs(), *n).map_err(lib_error)?),
                Resolved::Float(f) => probability_table("k", 1, &blocks_pmf(f.gibbs(), *n).map_err(lib_error)?),
            };
            let mut h = header("dist blocks", &resolved);
            h.insert("n".into(), json!(n));
            Ok(Output::Table { header: h, rows, total: Some(total) })
        }
        DistLaw::XiPrior { model, max_xi } => {
            if *max_xi < 1 {
                return Err(CliError::Invalid("--max-xi must be at least 1".into()));
            }
            let psi = resolve(model, backend)?.psi_f64()?;
            let prior = XiPrior::new(&psi);
            let mut rows = Vec::new();
            let mut sum = 0.0;
            for (i, p) in prior.iter().take(*max_xi as usize).enumerate() {
                let xi = i as u64 + 1;
                sum += p;
                let mut r = Record::new();
                r.insert("xi".into(), json!(xi));
                r.insert("probability".into(), json!(p));
                r.insert("tail_bound".into(), json!(prior.tail_bound(xi, 0.0).map_err(lib_error)?));
                rows.push(r);
            }
            let mut total = Record::new();
            total.insert("xi".into(), json!("total"));
            total.insert("probability".into(), json!(sum));
            total.insert("tail_bound".into(), json!(prior.tail_bound(*max_xi, 0.0).map_err(lib_error)?));
            let mut h = float_header("dist xi-prior", &psi);
            h.insert("max_xi".into(), json!(max_xi));
            Ok(Output::Table { header: h, rows, total: Some(total) })
        }
        DistLaw::XiPosterior { model, n, k, max_xi } => {
            let psi = resolve(model, backend)?.psi_f64()?;
            let w = posterior_waring(&psi, *n, *k).map_err(lib_error)?;
            if max_xi < k {
                return Err(CliError::Invalid(format!("--max-xi {max_xi} is below k = {k}")));
            }
            let mut rows = Vec::new();
            let mut sum = 0.0;
            for xi in *k..=*max_xi {
                let p = w.pmf_shifted(xi);
                sum += p;
                let mut r = Record::new();
                r.insert("xi".into(), json!(xi));
                r.insert("probability".into(), json!(p));
                let tail = if xi > *k { json!(w.tail_estimate(xi - k, 0)) } else { Value::Null };
                r.insert("tail_estimate".into(), tail);
                rows.push(r);
            }
            let mut total = Record::new();
            total.insert("xi".into(), json!("total"));
            total.insert("probability".into(), json!(sum));
            let tail = if max_xi > k { json!(w.tail_estimate(max_xi - k, 0)) } else { json!(1.0 - sum) };
            total.insert("tail_estimate".into(), tail);
            let mut h = float_header("dist xi-posterior", &psi);
            h.insert("n".into(), json!(n));
            h.insert("k".into(), json!(k));
            h.insert("max_xi".into(), json!(max_xi));
            Ok(Output::Table { header: h, rows, total: Some(total) })
        }
        DistLaw::NewBlocks { model, n, k, m } => {
            let resolved = resolve(model, backend)?;
            fn law<T: Scalar>(f: &Form<T>, n: u64, k: u64, m: u64) -> Result<Vec<T>, CliError> {
                (0..=m)
                    .map(|ks| {
                        gnedin_fisher::laws::new_blocks_posterior_gibbs(f.gibbs(), n, k, m, ks)
                            .map_err(lib_error)
                    })
                    .collect()
            }
            let (rows, total) = match &resolved {
                Resolved::Exact(f) => probability_table("new_blocks", 0, &law(f, *n, *k, *m)?),
                Resolved::Float(f) => probability_table("new_blocks", 0, &law(f, *n, *k, *m)?),
            };
            let mut h = header("dist new-blocks", &resolved);
            h.insert("n".into(), json!(n));
            h.insert("k".into(), json!(k));
            h.insert("m".into(), json!(m));
            Ok(Output::Table { header: h, rows, total: Some(total) })
        }
        DistLaw::Structural { model, grid } => {
            if *grid < 1 {
                return Err(CliError::Invalid("--grid must be at least 1".into()));
            }
            let psi = resolve(model, backend)?.psi_f64()?;
            let law = StructuralLaw::new(&psi);
            let mut rows = Vec::new();
            for i in 1..=*grid {
                let y = i as f64 / (*grid + 1) as f64;
                let mut r = Record::new();
                r.insert("y".into(), json!(y));
                r.insert("density".into(), json!(law.density(y).map_err(lib_error)?));
                r.insert("cdf".into(), json!(law.cdf(y).map_err(lib_error)?));
                rows.push(r);
            }
            let mut atom = Record::new();
            atom.insert("y".into(), json!(1.0));
            atom.insert("atom".into(), json!(law.atom()));
            rows.push(atom);
            let mut total = Record::new();
            total.insert("y".into(), json!("total"));
            total.insert("mass".into(), json!(law.total_mass().map_err(lib_error)?));
            let mut h = float_header("dist structural", &psi);
            h.insert("grid".into(), json!(grid));
            Ok(Output::Table { header: h, rows, total: Some(total) })
        }
    }
}

fn partition_record(index: u64, seed: u64, p: &SetPartition) -> Record {
    let mut sizes = p.block_sizes();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let mut r = record("sample");
    r.insert("replicate".into(), json!(index));
    r.insert("seed".into(), json!(derive_seed(seed, index)));
    r.insert("n".into(), json!(p.n()));
    r.insert("k".into(), json!(p.k()));
    r.insert("block_sizes".into(), json!(sizes));
    r
}

/// Runs replicate `i` with its own stream; output order is replicate order
/// whatever the thread count.
fn replicate<F>(run: &SampleRun, threads: usize, f: F) -> Result<Vec<Record>, CliError>
where
    F: Fn(u64, &mut rand_chacha::ChaCha8Rng) -> Result<Record, CliError> + Sync,
{
    if run.replicates < 1 {
        return Err(CliError::Invalid("--replicates must be at least 1".into()));
    }
    if threads < 1 {
        return Err(CliError::Invalid("--threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    pool.install(|| {
        (0..run.replicates)
            .into_par_iter()
            .map(|i| f(i, &mut replicate_rng(run.seed, i)))
            .collect()
    })
}

fn cmd_sample(kind: &SampleKind, threads: usize) -> Result<Output, CliError> {
    let records = match kind {
        SampleKind::Grow { model, run, n } => {
            let psi = resolve(model, Backend::Float)?.psi_f64()?;
            replicate(run, threads, |i, rng| {
                let p = sample_sequential(&psi, *n, rng).map_err(lib_error)?;
                Ok(partition_record(i, run.seed, &p))
            })?
        }
        SampleKind::TwoStage { model, run, n } => {
            let psi = resolve(model, Backend::Float)?.psi_f64()?;
            let sampler = TwoStageSampler::new(&psi);
            replicate(run, threads, |i, rng| {
                let p = sampler.sample(*n, rng).map_err(lib_error)?;
                Ok(partition_record(i, run.seed, &p))
            })?
        }
        SampleKind::Structural { model, run } => {
            let psi = resolve(model, Backend::Float)?.psi_f64()?;
            let sampler = StructuralSampler::new(&psi);
            replicate(run, threads, |i, rng| {
                let mut r = record("sample");
                r.insert("replicate".into(), json!(i));
                r.insert("seed".into(), json!(derive_seed(run.seed, i)));
                r.insert("y".into(), json!(sampler.sample(rng)));
                Ok(r)
            })?
        }
    };
    Ok(Output::Stream(records))
}

fn validity_fields(r: &mut Record, v: &ZetaValidity) {
    match v {
        ZetaValidity::Infinite => {
            r.insert("case".into(), json!("i"));
            r.insert("max_species".into(), Value::Null);
        }
        ZetaValidity::Finite { i0 } => {
            r.insert("case".into(), json!("ii"));
            r.insert("max_species".into(), json!(i0));
        }
        ZetaValidity::Invalid { .. } => unreachable!("constructed models are valid"),
    }
}

fn convert<T: Scalar>(form: &Form<T>, r: &mut Record) {
    match form {
        Form::Psi(p) => {
            let z = psi_to_zeta(p);
            r.insert("gamma".into(), json!(p.gamma().render()));
            insert_value(r, "psi", p.psi());
            insert_value(r, "zeta", z.zeta());
            let disc = p.gamma().clone() * p.gamma().clone() - T::from_u64(4) * z.zeta().clone();
            insert_value(r, "discriminant", &disc);
            r.insert("representable".into(), json!(true));
            validity_fields(r, &z.validity());
        }
        Form::Zeta(z) => {
            r.insert("gamma".into(), json!(z.gamma().render()));
            let disc = z.gamma().clone() * z.gamma().clone() - T::from_u64(4) * z.zeta().clone();
            match zeta_to_psi(z) {
                PsiRepresentation::Exact(p) => {
                    insert_value(r, "psi", p.psi());
                    r.insert("representable".into(), json!(true));
                }
                PsiRepresentation::Inexact(p) => {
                    insert_value(r, "psi", p.psi());
                    r.insert("representable".into(), json!(true));
                }
                PsiRepresentation::NotRepresentable { reason, .. } => {
                    r.insert("psi".into(), Value::Null);
                    r.insert("psi_float".into(), Value::Null);
                    r.insert("representable".into(), json!(false));
                    r.insert("reason".into(), json!(reason));
                }
            }
            insert_value(r, "zeta", z.zeta());
            insert_value(r, "discriminant", &disc);
            validity_fields(r, &z.validity());
        }
    }
}

fn cmd_convert(model: &ModelArgs, backend: Backend) -> Result<Output, CliError> {
    let resolved = resolve_for_convert(model, backend)?;
    let mut r = record("convert");
    match &resolved {
        Resolved::Exact(f) => {
            r.insert("from".into(), json!(f.parametrization()));
            convert(f, &mut r);
        }
        Resolved::Float(f) => {
            r.insert("from".into(), json!(f.parametrization()));
            convert(f, &mut r);
        }
    }
    r.insert("backend".into(), json!(resolved.backend()));
    Ok(Output::Record(r))
}

/// Exact zero for rationals, `|residual| <= tol` for floats.
fn passes<T: Scalar>(residual: &T, tol: f64) -> bool {
    if T::EXACT {
        residual.is_zero()
    } else {
        residual.to_f64().abs() <= tol
    }
}

fn cmd_verify(suite: &Suite, backend: Backend, tol: f64) -> Result<Outcome, CliError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(CliError::Invalid("--tolerance must be positive".into()));
    }
    let (name, model) = match suite {
        Suite::Normalization { model, .. } => ("normalization", model),
        Suite::Addition { model, .. } => ("addition", model),
        Suite::Mixture { model, .. } => ("mixture", model),
        Suite::Bayes { model, .. } => ("bayes", model),
        Suite::Multistep { model, .. } => ("multistep", model),
        Suite::Structural { model, .. } => ("structural", model),
    };
    let resolved = resolve(model, backend)?;
    let mut r = record("verify");
    r.insert("suite".into(), json!(name));
    r.extend(resolved.fields());
    r.insert("tolerance".into(), json!(tol));
    let ok = match suite {
        Suite::Normalization { n, .. } => {
            fn run<T: Scalar>(f: &Form<T>, n: usize, tol: f64, r: &mut Record) -> Result<bool, CliError> {
                let rep = verify_normalization(f.gibbs(), n).map_err(lib_error)?;
                r.insert("n".into(), json!(rep.n));
                r.insert("partitions".into(), json!(rep.partitions));
                insert_value(r, "total", &rep.total);
                insert_value(r, "residual", &rep.residual);
                Ok(passes(&rep.residual, tol))
            }
            match &resolved {
                Resolved::Exact(f) => run(f, *n, tol, &mut r)?,
                Resolved::Float(f) => run(f, *n, tol, &mut r)?,
            }
        }
        Suite::Addition { counts, .. } => {
            fn run<T: Scalar>(f: &Form<T>, c: &OccupancyCounts, tol: f64, r: &mut Record) -> Result<bool, CliError> {
                let rep = verify_addition_rule(f.gibbs(), c).map_err(lib_error)?;
                r.insert("counts".into(), json!(c.counts()));
                insert_value(r, "lhs", &rep.lhs);
                insert_value(r, "rhs", &rep.rhs);
                let residual = rep.lhs - rep.rhs;
                insert_value(r, "residual", &residual);
                Ok(passes(&residual, tol))
            }
            let c = counts_arg(counts)?;
            match &resolved {
                Resolved::Exact(f) => run(f, &c, tol, &mut r)?,
                Resolved::Float(f) => run(f, &c, tol, &mut r)?,
            }
        }
        Suite::Mixture { n, k, xi_max, .. } => {
            let rep = verify_mixture(&resolved.psi_f64()?, *n, *k, *xi_max).map_err(lib_error)?;
            let gap = (rep.partial_sum - rep.target).abs();
            r.insert("n".into(), json!(n));
            r.insert("k".into(), json!(k));
            r.insert("xi_max".into(), json!(xi_max));
            r.insert("partial_sum".into(), json!(rep.partial_sum));
            r.insert("target".into(), json!(rep.target));
            r.insert("gap".into(), json!(gap));
            r.insert("tail_bound".into(), json!(rep.tail_bound));
            gap <= rep.tail_bound + tol
        }
        Suite::Bayes { n, k, xi, .. } => {
            let rep = verify_bayes_identity(&resolved.psi_f64()?, *n, *k, *xi).map_err(lib_error)?;
            r.insert("n".into(), json!(n));
            r.insert("k".into(), json!(k));
            r.insert("xi".into(), json!(xi));
            r.insert("lhs".into(), json!(rep.lhs));
            r.insert("rhs".into(), json!(rep.rhs));
            r.insert("relative_difference".into(), json!(rep.relative_difference));
            rep.relative_difference <= tol
        }
        Suite::Multistep { counts, m, .. } => {
            fn run<T: Scalar>(p: &GnedinFisherPsi<T>, c: &OccupancyCounts, m: u64, tol: f64, r: &mut Record) -> Result<bool, CliError> {
                let rep: MultistepReport<T> = verify_multistep_total(p, c, m).map_err(lib_error)?;
                r.insert("counts".into(), json!(c.counts()));
                r.insert("m".into(), json!(m));
                r.insert("configurations".into(), json!(rep.configurations));
                let residual = rep.total.clone() - T::one();
                insert_value(r, "total", &rep.total);
                insert_value(r, "residual", &residual);
                Ok(passes(&residual, tol))
            }
            let c = counts_arg(counts)?;
            match &resolved {
                Resolved::Exact(f) => match f.psi_model()? {
                    PsiModel::Native(p) => run(&p, &c, *m, tol, &mut r)?,
                    PsiModel::Float(p) => run(&p, &c, *m, tol, &mut r)?,
                },
                Resolved::Float(f) => run(&f.psi_f64()?, &c, *m, tol, &mut r)?,
            }
        }
        Suite::Structural { xi_max, .. } => {
            let psi = resolved.psi_f64()?;
            let law = StructuralLaw::new(&psi);
            let prior_one = XiPrior::new(&psi).mass_at_one();
            let atom_gap = (law.atom() - prior_one).abs();
            let mass = law.total_mass().map_err(lib_error)?;
            r.insert("xi_max".into(), json!(xi_max));
            r.insert("atom".into(), json!(law.atom()));
            r.insert("prior_mass_at_one".into(), json!(prior_one));
            r.insert("atom_gap".into(), json!(atom_gap));
            r.insert("total_mass".into(), json!(mass));
            r.insert("mass_residual".into(), json!(mass - 1.0));
            let mut ok = atom_gap <= tol && (mass - 1.0).abs() <= tol;
            let mut points = Vec::new();
            for i in 1..=9 {
                let y = i as f64 / 10.0;
                let rep = structural_mixture_pdf_check(&psi, y, *xi_max).map_err(lib_error)?;
                let gap = (rep.direct - rep.partial_sum).abs();
                let point_ok = gap <= rep.tail_bound + tol * rep.direct.max(1.0);
                ok &= point_ok;
                points.push(json!({
                    "y": y,
                    "density": rep.direct,
                    "mixture_partial_sum": rep.partial_sum,
                    "gap": gap,
                    "tail_bound": rep.tail_bound,
                    "ok": point_ok,
                }));
            }
            r.insert("mixture".into(), Value::Array(points));
            ok
        }
    };
    r.insert("ok".into(), json!(ok));
    Ok(Outcome { output: Output::Record(r), ok })
}
