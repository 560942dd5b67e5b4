use std::io::Write;
use std::time::Instant;

use ehrhart_core::hstar::{HStarVector, PropertyFlags};
use ehrhart_core::oracles::{enumerate_ssyt, enumerate_strict_patterns, OracleBudget};
use ehrhart_core::poset::search_nonrealrooted;
use ehrhart_core::{
    birkhoff_ehrhart, count_linear_extensions, gt_dimension, gt_ehrhart, hstar_via_linext, kostka,
    order_polytope_ehrhart, strict_kostka, EhrhartComputation, Error, GTChainSpec, Partition, Permutation, Poset,
    SkewShape, WeightVector,
};
use rayon::prelude::*;

use crate::inputs::{expand_weight_pattern, parse_poset};
use crate::record::{read_store, InputDescriptor, ResultRecord, Store};
use crate::{CliError, Cli, Command, GtArgs, OrderCommand};

type Outcome = Result<(), CliError>;

/// Executes one command, writing results to `out` and notes to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Ehrhart(args) => gt_command(&args, false, out, err),
        Command::Hstar(args) => gt_command(&args, true, out, err),
        Command::Order { what } => order_command(what, out),
        Command::Birkhoff { ell, json } => {
            let start = Instant::now();
            let comp = birkhoff_ehrhart(ell)?;
            let rec = ResultRecord::new(InputDescriptor::Birkhoff { ell }, &comp, true, true, elapsed_ms(start))?;
            emit(out, &rec, json, &[("polytope", format!("B_{ell}"))])
        }
        Command::PermSearch {
            base,
            radius,
            avoid,
            jobs,
            out: store,
        } => perm_search(&base, radius, &avoid, jobs, store, out, err),
        Command::Batch {
            size,
            weight_pattern,
            out: store,
            jobs,
        } => batch(size, &weight_pattern, &store, jobs, err),
        Command::Check { store } => {
            let records = read_store(&store)?;
            let bad: Vec<usize> = records
                .iter()
                .enumerate()
                .filter(|(_, r)| !r.reverify())
                .map(|(i, _)| i + 1)
                .collect();
            writeln!(out, "{} records, {} failed", records.len(), bad.len())?;
            if bad.is_empty() {
                Ok(())
            } else {
                Err(CliError {
                    code: CliError::VERIFICATION,
                    message: format!("records failing re-verification (1-based): {bad:?}"),
                })
            }
        }
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(CliError::input("--jobs must be at least 1")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::input(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn gt_spec(args: &GtArgs) -> Result<(GTChainSpec, InputDescriptor), CliError> {
    let lambda: Partition = args.lambda.parse()?;
    let mu: Partition = args.mu.parse()?;
    let weight: WeightVector = args.weight.parse()?;
    let shape = SkewShape::new(lambda.clone(), mu.clone())?;
    let spec = GTChainSpec::new(shape, weight.clone());
    Ok((spec, InputDescriptor::Gt { lambda, mu, weight }))
}

fn gt_command(args: &GtArgs, with_hstar: bool, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let (spec, input) = gt_spec(args)?;
    let verify = !args.no_verify;
    let start = Instant::now();
    let comp = gt_ehrhart(&spec, verify)?;
    let rec = ResultRecord::new(input, &comp, with_hstar, verify, elapsed_ms(start))?;
    let mut header = vec![
        ("shape", spec.shape().to_string()),
        ("weight", spec.weight().to_string()),
    ];
    if args.oracle {
        let note = gt_oracle(&spec, &comp)?;
        if args.json {
            writeln!(err, "oracle: {note}")?;
        } else {
            header.push(("oracle", note));
        }
    }
    emit(out, &rec, args.json, &header)
}

/// Brute-force check of `L(1)` and `L*(1)`; a budget overrun is reported,
/// not treated as a failure.
fn gt_oracle(spec: &GTChainSpec, comp: &EhrhartComputation) -> Result<String, CliError> {
    let budget = OracleBudget::default();
    let direct = match enumerate_ssyt(spec.shape(), spec.weight(), budget) {
        Ok(v) => v,
        Err(Error::BudgetExceeded(why)) => return Ok(format!("skipped ({why})")),
        Err(e) => return Err(e.into()),
    };
    let (_, mask) = gt_dimension(spec)?;
    let strict = match enumerate_strict_patterns(spec, &mask, 1, budget) {
        Ok(v) => v,
        Err(Error::BudgetExceeded(why)) => return Ok(format!("skipped ({why})")),
        Err(e) => return Err(e.into()),
    };
    let mismatch = |what: &str, engine: String, oracle: String| CliError {
        code: CliError::VERIFICATION,
        message: format!("oracle disagrees on {what}: engine {engine}, enumeration {oracle}"),
    };
    if kostka(spec) != direct {
        return Err(mismatch("L(1)", kostka(spec).to_string(), direct.to_string()));
    }
    let from_poly = comp.polynomial.eval_integer(1);
    if from_poly != Some(num_bigint::BigInt::from(direct.clone())) {
        return Err(mismatch("L(1) from the polynomial", format!("{from_poly:?}"), direct.to_string()));
    }
    if strict_kostka(spec, &mask, 1) != strict {
        return Err(mismatch("L*(1)", strict_kostka(spec, &mask, 1).to_string(), strict.to_string()));
    }
    Ok(format!("agrees (L(1) = {direct}, L*(1) = {strict})"))
}

fn order_command(what: OrderCommand, out: &mut dyn Write) -> Outcome {
    match what {
        OrderCommand::Ehrhart { poset, json } => order_ehrhart(&poset, json, false, out),
        OrderCommand::Hstar {
            poset,
            json,
            linext: false,
        } => order_ehrhart(&poset, json, true, out),
        OrderCommand::Hstar {
            poset: spec,
            json,
            linext: true,
        } => {
            let poset = parse_poset(&spec)?;
            let h = hstar_via_linext(&poset);
            let flags = linext_flags(&h)?;
            if json {
                let v = serde_json::json!({ "poset": spec, "method": "linext", "hstar": h, "flags": flags });
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "poset      {spec}")?;
                writeln!(out, "method     linear extensions")?;
                writeln!(out, "h*         {h}")?;
                write_flags(out, &flags)?;
            }
            Ok(())
        }
        OrderCommand::Linext { poset: spec, json } => {
            let poset = parse_poset(&spec)?;
            let count = count_linear_extensions(&poset)?;
            let h = hstar_via_linext(&poset);
            if json {
                let v = serde_json::json!({ "poset": spec, "linear_extensions": count.to_string(), "descents": h });
                writeln!(out, "{v}")?;
            } else {
                writeln!(out, "poset      {spec}")?;
                writeln!(out, "extensions {count}")?;
                writeln!(out, "descents   {h}")?;
            }
            Ok(())
        }
    }
}

/// Flags of an h*-vector alone; Ehrhart positivity follows from h* via the
/// polynomial it determines.
fn linext_flags(h: &HStarVector) -> Result<PropertyFlags, CliError> {
    let d = h.dimension();
    let series = h.series(d + 1);
    let points: Vec<_> = series
        .into_iter()
        .enumerate()
        .map(|(n, v)| ehrhart_core::EvaluationPoint::new(n as i64, v))
        .collect();
    let poly = ehrhart_core::lagrange_interpolate(&points)?;
    Ok(PropertyFlags::compute(&poly, h)?)
}

fn order_ehrhart(spec: &str, json: bool, with_hstar: bool, out: &mut dyn Write) -> Outcome {
    let poset = parse_poset(spec)?;
    let start = Instant::now();
    let comp = order_polytope_ehrhart(&poset)?;
    let input = InputDescriptor::Poset {
        spec: spec.to_string(),
        poset: poset.to_json(),
    };
    let rec = ResultRecord::new(input, &comp, with_hstar, true, elapsed_ms(start))?;
    emit(out, &rec, json, &[("poset", format!("{spec} ({poset})"))])
}

fn perm_search(
    base: &str,
    radius: usize,
    avoid: &str,
    jobs: Option<usize>,
    store: Option<std::path::PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let w0: Permutation = base.parse()?;
    let avoid: Permutation = avoid.parse()?;
    let start = Instant::now();
    let outcome = with_pool(jobs, || search_nonrealrooted(&w0, radius, &avoid))??;
    writeln!(
        err,
        "searched {} candidates within {radius} transpositions of {w0}; {} not real-rooted ({:.1} s)",
        outcome.candidates,
        outcome.hits.len(),
        start.elapsed().as_secs_f64()
    )?;
    let mut store = store.map(|p| Store::open(&p)).transpose()?;
    for hit in &outcome.hits {
        let t = Instant::now();
        let comp = order_polytope_ehrhart(&Poset::permutation_poset(&hit.permutation))?;
        let input = InputDescriptor::Permutation {
            permutation: hit.permutation.clone(),
        };
        let rec = ResultRecord::new(input, &comp, true, true, elapsed_ms(t))?;
        match &mut store {
            Some(s) => {
                s.append(&rec)?;
            }
            None => writeln!(out, "{}", serde_json::to_string(&rec).expect("record serializes"))?,
        }
    }
    Ok(())
}

fn batch(size: u32, pattern: &str, path: &std::path::Path, jobs: Option<usize>, err: &mut dyn Write) -> Outcome {
    let weight = expand_weight_pattern(pattern, size)?;
    if weight.total() != u64::from(size) {
        return Err(CliError::input(format!(
            "weight pattern {pattern:?} sums to {} at N = {size}, not {size}",
            weight.total()
        )));
    }
    let mut store = Store::open(path)?;
    let todo: Vec<Partition> = Partition::all_of(size)
        .into_iter()
        .filter(|lambda| {
            !store.contains(&InputDescriptor::Gt {
                lambda: lambda.clone(),
                mu: Partition::empty(),
                weight: weight.clone(),
            })
        })
        .collect();
    let total = Partition::all_of(size).len();
    let (mut written, mut empty) = (0usize, 0usize);
    for chunk in todo.chunks(32) {
        let results: Vec<Result<Option<ResultRecord>, CliError>> = with_pool(jobs, || {
            chunk
                .par_iter()
                .map(|lambda| {
                    let input = InputDescriptor::Gt {
                        lambda: lambda.clone(),
                        mu: Partition::empty(),
                        weight: weight.clone(),
                    };
                    let spec = GTChainSpec::new(SkewShape::straight(lambda.clone()), weight.clone());
                    let start = Instant::now();
                    match gt_ehrhart(&spec, true) {
                        Ok(comp) => Ok(Some(ResultRecord::new(input, &comp, true, true, elapsed_ms(start))?)),
                        Err(Error::EmptyPolytope) => Ok(None),
                        Err(e) => Err(e.into()),
                    }
                })
                .collect()
        })?;
        for r in results {
            match r? {
                Some(rec) => {
                    store.append(&rec)?;
                    written += 1;
                }
                None => empty += 1,
            }
        }
    }
    writeln!(
        err,
        "{total} shapes of size {size}: {written} computed, {} already stored, {empty} empty",
        total - todo.len()
    )?;
    Ok(())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_flags(out: &mut dyn Write, f: &PropertyFlags) -> std::io::Result<()> {
    writeln!(out, "ehrhart coefficients nonnegative  {}", yes(f.ehrhart_nonnegative))?;
    writeln!(out, "h* nonnegative                    {}", yes(f.hstar_nonnegative))?;
    writeln!(out, "palindromic                       {}", yes(f.palindromic))?;
    writeln!(out, "log-concave                       {}", yes(f.log_concave))?;
    writeln!(out, "ultra-log-concave                 {}", yes(f.ultra_log_concave))?;
    writeln!(out, "real-rooted                       {}", yes(f.real_rooted))
}

/// Writes a record as one JSON line, or as aligned text.
fn emit(out: &mut dyn Write, rec: &ResultRecord, json: bool, header: &[(&str, String)]) -> Outcome {
    if json {
        writeln!(out, "{}", serde_json::to_string(rec).expect("record serializes"))?;
        return Ok(());
    }
    for (k, v) in header {
        writeln!(out, "{k:<10} {v}")?;
    }
    let poly = rec.polynomial()?;
    writeln!(out, "dimension  {}", rec.dimension)?;
    writeln!(out, "L(n) =     {}", poly.to_text("n"))?;
    let points: Vec<String> = rec.transcript.iter().map(|p| format!("({}, {})", p.x, p.value)).collect();
    writeln!(out, "transcript {}", points.join(" "))?;
    writeln!(out, "verified   {}", yes(rec.verified))?;
    if let Some(h) = &rec.hstar {
        writeln!(out, "h*         {h}")?;
    }
    if let Some(f) = &rec.flags {
        write_flags(out, f)?;
    }
    writeln!(out, "time       {:.3} ms", rec.duration_ms)?;
    Ok(())
}
