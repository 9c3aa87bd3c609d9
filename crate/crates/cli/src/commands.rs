use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use horocount::acceptance::{run_all, Scale};
use horocount::constants::{components, counting_constant, CountingConstant};
use horocount::dynamics::{classify_limit, ABehavior, BBehavior, CleanSequenceSpec};
use horocount::enumerate::{
    compare, enumerate_bfs, enumerate_brute, BfsConfig, BruteConfig, EnumerationReport,
};
use horocount::measure::{integrate, Integrand, QuadratureMethod, QuadratureResult, Region};
use horocount::{Error, Partition};
use serde::Serialize;

use crate::manifest::{now, RunManifest};
use crate::{
    ClassifyArgs, Cli, Command, ConstantArgs, CountArgs, CountMethod, PartitionArgs, RegionArg,
    SelftestArgs, VolumeArgs, EXIT_FAILURE, EXIT_RESOURCE, EXIT_VALIDATION,
};

const DEFAULT_MC_SAMPLES: u64 = 1_000_000;

pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Resource(_)) => EXIT_RESOURCE,
        Some(Error::Inconsistent(_)) => EXIT_FAILURE,
        Some(_) => EXIT_VALIDATION,
        None => EXIT_FAILURE,
    }
}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidArgument(msg.into()).into()
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

pub fn run(cli: Cli, argv: Vec<String>) -> Result<()> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("building thread pool")?;
    }
    match cli.command {
        Command::Constant(a) => constant(a, argv),
        Command::Count(a) => count(a, argv),
        Command::Volume(a) => volume(a, argv),
        Command::Classify(a) => classify(a, argv),
        Command::Selftest(a) => selftest(a),
    }
}

fn partition(args: &PartitionArgs) -> Result<Partition> {
    Ok(Partition::new(args.n, &args.blocks)?)
}

fn check_radii(radii: &[f64]) -> Result<()> {
    if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(invalid("radii must be finite and non-negative"));
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[derive(Serialize)]
struct ConstantOutput {
    partition: Partition,
    #[serde(flatten)]
    constant: CountingConstant,
    components: horocount::constants::ConstantComponents,
}

fn constant(args: ConstantArgs, argv: Vec<String>) -> Result<()> {
    let started = now();
    let p = partition(&args.partition)?;
    let out = ConstantOutput {
        constant: counting_constant(&p)?,
        components: components(&p)?,
        partition: p,
    };
    if args.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&out)?))?;
    } else {
        emit(&format!(
            "p = {}\nq = {}\nc = {}\n",
            fmt_f64(out.constant.poly_exponent),
            fmt_f64(out.constant.exp_rate),
            fmt_f64(out.constant.coefficient)
        ))?;
    }
    if let Some(path) = &args.out {
        write_file(path, &serde_json::to_string_pretty(&out)?)?;
        let mut m = RunManifest::new("constant", &args, None, argv, started)?;
        m.outputs.push(path.clone());
        m.write_all()?;
    }
    Ok(())
}

struct CountRow {
    r: f64,
    count: usize,
    asymptotic: f64,
    ratio: Option<f64>,
    method: String,
    margin: Option<f64>,
    depth: Option<usize>,
    seconds: f64,
}

fn count_rows(report: &EnumerationReport, cc: &CountingConstant, radii: &[f64]) -> Vec<CountRow> {
    radii
        .iter()
        .map(|&r| {
            let count = report.count_within(r);
            let asymptotic = cc.asymptotic_count(r);
            CountRow {
                r,
                count,
                asymptotic,
                ratio: (asymptotic > 0.0).then(|| count as f64 / asymptotic),
                method: report.method.to_string(),
                margin: report.margin,
                depth: report.depth_reached,
                seconds: report.seconds,
            }
        })
        .collect()
}

fn count_csv(rows: &[CountRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "R",
        "count",
        "asymptotic",
        "ratio",
        "method",
        "margin",
        "depth",
        "seconds",
    ])?;
    for row in rows {
        w.write_record([
            fmt_f64(row.r),
            row.count.to_string(),
            fmt_f64(row.asymptotic),
            row.ratio.map(fmt_f64).unwrap_or_default(),
            row.method.clone(),
            row.margin.map(fmt_f64).unwrap_or_default(),
            row.depth.map(|d| d.to_string()).unwrap_or_default(),
            fmt_f64(row.seconds),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn count(args: CountArgs, argv: Vec<String>) -> Result<()> {
    let started = now();
    let p = partition(&args.partition)?;
    check_radii(&args.radius)?;
    if !(args.margin.is_finite() && args.margin >= 0.0) {
        return Err(invalid("--margin must be finite and non-negative"));
    }
    let mut radii = args.radius.clone();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let r_max = *radii.last().expect("clap requires a radius");
    let cc = counting_constant(&p)?;

    let mut reports = Vec::new();
    if matches!(args.method, CountMethod::Bfs | CountMethod::Both) {
        let cfg = BfsConfig {
            margin: args.margin,
            max_depth: args.max_depth,
            max_states: args.max_states,
        };
        reports.push(enumerate_bfs(&p, r_max, &cfg)?);
    }
    if matches!(args.method, CountMethod::Brute | CountMethod::Both) {
        let cfg = BruteConfig {
            entry_bound: args.entry_bound,
            auto_double: args.entry_bound.is_none(),
            ..BruteConfig::default()
        };
        reports.push(enumerate_brute(&p, r_max, &cfg)?);
    }
    if let [bfs, brute] = reports.as_slice() {
        let cmp = compare(bfs, brute)?;
        if !cmp.identical() {
            return Err(Error::Inconsistent(format!(
                "{} cosets found only by the scan; BFS margin {} too small",
                cmp.only_brute.len(),
                args.margin
            ))
            .into());
        }
        eprintln!("bfs and brute agree on {} cosets", cmp.bfs_count);
    }

    let rows: Vec<CountRow> = reports
        .iter()
        .flat_map(|rep| count_rows(rep, &cc, &radii))
        .collect();
    let table = count_csv(&rows)?;
    emit(&table)?;

    let mut m = RunManifest::new("count", &args, None, argv, started)?;
    if let Some(path) = &args.csv {
        write_file(path, &table)?;
        m.outputs.push(path.clone());
    }
    if let Some(path) = &args.json {
        write_file(path, &serde_json::to_string_pretty(&reports)?)?;
        m.outputs.push(path.clone());
    }
    m.write_all()
}

fn region(args: &VolumeArgs) -> Result<(Region, Integrand)> {
    let need_c = || args.c.ok_or_else(|| invalid("this region needs --c"));
    Ok(match args.region {
        RegionArg::BPlus => (Region::Positive, Integrand::Haar),
        RegionArg::Ball => (Region::Ball, Integrand::Haar),
        RegionArg::BcPlus => (Region::Shifted { c: need_c()? }, Integrand::Haar),
        RegionArg::Cone => (Region::Cone { c: need_c()? }, Integrand::ConeExponential),
        RegionArg::Annulus => (
            Region::Annulus {
                epsilon: args
                    .epsilon
                    .ok_or_else(|| invalid("annulus needs --epsilon"))?,
            },
            Integrand::Haar,
        ),
    })
}

fn volume_csv(results: &[QuadratureResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "R",
        "region",
        "integrand",
        "method",
        "estimate",
        "standard_error",
        "samples",
        "grid_step",
        "refinements",
        "seed",
        "seconds",
    ])?;
    for q in results {
        let region = serde_json::to_value(q.region)?;
        let integrand = serde_json::to_value(q.integrand)?;
        w.write_record([
            fmt_f64(q.radius),
            region["kind"].as_str().unwrap_or_default().to_string(),
            integrand.as_str().unwrap_or_default().to_string(),
            if q.samples.is_some() { "mc" } else { "grid" }.to_string(),
            fmt_f64(q.estimate),
            fmt_f64(q.standard_error),
            q.samples.map(|s| s.to_string()).unwrap_or_default(),
            q.grid_step.map(fmt_f64).unwrap_or_default(),
            q.refinements.map(|s| s.to_string()).unwrap_or_default(),
            q.seed.map(|s| s.to_string()).unwrap_or_default(),
            fmt_f64(q.seconds),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn volume(args: VolumeArgs, argv: Vec<String>) -> Result<()> {
    let started = now();
    let p = partition(&args.partition)?;
    check_radii(&args.radius)?;
    let (region, integrand) = region(&args)?;
    let method = match (args.mc, args.grid) {
        (_, Some(h)) => QuadratureMethod::grid(h),
        (Some(n), None) => QuadratureMethod::monte_carlo(n, args.seed),
        (None, None) => QuadratureMethod::monte_carlo(DEFAULT_MC_SAMPLES, args.seed),
    };
    let results = args
        .radius
        .iter()
        .map(|&r| integrate(&p, r, region, integrand, method))
        .collect::<horocount::Result<Vec<_>>>()?;

    let table = volume_csv(&results)?;
    if args.json {
        emit(&format!("{}\n", serde_json::to_string_pretty(&results)?))?;
    } else {
        emit(&table)?;
    }
    let seed = matches!(method, QuadratureMethod::MonteCarlo { .. }).then_some(args.seed);
    let mut m = RunManifest::new("volume", &args, seed, argv, started)?;
    if let Some(path) = &args.csv {
        write_file(path, &table)?;
        m.outputs.push(path.clone());
    }
    m.write_all()
}

fn parse_a(s: &str) -> Result<ABehavior> {
    match s.trim().to_ascii_lowercase().as_str() {
        "unbounded" | "infinity" | "inf" => Ok(ABehavior::Unbounded),
        "identity" | "id" | "bounded" => Ok(ABehavior::Identity),
        other => Err(invalid(format!("unknown a-behavior {other:?}"))),
    }
}

fn parse_b(s: &str) -> Result<BBehavior> {
    match s.trim().to_ascii_lowercase().as_str() {
        "infinity" | "inf" | "to_infinity" => Ok(BBehavior::ToInfinity),
        "one" | "1" | "constant_one" => Ok(BBehavior::ConstantOne),
        "zero" | "0" | "to_zero" => Ok(BBehavior::ToZero),
        other => Err(invalid(format!("unknown b-behavior {other:?}"))),
    }
}

#[derive(Serialize)]
struct ClassifyOutput {
    spec: CleanSequenceSpec,
    classification: horocount::dynamics::LimitClassification,
}

fn classify(args: ClassifyArgs, argv: Vec<String>) -> Result<()> {
    let started = now();
    let p = partition(&args.partition)?;
    let k0 = p.num_blocks();
    let a_blocks = if args.a_behavior.is_empty() {
        vec![ABehavior::Identity; k0]
    } else {
        args.a_behavior
            .iter()
            .map(|s| parse_a(s))
            .collect::<Result<_>>()?
    };
    let mut b_prefix = args
        .b_behavior
        .iter()
        .map(|s| parse_b(s))
        .collect::<Result<Vec<_>>>()?;
    if b_prefix.is_empty() {
        b_prefix = vec![BBehavior::ConstantOne; k0 - 1];
    }
    if b_prefix.len() + 1 == k0 {
        b_prefix.push(BBehavior::ConstantOne);
    }
    let spec = CleanSequenceSpec::new(p, a_blocks, b_prefix)?;
    let out = ClassifyOutput {
        classification: classify_limit(&spec)?,
        spec,
    };
    let text = serde_json::to_string_pretty(&out)?;
    emit(&format!("{text}\n"))?;
    if let Some(path) = &args.out {
        write_file(path, &text)?;
        let mut m = RunManifest::new("classify", &args, None, argv, started)?;
        m.outputs.push(path.clone());
        m.write_all()?;
    }
    Ok(())
}

fn selftest(args: SelftestArgs) -> Result<()> {
    let scale = if args.full { Scale::Full } else { Scale::Quick };
    let results = run_all(scale);
    for r in &results {
        emit(&format!("{r}\n"))?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        anyhow::bail!("{failed} of {} checks failed", results.len());
    }
    Ok(())
}
