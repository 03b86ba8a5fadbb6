use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use softnc::counting::{self, CountOptions, Method, WeightMode};
use softnc::dataset::{self, Census, CensusOptions};
use softnc::oracle;
use softnc::ruledsl::{self, OverlapPolicy, RuleModel};
use softnc::{
    booleanize_function, is_nc_partial, is_nc_with, is_snc, is_wnc_with, BigCount, MixedRadixDomain,
    MultivaluedFunction, SearchLimits, TruthTable,
};

const EXIT_MISMATCH: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "softnc",
    version,
    about = "Canalization analysis of multivalued logical rules"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Resolution of overlapping clauses.
    #[arg(long, global = true, value_enum, default_value_t = Priority::Reject)]
    priority: Priority,
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Largest domain searched for NC.
    #[arg(long, global = true, default_value_t = softnc::canalization::DEFAULT_NC_CAP)]
    nc_cap: usize,
    /// Largest total peel count searched for WNC.
    #[arg(long, global = true, default_value_t = softnc::canalization::DEFAULT_WNC_MAX_PEELS)]
    wnc_max_peels: usize,
    /// Largest Booleanized dimension searched for NC.
    #[arg(long, global = true, default_value_t = softnc::booleanize::DEFAULT_PARTIAL_NC_MAX_DIMENSION)]
    bool_max_dim: usize,
}

impl Caps {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            nc_max_points: self.nc_cap,
            wnc_max_peels: self.wnc_max_peels,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Md,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Priority {
    Reject,
    Highest,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Enumerate,
    Recursive,
}

#[derive(Subcommand)]
enum Command {
    /// Classify every multivalued gene of the given model files.
    Analyze {
        /// Model files; the bundled fixtures are used when none are given.
        files: Vec<PathBuf>,
    },
    /// Test one truth table (`-` reads stdin).
    Check {
        table: String,
        #[arg(long, value_delimiter = ',', default_value = "nc,snc,wnc,boolnc")]
        props: Vec<Prop>,
    },
    /// Emit the Booleanized components of one truth table.
    Booleanize { table: String },
    /// Upper bound on the number or proportion of SNC functions.
    CountSnc {
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "nbvars",
            required_unless_present = "nbvars"
        )]
        arities: Option<Vec<usize>>,
        #[arg(long)]
        nbvars: Option<usize>,
        /// Lift the enumeration candidate cap.
        #[arg(long)]
        force: bool,
        /// Weight entries above 2 as well.
        #[arg(long)]
        generalized: bool,
        #[arg(long, value_enum, default_value_t = MethodArg::Enumerate)]
        method: MethodArg,
        /// Shorthand for `--format json`.
        #[arg(long)]
        json: bool,
    },
    /// Compare the fast checkers against brute force.
    Oracle {
        #[arg(long, default_value_t = oracle::MAX_POINTS)]
        max_domain: usize,
        /// Random functions per sweep.
        #[arg(long, default_value_t = 300)]
        samples: usize,
    },
    /// Run the built-in reference checks.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Prop {
    Nc,
    Snc,
    Wnc,
    Boolnc,
}

struct Outcome {
    report: String,
    code: u8,
}

impl Outcome {
    fn ok(report: String) -> Self {
        Outcome { report, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(&cli).and_then(|o| emit(&cli, &o.report).map(|_| o.code)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn emit(cli: &Cli, report: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, report).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(report.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Analyze { files } => analyze(cli, files),
        Command::Check { table, props } => check(cli, table, props),
        Command::Booleanize { table } => booleanize(cli, table),
        Command::CountSnc {
            arities,
            nbvars,
            force,
            generalized,
            method,
            json,
        } => {
            let options = CountOptions {
                mode: if *generalized {
                    WeightMode::Generalized
                } else {
                    WeightMode::Ternary
                },
                candidate_cap: if *force {
                    u128::MAX
                } else {
                    counting::DEFAULT_CANDIDATE_CAP
                },
            };
            let method = match method {
                MethodArg::Enumerate => Method::Enumerate,
                MethodArg::Recursive => Method::Recursive,
            };
            let format = if *json { Format::Json } else { cli.format };
            count_snc(format, arities.as_deref(), *nbvars, &options, method)
        }
        Command::Oracle { max_domain, samples } => oracle_sweep(cli, *max_domain, *samples),
        Command::Selftest => selftest(cli),
    }
}

fn policy(cli: &Cli) -> OverlapPolicy {
    match cli.priority {
        Priority::Reject => OverlapPolicy::Reject,
        Priority::Highest => OverlapPolicy::HighestLevel,
    }
}

fn census_report(census: &Census, format: Format) -> String {
    match format {
        Format::Csv => census.to_csv(),
        Format::Md => census.to_markdown(),
        Format::Json => census.to_json() + "\n",
    }
}

fn summarize(census: &Census) {
    let totals = census.situation_totals();
    let line: Vec<String> = totals.iter().map(|(s, n)| format!("{s}:{n}")).collect();
    eprintln!("situations {}", line.join(" "));
    let arity: Vec<String> = census
        .snc_by_arity()
        .iter()
        .map(|(n, (snc, total))| format!("n={n}:{snc}/{total}"))
        .collect();
    eprintln!("snc by arity {}", arity.join(" "));
    eprintln!("wnc but not snc: {}", census.anomalies().len());
    for (r, expected) in census.structure_notes() {
        eprintln!(
            "note: {} single-switch structure {}, reference {}",
            r.gene, r.structure_s, expected
        );
    }
    for m in census.mismatches() {
        let show = |s: Option<dataset::Situation>| s.map_or("none".to_string(), |s| s.to_string());
        eprintln!(
            "mismatch: {} ({}) expected {} found {}",
            m.gene,
            m.model,
            show(m.expected),
            show(m.found)
        );
        if let Some(r) = census.records.iter().find(|r| r.gene == m.gene && r.model == m.model) {
            eprintln!("  table {}", r.table.to_json());
        }
    }
}

fn analyze(cli: &Cli, files: &[PathBuf]) -> anyhow::Result<Outcome> {
    let mut models: Vec<RuleModel> = Vec::new();
    let mut skipped = 0;
    if files.is_empty() {
        models = dataset::fixture_models()?;
    }
    for path in files {
        let parsed = fs::read_to_string(path)
            .map_err(anyhow::Error::from)
            .and_then(|text| ruledsl::parse(&text).map_err(anyhow::Error::from));
        match parsed {
            Ok(m) => models.push(m),
            Err(e) => {
                eprintln!("skipped {}: {e}", path.display());
                skipped += 1;
            }
        }
    }
    let options = CensusOptions {
        limits: cli.caps.limits(),
        policy: policy(cli),
    };
    let census = dataset::run_census(&models, &options)?;
    summarize(&census);
    let code = if skipped > 0 || census.records.is_empty() {
        EXIT_INPUT
    } else if !census.mismatches().is_empty() {
        EXIT_MISMATCH
    } else {
        0
    };
    Ok(Outcome {
        report: census_report(&census, cli.format),
        code,
    })
}

fn read_table(source: &str) -> anyhow::Result<TruthTable> {
    let text = if source == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(source).with_context(|| format!("reading {source}"))?
    };
    Ok(TruthTable::from_json(&text)?)
}

fn check(cli: &Cli, source: &str, props: &[Prop]) -> anyhow::Result<Outcome> {
    let f = read_table(source)?.to_function()?;
    let limits = cli.caps.limits();
    let mut rows: Vec<(&str, bool, serde_json::Value)> = Vec::new();
    for prop in props {
        let row = match prop {
            Prop::Nc => {
                let w = is_nc_with(&f, &limits)?;
                ("nc", w.is_some(), json!(w))
            }
            Prop::Snc => {
                let w = is_snc(&f);
                ("snc", w.is_some(), json!(w))
            }
            Prop::Wnc => {
                let w = is_wnc_with(&f, &limits)?;
                ("wnc", w.is_some(), json!(w))
            }
            Prop::Boolnc => {
                let mut witnesses = Vec::new();
                for g in booleanize_function(&f)? {
                    witnesses.push(softnc::is_nc_partial_with(&g, cli.caps.bool_max_dim)?);
                }
                ("boolnc", witnesses.iter().all(Option::is_some), json!(witnesses))
            }
        };
        rows.push(row);
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    let report = match cli.format {
        Format::Csv => {
            let mut s = String::from("property,holds\n");
            for (name, holds, _) in &rows {
                s += &format!("{name},{}\n", yn(*holds));
            }
            s
        }
        Format::Md => {
            let mut s = String::from("| Property | Holds |\n|---|---|\n");
            for (name, holds, _) in &rows {
                s += &format!("| {name} | {} |\n", yn(*holds));
            }
            s
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .into_iter()
                .map(|(name, holds, w)| (name.to_string(), json!({ "holds": holds, "witness": w })))
                .collect();
            serde_json::to_string_pretty(&map)? + "\n"
        }
    };
    Ok(Outcome::ok(report))
}

#[derive(Serialize)]
struct ComponentOut {
    threshold: usize,
    nc: bool,
    table: TruthTable,
}

fn booleanize(cli: &Cli, source: &str) -> anyhow::Result<Outcome> {
    let f = read_table(source)?.to_function()?;
    let mut out = Vec::new();
    for (i, g) in booleanize_function(&f)?.into_iter().enumerate() {
        out.push(ComponentOut {
            threshold: i + 1,
            nc: softnc::is_nc_partial_with(&g, cli.caps.bool_max_dim)?.is_some(),
            table: g.to_table(),
        });
    }
    let report = match cli.format {
        Format::Json => serde_json::to_string_pretty(&out)? + "\n",
        Format::Csv | Format::Md => {
            let mut s = String::from("threshold,dimension,admissible,ones,nc\n");
            for c in &out {
                let ones = c.table.values.iter().filter(|&&v| v == 1).count();
                let admissible = c.table.admissible.as_ref().map_or(0, Vec::len);
                s += &format!(
                    "{},{},{},{},{}\n",
                    c.threshold,
                    c.table.arities.len(),
                    admissible,
                    ones,
                    if c.nc { "yes" } else { "no" }
                );
            }
            s
        }
    };
    Ok(Outcome::ok(report))
}

fn count_snc(
    format: Format,
    arities: Option<&[usize]>,
    nbvars: Option<usize>,
    options: &CountOptions,
    method: Method,
) -> anyhow::Result<Outcome> {
    let mut fields: Vec<(&str, String)> = Vec::new();
    if let Some(arities) = arities {
        let count: BigCount = match method {
            Method::Enumerate => counting::up_snc(arities, options)?,
            Method::Recursive => counting::up_snc_recursive(arities, options.mode)?,
        };
        let points: usize = arities.iter().product();
        let total = BigCount::from(3u32).pow(u32::try_from(points)?);
        let ratio = softnc::BigRatio::new(count.clone().into(), total.into());
        let shown = if ratio > softnc::BigRatio::from_integer(1.into()) {
            softnc::BigRatio::from_integer(1.into())
        } else {
            ratio
        };
        let list: Vec<String> = arities.iter().map(usize::to_string).collect();
        fields.push(("arities", list.join(",")));
        fields.push(("up_snc", count.to_string()));
        fields.push(("proportion", counting::format_scientific(&shown, 3)));
    } else if let Some(n) = nbvars {
        let p = counting::up_prop_snc_by_nbvars(n, options, method)?;
        let shown = p.clamped();
        fields.push(("nbvars", n.to_string()));
        fields.push(("up_snc_weighted", p.snc.to_string()));
        fields.push(("functions", p.total.to_string()));
        fields.push(("proportion", counting::format_scientific(&shown, 3)));
        fields.push(("proportion_2dp", counting::format_fixed(&shown, 2)));
    } else {
        bail!("one of --arities or --nbvars is required");
    }
    let report = match format {
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> =
                fields.into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
            serde_json::to_string_pretty(&map)? + "\n"
        }
        Format::Csv => {
            let (keys, values): (Vec<&str>, Vec<String>) = fields.into_iter().unzip();
            let values: Vec<String> = values.into_iter().map(|v| format!("\"{v}\"")).collect();
            format!("{}\n{}\n", keys.join(","), values.join(","))
        }
        Format::Md => fields.iter().map(|(k, v)| format!("- {k}: {v}\n")).collect(),
    };
    Ok(Outcome::ok(report))
}

fn all_functions(domain: &MixedRadixDomain, codomain: usize) -> impl Iterator<Item = MultivaluedFunction> + '_ {
    let size = domain.cardinality();
    let count = (codomain as u64).pow(size as u32);
    (0..count).map(move |mut code| {
        let mut values = vec![0; size];
        for v in values.iter_mut().rev() {
            *v = (code % codomain as u64) as softnc::Level;
            code /= codomain as u64;
        }
        MultivaluedFunction::new(domain.clone(), codomain, values).expect("in range")
    })
}

#[derive(Default, Serialize)]
struct Sweep {
    domain: Vec<usize>,
    functions: usize,
    disagreements: usize,
}

fn compare(f: &MultivaluedFunction, limits: &SearchLimits) -> anyhow::Result<bool> {
    let nc = is_nc_with(f, limits)?.is_some() == oracle::oracle_nc(f)?;
    let snc = is_snc(f).is_some() == oracle::oracle_snc(f)?;
    let wnc = is_wnc_with(f, limits)?.is_some() == oracle::oracle_wnc(f)?;
    Ok(nc && snc && wnc)
}

fn oracle_sweep(cli: &Cli, max_domain: usize, samples: usize) -> anyhow::Result<Outcome> {
    let limits = cli.caps.limits();
    let mut sweeps = Vec::new();
    for arities in [vec![2, 2], vec![2, 3], vec![3, 3], vec![2, 2, 2]] {
        let domain = MixedRadixDomain::new(arities.clone())?;
        if domain.cardinality() > max_domain {
            continue;
        }
        let mut s = Sweep {
            domain: arities,
            ..Sweep::default()
        };
        for f in all_functions(&domain, 3) {
            s.functions += 1;
            s.disagreements += usize::from(!compare(&f, &limits)?);
        }
        sweeps.push(s);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut random = Sweep::default();
    while random.functions < samples {
        let n = rng.gen_range(1..=4);
        let arities: Vec<usize> = (0..n).map(|_| rng.gen_range(2..=3)).collect();
        let domain = MixedRadixDomain::new(arities)?;
        if domain.cardinality() > max_domain || domain.peel_count() > 6 {
            continue;
        }
        let f = match random.functions % 3 {
            0 => softnc::generate_snc(&domain, 3, &mut rng)?.0,
            1 => softnc::generate_nc(&domain, 3, &mut rng)?.0,
            _ => {
                let values = (0..domain.cardinality()).map(|_| rng.gen_range(0..3)).collect();
                MultivaluedFunction::new(domain.clone(), 3, values)?
            }
        };
        random.functions += 1;
        random.disagreements += usize::from(!compare(&f, &limits)?);
    }
    sweeps.push(random);
    let failed = sweeps.iter().any(|s| s.disagreements > 0);
    let report = match cli.format {
        Format::Json => serde_json::to_string_pretty(&sweeps)? + "\n",
        Format::Csv | Format::Md => {
            let mut s = String::from("domain,functions,disagreements\n");
            for sw in &sweeps {
                let d: Vec<String> = sw.domain.iter().map(usize::to_string).collect();
                let d = if d.is_empty() {
                    "random".to_string()
                } else {
                    d.join("x")
                };
                s += &format!("{d},{},{}\n", sw.functions, sw.disagreements);
            }
            s
        }
    };
    Ok(Outcome {
        report,
        code: if failed { EXIT_MISMATCH } else { 0 },
    })
}

fn selftest(cli: &Cli) -> anyhow::Result<Outcome> {
    let limits = cli.caps.limits();
    let mut checks: Vec<(&str, bool)> = Vec::new();

    let f = dataset::counterexample();
    let comps = booleanize_function(&f)?;
    checks.push((
        "counterexample is WNC, not SNC, not NC",
        is_wnc_with(&f, &limits)?.is_some() && is_snc(&f).is_none() && is_nc_with(&f, &limits)?.is_none(),
    ));
    checks.push((
        "counterexample: threshold 1 Booleanization NC, threshold 2 not",
        is_nc_partial(&comps[0])?.is_some() && is_nc_partial(&comps[1])?.is_none(),
    ));

    let d33 = MixedRadixDomain::new(vec![3, 3])?;
    let min = MultivaluedFunction::from_fn(d33.clone(), 3, |x| x[0].min(x[1]) as softnc::Level)?;
    let max = MultivaluedFunction::from_fn(d33.clone(), 3, |x| x[0].max(x[1]) as softnc::Level)?;
    let constant = MultivaluedFunction::constant(d33.clone(), 3, 1)?;
    let ident = MultivaluedFunction::from_fn(d33, 3, |x| x[0] as softnc::Level)?;
    let mut golden = is_snc(&constant).is_some() && softnc::is_canalizing(&constant).is_none();
    for g in [&min, &max, &ident] {
        golden &= is_snc(g).is_some() && is_nc_with(g, &limits)?.is_none();
    }
    checks.push(("constants, min, max, identity", golden));

    let census = dataset::run_census(&dataset::fixture_models()?, &CensusOptions::default())?;
    checks.push((
        "fixture classification matches reference",
        census.mismatches().is_empty(),
    ));
    let by_arity: Vec<(usize, usize, usize)> = census
        .snc_by_arity()
        .into_iter()
        .map(|(n, (snc, total))| (n, snc, total))
        .collect();
    checks.push((
        "SNC by arity matches reference",
        by_arity == dataset::EXPECTED_SNC_BY_ARITY,
    ));
    checks.push(("no WNC-but-not-SNC fixture", census.anomalies().is_empty()));

    let options = CountOptions::default();
    let p2 = counting::up_prop_snc_by_nbvars(2, &options, Method::Recursive)?;
    checks.push((
        "two-variable bound rounds to 0.83",
        counting::format_fixed(&p2.clamped(), 2) == "0.83",
    ));

    let failed = checks.iter().any(|(_, ok)| !ok);
    let report = match cli.format {
        Format::Json => {
            let rows: Vec<_> = checks
                .iter()
                .map(|(name, ok)| json!({"check": name, "pass": ok}))
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
        Format::Csv => checks
            .iter()
            .map(|(name, ok)| format!("{},\"{name}\"\n", if *ok { "PASS" } else { "FAIL" }))
            .collect(),
        Format::Md => {
            let mut s = String::from("| Result | Check |\n|---|---|\n");
            for (name, ok) in &checks {
                s += &format!("| {} | {name} |\n", if *ok { "PASS" } else { "FAIL" });
            }
            s
        }
    };
    Ok(Outcome {
        report,
        code: if failed { EXIT_MISMATCH } else { 0 },
    })
}
