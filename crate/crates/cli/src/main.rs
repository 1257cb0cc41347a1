mod data;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sqtiled::census::{Budget, Census, CountRecord, Engine};
use sqtiled::estimate::{fmt_float, genus_extremes, write_figure_tsv, FigureRow};
use sqtiled::strata::{
    carea_hyperelliptic_minimal, carea_hyperelliptic_pair, conjectural_volume,
    hyperelliptic_volume_minimal, hyperelliptic_volume_pair, lyapunov_sum_conjectural,
    lyapunov_sum_exact, sv_conjecture_value, Component, ExactReal, Provenance, Stratum,
};
use sqtiled::svcount::carea_stratum;
use sqtiled::Exec;

use data::{exact_cell, ratio_cell, Cell, Ctx, Source};
use table::{Format, Table};

/// Square-tiled surfaces: censuses, volume estimates, Siegel-Veech constants
/// and the tables comparing them with their conjectured large-genus values.
#[derive(Parser)]
#[command(name = "sqtiled", version)]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Worker threads (1 runs everything sequentially).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Directory holding one census file per stratum.
    #[arg(long, global = true, default_value = "sqtiled-cache")]
    cache_dir: PathBuf,
    /// Table output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Digits after the decimal point for floating-point cells.
    #[arg(long, global = true, default_value_t = 12)]
    digits: usize,
    /// Largest square count any engine may be asked for.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_n: Option<u64>,
    /// Wall-clock budget in seconds, checked between square counts.
    #[arg(long, global = true)]
    max_seconds: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Strata of the given genera with dimension, components and
    /// conjectural volume.
    List {
        /// A genus `g` or a range `a..b`.
        #[arg(long, value_parser = parse_genus)]
        genus: RangeInclusive<u32>,
    },
    /// Counts square-tiled surfaces and stores the records in the cache.
    Census(CensusArgs),
    /// Master table of conjectural and computed values per stratum.
    Conjectures {
        #[arg(long, value_parser = parse_genus)]
        genus: RangeInclusive<u32>,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Per-genus minimum and maximum for plotting (TSV).
    Figure {
        which: Which,
        #[arg(long, value_parser = parse_genus)]
        genus: RangeInclusive<u32>,
        #[command(flatten)]
        data: DataArgs,
        /// Write to this file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Siegel-Veech ensemble estimate over all surfaces with N squares.
    Carea {
        #[arg(value_parser = parse_stratum)]
        stratum: Stratum,
        /// Largest square count.
        #[arg(long)]
        nmax: usize,
        /// Smallest square count (defaults to `--nmax`).
        #[arg(long)]
        nmin: Option<usize>,
        /// Cylinder circumference cutoff, in units of the square side.
        #[arg(long = "L", default_value_t = 30.0)]
        l: f64,
        /// Surfaces per square count (evenly spaced through the class list).
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        component: Option<Component>,
        /// Per-surface sample log (CSV).
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CensusArgs {
    #[arg(value_parser = parse_stratum, required_unless_present = "stratum_flag", conflicts_with = "stratum_flag")]
    stratum: Option<Stratum>,
    #[arg(long = "stratum", id = "stratum_flag", value_parser = parse_stratum)]
    stratum_flag: Option<Stratum>,
    /// Count every N from 1 to this value.
    #[arg(long)]
    nmax: usize,
    #[arg(long, value_enum, default_value_t = EngineArg::Both)]
    engine: EngineArg,
    /// Split counts by connected component (`all` or one component name).
    #[arg(long)]
    component: Option<ComponentArg>,
}

#[derive(Args)]
struct DataArgs {
    /// External exact volume table (`stratum,pi_exp,num,den,source`).
    #[arg(long)]
    volumes_file: Option<PathBuf>,
    /// Volume sources in order of preference.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Source::Ingested, Source::ClosedForm, Source::Census])]
    sources: Vec<Source>,
    /// Largest square count for census-based volume estimates.
    #[arg(long)]
    nmax: Option<usize>,
    /// Square count for surface-level quantities (component split, c_area).
    #[arg(long)]
    surface_n: Option<usize>,
    /// Cylinder circumference cutoff for c_area.
    #[arg(long = "L")]
    l: Option<f64>,
    /// Surfaces sampled for c_area.
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Direct,
    Frobenius,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Epsilon1,
    Epsilon2,
    Carea,
}

#[derive(Clone, Copy)]
enum ComponentArg {
    All,
    One(Component),
}

impl std::str::FromStr for ComponentArg {
    type Err = sqtiled::Error;
    fn from_str(s: &str) -> sqtiled::Result<Self> {
        if s == "all" {
            Ok(ComponentArg::All)
        } else {
            s.parse().map(ComponentArg::One)
        }
    }
}

/// Marks errors that come from how the program was invoked.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow!(Usage(msg.into()))
}

fn parse_stratum(s: &str) -> Result<Stratum, String> {
    let inner = s
        .strip_prefix("H(")
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(s);
    let st: Stratum = inner.parse().map_err(|e| format!("{e}"))?;
    if st.is_degenerate() {
        return Err("the torus has no zeros; give at least one zero order".into());
    }
    Ok(st)
}

/// `g`, `a..b` or `a-b`; an empty range (`b < a`) is allowed.
fn parse_genus(s: &str) -> Result<RangeInclusive<u32>, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<u32>()
            .map_err(|_| format!("bad genus {t:?}"))
    };
    let (a, b) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (num(a)?, num(b)?),
        None => {
            let g = num(s)?;
            (g, g)
        }
    };
    if a < 2 {
        return Err(format!("genus must be at least 2, got {a}"));
    }
    Ok(a..=b)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use sqtiled::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<Usage>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::BudgetExceeded { .. } => 3,
                E::Missing(_) | E::InsufficientData { .. } => 4,
                E::CacheConflict(_) => 5,
                E::Parse { .. }
                | E::DegenerateStratum
                | E::GenusTooSmall { .. }
                | E::NotCoprime { .. }
                | E::SpinNotApplicable(_)
                | E::Invalid(_) => 2,
                _ => 1,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = &cli.config;
    let exec = match cfg.threads {
        Some(1) => Exec::Sequential,
        Some(k) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k as usize)
                .build_global()
                .context("starting the worker pool")?;
            Exec::Parallel
        }
        None => Exec::Parallel,
    };
    let mut budget = Budget::default();
    if let Some(m) = cfg.max_n {
        let m = m as usize;
        budget.direct_max_n = budget.direct_max_n.min(m);
        budget.frobenius_max_n = m;
        budget.enumerate_max_n = m;
    }
    if matches!(cfg.max_seconds, Some(s) if s.is_nan() || s <= 0.0) {
        return Err(usage("--max-seconds must be positive"));
    }
    let mut ctx = Ctx::new(
        exec,
        Census::new(exec, budget),
        cfg.cache_dir.clone(),
        cfg.max_seconds,
        cfg.digits,
    );
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match cli.command {
        Command::List { genus } => list(genus).write(&mut out, cfg.format)?,
        Command::Census(args) => census(&mut ctx, args)?.write(&mut out, cfg.format)?,
        Command::Conjectures { genus, data } => {
            conjectures(&mut ctx, genus, &data)?.write(&mut out, cfg.format)?
        }
        Command::Figure {
            which,
            genus,
            data,
            output,
        } => {
            let rows = figure(&mut ctx, which, genus, &data)?;
            let reference = match which {
                Which::Carea => "0.5",
                _ => "1",
            };
            let mut buf = Vec::new();
            writeln!(buf, "# reference\t{reference}")?;
            write_figure_tsv(&mut buf, &rows, cfg.digits)?;
            match output {
                Some(p) => {
                    std::fs::write(&p, buf).with_context(|| format!("writing {}", p.display()))?
                }
                None => out.write_all(&buf)?,
            }
        }
        Command::Carea {
            stratum,
            nmax,
            nmin,
            l,
            samples,
            component,
            log,
        } => {
            let t = carea(
                &mut ctx,
                &stratum,
                nmin.unwrap_or(nmax)..=nmax,
                l,
                samples,
                component,
                log,
            )?;
            t.write(&mut out, cfg.format)?
        }
    }
    out.flush()?;
    Ok(())
}

fn list(genus: RangeInclusive<u32>) -> Table {
    let mut t = Table::new([
        "stratum",
        "genus",
        "dimension",
        "components",
        "conj_volume",
        "conj_volume_src",
    ]);
    for g in genus {
        for st in Stratum::of_genus(g) {
            let comps = st
                .components()
                .expect("strata of genus >= 2 are not degenerate");
            t.push(vec![
                format!("H({st})"),
                g.to_string(),
                st.dimension().to_string(),
                comps.iter().map(|c| c.name()).collect::<Vec<_>>().join(";"),
                exact_cell(&conjectural_volume(&st)),
                Provenance::ClosedForm.to_string(),
            ]);
        }
    }
    t
}

fn census(ctx: &mut Ctx, args: CensusArgs) -> Result<Table> {
    let st = args
        .stratum
        .or(args.stratum_flag)
        .expect("clap requires one of the two");
    if args.nmax == 0 {
        return Err(usage("--nmax must be positive"));
    }
    let mut t = Table::new([
        "stratum",
        "n",
        "engine",
        "component",
        "pairs",
        "weighted",
        "labeled_weighted",
        "labeled_factor",
    ]);
    let mut db = ctx.db(&st)?;
    let direct_limit = ctx.census.budget().direct_max_n;
    let mut warned = false;
    for n in 1..=args.nmax {
        ctx.check_time(n)?;
        let recs: Vec<CountRecord> = match args.component {
            Some(which) => {
                if args.engine == EngineArg::Frobenius {
                    return Err(usage(
                        "component splits come from enumeration; use --engine direct or both",
                    ));
                }
                let split = ctx.census.count_by_component(&st, n)?;
                let keep = |c: &Component| match which {
                    ComponentArg::All => true,
                    ComponentArg::One(k) => *c == k,
                };
                if let ComponentArg::One(k) = which {
                    if !split.contains_key(&k) {
                        return Err(usage(format!("H({st}) has no {k} component")));
                    }
                }
                // all components are stored; only the requested ones are shown
                let all: Vec<CountRecord> = split.values().cloned().collect();
                db.insert_all(&all)?;
                split
                    .into_iter()
                    .filter(|(c, _)| keep(c))
                    .map(|(_, r)| r)
                    .collect()
            }
            None => {
                let recs = match args.engine {
                    EngineArg::Direct => vec![ctx.census.count(&st, n, Engine::Direct)?],
                    EngineArg::Frobenius => vec![ctx.census.count(&st, n, Engine::Frobenius)?],
                    EngineArg::Both if n > direct_limit => {
                        if !warned {
                            eprintln!(
                                "note: N > {direct_limit} is beyond the direct engine's budget; \
                                 counting with frobenius only"
                            );
                            warned = true;
                        }
                        vec![ctx.census.count(&st, n, Engine::Frobenius)?]
                    }
                    EngineArg::Both => {
                        let d = ctx.census.count(&st, n, Engine::Direct)?;
                        let f = ctx.census.count(&st, n, Engine::Frobenius)?;
                        if !d.same_count(&f) {
                            bail!(
                                "engines disagree on H({st}) at N = {n}: direct {} vs frobenius {}",
                                d.pairs,
                                f.pairs
                            );
                        }
                        vec![d, f]
                    }
                };
                db.insert_all(&recs)?;
                recs
            }
        };
        for r in recs {
            t.push(vec![
                format!("H({st})"),
                r.n.to_string(),
                r.engine.to_string(),
                r.component.map_or("all".to_string(), |c| c.to_string()),
                r.pairs.to_string(),
                ratio_cell(&r.weighted),
                ratio_cell(&r.labeled_weighted()),
                r.labeled_factor.to_string(),
            ]);
        }
    }
    eprintln!("cache: {}", db.path().display());
    Ok(t)
}

/// Closed-form hyperelliptic data for minimal and pair strata:
/// (component volume with named zeros, c_area).
fn hyperelliptic_data(st: &Stratum) -> Option<(ExactReal, ExactReal)> {
    let g = st.genus();
    if st.is_minimal() {
        Some((
            hyperelliptic_volume_minimal(g),
            carea_hyperelliptic_minimal(g),
        ))
    } else if st.is_pair() {
        let f = ExactReal::from_ratio(st.labeling_factor() as i64, 1, 0);
        Some((
            &hyperelliptic_volume_pair(g) * &f,
            carea_hyperelliptic_pair(g),
        ))
    } else {
        None
    }
}

fn conjectures(ctx: &mut Ctx, genus: RangeInclusive<u32>, data: &DataArgs) -> Result<Table> {
    let names = [
        "conj_volume",
        "volume",
        "one_plus_eps1",
        "eps1_sqrt_g",
        "one_plus_eps2",
        "lambda_sum_conj",
        "hyp_volume",
        "carea_hyp",
        "lambda_sum_hyp",
        "carea_conj",
        "carea_census",
    ];
    let mut cols: Vec<String> = ["stratum", "genus", "dimension", "components"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for n in names {
        cols.push(n.to_string());
        cols.push(format!("{n}_src"));
    }
    let mut t = Table::new(cols);
    let ingested = ctx.load_volumes(data.volumes_file.as_deref())?;
    let mut missing = Vec::new();
    let digits = ctx.digits;
    for g in genus {
        for st in Stratum::of_genus(g) {
            let comps = st.components()?;
            let conj = conjectural_volume(&st);
            let vol = ctx.volume(&st, &data.sources, &ingested, data.nmax)?;
            let (eps1, eps1g) = match &vol {
                Cell::Value(v, p) => {
                    let one_plus = v / conj.to_f64();
                    (
                        Cell::Value(one_plus, *p),
                        Cell::Value((one_plus - 1.0).abs() * (g as f64).sqrt(), *p),
                    )
                }
                other => (other.clone(), other.clone()),
            };
            let eps2 =
                if comps.contains(&Component::EvenSpin) && comps.contains(&Component::OddSpin) {
                    ctx.spin_ratio(&st, data.surface_n)?
                } else {
                    Cell::NotApplicable
                };
            let lambda_conj = Cell::Value(lyapunov_sum_conjectural(&st), Provenance::ClosedForm);
            let (hyp_vol, carea_hyp, lambda_hyp) = match hyperelliptic_data(&st) {
                Some((v, c)) => {
                    let lam = lyapunov_sum_exact(&st, &c)?;
                    (Cell::Exact(v), Cell::Exact(c), Cell::Exact(lam))
                }
                None => (
                    Cell::NotApplicable,
                    Cell::NotApplicable,
                    Cell::NotApplicable,
                ),
            };
            let carea_conj = Cell::Exact(ExactReal::rational(sv_conjecture_value()));
            let carea_census = match (data.surface_n, data.l) {
                (Some(n), Some(l)) => {
                    ctx.check_time(n)?;
                    match carea_stratum(&st, n, l, data.samples, None, ctx.exec) {
                        Ok(r) => Cell::Value(r.carea_fit, Provenance::Census),
                        Err(sqtiled::Error::Missing(m)) => Cell::Missing(m),
                        Err(e) => return Err(e.into()),
                    }
                }
                _ => Cell::Missing("c_area census needs --surface-n and --L".into()),
            };
            let cells = [
                Cell::Exact(conj),
                vol,
                eps1,
                eps1g,
                eps2,
                lambda_conj,
                hyp_vol,
                carea_hyp,
                lambda_hyp,
                carea_conj,
                carea_census,
            ];
            let mut row = vec![
                format!("H({st})"),
                g.to_string(),
                st.dimension().to_string(),
                comps.iter().map(|c| c.name()).collect::<Vec<_>>().join(";"),
            ];
            for (name, c) in names.iter().zip(&cells) {
                if let Cell::Missing(why) = c {
                    missing.push(format!("H({st}) {name}: {why}"));
                }
                let (v, p) = c.render(digits);
                row.push(v);
                row.push(p);
            }
            t.push(row);
        }
    }
    for m in &missing {
        eprintln!("missing: {m}");
    }
    Ok(t)
}

fn figure(
    ctx: &mut Ctx,
    which: Which,
    genus: RangeInclusive<u32>,
    data: &DataArgs,
) -> Result<Vec<FigureRow>> {
    let mut values = Vec::new();
    let mut missing = Vec::new();
    match which {
        Which::Epsilon1 => {
            let ingested = ctx.load_volumes(data.volumes_file.as_deref())?;
            for g in genus {
                for st in Stratum::of_genus(g) {
                    match ctx.volume(&st, &data.sources, &ingested, data.nmax)? {
                        Cell::Value(v, _) => {
                            let one_plus = v / conjectural_volume(&st).to_f64();
                            if !(one_plus > 0.0 && one_plus < 2.0) {
                                return Err(sqtiled::Error::Invalid(format!(
                                    "1+eps_1 = {one_plus} for H({st}) is outside (0, 2); \
                                     check the volume table"
                                ))
                                .into());
                            }
                            values.push((st, one_plus));
                        }
                        Cell::Missing(why) => missing.push(format!("H({st}): {why}")),
                        _ => unreachable!("volumes are values or missing"),
                    }
                }
            }
        }
        Which::Epsilon2 => {
            for g in genus {
                for st in Stratum::of_genus(g) {
                    let comps = st.components()?;
                    if !(comps.contains(&Component::EvenSpin)
                        && comps.contains(&Component::OddSpin))
                    {
                        continue;
                    }
                    match ctx.spin_ratio(&st, data.surface_n)? {
                        Cell::Value(v, _) => values.push((st, v)),
                        Cell::Missing(why) => missing.push(format!("H({st}): {why}")),
                        _ => unreachable!("spin ratios are values or missing"),
                    }
                }
            }
        }
        Which::Carea => {
            let (Some(n), Some(l)) = (data.surface_n, data.l) else {
                return Err(usage("figure carea needs --surface-n and --L"));
            };
            for g in genus {
                for st in Stratum::of_genus(g) {
                    ctx.check_time(n)?;
                    match carea_stratum(&st, n, l, data.samples, None, ctx.exec) {
                        Ok(r) => values.push((st, r.carea_fit)),
                        Err(sqtiled::Error::Missing(m)) => missing.push(m),
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
    if !missing.is_empty() {
        return Err(sqtiled::Error::Missing(missing.join("; ")).into());
    }
    Ok(genus_extremes(&values))
}

fn carea(
    ctx: &mut Ctx,
    st: &Stratum,
    ns: RangeInclusive<usize>,
    l: f64,
    samples: Option<usize>,
    component: Option<Component>,
    log: Option<PathBuf>,
) -> Result<Table> {
    if l.is_nan() || l <= 0.0 {
        return Err(usage("--L must be positive"));
    }
    if let Some(c) = component {
        if !st.components()?.contains(&c) {
            return Err(usage(format!("H({st}) has no {c} component")));
        }
    }
    let limit = ctx.census.budget().enumerate_max_n;
    let mut t = Table::new([
        "stratum",
        "component",
        "N",
        "L",
        "samples",
        "carea_mean",
        "carea_fit",
        "min_r2",
        "src",
    ]);
    let mut all = Vec::new();
    for n in ns {
        if n > limit {
            return Err(sqtiled::Error::BudgetExceeded { reached: n, limit }.into());
        }
        ctx.check_time(n)?;
        let r = carea_stratum(st, n, l, samples, component, ctx.exec)?;
        let min_r2 = r
            .per_surface
            .iter()
            .map(|s| s.r2)
            .fold(f64::INFINITY, f64::min);
        t.push(vec![
            format!("H({st})"),
            component.map_or("all".to_string(), |c| c.to_string()),
            n.to_string(),
            fmt_float(l, ctx.digits),
            r.samples.to_string(),
            fmt_float(r.carea_mean, ctx.digits),
            fmt_float(r.carea_fit, ctx.digits),
            fmt_float(min_r2, ctx.digits),
            Provenance::Census.to_string(),
        ]);
        all.extend(r.per_surface);
    }
    if let Some(p) = log {
        let f = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
        sqtiled::svcount::write_samples_csv(BufWriter::new(f), &all, ctx.digits)?;
    }
    Ok(t)
}
