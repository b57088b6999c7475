//! Command implementations behind the `intres` binary.
//!
//! Every command returns a [`Report`] holding a JSON value and a TSV
//! rendering; [`run`] parses arguments, executes inside a worker pool of the
//! requested size and maps errors to exit codes.

use std::fs;
use std::io::Read;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use intres::approx::{default_max_depth, interval_resolution, verify_resolution};
use intres::artrans::{intgldim_report, tau, tau_inverse};
use intres::json::{
    interval_from_json, interval_to_json, module_from_json, module_to_json, poset_from_json, poset_to_json,
    profile_to_json, resolution_to_json, zigzag_to_json,
};
use intres::ladder::{compress, interval_approximation_delta};
use intres::testkit::{perturbed, plant, presented, rng};
use intres::{enumerate_intervals, euler_profile, Error, Field, IntervalPoset, PersistenceModule, Poset, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RandomMode {
    /// Scrambled direct sum of random interval modules.
    Planted,
    /// Random solution of the commutativity constraints.
    Perturbed,
    /// Cokernel of a random map between sums of projectives.
    Presented,
}

#[derive(Parser, Debug)]
#[command(name = "intres", version, about = "Interval resolutions of persistence modules over finite posets")]
pub struct Cli {
    /// Prime modulus of the coefficient field.
    #[arg(long, global = true, default_value_t = 2)]
    pub field: u32,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum resolution length before giving up.
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct PosetArg {
    /// Grid G(M, N) with M columns and N rows.
    #[arg(long, num_args = 2, value_names = ["M", "N"])]
    pub grid: Option<Vec<usize>>,
    /// Poset JSON file.
    #[arg(long, conflicts_with = "grid")]
    pub poset: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List all intervals of a poset.
    Intervals(PosetArg),
    /// Minimal interval resolution of a module.
    Resolve { module: String },
    /// Interval resolution dimension of a module.
    Intdim { module: String },
    /// Interval resolution global dimension of a grid.
    Intgldim {
        /// Grid size as positional M N (alternative to --grid).
        #[arg(num_args = 0..=2)]
        size: Vec<usize>,
        #[arg(long, num_args = 2, value_names = ["M", "N"])]
        grid: Option<Vec<usize>>,
    },
    /// Auslander-Reiten translate of a module.
    Tau {
        module: String,
        /// Apply the inverse translate instead.
        #[arg(long)]
        inverse: bool,
    },
    /// Compress a ladder module along an interval to the zigzag.
    Compress {
        module: String,
        /// Interval JSON: {"members": [...]} or {"staircase": [[row, b, d], ...]}.
        #[arg(long)]
        interval: String,
    },
    /// Compressed multiplicities and their Mobius inversion.
    Delta { module: String },
    /// Generate a random module.
    Random {
        #[command(flatten)]
        poset: PosetArg,
        #[arg(long, value_enum, default_value_t = RandomMode::Planted)]
        mode: RandomMode,
        /// Number of summands, dimension bound or generator bound, by mode.
        #[arg(long, default_value_t = 4)]
        budget: usize,
    },
    /// Run the invariant suite on a module.
    Check { module: String },
}

/// Shared settings of one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub field: Field,
    pub seed: u64,
    pub max_depth: Option<usize>,
    pub jobs: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn new(field: u32) -> Result<Self> {
        Ok(RunConfig {
            field: Field::new(field)?,
            seed: 0,
            max_depth: None,
            jobs: 1,
            format: Format::Json,
        })
    }

    fn depth(&self, ip: &IntervalPoset) -> usize {
        self.max_depth.unwrap_or_else(|| default_max_depth(ip))
    }
}

/// A command result in both output formats.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub tsv: String,
    /// Set when the command ran but found invariant violations.
    pub failed: bool,
}

impl Report {
    fn ok(json: Value, tsv: String) -> Self {
        Report {
            json,
            tsv,
            failed: false,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(&self.json).expect("values serialize"),
            Format::Tsv => self.tsv.clone(),
        }
    }
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::DepthExceeded { .. } => 3,
        Error::JoinMissing(_) => 4,
        Error::InternalInconsistency(_) => 5,
        _ => 2,
    }
}

pub fn read_json(path: &str) -> Result<Value> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Input(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Input(format!("{path}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Parse a module, taking the field from the document or else from `cfg`.
pub fn load_module(v: &Value, cfg: &RunConfig) -> Result<Arc<PersistenceModule>> {
    let mut v = v.clone();
    if let Value::Object(obj) = &mut v {
        obj.entry("field").or_insert(json!(cfg.field.modulus()));
    }
    Ok(Arc::new(module_from_json(&v)?))
}

fn grid_arg(grid: &Option<Vec<usize>>) -> Result<Option<Poset>> {
    match grid.as_deref() {
        None => Ok(None),
        Some([m, n]) => Poset::grid(*m, *n).map(Some),
        Some(_) => Err(Error::Input("--grid takes two sizes".into())),
    }
}

fn resolve_poset(arg: &PosetArg) -> Result<Arc<Poset>> {
    if let Some(p) = grid_arg(&arg.grid)? {
        return Ok(Arc::new(p));
    }
    match &arg.poset {
        Some(path) => Ok(Arc::new(poset_from_json(&read_json(path)?)?)),
        None => Err(Error::Input("a poset is required (--grid M N or --poset FILE)".into())),
    }
}

fn members_tsv(p: &Poset, iv: &intres::Interval) -> String {
    p.set_labels(iv.members()).join(" ")
}

pub fn cmd_intervals(poset: &Arc<Poset>) -> Report {
    let ip = enumerate_intervals(poset);
    let list: Vec<Value> = ip.intervals().iter().map(|iv| interval_to_json(poset, iv)).collect();
    let mut tsv = String::from("index\tmembers\n");
    for (i, iv) in ip.iter() {
        tsv.push_str(&format!("{i}\t{}\n", members_tsv(poset, iv)));
    }
    Report::ok(
        json!({"poset": poset_to_json(poset), "count": ip.len(), "intervals": list}),
        tsv,
    )
}

pub fn cmd_resolve(m: &Arc<PersistenceModule>, cfg: &RunConfig) -> Result<Report> {
    let ip = enumerate_intervals(m.poset());
    let res = interval_resolution(m, &ip, cfg.depth(&ip))?;
    let checks = verify_resolution(&res, &ip);
    let mut tsv = String::from("interval");
    for i in 0..res.steps.len() {
        tsv.push_str(&format!("\td{i}"));
    }
    tsv.push('\n');
    for (j, row) in res.table(ip.len()).iter().enumerate() {
        if row.iter().any(|&d| d > 0) {
            let cells: Vec<String> = row.iter().map(usize::to_string).collect();
            tsv.push_str(&format!("{}\t{}\n", members_tsv(ip.poset(), ip.get(j)), cells.join("\t")));
        }
    }
    let failed = !checks.ok();
    Ok(Report {
        json: resolution_to_json(&res, &ip, Some(&checks)),
        tsv,
        failed,
    })
}

pub fn cmd_intdim(m: &Arc<PersistenceModule>, cfg: &RunConfig) -> Result<Report> {
    let ip = enumerate_intervals(m.poset());
    let r = interval_resolution(m, &ip, cfg.depth(&ip))?.length;
    Ok(Report::ok(json!({"intdim": r}), format!("{r}\n")))
}

pub fn cmd_intgldim(m: usize, n: usize, cfg: &RunConfig) -> Result<Report> {
    let p = Arc::new(Poset::grid(m, n)?);
    let ip = enumerate_intervals(&p);
    let rep = intgldim_report(&ip, cfg.field)?;
    let mut tsv = format!("# intgldim\t{}\nindex\tmembers\tintdim_tau\tintcodim_tau_inverse\n", rep.value);
    let per: Vec<Value> = ip
        .iter()
        .map(|(i, iv)| {
            let (a, b) = rep.per_interval[i];
            tsv.push_str(&format!("{i}\t{}\t{a}\t{b}\n", members_tsv(&p, iv)));
            json!({"interval": interval_to_json(&p, iv), "intdim_tau": a, "intcodim_tau_inverse": b})
        })
        .collect();
    Ok(Report::ok(
        json!({
            "grid": [m, n],
            "field": cfg.field.modulus(),
            "intgldim": rep.value,
            "tau_max": rep.tau_max,
            "tau_inverse_max": rep.tau_inverse_max,
            "per_interval": per,
        }),
        tsv,
    ))
}

fn module_tsv(m: &PersistenceModule) -> String {
    let p = m.poset();
    let mut out = String::from("vertex\tdim\n");
    for x in 0..p.len() {
        out.push_str(&format!("{}\t{}\n", p.label(x), m.dim(x)));
    }
    out
}

pub fn cmd_tau(m: &Arc<PersistenceModule>, inverse: bool) -> Result<Report> {
    let t = if inverse { tau_inverse(m)? } else { tau(m)? };
    Ok(Report::ok(module_to_json(&t), module_tsv(&t)))
}

pub fn cmd_compress(m: &Arc<PersistenceModule>, interval: &Value) -> Result<Report> {
    let iv = interval_from_json(m.poset(), interval)?;
    let z = compress(m, &iv)?;
    let c = intres::ladder::zigzag_top_multiplicity(&z);
    let mut v = zigzag_to_json(&z);
    v["multiplicity"] = json!(c);
    let dims: Vec<String> = z.dims().iter().map(usize::to_string).collect();
    Ok(Report::ok(v, format!("dims\t{}\nmultiplicity\t{c}\n", dims.join("\t"))))
}

pub fn cmd_delta(m: &Arc<PersistenceModule>) -> Result<Report> {
    let ip = enumerate_intervals(m.poset());
    let prof = interval_approximation_delta(m, &ip)?;
    let mut tsv = String::from("members\tc\tdelta\n");
    for (j, iv) in ip.iter() {
        tsv.push_str(&format!("{}\t{}\t{}\n", members_tsv(m.poset(), iv), prof.c[j], prof.delta[j]));
    }
    Ok(Report::ok(profile_to_json(&prof, &ip), tsv))
}

pub fn cmd_random(poset: &Arc<Poset>, mode: RandomMode, budget: usize, cfg: &RunConfig) -> Report {
    let m = match mode {
        RandomMode::Planted => {
            let ip = enumerate_intervals(poset);
            plant(&ip, cfg.field, budget, cfg.seed).module.as_ref().clone()
        }
        RandomMode::Perturbed => perturbed(poset, cfg.field, budget, cfg.seed),
        RandomMode::Presented => presented(poset, cfg.field, budget, cfg.seed),
    };
    Report::ok(module_to_json(&m), module_tsv(&m))
}

/// Commutativity, resolution soundness, isomorphism invariance and, on
/// ladders, agreement of the compressed invariants with the resolution.
pub fn cmd_check(m: &Arc<PersistenceModule>, cfg: &RunConfig) -> Result<Report> {
    let ip = enumerate_intervals(m.poset());
    let mut checks = serde_json::Map::new();
    let mut violations: Vec<String> = Vec::new();
    let mut record = |name: &str, ok: bool, why: String, violations: &mut Vec<String>| {
        checks.insert(name.into(), json!(ok));
        if !ok {
            violations.push(why);
        }
    };

    record("commutative", m.check_commutativity(), "module does not commute".into(), &mut violations);
    let res = interval_resolution(m, &ip, cfg.depth(&ip))?;
    let sound = verify_resolution(&res, &ip);
    record("exact", sound.exact, "resolution is not exact".into(), &mut violations);
    record("surjective", sound.surjective, "a cover is not surjective".into(), &mut violations);
    record("approximation", sound.approximation, "approximation property fails".into(), &mut violations);
    violations.extend(sound.violations.iter().cloned());

    let scrambled = Arc::new(m.scramble(&mut rng(cfg.seed)));
    let res2 = interval_resolution(&scrambled, &ip, cfg.depth(&ip))?;
    record(
        "scramble_invariant",
        res2.table(ip.len()) == res.table(ip.len()),
        "multiplicities change under an isomorphism".into(),
        &mut violations,
    );

    let euler = euler_profile(&res, ip.len());
    let weighted: i64 = (0..ip.len()).map(|j| euler[j] * ip.get(j).len() as i64).sum();
    record(
        "euler_dimension",
        weighted == m.total_dim() as i64,
        format!("alternating dimension sum {weighted} differs from {}", m.total_dim()),
        &mut violations,
    );

    if matches!(m.poset().grid_shape(), Some((_, 2))) {
        let prof = interval_approximation_delta(m, &ip)?;
        let cover_sums = (0..ip.len()).all(|i| {
            let s: i64 = (0..ip.len()).filter(|&j| ip.leq(i, j)).map(|j| euler[j]).sum();
            s == prof.c[i] as i64
        });
        record(
            "compressed_multiplicity",
            cover_sums,
            "compressed multiplicity differs from the resolution sum".into(),
            &mut violations,
        );
        record(
            "delta",
            prof.delta == euler,
            "Mobius inversion differs from the Euler profile".into(),
            &mut violations,
        );
    }

    let ok = violations.is_empty();
    let mut tsv = String::new();
    for (k, v) in &checks {
        tsv.push_str(&format!("{k}\t{v}\n"));
    }
    Ok(Report {
        json: json!({"ok": ok, "length": res.length, "checks": checks, "violations": violations}),
        tsv,
        failed: !ok,
    })
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<Report> {
    let module = |path: &str| -> Result<Arc<PersistenceModule>> { load_module(&read_json(path)?, cfg) };
    match &cli.command {
        Command::Intervals(arg) => Ok(cmd_intervals(&resolve_poset(arg)?)),
        Command::Resolve { module: path } => cmd_resolve(&module(path)?, cfg),
        Command::Intdim { module: path } => cmd_intdim(&module(path)?, cfg),
        Command::Intgldim { size, grid } => {
            let dims = match (size.as_slice(), grid.as_deref()) {
                ([m, n], None) | ([], Some([m, n])) => (*m, *n),
                _ => return Err(Error::Input("intgldim needs a grid size: M N or --grid M N".into())),
            };
            cmd_intgldim(dims.0, dims.1, cfg)
        }
        Command::Tau { module: path, inverse } => cmd_tau(&module(path)?, *inverse),
        Command::Compress { module: path, interval } => {
            let iv: Value = serde_json::from_str(interval)?;
            cmd_compress(&module(path)?, &iv)
        }
        Command::Delta { module: path } => cmd_delta(&module(path)?),
        Command::Random { poset, mode, budget } => Ok(cmd_random(&resolve_poset(poset)?, *mode, *budget, cfg)),
        Command::Check { module: path } => cmd_check(&module(path)?, cfg),
    }
}

fn error_json(e: &Error) -> String {
    serde_json::to_string(&json!({"error": e.to_string()})).expect("values serialize")
}

/// Execute a parsed command line; returns the text for stdout and the exit
/// code.
pub fn run(cli: &Cli) -> (String, i32) {
    let cfg = match RunConfig::new(cli.field) {
        Ok(c) => RunConfig {
            seed: cli.seed,
            max_depth: cli.max_depth,
            jobs: cli.jobs.max(1),
            format: cli.format,
            ..c
        },
        Err(e) => return (error_json(&e), exit_code(&e)),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build() {
        Ok(p) => p,
        Err(e) => return (error_json(&Error::Input(e.to_string())), 2),
    };
    match pool.install(|| dispatch(cli, &cfg)) {
        Ok(r) => (r.render(cfg.format), if r.failed { 5 } else { 0 }),
        Err(e) => (error_json(&e), exit_code(&e)),
    }
}
