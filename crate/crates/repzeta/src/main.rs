use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use repzeta::cache::ProfileCache;
use repzeta::clifford::{self, FullGroup, LocalData};
use repzeta::dirichlet::{self, BoundsKind, Comparison, Expr, FormulaParams, FORMULA_IDS};
use repzeta::fingroup::{self, GroupId, GROUP_BUDGET};
use repzeta::forbits::{self, OrbitReport, OrbitSpace, TableId, ORBIT_BUDGET};
use repzeta::kirillov::{self, EnumOptions, TruncatedSeries, DEFAULT_BUDGET};
use repzeta::lie::{BuiltinId, LieLattice};
use repzeta::padicint::IntegralOptions;
use repzeta::verify::{self, prime_power, TheoremCase, TheoremId, VerifyError};

#[derive(Parser, Debug)]
#[command(name = "repzeta", version, about = "Exact representation zeta functions of compact p-adic analytic groups")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Maximal number of enumerated objects.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Profile cache directory; defaults to $REPZETA_CACHE.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads for parallel enumeration.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone)]
struct Level {
    /// Residue field size.
    #[arg(long)]
    q: u64,
    /// Ramification index.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Congruence level.
    #[arg(long, default_value_t = 1)]
    m: u32,
    /// Level bound of the enumeration.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    levels: u32,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Brute-force truncated zeta function of a congruence subgroup.
    Zeta {
        /// sl2, sl3, slN or quat.
        #[arg(long)]
        algebra: String,
        #[command(flatten)]
        level: Level,
    },
    /// Expands a registered closed form.
    ClosedForm {
        /// Formula id; `list` prints the registry.
        #[arg(long)]
        formula: String,
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Specialise at this `q` and expand; symbolic otherwise.
        #[arg(long)]
        q: Option<u64>,
        /// Degree bound of the expansion.
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Compares brute force with closed forms, tables or identities.
    Verify(VerifyArgs),
    /// Adjoint orbits over a finite field.
    Orbits {
        /// sl2, sl3 or gl3-trace.
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        q: u64,
        /// Overrides --format.
        #[arg(long, value_enum)]
        emit: Option<Format>,
    },
    /// Abscissa of convergence: bounds and pole-derived values.
    Abscissa {
        /// sl2, sl3, quaternion, sln or skew.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: Option<u32>,
        /// Index of the division algebra, for skew.
        #[arg(long)]
        l: Option<u32>,
        /// Residue characteristic for the rank computations.
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
    /// Character degrees of a finite quotient.
    Chars {
        /// sl2, sl2-congruence, sl1 or cyclic.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        f: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Order of the cyclic group.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Clifford assembly of a full group.
    Assemble {
        /// sl2 or sl1.
        #[arg(long)]
        group: FullGroup,
        /// Local data checked against the extendability hypotheses.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        e: Option<u32>,
        /// Expand at this `q`.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
    /// Profile cache administration.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Closed form to check against brute force.
    #[arg(long, conflicts_with_all = ["table", "lifting", "criterion"])]
    theorem: Option<String>,
    /// Orbit table: T1, T2, T3, T4 or AppB.
    #[arg(long, conflicts_with_all = ["lifting", "integral", "criterion"])]
    table: Option<String>,
    /// Brute force against the integral route; needs --theorem.
    #[arg(long, requires = "theorem")]
    integral: bool,
    /// Masses and lifting counts against their closed forms.
    #[arg(long, conflicts_with = "criterion")]
    lifting: bool,
    /// One numbered acceptance criterion.
    #[arg(long)]
    criterion: Option<u32>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long, default_value_t = 1)]
    e: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    levels: u32,
    /// Largest lifting index.
    #[arg(long, default_value_t = 2)]
    n: u32,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    List,
    Evict { key: String },
    Stats,
}

/// A finished command: JSON payload, text rendering, optional CSV, verdict.
struct Report {
    refs: Vec<&'static str>,
    json: Value,
    text: String,
    csv: Option<String>,
    matched: bool,
}

impl Report {
    fn ok(refs: Vec<&'static str>, json: Value, text: String) -> Self {
        Report { refs, json, text, csv: None, matched: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = match &cli.command {
        Command::Orbits { emit: Some(f), .. } => *f,
        _ => cli.format,
    };
    match run(&cli) {
        Ok(r) => {
            let out = match format {
                Format::Json => {
                    let meta = json!({
                        "tool": "repzeta",
                        "version": env!("CARGO_PKG_VERSION"),
                        "command": command_name(&cli.command),
                        "refs": r.refs,
                    });
                    let v = json!({"metadata": meta, "result": r.json});
                    serde_json::to_string_pretty(&v).expect("serialisable") + "\n"
                }
                Format::Csv => match r.csv {
                    Some(c) => c,
                    None => {
                        eprintln!("error: no CSV rendering for this command");
                        return ExitCode::from(2);
                    }
                },
                Format::Text => r.text,
            };
            print!("{out}");
            ExitCode::from(if r.matched { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Zeta { .. } => "zeta",
        Command::ClosedForm { .. } => "closed-form",
        Command::Verify(_) => "verify",
        Command::Orbits { .. } => "orbits",
        Command::Abscissa { .. } => "abscissa",
        Command::Chars { .. } => "chars",
        Command::Assemble { .. } => "assemble",
        Command::Cache { .. } => "cache",
    }
}

fn usage(s: impl Into<String>) -> VerifyError {
    VerifyError::Usage(s.into())
}

fn enum_options(cli: &Cli) -> EnumOptions {
    let cache = cli.cache_dir.clone().map(ProfileCache::new).or_else(ProfileCache::from_env);
    verify::enum_options(cli.budget.unwrap_or(DEFAULT_BUDGET), cache)
}

fn run(cli: &Cli) -> Result<Report, VerifyError> {
    match &cli.command {
        Command::Zeta { algebra, level } => zeta(cli, algebra, level),
        Command::ClosedForm { formula, m, q, bound } => closed_form(formula, *m, *q, *bound),
        Command::Verify(a) => verify_cmd(cli, a),
        Command::Orbits { algebra, q, .. } => orbits(cli, algebra, *q),
        Command::Abscissa { family, n, l, p } => abscissa(family, *n, *l, *p),
        Command::Chars { group, p, f, e, k, n } => chars(cli, group, *p, *f, *e, *k, *n),
        Command::Assemble { group, p, e, q, bound } => assemble(*group, LocalData { p: *p, e: *e }, *q, *bound),
        Command::Cache { action } => cache(cli, action),
    }
}

fn series_text(s: &TruncatedSeries) -> String {
    let mut t = String::new();
    for (d, c) in &s.counts {
        t.push_str(&format!("  r_{d} = {c}\n"));
    }
    t
}

fn series_csv(s: &TruncatedSeries) -> String {
    let mut t = String::from("degree,count\n");
    for (d, c) in &s.counts {
        t.push_str(&format!("{d},{c}\n"));
    }
    t
}

fn parse_algebra(s: &str, m: u32) -> Result<BuiltinId, VerifyError> {
    match s.to_ascii_lowercase().as_str() {
        "sl2" => Ok(BuiltinId::Sl2),
        "sl3" => Ok(BuiltinId::Sl3),
        "quat" | "quaternion" | "sl1" => Ok(BuiltinId::Sl1Quat(m)),
        t if t.starts_with("sl") => t[2..].parse().map(BuiltinId::Sln).map_err(|_| usage(format!("unknown algebra {s}"))),
        _ => Err(usage(format!("unknown algebra {s}"))),
    }
}

fn zeta(cli: &Cli, algebra: &str, lv: &Level) -> Result<Report, VerifyError> {
    let (p, f) = prime_power(lv.q)?;
    let id = parse_algebra(algebra, lv.m)?;
    let (family, lattice) = match id {
        BuiltinId::Sl1Quat(_) => (kirillov::LatticeFamily::Quaternion, LieLattice::builtin(id, p, f, lv.e)?),
        _ => (kirillov::LatticeFamily::Chevalley, LieLattice::builtin(id, p, f, lv.e)?.scaled(lv.m)?),
    };
    let perm = kirillov::permissible(family, p, lv.e, lv.m);
    if !perm.ok {
        return Err(usage(format!("level {} is not permissible: {}", lv.m, perm.advisory.unwrap_or_default())));
    }
    let s = kirillov::truncated_zeta(&lattice, lv.levels, &enum_options(cli))?;
    let complete = s.complete_through.as_ref().map(|c| c.to_string()).unwrap_or_else(|| "none".into());
    let text = format!(
        "{} q={} e={} m={} through level {} (complete through degree {complete})\n{}",
        id.name(),
        lv.q,
        lv.e,
        lv.m,
        lv.levels,
        series_text(&s)
    );
    let json = json!({"algebra": id.name(), "q": lv.q.to_string(), "e": lv.e.to_string(), "m": lv.m.to_string(), "series": s.to_json()});
    Ok(Report { csv: Some(series_csv(&s)), ..Report::ok(vec![], json, text) })
}

fn expr_text(e: &Expr) -> String {
    let r = e.to_ratfn();
    format!("({}) / ({})", r.num, r.den)
}

fn closed_form(id: &str, m: u32, q: Option<u64>, bound: u64) -> Result<Report, VerifyError> {
    if id == "list" {
        let text = FORMULA_IDS.iter().map(|s| format!("{s}\n")).collect();
        return Ok(Report::ok(vec![], json!(FORMULA_IDS), text));
    }
    let expr = dirichlet::theorem_formula(id, FormulaParams { m, ..Default::default() })?;
    let refs = FORMULA_IDS.iter().copied().filter(|s| *s == id.replace('-', "_")).collect();
    match q {
        None => {
            let text = format!("{id} (m = {m}), with T<f> = f^(-s):\n  {}\n", expr_text(&expr));
            Ok(Report::ok(refs, json!({"formula": id, "m": m.to_string(), "expr": expr.to_json()}), text))
        }
        Some(q) => {
            prime_power(q)?;
            let s = expr.specialize(q).to_series(bound)?;
            let text = format!("{id} (m = {m}) at q = {q}, degrees <= {bound}\n{}", series_text(&s));
            let json = json!({"formula": id, "m": m.to_string(), "q": q.to_string(), "series": s.to_json()});
            Ok(Report { csv: Some(series_csv(&s)), ..Report::ok(refs, json, text) })
        }
    }
}

fn checks_report(id: &'static str, title: &str, checks: Vec<verify::Check>) -> Report {
    let matched = checks.iter().all(|c| c.passed);
    let mut text = format!("{title}: {}\n", if matched { "PASS" } else { "FAIL" });
    for c in &checks {
        text.push_str(&format!("  [{}] {}: {}\n", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
    }
    let json = json!({"passed": matched, "checks": checks});
    Report { refs: vec![id], json, text, csv: None, matched }
}

fn verify_cmd(cli: &Cli, a: &VerifyArgs) -> Result<Report, VerifyError> {
    let need_q = || a.q.ok_or_else(|| usage("--q is required"));
    if let Some(n) = a.criterion {
        let r = verify::criterion(n, &enum_options(cli)).ok_or_else(|| usage(format!("no criterion {n}")))?;
        let mut text = r.summary_line() + "\n";
        for c in &r.checks {
            text.push_str(&format!("  [{}] {}: {}\n", if c.passed { "ok" } else { "FAIL" }, c.name, c.detail));
        }
        for note in &r.notes {
            text.push_str(&format!("  note: {note}\n"));
        }
        let matched = r.informational || r.passed();
        return Ok(Report { refs: vec![], json: serde_json::to_value(&r).expect("serialisable"), text, csv: None, matched });
    }
    if let Some(t) = &a.table {
        let table: TableId = t.parse()?;
        let c = verify::table_check(table, need_q()?, cli.budget.unwrap_or(ORBIT_BUDGET));
        return Ok(checks_report("orbit_tables", "orbit table", vec![c]));
    }
    if a.lifting {
        let q = need_q()?;
        let mut checks = verify::mass_checks(q, a.n.max(1));
        checks.extend(verify::lifting_checks(q, a.n, cli.budget.unwrap_or(1 << 26)));
        checks.extend(verify::duality_checks(q, a.n.max(1)));
        return Ok(checks_report("lifting", "masses and lifting counts", checks));
    }
    let Some(th) = &a.theorem else {
        return Err(usage("one of --theorem, --table, --lifting, --criterion is required"));
    };
    let theorem: TheoremId = th.parse()?;
    let case = TheoremCase { theorem, q: need_q()?, e: a.e, m: a.m, levels: a.levels };
    let opts = enum_options(cli);
    if a.integral {
        let iopts = IntegralOptions { budget: cli.budget.unwrap_or(IntegralOptions::default().budget), ..Default::default() };
        let (brute, via, c) = verify::verify_integral(&case, &opts, &iopts)?;
        let matched = matches!(c, Comparison::Equal { .. });
        let text = format!("brute force vs integral route, q={} m={} levels={}: {c}\n", case.q, case.m, case.levels);
        let json = json!({"verdict": c.to_string(), "passed": matched, "brute_force": brute.to_json(), "integral": via.to_json()});
        return Ok(Report { refs: vec!["zeta_via_integral"], json, text, csv: None, matched });
    }
    let r = verify::verify_theorem(&case, &opts)?;
    let text = format!(
        "{} q={} e={} m={}: {}\n",
        theorem.formula_id(),
        case.q,
        case.e,
        case.m,
        r.verdict()
    );
    Ok(Report { refs: vec![theorem.formula_id()], json: r.to_json(), text, csv: None, matched: r.passed() })
}

fn orbit_json(r: &OrbitReport) -> Value {
    json!({
        "label": r.label,
        "orbits": r.orbits.to_string(),
        "orbit_size": r.orbit_size.to_string(),
        "total": r.total.to_string(),
        "centraliser_gl": r.centraliser_gl.to_string(),
        "centraliser_sl": r.centraliser_sl.to_string(),
        "regular": r.regular,
    })
}

fn orbits(cli: &Cli, algebra: &str, q: u64) -> Result<Report, VerifyError> {
    let space = match algebra.to_ascii_lowercase().as_str() {
        "sl2" => OrbitSpace::Sl2,
        "sl3" => OrbitSpace::Sl3,
        "gl3-trace" | "gl3" => OrbitSpace::Gl3TraceMinusOne,
        _ => return Err(usage(format!("unknown algebra {algebra}"))),
    };
    let reports = forbits::classify_space(space, q, cli.budget.unwrap_or(ORBIT_BUDGET))?;
    let mut text = format!("{algebra} over F_{q}: {} orbit types\n", reports.len());
    for r in &reports {
        text.push_str(&format!(
            "  {:<6} orbits {:>6}  size {:>8}  total {:>9}  |Cen_SL| {}\n",
            r.label, r.orbits, r.orbit_size, r.total, r.centraliser_sl
        ));
    }
    let json = json!({"algebra": algebra, "q": q.to_string(), "types": reports.iter().map(orbit_json).collect::<Vec<_>>()});
    Ok(Report { csv: Some(forbits::to_csv(&reports)), ..Report::ok(vec!["orbit_tables"], json, text) })
}

fn abscissa(family: &str, n: Option<u32>, l: Option<u32>, p: u64) -> Result<Report, VerifyError> {
    let bounds_json = |b: &dirichlet::BoundsReport| json!({"lower": b.lower.to_string(), "upper": b.upper.to_string(), "provenance": b.provenance});
    match family.to_ascii_lowercase().as_str() {
        "sln" => {
            let n = n.ok_or_else(|| usage("--n is required for sln"))?;
            if n < 2 {
                return Err(usage("n >= 2"));
            }
            let b = dirichlet::bounds(&dirichlet::sln_semisimple_data(n))?;
            let text = format!("SL_{n}(o): {} <= alpha <= {}\n", b.lower, b.upper);
            Ok(Report::ok(vec!["semisimple_bounds"], json!({"family": "sln", "n": n.to_string(), "bounds": bounds_json(&b)}), text))
        }
        "skew" => {
            let l = l.ok_or_else(|| usage("--l is required for skew"))?;
            let b = dirichlet::bounds(&BoundsKind::Skew { l })?;
            let text = format!("SL_1 of a division algebra of index {l}: alpha = {}\n", b.lower);
            Ok(Report::ok(vec!["skew_abscissa"], json!({"family": "skew", "l": l.to_string(), "bounds": bounds_json(&b)}), text))
        }
        f => {
            let (id, name, formula) = match f {
                "sl2" => (BuiltinId::Sl2, "sl2", "thm_sl2_podd"),
                "sl3" => (BuiltinId::Sl3, "sl3", "thm_sl3_p3"),
                "quaternion" | "quat" => (BuiltinId::Sl1Quat(1), "sl1_quat_1", "thm_quat_full"),
                _ => return Err(usage(format!("unknown family {family}"))),
            };
            let lattice = LieLattice::builtin(id, p, 1, 1)?;
            let rd = verify::rank_data(&lattice, name, 1)?;
            let b = dirichlet::bounds(&BoundsKind::Thm11 { d: rd.d as u32, sigma: rd.sigma as u32, rho: rd.rho as u32 })?;
            let pole = dirichlet::abscissa_of(&dirichlet::theorem_formula(formula, FormulaParams { m: 1, ..Default::default() })?)?;
            let pole_s = pole.map(|a| a.to_string());
            let text = format!(
                "{name}: d = {}, sigma = {} ({:?}), rho = {}\n  bounds {} <= alpha <= {}\n  pole of {formula}: {}\n",
                rd.d,
                rd.sigma,
                rd.sigma_status,
                rd.rho,
                b.lower,
                b.upper,
                pole_s.as_deref().unwrap_or("none")
            );
            let json = json!({
                "family": name,
                "d": rd.d.to_string(),
                "sigma": rd.sigma.to_string(),
                "sigma_status": rd.sigma_status,
                "rho": rd.rho.to_string(),
                "bounds": bounds_json(&b),
                "pole_abscissa": pole_s,
            });
            Ok(Report::ok(vec!["thm11", formula], json, text))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn chars(cli: &Cli, group: &str, p: u64, f: u32, e: u32, k: u32, n: Option<u64>) -> Result<Report, VerifyError> {
    let id = match group.to_ascii_lowercase().as_str() {
        "sl2" => GroupId::Sl2 { p, f, e, k },
        "sl2-congruence" | "sl2c" => GroupId::Sl2Congruence { p, f, e, k },
        "sl1" => GroupId::Sl1 { p, f, k },
        "cyclic" => GroupId::Cyclic { n: n.ok_or_else(|| usage("--n is required for cyclic"))? },
        _ => return Err(usage(format!("unknown group {group}"))),
    };
    let g = fingroup::build_group(id, cli.budget.unwrap_or(GROUP_BUDGET))?;
    let data = fingroup::character_degrees(&g, 1)?;
    let s = fingroup::degree_zeta(&data);
    let text = format!(
        "{}: order {}, {} classes, sum of squared degrees {}\n{}",
        id.name(),
        data.order,
        data.classes,
        data.sum_of_squares(),
        series_text(&s)
    );
    let json = json!({
        "group": id.name(),
        "order": data.order.to_string(),
        "classes": data.classes.to_string(),
        "degrees": s.counts.iter().map(|(d, c)| [d.to_string(), c.to_string()]).collect::<Vec<_>>(),
    });
    Ok(Report { csv: Some(series_csv(&s)), ..Report::ok(vec!["dixon"], json, text) })
}

fn assemble(group: FullGroup, local: LocalData, q: Option<u64>, bound: u64) -> Result<Report, VerifyError> {
    let strata = clifford::inertia_profile(group, local);
    let expr = clifford::assemble(&strata, &clifford::quotient_zeta(group))?;
    let target = clifford::target_formula(group)?;
    let matched = dirichlet::identical(&expr, &target);
    let mut text = format!("{group:?}: {} strata\n", strata.len());
    for s in &strata {
        text.push_str(&format!("  stratum {} [{}]: {}\n", s.label, s.tag(), s.extension_note));
        for h in &s.hypotheses {
            let state = match h.holds {
                Some(true) => "holds",
                Some(false) => "FAILS",
                None => "assumed",
            };
            text.push_str(&format!("    hypothesis {}: {state}\n", h.statement));
        }
    }
    text.push_str(&format!("  zeta = {}\n", expr_text(&expr)));
    text.push_str(&format!("  identical to the registered full formula: {matched}\n"));
    let mut json = json!({
        "group": format!("{group:?}"),
        "strata": strata,
        "expr": expr.to_json(),
        "matches_target": matched,
    });
    let mut csv = None;
    if let Some(q) = q {
        prime_power(q)?;
        let s = expr.specialize(q).to_series(bound)?;
        text.push_str(&format!("  at q = {q}, degrees <= {bound}:\n{}", series_text(&s)));
        json["series"] = s.to_json();
        csv = Some(series_csv(&s));
    }
    let refs = vec![match group {
        FullGroup::Sl2 => "sl2_full",
        FullGroup::Sl1 => "thm_quat_full",
    }];
    Ok(Report { refs, json, text, csv, matched })
}

fn cache(cli: &Cli, action: &CacheAction) -> Result<Report, VerifyError> {
    let cache = cli
        .cache_dir
        .clone()
        .map(ProfileCache::new)
        .or_else(ProfileCache::from_env)
        .ok_or_else(|| usage("no cache directory: pass --cache-dir or set REPZETA_CACHE"))?;
    let io = |e: std::io::Error| VerifyError::Compute(format!("cache: {e}"));
    match action {
        CacheAction::List => {
            let recs = cache.load().map_err(io)?;
            let mut text = String::new();
            let mut csv = String::from("key,algebra,q,e,c,size\n");
            let mut rows = Vec::new();
            for r in recs.values() {
                let alg = r.fingerprint.split('|').next().unwrap_or("");
                text.push_str(&format!("{} {alg} q={} e={} c={} size={}\n", r.key, r.q, r.e, r.c, r.histogram.len()));
                csv.push_str(&format!("{},{alg},{},{},{},{}\n", r.key, r.q, r.e, r.c, r.histogram.len()));
                rows.push(json!({
                    "key": r.key, "algebra": alg, "fingerprint": r.fingerprint,
                    "q": r.q.to_string(), "e": r.e.to_string(), "c": r.c.to_string(),
                    "size": r.histogram.len().to_string(),
                }));
            }
            Ok(Report { csv: Some(csv), ..Report::ok(vec![], json!(rows), text) })
        }
        CacheAction::Evict { key } => {
            let hit = cache.evict(key).map_err(io)?;
            if !hit {
                eprintln!("warning: no entry with key {key}");
            }
            let text = if hit { format!("evicted {key}\n") } else { String::new() };
            Ok(Report::ok(vec![], json!({"key": key, "evicted": hit}), text))
        }
        CacheAction::Stats => {
            let recs = cache.load().map_err(io)?;
            let mut by: std::collections::BTreeMap<(String, u64, u32, u32), (usize, BigUint)> = Default::default();
            for r in recs.values() {
                let alg = r.fingerprint.split('|').next().unwrap_or("").to_string();
                let total: BigUint = r.histogram.iter().filter_map(|(_, c)| c.parse::<BigUint>().ok()).sum();
                let slot = by.entry((alg, r.q, r.e, r.c)).or_default();
                slot.0 += 1;
                slot.1 += total;
            }
            let mut text = format!("{} entries in {}\n", recs.len(), cache.dir().display());
            let mut rows = Vec::new();
            for ((alg, q, e, c), (n, total)) in &by {
                text.push_str(&format!("  {alg} q={q} e={e} c={c}: {n} record(s), {total} classes\n"));
                rows.push(json!({"algebra": alg, "q": q.to_string(), "e": e.to_string(), "c": c.to_string(), "records": n.to_string(), "classes": total.to_string()}));
            }
            Ok(Report::ok(vec![], json!({"entries": recs.len().to_string(), "groups": rows}), text))
        }
    }
}
