//! Command-line front end: decide, scan, verify, and export subcommands.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use uchi::checks::{run_all, run_check, CheckConfig};
use uchi::chevalley::structure_constants;
use uchi::envalg::{AlgebraContext, Character};
use uchi::err::{Error, Result};
use uchi::gf::{good_prime, FiniteField};
use uchi::modrep::{
    build_z, compatible_weights, describe_i, is_simple, r_on_module, write_matrix_dump,
    OracleOpts, SweepRow, Weight, CSV_HEADER,
};
use uchi::rcrit::{r_factorization, r_product, RFactorization};
use uchi::roots::{build_root_system, ParabolicData, RootSystem};
use uchi::textfmt;

#[derive(Parser)]
#[command(
    name = "uchi",
    version,
    about = "Simplicity of parabolically induced modules over reduced enveloping algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide simplicity of one induced module from the product criterion.
    Decide(DecideArgs),
    /// Sweep all compatible weights for one configuration, one CSV row each.
    Scan(ScanArgs),
    /// Run named verification checks and print one line per check.
    Verify(VerifyArgs),
    /// Export root data, structure constants, factor forms, or module matrices.
    Export(ExportArgs),
}

/// Arguments shared by every subcommand that fixes (g, p^e, I, chi).
#[derive(Args, Clone)]
struct SysArgs {
    /// Root-system type and rank, e.g. A2, B3, G2.
    #[arg(long = "type", value_name = "TYPE")]
    kind: String,
    /// Field characteristic; must be good for the type.
    #[arg(long)]
    p: u32,
    /// Field extension degree, acting over GF(p^e).
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Parabolic simple roots, e.g. "a1,a3"; empty means the Borel case.
    #[arg(long = "I", value_name = "ROOTS", default_value = "")]
    i_set: String,
    /// chi on the simple coroots: comma-separated field elements, each
    /// written in dotted polynomial-basis coordinates ("2" or "1.2").
    #[arg(long = "chi-h", value_name = "LIST", default_value = "")]
    chi_h: String,
    /// chi on Levi f generators: comma-separated "root:value" pairs,
    /// e.g. "a1:1,a1+a2:2". Roots outside the Levi are rejected.
    #[arg(long = "chi-f", value_name = "PAIRS", default_value = "")]
    chi_f: String,
}

/// Oracle knobs shared by decide and scan.
#[derive(Args, Clone)]
struct OracleArgs {
    /// Also construct the module and check the verdict independently.
    #[arg(long)]
    oracle: bool,
    /// Dimension cap on constructed modules.
    #[arg(long, value_name = "N")]
    max_dim: Option<usize>,
    /// Seed for the oracle's randomized steps.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
}

impl OracleArgs {
    fn opts(&self) -> OracleOpts {
        let mut o = OracleOpts::default();
        if let Some(m) = self.max_dim {
            o.max_dim = m;
        }
        if let Some(s) = self.seed {
            o.seed = s;
        }
        o
    }
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    sys: SysArgs,
    /// Weight on the simple coroots, comma-separated field elements.
    #[arg(long, value_name = "LIST")]
    lambda: String,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Write the report here as .csv or .json in addition to stdout text.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    sys: SysArgs,
    #[command(flatten)]
    oracle: OracleArgs,
    /// Worker threads for the weight sweep.
    #[arg(long, value_name = "N", default_value_t = 1)]
    jobs: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check id, or "all".
    #[arg(long, value_name = "ID", default_value = "all")]
    check: String,
    /// Restrict sweeps to these types, e.g. "A2,B2".
    #[arg(long, value_name = "LIST")]
    types: Option<String>,
    /// Restrict sweeps to these primes, e.g. "3,5".
    #[arg(long, value_name = "LIST")]
    p: Option<String>,
    /// Drop types above this rank from every sweep.
    #[arg(long, value_name = "N")]
    ranks: Option<usize>,
    /// Seed for randomized steps.
    #[arg(long, value_name = "SEED")]
    seed: Option<u64>,
    /// Dimension cap on constructed modules.
    #[arg(long, value_name = "N")]
    max_dim: Option<usize>,
}

#[derive(Args)]
struct ExportArgs {
    #[command(subcommand)]
    what: ExportKind,
}

#[derive(Subcommand)]
enum ExportKind {
    /// Root-system snapshot as JSON.
    Roots {
        #[arg(long = "type", value_name = "TYPE")]
        kind: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Chevalley structure constants as CSV.
    Chevalley {
        #[arg(long = "type", value_name = "TYPE")]
        kind: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Product-criterion factor forms for one parabolic as JSON.
    Factors {
        #[arg(long = "type", value_name = "TYPE")]
        kind: String,
        #[arg(long = "I", value_name = "ROOTS", default_value = "")]
        i_set: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Generator action matrices of one induced module, one file each.
    Module {
        #[command(flatten)]
        sys: SysArgs,
        /// Weight on the simple coroots, comma-separated field elements.
        #[arg(long, value_name = "LIST")]
        lambda: String,
        /// Directory to write the matrix files into.
        #[arg(long = "dump-dir", value_name = "DIR")]
        dump_dir: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
}

/// Everything the shared arguments pin down, validated.
struct Setup {
    sys: RootSystem,
    field: FiniteField,
    pd: ParabolicData,
    chi: Character,
}

impl SysArgs {
    fn build(&self) -> Result<Setup> {
        let (kind, rank) = textfmt::parse_type(&self.kind)?;
        good_prime(kind, rank, self.p)?;
        let sys = build_root_system(kind, rank)?;
        let field = FiniteField::new(self.p, self.e)?;
        let i_set = textfmt::parse_simple_set(&self.i_set, rank)?;
        if i_set.len() == rank {
            return Err(Error::config(
                "hypothesis violated: I must be a proper subset of the simple roots",
            ));
        }
        let pd = sys.parabolic_data(&i_set)?;
        let chi_h = if self.chi_h.trim().is_empty() {
            vec![0; rank]
        } else {
            textfmt::parse_scalar_list(&self.chi_h, &field, rank)?
        };
        let chi_f = textfmt::parse_chi_f(&self.chi_f, &sys, &field)?;
        for (&idx, &v) in &chi_f {
            if v != 0 && !pd.phi_i_plus.contains(&sys.positive_roots[idx]) {
                return Err(Error::config(format!(
                    "hypothesis violated: chi must vanish on the nilradical, \
                     but chi-f is nonzero at {} outside the Levi",
                    sys.positive_roots[idx]
                )));
            }
        }
        let mut chi = Character::with_h(chi_h);
        chi.chi_f = chi_f;
        Ok(Setup { sys, field, pd, chi })
    }
}

impl Setup {
    fn context(&self) -> Result<AlgebraContext> {
        AlgebraContext::new(&self.sys, &self.field, self.chi.clone(), None)
    }

    fn parse_lambda(&self, s: &str) -> Result<Weight> {
        Ok(Weight::new(textfmt::parse_scalar_list(
            s,
            &self.field,
            self.sys.rank,
        )?))
    }

    fn header_lines(&self) -> Vec<String> {
        vec![
            format!(
                "type {}{}, field GF({}), I = {}",
                self.sys.kind,
                self.sys.rank,
                self.field.describe(),
                describe_i(&self.pd)
            ),
            format!("chi: {}", self.chi.describe(&self.sys, &self.field)),
        ]
    }
}

fn verdict_word(simple: bool) -> &'static str {
    if simple {
        "simple"
    } else {
        "not simple"
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::config(format!("cannot write {}: {e}", path.display())))
}

fn emit(text: &str, out: &Option<PathBuf>, what: &str) -> Result<()> {
    match out {
        Some(p) => {
            write_file(p, text)?;
            println!("wrote {what} to {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    levi_dim: usize,
    module_dim: usize,
    r_value: String,
    simple: bool,
}

#[derive(Serialize)]
struct DecideReport {
    kind: char,
    rank: usize,
    p: u32,
    e: u32,
    i: String,
    chi: String,
    lambda: String,
    factorization: RFactorization,
    factor_values: Vec<String>,
    vanishing_factors: Vec<String>,
    r_value: String,
    simple: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleReport>,
}

fn cmd_decide(a: DecideArgs) -> Result<u8> {
    let s = a.sys.build()?;
    let lambda = s.parse_lambda(&a.lambda)?;
    let ctx = s.context()?;
    lambda.compatible(&ctx)?;

    let fac = r_factorization(&s.sys, &s.pd)?;
    let verdict = r_product(&s.sys, &s.field, &s.pd, &lambda)?;
    for line in s.header_lines() {
        println!("{line}");
    }
    println!("lambda: {}", lambda.describe(&s.field));
    println!("factors over the complement ({}):", fac.factors.len());
    let mut factor_values = Vec::with_capacity(fac.factors.len());
    for f in &fac.factors {
        let form = s.field.render(f.form_at(&s.field, &lambda));
        let val = s.field.render(f.value_at(&s.field, &lambda));
        println!(
            "  {}: {} = {}, factor ({})^{} - 1 = {}",
            f.root,
            f.render_form(),
            form,
            form,
            s.field.p() - 1,
            val
        );
        factor_values.push(val);
    }
    if verdict.vanishing_factors.is_empty() {
        println!("vanishing factors: none");
    } else {
        println!("vanishing factors: {}", verdict.vanishing_factors.join(" "));
    }
    println!("R(lambda) = {}", s.field.render(verdict.r_value));
    println!("verdict: {}", verdict_word(verdict.simple));

    let mut oracle_report = None;
    if a.oracle.oracle {
        let opts = a.oracle.opts();
        let (ctx2, z) = build_z(&ctx, &s.pd, &lambda, &opts)?;
        let p_to_k = (0..s.pd.k).fold(1usize, |a, _| a.saturating_mul(s.field.p() as usize));
        let levi_dim = z.dim / p_to_k.max(1);
        let w = is_simple(&z, &opts)?;
        let r = r_on_module(&ctx2, &s.pd, &z)?;
        let f2 = &ctx2.field;
        println!(
            "oracle: module dim {} over GF({}), levi head dim {}",
            z.dim,
            f2.describe(),
            levi_dim
        );
        println!("straightening: r = {}", f2.render(r));
        let agree = w.simple == verdict.simple && (r != 0) == verdict.simple;
        println!(
            "oracle verdict: {} ({})",
            verdict_word(w.simple),
            if agree { "agrees" } else { "DISAGREES" }
        );
        oracle_report = Some(OracleReport {
            levi_dim,
            module_dim: z.dim,
            r_value: f2.render(r),
            simple: w.simple,
        });
        if !agree {
            return Err(Error::falsified(format!(
                "module oracle disagrees with the product criterion at lambda = {}",
                lambda.describe(f2)
            )));
        }
    }

    if let Some(path) = &a.out {
        match path.extension().and_then(|x| x.to_str()) {
            Some("json") => {
                let rep = DecideReport {
                    kind: s.sys.kind,
                    rank: s.sys.rank,
                    p: s.field.p(),
                    e: s.field.e(),
                    i: describe_i(&s.pd),
                    chi: s.chi.describe(&s.sys, &s.field),
                    lambda: lambda.describe(&s.field),
                    factorization: fac,
                    factor_values,
                    vanishing_factors: verdict.vanishing_factors.clone(),
                    r_value: s.field.render(verdict.r_value),
                    simple: verdict.simple,
                    oracle: oracle_report,
                };
                let body = serde_json::to_string_pretty(&rep)
                    .map_err(|e| Error::config(format!("cannot serialize report: {e}")))?;
                write_file(path, &(body + "\n"))?;
            }
            Some("csv") => {
                let row = SweepRow {
                    kind: s.sys.kind,
                    rank: s.sys.rank,
                    p: s.field.p(),
                    e: s.field.e(),
                    i_desc: describe_i(&s.pd),
                    chi_desc: s.chi.describe(&s.sys, &s.field),
                    lambda_desc: lambda.describe(&s.field),
                    formula_simple: Some(verdict.simple),
                    oracle_simple: oracle_report.as_ref().map(|o| o.simple),
                    r_value: oracle_report
                        .as_ref()
                        .map_or_else(|| "-".into(), |o| o.r_value.clone()),
                    ratio: "-".into(),
                };
                write_file(path, &format!("{CSV_HEADER}\n{}\n", row.csv_line()))?;
            }
            _ => {
                return Err(Error::config(
                    "output path must end in .json or .csv",
                ))
            }
        }
        println!("wrote report to {}", path.display());
    }
    Ok(0)
}

/// One sweep row plus an optional falsification message.
fn scan_row(
    s: &Setup,
    ctx: &AlgebraContext,
    lambda: &Weight,
    oracle: bool,
    opts: &OracleOpts,
) -> Result<(SweepRow, Option<String>)> {
    let verdict = r_product(&s.sys, &s.field, &s.pd, lambda)?;
    let mut row = SweepRow {
        kind: s.sys.kind,
        rank: s.sys.rank,
        p: s.field.p(),
        e: s.field.e(),
        i_desc: describe_i(&s.pd),
        chi_desc: s.chi.describe(&s.sys, &s.field),
        lambda_desc: lambda.describe(&s.field),
        formula_simple: Some(verdict.simple),
        oracle_simple: None,
        r_value: "-".into(),
        ratio: "-".into(),
    };
    if !oracle {
        return Ok((row, None));
    }
    let (ctx2, z) = build_z(ctx, &s.pd, lambda, opts)?;
    let w = is_simple(&z, opts)?;
    let r = r_on_module(&ctx2, &s.pd, &z)?;
    let f2 = &ctx2.field;
    row.oracle_simple = Some(w.simple);
    row.r_value = f2.render(r);
    // Base-field indexes embed unchanged into the prime subfield of any
    // extension levi_simple may have switched to.
    row.ratio = if r != 0 && verdict.r_value != 0 {
        f2.render(f2.mul(r, f2.inv(verdict.r_value)?))
    } else {
        "-".into()
    };
    let mismatch = if w.simple != verdict.simple || (r != 0) != verdict.simple {
        Some(format!(
            "lambda = {}: formula says {}, oracle says {}, r = {}",
            lambda.describe(f2),
            verdict_word(verdict.simple),
            verdict_word(w.simple),
            f2.render(r)
        ))
    } else {
        None
    };
    Ok((row, mismatch))
}

fn cmd_scan(a: ScanArgs) -> Result<u8> {
    let s = a.sys.build()?;
    let ctx = s.context()?;
    let lambdas = compatible_weights(&ctx);
    if lambdas.is_empty() {
        eprintln!(
            "warning: no weights over GF({}) are compatible with this chi; empty sweep",
            s.field.describe()
        );
    }
    let opts = a.oracle.opts();
    let results: Vec<Result<(SweepRow, Option<String>)>> = if a.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(a.jobs)
            .build()
            .map_err(|e| Error::resource(format!("cannot build thread pool: {e}")))?;
        pool.install(|| {
            lambdas
                .par_iter()
                .map(|l| scan_row(&s, &ctx, l, a.oracle.oracle, &opts))
                .collect()
        })
    } else {
        lambdas
            .iter()
            .map(|l| scan_row(&s, &ctx, l, a.oracle.oracle, &opts))
            .collect()
    };

    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    let mut mismatches = Vec::new();
    for r in results {
        let (row, mismatch) = r?;
        text.push_str(&row.csv_line());
        text.push('\n');
        mismatches.extend(mismatch);
    }
    emit(&text, &a.out, &format!("{} rows", lambdas.len()))?;
    for m in &mismatches {
        eprintln!("falsified: {m}");
    }
    Ok(if mismatches.is_empty() { 0 } else { 1 })
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let mut cfg = CheckConfig::default();
    if let Some(ts) = &a.types {
        let mut v = Vec::new();
        for part in ts.split(',') {
            v.push(textfmt::parse_type(part)?);
        }
        cfg.types = Some(v);
    }
    if let Some(ps) = &a.p {
        let mut v = Vec::new();
        for part in ps.split(',') {
            let part = part.trim();
            v.push(
                part.parse::<u32>()
                    .map_err(|_| Error::config(format!("bad prime {part:?}")))?,
            );
        }
        cfg.primes = Some(v);
    }
    cfg.max_rank = a.ranks;
    if let Some(seed) = a.seed {
        cfg.opts.seed = seed;
    }
    if let Some(m) = a.max_dim {
        cfg.opts.max_dim = m;
    }
    let reports = if a.check == "all" {
        run_all(&cfg)?
    } else {
        vec![run_check(&a.check, &cfg)?]
    };
    for r in &reports {
        println!("{}", r.line());
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("summary: {} checks, {} failed", reports.len(), failed);
    Ok(if failed == 0 { 0 } else { 1 })
}

fn cmd_export(a: ExportArgs) -> Result<u8> {
    match a.what {
        ExportKind::Roots { kind, out } => {
            let (k, r) = textfmt::parse_type(&kind)?;
            let sys = build_root_system(k, r)?;
            let body = serde_json::to_string_pretty(&sys.to_doc())
                .map_err(|e| Error::config(format!("cannot serialize roots: {e}")))?;
            emit(&(body + "\n"), &out, "root data")?;
        }
        ExportKind::Chevalley { kind, out } => {
            let (k, r) = textfmt::parse_type(&kind)?;
            let sys = build_root_system(k, r)?;
            let sc = structure_constants(&sys);
            emit(&sc.to_csv(&sys), &out, "structure constants")?;
        }
        ExportKind::Factors { kind, i_set, out } => {
            let (k, r) = textfmt::parse_type(&kind)?;
            let sys = build_root_system(k, r)?;
            let i = textfmt::parse_simple_set(&i_set, r)?;
            if i.len() == r {
                return Err(Error::config(
                    "hypothesis violated: I must be a proper subset of the simple roots",
                ));
            }
            let pd = sys.parabolic_data(&i)?;
            let fac = r_factorization(&sys, &pd)?;
            let body = serde_json::to_string_pretty(&fac)
                .map_err(|e| Error::config(format!("cannot serialize factors: {e}")))?;
            emit(&(body + "\n"), &out, "factor forms")?;
        }
        ExportKind::Module {
            sys,
            lambda,
            dump_dir,
            oracle,
        } => {
            let s = sys.build()?;
            let lam = s.parse_lambda(&lambda)?;
            let ctx = s.context()?;
            lam.compatible(&ctx)?;
            let opts = oracle.opts();
            let (_, z) = build_z(&ctx, &s.pd, &lam, &opts)?;
            fs::create_dir_all(&dump_dir)
                .map_err(|e| Error::config(format!("cannot create {}: {e}", dump_dir.display())))?;
            for (g, m) in &z.action {
                let label = g.render(&s.sys);
                let fname = format!("{}.mtx", label.replace('[', "_").replace(']', ""));
                let mut buf = Vec::new();
                write_matrix_dump(&mut buf, &label, m)
                    .map_err(|e| Error::config(format!("cannot format {label}: {e}")))?;
                let path = dump_dir.join(fname);
                fs::write(&path, buf)
                    .map_err(|e| Error::config(format!("cannot write {}: {e}", path.display())))?;
            }
            println!(
                "wrote {} matrices of dimension {} to {}",
                z.action.len(),
                z.dim,
                dump_dir.display()
            );
        }
    }
    Ok(0)
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Falsified(_) => 1,
        Error::Config(_) | Error::Domain(_) => 2,
        Error::Resource(_) => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Cmd::Decide(a) => cmd_decide(a),
        Cmd::Scan(a) => cmd_scan(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Export(a) => cmd_export(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
